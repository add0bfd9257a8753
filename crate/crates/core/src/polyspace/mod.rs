//! Homogeneous polynomials on projective space: monomial bases, evaluation
//! matrices, derivatives, linear systems with assigned base points, products
//! and plane curve intersection.

mod intersection;
mod univariate;

use std::fmt;
use std::sync::Arc;

pub use intersection::{coordinate_changes, plane_curve_intersection, resultant_y, MAX_COORDINATE_CHANGES};
pub use univariate::UniPoly;

use crate::error::{Error, Result};
use crate::exactla::{Matrix, Subspace};
use crate::gale::PointConfig;
use crate::scalars::{FieldElement, FieldSpec};

/// Monomials of a fixed degree, ordered graded-lexicographically with
/// `x0 > x1 > ...` (exponent vectors in decreasing lexicographic order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    n_vars: usize,
    degree: usize,
    exponents: Vec<Vec<u32>>,
}

impl MonomialBasis {
    pub fn new(n_vars: usize, degree: usize) -> Self {
        assert!(n_vars >= 1, "at least one variable");
        let mut exponents = Vec::new();
        let mut cur = vec![0u32; n_vars];
        fill(&mut exponents, &mut cur, 0, degree as u32);
        MonomialBasis {
            n_vars,
            degree,
            exponents,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn count(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[Vec<u32>] {
        &self.exponents
    }

    pub fn index_of(&self, e: &[u32]) -> Option<usize> {
        self.exponents.binary_search_by(|x| e.cmp(x)).ok()
    }

    /// Values of every monomial at `point`.
    pub fn evaluate_all(&self, point: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if point.len() != self.n_vars {
            return Err(Error::DimensionMismatch {
                expected: self.n_vars,
                found: point.len(),
            });
        }
        let powers = powers(point, self.degree);
        Ok(self.exponents.iter().map(|e| monomial_value(&powers, e)).collect())
    }
}

fn fill(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, i: usize, left: u32) {
    if i + 1 == cur.len() {
        cur[i] = left;
        out.push(cur.clone());
        return;
    }
    for k in (0..=left).rev() {
        cur[i] = k;
        fill(out, cur, i + 1, left - k);
    }
}

fn powers(point: &[FieldElement], d: usize) -> Vec<Vec<FieldElement>> {
    point
        .iter()
        .map(|x| {
            let mut v = Vec::with_capacity(d + 1);
            v.push(x.spec().one());
            for k in 0..d {
                v.push(&v[k] * x);
            }
            v
        })
        .collect()
}

fn monomial_value(powers: &[Vec<FieldElement>], e: &[u32]) -> FieldElement {
    let mut acc = powers[0][0].spec().one();
    for (p, &k) in powers.iter().zip(e) {
        if k > 0 {
            acc = &acc * &p[k as usize];
        }
    }
    acc
}

/// A homogeneous form, stored as coefficients against a [`MonomialBasis`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogPoly {
    field: FieldSpec,
    basis: Arc<MonomialBasis>,
    coeffs: Vec<FieldElement>,
}

impl HomogPoly {
    pub fn new(field: FieldSpec, n_vars: usize, degree: usize, coeffs: Vec<FieldElement>) -> Result<Self> {
        let basis = MonomialBasis::new(n_vars, degree);
        if coeffs.len() != basis.count() {
            return Err(Error::DimensionMismatch {
                expected: basis.count(),
                found: coeffs.len(),
            });
        }
        for c in &coeffs {
            field.check(c)?;
        }
        Ok(HomogPoly {
            field,
            basis: Arc::new(basis),
            coeffs,
        })
    }

    pub fn zero(field: FieldSpec, n_vars: usize, degree: usize) -> Self {
        let basis = MonomialBasis::new(n_vars, degree);
        let coeffs = vec![field.zero(); basis.count()];
        HomogPoly {
            field,
            basis: Arc::new(basis),
            coeffs,
        }
    }

    /// Sum of `c * x^e` over the given terms (repeated exponents accumulate).
    pub fn from_terms(field: FieldSpec, n_vars: usize, degree: usize, terms: &[(FieldElement, Vec<u32>)]) -> Result<Self> {
        let mut p = Self::zero(field, n_vars, degree);
        for (c, e) in terms {
            field.check(c)?;
            let i = p.basis.index_of(e).ok_or_else(|| {
                Error::InvalidInput(format!("exponent {e:?} is not a degree-{degree} monomial in {n_vars} variables"))
            })?;
            p.coeffs[i] = &p.coeffs[i] + c;
        }
        Ok(p)
    }

    pub fn from_i64_terms(field: FieldSpec, n_vars: usize, degree: usize, terms: &[(i64, &[u32])]) -> Result<Self> {
        let t: Vec<_> = terms.iter().map(|(c, e)| (field.from_i64(*c), e.to_vec())).collect();
        Self::from_terms(field, n_vars, degree, &t)
    }

    pub fn monomial(field: FieldSpec, e: &[u32]) -> Self {
        let degree = e.iter().sum::<u32>() as usize;
        Self::from_terms(field, e.len(), degree, &[(field.one(), e.to_vec())]).expect("valid monomial")
    }

    /// Linear form `sum c_i x_i`.
    pub fn linear(coeffs: &[FieldElement]) -> Result<Self> {
        let field = coeffs
            .first()
            .map(FieldElement::spec)
            .ok_or_else(|| Error::InvalidInput("empty linear form".into()))?;
        Self::new(field, coeffs.len(), 1, coeffs.to_vec())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn n_vars(&self) -> usize {
        self.basis.n_vars
    }

    pub fn degree(&self) -> usize {
        self.basis.degree
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, e: &[u32]) -> FieldElement {
        self.basis
            .index_of(e)
            .map_or_else(|| self.field.zero(), |i| self.coeffs[i].clone())
    }

    /// Nonzero terms in basis order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &FieldElement)> {
        self.basis
            .exponents
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElement::is_zero)
    }

    pub fn scale(&self, c: &FieldElement) -> HomogPoly {
        HomogPoly {
            field: self.field,
            basis: self.basis.clone(),
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    fn check_same_space(&self, other: &HomogPoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                expected: self.field.to_string(),
                found: other.field.to_string(),
            });
        }
        if self.basis != other.basis {
            return Err(Error::DimensionMismatch {
                expected: self.basis.count(),
                found: other.basis.count(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &HomogPoly) -> Result<HomogPoly> {
        self.check_same_space(other)?;
        Ok(HomogPoly {
            field: self.field,
            basis: self.basis.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &HomogPoly) -> Result<HomogPoly> {
        self.add(&other.scale(&-self.field.one()))
    }

    /// Scaled so the first nonzero coefficient (in basis order) is 1.
    pub fn normalized(&self) -> HomogPoly {
        HomogPoly {
            field: self.field,
            basis: self.basis.clone(),
            coeffs: crate::exactla::normalize(&self.coeffs),
        }
    }

    pub fn is_proportional(&self, other: &HomogPoly) -> bool {
        self.basis == other.basis && crate::exactla::proportional(&self.coeffs, &other.coeffs)
    }

    pub fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement> {
        evaluate(self, point)
    }

    pub fn gradient(&self) -> Result<Vec<HomogPoly>> {
        (0..self.n_vars()).map(|i| partial(self, i)).collect()
    }

    /// Polynomials spanning a subspace of coefficient vectors.
    pub fn from_subspace(field: FieldSpec, n_vars: usize, degree: usize, space: &Subspace) -> Result<Vec<HomogPoly>> {
        space
            .basis_vectors()
            .into_iter()
            .map(|v| Self::new(field, n_vars, degree, v))
            .collect()
    }
}

impl fmt::Display for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .terms()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                    .collect();
                if mono.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", mono.join("*"))
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// A point with an assigned vanishing multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasePointSpec {
    pub point: Vec<FieldElement>,
    pub multiplicity: usize,
}

impl BasePointSpec {
    pub fn new(point: Vec<FieldElement>, multiplicity: usize) -> Result<Self> {
        if point.iter().all(FieldElement::is_zero) {
            return Err(Error::InvalidInput("base point has all coordinates zero".into()));
        }
        if multiplicity == 0 {
            return Err(Error::InvalidInput("multiplicity must be at least 1".into()));
        }
        Ok(BasePointSpec { point, multiplicity })
    }

    pub fn simple(points: &PointConfig) -> Vec<BasePointSpec> {
        Self::with_multiplicity(points, 1)
    }

    pub fn with_multiplicity(points: &PointConfig, m: usize) -> Vec<BasePointSpec> {
        points
            .points()
            .into_iter()
            .map(|p| BasePointSpec::new(p, m).expect("config rows are nonzero"))
            .collect()
    }
}

pub fn evaluate(f: &HomogPoly, point: &[FieldElement]) -> Result<FieldElement> {
    let vals = f.basis.evaluate_all(point)?;
    Ok(f
        .coeffs
        .iter()
        .zip(&vals)
        .filter(|(c, _)| !c.is_zero())
        .fold(f.field.zero(), |acc, (c, v)| &acc + &(c * v)))
}

/// Row `i` holds every degree-`d` monomial evaluated at point `i`.
pub fn evaluation_matrix(d: usize, points: &PointConfig) -> Result<Matrix> {
    let basis = MonomialBasis::new(points.dim() + 1, d);
    let rows = points
        .points()
        .iter()
        .map(|p| basis.evaluate_all(p))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(points.field(), basis.count(), rows)
}

pub fn partial(f: &HomogPoly, var: usize) -> Result<HomogPoly> {
    if f.degree() == 0 {
        return Err(Error::InvalidInput("cannot differentiate a form of degree zero".into()));
    }
    if var >= f.n_vars() {
        return Err(Error::DimensionMismatch {
            expected: f.n_vars(),
            found: var,
        });
    }
    let mut out = HomogPoly::zero(f.field, f.n_vars(), f.degree() - 1);
    for (e, c) in f.terms() {
        if e[var] == 0 {
            continue;
        }
        let mut e2 = e.to_vec();
        e2[var] -= 1;
        let i = out.basis.index_of(&e2).expect("degree drops by one");
        out.coeffs[i] = &out.coeffs[i] + &(c * &f.field.from_u64(u64::from(e[var])));
    }
    Ok(out)
}

/// Coefficient vectors (against `MonomialBasis::new(n_vars, d)`) of the forms
/// whose partial derivatives of every order below `m_i` vanish at point `i`.
pub fn vanishing_system(field: FieldSpec, n_vars: usize, d: usize, base: &[BasePointSpec]) -> Result<Subspace> {
    let basis = MonomialBasis::new(n_vars, d);
    let mut rows = Vec::new();
    for bp in base {
        if bp.point.len() != n_vars {
            return Err(Error::DimensionMismatch {
                expected: n_vars,
                found: bp.point.len(),
            });
        }
        for c in &bp.point {
            field.check(c)?;
        }
        let pw = powers(&bp.point, d);
        for order in 0..bp.multiplicity {
            for alpha in MonomialBasis::new(n_vars, order).exponents {
                let row = basis
                    .exponents
                    .iter()
                    .map(|e| derivative_of_monomial(field, &pw, e, &alpha))
                    .collect();
                rows.push(row);
            }
        }
    }
    let m = Matrix::from_rows(field, basis.count(), rows)?;
    Ok(m.kernel())
}

/// `d^alpha x^e` evaluated at the point whose powers are given.
fn derivative_of_monomial(field: FieldSpec, pw: &[Vec<FieldElement>], e: &[u32], alpha: &[u32]) -> FieldElement {
    let mut acc = field.one();
    for i in 0..e.len() {
        if alpha[i] > e[i] {
            return field.zero();
        }
        for k in 0..alpha[i] {
            acc = &acc * &field.from_u64(u64::from(e[i] - k));
        }
        let rest = (e[i] - alpha[i]) as usize;
        if rest > 0 {
            acc = &acc * &pw[i][rest];
        }
    }
    acc
}

pub fn multiply(f: &HomogPoly, g: &HomogPoly) -> Result<HomogPoly> {
    if f.n_vars() != g.n_vars() {
        return Err(Error::DimensionMismatch {
            expected: f.n_vars(),
            found: g.n_vars(),
        });
    }
    if f.field != g.field {
        return Err(Error::FieldMismatch {
            expected: f.field.to_string(),
            found: g.field.to_string(),
        });
    }
    let mut out = HomogPoly::zero(f.field, f.n_vars(), f.degree() + g.degree());
    let mut e = vec![0u32; f.n_vars()];
    for (a, ca) in f.terms() {
        for (b, cb) in g.terms() {
            for i in 0..e.len() {
                e[i] = a[i] + b[i];
            }
            let i = out.basis.index_of(&e).expect("degrees add");
            out.coeffs[i] = &out.coeffs[i] + &(ca * cb);
        }
    }
    Ok(out)
}

/// `q` with `f * q = g`, found by solving for the coefficients of `q`.
pub fn divides(f: &HomogPoly, g: &HomogPoly) -> Result<Option<HomogPoly>> {
    if f.n_vars() != g.n_vars() {
        return Err(Error::DimensionMismatch {
            expected: f.n_vars(),
            found: g.n_vars(),
        });
    }
    if f.is_zero() || f.degree() > g.degree() {
        return Ok(None);
    }
    let qb = MonomialBasis::new(f.n_vars(), g.degree() - f.degree());
    let columns = qb
        .exponents
        .iter()
        .map(|e| Ok(multiply(f, &HomogPoly::monomial(f.field, e))?.coeffs))
        .collect::<Result<Vec<_>>>()?;
    let m = Matrix::from_columns(f.field, g.basis.count(), &columns)?;
    Ok(match m.solve(&g.coeffs)? {
        Some(x) => Some(HomogPoly::new(f.field, f.n_vars(), qb.degree, x)?),
        None => None,
    })
}

/// `f(T x)`: substitutes `x_i -> sum_j T[i][j] x_j`.
pub fn linear_substitution(f: &HomogPoly, t: &Matrix) -> Result<HomogPoly> {
    let n = f.n_vars();
    if t.rows() != n || t.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: t.rows(),
        });
    }
    let forms = (0..n)
        .map(|i| HomogPoly::linear(t.row(i)))
        .collect::<Result<Vec<_>>>()?;
    let one = HomogPoly::from_terms(f.field, n, 0, &[(f.field.one(), vec![0; n])])?;
    let mut form_powers: Vec<Vec<HomogPoly>> = Vec::with_capacity(n);
    for form in &forms {
        let mut v = vec![one.clone()];
        for k in 0..f.degree() {
            let next = multiply(&v[k], form)?;
            v.push(next);
        }
        form_powers.push(v);
    }
    let mut out = HomogPoly::zero(f.field, n, f.degree());
    for (e, c) in f.terms() {
        let mut term = one.clone();
        for i in 0..n {
            if e[i] > 0 {
                term = multiply(&term, &form_powers[i][e[i] as usize])?;
            }
        }
        out = out.add(&term.scale(c))?;
    }
    Ok(out)
}

/// Degree-`d` forms times a fixed form `f`: the image of `H^0(O(d)) * f` as
/// a subspace of degree `d + deg f` coefficient vectors.
pub fn multiples_of(f: &HomogPoly, d: usize) -> Result<Subspace> {
    let basis = MonomialBasis::new(f.n_vars(), d);
    let vecs = basis
        .exponents
        .iter()
        .map(|e| Ok(multiply(f, &HomogPoly::monomial(f.field, e))?.coeffs))
        .collect::<Result<Vec<_>>>()?;
    let ambient = MonomialBasis::new(f.n_vars(), d + f.degree()).count();
    Subspace::span(f.field, ambient, &vecs)
}
