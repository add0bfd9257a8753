use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{evaluate, linear_substitution, partial, HomogPoly, UniPoly};
use crate::error::{Error, Result};
use crate::exactla::{normalize, proportional, Matrix};
use crate::scalars::{FieldElement, FieldSpec};

/// Coordinate changes tried before giving up on generic position.
pub const MAX_COORDINATE_CHANGES: usize = 20;
const COORDINATE_SEED: u64 = 0x6a09_e667_f3bc_c908;
const RATIONAL_ENTRY_BOUND: i64 = 3;

/// The identity, followed by seeded pseudorandom invertible matrices.
pub fn coordinate_changes(field: FieldSpec, n: usize) -> impl Iterator<Item = Matrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(COORDINATE_SEED);
    let mut first = true;
    std::iter::from_fn(move || {
        if first {
            first = false;
            return Some(Matrix::identity(field, n));
        }
        loop {
            let entries = (0..n * n)
                .map(|_| {
                    if field.is_rational() {
                        use rand::Rng;
                        field.from_i64(rng.gen_range(-RATIONAL_ENTRY_BOUND..=RATIONAL_ENTRY_BOUND))
                    } else {
                        field.random_element(&mut rng)
                    }
                })
                .collect();
            let m = Matrix::new(field, n, n, entries).expect("square");
            if !m.determinant().expect("square").is_zero() {
                return Some(m);
            }
        }
    })
}

/// `f(x, y, 1)` as coefficients of powers of `y`, each a polynomial in `x`.
fn dehomogenize(f: &HomogPoly) -> Vec<UniPoly> {
    let field = f.field();
    let d = f.degree();
    let mut rows = vec![vec![field.zero(); d + 1]; d + 1];
    for (e, c) in f.terms() {
        rows[e[1] as usize][e[0] as usize] = c.clone();
    }
    let mut out: Vec<UniPoly> = rows.into_iter().map(|r| UniPoly::new(field, r)).collect();
    while out.len() > 1 && out.last().is_some_and(UniPoly::is_zero) {
        out.pop();
    }
    out
}

/// Fraction-free determinant over `F[x]`.
fn bareiss(mut m: Vec<Vec<UniPoly>>, field: FieldSpec) -> Result<UniPoly> {
    let n = m.len();
    if n == 0 {
        return Ok(UniPoly::constant(field.one()));
    }
    let mut sign = false;
    let mut prev = UniPoly::constant(field.one());
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Ok(UniPoly::zero(field));
            };
            m.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.exact_div(&prev)?;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if sign { det.neg() } else { det })
}

/// Resultant with respect to `y` of polynomials given by their `y`-coefficients.
pub(crate) fn resultant(a: &[UniPoly], b: &[UniPoly], field: FieldSpec) -> Result<UniPoly> {
    let da = a.len() - 1;
    let db = b.len() - 1;
    let n = da + db;
    let mut m = vec![vec![UniPoly::zero(field); n]; n];
    for i in 0..db {
        for (j, c) in a.iter().rev().enumerate() {
            m[i][i + j] = c.clone();
        }
    }
    for i in 0..da {
        for (j, c) in b.iter().rev().enumerate() {
            m[db + i][i + j] = c.clone();
        }
    }
    bareiss(m, field)
}

/// `Res_y(f(x, y, 1), g(x, y, 1))` for plane curves.
pub fn resultant_y(f: &HomogPoly, g: &HomogPoly) -> Result<UniPoly> {
    check_plane_pair(f, g)?;
    resultant(&dehomogenize(f), &dehomogenize(g), f.field())
}

fn check_plane_pair(f: &HomogPoly, g: &HomogPoly) -> Result<()> {
    for h in [f, g] {
        if h.n_vars() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                found: h.n_vars(),
            });
        }
    }
    if f.field() != g.field() {
        return Err(Error::FieldMismatch {
            expected: f.field().to_string(),
            found: g.field().to_string(),
        });
    }
    Ok(())
}

/// `h(x0, y, 1)` as a polynomial in `y`.
fn restrict_to_fiber(h: &HomogPoly, x0: &FieldElement) -> UniPoly {
    let field = h.field();
    let coeffs: Vec<FieldElement> = dehomogenize(h).iter().map(|c| c.eval(x0)).collect();
    UniPoly::new(field, coeffs)
}

fn gradients_proportional(f: &HomogPoly, g: &HomogPoly, p: &[FieldElement]) -> Result<bool> {
    let gf = (0..3)
        .map(|i| evaluate(&partial(f, i)?, p))
        .collect::<Result<Vec<_>>>()?;
    let gg = (0..3)
        .map(|i| evaluate(&partial(g, i)?, p))
        .collect::<Result<Vec<_>>>()?;
    if gf.iter().all(FieldElement::is_zero) || gg.iter().all(FieldElement::is_zero) {
        return Ok(true);
    }
    Ok(proportional(&gf, &gg))
}

enum Attempt {
    Done(Vec<Vec<FieldElement>>),
    Retry,
}

/// Intersection points of two plane curves other than `known`, each
/// normalized so its first nonzero coordinate is 1.
///
/// Over Q only a residual of degree at most two can be solved.
pub fn plane_curve_intersection(
    f: &HomogPoly,
    g: &HomogPoly,
    known: &[Vec<FieldElement>],
) -> Result<Vec<Vec<FieldElement>>> {
    check_plane_pair(f, g)?;
    if f.is_zero() || g.is_zero() || f.degree() == 0 || g.degree() == 0 {
        return Err(Error::InvalidInput("intersection needs two nonconstant curves".into()));
    }
    let known: Vec<Vec<FieldElement>> = known.iter().map(|p| normalize(p)).collect();
    for (i, p) in known.iter().enumerate() {
        if p.len() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, found: p.len() });
        }
        if p.iter().all(FieldElement::is_zero) {
            return Err(Error::InvalidInput("known point has all coordinates zero".into()));
        }
        if !evaluate(f, p)?.is_zero() || !evaluate(g, p)?.is_zero() {
            return Err(Error::NotOnCurve);
        }
        if known[..i].contains(p) {
            return Err(Error::InvalidInput("known points must be distinct".into()));
        }
    }
    for t in coordinate_changes(f.field(), 3).take(MAX_COORDINATE_CHANGES) {
        if let Attempt::Done(pts) = attempt(f, g, &known, &t)? {
            return Ok(pts);
        }
    }
    Err(Error::DegenerateAfterRetries(MAX_COORDINATE_CHANGES))
}

fn attempt(f: &HomogPoly, g: &HomogPoly, known: &[Vec<FieldElement>], t: &Matrix) -> Result<Attempt> {
    let field = f.field();
    let total = f.degree() * g.degree();
    let fp = linear_substitution(f, t)?;
    let gp = linear_substitution(g, t)?;
    let y_pt = vec![field.zero(), field.one(), field.zero()];
    if evaluate(&fp, &y_pt)?.is_zero() || evaluate(&gp, &y_pt)?.is_zero() {
        return Ok(Attempt::Retry);
    }
    let r = resultant_y(&fp, &gp)?;
    if r.is_zero() {
        return Err(Error::CommonComponent);
    }
    if r.degree() != Some(total) {
        return Ok(Attempt::Retry);
    }
    let t_inv = t.inverse()?;
    let mut known_affine = Vec::with_capacity(known.len());
    for p in known {
        let y = t_inv.mul_vec(p)?;
        if y[2].is_zero() {
            return Ok(Attempt::Retry);
        }
        let zi = y[2].inv()?;
        known_affine.push((&y[0] * &zi, &y[1] * &zi));
    }
    let mut q = r;
    for (x, _) in &known_affine {
        q = q.exact_div(&UniPoly::linear_root(x))?;
    }
    let residual = q.degree().expect("nonzero");
    if residual == 0 {
        return Ok(Attempt::Done(Vec::new()));
    }
    let roots = q.roots()?;
    if roots.iter().map(|(_, m)| m).sum::<usize>() < residual {
        return Err(Error::NonRationalExcess);
    }
    let mut found = Vec::with_capacity(residual);
    for (x, mult) in roots {
        let mut h = restrict_to_fiber(&fp, &x).gcd(&restrict_to_fiber(&gp, &x));
        let mut on_fiber = Vec::new();
        for (kx, ky) in &known_affine {
            if kx == &x {
                h = h.exact_div(&UniPoly::linear_root(ky)).unwrap_or(h);
                on_fiber.push(ky.clone());
            }
        }
        let new_roots = match h.degree() {
            Some(0) => Vec::new(),
            _ => match h.roots() {
                Ok(r) => r,
                Err(Error::InvalidInput(_)) => return Ok(Attempt::Retry),
                Err(e) => return Err(e),
            },
        };
        let new_ys: Vec<FieldElement> = new_roots
            .into_iter()
            .map(|(y, _)| y)
            .filter(|y| !on_fiber.contains(y))
            .collect();
        if new_ys.len() == mult {
            for y in new_ys {
                found.push(vec![x.clone(), y, field.one()]);
            }
            continue;
        }
        for y in new_ys.iter().chain(&on_fiber) {
            let p = vec![x.clone(), y.clone(), field.one()];
            if gradients_proportional(&fp, &gp, &p)? {
                return Err(Error::NonReducedIntersection);
            }
        }
        return Ok(Attempt::Retry);
    }
    let mapped = found
        .iter()
        .map(|y| Ok(normalize(&t.mul_vec(y)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Attempt::Done(mapped))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resultant_of_lines_and_conic() {
        let q = FieldSpec::rational();
        // y - x and y + x - 2 meet at x = 1
        let l1 = HomogPoly::from_i64_terms(q, 3, 1, &[(1, &[0, 1, 0]), (-1, &[1, 0, 0])]).unwrap();
        let l2 = HomogPoly::from_i64_terms(q, 3, 1, &[(1, &[0, 1, 0]), (1, &[1, 0, 0]), (-2, &[0, 0, 1])]).unwrap();
        let r = resultant_y(&l1, &l2).unwrap();
        assert_eq!(r.degree(), Some(1));
        assert!(r.eval(&q.one()).is_zero());
        // y - x^2 and y - 1: roots x = +-1
        let c = HomogPoly::from_i64_terms(q, 3, 2, &[(1, &[0, 1, 1]), (-1, &[2, 0, 0])]).unwrap();
        let l = HomogPoly::from_i64_terms(q, 3, 1, &[(1, &[0, 1, 0]), (-1, &[0, 0, 1])]).unwrap();
        let r = resultant_y(&c, &l).unwrap();
        assert_eq!(r.degree(), Some(2));
        assert!(r.eval(&q.one()).is_zero() && r.eval(&q.from_i64(-1)).is_zero());
    }

    #[test]
    fn line_meets_conic() {
        let q = FieldSpec::rational();
        let c = HomogPoly::from_i64_terms(q, 3, 2, &[(1, &[0, 1, 1]), (-1, &[2, 0, 0])]).unwrap();
        let l = HomogPoly::from_i64_terms(q, 3, 1, &[(1, &[0, 1, 0]), (-1, &[0, 0, 1])]).unwrap();
        let mut pts = plane_curve_intersection(&c, &l, &[]).unwrap();
        pts.sort_by_key(|p| p[1].to_string());
        let v = |a: i64, b: i64, c: i64| vec![q.from_i64(a), q.from_i64(b), q.from_i64(c)];
        assert_eq!(pts, vec![v(1, -1, -1), v(1, 1, 1)]);
        let known = vec![v(1, 1, 1)];
        assert_eq!(plane_curve_intersection(&c, &l, &known).unwrap(), vec![v(1, -1, -1)]);
    }

    #[test]
    fn tangent_line_is_not_reduced() {
        let q = FieldSpec::rational();
        let c = HomogPoly::from_i64_terms(q, 3, 2, &[(1, &[0, 1, 1]), (-1, &[2, 0, 0])]).unwrap();
        let l = HomogPoly::monomial(q, &[0, 1, 0]);
        assert_eq!(plane_curve_intersection(&c, &l, &[]), Err(Error::NonReducedIntersection));
    }

    #[test]
    fn identical_curves_share_a_component() {
        let f = FieldSpec::prime(7).unwrap();
        let c = HomogPoly::from_i64_terms(f, 3, 2, &[(1, &[0, 1, 1]), (-1, &[2, 0, 0]), (3, &[0, 2, 0])]).unwrap();
        assert_eq!(plane_curve_intersection(&c, &c, &[]), Err(Error::CommonComponent));
    }

    #[test]
    fn irrational_points_are_reported() {
        let q = FieldSpec::rational();
        let c = HomogPoly::from_i64_terms(q, 3, 2, &[(1, &[0, 1, 1]), (-1, &[2, 0, 0])]).unwrap();
        let l = HomogPoly::from_i64_terms(q, 3, 1, &[(1, &[0, 1, 0]), (-2, &[0, 0, 1])]).unwrap();
        assert_eq!(plane_curve_intersection(&c, &l, &[]), Err(Error::NonRationalExcess));
    }
}
