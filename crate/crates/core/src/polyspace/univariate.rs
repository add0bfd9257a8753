//! Dense univariate polynomials over a [`FieldSpec`], used for resultants and
//! root finding.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalars::{FieldElement, FieldSpec};

const SPLIT_SEED: u64 = 0x7e57_5917_0000_0001;
const ENUMERATION_LIMIT: u64 = 64;

/// Coefficients are stored lowest degree first with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    field: FieldSpec,
    coeffs: Vec<FieldElement>,
}

impl UniPoly {
    pub fn new(field: FieldSpec, coeffs: Vec<FieldElement>) -> Self {
        let mut p = UniPoly { field, coeffs };
        p.trim();
        p
    }

    pub fn from_i64(field: FieldSpec, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: FieldSpec) -> Self {
        UniPoly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::new(c.spec(), vec![c])
    }

    /// `x - r`
    pub fn linear_root(r: &FieldElement) -> Self {
        let f = r.spec();
        Self::new(f, vec![-r, f.one()])
    }

    pub fn x(field: FieldSpec) -> Self {
        Self::new(field, vec![field.zero(), field.one()])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(FieldElement::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(self.field, (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(self.field, (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(self.field, out)
    }

    pub fn scale(&self, c: &FieldElement) -> UniPoly {
        Self::new(self.field, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn neg(&self) -> UniPoly {
        Self::new(self.field, self.coeffs.iter().map(|x| -x).collect())
    }

    pub fn derivative(&self) -> UniPoly {
        Self::new(
            self.field,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &self.field.from_u64(i as u64))
                .collect(),
        )
    }

    /// Quotient and remainder; errors on a zero divisor.
    pub fn divrem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = d.coeffs[dd].inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(self.field), self.clone()));
        }
        let mut quot = vec![self.field.zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * dc);
            }
            quot[k] = c;
        }
        Ok((Self::new(self.field, quot), Self::new(self.field, rem)))
    }

    /// Division known to be exact.
    pub fn exact_div(&self, d: &UniPoly) -> Result<UniPoly> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::InvariantViolation("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            Some(l) => self.scale(&l.inv().expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        a.monic()
    }

    fn powmod(&self, mut e: u128, m: &UniPoly) -> UniPoly {
        let mut base = self.divrem(m).expect("nonzero modulus").1;
        let mut acc = Self::constant(self.field.one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).divrem(m).expect("nonzero modulus").1;
            }
            base = base.mul(&base).divrem(m).expect("nonzero modulus").1;
            e >>= 1;
        }
        acc
    }

    /// Divides out `x - r` as often as possible; returns the multiplicity.
    pub fn strip_root(&mut self, r: &FieldElement) -> usize {
        let lin = Self::linear_root(r);
        let mut m = 0;
        while !self.is_zero() {
            let (q, rem) = self.divrem(&lin).expect("linear divisor");
            if !rem.is_zero() {
                break;
            }
            *self = q;
            m += 1;
        }
        m
    }

    /// Distinct roots in the base field with multiplicities.
    ///
    /// Over F_p this is complete. Over Q the rational roots are found only for
    /// polynomials of degree at most two; higher degree is an error.
    pub fn roots(&self) -> Result<Vec<(FieldElement, usize)>> {
        if self.is_zero() {
            return Err(Error::InvalidInput("roots of the zero polynomial".into()));
        }
        let distinct = match self.field.modulus() {
            Some(p) => self.distinct_roots_mod_p(p),
            None => self.rational_roots()?,
        };
        let mut rest = self.clone();
        let mut out = Vec::with_capacity(distinct.len());
        for r in distinct {
            let m = rest.strip_root(&r);
            debug_assert!(m > 0);
            out.push((r, m));
        }
        Ok(out)
    }

    fn rational_roots(&self) -> Result<Vec<FieldElement>> {
        let f = self.field;
        match self.degree() {
            Some(0) => Ok(Vec::new()),
            Some(1) => Ok(vec![-(&self.coeffs[0] * &self.coeffs[1].inv()?)]),
            Some(2) => {
                let (c, b, a) = (&self.coeffs[0], &self.coeffs[1], &self.coeffs[2]);
                let disc = &(b * b) - &(&(a * c) * &f.from_i64(4));
                let Some(s) = disc.sqrt() else {
                    return Ok(Vec::new());
                };
                let den = (a * &f.from_i64(2)).inv()?;
                let r1 = &(&(-b) + &s) * &den;
                let r2 = &(&(-b) - &s) * &den;
                Ok(if r1 == r2 { vec![r1] } else { vec![r1, r2] })
            }
            _ => Err(Error::InvalidInput(
                "rational root finding is limited to degree two".into(),
            )),
        }
    }

    fn distinct_roots_mod_p(&self, p: u64) -> Vec<FieldElement> {
        let f = self.field;
        if p <= ENUMERATION_LIMIT {
            return (0..p)
                .map(|v| f.from_u64(v))
                .filter(|x| self.eval(x).is_zero())
                .collect();
        }
        // product of the distinct linear factors: gcd(self, x^p - x)
        let m = self.monic();
        if m.degree() == Some(0) {
            return Vec::new();
        }
        let xp = Self::x(f).powmod(p as u128, &m);
        let split = m.gcd(&xp.sub(&Self::x(f)));
        let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
        let mut roots = Vec::new();
        let mut stack = vec![split];
        while let Some(g) = stack.pop() {
            match g.degree() {
                None | Some(0) => {}
                Some(1) => roots.push(-&g.coeffs[0]),
                Some(_) => loop {
                    // equal-degree splitting with a random shift
                    let a = f.random_element(&mut rng);
                    let shifted = Self::new(f, vec![a, f.one()]);
                    let h = shifted
                        .powmod(((p - 1) / 2) as u128, &g)
                        .sub(&Self::constant(f.one()));
                    let d = g.gcd(&h);
                    let dd = d.degree().unwrap_or(0);
                    if dd > 0 && Some(dd) < g.degree() {
                        let other = g.exact_div(&d).expect("gcd divides");
                        stack.push(d);
                        stack.push(other);
                        break;
                    }
                },
            }
        }
        roots.sort_by_key(|r| r.residue());
        roots
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}
