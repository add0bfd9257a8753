//! Exact scalars: arbitrary-precision rationals and prime-field residues.
//!
//! Every value is kept in canonical form (reduced fraction with positive
//! denominator, or a residue in `[0, p)`), so structural equality is field
//! equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Largest allowed prime modulus (exclusive).
pub const MAX_MODULUS: u64 = 1 << 63;

/// Random rationals are drawn as integers in `[-RATIONAL_SAMPLE_BOUND, RATIONAL_SAMPLE_BOUND]`.
pub const RATIONAL_SAMPLE_BOUND: i64 = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    Prime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Kind {
    Rational,
    Prime(u64),
}

/// The ambient field: `Q` or `F_p` for a verified prime `p < 2^63`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec(Kind);

impl FieldSpec {
    pub fn rational() -> Self {
        FieldSpec(Kind::Rational)
    }

    pub fn prime(p: u64) -> Result<Self> {
        if p >= MAX_MODULUS {
            return Err(Error::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec(Kind::Prime(p)))
    }

    pub fn make(kind: FieldKind, p: Option<u64>) -> Result<Self> {
        match (kind, p) {
            (FieldKind::Rational, _) => Ok(Self::rational()),
            (FieldKind::Prime, Some(p)) => Self::prime(p),
            (FieldKind::Prime, None) => Err(Error::InvalidInput("prime field needs a modulus".into())),
        }
    }

    pub fn kind(&self) -> FieldKind {
        match self.0 {
            Kind::Rational => FieldKind::Rational,
            Kind::Prime(_) => FieldKind::Prime,
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        match self.0 {
            Kind::Rational => None,
            Kind::Prime(p) => Some(p),
        }
    }

    /// 0 for `Q`.
    pub fn characteristic(&self) -> u64 {
        self.modulus().unwrap_or(0)
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.0, Kind::Rational)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_rational()
    }

    pub fn zero(&self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        match self.0 {
            Kind::Rational => FieldElement(Repr::Rational(BigRational::from_integer(n.into()))),
            Kind::Prime(p) => FieldElement(Repr::Residue {
                value: (n as i128).rem_euclid(p as i128) as u64,
                modulus: p,
            }),
        }
    }

    pub fn from_u64(&self, n: u64) -> FieldElement {
        match self.0 {
            Kind::Rational => FieldElement(Repr::Rational(BigRational::from_integer(n.into()))),
            Kind::Prime(p) => FieldElement(Repr::Residue {
                value: n % p,
                modulus: p,
            }),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElement {
        match self.0 {
            Kind::Rational => FieldElement(Repr::Rational(BigRational::from_integer(n.clone()))),
            Kind::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(p));
                FieldElement(Repr::Residue {
                    value: r.to_u64().expect("residue fits in u64"),
                    modulus: p,
                })
            }
        }
    }

    /// Embeds a rational; over `F_p` the denominator must be invertible.
    pub fn from_rational(&self, q: &BigRational) -> Result<FieldElement> {
        match self.0 {
            Kind::Rational => Ok(FieldElement(Repr::Rational(q.clone()))),
            Kind::Prime(_) => {
                let num = self.from_bigint(q.numer());
                let den = self.from_bigint(q.denom());
                Ok(&num * &den.inv()?)
            }
        }
    }

    /// Parses `-?[0-9]+` or `-?[0-9]+/[0-9]+` into this field.
    pub fn parse(&self, s: &str) -> Result<FieldElement> {
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (t, None),
        };
        let num = parse_int(s, num, true)?;
        let den = match den {
            Some(d) => parse_int(s, d, false)?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(Error::parse(s, "zero denominator"));
        }
        self.from_rational(&BigRational::new(num, den))
            .map_err(|_| Error::parse(s, "denominator not invertible in the field"))
    }

    /// Uniform residue over `F_p`; a small integer over `Q`.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        match self.0 {
            Kind::Rational => {
                self.from_i64(rng.gen_range(-RATIONAL_SAMPLE_BOUND..=RATIONAL_SAMPLE_BOUND))
            }
            Kind::Prime(p) => self.from_u64(rng.gen_range(0..p)),
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        loop {
            let x = self.random_element(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// All elements of `F_p` in increasing residue order; `None` over `Q`.
    pub fn elements(&self) -> Option<impl Iterator<Item = FieldElement> + '_> {
        let p = self.modulus()?;
        Some((0..p).map(move |v| self.from_u64(v)))
    }

    pub(crate) fn check(&self, x: &FieldElement) -> Result<()> {
        if x.spec() == *self {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                expected: self.to_string(),
                found: x.spec().to_string(),
            })
        }
    }
}

fn parse_int(whole: &str, s: &str, signed: bool) -> Result<BigInt> {
    let digits = if signed {
        s.strip_prefix('-').or_else(|| s.strip_prefix('+')).unwrap_or(s)
    } else {
        s
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(whole, "expected a decimal integer or a/b"));
    }
    BigInt::from_str(s.strip_prefix('+').unwrap_or(s)).map_err(|e| Error::parse(whole, e.to_string()))
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Kind::Rational => write!(f, "rational"),
            Kind::Prime(p) => write!(f, "prime:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `rational`, `Q`, or `prime:P`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "rational" | "Q" | "QQ" => Ok(Self::rational()),
            other => {
                let p = other
                    .strip_prefix("prime:")
                    .ok_or_else(|| Error::parse(s, "expected `rational` or `prime:P`"))?;
                let p: u64 = p.parse().map_err(|_| Error::parse(s, "bad modulus"))?;
                Self::prime(p)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

/// An element of `Q` or `F_p`, always canonical.
///
/// Binary operations on elements of different fields panic: matrices and
/// polynomials carry a single [`FieldSpec`] and check it at construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement(Repr);

impl FieldElement {
    pub fn spec(&self) -> FieldSpec {
        match self.0 {
            Repr::Rational(_) => FieldSpec(Kind::Rational),
            Repr::Residue { modulus, .. } => FieldSpec(Kind::Prime(modulus)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Rational(q) => q.is_zero(),
            Repr::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Rational(q) => q.is_one(),
            Repr::Residue { value, .. } => *value == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Rational(q) => Some(q),
            Repr::Residue { .. } => None,
        }
    }

    pub fn residue(&self) -> Option<u64> {
        match self.0 {
            Repr::Residue { value, .. } => Some(value),
            Repr::Rational(_) => None,
        }
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0 {
            Repr::Rational(q) => FieldElement(Repr::Rational(q.recip())),
            Repr::Residue { value, modulus } => FieldElement(Repr::Residue {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            }),
        })
    }

    pub fn checked_div(&self, rhs: &FieldElement) -> Result<FieldElement> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.spec().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// A square root in the field, if one exists. Over `F_p` the search is by
    /// enumeration (callers use it only for small moduli).
    pub fn sqrt(&self) -> Option<FieldElement> {
        match &self.0 {
            Repr::Rational(q) => {
                if q.is_negative() {
                    return None;
                }
                let n = q.numer().sqrt();
                let d = q.denom().sqrt();
                (&n * &n == *q.numer() && &d * &d == *q.denom())
                    .then(|| FieldElement(Repr::Rational(BigRational::new(n, d))))
            }
            Repr::Residue { value, modulus } => (0..*modulus)
                .find(|&x| mul_mod(x, x, *modulus) == *value)
                .map(|x| FieldElement(Repr::Residue {
                    value: x,
                    modulus: *modulus,
                })),
        }
    }

    fn assert_same(&self, rhs: &FieldElement) {
        assert_eq!(self.spec(), rhs.spec(), "field mismatch in scalar arithmetic");
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Repr::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Deterministic primality test for 64-bit integers: trial division by
/// everything below 1000, then Miller-Rabin with the first twelve prime bases.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for d in 2..1000u64 {
        if d * d > n {
            return true;
        }
        if n.is_multiple_of(d) {
            return n == d;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.assert_same(rhs);
        FieldElement(match (&self.0, &rhs.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Repr::Rational(a + b),
            (Repr::Residue { value: a, modulus }, Repr::Residue { value: b, .. }) => Repr::Residue {
                value: add_mod(*a, *b, *modulus),
                modulus: *modulus,
            },
            _ => unreachable!(),
        })
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.assert_same(rhs);
        FieldElement(match (&self.0, &rhs.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Repr::Rational(a * b),
            (Repr::Residue { value: a, modulus }, Repr::Residue { value: b, .. }) => Repr::Residue {
                value: mul_mod(*a, *b, *modulus),
                modulus: *modulus,
            },
            _ => unreachable!(),
        })
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement(match &self.0 {
            Repr::Rational(a) => Repr::Rational(-a),
            Repr::Residue { value, modulus } => Repr::Residue {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        })
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement { (&self).$m(rhs) }
        }
        impl<'a> $tr<FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement { self.$m(&rhs) }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

/// Sum of a sequence of elements of `field`.
pub fn sum<'a, I: IntoIterator<Item = &'a FieldElement>>(field: FieldSpec, items: I) -> FieldElement {
    items.into_iter().fold(field.zero(), |acc, x| &acc + x)
}
