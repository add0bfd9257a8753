//! Curves through point configurations: the conic through five points, rational
//! normal curves via the Gale transform, cubic pencils and their residual
//! points, and seeded generators of general configurations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactla::{Matrix, Subspace};
use crate::gale::{gale_transform, is_nondegenerate, projective_transport, PointConfig};
use crate::polyspace::{evaluation_matrix, plane_curve_intersection, vanishing_system, BasePointSpec, HomogPoly, MonomialBasis};
use crate::scalars::{FieldElement, FieldSpec, RATIONAL_SAMPLE_BOUND};

/// Resampling budget of [`gen_general_points`].
pub const GENERAL_POINTS_BUDGET: usize = 1000;
/// Retry budget of [`gen_cubic_pencil_base`].
pub const PENCIL_BASE_BUDGET: usize = 200;
const FULL_SUBSET_CHECK: usize = 12;
const RANDOM_SUBSETS: usize = 200;

pub fn conic_through_five(points: &PointConfig) -> Result<HomogPoly> {
    if points.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: points.dim(),
        });
    }
    if points.len() != 5 {
        return Err(Error::DimensionMismatch {
            expected: 5,
            found: points.len(),
        });
    }
    let kernel = evaluation_matrix(2, points)?.kernel();
    if kernel.dim() != 1 {
        return Err(Error::NotUnique(kernel.dim()));
    }
    Ok(HomogPoly::from_subspace(points.field(), 3, 2, &kernel)?.remove(0).normalized())
}

/// The rational normal curve `t -> M v_s(t)` through `s + 3` points of `P^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RncParam {
    pub s: usize,
    pub matrix: Matrix,
    /// Parameters of the input points, `[1:t]` or `[0:1]`.
    pub source_points: PointConfig,
    pub transport_solution_dim: usize,
}

/// Veronese coordinates of a point of `P^1` in the graded-lex basis `s^d, s^(d-1) t, ..., t^d`.
pub fn veronese_p1(d: usize, t: &[FieldElement]) -> Result<Vec<FieldElement>> {
    MonomialBasis::new(2, d).evaluate_all(t)
}

pub fn rnc_through(points: &PointConfig) -> Result<RncParam> {
    let s = points.dim();
    if points.len() != s + 3 {
        return Err(Error::DimensionMismatch {
            expected: s + 3,
            found: points.len(),
        });
    }
    let q = gale_transform(points)?.normalized();
    for i in 0..q.len() {
        for j in 0..i {
            if q.point(i) == q.point(j) {
                return Err(Error::CoincidentGalePoints(j, i));
            }
        }
    }
    let v = PointConfig::new(evaluation_matrix(s, &q)?)?;
    let transport = projective_transport(&v, points)?;
    let matrix = transport.unique_matrix()?.clone();
    if matrix.rank() != s + 1 {
        return Err(Error::InvariantViolation("curve parametrization is not invertible".into()));
    }
    Ok(RncParam {
        s,
        matrix,
        source_points: q,
        transport_solution_dim: transport.solution_dim,
    })
}

pub fn rnc_eval(param: &RncParam, t: &[FieldElement]) -> Result<Vec<FieldElement>> {
    param.matrix.mul_vec(&veronese_p1(param.s, t)?)
}

/// A pencil of cubics through eight points and its ninth base point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilNinth {
    pub ninth: Vec<FieldElement>,
    pub pencil: Subspace,
    pub generators: [HomogPoly; 2],
}

fn require_plane(points: &PointConfig, count: usize) -> Result<()> {
    if points.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: points.dim(),
        });
    }
    if points.len() != count {
        return Err(Error::DimensionMismatch {
            expected: count,
            found: points.len(),
        });
    }
    Ok(())
}

fn cubics_through(points: &PointConfig, expected: usize) -> Result<(Subspace, Vec<HomogPoly>)> {
    let field = points.field();
    let system = vanishing_system(field, 3, 3, &BasePointSpec::simple(points))?;
    if system.dim() != expected {
        return Err(Error::PencilDimWrong(system.dim(), expected));
    }
    let polys = HomogPoly::from_subspace(field, 3, 3, &system)?;
    Ok((system, polys))
}

pub fn cubic_pencil_ninth(points: &PointConfig) -> Result<PencilNinth> {
    require_plane(points, 8)?;
    let (pencil, gens) = cubics_through(points, 2)?;
    let found = match plane_curve_intersection(&gens[0], &gens[1], &points.points()) {
        Err(Error::NonRationalExcess) => {
            return Err(Error::InvariantViolation("ninth base point of a pencil is not rational".into()))
        }
        r => r?,
    };
    if found.len() != 1 {
        return Err(Error::InvariantViolation(format!("expected one residual point, found {}", found.len())));
    }
    Ok(PencilNinth {
        ninth: found[0].clone(),
        pencil,
        generators: [gens[0].clone(), gens[1].clone()],
    })
}

/// The two residual points of two cubics through seven points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcessPair {
    pub points: [Vec<FieldElement>; 2],
    pub cubics: [HomogPoly; 2],
    pub pair: (usize, usize),
    /// All cubics through the seven points (dimension 3).
    pub net: Subspace,
}

/// Number of net members addressable by [`two_excess_points`].
pub const NET_MEMBERS: usize = 16;

/// `sum_j (k+1)^j basis_j`: members on a conic of the net, so any two span a
/// different pencil. The reduced kernel basis itself is adapted to the
/// coordinate frame and its members tend to contain lines.
fn net_member(basis: &[HomogPoly], k: usize) -> Result<HomogPoly> {
    let node = basis[0].field().from_u64(k as u64 + 1);
    let mut acc = basis[0].clone();
    for (j, b) in basis.iter().enumerate().skip(1) {
        acc = acc.add(&b.scale(&node.pow(j as u64)))?;
    }
    Ok(acc)
}

/// Intersects net members `pair` (default `(0, 1)`); indices are below
/// [`NET_MEMBERS`] and, over `F_p`, below `p - 1`.
pub fn two_excess_points(points: &PointConfig, pair: Option<(usize, usize)>) -> Result<ExcessPair> {
    require_plane(points, 7)?;
    let (i, j) = pair.unwrap_or((0, 1));
    let limit = points.field().modulus().map_or(NET_MEMBERS, |p| NET_MEMBERS.min(p as usize - 1));
    if i == j || i >= limit || j >= limit {
        return Err(Error::InvalidInput(format!("cubic pair ({i},{j}) must be two distinct indices below {limit}")));
    }
    let (net, basis) = cubics_through(points, 3)?;
    let gens = [net_member(&basis, i)?, net_member(&basis, j)?];
    let found = plane_curve_intersection(&gens[0], &gens[1], &points.points())?;
    if found.len() != 2 {
        return Err(Error::InvariantViolation(format!("expected two residual points, found {}", found.len())));
    }
    Ok(ExcessPair {
        points: [found[0].clone(), found[1].clone()],
        cubics: gens,
        pair: (i, j),
        net,
    })
}

pub(crate) fn random_point<R: Rng>(field: FieldSpec, n: usize, rng: &mut R) -> Vec<FieldElement> {
    loop {
        let p: Vec<FieldElement> = (0..n)
            .map(|_| {
                if field.is_rational() {
                    field.from_i64(rng.gen_range(-RATIONAL_SAMPLE_BOUND..=RATIONAL_SAMPLE_BOUND))
                } else {
                    field.random_element(rng)
                }
            })
            .collect();
        if p.iter().any(|x| !x.is_zero()) {
            return p;
        }
    }
}

fn next_subset(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Every `(r+1)`-subset spans `P^r` (all subsets for small `gamma`, a seeded sample otherwise).
fn subsets_independent<R: Rng>(c: &PointConfig, rng: &mut R) -> bool {
    let k = c.dim() + 1;
    let n = c.len();
    if k > n {
        return false;
    }
    if n <= FULL_SUBSET_CHECK {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            if c.matrix().select_rows(&idx).rank() < k {
                return false;
            }
            if !next_subset(&mut idx, n) {
                return true;
            }
        }
    }
    (0..RANDOM_SUBSETS).all(|_| {
        let idx = rand::seq::index::sample(rng, n, k).into_vec();
        c.matrix().select_rows(&idx).rank() == k
    })
}

fn pairwise_distinct(c: &PointConfig) -> bool {
    let pts: Vec<_> = c.normalized().points();
    (0..pts.len()).all(|i| (0..i).all(|j| pts[i] != pts[j]))
}

/// Seeded points of `P^r` in general linear position with a nondegenerate
/// Gale transform (when `gamma >= r + 2`).
pub fn gen_general_points(field: FieldSpec, gamma: usize, r: usize, seed: u64) -> Result<PointConfig> {
    if gamma == 0 {
        return Err(Error::InvalidInput("gamma must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..GENERAL_POINTS_BUDGET {
        let pts = (0..gamma).map(|_| random_point(field, r + 1, &mut rng)).collect();
        let c = PointConfig::from_points(field, pts)?;
        if gamma > r && !is_nondegenerate(&c) {
            continue;
        }
        if r >= 1 && !pairwise_distinct(&c) {
            continue;
        }
        if !subsets_independent(&c, &mut rng) {
            continue;
        }
        if gamma >= r + 2 {
            match gale_transform(&c) {
                Ok(g) if is_nondegenerate(&g) => {}
                _ => continue,
            }
        }
        return Ok(c);
    }
    Err(Error::FieldTooSmall)
}

/// Nine points cut out transversally by two cubics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilBase {
    pub points: PointConfig,
    pub f: HomogPoly,
    pub g: HomogPoly,
}

/// Eight seeded general points, the pencil of cubics through them and its ninth base point.
pub fn gen_cubic_pencil_base(field: FieldSpec, seed: u64) -> Result<PencilBase> {
    if let Some(p) = field.modulus() {
        if p < 11 {
            return Err(Error::UnsupportedCharacteristic(p));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..PENCIL_BASE_BUDGET {
        let eight = gen_general_points(field, 8, 2, rng.gen())?;
        let pencil = match cubic_pencil_ninth(&eight) {
            Ok(p) => p,
            Err(
                Error::PencilDimWrong(..)
                | Error::NonReducedIntersection
                | Error::CommonComponent
                | Error::DegenerateAfterRetries(_),
            ) => continue,
            Err(e) => return Err(e),
        };
        let mut pts = eight.points();
        pts.push(pencil.ninth.clone());
        let points = PointConfig::from_points(field, pts)?;
        let [f, g] = pencil.generators;
        return Ok(PencilBase { points, f, g });
    }
    Err(Error::RetryBudgetExhausted(PENCIL_BASE_BUDGET))
}
