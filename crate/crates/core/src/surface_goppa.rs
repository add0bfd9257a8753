//! Dual linear series on plane complete intersections and the factorizations
//! of eight points in `P^4` and seven points in `P^3` through blown-up planes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactla::{Matrix, Subspace};
use crate::gale::{gale_certificate, gale_transform, projective_transport, DualCertificate, PointConfig};
use crate::plane_curves::{
    cubic_pencil_ninth, gen_cubic_pencil_base, random_point, two_excess_points, veronese_p1, ExcessPair, PencilNinth,
};
use crate::polyspace::{evaluate, evaluation_matrix, linear_substitution, vanishing_system, BasePointSpec, HomogPoly, MonomialBasis};
use crate::scalars::FieldSpec;

/// Degree of the dual series: `d1 + d2 - d - 3`.
pub fn dual_degree(d: i64, d1: i64, d2: i64) -> i64 {
    d1 + d2 - d - 3
}

/// `gamma = d1 d2` distinct points cut out by two plane curves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CiInstance {
    pub d1: usize,
    pub d2: usize,
    pub f: HomogPoly,
    pub g: HomogPoly,
    pub points: PointConfig,
}

impl CiInstance {
    pub fn new(f: HomogPoly, g: HomogPoly, points: PointConfig) -> Result<Self> {
        if points.dim() != 2 || f.n_vars() != 3 || g.n_vars() != 3 {
            return Err(Error::InvalidInput("complete intersections live in the plane".into()));
        }
        let (d1, d2) = (f.degree(), g.degree());
        if points.len() != d1 * d2 {
            return Err(Error::DimensionMismatch {
                expected: d1 * d2,
                found: points.len(),
            });
        }
        for p in points.points() {
            if !evaluate(&f, &p)?.is_zero() || !evaluate(&g, &p)?.is_zero() {
                return Err(Error::NotOnCurve);
            }
        }
        let normalized = points.normalized().points();
        for i in 0..normalized.len() {
            if normalized[..i].contains(&normalized[i]) {
                return Err(Error::InvalidInput("complete intersection points must be distinct".into()));
            }
        }
        Ok(CiInstance { d1, d2, f, g, points })
    }
}

/// Forms of degree `d` vanishing on every point.
pub fn restriction_kernel(points: &PointConfig, d: usize) -> Result<Subspace> {
    Ok(evaluation_matrix(d, points)?.kernel())
}

/// Values of a basis of `w` at the points, one row per point.
pub fn restrict_series(points: &PointConfig, d: usize, w: &Subspace) -> Result<PointConfig> {
    PointConfig::new(evaluation_matrix(d, points)?.mul(w.basis())?)
}

fn certificate(a: &PointConfig, b: &PointConfig, what: &str) -> Result<DualCertificate> {
    gale_certificate(a, b).map_err(|e| match e {
        Error::NotGaleDual { .. } | Error::CertificateSearchExhausted { .. } => {
            Error::CertificateNotFound(format!("{what}: {e}"))
        }
        e => e,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoppaDual {
    pub dual_degree: usize,
    pub w: Subspace,
    pub wperp: Subspace,
    /// Kernel of the restriction in the dual degree.
    pub kernel: Subspace,
    pub certificate: DualCertificate,
}

/// The dual series of `w` (degree `d` forms) on a complete intersection.
pub fn ci_goppa_dual(ci: &CiInstance, d: usize, w: &Subspace) -> Result<GoppaDual> {
    let dd = dual_degree(d as i64, ci.d1 as i64, ci.d2 as i64);
    if dd < 0 {
        return Err(Error::NegativeDualDegree(dd));
    }
    let dd = dd as usize;
    let ambient = MonomialBasis::new(3, d).count();
    if w.ambient_dim() != ambient {
        return Err(Error::DimensionMismatch {
            expected: ambient,
            found: w.ambient_dim(),
        });
    }
    let k = restriction_kernel(&ci.points, d)?;
    if w.dim() + k.dim() != ambient || w.sum(&k)?.dim() != ambient {
        return Err(Error::WNotComplementary);
    }
    let kernel = restriction_kernel(&ci.points, dd)?;
    let wperp = kernel.complement();
    if w.dim() + wperp.dim() != ci.points.len() {
        return Err(Error::CertificateNotFound(format!(
            "dimension law fails: {} + {} != {}",
            w.dim(),
            wperp.dim(),
            ci.points.len()
        )));
    }
    let a = restrict_series(&ci.points, d, w)?;
    let b = restrict_series(&ci.points, dd, &wperp)?;
    let certificate = certificate(&a, &b, "dual series")?;
    Ok(GoppaDual {
        dual_degree: dd,
        w: w.clone(),
        wperp,
        kernel,
        certificate,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VeroneseCertificate {
    /// Degree-two Veronese images of the points in `P^5`.
    pub images: PointConfig,
    pub certificate: DualCertificate,
}

/// Certifies nine plane points against their degree-two Veronese images.
pub fn veronese_certificate(points: &PointConfig) -> Result<VeroneseCertificate> {
    if points.dim() != 2 || points.len() != 9 {
        return Err(Error::InvalidInput("expected nine points of P^2".into()));
    }
    let images = PointConfig::new(evaluation_matrix(2, points)?)?;
    let certificate = certificate(points, &images, "Veronese images")?;
    Ok(VeroneseCertificate { images, certificate })
}

pub fn veronese_from_ci33(ci: &CiInstance) -> Result<VeroneseCertificate> {
    if ci.d1 != 3 || ci.d2 != 3 {
        return Err(Error::InvalidInput("expected a complete intersection of two cubics".into()));
    }
    veronese_certificate(&ci.points)
}

/// Seeded `(3,3)` instance from [`gen_cubic_pencil_base`].
pub fn gen_ci33(field: FieldSpec, seed: u64) -> Result<CiInstance> {
    let base = gen_cubic_pencil_base(field, seed)?;
    CiInstance::new(base.f, base.g, base.points)
}

/// Seeded `(2,d)` instance: `2d` points on a smooth conic and a degree-`d`
/// curve through them that does not contain the conic.
pub fn gen_ci_conic(field: FieldSpec, d: usize, seed: u64) -> Result<CiInstance> {
    if d == 0 {
        return Err(Error::InvalidInput("degree must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = 100;
    for _ in 0..budget {
        let m = loop {
            let rows: Vec<Vec<_>> = (0..3).map(|_| random_point(field, 3, &mut rng)).collect();
            let m = Matrix::from_rows(field, 3, rows)?;
            if m.rank() == 3 {
                break m;
            }
        };
        let mut params = Vec::with_capacity(2 * d);
        let mut tries = 0;
        while params.len() < 2 * d && tries < 100 * d {
            tries += 1;
            let t = random_point(field, 2, &mut rng);
            let t = crate::exactla::normalize(&t);
            if !params.contains(&t) {
                params.push(t);
            }
        }
        if params.len() < 2 * d {
            return Err(Error::FieldTooSmall);
        }
        let pts = params
            .iter()
            .map(|t| m.mul_vec(&veronese_p1(2, t)?))
            .collect::<Result<Vec<_>>>()?;
        let points = PointConfig::from_points(field, pts)?;
        // x0 x2 - x1^2 pulled back along x -> M^{-1} x
        let c = HomogPoly::from_i64_terms(field, 3, 2, &[(1, &[1, 0, 1]), (-1, &[0, 2, 0])])?;
        let f = linear_substitution(&c, &m.inverse()?)?;
        let system = vanishing_system(field, 3, d, &BasePointSpec::simple(&points))?;
        let gens = HomogPoly::from_subspace(field, 3, d, &system)?;
        for _ in 0..20 {
            let mut g = HomogPoly::zero(field, 3, d);
            for h in &gens {
                let c = if field.is_rational() {
                    field.from_i64(rng.gen_range(-9..=9))
                } else {
                    field.random_element(&mut rng)
                };
                g = g.add(&h.scale(&c))?;
            }
            if !g.is_zero() && crate::polyspace::divides(&f, &g)?.is_none() {
                return CiInstance::new(f, g, points);
            }
        }
    }
    Err(Error::RetryBudgetExhausted(budget))
}

/// A factorization of a configuration in `P^s` through a blown-up plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupFactorization {
    /// Gale transform of the input, in `P^2`.
    pub gale: PointConfig,
    /// The blown-up points (all simple).
    pub excess: Vec<BasePointSpec>,
    /// Conics through the excess points.
    pub system: Subspace,
    /// The plane points mapped by `system`, in `P^s`.
    pub images: PointConfig,
    pub target_dim: usize,
    pub certificate: DualCertificate,
    /// `M` with `M images_i ~ input_i`.
    pub transport: Matrix,
    pub transport_solution_dim: usize,
    pub pencil: Option<PencilNinth>,
    pub excess_pair: Option<ExcessPair>,
}

fn factor_through_conics(
    input: &PointConfig,
    gale: PointConfig,
    excess: Vec<BasePointSpec>,
) -> Result<(Subspace, PointConfig, DualCertificate, Matrix, usize)> {
    let s = input.dim();
    let system = vanishing_system(input.field(), 3, 2, &excess)?;
    if system.dim() != s + 1 {
        return Err(Error::SystemDimWrong {
            expected: s + 1,
            found: system.dim(),
        });
    }
    let images = restrict_series(&gale, 2, &system)?;
    let cert = certificate(&gale, &images, "conic images")?;
    let transport = projective_transport(&images, input)?;
    let m = transport.unique_matrix()?.clone();
    Ok((system, images, cert, m, transport.solution_dim))
}

pub fn eight_points_p4(points: &PointConfig) -> Result<BlowupFactorization> {
    if points.dim() != 4 || points.len() != 8 {
        return Err(Error::InvalidInput("expected eight points of P^4".into()));
    }
    let gale = gale_transform(points)?;
    let pencil = cubic_pencil_ninth(&gale)?;
    let excess = vec![BasePointSpec::new(pencil.ninth.clone(), 1)?];
    let (system, images, certificate, transport, dim) = factor_through_conics(points, gale.clone(), excess.clone())?;
    Ok(BlowupFactorization {
        gale,
        excess,
        system,
        images,
        target_dim: 4,
        certificate,
        transport,
        transport_solution_dim: dim,
        pencil: Some(pencil),
        excess_pair: None,
    })
}

pub fn seven_points_p3(points: &PointConfig, pair: Option<(usize, usize)>) -> Result<BlowupFactorization> {
    if points.dim() != 3 || points.len() != 7 {
        return Err(Error::InvalidInput("expected seven points of P^3".into()));
    }
    let gale = gale_transform(points)?;
    let ex = two_excess_points(&gale, pair)?;
    let excess = ex
        .points
        .iter()
        .map(|p| BasePointSpec::new(p.clone(), 1))
        .collect::<Result<Vec<_>>>()?;
    let (system, images, certificate, transport, dim) = factor_through_conics(points, gale.clone(), excess.clone())?;
    Ok(BlowupFactorization {
        gale,
        excess,
        system,
        images,
        target_dim: 3,
        certificate,
        transport,
        transport_solution_dim: dim,
        pencil: None,
        excess_pair: Some(ex),
    })
}

/// `(d-2)(d-3)(2d-3)/2`, checked against the Grassmannian `G(2d-3, d(d-1)/2)`.
pub fn family_dim(d: u64) -> Result<u64> {
    if d < 3 {
        return Err(Error::InvalidInput("family dimension needs d >= 3".into()));
    }
    let formula = (d - 2) * (d - 3) * (2 * d - 3) / 2;
    let k = 2 * d - 3;
    let n = d * (d - 1) / 2;
    let grassmannian = k * (n - k);
    if formula != grassmannian {
        return Err(Error::InvariantViolation(format!(
            "family dimension {formula} differs from Grassmannian dimension {grassmannian}"
        )));
    }
    Ok(formula)
}

/// Dimension of the plane curves of degree `d` with the given base points.
pub fn blowup_h0(field: FieldSpec, d: usize, base: &[BasePointSpec]) -> Result<usize> {
    Ok(vanishing_system(field, 3, d, base)?.dim())
}
