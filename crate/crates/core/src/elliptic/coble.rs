use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand::seq::SliceRandom;

use super::{quintic_node_criterion, require_elliptic_field, CurvePoint, DivisorClass, NodeCriterion, PlaneCubic};
use crate::error::{Error, Result};
use crate::exactla::{proportional, Matrix, Subspace};
use crate::gale::{gale_certificate, gale_transform, projective_transport, DualCertificate, PointConfig};
use crate::plane_curves::{gen_general_points, random_point};
use crate::polyspace::{evaluate, evaluation_matrix, multiply, vanishing_system, BasePointSpec, HomogPoly, MonomialBasis};
use crate::scalars::{FieldElement, FieldSpec};

/// `(p, seed)` pairs for [`gen_coble_instance`] whose cubic has full rational
/// 2-torsion and a halvable target class.
pub const COBLE_FIXTURES: &[(u64, u64)] = &[(101, 18), (107, 34), (113, 5), (137, 20), (251, 5)];

/// Fewest sample points accepted when fitting or checking quadrics.
pub const MIN_SAMPLES: usize = 20;

/// One factorization of the nine points of `P^5` through a Veronese surface.
#[derive(Clone, Debug)]
pub struct VeroneseFactorization {
    pub class: DivisorClass,
    pub triple: [CurvePoint; 3],
    pub node_criterion: NodeCriterion,
    /// Quartics with nodes at the triple, as columns in degree-4 monomial coordinates.
    pub quartics: Subspace,
    pub images: PointConfig,
    pub certificate: DualCertificate,
    /// `M` with `M q(p_i) ~ gamma5_i`.
    pub transport: Matrix,
    /// Columns express the products of conics through the triple in the quartic basis.
    pub conic_change: Matrix,
    /// Quadrics vanishing on the image surface, in degree-2 monomial coordinates of `P^5`.
    pub quadrics: Subspace,
    pub samples: usize,
}

impl VeroneseFactorization {
    /// Image of `u` in `P^5`, or `None` where every quartic vanishes.
    pub fn map(&self, u: &[FieldElement]) -> Result<Option<Vec<FieldElement>>> {
        let vals = MonomialBasis::new(3, 4).evaluate_all(u)?;
        let q = self.quartics.basis().transpose().mul_vec(&vals)?;
        let z = self.transport.mul_vec(&q)?;
        Ok(if z.iter().all(FieldElement::is_zero) { None } else { Some(z) })
    }

    pub fn quadric_polys(&self) -> Result<Vec<HomogPoly>> {
        HomogPoly::from_subspace(self.quadrics.field(), 6, 2, &self.quadrics)
    }

    pub fn on_surface(&self, z: &[FieldElement]) -> Result<bool> {
        let vals = MonomialBasis::new(6, 2).evaluate_all(z)?;
        Ok(self.quadrics.basis().transpose().mul_vec(&vals)?.iter().all(FieldElement::is_zero))
    }
}

#[derive(Clone, Debug)]
pub struct CobleReport {
    pub gamma5: PointConfig,
    pub gale: PointConfig,
    pub cubic: PlaneCubic,
    pub gamma_points: Vec<CurvePoint>,
    /// `5H - Gamma` restricted to the cubic.
    pub target: DivisorClass,
    pub classes: Vec<DivisorClass>,
    pub factorizations: Vec<VeroneseFactorization>,
}

impl CobleReport {
    pub fn count(&self) -> usize {
        self.factorizations.len()
    }

    /// `true` when the quadric spaces of all factorizations are pairwise different.
    pub fn pairwise_distinct(&self) -> Result<bool> {
        for (i, a) in self.factorizations.iter().enumerate() {
            for b in &self.factorizations[i + 1..] {
                if a.quadrics.same_as(&b.quadrics)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Nine seeded general points of `P^5`.
pub fn gen_coble_instance(field: FieldSpec, seed: u64) -> Result<PointConfig> {
    require_elliptic_field(field)?;
    gen_general_points(field, 9, 5, seed)
}

fn unique_cubic(gale: &PointConfig) -> Result<HomogPoly> {
    let field = gale.field();
    let space = evaluation_matrix(3, gale)?.kernel();
    if space.dim() != 1 {
        return Err(Error::CubicNotUnique(space.dim()));
    }
    Ok(HomogPoly::from_subspace(field, 3, 3, &space)?.remove(0).normalized())
}

/// Builds the full report; fewer than four classes is not an error here.
pub fn coble_report(gamma5: &PointConfig, samples: usize, seed: u64) -> Result<CobleReport> {
    let field = gamma5.field();
    require_elliptic_field(field)?;
    if gamma5.len() != 9 || gamma5.dim() != 5 {
        return Err(Error::InvalidInput("expected nine points of P^5".into()));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            needed: MIN_SAMPLES,
            found: samples,
        });
    }
    let gale = gale_transform(gamma5)?;
    let f = unique_cubic(&gale)?;
    let cubic = PlaneCubic::new(f)?;
    let gamma_points = gale.points().iter().map(|p| cubic.point(p)).collect::<Result<Vec<_>>>()?;
    let five_h = cubic.hyperplane_multiple(5)?;
    let target = cubic.class_difference(&five_h, &cubic.abel_sum(&gamma_points)?)?;
    let classes = match cubic.square_roots(&target) {
        Ok(c) => c,
        Err(Error::NoSolution) => Vec::new(),
        Err(e) => return Err(e),
    };
    let mut factorizations = Vec::with_capacity(classes.len());
    for (k, class) in classes.iter().enumerate() {
        let triple = cubic.representative_triple(class, &gamma_points, seed.wrapping_add(k as u64))?;
        factorizations.push(factorization_for_triple(gamma5, &gale, &cubic, class, &triple, samples, seed)?);
    }
    Ok(CobleReport {
        gamma5: gamma5.clone(),
        gale,
        cubic,
        gamma_points,
        target,
        classes,
        factorizations,
    })
}

/// Like [`coble_report`] but requires all four square roots.
pub fn coble_four_veronese(gamma5: &PointConfig, samples: usize, seed: u64) -> Result<CobleReport> {
    let report = coble_report(gamma5, samples, seed)?;
    if report.count() < 4 {
        return Err(Error::PartialTorsion(report.count()));
    }
    Ok(report)
}

pub fn factorization_for_triple(
    gamma5: &PointConfig,
    gale: &PointConfig,
    cubic: &PlaneCubic,
    class: &DivisorClass,
    triple: &[CurvePoint; 3],
    samples: usize,
    seed: u64,
) -> Result<VeroneseFactorization> {
    let field = gale.field();
    if samples < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            needed: MIN_SAMPLES,
            found: samples,
        });
    }
    if cubic.abel_sum(triple)? != *class {
        return Err(Error::InvalidInput("triple does not lie in the class".into()));
    }
    let gamma_points = gale.points().iter().map(|p| cubic.point(p)).collect::<Result<Vec<_>>>()?;
    let node_criterion = quintic_node_criterion(&gamma_points, cubic.equation(), triple)?;

    let nodes: Vec<BasePointSpec> = triple
        .iter()
        .map(|r| BasePointSpec::new(r.coords().to_vec(), 2))
        .collect::<Result<_>>()?;
    let quartics = vanishing_system(field, 3, 4, &nodes)?;
    if quartics.dim() != 6 {
        return Err(Error::SystemDimWrong {
            expected: 6,
            found: quartics.dim(),
        });
    }
    let images = PointConfig::new(evaluation_matrix(4, gale)?.mul(quartics.basis())?)?;
    let certificate = match gale_certificate(gale, &images) {
        Ok(c) => c,
        Err(e @ (Error::NotGaleDual { .. } | Error::CertificateSearchExhausted { .. })) => {
            return Err(Error::CertificateNotFound(format!("quartic images: {e}")))
        }
        Err(e) => return Err(e),
    };
    let transport = projective_transport(&images, gamma5)?.unique_matrix()?.clone();

    let simple: Vec<BasePointSpec> = triple
        .iter()
        .map(|r| BasePointSpec::new(r.coords().to_vec(), 1))
        .collect::<Result<_>>()?;
    let conic_space = vanishing_system(field, 3, 2, &simple)?;
    if conic_space.dim() != 3 {
        return Err(Error::SystemDimWrong {
            expected: 3,
            found: conic_space.dim(),
        });
    }
    let conics = HomogPoly::from_subspace(field, 3, 2, &conic_space)?;
    let mut columns = Vec::with_capacity(6);
    for a in 0..3 {
        for b in a..3 {
            let prod = multiply(&conics[a], &conics[b])?;
            let c = quartics
                .basis()
                .solve(prod.coeffs())?
                .ok_or_else(|| Error::InvariantViolation("conic product is not a nodal quartic".into()))?;
            columns.push(c);
        }
    }
    let conic_change = Matrix::from_columns(field, 6, &columns)?;
    if conic_change.rank() != 6 {
        return Err(Error::InvariantViolation("conic products do not span the quartics".into()));
    }

    let mut fact = VeroneseFactorization {
        class: class.clone(),
        triple: triple.clone(),
        node_criterion,
        quartics,
        images,
        certificate,
        transport,
        conic_change,
        quadrics: Subspace::zero(field, 21),
        samples,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let quad_basis = MonomialBasis::new(6, 2);
    let mut rows = Vec::with_capacity(samples);
    let mut tries = 0;
    while rows.len() < samples {
        tries += 1;
        if tries > 100 * samples {
            return Err(Error::FieldTooSmall);
        }
        let u = random_point(field, 3, &mut rng);
        if let Some(z) = fact.map(&u)? {
            rows.push(quad_basis.evaluate_all(&z)?);
        }
    }
    let quadrics = Matrix::from_rows(field, 21, rows)?.kernel();
    if quadrics.dim() != 6 {
        return Err(Error::SystemDimWrong {
            expected: 6,
            found: quadrics.dim(),
        });
    }
    fact.quadrics = quadrics;
    Ok(fact)
}

/// Evidence that two factorizations share the image of the cubic but not the surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SexticCertificate {
    pub curve_samples: usize,
    /// Every sampled curve image lies on both surfaces.
    pub curve_on_both: bool,
    /// The two maps agree projectively on every sampled curve point.
    pub maps_agree_on_curve: bool,
    /// A point of the first surface off the second one, if found.
    pub off_curve_witness: Option<Vec<FieldElement>>,
}

pub fn two_sextics_veronese(
    cubic: &PlaneCubic,
    first: &VeroneseFactorization,
    second: &VeroneseFactorization,
    samples: usize,
    seed: u64,
) -> Result<SexticCertificate> {
    if samples < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            needed: MIN_SAMPLES,
            found: samples,
        });
    }
    let field = cubic.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates: Vec<&CurvePoint> = cubic
        .points()
        .iter()
        .filter(|p| !first.triple.contains(p) && !second.triple.contains(p))
        .collect();
    candidates.shuffle(&mut rng);
    let mut curve_samples = 0;
    let mut curve_on_both = true;
    let mut maps_agree_on_curve = true;
    for u in candidates.into_iter().take(samples) {
        let (Some(z1), Some(z2)) = (first.map(u.coords())?, second.map(u.coords())?) else {
            continue;
        };
        curve_samples += 1;
        for z in [&z1, &z2] {
            curve_on_both &= first.on_surface(z)? && second.on_surface(z)?;
        }
        maps_agree_on_curve &= proportional(&z1, &z2);
    }
    if curve_samples < MIN_SAMPLES.min(samples) {
        return Err(Error::InsufficientSamples {
            needed: MIN_SAMPLES,
            found: curve_samples,
        });
    }
    let mut off_curve_witness = None;
    for _ in 0..100 * samples {
        let u = random_point(field, 3, &mut rng);
        if evaluate(cubic.equation(), &u)?.is_zero() {
            continue;
        }
        if let Some(z) = first.map(&u)? {
            if !second.on_surface(&z)? {
                off_curve_witness = Some(z);
                break;
            }
        }
    }
    Ok(SexticCertificate {
        curve_samples,
        curve_on_both,
        maps_agree_on_curve,
        off_curve_witness,
    })
}
