//! Point configurations, the Gale transform, diagonal duality certificates and
//! projective transport between configurations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactla::{normalize, Matrix};
use crate::scalars::{FieldElement, FieldSpec};

/// Budget of random kernel combinations tried over F_p.
pub const FINITE_SEARCH_BUDGET: usize = 100;
/// Largest `t` tried in the `sum t^i k_i` sweep over Q.
pub const RATIONAL_SWEEP_BUDGET: i64 = 1000;
const CERTIFICATE_SEED: u64 = 0x9e37_79b9_7f4a_7c15;

/// `gamma` points of `P^dim`, one homogeneous representative per row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfig {
    matrix: Matrix,
}

impl PointConfig {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if matrix.rows() == 0 {
            return Err(Error::InvalidInput("a configuration needs at least one point".into()));
        }
        if matrix.cols() == 0 {
            return Err(Error::InvalidInput("points need at least one coordinate".into()));
        }
        for i in 0..matrix.rows() {
            if matrix.row(i).iter().all(FieldElement::is_zero) {
                return Err(Error::InvalidInput(format!("point {i} has all coordinates zero")));
            }
        }
        Ok(PointConfig { matrix })
    }

    pub fn from_points(field: FieldSpec, points: Vec<Vec<FieldElement>>) -> Result<Self> {
        Self::new(Matrix::from_rows(field, 0, points)?)
    }

    pub fn from_i64(field: FieldSpec, rows: &[&[i64]]) -> Result<Self> {
        Self::new(Matrix::from_i64(field, rows))
    }

    pub fn field(&self) -> FieldSpec {
        self.matrix.field()
    }

    /// Dimension `r` of the ambient `P^r`.
    pub fn dim(&self) -> usize {
        self.matrix.cols() - 1
    }

    pub fn len(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn point(&self, i: usize) -> &[FieldElement] {
        self.matrix.row(i)
    }

    pub fn points(&self) -> Vec<Vec<FieldElement>> {
        self.matrix.row_vecs()
    }

    /// Every row scaled to have first nonzero coordinate 1.
    pub fn normalized(&self) -> PointConfig {
        let rows = self.points().iter().map(|p| normalize(p)).collect();
        PointConfig {
            matrix: Matrix::from_rows(self.field(), self.matrix.cols(), rows).expect("same shape"),
        }
    }

    /// Applies the projective map `x -> M x` to every point.
    pub fn apply(&self, m: &Matrix) -> Result<PointConfig> {
        Self::new(self.matrix.mul(&m.transpose())?)
    }

    pub fn rescale(&self, scales: &[FieldElement]) -> Result<PointConfig> {
        if scales.iter().any(FieldElement::is_zero) {
            return Err(Error::DivisionByZero);
        }
        Self::new(self.matrix.scale_rows(scales)?)
    }

    pub fn select(&self, idx: &[usize]) -> Result<PointConfig> {
        Self::new(self.matrix.select_rows(idx))
    }

    /// `true` when every point is projectively equal to the matching one in `other`.
    pub fn same_points(&self, other: &PointConfig) -> bool {
        self.len() == other.len()
            && self.dim() == other.dim()
            && (0..self.len()).all(|i| crate::exactla::proportional(self.point(i), other.point(i)))
    }
}

/// `B^T diag(D) A = 0` with every entry of `D` nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCertificate {
    pub d: Vec<FieldElement>,
    pub a: Matrix,
    pub b: Matrix,
}

impl DualCertificate {
    pub fn verify(&self) -> bool {
        if self.d.len() != self.a.rows() || self.d.len() != self.b.rows() || self.d.iter().any(FieldElement::is_zero) {
            return false;
        }
        let Ok(da) = self.a.scale_rows(&self.d) else {
            return false;
        };
        self.b.transpose().mul(&da).is_ok_and(|m| m.is_zero())
    }
}

pub fn is_nondegenerate(c: &PointConfig) -> bool {
    c.matrix.rank() == c.dim() + 1
}

fn require_nondegenerate(c: &PointConfig) -> Result<()> {
    let rank = c.matrix.rank();
    if rank != c.dim() + 1 {
        return Err(Error::Degenerate {
            rank,
            needed: c.dim() + 1,
        });
    }
    Ok(())
}

/// Rows of a kernel basis of `G^T`, a configuration in `P^(gamma - r - 2)`.
pub fn gale_transform(c: &PointConfig) -> Result<PointConfig> {
    let r = c.dim();
    if c.len() < r + 2 {
        return Err(Error::TooFewPoints {
            found: c.len(),
            dim: r,
            needed: r + 2,
        });
    }
    require_nondegenerate(c)?;
    let k = c.matrix.transpose().kernel();
    let g = k.basis().clone();
    for i in 0..g.rows() {
        if g.row(i).iter().all(FieldElement::is_zero) {
            return Err(Error::ZeroRowInDual(i));
        }
    }
    PointConfig::new(g)
}

/// Searches for an all-nonzero `D` with `B^T diag(D) A = 0`, normalized so `D[0] = 1`.
///
/// Fails with [`Error::NotGaleDual`] when no such `D` exists and with
/// [`Error::CertificateSearchExhausted`] when one might exist but the
/// search budget ran out.
pub fn gale_certificate(a: &PointConfig, b: &PointConfig) -> Result<DualCertificate> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch {
            expected: a.field().to_string(),
            found: b.field().to_string(),
        });
    }
    let gamma = a.len();
    if b.len() != gamma {
        return Err(Error::DimensionMismatch {
            expected: gamma,
            found: b.len(),
        });
    }
    if a.dim() + b.dim() + 2 != gamma {
        return Err(Error::DimensionMismatch {
            expected: gamma,
            found: a.dim() + b.dim() + 2,
        });
    }
    let field = a.field();
    let mut rows = Vec::with_capacity((a.dim() + 1) * (b.dim() + 1));
    for j in 0..=b.dim() {
        for k in 0..=a.dim() {
            rows.push(
                (0..gamma)
                    .map(|i| b.matrix.get(i, j) * a.matrix.get(i, k))
                    .collect(),
            );
        }
    }
    let system = Matrix::from_rows(field, gamma, rows)?;
    let kernel = system.kernel();
    let dim = kernel.dim();
    let basis = kernel.basis_vectors();
    if dim == 0 || (0..gamma).any(|i| basis.iter().all(|v| v[i].is_zero())) {
        return Err(Error::NotGaleDual { kernel_dim: dim });
    }
    let found = if field.is_finite() {
        let mut rng = ChaCha8Rng::seed_from_u64(CERTIFICATE_SEED);
        (0..FINITE_SEARCH_BUDGET).find_map(|attempt| {
            let coeffs: Vec<FieldElement> = if attempt == 0 {
                vec![field.one(); dim]
            } else {
                (0..dim).map(|_| field.random_element(&mut rng)).collect()
            };
            all_nonzero(combine(field, &basis, &coeffs))
        })
    } else {
        (1..=RATIONAL_SWEEP_BUDGET).find_map(|t| {
            let t = field.from_i64(t);
            let mut coeffs = Vec::with_capacity(dim);
            let mut pw = field.one();
            for _ in 0..dim {
                coeffs.push(pw.clone());
                pw = &pw * &t;
            }
            all_nonzero(combine(field, &basis, &coeffs))
        })
    };
    let d = found.ok_or(Error::CertificateSearchExhausted { kernel_dim: dim })?;
    let cert = DualCertificate {
        d: normalize(&d),
        a: a.matrix.clone(),
        b: b.matrix.clone(),
    };
    debug_assert!(cert.verify());
    Ok(cert)
}

fn combine(field: FieldSpec, basis: &[Vec<FieldElement>], coeffs: &[FieldElement]) -> Vec<FieldElement> {
    let n = basis[0].len();
    (0..n)
        .map(|i| {
            basis
                .iter()
                .zip(coeffs)
                .fold(field.zero(), |acc, (v, c)| &acc + &(&v[i] * c))
        })
        .collect()
}

fn all_nonzero(v: Vec<FieldElement>) -> Option<Vec<FieldElement>> {
    v.iter().all(|x| !x.is_zero()).then_some(v)
}

/// Like [`gale_certificate`] but with both negative outcomes folded into `None`.
pub fn is_gale_dual(a: &PointConfig, b: &PointConfig) -> Result<Option<DualCertificate>> {
    match gale_certificate(a, b) {
        Ok(c) => Ok(Some(c)),
        Err(Error::NotGaleDual { .. } | Error::CertificateSearchExhausted { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Result of solving `M src_i = lambda_i dst_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transport {
    /// Dimension of the solution space in the unknowns `(M, lambda)`.
    pub solution_dim: usize,
    /// The unique `M` up to scale, first nonzero entry 1; present only when
    /// `solution_dim == 1`.
    pub matrix: Option<Matrix>,
    pub scalars: Option<Vec<FieldElement>>,
}

impl Transport {
    pub fn is_unique(&self) -> bool {
        self.solution_dim == 1 && self.matrix.is_some()
    }

    pub fn unique_matrix(&self) -> Result<&Matrix> {
        match &self.matrix {
            Some(m) if self.solution_dim == 1 => Ok(m),
            _ => Err(Error::TransportNotUnique(self.solution_dim)),
        }
    }
}

pub fn projective_transport(src: &PointConfig, dst: &PointConfig) -> Result<Transport> {
    if src.field() != dst.field() {
        return Err(Error::FieldMismatch {
            expected: src.field().to_string(),
            found: dst.field().to_string(),
        });
    }
    if src.len() != dst.len() {
        return Err(Error::DimensionMismatch {
            expected: src.len(),
            found: dst.len(),
        });
    }
    if src.dim() != dst.dim() {
        return Err(Error::DimensionMismatch {
            expected: src.dim() + 1,
            found: dst.dim() + 1,
        });
    }
    let field = src.field();
    let n = src.dim() + 1;
    let gamma = src.len();
    let unknowns = n * n + gamma;
    let mut rows = Vec::with_capacity(gamma * n);
    for i in 0..gamma {
        for a in 0..n {
            let mut row = vec![field.zero(); unknowns];
            for b in 0..n {
                row[a * n + b] = src.point(i)[b].clone();
            }
            row[n * n + i] = -dst.point(i)[a].clone();
            rows.push(row);
        }
    }
    let kernel = Matrix::from_rows(field, unknowns, rows)?.kernel();
    let basis = kernel.basis_vectors();
    if kernel.dim() == 0 || (0..gamma).any(|i| basis.iter().all(|v| v[n * n + i].is_zero())) {
        return Err(Error::NoTransport);
    }
    if kernel.dim() > 1 {
        return Ok(Transport {
            solution_dim: kernel.dim(),
            matrix: None,
            scalars: None,
        });
    }
    let v = &basis[0];
    let entries = v[..n * n].to_vec();
    let lead = entries
        .iter()
        .find(|x| !x.is_zero())
        .ok_or(Error::NoTransport)?
        .inv()?;
    let m = Matrix::new(field, n, n, entries.iter().map(|x| x * &lead).collect())?;
    let scalars = v[n * n..].iter().map(|x| x * &lead).collect();
    Ok(Transport {
        solution_dim: 1,
        matrix: Some(m),
        scalars: Some(scalars),
    })
}

/// Evidence that a configuration is recovered by transforming twice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleDual {
    pub gale: PointConfig,
    pub double_gale: PointConfig,
    /// Certificate between the transform and the double transform.
    pub certificate: DualCertificate,
    /// `M` with `M c_i = c''_i` exactly.
    pub transport: Matrix,
    pub transport_solution_dim: usize,
}

pub fn double_dual_check(c: &PointConfig) -> Result<DoubleDual> {
    let g1 = gale_transform(c)?;
    let g2 = gale_transform(&g1)?;
    let certificate = gale_certificate(&g1, &g2)?;
    let solution_dim = projective_transport(c, &g2)?.solution_dim;
    // G'' = G N for an invertible N, so M = N^T works with every lambda = 1
    let n = c.dim() + 1;
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let col = c
            .matrix
            .solve(&g2.matrix.column(j))?
            .ok_or_else(|| Error::InvariantViolation("double transform leaves the column space".into()))?;
        cols.push(col);
    }
    let transport = Matrix::from_columns(c.field(), n, &cols)?.transpose();
    let moved = c.apply(&transport)?;
    if moved != g2 {
        return Err(Error::InvariantViolation("double transform transport mismatch".into()));
    }
    Ok(DoubleDual {
        gale: g1,
        double_gale: g2,
        certificate,
        transport,
        transport_solution_dim: solution_dim,
    })
}
