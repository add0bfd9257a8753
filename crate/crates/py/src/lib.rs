//! Python bindings. Field elements cross the boundary as strings; Python ints
//! and `fractions.Fraction` are accepted wherever a coordinate is expected.

use std::collections::BTreeMap;

use goppa_core::elliptic::{self, CurvePoint, PlaneCubic};
use goppa_core::{gale, plane_curves, surface_goppa};
use goppa_core::{Error, FieldElement, FieldSpec, HomogPoly, Matrix, PointConfig};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(goppa, GoppaError, PyException, "A library error; `args[0]` is the error kind.");

fn err(e: Error) -> PyErr {
    let kind = format!("{e:?}");
    let kind = kind.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string();
    GoppaError::new_err((kind, e.to_string()))
}

type Rows = Vec<Vec<String>>;
type PolyDict = BTreeMap<String, String>;

fn strings(v: &[FieldElement]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn matrix_rows(m: &Matrix) -> Rows {
    m.row_vecs().iter().map(|r| strings(r)).collect()
}

fn poly_dict(f: &HomogPoly) -> BTreeMap<String, String> {
    f.terms()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| (e.iter().map(ToString::to_string).collect::<Vec<_>>().join(","), c.to_string()))
        .collect()
}

fn parse(field: FieldSpec, x: &Bound<'_, PyAny>) -> PyResult<FieldElement> {
    field.parse(&x.str()?.to_string()).map_err(err)
}

fn parse_vec(field: FieldSpec, xs: &[Bound<'_, PyAny>]) -> PyResult<Vec<FieldElement>> {
    xs.iter().map(|x| parse(field, x)).collect()
}

/// `Field()` is the rationals, `Field(p)` the prime field `F_p`.
#[pyclass(frozen, eq, module = "goppa")]
#[derive(Clone, Copy, PartialEq, Eq)]
struct Field(FieldSpec);

#[pymethods]
impl Field {
    #[new]
    #[pyo3(signature = (p=None))]
    fn new(p: Option<u64>) -> PyResult<Self> {
        match p {
            None => Ok(Field(FieldSpec::rational())),
            Some(p) => FieldSpec::prime(p).map(Field).map_err(err),
        }
    }

    #[getter]
    fn modulus(&self) -> Option<u64> {
        self.0.modulus()
    }

    fn __repr__(&self) -> String {
        match self.0.modulus() {
            None => "Field()".into(),
            Some(p) => format!("Field({p})"),
        }
    }
}

/// An ordered list of points of `P^r`.
#[pyclass(frozen, module = "goppa")]
#[derive(Clone)]
struct Config(PointConfig);

#[pymethods]
impl Config {
    #[new]
    fn new(field: &Field, points: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Self> {
        let pts = points.iter().map(|p| parse_vec(field.0, p)).collect::<PyResult<Vec<_>>>()?;
        PointConfig::from_points(field.0, pts).map(Config).map_err(err)
    }

    #[getter]
    fn field(&self) -> Field {
        Field(self.0.field())
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn points(&self) -> Rows {
        self.0.points().iter().map(|p| strings(p)).collect()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn gale(&self) -> PyResult<Config> {
        gale::gale_transform(&self.0).map(Config).map_err(err)
    }

    fn same_points(&self, other: &Config) -> bool {
        self.0.same_points(&other.0)
    }

    fn apply(&self, matrix: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Config> {
        let field = self.0.field();
        let rows = matrix.iter().map(|r| parse_vec(field, r)).collect::<PyResult<Vec<_>>>()?;
        let cols = rows.first().map_or(0, Vec::len);
        let m = Matrix::from_rows(field, cols, rows).map_err(err)?;
        self.0.apply(&m).map(Config).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Config({} points in P^{})", self.0.len(), self.0.dim())
    }
}

/// `D` with `B^T diag(D) A = 0`, or `None` when the configurations are not dual.
#[pyfunction]
fn is_gale_dual(a: &Config, b: &Config) -> PyResult<Option<Vec<String>>> {
    Ok(gale::is_gale_dual(&a.0, &b.0).map_err(err)?.map(|c| strings(&c.d)))
}

/// `(solution_dim, M)` with `M src_i ~ dst_i`; `M` is `None` unless the solution is unique.
#[pyfunction]
fn projective_transport(src: &Config, dst: &Config) -> PyResult<(usize, Option<Rows>)> {
    let t = gale::projective_transport(&src.0, &dst.0).map_err(err)?;
    Ok((t.solution_dim, t.matrix.as_ref().map(matrix_rows)))
}

#[pyfunction]
fn conic_through_five(c: &Config) -> PyResult<BTreeMap<String, String>> {
    plane_curves::conic_through_five(&c.0).map(|f| poly_dict(&f)).map_err(err)
}

/// `(M, parameters)` with the rational normal curve `t -> M v(t)`.
#[pyfunction]
fn rnc_through(c: &Config) -> PyResult<(Rows, Config)> {
    let r = plane_curves::rnc_through(&c.0).map_err(err)?;
    Ok((matrix_rows(&r.matrix), Config(r.source_points)))
}

/// `(ninth point, [f, g])` for the pencil of cubics through eight points.
#[pyfunction]
fn cubic_pencil_ninth(c: &Config) -> PyResult<(Vec<String>, Vec<PolyDict>)> {
    let p = plane_curves::cubic_pencil_ninth(&c.0).map_err(err)?;
    Ok((strings(&p.ninth), p.generators.iter().map(poly_dict).collect()))
}

#[pyfunction]
fn gen_general_points(field: &Field, gamma: usize, r: usize, seed: u64) -> PyResult<Config> {
    plane_curves::gen_general_points(field.0, gamma, r, seed).map(Config).map_err(err)
}

fn blowup_dict<'py>(py: Python<'py>, f: &surface_goppa::BlowupFactorization) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("gale", Config(f.gale.clone()))?;
    let excess: Rows = f.excess.iter().map(|b| strings(&b.point)).collect();
    d.set_item("excess", excess)?;
    d.set_item("images", Config(f.images.clone()))?;
    d.set_item("transport", matrix_rows(&f.transport))?;
    d.set_item("d", strings(&f.certificate.d))?;
    Ok(d)
}

#[pyfunction]
fn eight_points_p4<'py>(py: Python<'py>, c: &Config) -> PyResult<Bound<'py, PyDict>> {
    blowup_dict(py, &surface_goppa::eight_points_p4(&c.0).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (c, pair=None))]
fn seven_points_p3<'py>(py: Python<'py>, c: &Config, pair: Option<(usize, usize)>) -> PyResult<Bound<'py, PyDict>> {
    blowup_dict(py, &surface_goppa::seven_points_p3(&c.0, pair).map_err(err)?)
}

/// Summary of the Coble construction: the number of factorizations and, per
/// factorization, its class, triple and transport matrix.
#[pyfunction]
#[pyo3(signature = (c, samples=40, seed=0))]
fn coble_report<'py>(py: Python<'py>, c: &Config, samples: usize, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let r = elliptic::coble_report(&c.0, samples, seed).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("factorizations", r.count())?;
    d.set_item("pairwise_distinct", r.pairwise_distinct().map_err(err)?)?;
    d.set_item("gale", Config(r.gale.clone()))?;
    let mut classes = Vec::new();
    for f in &r.factorizations {
        let e = PyDict::new(py);
        e.set_item("abel", strings(f.class.abel.coords()))?;
        e.set_item("triple", f.triple.iter().map(|p| strings(p.coords())).collect::<Rows>())?;
        e.set_item("transport", matrix_rows(&f.transport))?;
        classes.push(e);
    }
    d.set_item("classes", classes)?;
    Ok(d)
}

#[pyfunction]
fn gen_coble_instance(field: &Field, seed: u64) -> PyResult<Config> {
    elliptic::gen_coble_instance(field.0, seed).map(Config).map_err(err)
}

/// The curve `y^2 z = x^3 + a x z^2 + b z^3` over `F_p` with its chord-tangent group law.
#[pyclass(frozen, module = "goppa")]
struct EllipticCurve(PlaneCubic);

impl EllipticCurve {
    fn pt(&self, p: Vec<Bound<'_, PyAny>>) -> PyResult<CurvePoint> {
        let field = self.0.field();
        self.0.point(&parse_vec(field, &p)?).map_err(err)
    }
}

#[pymethods]
impl EllipticCurve {
    #[new]
    fn new(field: &Field, a: i64, b: i64) -> PyResult<Self> {
        PlaneCubic::new(elliptic::weierstrass(field.0, a, b)).map(EllipticCurve).map_err(err)
    }

    fn order(&self) -> usize {
        self.0.order()
    }

    fn points(&self) -> Rows {
        self.0.points().iter().map(|p| strings(p.coords())).collect()
    }

    fn origin(&self) -> Vec<String> {
        strings(self.0.origin().coords())
    }

    fn add(&self, p: Vec<Bound<'_, PyAny>>, q: Vec<Bound<'_, PyAny>>) -> PyResult<Vec<String>> {
        let r = self.0.add(&self.pt(p)?, &self.pt(q)?).map_err(err)?;
        Ok(strings(r.coords()))
    }

    fn neg(&self, p: Vec<Bound<'_, PyAny>>) -> PyResult<Vec<String>> {
        Ok(strings(self.0.neg(&self.pt(p)?).map_err(err)?.coords()))
    }

    fn mul(&self, n: i64, p: Vec<Bound<'_, PyAny>>) -> PyResult<Vec<String>> {
        Ok(strings(self.0.mul(n, &self.pt(p)?).map_err(err)?.coords()))
    }
}

#[pymodule]
fn goppa(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("GoppaError", m.py().get_type::<GoppaError>())?;
    m.add_class::<Field>()?;
    m.add_class::<Config>()?;
    m.add_class::<EllipticCurve>()?;
    m.add_function(wrap_pyfunction!(is_gale_dual, m)?)?;
    m.add_function(wrap_pyfunction!(projective_transport, m)?)?;
    m.add_function(wrap_pyfunction!(conic_through_five, m)?)?;
    m.add_function(wrap_pyfunction!(rnc_through, m)?)?;
    m.add_function(wrap_pyfunction!(cubic_pencil_ninth, m)?)?;
    m.add_function(wrap_pyfunction!(gen_general_points, m)?)?;
    m.add_function(wrap_pyfunction!(eight_points_p4, m)?)?;
    m.add_function(wrap_pyfunction!(seven_points_p3, m)?)?;
    m.add_function(wrap_pyfunction!(coble_report, m)?)?;
    m.add_function(wrap_pyfunction!(gen_coble_instance, m)?)?;
    Ok(())
}
