use std::collections::BTreeMap;

use goppa_core::elliptic::{CurvePoint, DivisorClass, PlaneCubic};
use goppa_core::gale::projective_transport;
use goppa_core::polyspace::partial;
use goppa_core::{DualCertificate, FieldElement, FieldSpec, HomogPoly, Subspace};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::io::{matrix_from_rows, parse_vec, points_from_rows, FieldJson, PolyJson, Rows};
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaleCert {
    pub label: String,
    pub a: Rows,
    pub b: Rows,
    pub d: Vec<String>,
}

/// `M src_i ~ dst_i` for every `i`, with the dimension of the `(M, lambda)` solution space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransportCert {
    pub label: String,
    pub src: Rows,
    pub dst: Rows,
    pub matrix: Rows,
    pub solution_dim: usize,
}

/// Every polynomial vanishes to the given order at every point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingCert {
    pub label: String,
    pub polys: Vec<PolyJson>,
    pub points: Rows,
    pub order: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificates {
    pub gale_dual: Vec<GaleCert>,
    pub transport: Vec<TransportCert>,
    pub vanishing: Vec<VanishingCert>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inputs {
    pub points: Rows,
    pub params: Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorJson {
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub field: FieldJson,
    pub inputs_digest: String,
    pub inputs: Inputs,
    pub outputs: Value,
    pub certificates: Certificates,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u64>>,
}

/// SHA-256 of the canonical JSON of field, points and parameters.
pub fn inputs_digest(field: &FieldJson, inputs: &Inputs) -> String {
    let canonical = json!({"field": field, "points": inputs.points, "params": inputs.params});
    hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
}

impl Report {
    pub fn new(command: &str, field: FieldSpec, points: Rows, params: Value) -> Self {
        let field = FieldJson::of(field);
        let inputs = Inputs { points, params };
        Report {
            command: command.to_string(),
            inputs_digest: inputs_digest(&field, &inputs),
            field,
            inputs,
            outputs: json!({}),
            certificates: Certificates::default(),
            status: "ok".into(),
            error: None,
            timings_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// The certificate that failed verification and why.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub certificate: String,
    pub reason: String,
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "certificate {} failed: {}", self.certificate, self.reason)
    }
}

type Check = Result<(), String>;

fn fail(certificate: impl Into<String>) -> impl FnOnce(String) -> Failure {
    let certificate = certificate.into();
    move |reason| Failure { certificate, reason }
}

fn text(e: CliError) -> String {
    e.to_string()
}

fn check_gale(field: FieldSpec, c: &GaleCert) -> Check {
    let a = matrix_from_rows(field, &c.a).map_err(text)?;
    let b = matrix_from_rows(field, &c.b).map_err(text)?;
    let d = parse_vec(field, &c.d).map_err(text)?;
    if d.len() != a.rows() || b.rows() != a.rows() {
        return Err("A, B and D have different lengths".into());
    }
    if d.iter().any(FieldElement::is_zero) {
        return Err("D has a zero entry".into());
    }
    if a.rank() != a.cols() || b.rank() != b.cols() || a.cols() + b.cols() != a.rows() {
        return Err("A and B do not have complementary full ranks".into());
    }
    if !(DualCertificate { d, a, b }).verify() {
        return Err("B^T diag(D) A is not zero".into());
    }
    Ok(())
}

fn check_transport(field: FieldSpec, c: &TransportCert) -> Check {
    let src = points_from_rows(field, &c.src).map_err(text)?;
    let dst = points_from_rows(field, &c.dst).map_err(text)?;
    let m = matrix_from_rows(field, &c.matrix).map_err(text)?;
    if src.len() != dst.len() || m.cols() != src.dim() + 1 || m.rows() != dst.dim() + 1 {
        return Err("shapes of M, src and dst do not match".into());
    }
    for i in 0..src.len() {
        let image = m.mul_vec(src.point(i)).map_err(|e| e.to_string())?;
        if !goppa_core::exactla::proportional(&image, dst.point(i)) {
            return Err(format!("M src_{i} is not proportional to dst_{i}"));
        }
    }
    let t = projective_transport(&src, &dst).map_err(|e| e.to_string())?;
    if t.solution_dim != c.solution_dim {
        return Err(format!("solution space has dimension {}, report claims {}", t.solution_dim, c.solution_dim));
    }
    Ok(())
}

/// All partial derivatives of order below `order` vanish at `p`.
pub fn vanishes_to_order(f: &HomogPoly, p: &[FieldElement], order: usize) -> Result<bool, goppa_core::Error> {
    let mut level = vec![f.clone()];
    for k in 0..order {
        for g in &level {
            if !g.evaluate(p)?.is_zero() {
                return Ok(false);
            }
        }
        if k + 1 == order {
            break;
        }
        let mut next = Vec::new();
        for g in &level {
            if g.degree() == 0 {
                continue;
            }
            for v in 0..g.n_vars() {
                let h = partial(g, v)?;
                if !h.is_zero() {
                    next.push(h);
                }
            }
        }
        level = next;
    }
    Ok(true)
}

fn coefficient_span(field: FieldSpec, polys: &[HomogPoly]) -> Result<Subspace, String> {
    let n = polys.first().map_or(0, |f| f.coeffs().len());
    let vecs: Vec<_> = polys.iter().map(|f| f.coeffs().to_vec()).collect();
    Subspace::span(field, n, &vecs).map_err(|e| e.to_string())
}

fn parse_polys(field: FieldSpec, polys: &[PolyJson]) -> Result<Vec<HomogPoly>, String> {
    polys.iter().map(|p| p.to_poly(field).map_err(text)).collect()
}

fn check_vanishing(field: FieldSpec, c: &VanishingCert) -> Check {
    let polys = parse_polys(field, &c.polys)?;
    let points = points_from_rows(field, &c.points).map_err(text)?;
    if polys.is_empty() || c.order == 0 {
        return Err("empty system or zero order".into());
    }
    if polys.iter().any(|f| f.n_vars() != points.dim() + 1 || f.degree() != polys[0].degree()) {
        return Err("polynomials do not match the ambient space".into());
    }
    if coefficient_span(field, &polys)?.dim() != polys.len() {
        return Err("polynomials are not linearly independent".into());
    }
    for (j, f) in polys.iter().enumerate() {
        for i in 0..points.len() {
            if !vanishes_to_order(f, points.point(i), c.order).map_err(|e| e.to_string())? {
                return Err(format!("polynomial {j} does not vanish to order {} at point {i}", c.order));
            }
        }
    }
    Ok(())
}

fn get<'a>(v: &'a Value, ptr: &str) -> Result<&'a Value, Failure> {
    v.pointer(ptr).ok_or_else(|| Failure {
        certificate: format!("consistency {ptr}"),
        reason: "missing from report".into(),
    })
}

fn link(v: &Value, a: &str, b: &str) -> Result<(), Failure> {
    if get(v, a)? != get(v, b)? {
        return Err(Failure {
            certificate: format!("consistency {a} = {b}"),
            reason: "values differ".into(),
        });
    }
    Ok(())
}

fn rows_at(v: &Value, ptr: &str) -> Result<Rows, Failure> {
    serde_json::from_value(get(v, ptr)?.clone()).map_err(|e| fail(format!("consistency {ptr}"))(e.to_string()))
}

fn polys_at(v: &Value, ptr: &str) -> Result<Vec<PolyJson>, Failure> {
    serde_json::from_value(get(v, ptr)?.clone()).map_err(|e| fail(format!("consistency {ptr}"))(e.to_string()))
}

/// Rows of `(f_0(p), ..., f_k(p))` for each point `p`.
pub fn evaluate_system(polys: &[HomogPoly], points: &[Vec<FieldElement>]) -> Result<Vec<Vec<FieldElement>>, goppa_core::Error> {
    points
        .iter()
        .map(|p| polys.iter().map(|f| f.evaluate(p)).collect())
        .collect()
}

fn check_images(field: FieldSpec, v: &Value, polys: &str, points: &str, images: &str) -> Result<(), Failure> {
    let label = format!("consistency {images} = {polys}({points})");
    let polys = parse_polys(field, &polys_at(v, polys)?).map_err(fail(label.clone()))?;
    let pts = crate::io::parse_rows(field, &rows_at(v, points)?).map_err(|e| fail(label.clone())(e.to_string()))?;
    let expected = evaluate_system(&polys, &pts).map_err(|e| fail(label.clone())(e.to_string()))?;
    let expected: Rows = expected.iter().map(|r| crate::io::strings(r)).collect();
    if expected != rows_at(v, images)? {
        return Err(fail(label)("images do not match the system".into()));
    }
    Ok(())
}

fn concat_points(v: &Value, first: &str, rest: &[&str], against: &str) -> Result<(), Failure> {
    let mut all = rows_at(v, first)?;
    for r in rest {
        all.extend(rows_at(v, r)?);
    }
    if all != rows_at(v, against)? {
        return Err(Failure {
            certificate: format!("consistency {against}"),
            reason: "point list does not match the outputs".into(),
        });
    }
    Ok(())
}

fn class_json(c: &DivisorClass) -> Value {
    json!({"degree": c.degree, "abel": crate::io::strings(c.abel.coords())})
}

/// Recomputes the target `5H - Gamma` and each class from its triple on the cubic.
fn check_classes(field: FieldSpec, v: &Value, k: usize) -> Result<(), Failure> {
    let label = "consistency /outputs/target";
    let err = |e: goppa_core::Error| fail(label)(e.to_string());
    let cubic: PolyJson = serde_json::from_value(get(v, "/outputs/cubic")?.clone()).map_err(|e| fail(label)(e.to_string()))?;
    let curve = PlaneCubic::new(cubic.to_poly(field).map_err(|e| fail(label)(e.to_string()))?).map_err(err)?;
    let on_curve = |ptr: &str| -> Result<Vec<CurvePoint>, Failure> {
        crate::io::parse_rows(field, &rows_at(v, ptr)?)
            .map_err(|e| fail(format!("consistency {ptr}"))(e.to_string()))?
            .iter()
            .map(|p| curve.point(p).map_err(|e| fail(format!("consistency {ptr}"))(e.to_string())))
            .collect()
    };
    let gamma = curve.abel_sum(&on_curve("/outputs/gale")?).map_err(err)?;
    let target = curve
        .class_difference(&curve.hyperplane_multiple(5).map_err(err)?, &gamma)
        .map_err(err)?;
    if class_json(&target) != *get(v, "/outputs/target")? {
        return Err(fail(label)("not 5H minus the nine points".into()));
    }
    for i in 0..k {
        let ptr = format!("/outputs/classes/{i}/class");
        let class = curve.abel_sum(&on_curve(&format!("/outputs/classes/{i}/triple"))?).map_err(err)?;
        if class_json(&class) != *get(v, &ptr)? {
            return Err(fail(format!("consistency {ptr}"))("not the class of the triple".into()));
        }
        let twice = DivisorClass {
            degree: 2 * class.degree,
            abel: curve.add(&class.abel, &class.abel).map_err(err)?,
        };
        if twice != target {
            return Err(fail(format!("consistency {ptr}"))("twice the class is not the target".into()));
        }
    }
    Ok(())
}

fn consistency(field: FieldSpec, r: &Report, v: &Value) -> Result<(), Failure> {
    let expect_counts = |g: usize, t: usize, van: usize| -> Result<(), Failure> {
        let c = &r.certificates;
        if (c.gale_dual.len(), c.transport.len(), c.vanishing.len()) != (g, t, van) {
            return Err(Failure {
                certificate: "consistency certificates".into(),
                reason: format!(
                    "expected {g}/{t}/{van} gale/transport/vanishing certificates, found {}/{}/{}",
                    c.gale_dual.len(),
                    c.transport.len(),
                    c.vanishing.len()
                ),
            });
        }
        Ok(())
    };
    match r.command.as_str() {
        "gale" => {
            expect_counts(1, 0, 0)?;
            link(v, "/certificates/gale_dual/0/a", "/inputs/points")?;
            link(v, "/certificates/gale_dual/0/b", "/outputs/dual/points")?;
        }
        "rnc" => {
            expect_counts(0, 1, 0)?;
            link(v, "/certificates/transport/0/dst", "/inputs/points")?;
            link(v, "/certificates/transport/0/matrix", "/outputs/matrix")?;
            let params = crate::io::parse_rows(field, &rows_at(v, "/outputs/parameters")?)
                .map_err(|e| fail("consistency /outputs/parameters")(e.to_string()))?;
            let s = r.inputs.points.first().map_or(0, |p| p.len().saturating_sub(1));
            let src: Rows = params
                .iter()
                .map(|t| goppa_core::plane_curves::veronese_p1(s, t).map(|x| crate::io::strings(&x)))
                .collect::<Result<_, _>>()
                .map_err(|e| fail("consistency /outputs/parameters")(e.to_string()))?;
            if src != r.certificates.transport[0].src {
                return Err(fail("consistency /certificates/transport/0/src")("not the Veronese images of the parameters".into()));
            }
            let hits: Vec<bool> = serde_json::from_value(get(v, "/outputs/hits")?.clone())
                .map_err(|e| fail("consistency /outputs/hits")(e.to_string()))?;
            if hits.len() != r.inputs.points.len() || hits.iter().any(|h| !h) {
                return Err(fail("consistency /outputs/hits")("not every input point is hit".into()));
            }
        }
        "conic5" => {
            expect_counts(0, 0, 1)?;
            link(v, "/certificates/vanishing/0/points", "/inputs/points")?;
            link(v, "/certificates/vanishing/0/polys/0", "/outputs/conic")?;
        }
        "pencil9" => {
            expect_counts(0, 0, 1)?;
            link(v, "/certificates/vanishing/0/polys", "/outputs/generators")?;
            let mut all = rows_at(v, "/inputs/points")?;
            let ninth: Vec<String> = serde_json::from_value(get(v, "/outputs/ninth")?.clone())
                .map_err(|e| fail("consistency /outputs/ninth")(e.to_string()))?;
            all.push(ninth);
            if all != rows_at(v, "/certificates/vanishing/0/points")? {
                return Err(fail("consistency /certificates/vanishing/0/points")("not the inputs plus the ninth point".into()));
            }
            let pts = points_from_rows(field, &rows_at(v, "/certificates/vanishing/0/points")?)
                .map_err(|e| fail("consistency /outputs/ninth")(e.to_string()))?;
            let ninth = pts.point(pts.len() - 1);
            if (0..pts.len() - 1).any(|i| goppa_core::exactla::proportional(pts.point(i), ninth)) {
                return Err(fail("consistency /outputs/ninth")("ninth point repeats an input point".into()));
            }
            if r.certificates.vanishing[0].polys.len() != 2 {
                return Err(fail("consistency /outputs/generators")("expected two generators".into()));
            }
        }
        "eightp4" | "sevenp3" => {
            expect_counts(2, 1, 2)?;
            link(v, "/certificates/gale_dual/0/a", "/inputs/points")?;
            link(v, "/certificates/gale_dual/0/b", "/outputs/gale")?;
            link(v, "/certificates/gale_dual/1/a", "/outputs/gale")?;
            link(v, "/certificates/gale_dual/1/b", "/outputs/images")?;
            link(v, "/certificates/transport/0/src", "/outputs/images")?;
            link(v, "/certificates/transport/0/dst", "/inputs/points")?;
            link(v, "/certificates/transport/0/matrix", "/outputs/transport")?;
            link(v, "/certificates/vanishing/0/polys", "/outputs/system")?;
            link(v, "/certificates/vanishing/0/points", "/outputs/excess")?;
            link(v, "/certificates/vanishing/1/polys", "/outputs/cubics")?;
            concat_points(v, "/outputs/gale", &["/outputs/excess"], "/certificates/vanishing/1/points")?;
            check_images(field, v, "/outputs/system", "/outputs/gale", "/outputs/images")?;
            let excess = if r.command == "eightp4" { 1 } else { 2 };
            if r.certificates.vanishing[0].points.len() != excess || r.certificates.vanishing[1].polys.len() != 2 {
                return Err(fail("consistency /outputs/excess")("wrong number of excess points or cubics".into()));
            }
        }
        "ci33" => {
            expect_counts(1, 0, 1)?;
            link(v, "/certificates/gale_dual/0/a", "/inputs/points")?;
            link(v, "/certificates/gale_dual/0/b", "/outputs/images")?;
            link(v, "/certificates/vanishing/0/polys", "/outputs/cubics")?;
            link(v, "/certificates/vanishing/0/points", "/inputs/points")?;
            let monomials: Vec<PolyJson> = goppa_core::MonomialBasis::new(3, 2)
                .exponents()
                .iter()
                .map(|e| PolyJson::of(&HomogPoly::monomial(field, e)))
                .collect();
            let mut with = v.clone();
            with["outputs"]["__veronese"] = serde_json::to_value(monomials).expect("serializes");
            check_images(field, &with, "/outputs/__veronese", "/inputs/points", "/outputs/images")?;
        }
        "coble9" => {
            let k = r.outputs.get("classes").and_then(Value::as_array).map_or(0, Vec::len);
            expect_counts(1 + k, k, 1 + 2 * k)?;
            let count = r.outputs.get("factorizations").and_then(Value::as_u64);
            if count != Some(k as u64) {
                return Err(fail("consistency /outputs/factorizations")("count does not match the classes".into()));
            }
            link(v, "/certificates/gale_dual/0/a", "/inputs/points")?;
            link(v, "/certificates/gale_dual/0/b", "/outputs/gale")?;
            link(v, "/certificates/vanishing/0/polys/0", "/outputs/cubic")?;
            link(v, "/certificates/vanishing/0/points", "/outputs/gale")?;
            check_classes(field, v, k)?;
            let mut spans: Vec<Subspace> = Vec::new();
            for i in 0..k {
                let c = format!("/outputs/classes/{i}");
                link(v, &format!("/certificates/gale_dual/{}/a", i + 1), "/outputs/gale")?;
                link(v, &format!("/certificates/gale_dual/{}/b", i + 1), &format!("{c}/images"))?;
                link(v, &format!("/certificates/transport/{i}/src"), &format!("{c}/images"))?;
                link(v, &format!("/certificates/transport/{i}/dst"), "/inputs/points")?;
                link(v, &format!("/certificates/transport/{i}/matrix"), &format!("{c}/transport"))?;
                link(v, &format!("/certificates/vanishing/{}/polys", 1 + 2 * i), &format!("{c}/quartics"))?;
                link(v, &format!("/certificates/vanishing/{}/points", 1 + 2 * i), &format!("{c}/triple"))?;
                link(v, &format!("/certificates/vanishing/{}/polys", 2 + 2 * i), &format!("{c}/quadrics"))?;
                link(v, &format!("/certificates/vanishing/{}/points", 2 + 2 * i), "/inputs/points")?;
                check_images(field, v, &format!("{c}/quartics"), "/outputs/gale", &format!("{c}/images"))?;
                let q = &r.certificates.vanishing[1 + 2 * i];
                let quad = &r.certificates.vanishing[2 + 2 * i];
                if q.order != 2 || q.polys.len() != 6 || q.points.len() != 3 || quad.polys.len() != 6 {
                    return Err(fail(format!("consistency {c}"))("wrong system sizes".into()));
                }
                let polys = parse_polys(field, &quad.polys).map_err(fail(format!("consistency {c}/quadrics")))?;
                spans.push(coefficient_span(field, &polys).map_err(fail(format!("consistency {c}/quadrics")))?);
            }
            for i in 0..k {
                for j in 0..i {
                    if spans[i].same_as(&spans[j]).unwrap_or(true) {
                        return Err(fail("consistency /outputs/classes")(format!("surfaces {j} and {i} coincide")));
                    }
                }
            }
        }
        other => {
            return Err(Failure {
                certificate: "command".into(),
                reason: format!("unknown command {other:?}"),
            })
        }
    }
    Ok(())
}

/// Re-checks the digest, every certificate, and the links between outputs and certificates.
/// Returns the number of certificates checked.
pub fn verify(r: &Report) -> Result<usize, Failure> {
    if inputs_digest(&r.field, &r.inputs) != r.inputs_digest {
        return Err(Failure {
            certificate: "inputs_digest".into(),
            reason: "digest does not match the inputs".into(),
        });
    }
    let field = r.field.spec().map_err(|e| fail("field")(e.to_string()))?;
    let c = &r.certificates;
    for g in &c.gale_dual {
        check_gale(field, g).map_err(fail(format!("gale_dual:{}", g.label)))?;
    }
    for t in &c.transport {
        check_transport(field, t).map_err(fail(format!("transport:{}", t.label)))?;
    }
    for van in &c.vanishing {
        check_vanishing(field, van).map_err(fail(format!("vanishing:{}", van.label)))?;
    }
    if r.status == "ok" {
        let v = serde_json::to_value(r).expect("report serializes");
        consistency(field, r, &v)?;
    }
    Ok(c.gale_dual.len() + c.transport.len() + c.vanishing.len())
}
