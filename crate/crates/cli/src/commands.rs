use std::path::Path;

use goppa_core::elliptic::{coble_report, gen_coble_instance};
use goppa_core::exactla::proportional;
use goppa_core::gale::{gale_certificate, gale_transform};
use goppa_core::plane_curves::{
    conic_through_five, cubic_pencil_ninth, gen_cubic_pencil_base, gen_general_points, rnc_through, veronese_p1,
};
use goppa_core::polyspace::vanishing_system;
use goppa_core::surface_goppa::{eight_points_p4, gen_ci33, seven_points_p3, veronese_certificate, BlowupFactorization};
use goppa_core::{BasePointSpec, DualCertificate, Error, FieldElement, FieldSpec, HomogPoly, PointConfig, Subspace};
use serde_json::{json, Value};

use crate::io::{read_json, rows_of_matrix, rows_of_points, strings, ConfigFile, FieldJson, Meta, PolyJson, Rows};
use crate::report::{ErrorJson, GaleCert, Report, TransportCert, VanishingCert};
use crate::CliError;

/// Error kind as reported in JSON: the variant name.
pub fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
}

/// Loads a configuration, rejecting a `--field` flag that disagrees with the file.
pub fn load(input: &Path, flag: Option<&FieldJson>) -> Result<PointConfig, CliError> {
    let cfg: ConfigFile = read_json(input)?;
    if let Some(f) = flag {
        if *f != cfg.field {
            return Err(CliError::FieldMismatch {
                flag: f.to_string(),
                file: cfg.field.to_string(),
            });
        }
    }
    cfg.to_config()
}

/// Runs `body` on a fresh report; a library error marks the report failed and is handed back.
fn run(
    command: &str,
    points: &PointConfig,
    params: Value,
    body: impl FnOnce(&mut Report) -> goppa_core::Result<()>,
) -> (Report, Option<Error>) {
    let mut report = Report::new(command, points.field(), rows_of_points(points), params);
    match body(&mut report) {
        Ok(()) => (report, None),
        Err(e) => {
            report.status = "failed".into();
            report.error = Some(ErrorJson {
                kind: error_kind(&e),
                message: e.to_string(),
            });
            (report, Some(e))
        }
    }
}

fn gale_cert(label: &str, c: &DualCertificate) -> GaleCert {
    GaleCert {
        label: label.into(),
        a: rows_of_matrix(&c.a),
        b: rows_of_matrix(&c.b),
        d: strings(&c.d),
    }
}

fn polys_json(polys: &[HomogPoly]) -> Vec<PolyJson> {
    polys.iter().map(PolyJson::of).collect()
}

fn vanishing(label: &str, polys: &[HomogPoly], points: Rows, order: usize) -> VanishingCert {
    VanishingCert {
        label: label.into(),
        polys: polys_json(polys),
        points,
        order,
    }
}

fn system_polys(field: FieldSpec, n_vars: usize, degree: usize, space: &Subspace) -> goppa_core::Result<Vec<HomogPoly>> {
    HomogPoly::from_subspace(field, n_vars, degree, space)
}

fn images_of(polys: &[HomogPoly], points: &PointConfig) -> goppa_core::Result<Rows> {
    let rows = crate::report::evaluate_system(polys, &points.points())?;
    Ok(rows.iter().map(|r| strings(r)).collect())
}

pub type Outcome = (Report, Option<Error>);

pub fn gale(c: &PointConfig) -> Outcome {
    run("gale", c, json!({}), |r| {
        let dual = gale_transform(c)?;
        let cert = gale_certificate(c, &dual)?;
        let verified = dual.matrix().transpose().mul(c.matrix())?.is_zero();
        r.outputs = json!({
            "dual": ConfigFile::from_config(&dual, None),
            "verified": verified,
        });
        r.certificates.gale_dual.push(gale_cert("input-dual", &cert));
        Ok(())
    })
}

pub fn rnc(c: &PointConfig) -> Outcome {
    run("rnc", c, json!({}), |r| {
        let param = rnc_through(c)?;
        let mut src = Vec::new();
        let mut hits = Vec::new();
        for (i, t) in param.source_points.points().iter().enumerate() {
            let v = veronese_p1(param.s, t)?;
            hits.push(proportional(&param.matrix.mul_vec(&v)?, c.point(i)));
            src.push(strings(&v));
        }
        r.outputs = json!({
            "degree": param.s,
            "matrix": rows_of_matrix(&param.matrix),
            "parameters": rows_of_points(&param.source_points),
            "hits": hits,
        });
        r.certificates.transport.push(TransportCert {
            label: "veronese-to-input".into(),
            src,
            dst: rows_of_points(c),
            matrix: rows_of_matrix(&param.matrix),
            solution_dim: param.transport_solution_dim,
        });
        Ok(())
    })
}

pub fn conic5(c: &PointConfig) -> Outcome {
    run("conic5", c, json!({}), |r| {
        let conic = conic_through_five(c)?;
        r.outputs = json!({ "conic": PolyJson::of(&conic) });
        r.certificates.vanishing.push(vanishing("conic", &[conic], rows_of_points(c), 1));
        Ok(())
    })
}

pub fn pencil9(c: &PointConfig) -> Outcome {
    run("pencil9", c, json!({}), |r| {
        let p = cubic_pencil_ninth(c)?;
        let mut points = rows_of_points(c);
        points.push(strings(&p.ninth));
        r.outputs = json!({
            "ninth": strings(&p.ninth),
            "generators": polys_json(&p.generators),
        });
        r.certificates.vanishing.push(vanishing("pencil", &p.generators, points, 1));
        Ok(())
    })
}

fn blowup(r: &mut Report, c: &PointConfig, f: &BlowupFactorization, cubics: &[HomogPoly]) -> goppa_core::Result<()> {
    let field = c.field();
    let system = system_polys(field, 3, 2, &f.system)?;
    let excess: Rows = f.excess.iter().map(|b: &BasePointSpec| strings(&b.point)).collect();
    let images = images_of(&system, &f.gale)?;
    if images != rows_of_points(&f.images) {
        return Err(Error::InvariantViolation("system basis disagrees with the image configuration".into()));
    }
    let mut cubic_points = rows_of_points(&f.gale);
    cubic_points.extend(excess.iter().cloned());
    r.outputs = json!({
        "gale": rows_of_points(&f.gale),
        "excess": excess,
        "system": polys_json(&system),
        "images": images,
        "transport": rows_of_matrix(&f.transport),
        "transport_solution_dim": f.transport_solution_dim,
        "cubics": polys_json(cubics),
    });
    let input_cert = gale_certificate(c, &f.gale)?;
    let certs = &mut r.certificates;
    certs.gale_dual.push(gale_cert("input-gale", &input_cert));
    certs.gale_dual.push(gale_cert("gale-images", &f.certificate));
    certs.transport.push(TransportCert {
        label: "images-to-input".into(),
        src: rows_of_points(&f.images),
        dst: rows_of_points(c),
        matrix: rows_of_matrix(&f.transport),
        solution_dim: f.transport_solution_dim,
    });
    certs.vanishing.push(vanishing("conics-through-excess", &system, excess, 1));
    certs.vanishing.push(vanishing("cubics-through-gale-and-excess", cubics, cubic_points, 1));
    Ok(())
}

pub fn eightp4(c: &PointConfig) -> Outcome {
    run("eightp4", c, json!({}), |r| {
        let f = eight_points_p4(c)?;
        let cubics = f.pencil.as_ref().map(|p| p.generators.to_vec()).unwrap_or_default();
        blowup(r, c, &f, &cubics)
    })
}

pub fn sevenp3(c: &PointConfig, pair: Option<(usize, usize)>) -> Outcome {
    let params = match pair {
        Some((i, j)) => json!({ "pair": [i, j] }),
        None => json!({}),
    };
    run("sevenp3", c, params, |r| {
        let f = seven_points_p3(c, pair)?;
        let ex = f.excess_pair.as_ref().ok_or_else(|| Error::InvariantViolation("missing excess pair".into()))?;
        let cubics = ex.cubics.to_vec();
        blowup(r, c, &f, &cubics)?;
        r.outputs["pair"] = json!([ex.pair.0, ex.pair.1]);
        Ok(())
    })
}

pub fn ci33(c: &PointConfig, params: Value) -> Outcome {
    run("ci33", c, params, |r| {
        let v = veronese_certificate(c)?;
        let pencil = vanishing_system(c.field(), 3, 3, &BasePointSpec::simple(c))?;
        let cubics = system_polys(c.field(), 3, 3, &pencil)?;
        r.outputs = json!({
            "images": rows_of_points(&v.images),
            "cubics": polys_json(&cubics),
        });
        r.certificates.gale_dual.push(gale_cert("points-veronese", &v.certificate));
        r.certificates.vanishing.push(vanishing("cubics", &cubics, rows_of_points(c), 1));
        Ok(())
    })
}

pub fn ci33_generated(field: FieldSpec, seed: u64) -> Result<PointConfig, Error> {
    Ok(gen_ci33(field, seed)?.points)
}

fn coords(p: &[FieldElement]) -> Vec<String> {
    strings(p)
}

pub fn coble9(c: &PointConfig, params: Value, samples: usize, seed: u64) -> Outcome {
    run("coble9", c, params, |r| {
        let rep = coble_report(c, samples, seed)?;
        let field = c.field();
        let gale_rows = rows_of_points(&rep.gale);
        let input_cert = gale_certificate(c, &rep.gale)?;
        r.certificates.gale_dual.push(gale_cert("input-gale", &input_cert));
        r.certificates
            .vanishing
            .push(vanishing("cubic-through-gale", &[rep.cubic.equation().clone()], gale_rows.clone(), 1));
        let mut classes = Vec::new();
        for (k, f) in rep.factorizations.iter().enumerate() {
            let quartics = system_polys(field, 3, 4, &f.quartics)?;
            let images = images_of(&quartics, &rep.gale)?;
            if images != rows_of_points(&f.images) {
                return Err(Error::InvariantViolation("quartic basis disagrees with the image configuration".into()));
            }
            let quadrics = f.quadric_polys()?;
            let triple: Rows = f.triple.iter().map(|p| coords(p.coords())).collect();
            classes.push(json!({
                "class": {"degree": f.class.degree, "abel": coords(f.class.abel.coords())},
                "triple": triple,
                "node_dim": f.node_criterion.dim,
                "irreducible_found": f.node_criterion.irreducible_found,
                "quartics": polys_json(&quartics),
                "images": images,
                "transport": rows_of_matrix(&f.transport),
                "quadrics": polys_json(&quadrics),
                "samples": f.samples,
            }));
            let certs = &mut r.certificates;
            certs.gale_dual.push(gale_cert(&format!("gale-images-{k}"), &f.certificate));
            certs.transport.push(TransportCert {
                label: format!("images-to-input-{k}"),
                src: rows_of_points(&f.images),
                dst: rows_of_points(c),
                matrix: rows_of_matrix(&f.transport),
                solution_dim: 1,
            });
            certs.vanishing.push(vanishing(&format!("quartics-nodal-at-triple-{k}"), &quartics, triple, 2));
            certs
                .vanishing
                .push(vanishing(&format!("quadrics-through-input-{k}"), &quadrics, rows_of_points(c), 1));
        }
        let count = rep.count();
        r.outputs = json!({
            "gale": gale_rows,
            "cubic": PolyJson::of(rep.cubic.equation()),
            "curve_order": rep.cubic.order(),
            "target": {"degree": rep.target.degree, "abel": coords(rep.target.abel.coords())},
            "square_roots": rep.classes.len(),
            "factorizations": count,
            "pairwise_distinct": rep.pairwise_distinct()?,
            "classes": classes,
        });
        if count < 4 {
            return Err(Error::PartialTorsion(count));
        }
        Ok(())
    })
}

pub fn coble_generated(field: FieldSpec, seed: u64) -> Result<PointConfig, Error> {
    gen_coble_instance(field, seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum GenKind {
    General,
    Pencil,
}

pub fn gen(kind: GenKind, field: FieldSpec, gamma: usize, dim: usize, seed: u64) -> Result<ConfigFile, Error> {
    let (points, description) = match kind {
        GenKind::General => (
            gen_general_points(field, gamma, dim, seed)?,
            format!("{gamma} general points in P^{dim}"),
        ),
        GenKind::Pencil => (
            gen_cubic_pencil_base(field, seed)?.points,
            "nine base points of a pencil of plane cubics".to_string(),
        ),
    };
    Ok(ConfigFile::from_config(
        &points,
        Some(Meta {
            seed: Some(seed),
            description: Some(description),
        }),
    ))
}
