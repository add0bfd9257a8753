use std::collections::BTreeMap;
use std::path::Path;

use goppa_core::{Error, FieldElement, FieldSpec, HomogPoly, Matrix, PointConfig};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub type Rows = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum FieldJson {
    Rational,
    Prime { p: u64 },
}

impl FieldJson {
    pub fn spec(&self) -> Result<FieldSpec, CliError> {
        match self {
            FieldJson::Rational => Ok(FieldSpec::rational()),
            FieldJson::Prime { p } => Ok(FieldSpec::prime(*p)?),
        }
    }

    pub fn of(field: FieldSpec) -> Self {
        match field.modulus() {
            None => FieldJson::Rational,
            Some(p) => FieldJson::Prime { p },
        }
    }

    /// Parses the `--field` flag: `rational` or `prime:P`.
    pub fn parse_flag(s: &str) -> Result<Self, String> {
        if s == "rational" {
            return Ok(FieldJson::Rational);
        }
        match s.strip_prefix("prime:") {
            Some(p) => p
                .parse()
                .map(|p| FieldJson::Prime { p })
                .map_err(|_| format!("bad modulus in {s:?}")),
            None => Err(format!("expected `rational` or `prime:P`, got {s:?}")),
        }
    }
}

impl std::fmt::Display for FieldJson {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldJson::Rational => write!(f, "rational"),
            FieldJson::Prime { p } => write!(f, "prime:{p}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigFile {
    pub field: FieldJson,
    pub points: Rows,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
}

impl ConfigFile {
    pub fn from_config(c: &PointConfig, meta: Option<Meta>) -> Self {
        ConfigFile {
            field: FieldJson::of(c.field()),
            points: rows_of_points(c),
            meta,
        }
    }

    pub fn to_config(&self) -> Result<PointConfig, CliError> {
        let field = self.field.spec()?;
        points_from_rows(field, &self.points)
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn strings(v: &[FieldElement]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

pub fn rows_of_points(c: &PointConfig) -> Rows {
    c.points().iter().map(|p| strings(p)).collect()
}

pub fn rows_of_matrix(m: &Matrix) -> Rows {
    m.row_vecs().iter().map(|r| strings(r)).collect()
}

pub fn parse_vec(field: FieldSpec, v: &[String]) -> Result<Vec<FieldElement>, CliError> {
    v.iter()
        .map(|s| field.parse(s).map_err(|e| CliError::Parse(e.to_string())))
        .collect()
}

pub fn parse_rows(field: FieldSpec, rows: &Rows) -> Result<Vec<Vec<FieldElement>>, CliError> {
    rows.iter().map(|r| parse_vec(field, r)).collect()
}

fn check_rectangular(rows: &Rows) -> Result<usize, CliError> {
    let width = rows.first().map_or(0, Vec::len);
    if width == 0 || rows.iter().any(|r| r.len() != width) {
        return Err(CliError::Parse("rows must be nonempty and of equal length".into()));
    }
    Ok(width)
}

pub fn points_from_rows(field: FieldSpec, rows: &Rows) -> Result<PointConfig, CliError> {
    check_rectangular(rows)?;
    let pts = parse_rows(field, rows)?;
    if let Some(i) = pts.iter().position(|p| p.iter().all(FieldElement::is_zero)) {
        return Err(CliError::Parse(format!("point {i} is the zero vector")));
    }
    Ok(PointConfig::from_points(field, pts)?)
}

pub fn matrix_from_rows(field: FieldSpec, rows: &Rows) -> Result<Matrix, CliError> {
    let cols = check_rectangular(rows)?;
    Ok(Matrix::from_rows(field, cols, parse_rows(field, rows)?)?)
}

/// A homogeneous polynomial with coefficients keyed by exponent strings `"e0,e1,..."`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub n_vars: usize,
    pub degree: usize,
    pub coeffs: BTreeMap<String, String>,
}

impl PolyJson {
    pub fn of(f: &HomogPoly) -> Self {
        let coeffs = f
            .terms()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| {
                let key = e.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
                (key, c.to_string())
            })
            .collect();
        PolyJson {
            n_vars: f.n_vars(),
            degree: f.degree(),
            coeffs,
        }
    }

    pub fn to_poly(&self, field: FieldSpec) -> Result<HomogPoly, CliError> {
        let mut terms = Vec::with_capacity(self.coeffs.len());
        for (key, c) in &self.coeffs {
            let e: Vec<u32> = key
                .split(',')
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|_| CliError::Parse(format!("bad monomial key {key:?}")))?;
            if e.len() != self.n_vars || e.iter().sum::<u32>() as usize != self.degree {
                return Err(CliError::Parse(format!("monomial {key:?} does not match n_vars/degree")));
            }
            let c = field.parse(c).map_err(|e| CliError::Parse(e.to_string()))?;
            terms.push((c, e));
        }
        Ok(HomogPoly::from_terms(field, self.n_vars, self.degree, &terms)?)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Math(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_flag() {
        assert_eq!(FieldJson::parse_flag("rational"), Ok(FieldJson::Rational));
        assert_eq!(FieldJson::parse_flag("prime:101"), Ok(FieldJson::Prime { p: 101 }));
        assert!(FieldJson::parse_flag("prime:x").is_err());
        assert!(FieldJson::parse_flag("gf7").is_err());
    }

    #[test]
    fn config_round_trip() {
        let text = r#"{"field":{"type":"prime","p":7},"points":[["1","0"],["0","1"],["3","-1"]]}"#;
        let cfg: ConfigFile = serde_json::from_str(text).unwrap();
        let c = cfg.to_config().unwrap();
        let back = ConfigFile::from_config(&c, None);
        assert_eq!(back.points[2], vec!["3", "6"]);
        assert_eq!(back.to_config().unwrap(), c);
    }

    #[test]
    fn ragged_and_zero_rows_rejected() {
        let f = FieldSpec::rational();
        let ragged = vec![vec!["1".to_string()], vec!["1".to_string(), "2".to_string()]];
        assert!(matches!(points_from_rows(f, &ragged), Err(CliError::Parse(_))));
        let zero = vec![vec!["0".to_string(), "0".to_string()]];
        assert!(matches!(points_from_rows(f, &zero), Err(CliError::Parse(_))));
    }

    #[test]
    fn poly_round_trip() {
        let f = FieldSpec::rational();
        let p = HomogPoly::from_i64_terms(f, 3, 2, &[(3, &[1, 1, 0]), (-1, &[0, 0, 2])]).unwrap();
        let j = PolyJson::of(&p);
        assert_eq!(j.coeffs.get("1,1,0").map(String::as_str), Some("3"));
        assert_eq!(j.coeffs.len(), 2);
        assert_eq!(j.to_poly(f).unwrap(), p);
    }
}
