//! JSON interchange for operators, regions and forms.
//!
//! Complex numbers serialize as `[re, im]` pairs; matrices as flat
//! column-major lists of such pairs. Field names are part of the schema
//! and validation errors name the offending field.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::forms::Form;
use crate::hilbert::{c, CMat, PartialOperator, Subspace};
use crate::regions::{ConstraintKind, HalfPlaneConstraint, Region};
use crate::tol::ToleranceConfig;
use crate::Result;

/// `{ "n", "frame": column-major or null for total, "action",
/// "ambient_skew": optional }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorJson {
    pub n: usize,
    pub frame: Option<Vec<[f64; 2]>>,
    pub action: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient_skew: Option<Vec<[f64; 2]>>,
}

/// `{ "constraints": [ { "phi", "beta", "kind": "ineq"|"eq" } ] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionJson {
    pub constraints: Vec<ConstraintJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstraintJson {
    pub phi: f64,
    pub beta: f64,
    pub kind: String,
}

/// `{ "n", "frame": optional, "coeff", "G": optional }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormJson {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<Vec<[f64; 2]>>,
    pub coeff: Vec<[f64; 2]>,
    #[serde(default, rename = "G", skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<[f64; 2]>>,
}

fn matrix_to_flat(m: &CMat) -> Vec<[f64; 2]> {
    // nalgebra stores column-major; iter() follows storage order.
    m.iter().map(|z| [z.re, z.im]).collect()
}

fn flat_to_matrix(flat: &[[f64; 2]], rows: usize, cols: usize, field: &str) -> Result<CMat> {
    if flat.len() != rows * cols {
        return Err(Error::Schema(format!(
            "field '{field}': expected {rows} x {cols} = {} entries, got {}",
            rows * cols,
            flat.len()
        )));
    }
    Ok(CMat::from_fn(rows, cols, |i, j| {
        let [re, im] = flat[j * rows + i];
        c(re, im)
    }))
}

pub fn operator_to_json(t: &PartialOperator) -> OperatorJson {
    OperatorJson {
        n: t.ambient_dim(),
        frame: if t.is_total() {
            None
        } else {
            Some(matrix_to_flat(t.domain().frame()))
        },
        action: matrix_to_flat(t.action()),
        ambient_skew: t.ambient_skew().map(matrix_to_flat),
    }
}

pub fn operator_from_json(j: &OperatorJson, cfg: &ToleranceConfig) -> Result<PartialOperator> {
    let n = j.n;
    if n == 0 {
        return Err(Error::Schema("field 'n': must be positive".into()));
    }
    if j.action.len() % n != 0 {
        return Err(Error::Schema(format!(
            "field 'action': length {} is not a multiple of n = {n}",
            j.action.len()
        )));
    }
    let d = j.action.len() / n;
    if d == 0 || d > n {
        return Err(Error::Schema(format!(
            "field 'action': implies domain dimension {d}, need 1..={n}"
        )));
    }
    let action = flat_to_matrix(&j.action, n, d, "action")?;
    let t = match &j.frame {
        None => {
            if d != n {
                return Err(Error::Schema(format!(
                    "field 'frame': null means total, but action has {d} columns for n = {n}"
                )));
            }
            PartialOperator::total(action)?
        }
        Some(flat) => {
            let frame = flat_to_matrix(flat, n, d, "frame")?;
            let domain = Subspace::from_frame(frame, cfg)
                .map_err(|e| Error::Schema(format!("field 'frame': {e}")))?;
            PartialOperator::new(domain, action)?
        }
    };
    match &j.ambient_skew {
        None => Ok(t),
        Some(flat) => {
            let b = flat_to_matrix(flat, n, n, "ambient_skew")?;
            t.with_ambient_skew(b, cfg)
                .map_err(|e| Error::Schema(format!("field 'ambient_skew': {e}")))
        }
    }
}

pub fn region_to_json(r: &Region) -> RegionJson {
    RegionJson {
        constraints: r
            .constraints()
            .iter()
            .map(|ct| ConstraintJson {
                phi: ct.phi,
                beta: ct.beta,
                kind: match ct.kind {
                    ConstraintKind::Ineq => "ineq".into(),
                    ConstraintKind::Eq => "eq".into(),
                },
            })
            .collect(),
    }
}

pub fn region_from_json(j: &RegionJson) -> Result<Region> {
    let mut constraints = Vec::with_capacity(j.constraints.len());
    for (k, ct) in j.constraints.iter().enumerate() {
        if !ct.phi.is_finite() || !ct.beta.is_finite() {
            return Err(Error::Schema(format!(
                "field 'constraints[{k}]': phi and beta must be finite"
            )));
        }
        constraints.push(match ct.kind.as_str() {
            "ineq" => HalfPlaneConstraint::ineq(ct.phi, ct.beta),
            "eq" => HalfPlaneConstraint::eq(ct.phi, ct.beta),
            other => {
                return Err(Error::Schema(format!(
                    "field 'constraints[{k}].kind': expected \"ineq\" or \"eq\", got \"{other}\""
                )))
            }
        });
    }
    Region::new(constraints)
}

pub fn form_to_json(f: &Form) -> FormJson {
    FormJson {
        n: f.domain().ambient_dim(),
        frame: if f.domain().is_total() {
            None
        } else {
            Some(matrix_to_flat(f.domain().frame()))
        },
        coeff: matrix_to_flat(f.coeff()),
        g: f.domain_norm().map(matrix_to_flat),
    }
}

pub fn form_from_json(j: &FormJson, cfg: &ToleranceConfig) -> Result<Form> {
    let n = j.n;
    if n == 0 {
        return Err(Error::Schema("field 'n': must be positive".into()));
    }
    let (domain, d) = match &j.frame {
        None => (Subspace::total(n), n),
        Some(flat) => {
            if flat.len() % n != 0 {
                return Err(Error::Schema(format!(
                    "field 'frame': length {} is not a multiple of n = {n}",
                    flat.len()
                )));
            }
            let d = flat.len() / n;
            let frame = flat_to_matrix(flat, n, d, "frame")?;
            (
                Subspace::from_frame(frame, cfg)
                    .map_err(|e| Error::Schema(format!("field 'frame': {e}")))?,
                d,
            )
        }
    };
    let coeff = flat_to_matrix(&j.coeff, d, d, "coeff")?;
    let g = match &j.g {
        None => None,
        Some(flat) => Some(flat_to_matrix(flat, d, d, "G")?),
    };
    Form::new(domain, coeff, g, cfg)
}

/// Parse helpers working on raw JSON text.
pub fn parse_operator(text: &str, cfg: &ToleranceConfig) -> Result<PartialOperator> {
    let j: OperatorJson =
        serde_json::from_str(text).map_err(|e| Error::Schema(format!("operator JSON: {e}")))?;
    operator_from_json(&j, cfg)
}

pub fn parse_region(text: &str) -> Result<Region> {
    let j: RegionJson =
        serde_json::from_str(text).map_err(|e| Error::Schema(format!("region JSON: {e}")))?;
    region_from_json(&j)
}

pub fn parse_form(text: &str, cfg: &ToleranceConfig) -> Result<Form> {
    let j: FormJson =
        serde_json::from_str(text).map_err(|e| Error::Schema(format!("form JSON: {e}")))?;
    form_from_json(&j, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::spectral_norm;
    use crate::zoo;
    use rand::SeedableRng;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn operator_round_trip_total() {
        let t = PartialOperator::total(CMat::from_fn(2, 2, |i, j| {
            c((i + 2 * j) as f64, -(i as f64))
        }))
        .unwrap();
        let j = operator_to_json(&t);
        assert!(j.frame.is_none());
        let back = operator_from_json(&j, &cfg()).unwrap();
        assert_eq!(back.action(), t.action());
    }

    #[test]
    fn operator_round_trip_partial() {
        let t = zoo::c2_positive_example();
        let text = serde_json::to_string(&operator_to_json(&t)).unwrap();
        let back = parse_operator(&text, &cfg()).unwrap();
        assert_eq!(back.domain().frame(), t.domain().frame());
        assert_eq!(back.action(), t.action());
    }

    #[test]
    fn operator_round_trip_random() {
        let mut _rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for seed in 0..20 {
            let t = zoo::random_operator_with_range_in(
                &Region::right_half_plane(),
                4,
                2,
                seed,
                &cfg(),
            )
            .unwrap();
            let j = operator_to_json(&t);
            let back = operator_from_json(&j, &cfg()).unwrap();
            assert!(spectral_norm(&(back.action() - t.action())) < 1e-15);
            assert!(spectral_norm(&(back.domain().frame() - t.domain().frame())) < 1e-15);
        }
    }

    #[test]
    fn operator_schema_errors_name_fields() {
        let bad = OperatorJson {
            n: 2,
            frame: None,
            action: vec![[0.0, 0.0]; 3],
            ambient_skew: None,
        };
        let err = operator_from_json(&bad, &cfg()).unwrap_err();
        assert!(err.to_string().contains("action"), "{err}");
        let bad_frame = OperatorJson {
            n: 2,
            frame: Some(vec![[1.0, 0.0], [1.0, 0.0]]),
            action: vec![[0.0, 0.0], [1.0, 0.0]],
            ambient_skew: None,
        };
        let err = operator_from_json(&bad_frame, &cfg()).unwrap_err();
        assert!(err.to_string().contains("frame"), "{err}");
    }

    #[test]
    fn region_round_trip() {
        for region in [
            Region::right_half_plane(),
            Region::positive_ray(),
            Region::horizontal_strip(0.75),
            Region::sector(0.5, 0.6).unwrap(),
        ] {
            let text = serde_json::to_string(&region_to_json(&region)).unwrap();
            let back = parse_region(&text).unwrap();
            assert_eq!(back.constraints().len(), region.constraints().len());
            for (a, b) in back.constraints().iter().zip(region.constraints()) {
                assert_eq!(a.phi, b.phi);
                assert_eq!(a.beta, b.beta);
                assert_eq!(a.kind, b.kind);
            }
        }
    }

    #[test]
    fn region_rejects_unknown_kind() {
        let err = parse_region(r#"{"constraints":[{"phi":0.0,"beta":0.0,"kind":"open"}]}"#)
            .unwrap_err();
        assert!(err.to_string().contains("kind"), "{err}");
    }

    #[test]
    fn form_round_trip_with_gram() {
        let coeff = CMat::from_fn(2, 2, |i, j| c(i as f64, j as f64));
        let g = CMat::identity(2, 2) * c(2.0, 0.0);
        let f = Form::total(coeff.clone(), Some(g.clone()), &cfg()).unwrap();
        let text = serde_json::to_string(&form_to_json(&f)).unwrap();
        assert!(text.contains("\"G\""));
        let back = parse_form(&text, &cfg()).unwrap();
        assert_eq!(back.coeff(), &coeff);
        assert_eq!(back.domain_norm().unwrap(), &g);
    }

    #[test]
    fn serialization_is_deterministic() {
        let t = zoo::c2_positive_example();
        let a = serde_json::to_string(&operator_to_json(&t)).unwrap();
        let b = serde_json::to_string(&operator_to_json(&t)).unwrap();
        assert_eq!(a, b);
    }
}
