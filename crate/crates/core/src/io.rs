//! State and detector file formats, and JSON/CSV emission.
//!
//! Complex numbers are `[re, im]` pairs. Every floating-point number written by
//! this module uses 17 significant digits, which round-trips any `f64` exactly.

use std::io::{self, Write};

use num_complex::Complex64;
use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::interferometer::DetectorConfig;
use crate::linalg::{CMatrix, CVector};
use crate::roof::{Ensemble, RoofResult};
use crate::states::{DensityMatrix, PureState};

/// A parsed state file.
#[derive(Debug, Clone, PartialEq)]
pub enum StateFile {
    Pure(PureState),
    Density(DensityMatrix),
}

impl StateFile {
    pub fn to_density(&self) -> DensityMatrix {
        match self {
            Self::Pure(psi) => DensityMatrix::from_pure(psi),
            Self::Density(rho) => rho.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Pure(psi) => psi.dim(),
            Self::Density(rho) => rho.dim(),
        }
    }
}

/// Compact JSON with floats printed as `{:.16e}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SeventeenDigits;

impl Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{}", format_f64(value))
        } else {
            CompactFormatter.write_null(writer)
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// The textual form used for every float in JSON and CSV output.
pub fn format_f64(value: f64) -> String {
    format!("{value:.16e}")
}

/// Serializes with [`SeventeenDigits`]. The output ends with a newline.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SeventeenDigits);
    value.serialize(&mut ser).map_err(|e| Error::Format(e.to_string()))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| Error::Format(e.to_string()))
}

pub fn complex_to_value(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn vector_to_value(v: &CVector) -> Value {
    Value::Array(v.iter().map(|z| complex_to_value(*z)).collect())
}

pub fn matrix_to_value(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex_to_value(m[(i, j)])).collect()))
            .collect(),
    )
}

fn parse_complex(v: &Value, ctx: &str) -> Result<Complex64> {
    match v.as_array().map(|a| a.as_slice()) {
        Some([re, im]) => match (re.as_f64(), im.as_f64()) {
            (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
            _ => Err(Error::Format(format!("{ctx}: complex parts must be numbers"))),
        },
        _ => Err(Error::Format(format!("{ctx}: expected a [re, im] pair"))),
    }
}

pub fn vector_from_value(v: &Value, ctx: &str) -> Result<CVector> {
    let items = v
        .as_array()
        .ok_or_else(|| Error::Format(format!("{ctx}: expected an array of [re, im] pairs")))?;
    let entries = items
        .iter()
        .enumerate()
        .map(|(i, z)| parse_complex(z, &format!("{ctx}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    Ok(CVector::from_vec(entries))
}

pub fn matrix_from_value(v: &Value, ctx: &str) -> Result<CMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Format(format!("{ctx}: expected an array of rows")))?;
    let n = rows.len();
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(i, r)| vector_from_value(r, &format!("{ctx}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let cols = parsed.first().map_or(0, |r| r.len());
    if let Some(bad) = parsed.iter().find(|r| r.len() != cols) {
        return Err(Error::Format(format!(
            "{ctx}: ragged rows ({} vs {cols} entries)",
            bad.len()
        )));
    }
    Ok(CMatrix::from_fn(n, cols, |i, j| parsed[i][j]))
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::Format(format!("missing field `{key}`")))
}

fn usize_field(obj: &Value, key: &str) -> Result<usize> {
    field(obj, key)?
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| Error::Format(format!("field `{key}` must be a non-negative integer")))
}

/// Parses `{"kind": "density"|"pure", "dim": n, "matrix": ...}` or
/// `{"kind": "pure", "dim": n, "amplitudes": ...}` and validates the state.
pub fn parse_state(text: &str) -> Result<StateFile> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let kind = field(&v, "kind")?
        .as_str()
        .ok_or_else(|| Error::Format("field `kind` must be a string".into()))?;
    let dim = usize_field(&v, "dim")?;

    if let Some(amps) = v.get("amplitudes") {
        if kind != "pure" {
            return Err(Error::Format(format!(
                "`amplitudes` requires kind \"pure\", got \"{kind}\""
            )));
        }
        let amps = vector_from_value(amps, "amplitudes")?;
        if amps.len() != dim {
            return Err(Error::DimMismatch {
                expected: dim,
                got: amps.len(),
            });
        }
        return Ok(StateFile::Pure(PureState::from_vector(amps)?));
    }

    let m = matrix_from_value(field(&v, "matrix")?, "matrix")?;
    if m.nrows() != dim {
        return Err(Error::DimMismatch {
            expected: dim,
            got: m.nrows(),
        });
    }
    let rho = DensityMatrix::new(m)?;
    match kind {
        "density" => Ok(StateFile::Density(rho)),
        "pure" => {
            let purity = rho.purity();
            if (purity - 1.0).abs() > crate::tol::REJECT {
                return Err(Error::Format(format!("kind \"pure\" but tr(rho^2) = {purity}")));
            }
            Ok(StateFile::Density(rho))
        }
        other => Err(Error::Format(format!("unknown state kind \"{other}\""))),
    }
}

pub fn density_to_value(rho: &DensityMatrix) -> Value {
    json!({"kind": "density", "dim": rho.dim(), "matrix": matrix_to_value(rho.matrix())})
}

pub fn pure_to_value(psi: &PureState) -> Value {
    json!({"kind": "pure", "dim": psi.dim(), "amplitudes": vector_to_value(psi.amplitudes())})
}

pub fn state_to_value(state: &StateFile) -> Value {
    match state {
        StateFile::Pure(psi) => pure_to_value(psi),
        StateFile::Density(rho) => density_to_value(rho),
    }
}

pub fn write_state(state: &StateFile) -> Result<String> {
    to_json_string(&state_to_value(state))
}

/// Parses `{"n": k, "detector_dim": m, "detectors": [[[re, im], ...], ...]}`.
pub fn parse_detectors(text: &str) -> Result<DetectorConfig> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let n = usize_field(&v, "n")?;
    let m = usize_field(&v, "detector_dim")?;
    let list = field(&v, "detectors")?
        .as_array()
        .ok_or_else(|| Error::Format("field `detectors` must be an array".into()))?;
    if list.len() != n {
        return Err(Error::DimMismatch {
            expected: n,
            got: list.len(),
        });
    }
    let detectors = list
        .iter()
        .enumerate()
        .map(|(i, d)| vector_from_value(d, &format!("detectors[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    DetectorConfig::new(m, detectors)
}

pub fn detectors_to_value(cfg: &DetectorConfig) -> Value {
    json!({
        "n": cfg.paths(),
        "detector_dim": cfg.detector_dim(),
        "detectors": cfg.detectors().iter().map(vector_to_value).collect::<Vec<_>>(),
    })
}

pub fn ensemble_to_value(ens: &Ensemble) -> Value {
    json!({
        "weights": ens.weights(),
        "states": ens.states().iter().map(|s| vector_to_value(s.amplitudes())).collect::<Vec<_>>(),
        "reconstruction_error": ens.reconstruction_error(),
    })
}

pub fn roof_result_to_value(r: &RoofResult, measure: &str, seed: u64) -> Value {
    json!({
        "measure_name": measure,
        "value": r.value,
        "value_is_upper_bound": true,
        "m": r.m,
        "restarts_used": r.restarts_used,
        "iterations": r.iterations,
        "converged": r.converged,
        "spread": r.spread,
        "restart_values": r.restart_values,
        "seed": seed,
        "ensemble": ensemble_to_value(&r.ensemble),
    })
}

/// Joins already formatted CSV fields. Floats should go through [`format_f64`].
pub fn csv_line(fields: &[String]) -> String {
    let mut line = fields.join(",");
    line.push('\n');
    line
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{random_density, random_pure};
    use proptest::prelude::*;

    #[test]
    fn seventeen_digit_output() {
        let s = to_json_string(&json!({"x": 0.1, "y": [1.0, -2.5e-300]})).unwrap();
        assert_eq!(
            s,
            "{\"x\":1.0000000000000001e-1,\"y\":[1.0000000000000000e0,-2.5000000000000000e-300]}\n"
        );
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["x"].as_f64(), Some(0.1));
    }

    #[test]
    fn state_file_examples() {
        let text = r#"{"kind":"density","dim":2,"matrix":[[[0.5,0],[0.5,0]],[[0.5,0],[0.5,0]]]}"#;
        let s = parse_state(text).unwrap();
        assert_eq!(s.dim(), 2);
        let text = r#"{"kind":"pure","dim":2,"amplitudes":[[0.6,0],[0,0.8]]}"#;
        assert!(matches!(parse_state(text).unwrap(), StateFile::Pure(_)));

        let bad = [
            r#"{"kind":"density","dim":2,"matrix":[[[0.5,0],[0.6,0]],[[0.6,0],[0.5,0]]]}"#,
            r#"{"kind":"density","dim":3,"matrix":[[[0.5,0],[0.5,0]],[[0.5,0],[0.5,0]]]}"#,
            r#"{"kind":"pure","dim":2,"amplitudes":[[0.6,0],[0,0.9]]}"#,
            r#"{"kind":"pure","dim":2,"matrix":[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]}"#,
            r#"{"kind":"mixed","dim":2,"matrix":[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]}"#,
            r#"{"dim":2}"#,
            r#"not json"#,
        ];
        for b in bad {
            assert!(parse_state(b).is_err(), "{b}");
        }
    }

    #[test]
    fn detector_file_round_trip() {
        let cfg = DetectorConfig::new(
            2,
            (0..3)
                .map(|i| random_pure(2, i).unwrap().amplitudes().clone())
                .collect(),
        )
        .unwrap();
        let text = to_json_string(&detectors_to_value(&cfg)).unwrap();
        assert_eq!(parse_detectors(&text).unwrap(), cfg);
        assert!(parse_detectors(r#"{"n":3,"detector_dim":2,"detectors":[]}"#).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn density_files_round_trip_exactly(dim in 2usize..=6, rank_seed in 0usize..16, seed in any::<u64>()) {
            let rank = 1 + rank_seed % dim;
            let rho = random_density(dim, rank, seed).unwrap();
            let text = write_state(&StateFile::Density(rho.clone())).unwrap();
            let back = parse_state(&text).unwrap().to_density();
            prop_assert_eq!(back.matrix(), rho.matrix());
        }

        #[test]
        fn pure_files_round_trip_exactly(dim in 2usize..=8, seed in any::<u64>()) {
            let psi = random_pure(dim, seed).unwrap();
            let text = write_state(&StateFile::Pure(psi.clone())).unwrap();
            prop_assert_eq!(parse_state(&text).unwrap(), StateFile::Pure(psi));
        }
    }
}
