//! JSON file formats for the core types, with canonical (byte-reproducible)
//! export and located diagnostics on import.
//!
//! Dirichlet series: `{"form":"dirichlet","terms":[[n,[re,im]],...]}` with
//! indices ascending. Power series replace the integer key with the
//! multi-index array form `[[position,exponent],...]`. Sequence specs are
//! tagged by `"family"`. Round trips are lossless at double precision.

use std::fmt;

use bohr_core::kernel::{MultiIndex, PrimeTable};
use bohr_core::seqlab::{AsymptoticTag, BEstimate, SeqKind, SequenceSpec};
use bohr_core::series::{CoeffSeries, SeriesForm};
use bohr_core::Complex64;
use serde::{Deserialize, Serialize};

/// Import failure with a field-level location.
#[derive(Debug)]
pub struct ParseError {
    /// `path/field` location, e.g. `terms[3]`.
    pub location: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl std::error::Error for ParseError {}

impl ParseError {
    fn new(location: impl Into<String>, message: impl Into<String>) -> Self {
        ParseError { location: location.into(), message: message.into() }
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesDto {
    form: String,
    terms: Vec<(serde_json::Value, (f64, f64))>,
}

fn multi_index_to_json(alpha: &MultiIndex) -> serde_json::Value {
    serde_json::Value::Array(
        alpha
            .entries()
            .iter()
            .map(|&(p, e)| serde_json::json!([p, e]))
            .collect(),
    )
}

fn multi_index_from_json(v: &serde_json::Value, loc: &str) -> Result<MultiIndex, ParseError> {
    let arr = v
        .as_array()
        .ok_or_else(|| ParseError::new(loc, "multi-index must be an array of [position,exponent] pairs"))?;
    let mut entries = Vec::with_capacity(arr.len());
    for (i, pair) in arr.iter().enumerate() {
        let pair = pair
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| ParseError::new(format!("{loc}[{i}]"), "expected [position,exponent]"))?;
        let p = pair[0]
            .as_u64()
            .filter(|&p| p >= 1 && p <= u32::MAX as u64)
            .ok_or_else(|| ParseError::new(format!("{loc}[{i}]"), "position must be a positive integer"))?;
        let e = pair[1]
            .as_u64()
            .filter(|&e| e >= 1 && e <= u32::MAX as u64)
            .ok_or_else(|| ParseError::new(format!("{loc}[{i}]"), "exponent must be a positive integer"))?;
        entries.push((p as u32, e as u32));
    }
    for w in entries.windows(2) {
        if w[0].0 >= w[1].0 {
            return Err(ParseError::new(loc, "positions must be strictly ascending"));
        }
    }
    MultiIndex::from_entries(entries).map_err(|e| ParseError::new(loc, e.to_string()))
}

/// Canonical JSON for a coefficient series (support in map order).
pub fn export_series(s: &CoeffSeries) -> String {
    let dto = match s.form() {
        SeriesForm::Dirichlet => SeriesDto {
            form: "dirichlet".into(),
            terms: s
                .dirichlet_terms()
                .expect("form checked")
                .iter()
                .map(|(&n, c)| (serde_json::json!(n), (c.re, c.im)))
                .collect(),
        },
        SeriesForm::Power => SeriesDto {
            form: "power".into(),
            terms: s
                .power_terms()
                .expect("form checked")
                .iter()
                .map(|(a, c)| (multi_index_to_json(a), (c.re, c.im)))
                .collect(),
        },
    };
    serde_json::to_string(&dto).expect("series serialization cannot fail")
}

/// Parses a series file, rejecting duplicate keys and malformed entries with
/// a field location.
pub fn import_series(text: &str, table: &PrimeTable) -> Result<CoeffSeries, ParseError> {
    let dto: SeriesDto = serde_json::from_str(text)
        .map_err(|e| ParseError::new(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    for (i, (_, (re, im))) in dto.terms.iter().enumerate() {
        if !re.is_finite() || !im.is_finite() {
            return Err(ParseError::new(format!("terms[{i}]"), "coefficient must be finite"));
        }
    }
    match dto.form.as_str() {
        "dirichlet" => {
            let mut seen = std::collections::BTreeSet::new();
            let mut terms = Vec::with_capacity(dto.terms.len());
            for (i, (key, (re, im))) in dto.terms.iter().enumerate() {
                let n = key.as_u64().filter(|&n| n >= 1).ok_or_else(|| {
                    ParseError::new(format!("terms[{i}]"), "Dirichlet index must be a positive integer")
                })?;
                if !seen.insert(n) {
                    return Err(ParseError::new(
                        format!("terms[{i}]"),
                        format!("duplicate Dirichlet index {n}"),
                    ));
                }
                terms.push((n, Complex64::new(*re, *im)));
            }
            CoeffSeries::dirichlet(terms, table)
                .map_err(|e| ParseError::new("terms", e.to_string()))
        }
        "power" => {
            let mut seen = std::collections::BTreeSet::new();
            let mut terms = Vec::with_capacity(dto.terms.len());
            for (i, (key, (re, im))) in dto.terms.iter().enumerate() {
                let alpha = multi_index_from_json(key, &format!("terms[{i}]"))?;
                if !seen.insert(alpha.clone()) {
                    return Err(ParseError::new(
                        format!("terms[{i}]"),
                        "duplicate power-series index",
                    ));
                }
                terms.push((alpha, Complex64::new(*re, *im)));
            }
            Ok(CoeffSeries::power(terms))
        }
        other => Err(ParseError::new("form", format!("unknown form {other:?}"))),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
enum SequenceDto {
    Powerlog { c: f64, a: f64, b: f64 },
    Primepower { c: f64, a: f64 },
    Counterexample25 { a: u32 },
    Conversegap,
    Sampled {
        values: Vec<f64>,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        eventually_zero: bool,
    },
}

pub fn export_sequence(z: &SequenceSpec) -> String {
    let dto = match z.kind() {
        SeqKind::PowerLog { c, a, b } => SequenceDto::Powerlog { c: *c, a: *a, b: *b },
        SeqKind::PrimePower { c, a } => SequenceDto::Primepower { c: *c, a: *a },
        SeqKind::Counterexample25 { base } => SequenceDto::Counterexample25 { a: *base },
        SeqKind::ConverseGap => SequenceDto::Conversegap,
        SeqKind::Sampled(values) => SequenceDto::Sampled {
            values: values.clone(),
            eventually_zero: z.tag() == Some(AsymptoticTag::EventuallyZero),
        },
    };
    serde_json::to_string(&dto).expect("sequence serialization cannot fail")
}

pub fn import_sequence(text: &str) -> Result<SequenceSpec, ParseError> {
    let dto: SequenceDto = serde_json::from_str(text)
        .map_err(|e| ParseError::new(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    let built = match dto {
        SequenceDto::Powerlog { c, a, b } => SequenceSpec::power_log(c, a, b),
        SequenceDto::Primepower { c, a } => SequenceSpec::prime_power(c, a),
        SequenceDto::Counterexample25 { a } => SequenceSpec::counterexample25(a),
        SequenceDto::Conversegap => Ok(SequenceSpec::converse_gap()),
        SequenceDto::Sampled { values, eventually_zero } => {
            if eventually_zero {
                SequenceSpec::finitely_supported(values)
            } else {
                SequenceSpec::sampled(values)
            }
        }
    };
    built.map_err(|e| ParseError::new("family", e.to_string()))
}

/// JSON value for a possibly non-finite real (`"inf"`, `"-inf"`).
pub fn json_real(x: f64) -> serde_json::Value {
    if x.is_finite() {
        serde_json::json!(x)
    } else if x > 0.0 {
        serde_json::json!("inf")
    } else if x < 0.0 {
        serde_json::json!("-inf")
    } else {
        serde_json::json!("nan")
    }
}

/// Checkpoint table as JSON.
pub fn b_estimate_json(est: &BEstimate) -> serde_json::Value {
    serde_json::json!({
        "checkpoints": est.checkpoints.iter()
            .map(|&(n, v)| serde_json::json!([n, v]))
            .collect::<Vec<_>>(),
        "tail_sup": est.tail_sup,
        "analytic_limit": est.analytic_limit.map(json_real),
        "b_value": json_real(est.b_value),
        "basis": format!("{:?}", est.basis),
        "horizon": est.horizon,
    })
}

/// Checkpoint table as CSV (`n,value` per line).
pub fn b_estimate_csv(est: &BEstimate) -> String {
    let mut out = String::from("n,value\n");
    for &(n, v) in &est.checkpoints {
        out.push_str(&format!("{n},{v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> PrimeTable {
        PrimeTable::new(64, 1000)
    }

    #[test]
    fn series_round_trip_is_byte_identical() {
        let t = table();
        let d = CoeffSeries::dirichlet(
            [
                (6, Complex64::new(-1.0, 0.25)),
                (1, Complex64::new(3.5, 0.0)),
                (2, Complex64::new(0.0, 1.0 / 3.0)),
            ],
            &t,
        )
        .unwrap();
        let text = export_series(&d);
        let back = import_series(&text, &t).unwrap();
        assert_eq!(back, d);
        assert_eq!(export_series(&back), text);

        let p = bohr_core::series::bohr_transform(&d, &t).unwrap();
        let text = export_series(&p);
        let back = import_series(&text, &t).unwrap();
        assert_eq!(export_series(&back), text);
    }

    #[test]
    fn duplicate_keys_are_rejected_with_location() {
        let t = table();
        let err = import_series(
            r#"{"form":"dirichlet","terms":[[2,[1.0,0.0]],[2,[0.5,0.0]]]}"#,
            &t,
        )
        .unwrap_err();
        assert_eq!(err.location, "terms[1]");
        assert!(err.message.contains("duplicate"));
    }

    #[test]
    fn malformed_series_report_positions() {
        let t = table();
        let err = import_series(r#"{"form":"dirichlet","terms":[[0,[1.0,0.0]]]}"#, &t).unwrap_err();
        assert_eq!(err.location, "terms[0]");
        let err = import_series(r#"{"form":"powerish","terms":[]}"#, &t).unwrap_err();
        assert_eq!(err.location, "form");
        let err = import_series(r#"{"form":"dirichlet""#, &t).unwrap_err();
        assert!(err.location.starts_with("line 1"));
    }

    #[test]
    fn sequence_round_trips() {
        for text in [
            r#"{"family":"powerlog","c":1.0,"a":0.5,"b":0.0}"#,
            r#"{"family":"primepower","c":1.0,"a":0.5}"#,
            r#"{"family":"counterexample25","a":2}"#,
            r#"{"family":"conversegap"}"#,
            r#"{"family":"sampled","values":[0.5,0.25]}"#,
            r#"{"family":"sampled","values":[0.5,0.25],"eventually_zero":true}"#,
        ] {
            let z = import_sequence(text).unwrap();
            assert_eq!(export_sequence(&z), text);
        }
        assert!(import_sequence(r#"{"family":"powerlog","c":-1.0,"a":0.5,"b":0.0}"#).is_err());
        assert!(import_sequence(r#"{"family":"powerlog","c":1.0}"#).is_err());
    }
}
