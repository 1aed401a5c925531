//! Curve corpora (CSV or JSON) and the `a1,a2,a3,a4,a6` / `x,y` argument syntax.

use std::collections::HashMap;
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{Curve, Point, RatPoint};
use crate::exact::{int_serde, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorpusError {
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("line {line}: {msg}")]
    Malformed { line: u64, msg: String },
    #[error("line {line}: duplicate label {label}")]
    Duplicate { line: u64, label: String },
    #[error("{label}: singular curve")]
    Singular { label: String },
    #[error("bad argument {arg:?}: {msg}")]
    Argument { arg: String, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub label: String,
    #[serde(with = "int_serde")]
    pub a1: BigInt,
    #[serde(with = "int_serde")]
    pub a2: BigInt,
    #[serde(with = "int_serde")]
    pub a3: BigInt,
    #[serde(with = "int_serde")]
    pub a4: BigInt,
    #[serde(with = "int_serde")]
    pub a6: BigInt,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub comment: String,
}

impl CorpusEntry {
    pub fn coefficients(&self) -> [BigInt; 5] {
        [self.a1.clone(), self.a2.clone(), self.a3.clone(), self.a4.clone(), self.a6.clone()]
    }

    pub fn curve(&self) -> Curve {
        Curve::from_bigints(&self.coefficients()).expect("validated at parse time")
    }

    /// Leading integer of a label like `15.a3`.
    pub fn conductor(&self) -> Option<u64> {
        self.label.split('.').next()?.parse().ok()
    }
}

/// Reads a corpus file; JSON when the first non-blank character is `[`, CSV otherwise.
pub fn parse_corpus(path: &Path) -> Result<Vec<CorpusEntry>, CorpusError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CorpusError::Io { path: path.display().to_string(), msg: e.to_string() })?;
    parse_corpus_str(&text)
}

pub fn parse_corpus_str(text: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    if text.trim_start().starts_with('[') {
        parse_corpus_json(text)
    } else {
        parse_corpus_csv(text)
    }
}

const HEADER: [&str; 6] = ["label", "a1", "a2", "a3", "a4", "a6"];

/// CSV rows `label,a1,a2,a3,a4,a6[,comment]`. Lines starting with `#` are skipped; an optional
/// header row names the columns.
pub fn parse_corpus_csv(text: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut out = Vec::new();
    let mut lines = Vec::new();
    let mut first = true;
    // one reader per physical line keeps line numbers exact across comment lines
    for (idx, raw) in text.lines().enumerate() {
        let line = idx as u64 + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let rec = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(raw.as_bytes())
            .records()
            .next()
            .expect("nonblank line yields a record")
            .map_err(|e| CorpusError::Malformed { line, msg: e.to_string() })?;
        if first && rec.get(0) == Some("label") {
            first = false;
            let names: Vec<&str> = rec.iter().take(6).collect();
            if names != HEADER || rec.len() > 7 {
                return Err(CorpusError::Malformed {
                    line,
                    msg: format!(
                        "header must be label,a1,a2,a3,a4,a6[,comment], got {:?}",
                        rec.iter().collect::<Vec<_>>()
                    ),
                });
            }
            continue;
        }
        first = false;
        if rec.len() != 6 && rec.len() != 7 {
            return Err(CorpusError::Malformed { line, msg: format!("expected 6 or 7 fields, got {}", rec.len()) });
        }
        let label = rec[0].to_string();
        if label.is_empty() {
            return Err(CorpusError::Malformed { line, msg: "empty label".into() });
        }
        let mut a: Vec<BigInt> = Vec::with_capacity(5);
        for (k, field) in rec.iter().skip(1).take(5).enumerate() {
            let v = field.parse::<BigInt>().map_err(|_| CorpusError::Malformed {
                line,
                msg: format!("{} = {field:?} is not an integer", HEADER[k + 1]),
            })?;
            a.push(v);
        }
        let [a1, a2, a3, a4, a6]: [BigInt; 5] = a.try_into().expect("five fields");
        let comment = rec.get(6).unwrap_or("").to_string();
        out.push(CorpusEntry { label, a1, a2, a3, a4, a6, comment });
        lines.push(line);
    }
    validate(&out, &lines)?;
    Ok(out)
}

pub fn parse_corpus_json(text: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    let out: Vec<CorpusEntry> =
        serde_json::from_str(text).map_err(|e| CorpusError::Malformed { line: e.line() as u64, msg: e.to_string() })?;
    // serde_json does not keep per-element positions; number entries from 1
    let lines: Vec<u64> = (1..=out.len() as u64).collect();
    validate(&out, &lines)?;
    Ok(out)
}

fn validate(entries: &[CorpusEntry], lines: &[u64]) -> Result<(), CorpusError> {
    let mut seen: HashMap<&str, u64> = HashMap::new();
    for (e, &line) in entries.iter().zip(lines) {
        if seen.insert(&e.label, line).is_some() {
            return Err(CorpusError::Duplicate { line, label: e.label.clone() });
        }
        if Curve::from_bigints(&e.coefficients()).is_err() {
            return Err(CorpusError::Singular { label: e.label.clone() });
        }
    }
    Ok(())
}

fn arg_err(arg: &str, msg: impl Into<String>) -> CorpusError {
    CorpusError::Argument { arg: arg.to_string(), msg: msg.into() }
}

fn rationals(arg: &str, n: usize) -> Result<Vec<Rational>, CorpusError> {
    let parts: Vec<&str> = arg.split(',').map(str::trim).collect();
    if parts.len() != n {
        return Err(arg_err(arg, format!("expected {n} comma-separated values")));
    }
    parts
        .iter()
        .map(|p| p.parse::<Rational>().map_err(|_| arg_err(arg, format!("{p:?} is not a rational number"))))
        .collect()
}

/// `a1,a2,a3,a4,a6`, rational entries allowed.
pub fn parse_curve_arg(arg: &str) -> Result<Curve, CorpusError> {
    let a = rationals(arg, 5)?;
    let [a1, a2, a3, a4, a6]: [Rational; 5] = a.try_into().expect("five values");
    Curve::new(a1, a2, a3, a4, a6).map_err(|_| arg_err(arg, "singular curve"))
}

/// `x,y` with rational entries.
pub fn parse_point_arg(arg: &str) -> Result<RatPoint, CorpusError> {
    let v = rationals(arg, 2)?;
    let [x, y]: [Rational; 2] = v.try_into().expect("two values");
    Ok(Point::Affine(x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ri;

    #[test]
    fn csv_row_and_comments() {
        let text = "# corpus\nlabel,a1,a2,a3,a4,a6,comment\n11.a3,0,-1,1,0,0,cremona 11a3\n\n# tail\n";
        let v = parse_corpus_csv(text).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].label, "11.a3");
        assert_eq!(v[0].comment, "cremona 11a3");
        assert_eq!(v[0].curve().disc(), &ri(-11));
        assert_eq!(v[0].conductor(), Some(11));
    }

    #[test]
    fn headerless_rows_accepted() {
        assert_eq!(parse_corpus_csv("a,0,0,0,-1,0\n").unwrap().len(), 1);
    }

    #[test]
    fn csv_errors_name_the_line() {
        let dup = "label,a1,a2,a3,a4,a6\nx,0,0,0,-1,0\nx,0,0,0,1,0\n";
        assert_eq!(parse_corpus_csv(dup), Err(CorpusError::Duplicate { line: 3, label: "x".into() }));
        let bad = "label,a1,a2,a3,a4,a6\n#c\nx,0,0,0,q,0\n";
        let got = parse_corpus_csv(bad);
        assert!(matches!(got, Err(CorpusError::Malformed { line: 3, .. })), "{got:?}");
        let short = "x,0,0,0,1\n";
        assert!(matches!(parse_corpus_csv(short), Err(CorpusError::Malformed { line: 1, .. })));
        let sing = "s,0,0,0,0,0\n";
        assert_eq!(parse_corpus_csv(sing), Err(CorpusError::Singular { label: "s".into() }));
        assert!(parse_corpus_csv("label,a1,a2,a3,a6,a4\n").is_err());
    }

    #[test]
    fn json_corpus() {
        let text = r#"[{"label":"11.a3","a1":0,"a2":-1,"a3":1,"a4":0,"a6":"0"}]"#;
        let v = parse_corpus_str(text).unwrap();
        assert_eq!(v[0].a2, BigInt::from(-1));
        let back: Vec<CorpusEntry> = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(back, v);
        assert!(matches!(parse_corpus_json("[{\"label\":1}]"), Err(CorpusError::Malformed { line: 1, .. })));
    }

    #[test]
    fn arguments() {
        let e = parse_curve_arg("0, 0, 0, -1, 0").unwrap();
        assert_eq!(e.disc(), &ri(64));
        assert!(parse_curve_arg("0,0,0,0,0").is_err());
        assert!(parse_curve_arg("0,0,0,-1").is_err());
        assert_eq!(parse_point_arg("1/2,-3").unwrap(), Point::Affine("1/2".parse().unwrap(), ri(-3)));
        assert!(parse_point_arg("1,,").is_err());
    }

    proptest::proptest! {
        #[test]
        fn parsers_never_panic(s in "[-0-9a-z,/#\"\n \\[\\]{}:.]{0,80}") {
            let _ = parse_corpus_str(&s);
            let _ = parse_corpus_json(&s);
            let _ = parse_curve_arg(&s);
            let _ = parse_point_arg(&s);
        }

        #[test]
        fn curve_arg_round_trip(a in proptest::array::uniform5(-50i64..50), den in 1i64..9) {
            let text = format!("{}/{den},{},{},{},{}", a[0], a[1], a[2], a[3], a[4]);
            if let Ok(e) = parse_curve_arg(&text) {
                let printed = e.coeffs().map(ToString::to_string).join(",");
                proptest::prop_assert_eq!(parse_curve_arg(&printed).unwrap(), e);
            }
        }
    }

    #[test]
    fn bundled_corpus_parses() {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/curves.csv");
        let v = parse_corpus(&path).unwrap();
        assert_eq!(v.len(), 309);
        for label in ["15.a3", "15.a4", "15.a8", "17.a2", "17.a3", "19.a2", "50.b1", "80.b1", "175.b3"] {
            assert!(v.iter().any(|e| e.label == label), "{label}");
        }
    }
}
