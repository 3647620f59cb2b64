//! Certificate records and their deterministic JSON encoding.

use std::collections::BTreeMap;
use std::io;

use charfact::{ComplexMatrix, TruncatedMultiAnalytic};
use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::{json, Value};

/// Format revision written into every certificate.
pub const FORMAT_VERSION: u64 = 1;

/// One checked theorem instance: named residuals, each with its tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub theorem: &'static str,
    pub residuals: BTreeMap<String, f64>,
    pub tolerances: BTreeMap<String, f64>,
    pub k: Option<usize>,
    pub seed: Option<u64>,
    pub dims: BTreeMap<String, usize>,
    pub coefficients: Option<BTreeMap<String, Value>>,
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn new(theorem: &'static str) -> Self {
        Self {
            theorem,
            residuals: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            k: None,
            seed: None,
            dims: BTreeMap::new(),
            coefficients: None,
            notes: Vec::new(),
        }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    pub fn check(&mut self, name: &str, residual: f64, tolerance: f64) {
        self.residuals.insert(name.to_owned(), residual);
        self.tolerances.insert(name.to_owned(), tolerance);
    }

    pub fn dim(&mut self, name: &str, value: usize) {
        self.dims.insert(name.to_owned(), value);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Every residual is finite and within its tolerance.
    pub fn pass(&self) -> bool {
        self.failures().is_empty()
    }

    /// Names of the residuals that exceed their tolerance.
    pub fn failures(&self) -> Vec<&str> {
        self.residuals
            .iter()
            .filter(|(name, r)| !(r.is_finite() && **r <= self.tolerances[name.as_str()]))
            .map(|(name, _)| name.as_str())
            .collect()
    }

    pub fn to_value(&self) -> Value {
        let numbers = |m: &BTreeMap<String, f64>| -> Value {
            m.iter()
                .map(|(k, v)| (k.clone(), real(*v)))
                .collect::<serde_json::Map<_, _>>()
                .into()
        };
        let mut out = json!({
            "theorem": self.theorem,
            "residuals": numbers(&self.residuals),
            "tolerances": numbers(&self.tolerances),
            "pass": self.pass(),
            "k": self.k,
            "seed": self.seed,
            "versions": {
                "charfact": env!("CARGO_PKG_VERSION"),
                "format": FORMAT_VERSION,
            },
            "dims": self.dims,
            "notes": self.notes,
        });
        if let Some(c) = &self.coefficients {
            out["coefficients"] = json!(c);
        }
        out
    }
}

/// Non-finite values have no JSON spelling and become `null`.
fn real(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn complex_matrix_value(m: &ComplexMatrix) -> Value {
    let rows: Vec<Value> = (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| json!([real(m[(i, j)].re), real(m[(i, j)].im)]))
                .collect()
        })
        .collect();
    Value::Array(rows)
}

/// Coefficients keyed by word (`""` is the empty word).
pub fn coefficient_map(theta: &TruncatedMultiAnalytic) -> BTreeMap<String, Value> {
    theta
        .basis()
        .words()
        .iter()
        .zip(theta.coeffs())
        .map(|(w, c)| (w.to_string(), complex_matrix_value(c)))
        .collect()
}

/// Compact JSON with sorted keys and every float written with 17
/// significant digits.
struct FixedDigits;

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

pub fn to_json_string(value: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedDigits);
    value
        .serialize(&mut ser)
        .expect("serializing a JSON value into memory cannot fail");
    let mut text = String::from_utf8(buf).expect("serde_json writes UTF-8");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_follows_residuals() {
        let mut c = Certificate::new("3.2");
        c.check("a", 1e-12, 1e-8);
        assert!(c.pass());
        c.check("b", 2.0, 1.0);
        assert_eq!(c.failures(), vec!["b"]);
        c.check("b", f64::NAN, 1.0);
        assert!(!c.pass());
    }

    #[test]
    fn floats_have_seventeen_digits_and_keys_are_sorted() {
        let mut c = Certificate::new("3.1");
        c.check("zeta", 0.1, 1.0);
        c.check("alpha", 0.0, 1e-10);
        let text = to_json_string(&c.to_value());
        assert!(text.contains("\"zeta\":1.0000000000000001e-1"));
        assert!(text.find("\"alpha\"").unwrap() < text.find("\"zeta\"").unwrap());
        let parsed: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["residuals"]["zeta"].as_f64(), Some(0.1));
    }

    #[test]
    fn non_finite_residual_is_null_and_fails() {
        let mut c = Certificate::new("2.2");
        c.check("u", f64::INFINITY, 1e-10);
        let v = c.to_value();
        assert!(v["residuals"]["u"].is_null());
        assert_eq!(v["pass"], Value::Bool(false));
    }
}
