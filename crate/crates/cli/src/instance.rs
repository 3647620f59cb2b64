//! Instance files: tuples, couplings and unitaries as JSON.
//!
//! Matrices are arrays of rows; an entry is `[re, im]` or a bare real
//! number. A tuple is an array of `n` square matrices. An empty `"L"` is
//! the zero map between the defect spaces, whatever their dimensions.

use charfact::matkit::c64;
use charfact::{ComplexMatrix, RowOperator, UpperTriangularPair};
use serde_json::{json, Value};

use crate::certificate::complex_matrix_value;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

type Parsed<T> = Result<T, InputError>;

fn bad(msg: impl Into<String>) -> InputError {
    InputError(msg.into())
}

#[derive(Debug, Clone, Default)]
pub struct Instance {
    pub n: usize,
    pub t: Option<RowOperator>,
    pub a: Option<RowOperator>,
    pub b: Option<RowOperator>,
    pub l: Option<ComplexMatrix>,
    pub w: Option<ComplexMatrix>,
    pub f_dim: Option<usize>,
    pub fstar_dim: Option<usize>,
}

impl Instance {
    /// `T` as given, or assembled from `A`, `B` and `L`.
    pub fn tuple(&self, pair: Option<&UpperTriangularPair>) -> Parsed<RowOperator> {
        match (&self.t, pair) {
            (Some(t), _) => Ok(t.clone()),
            (None, Some(p)) => Ok(p.assemble()),
            (None, None) => Err(bad("instance needs \"T\" or \"A\", \"B\" and \"L\"")),
        }
    }

    pub fn components(&self) -> Parsed<(&RowOperator, &RowOperator)> {
        match (&self.a, &self.b) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(bad("instance needs \"A\" and \"B\"")),
        }
    }

    pub fn from_pair(pair: &UpperTriangularPair) -> Self {
        Self {
            n: pair.n(),
            a: Some(pair.a().clone()),
            b: Some(pair.b().clone()),
            l: Some(pair.l().clone()),
            ..Self::default()
        }
    }

    pub fn to_value(&self) -> Value {
        let tuple = |t: &RowOperator| Value::Array(t.blocks().iter().map(complex_matrix_value).collect());
        let mut spaces = serde_json::Map::new();
        let mut out = json!({ "n": self.n });
        if let Some(t) = &self.t {
            spaces.insert("h".into(), json!(t.dim_out()));
            out["T"] = tuple(t);
        }
        if let (Some(a), Some(b)) = (&self.a, &self.b) {
            spaces.insert("h1".into(), json!(a.dim_out()));
            spaces.insert("h2".into(), json!(b.dim_out()));
            out["A"] = tuple(a);
            out["B"] = tuple(b);
        }
        if let Some(f) = self.f_dim {
            spaces.insert("f".into(), json!(f));
        }
        if let Some(f) = self.fstar_dim {
            spaces.insert("fstar".into(), json!(f));
        }
        out["spaces"] = Value::Object(spaces);
        if let Some(l) = &self.l {
            out["L"] = complex_matrix_value(l);
        }
        if let Some(w) = &self.w {
            out["w"] = complex_matrix_value(w);
        }
        out
    }
}

fn parse_entry(v: &Value) -> Parsed<charfact::Complex64> {
    match v {
        Value::Number(x) => Ok(c64(x.as_f64().ok_or_else(|| bad("entry out of range"))?, 0.0)),
        Value::Array(pair) if pair.len() == 2 => {
            let part = |p: &Value| {
                p.as_f64()
                    .ok_or_else(|| bad(format!("complex parts must be numbers, got {p}")))
            };
            Ok(c64(part(&pair[0])?, part(&pair[1])?))
        }
        other => Err(bad(format!(
            "matrix entries are [re, im] pairs or numbers, got {other}"
        ))),
    }
}

/// Row-major matrix; an empty array is `0 x 0` and `[[], []]` is `2 x 0`.
pub fn parse_matrix(v: &Value, what: &str) -> Parsed<ComplexMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| bad(format!("{what} must be an array of rows")))?;
    let mut width = None;
    let mut entries = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| bad(format!("{what}: row {i} is not an array")))?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(bad(format!("{what}: ragged rows ({w} and {} entries)", row.len())))
            }
            _ => {}
        }
        for e in row {
            entries.push(parse_entry(e).map_err(|e| bad(format!("{what}: {e}")))?);
        }
    }
    let cols = width.unwrap_or(0);
    Ok(ComplexMatrix::from_row_slice(rows.len(), cols, &entries))
}

fn parse_tuple(v: &Value, n: usize, dim: usize, what: &str) -> Parsed<RowOperator> {
    let items = v
        .as_array()
        .ok_or_else(|| bad(format!("{what} must be an array of {n} matrices")))?;
    if items.len() != n {
        return Err(bad(format!("{what} has {} matrices but n = {n}", items.len())));
    }
    let blocks = items
        .iter()
        .enumerate()
        .map(|(j, m)| {
            let m = parse_matrix(m, &format!("{what}[{j}]"))?;
            if m.shape() != (dim, dim) {
                return Err(bad(format!(
                    "{what}[{j}] is {}x{}, expected {dim}x{dim}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            Ok(m)
        })
        .collect::<Parsed<Vec<_>>>()?;
    RowOperator::new(blocks).map_err(|e| bad(format!("{what}: {e}")))
}

fn dim_field(spaces: Option<&Value>, key: &str) -> Parsed<Option<usize>> {
    match spaces.and_then(|s| s.get(key)) {
        None => Ok(None),
        Some(v) => v
            .as_u64()
            .map(|d| Some(d as usize))
            .ok_or_else(|| bad(format!("spaces.{key} must be a nonnegative integer"))),
    }
}

pub fn parse_instance(text: &str) -> Parsed<Instance> {
    let doc: Value = serde_json::from_str(text).map_err(|e| bad(format!("malformed JSON: {e}")))?;
    let n = doc
        .get("n")
        .and_then(Value::as_u64)
        .filter(|&n| n >= 1)
        .ok_or_else(|| bad("\"n\" must be a positive integer"))? as usize;
    let spaces = doc.get("spaces");
    if spaces.is_some_and(|s| !s.is_object()) {
        return Err(bad("\"spaces\" must be an object"));
    }
    let mut inst = Instance {
        n,
        f_dim: dim_field(spaces, "f")?,
        fstar_dim: dim_field(spaces, "fstar")?,
        ..Instance::default()
    };
    if let Some(t) = doc.get("T") {
        let h = dim_field(spaces, "h")?.ok_or_else(|| bad("\"T\" needs spaces.h"))?;
        inst.t = Some(parse_tuple(t, n, h, "T")?);
    }
    match (doc.get("A"), doc.get("B")) {
        (Some(a), Some(b)) => {
            let h1 = dim_field(spaces, "h1")?.ok_or_else(|| bad("\"A\" needs spaces.h1"))?;
            let h2 = dim_field(spaces, "h2")?.ok_or_else(|| bad("\"B\" needs spaces.h2"))?;
            inst.a = Some(parse_tuple(a, n, h1, "A")?);
            inst.b = Some(parse_tuple(b, n, h2, "B")?);
        }
        (None, None) => {}
        _ => return Err(bad("\"A\" and \"B\" must be given together")),
    }
    if let Some(l) = doc.get("L") {
        inst.l = Some(parse_matrix(l, "L")?);
    }
    if let Some(w) = doc.get("w") {
        inst.w = Some(parse_matrix(w, "w")?);
    }
    if inst.t.is_none() && inst.a.is_none() {
        return Err(bad("instance needs \"T\" or \"A\" and \"B\""));
    }
    Ok(inst)
}
