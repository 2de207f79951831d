//! JSON instance format.
//!
//! ```json
//! {
//!   "picard": {"basis": ["s", "f"], "gram": [[-2, 1], [1, 0]]},
//!   "polarization": [1, 3],
//!   "mukai_vector": {"r": 2, "c1": [1, 3], "s": 1},
//!   "strata": [{"u": {"r": 1, "c1": [0, 1], "s": 0}, "mult": 1}],
//!   "alpha": {"c1": ["1/2", 0]}
//! }
//! ```
//!
//! Rationals are JSON integers or strings `"p"` / `"p/q"`. `strata` and
//! `alpha` are optional; the rank and `ρ` components of `α` are derived.

use std::fmt;
use std::sync::Arc;

use num::ToPrimitive;
use serde::ser::{Serialize, Serializer};
use serde_json::{json, Map, Value};

use crate::arith::{format_rational, parse_rational, Int, Rat};
use crate::lattice::{LatticeError, LatticeVector, PicardLattice};
use crate::mukai::MukaiVector;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaError {
    /// Field path such as `picard.gram[0][1]`, or `line L, column C` for syntax errors.
    pub location: String,
    pub message: String,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "schema error at {}: {}", self.location, self.message)
    }
}

impl std::error::Error for SchemaError {}

fn err(location: impl Into<String>, message: impl Into<String>) -> SchemaError {
    SchemaError { location: location.into(), message: message.into() }
}

/// A rational that serializes as a JSON integer when integral (and small)
/// and as a `"p/q"` string otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonRat(pub Rat);

impl Serialize for JsonRat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        rat_to_json(&self.0).serialize(s)
    }
}

pub fn rat_to_json(x: &Rat) -> Value {
    if x.is_integer() {
        if let Some(i) = x.numer().to_i64() {
            return json!(i);
        }
    }
    Value::String(format_rational(x))
}

pub fn rats_to_json(xs: &[Rat]) -> Value {
    Value::Array(xs.iter().map(rat_to_json).collect())
}

pub fn mukai_to_json(v: &MukaiVector) -> Value {
    let mut m = Map::new();
    m.insert("r".into(), rat_to_json(v.r()));
    m.insert("c1".into(), rats_to_json(v.c1().coords()));
    m.insert("s".into(), rat_to_json(v.s()));
    Value::Object(m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedInstance {
    pub lattice: Arc<PicardLattice>,
    pub h: LatticeVector,
    pub v: MukaiVector,
    pub strata: Option<Vec<(MukaiVector, Int)>>,
    pub alpha_c1: Option<LatticeVector>,
}

pub fn parse_instance(text: &str) -> Result<ParsedInstance, SchemaError> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| err(format!("line {}, column {}", e.line(), e.column()), e.to_string()))?;
    instance_from_value(&value)
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, SchemaError> {
    v.as_object().ok_or_else(|| err(path, "expected an object"))
}

fn field<'a>(m: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value, SchemaError> {
    m.get(key).ok_or_else(|| err(join(path, key), "missing field"))
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, SchemaError> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

fn integer(v: &Value, path: &str) -> Result<i64, SchemaError> {
    v.as_i64().ok_or_else(|| err(path, format!("expected an integer, found {v}")))
}

fn rational(v: &Value, path: &str) -> Result<Rat, SchemaError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rat::from_integer(i.into()))
            .ok_or_else(|| err(path, format!("expected an integer or \"p/q\" string, found {n}"))),
        Value::String(s) => parse_rational(s).ok_or_else(|| err(path, format!("cannot parse rational {s:?}"))),
        other => Err(err(path, format!("expected an integer or \"p/q\" string, found {other}"))),
    }
}

fn rational_list(v: &Value, path: &str, len: usize) -> Result<Vec<Rat>, SchemaError> {
    let items = array(v, path)?;
    if items.len() != len {
        return Err(err(path, format!("expected {len} entries, found {}", items.len())));
    }
    items.iter().enumerate().map(|(i, x)| rational(x, &format!("{path}[{i}]"))).collect()
}

fn mukai(v: &Value, path: &str, lattice: &Arc<PicardLattice>) -> Result<MukaiVector, SchemaError> {
    let m = object(v, path)?;
    let r = rational(field(m, path, "r")?, &join(path, "r"))?;
    let c1 = rational_list(field(m, path, "c1")?, &join(path, "c1"), lattice.rank())?;
    let s = rational(field(m, path, "s")?, &join(path, "s"))?;
    MukaiVector::new(Arc::clone(lattice), r, LatticeVector::new(c1), s).map_err(|e| err(path, e.to_string()))
}

fn lattice_error(e: LatticeError) -> SchemaError {
    match e {
        LatticeError::NotSymmetric { i, j } => err(format!("picard.gram[{i}][{j}]"), format!("gram is not symmetric: entry ({i},{j}) differs from ({j},{i})")),
        LatticeError::OddDiagonal { i } => err(format!("picard.gram[{i}][{i}]"), "diagonal entry is odd; the lattice must be even"),
        LatticeError::NotSquare { row, len, expected } => err(format!("picard.gram[{row}]"), format!("row has {len} entries, expected {expected}")),
        LatticeError::LabelCount { expected, found } => err("picard.basis", format!("expected {expected} labels, found {found}")),
        LatticeError::DuplicateLabel(l) => err("picard.basis", format!("duplicate label {l:?}")),
        other => err("picard", other.to_string()),
    }
}

pub fn instance_from_value(value: &Value) -> Result<ParsedInstance, SchemaError> {
    let top = object(value, "$")?;
    for key in top.keys() {
        if !["picard", "polarization", "mukai_vector", "strata", "alpha"].contains(&key.as_str()) {
            return Err(err(key.as_str(), "unknown field"));
        }
    }
    let picard = object(field(top, "", "picard")?, "picard")?;
    let basis: Vec<String> = array(field(picard, "picard", "basis")?, "picard.basis")?
        .iter()
        .enumerate()
        .map(|(i, b)| b.as_str().map(str::to_string).ok_or_else(|| err(format!("picard.basis[{i}]"), "expected a string")))
        .collect::<Result<_, _>>()?;
    let rows = array(field(picard, "picard", "gram")?, "picard.gram")?;
    let mut gram = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let path = format!("picard.gram[{i}]");
        let row = array(row, &path)?;
        let entries: Vec<i64> = row.iter().enumerate().map(|(j, x)| integer(x, &format!("{path}[{j}]"))).collect::<Result<_, _>>()?;
        gram.push(entries);
    }
    let lattice = Arc::new(PicardLattice::with_labels(&gram, basis).map_err(lattice_error)?);
    let n = lattice.rank();
    let h_items = array(field(top, "", "polarization")?, "polarization")?;
    if h_items.len() != n {
        return Err(err("polarization", format!("expected {n} entries, found {}", h_items.len())));
    }
    let h: Vec<Int> = h_items
        .iter()
        .enumerate()
        .map(|(i, x)| integer(x, &format!("polarization[{i}]")).map(Int::from))
        .collect::<Result<_, _>>()?;
    let h = LatticeVector::from_ints(h);
    let v = mukai(field(top, "", "mukai_vector")?, "mukai_vector", &lattice)?;
    let strata = match top.get("strata") {
        None | Some(Value::Null) => None,
        Some(list) => {
            let items = array(list, "strata")?;
            let mut out = Vec::with_capacity(items.len());
            for (i, item) in items.iter().enumerate() {
                let path = format!("strata[{i}]");
                let m = object(item, &path)?;
                let u = mukai(field(m, &path, "u")?, &join(&path, "u"), &lattice)?;
                let mult = integer(field(m, &path, "mult")?, &join(&path, "mult"))?;
                if mult <= 0 {
                    return Err(err(join(&path, "mult"), format!("multiplicity must be a positive integer, found {mult}")));
                }
                out.push((u, Int::from(mult)));
            }
            Some(out)
        }
    };
    let alpha_c1 = match top.get("alpha") {
        None | Some(Value::Null) => None,
        Some(a) => Some(parse_alpha_value(a, n)?),
    };
    Ok(ParsedInstance { lattice, h, v, strata, alpha_c1 })
}

fn parse_alpha_value(a: &Value, n: usize) -> Result<LatticeVector, SchemaError> {
    let m = object(a, "alpha")?;
    Ok(LatticeVector::new(rational_list(field(m, "alpha", "c1")?, "alpha.c1", n)?))
}

/// Parses a standalone `{"c1": [...]}` twist object.
pub fn parse_alpha(text: &str, rank: usize) -> Result<LatticeVector, SchemaError> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| err(format!("line {}, column {}", e.line(), e.column()), e.to_string()))?;
    parse_alpha_value(&value, rank)
}

/// Canonical JSON for an instance; `parse ∘ serialize` is the identity and
/// `serialize ∘ parse` is idempotent.
pub fn instance_to_value(p: &ParsedInstance) -> Value {
    let mut picard = Map::new();
    picard.insert("basis".into(), json!(p.lattice.labels()));
    picard.insert(
        "gram".into(),
        Value::Array(p.lattice.gram().iter().map(|row| Value::Array(row.iter().map(int_to_json).collect())).collect()),
    );
    let mut top = Map::new();
    top.insert("picard".into(), Value::Object(picard));
    top.insert("polarization".into(), rats_to_json(p.h.coords()));
    top.insert("mukai_vector".into(), mukai_to_json(&p.v));
    if let Some(strata) = &p.strata {
        let items = strata
            .iter()
            .map(|(u, a)| {
                let mut m = Map::new();
                m.insert("u".into(), mukai_to_json(u));
                m.insert("mult".into(), int_to_json(a));
                Value::Object(m)
            })
            .collect();
        top.insert("strata".into(), Value::Array(items));
    }
    if let Some(a) = &p.alpha_c1 {
        let mut m = Map::new();
        m.insert("c1".into(), rats_to_json(a.coords()));
        top.insert("alpha".into(), Value::Object(m));
    }
    Value::Object(top)
}

fn int_to_json(x: &Int) -> Value {
    match x.to_i64() {
        Some(i) => json!(i),
        None => Value::String(x.to_string()),
    }
}

pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
