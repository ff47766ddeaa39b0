//! Versioned JSON descriptor of a built code.
//!
//! The printer is deterministic: keys keep declaration order, indentation is
//! two spaces and arrays of scalars stay on one line, so a descriptor diffs
//! cleanly and rebuilding a preset reproduces it byte for byte.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::automorphism::{AssemblyMode, AutoMap};
use crate::curve::{CurveFamily, Monomial, Point};
use crate::forge::{Claims, FactorSpec, InjectivityFailure, LrcCode, RecoveryEntry};
use crate::gf::{Fe, Field, FieldDescriptor};
use crate::matrix::Matrix;

pub const FORMAT: &str = "lrc-code";
pub const VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DescriptorError {
    #[error("malformed descriptor: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported descriptor {format} version {version}")]
    Version { format: String, version: u32 },
    #[error("invalid descriptor: {0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> DescriptorError {
    DescriptorError::Invalid(msg.into())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Wire {
    format: String,
    version: u32,
    preset: String,
    params: Vec<(String, i64)>,
    field: FieldDescriptor,
    curve: CurveFamily,
    mode: AssemblyMode,
    generators: Vec<Vec<AutoMap>>,
    specs: Vec<FactorSpec>,
    localities: Vec<usize>,
    max_pole: u64,
    max_pole_v: u64,
    d_design: i64,
    basis: Vec<Monomial>,
    places: Vec<Vec<Fe>>,
    matrix: Vec<Vec<Fe>>,
    recovery: Vec<Vec<RecoveryEntry>>,
    claims: Claims,
    discrepancies: Vec<String>,
    notes: Vec<String>,
    injectivity_failures: Vec<InjectivityFailure>,
}

pub fn to_value(code: &LrcCode) -> Value {
    let arity = code.curve.arity();
    let wire = Wire {
        format: FORMAT.into(),
        version: VERSION,
        preset: code.preset.clone(),
        params: code.params.clone(),
        field: code.field.descriptor(),
        curve: code.curve,
        mode: code.mode,
        generators: code.generators.clone(),
        specs: code.specs.clone(),
        localities: code.localities.clone(),
        max_pole: code.max_pole,
        max_pole_v: code.max_pole_v,
        d_design: code.d_design,
        basis: code.basis.clone(),
        places: code.places.iter().map(|p| p.0[..arity].to_vec()).collect(),
        matrix: code.matrix.row_vecs(),
        recovery: code.recovery.clone(),
        claims: code.claims.clone(),
        discrepancies: code.discrepancies.clone(),
        notes: code.notes.clone(),
        injectivity_failures: code.injectivity_failures.clone(),
    };
    serde_json::to_value(wire).expect("descriptor fields serialise")
}

pub fn to_string(code: &LrcCode) -> String {
    let mut out = String::new();
    print_value(&to_value(code), 0, &mut out);
    out.push('\n');
    out
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn print_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&item.to_string());
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                print_value(item, indent + 1, out);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (key, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                print_value(item, indent + 1, out);
                if i + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

/// Parses and structurally validates a descriptor. Semantic properties
/// (locality, matrix against basis) are left to the auditor.
pub fn from_str(text: &str) -> Result<LrcCode, DescriptorError> {
    let w: Wire = serde_json::from_str(text)?;
    if w.format != FORMAT || w.version != VERSION {
        return Err(DescriptorError::Version { format: w.format, version: w.version });
    }
    let field = Field::from_descriptor(&w.field).map_err(|e| invalid(format!("field: {e}")))?;
    w.curve.validate().map_err(|e| invalid(format!("curve: {e}")))?;
    let ambient = w.curve.field().map_err(|e| invalid(format!("curve: {e}")))?;
    if ambient.descriptor() != w.field {
        return Err(invalid("field does not match the curve's ambient field"));
    }
    let arity = w.curve.arity();
    let elem = |a: Fe, what: &str| {
        if field.contains(a) {
            Ok(a)
        } else {
            Err(invalid(format!("{what}: {} is not a field element", a.0)))
        }
    };

    let slots = w.localities.len();
    if w.generators.len() != slots || w.specs.len() != slots {
        return Err(invalid("generators, specs and localities differ in length"));
    }
    for g in w.generators.iter().flatten() {
        elem(g.a, "generator")?;
        elem(g.beta, "generator")?;
        if g.gamma.is_some() != (arity == 3) {
            return Err(invalid("generator arity does not match the curve"));
        }
        if let Some(c) = g.gamma {
            elem(c, "generator")?;
        }
    }

    let mut places = Vec::with_capacity(w.places.len());
    for (i, p) in w.places.iter().enumerate() {
        if p.len() != arity {
            return Err(invalid(format!("place {i} has {} coordinates, expected {arity}", p.len())));
        }
        for &c in p {
            elem(c, "place")?;
        }
        if !w.curve.satisfies_curve(&field, p).map_err(|e| invalid(e.to_string()))? {
            return Err(invalid(format!("place {i} is not on the curve")));
        }
        let mut coords = [Fe::ZERO; 3];
        coords[..arity].copy_from_slice(p);
        places.push(Point(coords));
    }
    let n = places.len();
    if n == 0 {
        return Err(invalid("no places"));
    }

    if w.matrix.is_empty() || w.matrix.len() != w.basis.len() {
        return Err(invalid("matrix rows do not match the basis"));
    }
    for (r, row) in w.matrix.iter().enumerate() {
        if row.len() != n {
            return Err(invalid(format!("matrix row {r} has length {}, expected {n}", row.len())));
        }
        for &c in row {
            elem(c, "matrix")?;
        }
    }
    let matrix = Matrix::from_rows(w.matrix);

    if w.recovery.len() != n {
        return Err(invalid("recovery structure does not cover every coordinate"));
    }
    for (c, sets) in w.recovery.iter().enumerate() {
        for e in sets {
            if e.factor >= slots {
                return Err(invalid(format!("coordinate {c}: factor {} out of range", e.factor)));
            }
            if let Some(&m) = e.members.iter().find(|&&m| m >= n) {
                return Err(invalid(format!("coordinate {c}: member {m} out of range")));
            }
            if e.abscissae.len() != e.members.len() {
                return Err(invalid(format!("coordinate {c}: abscissae do not match members")));
            }
            for &a in e.abscissae.iter().chain([&e.target]) {
                elem(a, "abscissa")?;
            }
        }
    }

    Ok(LrcCode {
        preset: w.preset,
        params: w.params,
        curve: w.curve,
        field,
        mode: w.mode,
        generators: w.generators,
        specs: w.specs,
        places,
        basis: w.basis,
        matrix,
        recovery: w.recovery,
        localities: w.localities,
        max_pole: w.max_pole,
        max_pole_v: w.max_pole_v,
        d_design: w.d_design,
        claims: w.claims,
        discrepancies: w.discrepancies,
        notes: w.notes,
        injectivity_failures: w.injectivity_failures,
    })
}

/// Coordinates where the matrix differs from the basis evaluated at the places.
pub fn matrix_mismatches(code: &LrcCode) -> Vec<usize> {
    (0..code.n())
        .filter(|&c| {
            code.basis
                .iter()
                .enumerate()
                .any(|(r, m)| m.eval(&code.field, &code.places[c]) != code.matrix.get(r, c))
        })
        .collect()
}
