//! JSON import/export: problem instances (exact rationals), quantum
//! strategies (doubles), and verification reports.
//!
//! Instance format:
//!
//! ```json
//! {
//!   "M": [[-1, 0], [0, 0]],
//!   "N": [[0, -1], [-1, 0]],
//!   "chi": "2",
//!   "prior": { "0,0,1": "1/5", "0,1,1": "1/5", "1,0,1": "1/5", "1,1,0": "2/5" },
//!   "labels": { "agent_a": ["uA0", "uA1"], "agent_b": ["uB0", "uB1"] }
//! }
//! ```
//!
//! Prior keys are `"ξA,ξB,ξW"`; omitted triples have zero mass; `labels` is
//! optional. Rational values are written as fraction strings (`"p/q"` or
//! `"p"`) and read back exactly; plain JSON numbers are also accepted and
//! converted to the exact rational value of the double they parse to (use
//! fraction strings for numbers like 1/5 that are not dyadic).
//!
//! Strategy format: the 4×4 density matrix and eight 2×2 projectors, each as
//! row-major arrays of `[re, im]` pairs, with projectors keyed `"A,ξ,u"` /
//! `"B,ξ,u"`.

use crate::quantum::{ComplexSquareMatrix, QuantumStrategy, C64};
use crate::scalar::{parse_big_fraction, scalar_to_string};
use crate::team::{
    make_instance_with_labels, ActionLabels, BinaryCostPair, JointPrior, ProblemInstance,
    TeamError,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::FromPrimitive;
use serde_json::{json, Map, Value};
use thiserror::Error;

/// Errors from reading instance or strategy files.
#[derive(Debug, Error)]
pub enum IoError {
    // Json and Validation leave the detail to the error-source chain so
    // callers printing the chain don't see it twice.
    #[error("malformed JSON")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Format(String),
    #[error("invalid problem data")]
    Validation(#[from] TeamError),
}

fn format_err(msg: impl Into<String>) -> IoError {
    IoError::Format(msg.into())
}

/// Reads a rational from a JSON value: fraction string or plain number.
fn rational_from_value(v: &Value, what: &str) -> Result<BigRational, IoError> {
    match v {
        Value::String(s) => parse_big_fraction(s)
            .ok_or_else(|| format_err(format!("{what}: cannot parse fraction {s:?}"))),
        Value::Number(n) => {
            let f = n
                .as_f64()
                .ok_or_else(|| format_err(format!("{what}: non-finite number")))?;
            BigRational::from_f64(f)
                .ok_or_else(|| format_err(format!("{what}: non-finite number")))
        }
        other => Err(format_err(format!(
            "{what}: expected a number or fraction string, got {other}"
        ))),
    }
}

fn cost_matrix_from_value(v: &Value, what: &str) -> Result<[[i8; 2]; 2], IoError> {
    let rows = v
        .as_array()
        .filter(|rows| rows.len() == 2)
        .ok_or_else(|| format_err(format!("{what}: expected a 2x2 array")))?;
    let mut m = [[0i8; 2]; 2];
    for (r, row_v) in rows.iter().enumerate() {
        let row = row_v
            .as_array()
            .filter(|row| row.len() == 2)
            .ok_or_else(|| format_err(format!("{what}: expected a 2x2 array")))?;
        for (c, entry) in row.iter().enumerate() {
            let e = entry
                .as_i64()
                .ok_or_else(|| format_err(format!("{what}: entries must be integers")))?;
            m[r][c] = i8::try_from(e)
                .map_err(|_| format_err(format!("{what}: entry {e} out of range")))?;
        }
    }
    Ok(m)
}

/// Parses a problem instance from its JSON object form.
pub fn instance_from_json(v: &Value) -> Result<ProblemInstance<BigRational>, IoError> {
    let obj = v
        .as_object()
        .ok_or_else(|| format_err("instance: expected a JSON object"))?;
    let m = cost_matrix_from_value(
        obj.get("M").ok_or_else(|| format_err("instance: missing M"))?,
        "M",
    )?;
    let n = cost_matrix_from_value(
        obj.get("N").ok_or_else(|| format_err("instance: missing N"))?,
        "N",
    )?;
    let pair = BinaryCostPair::new(m, n)?;

    let chi = rational_from_value(
        obj.get("chi")
            .ok_or_else(|| format_err("instance: missing chi"))?,
        "chi",
    )?;

    let prior_obj = obj
        .get("prior")
        .and_then(Value::as_object)
        .ok_or_else(|| format_err("instance: missing prior object"))?;
    let mut masses = std::array::from_fn::<BigRational, 8, _>(|_| BigRational::from_integer(BigInt::from(0)));
    for (key, value) in prior_obj {
        let bits: Vec<&str> = key.split(',').map(str::trim).collect();
        let parse_bit = |s: &str| -> Result<u8, IoError> {
            match s {
                "0" => Ok(0),
                "1" => Ok(1),
                _ => Err(format_err(format!("prior key {key:?}: bits must be 0 or 1"))),
            }
        };
        if bits.len() != 3 {
            return Err(format_err(format!(
                "prior key {key:?}: expected \"xiA,xiB,xiW\""
            )));
        }
        let (a, b, w) = (parse_bit(bits[0])?, parse_bit(bits[1])?, parse_bit(bits[2])?);
        masses[JointPrior::<BigRational>::index(a, b, w)] =
            rational_from_value(value, &format!("prior[{key}]"))?;
    }
    let prior = JointPrior::new(masses)?;

    let labels = match obj.get("labels") {
        Some(l) => serde_json::from_value::<ActionLabels>(l.clone())?,
        None => ActionLabels::default(),
    };

    Ok(make_instance_with_labels(pair, prior, chi, labels)?)
}

/// Parses a problem instance from JSON text.
pub fn instance_from_str(text: &str) -> Result<ProblemInstance<BigRational>, IoError> {
    let v: Value = serde_json::from_str(text)?;
    instance_from_json(&v)
}

fn rational_to_value(x: &BigRational) -> Value {
    Value::String(scalar_to_string(x))
}

/// Serializes a problem instance to its JSON object form (all eight prior
/// keys present, rationals as fraction strings).
pub fn instance_to_json(instance: &ProblemInstance<BigRational>) -> Value {
    let matrix = |m: &[[i8; 2]; 2]| json!([[m[0][0], m[0][1]], [m[1][0], m[1][1]]]);
    let mut prior = Map::new();
    for xi_a in 0..2u8 {
        for xi_b in 0..2u8 {
            for xi_w in 0..2u8 {
                prior.insert(
                    format!("{xi_a},{xi_b},{xi_w}"),
                    rational_to_value(instance.prior().mass(xi_a, xi_b, xi_w)),
                );
            }
        }
    }
    json!({
        "M": matrix(instance.pair().m()),
        "N": matrix(instance.pair().n()),
        "chi": rational_to_value(instance.chi()),
        "prior": prior,
        "labels": serde_json::to_value(instance.labels()).expect("labels serialize"),
    })
}

fn matrix_to_value(m: &ComplexSquareMatrix) -> Value {
    let entries: Vec<Value> = m
        .data()
        .iter()
        .map(|z| json!([z.re, z.im]))
        .collect();
    Value::Array(entries)
}

fn matrix_from_value(v: &Value, dim: usize, what: &str) -> Result<ComplexSquareMatrix, IoError> {
    let entries = v
        .as_array()
        .filter(|a| a.len() == dim * dim)
        .ok_or_else(|| {
            format_err(format!(
                "{what}: expected a row-major array of {} [re, im] pairs",
                dim * dim
            ))
        })?;
    let mut data = Vec::with_capacity(dim * dim);
    for entry in entries {
        let pair = entry
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| format_err(format!("{what}: entries must be [re, im] pairs")))?;
        let re = pair[0]
            .as_f64()
            .ok_or_else(|| format_err(format!("{what}: non-numeric entry")))?;
        let im = pair[1]
            .as_f64()
            .ok_or_else(|| format_err(format!("{what}: non-numeric entry")))?;
        data.push(C64::new(re, im));
    }
    Ok(ComplexSquareMatrix::from_row_major(dim, &data))
}

/// Serializes a quantum strategy: per-agent Hilbert dimension, the density
/// matrix, and the eight projectors.
pub fn strategy_to_json(strategy: &QuantumStrategy) -> Value {
    let mut projectors = Map::new();
    for (name, family) in [("A", &strategy.proj_a), ("B", &strategy.proj_b)] {
        for xi in 0..2usize {
            for u in 0..2usize {
                projectors.insert(format!("{name},{xi},{u}"), matrix_to_value(&family[xi][u]));
            }
        }
    }
    json!({
        "dim": 2,
        "rho": matrix_to_value(&strategy.rho),
        "projectors": projectors,
    })
}

/// Parses a quantum strategy from its JSON object form. Structural parsing
/// only — run [`crate::quantum::validate_strategy`] to check the result is
/// physically meaningful.
pub fn strategy_from_json(v: &Value) -> Result<QuantumStrategy, IoError> {
    let obj = v
        .as_object()
        .ok_or_else(|| format_err("strategy: expected a JSON object"))?;
    let dim = obj.get("dim").and_then(Value::as_u64).unwrap_or(2);
    if dim != 2 {
        return Err(format_err(format!(
            "strategy: per-agent dimension {dim} unsupported (expected 2)"
        )));
    }
    let rho = matrix_from_value(
        obj.get("rho")
            .ok_or_else(|| format_err("strategy: missing rho"))?,
        4,
        "rho",
    )?;
    let projectors = obj
        .get("projectors")
        .and_then(Value::as_object)
        .ok_or_else(|| format_err("strategy: missing projectors object"))?;
    let fetch = |name: &str, xi: usize, u: usize| -> Result<ComplexSquareMatrix, IoError> {
        let key = format!("{name},{xi},{u}");
        let v = projectors
            .get(&key)
            .ok_or_else(|| format_err(format!("strategy: missing projector {key:?}")))?;
        matrix_from_value(v, 2, &format!("projector {key}"))
    };
    Ok(QuantumStrategy {
        rho,
        proj_a: [
            [fetch("A", 0, 0)?, fetch("A", 0, 1)?],
            [fetch("A", 1, 0)?, fetch("A", 1, 1)?],
        ],
        proj_b: [
            [fetch("B", 0, 0)?, fetch("B", 0, 1)?],
            [fetch("B", 1, 0)?, fetch("B", 1, 1)?],
        ],
    })
}

/// Parses a quantum strategy from JSON text.
pub fn strategy_from_str(text: &str) -> Result<QuantumStrategy, IoError> {
    let v: Value = serde_json::from_str(text)?;
    strategy_from_json(&v)
}

/// Formats a double for reports: shortest representation that round-trips.
pub fn float_to_string(x: f64) -> String {
    let mut s = format!("{x}");
    if !s.contains('.') && !s.contains('e') && !s.contains("inf") && !s.contains("NaN") {
        s.push_str(".0");
    }
    s
}

/// Formats a double at 17 significant digits (scientific notation), the
/// fixed-width form used in emitted reports; 17 digits always suffice to
/// recover the exact bit pattern on parse.
pub fn float17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Formats a big rational with a decimal approximation for readability:
/// `-7/5 (= -1.4)`.
pub fn rational_with_decimal(x: &BigRational) -> String {
    use crate::scalar::Scalar;
    if x.is_integer() {
        scalar_to_string(x)
    } else {
        format!("{} (= {})", scalar_to_string(x), x.to_f64())
    }
}
