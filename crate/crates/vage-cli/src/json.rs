//! JSON forms of multi-indices, windows, weight specs, series, matrices and
//! realizations. Output is canonical: object keys sorted, terms in graded-lex
//! order, so parse/emit round-trips are byte-identical.

use serde_json::{json, Value};

use vage_core::linsys::{Realization, RingMatrix};
use vage_core::monoid::{MultiIndex, TruncationSpec};
use vage_core::series::Series;
use vage_core::weights::WeightSpec;
use vage_core::Complex64;

use crate::CliError;

fn bad(msg: impl Into<String>) -> CliError {
    CliError::usage(msg)
}

pub fn multi_index_to_value(alpha: &MultiIndex) -> Value {
    Value::Array(
        alpha
            .entries()
            .iter()
            .map(|&(g, e)| json!([g, e]))
            .collect(),
    )
}

pub fn multi_index_from_value(v: &Value) -> Result<MultiIndex, CliError> {
    let arr = v
        .as_array()
        .ok_or_else(|| bad("multi-index must be an array of [generator, exponent] pairs"))?;
    let mut pairs = Vec::with_capacity(arr.len());
    for item in arr {
        let pair = item
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| bad("multi-index entries must be [generator, exponent]"))?;
        let g = pair[0]
            .as_u64()
            .filter(|&g| g >= 1 && g <= u32::MAX as u64)
            .ok_or_else(|| bad("generator must be a positive integer"))?;
        let e = pair[1]
            .as_u64()
            .filter(|&e| e <= u32::MAX as u64)
            .ok_or_else(|| bad("exponent must be a nonnegative integer"))?;
        pairs.push((g as u32, e as u32));
    }
    Ok(MultiIndex::from_pairs(pairs))
}

pub fn window_to_value(w: TruncationSpec) -> Value {
    json!({ "K": w.max_generator, "N": w.max_degree })
}

pub fn window_from_value(v: &Value) -> Result<TruncationSpec, CliError> {
    let k = v["K"]
        .as_u64()
        .filter(|&k| k >= 1 && k <= u32::MAX as u64)
        .ok_or_else(|| bad("window needs a positive integer K"))?;
    let n = v["N"]
        .as_u64()
        .filter(|&n| n <= u32::MAX as u64)
        .ok_or_else(|| bad("window needs a nonnegative integer N"))?;
    crate::check_window_size(TruncationSpec::new(k as u32, n as u32))
}

pub fn series_to_value(s: &Series) -> Value {
    let terms: Vec<Value> = s
        .terms()
        .map(|(alpha, c)| {
            json!({
                "alpha": multi_index_to_value(alpha),
                "re": c.re,
                "im": c.im,
            })
        })
        .collect();
    json!({ "window": window_to_value(s.window()), "terms": terms })
}

pub fn series_from_value(v: &Value) -> Result<Series, CliError> {
    let window = window_from_value(&v["window"])?;
    let terms = v["terms"]
        .as_array()
        .ok_or_else(|| bad("series needs a 'terms' array"))?;
    let mut pairs = Vec::with_capacity(terms.len());
    for term in terms {
        let alpha = multi_index_from_value(&term["alpha"])?;
        let re = term["re"]
            .as_f64()
            .filter(|v| v.is_finite())
            .ok_or_else(|| bad("series term needs a finite numeric 're'"))?;
        let im = term["im"]
            .as_f64()
            .filter(|v| v.is_finite())
            .ok_or_else(|| bad("series term needs a finite numeric 'im'"))?;
        pairs.push((alpha, Complex64::new(re, im)));
    }
    Ok(Series::from_terms(pairs, window)?)
}

pub fn weight_to_value(w: &WeightSpec) -> Value {
    match w {
        WeightSpec::Schwartz
        | WeightSpec::GSpace
        | WeightSpec::Kondratiev
        | WeightSpec::DoublyExponential => json!({ "family": w.family_name() }),
        WeightSpec::Power { c } => json!({ "family": "power", "c": c }),
        WeightSpec::CustomGenerators { weights } => {
            json!({ "family": "custom_generators", "weights": weights })
        }
        WeightSpec::Tensor { left, right } => json!({
            "family": "tensor",
            "left": weight_to_value(left),
            "right": weight_to_value(right),
        }),
    }
}

pub fn weight_from_value(v: &Value) -> Result<WeightSpec, CliError> {
    let family = v["family"]
        .as_str()
        .ok_or_else(|| bad("weight spec needs a 'family' string"))?;
    match family {
        "schwartz" => Ok(WeightSpec::Schwartz),
        "gspace" => Ok(WeightSpec::GSpace),
        "kondratiev" => Ok(WeightSpec::Kondratiev),
        "doubly_exponential" => Ok(WeightSpec::DoublyExponential),
        "power" => {
            let c = v["c"]
                .as_f64()
                .ok_or_else(|| bad("power family needs a numeric 'c'"))?;
            Ok(WeightSpec::Power { c })
        }
        "custom_generators" => {
            let weights = v["weights"]
                .as_array()
                .ok_or_else(|| bad("custom_generators needs a 'weights' array"))?
                .iter()
                .map(|x| x.as_f64().ok_or_else(|| bad("weights must be numbers")))
                .collect::<Result<Vec<f64>, CliError>>()?;
            Ok(WeightSpec::CustomGenerators { weights })
        }
        "tensor" => {
            let left = weight_from_value(&v["left"])?;
            let right = weight_from_value(&v["right"])?;
            Ok(WeightSpec::tensor(left, right))
        }
        other => Err(bad(format!("unknown weight family '{other}'"))),
    }
}

pub fn matrix_to_value(m: &RingMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|i| {
            Value::Array(
                (0..m.cols())
                    .map(|j| series_to_value(m.entry(i, j)))
                    .collect(),
            )
        })
        .collect();
    Value::Array(rows)
}

pub fn matrix_from_value(v: &Value) -> Result<RingMatrix, CliError> {
    let rows = v
        .as_array()
        .filter(|r| !r.is_empty())
        .ok_or_else(|| bad("matrix must be a nonempty array of rows"))?;
    let mut entries = Vec::new();
    let cols = rows[0]
        .as_array()
        .filter(|c| !c.is_empty())
        .ok_or_else(|| bad("matrix rows must be nonempty arrays"))?
        .len();
    for row in rows {
        let row = row
            .as_array()
            .filter(|r| r.len() == cols)
            .ok_or_else(|| bad("matrix rows must all have the same length"))?;
        for cell in row {
            entries.push(series_from_value(cell)?);
        }
    }
    Ok(RingMatrix::new(rows.len(), cols, entries)?)
}

pub fn realization_to_value(r: &Realization) -> Value {
    json!({
        "A": matrix_to_value(&r.a),
        "B": matrix_to_value(&r.b),
        "C": matrix_to_value(&r.c),
        "D": matrix_to_value(&r.d),
    })
}

pub fn realization_from_value(v: &Value) -> Result<Realization, CliError> {
    let a = matrix_from_value(&v["A"])?;
    let b = matrix_from_value(&v["B"])?;
    let c = matrix_from_value(&v["C"])?;
    let d = matrix_from_value(&v["D"])?;
    Ok(Realization::new(a, b, c, d)?)
}
