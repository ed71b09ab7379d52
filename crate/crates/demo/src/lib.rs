//! Browser bindings: each export takes plain strings or numbers and
//! returns a JSON document for the page to draw.

use incps::constructions::{free_poisson_spec, semicircular_spec};
use incps::cumulants::moments_from_cumulants;
use incps::freealg::Word;
use incps::nc::{self, Partition};
use incps::ncb::{self, BPartition};
use incps::state::MomentSource;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_TABLE: usize = 10;

fn type_a(p: &Partition) -> Value {
    json!({ "n": p.n(), "blocks": p.blocks(), "text": p.to_string() })
}

fn type_b(p: &BPartition) -> Value {
    json!({ "n": p.n(), "blocks": p.blocks(), "text": p.to_string(), "zero_block": p.zero_block() })
}

fn err(e: impl ToString) -> String {
    e.to_string()
}

/// Every element of NC(n) in canonical order.
pub fn nc_list(n: usize) -> Result<String, String> {
    let items: Vec<Value> = nc::enumerate_nc(n).map_err(err)?.iter().map(type_a).collect();
    Ok(Value::Array(items).to_string())
}

/// A partition, its Kreweras complement and `μ(π, 1ₙ)`.
pub fn kreweras_info(partition: &str) -> Result<String, String> {
    let p: Partition = partition.parse().map_err(err)?;
    let mobius = nc::mobius_a(&p, &Partition::one(p.n())).map_err(err)?;
    Ok(json!({ "partition": type_a(&p), "kreweras": type_a(&p.kreweras()), "mobius_to_top": mobius }).to_string())
}

/// The type-B partitions lying over a type-A partition, each with its
/// Kreweras complement.
pub fn fiber_info(partition: &str) -> Result<String, String> {
    let p: Partition = partition.parse().map_err(err)?;
    if p.n() > ncb::MAX_N {
        return Err(format!("n = {} exceeds the type-B limit {}", p.n(), ncb::MAX_N));
    }
    let items: Vec<Value> = ncb::fiber(&p)
        .iter()
        .map(|t| json!({ "partition": type_b(t), "kreweras": type_b(&t.kreweras_b()) }))
        .collect();
    Ok(json!({ "base": type_a(&p), "fiber": items }).to_string())
}

/// Moments `φ̃(xᵐ)`, m = 1..=max_m, of the infinitesimal semicircular law
/// (`p1 = α′₁`, `p2 = α′₂`) or free Poisson law (`p1 = λ`, `p2 = β′`, `p3 = γ′`).
pub fn law_table(kind: &str, p1: f64, p2: f64, p3: f64, max_m: usize) -> Result<String, String> {
    if max_m == 0 || max_m > MAX_TABLE {
        return Err(format!("the table length must be between 1 and {MAX_TABLE}"));
    }
    let spec = match kind {
        "semicircular" => semicircular_spec(p1, p2, max_m),
        "poisson" => free_poisson_spec(p1, p2, p3, max_m),
        other => return Err(format!("unknown law {other:?}")),
    }
    .map_err(err)?;
    let state = moments_from_cumulants(&spec).map_err(err)?;
    let rows = (1..=max_m)
        .map(|m| {
            let v = state.word_moment(&Word::from_normal(vec![0; m])).map_err(err)?;
            let k = spec.get(&vec![0; m]).map_err(err)?;
            Ok(json!({ "m": m, "moment": [v.body.re, v.soul.re], "cumulant": [k.body.re, k.soul.re] }))
        })
        .collect::<Result<Vec<_>, String>>()?;
    Ok(Value::Array(rows).to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = ncList)]
pub fn nc_list_js(n: usize) -> Result<String, JsValue> {
    js(nc_list(n))
}

#[wasm_bindgen(js_name = krewerasInfo)]
pub fn kreweras_info_js(partition: &str) -> Result<String, JsValue> {
    js(kreweras_info(partition))
}

#[wasm_bindgen(js_name = fiberInfo)]
pub fn fiber_info_js(partition: &str) -> Result<String, JsValue> {
    js(fiber_info(partition))
}

#[wasm_bindgen(js_name = lawTable)]
pub fn law_table_js(kind: &str, p1: f64, p2: f64, p3: f64, max_m: usize) -> Result<String, JsValue> {
    js(law_table(kind, p1, p2, p3, max_m))
}
