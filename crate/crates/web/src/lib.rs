//! WebAssembly bindings for the browser demo. Each operation takes JSON text
//! and returns a JSON report; the `*_json` functions are the native versions
//! the bindings wrap.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use pathcoalg::caps::Caps;
use pathcoalg::field::FieldSpec;
use pathcoalg::graph_coalgebra::{order_formula, GraphCoalgebra};
use pathcoalg::group::in_class;
use pathcoalg::json::{parse_digraph, parse_group, parse_perm_rep};
use pathcoalg::realization::build_realization;
use pathcoalg::Field;

/// Browser-sized limits: anything larger is reported as skipped or refused.
fn demo_caps() -> Caps {
    Caps {
        field_size: 1 << 8,
        group_close: 200,
        subgroup_enum: 200,
        grouplike_enum: 1 << 16,
        brute_oracle: 1 << 20,
        structured_enum: 1 << 16,
        graph_search: 200_000,
    }
}

fn field(spec: &str, caps: &Caps) -> Result<Field, String> {
    let spec: FieldSpec = spec.parse().map_err(|e| format!("{e}"))?;
    spec.build(caps.field_size).map_err(|e| e.to_string())
}

fn render(v: Value) -> String {
    serde_json::to_string(&v).expect("serializable")
}

/// Automorphism group of `C(Γ)` for a digraph: closed-form order, the
/// structured and brute counts when small, and the exact-sequence checks.
pub fn explore_coalgebra_json(graph: &str, field_spec: &str) -> Result<String, String> {
    let caps = demo_caps();
    let f = field(field_spec, &caps)?;
    let digraph = parse_digraph(graph).map_err(|e| e.to_string())?;
    let names = digraph.system().vertex_names().to_vec();
    let edges: Vec<(usize, usize)> = digraph.edges().collect();
    let gc = GraphCoalgebra::build(digraph, &f).map_err(|e| e.to_string())?;
    let report = gc.verify_exact_sequence(&caps).map_err(|e| e.to_string())?;
    let q = f.order() as u64;
    Ok(render(json!({
        "field": f.to_string(),
        "vertices": names,
        "edges": edges,
        "basis": gc.coalgebra().basis(),
        "dim": gc.coalgebra().dim(),
        "graph_aut_order": report.graph_aut_order,
        "formula": format!(
            "({q}·{})^{}·{} = {}",
            q - 1,
            gc.edge_count(),
            report.graph_aut_order,
            order_formula(q, gc.edge_count(), report.graph_aut_order)
                .map_or("overflow".to_string(), |t| t.to_string())
        ),
        "structured_count": report.structured_count,
        "brute_count": report.brute_count,
        "checks": report.checks,
    })))
}

/// Runs the realization pipeline for a permutation representation.
pub fn realize_json(rep: &str, field_spec: &str) -> Result<String, String> {
    let caps = demo_caps();
    let f = field(field_spec, &caps)?;
    let rep = parse_perm_rep(rep, caps.group_close).map_err(|e| e.to_string())?;
    let (bundle, report) = build_realization(&rep, &f, &caps).map_err(|e| e.to_string())?;
    let sys = &bundle.system;
    let pairs: Vec<(usize, usize, usize)> = sys.pairs().collect();
    Ok(render(json!({
        "report": report,
        "system": {
            "vertices": sys.vertex_names(),
            "labels": sys.labels(),
            "pairs": pairs,
            "v_subset": bundle.v_subset,
        },
    })))
}

/// Membership verdict for the class determined by `p` and `n`.
pub fn group_class_json(group: &str, p: u32, n: u32) -> Result<String, String> {
    let caps = demo_caps();
    let g = parse_group(group, caps.group_close).map_err(|e| e.to_string())?;
    let verdict =
        in_class(&g, p as u64, n as u64, caps.subgroup_enum).map_err(|e| e.to_string())?;
    Ok(render(json!({
        "verdict": if verdict.member { "IN" } else { "NOT-IN" },
        "group_order": g.order(),
        "bound": verdict.bound.to_string(),
        "witness_order": verdict.witness.as_ref().map(Vec::len),
        "witness_exponent": verdict.witness_exponent,
    })))
}

#[wasm_bindgen]
pub fn explore_coalgebra(graph: &str, field: &str) -> Result<String, JsValue> {
    explore_coalgebra_json(graph, field).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn realize(rep: &str, field: &str) -> Result<String, JsValue> {
    realize_json(rep, field).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn group_class(group: &str, p: u32, n: u32) -> Result<String, JsValue> {
    group_class_json(group, p, n).map_err(|e| JsValue::from_str(&e))
}
