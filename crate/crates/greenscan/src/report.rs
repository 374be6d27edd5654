//! JSON reports. Every document carries `"schema": "greenscan/1"`; rationals
//! are rendered as `"p"` or `"p/q"` strings so no precision is lost.

use crate::chamber::{GreenPath, MarkovWitness, Wall};
use crate::linalg::{rat_to_string, Rat};
use crate::repcat::{Decomposition, Representation};
use crate::stability::{
    HnFiltration, PhaseValue, ProbeReport, Refusal, ThetaClass, ThetaStatus,
};
use crate::tautilt::{ExchangeGraph, MgsChain, TauPair};
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "greenscan/1";

pub fn document(kind: &str, body: Value) -> Value {
    let mut map = Map::new();
    map.insert("schema".into(), json!(SCHEMA));
    map.insert("kind".into(), json!(kind));
    if let Value::Object(fields) = body {
        for (k, v) in fields {
            map.insert(k, v);
        }
    }
    Value::Object(map)
}

pub fn rat_json(r: &Rat) -> Value {
    json!(rat_to_string(r))
}

pub fn rats_json(rs: &[Rat]) -> Value {
    Value::Array(rs.iter().map(rat_json).collect())
}

pub fn phase_json(p: &PhaseValue) -> Value {
    match p {
        PhaseValue::Arg { x, y } => json!({"kind": "arg", "x": rat_json(x), "y": rat_json(y)}),
        PhaseValue::Time(t) => json!({"kind": "time", "t": rat_json(t)}),
    }
}

pub fn module_json(m: &Representation) -> Value {
    json!({"dims": m.dim_vector(), "total": m.total_dim()})
}

pub fn refusal_json(r: &Refusal) -> Value {
    json!({"refusal": r.code(), "detail": r.detail()})
}

pub fn decomposition_json(d: &Decomposition) -> Value {
    json!({
        "certified": d.certified,
        "summands": d.summands.iter().map(|s| json!({
            "dims": s.rep.dim_vector(),
            "multiplicity": s.multiplicity,
            "certified": s.certified,
        })).collect::<Vec<_>>(),
    })
}

pub fn theta_class_json(c: &ThetaClass) -> Value {
    let status = match c.status {
        ThetaStatus::Stable => "stable",
        ThetaStatus::StrictlySemistable => "strictly-semistable",
        ThetaStatus::Unstable => "unstable",
    };
    json!({
        "status": status,
        "certified": c.certified,
        "witness": c.witness,
    })
}

pub fn hn_json(hn: &HnFiltration) -> Value {
    json!({
        "certified": hn.certified,
        "factors": hn.factors.iter().zip(&hn.phases).map(|(f, p)| json!({
            "dims": f.dim_vector(),
            "phase": phase_json(p),
        })).collect::<Vec<_>>(),
    })
}

pub fn pair_json(pair: &TauPair, n: usize) -> Value {
    json!({
        "module_dims": pair.modules.iter().map(|m| m.dim_vector()).collect::<Vec<_>>(),
        "shifted_projectives": pair.proj_vertices,
        "g_columns": pair.g_columns(n),
    })
}

pub fn graph_json(graph: &ExchangeGraph, n: usize) -> Value {
    json!({
        "complete": graph.complete,
        "node_count": graph.nodes.len(),
        "nodes": graph.nodes.iter().map(|p| pair_json(p, n)).collect::<Vec<_>>(),
        "edges": graph.edges.iter().map(|e| json!({
            "from": e.from,
            "to": e.to,
            "brick_dims": e.brick.dim_vector(),
        })).collect::<Vec<_>>(),
        "stubs": graph.stubs,
    })
}

pub fn chain_json(chain: &MgsChain) -> Value {
    json!({"length": chain.edges.len(), "nodes": chain.nodes, "edges": chain.edges})
}

pub fn wall_json(w: &Wall) -> Value {
    json!({
        "edge": w.edge,
        "brick_dims": w.brick_dims,
        "rays": w.rays,
        "samples": w.samples.iter().map(|s| rats_json(s)).collect::<Vec<_>>(),
        "certified": w.certified,
    })
}

pub fn path_json(p: &GreenPath) -> Value {
    json!({"points": p.points.iter().map(|pt| rats_json(pt)).collect::<Vec<_>>()})
}

pub fn probe_json(p: &ProbeReport) -> Value {
    json!({
        "agreed": p.agreed,
        "stable_count": p.stable_count,
        "expected_stables": p.expected_stables,
        "disagreements": p.disagreements,
    })
}

pub fn markov_json(w: &MarkovWitness) -> Value {
    json!({
        "cycle_vertices": w.cycle,
        "brick_dims": w.bricks.iter().map(|b| b.dim_vector()).collect::<Vec<_>>(),
        "thetas": w.thetas.iter().map(|t| rats_json(t)).collect::<Vec<_>>(),
        "all_stable": w.all_stable,
        "graph_nodes": w.graph_nodes,
        "sink_reached": w.sink_reached,
        "stub_count": w.stub_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat_frac;

    #[test]
    fn documents_carry_schema_and_exact_rationals() {
        let doc = document("demo", json!({"x": rat_json(&rat_frac(-7, 3))}));
        let s = serde_json::to_string(&doc).unwrap();
        assert!(s.contains("\"schema\":\"greenscan/1\""));
        assert!(s.contains("\"-7/3\""));
        // serde_json maps are sorted, so serialization is byte-stable
        let again = serde_json::to_string(&doc).unwrap();
        assert_eq!(s, again);
    }
}
