//! Graphviz DOT output. Layout is left to the renderer.

use std::fmt::Write;

use chequenet_core::{CascadeResult, CollateralNetwork};

fn quote(id: &str) -> String {
    format!("\"{}\"", id.replace('\\', "\\\\").replace('"', "\\\""))
}

fn edges(net: &CollateralNetwork, out: &mut String, failed_issuer: impl Fn(usize) -> bool) {
    let max_w = net
        .edges()
        .iter()
        .map(|e| net.weight(e))
        .fold(0.0, f64::max);
    for e in net.edges() {
        let w = net.weight(e);
        let pen = 1.0 + 4.0 * w / max_w;
        let style = if failed_issuer(e.from) {
            ", style=dashed"
        } else {
            ""
        };
        writeln!(
            out,
            "  {} -> {} [label=\"{:.2}\", penwidth={pen:.3}{style}];",
            quote(net.id(e.from).as_str()),
            quote(net.id(e.to).as_str()),
            100.0 * w
        )
        .unwrap();
    }
}

/// Edge labels are weights in percent; pen width grows with the weight.
pub fn network_dot(net: &CollateralNetwork) -> String {
    let mut out = String::from("digraph collateral {\n  node [shape=circle];\n");
    for c in net.customers() {
        let shape = if c.funded {
            " [shape=doublecircle]"
        } else {
            ""
        };
        writeln!(out, "  {}{shape};", quote(c.id.as_str())).unwrap();
    }
    edges(net, &mut out, |_| false);
    out.push_str("}\n");
    out
}

/// The network after stage `k`: customers failed earlier are grey, those
/// failing at `k` red, and cheques of failed issuers dashed.
pub fn stage_dot(net: &CollateralNetwork, cascade: &CascadeResult, k: usize) -> String {
    let failed_by = |v: usize| cascade.failed_at[v].is_some_and(|s| s <= k);
    let mut out = format!("digraph stage_{k} {{\n  label=\"stage {k}\";\n  node [shape=circle];\n");
    for (v, c) in net.customers().iter().enumerate() {
        let mut attrs = Vec::new();
        if c.funded {
            attrs.push("shape=doublecircle".to_string());
        }
        match cascade.failed_at[v] {
            Some(s) if s == k => attrs.push("style=filled, fillcolor=red".into()),
            Some(s) if s < k => attrs.push("style=filled, fillcolor=grey".into()),
            _ => {}
        }
        if attrs.is_empty() {
            writeln!(out, "  {};", quote(c.id.as_str())).unwrap();
        } else {
            writeln!(out, "  {} [{}];", quote(c.id.as_str()), attrs.join(", ")).unwrap();
        }
    }
    edges(net, &mut out, failed_by);
    out.push_str("}\n");
    out
}
