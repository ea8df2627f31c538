//! Report rendering. JSON keys come out sorted and every number that is not
//! an integer is printed with a fixed number of decimals, so identical runs
//! give identical bytes.

use std::str::FromStr;

use chequenet_core::graph::NetworkStats;
use chequenet_core::risk::{
    LossDistribution, Metric, RankEntry, SamplingMode, WhatIfReport, WhatIfSide,
};
use chequenet_core::{CascadeResult, CollateralNetwork};
use serde_json::{json, Map, Number, Value};

/// A JSON number printed with exactly `decimals` digits after the point.
pub fn fixed(x: f64, decimals: usize) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let mut text = format!("{x:.decimals$}");
    if text.starts_with("-0") && text[1..].bytes().all(|b| b == b'0' || b == b'.') {
        text.remove(0);
    }
    Value::Number(Number::from_str(&text).expect("formatted float is valid JSON"))
}

pub fn pct4(x: f64) -> Value {
    fixed(100.0 * x, 4)
}

fn opt_pct4(x: Option<f64>) -> Value {
    x.map_or(Value::Null, pct4)
}

/// A fraction as a percentage with two decimals.
pub fn pct2(x: f64) -> String {
    format!("{:.2}", 100.0 * x)
}

pub fn euros(cents: u64) -> String {
    format!("{}.{:02}", cents / 100, cents % 100)
}

pub fn json_text(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

fn ids(net: &CollateralNetwork, ixs: &[usize]) -> Vec<String> {
    ixs.iter().map(|&v| net.id(v).to_string()).collect()
}

pub fn cascade_json(
    net: &CollateralNetwork,
    result: &CascadeResult,
    seeds: &[usize],
    invocation: &str,
    raw: bool,
) -> Value {
    let stages: Vec<Value> = result
        .stages
        .iter()
        .map(|s| {
            let loss = net.fraction(s.loss_cents);
            let mut stage = json!({
                "k": s.k,
                "newly_failed": ids(net, &s.newly_failed),
                "stage_loss_pct": pct4(loss),
                "stage_loss_cents": s.loss_cents,
            });
            if raw {
                stage["stage_loss"] = json!(loss);
            }
            stage
        })
        .collect();
    let failed = result.failed_total();
    let mut out = json!({
        "adjusted_loss_pct": pct4(result.adjusted_loss()),
        "amplification": result.amplification().map_or(Value::Null, |a| fixed(a, 4)),
        "c_bp": result.c.get(),
        "failed": ids(net, &failed),
        "failed_count": failed.len(),
        "invocation": invocation,
        "seeds": ids(net, seeds),
        "stages": stages,
        "total_loss_cents": result.total_loss_cents(),
        "total_loss_pct": pct4(result.total_uniform_loss()),
        "total_value_cents": result.total_value_cents,
        "truncated": result.truncated,
    });
    if raw {
        out["adjusted_loss"] = json!(result.adjusted_loss());
        out["total_loss"] = json!(result.total_uniform_loss());
    }
    out
}

/// One row of a top-k listing in a statistics report.
#[derive(Debug, Clone, PartialEq)]
pub struct TopRow {
    pub customer: String,
    pub value: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatsReport {
    pub stats: NetworkStats,
    pub top_in: Vec<TopRow>,
    pub top_out: Vec<TopRow>,
    pub top_betweenness: Vec<TopRow>,
    pub undirected_betweenness: bool,
}

/// Indices sorted by descending value, ties by canonical order, cut to `k`.
pub fn top_k(values: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    order.truncate(k);
    order
}

impl StatsReport {
    pub fn build(
        net: &CollateralNetwork,
        top: usize,
        undirected: bool,
    ) -> chequenet_core::Result<Self> {
        use chequenet_core::graph::{betweenness, Direction};
        let stats = NetworkStats::compute(net)?;
        let n = net.node_count();
        let w_in: Vec<f64> = (0..n).map(|v| net.weighted_in_degree_at(v)).collect();
        let w_out: Vec<f64> = (0..n).map(|v| net.weighted_out_degree_at(v)).collect();
        let direction = if undirected {
            Direction::Undirected
        } else {
            Direction::Directed
        };
        let between = betweenness(net, direction);
        let rows = |values: &[f64], count: &dyn Fn(usize) -> usize| -> Vec<TopRow> {
            top_k(values, top)
                .into_iter()
                .map(|v| TopRow {
                    customer: net.id(v).to_string(),
                    value: values[v],
                    count: count(v),
                })
                .collect()
        };
        Ok(StatsReport {
            top_in: rows(&w_in, &|v| net.in_degree(v)),
            top_out: rows(&w_out, &|v| net.out_degree(v)),
            top_betweenness: rows(&between, &|v| net.in_degree(v) + net.out_degree(v)),
            stats,
            undirected_betweenness: undirected,
        })
    }

    pub fn to_json(&self, invocation: &str, raw: bool) -> Value {
        let s = &self.stats;
        let table = |rows: &[TopRow], key: &str, count_key: &str, as_pct: bool| -> Vec<Value> {
            rows.iter()
                .enumerate()
                .map(|(r, row)| {
                    let mut m = Map::new();
                    m.insert("rank".into(), json!(r + 1));
                    m.insert("customer_id".into(), json!(row.customer));
                    m.insert(count_key.into(), json!(row.count));
                    let value = if raw {
                        json!(row.value)
                    } else if as_pct {
                        fixed(100.0 * row.value, 2)
                    } else {
                        fixed(row.value, 4)
                    };
                    m.insert(key.into(), value);
                    Value::Object(m)
                })
                .collect()
        };
        let (in_key, out_key) = if raw {
            ("weighted_in_degree", "weighted_out_degree")
        } else {
            ("weighted_in_degree_pct", "weighted_out_degree_pct")
        };
        json!({
            "invocation": invocation,
            "statistics": {
                "average_degree": fixed(s.average_degree, 4),
                "average_path_length": s.average_path_length.map_or(Value::Null, |x| fixed(x, 4)),
                "community_count": s.community_count,
                "component_count": s.component_count,
                "diameter": s.diameter,
                "edge_count": s.edge_count,
                "funded_count": s.funded_count,
                "max_in_degree": s.max_in_degree,
                "max_out_degree": s.max_out_degree,
                "node_count": s.node_count,
                "power_law": s.power_law.as_ref().map_or(Value::Null, |f| json!({
                    "alpha": fixed(f.alpha, 4),
                    "approx_alpha": fixed(f.approx_alpha, 4),
                    "degenerate": f.degenerate,
                    "method": f.method,
                    "sample_count": f.sample_count,
                    "x_min": f.x_min,
                })),
                "total_value_cents": s.total_value_cents,
                "weakly_connected": s.weakly_connected,
            },
            "top_betweenness": table(&self.top_betweenness, "betweenness", "degree", false),
            "betweenness_direction": if self.undirected_betweenness { "undirected" } else { "directed" },
            "top_weighted_in_degree": table(&self.top_in, in_key, "in_degree", true),
            "top_weighted_out_degree": table(&self.top_out, out_key, "out_degree", true),
        })
    }

    pub fn to_text(&self, invocation: &str, raw: bool) -> String {
        let s = &self.stats;
        let yes_no = |b: bool| if b { "yes" } else { "no" };
        let mut lines: Vec<(String, String)> = vec![
            ("Nodes".into(), s.node_count.to_string()),
            ("Links".into(), s.edge_count.to_string()),
            ("Average degree".into(), format!("{:.2}", s.average_degree)),
            ("Max in-degree".into(), s.max_in_degree.to_string()),
            ("Max out-degree".into(), s.max_out_degree.to_string()),
            ("Weakly connected".into(), yes_no(s.weakly_connected).into()),
            ("Components".into(), s.component_count.to_string()),
            (
                "Average path length".into(),
                s.average_path_length
                    .map_or("n/a".into(), |x| format!("{x:.2}")),
            ),
            (
                "Diameter".into(),
                s.diameter.map_or("n/a".into(), |d| d.to_string()),
            ),
        ];
        lines.push((
            "Power-law exponent".into(),
            match &s.power_law {
                Some(f) if f.degenerate => {
                    format!("{:.2} (degenerate sample, closed form)", f.alpha)
                }
                Some(f) => format!(
                    "{:.2} (discrete MLE over {} in-degrees, x_min {}; closed form {:.2})",
                    f.alpha, f.sample_count, f.x_min, f.approx_alpha
                ),
                None => "n/a (too few in-degrees)".into(),
            },
        ));
        lines.push(("Funded customers".into(), s.funded_count.to_string()));
        lines.push(("Total value (EUR)".into(), euros(s.total_value_cents)));
        lines.push(("Communities".into(), s.community_count.to_string()));

        let mut out = format!("# {invocation}\nNetwork statistics\n");
        let width = lines.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &lines {
            out.push_str(&format!("  {k:<width$}  {v}\n"));
        }
        let value = |x: f64, as_pct: bool| {
            if raw {
                format!("{x}")
            } else if as_pct {
                pct2(x)
            } else {
                format!("{x:.4}")
            }
        };
        let suffix = if raw { "" } else { "_pct" };
        let direction = if self.undirected_betweenness {
            "undirected"
        } else {
            "directed"
        };
        let tables = [
            (
                format!("Top {} by weighted in-degree", self.top_in.len()),
                &self.top_in,
                format!("weighted_in_degree{suffix}"),
                "in_degree",
                true,
            ),
            (
                format!("Top {} by weighted out-degree", self.top_out.len()),
                &self.top_out,
                format!("weighted_out_degree{suffix}"),
                "out_degree",
                true,
            ),
            (
                format!(
                    "Top {} by {direction} betweenness",
                    self.top_betweenness.len()
                ),
                &self.top_betweenness,
                "betweenness".to_string(),
                "degree",
                false,
            ),
        ];
        for (title, rows, value_name, count_name, as_pct) in tables {
            out.push_str(&format!("\n{title}\n"));
            let cells: Vec<[String; 4]> = rows
                .iter()
                .enumerate()
                .map(|(r, row)| {
                    [
                        (r + 1).to_string(),
                        row.customer.clone(),
                        value(row.value, as_pct),
                        row.count.to_string(),
                    ]
                })
                .collect();
            let header = [
                "rank".to_string(),
                "customer_id".into(),
                value_name,
                count_name.to_string(),
            ];
            let widths: Vec<usize> = (0..4)
                .map(|c| {
                    cells
                        .iter()
                        .map(|r| r[c].len())
                        .chain([header[c].len()])
                        .max()
                        .unwrap()
                })
                .collect();
            for row in std::iter::once(&header).chain(cells.iter()) {
                let line: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(cell, w)| format!("{cell:<w$}"))
                    .collect();
                out.push_str(&format!("  {}\n", line.join("  ").trim_end()));
            }
        }
        out
    }
}

pub fn metric_name(metric: Metric) -> &'static str {
    match metric {
        Metric::Uniform => "uniform",
        Metric::Adjusted => "adjusted",
        Metric::Composite => "composite",
        Metric::Systemic => "systemic",
    }
}

pub fn rank_csv(entries: &[RankEntry], header_comments: &[String], raw: bool) -> String {
    let mut out = String::new();
    for line in header_comments {
        out.push_str(&format!("# {line}\n"));
    }
    if raw {
        out.push_str("rank,customer_id,metric_value,weighted_in_degree,weighted_out_degree\n");
    } else {
        out.push_str(
            "rank,customer_id,metric_value_pct,weighted_in_degree_pct,weighted_out_degree_pct\n",
        );
    }
    for e in entries {
        let cells = if raw {
            [e.value, e.weighted_in_degree, e.weighted_out_degree].map(|x| format!("{x}"))
        } else {
            [e.value, e.weighted_in_degree, e.weighted_out_degree].map(pct2)
        };
        out.push_str(&format!(
            "{},{},{}\n",
            e.rank,
            csv_cell(e.customer.as_str()),
            cells.join(",")
        ));
    }
    out
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn distribution_csv(dist: &LossDistribution, header_comments: &[String], raw: bool) -> String {
    let mut out = String::new();
    for line in header_comments {
        out.push_str(&format!("# {line}\n"));
    }
    match dist.mode {
        SamplingMode::Exact => out.push_str(&format!(
            "# mode=exact scenarios={}\n",
            dist.scenarios_evaluated
        )),
        SamplingMode::MonteCarlo { draws, rng_seed } => out.push_str(&format!(
            "# mode=monte-carlo draws={draws} rng_seed={rng_seed} standard_error_pct={:.4}\n",
            100.0 * dist.standard_error.unwrap_or(0.0)
        )),
    }
    out.push_str(if raw {
        "loss,probability\n"
    } else {
        "loss_pct,probability\n"
    });
    for p in &dist.points {
        let loss = if raw {
            format!("{}", p.loss)
        } else {
            format!("{:.4}", 100.0 * p.loss)
        };
        out.push_str(&format!("{loss},{:.10}\n", p.probability));
    }
    if raw {
        out.push_str(&format!("expected_loss,{}\n", dist.expected_loss));
    } else {
        out.push_str(&format!(
            "expected_loss_pct,{:.4}\n",
            100.0 * dist.expected_loss
        ));
    }
    out
}

fn side_json(side: &WhatIfSide) -> Value {
    json!({
        "issuer_systemic_risk_pct": opt_pct4(side.issuer_systemic_risk),
        "recipient_composite_loss_pct": opt_pct4(side.recipient_composite_loss),
        "recipient_threshold_pct": opt_pct4(side.recipient_threshold),
        "recipient_weighted_in_degree_pct": opt_pct4(side.recipient_weighted_in_degree),
        "total_value_cents": side.total_value_cents,
    })
}

pub fn whatif_json(report: &WhatIfReport, invocation: &str) -> Value {
    let delta = |f: fn(&WhatIfSide) -> Option<f64>| match (f(&report.before), f(&report.after)) {
        (Some(a), Some(b)) => pct4(b - a),
        _ => Value::Null,
    };
    json!({
        "after": side_json(&report.after),
        "before": side_json(&report.before),
        "c_bp": report.c.get(),
        "cheque": {
            "cheque_id": report.cheque.cheque_id,
            "issuer_id": report.cheque.issuer.as_str(),
            "recipient_id": report.cheque.recipient.as_str(),
            "value_cents": report.cheque.value_cents,
        },
        "delta": {
            "issuer_systemic_risk_pct": delta(|s| s.issuer_systemic_risk),
            "recipient_composite_loss_pct": delta(|s| s.recipient_composite_loss),
            "recipient_threshold_pct": delta(|s| s.recipient_threshold),
            "recipient_weighted_in_degree_pct": delta(|s| s.recipient_weighted_in_degree),
        },
        "depth": report.depth,
        "invocation": invocation,
    })
}
