//! Independent verifier: re-derives every contract clause from the graph,
//! the factor, and the contract alone. Construction state is never consulted.

use serde::{Deserialize, Serialize};

use ff_core::connect::tree_packing;
use ff_core::error::Result;
use ff_core::factor::FactorContract;
use ff_core::graph::{EdgeSubset, Multigraph};

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct VerifierVerdict {
    pub pass: bool,
    pub failures: Vec<String>,
}

/// Check every clause of the contract against (G, H); the verdict lists all
/// failures rather than stopping at the first.
pub fn verify(g: &Multigraph, h: &EdgeSubset, c: &FactorContract) -> Result<VerifierVerdict> {
    let mut failures = Vec::new();
    if h.host_edges() != g.edge_count() {
        failures.push("factor indexes a different edge set".into());
        return Ok(VerifierVerdict {
            pass: false,
            failures,
        });
    }
    let degrees = g.subset_degrees(h);

    if let Some(include) = &c.include {
        for &e in include {
            if e >= g.edge_count() || !h.contains(e) {
                failures.push(format!("missing required edge {e}"));
            }
        }
    }
    if let Some(exclude) = &c.exclude {
        for &e in exclude {
            if e < g.edge_count() && h.contains(e) {
                failures.push(format!("contains forbidden edge {e}"));
            }
        }
    }
    if let Some(lo) = &c.g {
        for v in 0..g.n() {
            if (degrees[v] as i64) < lo[v] {
                failures.push(format!("degree {} below g({v}) = {}", degrees[v], lo[v]));
            }
        }
    }
    if let Some(hi) = &c.f {
        for v in 0..g.n() {
            if degrees[v] as i64 > hi[v] {
                failures.push(format!("degree {} above f({v}) = {}", degrees[v], hi[v]));
            }
        }
    }
    if let Some(fam) = c.list_family(g.n())? {
        for v in 0..g.n() {
            if !fam[v].contains(&degrees[v]) {
                failures.push(format!("degree {} not in L({v})", degrees[v]));
            }
        }
    }
    if let Some(spec) = &c.mod_target {
        for v in 0..g.n() {
            if degrees[v] % spec.k != spec.res[v] % spec.k {
                failures.push(format!(
                    "degree {} != {} (mod {}) at vertex {v}",
                    degrees[v], spec.res[v], spec.k
                ));
            }
        }
    }
    if let Some(m) = c.m {
        if m > 0 {
            let (sub, _) = g.edge_subgraph(h);
            if tree_packing(&sub, m).is_none() {
                failures.push(format!("factor is not {m}-tree-connected"));
            }
        }
    }
    if let Some(m0) = c.m0 {
        if m0 > 0 {
            let (sub, _) = g.edge_subgraph(&h.complement());
            if tree_packing(&sub, m0).is_none() {
                failures.push(format!("complement is not {m0}-tree-connected"));
            }
        }
    }
    if c.bipartite == Some(true) {
        let (sub, _) = g.edge_subgraph(h);
        if sub.proper_bipartition().is_none() {
            failures.push("factor is not bipartite".into());
        }
    }
    Ok(VerifierVerdict {
        pass: failures.is_empty(),
        failures,
    })
}
