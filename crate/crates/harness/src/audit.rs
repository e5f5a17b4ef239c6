//! Theorem audits: per instance, verify the hypotheses exactly, run the
//! pipeline, re-verify the output independently, and persist anything that
//! deviates as a finding.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use ff_core::compat::{bipartite_index, compatible, decompose_by_bi_index};
use ff_core::connect::{edge_connectivity_at_least, tree_packing};
use ff_core::error::{Caps, Error, Result};
use ff_core::factor::FactorContract;
use ff_core::graph::{EdgeSubset, Multigraph, ResidueTarget};
use ff_core::pipeline::{
    bip_modk_pipeline, bounded_pipeline, eulerian_pipeline, gen_modk_pipeline, list_pipeline,
    mod2_pipeline, modregular_pipeline, nonbip_eulerian_pipeline, quarter_degree_pipeline,
    BoundedArgs, ListArgs, PipelineResult,
};

use crate::gen;
use crate::report::{AuditReport, AuditRow, Finding};
use crate::verify::verify;

pub struct AuditContext {
    pub caps: Caps,
    pub seed: u64,
}

impl AuditContext {
    pub fn new(seed: u64) -> Self {
        AuditContext {
            caps: Caps::default(),
            seed,
        }
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e3779b97f4a7c15))
    }
}

/// Run a single pipeline instance into a report row.
fn run_row(
    g: &Multigraph,
    key: &str,
    theorem: &str,
    hypotheses_ok: bool,
    hypothesis_notes: Vec<String>,
    construct: impl FnOnce() -> Result<PipelineResult>,
    extra: impl FnOnce(&PipelineResult) -> Vec<String>,
) -> AuditRow {
    let repro = format!("ff audit --theorem {theorem} --corpus default");
    let mut row = AuditRow {
        instance: key.to_string(),
        hypotheses_ok,
        hypothesis_notes,
        outcome: String::new(),
        verifier: None,
        finding: None,
        factor: None,
        notes: Vec::new(),
    };
    if !hypotheses_ok {
        row.outcome = "hypothesis-unmet".into();
        return row;
    }
    match construct() {
        Ok(result) => {
            let mut verdict = verify(g, &result.factor, &result.contract)
                .unwrap_or_else(|e| crate::verify::VerifierVerdict {
                    pass: false,
                    failures: vec![format!("verifier error: {e}")],
                });
            verdict.failures.extend(extra(&result));
            verdict.pass = verdict.failures.is_empty();
            row.factor = Some(result.factor.ids());
            row.notes = result.notes.clone();
            if verdict.pass {
                row.outcome = "constructed".into();
                row.verifier = Some(verdict);
            } else {
                // forensic cross-check on desk-size instances: does any
                // factor satisfy the claim at all?
                let oracle_exists = if g.edge_count() <= 16 {
                    crate::oracle::brute_force_search(g, &result.contract, 16)
                        .ok()
                        .map(|found| found.is_some())
                } else {
                    None
                };
                row.outcome = "finding".into();
                row.finding = Some(Finding {
                    kind: "verification-failed".into(),
                    detail: verdict.failures.join("; "),
                    witness: json!({
                        "graph": g.to_json(),
                        "factor": result.factor.ids(),
                        "contract": result.contract,
                        "oracle_exists": oracle_exists,
                    }),
                    repro,
                });
                row.verifier = Some(verdict);
            }
        }
        Err(Error::ContractViolation(msg)) => {
            row.outcome = "finding".into();
            row.finding = Some(Finding {
                kind: "contract-violation".into(),
                detail: msg,
                witness: json!({ "graph": g.to_json() }),
                repro,
            });
        }
        Err(e @ (Error::PreconditionUnmet(_) | Error::DemandInfeasible { .. })) => {
            // hypotheses verified true, so a refusal is itself a finding
            row.outcome = "finding".into();
            row.finding = Some(Finding {
                kind: "hypothesis-mismatch".into(),
                detail: e.to_string(),
                witness: json!({ "graph": g.to_json() }),
                repro,
            });
        }
        Err(e) => {
            row.outcome = "finding".into();
            row.finding = Some(Finding {
                kind: "error".into(),
                detail: e.to_string(),
                witness: json!({ "graph": g.to_json() }),
                repro,
            });
        }
    }
    row
}

/// Residues for a compatible target: random values, then the first vertex
/// adjusted until the full compatibility check accepts.
fn compatible_residues(
    g: &Multigraph,
    k: usize,
    rng: &mut ChaCha8Rng,
    caps: &Caps,
) -> Option<ResidueTarget> {
    let mut res: Vec<i64> = (0..g.n()).map(|_| rng.gen_range(0..k as i64)).collect();
    for _ in 0..k {
        let target = ResidueTarget::new(k, &res).ok()?;
        if compatible(g, &target, caps).ok()?.compatible {
            return Some(target);
        }
        res[0] = (res[0] + 1) % k as i64;
    }
    None
}

// ---------------------------------------------------------------------------
// Corpora
// ---------------------------------------------------------------------------

fn four_edge_connected_corpus(ctx: &AuditContext) -> Vec<(String, Multigraph)> {
    let mut corpus: Vec<(String, Multigraph)> = vec![
        ("complete:n=5".into(), gen::complete(5)),
        ("complete:n=6".into(), gen::complete(6)),
        ("complete:n=7".into(), gen::complete(7)),
        ("circulant:n=7:o=1+2".into(), gen::circulant(7, &[1, 2]).unwrap()),
        ("circulant:n=8:o=1+2".into(), gen::circulant(8, &[1, 2]).unwrap()),
        ("circulant:n=9:o=1+2".into(), gen::circulant(9, &[1, 2]).unwrap()),
        ("mult:cycle:n=4:t=2".into(), gen::multiplied(&gen::cycle(4), 2)),
        ("mult:cycle:n=5:t=2".into(), gen::multiplied(&gen::cycle(5), 2)),
    ];
    for w in 4..=8 {
        corpus.push((format!("dipole:w={w}"), gen::dipole(w)));
    }
    // randomized family: 500 seeded instances, keeping those meeting the
    // 4-edge-connectivity hypothesis
    for i in 0..500u64 {
        let mut rng = ctx.rng(100 + i);
        let seed = rng.gen::<u64>();
        let g = gen::union_of_hamilton_cycles(7 + (i as usize % 3), 2, seed).unwrap();
        if edge_connectivity_at_least(&g, 4) {
            corpus.push((format!("hamilton-union:n={}:i={i:03}", g.n()), g));
        }
    }
    corpus
}

// ---------------------------------------------------------------------------
// Individual audits
// ---------------------------------------------------------------------------

fn audit_eulerian_bounded(
    ctx: &AuditContext,
    corpus: Option<Vec<(String, Multigraph)>>,
) -> Vec<AuditRow> {
    corpus
        .unwrap_or_else(|| four_edge_connected_corpus(ctx))
        .into_iter()
        .map(|(key, g)| {
            let hyp = edge_connectivity_at_least(&g, 4);
            run_row(
                &g,
                &key,
                "eulerian-bounded",
                hyp,
                vec!["4-edge-connected".into()],
                || eulerian_pipeline(&g, &ctx.caps),
                |r| {
                    let mut fails = Vec::new();
                    if !g.spanning_connected(&r.factor) {
                        fails.push("not spanning connected".into());
                    }
                    for (v, &d) in g.subset_degrees(&r.factor).iter().enumerate() {
                        let dg = g.degree(v) as i64;
                        if d % 2 != 0 {
                            fails.push(format!("odd degree at {v}"));
                        }
                        if (d as i64) < dg / 2 - 1 || d as i64 > (dg + 1) / 2 + 2 {
                            fails.push(format!("degree {d} outside window at {v}"));
                        }
                    }
                    fails
                },
            )
        })
        .collect()
}

fn audit_quarter_degree(
    ctx: &AuditContext,
    corpus: Option<Vec<(String, Multigraph)>>,
) -> Vec<AuditRow> {
    corpus
        .unwrap_or_else(|| four_edge_connected_corpus(ctx))
        .into_iter()
        .map(|(key, g)| {
            let hyp = edge_connectivity_at_least(&g, 4);
            run_row(
                &g,
                &key,
                "quarter-degree",
                hyp,
                vec!["4-edge-connected".into()],
                || quarter_degree_pipeline(&g, &ctx.caps),
                |r| {
                    let mut fails = Vec::new();
                    if !g.spanning_connected(&r.factor) {
                        fails.push("not spanning connected".into());
                    }
                    fails
                },
            )
        })
        .collect()
}

fn audit_mod2_main(ctx: &AuditContext) -> Vec<AuditRow> {
    let mut rows = Vec::new();
    // (m, m0) = (1, 0) on the 4-edge-connected corpus with random even f
    for (i, (key, g)) in four_edge_connected_corpus(ctx).into_iter().enumerate() {
        let mut rng = ctx.rng(200 + i as u64);
        let mut res: Vec<i64> = (0..g.n()).map(|_| rng.gen_range(0..2)).collect();
        if res.iter().sum::<i64>() % 2 != 0 {
            res[0] = 1 - res[0];
        }
        let target = ResidueTarget::new(2, &res).unwrap();
        let hyp = edge_connectivity_at_least(&g, 4);
        rows.push(run_row(
            &g,
            &format!("{key}:m=1:m0=0"),
            "mod2-main",
            hyp,
            vec!["4-edge-connected".into(), "residue sum even".into()],
            || mod2_pipeline(&g, 1, 0, &target, None, None, &ctx.caps),
            |_| Vec::new(),
        ));
    }
    // (m, m0) = (1, 1): 6-edge-connected corpus, decomposition into two
    // connected {r-1, r+1}-factors on 2r-regular members
    let six: Vec<(String, Multigraph)> = vec![
        ("dipole:w=6".into(), gen::dipole(6)),
        ("dipole:w=7".into(), gen::dipole(7)),
        ("mult:cycle:n=4:t=3".into(), gen::multiplied(&gen::cycle(4), 3)),
        ("mult:complete:n=4:t=3".into(), gen::multiplied(&gen::complete(4), 3)),
        ("complete:n=7".into(), gen::complete(7)),
        ("circulant:n=8:o=1+2+3".into(), gen::circulant(8, &[1, 2, 3]).unwrap()),
    ];
    for (key, g) in six {
        let hyp = edge_connectivity_at_least(&g, 6);
        let degrees = g.degrees();
        let regular_2r = degrees.iter().all(|&d| d == degrees[0]) && degrees[0] % 2 == 0;
        let r_half = degrees[0] / 2;
        let feasible_parity = regular_2r && (r_half + 1) * g.n() % 2 == 0;
        let res: Vec<i64> = if feasible_parity {
            vec![(r_half as i64 - 1).rem_euclid(2); g.n()]
        } else {
            vec![0; g.n()]
        };
        let target = ResidueTarget::new(2, &res).unwrap();
        if target.sum() % 2 != 0 {
            continue;
        }
        let g2 = g.clone();
        rows.push(run_row(
            &g,
            &format!("{key}:m=1:m0=1"),
            "mod2-main",
            hyp,
            vec!["6-edge-connected".into()],
            || mod2_pipeline(&g2, 1, 1, &target, None, None, &ctx.caps),
            |res_pipe| {
                let mut fails = Vec::new();
                if !g.spanning_connected(&res_pipe.complement) {
                    fails.push("complement not connected".into());
                }
                if feasible_parity {
                    for (v, &d) in g.subset_degrees(&res_pipe.factor).iter().enumerate() {
                        if d + 1 != r_half && d != r_half + 1 {
                            fails.push(format!(
                                "degree {d} at {v} not in {{r-1, r+1}} = {{{}, {}}}",
                                r_half - 1,
                                r_half + 1
                            ));
                        }
                    }
                }
                fails
            },
        ));
    }
    rows
}

fn audit_bounded_edge(ctx: &AuditContext) -> Vec<AuditRow> {
    let mut rows = Vec::new();
    // connected 4-regular graphs: connected {2,3}-factor including a matching
    let four_regular: Vec<(String, Multigraph)> = vec![
        ("mult:cycle:n=4:t=2".into(), gen::multiplied(&gen::cycle(4), 2)),
        ("circulant:n=7:o=1+2".into(), gen::circulant(7, &[1, 2]).unwrap()),
        ("circulant:n=9:o=1+2".into(), gen::circulant(9, &[1, 2]).unwrap()),
        ("random-regular:n=8:r=4:s=1".into(), gen::random_regular(8, 4, 1).unwrap()),
        ("random-regular:n=8:r=4:s=2".into(), gen::random_regular(8, 4, 2).unwrap()),
    ];
    for (key, g) in four_regular {
        if !g.is_connected() {
            continue;
        }
        // greedy matching by edge id
        let mut used = vec![false; g.n()];
        let mut matching = EdgeSubset::empty(g.edge_count());
        for (e, (u, v)) in g.edges() {
            if u != v && !used[u] && !used[v] {
                used[u] = true;
                used[v] = true;
                matching.insert(e);
            }
        }
        let hyp = edge_connectivity_at_least(&g, 2);
        let g2 = g.clone();
        let matching2 = matching.clone();
        rows.push(run_row(
            &g,
            &format!("{key}:matching"),
            "bounded-edge",
            hyp,
            vec!["connected 4-regular".into()],
            move || {
                bounded_pipeline(
                    &g2,
                    &BoundedArgs {
                        m: 1,
                        m0: 0,
                        include: Some(&matching2),
                        ..Default::default()
                    },
                    &ctx.caps,
                )
            },
            |r| {
                let mut fails = Vec::new();
                for (v, &d) in g.subset_degrees(&r.factor).iter().enumerate() {
                    if !(2..=3).contains(&d) {
                        fails.push(format!("degree {d} at {v} not in {{2,3}}"));
                    }
                }
                if !matching.is_subset_of(&r.factor) {
                    fails.push("matching not included".into());
                }
                fails
            },
        ));
    }
    // (m, m0) = (1, 1) on the 4-edge-connected corpus
    for (key, g) in four_edge_connected_corpus(ctx) {
        let hyp = edge_connectivity_at_least(&g, 4);
        let g2 = g.clone();
        rows.push(run_row(
            &g,
            &format!("{key}:m=1:m0=1"),
            "bounded-edge",
            hyp,
            vec!["4-edge-connected".into()],
            move || {
                bounded_pipeline(
                    &g2,
                    &BoundedArgs {
                        m: 1,
                        m0: 1,
                        ..Default::default()
                    },
                    &ctx.caps,
                )
            },
            |_| Vec::new(),
        ));
    }
    // z-target sweep on a dipole
    let g = gen::dipole(4);
    for t in 1..=3i64 {
        let g2 = g.clone();
        rows.push(run_row(
            &g,
            &format!("dipole:w=4:m=1:m0=1:target={t}"),
            "bounded-edge",
            true,
            vec!["4-edge-connected".into()],
            move || {
                bounded_pipeline(
                    &g2,
                    &BoundedArgs {
                        m: 1,
                        m0: 1,
                        z: Some(0),
                        target_z: Some(t),
                        ..Default::default()
                    },
                    &ctx.caps,
                )
            },
            |r| {
                let d = g.subset_degree(&r.factor, 0) as i64;
                if d != t {
                    vec![format!("target {t} missed, degree {d}")]
                } else {
                    Vec::new()
                }
            },
        ));
    }
    rows
}

fn audit_list_edge(ctx: &AuditContext) -> Vec<AuditRow> {
    let mut rows = Vec::new();
    let corpus: Vec<(String, Multigraph)> = vec![
        ("dipole:w=4".into(), gen::dipole(4)),
        ("dipole:w=5".into(), gen::dipole(5)),
        ("dipole:w=6".into(), gen::dipole(6)),
        ("complete:n=5".into(), gen::complete(5)),
        ("mult:cycle:n=4:t=2".into(), gen::multiplied(&gen::cycle(4), 2)),
        ("circulant:n=7:o=1+2".into(), gen::circulant(7, &[1, 2]).unwrap()),
    ];
    let mut cases: Vec<(usize, usize, String, Multigraph)> = Vec::new();
    for (key, g) in corpus {
        cases.push((1, 1, key, g));
    }
    for (key, g) in [
        ("dipole:w=8".to_string(), gen::dipole(8)),
        ("mult:cycle:n=4:t=4".to_string(), gen::multiplied(&gen::cycle(4), 4)),
        (
            "mult:complete-bipartite:a=3:b=3:t=2".to_string(),
            gen::multiplied(&gen::complete_bipartite(3, 3), 2),
        ),
    ] {
        cases.push((2, 0, key, g));
    }
    for (i, (m, m0, key, g)) in cases.into_iter().enumerate() {
        if !edge_connectivity_at_least(&g, 2 * m + 2 * m0) {
            continue;
        }
        let mut rng = ctx.rng(300 + i as u64);
        // random dense list: ceil(d/2)+1 values inside [m, d-m0]
        let lists: ff_core::factor::ListFamily = (0..g.n())
            .map(|v| {
                let d = g.degree(v);
                let need = (d + 1) / 2 + 1;
                let lo = m;
                let hi = d - m0;
                let mut all: Vec<usize> = (lo..=hi).collect();
                while all.len() > need {
                    let idx = rng.gen_range(0..all.len());
                    all.remove(idx);
                }
                all.into_iter().collect()
            })
            .collect();
        let g2 = g.clone();
        let lists2 = lists.clone();
        rows.push(run_row(
            &g,
            &format!("{key}:m={m}:m0={m0}"),
            "list-edge",
            true,
            vec![format!("{}-edge-connected, dense lists", 2 * m + 2 * m0)],
            move || {
                list_pipeline(
                    &g2,
                    &lists2,
                    &ListArgs {
                        m,
                        m0,
                        ..Default::default()
                    },
                    &ctx.caps,
                )
            },
            |r| {
                let mut fails = Vec::new();
                for (v, &d) in g.subset_degrees(&r.factor).iter().enumerate() {
                    if !lists[v].contains(&d) {
                        fails.push(format!("degree {d} not in L({v})"));
                    }
                }
                fails
            },
        ));
    }
    rows
}

fn audit_bip_modk_edge(ctx: &AuditContext) -> Vec<AuditRow> {
    let mut rows = Vec::new();
    let cases: Vec<(usize, usize, usize, Vec<(String, Multigraph)>)> = vec![
        (
            1,
            0,
            2,
            vec![
                ("dipole:w=6".into(), gen::dipole(6)),
                ("dipole:w=7".into(), gen::dipole(7)),
                ("complete-bipartite:a=6:b=6".into(), gen::complete_bipartite(6, 6)),
                ("mult:cycle:n=4:t=3".into(), gen::multiplied(&gen::cycle(4), 3)),
                (
                    "mult:complete-bipartite:a=3:b=3:t=2".into(),
                    gen::multiplied(&gen::complete_bipartite(3, 3), 2),
                ),
            ],
        ),
        (
            1,
            1,
            2,
            vec![
                ("dipole:w=8".into(), gen::dipole(8)),
                ("dipole:w=9".into(), gen::dipole(9)),
                ("mult:cycle:n=4:t=4".into(), gen::multiplied(&gen::cycle(4), 4)),
                (
                    "mult:complete-bipartite:a=3:b=3:t=3".into(),
                    gen::multiplied(&gen::complete_bipartite(3, 3), 3),
                ),
                (
                    "mult:complete-bipartite:a=4:b=4:t=2".into(),
                    gen::multiplied(&gen::complete_bipartite(4, 4), 2),
                ),
            ],
        ),
        (
            1,
            0,
            3,
            vec![
                ("dipole:w=10".into(), gen::dipole(10)),
                ("dipole:w=11".into(), gen::dipole(11)),
                ("mult:cycle:n=4:t=5".into(), gen::multiplied(&gen::cycle(4), 5)),
                (
                    "mult:complete-bipartite:a=3:b=3:t=4".into(),
                    gen::multiplied(&gen::complete_bipartite(3, 3), 4),
                ),
            ],
        ),
    ];
    for (m, m0, k, corpus) in cases {
        for (i, (key, g)) in corpus.into_iter().enumerate() {
            let need = 2 * m + 2 * m0 + 4 * k - 4;
            let mut rng = ctx.rng(400 + k as u64 * 37 + i as u64);
            let target = match compatible_residues(&g, k, &mut rng, &ctx.caps) {
                Some(t) => t,
                None => continue,
            };
            let hyp = edge_connectivity_at_least(&g, need) && g.proper_bipartition().is_some();
            let g2 = g.clone();
            let t2 = target.clone();
            rows.push(run_row(
                &g,
                &format!("{key}:m={m}:m0={m0}:k={k}"),
                "bip-modk-edge",
                hyp,
                vec![format!("{need}-edge-connected bipartite, compatible f")],
                move || bip_modk_pipeline(&g2, &t2, m, m0, None, None, &ctx.caps),
                |_| Vec::new(),
            ));
        }
    }
    rows
}

fn audit_bip_modk_corollaries(ctx: &AuditContext) -> Vec<AuditRow> {
    let mut rows = Vec::new();
    // (4k-2)-edge-connected Eulerian bipartite, k = 2: degrees land in
    // {d/2, d/2 + k}
    let k = 2usize;
    let corpus: Vec<(String, Multigraph)> = vec![
        ("dipole:w=6".into(), gen::dipole(6)),
        ("dipole:w=8".into(), gen::dipole(8)),
        ("mult:cycle:n=4:t=3".into(), gen::multiplied(&gen::cycle(4), 3)),
        (
            "mult:complete-bipartite:a=3:b=3:t=2".into(),
            gen::multiplied(&gen::complete_bipartite(3, 3), 2),
        ),
    ];
    for (key, g) in corpus {
        let eulerian = g.degrees().iter().all(|&d| d % 2 == 0);
        let hyp = eulerian
            && edge_connectivity_at_least(&g, 4 * k - 2)
            && g.proper_bipartition().is_some();
        let res: Vec<i64> = g.degrees().iter().map(|&d| (d / 2) as i64).collect();
        let target = ResidueTarget::new(k, &res).unwrap();
        let g2 = g.clone();
        let t2 = target.clone();
        rows.push(run_row(
            &g,
            &format!("{key}:eulerian-half"),
            "bip-modk",
            hyp,
            vec![format!("{}-edge-connected Eulerian bipartite", 4 * k - 2)],
            move || bip_modk_pipeline(&g2, &t2, 1, 0, None, None, &ctx.caps),
            |r| {
                let mut fails = Vec::new();
                if !g.spanning_connected(&r.factor) {
                    fails.push("not connected".into());
                }
                for (v, &d) in g.subset_degrees(&r.factor).iter().enumerate() {
                    let half = g.degree(v) / 2;
                    if d != half && d != half + k {
                        fails.push(format!(
                            "degree {d} at {v} not in {{{half}, {}}}",
                            half + k
                        ));
                    }
                }
                fails
            },
        ));
    }
    // 8k-edge-connected Eulerian bipartite of even order decomposes into two
    // connected factors with degrees d/2 -+ k
    let corpus16: Vec<(String, Multigraph)> = vec![
        ("dipole:w=16".into(), gen::dipole(16)),
        ("mult:cycle:n=4:t=8".into(), gen::multiplied(&gen::cycle(4), 8)),
    ];
    for (key, g) in corpus16 {
        let hyp = g.n() % 2 == 0
            && g.degrees().iter().all(|&d| d % 2 == 0)
            && edge_connectivity_at_least(&g, 8 * k)
            && g.proper_bipartition().is_some();
        let res: Vec<i64> = g.degrees().iter().map(|&d| (d / 2 + k) as i64).collect();
        let target = ResidueTarget::new(2 * k, &res).unwrap();
        let g2 = g.clone();
        let t2 = target.clone();
        rows.push(run_row(
            &g,
            &format!("{key}:double-split"),
            "bip-modk",
            hyp,
            vec![format!("{}-edge-connected Eulerian bipartite, even order", 8 * k)],
            move || bip_modk_pipeline(&g2, &t2, 1, 1, None, None, &ctx.caps),
            |r| {
                let mut fails = Vec::new();
                if !g.spanning_connected(&r.complement) {
                    fails.push("complement not connected".into());
                }
                for side in [&r.factor, &r.complement] {
                    for (v, &d) in g.subset_degrees(side).iter().enumerate() {
                        let half = g.degree(v) / 2;
                        if d + k != half && d != half + k {
                            fails.push(format!(
                                "degree {d} at {v} not in {{{}, {}}}",
                                half - k,
                                half + k
                            ));
                        }
                    }
                }
                fails
            },
        ));
    }
    rows
}

fn audit_gen_modk(ctx: &AuditContext) -> Vec<AuditRow> {
    let mut rows = Vec::new();
    let cases: Vec<(usize, usize, usize, Vec<(String, Multigraph)>)> = vec![
        (
            1,
            0,
            2,
            vec![
                ("dipole:w=9".into(), gen::dipole(9)),
                ("dipole:w=10".into(), gen::dipole(10)),
                ("mult:complete:n=4:t=5".into(), gen::multiplied(&gen::complete(4), 5)),
                ("mult:complete:n=5:t=4".into(), gen::multiplied(&gen::complete(5), 4)),
            ],
        ),
        (
            1,
            1,
            2,
            vec![
                ("dipole:w=11".into(), gen::dipole(11)),
                ("dipole:w=12".into(), gen::dipole(12)),
                ("mult:complete:n=4:t=6".into(), gen::multiplied(&gen::complete(4), 6)),
                ("mult:complete:n=5:t=5".into(), gen::multiplied(&gen::complete(5), 5)),
            ],
        ),
        // odd modulus exercises the reduced-by-one decomposition variant
        (
            1,
            0,
            3,
            vec![
                ("dipole:w=14".into(), gen::dipole(14)),
                ("mult:complete:n=4:t=7".into(), gen::multiplied(&gen::complete(4), 7)),
            ],
        ),
    ];
    for (m, m0, k, corpus) in cases {
        // odd k gets the reduced tree-connectivity requirement
        let needed = 2 * m + 2 * m0 + 6 * k - 5 - (k % 2);
        for (i, (key, g)) in corpus.into_iter().enumerate() {
            let mut rng = ctx.rng(500 + (m0 as u64) * 13 + i as u64);
            let target = match compatible_residues(&g, k, &mut rng, &ctx.caps) {
                Some(t) => t,
                None => continue,
            };
            let hyp = tree_packing(&g, needed).is_some();
            let g2 = g.clone();
            let t2 = target.clone();
            rows.push(run_row(
                &g,
                &format!("{key}:m={m}:m0={m0}:k={k}"),
                "gen-modk",
                hyp,
                vec![format!("{needed}-tree-connected, compatible f")],
                move || gen_modk_pipeline(&g2, &t2, m, m0, &ctx.caps),
                |_| Vec::new(),
            ));
        }
    }
    // {a,b}-factor corollary: r-regular, a + m0 <= r/2 <= b - m, ab|V| even
    let g = gen::multiplied(&gen::complete(4), 5); // 15-regular, 10-tree-connected
    let (a, b, m, m0) = (7usize, 9usize, 1usize, 0usize);
    let k = b - a;
    let res = ResidueTarget::constant(g.n(), k, a as i64).unwrap();
    let hyp = tree_packing(&g, 2 * m + 2 * m0 + 6 * k - 5).is_some()
        && a * b * g.n() % 2 == 0
        && a + m0 <= 15 / 2
        && 15 / 2 <= b - m;
    let g2 = g.clone();
    rows.push(run_row(
        &g,
        "mult:complete:n=4:t=5:ab-factor",
        "gen-modk",
        hyp,
        vec![format!("{{{a},{b}}}-factor corollary")],
        move || gen_modk_pipeline(&g2, &res, m, m0, &ctx.caps),
        |r| {
            let mut fails = Vec::new();
            for (v, &d) in g.subset_degrees(&r.factor).iter().enumerate() {
                if d != a && d != b {
                    fails.push(format!("degree {d} at {v} not in {{{a},{b}}}"));
                }
            }
            fails
        },
    ));
    rows
}

fn audit_mod_regular(ctx: &AuditContext) -> Vec<AuditRow> {
    let mut rows = Vec::new();
    let cases: Vec<(usize, usize, usize, bool, String, Multigraph)> = vec![
        (2, 1, 0, false, "mult:complete:n=4:t=3".into(), gen::multiplied(&gen::complete(4), 3)),
        (2, 1, 0, false, "dipole:w=5".into(), gen::dipole(5)),
        (2, 1, 0, false, "mult:complete:n=6:t=2".into(), gen::multiplied(&gen::complete(6), 2)),
        (2, 1, 1, false, "mult:complete:n=4:t=3".into(), gen::multiplied(&gen::complete(4), 3)),
        (2, 1, 0, true, "dipole:w=6".into(), gen::dipole(6)),
        (2, 1, 0, true, "mult:cycle:n=4:t=3".into(), gen::multiplied(&gen::cycle(4), 3)),
        (3, 1, 0, false, "mult:complete:n=4:t=5".into(), gen::multiplied(&gen::complete(4), 5)),
        (3, 1, 0, true, "dipole:w=5".into(), gen::dipole(5)),
        (3, 1, 0, true, "mult:cycle:n=4:t=5".into(), gen::multiplied(&gen::cycle(4), 5)),
        // non-bipartite host routed through a bipartite factor
        (2, 1, 1, true, "mult:complete:n=4:t=4".into(), gen::multiplied(&gen::complete(4), 4)),
    ];
    for (k, m, m0, bip_required, key, g) in cases {
        let bipartite = g.proper_bipartition().is_some();
        let needed = if bipartite {
            m + m0 + 2 * k - 2
        } else if bip_required && k == 2 && m == 1 && m0 == 0 {
            4
        } else if bip_required {
            2 * (m + m0 + 2 * k - 2)
        } else {
            m + m0 + 4 * k - 4
        };
        let hyp = tree_packing(&g, needed).is_some();
        let g2 = g.clone();
        rows.push(run_row(
            &g,
            &format!("{key}:k={k}:m={m}:m0={m0}:bip={bip_required}"),
            "mod-regular",
            hyp,
            vec![format!("{needed}-tree-connected")],
            move || modregular_pipeline(&g2, k, m, m0, bip_required, None, &ctx.caps),
            |r| {
                let mut fails = Vec::new();
                for (v, &d) in g.subset_degrees(&r.factor).iter().enumerate() {
                    if d % k != 0 {
                        fails.push(format!("degree {d} at {v} not divisible by {k}"));
                    }
                    if m >= 1 && d == 0 {
                        fails.push(format!("zero degree at {v}"));
                    }
                }
                fails
            },
        ));
    }
    rows
}

fn audit_bip_eulerian(
    ctx: &AuditContext,
    corpus_override: Option<Vec<(String, Multigraph)>>,
) -> Vec<AuditRow> {
    let mut rows = Vec::new();
    let corpus: Vec<(String, Multigraph)> = corpus_override.unwrap_or_else(|| vec![
        ("mult:complete:n=4:t=2".into(), gen::multiplied(&gen::complete(4), 2)),
        ("complete:n=8".into(), gen::complete(8)),
        ("dipole:w=4".into(), gen::dipole(4)),
        ("dipole:w=6".into(), gen::dipole(6)),
        ("dipole:w=8".into(), gen::dipole(8)),
        ("mult:cycle:n=4:t=4".into(), gen::multiplied(&gen::cycle(4), 4)),
        ("mult:cycle:n=5:t=4".into(), gen::multiplied(&gen::cycle(5), 4)),
        (
            "mult:complete-bipartite:a=4:b=4:t=2".into(),
            gen::multiplied(&gen::complete_bipartite(4, 4), 2),
        ),
    ]);
    for (key, g) in corpus {
        let hyp = tree_packing(&g, 4).is_some() || g.proper_bipartition().is_some() && tree_packing(&g, 2).is_some();
        let g2 = g.clone();
        rows.push(run_row(
            &g,
            &key,
            "bip-eulerian",
            hyp,
            vec!["4-tree-connected (or bipartite 2-tree-connected)".into()],
            move || modregular_pipeline(&g2, 2, 1, 0, true, None, &ctx.caps),
            |r| {
                let mut fails = Vec::new();
                if !g.spanning_connected(&r.factor) {
                    fails.push("not spanning connected".into());
                }
                if g.subset_degrees(&r.factor).iter().any(|&d| d % 2 != 0) {
                    fails.push("odd degree".into());
                }
                let (sub, _) = g.edge_subgraph(&r.factor);
                if sub.proper_bipartition().is_none() {
                    fails.push("not bipartite".into());
                }
                fails
            },
        ));
    }
    // negative control: K5 has no bipartite spanning Eulerian subgraph
    let k5 = gen::complete(5);
    let contract = FactorContract::new()
        .with_mod(2, vec![0; 5])
        .with_tree_connectivity(1, 0)
        .with_bipartite();
    let found = crate::oracle::brute_force_search(&k5, &contract, ctx.caps.brute_force_edges);
    let row = match found {
        Ok(None) => AuditRow {
            instance: "complete:n=5:negative-control".into(),
            hypotheses_ok: true,
            hypothesis_notes: vec!["4-edge-connected but only 2-tree-connected".into()],
            outcome: "constructed".into(),
            verifier: Some(crate::verify::VerifierVerdict {
                pass: true,
                failures: Vec::new(),
            }),
            finding: None,
            factor: None,
            notes: vec!["brute force confirms no bipartite spanning Eulerian subgraph".into()],
        },
        Ok(Some(h)) => AuditRow {
            instance: "complete:n=5:negative-control".into(),
            hypotheses_ok: true,
            hypothesis_notes: Vec::new(),
            outcome: "finding".into(),
            verifier: None,
            finding: Some(Finding {
                kind: "negative-control-failed".into(),
                detail: "K5 unexpectedly has a bipartite spanning Eulerian subgraph".into(),
                witness: json!({ "factor": h.ids() }),
                repro: "ff audit --theorem bip-eulerian --corpus default".into(),
            }),
            factor: Some(h.ids()),
            notes: Vec::new(),
        },
        Err(e) => AuditRow {
            instance: "complete:n=5:negative-control".into(),
            hypotheses_ok: true,
            hypothesis_notes: Vec::new(),
            outcome: "finding".into(),
            verifier: None,
            finding: Some(Finding {
                kind: "error".into(),
                detail: e.to_string(),
                witness: json!({}),
                repro: "ff audit --theorem bip-eulerian --corpus default".into(),
            }),
            factor: None,
            notes: Vec::new(),
        },
    };
    rows.push(row);
    rows
}

fn audit_nonbip_eulerian(ctx: &AuditContext) -> Vec<AuditRow> {
    let cases: Vec<(usize, String, Multigraph)> = vec![
        (1, "mult:complete:n=4:t=2".into(), gen::multiplied(&gen::complete(4), 2)),
        (1, "mult:complete:n=5:t=2".into(), gen::multiplied(&gen::complete(5), 2)),
        (2, "mult:complete:n=4:t=3".into(), gen::multiplied(&gen::complete(4), 3)),
        (2, "mult:complete:n=6:t=2".into(), gen::multiplied(&gen::complete(6), 2)),
    ];
    cases
        .into_iter()
        .map(|(k, key, g)| {
            let hyp = tree_packing(&g, 3 * k).is_some()
                && bipartite_index(&g, &ctx.caps).map_or(false, |bi| bi >= k);
            let repro = "ff audit --theorem nonbip-eulerian-k --corpus default".to_string();
            let mut row = AuditRow {
                instance: format!("{key}:k={k}"),
                hypotheses_ok: hyp,
                hypothesis_notes: vec![format!("{}-tree-connected, bi >= {k}", 3 * k)],
                outcome: String::new(),
                verifier: None,
                finding: None,
                factor: None,
                notes: Vec::new(),
            };
            if !hyp {
                row.outcome = "hypothesis-unmet".into();
                return row;
            }
            match nonbip_eulerian_pipeline(&g, k, &ctx.caps) {
                Ok(factors) => {
                    let mut fails = Vec::new();
                    if factors.len() != k {
                        fails.push(format!("expected {k} factors, got {}", factors.len()));
                    }
                    for (i, h) in factors.iter().enumerate() {
                        if !g.spanning_connected(h) {
                            fails.push(format!("factor {i} not connected"));
                        }
                        if g.subset_degrees(h).iter().any(|&d| d % 2 != 0) {
                            fails.push(format!("factor {i} has odd degree"));
                        }
                        let (sub, _) = g.edge_subgraph(h);
                        if sub.proper_bipartition().is_some() {
                            fails.push(format!("factor {i} is bipartite"));
                        }
                        for other in &factors[i + 1..] {
                            if !h.is_disjoint(other) {
                                fails.push(format!("factor {i} overlaps another"));
                            }
                        }
                    }
                    if fails.is_empty() {
                        row.outcome = "constructed".into();
                        row.verifier = Some(crate::verify::VerifierVerdict {
                            pass: true,
                            failures: Vec::new(),
                        });
                        row.factor = Some(factors[0].ids());
                    } else {
                        row.outcome = "finding".into();
                        row.finding = Some(Finding {
                            kind: "verification-failed".into(),
                            detail: fails.join("; "),
                            witness: json!({ "graph": g.to_json() }),
                            repro,
                        });
                    }
                }
                Err(e) => {
                    row.outcome = "finding".into();
                    row.finding = Some(Finding {
                        kind: "hypothesis-mismatch".into(),
                        detail: e.to_string(),
                        witness: json!({ "graph": g.to_json() }),
                        repro,
                    });
                }
            }
            row
        })
        .collect()
}

fn audit_decomp_bi_index(ctx: &AuditContext) -> Vec<AuditRow> {
    let corpus: Vec<(String, Multigraph)> = vec![
        ("dipole:w=3".into(), gen::dipole(3)),
        ("dipole:w=5".into(), gen::dipole(5)),
        ("dipole:w=6".into(), gen::dipole(6)),
        ("complete:n=6".into(), gen::complete(6)),
        ("complete:n=7".into(), gen::complete(7)),
        ("mult:complete:n=4:t=2".into(), gen::multiplied(&gen::complete(4), 2)),
        ("mult:complete:n=4:t=3".into(), gen::multiplied(&gen::complete(4), 3)),
        ("mult:complete:n=6:t=2".into(), gen::multiplied(&gen::complete(6), 2)),
    ];
    let mut rows = Vec::new();
    for (key, g) in corpus {
        for (m1, m2, k0, parity) in [
            (1usize, 1usize, 1usize, None),
            (1, 2, 2, None),
            (1, 1, 1, Some(1u8)),
            (1, 1, 1, Some(2u8)),
        ] {
            let needed = m1 + 2 * m2 + if parity.is_some() { 1 } else { 0 };
            let hyp = tree_packing(&g, needed).is_some();
            let instance = format!(
                "{key}:m1={m1}:m2={m2}:k0={k0}:parity={}",
                parity.map_or("none".to_string(), |s| s.to_string())
            );
            let repro = "ff audit --theorem decomp-bi-index --corpus default".to_string();
            let mut row = AuditRow {
                instance,
                hypotheses_ok: hyp,
                hypothesis_notes: vec![format!("{needed}-tree-connected")],
                outcome: String::new(),
                verifier: None,
                finding: None,
                factor: None,
                notes: Vec::new(),
            };
            if !hyp {
                row.outcome = "hypothesis-unmet".into();
                rows.push(row);
                continue;
            }
            match decompose_by_bi_index(&g, m1, m2, k0, parity, &ctx.caps) {
                Ok(dec) => {
                    let mut fails = Vec::new();
                    if !dec.g1.is_disjoint(&dec.g2)
                        || dec.g1.len() + dec.g2.len() != g.edge_count()
                    {
                        fails.push("G1, G2 do not partition E".into());
                    }
                    let (g1sub, _) = g.edge_subgraph(&dec.g1);
                    if tree_packing(&g1sub, m1).is_none() {
                        fails.push(format!("G1 not {m1}-tree-connected"));
                    }
                    let cross = g
                        .bipartite_factor(&dec.bipartition)
                        .unwrap()
                        .intersection(&dec.g2);
                    let (crosssub, _) = g.edge_subgraph(&cross);
                    if tree_packing(&crosssub, m2).is_none() {
                        fails.push(format!("G2[X,Y] not {m2}-tree-connected"));
                    }
                    let bi = bipartite_index(&g, &ctx.caps).unwrap_or(usize::MAX);
                    let bound = k0.min(bi);
                    if dec.exact {
                        if dec.inside_count != bound {
                            fails.push(format!(
                                "inside count {} != min(k0, bi) = {bound}",
                                dec.inside_count
                            ));
                        }
                    } else if dec.inside_count < bound {
                        fails.push(format!(
                            "inside count {} < min(k0, bi) = {bound}",
                            dec.inside_count
                        ));
                    }
                    if let Some(side) = parity {
                        let part = if side == 1 { &dec.g1 } else { &dec.g2 };
                        if g.subset_degrees(part).iter().any(|&d| d % 2 != 0) {
                            fails.push(format!("side {side} has odd degrees"));
                        }
                    }
                    if fails.is_empty() {
                        row.outcome = "constructed".into();
                        row.verifier = Some(crate::verify::VerifierVerdict {
                            pass: true,
                            failures: Vec::new(),
                        });
                        row.factor = Some(dec.g1.ids());
                        row.notes.push(format!("variant {}", dec.variant));
                    } else {
                        row.outcome = "finding".into();
                        row.finding = Some(Finding {
                            kind: "verification-failed".into(),
                            detail: fails.join("; "),
                            witness: json!({ "graph": g.to_json(), "g1": dec.g1.ids() }),
                            repro,
                        });
                    }
                }
                Err(e) => {
                    row.outcome = "finding".into();
                    row.finding = Some(Finding {
                        kind: "hypothesis-mismatch".into(),
                        detail: e.to_string(),
                        witness: json!({ "graph": g.to_json() }),
                        repro,
                    });
                }
            }
            rows.push(row);
        }
    }
    rows
}

fn audit_bi_index_regular(
    ctx: &AuditContext,
    corpus_override: Option<Vec<(String, Multigraph)>>,
) -> Vec<AuditRow> {
    let corpus: Vec<(String, Multigraph)> = corpus_override.unwrap_or_else(|| vec![
        ("complete:n=4".into(), gen::complete(4)),
        ("complete:n=5".into(), gen::complete(5)),
        ("complete:n=6".into(), gen::complete(6)),
        ("complete:n=7".into(), gen::complete(7)),
        ("cycle:n=5".into(), gen::cycle(5)),
        ("cycle:n=7".into(), gen::cycle(7)),
        ("cycle:n=9".into(), gen::cycle(9)),
        ("circulant:n=8:o=1+2".into(), gen::circulant(8, &[1, 2]).unwrap()),
        ("circulant:n=9:o=1+2".into(), gen::circulant(9, &[1, 2]).unwrap()),
        ("mult:cycle:n=5:t=2".into(), gen::multiplied(&gen::cycle(5), 2)),
        ("mult:complete:n=4:t=2".into(), gen::multiplied(&gen::complete(4), 2)),
        ("complete-bipartite:a=3:b=3".into(), gen::complete_bipartite(3, 3)),
    ]);
    corpus
        .into_iter()
        .map(|(key, g)| {
            let bi = bipartite_index(&g, &ctx.caps).unwrap();
            let degrees = g.degrees();
            let regular = degrees.iter().all(|&d| d == degrees[0]);
            let r = degrees[0];
            let bipartite = g.proper_bipartition().is_some();
            let mut notes = vec![format!("bi = {bi}"), format!("r = {r}")];
            let mut row = AuditRow {
                instance: key,
                hypotheses_ok: regular,
                hypothesis_notes: vec!["regular".into()],
                outcome: "constructed".into(),
                verifier: Some(crate::verify::VerifierVerdict {
                    pass: true,
                    failures: Vec::new(),
                }),
                finding: None,
                factor: None,
                notes: Vec::new(),
            };
            if !regular {
                row.outcome = "hypothesis-unmet".into();
                row.verifier = None;
                return row;
            }
            if !bipartite {
                // even-r bound asserted; odd-r bound recorded only
                if 2 * bi < r {
                    row.outcome = "finding".into();
                    row.verifier = None;
                    row.finding = Some(Finding {
                        kind: "even-bound-failed".into(),
                        detail: format!("bi = {bi} < r/2 = {}", r as f64 / 2.0),
                        witness: json!({ "graph": g.to_json(), "bi": bi, "r": r }),
                        repro: "ff audit --theorem bi-index-regular --corpus default".into(),
                    });
                    return row;
                }
                if r % 2 == 1 {
                    if bi < r {
                        notes.push(format!("odd-r bound fails: bi = {bi} < r = {r}"));
                        row.outcome = "finding".into();
                        row.verifier = None;
                        row.finding = Some(Finding {
                            kind: "odd-bound-recorded".into(),
                            detail: format!(
                                "stated odd-r strengthening bi >= r does not hold: bi = {bi}, r = {r}"
                            ),
                            witness: json!({ "graph": g.to_json(), "bi": bi, "r": r }),
                            repro: "ff audit --theorem bi-index-regular --corpus default".into(),
                        });
                    } else {
                        notes.push(format!("odd-r bound holds: bi = {bi} >= r = {r}"));
                    }
                }
            } else {
                notes.push("bipartite, bound vacuous".into());
            }
            row.notes = notes;
            row
        })
        .collect()
}

/// Run the audit for the given theorem id over its default corpus.
pub fn audit(theorem: &str, ctx: &AuditContext) -> Result<AuditReport> {
    audit_with_corpus(theorem, ctx, None)
}

/// Like [`audit`], but the graph-driven audits can take a custom corpus.
/// Theorems whose instances carry extra parameters use built-in corpora and
/// reject an override.
pub fn audit_with_corpus(
    theorem: &str,
    ctx: &AuditContext,
    corpus: Option<Vec<(String, Multigraph)>>,
) -> Result<AuditReport> {
    let start = std::time::Instant::now();
    let started_unix_ms = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0);
    let corpus_name = if corpus.is_some() { "custom" } else { "default" };
    if corpus.is_some()
        && !matches!(
            theorem,
            "eulerian-bounded" | "quarter-degree" | "bi-index-regular" | "bip-eulerian"
        )
    {
        return Err(Error::InvalidInput(format!(
            "theorem {theorem:?} uses a built-in parameterized corpus"
        )));
    }
    let rows = match theorem {
        "eulerian-bounded" => audit_eulerian_bounded(ctx, corpus),
        "quarter-degree" => audit_quarter_degree(ctx, corpus),
        "mod2-main" => audit_mod2_main(ctx),
        "bounded-edge" => audit_bounded_edge(ctx),
        "list-edge" => audit_list_edge(ctx),
        "bip-modk-edge" => audit_bip_modk_edge(ctx),
        "bip-modk" => audit_bip_modk_corollaries(ctx),
        "gen-modk" => audit_gen_modk(ctx),
        "mod-regular" => audit_mod_regular(ctx),
        "bip-eulerian" => audit_bip_eulerian(ctx, corpus),
        "nonbip-eulerian-k" => audit_nonbip_eulerian(ctx),
        "decomp-bi-index" => audit_decomp_bi_index(ctx),
        "bi-index-regular" => audit_bi_index_regular(ctx, corpus),
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown theorem id {other:?}; known: {:?}",
                ff_core::pipeline::THEOREM_IDS
            )))
        }
    };
    let mut report = AuditReport::assemble(theorem, corpus_name, ctx.seed, rows);
    report.timing.started_unix_ms = started_unix_ms;
    report.timing.wall_ms = start.elapsed().as_millis();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_are_reproducible_for_fixed_seed() {
        // randomized residues are keyed off the context seed, so two runs
        // must serialize identically outside the timing field
        let ctx = AuditContext::new(42);
        let a = audit("mod2-main", &ctx).unwrap();
        let b = audit("mod2-main", &ctx).unwrap();
        assert_eq!(a.comparable_json(), b.comparable_json());
        let other = AuditContext::new(43);
        let c = audit("mod2-main", &other).unwrap();
        // different seed still sound, possibly different residues
        assert!(c.summary.findings == 0);
    }

    #[test]
    fn unknown_theorem_is_invalid_input() {
        let ctx = AuditContext::new(0);
        assert!(matches!(
            audit("no-such-theorem", &ctx),
            Err(Error::InvalidInput(_))
        ));
    }
}
