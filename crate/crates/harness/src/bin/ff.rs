//! ff: generate graphs, solve factor contracts, audit theorems, verify
//! factors.
//!
//! Exit codes: 0 ok/constructed, 2 precondition unmet, 3 finding recorded,
//! 4 invalid input, 5 capacity exceeded.

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ff_core::connect::{edge_connectivity, max_packing, INFINITE_CONNECTIVITY};
use ff_core::error::{Caps, Error};
use ff_core::factor::{FactorContract, ListFamily};
use ff_core::graph::{const_map, EdgeSubset, Multigraph, ResidueTarget};
use ff_core::orient::Orientation;
use ff_core::pipeline::{
    bip_modk_pipeline, bounded_pipeline, eulerian_pipeline, gen_modk_pipeline, list_pipeline,
    mod2_pipeline, modregular_pipeline, quarter_degree_pipeline, BoundedArgs, ListArgs,
    PipelineResult,
};
use ff_harness::audit::{audit_with_corpus, AuditContext};
use ff_harness::gen::{generate, Params};
use ff_harness::verify::verify;

#[derive(Parser)]
#[command(name = "ff", about = "multigraph factor construction and theorem audits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph from a named family.
    Gen {
        #[arg(long)]
        family: String,
        /// Shorthand for the "n" parameter.
        #[arg(long)]
        n: Option<usize>,
        /// Comma-separated key=value pairs, e.g. offsets=1+2,t=3.
        #[arg(long)]
        params: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Print basic statistics of a graph file.
    Stats { graph: String },
    /// Solve a factor contract on a graph.
    Solve {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        contract: String,
        /// pipeline:<theorem-id> | exact | tour
        #[arg(long)]
        method: String,
        /// Orientation file (ffo-1) for the tour method; forward by default.
        #[arg(long)]
        orientation: Option<String>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Run a theorem audit and write the report.
    Audit {
        #[arg(long)]
        theorem: String,
        /// "default" or a corpus spec JSON file.
        #[arg(long, default_value = "default")]
        corpus: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Verify a factor against a contract.
    Verify {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        factor: String,
        #[arg(long)]
        contract: String,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::InvalidInput(_) => 4,
        Error::PreconditionUnmet(_) | Error::DemandInfeasible { .. } => 2,
        Error::Capacity(_) => 5,
        Error::ContractViolation(_) => 3,
    }
}

fn parse_params(n: Option<usize>, params: &Option<String>) -> Result<Params, Error> {
    let mut map: Params = BTreeMap::new();
    if let Some(n) = n {
        map.insert("n".into(), n.to_string());
    }
    if let Some(text) = params {
        for pair in text.split(',').filter(|s| !s.is_empty()) {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("bad parameter {pair:?}")))?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    Ok(map)
}

fn read_graph(path: &str) -> Result<Multigraph, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}")))?;
    Multigraph::from_json(&text)
}

fn write_or_print(out: &Option<String>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::InvalidInput(format!("cannot write {path}: {e}"))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn contract_mod(c: &FactorContract, n: usize) -> Result<ResidueTarget, Error> {
    let spec = c
        .mod_target
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("contract has no \"mod\" field".into()))?;
    if spec.res.len() != n {
        return Err(Error::InvalidInput("mod residue list has wrong length".into()));
    }
    ResidueTarget::new(spec.k, &spec.res.iter().map(|&r| r as i64).collect::<Vec<_>>())
}

fn contract_subset(ids: &Option<Vec<usize>>, host: usize) -> Result<EdgeSubset, Error> {
    match ids {
        None => Ok(EdgeSubset::empty(host)),
        Some(ids) => EdgeSubset::from_ids(host, ids),
    }
}

fn run_pipeline(
    id: &str,
    g: &Multigraph,
    c: &FactorContract,
    caps: &Caps,
) -> Result<PipelineResult, Error> {
    let m = c.m.unwrap_or(1);
    let m0 = c.m0.unwrap_or(0);
    match id {
        "eulerian-bounded" => eulerian_pipeline(g, caps),
        "quarter-degree" => quarter_degree_pipeline(g, caps),
        "bounded-edge" => {
            let include = contract_subset(&c.include, g.edge_count())?;
            let exclude = contract_subset(&c.exclude, g.edge_count())?;
            bounded_pipeline(
                g,
                &BoundedArgs {
                    m,
                    m0,
                    include: if include.is_empty() { None } else { Some(&include) },
                    exclude: if exclude.is_empty() { None } else { Some(&exclude) },
                    ..Default::default()
                },
                caps,
            )
        }
        "list-edge" => {
            let lists: ListFamily = c
                .list_family(g.n())?
                .ok_or_else(|| Error::InvalidInput("contract has no lists".into()))?;
            let include = contract_subset(&c.include, g.edge_count())?;
            list_pipeline(
                g,
                &lists,
                &ListArgs {
                    m,
                    m0,
                    include: if include.is_empty() { None } else { Some(&include) },
                    ..Default::default()
                },
                caps,
            )
        }
        "mod2-main" => {
            let target = contract_mod(c, g.n())?;
            mod2_pipeline(g, m, m0, &target, None, None, caps)
        }
        "bip-modk" | "bip-modk-edge" => {
            let target = contract_mod(c, g.n())?;
            bip_modk_pipeline(g, &target, m, m0, None, None, caps)
        }
        "gen-modk" => {
            let target = contract_mod(c, g.n())?;
            gen_modk_pipeline(g, &target, m, m0, caps)
        }
        "mod-regular" => {
            let target = contract_mod(c, g.n())?;
            if target.residues().iter().any(|&r| r != 0) {
                return Err(Error::InvalidInput(
                    "mod-regular needs residues all zero".into(),
                ));
            }
            modregular_pipeline(g, target.k(), m, m0, c.bipartite == Some(true), None, caps)
        }
        "bip-eulerian" => modregular_pipeline(g, 2, 1, 0, true, None, caps),
        other => Err(Error::InvalidInput(format!(
            "method pipeline:{other} is not solvable from a contract; \
             see `ff audit` for the remaining theorem ids"
        ))),
    }
}

fn solve_exact(g: &Multigraph, c: &FactorContract) -> Result<Option<EdgeSubset>, Error> {
    // structural clauses need the subset-scan oracle, not the degree solvers
    if c.m.map_or(false, |m| m > 0) || c.m0.map_or(false, |m| m > 0) || c.bipartite == Some(true) {
        return ff_harness::oracle::brute_force_search(g, c, Caps::default().brute_force_edges);
    }
    let include = contract_subset(&c.include, g.edge_count())?;
    let exclude = contract_subset(&c.exclude, g.edge_count())?;
    if let Some(fam) = c.list_family(g.n())? {
        let o = Orientation::all_forward(g.edge_count());
        return ff_core::factor::directed_list_factor(g, &o, &fam);
    }
    let lo = c.g.clone().unwrap_or_else(|| const_map(g.n(), 0));
    let hi = c
        .f
        .clone()
        .unwrap_or_else(|| g.degrees().iter().map(|&d| d as i64).collect());
    if c.mod_target.is_some() {
        let target = contract_mod(c, g.n())?;
        return ff_core::factor::modulo_factor_bounded(g, &target, &lo, &hi, &include, &exclude);
    }
    ff_core::factor::gf_factor(g, &lo, &hi, &include, &exclude)
}

fn solve_tour(
    g: &Multigraph,
    c: &FactorContract,
    orientation: &Option<String>,
) -> Result<EdgeSubset, Error> {
    let o = match orientation {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}")))?;
            Orientation::from_json(&text)?
        }
        None => Orientation::all_forward(g.edge_count()),
    };
    let include = contract_subset(&c.include, g.edge_count())?;
    let exclude = contract_subset(&c.exclude, g.edge_count())?;
    let s = c.s.clone().unwrap_or_else(|| const_map(g.n(), 0));
    let s0 = c.s0.clone().unwrap_or_else(|| const_map(g.n(), 0));
    Ok(ff_core::tour::tour_factor(g, &o, &include, &exclude, &s, &s0)?.factor)
}

fn read_corpus_spec(path: &str) -> Result<Vec<(String, Multigraph)>, Error> {
    #[derive(serde::Deserialize)]
    struct SpecInstance {
        family: String,
        #[serde(default)]
        params: Params,
        #[serde(default)]
        seed: u64,
    }
    #[derive(serde::Deserialize)]
    struct Spec {
        instances: Vec<SpecInstance>,
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}")))?;
    let spec: Spec =
        serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("corpus spec: {e}")))?;
    spec.instances
        .into_iter()
        .enumerate()
        .map(|(i, inst)| {
            let g = generate(&inst.family, &inst.params, inst.seed)?;
            let params: Vec<String> = inst
                .params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            Ok((format!("{}:{}:i={i}", inst.family, params.join(":")), g))
        })
        .collect()
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Gen {
            family,
            n,
            params,
            seed,
            out,
        } => {
            let params = parse_params(n, &params)?;
            let g = generate(&family, &params, seed)?;
            write_or_print(&out, &g.to_json())?;
            Ok(0)
        }
        Command::Stats { graph } => {
            let g = read_graph(&graph)?;
            let degrees = g.degrees();
            println!("n: {}", g.n());
            println!("edges: {}", g.edge_count());
            println!(
                "degrees: min {} max {}",
                degrees.iter().min().copied().unwrap_or(0),
                degrees.iter().max().copied().unwrap_or(0)
            );
            println!(
                "loops: {}",
                (0..g.edge_count()).filter(|&e| g.is_loop(e)).count()
            );
            println!("connected: {}", g.is_connected());
            let lambda = edge_connectivity(&g);
            if lambda == INFINITE_CONNECTIVITY {
                println!("edge-connectivity: infinite");
                println!("max-tree-packing: infinite");
            } else {
                println!("edge-connectivity: {lambda}");
                println!("max-tree-packing: {}", max_packing(&g));
            }
            println!("bipartite: {}", g.proper_bipartition().is_some());
            let caps = Caps::default();
            match ff_core::compat::bipartite_index(&g, &caps) {
                Ok(bi) => println!("bipartite-index: {bi}"),
                Err(_) => println!("bipartite-index: over enumeration cap"),
            }
            Ok(0)
        }
        Command::Solve {
            graph,
            contract,
            method,
            orientation,
            out,
        } => {
            let g = read_graph(&graph)?;
            let text = std::fs::read_to_string(&contract)
                .map_err(|e| Error::InvalidInput(format!("cannot read {contract}: {e}")))?;
            let c = FactorContract::from_json(&text)?;
            let caps = Caps::default();
            if let Some(id) = method.strip_prefix("pipeline:") {
                let result = run_pipeline(id, &g, &c, &caps)?;
                write_or_print(&out, &result.factor.to_json())?;
                Ok(0)
            } else if method == "exact" {
                match solve_exact(&g, &c)? {
                    Some(h) => {
                        write_or_print(&out, &h.to_json())?;
                        Ok(0)
                    }
                    None => {
                        println!("NONE");
                        Ok(0)
                    }
                }
            } else if method == "tour" {
                let h = solve_tour(&g, &c, &orientation)?;
                write_or_print(&out, &h.to_json())?;
                Ok(0)
            } else {
                Err(Error::InvalidInput(format!(
                    "unknown method {method:?}; use pipeline:<id>, exact, or tour"
                )))
            }
        }
        Command::Audit {
            theorem,
            corpus,
            seed,
            out,
        } => {
            let ctx = AuditContext::new(seed);
            let corpus_override = if corpus == "default" {
                None
            } else {
                Some(read_corpus_spec(&corpus)?)
            };
            let report = audit_with_corpus(&theorem, &ctx, corpus_override)?;
            let findings = report.summary.findings;
            write_or_print(&out, &report.to_json())?;
            eprintln!(
                "{}: {}/{} constructed+pass, {} findings, {} precondition-unmet, {} hypothesis-unmet",
                theorem,
                report.summary.passed,
                report.summary.instances,
                report.summary.findings,
                report.summary.preconditions_unmet,
                report.summary.hypothesis_unmet,
            );
            Ok(if findings > 0 { 3 } else { 0 })
        }
        Command::Verify {
            graph,
            factor,
            contract,
        } => {
            let g = read_graph(&graph)?;
            let ftext = std::fs::read_to_string(&factor)
                .map_err(|e| Error::InvalidInput(format!("cannot read {factor}: {e}")))?;
            let h = EdgeSubset::from_json(g.edge_count(), &ftext)?;
            let ctext = std::fs::read_to_string(&contract)
                .map_err(|e| Error::InvalidInput(format!("cannot read {contract}: {e}")))?;
            let c = FactorContract::from_json(&ctext)?;
            let verdict = verify(&g, &h, &c)?;
            if verdict.pass {
                println!("pass");
                Ok(0)
            } else {
                for f in &verdict.failures {
                    println!("fail: {f}");
                }
                Ok(3)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
