//! Deterministic graph generators for the audit corpora.

use std::collections::BTreeMap;

use ff_core::error::{Error, Result};
use ff_core::graph::Multigraph;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Params = BTreeMap<String, String>;

pub fn params_from(pairs: &[(&str, &str)]) -> Params {
    pairs
        .iter()
        .map(|&(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn get_usize(params: &Params, key: &str) -> Result<usize> {
    params
        .get(key)
        .ok_or_else(|| Error::InvalidInput(format!("missing parameter {key:?}")))?
        .parse()
        .map_err(|_| Error::InvalidInput(format!("parameter {key:?} is not an integer")))
}

fn get_usize_or(params: &Params, key: &str, default: usize) -> Result<usize> {
    match params.get(key) {
        None => Ok(default),
        Some(s) => s
            .parse()
            .map_err(|_| Error::InvalidInput(format!("parameter {key:?} is not an integer"))),
    }
}

pub fn complete(n: usize) -> Multigraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Multigraph::new(n, edges).expect("valid")
}

pub fn complete_bipartite(a: usize, b: usize) -> Multigraph {
    let mut edges = Vec::new();
    for u in 0..a {
        for v in a..a + b {
            edges.push((u, v));
        }
    }
    Multigraph::new(a + b, edges).expect("valid")
}

pub fn cycle(n: usize) -> Multigraph {
    Multigraph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).expect("valid")
}

pub fn path(n: usize) -> Multigraph {
    Multigraph::new(n, (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect()).expect("valid")
}

pub fn dipole(width: usize) -> Multigraph {
    Multigraph::new(2, vec![(0, 1); width]).expect("valid")
}

/// Circulant graph on n vertices with the given offsets (each in 1..=n/2).
pub fn circulant(n: usize, offsets: &[usize]) -> Result<Multigraph> {
    let mut edges = Vec::new();
    for &o in offsets {
        if o == 0 || 2 * o > n {
            return Err(Error::InvalidInput(format!(
                "circulant offset {o} not in 1..=n/2"
            )));
        }
        let span = if 2 * o == n { n / 2 } else { n };
        for i in 0..span {
            edges.push((i, (i + o) % n));
        }
    }
    Multigraph::new(n, edges)
}

/// Every edge of the base graph repeated `t` times.
pub fn multiplied(base: &Multigraph, t: usize) -> Multigraph {
    let mut edges = Vec::new();
    for (_, uv) in base.edges() {
        for _ in 0..t {
            edges.push(uv);
        }
    }
    Multigraph::new(base.n(), edges).expect("valid")
}

/// Configuration-model random regular multigraph (loops and parallel edges
/// possible). Deterministic for (n, r, seed).
pub fn random_regular(n: usize, r: usize, seed: u64) -> Result<Multigraph> {
    if n * r % 2 != 0 {
        return Err(Error::InvalidInput("n * r must be even".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(r)).collect();
    stubs.shuffle(&mut rng);
    let edges: Vec<(usize, usize)> = stubs.chunks(2).map(|c| (c[0], c[1])).collect();
    Multigraph::new(n, edges)
}

/// Union of `count` uniformly random Hamilton cycles; 2*count-regular.
pub fn union_of_hamilton_cycles(n: usize, count: usize, seed: u64) -> Result<Multigraph> {
    if n < 3 {
        return Err(Error::InvalidInput("need n >= 3 for Hamilton cycles".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for _ in 0..count {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        for i in 0..n {
            edges.push((perm[i], perm[(i + 1) % n]));
        }
    }
    Multigraph::new(n, edges)
}

/// Dispatch by family name, as the CLI exposes it.
pub fn generate(family: &str, params: &Params, seed: u64) -> Result<Multigraph> {
    match family {
        "complete" => Ok(complete(get_usize(params, "n")?)),
        "complete-bipartite" => Ok(complete_bipartite(
            get_usize(params, "a")?,
            get_usize(params, "b")?,
        )),
        "cycle" => Ok(cycle(get_usize(params, "n")?)),
        "path" => Ok(path(get_usize(params, "n")?)),
        "dipole" => Ok(dipole(get_usize(params, "width")?)),
        "circulant" => {
            let n = get_usize(params, "n")?;
            let offsets: Vec<usize> = params
                .get("offsets")
                .ok_or_else(|| Error::InvalidInput("missing parameter \"offsets\"".into()))?
                .split(|c| c == '+' || c == ' ' || c == ';')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| Error::InvalidInput(format!("bad offset {s:?}")))
                })
                .collect::<Result<_>>()?;
            circulant(n, &offsets)
        }
        "multiplied" => {
            let base_family = params
                .get("base")
                .ok_or_else(|| Error::InvalidInput("missing parameter \"base\"".into()))?
                .clone();
            let t = get_usize(params, "t")?;
            let mut inner = params.clone();
            inner.remove("base");
            inner.remove("t");
            let base = generate(&base_family, &inner, seed)?;
            Ok(multiplied(&base, t))
        }
        "random-regular-multigraph" => {
            random_regular(get_usize(params, "n")?, get_usize(params, "r")?, seed)
        }
        "union-of-hamilton-cycles" => union_of_hamilton_cycles(
            get_usize(params, "n")?,
            get_usize_or(params, "count", 2)?,
            seed,
        ),
        other => Err(Error::InvalidInput(format!("unknown family {other:?}"))),
    }
}
