//! Exact desk-scale solvers for degree-constrained factors: (g,f)-factors
//! with include/exclude sets, list factors, and bounded modulo-k factors.
//! All searches are complete, so NONE means nonexistence.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeSubset, Multigraph, ResidueTarget, VertexIntMap};
use crate::orient::Orientation;

/// Per-vertex degree lists for L-factors.
pub type ListFamily = Vec<BTreeSet<usize>>;

// ---------------------------------------------------------------------------
// Lovász criterion
// ---------------------------------------------------------------------------

/// A disjoint pair (A, B) violating the (g,f)-factor criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LovaszWitness {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub lhs: i64,
    pub rhs: i64,
}

#[derive(Clone, Debug)]
pub enum LovaszCheck {
    Ok,
    Witness(LovaszWitness),
}

impl LovaszCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, LovaszCheck::Ok)
    }
}

fn mask_vertices(n: usize, mask: u32) -> Vec<usize> {
    (0..n).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Edges of the subset with one end in A and the other in B.
fn cross_count(g: &Multigraph, s: &EdgeSubset, amask: u32, bmask: u32) -> i64 {
    let mut c = 0;
    for e in s.iter() {
        let (u, v) = g.ends(e);
        if u == v {
            continue;
        }
        let ua = amask >> u & 1 == 1;
        let ub = bmask >> u & 1 == 1;
        let va = amask >> v & 1 == 1;
        let vb = bmask >> v & 1 == 1;
        if (ua && vb) || (ub && va) {
            c += 1;
        }
    }
    c
}

/// Evaluate the generalized factor criterion over every disjoint pair (A, B),
/// ordered by |A ∪ B| then lexicographically by the pair of vertex masks.
/// Requires g <= f with equality at no more than one vertex.
pub fn lovasz_check(
    g: &Multigraph,
    lo: &VertexIntMap,
    hi: &VertexIntMap,
    include: &EdgeSubset,
    exclude: &EdgeSubset,
    cap: usize,
) -> Result<LovaszCheck> {
    let n = g.n();
    if lo.len() != n || hi.len() != n {
        return Err(Error::InvalidInput("bound maps have wrong length".into()));
    }
    let mut equalities = 0;
    for v in 0..n {
        if lo[v] > hi[v] {
            return Err(Error::InvalidInput(format!("g({v}) > f({v})")));
        }
        if lo[v] == hi[v] {
            equalities += 1;
        }
    }
    if equalities > 1 {
        return Err(Error::InvalidInput(format!(
            "g = f at {equalities} vertices; the criterion allows at most one"
        )));
    }
    if n > cap {
        return Err(Error::Capacity(format!(
            "pair enumeration needs n <= {cap}, got {n}"
        )));
    }
    let degrees = g.degrees();
    let inc_deg: Vec<i64> = (0..n).map(|v| g.subset_degree(include, v) as i64).collect();
    let exc_deg: Vec<i64> = (0..n).map(|v| g.subset_degree(exclude, v) as i64).collect();
    let full = EdgeSubset::full(g.edge_count());

    let mut pairs: Vec<(u32, u32, u32)> = Vec::new();
    for amask in 0u32..1 << n {
        let rest = !amask & ((1u32 << n) - 1);
        // enumerate submasks of the complement
        let mut bmask = rest;
        loop {
            pairs.push(((amask | bmask).count_ones(), amask, bmask));
            if bmask == 0 {
                break;
            }
            bmask = (bmask - 1) & rest;
        }
    }
    pairs.sort_unstable();

    for &(_, amask, bmask) in &pairs {
        let mut lhs = 0i64;
        let mut rhs = 0i64;
        for v in 0..n {
            if amask >> v & 1 == 1 {
                lhs += inc_deg[v];
                rhs += hi[v];
            }
            if bmask >> v & 1 == 1 {
                lhs += exc_deg[v];
                rhs += degrees[v] as i64 - lo[v];
            }
        }
        lhs -= cross_count(g, include, amask, bmask);
        lhs -= cross_count(g, exclude, amask, bmask);
        rhs -= cross_count(g, &full, amask, bmask);
        if lhs > rhs {
            return Ok(LovaszCheck::Witness(LovaszWitness {
                a: mask_vertices(n, amask),
                b: mask_vertices(n, bmask),
                lhs,
                rhs,
            }));
        }
    }
    Ok(LovaszCheck::Ok)
}

// ---------------------------------------------------------------------------
// Exact DFS solver
// ---------------------------------------------------------------------------

/// What the finished degree at a vertex must satisfy.
enum DegreeGoal<'a> {
    Interval { lo: i64, hi: i64 },
    List(&'a BTreeSet<usize>),
    Modular { k: usize, residue: usize, lo: i64, hi: i64 },
}

impl DegreeGoal<'_> {
    /// Can some achievable final degree in `[cur, cur + slack]` work?
    /// Conservative (interval reachability), which keeps the search complete.
    fn feasible(&self, cur: i64, slack: i64) -> bool {
        match *self {
            DegreeGoal::Interval { lo, hi } => cur.max(lo) <= hi.min(cur + slack),
            DegreeGoal::List(list) => {
                let lo = cur.max(0) as usize;
                let hi = cur + slack;
                if hi < 0 {
                    return false;
                }
                list.range(lo..=hi as usize).next().is_some()
            }
            DegreeGoal::Modular { k, residue, lo, hi } => {
                let lo = cur.max(lo);
                let hi = hi.min(cur + slack);
                if lo > hi {
                    return false;
                }
                // smallest value >= lo congruent to residue mod k
                let shift = (residue as i64 - lo).rem_euclid(k as i64);
                lo + shift <= hi
            }
        }
    }
}

/// Complete DFS over the undecided edges in id order, exclude branch first,
/// pruning with per-endpoint degree-interval feasibility.
fn solve_degree_factor(
    g: &Multigraph,
    goals: &[DegreeGoal],
    include: &EdgeSubset,
    exclude: &EdgeSubset,
) -> Option<EdgeSubset> {
    let n = g.n();
    if !include.is_disjoint(exclude) {
        return None;
    }
    let mut cur = vec![0i64; n];
    let mut slack = vec![0i64; n];
    let mut free = Vec::new();
    for (e, (u, v)) in g.edges() {
        if include.contains(e) {
            if u == v {
                cur[u] += 2;
            } else {
                cur[u] += 1;
                cur[v] += 1;
            }
        } else if !exclude.contains(e) {
            free.push(e);
            if u == v {
                slack[u] += 2;
            } else {
                slack[u] += 1;
                slack[v] += 1;
            }
        }
    }

    for v in 0..n {
        if !goals[v].feasible(cur[v], slack[v]) {
            return None;
        }
    }

    let mut chosen = include.clone();

    fn dfs(
        g: &Multigraph,
        goals: &[DegreeGoal],
        free: &[usize],
        idx: usize,
        cur: &mut Vec<i64>,
        slack: &mut Vec<i64>,
        chosen: &mut EdgeSubset,
    ) -> bool {
        if idx == free.len() {
            return (0..g.n()).all(|v| goals[v].feasible(cur[v], 0));
        }
        let e = free[idx];
        let (u, v) = g.ends(e);
        let w: i64 = if u == v { 2 } else { 1 };
        // branch: exclude e
        slack[u] -= w;
        if u != v {
            slack[v] -= w;
        }
        if goals[u].feasible(cur[u], slack[u])
            && goals[v].feasible(cur[v], slack[v])
            && dfs(g, goals, free, idx + 1, cur, slack, chosen)
        {
            return true;
        }
        // branch: include e
        cur[u] += w;
        if u != v {
            cur[v] += w;
        }
        if goals[u].feasible(cur[u], slack[u])
            && goals[v].feasible(cur[v], slack[v])
            && dfs(g, goals, free, idx + 1, cur, slack, chosen)
        {
            chosen.insert(e);
            return true;
        }
        cur[u] -= w;
        if u != v {
            cur[v] -= w;
        }
        slack[u] += w;
        if u != v {
            slack[v] += w;
        }
        false
    }

    if dfs(g, goals, &free, 0, &mut cur, &mut slack, &mut chosen) {
        Some(chosen)
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Public solvers
// ---------------------------------------------------------------------------

/// A factor H with `lo(v) <= d_H(v) <= hi(v)`, including `include` and
/// excluding `exclude`, or None exactly when there is none.
pub fn gf_factor(
    g: &Multigraph,
    lo: &VertexIntMap,
    hi: &VertexIntMap,
    include: &EdgeSubset,
    exclude: &EdgeSubset,
) -> Result<Option<EdgeSubset>> {
    if lo.len() != g.n() || hi.len() != g.n() {
        return Err(Error::InvalidInput("bound maps have wrong length".into()));
    }
    let goals: Vec<DegreeGoal> = (0..g.n())
        .map(|v| DegreeGoal::Interval { lo: lo[v], hi: hi[v] })
        .collect();
    Ok(solve_degree_factor(g, &goals, include, exclude))
}

/// A (g,f)-factor under an orientation certificate: checks the per-vertex
/// orientation conditions, then solves. Existence is guaranteed when the
/// conditions hold, so NONE becomes a contract violation.
pub fn orientation_gf(
    g: &Multigraph,
    lo: &VertexIntMap,
    hi: &VertexIntMap,
    include: &EdgeSubset,
    exclude: &EdgeSubset,
    o: &Orientation,
) -> Result<EdgeSubset> {
    for v in 0..g.n() {
        let out_g = o.out_degree(g, v) as i64;
        let in_g = o.in_degree(g, v) as i64;
        let in_f = o.in_degree_in(g, include, v) as i64;
        let out_f = o.out_degree_in(g, include, v) as i64;
        let in_f0 = o.in_degree_in(g, exclude, v) as i64;
        let out_f0 = o.out_degree_in(g, exclude, v) as i64;
        if lo[v] > out_g + in_f - out_f0 {
            return Err(Error::PreconditionUnmet(format!(
                "orientation lower condition fails at vertex {v}"
            )));
        }
        if in_g + out_f - in_f0 > hi[v] {
            return Err(Error::PreconditionUnmet(format!(
                "orientation upper condition fails at vertex {v}"
            )));
        }
    }
    match gf_factor(g, lo, hi, include, exclude)? {
        Some(h) => Ok(h),
        None => Err(Error::ContractViolation(
            "orientation conditions hold but no (g,f)-factor was found".into(),
        )),
    }
}

/// A factor H with `d_H(v)` in `lists[v]` for every vertex, or exact NONE.
/// The orientation is not consulted by the search; it carries the theorem
/// hypothesis `|L(v)| >= d^+(v) + 1`, which [`list_hypothesis_holds`] checks.
pub fn directed_list_factor(
    g: &Multigraph,
    _o: &Orientation,
    lists: &ListFamily,
) -> Result<Option<EdgeSubset>> {
    if lists.len() != g.n() {
        return Err(Error::InvalidInput("list family has wrong length".into()));
    }
    let goals: Vec<DegreeGoal> = lists.iter().map(DegreeGoal::List).collect();
    Ok(solve_degree_factor(
        g,
        &goals,
        &EdgeSubset::empty(g.edge_count()),
        &EdgeSubset::empty(g.edge_count()),
    ))
}

pub fn list_hypothesis_holds(g: &Multigraph, o: &Orientation, lists: &ListFamily) -> bool {
    (0..g.n()).all(|v| lists[v].len() > o.out_degree(g, v))
}

/// List factor including F and excluding F0 via the shift reduction:
/// `L'(v) = {x - d_F(v) : x in L(v), d_F(v) <= x <= d_G(v) - d_F0(v)}`
/// solved on `G \ (F u F0)`, then H = H' u F.
pub fn list_factor_incl_excl(
    g: &Multigraph,
    o: &Orientation,
    lists: &ListFamily,
    include: &EdgeSubset,
    exclude: &EdgeSubset,
    s: &VertexIntMap,
    s0: &VertexIntMap,
) -> Result<Option<EdgeSubset>> {
    if lists.len() != g.n() {
        return Err(Error::InvalidInput("list family has wrong length".into()));
    }
    let degrees = g.degrees();
    for v in 0..g.n() {
        let df = g.subset_degree(include, v) as i64;
        let df0 = g.subset_degree(exclude, v) as i64;
        if s[v] > df || s0[v] > df0 {
            return Err(Error::InvalidInput(format!(
                "slack bounds exceed factor degrees at vertex {v}"
            )));
        }
        for &x in &lists[v] {
            if (x as i64) < s[v] || x as i64 > degrees[v] as i64 - s0[v] {
                return Err(Error::InvalidInput(format!(
                    "list value {x} at vertex {v} outside [s, d - s0]"
                )));
            }
        }
    }
    let keep = include.union(exclude).complement();
    let (g2, ids) = g.edge_subgraph(&keep);
    let mut shifted: ListFamily = Vec::with_capacity(g.n());
    for v in 0..g.n() {
        let df = g.subset_degree(include, v);
        let df0 = g.subset_degree(exclude, v);
        let upper = degrees[v].saturating_sub(df0);
        let mut l = BTreeSet::new();
        for &x in lists[v].range(df..=upper) {
            l.insert(x - df);
        }
        shifted.push(l);
    }
    let o2 = restrict_orientation(o, &ids);
    match directed_list_factor(&g2, &o2, &shifted)? {
        None => Ok(None),
        Some(h2) => {
            let mut h = include.clone();
            for e in h2.iter() {
                h.insert(ids[e]);
            }
            Ok(Some(h))
        }
    }
}

/// Hypothesis of the include/exclude list theorem:
/// `|L(v)| >= d^+(v) + 1 + d^-_F(v) + d^-_F0(v) - s(v) - s0(v)`.
pub fn list_incl_excl_hypothesis_holds(
    g: &Multigraph,
    o: &Orientation,
    lists: &ListFamily,
    include: &EdgeSubset,
    exclude: &EdgeSubset,
    s: &VertexIntMap,
    s0: &VertexIntMap,
) -> bool {
    (0..g.n()).all(|v| {
        lists[v].len() as i64
            >= o.out_degree(g, v) as i64
                + 1
                + o.in_degree_in(g, include, v) as i64
                + o.in_degree_in(g, exclude, v) as i64
                - s[v]
                - s0[v]
    })
}

fn restrict_orientation(o: &Orientation, ids: &[usize]) -> Orientation {
    Orientation::new(ids.iter().map(|&e| o.is_forward(e)).collect())
}

/// A factor H with `d_H(v) ≡ target(v) (mod k)` and `lo <= d_H <= hi`,
/// including/excluding the given sets, or exact NONE.
pub fn modulo_factor_bounded(
    g: &Multigraph,
    target: &ResidueTarget,
    lo: &VertexIntMap,
    hi: &VertexIntMap,
    include: &EdgeSubset,
    exclude: &EdgeSubset,
) -> Result<Option<EdgeSubset>> {
    if target.n() != g.n() || lo.len() != g.n() || hi.len() != g.n() {
        return Err(Error::InvalidInput("maps have wrong length".into()));
    }
    let goals: Vec<DegreeGoal> = (0..g.n())
        .map(|v| DegreeGoal::Modular {
            k: target.k(),
            residue: target.residue(v),
            lo: lo[v].max(0),
            hi: hi[v],
        })
        .collect();
    Ok(solve_degree_factor(g, &goals, include, exclude))
}

// ---------------------------------------------------------------------------
// Factor contracts (wire format ffc-1)
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModSpec {
    pub k: usize,
    pub res: Vec<usize>,
}

/// Unified degree-constraint record. Absent fields mean unconstrained.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorContract {
    #[serde(default = "contract_format")]
    pub format: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub include: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exclude: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<i64>>,
    /// Keys are decimal vertex ids.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lists: Option<BTreeMap<String, Vec<usize>>>,
    #[serde(rename = "mod", skip_serializing_if = "Option::is_none")]
    pub mod_target: Option<ModSpec>,
    /// Tree-connectivity demanded of the factor itself.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Tree-connectivity demanded of the complement.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m0: Option<usize>,
    /// Require the factor to be bipartite (loops forbid it).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bipartite: Option<bool>,
    /// Slack maps consumed by the tour construction; ignored by the verifier.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s0: Option<Vec<i64>>,
}

fn contract_format() -> String {
    "ffc-1".into()
}

impl FactorContract {
    pub fn new() -> Self {
        FactorContract {
            format: contract_format(),
            ..Default::default()
        }
    }

    pub fn with_bounds(mut self, g: Vec<i64>, f: Vec<i64>) -> Self {
        self.g = Some(g);
        self.f = Some(f);
        self
    }

    pub fn with_mod(mut self, k: usize, res: Vec<usize>) -> Self {
        self.mod_target = Some(ModSpec { k, res });
        self
    }

    pub fn with_tree_connectivity(mut self, m: usize, m0: usize) -> Self {
        self.m = Some(m);
        if m0 > 0 {
            self.m0 = Some(m0);
        }
        self
    }

    pub fn with_include(mut self, ids: Vec<usize>) -> Self {
        self.include = Some(ids);
        self
    }

    pub fn with_exclude(mut self, ids: Vec<usize>) -> Self {
        self.exclude = Some(ids);
        self
    }

    pub fn with_lists(mut self, lists: &ListFamily) -> Self {
        let map = lists
            .iter()
            .enumerate()
            .map(|(v, l)| (v.to_string(), l.iter().copied().collect()))
            .collect();
        self.lists = Some(map);
        self
    }

    pub fn with_bipartite(mut self) -> Self {
        self.bipartite = Some(true);
        self
    }

    pub fn list_family(&self, n: usize) -> Result<Option<ListFamily>> {
        match &self.lists {
            None => Ok(None),
            Some(map) => {
                let mut fam: ListFamily = vec![BTreeSet::new(); n];
                for (key, values) in map {
                    let v: usize = key
                        .parse()
                        .map_err(|_| Error::InvalidInput(format!("bad list key {key:?}")))?;
                    if v >= n {
                        return Err(Error::InvalidInput(format!("list vertex {v} out of range")));
                    }
                    fam[v] = values.iter().copied().collect();
                }
                Ok(Some(fam))
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("contract serialization")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: FactorContract =
            serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("contract json: {e}")))?;
        if c.format != "ffc-1" {
            return Err(Error::InvalidInput(format!(
                "unknown contract format {:?}",
                c.format
            )));
        }
        Ok(c)
    }
}
