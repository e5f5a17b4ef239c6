//! Orientation engines: Eulerian orientations, in-degree demand orientations
//! via flow feasibility, and the tree-factor-plus-orientation constructions.

use serde::{Deserialize, Serialize};

use crate::connect::{decompose_partition_connected, edge_connectivity_at_least, Decomposition};
use crate::error::{Error, Result};
use crate::graph::{EdgeSubset, Multigraph, VertexIntMap};

/// Tail/head assignment for every edge of a host graph. `forward[e] = true`
/// orients edge `e = (u, v)` as `u -> v`. A loop contributes 1 to both the
/// out- and in-degree of its vertex regardless of the flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    forward: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct OrientationJson {
    format: String,
    forward: Vec<bool>,
}

impl Orientation {
    pub fn all_forward(edge_count: usize) -> Self {
        Orientation {
            forward: vec![true; edge_count],
        }
    }

    pub fn new(forward: Vec<bool>) -> Self {
        Orientation { forward }
    }

    pub fn edge_count(&self) -> usize {
        self.forward.len()
    }

    pub fn is_forward(&self, e: usize) -> bool {
        self.forward[e]
    }

    pub fn set(&mut self, e: usize, forward: bool) {
        self.forward[e] = forward;
    }

    pub fn tail(&self, g: &Multigraph, e: usize) -> usize {
        let (u, v) = g.ends(e);
        if self.forward[e] {
            u
        } else {
            v
        }
    }

    pub fn head(&self, g: &Multigraph, e: usize) -> usize {
        let (u, v) = g.ends(e);
        if self.forward[e] {
            v
        } else {
            u
        }
    }

    pub fn out_degree(&self, g: &Multigraph, v: usize) -> usize {
        self.out_degree_in(g, &EdgeSubset::full(g.edge_count()), v)
    }

    pub fn in_degree(&self, g: &Multigraph, v: usize) -> usize {
        self.in_degree_in(g, &EdgeSubset::full(g.edge_count()), v)
    }

    /// Out-degree of `v` counting only edges of the subset.
    pub fn out_degree_in(&self, g: &Multigraph, s: &EdgeSubset, v: usize) -> usize {
        let mut d = 0;
        for e in s.iter() {
            if g.is_loop(e) {
                if g.ends(e).0 == v {
                    d += 1;
                }
            } else if self.tail(g, e) == v {
                d += 1;
            }
        }
        d
    }

    pub fn in_degree_in(&self, g: &Multigraph, s: &EdgeSubset, v: usize) -> usize {
        let mut d = 0;
        for e in s.iter() {
            if g.is_loop(e) {
                if g.ends(e).0 == v {
                    d += 1;
                }
            } else if self.head(g, e) == v {
                d += 1;
            }
        }
        d
    }

    pub fn out_degrees(&self, g: &Multigraph) -> Vec<usize> {
        (0..g.n()).map(|v| self.out_degree(g, v)).collect()
    }

    pub fn in_degrees(&self, g: &Multigraph) -> Vec<usize> {
        (0..g.n()).map(|v| self.in_degree(g, v)).collect()
    }

    pub fn reversed(&self) -> Orientation {
        Orientation {
            forward: self.forward.iter().map(|&b| !b).collect(),
        }
    }

    /// Flip the orientation of every edge in the subset.
    pub fn reverse_subset(&mut self, s: &EdgeSubset) {
        for e in s.iter() {
            self.forward[e] = !self.forward[e];
        }
    }

    /// Copy the flags of `other` for the edges of `s`.
    pub fn overlay(&mut self, s: &EdgeSubset, other: &Orientation) {
        for e in s.iter() {
            self.forward[e] = other.forward[e];
        }
    }

    pub fn to_json(&self) -> String {
        let doc = OrientationJson {
            format: "ffo-1".into(),
            forward: self.forward.clone(),
        };
        serde_json::to_string(&doc).expect("orientation serialization")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: OrientationJson = serde_json::from_str(s)
            .map_err(|e| Error::InvalidInput(format!("orientation json: {e}")))?;
        if doc.format != "ffo-1" {
            return Err(Error::InvalidInput(format!(
                "unknown orientation format {:?}",
                doc.format
            )));
        }
        Ok(Orientation {
            forward: doc.forward,
        })
    }
}

// ---------------------------------------------------------------------------
// Max-flow (Dinic) used for demand orientations
// ---------------------------------------------------------------------------

struct FlowNet {
    to: Vec<usize>,
    cap: Vec<i64>,
    head: Vec<Vec<usize>>, // arc indexes per node
}

impl FlowNet {
    fn new(nodes: usize) -> Self {
        FlowNet {
            to: Vec::new(),
            cap: Vec::new(),
            head: vec![Vec::new(); nodes],
        }
    }

    fn add_edge(&mut self, u: usize, v: usize, cap: i64) -> usize {
        let idx = self.to.len();
        self.to.push(v);
        self.cap.push(cap);
        self.head[u].push(idx);
        self.to.push(u);
        self.cap.push(0);
        self.head[v].push(idx + 1);
        idx
    }

    fn bfs_levels(&self, s: usize, t: usize) -> Option<Vec<i32>> {
        let mut level = vec![-1; self.head.len()];
        level[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.head[u] {
                let v = self.to[a];
                if self.cap[a] > 0 && level[v] < 0 {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        if level[t] >= 0 {
            Some(level)
        } else {
            None
        }
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: i64, level: &[i32], it: &mut [usize]) -> i64 {
        if u == t {
            return pushed;
        }
        while it[u] < self.head[u].len() {
            let a = self.head[u][it[u]];
            let v = self.to[a];
            if self.cap[a] > 0 && level[v] == level[u] + 1 {
                let got = self.dfs(v, t, pushed.min(self.cap[a]), level, it);
                if got > 0 {
                    self.cap[a] -= got;
                    self.cap[a ^ 1] += got;
                    return got;
                }
            }
            it[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        while let Some(level) = self.bfs_levels(s, t) {
            let mut it = vec![0; self.head.len()];
            loop {
                let pushed = self.dfs(s, t, i64::MAX, &level, &mut it);
                if pushed == 0 {
                    break;
                }
                flow += pushed;
            }
        }
        flow
    }

    /// Nodes reachable from `s` in the residual network.
    fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.head.len()];
        seen[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.head[u] {
                let v = self.to[a];
                if self.cap[a] > 0 && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }
}

/// Orient the subset `within` so every vertex gets in-degree at least `l(v)`
/// counted inside the subset (negative demands mean zero). Edges outside the
/// subset keep their forward flag. On infeasibility the violating vertex cut
/// comes back in the error.
pub fn demand_orientation_in(
    g: &Multigraph,
    within: &EdgeSubset,
    l: &VertexIntMap,
) -> Result<Orientation> {
    if l.len() != g.n() {
        return Err(Error::InvalidInput("demand map has wrong length".into()));
    }
    let need: Vec<i64> = l.iter().map(|&x| x.max(0)).collect();
    let total: i64 = need.iter().sum();
    let edge_ids: Vec<usize> = within.iter().collect();
    // nodes: 0 = source, 1..=E edge nodes, then vertex nodes, then sink
    let s = 0;
    let voff = 1 + edge_ids.len();
    let t = voff + g.n();
    let mut net = FlowNet::new(t + 1);
    let mut edge_arcs = Vec::with_capacity(edge_ids.len());
    for (i, &e) in edge_ids.iter().enumerate() {
        net.add_edge(s, 1 + i, 1);
        let (u, v) = g.ends(e);
        let a_u = net.add_edge(1 + i, voff + u, 1);
        let a_v = if v != u {
            Some(net.add_edge(1 + i, voff + v, 1))
        } else {
            None
        };
        edge_arcs.push((a_u, a_v));
    }
    for v in 0..g.n() {
        if need[v] > 0 {
            net.add_edge(voff + v, t, need[v]);
        }
    }
    let flow = net.max_flow(s, t);
    if flow < total {
        let reach = net.residual_reachable(s);
        let cut: Vec<usize> = (0..g.n()).filter(|&v| !reach[voff + v]).collect();
        return Err(Error::DemandInfeasible { cut });
    }
    let mut orientation = Orientation::all_forward(g.edge_count());
    for (i, &e) in edge_ids.iter().enumerate() {
        let (a_u, a_v) = edge_arcs[i];
        // saturated arc = that endpoint is the head
        if net.cap[a_u] == 0 {
            orientation.set(e, false); // head = u
        } else if let Some(a) = a_v {
            if net.cap[a] == 0 {
                orientation.set(e, true); // head = v
            }
        }
    }
    Ok(orientation)
}

/// Orientation of the whole graph with `d^-(v) >= l(v)` for every vertex.
pub fn demand_orientation(g: &Multigraph, l: &VertexIntMap) -> Result<Orientation> {
    demand_orientation_in(g, &EdgeSubset::full(g.edge_count()), l)
}

/// Balanced orientation (`d^+ = d^-` at every vertex) of a graph whose
/// degrees are all even, by walking Eulerian circuits per component.
pub fn eulerian_orientation(g: &Multigraph) -> Result<Orientation> {
    for v in 0..g.n() {
        if g.degree(v) % 2 != 0 {
            return Err(Error::PreconditionUnmet(format!(
                "vertex {v} has odd degree {}",
                g.degree(v)
            )));
        }
    }
    let mut orientation = Orientation::all_forward(g.edge_count());
    let mut incidence: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (e, (u, v)) in g.edges() {
        incidence[u].push(e);
        if v != u {
            incidence[v].push(e);
        }
    }
    let mut used = vec![false; g.edge_count()];
    let mut ptr = vec![0usize; g.n()];
    for start in 0..g.n() {
        let mut stack = vec![start];
        while let Some(&v) = stack.last() {
            let mut advanced = false;
            while ptr[v] < incidence[v].len() {
                let e = incidence[v][ptr[v]];
                if used[e] {
                    ptr[v] += 1;
                    continue;
                }
                used[e] = true;
                let w = g.other_end(e, v);
                // orient along the walk: tail = v
                orientation.set(e, g.ends(e).0 == v);
                stack.push(w);
                advanced = true;
                break;
            }
            if !advanced {
                stack.pop();
            }
        }
    }
    debug_assert!((0..g.n()).all(|v| orientation.out_degree(g, v) == orientation.in_degree(g, v)));
    Ok(orientation)
}

// ---------------------------------------------------------------------------
// Factor-plus-orientation constructions
// ---------------------------------------------------------------------------

/// Output of [`basic_decomposition`].
#[derive(Clone, Debug)]
pub struct BasicDecomposition {
    /// The m-tree-connected factor H (contains `include`, avoids `exclude`).
    pub tree_factor: EdgeSubset,
    pub packing: crate::connect::TreePacking,
    /// Everything outside H and the excluded factor.
    pub rest: EdgeSubset,
    /// Orientation meeting `d^+ >= demand` within `rest`.
    pub rest_orientation: Orientation,
    /// The demand map used (floor(d/2) - m, ceiling at `z`).
    pub demand: VertexIntMap,
}

/// Half-degree demand map: `floor(d_G(v)/2) - m`, raised to the ceiling at
/// the distinguished vertex.
pub fn half_degree_demand(g: &Multigraph, m: usize, z: Option<usize>) -> VertexIntMap {
    (0..g.n())
        .map(|v| {
            let d = g.degree(v) as i64;
            if Some(v) == z {
                (d + 1) / 2 - m as i64
            } else {
                d / 2 - m as i64
            }
        })
        .collect()
}

/// An m-tree-connected factor H including `include`, excluding `exclude`,
/// whose complement (after dropping `exclude`) is orientable with out-degree
/// at least `floor(d_G(v)/2) - m` (the ceiling at `z`).
pub fn basic_decomposition(
    g: &Multigraph,
    m: usize,
    include: &EdgeSubset,
    exclude: &EdgeSubset,
    z: Option<usize>,
) -> Result<BasicDecomposition> {
    if !include.is_disjoint(exclude) {
        return Err(Error::PreconditionUnmet(
            "include and exclude factors overlap".into(),
        ));
    }
    if include.iter().chain(exclude.iter()).any(|e| g.is_loop(e)) {
        return Err(Error::PreconditionUnmet("forced factors must be loopless".into()));
    }
    if g.subset_max_degree(include) > m {
        return Err(Error::PreconditionUnmet(format!(
            "include factor has maximum degree {} > m = {m}",
            g.subset_max_degree(include)
        )));
    }
    if exclude.len() > m {
        return Err(Error::PreconditionUnmet(format!(
            "exclude factor has {} edges > m = {m}",
            exclude.len()
        )));
    }
    if !edge_connectivity_at_least(g, 2 * m) {
        return Err(Error::PreconditionUnmet(format!(
            "graph is not {}-edge-connected",
            2 * m
        )));
    }
    let demand = half_degree_demand(g, m, z);
    let (g0, ids) = g.edge_subgraph(&exclude.complement());
    let mut include0 = EdgeSubset::empty(g0.edge_count());
    for (new_e, &old_e) in ids.iter().enumerate() {
        if include.contains(old_e) {
            include0.insert(new_e);
        }
    }
    let demand_clamped: VertexIntMap = demand.iter().map(|&x| x.max(0)).collect();
    let dec: Decomposition = decompose_partition_connected(&g0, m, &demand_clamped, &include0)?;

    let mut tree_factor = EdgeSubset::empty(g.edge_count());
    for e in dec.tree_factor.iter() {
        tree_factor.insert(ids[e]);
    }
    let mut rest = EdgeSubset::empty(g.edge_count());
    let mut rest_orientation = Orientation::all_forward(g.edge_count());
    for e in dec.rest.iter() {
        rest.insert(ids[e]);
        rest_orientation.set(ids[e], dec.rest_orientation.is_forward(e));
    }
    let trees = dec
        .packing
        .trees
        .iter()
        .map(|t| {
            let mut mapped = EdgeSubset::empty(g.edge_count());
            for e in t.iter() {
                mapped.insert(ids[e]);
            }
            mapped
        })
        .collect();
    Ok(BasicDecomposition {
        tree_factor,
        packing: crate::connect::TreePacking { trees },
        rest,
        rest_orientation,
        demand,
    })
}

/// Orient the edges of a spanning tree away from `root` (every non-root
/// vertex gets in-degree exactly 1 within the tree).
pub fn orient_tree_from_root(
    g: &Multigraph,
    tree: &EdgeSubset,
    root: usize,
    orientation: &mut Orientation,
) {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for e in tree.iter() {
        let (u, v) = g.ends(e);
        adj[u].push(e);
        adj[v].push(e);
    }
    let mut seen = vec![false; g.n()];
    seen[root] = true;
    let mut queue = std::collections::VecDeque::from([root]);
    let mut placed = EdgeSubset::empty(g.edge_count());
    while let Some(v) = queue.pop_front() {
        for &e in &adj[v] {
            let w = g.other_end(e, v);
            if !seen[w] && !placed.contains(e) {
                placed.insert(e);
                // tail = v (away from root)
                orientation.set(e, g.ends(e).0 == v);
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
}

/// Output of [`extend_preorientation`].
#[derive(Clone, Debug)]
pub struct ExtendedOrientation {
    /// The m-tree-connected factor F (includes `include`, avoids the
    /// pre-oriented factor).
    pub factor: EdgeSubset,
    pub packing: crate::connect::TreePacking,
    /// Full orientation of the host graph extending the pre-orientation.
    pub orientation: Orientation,
    /// The auxiliary factor selected to realize the in-degree budget `r`.
    pub selected: EdgeSubset,
}

/// Extend a pre-orientation of `pre` to the whole graph so that every vertex
/// has out-degree at most `ceil(d_G(v)/2)` (at `z`: `floor(d_G(z)/2)`), while
/// an m-tree-connected factor F including `include` and excluding `pre`
/// satisfies `d^-_F(v) = m - r(v) - d^-_pre(v)` exactly.
pub fn extend_preorientation(
    g: &Multigraph,
    m: usize,
    include: &EdgeSubset,
    pre: &EdgeSubset,
    pre_orientation: &Orientation,
    r: &VertexIntMap,
    z: Option<usize>,
) -> Result<ExtendedOrientation> {
    if r.len() != g.n() {
        return Err(Error::InvalidInput("r has wrong length".into()));
    }
    if r.iter().any(|&x| x < 0) {
        return Err(Error::InvalidInput("r must be nonnegative".into()));
    }
    let r_total: i64 = r.iter().sum();
    if r_total != m as i64 - pre.len() as i64 {
        return Err(Error::InvalidInput(format!(
            "sum of r is {r_total}, expected m - |pre| = {}",
            m as i64 - pre.len() as i64
        )));
    }
    if !include.is_disjoint(pre) {
        return Err(Error::PreconditionUnmet(
            "include overlaps the pre-oriented factor".into(),
        ));
    }
    if !edge_connectivity_at_least(g, 2 * m) {
        return Err(Error::PreconditionUnmet(format!(
            "graph is not {}-edge-connected",
            2 * m
        )));
    }

    // Select a loopless factor outside include/pre with in-degree exactly r.
    let mut candidates = EdgeSubset::empty(g.edge_count());
    for (e, _) in g.edges() {
        if !include.contains(e) && !pre.contains(e) && !g.is_loop(e) {
            candidates.insert(e);
        }
    }
    let (selected, selected_orientation) = select_exact_indegree(g, &candidates, r)?;

    // Decompose with both excluded factors out of the way.
    let exclude = pre.union(&selected);
    let basic = basic_decomposition(g, m, include, &exclude, z)?;

    // Orient F: root q(v) = r(v) + d^-_pre(v) trees at v, each tree directed
    // away from its root, making d^-_F(v) = m - q(v).
    let mut orientation = Orientation::all_forward(g.edge_count());
    let mut roots = Vec::with_capacity(m);
    for v in 0..g.n() {
        let mut q = r[v];
        for e in pre.iter() {
            if !g.is_loop(e) && pre_orientation.head(g, e) == v {
                q += 1;
            }
        }
        for _ in 0..q {
            roots.push(v);
        }
    }
    debug_assert_eq!(roots.len(), m);
    for (i, tree) in basic.packing.trees.iter().enumerate() {
        orient_tree_from_root(g, tree, roots[i], &mut orientation);
    }
    // rest: demand d^+ >= l within rest, reversed to give d^- >= l.
    let mut rest_rev = basic.rest_orientation.clone();
    rest_rev.reverse_subset(&basic.rest);
    orientation.overlay(&basic.rest, &rest_rev);
    orientation.overlay(pre, pre_orientation);
    orientation.overlay(&selected, &selected_orientation);

    Ok(ExtendedOrientation {
        factor: basic.tree_factor,
        packing: basic.packing,
        orientation,
        selected,
    })
}

/// Pick a subset of `candidates` plus an orientation with in-degree exactly
/// `r(v)` at every vertex (flow feasibility; deterministic).
fn select_exact_indegree(
    g: &Multigraph,
    candidates: &EdgeSubset,
    r: &VertexIntMap,
) -> Result<(EdgeSubset, Orientation)> {
    let need: Vec<i64> = r.iter().map(|&x| x.max(0)).collect();
    let total: i64 = need.iter().sum();
    let ids: Vec<usize> = candidates.iter().collect();
    let s = 0;
    let voff = 1 + ids.len();
    let t = voff + g.n();
    let mut net = FlowNet::new(t + 1);
    let mut arcs = Vec::with_capacity(ids.len());
    for (i, &e) in ids.iter().enumerate() {
        net.add_edge(s, 1 + i, 1);
        let (u, v) = g.ends(e);
        let a_u = net.add_edge(1 + i, voff + u, 1);
        let a_v = net.add_edge(1 + i, voff + v, 1);
        arcs.push((a_u, a_v, u, v));
    }
    for v in 0..g.n() {
        if need[v] > 0 {
            net.add_edge(voff + v, t, need[v]);
        }
    }
    let flow = net.max_flow(s, t);
    if flow < total {
        let reach = net.residual_reachable(s);
        let cut: Vec<usize> = (0..g.n()).filter(|&v| !reach[voff + v]).collect();
        return Err(Error::DemandInfeasible { cut });
    }
    let mut selected = EdgeSubset::empty(g.edge_count());
    let mut orientation = Orientation::all_forward(g.edge_count());
    for (i, &e) in ids.iter().enumerate() {
        let (a_u, a_v, _u, _v) = arcs[i];
        if net.cap[a_u] == 0 {
            // head = u, so tail = v: backward
            selected.insert(e);
            orientation.set(e, false);
        } else if net.cap[a_v] == 0 {
            selected.insert(e);
            orientation.set(e, true);
        }
    }
    Ok((selected, orientation))
}
