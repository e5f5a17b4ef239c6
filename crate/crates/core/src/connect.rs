//! Edge connectivity, spanning-tree packing with certificates, and
//! partition-connectivity testing and decomposition.
//!
//! Tree packings come from matroid-union augmentation, so a NONE answer is a
//! proof of nonexistence, not a heuristic miss. The partition-connectivity
//! decomposition runs the same engine with one extra transversal part that
//! reserves edges for the out-degree demand.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Dsu, EdgeSubset, Multigraph, VertexIntMap};
use crate::orient::Orientation;

/// Marker returned by [`edge_connectivity`] for the one-vertex graph.
pub const INFINITE_CONNECTIVITY: usize = usize::MAX;

/// Global min cut of the multigraph (Stoer–Wagner on collapsed edge weights).
/// Returns 0 for a disconnected graph and [`INFINITE_CONNECTIVITY`] for n = 1.
pub fn edge_connectivity(g: &Multigraph) -> usize {
    let n = g.n();
    if n <= 1 {
        return INFINITE_CONNECTIVITY;
    }
    if !g.is_connected() {
        return 0;
    }
    let mut weight = vec![vec![0u64; n]; n];
    for (_, (u, v)) in g.edges() {
        if u != v {
            weight[u][v] += 1;
            weight[v][u] += 1;
        }
    }
    let mut active: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    while active.len() > 1 {
        // one minimum-cut phase
        let mut in_a = vec![false; n];
        let mut w = vec![0u64; n];
        let mut order = Vec::with_capacity(active.len());
        for _ in 0..active.len() {
            let mut pick = usize::MAX;
            for &v in &active {
                if !in_a[v] && (pick == usize::MAX || w[v] > w[pick]) {
                    pick = v;
                }
            }
            in_a[pick] = true;
            order.push(pick);
            for &v in &active {
                if !in_a[v] {
                    w[v] += weight[pick][v];
                }
            }
        }
        let t = *order.last().unwrap();
        let s = order[order.len() - 2];
        best = best.min(w[t]);
        // merge t into s
        for &v in &active {
            if v != s && v != t {
                weight[s][v] += weight[t][v];
                weight[v][s] = weight[s][v];
            }
        }
        active.retain(|&v| v != t);
    }
    best as usize
}

pub fn edge_connectivity_at_least(g: &Multigraph, c: usize) -> bool {
    if c == 0 {
        return true;
    }
    let lambda = edge_connectivity(g);
    lambda == INFINITE_CONNECTIVITY || lambda >= c
}

// ---------------------------------------------------------------------------
// Matroid union
// ---------------------------------------------------------------------------

pub(crate) trait Matroid {
    fn is_independent(&self, elems: &[usize]) -> bool;
}

/// Graphic matroid of the host graph: independent = forest (loop-free).
pub(crate) struct GraphicMatroid<'g> {
    g: &'g Multigraph,
}

impl Matroid for GraphicMatroid<'_> {
    fn is_independent(&self, elems: &[usize]) -> bool {
        let mut dsu = Dsu::new(self.g.n());
        for &e in elems {
            let (u, v) = self.g.ends(e);
            if u == v || !dsu.union(u, v) {
                return false;
            }
        }
        true
    }
}

/// Transversal matroid of "demand slots": vertex `v` offers `slots[v]` slots
/// and an edge may fill one slot at either endpoint. Independent = matchable.
pub(crate) struct DemandMatroid<'g> {
    g: &'g Multigraph,
    slots: Vec<usize>,
}

impl DemandMatroid<'_> {
    /// Maximum matching of `elems` into slots; `None` if not all match.
    fn full_matching(&self, elems: &[usize]) -> Option<Vec<(usize, usize)>> {
        let n = self.g.n();
        let mut assigned: Vec<Vec<usize>> = vec![Vec::new(); n]; // slot side
        let mut matched_to: Vec<Option<usize>> = vec![None; elems.len()];

        fn try_augment(
            g: &Multigraph,
            slots: &[usize],
            elems: &[usize],
            i: usize,
            assigned: &mut Vec<Vec<usize>>,
            matched_to: &mut Vec<Option<usize>>,
            visited: &mut Vec<bool>,
        ) -> bool {
            let (u, w) = g.ends(elems[i]);
            let mut cands = vec![u];
            if w != u {
                cands.push(w);
            }
            for v in cands {
                if visited[v] {
                    continue;
                }
                visited[v] = true;
                if assigned[v].len() < slots[v] {
                    assigned[v].push(i);
                    matched_to[i] = Some(v);
                    return true;
                }
                for k in 0..assigned[v].len() {
                    let j = assigned[v][k];
                    if try_augment(g, slots, elems, j, assigned, matched_to, visited) {
                        assigned[v][k] = i;
                        matched_to[i] = Some(v);
                        return true;
                    }
                }
            }
            false
        }

        for i in 0..elems.len() {
            let mut visited = vec![false; n];
            if !try_augment(
                self.g,
                &self.slots,
                elems,
                i,
                &mut assigned,
                &mut matched_to,
                &mut visited,
            ) {
                return None;
            }
        }
        Some(
            matched_to
                .into_iter()
                .enumerate()
                .map(|(i, v)| (elems[i], v.unwrap()))
                .collect(),
        )
    }
}

impl Matroid for DemandMatroid<'_> {
    fn is_independent(&self, elems: &[usize]) -> bool {
        self.full_matching(elems).is_some()
    }
}

/// Knuth-style matroid union over a fixed part list. Elements are inserted
/// greedily; BFS over fundamental circuits finds augmenting exchanges, so the
/// final assignment is a maximum independent set of the union matroid.
pub(crate) struct MatroidUnion<'m> {
    parts: Vec<Vec<usize>>, // sorted element lists
    assign: Vec<Option<usize>>,
    mats: Vec<&'m dyn Matroid>,
}

impl<'m> MatroidUnion<'m> {
    pub fn new(mats: Vec<&'m dyn Matroid>, n_elems: usize) -> Self {
        MatroidUnion {
            parts: vec![Vec::new(); mats.len()],
            assign: vec![None; n_elems],
            mats,
        }
    }

    pub fn part(&self, i: usize) -> &[usize] {
        &self.parts[i]
    }

    fn with_elem(&self, i: usize, x: usize) -> Vec<usize> {
        let mut v = self.parts[i].clone();
        v.push(x);
        v
    }

    fn without_with(&self, i: usize, f: usize, x: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.parts[i].iter().copied().filter(|&e| e != f).collect();
        v.push(x);
        v
    }

    /// Try to grow the union by `x0`. `locked(x, i)` forbids element `x`
    /// from ever sitting in part `i`.
    pub fn try_insert(&mut self, x0: usize, locked: &dyn Fn(usize, usize) -> bool) -> bool {
        let n = self.assign.len();
        let mut labeled = vec![false; n];
        let mut pred: Vec<Option<usize>> = vec![None; n];
        labeled[x0] = true;
        let mut queue = VecDeque::from([x0]);
        while let Some(x) = queue.pop_front() {
            for i in 0..self.mats.len() {
                if locked(x, i) || self.assign[x] == Some(i) {
                    continue;
                }
                if self.mats[i].is_independent(&self.with_elem(i, x)) {
                    self.apply_chain(x, i, &pred);
                    return true;
                }
                // fundamental circuit of parts[i] + x
                for k in 0..self.parts[i].len() {
                    let f = self.parts[i][k];
                    if labeled[f] {
                        continue;
                    }
                    if self.mats[i].is_independent(&self.without_with(i, f, x)) {
                        labeled[f] = true;
                        pred[f] = Some(x);
                        queue.push_back(f);
                    }
                }
            }
        }
        false
    }

    fn apply_chain(&mut self, last: usize, free_part: usize, pred: &[Option<usize>]) {
        let mut cur = last;
        let mut into = free_part;
        loop {
            let old = self.assign[cur];
            if let Some(o) = old {
                self.parts[o].retain(|&e| e != cur);
            }
            self.parts[into].push(cur);
            self.parts[into].sort_unstable();
            self.assign[cur] = Some(into);
            match pred[cur] {
                None => break,
                Some(p) => {
                    into = old.expect("chain interior element had a part");
                    cur = p;
                }
            }
        }
        #[cfg(debug_assertions)]
        for i in 0..self.mats.len() {
            debug_assert!(self.mats[i].is_independent(&self.parts[i]));
        }
    }
}

// ---------------------------------------------------------------------------
// Tree packing
// ---------------------------------------------------------------------------

/// m pairwise edge-disjoint spanning trees of a host graph.
#[derive(Clone, Debug)]
pub struct TreePacking {
    pub trees: Vec<EdgeSubset>,
}

impl TreePacking {
    /// Union of all trees as one factor.
    pub fn union(&self, host_edges: usize) -> EdgeSubset {
        let mut u = EdgeSubset::empty(host_edges);
        for t in &self.trees {
            u = u.union(t);
        }
        u
    }

    /// Re-check the type invariants against the host graph.
    pub fn verify(&self, g: &Multigraph) -> bool {
        let mut seen = EdgeSubset::empty(g.edge_count());
        for t in &self.trees {
            if t.len() != g.n().saturating_sub(1) || !g.spanning_connected(t) {
                return false;
            }
            if !seen.is_disjoint(t) {
                return false;
            }
            seen = seen.union(t);
        }
        true
    }
}

/// `m` edge-disjoint spanning trees, or None exactly when no packing exists.
/// Edges forced by `include` (if given) end up inside the packing.
pub fn tree_packing(g: &Multigraph, m: usize) -> Option<TreePacking> {
    tree_packing_including(g, m, None)
}

pub fn tree_packing_including(
    g: &Multigraph,
    m: usize,
    include: Option<&EdgeSubset>,
) -> Option<TreePacking> {
    if m == 0 {
        return Some(TreePacking { trees: Vec::new() });
    }
    let target = m * g.n().saturating_sub(1);
    let graphic = GraphicMatroid { g };
    let mats: Vec<&dyn Matroid> = (0..m).map(|_| &graphic as &dyn Matroid).collect();
    let mut union = MatroidUnion::new(mats, g.edge_count());
    let no_lock = |_: usize, _: usize| false;
    if let Some(inc) = include {
        for e in inc.iter() {
            if !union.try_insert(e, &no_lock) {
                return None;
            }
        }
    }
    for e in 0..g.edge_count() {
        if include.map_or(false, |inc| inc.contains(e)) {
            continue;
        }
        union.try_insert(e, &no_lock);
    }
    let total: usize = (0..m).map(|i| union.part(i).len()).sum();
    if total < target {
        return None;
    }
    let trees = (0..m)
        .map(|i| EdgeSubset::from_ids(g.edge_count(), union.part(i)).expect("ids in range"))
        .collect();
    let packing = TreePacking { trees };
    debug_assert!(packing.verify(g));
    Some(packing)
}

/// Largest m with a packing of m spanning trees. Returns
/// [`INFINITE_CONNECTIVITY`] for the one-vertex graph.
pub fn max_packing(g: &Multigraph) -> usize {
    if g.n() <= 1 {
        return INFINITE_CONNECTIVITY;
    }
    if !g.is_connected() {
        return 0;
    }
    let mut lo = 1; // connected, so at least one tree
    let mut hi = g.edge_count() / (g.n() - 1);
    while lo < hi {
        let mid = (lo + hi + 1) / 2;
        if tree_packing(g, mid).is_some() {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

// ---------------------------------------------------------------------------
// Partition connectivity
// ---------------------------------------------------------------------------

/// Certificate that a graph is not (m, l)-partition-connected: a partition
/// whose crossing count falls short of the demanded value.
#[derive(Clone, Debug)]
pub struct PartitionWitness {
    pub blocks: Vec<Vec<usize>>,
    pub observed: i64,
    pub required: i64,
}

#[derive(Clone, Debug)]
pub enum PartitionCheck {
    Ok,
    Violated(PartitionWitness),
}

impl PartitionCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, PartitionCheck::Ok)
    }
}

/// Visit every partition of `0..n` in restricted-growth-string order.
/// The callback gets the block assignment and the block count; returning
/// false stops the walk.
pub(crate) fn for_each_partition<F: FnMut(&[usize], usize) -> bool>(n: usize, mut f: F) {
    fn rec<F: FnMut(&[usize], usize) -> bool>(
        i: usize,
        n: usize,
        max_used: usize,
        assign: &mut Vec<usize>,
        f: &mut F,
    ) -> bool {
        if i == n {
            return f(assign, max_used + 1);
        }
        for b in 0..=max_used + 1 {
            assign[i] = b;
            if !rec(i + 1, n, max_used.max(b), assign, f) {
                return false;
            }
        }
        true
    }
    if n == 0 {
        return;
    }
    let mut assign = vec![0; n];
    rec(1, n, 0, &mut assign, &mut f);
}

/// `e_G(P)`: edges joining different blocks, plus loops at singleton blocks.
pub(crate) fn partition_count(g: &Multigraph, assign: &[usize], block_sizes: &[usize]) -> i64 {
    let mut count = 0i64;
    for (_, (u, v)) in g.edges() {
        if u == v {
            if block_sizes[assign[u]] == 1 {
                count += 1;
            }
        } else if assign[u] != assign[v] {
            count += 1;
        }
    }
    count
}

/// Exhaustive test of the inequality `e_G(P) >= m(|P|-1) + sum of l over
/// singleton blocks` for every partition P of V. Returns the first violating
/// partition (restricted-growth order) as a witness.
pub fn partition_connectivity_check(
    g: &Multigraph,
    m: usize,
    l: &VertexIntMap,
    cap: usize,
) -> Result<PartitionCheck> {
    let n = g.n();
    if l.len() != n {
        return Err(Error::InvalidInput("demand map has wrong length".into()));
    }
    if l.iter().any(|&x| x < 0) {
        return Err(Error::InvalidInput("demand map must be nonnegative".into()));
    }
    if n > cap {
        return Err(Error::Capacity(format!(
            "partition enumeration needs n <= {cap}, got {n}"
        )));
    }
    let mut result = PartitionCheck::Ok;
    for_each_partition(n, |assign, blocks| {
        let mut sizes = vec![0usize; blocks];
        for &b in assign.iter() {
            sizes[b] += 1;
        }
        let observed = partition_count(g, assign, &sizes);
        let mut required = m as i64 * (blocks as i64 - 1);
        for (v, &b) in assign.iter().enumerate() {
            if sizes[b] == 1 {
                required += l[v];
            }
        }
        if observed < required {
            let mut block_lists = vec![Vec::new(); blocks];
            for (v, &b) in assign.iter().enumerate() {
                block_lists[b].push(v);
            }
            result = PartitionCheck::Violated(PartitionWitness {
                blocks: block_lists,
                observed,
                required,
            });
            return false;
        }
        true
    });
    Ok(result)
}

// ---------------------------------------------------------------------------
// Decomposition into trees + demand-orientable rest
// ---------------------------------------------------------------------------

/// Outcome of [`decompose_partition_connected`]: `m` spanning trees (their
/// union containing the forced factor) plus the complement, oriented so every
/// vertex has out-degree at least its demand within the complement.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub packing: TreePacking,
    pub tree_factor: EdgeSubset,
    pub rest: EdgeSubset,
    /// Total orientation of the host graph; only `rest` edges carry meaning.
    pub rest_orientation: Orientation,
}

/// Split an (m, l)-partition-connected graph into an m-tree-connected factor
/// containing `include` and a complement orientable with out-degree >= l.
///
/// Feasibility is decided exactly by matroid union (m graphic parts plus one
/// demand-transversal part), so a failure here means the hypothesis is
/// genuinely false, independent of any enumeration cap. Negative demands are
/// treated as zero.
pub fn decompose_partition_connected(
    g: &Multigraph,
    m: usize,
    l: &VertexIntMap,
    include: &EdgeSubset,
) -> Result<Decomposition> {
    let n = g.n();
    if l.len() != n {
        return Err(Error::InvalidInput("demand map has wrong length".into()));
    }
    if include.iter().any(|e| g.is_loop(e)) {
        return Err(Error::PreconditionUnmet("forced factor contains a loop".into()));
    }
    if g.subset_max_degree(include) > m {
        return Err(Error::PreconditionUnmet(format!(
            "forced factor has maximum degree {} > m = {m}",
            g.subset_max_degree(include)
        )));
    }
    let slots: Vec<usize> = l.iter().map(|&x| x.max(0) as usize).collect();
    let demand_total: usize = slots.iter().sum();
    let tree_target = m * n.saturating_sub(1);

    let graphic = GraphicMatroid { g };
    let demand = DemandMatroid { g, slots: slots.clone() };
    let mut mats: Vec<&dyn Matroid> = (0..m).map(|_| &graphic as &dyn Matroid).collect();
    mats.push(&demand);
    let demand_part = m;
    let mut union = MatroidUnion::new(mats, g.edge_count());

    let forced: Vec<bool> = (0..g.edge_count()).map(|e| include.contains(e)).collect();
    let locked = move |x: usize, i: usize| i == demand_part && forced[x];
    for e in include.iter() {
        if !union.try_insert(e, &locked) {
            return Err(Error::PreconditionUnmet(
                "forced factor does not extend to a tree packing".into(),
            ));
        }
    }
    for e in 0..g.edge_count() {
        if include.contains(e) {
            continue;
        }
        union.try_insert(e, &locked);
    }

    let tree_total: usize = (0..m).map(|i| union.part(i).len()).sum();
    if tree_total < tree_target || union.part(demand_part).len() < demand_total {
        return Err(Error::PreconditionUnmet(format!(
            "graph is not ({m}, l)-partition-connected: packed {tree_total}/{tree_target} tree edges \
             and {}/{demand_total} demand edges",
            union.part(demand_part).len()
        )));
    }

    let trees: Vec<EdgeSubset> = (0..m)
        .map(|i| EdgeSubset::from_ids(g.edge_count(), union.part(i)).expect("ids in range"))
        .collect();
    let packing = TreePacking { trees };
    debug_assert!(packing.verify(g));
    let tree_factor = packing.union(g.edge_count());
    debug_assert!(include.is_subset_of(&tree_factor));
    let rest = tree_factor.complement();

    // Orient rest: matched edges point out of the vertex they serve.
    let matching = DemandMatroid { g, slots }
        .full_matching(union.part(demand_part))
        .expect("final demand set is matchable");
    let mut orientation = Orientation::all_forward(g.edge_count());
    for (e, v) in matching {
        let (u, _) = g.ends(e);
        orientation.set(e, u == v); // forward means tail = u
    }
    Ok(Decomposition {
        packing,
        tree_factor,
        rest,
        rest_orientation: orientation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::const_map;

    fn complete(n: usize) -> Multigraph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Multigraph::new(n, edges).unwrap()
    }

    fn cycle(n: usize) -> Multigraph {
        Multigraph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).unwrap()
    }

    fn dipole(w: usize) -> Multigraph {
        Multigraph::new(2, vec![(0, 1); w]).unwrap()
    }

    fn path(n: usize) -> Multigraph {
        Multigraph::new(n, (0..n - 1).map(|i| (i, i + 1)).collect()).unwrap()
    }

    /// Brute-force min cut by subset enumeration, for cross-checking.
    fn min_cut_brute(g: &Multigraph) -> usize {
        let n = g.n();
        let mut best = usize::MAX;
        for mask in 1..(1u32 << n) - 1 {
            let a: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            let (boundary, _) = g.cut_counts(&a).unwrap();
            best = best.min(boundary);
        }
        best
    }

    #[test]
    fn edge_connectivity_k5() {
        assert_eq!(edge_connectivity(&complete(5)), 4);
        assert_eq!(min_cut_brute(&complete(5)), 4);
    }

    #[test]
    fn edge_connectivity_c4_and_dipole() {
        assert_eq!(edge_connectivity(&cycle(4)), 2);
        assert_eq!(edge_connectivity(&dipole(3)), 3);
    }

    #[test]
    fn edge_connectivity_degenerate() {
        let single = Multigraph::new(1, vec![]).unwrap();
        assert_eq!(edge_connectivity(&single), INFINITE_CONNECTIVITY);
        let disconnected = Multigraph::new(3, vec![(0, 1)]).unwrap();
        assert_eq!(edge_connectivity(&disconnected), 0);
    }

    #[test]
    fn edge_connectivity_matches_brute_force() {
        let graphs = [
            complete(4),
            complete(6),
            cycle(5),
            dipole(4),
            Multigraph::new(4, vec![(0, 1), (0, 1), (1, 2), (2, 3), (3, 0), (1, 3)]).unwrap(),
        ];
        for g in &graphs {
            assert_eq!(edge_connectivity(g), min_cut_brute(g));
        }
    }

    #[test]
    fn tree_packing_k4() {
        let p = tree_packing(&complete(4), 2).unwrap();
        assert_eq!(p.trees.len(), 2);
        assert!(p.verify(&complete(4)));
        assert!(tree_packing(&complete(4), 3).is_none(), "6 edges < 3*3");
    }

    #[test]
    fn tree_packing_single_tree_is_itself() {
        let g = path(4);
        let p = tree_packing(&g, 1).unwrap();
        assert_eq!(p.trees[0].len(), 3);
    }

    /// Tutte/Nash-Williams value by exhaustive partition enumeration,
    /// crossing edges only.
    fn packing_formula(g: &Multigraph) -> usize {
        let n = g.n();
        let mut best = usize::MAX;
        for_each_partition(n, |assign, blocks| {
            if blocks >= 2 {
                let mut crossing = 0usize;
                for (_, (u, v)) in g.edges() {
                    if u != v && assign[u] != assign[v] {
                        crossing += 1;
                    }
                }
                best = best.min(crossing / (blocks - 1));
            }
            true
        });
        best
    }

    #[test]
    fn max_packing_examples() {
        assert_eq!(max_packing(&complete(6)), 3);
        assert_eq!(packing_formula(&complete(6)), 3);
        assert_eq!(max_packing(&dipole(4)), 4);
        assert_eq!(max_packing(&path(3)), 1);
    }

    #[test]
    fn max_packing_matches_formula() {
        let graphs = [
            complete(4),
            complete(5),
            cycle(6),
            dipole(5),
            Multigraph::new(3, vec![(0, 1), (0, 1), (1, 2), (1, 2), (0, 2)]).unwrap(),
        ];
        for g in &graphs {
            assert_eq!(max_packing(g), packing_formula(g));
        }
    }

    #[test]
    fn nash_williams_direction() {
        // 2m-edge-connected implies an m-packing exists.
        for g in [complete(5), dipole(4), complete(6)] {
            let lambda = edge_connectivity(&g);
            let m = lambda / 2;
            if m >= 1 {
                assert!(tree_packing(&g, m).is_some());
            }
        }
    }

    #[test]
    fn partition_check_dipole() {
        let g = dipole(3);
        let check = partition_connectivity_check(&g, 1, &const_map(2, 1), 12).unwrap();
        assert!(check.is_ok());
    }

    #[test]
    fn partition_check_tree_fails_for_two() {
        let g = path(4);
        match partition_connectivity_check(&g, 2, &const_map(4, 0), 12).unwrap() {
            PartitionCheck::Violated(w) => {
                assert!(w.observed < w.required);
                // re-evaluate the witness from scratch
                let mut assign = vec![0usize; g.n()];
                for (b, block) in w.blocks.iter().enumerate() {
                    for &v in block {
                        assign[v] = b;
                    }
                }
                let mut sizes = vec![0usize; w.blocks.len()];
                for &b in &assign {
                    sizes[b] += 1;
                }
                assert_eq!(partition_count(&g, &assign, &sizes), w.observed);
            }
            PartitionCheck::Ok => panic!("a single tree is not 2-tree-connected"),
        }
    }

    #[test]
    fn partition_check_connected_base_case() {
        let g = cycle(5);
        assert!(partition_connectivity_check(&g, 1, &const_map(5, 0), 12)
            .unwrap()
            .is_ok());
    }

    #[test]
    fn partition_check_caps_and_validation() {
        let g = complete(3);
        assert!(matches!(
            partition_connectivity_check(&g, 1, &const_map(3, 0), 2),
            Err(Error::Capacity(_))
        ));
        assert!(matches!(
            partition_connectivity_check(&g, 1, &vec![-1, 0, 0], 12),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn decompose_dipole_with_demands() {
        let g = dipole(4);
        let d = decompose_partition_connected(&g, 1, &const_map(2, 1), &EdgeSubset::empty(4))
            .unwrap();
        assert_eq!(d.tree_factor.len(), 1);
        assert_eq!(d.rest.len(), 3);
        for v in 0..2 {
            assert!(d.rest_orientation.out_degree_in(&g, &d.rest, v) >= 1);
        }
    }

    #[test]
    fn decompose_includes_forced_edge() {
        let g = dipole(3);
        let include = EdgeSubset::from_ids(3, &[1]).unwrap();
        let d = decompose_partition_connected(&g, 1, &const_map(2, 1), &include).unwrap();
        assert!(d.tree_factor.contains(1));
        assert!(d.packing.verify(&g));
        for v in 0..2 {
            assert!(d.rest_orientation.out_degree_in(&g, &d.rest, v) >= 1);
        }
    }

    #[test]
    fn decompose_spanning_tree_trivial_demand() {
        let g = cycle(4);
        let d = decompose_partition_connected(&g, 1, &const_map(4, 0), &EdgeSubset::empty(4))
            .unwrap();
        assert!(g.spanning_connected(&d.tree_factor));
    }

    #[test]
    fn decompose_agrees_with_partition_check() {
        // The matroid-union feasibility and the partition-enumeration lemma
        // must answer identically.
        let graphs = [complete(4), cycle(4), dipole(3), dipole(5), path(4)];
        for g in &graphs {
            for m in 0..3usize {
                for lc in 0..3i64 {
                    let l = const_map(g.n(), lc);
                    let check = partition_connectivity_check(g, m, &l, 12).unwrap();
                    let dec =
                        decompose_partition_connected(g, m, &l, &EdgeSubset::empty(g.edge_count()));
                    assert_eq!(
                        check.is_ok(),
                        dec.is_ok(),
                        "disagreement on n={} m={m} l={lc}",
                        g.n()
                    );
                }
            }
        }
    }
}
