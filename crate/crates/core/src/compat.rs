//! Residue compatibility, bipartite index, and the decompositions that route
//! general graphs through bipartite machinery.

use serde::{Deserialize, Serialize};

use crate::connect::{tree_packing, TreePacking};
use crate::error::{Error, Result};
use crate::graph::{Bipartition, EdgeSubset, Multigraph, ResidueTarget};

/// Which side's inside-edge slack reconciles the partite sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Slack {
    X(usize),
    Y(usize),
}

/// Outcome of a compatibility check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompatibilityVerdict {
    pub compatible: bool,
    /// The bipartition refuting compatibility, when incompatible.
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
    /// A slack value witnessing compatibility for the checked bipartition.
    pub slack: Option<Slack>,
    /// Name of the shortcut that settled the full check, if one applied.
    pub shortcut: Option<&'static str>,
}

impl CompatibilityVerdict {
    fn yes(slack: Option<Slack>) -> Self {
        CompatibilityVerdict {
            compatible: true,
            witness: None,
            slack,
            shortcut: None,
        }
    }

    fn no(p: &Bipartition) -> Self {
        CompatibilityVerdict {
            compatible: false,
            witness: Some((p.x(), p.y())),
            slack: None,
            shortcut: None,
        }
    }
}

/// Is the residue target compatible with G with respect to one bipartition:
/// `sum_X f - 2x = sum_Y f (mod k)` for some `0 <= x <= e_G(X)`, or the
/// symmetric condition with y on the Y side.
pub fn compatible_wrt(g: &Multigraph, r: &ResidueTarget, p: &Bipartition) -> CompatibilityVerdict {
    let k = r.k() as i64;
    let mut sum_x = 0i64;
    let mut sum_y = 0i64;
    for v in 0..g.n() {
        if p.in_x(v) {
            sum_x += r.residue(v) as i64;
        } else {
            sum_y += r.residue(v) as i64;
        }
    }
    let (_, inside_x) = g.cut_counts(&p.x()).expect("bipartition in range");
    let (_, inside_y) = g.cut_counts(&p.y()).expect("bipartition in range");
    for x in 0..=inside_x.min(r.k().saturating_sub(1)) {
        if (sum_x - 2 * x as i64 - sum_y).rem_euclid(k) == 0 {
            return CompatibilityVerdict::yes(Some(Slack::X(x)));
        }
    }
    for y in 0..=inside_y.min(r.k().saturating_sub(1)) {
        if (sum_x - (sum_y - 2 * y as i64)).rem_euclid(k) == 0 {
            return CompatibilityVerdict::yes(Some(Slack::Y(y)));
        }
    }
    CompatibilityVerdict::no(p)
}

/// Full compatibility: against every bipartition of V (empty sides included).
///
/// Shortcuts, recorded in the verdict when applicable: a bipartite
/// (2k-1)-edge-connected graph only needs its proper bipartition checked; a
/// graph with a max-cut bipartition leaving fewer than k-1 inside edges and
/// edge connectivity at least 2k-3 propagates from that single check.
pub fn compatible(g: &Multigraph, r: &ResidueTarget, caps: &crate::error::Caps) -> Result<CompatibilityVerdict> {
    if r.k() == 1 {
        return Ok(CompatibilityVerdict::yes(None));
    }
    if let Some(p) = g.proper_bipartition() {
        if crate::connect::edge_connectivity_at_least(g, 2 * r.k() - 1) {
            let mut verdict = compatible_wrt(g, r, &p);
            verdict.shortcut = Some("bipartite-unique");
            return Ok(verdict);
        }
    }
    let n = g.n();
    if n > caps.bipartition_vertices {
        return Err(Error::Capacity(format!(
            "bipartition enumeration needs n <= {}, got {n}",
            caps.bipartition_vertices
        )));
    }
    // Low-bipartite-index propagation from a maximum cut.
    let (max_p, max_cut) = max_cut_bipartition_unchecked(g);
    let bi = g.edge_count() - max_cut;
    if bi + 1 < r.k() && crate::connect::edge_connectivity_at_least(g, 2 * r.k() - 3) {
        let mut verdict = compatible_wrt(g, r, &max_p);
        verdict.shortcut = Some("low-bi-index");
        return Ok(verdict);
    }
    // Full enumeration; vertex 0 pinned to X covers all unordered splits.
    for mask in 0..(1u64 << n.saturating_sub(1)) {
        let mut in_x = vec![false; n];
        if n > 0 {
            in_x[0] = true;
            for v in 1..n {
                in_x[v] = mask >> (v - 1) & 1 == 1;
            }
        }
        let p = Bipartition::from_mask(in_x);
        let verdict = compatible_wrt(g, r, &p);
        if !verdict.compatible {
            return Ok(verdict);
        }
        // the all-X split also stands in for the empty-X split by symmetry
    }
    Ok(CompatibilityVerdict::yes(None))
}

fn max_cut_bipartition_unchecked(g: &Multigraph) -> (Bipartition, usize) {
    let n = g.n();
    let mut best_mask = 0u64;
    let mut best_cut = 0usize;
    for mask in 0..(1u64 << n.saturating_sub(1)) {
        let mut in_x = vec![false; n];
        if n > 0 {
            in_x[0] = true;
            for v in 1..n {
                in_x[v] = mask >> (v - 1) & 1 == 1;
            }
        }
        let mut cut = 0;
        for (_, (u, v)) in g.edges() {
            if in_x[u] != in_x[v] {
                cut += 1;
            }
        }
        if cut > best_cut {
            best_cut = cut;
            best_mask = mask;
        }
    }
    let mut in_x = vec![false; n];
    if n > 0 {
        in_x[0] = true;
        for v in 1..n {
            in_x[v] = best_mask >> (v - 1) & 1 == 1;
        }
    }
    (Bipartition::from_mask(in_x), best_cut)
}

/// A maximum cut and its bipartition (exhaustive).
pub fn max_cut_bipartition(g: &Multigraph, caps: &crate::error::Caps) -> Result<(Bipartition, usize)> {
    if g.n() > caps.bipartition_vertices {
        return Err(Error::Capacity(format!(
            "bipartition enumeration needs n <= {}, got {}",
            caps.bipartition_vertices,
            g.n()
        )));
    }
    Ok(max_cut_bipartition_unchecked(g))
}

/// bi(G): the fewest edges whose removal leaves a bipartite factor, i.e.
/// |E| minus the maximum cut.
pub fn bipartite_index(g: &Multigraph, caps: &crate::error::Caps) -> Result<usize> {
    let (_, cut) = max_cut_bipartition(g, caps)?;
    Ok(g.edge_count() - cut)
}

/// An m-tree-connected bipartite factor of a 2m-tree-connected graph:
/// bipartitions are tried by decreasing cut size (ties toward smaller X
/// mask), and the first whose crossing factor packs m trees wins.
pub fn tree_connected_bipartite_factor(
    g: &Multigraph,
    m: usize,
    caps: &crate::error::Caps,
) -> Result<(Bipartition, EdgeSubset, TreePacking)> {
    let n = g.n();
    if n > caps.bipartition_vertices {
        return Err(Error::Capacity(format!(
            "bipartition enumeration needs n <= {}, got {n}",
            caps.bipartition_vertices
        )));
    }
    let mut splits: Vec<(usize, u64)> = Vec::new();
    for mask in 0..(1u64 << n.saturating_sub(1)) {
        let mut cut = 0;
        for (_, (u, v)) in g.edges() {
            let xu = u == 0 || mask >> (u - 1) & 1 == 1;
            let xv = v == 0 || mask >> (v - 1) & 1 == 1;
            if xu != xv {
                cut += 1;
            }
        }
        splits.push((cut, mask));
    }
    splits.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for &(_, mask) in &splits {
        let mut in_x = vec![false; n];
        if n > 0 {
            in_x[0] = true;
            for v in 1..n {
                in_x[v] = mask >> (v - 1) & 1 == 1;
            }
        }
        let p = Bipartition::from_mask(in_x);
        let cross = g.bipartite_factor(&p)?;
        let (sub, ids) = g.edge_subgraph(&cross);
        if let Some(packing) = tree_packing(&sub, m) {
            let trees = packing
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
            return Ok((p, cross, TreePacking { trees }));
        }
    }
    Err(Error::ContractViolation(format!(
        "no bipartition yields an {m}-tree-connected crossing factor"
    )))
}

/// A subset of `within` (spanning connected) whose odd-degree vertex set is
/// exactly `odd`. Pairs the odd vertices through tree paths.
pub fn parity_join(g: &Multigraph, within: &EdgeSubset, odd: &[bool]) -> Result<EdgeSubset> {
    if odd.len() != g.n() {
        return Err(Error::InvalidInput("parity target has wrong length".into()));
    }
    if !g.spanning_connected(within) {
        return Err(Error::PreconditionUnmet(
            "parity join needs a spanning connected carrier".into(),
        ));
    }
    if odd.iter().filter(|&&b| b).count() % 2 != 0 {
        return Err(Error::InvalidInput("odd-degree set must have even size".into()));
    }
    // spanning tree of the carrier
    let mut dsu = crate::graph::Dsu::new(g.n());
    let mut tree_edges: Vec<usize> = Vec::new();
    for e in within.iter() {
        let (u, v) = g.ends(e);
        if u != v && dsu.union(u, v) {
            tree_edges.push(e);
        }
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for &e in &tree_edges {
        let (u, v) = g.ends(e);
        adj[u].push(e);
        adj[v].push(e);
    }
    // root at 0; include the edge above v iff the subtree of v has odd need
    let mut join = EdgeSubset::empty(g.edge_count());
    let mut order = Vec::with_capacity(g.n());
    let mut parent_edge: Vec<Option<usize>> = vec![None; g.n()];
    let mut seen = vec![false; g.n()];
    if g.n() > 0 {
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(v) = stack.pop() {
            order.push(v);
            for &e in &adj[v] {
                let w = g.other_end(e, v);
                if !seen[w] {
                    seen[w] = true;
                    parent_edge[w] = Some(e);
                    stack.push(w);
                }
            }
        }
    }
    let mut need: Vec<bool> = odd.to_vec();
    for &v in order.iter().rev() {
        if need[v] {
            if let Some(e) = parent_edge[v] {
                join.insert(e);
                let p = g.other_end(e, v);
                need[p] = !need[p];
                need[v] = false;
            }
        }
    }
    if need.iter().any(|&b| b) {
        return Err(Error::InvalidInput("parity target unreachable".into()));
    }
    Ok(join)
}

/// A spanning Eulerian subgraph of a 2-tree-connected graph: one spanning
/// tree plus a parity fix drawn from a second, edge-disjoint tree.
pub fn spanning_eulerian_two_tc(g: &Multigraph) -> Result<EdgeSubset> {
    let packing = tree_packing(g, 2).ok_or_else(|| {
        Error::PreconditionUnmet("graph is not 2-tree-connected".into())
    })?;
    let base = &packing.trees[0];
    let odd: Vec<bool> = {
        let deg = g.subset_degrees(base);
        deg.iter().map(|&d| d % 2 == 1).collect()
    };
    let fix = parity_join(g, &packing.trees[1], &odd)?;
    let h = base.union(&fix);
    debug_assert!(g.spanning_connected(&h));
    debug_assert!(g.subset_degrees(&h).iter().all(|&d| d % 2 == 0));
    Ok(h)
}

/// Result of [`decompose_by_bi_index`].
#[derive(Clone, Debug)]
pub struct BiDecomposition {
    pub g1: EdgeSubset,
    pub g2: EdgeSubset,
    pub bipartition: Bipartition,
    /// Edges of g2 inside X plus inside Y.
    pub inside_count: usize,
    /// Certificate for g1.
    pub packing1: TreePacking,
    /// Certificate for g2[X,Y].
    pub packing2: TreePacking,
    /// Whether the inside count is exactly min(k0, bi(G)) (vs at least).
    pub exact: bool,
    pub variant: &'static str,
}

/// Split G into factors G1 (m1-tree-connected) and G2 (with G2[X,Y]
/// m2-tree-connected for some bipartition) steering the number of G2-inside
/// edges to min(k0, bi(G)). With `parity_side`, additionally make that side's
/// degrees all even; this needs one more tree (two more for exact equality).
pub fn decompose_by_bi_index(
    g: &Multigraph,
    m1: usize,
    m2: usize,
    k0: usize,
    parity_side: Option<u8>,
    caps: &crate::error::Caps,
) -> Result<BiDecomposition> {
    if k0 > m2 {
        return Err(Error::InvalidInput(format!("k0 = {k0} must be <= m2 = {m2}")));
    }
    match parity_side {
        None => decompose_base(g, m1, m2, k0, caps),
        Some(side) if side == 1 || side == 2 => {
            if tree_packing(g, m1 + 2 * m2 + 2).is_some() {
                decompose_parity_exact(g, m1, m2, k0, side, caps)
            } else if tree_packing(g, m1 + 2 * m2 + 1).is_some() {
                decompose_parity_loose(g, m1, m2, k0, side, caps)
            } else {
                Err(Error::PreconditionUnmet(format!(
                    "graph is not {}-tree-connected",
                    m1 + 2 * m2 + 1
                )))
            }
        }
        Some(side) => Err(Error::InvalidInput(format!("parity side {side} not in {{1,2}}"))),
    }
}

fn map_back(host_edges: usize, ids: &[usize], s: &EdgeSubset) -> EdgeSubset {
    let mut out = EdgeSubset::empty(host_edges);
    for e in s.iter() {
        out.insert(ids[e]);
    }
    out
}

fn map_packing_back(host_edges: usize, ids: &[usize], p: &TreePacking) -> TreePacking {
    TreePacking {
        trees: p.trees.iter().map(|t| map_back(host_edges, ids, t)).collect(),
    }
}

fn decompose_base(
    g: &Multigraph,
    m1: usize,
    m2: usize,
    k0: usize,
    caps: &crate::error::Caps,
) -> Result<BiDecomposition> {
    let packing = tree_packing(g, m1 + 2 * m2).ok_or_else(|| {
        Error::PreconditionUnmet(format!("graph is not {}-tree-connected", m1 + 2 * m2))
    })?;
    let me = g.edge_count();
    let mut h2 = EdgeSubset::empty(me);
    for t in &packing.trees[m1..] {
        h2 = h2.union(t);
    }
    let mut h1 = h2.complement(); // m1 trees plus every leftover edge

    // m2-tree-connected crossing factor of H2
    let (h2g, h2ids) = g.edge_subgraph(&h2);
    let (p, _cross_local, packing2_local) = tree_connected_bipartite_factor(&h2g, m2, caps)?;
    let mut packing2 = map_packing_back(me, &h2ids, &packing2_local);

    let bi = bipartite_index(g, caps)?;
    let b = k0.min(bi);
    let inside = |s: &EdgeSubset| -> Vec<usize> {
        s.iter()
            .filter(|&e| {
                let (u, v) = g.ends(e);
                p.in_x(u) == p.in_x(v)
            })
            .collect()
    };
    let t_inside = inside(&h2);
    let mut g2 = h2.clone();
    if t_inside.len() > b {
        for &e in t_inside.iter().take(t_inside.len() - b) {
            g2.remove(e);
            h1.insert(e);
        }
    } else if t_inside.len() < b {
        let deficit = b - t_inside.len();
        // borrow inside edges from H1, repaying with crossing trees from H2[X,Y]
        let h1_inside = inside(&h1);
        if h1_inside.len() < deficit {
            return Err(Error::ContractViolation(
                "not enough inside edges to reach the target".into(),
            ));
        }
        let cross_subset = g.bipartite_factor(&p)?.intersection(&g2);
        let (crossg, crossids) = g.edge_subgraph(&cross_subset);
        let repack = tree_packing(&crossg, m2 + deficit).ok_or_else(|| {
            Error::ContractViolation("crossing factor cannot spare repair trees".into())
        })?;
        let repack = map_packing_back(me, &crossids, &repack);
        let f1: EdgeSubset = repack.trees[..deficit]
            .iter()
            .fold(EdgeSubset::empty(me), |acc, t| acc.union(t));
        packing2 = TreePacking {
            trees: repack.trees[deficit..].to_vec(),
        };
        for &e in h1_inside.iter().take(deficit) {
            h1.remove(e);
            g2.insert(e);
        }
        for e in f1.iter() {
            g2.remove(e);
            h1.insert(e);
        }
    }
    let g1 = g2.complement();
    let (g1g, _) = g.edge_subgraph(&g1);
    let packing1 = tree_packing(&g1g, m1)
        .map(|pk| {
            let ids: Vec<usize> = g1.iter().collect();
            map_packing_back(me, &ids, &pk)
        })
        .ok_or_else(|| Error::ContractViolation("G1 lost its tree-connectivity".into()))?;
    let inside_count = inside(&g2).len();
    debug_assert_eq!(inside_count, b);
    Ok(BiDecomposition {
        g1,
        g2,
        bipartition: p,
        inside_count,
        packing1,
        packing2,
        exact: true,
        variant: "base",
    })
}

fn decompose_parity_exact(
    g: &Multigraph,
    m1: usize,
    m2: usize,
    k0: usize,
    side: u8,
    caps: &crate::error::Caps,
) -> Result<BiDecomposition> {
    let base = decompose_base(g, m1, m2 + 1, k0, caps)?;
    let me = g.edge_count();
    // carve a connected spare out of the crossing packing
    let spare = base.packing2.trees[0].clone();
    let keep_packing = TreePacking {
        trees: base.packing2.trees[1..].to_vec(),
    };
    let odd_target: Vec<bool> = match side {
        1 => g.subset_degrees(&base.g1).iter().map(|&d| d % 2 == 1).collect(),
        _ => g.subset_degrees(&base.g2).iter().map(|&d| d % 2 == 1).collect(),
    };
    let join = parity_join(g, &spare, &odd_target)?;
    let g1 = base.g1.union(&join);
    let g2 = base.g2.difference(&join);
    let even_side = if side == 1 { &g1 } else { &g2 };
    debug_assert!(g.subset_degrees(even_side).iter().all(|&d| d % 2 == 0));
    let inside_count = g2
        .iter()
        .filter(|&e| {
            let (u, v) = g.ends(e);
            base.bipartition.in_x(u) == base.bipartition.in_x(v)
        })
        .count();
    let (g1g, _) = g.edge_subgraph(&g1);
    let packing1 = tree_packing(&g1g, m1)
        .map(|pk| {
            let ids: Vec<usize> = g1.iter().collect();
            map_packing_back(me, &ids, &pk)
        })
        .ok_or_else(|| Error::ContractViolation("G1 lost its tree-connectivity".into()))?;
    Ok(BiDecomposition {
        g1,
        g2,
        bipartition: base.bipartition,
        inside_count,
        packing1,
        packing2: keep_packing,
        exact: true,
        variant: "parity-exact",
    })
}

fn decompose_parity_loose(
    g: &Multigraph,
    m1: usize,
    m2: usize,
    k0: usize,
    side: u8,
    caps: &crate::error::Caps,
) -> Result<BiDecomposition> {
    let base = decompose_base(g, m1 + 1, m2, k0, caps)?;
    let me = g.edge_count();
    // spare connected factor from the G1 side
    let spare = base.packing1.trees[0].clone();
    let g1_rest = base.g1.difference(&spare);
    let odd_target: Vec<bool> = match side {
        1 => g.subset_degrees(&g1_rest).iter().map(|&d| d % 2 == 1).collect(),
        _ => {
            let with_t = base.g2.union(&spare);
            g.subset_degrees(&with_t).iter().map(|&d| d % 2 == 1).collect()
        }
    };
    let join = parity_join(g, &spare, &odd_target)?;
    let (g1, g2) = (g1_rest.union(&join), base.g2.union(&spare.difference(&join)));
    let even_side = if side == 1 { &g1 } else { &g2 };
    debug_assert!(g.subset_degrees(even_side).iter().all(|&d| d % 2 == 0));
    let inside_count = g2
        .iter()
        .filter(|&e| {
            let (u, v) = g.ends(e);
            base.bipartition.in_x(u) == base.bipartition.in_x(v)
        })
        .count();
    let (g1g, _) = g.edge_subgraph(&g1);
    let packing1 = tree_packing(&g1g, m1)
        .map(|pk| {
            let ids: Vec<usize> = g1.iter().collect();
            map_packing_back(me, &ids, &pk)
        })
        .ok_or_else(|| Error::ContractViolation("G1 lost its tree-connectivity".into()))?;
    Ok(BiDecomposition {
        g1,
        g2,
        bipartition: base.bipartition,
        inside_count,
        packing1,
        packing2: base.packing2,
        exact: false,
        variant: "parity-loose",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Caps;

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

    fn multiplied(g: &Multigraph, t: usize) -> Multigraph {
        let mut edges = Vec::new();
        for (_, uv) in g.edges() {
            for _ in 0..t {
                edges.push(uv);
            }
        }
        Multigraph::new(g.n(), edges).unwrap()
    }

    #[test]
    fn compatible_wrt_c4_proper() {
        let g = cycle(4);
        let p = g.proper_bipartition().unwrap();
        let r = ResidueTarget::constant(4, 3, 1).unwrap();
        let v = compatible_wrt(&g, &r, &p);
        assert!(v.compatible);
        assert_eq!(v.slack, Some(Slack::X(0)));
    }

    #[test]
    fn compatible_wrt_c4_skew_split() {
        let g = cycle(4);
        let p = Bipartition::new(4, &[0]).unwrap();
        let r = ResidueTarget::constant(4, 3, 1).unwrap();
        let v = compatible_wrt(&g, &r, &p);
        // 1 = 3 - 2y with y = 1 on the Y side
        assert!(v.compatible);
        assert_eq!(v.slack, Some(Slack::Y(1)));
    }

    #[test]
    fn incompatible_parity_k2() {
        // k = 2 with odd residue sum can never be compatible
        let g = cycle(5);
        let r = ResidueTarget::new(2, &[1, 0, 0, 0, 0]).unwrap();
        let p = Bipartition::new(5, &[]).unwrap();
        assert!(!compatible_wrt(&g, &r, &p).compatible);
        assert!(!compatible(&g, &r, &Caps::default()).unwrap().compatible);
    }

    #[test]
    fn compatible_k2_iff_even_sum() {
        let caps = Caps::default();
        for g in [complete(4), complete(5), cycle(4), dipole(3)] {
            for bits in 0..(1u32 << g.n()) {
                let res: Vec<i64> = (0..g.n()).map(|v| (bits >> v & 1) as i64).collect();
                let r = ResidueTarget::new(2, &res).unwrap();
                let even = r.sum() % 2 == 0;
                assert_eq!(compatible(&g, &r, &caps).unwrap().compatible, even);
            }
        }
    }

    #[test]
    fn compatible_k5_zero() {
        let g = complete(5);
        let r = ResidueTarget::constant(5, 3, 0).unwrap();
        assert!(compatible(&g, &r, &Caps::default()).unwrap().compatible);
    }

    #[test]
    fn bipartite_shortcut_matches_full_check() {
        // bipartite and (2k-1)-edge-connected: the unique-bipartition check
        // decides the full property
        let g = multiplied(&cycle(4), 2); // 4-edge-connected, bipartite
        let caps = Caps::default();
        for seed in 0..16i64 {
            let res: Vec<i64> = (0..4).map(|v| (seed >> v) & 1).collect();
            let r = ResidueTarget::new(2, &res).unwrap();
            let with_shortcut = compatible(&g, &r, &caps).unwrap();
            assert_eq!(with_shortcut.shortcut, Some("bipartite-unique"));
            // independent full enumeration
            let mut full = true;
            for mask in 0..(1u64 << 3) {
                let mut in_x = vec![false; 4];
                in_x[0] = true;
                for v in 1..4 {
                    in_x[v] = mask >> (v - 1) & 1 == 1;
                }
                if !compatible_wrt(&g, &r, &Bipartition::from_mask(in_x)).compatible {
                    full = false;
                }
            }
            assert_eq!(with_shortcut.compatible, full);
        }
    }

    #[test]
    fn low_bi_index_shortcut_matches_full_check() {
        // tripled C4 plus one diagonal: bi = 1, 3-edge-connected, not
        // bipartite, so the max-cut propagation decides k = 3 compatibility
        let mut edges = Vec::new();
        for (u, v) in [(0, 1), (1, 2), (2, 3), (3, 0)] {
            for _ in 0..3 {
                edges.push((u, v));
            }
        }
        edges.push((0, 2));
        let g = Multigraph::new(4, edges).unwrap();
        let caps = Caps::default();
        assert_eq!(bipartite_index(&g, &caps).unwrap(), 1);
        for seed in 0..27i64 {
            let res: Vec<i64> = (0..4).map(|v| (seed / 3i64.pow(v)) % 3).collect();
            let r = ResidueTarget::new(3, &res).unwrap();
            let verdict = compatible(&g, &r, &caps).unwrap();
            assert_eq!(verdict.shortcut, Some("low-bi-index"));
            // independent full enumeration over every bipartition
            let mut full = true;
            for mask in 0..(1u64 << 3) {
                let mut in_x = vec![false; 4];
                in_x[0] = true;
                for v in 1..4 {
                    in_x[v] = mask >> (v - 1) & 1 == 1;
                }
                if !compatible_wrt(&g, &r, &Bipartition::from_mask(in_x)).compatible {
                    full = false;
                }
            }
            assert_eq!(verdict.compatible, full, "residues {res:?}");
        }
    }

    #[test]
    fn bipartite_index_values() {
        let caps = Caps::default();
        assert_eq!(bipartite_index(&cycle(4), &caps).unwrap(), 0);
        assert_eq!(bipartite_index(&cycle(5), &caps).unwrap(), 1);
        assert_eq!(bipartite_index(&complete(4), &caps).unwrap(), 2);
    }

    #[test]
    fn bipartite_index_zero_iff_bipartite() {
        let caps = Caps::default();
        for g in [cycle(4), cycle(5), complete(4), complete(5), dipole(3)] {
            let bi = bipartite_index(&g, &caps).unwrap();
            assert_eq!(bi == 0, g.proper_bipartition().is_some());
        }
    }

    #[test]
    fn parity_join_fixes_parity() {
        let g = complete(5);
        let tree = crate::connect::tree_packing(&g, 1).unwrap().trees[0].clone();
        let odd = vec![true, true, false, false, false];
        let join = parity_join(&g, &tree, &odd).unwrap();
        let deg = g.subset_degrees(&join);
        for v in 0..5 {
            assert_eq!(deg[v] % 2 == 1, odd[v]);
        }
    }

    #[test]
    fn spanning_eulerian_doubled_k4() {
        let g = multiplied(&complete(4), 2);
        let h = spanning_eulerian_two_tc(&g).unwrap();
        assert!(g.spanning_connected(&h));
        assert!(g.subset_degrees(&h).iter().all(|&d| d % 2 == 0));
    }

    #[test]
    fn decompose_dipole() {
        let caps = Caps::default();
        let g = dipole(3);
        let d = decompose_by_bi_index(&g, 1, 1, 1, None, &caps).unwrap();
        assert_eq!(d.inside_count, 0, "bipartite graph: min(k0, 0) = 0");
        assert!(d.packing1.verify(&g));
    }

    #[test]
    fn decompose_k6_inside_edge() {
        let caps = Caps::default();
        let g = complete(6);
        let d = decompose_by_bi_index(&g, 1, 1, 1, None, &caps).unwrap();
        assert_eq!(d.inside_count, 1, "bi(K6) >= 1 so min(1, bi) = 1");
        // re-verify both certificates against the host
        assert!(d.packing1.verify(&g));
        let cross = g.bipartite_factor(&d.bipartition).unwrap().intersection(&d.g2);
        let (crossg, _) = g.edge_subgraph(&cross);
        assert!(crate::connect::tree_packing(&crossg, 1).is_some());
        // partition of E(G)
        assert!(d.g1.is_disjoint(&d.g2));
        assert_eq!(d.g1.len() + d.g2.len(), g.edge_count());
    }

    #[test]
    fn decompose_parity_side_even() {
        let caps = Caps::default();
        let g = multiplied(&complete(4), 2); // 4-tree-connected
        let d = decompose_by_bi_index(&g, 1, 1, 1, Some(1), &caps).unwrap();
        assert!(g.subset_degrees(&d.g1).iter().all(|&x| x % 2 == 0));
        assert!(d.packing1.verify(&g));
    }

    #[test]
    fn decompose_rejects_low_connectivity() {
        let caps = Caps::default();
        let g = cycle(4);
        assert!(matches!(
            decompose_by_bi_index(&g, 1, 1, 1, None, &caps),
            Err(Error::PreconditionUnmet(_))
        ));
    }
}
