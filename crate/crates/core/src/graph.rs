//! Multigraph representation and the set/map primitives every other module
//! works with: edge subsets (factors), bipartitions, integer vertex maps, and
//! residue targets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Total mapping from vertices to integers (demands, bounds, slacks).
pub type VertexIntMap = Vec<i64>;

/// Constant map on `n` vertices.
pub fn const_map(n: usize, c: i64) -> VertexIntMap {
    vec![c; n]
}

/// Indicator of a single vertex: 1 at `z`, 0 elsewhere.
pub fn chi(n: usize, z: usize) -> VertexIntMap {
    let mut m = vec![0; n];
    m[z] = 1;
    m
}

/// Complement indicator: 0 at `z`, 1 elsewhere.
pub fn chi_bar(n: usize, z: usize) -> VertexIntMap {
    let mut m = vec![1; n];
    m[z] = 0;
    m
}

/// Undirected multigraph. Vertices are `0..n`; edge ids are `0..edge_count()`
/// in construction order. Loops and parallel edges are allowed; a loop adds 2
/// to the degree of its vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    n: usize,
    ends: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    format: String,
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl Multigraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({u},{v}) out of range for n={n}"
                )));
            }
        }
        Ok(Multigraph { n, ends: edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    pub fn ends(&self, e: usize) -> (usize, usize) {
        self.ends[e]
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let (u, v) = self.ends[e];
        u == v
    }

    /// Iterate `(edge id, (u, v))` in id order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, (usize, usize))> + '_ {
        self.ends.iter().copied().enumerate()
    }

    /// Endpoint of `e` opposite to `v` (equals `v` for a loop at `v`).
    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let (u, w) = self.ends[e];
        if u == v {
            w
        } else {
            u
        }
    }

    pub fn degree(&self, v: usize) -> usize {
        let mut d = 0;
        for &(u, w) in &self.ends {
            if u == v {
                d += 1;
            }
            if w == v {
                d += 1;
            }
        }
        d
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(u, w) in &self.ends {
            d[u] += 1;
            d[w] += 1;
        }
        d
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Incident edge ids at `v`, ascending. A loop appears once.
    pub fn incident(&self, v: usize) -> Vec<usize> {
        self.edges()
            .filter(|&(_, (u, w))| u == v || w == v)
            .map(|(e, _)| e)
            .collect()
    }

    fn vertex_mask(&self, a: &[usize]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.n];
        for &v in a {
            if v >= self.n {
                return Err(Error::InvalidInput(format!("vertex {v} out of range")));
            }
            mask[v] = true;
        }
        Ok(mask)
    }

    /// `(d_G(A), e_G(A))`: edges with exactly one end in `A`, and edges with
    /// both ends in `A`. A loop at a vertex of `A` counts once in `e_G(A)` and
    /// never in `d_G(A)`.
    pub fn cut_counts(&self, a: &[usize]) -> Result<(usize, usize)> {
        let mask = self.vertex_mask(a)?;
        let mut boundary = 0;
        let mut inside = 0;
        for &(u, v) in &self.ends {
            match (mask[u], mask[v]) {
                (true, true) => inside += 1,
                (true, false) | (false, true) => boundary += 1,
                (false, false) => {}
            }
        }
        Ok((boundary, inside))
    }

    /// `G[A]` with vertices relabeled densely (sorted order of `A`) and a
    /// retained edge-id correspondence back to this graph.
    pub fn induced(&self, a: &[usize]) -> Result<InducedSubgraph> {
        if a.is_empty() {
            return Err(Error::InvalidInput("induced subgraph of empty set".into()));
        }
        let mask = self.vertex_mask(a)?;
        let vertices: Vec<usize> = (0..self.n).filter(|&v| mask[v]).collect();
        let mut relabel = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            relabel[v] = i;
        }
        let mut edges = Vec::new();
        let mut edge_ids = Vec::new();
        for (e, (u, v)) in self.edges() {
            if mask[u] && mask[v] {
                edges.push((relabel[u], relabel[v]));
                edge_ids.push(e);
            }
        }
        Ok(InducedSubgraph {
            graph: Multigraph {
                n: vertices.len(),
                ends: edges,
            },
            vertices,
            edge_ids,
        })
    }

    /// Edges with one end in X and the other in Y, as a subset of this graph.
    pub fn bipartite_factor(&self, p: &Bipartition) -> Result<EdgeSubset> {
        if p.len() != self.n {
            return Err(Error::InvalidInput(
                "bipartition size does not match graph".into(),
            ));
        }
        let mut s = EdgeSubset::empty(self.edge_count());
        for (e, (u, v)) in self.edges() {
            if p.in_x(u) != p.in_x(v) {
                s.insert(e);
            }
        }
        Ok(s)
    }

    /// Spanning subgraph on the same vertex set, keeping only the edges of
    /// `s`, with edges renumbered densely. Returns the graph and the map from
    /// new edge id to old.
    pub fn edge_subgraph(&self, s: &EdgeSubset) -> (Multigraph, Vec<usize>) {
        debug_assert_eq!(s.host_edges(), self.edge_count());
        let mut ends = Vec::new();
        let mut ids = Vec::new();
        for (e, uv) in self.edges() {
            if s.contains(e) {
                ends.push(uv);
                ids.push(e);
            }
        }
        (
            Multigraph {
                n: self.n,
                ends,
            },
            ids,
        )
    }

    /// Degree of `v` inside the subset (loops count twice).
    pub fn subset_degree(&self, s: &EdgeSubset, v: usize) -> usize {
        let mut d = 0;
        for (e, (u, w)) in self.edges() {
            if s.contains(e) {
                if u == v {
                    d += 1;
                }
                if w == v {
                    d += 1;
                }
            }
        }
        d
    }

    pub fn subset_degrees(&self, s: &EdgeSubset) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for (e, (u, w)) in self.edges() {
            if s.contains(e) {
                d[u] += 1;
                d[w] += 1;
            }
        }
        d
    }

    pub fn subset_max_degree(&self, s: &EdgeSubset) -> usize {
        self.subset_degrees(s).into_iter().max().unwrap_or(0)
    }

    /// True when the subset's edges connect all `n` vertices (n <= 1 counts
    /// as connected).
    pub fn spanning_connected(&self, s: &EdgeSubset) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut dsu = Dsu::new(self.n);
        for (e, (u, v)) in self.edges() {
            if s.contains(e) {
                dsu.union(u, v);
            }
        }
        let root = dsu.find(0);
        (1..self.n).all(|v| dsu.find(v) == root)
    }

    pub fn is_connected(&self) -> bool {
        self.spanning_connected(&EdgeSubset::full(self.edge_count()))
    }

    /// Proper 2-coloring if the graph is bipartite (loops make it not), with
    /// the smallest vertex of each component on the X side.
    pub fn proper_bipartition(&self) -> Option<Bipartition> {
        let mut color: Vec<Option<bool>> = vec![None; self.n.max(1)];
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for (e, (u, v)) in self.edges() {
            if u == v {
                return None;
            }
            adj[u].push(e);
            adj[v].push(e);
        }
        for start in 0..self.n {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(true);
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let cv = color[v].unwrap();
                for &e in &adj[v] {
                    let w = self.other_end(e, v);
                    match color[w] {
                        None => {
                            color[w] = Some(!cv);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cv => return None,
                        _ => {}
                    }
                }
            }
        }
        let x: Vec<usize> = (0..self.n).filter(|&v| color[v] == Some(true)).collect();
        Some(Bipartition::new(self.n, &x).expect("colors in range"))
    }

    /// Odd-degree vertices of the subset.
    pub fn odd_vertices(&self, s: &EdgeSubset) -> Vec<usize> {
        self.subset_degrees(s)
            .into_iter()
            .enumerate()
            .filter(|&(_, d)| d % 2 == 1)
            .map(|(v, _)| v)
            .collect()
    }

    /// Serialize to the `ffg-1` JSON wire format. Round-trips byte-exactly.
    pub fn to_json(&self) -> String {
        let doc = GraphJson {
            format: "ffg-1".into(),
            n: self.n,
            edges: self.ends.iter().map(|&(u, v)| [u, v]).collect(),
        };
        serde_json::to_string(&doc).expect("graph serialization")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: GraphJson =
            serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("graph json: {e}")))?;
        if doc.format != "ffg-1" {
            return Err(Error::InvalidInput(format!(
                "unknown graph format {:?}",
                doc.format
            )));
        }
        Multigraph::new(doc.n, doc.edges.iter().map(|&[u, v]| (u, v)).collect())
    }
}

/// Result of [`Multigraph::induced`]: the relabeled graph plus the vertex and
/// edge correspondences back to the host.
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: Multigraph,
    /// `vertices[i]` is the host vertex that became vertex `i`.
    pub vertices: Vec<usize>,
    /// `edge_ids[e]` is the host edge that became edge `e`.
    pub edge_ids: Vec<usize>,
}

/// A factor (spanning subgraph) as a set of edge ids of a fixed host graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSubset {
    member: Vec<bool>,
}

impl EdgeSubset {
    pub fn empty(host_edges: usize) -> Self {
        EdgeSubset {
            member: vec![false; host_edges],
        }
    }

    pub fn full(host_edges: usize) -> Self {
        EdgeSubset {
            member: vec![true; host_edges],
        }
    }

    pub fn from_ids(host_edges: usize, ids: &[usize]) -> Result<Self> {
        let mut s = EdgeSubset::empty(host_edges);
        for &e in ids {
            if e >= host_edges {
                return Err(Error::InvalidInput(format!("edge id {e} out of range")));
            }
            s.member[e] = true;
        }
        Ok(s)
    }

    /// Subset from a bitmask over edge ids (id 0 = lowest bit).
    pub fn from_mask(host_edges: usize, mask: u64) -> Self {
        let mut s = EdgeSubset::empty(host_edges);
        for e in 0..host_edges.min(64) {
            if mask >> e & 1 == 1 {
                s.member[e] = true;
            }
        }
        s
    }

    pub fn host_edges(&self) -> usize {
        self.member.len()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.member[e]
    }

    pub fn insert(&mut self, e: usize) {
        self.member[e] = true;
    }

    pub fn remove(&mut self, e: usize) {
        self.member[e] = false;
    }

    pub fn len(&self) -> usize {
        self.member.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.member.iter().any(|&b| b)
    }

    /// Member ids, ascending.
    pub fn ids(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.member
            .iter()
            .enumerate()
            .filter(|&(_, &b)| b)
            .map(|(e, _)| e)
    }

    pub fn union(&self, other: &EdgeSubset) -> EdgeSubset {
        debug_assert_eq!(self.member.len(), other.member.len());
        EdgeSubset {
            member: self
                .member
                .iter()
                .zip(&other.member)
                .map(|(&a, &b)| a || b)
                .collect(),
        }
    }

    pub fn difference(&self, other: &EdgeSubset) -> EdgeSubset {
        debug_assert_eq!(self.member.len(), other.member.len());
        EdgeSubset {
            member: self
                .member
                .iter()
                .zip(&other.member)
                .map(|(&a, &b)| a && !b)
                .collect(),
        }
    }

    pub fn intersection(&self, other: &EdgeSubset) -> EdgeSubset {
        debug_assert_eq!(self.member.len(), other.member.len());
        EdgeSubset {
            member: self
                .member
                .iter()
                .zip(&other.member)
                .map(|(&a, &b)| a && b)
                .collect(),
        }
    }

    pub fn complement(&self) -> EdgeSubset {
        EdgeSubset {
            member: self.member.iter().map(|&a| !a).collect(),
        }
    }

    pub fn is_disjoint(&self, other: &EdgeSubset) -> bool {
        self.intersection(other).is_empty()
    }

    pub fn is_subset_of(&self, other: &EdgeSubset) -> bool {
        self.difference(other).is_empty()
    }

    /// Serialize to the `fff-1` factor wire format (ids sorted ascending).
    pub fn to_json(&self) -> String {
        let doc = FactorJson {
            format: "fff-1".into(),
            edges: self.ids(),
        };
        serde_json::to_string(&doc).expect("factor serialization")
    }

    pub fn from_json(host_edges: usize, s: &str) -> Result<Self> {
        let doc: FactorJson =
            serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("factor json: {e}")))?;
        if doc.format != "fff-1" {
            return Err(Error::InvalidInput(format!(
                "unknown factor format {:?}",
                doc.format
            )));
        }
        EdgeSubset::from_ids(host_edges, &doc.edges)
    }
}

#[derive(Serialize, Deserialize)]
struct FactorJson {
    format: String,
    edges: Vec<usize>,
}

/// An (X, Y) split of the vertex set. Either side may be empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    in_x: Vec<bool>,
}

impl Bipartition {
    /// X is the given vertex list; Y is everything else.
    pub fn new(n: usize, x: &[usize]) -> Result<Self> {
        let mut in_x = vec![false; n];
        for &v in x {
            if v >= n {
                return Err(Error::InvalidInput(format!("vertex {v} out of range")));
            }
            in_x[v] = true;
        }
        Ok(Bipartition { in_x })
    }

    pub fn from_mask(in_x: Vec<bool>) -> Self {
        Bipartition { in_x }
    }

    pub fn len(&self) -> usize {
        self.in_x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.in_x.is_empty()
    }

    pub fn in_x(&self, v: usize) -> bool {
        self.in_x[v]
    }

    pub fn x(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.in_x[v]).collect()
    }

    pub fn y(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| !self.in_x[v]).collect()
    }

    pub fn swapped(&self) -> Bipartition {
        Bipartition {
            in_x: self.in_x.iter().map(|&b| !b).collect(),
        }
    }
}

/// Degree targets modulo `k`: `d_H(v)` must be congruent to `residue(v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueTarget {
    k: usize,
    res: Vec<usize>,
}

impl ResidueTarget {
    /// Residues are reduced into `0..k`.
    pub fn new(k: usize, values: &[i64]) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("modulus k must be >= 1".into()));
        }
        let res = values
            .iter()
            .map(|&x| x.rem_euclid(k as i64) as usize)
            .collect();
        Ok(ResidueTarget { k, res })
    }

    pub fn constant(n: usize, k: usize, value: i64) -> Result<Self> {
        ResidueTarget::new(k, &vec![value; n])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.res.len()
    }

    pub fn residue(&self, v: usize) -> usize {
        self.res[v]
    }

    pub fn residues(&self) -> &[usize] {
        &self.res
    }

    pub fn sum(&self) -> usize {
        self.res.iter().sum()
    }

    /// Target shifted down by per-vertex amounts, reduced mod k.
    pub fn shifted_down(&self, by: &[usize]) -> ResidueTarget {
        let res = self
            .res
            .iter()
            .zip(by)
            .map(|(&r, &b)| {
                let k = self.k as i64;
                (r as i64 - b as i64).rem_euclid(k) as usize
            })
            .collect();
        ResidueTarget { k: self.k, res }
    }
}

/// Plain union-find over dense vertex ids.
#[derive(Clone)]
pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, v: usize) -> usize {
        if self.parent[v] != v {
            let root = self.find(self.parent[v]);
            self.parent[v] = root;
        }
        self.parent[v]
    }

    /// Returns false when `u` and `v` were already joined.
    pub fn union(&mut self, u: usize, v: usize) -> bool {
        let (ru, rv) = (self.find(u), self.find(v));
        if ru == rv {
            return false;
        }
        self.parent[ru] = rv;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn complete(n: usize) -> Multigraph {
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

    #[test]
    fn cut_counts_k4() {
        let g = complete(4);
        assert_eq!(g.cut_counts(&[0, 1]).unwrap(), (4, 1));
    }

    #[test]
    fn cut_counts_whole_vertex_set() {
        let g = complete(4);
        assert_eq!(g.cut_counts(&[0, 1, 2, 3]).unwrap(), (0, 6));
    }

    #[test]
    fn cut_counts_dipole() {
        let g = dipole(3);
        assert_eq!(g.cut_counts(&[0]).unwrap(), (3, 0));
    }

    #[test]
    fn cut_counts_loop_convention() {
        let g = Multigraph::new(2, vec![(0, 0), (0, 1)]).unwrap();
        assert_eq!(g.cut_counts(&[0]).unwrap(), (1, 1));
        assert_eq!(g.degree(0), 3);
    }

    #[test]
    fn cut_counts_rejects_out_of_range() {
        let g = complete(3);
        assert!(matches!(
            g.cut_counts(&[5]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn induced_triangle_from_k4() {
        let g = complete(4);
        let sub = g.induced(&[0, 1, 2]).unwrap();
        assert_eq!(sub.graph.n(), 3);
        assert_eq!(sub.graph.edge_count(), 3);
        for (e, (u, v)) in sub.graph.edges() {
            let (hu, hv) = g.ends(sub.edge_ids[e]);
            assert_eq!(
                (sub.vertices[u], sub.vertices[v]),
                (hu, hv),
                "retained edge maps to same endpoints"
            );
        }
    }

    #[test]
    fn induced_isolated_pair_from_c4() {
        let g = cycle(4);
        let sub = g.induced(&[0, 2]).unwrap();
        assert_eq!(sub.graph.n(), 2);
        assert_eq!(sub.graph.edge_count(), 0);
    }

    #[test]
    fn induced_keeps_loop() {
        let g = Multigraph::new(2, vec![(0, 0), (0, 1)]).unwrap();
        let sub = g.induced(&[0]).unwrap();
        assert_eq!(sub.graph.n(), 1);
        assert_eq!(sub.graph.edge_count(), 1);
        assert!(sub.graph.is_loop(0));
    }

    #[test]
    fn induced_rejects_empty() {
        let g = complete(3);
        assert!(g.induced(&[]).is_err());
    }

    #[test]
    fn bipartite_factor_k4() {
        let g = complete(4);
        let p = Bipartition::new(4, &[0, 1]).unwrap();
        let s = g.bipartite_factor(&p).unwrap();
        assert_eq!(s.len(), 4);
        for e in s.iter() {
            let (u, v) = g.ends(e);
            assert_ne!(p.in_x(u), p.in_x(v));
        }
    }

    #[test]
    fn bipartite_factor_proper_c4_and_empty_side() {
        let g = cycle(4);
        let p = g.proper_bipartition().unwrap();
        assert_eq!(g.bipartite_factor(&p).unwrap().len(), 4);
        let empty_x = Bipartition::new(4, &[]).unwrap();
        assert!(g.bipartite_factor(&empty_x).unwrap().is_empty());
    }

    #[test]
    fn degree_sum_identity_on_samples() {
        // sum_{v in A} d(v) = 2 e_G(A) + d_G(A)
        let graphs = [complete(4), cycle(5), dipole(4),
            Multigraph::new(3, vec![(0, 0), (0, 1), (1, 2), (1, 2)]).unwrap()];
        for g in &graphs {
            for mask in 0..(1u32 << g.n()) {
                let a: Vec<usize> = (0..g.n()).filter(|&v| mask >> v & 1 == 1).collect();
                let (boundary, inside) = g.cut_counts(&a).unwrap();
                let sum: usize = a.iter().map(|&v| g.degree(v)).sum();
                assert_eq!(sum, 2 * inside + boundary);
            }
        }
    }

    #[test]
    fn bipartite_factor_partitions_edges() {
        let g = complete(5);
        let p = Bipartition::new(5, &[0, 2]).unwrap();
        let cross = g.bipartite_factor(&p).unwrap();
        let (_, inside_x) = g.cut_counts(&p.x()).unwrap();
        let (_, inside_y) = g.cut_counts(&p.y()).unwrap();
        assert_eq!(cross.len() + inside_x + inside_y, g.edge_count());
    }

    #[test]
    fn graph_json_round_trip() {
        let text = r#"{"format":"ffg-1","n":4,"edges":[[0,1],[1,2],[2,3],[3,0],[0,0]]}"#;
        let g = Multigraph::from_json(text).unwrap();
        assert_eq!(g.to_json(), text);
        assert!(Multigraph::from_json(r#"{"format":"bogus","n":1,"edges":[]}"#).is_err());
    }

    #[test]
    fn residues_reduce() {
        let r = ResidueTarget::new(3, &[-1, 4, 3]).unwrap();
        assert_eq!(r.residues(), &[2, 1, 0]);
        assert!(ResidueTarget::new(0, &[]).is_err());
    }

    #[test]
    fn chi_maps() {
        assert_eq!(chi(3, 1), vec![0, 1, 0]);
        assert_eq!(chi_bar(3, 1), vec![1, 0, 1]);
    }
}
