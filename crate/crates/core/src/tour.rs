//! Eulerian-tour factor construction: balance a digraph with added arcs,
//! walk one Euler circuit, and grow a factor by a fixed per-edge rule list
//! that keeps every vertex degree inside the claimed window.

use crate::error::{Error, Result};
use crate::graph::{EdgeSubset, Multigraph, VertexIntMap};
use crate::orient::Orientation;

/// One step of the Euler circuit: a real edge of the host graph or one of
/// the balancing arcs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TourEdge {
    Real(usize),
    Added(usize),
}

/// Full trace of a tour construction. `factor` is the resulting H; the rest
/// is kept so the invariants can be re-checked from outside.
#[derive(Clone, Debug)]
pub struct TourState {
    /// Balancing arcs (tail, head); disjoint from the host edges.
    pub added: Vec<(usize, usize)>,
    /// Euler circuit of the balanced digraph, starting inside F (or F0 when
    /// F is empty).
    pub tour: Vec<TourEdge>,
    /// Per vertex: tour positions of the marked incoming balancing arcs.
    pub marked: Vec<Vec<usize>>,
    /// Per vertex: tour positions of their successor edges.
    pub marked_successors: Vec<Vec<usize>>,
    /// For each real edge, the 1-based step at which it entered the factor.
    pub added_step: Vec<Option<usize>>,
    pub factor: EdgeSubset,
}

/// Add new directed arcs pairing out-surplus vertices to in-surplus ones so
/// that the result is balanced: every vertex ends up with
/// `d_M(v) = |d^+(v) - d^-(v)|` arc ends.
pub fn balance_augment(g: &Multigraph, o: &Orientation) -> Vec<(usize, usize)> {
    let mut surplus: Vec<i64> = (0..g.n())
        .map(|v| o.out_degree(g, v) as i64 - o.in_degree(g, v) as i64)
        .collect();
    let mut arcs = Vec::new();
    // vertices with surplus out-degree need incoming arcs; deficits supply tails
    let mut head = 0;
    for tail in 0..g.n() {
        while surplus[tail] < 0 {
            while head < g.n() && surplus[head] <= 0 {
                head += 1;
            }
            debug_assert!(head < g.n(), "total surplus is zero");
            arcs.push((tail, head));
            surplus[tail] += 1;
            surplus[head] -= 1;
        }
    }
    arcs
}

struct Arcs<'g> {
    g: &'g Multigraph,
    o: &'g Orientation,
    added: Vec<(usize, usize)>,
}

impl Arcs<'_> {
    fn count(&self) -> usize {
        self.g.edge_count() + self.added.len()
    }

    fn tail(&self, t: TourEdge) -> usize {
        match t {
            TourEdge::Real(e) => self.o.tail(self.g, e),
            TourEdge::Added(i) => self.added[i].0,
        }
    }

    fn head(&self, t: TourEdge) -> usize {
        match t {
            TourEdge::Real(e) => self.o.head(self.g, e),
            TourEdge::Added(i) => self.added[i].1,
        }
    }

    fn by_index(&self, i: usize) -> TourEdge {
        if i < self.g.edge_count() {
            TourEdge::Real(i)
        } else {
            TourEdge::Added(i - self.g.edge_count())
        }
    }
}

/// Euler circuit of the balanced digraph, lowest-arc-index-first, rotated so
/// the circuit starts with `first`.
fn euler_circuit(arcs: &Arcs, first: usize) -> Result<Vec<TourEdge>> {
    let n = arcs.g.n();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..arcs.count() {
        out[arcs.tail(arcs.by_index(i))].push(i);
    }
    let mut ptr = vec![0usize; n];
    let mut used = vec![false; arcs.count()];
    let start = arcs.tail(arcs.by_index(first));
    let mut stack: Vec<(usize, Option<usize>)> = vec![(start, None)];
    let mut circuit_rev: Vec<usize> = Vec::with_capacity(arcs.count());
    // force the first arc
    used[first] = true;
    stack.push((arcs.head(arcs.by_index(first)), Some(first)));
    while let Some(&(v, via)) = stack.last() {
        let mut advanced = false;
        while ptr[v] < out[v].len() {
            let a = out[v][ptr[v]];
            if used[a] {
                ptr[v] += 1;
                continue;
            }
            used[a] = true;
            stack.push((arcs.head(arcs.by_index(a)), Some(a)));
            advanced = true;
            break;
        }
        if !advanced {
            stack.pop();
            if let Some(a) = via {
                circuit_rev.push(a);
            }
        }
    }
    if circuit_rev.len() != arcs.count() {
        return Err(Error::PreconditionUnmet(
            "digraph is not connected; no Euler circuit covers every edge".into(),
        ));
    }
    circuit_rev.reverse();
    let pos = circuit_rev
        .iter()
        .position(|&a| a == first)
        .expect("forced arc is in the circuit");
    let rotated: Vec<TourEdge> = circuit_rev[pos..]
        .iter()
        .chain(&circuit_rev[..pos])
        .map(|&a| arcs.by_index(a))
        .collect();
    Ok(rotated)
}

/// Construct a factor H including F, excluding F0, with per-vertex bounds
/// `d^+(v) - d^+_{F0}(v) - s0(v) <= d_H(v) <= d^-(v) + d^+_F(v) + s(v)`.
///
/// Preconditions: the underlying graph is connected, `F` and `F0` are
/// disjoint with at least one edge between them, and
/// `s(v) + s0(v) >= d^+(v) - d^-(v)` everywhere with `s, s0 >= 0`.
pub fn tour_factor(
    g: &Multigraph,
    o: &Orientation,
    include: &EdgeSubset,
    exclude: &EdgeSubset,
    s: &VertexIntMap,
    s0: &VertexIntMap,
) -> Result<TourState> {
    let n = g.n();
    if s.len() != n || s0.len() != n {
        return Err(Error::InvalidInput("slack maps have wrong length".into()));
    }
    if !include.is_disjoint(exclude) {
        return Err(Error::PreconditionUnmet("F and F0 overlap".into()));
    }
    if include.is_empty() && exclude.is_empty() {
        return Err(Error::PreconditionUnmet("F u F0 must have at least one edge".into()));
    }
    if !g.is_connected() {
        return Err(Error::PreconditionUnmet("underlying graph is not connected".into()));
    }
    for v in 0..n {
        if s[v] < 0 || s0[v] < 0 {
            return Err(Error::PreconditionUnmet(format!(
                "slacks must be nonnegative at vertex {v}"
            )));
        }
        let diff = o.out_degree(g, v) as i64 - o.in_degree(g, v) as i64;
        if s[v] + s0[v] < diff {
            return Err(Error::PreconditionUnmet(format!(
                "s + s0 < d^+ - d^- at vertex {v}"
            )));
        }
    }

    let added = balance_augment(g, o);
    let arcs = Arcs { g, o, added };
    let first = include
        .iter()
        .next()
        .or_else(|| exclude.iter().next())
        .expect("F u F0 nonempty");
    let tour = euler_circuit(&arcs, first)?;
    let t = tour.len();

    let is_forced = |te: TourEdge| match te {
        TourEdge::Real(e) => include.contains(e) || exclude.contains(e),
        TourEdge::Added(_) => false,
    };
    let is_added = |te: TourEdge| matches!(te, TourEdge::Added(_));

    // Marked arcs: positions i-1 (0-based) where the arc is a balancing arc
    // into v and the next tour edge avoids F u F0 (wraparound at the end).
    let mut marked: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut marked_successors: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut mark_rank: Vec<Option<usize>> = vec![None; arcs.count()];
    for i in 0..t {
        let prev = tour[i];
        let next = tour[(i + 1) % t];
        if !is_added(prev) {
            continue;
        }
        let v = arcs.head(prev);
        let surplus = o.out_degree(g, v) as i64 - o.in_degree(g, v) as i64;
        if surplus <= 0 {
            continue;
        }
        if !is_forced(next) {
            let idx = match prev {
                TourEdge::Added(j) => g.edge_count() + j,
                TourEdge::Real(e) => e,
            };
            mark_rank[idx] = Some(marked[v].len() + 1); // 1-based rank
            marked[v].push(i);
            if (i + 1) % t != 0 {
                marked_successors[v].push((i + 1) % t);
            }
        }
    }

    // Invariant: |W_v| never exceeds max(0, d^+ - d^-).
    for v in 0..n {
        let surplus = o.out_degree(g, v) as i64 - o.in_degree(g, v) as i64;
        debug_assert!(marked[v].len() as i64 <= surplus.max(0));
    }

    let mut factor = EdgeSubset::empty(g.edge_count());
    let mut added_step: Vec<Option<usize>> = vec![None; g.edge_count()];
    for i in 0..t {
        let cur = tour[i];
        let step = i + 1;
        match cur {
            TourEdge::Real(e) if include.contains(e) => {
                factor.insert(e);
                added_step[e] = Some(step);
            }
            TourEdge::Real(e) if exclude.contains(e) => {}
            TourEdge::Added(_) => {}
            TourEdge::Real(e) => {
                // e is outside M, F and F0; consult the previous tour edge
                let prev = tour[(i + t - 1) % t];
                let prev_idx = match prev {
                    TourEdge::Added(j) => g.edge_count() + j,
                    TourEdge::Real(pe) => pe,
                };
                let v = arcs.tail(cur);
                let in_marked = is_added(prev) && arcs.head(prev) == v && mark_rank[prev_idx].is_some();
                if in_marked {
                    let j = mark_rank[prev_idx].unwrap() as i64;
                    if j > s0[v] {
                        factor.insert(e);
                        added_step[e] = Some(step);
                    }
                } else {
                    let prev_in_factor = match prev {
                        TourEdge::Real(pe) => factor.contains(pe),
                        TourEdge::Added(_) => false,
                    };
                    if !prev_in_factor {
                        factor.insert(e);
                        added_step[e] = Some(step);
                    }
                }
            }
        }
    }

    debug_assert!(include.is_subset_of(&factor));
    debug_assert!(factor.is_disjoint(exclude));
    Ok(TourState {
        added: arcs.added,
        tour,
        marked,
        marked_successors,
        added_step,
        factor,
    })
}

/// The window the construction guarantees for each vertex:
/// `[d^+ - d^+_{F0} - s0, d^- + d^+_F + s]`.
pub fn tour_window(
    g: &Multigraph,
    o: &Orientation,
    include: &EdgeSubset,
    exclude: &EdgeSubset,
    s: &VertexIntMap,
    s0: &VertexIntMap,
) -> Vec<(i64, i64)> {
    (0..g.n())
        .map(|v| {
            let lo = o.out_degree(g, v) as i64 - o.out_degree_in(g, exclude, v) as i64 - s0[v];
            let hi = o.in_degree(g, v) as i64 + o.out_degree_in(g, include, v) as i64 + s[v];
            (lo, hi)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::const_map;

    fn oriented(n: usize, arcs: &[(usize, usize)]) -> (Multigraph, Orientation) {
        let g = Multigraph::new(n, arcs.to_vec()).unwrap();
        (g, Orientation::all_forward(arcs.len()))
    }

    fn check_window(
        g: &Multigraph,
        o: &Orientation,
        inc: &EdgeSubset,
        exc: &EdgeSubset,
        s: &VertexIntMap,
        s0: &VertexIntMap,
        h: &EdgeSubset,
    ) {
        let win = tour_window(g, o, inc, exc, s, s0);
        for v in 0..g.n() {
            let d = g.subset_degree(h, v) as i64;
            assert!(
                win[v].0 <= d && d <= win[v].1,
                "vertex {v}: degree {d} outside [{}, {}]",
                win[v].0,
                win[v].1
            );
        }
    }

    #[test]
    fn balance_path() {
        let (g, o) = oriented(3, &[(0, 1), (1, 2)]);
        assert_eq!(balance_augment(&g, &o), vec![(2, 0)]);
    }

    #[test]
    fn balance_already_balanced() {
        let (g, mut o) = oriented(2, &[(0, 1), (0, 1)]);
        o.set(1, false);
        assert!(balance_augment(&g, &o).is_empty());
    }

    #[test]
    fn balance_star_inward() {
        let g = Multigraph::new(4, vec![(1, 0), (2, 0), (3, 0)]).unwrap();
        let o = Orientation::all_forward(3);
        let arcs = balance_augment(&g, &o);
        assert_eq!(arcs.len(), 3);
        assert!(arcs.iter().all(|&(t, _)| t == 0));
    }

    #[test]
    fn tour_directed_triangle() {
        let (g, o) = oriented(3, &[(0, 1), (1, 2), (2, 0)]);
        let inc = EdgeSubset::from_ids(3, &[0]).unwrap();
        let exc = EdgeSubset::empty(3);
        let s = const_map(3, 0);
        let state = tour_factor(&g, &o, &inc, &exc, &s, &s).unwrap();
        assert_eq!(state.factor.ids(), vec![0, 2]);
        check_window(&g, &o, &inc, &exc, &s, &s, &state.factor);
    }

    #[test]
    fn tour_all_forced_in() {
        let (g, o) = oriented(3, &[(0, 1), (1, 2), (2, 0)]);
        let inc = EdgeSubset::full(3);
        let exc = EdgeSubset::empty(3);
        let s = const_map(3, 0);
        let state = tour_factor(&g, &o, &inc, &exc, &s, &s).unwrap();
        assert_eq!(state.factor.len(), 3);
    }

    #[test]
    fn tour_dipole_one_in_one_out() {
        let g = Multigraph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        let mut o = Orientation::all_forward(2);
        o.set(1, false);
        let inc = EdgeSubset::from_ids(2, &[0]).unwrap();
        let exc = EdgeSubset::from_ids(2, &[1]).unwrap();
        let s = const_map(2, 0);
        let state = tour_factor(&g, &o, &inc, &exc, &s, &s).unwrap();
        assert_eq!(state.factor.ids(), vec![0]);
        check_window(&g, &o, &inc, &exc, &s, &s, &state.factor);
    }

    #[test]
    fn tour_rejects_disconnected() {
        let g = Multigraph::new(4, vec![(0, 1), (0, 1), (2, 3), (2, 3)]).unwrap();
        let mut o = Orientation::all_forward(4);
        o.set(1, false);
        o.set(3, false);
        let inc = EdgeSubset::from_ids(4, &[0]).unwrap();
        assert!(matches!(
            tour_factor(&g, &o, &inc, &EdgeSubset::empty(4), &const_map(4, 0), &const_map(4, 0)),
            Err(Error::PreconditionUnmet(_))
        ));
    }

    #[test]
    fn tour_starts_at_excluded_edge_when_include_empty() {
        let g = Multigraph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        let mut o = Orientation::all_forward(2);
        o.set(1, false);
        let inc = EdgeSubset::empty(2);
        let exc = EdgeSubset::from_ids(2, &[0]).unwrap();
        let s = const_map(2, 0);
        let state = tour_factor(&g, &o, &inc, &exc, &s, &s).unwrap();
        assert_eq!(state.factor.ids(), vec![1]);
        check_window(&g, &o, &inc, &exc, &s, &s, &state.factor);
    }

    #[test]
    fn tour_rejects_empty_forced_sets() {
        let (g, o) = oriented(2, &[(0, 1), (1, 0)]);
        assert!(tour_factor(
            &g,
            &o,
            &EdgeSubset::empty(2),
            &EdgeSubset::empty(2),
            &const_map(2, 0),
            &const_map(2, 0)
        )
        .is_err());
    }

    #[test]
    fn tour_needs_slack_for_unbalanced() {
        // two arcs out of vertex 0, one back in: surplus 1 at vertex 0
        let (g, o) = oriented(3, &[(0, 1), (1, 0), (0, 2), (2, 1), (1, 2)]);
        // d+(0)=2, d-(0)=1; s+s0 must cover the surplus
        let inc = EdgeSubset::from_ids(5, &[0]).unwrap();
        let exc = EdgeSubset::empty(5);
        let zero = const_map(3, 0);
        assert!(tour_factor(&g, &o, &inc, &exc, &zero, &zero).is_err());
        let mut s = const_map(3, 0);
        s[0] = 1;
        let mut s0 = const_map(3, 0);
        s0[1] = 1;
        s0[2] = 1;
        let state = tour_factor(&g, &o, &inc, &exc, &s, &s0).unwrap();
        check_window(&g, &o, &inc, &exc, &s, &s0, &state.factor);
        // marked sets respect the surplus bound and pair off exactly
        for v in 0..3 {
            let surplus = o.out_degree(&g, v) as i64 - o.in_degree(&g, v) as i64;
            assert!(state.marked[v].len() as i64 <= surplus.max(0));
            assert_eq!(state.marked_successors[v].len(), state.marked[v].len());
        }
    }

    #[test]
    fn tour_is_deterministic() {
        let (g, o) = oriented(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (2, 0)]);
        let inc = EdgeSubset::from_ids(6, &[3]).unwrap();
        let exc = EdgeSubset::from_ids(6, &[4]).unwrap();
        let s = const_map(4, 1);
        let a = tour_factor(&g, &o, &inc, &exc, &s, &s).unwrap();
        let b = tour_factor(&g, &o, &inc, &exc, &s, &s).unwrap();
        assert_eq!(a.factor, b.factor);
        assert_eq!(a.tour, b.tour);
    }
}
