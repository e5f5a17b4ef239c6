//! Stress for the tour construction: heavily imbalanced orientations with
//! slacks exactly covering the surplus, where the marked-arc bookkeeping
//! does all the work.

use ff_core::graph::{const_map, EdgeSubset, Multigraph};
use ff_core::orient::Orientation;
use ff_core::tour::{tour_factor, tour_window};

fn check(g: &Multigraph, o: &Orientation, inc: &EdgeSubset, exc: &EdgeSubset, s: &[i64], s0: &[i64]) {
    let state = tour_factor(g, o, inc, exc, &s.to_vec(), &s0.to_vec()).expect("preconditions met");
    let h = &state.factor;
    assert!(inc.is_subset_of(h));
    assert!(h.is_disjoint(exc));
    let win = tour_window(g, o, inc, exc, &s.to_vec(), &s0.to_vec());
    for v in 0..g.n() {
        let d = g.subset_degree(h, v) as i64;
        assert!(
            win[v].0 <= d && d <= win[v].1,
            "vertex {v}: degree {d} outside [{}, {}]",
            win[v].0,
            win[v].1
        );
        let surplus = o.out_degree(g, v) as i64 - o.in_degree(g, v) as i64;
        assert!(state.marked[v].len() as i64 <= surplus.max(0));
        assert_eq!(state.marked_successors[v].len(), state.marked[v].len());
    }
}

/// Deterministic xorshift so the corpus is fixed without pulling in rand.
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n.max(1)
    }
}

#[test]
fn outward_star_with_exact_slack() {
    // all edges leave the center: the center's surplus equals its degree
    for leaves in 2..=8 {
        let n = leaves + 1;
        let edges: Vec<(usize, usize)> = (1..=leaves).map(|l| (0, l)).collect();
        let g = Multigraph::new(n, edges).unwrap();
        let o = Orientation::all_forward(leaves);
        let inc = EdgeSubset::from_ids(leaves, &[0]).unwrap();
        let exc = EdgeSubset::empty(leaves);
        // surplus at the center is leaves; split it across s and s0
        let mut s = const_map(n, 0);
        let mut s0 = const_map(n, 0);
        s[0] = (leaves / 2) as i64;
        s0[0] = (leaves - leaves / 2) as i64;
        check(&g, &o, &inc, &exc, &s, &s0);
    }
}

#[test]
fn one_directional_paths_and_cycles() {
    for n in 2..=9 {
        // directed path: every interior vertex balanced, endpoints off by 1
        let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        let g = Multigraph::new(n, edges).unwrap();
        let o = Orientation::all_forward(n - 1);
        let inc = EdgeSubset::from_ids(n - 1, &[0]).unwrap();
        let exc = EdgeSubset::empty(n - 1);
        let mut s = const_map(n, 0);
        s[0] = 1; // source surplus
        check(&g, &o, &inc, &exc, &s, &const_map(n, 0));
    }
}

#[test]
fn tight_slack_random_digraphs() {
    let mut rng = Rng(0x00ff_f00d_1234_5678);
    for round in 0..200 {
        let n = 2 + (rng.below(9) as usize);
        let mut edges: Vec<(usize, usize)> = (1..n)
            .map(|v| ((rng.below(v as u64) as usize), v))
            .collect();
        let extras = rng.below(20) as usize;
        for _ in 0..extras.min(30 - edges.len()) {
            let u = rng.below(n as u64) as usize;
            let mut v = rng.below(n as u64) as usize;
            while v == u {
                v = rng.below(n as u64) as usize;
            }
            edges.push((u, v));
        }
        let g = Multigraph::new(n, edges).unwrap();
        // bias the orientation: mostly forward, so low-id vertices build
        // surplus through the tree edges
        let o = Orientation::new(
            (0..g.edge_count())
                .map(|_| rng.below(4) != 0)
                .collect(),
        );
        let mut inc = EdgeSubset::empty(g.edge_count());
        let mut exc = EdgeSubset::empty(g.edge_count());
        for e in 0..g.edge_count() {
            match rng.below(6) {
                0 => inc.insert(e),
                1 => exc.insert(e),
                _ => {}
            }
        }
        if inc.is_empty() && exc.is_empty() {
            if round % 2 == 0 {
                inc.insert(0);
            } else {
                exc.insert(0);
            }
        }
        // slacks exactly cover the surplus, split over the two sides
        let mut s = const_map(n, 0);
        let mut s0 = const_map(n, 0);
        for v in 0..n {
            let surplus = (o.out_degree(&g, v) as i64 - o.in_degree(&g, v) as i64).max(0);
            let a = rng.below((surplus + 1) as u64) as i64;
            s[v] = a;
            s0[v] = surplus - a;
        }
        check(&g, &o, &inc, &exc, &s, &s0);
    }
}
