//! Brute-force oracle: a full scan over edge subsets, used to certify the
//! exact solvers and the negative controls.

use ff_core::error::{Error, Result};
use ff_core::factor::FactorContract;
use ff_core::graph::{EdgeSubset, Multigraph};

use crate::verify::verify;

/// First subset (in mask counting order, edge 0 = lowest bit) satisfying the
/// contract, scanning all 2^|E| subsets. Hard-capped.
///
/// Contracts without structural clauses (tree-connectivity, bipartiteness)
/// go through a popcount scan; the result is the same first-satisfying mask.
pub fn brute_force_search(
    g: &Multigraph,
    c: &FactorContract,
    cap: usize,
) -> Result<Option<EdgeSubset>> {
    let m = g.edge_count();
    if m > cap {
        return Err(Error::Capacity(format!(
            "brute force needs |E| <= {cap}, got {m}"
        )));
    }
    let structural = c.m.map_or(false, |x| x > 0)
        || c.m0.map_or(false, |x| x > 0)
        || c.bipartite == Some(true);
    if !structural && m <= 63 {
        return degree_scan(g, c, m);
    }
    for mask in 0u64..1u64 << m {
        let s = EdgeSubset::from_mask(m, mask);
        if verify(g, &s, c)?.pass {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

fn degree_scan(g: &Multigraph, c: &FactorContract, m: usize) -> Result<Option<EdgeSubset>> {
    let n = g.n();
    let mut inc = vec![0u64; n];
    let mut loops = vec![0u64; n];
    for (e, (u, v)) in g.edges() {
        if u == v {
            loops[u] |= 1 << e;
        } else {
            inc[u] |= 1 << e;
            inc[v] |= 1 << e;
        }
    }
    let mut include_mask = 0u64;
    if let Some(ids) = &c.include {
        for &e in ids {
            if e >= m {
                return Ok(None);
            }
            include_mask |= 1 << e;
        }
    }
    let mut exclude_mask = 0u64;
    if let Some(ids) = &c.exclude {
        for &e in ids {
            if e < m {
                exclude_mask |= 1 << e;
            }
        }
    }
    if include_mask & exclude_mask != 0 {
        return Ok(None);
    }
    let lists = c.list_family(n)?;
    for mask in 0u64..1u64 << m {
        if mask & include_mask != include_mask || mask & exclude_mask != 0 {
            continue;
        }
        let mut ok = true;
        for v in 0..n {
            let d = (mask & inc[v]).count_ones() as usize
                + 2 * (mask & loops[v]).count_ones() as usize;
            if let Some(lo) = &c.g {
                if (d as i64) < lo[v] {
                    ok = false;
                    break;
                }
            }
            if let Some(hi) = &c.f {
                if d as i64 > hi[v] {
                    ok = false;
                    break;
                }
            }
            if let Some(fam) = &lists {
                if !fam[v].contains(&d) {
                    ok = false;
                    break;
                }
            }
            if let Some(spec) = &c.mod_target {
                if d % spec.k != spec.res[v] % spec.k {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Ok(Some(EdgeSubset::from_mask(m, mask)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{complete, cycle};

    #[test]
    fn c4_gf_factor_exists() {
        let g = cycle(4);
        let c = FactorContract::new().with_bounds(vec![1; 4], vec![2; 4]);
        let found = brute_force_search(&g, &c, 20).unwrap();
        assert!(found.is_some());
        let h = found.unwrap();
        let lo = ff_core::graph::const_map(4, 1);
        let hi = ff_core::graph::const_map(4, 2);
        let solver = ff_core::factor::gf_factor(
            &g,
            &lo,
            &hi,
            &EdgeSubset::empty(4),
            &EdgeSubset::empty(4),
        )
        .unwrap();
        assert!(solver.is_some());
        let _ = h;
    }

    #[test]
    fn k2_high_demand_none() {
        let g = Multigraph::new(2, vec![(0, 1)]).unwrap();
        let c = FactorContract::new().with_bounds(vec![2; 2], vec![3; 2]);
        assert!(brute_force_search(&g, &c, 20).unwrap().is_none());
    }

    #[test]
    fn k5_has_no_bipartite_spanning_eulerian_subgraph() {
        let g = complete(5);
        let c = FactorContract::new()
            .with_mod(2, vec![0; 5])
            .with_tree_connectivity(1, 0)
            .with_bipartite();
        assert!(brute_force_search(&g, &c, 20).unwrap().is_none());
    }

    #[test]
    fn cap_is_enforced() {
        let g = complete(7); // 21 edges
        let c = FactorContract::new();
        assert!(matches!(
            brute_force_search(&g, &c, 20),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn degree_scan_agrees_with_verify_scan() {
        // the popcount fast path and the full verify scan must return the
        // same first mask
        let g = Multigraph::new(3, vec![(0, 1), (1, 2), (0, 2), (0, 0), (1, 2)]).unwrap();
        let contracts = [
            FactorContract::new().with_bounds(vec![1, 1, 1], vec![3, 2, 2]),
            FactorContract::new().with_mod(2, vec![0, 1, 1]),
            FactorContract::new()
                .with_bounds(vec![0, 0, 0], vec![2, 2, 2])
                .with_include(vec![1])
                .with_exclude(vec![4]),
        ];
        for c in contracts {
            let fast = brute_force_search(&g, &c, 20).unwrap();
            let mut slow = None;
            for mask in 0u64..1 << 5 {
                let s = EdgeSubset::from_mask(5, mask);
                if crate::verify::verify(&g, &s, &c).unwrap().pass {
                    slow = Some(s);
                    break;
                }
            }
            assert_eq!(fast, slow);
        }
    }
}
