//! Parity-constrained walk metrics: even distance, even diameter, odd girth.
//!
//! All quantities are about walks, not paths; a walk may repeat vertices and
//! leave any subset under consideration. The fast routines run breadth-first
//! search over parity states `(vertex, parity)`, i.e. the bipartite double
//! cover. The `oracle_*` routines recompute the same quantities by dynamic
//! programming over exact walk lengths and exist so the two routes can be
//! compared on small graphs; they share no code with the BFS.

use std::collections::BTreeSet;
use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{GraphError, OnlineGraph, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParityError {
    #[error("even diameter of an empty set is undefined")]
    EmptySet,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("oracle size guard: n = {n} exceeds {max}")]
    SizeGuard { n: usize, max: usize },
}

/// Length of a shortest even walk, or infinity when none exists.
/// Finite values are even; `Finite(0)` means the endpoints coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ParityDistance {
    Finite(u32),
    Infinite,
}

impl ParityDistance {
    pub fn is_finite(self) -> bool {
        matches!(self, ParityDistance::Finite(_))
    }
}

impl std::fmt::Display for ParityDistance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParityDistance::Finite(d) => write!(f, "{d}"),
            ParityDistance::Infinite => write!(f, "inf"),
        }
    }
}

/// Length of a shortest odd cycle; infinite exactly for bipartite graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum OddGirth {
    Finite(u32),
    Infinite,
}

impl OddGirth {
    pub fn is_finite(self) -> bool {
        matches!(self, OddGirth::Finite(_))
    }
}

impl std::fmt::Display for OddGirth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OddGirth::Finite(g) => write!(f, "{g}"),
            OddGirth::Infinite => write!(f, "inf"),
        }
    }
}

const UNSEEN: u32 = u32::MAX;

/// Distances from `(s, even)` to every parity state, via BFS on the double
/// cover. `dist[v][p]` is the shortest walk from `s` to `v` of parity `p`.
fn parity_bfs(g: &OnlineGraph, s: VertexId) -> Result<Vec<[u32; 2]>, ParityError> {
    g.neighbors(s)?;
    let n = g.revealed();
    let mut dist = vec![[UNSEEN; 2]; n];
    dist[s.index()][0] = 0;
    let mut queue = VecDeque::new();
    queue.push_back((s, 0u8));
    while let Some((v, p)) = queue.pop_front() {
        let d = dist[v.index()][p as usize];
        let q = 1 - p;
        for &u in g.neighbors(v)? {
            if dist[u.index()][q as usize] == UNSEEN {
                dist[u.index()][q as usize] = d + 1;
                queue.push_back((u, q));
            }
        }
    }
    Ok(dist)
}

/// Shortest even walk between `s` and `t`; `Finite(0)` when `s == t`.
pub fn even_distance(g: &OnlineGraph, s: VertexId, t: VertexId) -> Result<ParityDistance, ParityError> {
    g.neighbors(t)?;
    let dist = parity_bfs(g, s)?;
    Ok(match dist[t.index()][0] {
        UNSEEN => ParityDistance::Infinite,
        d => ParityDistance::Finite(d),
    })
}

/// Max even distance over all pairs of `set`; walks may leave the set.
pub fn even_diameter(g: &OnlineGraph, set: &BTreeSet<VertexId>) -> Result<ParityDistance, ParityError> {
    if set.is_empty() {
        return Err(ParityError::EmptySet);
    }
    let mut worst = ParityDistance::Finite(0);
    for &s in set {
        let dist = parity_bfs(g, s)?;
        for &t in set {
            g.neighbors(t)?;
            let d = match dist[t.index()][0] {
                UNSEEN => ParityDistance::Infinite,
                d => ParityDistance::Finite(d),
            };
            worst = worst.max(d);
        }
    }
    Ok(worst)
}

/// Shortest odd cycle length: the minimum over `v` of the shortest odd
/// closed walk through `v` (such a walk always contains an odd cycle).
pub fn odd_girth(g: &OnlineGraph) -> OddGirth {
    let mut best = OddGirth::Infinite;
    for v in 0..g.revealed() {
        let v = VertexId(v as u32);
        let dist = parity_bfs(g, v).expect("vertex ids are dense");
        match dist[v.index()][1] {
            UNSEEN => {}
            d => best = best.min(OddGirth::Finite(d)),
        }
    }
    best
}

/// Two-colorability by plain BFS; independent of the parity machinery so it
/// can serve as a cross-check for `odd_girth(...) == Infinite`.
pub fn is_bipartite(g: &OnlineGraph) -> bool {
    let n = g.revealed();
    let mut side = vec![u8::MAX; n];
    for start in 0..n {
        if side[start] != u8::MAX {
            continue;
        }
        side[start] = 0;
        let mut queue = VecDeque::new();
        queue.push_back(VertexId(start as u32));
        while let Some(v) = queue.pop_front() {
            let sv = side[v.index()];
            for &u in g.neighbors(v).expect("vertex ids are dense") {
                if side[u.index()] == u8::MAX {
                    side[u.index()] = 1 - sv;
                    queue.push_back(u);
                } else if side[u.index()] == sv {
                    return false;
                }
            }
        }
    }
    true
}

// ============================ walk-DP oracles ============================

const ORACLE_MAX_N: usize = 64;

/// Walk reachability table: `reach[l][v]` holds iff a walk of exactly `l`
/// edges connects `s` to `v`, for `l = 0..=2n`. This is the boolean
/// adjacency-power computation, done step by step.
fn walk_table(g: &OnlineGraph, s: VertexId) -> Result<Vec<Vec<bool>>, ParityError> {
    let n = g.revealed();
    if n > ORACLE_MAX_N {
        return Err(ParityError::SizeGuard { n, max: ORACLE_MAX_N });
    }
    g.neighbors(s)?;
    let mut table = Vec::with_capacity(2 * n + 1);
    let mut cur = vec![false; n];
    cur[s.index()] = true;
    table.push(cur.clone());
    for _ in 1..=2 * n {
        let mut next = vec![false; n];
        for v in 0..n {
            if cur[v] {
                for &u in g.neighbors(VertexId(v as u32))? {
                    next[u.index()] = true;
                }
            }
        }
        table.push(next.clone());
        cur = next;
    }
    Ok(table)
}

/// Even distance recomputed as the least even `l` with a length-`l` walk.
/// Any finite even distance is below `2n` (a shortest parity-respecting
/// walk never repeats a `(vertex, parity)` state), so the scan is complete.
pub fn oracle_even_distance(
    g: &OnlineGraph,
    s: VertexId,
    t: VertexId,
) -> Result<ParityDistance, ParityError> {
    g.neighbors(t)?;
    let table = walk_table(g, s)?;
    for (l, row) in table.iter().enumerate().step_by(2) {
        if row[t.index()] {
            return Ok(ParityDistance::Finite(l as u32));
        }
    }
    Ok(ParityDistance::Infinite)
}

/// Odd girth recomputed as the least odd `l` with a closed length-`l` walk.
pub fn oracle_odd_girth(g: &OnlineGraph) -> Result<OddGirth, ParityError> {
    let n = g.revealed();
    if n > ORACLE_MAX_N {
        return Err(ParityError::SizeGuard { n, max: ORACLE_MAX_N });
    }
    let mut best = OddGirth::Infinite;
    for v in 0..n {
        let v = VertexId(v as u32);
        let table = walk_table(g, v)?;
        for (l, row) in table.iter().enumerate().skip(1).step_by(2) {
            if row[v.index()] {
                best = best.min(OddGirth::Finite(l as u32));
                break;
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ArrivalEvent, InstanceStream};
    use crate::util::SplitMix64;

    fn cycle(n: u32) -> OnlineGraph {
        let mut events = vec![ArrivalEvent::new(0, [])];
        for v in 1..n {
            events.push(ArrivalEvent::new(v, [v - 1]));
        }
        if n > 2 {
            events.last_mut().unwrap().back_edges.insert(VertexId(0));
        }
        OnlineGraph::replay(&InstanceStream::from_events(events).unwrap()).unwrap()
    }

    /// Petersen graph: outer 5-cycle 0..4, spokes, inner pentagram 5..9.
    fn petersen() -> OnlineGraph {
        let events = vec![
            ArrivalEvent::new(0, []),
            ArrivalEvent::new(1, [0]),
            ArrivalEvent::new(2, [1]),
            ArrivalEvent::new(3, [2]),
            ArrivalEvent::new(4, [3, 0]),
            ArrivalEvent::new(5, [0]),
            ArrivalEvent::new(6, [1]),
            ArrivalEvent::new(7, [2, 5]),
            ArrivalEvent::new(8, [3, 5, 6]),
            ArrivalEvent::new(9, [4, 6, 7]),
        ];
        OnlineGraph::replay(&InstanceStream::from_events(events).unwrap()).unwrap()
    }

    /// Seeded sparse graph on up to `max_n` vertices.
    fn random_graph(seed: u64, max_n: u32) -> OnlineGraph {
        let mut rng = SplitMix64::new(seed);
        let n = 1 + rng.next_below(max_n as u64) as u32;
        let mut events = Vec::new();
        for v in 0..n {
            let mut back = BTreeSet::new();
            for u in 0..v {
                if rng.next_f64() < 0.3 {
                    back.insert(VertexId(u));
                }
            }
            events.push(ArrivalEvent {
                vertex: VertexId(v),
                back_edges: back,
            });
        }
        OnlineGraph::replay(&InstanceStream::from_events(events).unwrap()).unwrap()
    }

    #[test]
    fn even_distance_on_a_five_cycle() {
        let g = cycle(5);
        // Adjacent vertices: the even walk goes the long way round.
        assert_eq!(
            even_distance(&g, VertexId(0), VertexId(1)).unwrap(),
            ParityDistance::Finite(4)
        );
        assert_eq!(
            even_distance(&g, VertexId(2), VertexId(2)).unwrap(),
            ParityDistance::Finite(0)
        );
        assert_eq!(odd_girth(&g), OddGirth::Finite(5));
        assert!(!is_bipartite(&g));
    }

    #[test]
    fn single_edge_has_no_even_connection() {
        let g = OnlineGraph::replay(
            &InstanceStream::from_events(vec![
                ArrivalEvent::new(0, []),
                ArrivalEvent::new(1, [0]),
            ])
            .unwrap(),
        )
        .unwrap();
        assert_eq!(
            even_distance(&g, VertexId(0), VertexId(1)).unwrap(),
            ParityDistance::Infinite
        );
        assert_eq!(odd_girth(&g), OddGirth::Infinite);
        assert!(is_bipartite(&g));
    }

    #[test]
    fn petersen_metrics() {
        let g = petersen();
        assert_eq!(g.edge_count(), 15);
        assert_eq!(odd_girth(&g), OddGirth::Finite(5));
        assert_eq!(oracle_odd_girth(&g).unwrap(), OddGirth::Finite(5));
    }

    #[test]
    fn even_diameter_of_a_star_neighborhood() {
        // Star: center 0, leaves 1..=4. Leaves pairwise have even walks
        // through the center; diameter of the leaf set is 2.
        let mut events = vec![ArrivalEvent::new(0, [])];
        for v in 1..5 {
            events.push(ArrivalEvent::new(v, [0]));
        }
        let g = OnlineGraph::replay(&InstanceStream::from_events(events).unwrap()).unwrap();
        let leaves: BTreeSet<VertexId> = (1..5).map(VertexId).collect();
        assert_eq!(even_diameter(&g, &leaves).unwrap(), ParityDistance::Finite(2));
        let err = even_diameter(&g, &BTreeSet::new()).unwrap_err();
        assert_eq!(err, ParityError::EmptySet);
    }

    #[test]
    fn oracle_and_bfs_agree_on_seeded_graphs() {
        for seed in 0..60 {
            let g = random_graph(seed, 10);
            let n = g.revealed() as u32;
            assert_eq!(
                odd_girth(&g),
                oracle_odd_girth(&g).unwrap(),
                "odd girth mismatch at seed {seed}"
            );
            assert_eq!(odd_girth(&g).is_finite(), !is_bipartite(&g));
            for s in 0..n {
                for t in 0..n {
                    let fast = even_distance(&g, VertexId(s), VertexId(t)).unwrap();
                    let slow = oracle_even_distance(&g, VertexId(s), VertexId(t)).unwrap();
                    assert_eq!(fast, slow, "seed {seed}, pair ({s},{t})");
                }
            }
        }
    }

    #[test]
    fn even_distance_is_symmetric_and_triangular() {
        for seed in 100..130 {
            let g = random_graph(seed, 9);
            let n = g.revealed() as u32;
            for a in 0..n {
                for b in 0..n {
                    let ab = even_distance(&g, VertexId(a), VertexId(b)).unwrap();
                    let ba = even_distance(&g, VertexId(b), VertexId(a)).unwrap();
                    assert_eq!(ab, ba);
                    for c in 0..n {
                        let bc = even_distance(&g, VertexId(b), VertexId(c)).unwrap();
                        let ac = even_distance(&g, VertexId(a), VertexId(c)).unwrap();
                        if let (ParityDistance::Finite(x), ParityDistance::Finite(y)) = (ab, bc) {
                            match ac {
                                ParityDistance::Finite(z) => assert!(z <= x + y),
                                ParityDistance::Infinite => {
                                    panic!("even walks concatenate: seed {seed} ({a},{b},{c})")
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn distances_shrink_as_the_stream_extends() {
        for seed in 200..230 {
            let full = random_graph(seed, 10);
            let n = full.revealed() as u32;
            // Rebuild prefixes and compare every pair distance.
            let mut prefix = OnlineGraph::new();
            let mut previous: Vec<Vec<ParityDistance>> = Vec::new();
            for v in 0..n {
                let back: BTreeSet<VertexId> = full
                    .neighbors(VertexId(v))
                    .unwrap()
                    .iter()
                    .copied()
                    .filter(|u| u.0 < v)
                    .collect();
                prefix
                    .reveal(&ArrivalEvent {
                        vertex: VertexId(v),
                        back_edges: back,
                    })
                    .unwrap();
                let mut now = Vec::new();
                for s in 0..=v {
                    let mut row = Vec::new();
                    for t in 0..=v {
                        row.push(even_distance(&prefix, VertexId(s), VertexId(t)).unwrap());
                    }
                    now.push(row.clone());
                }
                for (s, row) in previous.iter().enumerate() {
                    for (t, &old) in row.iter().enumerate() {
                        assert!(now[s][t] <= old, "seed {seed}: distance grew at ({s},{t})");
                    }
                }
                previous = now;
            }
        }
    }

    #[test]
    fn oracle_guards_against_large_graphs() {
        let g = cycle(65);
        assert!(matches!(
            oracle_odd_girth(&g),
            Err(ParityError::SizeGuard { n: 65, .. })
        ));
        assert!(matches!(
            oracle_even_distance(&g, VertexId(0), VertexId(1)),
            Err(ParityError::SizeGuard { .. })
        ));
        // The BFS route has no such guard.
        assert_eq!(odd_girth(&g), OddGirth::Finite(65));
    }
}
