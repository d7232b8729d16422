//! Instance generators with known guarantees.
//!
//! Every generator returns a validated [`InstanceStream`] and is fully
//! deterministic: the seeded ones derive all randomness from the same
//! splitmix64 generator the rest of the crate uses, so an instance spec
//! string identifies its instance byte for byte across runs and machines.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::graph::{ArrivalEvent, GraphError, InstanceStream};
use crate::util::SplitMix64;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("bad generator parameter: {0}")]
    Parameter(String),
    #[error("unknown generator kind `{0}`")]
    UnknownKind(String),
    #[error("malformed spec `{spec}`: {reason}")]
    Spec { spec: String, reason: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn param(msg: impl Into<String>) -> GenError {
    GenError::Parameter(msg.into())
}

/// The classic First-Fit trap: a perfect matching removed from K_{m,m},
/// presented pair by pair. First-Fit spends m colors on a bipartite graph.
///
/// Vertices arrive as a_1, b_1, a_2, b_2, ...; a_i is adjacent to every
/// earlier b_j except its own partner, and symmetrically for b_i.
pub fn ff_adversary(m: u32) -> InstanceStream {
    let mut events = Vec::with_capacity(2 * m as usize);
    for i in 1..=m {
        let a = 2 * (i - 1);
        let b = a + 1;
        events.push(ArrivalEvent::new(a, (1..i).map(|j| 2 * (j - 1) + 1)));
        events.push(ArrivalEvent::new(b, (1..i).map(|j| 2 * (j - 1))));
    }
    InstanceStream::from_events(events).expect("construction is valid by design")
}

/// The cycle C_g for odd g, vertices in cycle order.
pub fn odd_cycle(g: u32) -> Result<InstanceStream, GenError> {
    if g < 3 || g % 2 == 0 {
        return Err(param(format!("odd cycle needs odd g >= 3, got {g}")));
    }
    let mut events = vec![ArrivalEvent::new(0, [])];
    for v in 1..g - 1 {
        events.push(ArrivalEvent::new(v, [v - 1]));
    }
    events.push(ArrivalEvent::new(g - 1, [g - 2, 0]));
    Ok(InstanceStream::from_events(events)?)
}

/// K_m with every edge replaced by a path of t edges, t odd. The branch
/// vertices arrive first, then the t-1 interior vertices of each path in
/// lexicographic edge order. Odd girth is exactly 3t (t = 1 gives K_m),
/// and n = m + (t-1) * m * (m-1) / 2.
pub fn subdivided_clique(m: u32, t: u32) -> Result<InstanceStream, GenError> {
    if m < 3 {
        return Err(param(format!("subdivided clique needs m >= 3, got {m}")));
    }
    if t % 2 == 0 || t == 0 {
        return Err(param(format!("subdivision length must be odd, got {t}")));
    }
    let mut events: Vec<ArrivalEvent> = Vec::new();
    if t == 1 {
        for v in 0..m {
            events.push(ArrivalEvent::new(v, 0..v));
        }
    } else {
        for v in 0..m {
            events.push(ArrivalEvent::new(v, []));
        }
        let mut next = m;
        for i in 0..m {
            for j in i + 1..m {
                // Path i - x_1 - ... - x_{t-1} - j.
                for step in 0..t - 1 {
                    let prev = if step == 0 { i } else { next - 1 };
                    if step == t - 2 {
                        events.push(ArrivalEvent::new(next, [prev, j]));
                    } else {
                        events.push(ArrivalEvent::new(next, [prev]));
                    }
                    next += 1;
                }
            }
        }
    }
    Ok(InstanceStream::from_events(events)?)
}

/// G(n, p) restricted to the bipartition even ids vs odd ids. Every cross
/// pair gets one Bernoulli(p) draw, taken in a fixed order (arriving vertex
/// ascending, earlier endpoint ascending), so the instance is a pure
/// function of (n, p, seed).
pub fn random_bipartite(n: u32, p: f64, seed: u64) -> Result<InstanceStream, GenError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(param(format!("edge probability must be in [0, 1], got {p}")));
    }
    let mut rng = SplitMix64::new(seed);
    let mut events = Vec::with_capacity(n as usize);
    for v in 0..n {
        let mut back = Vec::new();
        for u in 0..v {
            if u % 2 != v % 2 && rng.next_f64() < p {
                back.push(u);
            }
        }
        events.push(ArrivalEvent::new(v, back));
    }
    Ok(InstanceStream::from_events(events)?)
}

/// Presents the same graph in a uniformly random arrival order (and
/// relabels vertices to match the new order). Same seed, same output.
pub fn reorder(stream: &InstanceStream, seed: u64) -> InstanceStream {
    let n = stream.n();
    let mut rng = SplitMix64::new(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.next_below(i as u64 + 1) as usize;
        perm.swap(i, j);
    }
    let mut new_id = vec![0u32; n];
    for (pos, &old) in perm.iter().enumerate() {
        new_id[old] = pos as u32;
    }

    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for ev in stream.events() {
        for &u in &ev.back_edges {
            adj[ev.vertex.index()].insert(u.index());
            adj[u.index()].insert(ev.vertex.index());
        }
    }

    let mut events = Vec::with_capacity(n);
    for (pos, &old) in perm.iter().enumerate() {
        let back = adj[old]
            .iter()
            .map(|&u| new_id[u])
            .filter(|&u| (u as usize) < pos);
        events.push(ArrivalEvent::new(pos as u32, back));
    }
    InstanceStream::from_events(events).expect("a permuted valid stream stays valid")
}

/// Arrival order of a generated instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    /// The generator's own construction order.
    Given,
    /// A seeded random permutation applied on top.
    Random(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum GenKind {
    FfAdversary { m: u32 },
    OddCycle { g: u32 },
    SubdividedClique { m: u32, t: u32 },
    RandomBipartite { n: u32, p: f64, seed: u64 },
}

/// A parsed instance spec, e.g. `subdivided-clique:m=5,t=11` or
/// `random-bipartite:n=400,p=0.05,seed=7,order=random,order-seed=3`.
#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub kind: GenKind,
    pub order: Order,
}

impl GenSpec {
    pub fn parse(spec: &str) -> Result<Self, GenError> {
        let err = |reason: &str| GenError::Spec {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let (kind_name, rest) = match spec.split_once(':') {
            Some((k, r)) => (k, r),
            None => (spec, ""),
        };
        let mut pairs = Vec::new();
        for part in rest.split(',').filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| err(&format!("expected key=value, got `{part}`")))?;
            pairs.push((key, value));
        }
        let take = |key: &str| pairs.iter().find(|(k, _)| *k == key).map(|&(_, v)| v);
        let want_u32 = |key: &str| -> Result<u32, GenError> {
            take(key)
                .ok_or_else(|| err(&format!("missing `{key}`")))?
                .parse()
                .map_err(|_| err(&format!("`{key}` is not an integer")))
        };
        let want_u64 = |key: &str| -> Result<u64, GenError> {
            take(key)
                .ok_or_else(|| err(&format!("missing `{key}`")))?
                .parse()
                .map_err(|_| err(&format!("`{key}` is not an integer")))
        };

        let kind = match kind_name {
            "ff-adversary" => GenKind::FfAdversary { m: want_u32("m")? },
            "odd-cycle" => GenKind::OddCycle { g: want_u32("g")? },
            "subdivided-clique" => GenKind::SubdividedClique {
                m: want_u32("m")?,
                t: want_u32("t")?,
            },
            "random-bipartite" => GenKind::RandomBipartite {
                n: want_u32("n")?,
                p: take("p")
                    .ok_or_else(|| err("missing `p`"))?
                    .parse()
                    .map_err(|_| err("`p` is not a number"))?,
                seed: want_u64("seed")?,
            },
            other => return Err(GenError::UnknownKind(other.to_string())),
        };

        let order = match take("order") {
            None | Some("given") => {
                if take("order-seed").is_some() && take("order").is_none() {
                    return Err(err("`order-seed` requires `order=random`"));
                }
                Order::Given
            }
            Some("random") => Order::Random(want_u64("order-seed")?),
            Some(other) => return Err(err(&format!("unknown order `{other}`"))),
        };
        Ok(GenSpec { kind, order })
    }

    pub fn generate(&self) -> Result<InstanceStream, GenError> {
        let base = match self.kind {
            GenKind::FfAdversary { m } => {
                if m == 0 {
                    return Err(param("adversary needs m >= 1"));
                }
                ff_adversary(m)
            }
            GenKind::OddCycle { g } => odd_cycle(g)?,
            GenKind::SubdividedClique { m, t } => subdivided_clique(m, t)?,
            GenKind::RandomBipartite { n, p, seed } => random_bipartite(n, p, seed)?,
        };
        Ok(match self.order {
            Order::Given => base,
            Order::Random(seed) => reorder(&base, seed),
        })
    }

    /// Human-readable facts the construction guarantees, one per line.
    pub fn guarantees(&self) -> Vec<String> {
        let mut lines = match self.kind {
            GenKind::FfAdversary { m } => vec![
                format!("{} vertices, {} edges", 2 * m, m as u64 * (m as u64 - 1)),
                "bipartite (no odd cycle at all)".to_string(),
                format!("first-fit uses exactly {m} colors in the given order"),
            ],
            GenKind::OddCycle { g } => vec![
                format!("{g} vertices, {g} edges"),
                format!("odd girth exactly {g}"),
                "chromatic number 3".to_string(),
            ],
            GenKind::SubdividedClique { m, t } => {
                let n = m as u64 + (t as u64 - 1) * m as u64 * (m as u64 - 1) / 2;
                vec![
                    format!("{n} vertices"),
                    format!("odd girth exactly {}", 3 * t),
                    if t == 1 {
                        format!("chromatic number {m}")
                    } else {
                        "chromatic number 3".to_string()
                    },
                ]
            }
            GenKind::RandomBipartite { n, .. } => vec![
                format!("{n} vertices"),
                "bipartite (no odd cycle at all)".to_string(),
            ],
        };
        if let Order::Random(seed) = self.order {
            lines.push(format!("arrival order shuffled with seed {seed}"));
        }
        lines
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GenKind::FfAdversary { m } => write!(f, "ff-adversary:m={m}")?,
            GenKind::OddCycle { g } => write!(f, "odd-cycle:g={g}")?,
            GenKind::SubdividedClique { m, t } => write!(f, "subdivided-clique:m={m},t={t}")?,
            GenKind::RandomBipartite { n, p, seed } => {
                write!(f, "random-bipartite:n={n},p={p},seed={seed}")?
            }
        }
        if let Order::Random(seed) = self.order {
            write!(f, ",order=random,order-seed={seed}")?;
        }
        Ok(())
    }
}
