//! Arrival streams, incremental graph replay, and the instance file format.
//!
//! A stream presents vertices `0..n` in arrival order. Each vertex carries
//! its back-edges: the subset of earlier vertices it is adjacent to. Edges
//! to later vertices become visible only when the later endpoint arrives,
//! which is exactly the information an online colorer is allowed to see.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Vertex identifier, dense in `0..n` in arrival order.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Colors are positive integers; `0` never denotes a color.
pub type Color = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: malformed input: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("missing `n <count>` header line")]
    MissingHeader,
    #[error("header declares {declared} vertices but {found} data lines follow")]
    WrongVertexCount { declared: usize, found: usize },
    #[error("vertex {found} out of order (expected {expected})")]
    OutOfOrderVertex { expected: u32, found: u32 },
    #[error("vertex {vertex} references neighbor {neighbor} that is not yet revealed")]
    ForwardNeighbor { vertex: u32, neighbor: u32 },
    #[error("vertex {vertex} lists neighbor {neighbor} twice")]
    DuplicateNeighbor { vertex: u32, neighbor: u32 },
    #[error("vertex {vertex} is not revealed")]
    UnknownVertex { vertex: u32 },
}

/// One arrival: a vertex together with its back-edges.
///
/// Invariant: every neighbor precedes `vertex` in arrival order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrivalEvent {
    pub vertex: VertexId,
    pub back_edges: BTreeSet<VertexId>,
}

impl ArrivalEvent {
    pub fn new(vertex: u32, back_edges: impl IntoIterator<Item = u32>) -> Self {
        ArrivalEvent {
            vertex: VertexId(vertex),
            back_edges: back_edges.into_iter().map(VertexId).collect(),
        }
    }
}

/// A complete arrival sequence for an `n`-vertex graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceStream {
    events: Vec<ArrivalEvent>,
}

impl InstanceStream {
    /// Validates ids are `0..n` in order and all back-edges point backwards.
    pub fn from_events(events: Vec<ArrivalEvent>) -> Result<Self, GraphError> {
        for (i, ev) in events.iter().enumerate() {
            if ev.vertex.index() != i {
                return Err(GraphError::OutOfOrderVertex {
                    expected: i as u32,
                    found: ev.vertex.0,
                });
            }
            if let Some(&bad) = ev.back_edges.iter().find(|u| u.index() >= i) {
                return Err(GraphError::ForwardNeighbor {
                    vertex: ev.vertex.0,
                    neighbor: bad.0,
                });
            }
        }
        Ok(InstanceStream { events })
    }

    pub fn n(&self) -> usize {
        self.events.len()
    }

    pub fn events(&self) -> &[ArrivalEvent] {
        &self.events
    }

    /// Total edge count of the fully revealed graph.
    pub fn edge_count(&self) -> usize {
        self.events.iter().map(|e| e.back_edges.len()).sum()
    }

    // ======================== instance file format ========================
    //
    //   # optional comment lines
    //   n <N>
    //   <id> <deg> <neighbor> ... <neighbor>
    //
    // One data line per vertex in arrival order; neighbors are back-edges
    // only. `save` emits the canonical form: no comments, neighbors
    // ascending, single spaces, trailing newline.

    pub fn from_text(text: &str) -> Result<Self, GraphError> {
        let mut data_lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (header_no, header) = data_lines.next().ok_or(GraphError::MissingHeader)?;
        let declared = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["n", count] => count.parse::<usize>().map_err(|_| GraphError::MalformedLine {
                line: header_no,
                reason: format!("bad vertex count `{count}`"),
            })?,
            _ => return Err(GraphError::MissingHeader),
        };

        let mut events = Vec::with_capacity(declared);
        for (line_no, line) in data_lines {
            if events.len() == declared {
                return Err(GraphError::WrongVertexCount {
                    declared,
                    found: declared + 1,
                });
            }
            let mut fields = line.split_whitespace();
            let id: u32 = parse_field(fields.next(), line_no, "vertex id")?;
            if id as usize != events.len() {
                return Err(GraphError::OutOfOrderVertex {
                    expected: events.len() as u32,
                    found: id,
                });
            }
            let deg: usize = parse_field(fields.next(), line_no, "degree")?;
            let mut back_edges = BTreeSet::new();
            for _ in 0..deg {
                let u: u32 = parse_field(fields.next(), line_no, "neighbor")?;
                if u >= id {
                    return Err(GraphError::ForwardNeighbor {
                        vertex: id,
                        neighbor: u,
                    });
                }
                if !back_edges.insert(VertexId(u)) {
                    return Err(GraphError::DuplicateNeighbor {
                        vertex: id,
                        neighbor: u,
                    });
                }
            }
            if let Some(extra) = fields.next() {
                return Err(GraphError::MalformedLine {
                    line: line_no,
                    reason: format!("trailing field `{extra}` beyond declared degree {deg}"),
                });
            }
            events.push(ArrivalEvent {
                vertex: VertexId(id),
                back_edges,
            });
        }

        if events.len() != declared {
            return Err(GraphError::WrongVertexCount {
                declared,
                found: events.len(),
            });
        }
        InstanceStream::from_events(events)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.n());
        for ev in &self.events {
            out.push_str(&ev.vertex.0.to_string());
            out.push(' ');
            out.push_str(&ev.back_edges.len().to_string());
            for u in &ev.back_edges {
                out.push(' ');
                out.push_str(&u.0.to_string());
            }
            out.push('\n');
        }
        out
    }
}

fn parse_field<T: std::str::FromStr>(
    field: Option<&str>,
    line: usize,
    what: &str,
) -> Result<T, GraphError> {
    let raw = field.ok_or_else(|| GraphError::MalformedLine {
        line,
        reason: format!("missing {what}"),
    })?;
    raw.parse().map_err(|_| GraphError::MalformedLine {
        line,
        reason: format!("bad {what} `{raw}`"),
    })
}

/// Incrementally revealed graph. Adjacency covers revealed edges only.
#[derive(Debug, Clone, Default)]
pub struct OnlineGraph {
    adj: Vec<BTreeSet<VertexId>>,
}

impl OnlineGraph {
    pub fn new() -> Self {
        OnlineGraph { adj: Vec::new() }
    }

    /// Number of revealed vertices; the next arrival must carry this id.
    pub fn revealed(&self) -> usize {
        self.adj.len()
    }

    pub fn reveal(&mut self, ev: &ArrivalEvent) -> Result<(), GraphError> {
        if ev.vertex.index() != self.adj.len() {
            return Err(GraphError::OutOfOrderVertex {
                expected: self.adj.len() as u32,
                found: ev.vertex.0,
            });
        }
        if let Some(&bad) = ev.back_edges.iter().find(|u| u.index() >= self.adj.len()) {
            return Err(GraphError::ForwardNeighbor {
                vertex: ev.vertex.0,
                neighbor: bad.0,
            });
        }
        self.adj.push(ev.back_edges.clone());
        for &u in &ev.back_edges {
            self.adj[u.index()].insert(ev.vertex);
        }
        Ok(())
    }

    /// Neighbors of `v` among revealed edges, ascending by id.
    pub fn neighbors(&self, v: VertexId) -> Result<&BTreeSet<VertexId>, GraphError> {
        self.adj
            .get(v.index())
            .ok_or(GraphError::UnknownVertex { vertex: v.0 })
    }

    pub fn is_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj
            .get(u.index())
            .map_or(false, |set| set.contains(&v))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn replay(stream: &InstanceStream) -> Result<Self, GraphError> {
        let mut g = OnlineGraph::new();
        for ev in stream.events() {
            g.reveal(ev)?;
        }
        Ok(g)
    }
}

/// Colors assigned so far, one per vertex in arrival order.
///
/// A run that aborts on a promise violation leaves a strict prefix.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<Color>,
}

impl Coloring {
    pub fn new() -> Self {
        Coloring::default()
    }

    pub fn from_vec(colors: Vec<Color>) -> Self {
        Coloring { colors }
    }

    pub fn push(&mut self, c: Color) {
        debug_assert!(c > 0, "colors are positive");
        self.colors.push(c);
    }

    pub fn get(&self, v: VertexId) -> Option<Color> {
        self.colors.get(v.index()).copied()
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn as_slice(&self) -> &[Color] {
        &self.colors
    }

    pub fn distinct_count(&self) -> usize {
        self.colors.iter().collect::<BTreeSet<_>>().len()
    }

    pub fn max_color(&self) -> Color {
        self.colors.iter().copied().max().unwrap_or(0)
    }
}

/// Strategy over arbitrary valid arrival streams of up to `max_n` vertices,
/// shared by property tests across the crate.
#[cfg(test)]
pub(crate) fn arb_events(
    max_n: u32,
) -> impl proptest::strategy::Strategy<Value = Vec<ArrivalEvent>> {
    use proptest::prelude::*;
    (0..max_n).prop_flat_map(|n| {
        (0..n)
            .map(|v| {
                if v == 0 {
                    Just(std::collections::BTreeSet::new()).boxed()
                } else {
                    proptest::collection::btree_set(0..v, 0..=(v as usize)).boxed()
                }
            })
            .collect::<Vec<_>>()
            .prop_map(|sets| {
                sets.into_iter()
                    .enumerate()
                    .map(|(v, s)| ArrivalEvent::new(v as u32, s))
                    .collect()
            })
    })
}
