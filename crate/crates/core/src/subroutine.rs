//! Coloring subroutines: a terminal solver and reducers stacked above it.
//!
//! A subroutine instance accepts two kinds of events. A *base addition*
//! hands it a frozen vertex set promised to have small even-diameter at that
//! moment; at most `r_star` bases may arrive. A *coloring query* asks it to
//! color a vertex adjacent to a named base, immediately and irrevocably.
//!
//! The terminal solver answers queries with the base index itself: when the
//! surrounding graph has large enough odd girth, two vertices attached to
//! the same base can never be adjacent, so one color per base is proper.
//!
//! A reducer answers queries by maintaining, per base `i`, the active set
//! `Y'_i` of vertices it has absorbed, and the graph `H+` on base indices
//! with an edge `i-j` whenever some edge joins `Y'_i` and `Y'_j`. Vertices
//! whose base stays low-degree in `H+` are colored by the group-coloring
//! block; when a base's degree exceeds `delta`, the radius-0/1/2 balls
//! around it in `H+` are merged into at most six bases of the inner
//! subroutine (their X-unions and Y'-unions), the merged groups freeze, and
//! the vertex is recolored through the inner instance, to which it is now
//! adjacent by construction.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{Color, GraphError, OnlineGraph, VertexId};
use crate::group::{GroupColoring, GroupError, GroupId};
use crate::trace::{AuditEvent, AuditTrace, QueryStep};
use crate::util::ceil_guarded;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SubroutineError {
    /// Adding one more base would exceed `ceil(r_star)`. On inputs honoring
    /// the odd-girth promise this cannot happen; treat it as a promise
    /// violation diagnostic.
    #[error("layer {layer}: base budget {cap} exhausted while processing vertex {at}")]
    BudgetExceeded { layer: u32, cap: u64, at: u32 },
    /// Two vertices of one active set are adjacent, which contradicts the
    /// odd-girth promise.
    #[error("layer {layer}: vertices {vertex} and {neighbor} of group {group} are adjacent")]
    IntraGroupEdge {
        layer: u32,
        group: u32,
        vertex: u32,
        neighbor: u32,
    },
    #[error("layer {layer}: vertex {vertex} is not adjacent to base {base}")]
    NotAdjacentToBase { layer: u32, base: u32, vertex: u32 },
    #[error("layer {layer}: base {base} does not exist")]
    UnknownBase { layer: u32, base: u32 },
    #[error("layer {layer}: refusing to add an empty base")]
    EmptyBase { layer: u32 },
    #[error("layer {layer}: no inner base adjacent to vertex {vertex} after merge")]
    MergeRetryFailed { layer: u32, vertex: u32 },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl SubroutineError {
    /// Whether this failure is the graph breaking its odd-girth promise
    /// (as opposed to a caller bug).
    pub fn is_promise_violation(&self) -> bool {
        matches!(
            self,
            SubroutineError::BudgetExceeded { .. } | SubroutineError::IntraGroupEdge { .. }
        )
    }
}

/// Static configuration of one subroutine instance.
#[derive(Debug, Clone)]
pub struct SubroutineConfig {
    pub layer: u32,
    /// Base budget; enforcement rounds up since the bound is real-valued.
    pub r_star: f64,
    /// Promised even-diameter of incoming bases (recorded for audits; the
    /// subroutine itself never measures it).
    pub d_star: u64,
    /// First color of the block this instance may emit directly, exclusive:
    /// emitted colors are `palette_offset + 1 ..= palette_offset + palette_size`.
    pub palette_offset: Color,
    pub palette_size: Color,
}

/// A frozen base: the member set never changes after addition.
#[derive(Debug, Clone)]
pub struct Base {
    /// 1-based index in addition order within its layer.
    pub index: u32,
    pub members: BTreeSet<VertexId>,
}

/// Base bookkeeping common to terminals and reducers.
#[derive(Debug)]
struct BaseStore {
    cfg: SubroutineConfig,
    cap: u64,
    bases: Vec<Base>,
    /// Smallest base index containing each vertex (indices only grow, so
    /// first insertion wins).
    member_min_base: BTreeMap<VertexId, u32>,
}

impl BaseStore {
    fn new(cfg: SubroutineConfig) -> Self {
        let cap = ceil_guarded(cfg.r_star);
        BaseStore {
            cfg,
            cap,
            bases: Vec::new(),
            member_min_base: BTreeMap::new(),
        }
    }

    fn add(
        &mut self,
        members: BTreeSet<VertexId>,
        at: VertexId,
        trace: &mut AuditTrace,
    ) -> Result<u32, SubroutineError> {
        if members.is_empty() {
            return Err(SubroutineError::EmptyBase {
                layer: self.cfg.layer,
            });
        }
        if self.bases.len() as u64 >= self.cap {
            return Err(SubroutineError::BudgetExceeded {
                layer: self.cfg.layer,
                cap: self.cap,
                at: at.0,
            });
        }
        let index = self.bases.len() as u32 + 1;
        for &m in &members {
            self.member_min_base.entry(m).or_insert(index);
        }
        trace.push(AuditEvent::BaseAdded {
            layer: self.cfg.layer,
            at: at.0,
            index,
            members: members.iter().map(|v| v.0).collect(),
        });
        self.bases.push(Base { index, members });
        Ok(index)
    }

    /// Lowest-indexed base containing a neighbor of `v`, if any.
    fn adjacent_base(&self, v: VertexId, g: &OnlineGraph) -> Option<u32> {
        g.neighbors(v)
            .ok()?
            .iter()
            .filter_map(|u| self.member_min_base.get(u))
            .min()
            .copied()
    }

    fn check_query(&self, v: VertexId, base: u32, g: &OnlineGraph) -> Result<(), SubroutineError> {
        let layer = self.cfg.layer;
        let b = self
            .bases
            .get(base.checked_sub(1).map(|i| i as usize).unwrap_or(usize::MAX))
            .ok_or(SubroutineError::UnknownBase { layer, base })?;
        let adjacent = g.neighbors(v)?.iter().any(|u| b.members.contains(u));
        if adjacent {
            Ok(())
        } else {
            Err(SubroutineError::NotAdjacentToBase {
                layer,
                base,
                vertex: v.0,
            })
        }
    }
}

/// Terminal solver: colors each query with its base index.
#[derive(Debug)]
pub struct Terminal {
    store: BaseStore,
}

/// Reducer: delegates to an inner subroutine, group-colors the rest.
#[derive(Debug)]
pub struct Reducer {
    store: BaseStore,
    delta: f64,
    /// Active vertex set per base, parallel to `store.bases`.
    y_prime: Vec<BTreeSet<VertexId>>,
    member_group: BTreeMap<VertexId, u32>,
    /// Adjacency over 1-based base indices.
    h_plus: Vec<BTreeSet<u32>>,
    frozen: Vec<bool>,
    z_list: Vec<u32>,
    gc: GroupColoring,
    gc_group: BTreeMap<VertexId, u32>,
    inner: Box<Subroutine>,
}

#[derive(Debug)]
pub enum Subroutine {
    Reducer(Reducer),
    Terminal(Terminal),
}

impl Subroutine {
    pub fn terminal(cfg: SubroutineConfig) -> Self {
        debug_assert!(ceil_guarded(cfg.r_star) <= cfg.palette_size as u64);
        Subroutine::Terminal(Terminal {
            store: BaseStore::new(cfg),
        })
    }

    pub fn reducer(cfg: SubroutineConfig, delta: f64, inner: Subroutine) -> Self {
        Subroutine::Reducer(Reducer {
            store: BaseStore::new(cfg),
            delta,
            y_prime: Vec::new(),
            member_group: BTreeMap::new(),
            h_plus: Vec::new(),
            frozen: Vec::new(),
            z_list: Vec::new(),
            gc: GroupColoring::new(delta),
            gc_group: BTreeMap::new(),
            inner: Box::new(inner),
        })
    }

    fn store(&self) -> &BaseStore {
        match self {
            Subroutine::Reducer(r) => &r.store,
            Subroutine::Terminal(t) => &t.store,
        }
    }

    pub fn config(&self) -> &SubroutineConfig {
        &self.store().cfg
    }

    pub fn bases(&self) -> &[Base] {
        &self.store().bases
    }

    pub fn inner(&self) -> Option<&Subroutine> {
        match self {
            Subroutine::Reducer(r) => Some(&r.inner),
            Subroutine::Terminal(_) => None,
        }
    }

    /// Merge triggers so far (1-based base indices), in firing order.
    pub fn merge_triggers(&self) -> &[u32] {
        match self {
            Subroutine::Reducer(r) => &r.z_list,
            Subroutine::Terminal(_) => &[],
        }
    }

    pub fn active_set(&self, base: u32) -> Option<&BTreeSet<VertexId>> {
        match self {
            Subroutine::Reducer(r) => r.y_prime.get(base as usize - 1),
            Subroutine::Terminal(_) => None,
        }
    }

    /// Lowest-indexed base of this instance containing a neighbor of `v`.
    pub fn adjacent_base(&self, v: VertexId, g: &OnlineGraph) -> Option<u32> {
        self.store().adjacent_base(v, g)
    }

    /// Accepts a frozen base; the members' even-diameter is promised to be
    /// at most `d_star` in the current graph. Returns its 1-based index.
    pub fn add_base(
        &mut self,
        members: BTreeSet<VertexId>,
        at: VertexId,
        trace: &mut AuditTrace,
    ) -> Result<u32, SubroutineError> {
        match self {
            Subroutine::Terminal(t) => t.store.add(members, at, trace),
            Subroutine::Reducer(r) => {
                let index = r.store.add(members, at, trace)?;
                r.y_prime.push(BTreeSet::new());
                r.h_plus.push(BTreeSet::new());
                r.frozen.push(false);
                Ok(index)
            }
        }
    }

    /// Colors `v`, which must be adjacent to base `base` of this instance.
    pub fn color_query(
        &mut self,
        v: VertexId,
        base: u32,
        g: &OnlineGraph,
        trace: &mut AuditTrace,
    ) -> Result<Color, SubroutineError> {
        match self {
            Subroutine::Terminal(t) => t.color_query(v, base, g, trace),
            Subroutine::Reducer(r) => r.color_query(v, base, g, trace),
        }
    }
}

impl Terminal {
    fn color_query(
        &mut self,
        v: VertexId,
        base: u32,
        g: &OnlineGraph,
        trace: &mut AuditTrace,
    ) -> Result<Color, SubroutineError> {
        self.store.check_query(v, base, g)?;
        debug_assert!(base <= self.store.cfg.palette_size);
        let color = self.store.cfg.palette_offset + base;
        trace.push(AuditEvent::TerminalAssign {
            layer: self.store.cfg.layer,
            vertex: v.0,
            base,
            color,
        });
        Ok(color)
    }
}

impl Reducer {
    fn layer(&self) -> u32 {
        self.store.cfg.layer
    }

    fn color_query(
        &mut self,
        v: VertexId,
        base: u32,
        g: &OnlineGraph,
        trace: &mut AuditTrace,
    ) -> Result<Color, SubroutineError> {
        self.store.check_query(v, base, g)?;
        let layer = self.layer();

        // Step 1: if v already touches an inner base, hand it down.
        if let Some(b) = self.inner.adjacent_base(v, g) {
            trace.push(AuditEvent::GroupQuery {
                layer,
                vertex: v.0,
                group: base,
                step: QueryStep::Inner,
            });
            return self.inner.color_query(v, b, g, trace);
        }

        // Frozen groups are covered by an inner base, so step 1 took them.
        debug_assert!(!self.frozen[base as usize - 1]);

        // Step 2: absorb v into the active set and extend H+.
        let gi = base as usize - 1;
        for &u in g.neighbors(v)? {
            if self.member_group.get(&u) == Some(&base) {
                return Err(SubroutineError::IntraGroupEdge {
                    layer,
                    group: base,
                    vertex: v.0,
                    neighbor: u.0,
                });
            }
        }
        self.y_prime[gi].insert(v);
        self.member_group.insert(v, base);
        for &u in g.neighbors(v)? {
            if let Some(&j) = self.member_group.get(&u) {
                if j != base {
                    self.h_plus[gi].insert(j);
                    self.h_plus[j as usize - 1].insert(base);
                }
            }
        }

        if self.h_plus[gi].len() as f64 <= self.delta {
            // Step 2-a: group-color v. Adjacent groups are derived from
            // neighbors that were themselves group-colored here.
            let adjacent: BTreeSet<GroupId> = g
                .neighbors(v)?
                .iter()
                .filter_map(|u| self.gc_group.get(u).map(|&j| GroupId(j)))
                .collect();
            trace.push(AuditEvent::GroupQuery {
                layer,
                vertex: v.0,
                group: base,
                step: QueryStep::GroupColoring,
            });
            let local = self.gc.color_vertex(GroupId(base), &adjacent)?;
            debug_assert!(local <= self.store.cfg.palette_size);
            let color = self.store.cfg.palette_offset + local;
            self.gc_group.insert(v, base);
            trace.push(AuditEvent::GcAssign {
                layer,
                vertex: v.0,
                group: base,
                color,
            });
            Ok(color)
        } else {
            // Step 2-b: merge the radius-0/1/2 balls around `base` in the
            // updated H+ into inner bases, then recolor via the inner.
            trace.push(AuditEvent::GroupQuery {
                layer,
                vertex: v.0,
                group: base,
                step: QueryStep::Merge,
            });
            let d0: Vec<u32> = vec![base];
            let d1: Vec<u32> = self.h_plus[gi].iter().copied().collect();
            let mut d2: BTreeSet<u32> = BTreeSet::new();
            for &j in &d1 {
                for &w in &self.h_plus[j as usize - 1] {
                    if w != base && !self.h_plus[gi].contains(&w) {
                        d2.insert(w);
                    }
                }
            }
            let d2: Vec<u32> = d2.into_iter().collect();

            let mut created = Vec::new();
            for ball in [&d0, &d1, &d2] {
                let mut x_union = BTreeSet::new();
                let mut y_union = BTreeSet::new();
                for &j in ball.iter() {
                    x_union.extend(self.store.bases[j as usize - 1].members.iter().copied());
                    y_union.extend(self.y_prime[j as usize - 1].iter().copied());
                }
                // Empty unions are skipped (they still count toward the
                // six-per-merge ceiling the audit checks).
                if !x_union.is_empty() {
                    created.push(self.inner.add_base(x_union, v, trace)?);
                }
                if !y_union.is_empty() {
                    created.push(self.inner.add_base(y_union, v, trace)?);
                }
            }
            for &j in d0.iter().chain(&d1).chain(&d2) {
                self.frozen[j as usize - 1] = true;
            }
            self.z_list.push(base);
            trace.push(AuditEvent::Merge {
                layer,
                at: v.0,
                z: base,
                d0,
                d1,
                d2,
                bases_created: created,
            });

            // v is adjacent to base's members, all inside the first X-union.
            let b = self
                .inner
                .adjacent_base(v, g)
                .ok_or(SubroutineError::MergeRetryFailed { layer, vertex: v.0 })?;
            self.inner.color_query(v, b, g, trace)
        }
    }
}
