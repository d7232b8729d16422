//! Online colorers and their budget formulas.
//!
//! All colorers share one contract: they never emit an improper coloring.
//! Every assigned color passes a final check against the already-colored
//! neighbors before it is committed; if the check fails (possible only when
//! the input graph breaks the odd-girth assumption the algorithm runs
//! under), the run stops with a promise-violation diagnostic instead.
//!
//! The layered colorer with `k` layers targets graphs of odd girth at least
//! `odd_girth_requirement(k)` and guarantees at most `color_budget(k, n)`
//! colors on them. Its palette is split into fixed disjoint blocks:
//!
//! ```text
//! [ 1 ..= c ]                 First-Fit front block, c = ceil(n^{2/(k+4)})
//! [ k blocks of floor(delta^2)+2 ]  group coloring of reducer layers 0..k-1
//! [ final block of c ]        terminal solver, one color per base
//! ```
//!
//! `k = 0` is the two-phase square-root algorithm (no reducers at all); the
//! `kierstead` entry point is that special case under its usual name.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{ArrivalEvent, Color, Coloring, GraphError, InstanceStream, OnlineGraph, VertexId};
use crate::subroutine::{Subroutine, SubroutineConfig, SubroutineError};
use crate::trace::{AuditEvent, AuditTrace};
use crate::util::{ceil_guarded, frac_pow};

// ============================ budget formulas ============================

/// Even-diameter cap for layer-`ell` bases: `a_0 = 2`, `a_l = 5 a_{l-1} + 14`.
pub fn diameter_cap(ell: u32) -> u64 {
    let mut a = 2u64;
    for _ in 0..ell {
        a = 5 * a + 14;
    }
    a
}

/// Smallest odd girth the k-layer colorer is guaranteed on.
pub fn odd_girth_requirement(k: u32) -> u64 {
    diameter_cap(k) + 5
}

/// Color guarantee of the k-layer colorer on n vertices.
pub fn color_budget(k: u32, n: u64) -> u64 {
    let c = ceil_guarded(frac_pow(n, 2, k + 4));
    2 * c + k as u64 * (36 * c + 2)
}

/// Base budget of the layer-`ell` subroutine: `n^{(k+2-ell)/(k+4)}`.
pub fn base_budget(k: u32, n: u64, ell: u32) -> f64 {
    assert!(ell <= k);
    frac_pow(n, k + 2 - ell, k + 4)
}

/// First-Fit guarantee on graphs of girth at least `2*girth_k + 1`.
pub fn first_fit_girth_bound(girth_k: u32, n: u64) -> u64 {
    assert!(girth_k >= 1);
    girth_k as u64 * ceil_guarded(frac_pow(n, 1, girth_k))
}

// ============================== run results ==============================

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgorithmKind {
    FirstFit,
    Kierstead,
    Layered,
}

impl AlgorithmKind {
    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::FirstFit => "first-fit",
            AlgorithmKind::Kierstead => "kierstead",
            AlgorithmKind::Layered => "layered",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "first-fit" => Some(AlgorithmKind::FirstFit),
            "kierstead" => Some(AlgorithmKind::Kierstead),
            "layered" => Some(AlgorithmKind::Layered),
            _ => None,
        }
    }
}

/// Diagnostic attached to a run that hit evidence of a broken odd-girth
/// assumption. `conflicting_neighbor` is set when the evidence is a
/// would-be monochromatic edge; structural evidence (an exhausted base
/// budget) has no single conflicting neighbor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromiseViolation {
    pub vertex: u32,
    pub conflicting_neighbor: Option<u32>,
    #[serde(skip)]
    pub detail: String,
}

impl PromiseViolation {
    fn from_subroutine(e: &SubroutineError) -> Self {
        let (vertex, conflicting_neighbor) = match *e {
            SubroutineError::BudgetExceeded { at, .. } => (at, None),
            SubroutineError::IntraGroupEdge {
                vertex, neighbor, ..
            } => (vertex, Some(neighbor)),
            _ => unreachable!("only promise violations are converted"),
        };
        PromiseViolation {
            vertex,
            conflicting_neighbor,
            detail: e.to_string(),
        }
    }
}

/// Outcome of one colorer run. The assignment covers vertices in arrival
/// order; on a promise violation it is the strict prefix colored before the
/// offending vertex, and the two outcomes never mix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunResult {
    pub algorithm: String,
    pub k: Option<u32>,
    pub n: u64,
    pub colors_used: u64,
    pub max_color: Color,
    pub assignment: Vec<Color>,
    pub promise_violation: Option<PromiseViolation>,
    #[serde(skip)]
    pub trace: AuditTrace,
}

impl RunResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("run results serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn coloring(&self) -> Coloring {
        Coloring::from_vec(self.assignment.clone())
    }
}

#[derive(Debug, Error)]
pub enum ColorerError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    /// A subroutine failure that is not a promise violation: a caller-side
    /// bug, surfaced instead of being masked as a diagnostic.
    #[error("internal subroutine failure: {0}")]
    Internal(SubroutineError),
}

// ============================ layered engine =============================

/// Derived parameters of a layered run; also used by audits and the CLI.
#[derive(Debug, Clone)]
pub struct LayeredSetup {
    pub k: u32,
    pub n: u64,
    /// First-Fit block width and terminal block width.
    pub c: u64,
    /// Group-graph degree cap of every reducer.
    pub delta: f64,
    /// Width of each reducer's group-coloring block.
    pub gc_block: u64,
    pub terminal_offset: u64,
    pub palette_total: u64,
}

impl LayeredSetup {
    pub fn new(k: u32, n: u64) -> Self {
        let c = ceil_guarded(frac_pow(n, 2, k + 4));
        let delta = 6.0 * frac_pow(n, 1, k + 4);
        let gc_block = (delta * delta).floor() as u64 + 2;
        let terminal_offset = c + k as u64 * gc_block;
        let palette_total = terminal_offset + c;
        debug_assert!(palette_total <= u32::MAX as u64);
        debug_assert!(palette_total <= color_budget(k, n).max(2));
        LayeredSetup {
            k,
            n,
            c,
            delta,
            gc_block,
            terminal_offset,
            palette_total,
        }
    }

    fn build_chain(&self) -> Subroutine {
        let mut sub = Subroutine::terminal(SubroutineConfig {
            layer: self.k,
            r_star: base_budget(self.k, self.n, self.k),
            d_star: diameter_cap(self.k),
            palette_offset: self.terminal_offset as Color,
            palette_size: self.c as Color,
        });
        for layer in (0..self.k).rev() {
            sub = Subroutine::reducer(
                SubroutineConfig {
                    layer,
                    r_star: base_budget(self.k, self.n, layer),
                    d_star: diameter_cap(layer),
                    palette_offset: (self.c + layer as u64 * self.gc_block) as Color,
                    palette_size: self.gc_block as Color,
                },
                self.delta,
                sub,
            );
        }
        sub
    }
}

enum StepOutcome {
    Colored(Color),
    Violation(PromiseViolation),
}

/// One in-flight layered run, stepped an arrival at a time.
struct LayeredRun {
    setup: LayeredSetup,
    graph: OnlineGraph,
    assignment: Coloring,
    distinct: BTreeSet<Color>,
    chain: Subroutine,
    trace: AuditTrace,
}

impl LayeredRun {
    fn new(k: u32, n: u64) -> Self {
        let setup = LayeredSetup::new(k, n);
        let chain = setup.build_chain();
        LayeredRun {
            setup,
            graph: OnlineGraph::new(),
            assignment: Coloring::new(),
            distinct: BTreeSet::new(),
            chain,
            trace: AuditTrace::new(),
        }
    }

    fn step(&mut self, ev: &ArrivalEvent) -> Result<StepOutcome, ColorerError> {
        self.graph.reveal(ev)?;
        let v = ev.vertex;
        let neighbor_colors: BTreeSet<Color> = ev
            .back_edges
            .iter()
            .filter_map(|&u| self.assignment.get(u))
            .collect();

        let mut chosen = None;
        for cand in 1..=(self.setup.c as Color) {
            if !neighbor_colors.contains(&cand) {
                self.trace.push(AuditEvent::FfAssign {
                    layer: 0,
                    vertex: v.0,
                    color: cand,
                });
                chosen = Some(cand);
                break;
            }
        }
        let chosen = match chosen {
            Some(c) => c,
            None => {
                // Front block exhausted: route through the subroutine chain,
                // creating a base from v's neighborhood if none is adjacent.
                let query = match self.chain.adjacent_base(v, &self.graph) {
                    Some(b) => self.chain.color_query(v, b, &self.graph, &mut self.trace),
                    None => {
                        let members = self.graph.neighbors(v)?.clone();
                        self.chain
                            .add_base(members, v, &mut self.trace)
                            .and_then(|b| self.chain.color_query(v, b, &self.graph, &mut self.trace))
                    }
                };
                match query {
                    Ok(c) => c,
                    Err(e) if e.is_promise_violation() => {
                        return Ok(StepOutcome::Violation(PromiseViolation::from_subroutine(&e)))
                    }
                    Err(e) => return Err(ColorerError::Internal(e)),
                }
            }
        };

        // Final check: a committed color never repeats on an edge.
        for &u in &ev.back_edges {
            if self.assignment.get(u) == Some(chosen) {
                return Ok(StepOutcome::Violation(PromiseViolation {
                    vertex: v.0,
                    conflicting_neighbor: Some(u.0),
                    detail: format!(
                        "vertex {} would repeat color {} of its neighbor {}",
                        v.0, chosen, u.0
                    ),
                }));
            }
        }
        self.assignment.push(chosen);
        self.distinct.insert(chosen);
        Ok(StepOutcome::Colored(chosen))
    }

    fn finish(self, name: &str, k: u32, n: u64, violation: Option<PromiseViolation>) -> RunResult {
        RunResult {
            algorithm: name.to_string(),
            k: Some(k),
            n,
            colors_used: self.distinct.len() as u64,
            max_color: self.assignment.max_color(),
            assignment: self.assignment.as_slice().to_vec(),
            promise_violation: violation,
            trace: self.trace,
        }
    }
}

fn run_layered(stream: &InstanceStream, k: u32, name: &str) -> Result<RunResult, ColorerError> {
    let n = stream.n() as u64;
    let mut run = LayeredRun::new(k, n);
    let mut violation = None;
    for ev in stream.events() {
        match run.step(ev)? {
            StepOutcome::Colored(_) => {}
            StepOutcome::Violation(pv) => {
                violation = Some(pv);
                break;
            }
        }
    }
    Ok(run.finish(name, k, n, violation))
}

// ============================ public colorers ============================

/// Plain First-Fit: the smallest color absent from the colored neighborhood.
pub fn first_fit(stream: &InstanceStream) -> Result<RunResult, ColorerError> {
    let mut graph = OnlineGraph::new();
    let mut assignment = Coloring::new();
    let mut distinct = BTreeSet::new();
    let mut trace = AuditTrace::new();
    for ev in stream.events() {
        graph.reveal(ev)?;
        let taken: BTreeSet<Color> = ev
            .back_edges
            .iter()
            .filter_map(|&u| assignment.get(u))
            .collect();
        let mut color = 1;
        while taken.contains(&color) {
            color += 1;
        }
        trace.push(AuditEvent::FfAssign {
            layer: 0,
            vertex: ev.vertex.0,
            color,
        });
        assignment.push(color);
        distinct.insert(color);
    }
    Ok(RunResult {
        algorithm: AlgorithmKind::FirstFit.name().to_string(),
        k: None,
        n: stream.n() as u64,
        colors_used: distinct.len() as u64,
        max_color: assignment.max_color(),
        assignment: assignment.as_slice().to_vec(),
        promise_violation: None,
        trace,
    })
}

/// Two-phase square-root algorithm: First-Fit on `ceil(sqrt n)` colors plus
/// a terminal block of the same width. Identical to `layered(stream, 0)`.
pub fn kierstead(stream: &InstanceStream) -> Result<RunResult, ColorerError> {
    run_layered(stream, 0, AlgorithmKind::Kierstead.name())
}

/// The k-layer colorer; `k = 0` coincides with `kierstead`.
pub fn layered(stream: &InstanceStream, k: u32) -> Result<RunResult, ColorerError> {
    run_layered(stream, k, AlgorithmKind::Layered.name())
}

// =========================== unknown-n wrapper ===========================

pub const DEFAULT_INITIAL_GUESS: u64 = 4;

/// A run made without knowing n, plus what the guessing cost.
#[derive(Debug)]
pub struct UnknownNOutcome {
    pub result: RunResult,
    /// Guess sizes actually started, in order; doubles each restart.
    pub guesses: Vec<u64>,
}

impl UnknownNOutcome {
    pub fn restarts(&self) -> u32 {
        self.guesses.len() as u32 - 1
    }

    /// Sum of the per-guess color guarantees; the wrapper's overall bound.
    pub fn budget(&self, kind: AlgorithmKind, k: u32) -> u64 {
        self.guesses
            .iter()
            .map(|&g| match kind {
                AlgorithmKind::FirstFit => g,
                AlgorithmKind::Kierstead => color_budget(0, g),
                AlgorithmKind::Layered => color_budget(k, g),
            })
            .sum()
    }
}

enum EpochEngine {
    Layered(LayeredRun),
    FirstFit {
        graph: OnlineGraph,
        assignment: Coloring,
    },
}

impl EpochEngine {
    fn new(kind: AlgorithmKind, k: u32, guess: u64) -> Self {
        match kind {
            AlgorithmKind::FirstFit => EpochEngine::FirstFit {
                graph: OnlineGraph::new(),
                assignment: Coloring::new(),
            },
            AlgorithmKind::Kierstead => EpochEngine::Layered(LayeredRun::new(0, guess)),
            AlgorithmKind::Layered => EpochEngine::Layered(LayeredRun::new(k, guess)),
        }
    }

    /// Width of the color block this epoch may use.
    fn block(&self, guess: u64) -> u64 {
        match self {
            EpochEngine::Layered(run) => run.setup.palette_total,
            EpochEngine::FirstFit { .. } => guess,
        }
    }

    fn step(&mut self, ev: &ArrivalEvent) -> Result<StepOutcome, ColorerError> {
        match self {
            EpochEngine::Layered(run) => run.step(ev),
            EpochEngine::FirstFit { graph, assignment } => {
                graph.reveal(ev)?;
                let taken: BTreeSet<Color> = ev
                    .back_edges
                    .iter()
                    .filter_map(|&u| assignment.get(u))
                    .collect();
                let mut color = 1;
                while taken.contains(&color) {
                    color += 1;
                }
                assignment.push(color);
                Ok(StepOutcome::Colored(color))
            }
        }
    }
}

/// Runs a colorer without reading n from the stream. The vertex count is
/// guessed, starting at `initial_guess` and doubling on overflow. Each guess
/// gets a fresh engine and a fresh color block disjoint from all earlier
/// ones, so vertices colored under earlier guesses can never conflict with
/// later ones; the final check still inspects every colored neighbor.
///
/// Restarts drop the old engine entirely: a new epoch sees only edges among
/// its own vertices. Colors stay proper because the epoch-local engine
/// handles local edges and the disjoint blocks handle cross-epoch edges.
pub fn unknown_n(
    kind: AlgorithmKind,
    k: u32,
    events: &[ArrivalEvent],
    initial_guess: u64,
) -> Result<UnknownNOutcome, ColorerError> {
    assert!(initial_guess >= 1);
    let k = match kind {
        AlgorithmKind::FirstFit => 0,
        AlgorithmKind::Kierstead => 0,
        AlgorithmKind::Layered => k,
    };

    let mut guesses = vec![initial_guess];
    let mut guess = initial_guess;
    let mut epoch_start = 0usize;
    let mut offset = 0u64;
    let mut engine = EpochEngine::new(kind, k, guess);

    let mut assignment = Coloring::new();
    let mut distinct = BTreeSet::new();
    let mut violation = None;

    'arrivals: for (i, ev) in events.iter().enumerate() {
        if i - epoch_start == guess as usize {
            offset += engine.block(guess);
            guess *= 2;
            epoch_start = i;
            engine = EpochEngine::new(kind, k, guess);
            guesses.push(guess);
        }
        let local = ArrivalEvent {
            vertex: VertexId((i - epoch_start) as u32),
            back_edges: ev
                .back_edges
                .iter()
                .filter(|u| u.index() >= epoch_start)
                .map(|u| VertexId((u.index() - epoch_start) as u32))
                .collect(),
        };
        match engine.step(&local)? {
            StepOutcome::Colored(local_color) => {
                let color = offset as Color + local_color;
                for &u in &ev.back_edges {
                    if assignment.get(u) == Some(color) {
                        violation = Some(PromiseViolation {
                            vertex: ev.vertex.0,
                            conflicting_neighbor: Some(u.0),
                            detail: format!(
                                "vertex {} would repeat color {} of its neighbor {}",
                                ev.vertex.0, color, u.0
                            ),
                        });
                        break 'arrivals;
                    }
                }
                assignment.push(color);
                distinct.insert(color);
            }
            StepOutcome::Violation(local_pv) => {
                let shift = |x: u32| x + epoch_start as u32;
                violation = Some(PromiseViolation {
                    vertex: shift(local_pv.vertex),
                    conflicting_neighbor: local_pv.conflicting_neighbor.map(shift),
                    detail: local_pv.detail,
                });
                break 'arrivals;
            }
        }
    }

    let result = RunResult {
        algorithm: format!("unknown-n:{}", kind.name()),
        k: match kind {
            AlgorithmKind::FirstFit => None,
            _ => Some(k),
        },
        n: events.len() as u64,
        colors_used: distinct.len() as u64,
        max_color: assignment.max_color(),
        assignment: assignment.as_slice().to_vec(),
        promise_violation: violation,
        trace: AuditTrace::new(),
    };
    Ok(UnknownNOutcome { result, guesses })
}
