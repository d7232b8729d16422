//! Independent verification of colorings, bounds, and audit traces.
//!
//! Everything here re-derives its facts from the instance stream and the
//! trace alone; nothing trusts the colorer's internal state. A trace audit
//! replays the claimed structural events and confirms the invariants the
//! color guarantee rests on: base budgets, merge fanout, merge-trigger
//! spacing, frozen groups staying frozen, and base even-diameters.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::colorers::{color_budget, first_fit_girth_bound, LayeredSetup, RunResult};
use crate::graph::{Color, Coloring, GraphError, InstanceStream, OnlineGraph, VertexId};
use crate::parity::{self, ParityDistance};
use crate::trace::{AuditEvent, AuditTrace, QueryStep};
use crate::util::ceil_guarded;

// ============================ proper colorings ===========================

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProperError {
    #[error("coloring covers {got} of {expected} vertices")]
    Incomplete { expected: usize, got: usize },
    #[error("vertices {v} and {u} are adjacent and share color {color}")]
    Conflict { v: u32, u: u32, color: Color },
    #[error("vertex {v} carries color 0; colors start at 1")]
    ZeroColor { v: u32 },
}

/// Checks a complete coloring of the stream.
pub fn verify_proper(stream: &InstanceStream, coloring: &Coloring) -> Result<(), ProperError> {
    if coloring.len() != stream.n() {
        return Err(ProperError::Incomplete {
            expected: stream.n(),
            got: coloring.len(),
        });
    }
    verify_proper_prefix(stream, coloring)
}

/// Checks properness of however much of the stream the coloring covers.
/// Used for runs that stopped early on a promise violation.
pub fn verify_proper_prefix(
    stream: &InstanceStream,
    coloring: &Coloring,
) -> Result<(), ProperError> {
    for ev in stream.events().iter().take(coloring.len()) {
        let cv = coloring.get(ev.vertex).expect("prefix is covered");
        if cv == 0 {
            return Err(ProperError::ZeroColor { v: ev.vertex.0 });
        }
        for &u in &ev.back_edges {
            if coloring.get(u) == Some(cv) {
                return Err(ProperError::Conflict {
                    v: ev.vertex.0,
                    u: u.0,
                    color: cv,
                });
            }
        }
    }
    Ok(())
}

// ============================= color bounds ==============================

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("run reported a promise violation at vertex {vertex}; no bound applies")]
    ViolatedRun { vertex: u32 },
    #[error("{algorithm} used {colors} colors, above its guarantee of {budget}")]
    OverBudget {
        algorithm: String,
        colors: u64,
        budget: u64,
    },
    #[error("a first-fit bound needs an odd-girth promise of at least 5, got {0}")]
    PromiseTooSmall(u32),
}

/// Checks the run's color count against the guarantee for its algorithm.
/// Returns the bound that was enforced, or None when no bound applies
/// (plain first-fit without a girth promise, or the unknown-size wrapper).
pub fn verify_bounds(run: &RunResult, girth_promise: Option<u32>) -> Result<Option<u64>, BoundsError> {
    if let Some(pv) = &run.promise_violation {
        return Err(BoundsError::ViolatedRun { vertex: pv.vertex });
    }
    let budget = match run.algorithm.as_str() {
        "kierstead" => Some(color_budget(0, run.n)),
        "layered" => Some(color_budget(run.k.unwrap_or(0), run.n)),
        "first-fit" => match girth_promise {
            Some(g) if g >= 5 => Some(first_fit_girth_bound((g - 1) / 2, run.n)),
            Some(g) => return Err(BoundsError::PromiseTooSmall(g)),
            None => None,
        },
        _ => None,
    };
    if let Some(b) = budget {
        if run.colors_used > b {
            return Err(BoundsError::OverBudget {
                algorithm: run.algorithm.clone(),
                colors: run.colors_used,
                budget: b,
            });
        }
    }
    Ok(budget)
}

// ============================== trace audits =============================

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    /// Structural checks only.
    Basic,
    /// Structural checks plus base even-diameter measurement.
    Full,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct AuditReport {
    pub checks: Vec<CheckResult>,
}

impl AuditReport {
    fn push(&mut self, name: &'static str, passed: bool, witness: Option<String>) {
        self.checks.push(CheckResult {
            name,
            passed,
            witness,
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// What the audited run promised; drives which invariants are enforced.
#[derive(Debug, Clone)]
pub struct AuditConfig {
    pub n: usize,
    pub k: u32,
    /// Front-block width; 0 disables palette-layout checks.
    pub c: u64,
    pub delta: f64,
    pub gc_block: u64,
    pub terminal_offset: u64,
    /// Base budget per layer 0..=k.
    pub layer_caps: Vec<f64>,
    /// Even-diameter cap per layer 0..=k.
    pub diameter_caps: Vec<u64>,
    pub check_layer0_facts: bool,
    /// How many vertices were colored. None means all of them; Some(m)
    /// marks a run that stopped at vertex m with a promise violation, whose
    /// trailing events for vertex m are tolerated.
    pub expected_colored: Option<usize>,
}

impl AuditConfig {
    pub fn for_layered(k: u32, n: usize) -> Self {
        let setup = LayeredSetup::new(k, n as u64);
        AuditConfig {
            n,
            k,
            c: setup.c,
            delta: setup.delta,
            gc_block: setup.gc_block,
            terminal_offset: setup.terminal_offset,
            layer_caps: (0..=k)
                .map(|ell| crate::colorers::base_budget(k, n as u64, ell))
                .collect(),
            diameter_caps: (0..=k).map(crate::colorers::diameter_cap).collect(),
            check_layer0_facts: true,
            expected_colored: None,
        }
    }

    pub fn for_first_fit(n: usize) -> Self {
        AuditConfig {
            n,
            k: 0,
            c: 0,
            delta: 0.0,
            gc_block: 0,
            terminal_offset: 0,
            layer_caps: Vec::new(),
            diameter_caps: Vec::new(),
            check_layer0_facts: false,
            expected_colored: None,
        }
    }

    pub fn expecting(mut self, colored: usize) -> Self {
        self.expected_colored = Some(colored);
        self
    }
}

/// Largest instance the Full-level diameter measurement runs on.
pub const DIAMETER_AUDIT_MAX_N: usize = 300;

/// Replays a trace against its instance and checks every invariant the
/// audit trail exposes. Failed checks carry a witness string; the report
/// lists one entry per check whether it ran clean or not.
pub fn verify_audit(
    stream: &InstanceStream,
    trace: &AuditTrace,
    cfg: &AuditConfig,
    level: Level,
) -> Result<AuditReport, GraphError> {
    let n = stream.n();
    let final_graph = OnlineGraph::replay(stream)?;
    let events = trace.events();
    let mut report = AuditReport::default();

    check_trace_vertices(events, n, cfg.k, &mut report);
    check_assign_coverage(events, cfg, n, &mut report);
    if cfg.c > 0 {
        check_palette_blocks(events, cfg, &mut report);
    }
    check_base_budget(events, cfg, &mut report);
    check_base_provenance(events, cfg, &mut report);
    check_merge_fanout(events, &mut report);
    check_z_budget(events, cfg, &mut report);
    check_frozen_groups(events, &mut report);
    if cfg.check_layer0_facts {
        check_layer0_facts(events, cfg, &mut report);
    }
    check_z_spacing(events, &final_graph, &mut report);
    if level == Level::Full {
        check_even_diameter(events, stream, cfg, &mut report)?;
    }
    Ok(report)
}

fn check_trace_vertices(events: &[AuditEvent], n: usize, k: u32, report: &mut AuditReport) {
    let mut witness = None;
    for (i, e) in events.iter().enumerate() {
        let (layer, vertices): (u32, Vec<u32>) = match e {
            AuditEvent::BaseAdded {
                layer, at, members, ..
            } => (*layer, members.iter().copied().chain([*at]).collect()),
            AuditEvent::GroupQuery { layer, vertex, .. } => (*layer, vec![*vertex]),
            AuditEvent::Merge { layer, at, .. } => (*layer, vec![*at]),
            AuditEvent::GcAssign { layer, vertex, .. } => (*layer, vec![*vertex]),
            AuditEvent::FfAssign { layer, vertex, .. } => (*layer, vec![*vertex]),
            AuditEvent::TerminalAssign { layer, vertex, .. } => (*layer, vec![*vertex]),
        };
        if layer > k {
            witness = Some(format!("event {i} names layer {layer}, beyond {k}"));
            break;
        }
        if let Some(&v) = vertices.iter().find(|&&v| v as usize >= n) {
            witness = Some(format!("event {i} names vertex {v}, instance has {n}"));
            break;
        }
        if let Some((_, color)) = e.assignment() {
            if color == 0 {
                witness = Some(format!("event {i} assigns color 0"));
                break;
            }
        }
    }
    report.push("trace-vertices", witness.is_none(), witness);
}

fn check_assign_coverage(
    events: &[AuditEvent],
    cfg: &AuditConfig,
    n: usize,
    report: &mut AuditReport,
) {
    let expected = cfg.expected_colored.unwrap_or(n);
    let mut witness = None;
    let mut next = 0usize;
    let mut violator_logged = false;
    for e in events {
        if let Some((v, _)) = e.assignment() {
            let v = v as usize;
            if v == next && v < expected {
                next += 1;
            } else if v == expected && cfg.expected_colored.is_some() && !violator_logged {
                // The violating vertex may log an assignment the final
                // check then rejects; tolerated, but only once.
                violator_logged = true;
            } else {
                witness = Some(format!(
                    "assignment for vertex {v} out of place; expected vertex {next}"
                ));
                break;
            }
        }
    }
    if witness.is_none() && next < expected {
        witness = Some(format!("vertices {next}..{expected} never assigned"));
    }
    report.push("assign-coverage", witness.is_none(), witness);
}

fn check_palette_blocks(events: &[AuditEvent], cfg: &AuditConfig, report: &mut AuditReport) {
    let mut witness = None;
    for e in events {
        let bad = match *e {
            AuditEvent::FfAssign { color, .. } => {
                (color as u64 > cfg.c).then(|| format!("front-block color {color} above {}", cfg.c))
            }
            AuditEvent::GcAssign { layer, color, .. } => {
                let lo = cfg.c + layer as u64 * cfg.gc_block;
                let hi = lo + cfg.gc_block;
                (!((lo + 1)..=hi).contains(&(color as u64)))
                    .then(|| format!("group color {color} outside block {}..={hi} of layer {layer}", lo + 1))
            }
            AuditEvent::TerminalAssign { base, color, .. } => {
                if base as u64 > cfg.c {
                    Some(format!("terminal base {base} above the {}-base budget", cfg.c))
                } else if color as u64 != cfg.terminal_offset + base as u64 {
                    Some(format!("terminal color {color} is not offset plus base {base}"))
                } else {
                    None
                }
            }
            _ => None,
        };
        if bad.is_some() {
            witness = bad;
            break;
        }
    }
    report.push("palette-blocks", witness.is_none(), witness);
}

fn check_base_budget(events: &[AuditEvent], cfg: &AuditConfig, report: &mut AuditReport) {
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    for e in events {
        if let AuditEvent::BaseAdded { layer, .. } = e {
            *counts.entry(*layer).or_insert(0) += 1;
        }
    }
    let mut witness = None;
    for (&layer, &count) in &counts {
        match cfg.layer_caps.get(layer as usize) {
            Some(&cap) if count <= ceil_guarded(cap) => {}
            Some(&cap) => {
                witness = Some(format!(
                    "layer {layer} holds {count} bases, budget is {}",
                    ceil_guarded(cap)
                ));
                break;
            }
            None => {
                witness = Some(format!("layer {layer} holds bases but has no budget"));
                break;
            }
        }
    }
    report.push("base-budget", witness.is_none(), witness);
}

/// Bases at layer 0 come only from the front end; bases at deeper layers
/// come only from a merge one layer up, and the merge summary must list
/// exactly the bases added inside its window.
fn check_base_provenance(events: &[AuditEvent], cfg: &AuditConfig, report: &mut AuditReport) {
    let mut witness = None;
    let mut open: Option<(u32, Vec<u32>)> = None;
    for e in events {
        match e {
            AuditEvent::GroupQuery {
                layer,
                step: QueryStep::Merge,
                vertex,
                ..
            } => {
                if open.is_some() {
                    witness = Some(format!("merge at vertex {vertex} opened inside another merge"));
                    break;
                }
                open = Some((*layer, Vec::new()));
            }
            AuditEvent::BaseAdded { layer, index, .. } => match open.as_mut() {
                None if *layer == 0 => {}
                Some((ml, collected)) if *layer == *ml + 1 => collected.push(*index),
                _ => {
                    witness = Some(format!("base {index} at layer {layer} added without a merge"));
                    break;
                }
            },
            AuditEvent::Merge {
                layer,
                bases_created,
                at,
                ..
            } => match open.take() {
                Some((ml, collected)) if ml == *layer && &collected == bases_created => {}
                _ => {
                    witness = Some(format!(
                        "merge summary at vertex {at} does not match the bases added in its window"
                    ));
                    break;
                }
            },
            _ => {}
        }
    }
    if witness.is_none() {
        if let Some((layer, _)) = open {
            // A run that died mid-merge leaves the window open, which the
            // violation diagnostic accounts for; a clean run never does.
            if cfg.expected_colored.is_none() {
                witness = Some(format!("merge window at layer {layer} never closed"));
            }
        }
    }
    report.push("base-provenance", witness.is_none(), witness);
}

fn check_merge_fanout(events: &[AuditEvent], report: &mut AuditReport) {
    let mut witness = None;
    for e in events {
        if let AuditEvent::Merge {
            at,
            z,
            d0,
            bases_created,
            ..
        } = e
        {
            if d0.as_slice() != [*z] {
                witness = Some(format!("merge at vertex {at} has a radius-0 ball not equal to its trigger"));
                break;
            }
            if bases_created.is_empty() || bases_created.len() > 6 {
                witness = Some(format!(
                    "merge at vertex {at} created {} bases; 1..=6 allowed",
                    bases_created.len()
                ));
                break;
            }
        }
    }
    report.push("merge-fanout", witness.is_none(), witness);
}

fn check_z_budget(events: &[AuditEvent], cfg: &AuditConfig, report: &mut AuditReport) {
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    for e in events {
        if let AuditEvent::Merge { layer, .. } = e {
            *counts.entry(*layer).or_insert(0) += 1;
        }
    }
    let mut witness = None;
    for (&layer, &count) in &counts {
        let cap = cfg
            .layer_caps
            .get(layer as usize)
            .map(|&r| if cfg.delta > 0.0 { r / cfg.delta } else { 0.0 })
            .unwrap_or(0.0);
        if count as f64 > cap {
            witness = Some(format!(
                "layer {layer} fired {count} merges, cap is {cap:.3}"
            ));
            break;
        }
    }
    report.push("z-budget", witness.is_none(), witness);
}

/// A merged group is frozen: nothing may be absorbed into it afterwards.
fn check_frozen_groups(events: &[AuditEvent], report: &mut AuditReport) {
    let mut frozen: BTreeMap<u32, BTreeSet<u32>> = BTreeMap::new();
    let mut witness = None;
    for e in events {
        match e {
            AuditEvent::GroupQuery {
                layer,
                vertex,
                group,
                step: QueryStep::GroupColoring | QueryStep::Merge,
            } => {
                if frozen.get(layer).is_some_and(|f| f.contains(group)) {
                    witness = Some(format!(
                        "vertex {vertex} absorbed into frozen group {group} at layer {layer}"
                    ));
                    break;
                }
            }
            AuditEvent::Merge {
                layer, d0, d1, d2, ..
            } => {
                let f = frozen.entry(*layer).or_default();
                f.extend(d0.iter().chain(d1).chain(d2).copied());
            }
            _ => {}
        }
    }
    report.push("frozen-groups", witness.is_none(), witness);
}

/// Top-layer bases are always fresh neighborhoods, so they are pairwise
/// disjoint and at least front-block wide.
fn check_layer0_facts(events: &[AuditEvent], cfg: &AuditConfig, report: &mut AuditReport) {
    let mut seen: BTreeSet<u32> = BTreeSet::new();
    let mut disjoint_witness = None;
    let mut size_witness = None;
    for e in events {
        if let AuditEvent::BaseAdded {
            layer: 0,
            index,
            members,
            ..
        } = e
        {
            if size_witness.is_none() && (members.len() as u64) < cfg.c {
                size_witness = Some(format!(
                    "base {index} has {} members, front block is {}",
                    members.len(),
                    cfg.c
                ));
            }
            if disjoint_witness.is_none() {
                if let Some(&v) = members.iter().find(|v| seen.contains(v)) {
                    disjoint_witness = Some(format!("vertex {v} sits in two layer-0 bases"));
                }
            }
            seen.extend(members.iter().copied());
        }
    }
    report.push("layer0-disjoint", disjoint_witness.is_none(), disjoint_witness);
    report.push("layer0-min-size", size_witness.is_none(), size_witness);
}

/// Merge triggers of one layer are pairwise at distance 3 or more in the
/// final group graph, rebuilt here from absorptions and the final graph.
fn check_z_spacing(events: &[AuditEvent], final_graph: &OnlineGraph, report: &mut AuditReport) {
    let mut membership: BTreeMap<u32, BTreeMap<u32, u32>> = BTreeMap::new();
    let mut centers: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    let mut base_count: BTreeMap<u32, u32> = BTreeMap::new();
    for e in events {
        match e {
            AuditEvent::GroupQuery {
                layer,
                vertex,
                group,
                step: QueryStep::GroupColoring | QueryStep::Merge,
            } => {
                membership.entry(*layer).or_default().insert(*vertex, *group);
            }
            AuditEvent::Merge { layer, z, .. } => centers.entry(*layer).or_default().push(*z),
            AuditEvent::BaseAdded { layer, index, .. } => {
                let c = base_count.entry(*layer).or_insert(0);
                *c = (*c).max(*index);
            }
            _ => {}
        }
    }

    let mut witness = None;
    'layers: for (layer, zs) in &centers {
        if zs.len() < 2 {
            continue;
        }
        let Some(members) = membership.get(layer) else {
            continue;
        };
        let groups = *base_count.get(layer).unwrap_or(&0) as usize;
        if zs.iter().any(|&z| z == 0 || z as usize > groups) {
            witness = Some(format!("layer {layer} merge names an unknown group"));
            break;
        }
        // Group graph: an edge wherever the final graph joins two groups.
        let mut adj: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); groups + 1];
        for (&v, &gv) in members {
            if let Ok(neigh) = final_graph.neighbors(VertexId(v)) {
                for u in neigh {
                    if let Some(&gu) = members.get(&u.0) {
                        if gu != gv {
                            adj[gv as usize].insert(gu);
                            adj[gu as usize].insert(gv);
                        }
                    }
                }
            }
        }
        for (i, &a) in zs.iter().enumerate() {
            // BFS to depth 2 suffices: only distances below 3 are offenses.
            let mut dist: BTreeMap<u32, u32> = BTreeMap::new();
            dist.insert(a, 0);
            let mut frontier = vec![a];
            for d in 1..=2u32 {
                let mut next = Vec::new();
                for &g in &frontier {
                    for &h in &adj[g as usize] {
                        if !dist.contains_key(&h) {
                            dist.insert(h, d);
                            next.push(h);
                        }
                    }
                }
                frontier = next;
            }
            for &b in &zs[i + 1..] {
                if let Some(&d) = dist.get(&b) {
                    witness = Some(format!(
                        "merge triggers {a} and {b} at layer {layer} are {d} apart"
                    ));
                    break 'layers;
                }
            }
        }
    }
    report.push("z-spacing", witness.is_none(), witness);
}

/// Measures every base's even-diameter in the graph as it stood when the
/// base was added, against the cap for its layer.
fn check_even_diameter(
    events: &[AuditEvent],
    stream: &InstanceStream,
    cfg: &AuditConfig,
    report: &mut AuditReport,
) -> Result<(), GraphError> {
    if cfg.n > DIAMETER_AUDIT_MAX_N {
        report.push(
            "even-diameter",
            true,
            Some(format!("skipped: instance above {DIAMETER_AUDIT_MAX_N} vertices")),
        );
        return Ok(());
    }
    let mut by_arrival: BTreeMap<u32, Vec<(u32, u32, BTreeSet<VertexId>)>> = BTreeMap::new();
    for e in events {
        if let AuditEvent::BaseAdded {
            layer,
            at,
            index,
            members,
        } = e
        {
            by_arrival.entry(*at).or_default().push((
                *layer,
                *index,
                members.iter().map(|&v| VertexId(v)).collect(),
            ));
        }
    }

    let mut witness = None;
    let mut g = OnlineGraph::new();
    'replay: for ev in stream.events() {
        g.reveal(ev)?;
        for (layer, index, members) in by_arrival.get(&ev.vertex.0).into_iter().flatten() {
            let cap = cfg.diameter_caps.get(*layer as usize).copied().unwrap_or(0);
            let verdict = match parity::even_diameter(&g, members) {
                Ok(ParityDistance::Finite(d)) if d as u64 <= cap => None,
                Ok(d) => Some(format!(
                    "base {index} at layer {layer} has even-diameter {d}, cap {cap}"
                )),
                Err(e) => Some(format!("base {index} at layer {layer}: {e}")),
            };
            if verdict.is_some() {
                witness = verdict;
                break 'replay;
            }
        }
    }
    report.push("even-diameter", witness.is_none(), witness);
    Ok(())
}

// =========================== result consistency ==========================

/// Cross-checks a run result against its instance and its own trace: the
/// summary counters match the assignment, the assignment matches the trace,
/// and a violation diagnostic points at the first uncolored vertex.
pub fn verify_result_consistency(stream: &InstanceStream, run: &RunResult) -> AuditReport {
    let mut report = AuditReport::default();
    let n = stream.n();

    let mut witness = None;
    if run.n as usize != n {
        witness = Some(format!("result claims n = {}, instance has {n}", run.n));
    } else if run.promise_violation.is_none() && run.assignment.len() != n {
        witness = Some(format!(
            "clean run colored {} of {n} vertices",
            run.assignment.len()
        ));
    } else if let Some(pv) = &run.promise_violation {
        if pv.vertex as usize != run.assignment.len() {
            witness = Some(format!(
                "violation blames vertex {} but {} vertices are colored",
                pv.vertex,
                run.assignment.len()
            ));
        }
    }
    report.push("result-shape", witness.is_none(), witness);

    let distinct = run.assignment.iter().collect::<BTreeSet<_>>().len() as u64;
    let max = run.assignment.iter().copied().max().unwrap_or(0);
    let mut witness = None;
    if run.colors_used != distinct {
        witness = Some(format!(
            "colors_used is {}, assignment holds {distinct} distinct colors",
            run.colors_used
        ));
    } else if run.max_color != max {
        witness = Some(format!(
            "max_color is {}, assignment peaks at {max}",
            run.max_color
        ));
    }
    report.push("result-counts", witness.is_none(), witness);

    let mut witness = None;
    for e in run.trace.events() {
        if let Some((v, color)) = e.assignment() {
            match run.assignment.get(v as usize) {
                Some(&actual) if actual == color => {}
                // The violator's rejected assignment may trail the prefix.
                None if v as usize == run.assignment.len()
                    && run.promise_violation.is_some() => {}
                _ => {
                    witness = Some(format!("trace assigns vertex {v} color {color}, result disagrees"));
                    break;
                }
            }
        }
    }
    report.push("result-trace-match", witness.is_none(), witness);
    report
}

// ============================ exact chromatic ============================

/// Largest instance the exact chromatic solver accepts.
pub const CHROMATIC_MAX_N: usize = 20;

/// Exact chromatic number by backtracking, None above [`CHROMATIC_MAX_N`].
/// Candidate colors are capped at one past the largest color in use, which
/// collapses color permutations.
pub fn brute_chromatic(g: &OnlineGraph) -> Option<u32> {
    let n = g.revealed();
    if n > CHROMATIC_MAX_N {
        return None;
    }
    if n == 0 {
        return Some(0);
    }
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            g.neighbors(VertexId(v as u32))
                .map(|s| s.iter().map(|u| u.index()).filter(|&u| u < v).collect())
                .unwrap_or_default()
        })
        .collect();

    fn place(v: usize, k: u32, adj: &[Vec<usize>], colors: &mut Vec<u32>) -> bool {
        if v == adj.len() {
            return true;
        }
        let max_used = colors[..v].iter().copied().max().unwrap_or(0);
        for c in 1..=k.min(max_used + 1) {
            if adj[v].iter().all(|&u| colors[u] != c) {
                colors[v] = c;
                if place(v + 1, k, adj, colors) {
                    return true;
                }
                colors[v] = 0;
            }
        }
        false
    }

    (1..=n as u32).find(|&k| place(0, k, &adj, &mut vec![0; n]))
}
