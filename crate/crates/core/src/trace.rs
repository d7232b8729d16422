//! Audit trace: the ordered event log a colorer emits while running.
//!
//! Serialized as JSON lines, one event per line, in emission order. Events
//! fired while processing an arrival carry that vertex (`at` for structural
//! events, `vertex` for query/assign events). A merge emits its `base-added`
//! events first and the summarizing `merge` event immediately after.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Color;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QueryStep {
    /// Delegated to the inner subroutine (step 1).
    Inner,
    /// Joined the group's active set and was group-colored (step 2-a).
    GroupColoring,
    /// Joined the group's active set, triggered a merge, then colored via
    /// the inner subroutine (step 2-b).
    Merge,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "kebab-case")]
pub enum AuditEvent {
    /// A base (frozen member set) was added at `layer` while vertex `at`
    /// was being processed. `index` is 1-based within the layer.
    BaseAdded {
        layer: u32,
        at: u32,
        index: u32,
        members: Vec<u32>,
    },
    /// A coloring query for `vertex` against `group` reached `layer` and
    /// resolved via `step`.
    GroupQuery {
        layer: u32,
        vertex: u32,
        group: u32,
        step: QueryStep,
    },
    /// Group `z` exceeded the group-graph degree cap at `layer`; the balls
    /// `d0/d1/d2` around it were merged into the listed inner bases.
    Merge {
        layer: u32,
        at: u32,
        z: u32,
        d0: Vec<u32>,
        d1: Vec<u32>,
        d2: Vec<u32>,
        bases_created: Vec<u32>,
    },
    /// Vertex colored by the group-coloring block of `layer`.
    GcAssign {
        layer: u32,
        vertex: u32,
        group: u32,
        color: Color,
    },
    /// Vertex colored by First-Fit in the front block.
    FfAssign { layer: u32, vertex: u32, color: Color },
    /// Vertex colored by the terminal solver with its base index.
    TerminalAssign {
        layer: u32,
        vertex: u32,
        base: u32,
        color: Color,
    },
}

impl AuditEvent {
    /// The color assignment carried by this event, if it is an assign.
    pub fn assignment(&self) -> Option<(u32, Color)> {
        match *self {
            AuditEvent::GcAssign { vertex, color, .. }
            | AuditEvent::FfAssign { vertex, color, .. }
            | AuditEvent::TerminalAssign { vertex, color, .. } => Some((vertex, color)),
            _ => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AuditTrace {
    events: Vec<AuditEvent>,
}

impl AuditTrace {
    pub fn new() -> Self {
        AuditTrace::default()
    }

    pub fn push(&mut self, e: AuditEvent) {
        self.events.push(e);
    }

    pub fn events(&self) -> &[AuditEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&serde_json::to_string(e).expect("events serialize"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self, TraceError> {
        let mut events = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            events.push(
                serde_json::from_str(line).map_err(|source| TraceError::Parse {
                    line: i + 1,
                    source,
                })?,
            );
        }
        Ok(AuditTrace { events })
    }
}
