//! A fully scripted reducer-over-terminal run with two merges.
//!
//! The instance is two disjoint copies of the same gadget. In each copy,
//! four hub vertices seed four singleton bases; a middle vertex attaches to
//! the first base and then three fan vertices each attach to one of the
//! other bases while also touching the middle vertex, driving the first
//! base's group-graph degree to 3. With the degree cap at 2, the next
//! vertex routed to that base triggers a merge; one more vertex then
//! arrives adjacent to an already-merged (frozen) group and must be handed
//! straight down to the terminal solver.
//!
//! Every color, every base, both merge summaries, and the full audit
//! report are pinned down exactly.

use std::collections::BTreeMap;

use oddcolor::audit::{verify_audit, verify_proper, AuditConfig, Level};
use oddcolor::subroutine::{Subroutine, SubroutineConfig};
use oddcolor::trace::{AuditEvent, AuditTrace, QueryStep};
use oddcolor::{ArrivalEvent, Color, Coloring, InstanceStream, OnlineGraph, VertexId};

fn scenario_stream() -> InstanceStream {
    let gadget = |base: u32| -> Vec<ArrivalEvent> {
        vec![
            ArrivalEvent::new(base, []),
            ArrivalEvent::new(base + 1, []),
            ArrivalEvent::new(base + 2, []),
            ArrivalEvent::new(base + 3, []),
            ArrivalEvent::new(base + 4, [base]),
            ArrivalEvent::new(base + 5, [base + 1, base + 4]),
            ArrivalEvent::new(base + 6, [base + 2, base + 4]),
            ArrivalEvent::new(base + 7, [base + 3, base + 4]),
            ArrivalEvent::new(base + 8, [base]),
        ]
    };
    let mut events = gadget(0);
    events.push(ArrivalEvent::new(9, [1]));
    events.extend(gadget(10));
    InstanceStream::from_events(events).unwrap()
}

fn build_chain() -> Subroutine {
    let inner = Subroutine::terminal(SubroutineConfig {
        layer: 1,
        r_star: 8.0,
        d_star: 24,
        palette_offset: 8,
        palette_size: 8,
    });
    Subroutine::reducer(
        SubroutineConfig {
            layer: 0,
            r_star: 8.0,
            d_star: 2,
            palette_offset: 2,
            palette_size: 6,
        },
        2.0,
        inner,
    )
}

/// Drives the chain by hand: hub vertices are front-colored with color 1
/// and seed singleton bases; everyone else is routed through the chain.
fn run_scenario() -> (InstanceStream, Coloring, AuditTrace, Subroutine) {
    let stream = scenario_stream();
    let mut graph = OnlineGraph::new();
    let mut trace = AuditTrace::new();
    let mut chain = build_chain();
    let mut coloring = Coloring::new();

    for ev in stream.events() {
        graph.reveal(ev).unwrap();
        let v = ev.vertex;
        let hub = matches!(v.0, 0..=3 | 10..=13);
        let color: Color = if hub {
            trace.push(AuditEvent::FfAssign {
                layer: 0,
                vertex: v.0,
                color: 1,
            });
            chain
                .add_base([v].into_iter().collect(), v, &mut trace)
                .unwrap();
            1
        } else {
            let base = chain.adjacent_base(v, &graph).expect("scripted adjacency");
            chain.color_query(v, base, &graph, &mut trace).unwrap()
        };
        coloring.push(color);
    }
    (stream, coloring, trace, chain)
}

fn audit_cfg() -> AuditConfig {
    AuditConfig {
        n: 19,
        k: 1,
        c: 0,
        delta: 2.0,
        gc_block: 6,
        terminal_offset: 8,
        layer_caps: vec![8.0, 8.0],
        diameter_caps: vec![2, 24],
        check_layer0_facts: true,
        expected_colored: None,
    }
}

#[test]
fn every_color_lands_where_the_construction_says() {
    let (stream, coloring, _, chain) = run_scenario();
    verify_proper(&stream, &coloring).unwrap();

    // Hubs take 1. Group-colored vertices take 3 (first in family) or 4.
    // Merge survivors take terminal colors 8 + base: 9, 11, 13.
    let expected: BTreeMap<u32, Color> = [
        (0, 1), (1, 1), (2, 1), (3, 1),
        (4, 3), (5, 4), (6, 4), (7, 4),
        (8, 9), (9, 11),
        (10, 1), (11, 1), (12, 1), (13, 1),
        (14, 3), (15, 4), (16, 4), (17, 4),
        (18, 13),
    ]
    .into_iter()
    .collect();
    for (v, want) in expected {
        assert_eq!(coloring.get(VertexId(v)), Some(want), "vertex {v}");
    }

    assert_eq!(chain.merge_triggers(), [1, 5]);
    assert_eq!(chain.bases().len(), 8);
    assert_eq!(chain.inner().unwrap().bases().len(), 8);
}

#[test]
fn merge_summaries_record_the_balls_exactly() {
    let (_, _, trace, _) = run_scenario();
    let merges: Vec<&AuditEvent> = trace
        .events()
        .iter()
        .filter(|e| matches!(e, AuditEvent::Merge { .. }))
        .collect();
    assert_eq!(merges.len(), 2);
    assert_eq!(
        merges[0],
        &AuditEvent::Merge {
            layer: 0,
            at: 8,
            z: 1,
            d0: vec![1],
            d1: vec![2, 3, 4],
            d2: vec![],
            bases_created: vec![1, 2, 3, 4],
        }
    );
    assert_eq!(
        merges[1],
        &AuditEvent::Merge {
            layer: 0,
            at: 18,
            z: 5,
            d0: vec![5],
            d1: vec![6, 7, 8],
            d2: vec![],
            bases_created: vec![5, 6, 7, 8],
        }
    );

    // The merged X-unions and Y'-unions, in ball order.
    let layer1_bases: Vec<(u32, Vec<u32>)> = trace
        .events()
        .iter()
        .filter_map(|e| match e {
            AuditEvent::BaseAdded {
                layer: 1,
                index,
                members,
                ..
            } => Some((*index, members.clone())),
            _ => None,
        })
        .collect();
    assert_eq!(
        layer1_bases,
        vec![
            (1, vec![0]),
            (2, vec![4, 8]),
            (3, vec![1, 2, 3]),
            (4, vec![5, 6, 7]),
            (5, vec![10]),
            (6, vec![14, 18]),
            (7, vec![11, 12, 13]),
            (8, vec![15, 16, 17]),
        ]
    );

    // Vertex 9 reaches its frozen group and is delegated, not absorbed.
    assert!(trace.events().contains(&AuditEvent::GroupQuery {
        layer: 0,
        vertex: 9,
        group: 2,
        step: QueryStep::Inner,
    }));
    assert!(trace.events().contains(&AuditEvent::TerminalAssign {
        layer: 1,
        vertex: 9,
        base: 3,
        color: 11,
    }));
}

#[test]
fn the_full_audit_passes_organically() {
    let (stream, _, trace, _) = run_scenario();
    let report = verify_audit(&stream, &trace, &audit_cfg(), Level::Full).unwrap();
    assert!(
        report.all_passed(),
        "failures: {:?}",
        report.failures().collect::<Vec<_>>()
    );

    // And the trace survives its serialization format.
    let back = AuditTrace::from_jsonl(&trace.to_jsonl()).unwrap();
    assert_eq!(back.events(), trace.events());
}

fn failed(stream: &InstanceStream, trace: &AuditTrace, name: &str) -> bool {
    let report = verify_audit(stream, trace, &audit_cfg(), Level::Full).unwrap();
    !report.get(name).expect("check ran").passed
}

#[test]
fn moving_a_merge_trigger_next_door_breaks_spacing() {
    let (stream, _, trace, _) = run_scenario();
    let mut tampered = AuditTrace::new();
    for e in trace.events() {
        tampered.push(match e {
            AuditEvent::Merge {
                layer,
                at: 18,
                d1,
                d2,
                bases_created,
                ..
            } => AuditEvent::Merge {
                layer: *layer,
                at: 18,
                z: 2,
                d0: vec![2],
                d1: d1.clone(),
                d2: d2.clone(),
                bases_created: bases_created.clone(),
            },
            other => other.clone(),
        });
    }
    // Groups 1 and 2 share an edge in the rebuilt group graph.
    assert!(failed(&stream, &tampered, "z-spacing"));
}

#[test]
fn absorbing_into_a_frozen_group_is_flagged() {
    let (stream, _, mut trace, _) = run_scenario();
    trace.push(AuditEvent::GroupQuery {
        layer: 0,
        vertex: 9,
        group: 2,
        step: QueryStep::GroupColoring,
    });
    assert!(failed(&stream, &trace, "frozen-groups"));
}

#[test]
fn widening_a_merge_past_six_bases_is_flagged() {
    let (stream, _, trace, _) = run_scenario();
    let mut tampered = AuditTrace::new();
    for e in trace.events() {
        match e {
            AuditEvent::Merge {
                layer,
                at: 8,
                z,
                d0,
                d1,
                d2,
                ..
            } => {
                for index in 9..=11 {
                    tampered.push(AuditEvent::BaseAdded {
                        layer: 1,
                        at: 8,
                        index,
                        members: vec![0],
                    });
                }
                tampered.push(AuditEvent::Merge {
                    layer: *layer,
                    at: 8,
                    z: *z,
                    d0: d0.clone(),
                    d1: d1.clone(),
                    d2: d2.clone(),
                    bases_created: vec![1, 2, 3, 4, 9, 10, 11],
                });
            }
            other => tampered.push(other.clone()),
        }
    }
    assert!(failed(&stream, &tampered, "merge-fanout"));
    // The padded window is still internally consistent.
    assert!(!failed(&stream, &tampered, "base-provenance"));
    // But the extra bases blow the layer-1 budget.
    assert!(failed(&stream, &tampered, "base-budget"));
}

#[test]
fn a_base_from_nowhere_breaks_provenance() {
    let (stream, _, mut trace, _) = run_scenario();
    trace.push(AuditEvent::BaseAdded {
        layer: 1,
        at: 18,
        index: 9,
        members: vec![17],
    });
    assert!(failed(&stream, &trace, "base-provenance"));
}

#[test]
fn extra_merges_blow_the_trigger_budget() {
    let (stream, _, mut trace, _) = run_scenario();
    // Budget is r_star / delta = 8 / 2 = 4; push the count to 5.
    for z in [2u32, 3, 4] {
        trace.push(AuditEvent::Merge {
            layer: 0,
            at: 18,
            z,
            d0: vec![z],
            d1: vec![],
            d2: vec![],
            bases_created: vec![1],
        });
    }
    assert!(failed(&stream, &trace, "z-budget"));
}

#[test]
fn a_spread_out_base_fails_the_diameter_measurement() {
    let (stream, _, trace, _) = run_scenario();
    let mut tampered = AuditTrace::new();
    for e in trace.events() {
        tampered.push(match e {
            // {4, 8} becomes {5, 8}: opposite sides of a bipartite
            // component, so their even distance is infinite.
            AuditEvent::BaseAdded {
                layer: 1,
                at,
                index: 2,
                ..
            } => AuditEvent::BaseAdded {
                layer: 1,
                at: *at,
                index: 2,
                members: vec![5, 8],
            },
            other => other.clone(),
        });
    }
    assert!(failed(&stream, &tampered, "even-diameter"));
}

#[test]
fn overlapping_hub_bases_break_disjointness() {
    let (stream, _, trace, _) = run_scenario();
    let mut tampered = AuditTrace::new();
    for e in trace.events() {
        tampered.push(match e {
            AuditEvent::BaseAdded {
                layer: 0,
                at: 2,
                index,
                ..
            } => AuditEvent::BaseAdded {
                layer: 0,
                at: 2,
                index: *index,
                members: vec![1, 2],
            },
            other => other.clone(),
        });
    }
    assert!(failed(&stream, &tampered, "layer0-disjoint"));
}
