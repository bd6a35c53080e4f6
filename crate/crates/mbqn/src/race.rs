//! Feedforward timing races. Each task broadcasts its measurement program
//! from its origin; an instruction for node v arrives after one tick per
//! hop of graph distance. Nodes are greedy and slightly loyal: they execute
//! the first instruction that reaches them, unless they already know they
//! are an endpoint of some task, in which case they refuse to be consumed
//! on another task's behalf. Nothing is rolled back; satisfaction is judged
//! on whatever state survives.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{Graph, Node};
use crate::state::{PauliBasis, ResourceState};
use crate::task::{compile_repeater_program, default_path, task_satisfied, Task};
use crate::Result;

/// One task in a race, with the tick at which its request enters the
/// network at the task's origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RaceEntry {
    pub task: Task,
    pub arrival: u64,
}

impl RaceEntry {
    pub fn new(task: Task, arrival: u64) -> Self {
        RaceEntry { task, arrival }
    }
}

/// The instruction a node ended up executing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeCommitment {
    pub task_index: usize,
    pub basis: PauliBasis,
    pub time: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RaceOutcome {
    /// Indices into the schedule whose tasks hold a Bell edge at the end.
    pub satisfied: BTreeSet<usize>,
    /// Which instruction each measured node executed, and when.
    pub commitments: BTreeMap<Node, NodeCommitment>,
    pub final_state: ResourceState,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Instruction {
    time: u64,
    arrival: u64,
    task_index: usize,
    node: Node,
    basis: PauliBasis,
}

/// Runs the race to completion. Instructions are delivered in time order;
/// ties go to the earlier arrival, then the earlier schedule entry, then
/// the smaller node id. A node learns it is an endpoint the moment the
/// feedforward front reaches it: origins at their task's arrival tick,
/// targets one tick per hop later. Endpoints refuse foreign instructions
/// from then on, so an instruction outracing the claim still consumes the
/// node, which is the whole failure mode this model exists to expose.
pub fn run_race(g: &Graph, schedule: &[RaceEntry]) -> Result<RaceOutcome> {
    for entry in schedule {
        for v in entry.task.endpoints() {
            g.check_vertex(v)?;
        }
    }
    fn claim(claims: &mut BTreeMap<Node, u64>, v: Node, t: u64) {
        let earliest = claims.entry(v).or_insert(t);
        *earliest = (*earliest).min(t);
    }
    let mut claimed_at: BTreeMap<Node, u64> = BTreeMap::new();
    let mut instructions: Vec<Instruction> = Vec::new();
    for (task_index, entry) in schedule.iter().enumerate() {
        let reach = g.distances_from(entry.task.origin())?;
        claim(&mut claimed_at, entry.task.origin(), entry.arrival);
        if let Some(&d) = reach.get(&entry.task.target()) {
            claim(&mut claimed_at, entry.task.target(), entry.arrival + d as u64);
        }
        // an unreachable target means no path, hence nothing to broadcast
        let Some(path) = default_path(g, entry.task)? else {
            continue;
        };
        let program = compile_repeater_program(g, &path)?;
        for (node, basis) in program.steps {
            let hops = reach[&node];
            instructions.push(Instruction {
                time: entry.arrival + hops as u64,
                arrival: entry.arrival,
                task_index,
                node,
                basis,
            });
        }
    }
    instructions.sort();

    let mut state = ResourceState::new(g.clone());
    let mut commitments = BTreeMap::new();
    for inst in instructions {
        if state.is_consumed(inst.node) {
            continue;
        }
        if claimed_at.get(&inst.node).is_some_and(|&learned| learned <= inst.time) {
            continue;
        }
        state = state.measure(inst.node, inst.basis)?;
        commitments.insert(
            inst.node,
            NodeCommitment { task_index: inst.task_index, basis: inst.basis, time: inst.time },
        );
    }

    let satisfied = schedule
        .iter()
        .enumerate()
        .filter(|(_, entry)| task_satisfied(&state, entry.task))
        .map(|(i, _)| i)
        .collect();
    Ok(RaceOutcome { satisfied, commitments, final_state: state })
}

/// Whether the pair degrades gracefully under every arrival assignment
/// with offsets up to `dt`: for each offset and each choice of which task
/// arrives first (simultaneity is a single assignment, with `a` ahead of
/// `b` in the schedule), at least one of the two must still be satisfied.
pub fn partial_compatible(g: &Graph, a: Task, b: Task, dt: u64) -> Result<bool> {
    for offset in 0..=dt {
        let assignments: &[[u64; 2]] =
            if offset == 0 { &[[0, 0]] } else { &[[0, offset], [offset, 0]] };
        for [first, second] in assignments {
            let schedule = [RaceEntry::new(a, *first), RaceEntry::new(b, *second)];
            if run_race(g, &schedule)?.satisfied.is_empty() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
