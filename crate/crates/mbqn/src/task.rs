//! Entanglement distribution tasks and the repeater-path protocol that
//! serves them: pick a path between the endpoints, cut away everything
//! hanging off the path with Z measurements, then contract the interior
//! with Y measurements until only the endpoint pair remains entangled.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Graph, Node};
use crate::state::{PauliBasis, ResourceState};

/// Request to establish a Bell pair between two distinct network nodes.
/// The origin is the node where the request enters the network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Task {
    origin: Node,
    target: Node,
}

impl Task {
    pub fn new(origin: Node, target: Node) -> Result<Task> {
        if origin == target {
            return Err(Error::DegenerateTask(origin));
        }
        Ok(Task { origin, target })
    }

    pub fn origin(self) -> Node {
        self.origin
    }

    pub fn target(self) -> Node {
        self.target
    }

    pub fn endpoints(self) -> [Node; 2] {
        [self.origin, self.target]
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.origin, self.target)
    }
}

impl FromStr for Task {
    type Err = Error;

    /// Parses the `u->v` task literal.
    fn from_str(s: &str) -> Result<Task> {
        let (a, b) = s
            .split_once("->")
            .ok_or_else(|| Error::parse(1, format!("expected `u->v` task, found `{s}`")))?;
        let origin: Node = a
            .trim()
            .parse()
            .map_err(|_| Error::parse(1, format!("invalid task origin `{}`", a.trim())))?;
        let target: Node = b
            .trim()
            .parse()
            .map_err(|_| Error::parse(1, format!("invalid task target `{}`", b.trim())))?;
        Task::new(origin, target)
    }
}

/// Parses a comma-separated list of `u->v` literals.
pub fn parse_task_list(s: &str) -> Result<Vec<Task>> {
    let trimmed = s.trim();
    if trimmed.is_empty() {
        return Err(Error::parse(1, "expected at least one task"));
    }
    trimmed.split(',').map(|item| item.trim().parse()).collect()
}

/// The measurement sequence that serves one task over one path: every
/// off-path neighbor of the path is measured in Z (ascending vertex id),
/// then the path interior in Y, in path order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurementProgram {
    pub path: Vec<Node>,
    pub steps: Vec<(Node, PauliBasis)>,
}

/// Compiles the repeater-path program for `path`, which must be a simple
/// path of at least two vertices in `g`.
pub fn compile_repeater_program(g: &Graph, path: &[Node]) -> Result<MeasurementProgram> {
    if path.len() < 2 {
        return Err(Error::NotAPath("a repeater path needs at least two vertices".into()));
    }
    for &v in path {
        g.check_vertex(v)?;
    }
    let on_path: BTreeSet<Node> = path.iter().copied().collect();
    if on_path.len() != path.len() {
        return Err(Error::NotAPath("path revisits a vertex".into()));
    }
    for w in path.windows(2) {
        if !g.has_edge(w[0], w[1]) {
            return Err(Error::NotAPath(format!("{} and {} are not adjacent", w[0], w[1])));
        }
    }
    let mut cut_away: BTreeSet<Node> = BTreeSet::new();
    for &v in path {
        cut_away.extend(g.neighbors(v)?.iter().copied().filter(|u| !on_path.contains(u)));
    }
    let steps = cut_away
        .iter()
        .map(|&v| (v, PauliBasis::Z))
        .chain(path[1..path.len() - 1].iter().map(|&v| (v, PauliBasis::Y)))
        .collect();
    Ok(MeasurementProgram { path: path.to_vec(), steps })
}

/// Runs every step of a program on the state, in order.
pub fn execute_program(state: &ResourceState, program: &MeasurementProgram) -> Result<ResourceState> {
    let mut current = state.clone();
    for &(v, basis) in &program.steps {
        current = current.measure(v, basis)?;
    }
    Ok(current)
}

/// A task is satisfied when its endpoints survive unmeasured as an isolated
/// Bell edge: both present, joined, and of degree one.
pub fn task_satisfied(state: &ResourceState, task: Task) -> bool {
    let g = state.graph();
    task.endpoints().iter().all(|&v| !state.is_consumed(v) && g.contains_vertex(v))
        && g.has_edge(task.origin(), task.target())
        && task.endpoints().iter().all(|&v| g.degree(v).is_ok_and(|d| d == 1))
}

/// A task is feasible when its endpoints lie in the same component.
pub fn feasible(g: &Graph, task: Task) -> Result<bool> {
    g.connected_to(task.origin(), task.target())
}

/// The default service route: the first enumerated simple path, which is a
/// shortest one (and therefore chordless, so the compiled program works).
pub fn default_path(g: &Graph, task: Task) -> Result<Option<Vec<Node>>> {
    Ok(g.simple_paths(task.origin(), task.target(), g.vertex_count())?.into_iter().next())
}
