//! Compatibility of task sets. A set is worst-case compatible when every
//! task can be assigned its own service path such that the paths are
//! pairwise vertex-disjoint and pairwise at hop distance at least two, so
//! no program's Z step can land on another task's path. A bounded budget of
//! on-demand EPR pairs relaxes this: a pair placed on an edge can either
//! carry one hop of a task directly (chain links over fresh ancillas) or
//! remove an edge from the resource state (fission).

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{Graph, Node};
use crate::task::Task;

/// One service path per task, aligned by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathAssignment {
    pub paths: Vec<Vec<Node>>,
}

impl PathAssignment {
    /// Re-checks the worst-case criterion for this assignment: every path
    /// is a simple path of `g` connecting its task's endpoints, and the
    /// paths are pairwise vertex-disjoint and separated by distance two.
    pub fn satisfies_worst_case(&self, g: &Graph, tasks: &[Task]) -> Result<bool> {
        if self.paths.len() != tasks.len() {
            return Ok(false);
        }
        for (path, task) in self.paths.iter().zip(tasks) {
            if !connects(g, path, *task)? {
                return Ok(false);
            }
        }
        for (i, a) in self.paths.iter().enumerate() {
            for b in &self.paths[i + 1..] {
                match g.set_distance(a, b)? {
                    Some(d) if d < 2 => return Ok(false),
                    _ => {}
                }
            }
        }
        Ok(true)
    }
}

fn connects(g: &Graph, path: &[Node], task: Task) -> Result<bool> {
    if path.len() < 2
        || path.first() != Some(&task.origin())
        || path.last() != Some(&task.target())
    {
        return Ok(false);
    }
    let distinct: BTreeSet<Node> = path.iter().copied().collect();
    if distinct.len() != path.len() {
        return Ok(false);
    }
    for &v in path {
        g.check_vertex(v)?;
    }
    Ok(path.windows(2).all(|w| g.has_edge(w[0], w[1])))
}

/// Which requirement ruled a set incompatible.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Some task has no usable path at all.
    NoPath,
    /// No assignment of pairwise vertex-disjoint paths exists.
    Disjointness,
    /// Disjoint paths exist, but some pair always ends up adjacent.
    Separability,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NoPath => write!(f, "no-path"),
            Violation::Disjointness => write!(f, "disjointness"),
            Violation::Separability => write!(f, "separability"),
        }
    }
}

/// Outcome of a compatibility check. A verdict is compatible exactly when
/// it carries a witness assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Compatible { witness: PathAssignment },
    Incompatible { violation: Violation },
}

impl Verdict {
    pub fn is_compatible(&self) -> bool {
        matches!(self, Verdict::Compatible { .. })
    }

    pub fn witness(&self) -> Option<&PathAssignment> {
        match self {
            Verdict::Compatible { witness } => Some(witness),
            Verdict::Incompatible { .. } => None,
        }
    }

    pub fn violation(&self) -> Option<Violation> {
        match self {
            Verdict::Compatible { .. } => None,
            Verdict::Incompatible { violation } => Some(*violation),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum SearchMode {
    DisjointAndSeparated,
    DisjointOnly,
}

/// Decides worst-case compatibility by backtracking over candidate paths
/// per task, in arrival order. Candidate paths are capped at `max_len`
/// vertices (the whole vertex count when `None`).
pub fn worst_case_compatible(g: &Graph, tasks: &[Task], max_len: Option<usize>) -> Result<Verdict> {
    for t in tasks {
        g.check_vertex(t.origin())?;
        g.check_vertex(t.target())?;
    }
    let limit = max_len.unwrap_or_else(|| g.vertex_count());
    let candidates: Vec<Vec<Vec<Node>>> = tasks
        .iter()
        .map(|t| g.simple_paths(t.origin(), t.target(), limit))
        .collect::<Result<_>>()?;
    if candidates.iter().any(Vec::is_empty) {
        return Ok(Verdict::Incompatible { violation: Violation::NoPath });
    }
    if let Some(paths) = assign(g, &candidates, SearchMode::DisjointAndSeparated) {
        return Ok(Verdict::Compatible { witness: PathAssignment { paths } });
    }
    let violation = if assign(g, &candidates, SearchMode::DisjointOnly).is_some() {
        Violation::Separability
    } else {
        Violation::Disjointness
    };
    Ok(Verdict::Incompatible { violation })
}

fn assign(g: &Graph, candidates: &[Vec<Vec<Node>>], mode: SearchMode) -> Option<Vec<Vec<Node>>> {
    let mut chosen: Vec<Vec<Node>> = Vec::with_capacity(candidates.len());
    let mut used: BTreeSet<Node> = BTreeSet::new();
    if extend(g, candidates, mode, &mut chosen, &mut used) {
        Some(chosen)
    } else {
        None
    }
}

fn extend(
    g: &Graph,
    candidates: &[Vec<Vec<Node>>],
    mode: SearchMode,
    chosen: &mut Vec<Vec<Node>>,
    used: &mut BTreeSet<Node>,
) -> bool {
    let Some(options) = candidates.get(chosen.len()) else {
        return true;
    };
    'next_path: for path in options {
        for &v in path {
            if used.contains(&v) {
                continue 'next_path;
            }
            if mode == SearchMode::DisjointAndSeparated {
                let close_by = g
                    .neighbors(v)
                    .expect("candidate paths stay inside the graph")
                    .iter()
                    .any(|u| used.contains(u));
                if close_by {
                    continue 'next_path;
                }
            }
        }
        used.extend(path.iter().copied());
        chosen.push(path.clone());
        if extend(g, candidates, mode, chosen, used) {
            return true;
        }
        chosen.pop();
        for v in path {
            used.remove(v);
        }
    }
    false
}

/// Closed-form compatibility on the 1..=n path: each task occupies the
/// interval between its endpoints, and a set is compatible exactly when
/// the sorted intervals keep a gap of at least two vertices.
pub fn interval_compatible_1d(n: usize, tasks: &[Task]) -> Result<Verdict> {
    let mut intervals: Vec<(Node, Node, usize)> = Vec::with_capacity(tasks.len());
    for (idx, t) in tasks.iter().enumerate() {
        for v in t.endpoints() {
            if v == 0 || v as usize > n {
                return Err(Error::OutsideRange { vertex: v, n });
            }
        }
        let (lo, hi) = (t.origin().min(t.target()), t.origin().max(t.target()));
        intervals.push((lo, hi, idx));
    }
    let mut sorted = intervals.clone();
    sorted.sort();
    let mut overlap = false;
    let mut touching = false;
    for w in sorted.windows(2) {
        let (_, right, _) = w[0];
        let (left, ..) = w[1];
        if left <= right {
            overlap = true;
        } else if left == right + 1 {
            touching = true;
        }
    }
    if overlap {
        return Ok(Verdict::Incompatible { violation: Violation::Disjointness });
    }
    if touching {
        return Ok(Verdict::Incompatible { violation: Violation::Separability });
    }
    let paths = tasks
        .iter()
        .map(|t| {
            if t.origin() < t.target() {
                (t.origin()..=t.target()).collect()
            } else {
                (t.target()..=t.origin()).rev().collect()
            }
        })
        .collect();
    Ok(Verdict::Compatible { witness: PathAssignment { paths } })
}

/// How one supplemental EPR pair is spent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlacementRole {
    /// One hop of a chain serving the given task over fresh ancillas.
    ChainLink { task_index: usize },
    /// Removes this edge from the resource state.
    Fission,
}

/// A supplemental EPR pair placed on an edge of the network.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    pub edge: (Node, Node),
    pub role: PlacementRole,
}

/// A way to spend the supplement budget. Cost is one per placement.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SupplementPlan {
    pub placements: Vec<Placement>,
}

impl SupplementPlan {
    pub fn cost(&self) -> usize {
        self.placements.len()
    }

    pub fn fissions(&self) -> Vec<(Node, Node)> {
        self.placements
            .iter()
            .filter(|p| p.role == PlacementRole::Fission)
            .map(|p| p.edge)
            .collect()
    }

    pub fn chain_edges(&self, task_index: usize) -> Vec<(Node, Node)> {
        self.placements
            .iter()
            .filter(|p| p.role == (PlacementRole::ChainLink { task_index }))
            .map(|p| p.edge)
            .collect()
    }
}

/// Decides compatibility with up to `k` on-demand EPR pairs shared across
/// the whole set. The search runs in increasing total cost; with `k = 0`
/// it reduces exactly to [`worst_case_compatible`]. On success the verdict
/// carries per-task paths (chain walks for chained tasks, resource-state
/// witness paths for the rest) and the plan that realizes them.
pub fn gk_compatible(
    g: &Graph,
    tasks: &[Task],
    k: usize,
    max_len: Option<usize>,
) -> Result<(Verdict, Option<SupplementPlan>)> {
    let base = worst_case_compatible(g, tasks, max_len)?;
    if base.is_compatible() {
        return Ok((base, Some(SupplementPlan::default())));
    }
    if k == 0 {
        return Ok((base, None));
    }
    // cheapest chain per task: its shortest path, walked link by link
    let chain_paths: Vec<Option<Vec<Node>>> = tasks
        .iter()
        .map(|t| crate::task::default_path(g, *t))
        .collect::<Result<_>>()?;
    let edges = g.edges();
    for budget in 1..=k {
        let mut chained = Vec::new();
        if let Some(found) = spend(g, tasks, &chain_paths, &edges, max_len, budget, 0, &mut chained)? {
            return Ok(found);
        }
    }
    Ok((base, None))
}

type PlanHit = (Verdict, Option<SupplementPlan>);

/// Enumerates exact spendings of `budget`: a subset of tasks served by
/// chains (cheapest first per task) plus a combination of fission edges
/// for the remainder of the budget, in deterministic order.
#[allow(clippy::too_many_arguments)] // recursion carries the whole search state explicitly
fn spend(
    g: &Graph,
    tasks: &[Task],
    chain_paths: &[Option<Vec<Node>>],
    edges: &[(Node, Node)],
    max_len: Option<usize>,
    budget: usize,
    next_task: usize,
    chained: &mut Vec<usize>,
) -> Result<Option<PlanHit>> {
    if next_task == tasks.len() {
        let chain_cost: usize = chained
            .iter()
            .map(|&i| chain_paths[i].as_ref().expect("chained tasks have a path").len() - 1)
            .sum();
        let fission_budget = budget - chain_cost;
        return try_fissions(g, tasks, chain_paths, edges, max_len, fission_budget, chained);
    }
    if let Some(found) = spend(g, tasks, chain_paths, edges, max_len, budget, next_task + 1, chained)? {
        return Ok(Some(found));
    }
    let spent: usize = chained
        .iter()
        .map(|&i| chain_paths[i].as_ref().expect("chained tasks have a path").len() - 1)
        .sum();
    if let Some(path) = &chain_paths[next_task]
        && spent + (path.len() - 1) <= budget
    {
        chained.push(next_task);
        let found = spend(g, tasks, chain_paths, edges, max_len, budget, next_task + 1, chained)?;
        chained.pop();
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

fn try_fissions(
    g: &Graph,
    tasks: &[Task],
    chain_paths: &[Option<Vec<Node>>],
    edges: &[(Node, Node)],
    max_len: Option<usize>,
    fission_budget: usize,
    chained: &[usize],
) -> Result<Option<PlanHit>> {
    let mut picks = Vec::with_capacity(fission_budget);
    combinations(edges, fission_budget, 0, &mut picks, &mut |fissions| {
        let mut cut = g.clone();
        for &(u, v) in fissions {
            cut = cut.toggle_edge(u, v)?;
        }
        let rest_tasks: Vec<Task> = tasks
            .iter()
            .enumerate()
            .filter(|(i, _)| !chained.contains(i))
            .map(|(_, t)| *t)
            .collect();
        let rest = worst_case_compatible(&cut, &rest_tasks, max_len)?;
        let Verdict::Compatible { witness } = rest else {
            return Ok(None);
        };
        let mut rest_paths = witness.paths.into_iter();
        let paths = (0..tasks.len())
            .map(|i| {
                if chained.contains(&i) {
                    chain_paths[i].as_ref().expect("chained tasks have a path").clone()
                } else {
                    rest_paths.next().expect("one witness path per rest task")
                }
            })
            .collect();
        let mut placements = Vec::new();
        for &i in chained {
            let walk = chain_paths[i].as_ref().expect("chained tasks have a path");
            for w in walk.windows(2) {
                let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
                placements.push(Placement { edge: (a, b), role: PlacementRole::ChainLink { task_index: i } });
            }
        }
        for &edge in fissions {
            placements.push(Placement { edge, role: PlacementRole::Fission });
        }
        Ok(Some((
            Verdict::Compatible { witness: PathAssignment { paths } },
            Some(SupplementPlan { placements }),
        )))
    })
}

/// Visits all `size`-element combinations of `pool` in index order until
/// the visitor returns a hit.
fn combinations<T: Copy, R>(
    pool: &[T],
    size: usize,
    from: usize,
    picks: &mut Vec<T>,
    visit: &mut impl FnMut(&[T]) -> Result<Option<R>>,
) -> Result<Option<R>> {
    if picks.len() == size {
        return visit(picks);
    }
    let needed = size - picks.len();
    if pool.len().saturating_sub(from) < needed {
        return Ok(None);
    }
    for i in from..pool.len() {
        picks.push(pool[i]);
        if let Some(hit) = combinations(pool, size, i + 1, picks, visit)? {
            picks.pop();
            return Ok(Some(hit));
        }
        picks.pop();
    }
    Ok(None)
}

/// Smallest budget that makes the set compatible, up to `k_max`.
pub fn minimal_k(g: &Graph, tasks: &[Task], k_max: usize) -> Result<Option<usize>> {
    let (_, plan) = gk_compatible(g, tasks, k_max, None)?;
    Ok(plan.map(|p| p.cost()))
}
