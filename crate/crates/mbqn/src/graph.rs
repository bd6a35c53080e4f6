//! Undirected simple graphs with the rewrite primitives used by the
//! measurement calculus: vertex deletion, local complementation, and edge
//! toggling. Rewrites hand back new values instead of mutating in place, so
//! intermediate states stay available for comparison and backtracking.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};

/// Vertex identifier. Topology builders number vertices from 1.
pub type Node = u32;

/// Undirected simple graph over `u32` vertex ids.
///
/// Adjacency is kept in ordered maps so that iteration (and everything
/// derived from it, like path enumeration order) is deterministic.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: BTreeMap<Node, BTreeSet<Node>>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices<I: IntoIterator<Item = Node>>(vertices: I) -> Self {
        let adj = vertices.into_iter().map(|v| (v, BTreeSet::new())).collect();
        Self { adj }
    }

    pub fn add_vertex(&mut self, v: Node) {
        self.adj.entry(v).or_default();
    }

    /// Inserts an undirected edge, creating missing endpoints. Re-adding an
    /// existing edge is a no-op; self-loops are rejected.
    pub fn add_edge(&mut self, u: Node, v: Node) -> Result<()> {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        self.add_vertex(u);
        self.add_vertex(v);
        self.adj.get_mut(&u).expect("just inserted").insert(v);
        self.adj.get_mut(&v).expect("just inserted").insert(u);
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn contains_vertex(&self, v: Node) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Node> + '_ {
        self.adj.keys().copied()
    }

    /// All edges as `(u, v)` pairs with `u < v`, in ascending order.
    pub fn edges(&self) -> Vec<(Node, Node)> {
        self.adj
            .iter()
            .flat_map(|(&u, nb)| nb.iter().copied().filter(move |&v| u < v).map(move |v| (u, v)))
            .collect()
    }

    pub fn has_edge(&self, u: Node, v: Node) -> bool {
        self.adj.get(&u).is_some_and(|nb| nb.contains(&v))
    }

    pub fn neighbors(&self, v: Node) -> Result<&BTreeSet<Node>> {
        self.adj.get(&v).ok_or(Error::UnknownVertex(v))
    }

    pub fn degree(&self, v: Node) -> Result<usize> {
        Ok(self.neighbors(v)?.len())
    }

    pub(crate) fn check_vertex(&self, v: Node) -> Result<()> {
        if self.contains_vertex(v) { Ok(()) } else { Err(Error::UnknownVertex(v)) }
    }

    /// Removes a vertex together with all incident edges.
    pub fn delete_vertex(&self, v: Node) -> Result<Graph> {
        self.check_vertex(v)?;
        let mut g = self.clone();
        let nb = g.adj.remove(&v).expect("checked above");
        for u in nb {
            g.adj.get_mut(&u).expect("adjacency is symmetric").remove(&v);
        }
        Ok(g)
    }

    /// Local complementation at `v`: toggles every edge between two
    /// neighbors of `v`. Applying it twice gives back the original graph.
    pub fn local_complement(&self, v: Node) -> Result<Graph> {
        let nb: Vec<Node> = self.neighbors(v)?.iter().copied().collect();
        let mut g = self.clone();
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                g.toggle_edge_mut(a, b);
            }
        }
        Ok(g)
    }

    /// Adds the edge if absent, removes it if present.
    pub fn toggle_edge(&self, u: Node, v: Node) -> Result<Graph> {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let mut g = self.clone();
        g.toggle_edge_mut(u, v);
        Ok(g)
    }

    fn toggle_edge_mut(&mut self, u: Node, v: Node) {
        if self.has_edge(u, v) {
            self.adj.get_mut(&u).expect("endpoint exists").remove(&v);
            self.adj.get_mut(&v).expect("endpoint exists").remove(&u);
        } else {
            self.adj.get_mut(&u).expect("endpoint exists").insert(v);
            self.adj.get_mut(&v).expect("endpoint exists").insert(u);
        }
    }

    /// Breadth-first hop distances from `v` to every reachable vertex.
    pub fn distances_from(&self, v: Node) -> Result<BTreeMap<Node, usize>> {
        self.check_vertex(v)?;
        let mut dist = BTreeMap::from([(v, 0usize)]);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            let d = dist[&u];
            for &w in self.neighbors(u).expect("visited vertices exist") {
                if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(w) {
                    e.insert(d + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    pub fn connected_to(&self, u: Node, v: Node) -> Result<bool> {
        self.check_vertex(v)?;
        Ok(self.distances_from(u)?.contains_key(&v))
    }

    pub fn component_of(&self, v: Node) -> Result<BTreeSet<Node>> {
        Ok(self.distances_from(v)?.into_keys().collect())
    }

    /// Minimum hop distance between two vertex sets, `None` when no path
    /// connects them. Overlapping sets are at distance 0.
    pub fn set_distance(&self, a: &[Node], b: &[Node]) -> Result<Option<usize>> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        for &v in a.iter().chain(b) {
            self.check_vertex(v)?;
        }
        let targets: BTreeSet<Node> = b.iter().copied().collect();
        let mut dist: BTreeMap<Node, usize> = a.iter().map(|&v| (v, 0)).collect();
        let mut queue: VecDeque<Node> = a.iter().copied().collect();
        while let Some(u) = queue.pop_front() {
            let d = dist[&u];
            if targets.contains(&u) {
                return Ok(Some(d));
            }
            for &w in self.neighbors(u).expect("visited vertices exist") {
                if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(w) {
                    e.insert(d + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(None)
    }

    /// Every simple path from `u` to `v` with at most `max_vertices`
    /// vertices, shortest first and lexicographic within equal length.
    pub fn simple_paths(&self, u: Node, v: Node, max_vertices: usize) -> Result<Vec<Vec<Node>>> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let mut out = Vec::new();
        if max_vertices == 0 {
            return Ok(out);
        }
        if u == v {
            out.push(vec![u]);
            return Ok(out);
        }
        let mut path = vec![u];
        let mut seen = BTreeSet::from([u]);
        self.extend_paths(v, max_vertices, &mut path, &mut seen, &mut out);
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(out)
    }

    fn extend_paths(
        &self,
        goal: Node,
        max_vertices: usize,
        path: &mut Vec<Node>,
        seen: &mut BTreeSet<Node>,
        out: &mut Vec<Vec<Node>>,
    ) {
        let last = *path.last().expect("path starts non-empty");
        for &next in self.neighbors(last).expect("path vertices exist") {
            if seen.contains(&next) {
                continue;
            }
            if next == goal {
                let mut found = path.clone();
                found.push(next);
                out.push(found);
                continue;
            }
            if path.len() + 1 >= max_vertices {
                continue;
            }
            path.push(next);
            seen.insert(next);
            self.extend_paths(goal, max_vertices, path, seen, out);
            path.pop();
            seen.remove(&next);
        }
    }

    /// Parses the plain text graph format: an `n=<count>` header naming the
    /// vertices `1..=count`, followed by one `u-v` edge per line. Self-loops
    /// and duplicate edges are rejected.
    pub fn parse_literal(text: &str) -> Result<Graph> {
        let mut size: Option<usize> = None;
        let mut g = Graph::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let Some(n) = size else {
                let rest = line
                    .strip_prefix("n=")
                    .ok_or_else(|| Error::parse(line_no, format!("expected `n=<count>` header, found `{line}`")))?;
                let count: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("invalid vertex count `{}`", rest.trim())))?;
                if count == 0 {
                    return Err(Error::parse(line_no, "vertex count must be at least 1"));
                }
                for v in 1..=count {
                    g.add_vertex(v as Node);
                }
                size = Some(count);
                continue;
            };
            let (a, b) = line
                .split_once('-')
                .ok_or_else(|| Error::parse(line_no, format!("expected `u-v` edge, found `{line}`")))?;
            let u: Node = a
                .trim()
                .parse()
                .map_err(|_| Error::parse(line_no, format!("invalid vertex `{}`", a.trim())))?;
            let v: Node = b
                .trim()
                .parse()
                .map_err(|_| Error::parse(line_no, format!("invalid vertex `{}`", b.trim())))?;
            if u == v {
                return Err(Error::parse(line_no, format!("self-loop {u}-{v} is not allowed")));
            }
            for w in [u, v] {
                if w == 0 || w as usize > n {
                    return Err(Error::parse(line_no, format!("vertex {w} outside 1..={n}")));
                }
            }
            if g.has_edge(u, v) {
                return Err(Error::parse(line_no, format!("duplicate edge {u}-{v}")));
            }
            g.add_edge(u, v).expect("validated above");
        }
        match size {
            Some(_) => Ok(g),
            None => Err(Error::parse(1, "expected `n=<count>` header")),
        }
    }
}
