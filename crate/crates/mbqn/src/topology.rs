//! Builders for the stock resource-state shapes, plus the CLI-facing
//! topology selector.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Graph, Node};

/// The 1D cluster 1-2-...-n.
pub fn path_graph(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::EmptyVertexSet);
    }
    let mut g = Graph::with_vertices(1..=n as Node);
    for v in 1..n as Node {
        g.add_edge(v, v + 1)?;
    }
    Ok(g)
}

/// The n-cycle: the path closed up with the edge (1, n).
pub fn ring_graph(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidConfig(format!("a ring needs at least 3 vertices, got {n}")));
    }
    let mut g = path_graph(n)?;
    g.add_edge(1, n as Node)?;
    Ok(g)
}

pub fn triangle_graph() -> Graph {
    ring_graph(3).expect("three vertices make a ring")
}

/// Size-parameterized families the experiment driver can sweep over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TopologyFamily {
    Path,
    Ring,
}

impl TopologyFamily {
    pub fn build(self, n: usize) -> Result<Graph> {
        match self {
            TopologyFamily::Path => path_graph(n),
            TopologyFamily::Ring => ring_graph(n),
        }
    }
}

impl fmt::Display for TopologyFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopologyFamily::Path => write!(f, "path"),
            TopologyFamily::Ring => write!(f, "ring"),
        }
    }
}

impl FromStr for TopologyFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "path" => Ok(TopologyFamily::Path),
            "ring" => Ok(TopologyFamily::Ring),
            other => Err(Error::InvalidConfig(format!("unknown topology family `{other}`"))),
        }
    }
}

/// A single concrete topology, as named on the command line: `path:7`,
/// `ring:5`, `triangle`, or `custom:<file>` pointing at a graph literal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TopologySpec {
    Path(usize),
    Ring(usize),
    Triangle,
    CustomFile(String),
}

impl TopologySpec {
    pub fn build(&self) -> Result<Graph> {
        match self {
            TopologySpec::Path(n) => path_graph(*n),
            TopologySpec::Ring(n) => ring_graph(*n),
            TopologySpec::Triangle => Ok(triangle_graph()),
            TopologySpec::CustomFile(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Error::InvalidConfig(format!("cannot read graph literal `{path}`: {e}"))
                })?;
                Graph::parse_literal(&text)
            }
        }
    }
}

impl FromStr for TopologySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "triangle" {
            return Ok(TopologySpec::Triangle);
        }
        if let Some(file) = s.strip_prefix("custom:") {
            if file.is_empty() {
                return Err(Error::InvalidConfig("custom: needs a file path".into()));
            }
            return Ok(TopologySpec::CustomFile(file.to_string()));
        }
        let parse_size = |payload: &str, what: &str| {
            payload.parse::<usize>().map_err(|_| {
                Error::InvalidConfig(format!("{what} size must be an integer, got `{payload}`"))
            })
        };
        if let Some(n) = s.strip_prefix("path:") {
            return Ok(TopologySpec::Path(parse_size(n, "path")?));
        }
        if let Some(n) = s.strip_prefix("ring:") {
            return Ok(TopologySpec::Ring(parse_size(n, "ring")?));
        }
        Err(Error::InvalidConfig(format!(
            "unknown topology `{s}` (expected path:N, ring:N, triangle, or custom:FILE)"
        )))
    }
}
