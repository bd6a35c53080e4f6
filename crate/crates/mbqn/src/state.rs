//! Graph states under single-qubit Pauli measurements, tracked purely
//! graphically. Measuring a qubit in Z deletes its vertex; measuring in Y
//! locally complements at the vertex first and then deletes it. Outcome
//! byproducts are local corrections on the neighbors and never change the
//! resulting graph, so they are not tracked here (the statevector oracle
//! certifies exactly this).

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, Node};

/// Measurement basis for a single qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliBasis {
    Z,
    Y,
}

impl fmt::Display for PauliBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PauliBasis::Z => write!(f, "Z"),
            PauliBasis::Y => write!(f, "Y"),
        }
    }
}

/// A graph state together with the record of which qubits have been
/// measured away. Consumed vertices are gone from the graph and can never
/// re-enter it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResourceState {
    graph: Graph,
    consumed: BTreeSet<Node>,
}

impl ResourceState {
    pub fn new(graph: Graph) -> Self {
        Self { graph, consumed: BTreeSet::new() }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn consumed(&self) -> &BTreeSet<Node> {
        &self.consumed
    }

    pub fn is_consumed(&self, v: Node) -> bool {
        self.consumed.contains(&v)
    }

    /// Measures qubit `v` in the given basis and returns the rewritten
    /// state. A vertex can be measured at most once.
    pub fn measure(&self, v: Node, basis: PauliBasis) -> Result<ResourceState> {
        if self.is_consumed(v) {
            return Err(Error::AlreadyConsumed(v));
        }
        let graph = match basis {
            PauliBasis::Z => self.graph.delete_vertex(v)?,
            PauliBasis::Y => self.graph.local_complement(v)?.delete_vertex(v)?,
        };
        let mut consumed = self.consumed.clone();
        consumed.insert(v);
        Ok(ResourceState { graph, consumed })
    }

    /// Removes an existing edge without consuming either endpoint. This is
    /// the graphical effect of splicing a fresh EPR pair into the state; the
    /// caller accounts for the one-pair cost.
    pub fn fission_remove_edge(&self, u: Node, v: Node) -> Result<ResourceState> {
        self.graph.check_vertex(u)?;
        self.graph.check_vertex(v)?;
        if !self.graph.has_edge(u, v) {
            return Err(Error::MissingEdge(u, v));
        }
        Ok(ResourceState { graph: self.graph.toggle_edge(u, v)?, consumed: self.consumed.clone() })
    }
}
