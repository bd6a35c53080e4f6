//! Dense statevector oracle for small graph states. It exists to certify
//! the graphical measurement rules by brute force: build the amplitudes of
//! a graph state, apply a measurement projector, and confirm the reduced
//! state matches the graph produced by the rewrite rules, up to global
//! phase and local outcome corrections on the measured vertex's neighbors.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::{Graph, Node};
use crate::state::{PauliBasis, ResourceState};

/// Hard cap on statevector width.
pub const MAX_QUBITS: usize = 12;
/// Rule certification searches an 8-way correction per neighbor, so it is
/// restricted to graphs small enough for that search to stay exhaustive.
pub const MAX_CHECK_VERTICES: usize = 6;

const OVERLAP_TOL: f64 = 1e-9;

/// Measurement outcome sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }
}

/// Statevector over the vertices of a graph, in ascending vertex order with
/// the first (smallest) vertex on the most significant bit of the index.
#[derive(Clone, Debug)]
pub struct GraphStateVector {
    vertices: Vec<Node>,
    amps: Vec<Complex64>,
}

impl GraphStateVector {
    pub fn vertices(&self) -> &[Node] {
        &self.vertices
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn num_qubits(&self) -> usize {
        self.vertices.len()
    }

    /// Numeric bit position of vertex `v` in the amplitude index.
    fn bit_of(&self, v: Node) -> Result<usize> {
        let pos = self
            .vertices
            .iter()
            .position(|&w| w == v)
            .ok_or(Error::UnknownVertex(v))?;
        Ok(self.num_qubits() - 1 - pos)
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inner product `<self|other>`. Both states must live on the same
    /// vertex set.
    pub fn overlap(&self, other: &GraphStateVector) -> Complex64 {
        assert_eq!(self.vertices, other.vertices, "overlap needs matching vertex sets");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            for a in &mut self.amps {
                *a /= n;
            }
        }
        self
    }

    /// Contracts vertex `v` against a fixed single-qubit state, dropping it
    /// from the register. `single` is `[<0|phi>, <1|phi>]`.
    fn factor_out(&self, v: Node, single: [Complex64; 2]) -> Result<GraphStateVector> {
        let bit = self.bit_of(v)?;
        let mask_low = (1usize << bit) - 1;
        let mut amps = vec![Complex64::ZERO; self.amps.len() / 2];
        for (x, &a) in self.amps.iter().enumerate() {
            let b = (x >> bit) & 1;
            let reduced = ((x >> (bit + 1)) << bit) | (x & mask_low);
            amps[reduced] += single[b].conj() * a;
        }
        let vertices = self.vertices.iter().copied().filter(|&w| w != v).collect();
        Ok(GraphStateVector { vertices, amps }.normalized())
    }
}

/// Builds the graph state of `g`: a uniform superposition with a sign flip
/// for every edge whose two qubits are both 1.
pub fn build_graph_state(g: &Graph) -> Result<GraphStateVector> {
    let vertices: Vec<Node> = g.vertices().collect();
    let n = vertices.len();
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits { qubits: n, limit: MAX_QUBITS });
    }
    let dim = 1usize << n;
    let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
    let mut state = GraphStateVector { vertices, amps: vec![amp; dim] };
    for (u, v) in g.edges() {
        let mu = 1usize << state.bit_of(u)?;
        let mv = 1usize << state.bit_of(v)?;
        for (x, a) in state.amps.iter_mut().enumerate() {
            if x & mu != 0 && x & mv != 0 {
                *a = -*a;
            }
        }
    }
    Ok(state)
}

/// Result of applying a measurement projector.
#[derive(Clone, Debug)]
pub struct Projection {
    /// Born probability of the outcome.
    pub probability: f64,
    /// Renormalized post-measurement state; `None` when the outcome has
    /// probability zero, which is flagged instead of silently renormalized.
    pub state: Option<GraphStateVector>,
}

/// Applies the projector for `basis`/`outcome` on vertex `v`. The measured
/// qubit stays in the register, collapsed onto the outcome eigenstate.
pub fn measure_pauli(
    state: &GraphStateVector,
    v: Node,
    basis: PauliBasis,
    outcome: Outcome,
) -> Result<Projection> {
    let bit = state.bit_of(v)?;
    let mask = 1usize << bit;
    let s = outcome.sign();
    let mut amps = state.amps.clone();
    match basis {
        PauliBasis::Z => {
            // P = (I + s Z)/2 keeps bit 0 for +1 and bit 1 for -1
            let keep = if s > 0.0 { 0 } else { mask };
            for (x, a) in amps.iter_mut().enumerate() {
                if x & mask != keep {
                    *a = Complex64::ZERO;
                }
            }
        }
        PauliBasis::Y => {
            // P = (I + s Y)/2 mixes each bit pair: <0|Y|1> = -i, <1|Y|0> = i
            let i = Complex64::I;
            for x0 in 0..amps.len() {
                if x0 & mask != 0 {
                    continue;
                }
                let x1 = x0 | mask;
                let (a0, a1) = (state.amps[x0], state.amps[x1]);
                amps[x0] = (a0 - s * i * a1) / 2.0;
                amps[x1] = (a1 + s * i * a0) / 2.0;
            }
        }
    }
    let probability: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if probability < 1e-12 {
        return Ok(Projection { probability, state: None });
    }
    let scale = probability.sqrt();
    for a in &mut amps {
        *a /= scale;
    }
    Ok(Projection { probability, state: Some(GraphStateVector { vertices: state.vertices.clone(), amps }) })
}

/// Outcome eigenstate of the measured qubit, as `[<0|phi>, <1|phi>]`.
fn eigenstate(basis: PauliBasis, outcome: Outcome) -> [Complex64; 2] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    match (basis, outcome) {
        (PauliBasis::Z, Outcome::Plus) => [Complex64::ONE, Complex64::ZERO],
        (PauliBasis::Z, Outcome::Minus) => [Complex64::ZERO, Complex64::ONE],
        (PauliBasis::Y, Outcome::Plus) => [Complex64::new(r, 0.0), Complex64::new(0.0, r)],
        (PauliBasis::Y, Outcome::Minus) => [Complex64::new(r, 0.0), Complex64::new(0.0, -r)],
    }
}

/// Single-qubit correction: a diagonal or antidiagonal monomial matrix,
/// mapping `|b>` to `coef[b] |b ^ flip>`.
#[derive(Clone, Copy)]
struct Correction {
    flip: bool,
    coef: [Complex64; 2],
}

/// The search set per neighbor: identity, Z, S, S dagger, and X times each.
fn correction_set() -> [Correction; 8] {
    let one = Complex64::ONE;
    let i = Complex64::I;
    let diag = [
        [one, one],    // I
        [one, -one],   // Z
        [one, i],      // S
        [one, -i],     // S dagger
    ];
    let mut out = [Correction { flip: false, coef: [one, one] }; 8];
    for (k, &coef) in diag.iter().enumerate() {
        out[k] = Correction { flip: false, coef };
        out[k + 4] = Correction { flip: true, coef };
    }
    out
}

/// Overlap magnitude `|<target| C |reduced>|` for a per-neighbor correction
/// choice. Corrections are monomial, so each basis state maps to exactly
/// one other and the contraction stays a single pass.
fn corrected_overlap(
    target: &GraphStateVector,
    reduced: &GraphStateVector,
    bits: &[usize],
    choice: &[usize],
    set: &[Correction; 8],
) -> f64 {
    let mut flip_mask = 0usize;
    for (&bit, &c) in bits.iter().zip(choice) {
        if set[c].flip {
            flip_mask ^= 1 << bit;
        }
    }
    let mut acc = Complex64::ZERO;
    for (y, &r) in reduced.amps.iter().enumerate() {
        let mut f = Complex64::ONE;
        for (&bit, &c) in bits.iter().zip(choice) {
            f *= set[c].coef[(y >> bit) & 1];
        }
        acc += target.amps[y ^ flip_mask].conj() * f * r;
    }
    acc.norm()
}

/// Searches the correction set on the measured vertex's former neighbors
/// for one that maps `reduced` onto `target` up to global phase.
fn correction_search(target: &GraphStateVector, reduced: &GraphStateVector, bits: &[usize]) -> bool {
    let set = correction_set();
    if bits.is_empty() {
        return target.overlap(reduced).norm() >= 1.0 - OVERLAP_TOL;
    }
    // the physical byproducts are uniform across neighbors, so try those
    // eight combinations before the full product scan
    for c in 0..set.len() {
        let choice = vec![c; bits.len()];
        if corrected_overlap(target, reduced, bits, &choice, &set) >= 1.0 - OVERLAP_TOL {
            return true;
        }
    }
    let mut choice = vec![0usize; bits.len()];
    loop {
        if corrected_overlap(target, reduced, bits, &choice, &set) >= 1.0 - OVERLAP_TOL {
            return true;
        }
        let mut k = bits.len();
        loop {
            if k == 0 {
                return false;
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < set.len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

/// Certifies the graphical measurement rule on `(g, v, basis)` by dense
/// simulation: for both outcomes, project, factor out the measured qubit,
/// and match the remainder against the rewritten graph's state up to global
/// phase and one correction per former neighbor.
pub fn oracle_check_measure_rule(g: &Graph, v: Node, basis: PauliBasis) -> Result<bool> {
    let n = g.vertex_count();
    if n > MAX_CHECK_VERTICES {
        return Err(Error::TooManyQubits { qubits: n, limit: MAX_CHECK_VERTICES });
    }
    g.check_vertex(v)?;
    let full = build_graph_state(g)?;
    let rewritten = ResourceState::new(g.clone()).measure(v, basis)?;
    let target = build_graph_state(rewritten.graph())?;
    let neighbor_bits: Vec<usize> = g
        .neighbors(v)?
        .iter()
        .map(|&u| target.bit_of(u).expect("neighbors survive the measurement"))
        .collect();
    for outcome in [Outcome::Plus, Outcome::Minus] {
        let projection = measure_pauli(&full, v, basis, outcome)?;
        let Some(collapsed) = projection.state else {
            return Ok(false);
        };
        let reduced = collapsed.factor_out(v, eigenstate(basis, outcome))?;
        if !correction_search(&target, &reduced, &neighbor_bits) {
            return Ok(false);
        }
    }
    Ok(true)
}
