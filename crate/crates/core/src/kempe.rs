//! Kempe rewiring of valid colorings: the transfer permutation tau_{r,s},
//! swaps on unions of its cycles, the sign-product invariant, and the parity
//! obstruction for even moduli.

use thiserror::Error;

use crate::torus::{
    cycle_decomposition, vertex_count, Color, DirectionAssignment, NotAPermutation, Vertex, COLORS,
};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum KempeError {
    #[error("colors r and s must differ")]
    SameColors,
    #[error("assignment is not a valid coloring: {0}")]
    InvalidColoring(NotAPermutation),
    #[error("support is not a union of tau cycles: vertex index {vertex} maps outside")]
    SupportNotClosed { vertex: usize },
}

/// A set of vertices of D3(m), as a dense membership table.
#[derive(Clone, PartialEq, Eq)]
pub struct KempeSupport {
    m: usize,
    members: Vec<bool>,
}

impl KempeSupport {
    pub fn from_predicate(m: usize, f: impl Fn(Vertex) -> bool) -> Self {
        let members = (0..vertex_count(m)).map(|idx| f(Vertex::from_index(idx, m))).collect();
        KempeSupport { m, members }
    }

    pub fn empty(m: usize) -> Self {
        KempeSupport { m, members: vec![false; vertex_count(m)] }
    }

    /// The full layer plane P_t = { v : S(v) = t }.
    pub fn plane(m: usize, t: usize) -> Self {
        Self::from_predicate(m, |v| v.layer() == t % m)
    }

    /// The line L_t = { v : S(v) = t, k = 0 }.
    pub fn line(m: usize, t: usize) -> Self {
        Self::from_predicate(m, |v| v.layer() == t % m && v.k == 0)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn contains_index(&self, idx: usize) -> bool {
        self.members[idx]
    }

    pub fn contains(&self, v: Vertex) -> bool {
        assert_eq!(v.m, self.m, "mixed moduli");
        self.members[v.index()]
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&b| b)
    }
}

/// The transfer permutation tau_{r,s} = f_s^{-1} . f_r of a valid coloring,
/// as a dense table over vertex indices. It fixes every layer plane setwise.
pub fn kempe_map(
    assign: &DirectionAssignment,
    r: Color,
    s: Color,
) -> Result<Vec<usize>, KempeError> {
    if r == s {
        return Err(KempeError::SameColors);
    }
    let n = vertex_count(assign.m());
    let validity = assign.is_valid_coloring();
    if let Some(c) = validity.collisions.iter().flatten().next() {
        return Err(KempeError::InvalidColoring(*c));
    }
    let mut s_inv = vec![0usize; n];
    for idx in 0..n {
        s_inv[assign.step_index(s, idx)] = idx;
    }
    Ok((0..n).map(|idx| s_inv[assign.step_index(r, idx)]).collect())
}

/// Exchange the directions of colors r and s on a support X that is a union
/// of tau_{r,s}-cycles. Closure of X under tau is checked eagerly; validity
/// of the result is guaranteed and re-asserted in debug builds.
pub fn kempe_swap(
    assign: &DirectionAssignment,
    r: Color,
    s: Color,
    support: &KempeSupport,
) -> Result<DirectionAssignment, KempeError> {
    assert_eq!(assign.m(), support.m(), "mixed moduli");
    let tau = kempe_map(assign, r, s)?;
    for idx in 0..tau.len() {
        if support.contains_index(idx) && !support.contains_index(tau[idx]) {
            return Err(KempeError::SupportNotClosed { vertex: idx });
        }
    }
    let m = assign.m();
    let mut out = assign.clone();
    for idx in 0..tau.len() {
        if support.contains_index(idx) {
            let v = Vertex::from_index(idx, m);
            out.set_triple(v, assign.triple_at(v).swapped(r, s));
        }
    }
    debug_assert!(out.is_valid_coloring().is_valid());
    Ok(out)
}

/// Product over the three colors of the sign of f_c as a permutation of the
/// vertex set. Invariant under Kempe swaps.
pub fn sign_product(assign: &DirectionAssignment) -> Result<i32, KempeError> {
    let n = vertex_count(assign.m());
    let mut product = 1;
    for c in COLORS {
        let dec = cycle_decomposition(n, |idx| assign.step_index(c, idx))
            .map_err(KempeError::InvalidColoring)?;
        product *= dec.sign();
    }
    Ok(product)
}

pub fn color_signs(assign: &DirectionAssignment) -> Result<[i32; 3], KempeError> {
    let n = vertex_count(assign.m());
    let mut signs = [1; 3];
    for c in COLORS {
        let dec = cycle_decomposition(n, |idx| assign.step_index(c, idx))
            .map_err(KempeError::InvalidColoring)?;
        signs[c] = dec.sign();
    }
    Ok(signs)
}

/// Whether the sign invariant separates the canonical coloring from Hamilton
/// decompositions at modulus m.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParityBarrierReport {
    pub m: usize,
    /// Sign product of the canonical coloring: 3 m^2 cycles of length m.
    pub canonical_sign_product: i32,
    /// Sign product any Hamilton decomposition must have: three m^3-cycles.
    pub hamilton_sign_product: i32,
    /// True iff the two differ, i.e. no sequence of Kempe swaps can reach a
    /// Hamilton decomposition from the canonical coloring.
    pub obstruction: bool,
}

pub fn parity_barrier_report(m: usize) -> ParityBarrierReport {
    // Each canonical color class is m^2 cycles of length m: sign (-1)^((m-1) m^2).
    let canonical_color = if (m - 1) * m * m % 2 == 0 { 1 } else { -1 };
    // A Hamilton color class is one m^3-cycle: sign (-1)^(m^3 - 1).
    let hamilton_color = if (m * m * m - 1) % 2 == 0 { 1 } else { -1 };
    let canonical = canonical_color * canonical_color * canonical_color;
    let hamilton = hamilton_color * hamilton_color * hamilton_color;
    ParityBarrierReport {
        m,
        canonical_sign_product: canonical,
        hamilton_sign_product: hamilton,
        obstruction: canonical != hamilton,
    }
}

impl std::fmt::Display for ParityBarrierReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "m = {}", self.m)?;
        writeln!(f, "canonical sign product: {:+}", self.canonical_sign_product)?;
        writeln!(f, "hamilton sign product:  {:+}", self.hamilton_sign_product)?;
        if self.obstruction {
            write!(f, "parity obstruction: Kempe swaps cannot reach a Hamilton decomposition from the canonical coloring")
        } else {
            write!(f, "no parity obstruction")
        }
    }
}
