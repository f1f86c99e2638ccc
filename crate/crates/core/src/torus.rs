//! Core types for the directed 3-torus D3(m) = Cay((Z_m)^3, {e1, e2, e3}):
//! vertices, direction triples, direction assignments, cycle decomposition of
//! finite self-maps, and validity checks for arc colorings.

use thiserror::Error;

/// Arc colors are always 0, 1 or 2.
pub type Color = usize;

pub const COLORS: [Color; 3] = [0, 1, 2];

/// Smallest modulus for which the decomposition problem is posed.
pub const MIN_MODULUS: usize = 3;

pub fn vertex_count(m: usize) -> usize {
    m * m * m
}

/// A point of (Z_m)^3 carrying its modulus. Coordinates are reduced
/// representatives in 0..m. Mixing vertices of different moduli is a bug and
/// panics.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct Vertex {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub m: usize,
}

impl Vertex {
    pub fn new(i: usize, j: usize, k: usize, m: usize) -> Self {
        assert!(m >= 1, "modulus must be positive");
        Vertex { i: i % m, j: j % m, k: k % m, m }
    }

    /// Dense row-major index i*m^2 + j*m + k.
    pub fn index(&self) -> usize {
        (self.i * self.m + self.j) * self.m + self.k
    }

    pub fn from_index(idx: usize, m: usize) -> Self {
        debug_assert!(idx < vertex_count(m));
        Vertex { i: idx / (m * m), j: (idx / m) % m, k: idx % m, m }
    }

    /// Layer S(v) = i + j + k mod m. Every arc of D3(m) raises it by one.
    pub fn layer(&self) -> usize {
        (self.i + self.j + self.k) % self.m
    }

    /// Add the unit vector in coordinate direction `dir` (0 -> i, 1 -> j, 2 -> k).
    pub fn bump(&self, dir: usize) -> Vertex {
        let m = self.m;
        let inc = |x: usize| if x + 1 == m { 0 } else { x + 1 };
        match dir {
            0 => Vertex { i: inc(self.i), ..*self },
            1 => Vertex { j: inc(self.j), ..*self },
            2 => Vertex { k: inc(self.k), ..*self },
            _ => panic!("direction out of range: {dir}"),
        }
    }

    pub fn coords(&self) -> [usize; 3] {
        [self.i, self.j, self.k]
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("direction triple ({0}, {1}, {2}) is not a permutation of (0, 1, 2)")]
pub struct TripleNotPermutation(pub usize, pub usize, pub usize);

/// The per-vertex datum of a direction assignment: which coordinate direction
/// each color leaves by. Always a permutation of (0, 1, 2).
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct DirectionTriple {
    d: [u8; 3],
}

impl DirectionTriple {
    pub fn new(d0: usize, d1: usize, d2: usize) -> Result<Self, TripleNotPermutation> {
        let mut seen = [false; 3];
        for d in [d0, d1, d2] {
            if d > 2 || seen[d] {
                return Err(TripleNotPermutation(d0, d1, d2));
            }
            seen[d] = true;
        }
        Ok(DirectionTriple { d: [d0 as u8, d1 as u8, d2 as u8] })
    }

    /// The identity triple: color c leaves in direction c.
    pub const CANONICAL: DirectionTriple = DirectionTriple { d: [0, 1, 2] };

    pub fn direction(&self, c: Color) -> usize {
        self.d[c] as usize
    }

    /// The triple with the directions of colors r and s exchanged.
    pub fn swapped(&self, r: Color, s: Color) -> DirectionTriple {
        let mut d = self.d;
        d.swap(r, s);
        DirectionTriple { d }
    }

    /// Three-character word "d0d1d2".
    pub fn word(&self) -> String {
        self.d.iter().map(|d| char::from(b'0' + d)).collect()
    }

    pub fn from_word(w: &str) -> Result<Self, TripleNotPermutation> {
        let ds: Vec<usize> = w
            .chars()
            .map(|ch| ch.to_digit(10).map(|d| d as usize).unwrap_or(9))
            .collect();
        if ds.len() != 3 {
            return Err(TripleNotPermutation(9, 9, 9));
        }
        DirectionTriple::new(ds[0], ds[1], ds[2])
    }
}

/// A choice of direction triple at every vertex of D3(m), stored densely in
/// index order. Induces the three color maps f_c(v) = v + e_{d_c(v)}.
/// Debug prints only the modulus: the table has m^3 entries.
#[derive(Clone, PartialEq, Eq)]
pub struct DirectionAssignment {
    m: usize,
    triples: Vec<DirectionTriple>,
}

impl DirectionAssignment {
    pub fn from_fn(m: usize, f: impl Fn(Vertex) -> DirectionTriple) -> Self {
        assert!(m >= MIN_MODULUS, "modulus {m} below minimum {MIN_MODULUS}");
        let n = vertex_count(m);
        let mut triples = Vec::with_capacity(n);
        for idx in 0..n {
            triples.push(f(Vertex::from_index(idx, m)));
        }
        DirectionAssignment { m, triples }
    }

    pub fn from_triples(m: usize, triples: Vec<DirectionTriple>) -> Self {
        assert!(m >= MIN_MODULUS, "modulus {m} below minimum {MIN_MODULUS}");
        assert_eq!(triples.len(), vertex_count(m));
        DirectionAssignment { m, triples }
    }

    /// Every vertex gets the identity triple; each color decomposes into m^2
    /// parallel m-cycles.
    pub fn canonical(m: usize) -> Self {
        Self::from_fn(m, |_| DirectionTriple::CANONICAL)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn triple_at(&self, v: Vertex) -> DirectionTriple {
        assert_eq!(v.m, self.m, "mixed moduli: vertex mod {} vs assignment mod {}", v.m, self.m);
        self.triples[v.index()]
    }

    pub fn triple_at_index(&self, idx: usize) -> DirectionTriple {
        self.triples[idx]
    }

    pub fn set_triple(&mut self, v: Vertex, t: DirectionTriple) {
        assert_eq!(v.m, self.m, "mixed moduli");
        self.triples[v.index()] = t;
    }

    /// One step of color c from v.
    pub fn color_step(&self, c: Color, v: Vertex) -> Vertex {
        v.bump(self.triple_at(v).direction(c))
    }

    /// Index-level color step, for hot loops.
    pub fn step_index(&self, c: Color, idx: usize) -> usize {
        let m = self.m;
        let mm = m * m;
        match self.triples[idx].direction(c) {
            0 => {
                let i = idx / mm;
                if i + 1 == m { idx - i * mm } else { idx + mm }
            }
            1 => {
                let j = (idx / m) % m;
                if j + 1 == m { idx - j * m } else { idx + m }
            }
            _ => {
                let k = idx % m;
                if k + 1 == m { idx - k } else { idx + 1 }
            }
        }
    }

    /// True if every color map is a bijection, i.e. the assignment is a valid
    /// coloring whose color classes partition the arcs of D3(m).
    pub fn is_valid_coloring(&self) -> ValidityReport {
        let n = vertex_count(self.m);
        let mut collisions: [Option<NotAPermutation>; 3] = [None, None, None];
        for c in COLORS {
            collisions[c] = cycle_decomposition(n, |idx| self.step_index(c, idx)).err();
        }
        ValidityReport { collisions }
    }

    /// Section return map f_c^m restricted to the zero layer P0, parameterized
    /// by (i, k) with j = -(i + k). Because every arc raises the layer by one,
    /// this m-step iterate equals the composition of the m per-layer maps.
    pub fn return_map(&self, c: Color) -> crate::section::SectionMap {
        let m = self.m;
        crate::section::SectionMap::from_fn(m, |i, k| {
            let j = (2 * m - (i + k) % m) % m;
            let mut idx = Vertex::new(i, j, k, m).index();
            for _ in 0..m {
                idx = self.step_index(c, idx);
            }
            let v = Vertex::from_index(idx, m);
            debug_assert_eq!(v.layer(), 0);
            (v.i, v.k)
        })
    }

    /// Coloring validity checked through the section: each color map is a
    /// bijection iff its return map on P0 is (the m per-layer maps compose to
    /// the return map, and a composition of maps between equal finite sets is
    /// bijective iff every factor is).
    pub fn validity_via_return(&self) -> bool {
        COLORS.iter().all(|&c| self.return_map(c).is_bijective())
    }
}

impl std::fmt::Debug for DirectionAssignment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DirectionAssignment").field("m", &self.m).finish_non_exhaustive()
    }
}

/// Witness that a map on 0..n is not injective: `first < second` are the two
/// smallest-index preimages of `image`.
#[derive(Error, Debug, Clone, Copy, PartialEq, Eq)]
#[error("not a permutation: indices {first} and {second} both map to {image}")]
pub struct NotAPermutation {
    pub first: usize,
    pub second: usize,
    pub image: usize,
}

/// Orbit structure of a permutation of 0..n. Cycles are listed in order of
/// their smallest element; each cycle starts at its smallest element.
#[derive(Clone, Debug)]
pub struct CycleDecomposition {
    pub cycles: Vec<Vec<usize>>,
    pub element_count: usize,
}

impl CycleDecomposition {
    pub fn cycle_count(&self) -> usize {
        self.cycles.len()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.cycles.iter().map(|c| c.len()).collect()
    }

    pub fn is_single_cycle(&self) -> bool {
        self.cycles.len() == 1
    }

    /// Sign as a permutation: the product over cycles of (-1)^(len-1).
    pub fn sign(&self) -> i32 {
        if (self.element_count - self.cycles.len()) % 2 == 0 { 1 } else { -1 }
    }
}

/// Decompose `step` on the domain 0..n into cycles, or report the first
/// injectivity failure in index order.
pub fn cycle_decomposition(
    n: usize,
    step: impl Fn(usize) -> usize,
) -> Result<CycleDecomposition, NotAPermutation> {
    let mut preimage: Vec<usize> = vec![usize::MAX; n];
    for v in 0..n {
        let w = step(v);
        assert!(w < n, "map leaves domain: {v} -> {w}");
        if preimage[w] != usize::MAX {
            return Err(NotAPermutation { first: preimage[w], second: v, image: w });
        }
        preimage[w] = v;
    }
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut v = step(start);
        while v != start {
            seen[v] = true;
            cycle.push(v);
            v = step(v);
        }
        cycles.push(cycle);
    }
    Ok(CycleDecomposition { cycles, element_count: n })
}

pub fn permutation_sign(dec: &CycleDecomposition) -> i32 {
    dec.sign()
}

/// Per-color injectivity verdicts for a direction assignment.
#[derive(Debug, Clone)]
pub struct ValidityReport {
    pub collisions: [Option<NotAPermutation>; 3],
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.collisions.iter().all(|c| c.is_none())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layer_and_bump() {
        let v = Vertex::new(1, 2, 4, 5);
        assert_eq!(v.layer(), 2);
        assert_eq!(v.bump(2), Vertex::new(1, 2, 0, 5));
        assert_eq!(v.bump(2).layer(), 3);
        for dir in 0..3 {
            assert_eq!(v.bump(dir).layer(), (v.layer() + 1) % 5);
        }
    }

    #[test]
    fn dense_index_round_trip() {
        let m = 6;
        for idx in 0..vertex_count(m) {
            assert_eq!(Vertex::from_index(idx, m).index(), idx);
        }
        assert_eq!(Vertex::new(1, 2, 3, 6).index(), 36 + 12 + 3);
    }

    #[test]
    fn triple_rejects_non_permutations() {
        assert!(DirectionTriple::new(0, 0, 1).is_err());
        assert!(DirectionTriple::new(0, 1, 3).is_err());
        let t = DirectionTriple::new(2, 0, 1).unwrap();
        assert_eq!(t.word(), "201");
        assert_eq!(DirectionTriple::from_word("201").unwrap(), t);
        assert_eq!(t.swapped(0, 2).word(), "102");
    }

    #[test]
    fn canonical_coloring_is_parallel_cycles() {
        let m = 4;
        let a = DirectionAssignment::canonical(m);
        assert!(a.is_valid_coloring().is_valid());
        for c in COLORS {
            let dec = cycle_decomposition(vertex_count(m), |idx| a.step_index(c, idx)).unwrap();
            assert_eq!(dec.cycle_count(), m * m);
            assert!(dec.lengths().iter().all(|&l| l == m));
        }
    }

    #[test]
    fn collision_witness_is_first_in_index_order() {
        // constant map: 0 and 1 both hit 0
        let err = cycle_decomposition(4, |_| 0).unwrap_err();
        assert_eq!(err, NotAPermutation { first: 0, second: 1, image: 0 });
    }

    #[test]
    fn sign_of_small_cycles() {
        let dec = cycle_decomposition(3, |v| (v + 1) % 3).unwrap(); // one 3-cycle
        assert_eq!(dec.sign(), 1);
        let dec = cycle_decomposition(4, |v| v ^ 1).unwrap(); // two transpositions
        assert_eq!(dec.sign(), 1);
        let dec = cycle_decomposition(2, |v| v ^ 1).unwrap(); // one transposition
        assert_eq!(dec.sign(), -1);
    }

    #[test]
    fn validity_checks_agree_on_canonical() {
        for m in [3, 4, 5] {
            let a = DirectionAssignment::canonical(m);
            assert!(a.is_valid_coloring().is_valid());
            assert!(a.validity_via_return());
        }
    }

    #[test]
    #[should_panic(expected = "mixed moduli")]
    fn mixed_modulus_is_an_error() {
        let a = DirectionAssignment::canonical(4);
        let _ = a.triple_at(Vertex::new(0, 0, 0, 5));
    }
}
