//! Maps on the m x m section lattice (Z_m)^2, used for zero-layer return maps,
//! odometers, bulk-frame conjugations and lane dynamics.

use crate::torus::{cycle_decomposition, CycleDecomposition, NotAPermutation};

pub type Point = (usize, usize);

/// A total map (Z_m)^2 -> (Z_m)^2 stored as a dense table over the index
/// a*m + b for the point (a, b). Not required to be a bijection.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SectionMap {
    m: usize,
    table: Vec<usize>,
}

impl SectionMap {
    pub fn from_fn(m: usize, f: impl Fn(usize, usize) -> Point) -> Self {
        let mut table = Vec::with_capacity(m * m);
        for a in 0..m {
            for b in 0..m {
                let (a2, b2) = f(a, b);
                table.push((a2 % m) * m + b2 % m);
            }
        }
        SectionMap { m, table }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn apply(&self, p: Point) -> Point {
        let q = self.table[p.0 * self.m + p.1];
        (q / self.m, q % self.m)
    }

    pub fn apply_index(&self, idx: usize) -> usize {
        self.table[idx]
    }

    pub fn iterate(&self, p: Point, n: usize) -> Point {
        let mut q = p;
        for _ in 0..n {
            q = self.apply(q);
        }
        q
    }

    pub fn cycle_decomposition(&self) -> Result<CycleDecomposition, NotAPermutation> {
        cycle_decomposition(self.m * self.m, |idx| self.table[idx])
    }

    pub fn is_bijective(&self) -> bool {
        self.cycle_decomposition().is_ok()
    }

    /// self after other: (self . other)(p) = self(other(p)).
    pub fn compose(&self, other: &SectionMap) -> SectionMap {
        assert_eq!(self.m, other.m, "mixed moduli");
        SectionMap {
            m: self.m,
            table: other.table.iter().map(|&q| self.table[q]).collect(),
        }
    }

    /// Conjugate by an affine change of frame: phi . self . phi^{-1}.
    pub fn conjugate(&self, phi: &AffineSectionMap) -> SectionMap {
        assert_eq!(self.m, phi.m, "mixed moduli");
        let inv = phi.inverse().expect("frame map must be invertible");
        SectionMap::from_fn(self.m, |a, b| phi.apply(self.apply(inv.apply((a, b)))))
    }
}

/// An affine map p -> M p + b on (Z_m)^2, entries stored reduced.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct AffineSectionMap {
    pub m: usize,
    pub mat: [[usize; 2]; 2],
    pub trans: [usize; 2],
}

impl AffineSectionMap {
    pub fn new(m: usize, mat: [[i64; 2]; 2], trans: [i64; 2]) -> Self {
        let r = |x: i64| x.rem_euclid(m as i64) as usize;
        AffineSectionMap {
            m,
            mat: [[r(mat[0][0]), r(mat[0][1])], [r(mat[1][0]), r(mat[1][1])]],
            trans: [r(trans[0]), r(trans[1])],
        }
    }

    pub fn apply(&self, p: Point) -> Point {
        let m = self.m;
        (
            (self.mat[0][0] * p.0 + self.mat[0][1] * p.1 + self.trans[0]) % m,
            (self.mat[1][0] * p.0 + self.mat[1][1] * p.1 + self.trans[1]) % m,
        )
    }

    pub fn det(&self) -> usize {
        let m = self.m as i64;
        let d = (self.mat[0][0] * self.mat[1][1]) as i64 - (self.mat[0][1] * self.mat[1][0]) as i64;
        d.rem_euclid(m) as usize
    }

    pub fn inverse(&self) -> Option<AffineSectionMap> {
        let dinv = mod_inverse(self.det(), self.m)? as i64;
        let [[a, b], [c, d]] = self.mat.map(|row| row.map(|x| x as i64));
        let mat = [[dinv * d, -dinv * b], [-dinv * c, dinv * a]];
        // inverse translation: -M^{-1} t
        let t0 = -(mat[0][0] * self.trans[0] as i64 + mat[0][1] * self.trans[1] as i64);
        let t1 = -(mat[1][0] * self.trans[0] as i64 + mat[1][1] * self.trans[1] as i64);
        Some(AffineSectionMap::new(self.m, mat, [t0, t1]))
    }

    pub fn to_section_map(&self) -> SectionMap {
        SectionMap::from_fn(self.m, |a, b| self.apply((a, b)))
    }
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Inverse of a modulo m, if gcd(a, m) = 1.
pub fn mod_inverse(a: usize, m: usize) -> Option<usize> {
    let (mut r0, mut r1) = (m as i64, (a % m) as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 == 1 { Some(s0.rem_euclid(m as i64) as usize) } else { None }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod_inverse_basics() {
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(2, 6), None);
        for m in [3usize, 5, 7, 9, 11] {
            let lam = mod_inverse(m - 2, m).unwrap();
            assert_eq!((lam * (m - 2)) % m, 1);
        }
    }

    #[test]
    fn affine_inverse_round_trip() {
        let m = 9;
        let phi = AffineSectionMap::new(m, [[1, 2], [0, 1]], [3, 4]);
        let inv = phi.inverse().unwrap();
        for a in 0..m {
            for b in 0..m {
                assert_eq!(inv.apply(phi.apply((a, b))), (a, b));
            }
        }
    }

    #[test]
    fn conjugation_transports_dynamics() {
        let m = 7;
        let shift = SectionMap::from_fn(m, |a, b| (a, (b + 1) % m));
        let phi = AffineSectionMap::new(m, [[2, 1], [1, 1]], [0, 3]);
        let conj = shift.conjugate(&phi);
        for a in 0..m {
            for b in 0..m {
                let p = (a, b);
                assert_eq!(conj.apply(phi.apply(p)), phi.apply(shift.apply(p)));
            }
        }
    }

    #[test]
    fn compose_order() {
        let m = 5;
        let f = SectionMap::from_fn(m, |a, b| ((a + 1) % m, b));
        let g = SectionMap::from_fn(m, |a, b| (a, (b + 2) % m));
        let fg = f.compose(&g);
        assert_eq!(fg.apply((0, 0)), (1, 2));
    }
}
