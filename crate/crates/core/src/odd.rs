//! The five-swap witness and its closed form: a valid coloring for every
//! m >= 3 whose return maps are affine odometers. Hamilton for odd m; for
//! even m color 2 shatters into m + 2 cycles, which motivates the dedicated
//! even construction.

use thiserror::Error;

use crate::kempe::{kempe_swap, KempeError, KempeSupport};
use crate::section::{gcd, mod_inverse, AffineSectionMap, SectionMap};
use crate::torus::{Color, DirectionAssignment, DirectionTriple};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum OddError {
    #[error("modulus {0} must be odd")]
    EvenModulus(usize),
    #[error("modulus {0} must be even")]
    OddModulus(usize),
    #[error("clock step {d} is not a unit modulo {m}")]
    ClockNotUnit { d: usize, m: usize },
}

/// The witness built literally as five Kempe swaps from the canonical
/// coloring. Valid for every m >= 3.
pub fn five_swap_coloring(m: usize) -> Result<DirectionAssignment, KempeError> {
    let a = DirectionAssignment::canonical(m);
    let a = kempe_swap(&a, 0, 1, &KempeSupport::line(m, 0))?;
    let a = kempe_swap(&a, 0, 2, &KempeSupport::plane(m, 0))?;
    let a = kempe_swap(&a, 0, 1, &KempeSupport::plane(m, 0))?;
    let a = kempe_swap(&a, 0, 1, &KempeSupport::line(m, 1))?;
    kempe_swap(&a, 0, 2, &KempeSupport::plane(m, 1))
}

/// The same coloring written directly, without performing any swaps.
pub fn odd_closed_form(m: usize) -> DirectionAssignment {
    let t = |d0, d1, d2| DirectionTriple::new(d0, d1, d2).unwrap();
    DirectionAssignment::from_fn(m, |v| match (v.layer(), v.k == 0) {
        (0, true) => t(0, 2, 1),
        (0, false) => t(1, 2, 0),
        (1, true) => t(2, 0, 1),
        (1, false) => t(2, 1, 0),
        _ => DirectionTriple::CANONICAL,
    })
}

/// The standard two-dimensional odometer O(u, v) = (u + 1, v + [u = 0]),
/// a single m^2-cycle.
pub fn odometer(m: usize) -> SectionMap {
    SectionMap::from_fn(m, |u, v| ((u + 1) % m, (v + usize::from(u == 0)) % m))
}

/// Closed form of the return map F_c = f_c^m restricted to P0, in the (i, k)
/// parameterization, for the coloring of `odd_closed_form` (any m >= 3).
pub fn return_map_closed_form(c: Color, m: usize) -> SectionMap {
    match c {
        0 => SectionMap::from_fn(m, |i, k| {
            ((i + m - 2 + usize::from(k == 0)) % m, (k + 1) % m)
        }),
        1 => SectionMap::from_fn(m, |i, k| {
            ((i + usize::from(k == m - 1)) % m, (k + 1) % m)
        }),
        2 => SectionMap::from_fn(m, |i, k| {
            ((i + 2 + m - 2 * usize::from(k == 0)) % m, (k + m - 2) % m)
        }),
        _ => panic!("color out of range: {c}"),
    }
}

/// The affine change of coordinates with psi_c . F_c = O . psi_c. Exists for
/// odd m only (it needs (-2) to be invertible).
pub fn psi(c: Color, m: usize) -> Result<AffineSectionMap, OddError> {
    let lambda = mod_inverse(m - 2, m).ok_or(OddError::EvenModulus(m))? as i64;
    Ok(match c {
        0 => AffineSectionMap::new(m, [[0, 1], [1, 2]], [0, 0]),
        1 => AffineSectionMap::new(m, [[0, 1], [1, 0]], [1, 0]),
        2 => AffineSectionMap::new(m, [[0, lambda], [lambda, lambda]], [0, 0]),
        _ => panic!("color out of range: {c}"),
    })
}

/// Orbit census of the odd-form coloring at an even modulus: colors 0 and 1
/// stay Hamilton, color 2 shatters into m + 2 cycles, split between the two
/// k-parity halves of the section.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShatterReport {
    pub m: usize,
    /// Directed cycle count of each color class on the full vertex set.
    /// Equals the section-level count of the return map.
    pub color_cycle_counts: [usize; 3],
    /// Lengths of the color-2 section orbits lying in the odd-k half.
    pub odd_half_lengths: Vec<usize>,
    /// Lengths of the color-2 section orbits lying in the even-k half.
    pub even_half_lengths: Vec<usize>,
}

pub fn even_shatter_analysis(m: usize) -> Result<ShatterReport, OddError> {
    if m % 2 != 0 {
        return Err(OddError::OddModulus(m));
    }
    let assign = odd_closed_form(m);
    let mut counts = [0usize; 3];
    let mut odd_half = Vec::new();
    let mut even_half = Vec::new();
    for c in 0..3 {
        let dec = assign
            .return_map(c)
            .cycle_decomposition()
            .expect("odd-form coloring is valid at every m");
        counts[c] = dec.cycle_count();
        if c == 2 {
            for cyc in &dec.cycles {
                // k is the second section coordinate; its parity is constant
                // along each color-2 orbit when m is even.
                let parities: Vec<usize> = cyc.iter().map(|idx| (idx % m) % 2).collect();
                assert!(parities.windows(2).all(|w| w[0] == w[1]));
                if parities[0] == 1 {
                    odd_half.push(cyc.len());
                } else {
                    even_half.push(cyc.len());
                }
            }
        }
    }
    Ok(ShatterReport {
        m,
        color_cycle_counts: counts,
        odd_half_lengths: odd_half,
        even_half_lengths: even_half,
    })
}

/// Orbit data of the skew product F(i, k) = (i + alpha(k), k + d) for a unit
/// clock step d.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClockCarry {
    pub m: usize,
    /// Total carry over one clock revolution.
    pub delta: usize,
    /// Common length of every orbit: m^2 / gcd(delta, m).
    pub orbit_length: usize,
    pub single_cycle: bool,
}

pub fn clock_and_carry(
    m: usize,
    d: usize,
    alpha: &dyn Fn(usize) -> usize,
) -> Result<ClockCarry, OddError> {
    if gcd(d % m, m) != 1 {
        return Err(OddError::ClockNotUnit { d: d % m, m });
    }
    let delta = (0..m).map(|t| alpha(t) % m).sum::<usize>() % m;
    let g = gcd(delta, m);
    let orbit_length = m * m / g;
    Ok(ClockCarry { m, delta, orbit_length, single_cycle: g == 1 })
}
