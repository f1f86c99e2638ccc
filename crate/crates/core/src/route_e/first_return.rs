//! First-return reduction of the section dynamics to one-dimensional lane
//! maps on explicit transversals, plus the closed-form return tables.

use crate::section::AffineSectionMap;
use crate::torus::{cycle_decomposition, Color};

use super::{
    assignment_for_variant, bulk_frame, check_modulus, signed_increment, CaseTag, RouteEError,
    Variant,
};

/// Working frame per color: colors 0 and 1 use the bulk frame with generic
/// step (u, t) -> (u, t + 1); color 2 uses (x, y) = (i, i + k) with generic
/// step (x, y) -> (x + 1, y - 1). The transversal is always {second = 0}.
pub fn working_frame(c: Color, m: usize) -> AffineSectionMap {
    match c {
        2 => AffineSectionMap::new(m, [[1, 0], [1, 1]], [0, 0]),
        _ => bulk_frame(c, m),
    }
}

fn generic_step(c: Color) -> (i64, i64) {
    if c == 2 { (1, -1) } else { (0, 1) }
}

/// Lane data of one color's first-return map on its transversal: target lane,
/// return time, and the ordered non-generic increments seen along the way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaneReturnData {
    pub color: Color,
    pub m: usize,
    pub variant: Variant,
    pub targets: Vec<usize>,
    pub times: Vec<usize>,
    pub itineraries: Vec<Vec<(i64, i64)>>,
}

impl LaneReturnData {
    pub fn rho_sum(&self) -> usize {
        self.times.iter().sum()
    }

    pub fn is_permutation(&self) -> bool {
        cycle_decomposition(self.m, |x| self.targets[x]).is_ok()
    }

    /// Cycles of the lane map T, if T is a permutation.
    pub fn lane_cycles(&self) -> Option<Vec<Vec<usize>>> {
        cycle_decomposition(self.m, |x| self.targets[x]).ok().map(|d| d.cycles)
    }

    pub fn is_single_cycle(&self) -> bool {
        self.lane_cycles().map_or(false, |cycles| cycles.len() == 1)
    }
}

/// The single-cycle certificate: T is one m-cycle and the return times sum to
/// m^2, so the section return map is a single m^2-cycle.
pub fn counting_check(data: &LaneReturnData) -> bool {
    data.is_single_cycle() && data.rho_sum() == data.m * data.m
}

/// Compute the first-return map of R_c on the transversal by iterating the
/// m-step section dynamics of the chosen variant in the working frame.
pub fn first_return(c: Color, m: usize, variant: Variant) -> Result<LaneReturnData, RouteEError> {
    let assign = assignment_for_variant(m, variant)?;
    let frame = working_frame(c, m);
    let rf = assign.return_map(c).conjugate(&frame);
    let gen = generic_step(c);
    let cap = m * m;
    let mut targets = Vec::with_capacity(m);
    let mut times = Vec::with_capacity(m);
    let mut itineraries = Vec::with_capacity(m);
    for lane in 0..m {
        let mut p = (lane, 0usize);
        let mut steps = 0usize;
        let mut itinerary = Vec::new();
        loop {
            let q = rf.apply(p);
            steps += 1;
            let delta = (
                signed_increment((q.0 + m - p.0) % m, m),
                signed_increment((q.1 + m - p.1) % m, m),
            );
            if delta != gen {
                itinerary.push(delta);
            }
            p = q;
            if p.1 == 0 {
                break;
            }
            if steps >= cap {
                return Err(RouteEError::NoReturn { lane, cap });
            }
        }
        targets.push(p.0);
        times.push(steps);
        itineraries.push(itinerary);
    }
    Ok(LaneReturnData { color: c, m, variant, targets, times, itineraries })
}

/// The closed-form lane tables for the actual construction.
pub fn first_return_closed_form(c: Color, m: usize) -> Result<LaneReturnData, RouteEError> {
    check_modulus(m)?;
    let case = CaseTag::for_modulus(m);
    let mut targets = Vec::with_capacity(m);
    let mut times = Vec::with_capacity(m);
    for x in 0..m {
        let (target, time) = match (c, case) {
            (2, _) => {
                if x == 0 {
                    (1, 1)
                } else if x == 1 {
                    (m - 1, m - 1)
                } else if x == 2 {
                    (0, 2 * m)
                } else {
                    (x - 1, m)
                }
            }
            (1, CaseTag::CaseI) => {
                if x == 0 {
                    (2, 1)
                } else if x == m - 3 {
                    (1, m + 3)
                } else if x == m - 2 {
                    (0, 1)
                } else if x == m - 1 {
                    (3, m + 3)
                } else {
                    (x + 3, m + 2)
                }
            }
            (1, CaseTag::CaseII) => {
                if x == 0 {
                    (2, 1)
                } else if x == 1 {
                    (3, 1)
                } else if x == 2 {
                    (5, m + 3)
                } else if x == m - 2 {
                    (0, 1)
                } else if x == m - 3 {
                    (4, m + 6)
                } else if x == m - 1 {
                    (7, m + 6)
                } else if x % 2 == 0 {
                    (x + 2, m + 2)
                } else {
                    ((x + 6) % m, m + 4)
                }
            }
            (0, CaseTag::CaseI) => {
                if x == 0 {
                    (m - 2, 1)
                } else if x == m - 4 {
                    (m - 1, m - 1)
                } else if x == m - 3 {
                    (2, 2 * m - 3)
                } else if x == m - 2 {
                    (1, 2 * m - 1)
                } else if x == m - 1 {
                    (0, m - 1)
                } else {
                    (x + 2, m - 1)
                }
            }
            (0, CaseTag::CaseII) => {
                if x == 0 {
                    (m - 2, 1)
                } else if x == 1 {
                    (4, m - 2)
                } else if x == 2 {
                    (6, m - 2)
                } else if x == m - 6 {
                    (3, 2 * m - 4)
                } else if x == m - 5 {
                    (m - 1, m - 1)
                } else if x == m - 4 {
                    (0, m - 2)
                } else if x == m - 3 {
                    (2, 2 * m - 3)
                } else if x == m - 2 {
                    (5, 2 * m - 4)
                } else if x == m - 1 {
                    (1, m - 1)
                } else {
                    (x + 4, m - 2)
                }
            }
            _ => panic!("color out of range: {c}"),
        };
        targets.push(target);
        times.push(time);
    }
    Ok(LaneReturnData {
        color: c,
        m,
        variant: Variant::Actual,
        targets,
        times,
        itineraries: vec![Vec::new(); m],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn actual_matches_closed_form_tables() {
        for m in (6..=24).step_by(2) {
            for c in 0..3 {
                let dynamic = first_return(c, m, Variant::Actual).unwrap();
                let table = first_return_closed_form(c, m).unwrap();
                assert_eq!(dynamic.targets, table.targets, "targets m={m} c={c}");
                assert_eq!(dynamic.times, table.times, "times m={m} c={c}");
            }
        }
    }

    #[test]
    fn counting_certificate_holds_for_actual() {
        for m in (6..=24).step_by(2) {
            for c in 0..3 {
                let data = first_return(c, m, Variant::Actual).unwrap();
                assert!(counting_check(&data), "m={m} c={c}");
                assert_eq!(data.rho_sum(), m * m);
            }
        }
    }

    #[test]
    fn m6_color2_golden_data() {
        let data = first_return(2, 6, Variant::Actual).unwrap();
        assert_eq!(data.targets, vec![1, 5, 0, 2, 3, 4]);
        assert_eq!(data.times, vec![1, 5, 12, 6, 6, 6]);
        assert_eq!(data.rho_sum(), 36);
    }

    #[test]
    fn m10_color1_golden_lane_cycle() {
        let data = first_return(1, 10, Variant::Actual).unwrap();
        let cycles = data.lane_cycles().unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0], vec![0, 2, 5, 1, 3, 9, 7, 4, 6, 8]);
        assert_eq!(data.times[3], 14);
    }

    #[test]
    fn m10_lane3_itinerary_stalls() {
        // lane 3, color 1: two +2 stalls (diagonal) and two +1 stalls
        let data = first_return(1, 10, Variant::Actual).unwrap();
        assert_eq!(data.itineraries[3], vec![(2, 0), (1, 0), (1, 0), (2, 0)]);
    }

    #[test]
    fn primary_color1_splits_into_three_residue_cycles() {
        for m in [10usize, 16, 22] {
            let data = first_return(1, m, Variant::Primary).unwrap();
            // Case I table irrespective of m mod 6
            for x in 0..m {
                let expect = if x == 0 {
                    2
                } else if x == m - 3 {
                    1
                } else if x == m - 2 {
                    0
                } else if x == m - 1 {
                    3
                } else {
                    x + 3
                };
                assert_eq!(data.targets[x], expect, "m={m} x={x}");
            }
            let cycles = data.lane_cycles().unwrap();
            assert_eq!(cycles.len(), 3, "m={m}");
        }
        let data = first_return(1, 10, Variant::Primary).unwrap();
        let cycles = data.lane_cycles().unwrap();
        assert_eq!(cycles, vec![vec![0, 2, 5, 8], vec![1, 4, 7], vec![3, 6, 9]]);
    }

    #[test]
    fn primary_colors_0_and_2_stay_single_cycles() {
        for m in [10usize, 16] {
            for c in [0usize, 2] {
                let data = first_return(c, m, Variant::Primary).unwrap();
                assert!(counting_check(&data), "m={m} c={c}");
            }
        }
    }

    #[test]
    fn deleted_repair_is_noninjective() {
        for m in [10usize, 16, 22] {
            let d1 = first_return(1, m, Variant::DeletedRepair).unwrap();
            assert_eq!(d1.targets[1], 3, "m={m}");
            assert_eq!(d1.targets[m - 1], 3, "m={m}");
            assert!(!d1.is_permutation());
            let d0 = first_return(0, m, Variant::DeletedRepair).unwrap();
            assert_eq!(d0.targets[1], 4, "m={m}");
            assert_eq!(d0.targets[2], 4, "m={m}");
            assert!(!d0.is_permutation());
        }
    }
}
