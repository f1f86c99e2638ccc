//! The even construction: a low-layer direction assignment whose return maps
//! on P0 are finite-defect perturbations of the odometer. Layers S >= 3 stay
//! canonical; layers 1 and 2 carry one branch each; layer 0 carries the
//! defect families, which depend on m mod 6 (Case I: m = 0, 2 mod 6, Case II:
//! m = 4 mod 6).

pub mod first_return;
pub mod splice;

use std::collections::HashMap;

use thiserror::Error;

use crate::section::{AffineSectionMap, SectionMap};
use crate::torus::{Color, DirectionAssignment, DirectionTriple, Vertex};

pub use first_return::{counting_check, first_return, first_return_closed_form, LaneReturnData};
pub use splice::{splice_blocks, SpliceData};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum RouteEError {
    #[error("modulus {0} must be even and at least 6")]
    BadModulus(usize),
    #[error("the deleted-repair variant needs m = 4 (mod 6), m >= 10; got {0}")]
    BadDeletedRepairModulus(usize),
    #[error("layer-0 special sets overlap at ({0}, {1}, {2})")]
    PartitionOverlap(usize, usize, usize),
    #[error("unclassified defect step at (u, t) = ({u}, {t}): increment ({du}, {dt})")]
    UnclassifiedDefect { u: usize, t: usize, du: i64, dt: i64 },
    #[error("no return to the transversal from lane {lane} within {cap} steps")]
    NoReturn { lane: usize, cap: usize },
    #[error("block structure mismatch for color {color}: {detail}")]
    BlockMismatch { color: usize, detail: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    CaseI,
    CaseII,
}

impl CaseTag {
    pub fn for_modulus(m: usize) -> CaseTag {
        if m % 6 == 4 { CaseTag::CaseII } else { CaseTag::CaseI }
    }
}

/// The three construction variants sharing one pipeline. `Actual` is the real
/// construction; the other two exist to exhibit why its Case II family is
/// necessary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Actual,
    /// Case I layer-0 families for every even m.
    Primary,
    /// Case II with the repair family (the i = 1 track plus its two boundary
    /// points) reverted to the default triple.
    DeletedRepair,
}

fn check_modulus(m: usize) -> Result<(), RouteEError> {
    if m < 6 || m % 2 != 0 {
        return Err(RouteEError::BadModulus(m));
    }
    Ok(())
}

fn t(d0: usize, d1: usize, d2: usize) -> DirectionTriple {
    DirectionTriple::new(d0, d1, d2).unwrap()
}

/// The layer-0 special sets; everything on S = 0 not listed here gets the
/// default triple (1, 2, 0). Subscripts name the assigned triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer0Families {
    pub m: usize,
    pub case: CaseTag,
    pub family_102: Vec<[usize; 3]>,
    pub family_021: Vec<[usize; 3]>,
    pub family_210: Vec<[usize; 3]>,
    pub exceptional_012: Vec<[usize; 3]>,
    pub exceptional_201: Vec<[usize; 3]>,
}

pub const DEFAULT_LAYER0_TRIPLE: (usize, usize, usize) = (1, 2, 0);

impl Layer0Families {
    /// Map from layer-0 vertices to their non-default triples, checking that
    /// the listed sets are pairwise disjoint and lie on S = 0.
    pub fn triple_map(&self) -> Result<HashMap<[usize; 3], DirectionTriple>, RouteEError> {
        let mut map = HashMap::new();
        let groups: [(&Vec<[usize; 3]>, DirectionTriple); 5] = [
            (&self.family_102, t(1, 0, 2)),
            (&self.family_021, t(0, 2, 1)),
            (&self.family_210, t(2, 1, 0)),
            (&self.exceptional_012, t(0, 1, 2)),
            (&self.exceptional_201, t(2, 0, 1)),
        ];
        for (set, triple) in groups {
            for &v in set {
                debug_assert_eq!((v[0] + v[1] + v[2]) % self.m, 0, "special vertex off layer 0");
                if map.insert(v, triple).is_some() {
                    return Err(RouteEError::PartitionOverlap(v[0], v[1], v[2]));
                }
            }
        }
        Ok(map)
    }

    pub fn special_count(&self) -> usize {
        self.family_102.len()
            + self.family_021.len()
            + self.family_210.len()
            + self.exceptional_012.len()
            + self.exceptional_201.len()
    }
}

fn case_i_families(m: usize) -> Layer0Families {
    let mut family_102 = vec![[0, 0, 0]];
    family_102.extend((1..=m - 3).map(|i| [i, 1, m - 1 - i]));
    family_102.push([m - 1, 2, m - 1]);

    let mut family_021 = vec![[0, 1, m - 1]];
    family_021.extend((1..=m - 3).map(|i| [i, m - i, 0]));
    family_021.push([m - 1, 0, 1]);

    let mut family_210: Vec<[usize; 3]> = (2..=m - 1).map(|j| [0, j, m - j]).collect();
    family_210.push([1, 0, m - 1]);

    Layer0Families {
        m,
        case: CaseTag::CaseI,
        family_102,
        family_021,
        family_210,
        exceptional_012: vec![[m - 2, 1, 1]],
        exceptional_201: vec![[m - 2, 2, 0]],
    }
}

/// The Case II enlargement of the 210 family: the i = 1 track plus two
/// boundary points. Removing exactly this set gives the deleted-repair
/// variant.
pub fn case_ii_repair_family(m: usize) -> Vec<[usize; 3]> {
    let mut add: Vec<[usize; 3]> = (2..=m - 2).map(|j| [1, j, m - 1 - j]).collect();
    add.push([2, 0, m - 2]);
    add.push([2, m - 1, m - 1]);
    add
}

fn case_ii_families(m: usize, with_repair: bool) -> Layer0Families {
    let mut family_102 = vec![[0, 0, 0]];
    family_102.extend((2..=m - 3).map(|i| [i, 1, m - 1 - i]));
    family_102.push([m - 1, 2, m - 1]);

    let mut family_021 = vec![[0, 1, m - 1]];
    family_021.extend((2..=m - 3).map(|i| [i, m - i, 0]));
    family_021.push([m - 1, 0, 1]);

    let mut family_210: Vec<[usize; 3]> = (2..=m - 1).map(|j| [0, j, m - j]).collect();
    family_210.push([1, 0, m - 1]);
    if with_repair {
        family_210.extend(case_ii_repair_family(m));
    }

    Layer0Families {
        m,
        case: CaseTag::CaseII,
        family_102,
        family_021,
        family_210,
        exceptional_012: vec![[1, 1, m - 2], [m - 2, 1, 1]],
        exceptional_201: vec![[1, m - 1, 0], [m - 2, 2, 0]],
    }
}

pub fn layer0_families(m: usize, variant: Variant) -> Result<Layer0Families, RouteEError> {
    check_modulus(m)?;
    match variant {
        Variant::Actual => Ok(match CaseTag::for_modulus(m) {
            CaseTag::CaseI => case_i_families(m),
            CaseTag::CaseII => case_ii_families(m, true),
        }),
        Variant::Primary => Ok(case_i_families(m)),
        Variant::DeletedRepair => {
            if m % 6 != 4 || m < 10 {
                return Err(RouteEError::BadDeletedRepairModulus(m));
            }
            Ok(case_ii_families(m, false))
        }
    }
}

pub fn assignment_for_variant(
    m: usize,
    variant: Variant,
) -> Result<DirectionAssignment, RouteEError> {
    let families = layer0_families(m, variant)?;
    let layer0 = families.triple_map()?;
    let default0 = {
        let (d0, d1, d2) = DEFAULT_LAYER0_TRIPLE;
        t(d0, d1, d2)
    };
    Ok(DirectionAssignment::from_fn(m, |v| match v.layer() {
        0 => *layer0.get(&[v.i, v.j, v.k]).unwrap_or(&default0),
        1 => {
            if v.i == 0 { t(1, 0, 2) } else { t(2, 0, 1) }
        }
        2 => {
            if v.j == 0 { t(2, 1, 0) } else { t(0, 1, 2) }
        }
        _ => DirectionTriple::CANONICAL,
    }))
}

pub fn route_e_assignment(m: usize) -> Result<DirectionAssignment, RouteEError> {
    assignment_for_variant(m, Variant::Actual)
}

pub fn primary_geometry_assignment(m: usize) -> Result<DirectionAssignment, RouteEError> {
    assignment_for_variant(m, Variant::Primary)
}

pub fn deleted_repair_assignment(m: usize) -> Result<DirectionAssignment, RouteEError> {
    assignment_for_variant(m, Variant::DeletedRepair)
}

/// The first three color-c directions (layers S = 0, 1, 2) from the section
/// point v(i, k) = (i, -i-k, k).
pub fn transducer_word(
    assign: &DirectionAssignment,
    c: Color,
    i: usize,
    k: usize,
) -> [usize; 3] {
    let m = assign.m();
    let mut v = Vertex::new(i, (2 * m - (i + k) % m) % m, k, m);
    let mut word = [0usize; 3];
    for (step, letter) in word.iter_mut().enumerate() {
        debug_assert_eq!(v.layer(), step);
        let d = assign.triple_at(v).direction(c);
        *letter = d;
        v = v.bump(d);
    }
    word
}

/// Reconstruct the return-map image from the low-layer word alone: the m - 3
/// remaining steps before the next return all use the canonical direction c.
pub fn return_from_word(
    c: Color,
    word: [usize; 3],
    i: usize,
    k: usize,
    m: usize,
) -> (usize, usize) {
    let n0 = word.iter().filter(|&&d| d == 0).count();
    let n2 = word.iter().filter(|&&d| d == 2).count();
    match c {
        0 => ((i + n0 + m - 3) % m, (k + n2) % m),
        1 => ((i + n0) % m, (k + n2) % m),
        2 => ((i + n0) % m, (k + n2 + m - 3) % m),
        _ => panic!("color out of range: {c}"),
    }
}

/// Return map computed through the transducer reduction, one word per point.
pub fn transducer_return_map(assign: &DirectionAssignment, c: Color) -> SectionMap {
    let m = assign.m();
    SectionMap::from_fn(m, |i, k| return_from_word(c, transducer_word(assign, c, i, k), i, k, m))
}

/// Closed-form branch evaluation. Branches are numbered from 1 in the order
/// the piecewise formulas list them; earlier branches win. The final
/// "otherwise" branch has the highest number.
pub fn closed_form_branch(
    c: Color,
    m: usize,
    i: usize,
    k: usize,
) -> Result<(usize, (usize, usize)), RouteEError> {
    check_modulus(m)?;
    let md = |x: i64| x.rem_euclid(m as i64) as usize;
    let (i64_, k64) = (i as i64, k as i64);
    let p = |di: i64, dk: i64| (md(i64_ + di), md(k64 + dk));
    let case = CaseTag::for_modulus(m);
    Ok(match c {
        0 => match case {
            CaseTag::CaseI => {
                if (i, k) == (0, 0) {
                    (1, p(-2, 0))
                } else if (i, k) == (1, m - 1) {
                    (2, p(-3, 3))
                } else if (i, k) == (m - 2, 0) {
                    (3, p(-2, 2))
                } else if (i, k) == (m - 1, 1) {
                    (4, p(-1, 0))
                } else if (i + k) % m == 1 && (i, k) != (1, 0) {
                    (5, p(-3, 2))
                } else if (k == 0 && (1..=m - 3).contains(&i))
                    || (i, k) == (0, m - 1)
                    || (i, k) == (m - 2, 1)
                {
                    (6, p(-1, 1))
                } else {
                    (7, p(-2, 1))
                }
            }
            CaseTag::CaseII => {
                if (i, k) == (0, 0) {
                    (1, p(-2, 0))
                } else if (i, k) == (m - 1, 1) {
                    (2, p(-1, 0))
                } else if (i, k) == (1, m - 1) || (i, k) == (2, m - 2) {
                    (3, p(-3, 3))
                } else if (i == 1 && k <= m - 3) || (i, k) == (2, m - 1) || (i, k) == (m - 2, 0) {
                    (4, p(-2, 2))
                } else if (i + k) % m == 1 && (i, k) != (1, 0) && (i, k) != (2, m - 1) {
                    (5, p(-3, 2))
                } else if (k == 0 && (2..=m - 3).contains(&i))
                    || (i, k) == (0, m - 1)
                    || (i, k) == (1, m - 2)
                    || (i, k) == (m - 2, 1)
                {
                    (6, p(-1, 1))
                } else {
                    (7, p(-2, 1))
                }
            }
        },
        1 => match case {
            CaseTag::CaseI => {
                if ((i + k) % m == m - 1 && (1..=m - 3).contains(&i))
                    || (i, k) == (0, 0)
                    || (i, k) == (m - 2, 0)
                    || (i, k) == (m - 1, m - 1)
                {
                    (1, p(2, 0))
                } else if (i == 0 && (1..=m - 2).contains(&k))
                    || (i, k) == (1, m - 1)
                    || (i, k) == (m - 2, 1)
                {
                    (2, p(1, 0))
                } else {
                    (3, p(1, 1))
                }
            }
            CaseTag::CaseII => {
                if ((i + k) % m == m - 1 && (2..=m - 3).contains(&i))
                    || (i, k) == (0, 0)
                    || (i, k) == (1, 0)
                    || (i, k) == (m - 2, 0)
                    || (i, k) == (m - 1, m - 1)
                {
                    (1, p(2, 0))
                } else if (i == 0 && (1..=m - 2).contains(&k))
                    || (i == 1 && k >= 1)
                    || (i, k) == (2, m - 2)
                    || (i, k) == (2, m - 1)
                    || (i, k) == (m - 2, 1)
                {
                    (2, p(1, 0))
                } else {
                    (3, p(1, 1))
                }
            }
        },
        2 => {
            // uniform for all even m >= 6
            if (i, k) == (2, 0) {
                (1, p(1, -3))
            } else if (i + k) % m == 1 && (i, k) != (1, 0) && (i, k) != (m - 1, 2) {
                (2, p(2, -3))
            } else if ((i + k) % m == m - 1 && i != m - 1) || (i, k) == (m - 1, m - 1) {
                (3, p(0, -1))
            } else if (k == 0 && i != 0 && i != 2 && i != m - 1) || (i, k) == (m - 1, 1) {
                (4, p(0, -2))
            } else if (i == m - 1 && k != 1 && k != m - 1) || (i, k) == (0, 0) {
                (5, p(1, -1))
            } else {
                (6, p(1, -2))
            }
        }
        _ => panic!("color out of range: {c}"),
    })
}

/// The closed-form return map R_c for the actual construction at even m >= 6.
pub fn closed_form_r(c: Color, m: usize) -> Result<SectionMap, RouteEError> {
    check_modulus(m)?;
    Ok(SectionMap::from_fn(m, |i, k| closed_form_branch(c, m, i, k).unwrap().1))
}

/// Per-modulus three-way agreement check: closed form vs. the three-step
/// transducer vs. direct m-step iteration of the actual assignment.
#[derive(Debug, Clone)]
pub struct CrossCheckReport {
    pub m: usize,
    /// Points where the three routes disagree, as (color, i, k).
    pub mismatches: Vec<(Color, usize, usize)>,
}

impl CrossCheckReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn cross_check_r(m: usize) -> Result<CrossCheckReport, RouteEError> {
    let assign = route_e_assignment(m)?;
    let mut mismatches = Vec::new();
    for c in 0..3 {
        let closed = closed_form_r(c, m)?;
        let iterated = assign.return_map(c);
        let worded = transducer_return_map(&assign, c);
        for i in 0..m {
            for k in 0..m {
                let a = closed.apply((i, k));
                if a != iterated.apply((i, k)) || a != worded.apply((i, k)) {
                    mismatches.push((c, i, k));
                }
            }
        }
    }
    Ok(CrossCheckReport { m, mismatches })
}

/// Bulk frame Phi_c turning the bulk branch of R_c into (u, t) -> (u, t + 1).
pub fn bulk_frame(c: Color, m: usize) -> AffineSectionMap {
    match c {
        1 => AffineSectionMap::new(m, [[1, -1], [0, 1]], [0, 0]),
        2 => AffineSectionMap::new(m, [[2, 1], [-1, -1]], [0, 0]),
        0 => AffineSectionMap::new(m, [[1, 2], [0, 1]], [0, 0]),
        _ => panic!("color out of range: {c}"),
    }
}

/// The bulk displacement of R_c in the original (i, k) coordinates.
pub fn bulk_vector(c: Color) -> (i64, i64) {
    match c {
        0 => (-2, 1),
        1 => (1, 1),
        2 => (1, -2),
        _ => panic!("color out of range: {c}"),
    }
}

/// Signed representative of a residue, chosen in [-2, m - 3] so that all
/// defect increments (which lie in [-2, 3]) are recovered exactly.
pub fn signed_increment(x: usize, m: usize) -> i64 {
    ((x + 2) % m) as i64 - 2
}

/// One step of the bulk-frame return map, labeled: "G" for the generic clock
/// advance, otherwise the supporting defect line (or "isolated").
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectBranch {
    pub label: String,
    pub lane_delta: i64,
    pub clock_delta: i64,
}

impl DefectBranch {
    pub fn is_generic(&self) -> bool {
        self.lane_delta == 0 && self.clock_delta == 1
    }
}

fn enumerated_increments(c: Color) -> &'static [(i64, i64)] {
    match c {
        1 => &[(1, 0), (2, 0)],
        2 => &[(-1, 2), (1, 1), (-1, 1), (-2, 2), (1, 0)],
        0 => &[(-2, 0), (3, 3), (2, 2), (-1, 0), (1, 2), (1, 1)],
        _ => panic!("color out of range: {c}"),
    }
}

fn defect_line_label(c: Color, m: usize, u: usize, t: usize) -> &'static str {
    let case = CaseTag::for_modulus(m);
    match c {
        1 => {
            if (u + t) % m == 0 {
                "u+t=0"
            } else if case == CaseTag::CaseII && (u + t) % m == 1 {
                "u+t=1"
            } else if (u + 2 * t) % m == m - 1 {
                "u+2t=m-1"
            } else {
                "isolated"
            }
        }
        2 => {
            if t == 1 {
                "t=1"
            } else if t == m - 1 {
                "t=m-1"
            } else if (u + 2 * t) % m == 0 {
                "u+2t=0"
            } else if (u + t) % m == m - 1 {
                "u+t=m-1"
            } else {
                "isolated"
            }
        }
        0 => {
            if t == 0 {
                "t=0"
            } else if u == (t + 1) % m {
                "u=t+1"
            } else if case == CaseTag::CaseII && u == (1 + 2 * t) % m {
                "u=1+2t"
            } else {
                "isolated"
            }
        }
        _ => panic!("color out of range: {c}"),
    }
}

/// Classify one point of the bulk-frame return map of the actual
/// construction: generic, or one of the finitely many defect moves.
pub fn defect_classify(c: Color, m: usize, u: usize, t: usize) -> Result<DefectBranch, RouteEError> {
    let rhat = closed_form_r(c, m)?.conjugate(&bulk_frame(c, m));
    classify_point(&rhat, c, m, u, t)
}

fn classify_point(
    rhat: &SectionMap,
    c: Color,
    m: usize,
    u: usize,
    t: usize,
) -> Result<DefectBranch, RouteEError> {
    let (u2, t2) = rhat.apply((u, t));
    let du = signed_increment((u2 + m - u) % m, m);
    let dt = signed_increment((t2 + m - t) % m, m);
    if (du, dt) == (0, 1) {
        return Ok(DefectBranch { label: "G".to_string(), lane_delta: 0, clock_delta: 1 });
    }
    if !enumerated_increments(c).contains(&(du, dt)) {
        return Err(RouteEError::UnclassifiedDefect { u, t, du, dt });
    }
    Ok(DefectBranch {
        label: defect_line_label(c, m, u, t).to_string(),
        lane_delta: du,
        clock_delta: dt,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectPoint {
    pub u: usize,
    pub t: usize,
    pub branch: DefectBranch,
}

/// All non-generic points of the bulk-frame return map, in (u, t) order.
pub fn defect_geometry(c: Color, m: usize) -> Result<Vec<DefectPoint>, RouteEError> {
    let rhat = closed_form_r(c, m)?.conjugate(&bulk_frame(c, m));
    let mut out = Vec::new();
    for u in 0..m {
        for t in 0..m {
            let branch = classify_point(&rhat, c, m, u, t)?;
            if !branch.is_generic() {
                out.push(DefectPoint { u, t, branch });
            }
        }
    }
    Ok(out)
}
