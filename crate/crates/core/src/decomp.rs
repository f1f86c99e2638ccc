//! End-to-end pipeline: pick the construction for a modulus, build the
//! assignment, certify that all three color classes are Hamilton cycles, and
//! serialize the result.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::m4::m4_assignment;
use crate::odd::{odd_closed_form, odometer, psi};
use crate::route_e::{
    counting_check, first_return, route_e_assignment, CaseTag, RouteEError, Variant,
};
use crate::torus::{
    cycle_decomposition, vertex_count, DirectionAssignment, DirectionTriple, NotAPermutation,
    Vertex, COLORS, MIN_MODULUS,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Error, Debug)]
pub enum DecompError {
    #[error("modulus {0} must be at least 3")]
    BadModulus(usize),
    #[error(transparent)]
    RouteE(#[from] RouteEError),
    #[error("coloring invalid: {0}")]
    Invalid(NotAPermutation),
    #[error("color {color} is not Hamilton: {cycle_count} cycles")]
    NotHamilton { color: usize, cycle_count: usize },
    #[error("certificate failure for color {color}: {detail}")]
    Certificate { color: usize, detail: String },
}

#[derive(Error, Debug)]
pub enum ImportError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema version {0}")]
    SchemaVersion(u32),
    #[error("modulus {0} must be at least 3")]
    BadModulus(usize),
    #[error("expected {expected} triples, found {found}")]
    TripleCount { expected: usize, found: usize },
    #[error("bad triple word at index {index}: {word:?}")]
    BadWord { index: usize, word: String },
    #[error("unknown case tag {0:?}")]
    BadCase(String),
    #[error("cycles must list exactly 3 colors, found {0}")]
    CycleArity(usize),
    #[error("cycle for color {color} has {found} vertices, expected {expected}")]
    CycleLength { color: usize, expected: usize, found: usize },
}

/// Which construction produced the assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    Odd,
    M4,
    EvenCaseI,
    EvenCaseII,
}

impl Construction {
    pub fn for_modulus(m: usize) -> Construction {
        if m % 2 == 1 {
            Construction::Odd
        } else if m == 4 {
            Construction::M4
        } else if CaseTag::for_modulus(m) == CaseTag::CaseI {
            Construction::EvenCaseI
        } else {
            Construction::EvenCaseII
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Construction::Odd => "odd",
            Construction::M4 => "m4",
            Construction::EvenCaseI => "even_case_I",
            Construction::EvenCaseII => "even_case_II",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Construction> {
        match tag {
            "odd" => Some(Construction::Odd),
            "m4" => Some(Construction::M4),
            "even_case_I" => Some(Construction::EvenCaseI),
            "even_case_II" => Some(Construction::EvenCaseII),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DecomposeOptions {
    /// Up to this modulus every color cycle is walked in full; above it the
    /// section-level counting (even) or conjugacy (odd) certificate is used.
    pub direct_iteration_threshold: usize,
    pub with_cycles: bool,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions { direct_iteration_threshold: 20, with_cycles: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorCertificate {
    pub color: usize,
    /// Direct iteration: length of the single cycle of f_c (equals m^3).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle_length: Option<usize>,
    /// Counting certificate: the lane map is one cycle of this length (m).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lane_cycle_length: Option<usize>,
    /// Counting certificate: sum of the return times (must be m^2).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub return_time_sum: Option<usize>,
    /// Odd certificate: the return map is affinely conjugate to the odometer.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugate_to_odometer: Option<bool>,
    /// Length of the single section-return cycle implied (m^2).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub section_cycle_length: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub method: String,
    pub per_color: Vec<ColorCertificate>,
}

/// A certified decomposition of D3(m) into three Hamilton cycles.
#[derive(Clone)]
pub struct HamiltonDecomposition {
    pub m: usize,
    pub construction: Construction,
    pub assignment: DirectionAssignment,
    /// Dense vertex indices, one cycle per color, each starting at (0,0,0).
    pub cycles: Option<[Vec<usize>; 3]>,
    pub certificate: Certificate,
}

fn base_assignment(m: usize) -> Result<(Construction, DirectionAssignment), DecompError> {
    if m < MIN_MODULUS {
        return Err(DecompError::BadModulus(m));
    }
    let construction = Construction::for_modulus(m);
    let assignment = match construction {
        Construction::Odd => odd_closed_form(m),
        Construction::M4 => m4_assignment(),
        _ => route_e_assignment(m)?,
    };
    Ok((construction, assignment))
}

fn cycle_from_origin(assign: &DirectionAssignment, c: usize) -> Vec<usize> {
    let n = vertex_count(assign.m());
    let mut cycle = Vec::with_capacity(n);
    let mut idx = 0usize;
    loop {
        cycle.push(idx);
        idx = assign.step_index(c, idx);
        if idx == 0 {
            break;
        }
        debug_assert!(cycle.len() <= n);
    }
    cycle
}

fn direct_certificate(assign: &DirectionAssignment) -> Result<Certificate, DecompError> {
    let n = vertex_count(assign.m());
    let mut per_color = Vec::with_capacity(3);
    for c in COLORS {
        let dec = cycle_decomposition(n, |idx| assign.step_index(c, idx))
            .map_err(DecompError::Invalid)?;
        if !dec.is_single_cycle() {
            return Err(DecompError::NotHamilton { color: c, cycle_count: dec.cycle_count() });
        }
        per_color.push(ColorCertificate {
            color: c,
            cycle_length: Some(n),
            lane_cycle_length: None,
            return_time_sum: None,
            conjugate_to_odometer: None,
            section_cycle_length: None,
        });
    }
    Ok(Certificate { method: "direct_iteration".to_string(), per_color })
}

/// Section-level certificate. Every arc raises the layer, so cycles of f_c
/// correspond to cycles of the P0 return map with lengths multiplied by m;
/// a single m^2-cycle on the section is therefore equivalent to Hamilton.
fn counting_certificate(
    m: usize,
    construction: Construction,
    assign: &DirectionAssignment,
) -> Result<Certificate, DecompError> {
    let mut per_color = Vec::with_capacity(3);
    match construction {
        Construction::Odd => {
            let o = odometer(m);
            for c in COLORS {
                let f = assign.return_map(c);
                let p = psi(c, m).expect("modulus is odd");
                let conjugates = (0..m).all(|i| {
                    (0..m).all(|k| p.apply(f.apply((i, k))) == o.apply(p.apply((i, k))))
                });
                if !conjugates || p.inverse().is_none() {
                    return Err(DecompError::Certificate {
                        color: c,
                        detail: "return map is not conjugate to the odometer".to_string(),
                    });
                }
                per_color.push(ColorCertificate {
                    color: c,
                    cycle_length: None,
                    lane_cycle_length: None,
                    return_time_sum: None,
                    conjugate_to_odometer: Some(true),
                    section_cycle_length: Some(m * m),
                });
            }
            Ok(Certificate { method: "return_counting".to_string(), per_color })
        }
        Construction::EvenCaseI | Construction::EvenCaseII => {
            for c in COLORS {
                let data = first_return(c, m, Variant::Actual)?;
                if !counting_check(&data) {
                    return Err(DecompError::Certificate {
                        color: c,
                        detail: format!(
                            "counting certificate failed: single_cycle={}, rho_sum={}",
                            data.is_single_cycle(),
                            data.rho_sum()
                        ),
                    });
                }
                per_color.push(ColorCertificate {
                    color: c,
                    cycle_length: None,
                    lane_cycle_length: Some(m),
                    return_time_sum: Some(data.rho_sum()),
                    conjugate_to_odometer: None,
                    section_cycle_length: Some(m * m),
                });
            }
            Ok(Certificate { method: "return_counting".to_string(), per_color })
        }
        // m = 4 is a finite witness; walking it directly is the certificate.
        Construction::M4 => direct_certificate(assign),
    }
}

pub fn decompose(m: usize, opts: &DecomposeOptions) -> Result<HamiltonDecomposition, DecompError> {
    let (construction, assignment) = base_assignment(m)?;
    let certificate = if m <= opts.direct_iteration_threshold || construction == Construction::M4 {
        direct_certificate(&assignment)?
    } else {
        counting_certificate(m, construction, &assignment)?
    };
    let cycles = if opts.with_cycles {
        let cs: Vec<Vec<usize>> = COLORS.iter().map(|&c| cycle_from_origin(&assignment, c)).collect();
        for (c, cycle) in cs.iter().enumerate() {
            if cycle.len() != vertex_count(m) {
                return Err(DecompError::NotHamilton { color: c, cycle_count: 0 });
            }
        }
        Some(cs.try_into().expect("three colors"))
    } else {
        None
    };
    Ok(HamiltonDecomposition { m, construction, assignment, cycles, certificate })
}

/// One line of a verification report.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub m: usize,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl std::fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "m = {}", self.m)?;
        for c in &self.checks {
            writeln!(f, "[{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail)?;
        }
        write!(f, "verdict: {}", if self.ok() { "verified" } else { "NOT VERIFIED" })
    }
}

/// Re-derive everything from the assignment alone; the stored certificate is
/// not trusted.
pub fn verify_decomposition(dec: &HamiltonDecomposition) -> VerificationReport {
    let m = dec.m;
    let n = vertex_count(m);
    let mut checks = Vec::new();

    let validity = dec.assignment.is_valid_coloring();
    checks.push(Check {
        name: "valid_coloring",
        passed: validity.is_valid(),
        detail: match validity.collisions.iter().flatten().next() {
            None => "all three color maps are permutations".to_string(),
            Some(c) => c.to_string(),
        },
    });

    let mut sign = 1i32;
    let mut all_hamilton = true;
    for c in COLORS {
        match cycle_decomposition(n, |idx| dec.assignment.step_index(c, idx)) {
            Ok(d) => {
                sign *= d.sign();
                let single = d.is_single_cycle();
                all_hamilton &= single;
                checks.push(Check {
                    name: "hamilton_cycle",
                    passed: single,
                    detail: format!("color {c}: {} cycle(s) on {n} vertices", d.cycle_count()),
                });
            }
            Err(e) => {
                all_hamilton = false;
                checks.push(Check {
                    name: "hamilton_cycle",
                    passed: false,
                    detail: format!("color {c}: {e}"),
                });
            }
        }
    }

    // Each vertex has out-degree 3 and its triple is a permutation of the
    // directions, so valid colorings partition all 3 m^3 arcs by construction.
    checks.push(Check {
        name: "arc_partition",
        passed: validity.is_valid(),
        detail: format!("{} arcs covered once each", 3 * n),
    });

    if all_hamilton && validity.is_valid() {
        let expected = if m % 2 == 0 { -1 } else { 1 };
        checks.push(Check {
            name: "sign_product",
            passed: sign == expected,
            detail: format!("product {sign:+}, parity of m demands {expected:+}"),
        });
    }

    if let Some(cycles) = &dec.cycles {
        for c in COLORS {
            let recomputed = cycle_from_origin(&dec.assignment, c);
            let matches = cycles[c] == recomputed;
            checks.push(Check {
                name: "cycle_listing",
                passed: matches,
                detail: if matches {
                    format!("color {c}: stored cycle matches the walk from (0,0,0)")
                } else {
                    format!("color {c}: stored cycle differs from the walk from (0,0,0)")
                },
            });
        }
    }

    VerificationReport { m, checks }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    CyclesText,
    ArcsEdgelist,
}

impl ExportFormat {
    pub fn from_tag(tag: &str) -> Option<ExportFormat> {
        match tag {
            "json" => Some(ExportFormat::Json),
            "cycles" => Some(ExportFormat::CyclesText),
            "arcs" => Some(ExportFormat::ArcsEdgelist),
            _ => None,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Doc {
    schema_version: u32,
    m: usize,
    case: String,
    triples: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cycles: Option<Vec<Vec<[usize; 3]>>>,
    certificate: Certificate,
}

fn coords_of(idx: usize, m: usize) -> [usize; 3] {
    Vertex::from_index(idx, m).coords()
}

pub fn export(dec: &HamiltonDecomposition, fmt: ExportFormat) -> String {
    let m = dec.m;
    match fmt {
        ExportFormat::Json => {
            let doc = Doc {
                schema_version: SCHEMA_VERSION,
                m,
                case: dec.construction.tag().to_string(),
                triples: (0..vertex_count(m))
                    .map(|idx| dec.assignment.triple_at_index(idx).word())
                    .collect(),
                cycles: dec.cycles.as_ref().map(|cs| {
                    cs.iter()
                        .map(|cycle| cycle.iter().map(|&idx| coords_of(idx, m)).collect())
                        .collect()
                }),
                certificate: dec.certificate.clone(),
            };
            serde_json::to_string(&doc).expect("document serializes")
        }
        ExportFormat::CyclesText => {
            let mut out = String::new();
            for c in COLORS {
                let cycle = match &dec.cycles {
                    Some(cs) => cs[c].clone(),
                    None => cycle_from_origin(&dec.assignment, c),
                };
                let line: Vec<String> = cycle
                    .iter()
                    .map(|&idx| {
                        let [i, j, k] = coords_of(idx, m);
                        format!("{i},{j},{k}")
                    })
                    .collect();
                out.push_str(&line.join(" "));
                out.push('\n');
            }
            out
        }
        ExportFormat::ArcsEdgelist => {
            let mut out = String::new();
            for c in COLORS {
                for idx in 0..vertex_count(m) {
                    let [i, j, k] = coords_of(idx, m);
                    let d = dec.assignment.triple_at_index(idx).direction(c);
                    out.push_str(&format!("{i},{j},{k} {d} {c}\n"));
                }
            }
            out
        }
    }
}

pub fn import_json(text: &str) -> Result<HamiltonDecomposition, ImportError> {
    let doc: Doc = serde_json::from_str(text)?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(ImportError::SchemaVersion(doc.schema_version));
    }
    let m = doc.m;
    if m < MIN_MODULUS {
        return Err(ImportError::BadModulus(m));
    }
    let n = vertex_count(m);
    if doc.triples.len() != n {
        return Err(ImportError::TripleCount { expected: n, found: doc.triples.len() });
    }
    let construction =
        Construction::from_tag(&doc.case).ok_or_else(|| ImportError::BadCase(doc.case.clone()))?;
    let mut triples = Vec::with_capacity(n);
    for (index, word) in doc.triples.iter().enumerate() {
        let t = DirectionTriple::from_word(word)
            .map_err(|_| ImportError::BadWord { index, word: word.clone() })?;
        triples.push(t);
    }
    let assignment = DirectionAssignment::from_triples(m, triples);
    let cycles = match doc.cycles {
        None => None,
        Some(cs) => {
            if cs.len() != 3 {
                return Err(ImportError::CycleArity(cs.len()));
            }
            let mut dense: [Vec<usize>; 3] = Default::default();
            for (c, cycle) in cs.into_iter().enumerate() {
                if cycle.len() != n {
                    return Err(ImportError::CycleLength {
                        color: c,
                        expected: n,
                        found: cycle.len(),
                    });
                }
                dense[c] = cycle
                    .into_iter()
                    .map(|[i, j, k]| Vertex::new(i, j, k, m).index())
                    .collect();
            }
            Some(dense)
        }
    };
    Ok(HamiltonDecomposition {
        m,
        construction,
        assignment,
        cycles,
        certificate: doc.certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompose_small_moduli_direct() {
        for m in 3..=8 {
            let dec = decompose(m, &DecomposeOptions::default()).unwrap();
            assert_eq!(dec.certificate.method, "direct_iteration");
            assert!(verify_decomposition(&dec).ok(), "m={m}");
            let cycles = dec.cycles.as_ref().unwrap();
            for c in COLORS {
                assert_eq!(cycles[c].len(), vertex_count(m));
                assert_eq!(cycles[c][0], 0);
            }
        }
    }

    #[test]
    fn construction_dispatch() {
        assert_eq!(decompose(5, &DecomposeOptions::default()).unwrap().construction, Construction::Odd);
        assert_eq!(decompose(4, &DecomposeOptions::default()).unwrap().construction, Construction::M4);
        assert_eq!(decompose(6, &DecomposeOptions::default()).unwrap().construction, Construction::EvenCaseI);
        assert_eq!(decompose(10, &DecomposeOptions::default()).unwrap().construction, Construction::EvenCaseII);
        assert!(matches!(decompose(2, &DecomposeOptions::default()), Err(DecompError::BadModulus(2))));
    }

    #[test]
    fn counting_certificates_above_threshold() {
        let opts = DecomposeOptions { direct_iteration_threshold: 10, with_cycles: false };
        for m in [11usize, 12, 13, 16] {
            let dec = decompose(m, &opts).unwrap();
            assert_eq!(dec.certificate.method, "return_counting", "m={m}");
            for cert in &dec.certificate.per_color {
                assert_eq!(cert.section_cycle_length, Some(m * m));
                if m % 2 == 0 {
                    assert_eq!(cert.lane_cycle_length, Some(m));
                    assert_eq!(cert.return_time_sum, Some(m * m));
                } else {
                    assert_eq!(cert.conjugate_to_odometer, Some(true));
                }
            }
            assert!(verify_decomposition(&dec).ok(), "m={m}");
        }
    }

    #[test]
    fn certificates_agree_with_direct_iteration() {
        // the two certificate routes must never disagree about the same m
        for m in [9usize, 12] {
            let direct = decompose(m, &DecomposeOptions { direct_iteration_threshold: 100, with_cycles: false }).unwrap();
            let counted = decompose(m, &DecomposeOptions { direct_iteration_threshold: 3, with_cycles: false }).unwrap();
            assert_eq!(direct.certificate.method, "direct_iteration");
            assert_eq!(counted.certificate.method, "return_counting");
            assert!(direct.assignment == counted.assignment);
        }
    }

    #[test]
    fn json_round_trip() {
        let dec = decompose(6, &DecomposeOptions::default()).unwrap();
        let text = export(&dec, ExportFormat::Json);
        let back = import_json(&text).unwrap();
        assert_eq!(back.m, 6);
        assert_eq!(back.construction, Construction::EvenCaseI);
        assert!(back.assignment == dec.assignment);
        assert_eq!(back.cycles.as_ref().unwrap()[2], dec.cycles.as_ref().unwrap()[2]);
        assert_eq!(back.certificate, dec.certificate);
        assert!(verify_decomposition(&back).ok());
    }

    #[test]
    fn json_round_trip_without_cycles() {
        let dec = decompose(7, &DecomposeOptions { with_cycles: false, ..Default::default() }).unwrap();
        let text = export(&dec, ExportFormat::Json);
        assert!(!text.contains("\"cycles\""));
        let back = import_json(&text).unwrap();
        assert!(back.cycles.is_none());
        assert!(verify_decomposition(&back).ok());
    }

    #[test]
    fn import_rejects_corrupt_documents() {
        let dec = decompose(5, &DecomposeOptions { with_cycles: false, ..Default::default() }).unwrap();
        let good = export(&dec, ExportFormat::Json);
        let bad = good.replace("\"schema_version\":1", "\"schema_version\":9");
        assert!(matches!(import_json(&bad), Err(ImportError::SchemaVersion(9))));
        let bad = good.replace("\"odd\"", "\"weird\"");
        assert!(matches!(import_json(&bad), Err(ImportError::BadCase(_))));
        let bad = good.replacen("\"012\"", "\"011\"", 1);
        assert!(matches!(import_json(&bad), Err(ImportError::BadWord { .. })));
    }

    #[test]
    fn cycles_text_shape() {
        let dec = decompose(3, &DecomposeOptions::default()).unwrap();
        let text = export(&dec, ExportFormat::CyclesText);
        let lines: Vec<&str> = text.trim_end().lines().collect();
        assert_eq!(lines.len(), 3);
        for line in &lines {
            let verts: Vec<&str> = line.split(' ').collect();
            assert_eq!(verts.len(), 27);
            assert_eq!(verts[0], "0,0,0");
        }
    }

    #[test]
    fn arcs_edgelist_shape() {
        let dec = decompose(3, &DecomposeOptions { with_cycles: false, ..Default::default() }).unwrap();
        let text = export(&dec, ExportFormat::ArcsEdgelist);
        let lines: Vec<&str> = text.trim_end().lines().collect();
        assert_eq!(lines.len(), 3 * 27);
        assert!(lines[0].starts_with("0,0,0 "));
        assert!(lines[0].ends_with(" 0"));
        assert!(lines.last().unwrap().ends_with(" 2"));
    }

    #[test]
    fn verify_flags_a_broken_assignment() {
        let mut dec = decompose(4, &DecomposeOptions { with_cycles: false, ..Default::default() }).unwrap();
        // overwrite one vertex with a triple that breaks injectivity
        let v = Vertex::new(0, 0, 0, 4);
        dec.assignment.set_triple(v, DirectionTriple::new(1, 0, 2).unwrap());
        let report = verify_decomposition(&dec);
        assert!(!report.ok());
    }
}
