//! Arithmetic family-blocks and the finite splice permutation that closes the
//! lane maps into single m-cycles.

use crate::torus::Color;

use super::first_return::{first_return, LaneReturnData};
use super::{check_modulus, RouteEError, Variant};

/// Ordered family-blocks of a lane map T_c: T advances inside each block, and
/// the terminal of block j maps to the initial of block splice[j].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpliceData {
    pub color: Color,
    pub m: usize,
    pub blocks: Vec<Vec<usize>>,
    /// splice[j] = index of the block whose initial point follows block j.
    pub splice: Vec<usize>,
    pub single_cycle: bool,
}

fn seq(start: usize, end_inclusive: usize, step: usize) -> Vec<usize> {
    if start > end_inclusive {
        return Vec::new();
    }
    (start..=end_inclusive).step_by(step).collect()
}

/// The block tables, by congruence class of m. Empty runs at small m are
/// dropped.
fn block_table(c: Color, m: usize) -> Vec<Vec<usize>> {
    let blocks: Vec<Vec<usize>> = match c {
        2 => {
            // second block runs downward: m-1, m-2, ..., 2
            vec![vec![0, 1], (2..=m - 1).rev().collect()]
        }
        1 => match m % 6 {
            2 => vec![
                [vec![0], seq(2, m - 3, 3)].concat(),
                seq(1, m - 1, 3),
                seq(3, m - 2, 3),
            ],
            0 => vec![
                [vec![0], seq(2, m - 1, 3)].concat(),
                [seq(3, m - 3, 3), vec![1]].concat(),
                seq(4, m - 2, 3),
            ],
            _ => vec![
                [vec![0, 2], seq(5, m - 5, 6), vec![1]].concat(),
                [seq(3, m - 1, 6), seq(7, m - 3, 6)].concat(),
                seq(4, m - 2, 2),
            ],
        },
        0 => match m % 12 {
            0 | 2 | 6 | 8 => vec![
                vec![0, m - 2],
                seq(1, m - 3, 2),
                seq(2, m - 4, 2),
                vec![m - 1],
            ],
            10 => vec![
                [vec![0, m - 2], seq(5, m - 1, 4), vec![1]].concat(),
                seq(4, m - 6, 4),
                seq(3, m - 3, 4),
                seq(2, m - 4, 4),
            ],
            _ => vec![
                [vec![0, m - 2], seq(5, m - 3, 4)].concat(),
                seq(2, m - 6, 4),
                [seq(3, m - 1, 4), vec![1]].concat(),
                seq(4, m - 4, 4),
            ],
        },
        _ => panic!("color out of range: {c}"),
    };
    blocks.into_iter().filter(|b| !b.is_empty()).collect()
}

/// Build the family-blocks from the tables and cross-validate them against
/// the actual first-return dynamics: T must advance inside each block and the
/// block terminals must splice into a permutation of the blocks.
pub fn splice_blocks(c: Color, m: usize) -> Result<SpliceData, RouteEError> {
    check_modulus(m)?;
    let blocks = block_table(c, m);
    let dynamics = first_return(c, m, Variant::Actual)?;
    verify_blocks(c, m, blocks, &dynamics)
}

fn verify_blocks(
    c: Color,
    m: usize,
    blocks: Vec<Vec<usize>>,
    dynamics: &LaneReturnData,
) -> Result<SpliceData, RouteEError> {
    let mismatch = |detail: String| RouteEError::BlockMismatch { color: c, detail };
    let mut seen = vec![false; m];
    for b in &blocks {
        for &x in b {
            if x >= m || seen[x] {
                return Err(mismatch(format!("lane {x} repeated or out of range")));
            }
            seen[x] = true;
        }
    }
    if !seen.iter().all(|&s| s) {
        return Err(mismatch("blocks do not cover every lane".to_string()));
    }
    let t = &dynamics.targets;
    for (j, b) in blocks.iter().enumerate() {
        for w in b.windows(2) {
            if t[w[0]] != w[1] {
                return Err(mismatch(format!(
                    "block {j}: T({}) = {} but the block lists {}",
                    w[0],
                    t[w[0]],
                    w[1]
                )));
            }
        }
    }
    let mut splice = Vec::with_capacity(blocks.len());
    for (j, b) in blocks.iter().enumerate() {
        let image = t[*b.last().unwrap()];
        match blocks.iter().position(|other| other[0] == image) {
            Some(target) => splice.push(target),
            None => {
                return Err(mismatch(format!(
                    "terminal of block {j} maps to {image}, not a block initial"
                )))
            }
        }
    }
    let mut hit = vec![false; blocks.len()];
    for &target in &splice {
        if hit[target] {
            return Err(mismatch("splice images collide".to_string()));
        }
        hit[target] = true;
    }
    // single cycle iff following the splice from block 0 visits every block
    let mut count = 1;
    let mut j = splice[0];
    while j != 0 {
        count += 1;
        j = splice[j];
    }
    let single_cycle = count == blocks.len();
    Ok(SpliceData { color: c, m, blocks, splice, single_cycle })
}
