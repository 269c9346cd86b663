use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use super::scalar::Scalar;

/// A sparse row of a linear system, column indices strictly increasing.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseRow {
    pub entries: Vec<(usize, Scalar)>,
}

impl SparseRow {
    pub fn from_dense(values: &[Scalar]) -> Self {
        SparseRow {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn push(&mut self, col: usize, value: Scalar) {
        debug_assert!(self.entries.last().is_none_or(|(c, _)| *c < col));
        if !value.is_zero() {
            self.entries.push((col, value));
        }
    }

    pub fn dot(&self, x: &[Scalar]) -> Scalar {
        self.entries
            .iter()
            .fold(Scalar::zero(), |acc, (c, v)| acc + v * &x[*c])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("linear system is inconsistent")]
pub struct Inconsistent;

/// General solution `particular + span(kernel)` of `A x = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSolution {
    pub particular: Vec<Scalar>,
    pub kernel: Vec<Vec<Scalar>>,
    pub pivot_columns: Vec<usize>,
}

impl AffineSolution {
    pub fn dimension(&self) -> usize {
        self.kernel.len()
    }

    pub fn rank(&self) -> usize {
        self.pivot_columns.len()
    }
}

type IntRow = Vec<(usize, BigInt)>;

fn to_integer_row(row: &SparseRow, rhs: &Scalar, rhs_col: usize) -> IntRow {
    let lcm = row
        .entries
        .iter()
        .map(|(_, v)| v.denom().clone())
        .chain(std::iter::once(rhs.denom().clone()))
        .fold(BigInt::one(), |acc, d| acc.lcm(&d));
    let mut out: IntRow = row
        .entries
        .iter()
        .map(|(c, v)| (*c, (v * Scalar::from_integer(lcm.clone())).to_integer()))
        .collect();
    if !rhs.is_zero() {
        out.push((rhs_col, (rhs * Scalar::from_integer(lcm)).to_integer()));
    }
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut IntRow) {
    let g = row.iter().fold(BigInt::zero(), |g, (_, v)| g.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
}

fn entry(row: &IntRow, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |(c, _)| *c)
        .ok()
        .map(|i| &row[i].1)
}

/// `a * row - b * pivot`, merged by column.
fn combine(row: &IntRow, a: &BigInt, pivot: &IntRow, b: &BigInt) -> IntRow {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        let (col, val) = if ci < cj {
            i += 1;
            (ci, a * &row[i - 1].1)
        } else if cj < ci {
            j += 1;
            (cj, -(b * &pivot[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (ci, a * &row[i - 1].1 - b * &pivot[j - 1].1)
        };
        if !val.is_zero() {
            out.push((col, val));
        }
    }
    make_primitive(&mut out);
    out
}

/// Solves `A x = b` exactly by fraction-free elimination.
///
/// Rows are scaled to primitive integer vectors and combined pairwise with
/// cross-multiplication, dividing out the row content after every step.
/// The pivot for each column is the candidate row with the fewest nonzero
/// entries (ties broken by row index).
pub fn solve_affine(
    rows: &[(SparseRow, Scalar)],
    ncols: usize,
) -> Result<AffineSolution, Inconsistent> {
    let rhs_col = ncols;
    let mut work: Vec<IntRow> = rows
        .iter()
        .map(|(r, b)| to_integer_row(r, b, rhs_col))
        .filter(|r| !r.is_empty())
        .collect();
    let mut is_pivot_row = vec![false; work.len()];
    let mut pivots: Vec<(usize, usize)> = Vec::new();

    for col in 0..ncols {
        let chosen = (0..work.len())
            .filter(|&r| !is_pivot_row[r] && entry(&work[r], col).is_some())
            .min_by_key(|&r| (work[r].len(), r));
        let Some(p) = chosen else { continue };
        is_pivot_row[p] = true;
        pivots.push((col, p));
        let pivot = std::mem::take(&mut work[p]);
        let pv = entry(&pivot, col).unwrap().clone();
        for (r, row) in work.iter_mut().enumerate() {
            if r == p {
                continue;
            }
            if let Some(rv) = entry(row, col).cloned() {
                let g = pv.gcd(&rv);
                *row = combine(row, &(&pv / &g), &pivot, &(&rv / &g));
            }
        }
        work[p] = pivot;
    }

    for (r, row) in work.iter().enumerate() {
        if !is_pivot_row[r] && !row.is_empty() {
            debug_assert!(row.iter().all(|(c, _)| *c == rhs_col));
            return Err(Inconsistent);
        }
    }

    let pivot_cols: Vec<usize> = pivots.iter().map(|(c, _)| *c).collect();
    let mut particular = vec![Scalar::zero(); ncols];
    for (col, r) in &pivots {
        let row = &work[*r];
        let pv = Scalar::from_integer(entry(row, *col).unwrap().clone());
        if let Some(b) = entry(row, rhs_col) {
            particular[*col] = Scalar::from_integer(b.clone()) / &pv;
        }
    }
    let mut is_pivot_col = vec![false; ncols];
    for c in &pivot_cols {
        is_pivot_col[*c] = true;
    }
    let mut kernel = Vec::new();
    for free in (0..ncols).filter(|c| !is_pivot_col[*c]) {
        let mut vec = vec![Scalar::zero(); ncols];
        vec[free] = Scalar::one();
        for (col, r) in &pivots {
            let row = &work[*r];
            if let Some(e) = entry(row, free) {
                let pv = Scalar::from_integer(entry(row, *col).unwrap().clone());
                vec[*col] = -Scalar::from_integer(e.clone()) / pv;
            }
        }
        kernel.push(vec);
    }
    Ok(AffineSolution {
        particular,
        kernel,
        pivot_columns: pivot_cols,
    })
}
