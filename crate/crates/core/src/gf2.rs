//! Exact linear algebra over GF(2) on bit-packed rows.
//!
//! A parity query on x ∈ {−1,1}^n is a row vector over GF(2) in the bit
//! convention `x_i = (−1)^(bit_i)`; the root-to-leaf queries of a parity
//! decision tree form an [`AffineSystem`] whose reduced row echelon form
//! answers, in one elimination, everything leaf analysis needs: coordinates
//! forced by the path, pairwise parities fixed without fixing either
//! coordinate, and the rank that determines the leaf mass.
//!
//! Coordinates are 0-indexed here; all external formats are 1-indexed.

use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Rows are single machine words, so the ambient dimension is capped well
/// above the crate-wide arity limit of 27.
pub const MAX_COLS: usize = 63;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("vector has {got} entries, matrix has {expected} columns")]
    DimensionMismatch { expected: usize, got: usize },
}

/// A rows × cols matrix over GF(2), one `u64` per row, bit i = column i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<u64>,
}

impl BitMatrix {
    pub fn new(cols: usize) -> Self {
        assert!(cols <= MAX_COLS, "at most {MAX_COLS} columns supported");
        BitMatrix {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<u64>) -> Self {
        let mut m = BitMatrix::new(cols);
        for row in rows {
            m.push_row(row);
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix::from_rows(n, (0..n).map(|i| 1u64 << i).collect())
    }

    pub fn push_row(&mut self, row: u64) {
        assert_eq!(
            row & !low_mask(self.cols),
            0,
            "row has bits beyond column count"
        );
        self.rows.push(row);
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// GF(2) rank, invariant under elementary row operations.
    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        echelonize(&mut rows, self.cols).len()
    }

    /// Is `v` a GF(2) linear combination of the rows? The all-zero vector
    /// is the empty combination.
    pub fn in_row_space(&self, v: u64, v_len: usize) -> Result<bool, Gf2Error> {
        if v_len != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                got: v_len,
            });
        }
        assert_eq!(
            v & !low_mask(self.cols),
            0,
            "vector has bits beyond its length"
        );
        let mut rows = self.rows.clone();
        let pivots = echelonize(&mut rows, self.cols);
        Ok(reduce(&rows, &pivots, v, self.cols) == 0)
    }
}

/// A system of parity constraints: one matrix row per query mask, one
/// right-hand bit per row. Edge sign c relates to the bit by c = (−1)^b.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSystem {
    matrix: BitMatrix,
    rhs: Vec<bool>,
}

impl AffineSystem {
    pub fn new(matrix: BitMatrix, rhs: Vec<bool>) -> Self {
        assert_eq!(matrix.row_count(), rhs.len(), "one rhs bit per row");
        AffineSystem { matrix, rhs }
    }

    pub fn empty(cols: usize) -> Self {
        AffineSystem {
            matrix: BitMatrix::new(cols),
            rhs: Vec::new(),
        }
    }

    pub fn push(&mut self, mask: u64, rhs_bit: bool) {
        self.matrix.push_row(mask);
        self.rhs.push(rhs_bit);
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    pub fn rhs(&self) -> &[bool] {
        &self.rhs
    }

    /// Whether the point (as a bit pattern) satisfies every constraint.
    pub fn satisfied_by(&self, point: u64) -> bool {
        self.matrix
            .rows
            .iter()
            .zip(&self.rhs)
            .all(|(&row, &b)| parity(row & point) == b)
    }

    /// One elimination answers consistency, rank, forced coordinates and
    /// correlated pairs. Inconsistency is a reported state, not an error.
    pub fn analyze(&self) -> SystemSummary {
        let cols = self.cols();
        let aug_bit = 1u64 << cols;
        let mut rows: Vec<u64> = self
            .matrix
            .rows
            .iter()
            .zip(&self.rhs)
            .map(|(&row, &b)| row | if b { aug_bit } else { 0 })
            .collect();
        // Pivot search over coefficient columns only; a surviving row with
        // no coefficient bits reads 0 = 1.
        let pivots = echelonize(&mut rows, cols);
        let rank = pivots.len();
        let consistent = rows[rank..].iter().all(|&r| r == 0);
        rows.truncate(rank);

        let mut forced = BTreeMap::new();
        for &row in &rows {
            let coeffs = row & low_mask(cols);
            if coeffs.count_ones() == 1 {
                forced.insert(coeffs.trailing_zeros() as usize, row & aug_bit != 0);
            }
        }

        let mut correlated_pairs = BTreeSet::new();
        for i in 0..cols {
            if forced.contains_key(&i) {
                continue;
            }
            for j in (i + 1)..cols {
                if forced.contains_key(&j) {
                    continue;
                }
                let pair = (1u64 << i) | (1u64 << j);
                if reduce(&rows, &pivots, pair, cols) == 0 {
                    correlated_pairs.insert((i, j));
                }
            }
        }

        SystemSummary {
            consistent,
            rank,
            forced,
            correlated_pairs,
        }
    }
}

/// What the reduced form of an [`AffineSystem`] says about its solutions.
///
/// When consistent, the solution set has exactly 2^(cols − rank) points.
/// `forced` holds every coordinate i with the unit vector e_i in the row
/// space, mapped to its solved bit; `correlated_pairs` holds every pair
/// {i, j} with e_i + e_j in the row space but neither unit vector in it.
/// The two sets are disjoint by definition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemSummary {
    pub consistent: bool,
    pub rank: usize,
    pub forced: BTreeMap<usize, bool>,
    pub correlated_pairs: BTreeSet<(usize, usize)>,
}

fn low_mask(bits: usize) -> u64 {
    if bits == 64 {
        !0
    } else {
        (1u64 << bits) - 1
    }
}

pub(crate) fn parity(word: u64) -> bool {
    word.count_ones() & 1 == 1
}

/// In-place reduced row echelon form over the low `cols` columns; bits above
/// `cols` (the augmented column) ride along. Returns the pivot columns in
/// ascending order; rows are left pivot-first, zero rows at the tail.
fn echelonize(rows: &mut [u64], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0usize;
    for col in 0..cols {
        let bit = 1u64 << col;
        let Some(found) = (next..rows.len()).find(|&r| rows[r] & bit != 0) else {
            continue;
        };
        rows.swap(next, found);
        let pivot_row = rows[next];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next && *row & bit != 0 {
                *row ^= pivot_row;
            }
        }
        pivots.push(col);
        next += 1;
    }
    pivots
}

/// Reduce the coefficient vector `v` against echelonized rows; the result is
/// zero exactly when `v` lies in the coefficient row space. Augmented bits
/// above `cols` are ignored.
fn reduce(rows: &[u64], pivots: &[usize], mut v: u64, cols: usize) -> u64 {
    for (row, &col) in rows.iter().zip(pivots) {
        if v & (1u64 << col) != 0 {
            v ^= row;
        }
    }
    v & low_mask(cols)
}
