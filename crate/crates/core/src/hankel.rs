//! Explicit Hankel matrices of `c` and `d` with exact determinants.
//!
//! Nothing here depends on the recurrences: determinants are obtained by
//! fraction-free (Bareiss) elimination over ℤ, or by Gaussian elimination
//! over F₃. This is the ground truth the rest of the crate is checked against.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::residue::Residue3;
use crate::sequences::Kind;

/// Which Hankel matrix: `H_n^p = (u_{p+i+j−2})_{1≤i,j≤n}` with `u = c` or `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct HankelSpec {
    pub kind: Kind,
    pub p: u64,
    pub n: usize,
}

impl HankelSpec {
    pub fn new(kind: Kind, p: u64, n: usize) -> Self {
        HankelSpec { kind, p, n }
    }
}

/// A dense integer matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, entries }
    }

    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[&[T]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        ExactMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j].into())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn transpose(&self) -> Self {
        ExactMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, k: i64) -> Self {
        ExactMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * k)
    }

    pub fn checked_add(&self, other: &ExactMatrix) -> Option<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return None;
        }
        Some(ExactMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j)))
    }

    /// Top-left `rows × cols` corner.
    pub fn truncate(&self, rows: usize, cols: usize) -> Self {
        assert!(rows <= self.rows && cols <= self.cols);
        ExactMatrix::from_fn(rows, cols, |i, j| self.get(i, j).clone())
    }

    /// `[[a, b], [c, d]]` assembled from four blocks.
    pub fn block2(a: &ExactMatrix, b: &ExactMatrix, c: &ExactMatrix, d: &ExactMatrix) -> Self {
        ExactMatrix::from_blocks(&[vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]])
    }

    /// Assembles a block matrix. Every block in a block-row shares a height and
    /// every block in a block-column shares a width.
    pub fn from_blocks(blocks: &[Vec<ExactMatrix>]) -> Self {
        let heights: Vec<usize> = blocks.iter().map(|row| row[0].rows).collect();
        let widths: Vec<usize> = blocks[0].iter().map(|b| b.cols).collect();
        for row in blocks {
            assert_eq!(row.len(), widths.len());
            for (b, &w) in row.iter().zip(&widths) {
                assert_eq!(b.cols, w, "block width mismatch");
            }
        }
        let total_rows = heights.iter().sum();
        let total_cols = widths.iter().sum();
        let mut out = ExactMatrix::zeros(total_rows, total_cols);
        let mut r0 = 0;
        for (bi, row) in blocks.iter().enumerate() {
            let mut c0 = 0;
            for (bj, block) in row.iter().enumerate() {
                assert_eq!(block.rows, heights[bi], "block height mismatch");
                for i in 0..block.rows {
                    for j in 0..block.cols {
                        out.entries[(r0 + i) * total_cols + c0 + j] = block.get(i, j).clone();
                    }
                }
                c0 += widths[bj];
            }
            r0 += heights[bi];
        }
        out
    }

    /// `PᵗMP` for the permutation matrix `P` whose `k`-th column is `e_{perm[k]}`.
    pub fn conjugate_by(&self, perm: &PermutationP) -> Self {
        assert!(self.is_square() && self.rows == perm.order());
        let cols = perm.columns();
        ExactMatrix::from_fn(self.rows, self.cols, |a, b| self.get(cols[a], cols[b]).clone())
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// The permutation `P(n) = (e₁, e₄, …, e₂, e₅, …, e₃, e₆, …)` that groups
/// rows and columns by their residue mod 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationP {
    columns: Vec<usize>,
}

impl PermutationP {
    pub fn new(order: usize) -> Self {
        let mut columns = Vec::with_capacity(order);
        for residue in 0..3 {
            columns.extend((residue..order).step_by(3));
        }
        PermutationP { columns }
    }

    pub fn order(&self) -> usize {
        self.columns.len()
    }

    /// Zero-based row index of the `1` in each column.
    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    /// Sizes `(n₁, n₂, n₃)` of the three residue groups.
    pub fn group_sizes(&self) -> [usize; 3] {
        let n = self.order();
        [n.div_ceil(3), (n + 1) / 3, n / 3]
    }

    pub fn to_matrix(&self) -> ExactMatrix {
        let n = self.order();
        ExactMatrix::from_fn(n, n, |i, j| BigInt::from((self.columns[j] == i) as u8))
    }

    /// Sign of the permutation, computed from its cycle decomposition.
    pub fn sign(&self) -> i32 {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut sign = 1;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = self.columns[k];
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }
}

/// `H_n^p` of `c` (Γ) or `d` (Δ).
pub fn hankel_matrix(spec: HankelSpec) -> ExactMatrix {
    let HankelSpec { kind, p, n } = spec;
    ExactMatrix::from_fn(n, n, |i, j| BigInt::from(kind.term(p + (i + j) as u64)))
}

/// `K_n^p = (u_{p+3(i+j−2)})`, the every-third-entry Hankel matrix.
pub fn stride3_matrix(kind: Kind, p: u64, rows: usize, cols: usize) -> ExactMatrix {
    ExactMatrix::from_fn(rows, cols, |i, j| BigInt::from(kind.term(p + 3 * (i + j) as u64)))
}

/// Exact determinant by Bareiss elimination. The empty matrix has determinant 1.
pub fn det_exact(m: &ExactMatrix) -> BigInt {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j).clone()).collect()).collect();
    let mut negate = false;
    let mut prev_pivot = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let (upper, lower) = a.split_at_mut(k + 1);
        let pivot_row = &upper[k];
        for row in lower.iter_mut() {
            for j in k + 1..n {
                let value = &pivot_row[k] * &row[j] - &row[k] * &pivot_row[j];
                row[j] = value / &prev_pivot;
            }
            row[k] = BigInt::zero();
        }
        prev_pivot = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Determinant over F₃ by Gaussian elimination. The empty matrix has determinant 1.
pub fn det_mod3(m: &ExactMatrix) -> Residue3 {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows;
    let entries: Vec<u8> = m.entries.iter().map(|v| Residue3::from_bigint(v).value()).collect();
    det_mod3_raw(n, entries)
}

/// Determinant over F₃ of a row-major `n × n` array of residues in `{0,1,2}`.
pub(crate) fn det_mod3_raw(n: usize, mut a: Vec<u8>) -> Residue3 {
    // inverse table: 1 → 1, 2 → 2
    const INV: [u8; 3] = [0, 1, 2];
    let mut det = 1u8;
    for k in 0..n {
        let Some(pivot) = (k..n).find(|&i| a[i * n + k] != 0) else {
            return Residue3::ZERO;
        };
        if pivot != k {
            for j in 0..n {
                a.swap(k * n + j, pivot * n + j);
            }
            det = (3 - det) % 3;
        }
        let pv = a[k * n + k];
        det = det * pv % 3;
        let inv = INV[pv as usize];
        for i in k + 1..n {
            let factor = a[i * n + k] * inv % 3;
            if factor == 0 {
                continue;
            }
            for j in k..n {
                let sub = factor * a[k * n + j] % 3;
                a[i * n + j] = (a[i * n + j] + 3 - sub) % 3;
            }
        }
    }
    Residue3::try_from(det).expect("canonical residue")
}

/// `|H_n^p|` over ℤ.
pub fn hankel_det(kind: Kind, p: u64, n: usize) -> BigInt {
    det_exact(&hankel_matrix(HankelSpec::new(kind, p, n)))
}

/// `|H_n^p| mod 3`, built directly from residues without big integers.
pub fn hankel_det_mod3(kind: Kind, p: u64, n: usize) -> Residue3 {
    let mut a = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            a.push(kind.term(p + (i + j) as u64) % 3);
        }
    }
    det_mod3_raw(n, a)
}

/// Which structural identity failed.
#[derive(Clone, Debug, Error, PartialEq, Eq, Serialize)]
pub enum StructureError {
    #[error("Δ_{n}^{p} ≠ Γ_{n}^{p} + Γ_{n}^(p+2)")]
    DeltaSplit { n: usize, p: u64 },
    #[error("Pᵗ H P for {kind} at order {order}, p = {p} does not match its stride-3 block form")]
    BlockForm { kind: Kind, order: usize, p: u64 },
    #[error("stride-3 block K_{n}^{offset} of {kind} does not reduce to the expected Γ matrix")]
    StrideReduction { kind: Kind, n: usize, offset: u64 },
    #[error("P({order}) has determinant {det}, not ±1")]
    PermutationDet { order: usize, det: String },
    #[error("2n×2n determinant identity fails at n = {n}, p = {p}: lhs {lhs}, rhs {rhs}")]
    Lemma { n: usize, p: u64, lhs: String, rhs: String },
    #[error("the 2n×2n identity needs n ≥ 2 (got {n})")]
    OrderTooSmall { n: usize },
}

/// Values computed while checking the structural identities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub p: u64,
    pub n: usize,
    pub permutation_dets: [i32; 3],
    /// Determinant of `[[Γ_n^p, Γ_n^{p+1}], [Γ_n^{p+1}, −Γ_n^p]]`.
    pub lemma_lhs: String,
    /// `(−1)ⁿ|Γ_n^p||Δ_n^p| + (−1)^{n+1}|Γ_{n+1}^p||Δ_{n−1}^p|`.
    pub lemma_rhs: String,
}

fn check_block_form(kind: Kind, p: u64, order: usize) -> Result<(), StructureError> {
    let perm = PermutationP::new(order);
    let conjugated = hankel_matrix(HankelSpec::new(kind, p, order)).conjugate_by(&perm);
    let sizes = perm.group_sizes();
    let big = sizes[0];
    let blocks: Vec<Vec<ExactMatrix>> = (0..3)
        .map(|a| {
            (0..3)
                .map(|b| {
                    // (K_{big}^{p+a+b}) with its trailing row/column removed where the group is short
                    stride3_matrix(kind, p + (a + b) as u64, big, big).truncate(sizes[a], sizes[b])
                })
                .collect()
        })
        .collect();
    if conjugated == ExactMatrix::from_blocks(&blocks) {
        Ok(())
    } else {
        Err(StructureError::BlockForm { kind, order, p })
    }
}

/// `K_n^{3q+r}` in terms of Γ matrices: for `c` it is `Γ_n^q`, `0`, `Γ_n^q`;
/// for `d` it is `2Γ_n^q`, `Γ_n^{q+1}`, `Γ_n^q`.
fn check_stride_reduction(kind: Kind, q: u64, n: usize) -> Result<(), StructureError> {
    let gamma = |p| hankel_matrix(HankelSpec::new(Kind::Gamma, p, n));
    let expected = match kind {
        Kind::Gamma => [gamma(q), ExactMatrix::zeros(n, n), gamma(q)],
        Kind::Delta => [gamma(q).scale(2), gamma(q + 1), gamma(q)],
    };
    for (r, want) in expected.iter().enumerate() {
        let offset = 3 * q + r as u64;
        if &stride3_matrix(kind, offset, n, n) != want {
            return Err(StructureError::StrideReduction { kind, n, offset });
        }
    }
    Ok(())
}

/// Checks the matrix identities behind the recurrences at `(p, n)`:
/// `Δ_n^p = Γ_n^p + Γ_n^{p+2}`, the block forms of `PᵗH_{3n+r}^pP`, the
/// stride-3 reductions, and the 2n×2n determinant identity.
pub fn verify_structure(p: u64, n: usize) -> Result<StructureReport, StructureError> {
    if n < 2 {
        return Err(StructureError::OrderTooSmall { n });
    }
    let gamma = |p, n| hankel_matrix(HankelSpec::new(Kind::Gamma, p, n));
    let delta = |p, n| hankel_matrix(HankelSpec::new(Kind::Delta, p, n));

    let sum = gamma(p, n).checked_add(&gamma(p + 2, n)).expect("same shape");
    if delta(p, n) != sum {
        return Err(StructureError::DeltaSplit { n, p });
    }

    let mut permutation_dets = [0; 3];
    for (r, slot) in permutation_dets.iter_mut().enumerate() {
        let order = 3 * n + r;
        let det = det_exact(&PermutationP::new(order).to_matrix());
        if det.abs() != BigInt::one() {
            return Err(StructureError::PermutationDet { order, det: det.to_string() });
        }
        *slot = if det.is_positive() { 1 } else { -1 };
        for kind in [Kind::Gamma, Kind::Delta] {
            check_block_form(kind, p, order)?;
        }
    }
    for kind in [Kind::Gamma, Kind::Delta] {
        check_stride_reduction(kind, p, n)?;
        check_stride_reduction(kind, p, n + 1)?;
    }

    let g0 = gamma(p, n);
    let g1 = gamma(p + 1, n);
    let lhs = det_exact(&ExactMatrix::block2(&g0, &g1, &g1, &g0.scale(-1)));
    let sign = if n.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let rhs = &sign * det_exact(&g0) * det_exact(&delta(p, n))
        - &sign * det_exact(&gamma(p, n + 1)) * det_exact(&delta(p, n - 1));
    if lhs != rhs {
        return Err(StructureError::Lemma { n, p, lhs: lhs.to_string(), rhs: rhs.to_string() });
    }
    Ok(StructureReport {
        p,
        n,
        permutation_dets,
        lemma_lhs: lhs.to_string(),
        lemma_rhs: rhs.to_string(),
    })
}
