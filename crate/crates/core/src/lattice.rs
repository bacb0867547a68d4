//! Exact integer matrix algebra: the gauge-weight exponent matrix, row
//! Hermite normal form with a unimodular left transform, kernel bases, and
//! lattice comparison.
//!
//! All arithmetic is arbitrary-precision; there is no modular shortcut and no
//! overflow. Transform rows are kept sparse because on large variable sets
//! the transform is mostly structure around a small pivot core.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::{gamma_set, BasedRing, FusionTriple};
use crate::symbols::{f_symbol_set, FSymbolIndex, ZeroSet};

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let cols = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let nrows = rows.len();
        Ok(IntMat { rows: nrows, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect())
            .expect("literal rows are rectangular")
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.row(r).iter().all(Zero::is_zero)
    }

    pub fn rows_vec(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// self * other, exact.
    pub fn matmul(&self, other: &IntMat) -> Result<IntMat> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let v = self.get(r, k);
                if v.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let add = v * other.get(k, c);
                    let cell = &mut out.data[r * other.cols + c];
                    *cell += add;
                }
            }
        }
        Ok(out)
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMat) -> Result<BigInt> {
    if m.rows != m.cols {
        return Err(Error::DimensionMismatch("determinant of non-square matrix".into()));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a.get(k, k).is_zero() {
            match (k + 1..n).find(|&r| !a.get(r, k).is_zero()) {
                Some(r) => {
                    for c in 0..n {
                        let tmp = a.get(k, c).clone();
                        a.set(k, c, a.get(r, c).clone());
                        a.set(r, c, tmp);
                    }
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                a.set(i, j, v);
            }
        }
        for i in k + 1..n {
            a.set(i, k, BigInt::zero());
        }
        prev = a.get(k, k).clone();
    }
    Ok(sign * a.get(n - 1, n - 1).clone())
}

// ---------------------------------------------------------------------------
// Sparse vectors (transform rows)
// ---------------------------------------------------------------------------

/// Sparse integer vector: sorted (index, nonzero value) pairs.
pub type SparseVec = Vec<(usize, BigInt)>;

/// x*a + y*b over sparse vectors.
fn sparse_combine(a: &SparseVec, x: &BigInt, b: &SparseVec, y: &BigInt) -> SparseVec {
    let mut out = SparseVec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let v = match (a.get(i), b.get(j)) {
            (Some((ia, va)), Some((ib, vb))) if ia == ib => {
                let v = (ia, va * x + vb * y);
                i += 1;
                j += 1;
                v
            }
            (Some((ia, va)), Some((ib, _))) if ia < ib => {
                let v = (ia, va * x);
                i += 1;
                v
            }
            (Some(_), Some((ib, vb))) => {
                let v = (ib, vb * y);
                j += 1;
                v
            }
            (Some((ia, va)), None) => {
                let v = (ia, va * x);
                i += 1;
                v
            }
            (None, Some((ib, vb))) => {
                let v = (ib, vb * y);
                j += 1;
                v
            }
            (None, None) => unreachable!(),
        };
        if !v.1.is_zero() {
            out.push((*v.0, v.1));
        }
    }
    out
}

/// a - q*b in place.
fn sparse_sub_scaled(a: &SparseVec, q: &BigInt, b: &SparseVec) -> SparseVec {
    sparse_combine(a, &BigInt::one(), b, &(-q))
}

pub fn sparse_to_dense(v: &SparseVec, len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, value) in v {
        out[*i] = value.clone();
    }
    out
}

// ---------------------------------------------------------------------------
// Exponent matrix
// ---------------------------------------------------------------------------

/// The gauge-weight matrix: one row per nonzero F-symbol variable, one column
/// per fusion triple; entry (i, j) is the net exponent of triple j in the
/// gauge weight of variable i. Coefficients lie in [-2, 2] and each row sums
/// to zero.
#[derive(Clone, Debug)]
pub struct ExponentMatrix {
    pub matrix: IntMat,
    pub row_labels: Vec<FSymbolIndex>,
    pub col_labels: Vec<FusionTriple>,
}

/// Builds the exponent matrix over the nonzero variables (the full variable
/// set minus `zeros`), rows and columns in canonical order.
pub fn build_exponent_matrix(ring: &BasedRing, zeros: &ZeroSet) -> Result<ExponentMatrix> {
    let phi = f_symbol_set(ring)?;
    for z in zeros.members() {
        if !phi.contains(z) {
            return Err(Error::DomainMismatch(format!(
                "zero set contains inadmissible index {}",
                z.name(ring)
            )));
        }
    }
    let gamma = gamma_set(ring);
    let row_labels: Vec<FSymbolIndex> =
        phi.indices().iter().filter(|idx| !zeros.contains(idx)).copied().collect();
    let mut matrix = IntMat::zeros(row_labels.len(), gamma.len());
    for (r, idx) in row_labels.iter().enumerate() {
        for (triple, weight) in idx.gauge_triples() {
            let c = gamma
                .position(&triple)
                .ok_or_else(|| Error::Internal("admissible index over missing triple".into()))?;
            let cell = matrix.get(r, c) + BigInt::from(weight);
            matrix.set(r, c, cell);
        }
    }
    Ok(ExponentMatrix { matrix, row_labels, col_labels: gamma.triples().to_vec() })
}

// ---------------------------------------------------------------------------
// Hermite normal form with transform
// ---------------------------------------------------------------------------

/// Unimodular row transform `H` together with `H * A` in row Hermite normal
/// form: pivots positive with strictly increasing columns, entries above each
/// pivot reduced into [0, pivot), zero rows last.
#[derive(Clone, Debug)]
pub struct HnfTransform {
    /// Rows of H, sparse; `transform.len()` equals the row count of A.
    pub transform: Vec<SparseVec>,
    /// H * A.
    pub hnf: IntMat,
}

impl HnfTransform {
    pub fn transform_dense(&self) -> IntMat {
        let n = self.transform.len();
        let mut m = IntMat::zeros(n, n);
        for (r, row) in self.transform.iter().enumerate() {
            for (c, v) in row {
                m.set(r, *c, v.clone());
            }
        }
        m
    }

    /// Number of nonzero rows of the HNF.
    pub fn rank(&self) -> usize {
        (0..self.hnf.nrows()).filter(|&r| !self.hnf.row_is_zero(r)).count()
    }
}

struct PivotRow {
    col: usize,
    a: Vec<BigInt>,
    t: SparseVec,
}

fn first_nonzero(row: &[BigInt], from: usize) -> Option<usize> {
    (from..row.len()).find(|&c| !row[c].is_zero())
}

/// Computes the row HNF of `a` with its unimodular transform. Deterministic
/// given the row and column order of `a`.
pub fn hnf_with_transform(a: &IntMat) -> HnfTransform {
    let cols = a.ncols();
    let mut pivots: Vec<PivotRow> = Vec::new();
    let mut kernel: Vec<SparseVec> = Vec::new();

    for r in 0..a.nrows() {
        let mut row: Vec<BigInt> = a.row(r).to_vec();
        let mut t: SparseVec = vec![(r, BigInt::one())];
        let mut from = 0usize;
        loop {
            let Some(c) = first_nonzero(&row, from) else {
                kernel.push(t);
                break;
            };
            from = c;
            match pivots.binary_search_by_key(&c, |p| p.col) {
                Ok(k) => {
                    let pivot_value = pivots[k].a[c].clone();
                    if (&row[c] % &pivot_value).is_zero() {
                        let q = &row[c] / &pivot_value;
                        for j in c..cols {
                            let sub = &q * &pivots[k].a[j];
                            row[j] -= sub;
                        }
                        t = sparse_sub_scaled(&t, &q, &pivots[k].t);
                    } else {
                        // gcd step: replace the pivot by the gcd combination
                        // and continue with the complementary row. Both maps
                        // together are unimodular.
                        let egcd = pivot_value.extended_gcd(&row[c]);
                        let (g, x, y) = (egcd.gcd, egcd.x, egcd.y);
                        let pa = &pivot_value / &g;
                        let ra = &row[c] / &g;
                        let mut new_pivot = vec![BigInt::zero(); cols];
                        let mut new_row = vec![BigInt::zero(); cols];
                        for j in c..cols {
                            new_pivot[j] = &x * &pivots[k].a[j] + &y * &row[j];
                            new_row[j] = &pa * &row[j] - &ra * &pivots[k].a[j];
                        }
                        let new_pivot_t = sparse_combine(&pivots[k].t, &x, &t, &y);
                        let new_row_t = sparse_combine(&t, &pa, &pivots[k].t, &(-ra));
                        pivots[k].a = new_pivot;
                        pivots[k].t = new_pivot_t;
                        row = new_row;
                        t = new_row_t;
                    }
                }
                Err(k) => {
                    if row[c].is_negative() {
                        for v in row.iter_mut() {
                            *v = -std::mem::take(v);
                        }
                        for (_, v) in t.iter_mut() {
                            *v = -std::mem::take(v);
                        }
                    }
                    pivots.insert(k, PivotRow { col: c, a: row, t });
                    break;
                }
            }
        }
    }

    // Reduce entries above each pivot into [0, pivot).
    for k in 0..pivots.len() {
        let (before, rest) = pivots.split_at_mut(k);
        let pk = &rest[0];
        for pj in before {
            let q = pj.a[pk.col].div_floor(&pk.a[pk.col]);
            if q.is_zero() {
                continue;
            }
            for j in pk.col..cols {
                let sub = &q * &pk.a[j];
                pj.a[j] -= sub;
            }
            pj.t = sparse_sub_scaled(&pj.t, &q, &pk.t);
        }
    }

    let mut hnf_rows = Vec::with_capacity(a.nrows());
    let mut transform = Vec::with_capacity(a.nrows());
    for p in pivots {
        hnf_rows.push(p.a);
        transform.push(p.t);
    }
    for t in kernel {
        hnf_rows.push(vec![BigInt::zero(); cols]);
        transform.push(t);
    }
    HnfTransform {
        transform,
        hnf: IntMat::from_rows(hnf_rows).expect("rows share the input width"),
    }
}

/// The rows of H whose HNF row is zero: a basis of the left integer kernel
/// of A. Because H is unimodular this basis spans the full (saturated)
/// kernel lattice {v : v A = 0}.
pub fn kernel_basis(pair: &HnfTransform) -> Vec<SparseVec> {
    (0..pair.hnf.nrows())
        .filter(|&r| pair.hnf.row_is_zero(r))
        .map(|r| pair.transform[r].clone())
        .collect()
}

// ---------------------------------------------------------------------------
// Lattice comparison
// ---------------------------------------------------------------------------

/// Canonical form of the row span: the nonzero rows of the HNF.
pub fn row_hnf(rows: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>> {
    let m = IntMat::from_rows(rows.to_vec())?;
    let pair = hnf_with_transform(&m);
    Ok((0..pair.hnf.nrows())
        .filter(|&r| !pair.hnf.row_is_zero(r))
        .map(|r| pair.hnf.row(r).to_vec())
        .collect())
}

/// Whether two generating sets span the same integer row lattice.
pub fn lattice_equal(b1: &[Vec<BigInt>], b2: &[Vec<BigInt>]) -> Result<bool> {
    let w1 = b1.first().map(Vec::len);
    let w2 = b2.first().map(Vec::len);
    if let (Some(w1), Some(w2)) = (w1, w2) {
        if w1 != w2 {
            return Err(Error::DimensionMismatch(format!("vector lengths {w1} vs {w2}")));
        }
    }
    Ok(row_hnf(b1)? == row_hnf(b2)?)
}

/// Integer coordinates of `v` in the row span of `basis`, or None when `v`
/// is outside the lattice.
pub fn solve_coordinates(basis: &[Vec<BigInt>], v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if basis.iter().any(|b| b.len() != v.len()) {
        return Err(Error::DimensionMismatch("basis and vector lengths differ".into()));
    }
    let m = IntMat::from_rows(basis.to_vec())?;
    let pair = hnf_with_transform(&m);
    let mut residue = v.to_vec();
    let mut reduced_coords = vec![BigInt::zero(); basis.len()];
    for r in 0..pair.hnf.nrows() {
        if pair.hnf.row_is_zero(r) {
            continue;
        }
        let c = first_nonzero(pair.hnf.row(r), 0).expect("nonzero row");
        let (q, rem) = residue[c].div_rem(pair.hnf.get(r, c));
        if !rem.is_zero() {
            return Ok(None);
        }
        if !q.is_zero() {
            for j in c..v.len() {
                let sub = &q * pair.hnf.get(r, j);
                residue[j] -= sub;
            }
        }
        reduced_coords[r] = q;
    }
    if residue.iter().any(|x| !x.is_zero()) {
        return Ok(None);
    }
    // v = d * (H B) = (d H) B.
    let mut coords = vec![BigInt::zero(); basis.len()];
    for (r, d) in reduced_coords.iter().enumerate() {
        if d.is_zero() {
            continue;
        }
        for (i, h) in &pair.transform[r] {
            coords[*i] += d * h;
        }
    }
    Ok(Some(coords))
}

/// Membership in the integer row span.
pub fn lattice_contains(basis: &[Vec<BigInt>], v: &[BigInt]) -> Result<bool> {
    Ok(solve_coordinates(basis, v)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn trivial_ring_exponent_matrix_is_zero() {
        let ring = fixtures::trivial_ring();
        let em = build_exponent_matrix(&ring, &ZeroSet::empty()).unwrap();
        assert_eq!(em.matrix.nrows(), 1);
        assert_eq!(em.matrix.ncols(), 1);
        assert!(em.matrix.row_is_zero(0));
        let pair = hnf_with_transform(&em.matrix);
        assert_eq!(pair.transform_dense(), IntMat::from_i64(&[&[1]]));
        assert!(pair.hnf.row_is_zero(0));
        assert_eq!(kernel_basis(&pair).len(), 1);
    }

    #[test]
    fn fib_exponent_rows_match_gauge_weights() {
        let ring = fixtures::fib_ring();
        let em = build_exponent_matrix(&ring, &ZeroSet::empty()).unwrap();
        assert_eq!((em.matrix.nrows(), em.matrix.ncols()), (15, 5));
        // Row of F[1,1,tau;tau|1,tau]: +1 at (1,1,1), -1 at (1,tau,tau).
        assert_eq!(em.matrix.row(1), &[bi(1), bi(-1), bi(0), bi(0), bi(0)][..]);
        // Every row sums to zero and entries stay within [-2, 2].
        for r in 0..em.matrix.nrows() {
            let sum: BigInt = em.matrix.row(r).iter().sum();
            assert!(sum.is_zero());
            assert!(em.matrix.row(r).iter().all(|v| v.abs() <= bi(2)));
        }
    }

    #[test]
    fn hnf_of_fib_matrix_has_three_pivots() {
        let ring = fixtures::fib_ring();
        let em = build_exponent_matrix(&ring, &ZeroSet::empty()).unwrap();
        let pair = hnf_with_transform(&em.matrix);
        assert_eq!(pair.rank(), 3);
        assert_eq!(pair.hnf.row(0), &[bi(1), bi(0), bi(0), bi(1), bi(-2)][..]);
        assert_eq!(pair.hnf.row(1), &[bi(0), bi(1), bi(0), bi(1), bi(-2)][..]);
        assert_eq!(pair.hnf.row(2), &[bi(0), bi(0), bi(1), bi(1), bi(-2)][..]);
        for r in 3..15 {
            assert!(pair.hnf.row_is_zero(r));
        }
        assert_eq!(kernel_basis(&pair).len(), 12);
    }

    #[test]
    fn hnf_idempotent_on_its_nonzero_rows() {
        let ring = fixtures::fib_ring();
        let em = build_exponent_matrix(&ring, &ZeroSet::empty()).unwrap();
        let pair = hnf_with_transform(&em.matrix);
        let nonzero: Vec<Vec<BigInt>> = (0..pair.rank()).map(|r| pair.hnf.row(r).to_vec()).collect();
        assert_eq!(row_hnf(&nonzero).unwrap(), nonzero);
    }

    #[test]
    fn one_by_one_zero_matrix() {
        let pair = hnf_with_transform(&IntMat::from_i64(&[&[0]]));
        assert_eq!(pair.transform_dense(), IntMat::from_i64(&[&[1]]));
        assert_eq!(pair.hnf, IntMat::from_i64(&[&[0]]));
    }

    #[test]
    fn lattice_equal_under_row_ops() {
        let b = vec![vec![bi(1), bi(2), bi(0)], vec![bi(0), bi(3), bi(1)]];
        let mut permuted = vec![b[1].clone(), b[0].clone()];
        permuted[0] = permuted[0].iter().map(|v| -v).collect();
        assert!(lattice_equal(&b, &permuted).unwrap());
        let sub = vec![vec![bi(2), bi(0)]];
        let full = vec![vec![bi(1), bi(0)]];
        assert!(!lattice_equal(&sub, &full).unwrap());
        assert!(lattice_equal(&[], &[]).unwrap());
        assert!(matches!(
            lattice_equal(&sub, &[vec![bi(1)]]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn solve_coordinates_finds_exact_combinations() {
        let basis = vec![
            vec![bi(2), bi(1), bi(0)],
            vec![bi(0), bi(3), bi(1)],
        ];
        let v = vec![bi(4), bi(5), bi(1)]; // 2*b0 + 1*b1
        let c = solve_coordinates(&basis, &v).unwrap().unwrap();
        assert_eq!(c, vec![bi(2), bi(1)]);
        // (1, 0, 0) is not in the lattice.
        assert!(solve_coordinates(&basis, &[bi(1), bi(0), bi(0)]).unwrap().is_none());
        assert!(lattice_contains(&basis, &v).unwrap());
    }

    #[test]
    fn determinant_small_cases() {
        assert_eq!(determinant(&IntMat::from_i64(&[&[3]])).unwrap(), bi(3));
        assert_eq!(determinant(&IntMat::from_i64(&[&[1, 2], &[3, 4]])).unwrap(), bi(-2));
        assert_eq!(
            determinant(&IntMat::from_i64(&[&[0, 1], &[1, 0]])).unwrap(),
            bi(-1)
        );
        assert_eq!(
            determinant(&IntMat::from_i64(&[&[2, 0], &[0, 0]])).unwrap(),
            bi(0)
        );
        assert!(determinant(&IntMat::from_i64(&[&[1, 2]])).is_err());
    }

    #[test]
    fn transform_is_unimodular_and_factors_input() {
        let a = IntMat::from_i64(&[
            &[2, 4, 4],
            &[-6, 6, 12],
            &[10, -4, -16],
            &[2, 4, 4],
        ]);
        let pair = hnf_with_transform(&a);
        let h = pair.transform_dense();
        assert_eq!(h.matmul(&a).unwrap(), pair.hnf);
        assert_eq!(determinant(&h).unwrap().abs(), BigInt::one());
        for v in kernel_basis(&pair) {
            let dense = sparse_to_dense(&v, a.nrows());
            let prod = IntMat::from_rows(vec![dense]).unwrap().matmul(&a).unwrap();
            assert!(prod.row_is_zero(0));
        }
    }
}
