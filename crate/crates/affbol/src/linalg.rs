//! Dense linear algebra over GF(q): reduced row echelon form, affine system
//! solving with kernel bases, row-space membership, and subspace sums.
//!
//! Matrices do not carry their field; every operation takes the [`Fq`]
//! context explicitly. All arithmetic is exact.

use crate::fq::Fq;
use std::fmt;

/// Row-major rectangular matrix over GF(q).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatFq {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for MatFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatFq[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl MatFq {
    pub fn new(rows: usize, cols: usize, data: Vec<u32>) -> MatFq {
        assert_eq!(rows * cols, data.len(), "matrix data length mismatch");
        MatFq { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> MatFq {
        MatFq {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> MatFq {
        let mut m = MatFq::zero(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u32>], cols: usize) -> MatFq {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend_from_slice(r);
        }
        MatFq {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    /// Appends a row, which must have `cols` entries.
    pub fn push_row(&mut self, row: &[u32]) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    /// Matrix-vector product `M v`.
    pub fn mat_vec(&self, field: &Fq, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u32;
                for (j, &x) in v.iter().enumerate() {
                    acc = field.add(acc, field.mul(self[(i, j)], x));
                }
                acc
            })
            .collect()
    }

    /// Checks the RREF predicate: each pivot is 1, is the only nonzero entry
    /// in its column, pivot columns strictly increase, zero rows (if any)
    /// come last.
    pub fn is_rref(&self) -> bool {
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero_row = false;
        for i in 0..self.rows {
            let row = self.row(i);
            match row.iter().position(|&x| x != 0) {
                None => seen_zero_row = true,
                Some(c) => {
                    if seen_zero_row || row[c] != 1 {
                        return false;
                    }
                    if let Some(prev) = last_pivot {
                        if c <= prev {
                            return false;
                        }
                    }
                    for k in 0..self.rows {
                        if k != i && self[(k, c)] != 0 {
                            return false;
                        }
                    }
                    last_pivot = Some(c);
                }
            }
        }
        true
    }
}

impl std::ops::Index<(usize, usize)> for MatFq {
    type Output = u32;

    fn index(&self, (i, j): (usize, usize)) -> &u32 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for MatFq {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u32 {
        &mut self.data[i * self.cols + j]
    }
}

/// Result of [`rref`]: the reduced matrix, its pivot columns, and the rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub mat: MatFq,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Reduced row echelon form by Gauss-Jordan elimination.
pub fn rref(field: &Fq, m: &MatFq) -> Rref {
    let mut mat = m.clone();
    let (rows, cols) = (mat.rows(), mat.cols());
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(pivot_row) = (rank..rows).find(|&i| mat[(i, col)] != 0) else {
            continue;
        };
        mat.swap_rows(rank, pivot_row);
        let inv = field.inv(mat[(rank, col)]).expect("pivot is nonzero");
        for j in col..cols {
            mat[(rank, j)] = field.mul(mat[(rank, j)], inv);
        }
        for i in 0..rows {
            if i == rank || mat[(i, col)] == 0 {
                continue;
            }
            let factor = mat[(i, col)];
            for j in col..cols {
                let t = field.mul(factor, mat[(rank, j)]);
                mat[(i, j)] = field.sub(mat[(i, j)], t);
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    Rref { mat, pivots, rank }
}

/// Rows of the RREF with zero rows removed: a canonical basis of the row
/// space.
pub fn row_basis(field: &Fq, m: &MatFq) -> MatFq {
    let r = rref(field, m);
    let mut out = MatFq::zero(0, m.cols());
    for i in 0..r.rank {
        out.push_row(r.mat.row(i));
    }
    out
}

/// Outcome of [`solve`]: a particular solution (when the system is
/// feasible) and a canonical basis of the kernel of the coefficient matrix.
/// The full solution set is `particular + row_space(kernel)`.
#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub particular: Option<Vec<u32>>,
    pub kernel: MatFq,
}

/// Solves `M x = b` exactly over GF(q).
pub fn solve(field: &Fq, m: &MatFq, b: &[u32]) -> SolveOutcome {
    assert_eq!(m.rows(), b.len(), "dimension mismatch");
    let cols = m.cols();
    // Augment with b as an extra column.
    let mut aug = MatFq::zero(m.rows(), cols + 1);
    for i in 0..m.rows() {
        for j in 0..cols {
            aug[(i, j)] = m[(i, j)];
        }
        aug[(i, cols)] = b[i];
    }
    let r = rref(field, &aug);
    let feasible = !r.pivots.contains(&cols);
    let particular = if feasible {
        let mut x = vec![0u32; cols];
        for (row, &col) in r.pivots.iter().enumerate() {
            x[col] = r.mat[(row, cols)];
        }
        Some(x)
    } else {
        None
    };
    // Kernel from the RREF of M alone; reuse the augmented RREF by ignoring
    // the last column (its pivots over the first `cols` columns coincide).
    let pivots: Vec<usize> = r.pivots.iter().copied().filter(|&c| c < cols).collect();
    let is_pivot = {
        let mut flags = vec![false; cols];
        for &c in &pivots {
            flags[c] = true;
        }
        flags
    };
    let mut kernel_rows: Vec<Vec<u32>> = Vec::new();
    for free in 0..cols {
        if is_pivot[free] {
            continue;
        }
        let mut v = vec![0u32; cols];
        v[free] = 1;
        for (row, &col) in pivots.iter().enumerate() {
            v[col] = field.neg(r.mat[(row, free)]);
        }
        kernel_rows.push(v);
    }
    let kernel = row_basis(field, &MatFq::from_rows(&kernel_rows, cols));
    SolveOutcome { particular, kernel }
}

/// True when `v` lies in the row space of an RREF matrix.
pub fn in_row_space(field: &Fq, basis: &MatFq, v: &[u32]) -> bool {
    reduce_by_basis(field, basis, v).iter().all(|&x| x == 0)
}

/// Reduces `v` by the pivots of an RREF basis; the result is zero exactly
/// on membership, and in general is the canonical coset representative of
/// `v` modulo the row space.
pub fn reduce_by_basis(field: &Fq, basis: &MatFq, v: &[u32]) -> Vec<u32> {
    debug_assert!(basis.is_rref(), "basis must be in RREF");
    assert_eq!(basis.cols(), v.len(), "dimension mismatch");
    let mut v = v.to_vec();
    for i in 0..basis.rows() {
        let Some(pivot) = basis.row(i).iter().position(|&x| x != 0) else {
            continue;
        };
        let factor = v[pivot];
        if factor == 0 {
            continue;
        }
        for j in pivot..v.len() {
            let t = field.mul(factor, basis[(i, j)]);
            v[j] = field.sub(v[j], t);
        }
    }
    v
}

/// Canonical RREF basis of `U + V` given bases of the two row spaces.
pub fn subspace_sum(field: &Fq, u: &MatFq, v: &MatFq) -> MatFq {
    assert_eq!(u.cols(), v.cols(), "ambient dimension mismatch");
    let mut stacked = u.clone();
    for i in 0..v.rows() {
        stacked.push_row(v.row(i));
    }
    row_basis(field, &stacked)
}
