//! Linear, affine, and projective subspaces of F_q^n in canonical form.
//!
//! A linear subspace is represented by its RREF basis, an affine subspace
//! (coset) by its direction subspace plus a base point whose entries vanish
//! on all pivot columns of the direction basis. Both representations are
//! canonical: two subspaces are equal exactly when their representations
//! are componentwise equal, which makes equality, hashing, and memoization
//! cheap everywhere downstream.
//!
//! The empty set is deliberately *not* an [`AffineSubspace`]; emptiness
//! only ever appears as [`IntersectionResult::Empty`].

use crate::fq::Fq;
use crate::linalg::{self, MatFq};
use num::BigUint;
use std::fmt;
use std::sync::Arc;

/// Default cap on the ambient point count q^n, and on enumeration sizes.
pub const DEFAULT_POINT_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeometryError {
    /// Operands live in different spaces, or a vector/basis has the wrong
    /// length for its space.
    DimensionMismatch,
    /// The ambient dimension is zero or a projective carrier is trivial.
    InvalidDimension,
    /// A point count or enumeration count exceeds the configured budget.
    BudgetExceeded { needed: u128, cap: u64 },
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::DimensionMismatch => write!(f, "dimension or space mismatch"),
            GeometryError::InvalidDimension => write!(f, "invalid ambient or carrier dimension"),
            GeometryError::BudgetExceeded { needed, cap } => {
                write!(f, "size {needed} exceeds the configured budget {cap}")
            }
        }
    }
}

impl std::error::Error for GeometryError {}

/// Ambient space F_q^n together with a machine budget for q^n.
#[derive(Clone)]
pub struct SpaceDesc {
    field: Arc<Fq>,
    n: usize,
    budget: u64,
}

impl fmt::Debug for SpaceDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpaceDesc(q={}, n={})", self.q(), self.n)
    }
}

impl PartialEq for SpaceDesc {
    fn eq(&self, other: &Self) -> bool {
        self.q() == other.q() && self.n == other.n
    }
}

impl Eq for SpaceDesc {}

impl std::hash::Hash for SpaceDesc {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.q().hash(state);
        self.n.hash(state);
    }
}

impl SpaceDesc {
    pub fn new(field: Fq, n: usize) -> Result<SpaceDesc, GeometryError> {
        SpaceDesc::with_budget(field, n, DEFAULT_POINT_BUDGET)
    }

    pub fn with_budget(field: Fq, n: usize, budget: u64) -> Result<SpaceDesc, GeometryError> {
        if n == 0 {
            return Err(GeometryError::InvalidDimension);
        }
        let count = (field.q() as u128).checked_pow(n as u32);
        match count {
            Some(c) if c <= budget as u128 => Ok(SpaceDesc {
                field: Arc::new(field),
                n,
                budget,
            }),
            Some(c) => Err(GeometryError::BudgetExceeded { needed: c, cap: budget }),
            None => Err(GeometryError::BudgetExceeded {
                needed: u128::MAX,
                cap: budget,
            }),
        }
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn point_count(&self) -> u64 {
        (self.q() as u64).pow(self.n as u32)
    }

    /// Bijective base-q index of a point; coordinate 0 is least significant.
    pub fn point_index(&self, v: &[u32]) -> u64 {
        assert_eq!(v.len(), self.n, "point has wrong length");
        let q = self.q() as u64;
        v.iter().rev().fold(0u64, |acc, &c| acc * q + c as u64)
    }

    /// Inverse of [`SpaceDesc::point_index`].
    pub fn point_unindex(&self, mut idx: u64) -> Vec<u32> {
        let q = self.q() as u64;
        let mut v = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            v.push((idx % q) as u32);
            idx /= q;
        }
        debug_assert_eq!(idx, 0, "index out of range");
        v
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        (0..self.point_count()).map(move |i| self.point_unindex(i))
    }

    pub fn zero_point(&self) -> Vec<u32> {
        vec![0; self.n]
    }
}

/// Linear subspace of F_q^n, stored as its RREF basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinearSubspace {
    space: SpaceDesc,
    basis: MatFq,
}

impl LinearSubspace {
    /// Canonical subspace spanned by arbitrary rows.
    pub fn from_spanning(space: &SpaceDesc, rows: &MatFq) -> Result<LinearSubspace, GeometryError> {
        if rows.cols() != space.n() {
            return Err(GeometryError::DimensionMismatch);
        }
        let basis = linalg::row_basis(space.field(), rows);
        Ok(LinearSubspace {
            space: space.clone(),
            basis,
        })
    }

    /// Wraps a matrix that is already a canonical RREF basis with no zero
    /// rows.
    pub(crate) fn from_rref(space: &SpaceDesc, basis: MatFq) -> LinearSubspace {
        debug_assert!(basis.is_rref() && basis.cols() == space.n());
        debug_assert!(basis.rows() == 0 || !basis.row(basis.rows() - 1).iter().all(|&x| x == 0));
        LinearSubspace {
            space: space.clone(),
            basis,
        }
    }

    pub fn zero(space: &SpaceDesc) -> LinearSubspace {
        LinearSubspace {
            space: space.clone(),
            basis: MatFq::zero(0, space.n()),
        }
    }

    pub fn full(space: &SpaceDesc) -> LinearSubspace {
        LinearSubspace {
            space: space.clone(),
            basis: MatFq::identity(space.n()),
        }
    }

    pub fn space(&self) -> &SpaceDesc {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &MatFq {
        &self.basis
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        linalg::in_row_space(self.space.field(), &self.basis, v)
    }

    pub fn sum(&self, other: &LinearSubspace) -> Result<LinearSubspace, GeometryError> {
        if self.space != other.space {
            return Err(GeometryError::DimensionMismatch);
        }
        let basis = linalg::subspace_sum(self.space.field(), &self.basis, &other.basis);
        Ok(LinearSubspace {
            space: self.space.clone(),
            basis,
        })
    }

    /// dim(U ∩ V) through the rank identity dim U + dim V - dim(U + V).
    pub fn intersection_dim(&self, other: &LinearSubspace) -> Result<usize, GeometryError> {
        let s = self.sum(other)?;
        Ok(self.dim() + other.dim() - s.dim())
    }

    /// Canonical basis of U ∩ V.
    pub fn intersection(&self, other: &LinearSubspace) -> Result<LinearSubspace, GeometryError> {
        if self.space != other.space {
            return Err(GeometryError::DimensionMismatch);
        }
        let field = self.space.field();
        let n = self.space.n();
        let (ku, kv) = (self.dim(), other.dim());
        // Kernel of the n x (ku + kv) matrix whose columns are the basis
        // rows of U followed by those of V: a kernel vector (s, t) has
        // sum s_p u_p + sum t_p v_p = 0, so sum s_p u_p lies in U ∩ V.
        let mut m = MatFq::zero(n, ku + kv);
        for p in 0..ku {
            for i in 0..n {
                m[(i, p)] = self.basis[(p, i)];
            }
        }
        for p in 0..kv {
            for i in 0..n {
                m[(i, ku + p)] = other.basis[(p, i)];
            }
        }
        let kernel = linalg::solve(field, &m, &vec![0u32; n]).kernel;
        let mut spanning = MatFq::zero(0, n);
        for k in 0..kernel.rows() {
            let coeffs = kernel.row(k);
            let mut w = vec![0u32; n];
            for p in 0..ku {
                for (i, slot) in w.iter_mut().enumerate() {
                    *slot = field.add(*slot, field.mul(coeffs[p], self.basis[(p, i)]));
                }
            }
            spanning.push_row(&w);
        }
        let inter = LinearSubspace::from_spanning(&self.space, &spanning)?;
        debug_assert_eq!(inter.dim(), self.intersection_dim(other)?);
        Ok(inter)
    }
}

/// Affine subspace (coset) of F_q^n in canonical form: the direction basis
/// is RREF and the base point has zero entries on every pivot column.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AffineSubspace {
    direction: LinearSubspace,
    base: Vec<u32>,
}

impl AffineSubspace {
    /// Canonical coset through `point` with the given direction rows
    /// (not necessarily independent or reduced).
    pub fn canonicalize(
        space: &SpaceDesc,
        direction_rows: &MatFq,
        point: &[u32],
    ) -> Result<AffineSubspace, GeometryError> {
        if point.len() != space.n() {
            return Err(GeometryError::DimensionMismatch);
        }
        let direction = LinearSubspace::from_spanning(space, direction_rows)?;
        Ok(AffineSubspace::new(direction, point))
    }

    /// Canonical coset `point + direction`. The point is reduced against
    /// the direction's pivots, which maps every representative of one coset
    /// to the same base point.
    pub fn new(direction: LinearSubspace, point: &[u32]) -> AffineSubspace {
        assert_eq!(point.len(), direction.space().n(), "point has wrong length");
        let base = linalg::reduce_by_basis(direction.space().field(), direction.basis(), point);
        AffineSubspace { direction, base }
    }

    pub fn single_point(space: &SpaceDesc, point: &[u32]) -> Result<AffineSubspace, GeometryError> {
        if point.len() != space.n() {
            return Err(GeometryError::DimensionMismatch);
        }
        Ok(AffineSubspace {
            direction: LinearSubspace::zero(space),
            base: point.to_vec(),
        })
    }

    /// The coset of a linear subspace through the origin.
    pub fn through_origin(direction: &LinearSubspace) -> AffineSubspace {
        AffineSubspace {
            base: vec![0; direction.space().n()],
            direction: direction.clone(),
        }
    }

    pub fn space(&self) -> &SpaceDesc {
        self.direction.space()
    }

    pub fn direction(&self) -> &LinearSubspace {
        &self.direction
    }

    pub fn base(&self) -> &[u32] {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.direction.dim()
    }

    /// Number of points, q^dim.
    pub fn size(&self) -> u64 {
        (self.space().q() as u64).pow(self.dim() as u32)
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        if v.len() != self.space().n() {
            return false;
        }
        let field = self.space().field();
        let diff: Vec<u32> = v
            .iter()
            .zip(&self.base)
            .map(|(&a, &b)| field.sub(a, b))
            .collect();
        self.direction.contains(&diff)
    }

    /// The coset `alpha + self`.
    pub fn translate(&self, alpha: &[u32]) -> Result<AffineSubspace, GeometryError> {
        if alpha.len() != self.space().n() {
            return Err(GeometryError::DimensionMismatch);
        }
        let field = self.space().field();
        let moved: Vec<u32> = self
            .base
            .iter()
            .zip(alpha)
            .map(|(&b, &a)| field.add(b, a))
            .collect();
        Ok(AffineSubspace::new(self.direction.clone(), &moved))
    }

    /// All points of the coset, in odometer order over the direction basis
    /// coefficients.
    pub fn points(&self) -> Vec<Vec<u32>> {
        let field = self.space().field();
        let q = self.space().q() as u64;
        let dim = self.dim();
        let n = self.space().n();
        let total = q.pow(dim as u32);
        let mut out = Vec::with_capacity(total as usize);
        for mut idx in 0..total {
            let mut p = self.base.clone();
            for i in 0..dim {
                let c = (idx % q) as u32;
                idx /= q;
                if c != 0 {
                    for j in 0..n {
                        p[j] = field.add(p[j], field.mul(c, self.direction.basis()[(i, j)]));
                    }
                }
            }
            out.push(p);
        }
        out
    }

    /// Point indices of the coset, ascending.
    pub fn point_indices(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .points()
            .into_iter()
            .map(|p| self.space().point_index(&p))
            .collect();
        out.sort_unstable();
        out
    }
}

/// Intersection of two cosets: empty, or a coset of the intersection of the
/// two direction subspaces (so its size is a power of q).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IntersectionResult {
    Empty,
    Coset(AffineSubspace),
}

impl IntersectionResult {
    pub fn is_empty(&self) -> bool {
        matches!(self, IntersectionResult::Empty)
    }

    /// The exponent t with |A ∩ B| = q^t, when nonempty.
    pub fn exponent(&self) -> Option<usize> {
        match self {
            IntersectionResult::Empty => None,
            IntersectionResult::Coset(c) => Some(c.dim()),
        }
    }

    pub fn coset(&self) -> Option<&AffineSubspace> {
        match self {
            IntersectionResult::Empty => None,
            IntersectionResult::Coset(c) => Some(c),
        }
    }

    /// |A ∩ B| as an integer (0 when empty).
    pub fn size(&self) -> u64 {
        match self {
            IntersectionResult::Empty => 0,
            IntersectionResult::Coset(c) => c.size(),
        }
    }
}

/// Intersection of two cosets. Nonemptiness is decided by
/// base(B) - base(A) ∈ dir(A) + dir(B); a nonempty intersection is the
/// canonical coset of dir(A) ∩ dir(B) through a common point.
pub fn affine_intersect(
    a: &AffineSubspace,
    b: &AffineSubspace,
) -> Result<IntersectionResult, GeometryError> {
    if a.space() != b.space() {
        return Err(GeometryError::DimensionMismatch);
    }
    let space = a.space();
    let field = space.field();
    let n = space.n();
    let (ka, kb) = (a.dim(), b.dim());

    // Solve s·basis(A) - t·basis(B) = base(B) - base(A). Feasibility is
    // exactly membership of the base difference in dir(A) + dir(B); the
    // kernel spans the coefficient pairs of dir(A) ∩ dir(B).
    let mut m = MatFq::zero(n, ka + kb);
    for p in 0..ka {
        for i in 0..n {
            m[(i, p)] = a.direction.basis()[(p, i)];
        }
    }
    for p in 0..kb {
        for i in 0..n {
            m[(i, ka + p)] = field.neg(b.direction.basis()[(p, i)]);
        }
    }
    let d: Vec<u32> = b
        .base
        .iter()
        .zip(&a.base)
        .map(|(&bb, &ab)| field.sub(bb, ab))
        .collect();
    let out = linalg::solve(field, &m, &d);
    let Some(x) = out.particular else {
        return Ok(IntersectionResult::Empty);
    };

    let mut point = a.base.clone();
    for p in 0..ka {
        if x[p] != 0 {
            for (i, slot) in point.iter_mut().enumerate() {
                *slot = field.add(*slot, field.mul(x[p], a.direction.basis()[(p, i)]));
            }
        }
    }
    debug_assert!(a.contains(&point) && b.contains(&point));

    let mut spanning = MatFq::zero(0, n);
    for k in 0..out.kernel.rows() {
        let coeffs = out.kernel.row(k);
        let mut w = vec![0u32; n];
        for p in 0..ka {
            if coeffs[p] != 0 {
                for (i, slot) in w.iter_mut().enumerate() {
                    *slot = field.add(*slot, field.mul(coeffs[p], a.direction.basis()[(p, i)]));
                }
            }
        }
        spanning.push_row(&w);
    }
    let dir = LinearSubspace::from_spanning(space, &spanning)?;
    Ok(IntersectionResult::Coset(AffineSubspace::new(dir, &point)))
}

/// Membership in the Minkowski difference: alpha ∈ F - G, which for cosets
/// means alpha - (base F - base G) ∈ dir F + dir G. Coincides with
/// `affine_intersect(F, alpha + G)` being nonempty.
pub fn minkowski_member(
    alpha: &[u32],
    f: &AffineSubspace,
    g: &AffineSubspace,
) -> Result<bool, GeometryError> {
    if f.space() != g.space() || alpha.len() != f.space().n() {
        return Err(GeometryError::DimensionMismatch);
    }
    let field = f.space().field();
    let target: Vec<u32> = alpha
        .iter()
        .zip(&f.base)
        .zip(&g.base)
        .map(|((&al, &fb), &gb)| field.add(field.sub(al, fb), gb))
        .collect();
    let sum = f.direction.sum(&g.direction)?;
    Ok(linalg::in_row_space(field, sum.basis(), &target))
}

/// Projective subspace of PG(n, q), stored by its homogeneous carrier: a
/// linear subspace of F_q^(n+1) of dimension >= 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProjectiveSubspace {
    carrier: LinearSubspace,
}

impl ProjectiveSubspace {
    pub fn new(carrier: LinearSubspace) -> Result<ProjectiveSubspace, GeometryError> {
        if carrier.dim() == 0 {
            return Err(GeometryError::InvalidDimension);
        }
        Ok(ProjectiveSubspace { carrier })
    }

    pub fn carrier(&self) -> &LinearSubspace {
        &self.carrier
    }

    /// Projective dimension, one less than the carrier dimension.
    pub fn projective_dim(&self) -> usize {
        self.carrier.dim() - 1
    }

    pub fn space(&self) -> &SpaceDesc {
        self.carrier.space()
    }

    /// True when the two projective sets share no point, i.e. the carriers
    /// intersect only in the zero vector (checked through ranks).
    pub fn disjoint_from(&self, other: &ProjectiveSubspace) -> Result<bool, GeometryError> {
        let s = self.carrier.sum(&other.carrier)?;
        Ok(s.dim() == self.carrier.dim() + other.carrier.dim())
    }
}

// ---- Enumeration ----

/// Gaussian binomial coefficient: the number of d-dimensional linear
/// subspaces of F_q^n.
pub fn gaussian_binomial(n: u64, d: u64, q: u64) -> BigUint {
    if d > n {
        return BigUint::from(0u32);
    }
    let q = BigUint::from(q);
    let one = BigUint::from(1u32);
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for i in 0..d {
        num *= q.pow((n - i) as u32) - &one;
        den *= q.pow((i + 1) as u32) - &one;
    }
    num / den
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for c in start..n {
            if n - c < k - cur.len() {
                break;
            }
            cur.push(c);
            rec(c + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Advances a base-q odometer with the last digit least significant;
/// returns false when the odometer wraps back to all zeros.
fn advance_digits(digits: &mut [u32], q: u32) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < q {
            return true;
        }
        *d = 0;
    }
    false
}

/// All d-dimensional linear subspaces of the space, one canonical RREF
/// basis each, ordered by pivot-column set (lexicographic) and then by the
/// free entries read in row-major order as base-q digits.
pub fn linear_subspaces(
    space: &SpaceDesc,
    d: usize,
) -> Result<Vec<LinearSubspace>, GeometryError> {
    let n = space.n();
    if d > n {
        return Ok(Vec::new());
    }
    let q = space.q();
    let count = gaussian_binomial(n as u64, d as u64, q as u64);
    let cap = BigUint::from(space.budget());
    if count > cap {
        return Err(GeometryError::BudgetExceeded {
            needed: count.try_into().unwrap_or(u128::MAX),
            cap: space.budget(),
        });
    }
    let mut out = Vec::new();
    for pivots in combinations(n, d) {
        let mut is_pivot = vec![false; n];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        // Free positions: to the right of the row's pivot, not a pivot column.
        let mut free_positions = Vec::new();
        for (row, &pc) in pivots.iter().enumerate() {
            for col in (pc + 1)..n {
                if !is_pivot[col] {
                    free_positions.push((row, col));
                }
            }
        }
        let mut digits = vec![0u32; free_positions.len()];
        loop {
            let mut basis = MatFq::zero(d, n);
            for (row, &pc) in pivots.iter().enumerate() {
                basis[(row, pc)] = 1;
            }
            for (&(row, col), &val) in free_positions.iter().zip(&digits) {
                basis[(row, col)] = val;
            }
            out.push(LinearSubspace::from_rref(space, basis));
            if digits.is_empty() || !advance_digits(&mut digits, q) {
                break;
            }
        }
    }
    Ok(out)
}

/// Exact number of affine subspaces with dimensions in `dims`.
pub fn affine_subspace_count(space: &SpaceDesc, dims: &[usize]) -> BigUint {
    let n = space.n() as u64;
    let q = space.q() as u64;
    let mut total = BigUint::from(0u32);
    for &d in dims {
        if d as u64 > n {
            continue;
        }
        total += gaussian_binomial(n, d as u64, q) * BigUint::from(q).pow((n - d as u64) as u32);
    }
    total
}

/// All affine subspaces with dimension in `dims`, one canonical
/// representative per coset. Order: dimensions ascending; within a
/// dimension, direction bases in [`linear_subspaces`] order; within a
/// direction, base points in ascending point-index order of their non-pivot
/// coordinates.
pub fn affine_subspaces(
    space: &SpaceDesc,
    dims: &[usize],
) -> Result<Vec<AffineSubspace>, GeometryError> {
    let mut dims: Vec<usize> = dims.iter().copied().filter(|&d| d <= space.n()).collect();
    dims.sort_unstable();
    dims.dedup();
    let count = affine_subspace_count(space, &dims);
    if count > BigUint::from(space.budget()) {
        return Err(GeometryError::BudgetExceeded {
            needed: count.try_into().unwrap_or(u128::MAX),
            cap: space.budget(),
        });
    }
    let n = space.n();
    let q = space.q();
    let mut out = Vec::new();
    for &d in &dims {
        for dir in linear_subspaces(space, d)? {
            let pivots: Vec<usize> = (0..d)
                .map(|row| {
                    dir.basis()
                        .row(row)
                        .iter()
                        .position(|&x| x != 0)
                        .expect("nonzero basis row")
                })
                .collect();
            let mut is_pivot = vec![false; n];
            for &c in &pivots {
                is_pivot[c] = true;
            }
            let free_cols: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
            // Ascending point-index order: the lowest-index free coordinate
            // is the least significant digit.
            let mut digits = vec![0u32; free_cols.len()];
            loop {
                let mut base = vec![0u32; n];
                for (&col, &val) in free_cols.iter().zip(&digits) {
                    base[col] = val;
                }
                out.push(AffineSubspace {
                    direction: dir.clone(),
                    base,
                });
                let mut advanced = false;
                for dgt in digits.iter_mut() {
                    *dgt += 1;
                    if *dgt < q {
                        advanced = true;
                        break;
                    }
                    *dgt = 0;
                }
                if !advanced {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// The (q^n - 1)/(q - 1) linear hyperplanes of F_q^n: each is the kernel of
/// a normal vector normalized so that its first nonzero coordinate is 1,
/// ordered by ascending point index of the normal.
pub fn linear_hyperplanes(space: &SpaceDesc) -> Vec<LinearSubspace> {
    let n = space.n();
    let field = space.field();
    let mut out = Vec::new();
    for idx in 1..space.point_count() {
        let normal = space.point_unindex(idx);
        let lead = normal.iter().position(|&x| x != 0).expect("nonzero");
        if normal[lead] != 1 {
            continue;
        }
        // Kernel basis of <normal, .>: for each j != lead the vector
        // e_j - normal[j] * e_lead.
        let mut rows = MatFq::zero(0, n);
        for j in 0..n {
            if j == lead {
                continue;
            }
            let mut v = vec![0u32; n];
            v[j] = 1;
            v[lead] = field.neg(normal[j]);
            rows.push_row(&v);
        }
        out.push(
            LinearSubspace::from_spanning(space, &rows).expect("hyperplane rows fit the space"),
        );
    }
    out
}

/// All projective subspaces of PG(n, q) with projective dimension in
/// `proj_dims`, as carriers in the homogeneous space (which must have
/// ambient dimension n + 1).
pub fn projective_subspaces(
    homogeneous: &SpaceDesc,
    proj_dims: &[usize],
) -> Result<Vec<ProjectiveSubspace>, GeometryError> {
    let mut dims: Vec<usize> = proj_dims
        .iter()
        .copied()
        .filter(|&d| d < homogeneous.n())
        .collect();
    dims.sort_unstable();
    dims.dedup();
    let mut out = Vec::new();
    for &d in &dims {
        for carrier in linear_subspaces(homogeneous, d + 1)? {
            out.push(ProjectiveSubspace { carrier });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn space(q: u64, n: usize) -> SpaceDesc {
        SpaceDesc::new(Fq::new(q).unwrap(), n).unwrap()
    }

    fn coset(space: &SpaceDesc, rows: &[Vec<u32>], point: &[u32]) -> AffineSubspace {
        let m = MatFq::from_rows(rows, space.n());
        AffineSubspace::canonicalize(space, &m, point).unwrap()
    }

    #[test]
    fn point_index_round_trip_and_examples() {
        let s = space(3, 2);
        assert_eq!(s.point_index(&[0, 0]), 0);
        assert_eq!(s.point_index(&[2, 1]), 5);
        let mut seen = BTreeSet::new();
        for p in s.points() {
            let i = s.point_index(&p);
            assert_eq!(s.point_unindex(i), p);
            seen.insert(i);
        }
        assert_eq!(seen.len(), 9);
        assert_eq!(*seen.iter().next_back().unwrap(), 8);
    }

    #[test]
    fn canonical_form_examples() {
        let s = space(3, 2);
        // Empty direction: the single point.
        let p = coset(&s, &[], &[1, 2]);
        assert_eq!(p.dim(), 0);
        assert_eq!(p.base(), &[1, 2]);

        // Full space: base reduces to zero.
        let full = coset(&s, &[vec![1, 0], vec![0, 1]], &[2, 1]);
        assert_eq!(full.dim(), 2);
        assert_eq!(full.base(), &[0, 0]);
    }

    #[test]
    fn representatives_canonicalize_identically() {
        // Every representative of every coset gives the same canonical
        // form, the cosets of one direction partition the space, and equal
        // canonical forms come from exactly q^d representatives each.
        for (q, n) in [(3u64, 2usize), (2, 3)] {
            let s = space(q, n);
            for d in 0..=n {
                for dir in linear_subspaces(&s, d).unwrap() {
                    let mut by_canon: std::collections::HashMap<AffineSubspace, BTreeSet<u64>> =
                        std::collections::HashMap::new();
                    for p in s.points() {
                        let c = AffineSubspace::new(dir.clone(), &p);
                        let pts: BTreeSet<u64> = c.point_indices().into_iter().collect();
                        assert!(pts.contains(&s.point_index(&p)), "coset contains its seed");
                        if let Some(prev) = by_canon.get(&c) {
                            assert_eq!(prev, &pts);
                        } else {
                            by_canon.insert(c, pts);
                        }
                    }
                    let mut union = BTreeSet::new();
                    for (c, pts) in &by_canon {
                        assert_eq!(pts.len() as u64, c.size());
                        union.extend(pts.iter().copied());
                    }
                    assert_eq!(union.len() as u64, s.point_count());
                    assert_eq!(
                        by_canon.len() as u64,
                        s.point_count() / q.pow(d as u32)
                    );
                }
            }
        }
    }

    /// Brute-force point-set intersection of two cosets.
    fn brute_intersection(a: &AffineSubspace, b: &AffineSubspace) -> BTreeSet<u64> {
        let pa: BTreeSet<u64> = a.point_indices().into_iter().collect();
        let pb: BTreeSet<u64> = b.point_indices().into_iter().collect();
        pa.intersection(&pb).copied().collect()
    }

    #[test]
    fn intersect_parallel_hyperplanes_is_empty() {
        let s = space(3, 2);
        // x1 = 1 and x1 = 2: cosets of the direction {x1 = 0} = span(e2).
        let a = coset(&s, &[vec![0, 1]], &[1, 0]);
        let b = coset(&s, &[vec![0, 1]], &[2, 0]);
        assert_eq!(affine_intersect(&a, &b).unwrap(), IntersectionResult::Empty);
        assert!(brute_intersection(&a, &b).is_empty());
    }

    #[test]
    fn intersect_axes_in_single_point() {
        let s = space(3, 2);
        let x_axis = coset(&s, &[vec![1, 0]], &[0, 0]); // {x2 = 0}
        let y_axis = coset(&s, &[vec![0, 1]], &[0, 0]); // {x1 = 0}
        let r = affine_intersect(&x_axis, &y_axis).unwrap();
        assert_eq!(r.exponent(), Some(0));
        assert_eq!(r.coset().unwrap().base(), &[0, 0]);
    }

    #[test]
    fn intersection_matches_brute_force_exhaustively_small() {
        // All pairs of cosets of F_3^2 and F_2^3: the result equals the
        // point-set intersection and nonempty sizes are powers of q.
        for (q, n) in [(3u64, 2usize), (2, 3)] {
            let s = space(q, n);
            let all: Vec<AffineSubspace> =
                affine_subspaces(&s, &(0..=n).collect::<Vec<_>>()).unwrap();
            for a in &all {
                for b in &all {
                    let fast = affine_intersect(a, b).unwrap();
                    let slow = brute_intersection(a, b);
                    match &fast {
                        IntersectionResult::Empty => assert!(slow.is_empty()),
                        IntersectionResult::Coset(c) => {
                            let pts: BTreeSet<u64> = c.point_indices().into_iter().collect();
                            assert_eq!(pts, slow);
                            let mut sz = slow.len() as u64;
                            while sz > 1 {
                                assert_eq!(sz % q, 0, "size must be a power of q");
                                sz /= q;
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn minkowski_member_basics() {
        let s = space(3, 2);
        let f = coset(&s, &[vec![1, 0]], &[0, 1]);
        // alpha = 0, F = G: 0 ∈ F - F.
        assert!(minkowski_member(&[0, 0], &f, &f).unwrap());

        // H = {x1 = 0} (a linear hyperplane), beta ∉ H: beta ∉ H - H = H.
        let h = coset(&s, &[vec![0, 1]], &[0, 0]);
        assert!(!minkowski_member(&[1, 0], &h, &h).unwrap());
        // Matches A ∩ (beta + H) = ∅ for A = H.
        let shifted = h.translate(&[1, 0]).unwrap();
        assert!(affine_intersect(&h, &shifted).unwrap().is_empty());
    }

    #[test]
    fn minkowski_equivalence_exhaustive_tiny() {
        let s = space(2, 2);
        let all: Vec<AffineSubspace> = affine_subspaces(&s, &[0, 1, 2]).unwrap();
        for f in &all {
            for g in &all {
                for alpha in s.points() {
                    let translated = g.translate(&alpha).unwrap();
                    let via_intersect = !affine_intersect(f, &translated).unwrap().is_empty();
                    let via_member = minkowski_member(&alpha, f, g).unwrap();
                    assert_eq!(via_member, via_intersect);
                }
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        let s32 = space(3, 2);
        assert_eq!(affine_subspaces(&s32, &[0]).unwrap().len(), 9);
        assert_eq!(affine_subspaces(&s32, &[1]).unwrap().len(), 12);
        assert_eq!(affine_subspaces(&s32, &[2]).unwrap().len(), 1);

        let s22 = space(2, 2);
        assert_eq!(affine_subspaces(&s22, &[0, 1, 2]).unwrap().len(), 11);
    }

    #[test]
    fn enumeration_of_f2_squared_matches_affine_closure_oracle() {
        // Over F_2 a nonempty set is affinely closed iff it is closed under
        // x + y + z; enumerate all nonempty subsets of F_2^2 and compare.
        let s = space(2, 2);
        let pts: Vec<Vec<u32>> = s.points().collect();
        let mut closed = 0usize;
        for mask in 1u32..16 {
            let members: Vec<&Vec<u32>> = (0..4)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| &pts[i])
                .collect();
            let mut ok = true;
            'outer: for a in &members {
                for b in &members {
                    for c in &members {
                        let sum: Vec<u32> = (0..2)
                            .map(|k| s.field().add(s.field().add(a[k], b[k]), c[k]))
                            .collect();
                        if !members.iter().any(|m| ***m == *sum) {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
            }
            if ok {
                closed += 1;
            }
        }
        assert_eq!(affine_subspaces(&s, &[0, 1, 2]).unwrap().len(), closed);
    }

    #[test]
    fn enumeration_counts_match_gaussian_binomials() {
        for (q, n) in [
            (2u64, 2usize),
            (2, 3),
            (2, 4),
            (2, 6),
            (3, 2),
            (3, 3),
            (3, 4),
            (4, 2),
            (5, 2),
            (7, 2),
            (9, 2),
            (16, 2),
            (25, 1),
        ] {
            let s = space(q, n);
            for d in 0..=n {
                let subs = linear_subspaces(&s, d).unwrap();
                assert_eq!(
                    BigUint::from(subs.len() as u64),
                    gaussian_binomial(n as u64, d as u64, q),
                    "linear count (q={q}, n={n}, d={d})"
                );
                let distinct: BTreeSet<_> =
                    subs.iter().map(|l| l.basis().data().to_vec()).collect();
                assert_eq!(distinct.len(), subs.len(), "no duplicate bases");
                let cosets = affine_subspaces(&s, &[d]).unwrap();
                let expected = gaussian_binomial(n as u64, d as u64, q)
                    * BigUint::from(q).pow((n - d) as u32);
                assert_eq!(BigUint::from(cosets.len() as u64), expected);
                let distinct: std::collections::HashSet<_> = cosets.iter().cloned().collect();
                assert_eq!(distinct.len(), cosets.len(), "no duplicate cosets");
            }
        }
    }

    #[test]
    fn hyperplane_enumeration() {
        assert_eq!(linear_hyperplanes(&space(3, 2)).len(), 4);
        assert_eq!(linear_hyperplanes(&space(2, 3)).len(), 7);
        let line = linear_hyperplanes(&space(5, 1));
        assert_eq!(line.len(), 1);
        assert_eq!(line[0].dim(), 0);
        for h in linear_hyperplanes(&space(4, 3)) {
            assert_eq!(h.dim(), 2);
        }
        let hs = linear_hyperplanes(&space(3, 3));
        assert_eq!(hs.len(), 13);
        let distinct: std::collections::HashSet<_> = hs.iter().cloned().collect();
        assert_eq!(distinct.len(), 13);
    }

    #[test]
    fn projective_disjointness() {
        // PG(1, 2): three points on a line.
        let s = space(2, 2);
        let pts: Vec<ProjectiveSubspace> = projective_subspaces(&s, &[0]).unwrap();
        assert_eq!(pts.len(), 3);
        for (i, p) in pts.iter().enumerate() {
            for (j, q) in pts.iter().enumerate() {
                assert_eq!(p.disjoint_from(q).unwrap(), i != j);
            }
        }

        // Containment is never disjoint.
        let line = ProjectiveSubspace::new(LinearSubspace::full(&s)).unwrap();
        for p in &pts {
            assert!(!p.disjoint_from(&line).unwrap());
        }
    }

    #[test]
    fn projective_disjointness_matches_carrier_enumeration() {
        // PG(2, 3): compare the rank test against brute-force enumeration
        // of nonzero carrier vectors.
        let s = space(3, 3);
        let subs = projective_subspaces(&s, &[0, 1]).unwrap();
        let nonzero_vectors = |l: &LinearSubspace| -> BTreeSet<Vec<u32>> {
            AffineSubspace::through_origin(l)
                .points()
                .into_iter()
                .filter(|v| v.iter().any(|&x| x != 0))
                .collect()
        };
        for (k, p) in subs.iter().enumerate() {
            for q in subs.iter().skip(k).take(40) {
                let brute = nonzero_vectors(p.carrier())
                    .intersection(&nonzero_vectors(q.carrier()))
                    .count()
                    == 0;
                assert_eq!(p.disjoint_from(q).unwrap(), brute);
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let err = SpaceDesc::with_budget(Fq::new(3).unwrap(), 4, 50).unwrap_err();
        assert!(matches!(
            err,
            GeometryError::BudgetExceeded { needed: 81, cap: 50 }
        ));

        let s = SpaceDesc::with_budget(Fq::new(3).unwrap(), 2, 10).unwrap();
        assert!(matches!(
            affine_subspaces(&s, &[0, 1]),
            Err(GeometryError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn mismatched_spaces_are_rejected() {
        let s1 = space(3, 2);
        let s2 = space(3, 3);
        let a = coset(&s1, &[vec![1, 0]], &[0, 0]);
        let b = coset(&s2, &[vec![1, 0, 0]], &[0, 0, 0]);
        assert_eq!(
            affine_intersect(&a, &b).unwrap_err(),
            GeometryError::DimensionMismatch
        );
        assert_eq!(
            minkowski_member(&[0, 0], &a, &b).unwrap_err(),
            GeometryError::DimensionMismatch
        );
    }
}
