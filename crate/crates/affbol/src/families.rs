//! Ordered set-pair families and cross-intersection verifiers.
//!
//! A family is an ordered list of pairs (A_i, B_i) in one of four
//! geometries: abstract finite sets, linear subspaces, affine subspaces, or
//! projective subspaces. Two verification modes exist and are never
//! conflated:
//!
//! - **Skew**: A_i ∩ B_i = ∅ for all i, and A_i ∩ B_j ≠ ∅ whenever i < j.
//!   Nothing is required of pairs with i > j.
//! - **Symmetric**: A_i ∩ B_j = ∅ exactly when i = j (all ordered pairs
//!   are checked).
//!
//! "Intersection" means point-set intersection for sets, affine and
//! projective geometry, and *nontrivial* intersection (dimension >= 1) for
//! the linear geometry.
//!
//! Verifiers report every violation, not just the first, sorted by (i, j);
//! indices in violations are 1-based.

use crate::geometry::{affine_intersect, AffineSubspace, LinearSubspace, ProjectiveSubspace};
use num::{BigRational, BigUint};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyError {
    /// Pairs do not all share one context (ground set or space).
    ContextMismatch,
    /// A precondition verification failed (e.g. the Bollobás sum was asked
    /// for a family that is not symmetric-verified).
    NotVerified,
    /// A set element is outside its declared ground set.
    InvalidElement { element: u64, ground_size: u64 },
}

impl fmt::Display for FamilyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyError::ContextMismatch => write!(f, "pairs do not share one context"),
            FamilyError::NotVerified => write!(f, "required verification failed"),
            FamilyError::InvalidElement { element, ground_size } => {
                write!(f, "element {element} outside ground set of size {ground_size}")
            }
        }
    }
}

impl std::error::Error for FamilyError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Skew,
    Symmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// A_i ∩ B_i ≠ ∅ (carries a witness point/element/vector).
    DiagonalNonempty,
    /// A_i ∩ B_j = ∅ for a pair that the mode requires to meet.
    OffDiagonalEmpty,
}

/// A re-checkable verification failure at the (1-based) index pair (i, j).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation<W> {
    pub kind: ViolationKind,
    pub i: usize,
    pub j: usize,
    pub witness: Option<W>,
}

/// One geometry's pair element: how two members meet and when two members
/// live in the same context.
pub trait CrossPair: Clone {
    type Witness: Clone + fmt::Debug;

    /// A witness that `a` and `b` meet (in the geometry's sense), or None
    /// when they are disjoint. Both arguments are guaranteed to share one
    /// context by the family constructor.
    fn meet_witness(a: &Self, b: &Self) -> Option<Self::Witness>;

    fn same_context(a: &Self, b: &Self) -> bool;
}

/// Subset of a finite ground set {0, .., ground_size - 1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    ground_size: u64,
    elems: BTreeSet<u64>,
}

impl PointSet {
    pub fn new(
        ground_size: u64,
        elems: impl IntoIterator<Item = u64>,
    ) -> Result<PointSet, FamilyError> {
        let elems: BTreeSet<u64> = elems.into_iter().collect();
        if let Some(&bad) = elems.iter().find(|&&e| e >= ground_size) {
            return Err(FamilyError::InvalidElement {
                element: bad,
                ground_size,
            });
        }
        Ok(PointSet { ground_size, elems })
    }

    pub fn ground_size(&self) -> u64 {
        self.ground_size
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> impl Iterator<Item = u64> + '_ {
        self.elems.iter().copied()
    }
}

impl CrossPair for PointSet {
    type Witness = u64;

    fn meet_witness(a: &Self, b: &Self) -> Option<u64> {
        a.elems.intersection(&b.elems).next().copied()
    }

    fn same_context(a: &Self, b: &Self) -> bool {
        a.ground_size == b.ground_size
    }
}

impl CrossPair for AffineSubspace {
    type Witness = Vec<u32>;

    fn meet_witness(a: &Self, b: &Self) -> Option<Vec<u32>> {
        match affine_intersect(a, b).expect("family pairs share one space") {
            crate::geometry::IntersectionResult::Empty => None,
            crate::geometry::IntersectionResult::Coset(c) => Some(c.base().to_vec()),
        }
    }

    fn same_context(a: &Self, b: &Self) -> bool {
        a.space() == b.space()
    }
}

impl CrossPair for LinearSubspace {
    type Witness = Vec<u32>;

    /// Linear pairs meet when their intersection contains a nonzero vector.
    fn meet_witness(a: &Self, b: &Self) -> Option<Vec<u32>> {
        let inter = a.intersection(b).expect("family pairs share one space");
        if inter.dim() == 0 {
            None
        } else {
            Some(inter.basis().row(0).to_vec())
        }
    }

    fn same_context(a: &Self, b: &Self) -> bool {
        a.space() == b.space()
    }
}

impl CrossPair for ProjectiveSubspace {
    type Witness = Vec<u32>;

    fn meet_witness(a: &Self, b: &Self) -> Option<Vec<u32>> {
        let inter = a
            .carrier()
            .intersection(b.carrier())
            .expect("family pairs share one space");
        if inter.dim() == 0 {
            None
        } else {
            Some(inter.basis().row(0).to_vec())
        }
    }

    fn same_context(a: &Self, b: &Self) -> bool {
        a.space() == b.space()
    }
}

/// Ordered list of pairs (A_i, B_i) in one geometry, with a verification
/// mode. Immutable once built; pairwise tests are pure, so verification may
/// be partitioned arbitrarily without changing the (sorted) result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairFamily<T: CrossPair> {
    pairs: Vec<(T, T)>,
    mode: Mode,
}

impl<T: CrossPair> PairFamily<T> {
    pub fn new(pairs: Vec<(T, T)>, mode: Mode) -> Result<PairFamily<T>, FamilyError> {
        if let Some((first_a, _)) = pairs.first() {
            for (a, b) in &pairs {
                if !T::same_context(first_a, a) || !T::same_context(first_a, b) {
                    return Err(FamilyError::ContextMismatch);
                }
            }
        }
        Ok(PairFamily { pairs, mode })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn pairs(&self) -> &[(T, T)] {
        &self.pairs
    }

    /// Checks every pairwise condition the mode requires and returns all
    /// violations, sorted by (i, j). Diagonal violations carry a witness.
    pub fn verify(&self) -> Result<(), Vec<Violation<T::Witness>>> {
        let m = self.pairs.len();
        let mut violations = Vec::new();
        for i in 0..m {
            for j in 0..m {
                let must_meet = match self.mode {
                    Mode::Skew => {
                        if i == j {
                            false
                        } else if i < j {
                            true
                        } else {
                            continue;
                        }
                    }
                    Mode::Symmetric => i != j,
                };
                let witness = T::meet_witness(&self.pairs[i].0, &self.pairs[j].1);
                match (must_meet, witness) {
                    (false, Some(w)) => violations.push(Violation {
                        kind: ViolationKind::DiagonalNonempty,
                        i: i + 1,
                        j: j + 1,
                        witness: Some(w),
                    }),
                    (true, None) => violations.push(Violation {
                        kind: ViolationKind::OffDiagonalEmpty,
                        i: i + 1,
                        j: j + 1,
                        witness: None,
                    }),
                    _ => {}
                }
            }
        }
        violations.sort_by_key(|v| (v.i, v.j));
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }
}

impl PairFamily<LinearSubspace> {
    /// The uniform dimensions (r, s) when every A_i has one dimension and
    /// every B_i has one dimension.
    pub fn uniform_dims(&self) -> Option<(usize, usize)> {
        let (a0, b0) = self.pairs.first()?;
        let (r, s) = (a0.dim(), b0.dim());
        for (a, b) in &self.pairs {
            if a.dim() != r || b.dim() != s {
                return None;
            }
        }
        Some((r, s))
    }
}

/// Exact binomial coefficient C(n, k).
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// The uniform bound C(r + s, r) on the size of a skew cross-intersecting
/// family of r- and s-dimensional objects.
pub fn uniform_bound(r: u64, s: u64) -> BigUint {
    binomial(r + s, r)
}

/// The Bollobás sum Σ 1/C(|A_i| + |B_i|, |A_i|) as an exact rational.
///
/// Requires a Sets family in Symmetric mode that verifies; the classical
/// inequality asserts the sum is at most 1 exactly under that hypothesis,
/// so anything else is [`FamilyError::NotVerified`].
pub fn bollobas_sum(fam: &PairFamily<PointSet>) -> Result<BigRational, FamilyError> {
    if fam.mode() != Mode::Symmetric || fam.verify().is_err() {
        return Err(FamilyError::NotVerified);
    }
    let mut sum = BigRational::from_integer(0.into());
    for (a, b) in fam.pairs() {
        let denom = binomial((a.len() + b.len()) as u64, a.len() as u64);
        sum += BigRational::new(1.into(), num::BigInt::from(denom));
    }
    Ok(sum)
}
