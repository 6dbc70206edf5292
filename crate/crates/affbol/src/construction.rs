//! The hyperplane-shift construction: a skew cross-intersecting family of
//! affine subspaces of size (q^n - 1)/(q - 1).
//!
//! Over all linear hyperplanes H_1, .., H_m of F_q^n (in the fixed
//! enumeration order of [`geometry::linear_hyperplanes`]) take
//! A_i = H_i and B_i = H_i + beta_i for a shift beta_i ∉ H_i. Each pair is
//! disjoint because beta_i avoids H_i, and A_i meets B_j for i ≠ j because
//! H_i - H_j is the whole space whenever the hyperplanes differ — so the
//! family is in fact cross-intersecting in both off-diagonal directions,
//! which is stronger than the skew condition requires.
//!
//! Both choices the construction leaves open are pinned for
//! reproducibility: hyperplanes come in normalized-normal order, and each
//! beta_i is the first point (in point-index order) outside H_i.

use crate::families::{Mode, PairFamily};
use crate::geometry::{
    linear_hyperplanes, AffineSubspace, GeometryError, LinearSubspace, SpaceDesc,
};

/// The generated family plus the hyperplanes and shifts it was built from.
#[derive(Debug, Clone)]
pub struct ConstructionOutput {
    pub family: PairFamily<AffineSubspace>,
    pub hyperplanes: Vec<LinearSubspace>,
    pub shifts: Vec<Vec<u32>>,
}

impl ConstructionOutput {
    /// Family size m = (q^n - 1)/(q - 1).
    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_empty()
    }
}

/// The first point (in point-index order) outside the hyperplane. A
/// hyperplane never covers the space, so this always exists.
pub fn choose_beta(h: &LinearSubspace) -> Vec<u32> {
    let space = h.space();
    for idx in 0..space.point_count() {
        let v = space.point_unindex(idx);
        if !h.contains(&v) {
            return v;
        }
    }
    unreachable!("a proper subspace cannot cover the space")
}

/// Expected family size (q^n - 1)/(q - 1).
pub fn expected_size(space: &SpaceDesc) -> u64 {
    (space.point_count() - 1) / (space.q() as u64 - 1)
}

/// Builds the hyperplane-shift family for F_q^n.
pub fn build_construction(space: &SpaceDesc) -> Result<ConstructionOutput, GeometryError> {
    let hyperplanes = linear_hyperplanes(space);
    let mut shifts = Vec::with_capacity(hyperplanes.len());
    let mut pairs = Vec::with_capacity(hyperplanes.len());
    for h in &hyperplanes {
        let beta = choose_beta(h);
        let a = AffineSubspace::through_origin(h);
        let b = AffineSubspace::new(h.clone(), &beta);
        shifts.push(beta);
        pairs.push((a, b));
    }
    let family = PairFamily::new(pairs, Mode::Skew).expect("one space");
    debug_assert_eq!(family.len() as u64, expected_size(space));
    Ok(ConstructionOutput {
        family,
        hyperplanes,
        shifts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::Fq;
    use crate::geometry::affine_intersect;

    fn space(q: u64, n: usize) -> SpaceDesc {
        SpaceDesc::new(Fq::new(q).unwrap(), n).unwrap()
    }

    #[test]
    fn beta_is_first_non_member() {
        let s = space(3, 2);
        // H = {x1 = 0} = span(e2): the first point with x1 != 0 is (1,0).
        let h = linear_hyperplanes(&s)
            .into_iter()
            .find(|h| h.contains(&[0, 1]))
            .unwrap();
        assert_eq!(choose_beta(&h), vec![1, 0]);

        // H = {x2 = 0} = span(e1): points (0,0), (1,0), (2,0) are members,
        // so the first non-member is (0,1).
        let h = linear_hyperplanes(&s)
            .into_iter()
            .find(|h| h.contains(&[1, 0]))
            .unwrap();
        assert_eq!(choose_beta(&h), vec![0, 1]);
    }

    #[test]
    fn beta_never_lies_in_its_hyperplane() {
        for (q, n) in [(2u64, 3usize), (3, 2), (4, 2), (5, 2)] {
            let s = space(q, n);
            for h in linear_hyperplanes(&s) {
                assert!(!h.contains(&choose_beta(&h)));
            }
        }
    }

    #[test]
    fn line_case_is_a_single_point_pair() {
        // n = 1: the only hyperplane is {0}; A = {0}, B = {1}.
        let s = space(3, 1);
        let out = build_construction(&s).unwrap();
        assert_eq!(out.len(), 1);
        let (a, b) = &out.family.pairs()[0];
        assert_eq!((a.dim(), b.dim()), (0, 0));
        assert_eq!(a.base(), &[0]);
        assert_eq!(b.base(), &[1]);
    }

    #[test]
    fn grid_sizes_and_verification() {
        for (q, n, expected) in [
            (3u64, 2usize, 4u64),
            (2, 3, 7),
            (4, 2, 5),
            (5, 2, 6),
            (3, 3, 13),
        ] {
            let s = space(q, n);
            let out = build_construction(&s).unwrap();
            assert_eq!(out.len() as u64, expected, "size for q={q}, n={n}");
            assert_eq!(out.len() as u64, expected_size(&s));
            assert!(out.family.verify().is_ok(), "skew verification q={q}, n={n}");
        }
    }

    #[test]
    fn off_diagonal_pairs_meet_in_both_directions() {
        // Stronger than skew: A_i ∩ B_j ≠ ∅ for every i ≠ j.
        let s = space(3, 2);
        let out = build_construction(&s).unwrap();
        let pairs = out.family.pairs();
        for (i, (a, _)) in pairs.iter().enumerate() {
            for (j, (_, b)) in pairs.iter().enumerate() {
                let meets = !affine_intersect(a, b).unwrap().is_empty();
                assert_eq!(meets, i != j);
            }
        }
    }

    #[test]
    fn construction_is_deterministic() {
        let s = space(4, 2);
        let out1 = build_construction(&s).unwrap();
        let out2 = build_construction(&s).unwrap();
        assert_eq!(out1.shifts, out2.shifts);
        assert_eq!(out1.family.pairs(), out2.family.pairs());
    }
}
