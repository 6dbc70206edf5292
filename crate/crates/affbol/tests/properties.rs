//! Property tests for the algebra/geometry invariants that the unit
//! suites only sample at fixed prime powers.

use affbol::fileio::FamilyFile;
use affbol::families::{Mode, PairFamily, PointSet};
use affbol::fq::Fq;
use affbol::geometry::{
    affine_intersect, AffineSubspace, LinearSubspace, SpaceDesc,
};
use affbol::linalg::{self, MatFq};
use proptest::prelude::*;

const PRIME_POWERS: &[u64] = &[
    2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 49, 64, 81, 121, 125, 128, 169, 243, 256, 289,
    343, 361, 512,
];

fn arb_field() -> impl Strategy<Value = Fq> {
    proptest::sample::select(PRIME_POWERS.to_vec()).prop_map(|q| Fq::new(q).unwrap())
}

prop_compose! {
    fn field_and_triple()(field in arb_field())(
        a in 0u32..field.q(),
        b in 0u32..field.q(),
        c in 0u32..field.q(),
        field in Just(field),
    ) -> (Fq, u32, u32, u32) {
        (field, a, b, c)
    }
}

proptest! {
    /// Sampled field axioms for every supported order, including the
    /// large prime powers the exhaustive unit tests skip.
    #[test]
    fn field_axioms_sampled((field, a, b, c) in field_and_triple()) {
        prop_assert_eq!(field.add(a, b), field.add(b, a));
        prop_assert_eq!(field.mul(a, b), field.mul(b, a));
        prop_assert_eq!(field.add(field.add(a, b), c), field.add(a, field.add(b, c)));
        prop_assert_eq!(field.mul(field.mul(a, b), c), field.mul(a, field.mul(b, c)));
        prop_assert_eq!(
            field.mul(a, field.add(b, c)),
            field.add(field.mul(a, b), field.mul(a, c))
        );
        prop_assert_eq!(field.add(a, field.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(field.mul(a, field.inv(a).unwrap()), 1);
        }
    }
}

/// A small space plus a random matrix over it.
fn space_and_matrix() -> impl Strategy<Value = (SpaceDesc, MatFq)> {
    (proptest::sample::select(vec![2u64, 3, 4, 5]), 1usize..=4, 1usize..=4).prop_flat_map(
        |(q, n, rows)| {
            let space = SpaceDesc::new(Fq::new(q).unwrap(), n).unwrap();
            proptest::collection::vec(
                proptest::collection::vec(0u32..q as u32, n),
                rows,
            )
            .prop_map(move |data| {
                let m = MatFq::from_rows(&data, space.n());
                (space.clone(), m)
            })
        },
    )
}

proptest! {
    /// RREF is idempotent and canonical, rank equals the pivot count, and
    /// the row spaces agree in both directions.
    #[test]
    fn rref_idempotent_and_row_space_preserved((space, m) in space_and_matrix()) {
        let field = space.field();
        let r = linalg::rref(field, &m);
        prop_assert!(r.mat.is_rref());
        prop_assert_eq!(r.pivots.len(), r.rank);
        let again = linalg::rref(field, &r.mat);
        prop_assert_eq!(&again.mat, &r.mat);

        let basis = linalg::row_basis(field, &m);
        for i in 0..m.rows() {
            prop_assert!(linalg::in_row_space(field, &basis, m.row(i)));
        }
        for i in 0..basis.rows() {
            // Each basis row is a combination of original rows: check by
            // solving x * M = row, i.e. M^T x = row^T.
            let mut mt = MatFq::zero(m.cols(), m.rows());
            for rr in 0..m.rows() {
                for cc in 0..m.cols() {
                    mt[(cc, rr)] = m[(rr, cc)];
                }
            }
            let sol = linalg::solve(field, &mt, basis.row(i));
            prop_assert!(sol.particular.is_some());
        }
    }
}

fn space_and_coset() -> impl Strategy<Value = (SpaceDesc, AffineSubspace, Vec<u32>)> {
    space_and_matrix().prop_flat_map(|(space, m)| {
        let q = space.q();
        let n = space.n();
        let dim_bound = linalg::row_basis(space.field(), &m).rows().max(1);
        (
            Just(space.clone()),
            Just(m),
            proptest::collection::vec(0u32..q, n),
            proptest::collection::vec(0u32..q, dim_bound),
        )
            .prop_map(|(space, m, point, coeffs)| {
                let coset = AffineSubspace::canonicalize(&space, &m, &point).unwrap();
                (space, coset, coeffs)
            })
    })
}

proptest! {
    /// Every representative of a coset canonicalizes to the same value.
    #[test]
    fn coset_representatives_are_canonical((space, coset, coeffs) in space_and_coset()) {
        let field = space.field();
        // Pick another representative: base + combination of basis rows.
        let mut rep = coset.base().to_vec();
        for (i, &c) in coeffs.iter().take(coset.dim()).enumerate() {
            for (j, slot) in rep.iter_mut().enumerate() {
                let t = field.mul(c, coset.direction().basis()[(i, j)]);
                *slot = field.add(*slot, t);
            }
        }
        let again = AffineSubspace::new(coset.direction().clone(), &rep);
        prop_assert_eq!(&again, &coset);
        prop_assert!(coset.contains(&rep));
    }

    /// Point indexing is a bijection onto 0..q^n.
    #[test]
    fn point_index_round_trip(
        q in proptest::sample::select(vec![2u64, 3, 4, 5, 7, 9]),
        n in 1usize..=4,
        raw in proptest::collection::vec(0u32..16, 4),
    ) {
        let space = SpaceDesc::new(Fq::new(q).unwrap(), n).unwrap();
        let v: Vec<u32> = raw.iter().take(n).map(|&x| x % q as u32).collect();
        let idx = space.point_index(&v);
        prop_assert!(idx < space.point_count());
        prop_assert_eq!(space.point_unindex(idx), v);
    }
}

fn two_cosets() -> impl Strategy<Value = (AffineSubspace, AffineSubspace)> {
    (proptest::sample::select(vec![2u64, 3, 4]), 1usize..=3).prop_flat_map(|(q, n)| {
        let space = SpaceDesc::new(Fq::new(q).unwrap(), n).unwrap();
        let coset = move |space: SpaceDesc| {
            (
                proptest::collection::vec(proptest::collection::vec(0u32..q as u32, n), 0..=n),
                proptest::collection::vec(0u32..q as u32, n),
            )
                .prop_map(move |(rows, point)| {
                    AffineSubspace::canonicalize(
                        &space,
                        &MatFq::from_rows(&rows, space.n()),
                        &point,
                    )
                    .unwrap()
                })
        };
        (coset(space.clone()), coset(space))
    })
}

proptest! {
    /// Intersection agrees with brute-force point sets and the dimension
    /// identity links sums and intersections of the directions.
    #[test]
    fn intersection_matches_point_sets((a, b) in two_cosets()) {
        let fast = affine_intersect(&a, &b).unwrap();
        let pa: std::collections::BTreeSet<u64> = a.point_indices().into_iter().collect();
        let pb: std::collections::BTreeSet<u64> = b.point_indices().into_iter().collect();
        let slow: std::collections::BTreeSet<u64> = pa.intersection(&pb).copied().collect();
        match fast.coset() {
            None => prop_assert!(slow.is_empty()),
            Some(c) => {
                let pts: std::collections::BTreeSet<u64> =
                    c.point_indices().into_iter().collect();
                prop_assert_eq!(&pts, &slow);
            }
        }

        let u: &LinearSubspace = a.direction();
        let v = b.direction();
        let sum = u.sum(v).unwrap();
        let inter = u.intersection(v).unwrap();
        prop_assert_eq!(sum.dim() + inter.dim(), u.dim() + v.dim());
    }
}

fn arb_sets_family() -> impl Strategy<Value = (u64, PairFamily<PointSet>)> {
    (2u64..=8, 1usize..=5).prop_flat_map(|(ground, m)| {
        proptest::collection::vec(
            (
                proptest::collection::vec(0u64..ground, 0..=ground as usize),
                proptest::collection::vec(0u64..ground, 0..=ground as usize),
            ),
            m,
        )
        .prop_map(move |pairs| {
            let pairs = pairs
                .into_iter()
                .map(|(a, b)| {
                    (
                        PointSet::new(ground, a).unwrap(),
                        PointSet::new(ground, b).unwrap(),
                    )
                })
                .collect();
            (ground, PairFamily::new(pairs, Mode::Skew).unwrap())
        })
    })
}

proptest! {
    /// Family files survive a serialize/parse round trip byte-for-byte.
    #[test]
    fn family_file_round_trip((ground_size, family) in arb_sets_family()) {
        let file = FamilyFile::Sets { ground_size, family };
        let text = file.to_canonical_string();
        let parsed = FamilyFile::parse(&text).unwrap();
        prop_assert_eq!(&parsed, &file);
        prop_assert_eq!(parsed.to_canonical_string(), text);
    }
}
