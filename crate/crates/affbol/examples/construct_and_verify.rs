//! Build the hyperplane-shift family and verify it is cross-intersecting.
//!
//! Usage: cargo run --example construct_and_verify [n] [q]
//!
//! For every linear hyperplane H_i of F_q^n the family takes A_i = H_i and
//! B_i = H_i + beta_i with beta_i outside H_i, giving m = (q^n - 1)/(q - 1)
//! pairs: each pair is disjoint, and A_i meets B_j whenever i != j. The
//! skew verifier checks the diagonal and the i < j direction; this family
//! happens to satisfy the stronger both-directions property as well.

use affbol::construction::build_construction;
use affbol::families::Mode;
use affbol::fileio::FamilyFile;
use affbol::fq::Fq;
use affbol::geometry::SpaceDesc;

fn main() {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|s| s.parse().expect("n")).unwrap_or(2);
    let q: u64 = args.next().map(|s| s.parse().expect("q")).unwrap_or(3);

    let space = SpaceDesc::new(Fq::new(q).expect("prime power"), n).expect("within budget");
    let built = build_construction(&space).expect("construction");

    println!(
        "hyperplane-shift family in F_{q}^{n}: m = {}, expected (q^n - 1)/(q - 1) = {}",
        built.len(),
        (space.point_count() - 1) / (q - 1)
    );

    for (i, ((h, beta), (a, b))) in built
        .hyperplanes
        .iter()
        .zip(&built.shifts)
        .zip(built.family.pairs())
        .enumerate()
    {
        println!(
            "  {:>3}: H = span{:?}  beta = {:?}  |A| = {}  |B| = {}",
            i + 1,
            h.basis().row_vecs(),
            beta,
            a.size(),
            b.size()
        );
        assert!(!h.contains(beta));
    }

    match built.family.verify() {
        Ok(()) => println!("skew verification: ok"),
        Err(violations) => {
            println!("skew verification FAILED: {} violations", violations.len());
            std::process::exit(1);
        }
    }

    // The same pairs also pass the all-ordered-pairs (symmetric) check.
    let symmetric = affbol::families::PairFamily::new(
        built.family.pairs().to_vec(),
        Mode::Symmetric,
    )
    .unwrap();
    println!(
        "symmetric verification: {}",
        if symmetric.verify().is_ok() { "ok" } else { "failed" }
    );

    let file = FamilyFile::Affine {
        space,
        family: built.family,
    };
    println!("\nfamily file:\n{}", file.to_canonical_string());
}
