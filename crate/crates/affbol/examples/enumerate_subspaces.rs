//! Canonical enumeration of subspaces and the Gaussian binomial counts.
//!
//! Usage: cargo run --example enumerate_subspaces [n] [q]
//!
//! Every linear subspace appears once as an RREF basis; every coset
//! appears once as a direction plus a base point that vanishes on the
//! direction's pivot columns. Counts follow the Gaussian binomial
//! [n choose d]_q (directions) times q^(n-d) (cosets per direction), and
//! the (q^n - 1)/(q - 1) hyperplanes come from normalized normal vectors.

use affbol::geometry::{
    affine_subspaces, gaussian_binomial, linear_hyperplanes, linear_subspaces, SpaceDesc,
};
use affbol::fq::Fq;
use num::BigUint;

fn main() {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|s| s.parse().expect("n")).unwrap_or(2);
    let q: u64 = args.next().map(|s| s.parse().expect("q")).unwrap_or(3);

    let space = SpaceDesc::new(Fq::new(q).expect("prime power"), n).expect("within budget");

    println!("subspaces of F_{q}^{n}:");
    let mut total = BigUint::from(0u32);
    for d in 0..=n {
        let linear = linear_subspaces(&space, d).expect("within budget");
        let cosets = affine_subspaces(&space, &[d]).expect("within budget");
        let gauss = gaussian_binomial(n as u64, d as u64, q);
        println!(
            "  dim {d}: [n choose d]_q = {gauss} directions, {} cosets (= {gauss} * q^{})",
            cosets.len(),
            n - d
        );
        assert_eq!(BigUint::from(linear.len() as u64), gauss);
        total += BigUint::from(cosets.len() as u64);
    }
    println!("  total cosets: {total}");

    let hyperplanes = linear_hyperplanes(&space);
    println!(
        "\nlinear hyperplanes: {} = (q^n - 1)/(q - 1)",
        hyperplanes.len()
    );
    for (i, h) in hyperplanes.iter().enumerate().take(8) {
        println!("  {:>2}: span{:?}", i + 1, h.basis().row_vecs());
    }
    if hyperplanes.len() > 8 {
        println!("  ... and {} more", hyperplanes.len() - 8);
    }

    // Dimension-1 cosets in full, for small spaces.
    if space.point_count() <= 16 {
        println!("\nall lines (dim-1 cosets):");
        for c in affine_subspaces(&space, &[1]).expect("within budget") {
            println!("  base {:?} + span{:?}", c.base(), c.direction().basis().row_vecs());
        }
    }
}
