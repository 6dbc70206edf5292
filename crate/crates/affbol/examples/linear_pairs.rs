//! Skew cross-intersecting pairs of linear subspaces and the uniform
//! bound C(r + s, r).
//!
//! Usage: cargo run --example linear_pairs [r] [s]
//!
//! In the linear geometry "disjoint" means meeting only in the zero
//! vector, and "intersecting" means containing a common nonzero vector.
//! The coordinate-subspace family U_S = span{e_k : k ∈ S},
//! V_S = span{e_k : k ∉ S} over all r-subsets S of r + s coordinates is
//! skew-valid in any order and reaches the bound C(r + s, r) exactly.

use affbol::families::{uniform_bound, Mode, PairFamily};
use affbol::fq::Fq;
use affbol::geometry::{LinearSubspace, SpaceDesc};
use affbol::linalg::MatFq;

fn main() {
    let mut args = std::env::args().skip(1);
    let r: usize = args.next().map(|s| s.parse().expect("r")).unwrap_or(2);
    let s: usize = args.next().map(|s| s.parse().expect("s")).unwrap_or(2);
    let n = r + s;

    let space = SpaceDesc::new(Fq::new(2).unwrap(), n).expect("within budget");
    let unit = |k: usize| -> Vec<u32> {
        let mut v = vec![0u32; n];
        v[k] = 1;
        v
    };
    let span = |cols: &[usize]| -> LinearSubspace {
        let rows: Vec<Vec<u32>> = cols.iter().map(|&k| unit(k)).collect();
        LinearSubspace::from_spanning(&space, &MatFq::from_rows(&rows, n)).unwrap()
    };

    // All r-subsets of {0, .., n-1}.
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for c in start..n {
            cur.push(c);
            rec(c + 1, n, r, cur, out);
            cur.pop();
        }
    }
    rec(0, n, r, &mut cur, &mut subsets);

    let pairs: Vec<(LinearSubspace, LinearSubspace)> = subsets
        .iter()
        .map(|s_cols| {
            let rest: Vec<usize> = (0..n).filter(|k| !s_cols.contains(k)).collect();
            (span(s_cols), span(&rest))
        })
        .collect();
    let family = PairFamily::new(pairs, Mode::Skew).unwrap();

    println!("coordinate-subspace family over F_2^{n}: r = {r}, s = {s}");
    println!("m = {}", family.len());
    println!("uniform dimensions: {:?}", family.uniform_dims());
    println!("uniform bound C(r+s, r) = {}", uniform_bound(r as u64, s as u64));

    match family.verify() {
        Ok(()) => println!("skew verification: ok (bound met with equality)"),
        Err(violations) => {
            println!("violations:");
            for v in violations {
                println!("  {:?} at ({}, {}), witness {:?}", v.kind, v.i, v.j, v.witness);
            }
            std::process::exit(1);
        }
    }

    // A family with a repeated nonzero A = B pair fails the diagonal test
    // and the verifier pinpoints it with a nonzero witness vector.
    let u = span(&[0]);
    let bad = PairFamily::new(vec![(u.clone(), u)], Mode::Skew).unwrap();
    let violations = bad.verify().unwrap_err();
    println!(
        "\nbroken family: {:?} at ({}, {}), witness {:?}",
        violations[0].kind, violations[0].i, violations[0].j, violations[0].witness
    );
}
