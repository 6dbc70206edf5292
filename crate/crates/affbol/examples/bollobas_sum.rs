//! The exact Bollobás sum over symmetric cross-intersecting set families.
//!
//! Usage: cargo run --example bollobas_sum
//!
//! For set pairs with A_i ∩ B_j = ∅ exactly when i = j, the sum
//! Σ 1/C(|A_i| + |B_i|, |A_i|) never exceeds 1. The tight case pairs all
//! r-subsets of a (r+s)-ground set with their complements. Antichains
//! give another natural family: pairing each member S with its complement
//! satisfies the symmetric condition (S ⊆ T fails for distinct antichain
//! members), and the sum becomes the LYM sum Σ 1/C(N, |S_i|).

use affbol::families::{bollobas_sum, binomial, Mode, PairFamily, PointSet};
use num::BigRational;

fn complement(ground: u64, s: &[u64]) -> Vec<u64> {
    (0..ground).filter(|e| !s.contains(e)).collect()
}

fn family_of_pairs(ground: u64, sets: &[Vec<u64>], mode: Mode) -> PairFamily<PointSet> {
    let pairs = sets
        .iter()
        .map(|s| {
            (
                PointSet::new(ground, s.iter().copied()).unwrap(),
                PointSet::new(ground, complement(ground, s)).unwrap(),
            )
        })
        .collect();
    PairFamily::new(pairs, mode).unwrap()
}

fn subsets_of_size(ground: u64, k: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: u64, ground: u64, k: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for e in start..ground {
            cur.push(e);
            rec(e + 1, ground, k, cur, out);
            cur.pop();
        }
    }
    rec(0, ground, k, &mut cur, &mut out);
    out
}

fn main() {
    // The tight family: all 2-subsets of a 4-element ground set paired
    // with their complements. The sum is exactly C(4,2) * 1/C(4,2) = 1.
    let tight = family_of_pairs(4, &subsets_of_size(4, 2), Mode::Symmetric);
    assert!(tight.verify().is_ok());
    let sum = bollobas_sum(&tight).unwrap();
    println!("tight family (all 2-subsets of [4] vs complements):");
    println!("  m = {} = C(4,2) = {}", tight.len(), binomial(4, 2));
    println!("  sum = {sum}  (exactly 1: {})", sum == BigRational::from_integer(1.into()));

    // A mixed-size antichain in [6]: {0,1}, {1,2,3}, {4,5}, {0,3,5}.
    let antichain: Vec<Vec<u64>> = vec![
        vec![0, 1],
        vec![1, 2, 3],
        vec![4, 5],
        vec![0, 3, 5],
    ];
    let fam = family_of_pairs(6, &antichain, Mode::Symmetric);
    assert!(fam.verify().is_ok(), "antichain complements are symmetric");
    let sum = bollobas_sum(&fam).unwrap();
    println!("\nantichain family in [6] (LYM sum):");
    for s in &antichain {
        println!("  {s:?} with complement, contributes 1/C(6,{})", s.len());
    }
    println!("  sum = {sum} <= 1: {}", sum <= BigRational::from_integer(1.into()));

    // Dropping the symmetric hypothesis is refused: the theorem says
    // nothing about skew-only families.
    let skew = PairFamily::new(tight.pairs().to_vec(), Mode::Skew).unwrap();
    println!(
        "\nsum on a skew-mode family: {:?}",
        bollobas_sum(&skew).unwrap_err()
    );
}
