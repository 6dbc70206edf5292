//! Exact arithmetic in GF(q), including prime-power fields.
//!
//! Usage: cargo run --example field_arithmetic [q]
//!
//! Elements are integers 0..q encoding base-r digit vectors (least
//! significant digit = constant term); extension fields reduce modulo the
//! Conway polynomial of the matching degree, so the encoding is stable
//! across runs and machines.

use affbol::fq::Fq;

fn main() {
    let q: u64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("q"))
        .unwrap_or(9);
    let field = Fq::new(q).expect("prime power");

    println!(
        "GF({}) = GF({}^{})",
        field.q(),
        field.characteristic(),
        field.extension_degree()
    );
    if field.extension_degree() > 1 {
        let poly: Vec<String> = field
            .modulus()
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "x".into(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            })
            .collect();
        println!("modulus: {}", poly.join(" + "));
    }

    // Small multiplication table.
    let show = field.q().min(8);
    println!("\nmultiplication table (first {show} elements):");
    print!("     ");
    for b in 0..show {
        print!("{b:>4}");
    }
    println!();
    for a in 0..show {
        print!("{a:>4}:");
        for b in 0..show {
            print!("{:>4}", field.mul(a, b));
        }
        println!();
    }

    println!("\ninverses:");
    for a in 1..field.q().min(10) {
        let inv = field.inv(a).unwrap();
        println!("  {a}^-1 = {inv}   (check: {a} * {inv} = {})", field.mul(a, inv));
    }

    // The multiplicative group is cyclic of order q - 1.
    let mut pows = Vec::new();
    let g = if field.extension_degree() > 1 { field.characteristic() } else { primitive(&field) };
    let mut x = 1u32;
    for _ in 0..field.q() - 1 {
        pows.push(x);
        x = field.mul(x, g);
    }
    pows.sort_unstable();
    let all: Vec<u32> = (1..field.q()).collect();
    assert_eq!(pows, all, "powers of the generator cover all nonzero elements");
    println!("\ngenerator {g} has order {} = q - 1", field.q() - 1);
}

fn primitive(field: &Fq) -> u32 {
    'outer: for g in 2..field.q() {
        let mut x = g;
        for _ in 0..field.q() - 2 {
            if x == 1 {
                continue 'outer;
            }
            x = field.mul(x, g);
        }
        return g;
    }
    1
}
