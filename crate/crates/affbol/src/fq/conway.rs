//! Conway polynomial table for prime powers q = r^alpha <= 512, alpha >= 2.
//!
//! Coefficients are listed from the constant term upward; the leading
//! coefficient 1 of the degree-alpha modulus is included. Every polynomial
//! here is primitive, so `x` generates the multiplicative group of the
//! extension field — which is what lets the field constructor fill its
//! exp/log tables by repeated multiplication with `x`.
//!
//! The table is pinned (rather than recomputed at field construction) so
//! that the element encoding is reproducible bit-for-bit across builds;
//! `tests` re-derives each entry from the defining minimality property.

/// `(q, coefficients low -> high)` for every prime power `q <= 512` that is
/// not prime.
pub(crate) const CONWAY_POLYNOMIALS: &[(u32, &[u32])] = &[
    (4, &[1, 1, 1]),                      // x^2 + x + 1
    (8, &[1, 1, 0, 1]),                   // x^3 + x + 1
    (16, &[1, 1, 0, 0, 1]),               // x^4 + x + 1
    (32, &[1, 0, 1, 0, 0, 1]),            // x^5 + x^2 + 1
    (64, &[1, 1, 0, 1, 1, 0, 1]),         // x^6 + x^4 + x^3 + x + 1
    (128, &[1, 1, 0, 0, 0, 0, 0, 1]),     // x^7 + x + 1
    (256, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),  // x^8 + x^4 + x^3 + x^2 + 1
    (512, &[1, 0, 0, 0, 1, 0, 0, 0, 0, 1]), // x^9 + x^4 + 1
    (9, &[2, 2, 1]),                      // x^2 + 2x + 2
    (27, &[1, 2, 0, 1]),                  // x^3 + 2x + 1
    (81, &[2, 0, 0, 2, 1]),               // x^4 + 2x^3 + 2
    (243, &[1, 2, 0, 0, 0, 1]),           // x^5 + 2x + 1
    (25, &[2, 4, 1]),                     // x^2 + 4x + 2
    (125, &[3, 3, 0, 1]),                 // x^3 + 3x + 3
    (49, &[3, 6, 1]),                     // x^2 + 6x + 3
    (343, &[4, 0, 6, 1]),                 // x^3 + 6x^2 + 4
    (121, &[2, 7, 1]),                    // x^2 + 7x + 2
    (169, &[2, 12, 1]),                   // x^2 + 12x + 2
    (289, &[3, 16, 1]),                   // x^2 + 16x + 3
    (361, &[2, 18, 1]),                   // x^2 + 18x + 2
];

pub(crate) fn lookup(q: u32) -> Option<&'static [u32]> {
    CONWAY_POLYNOMIALS
        .iter()
        .find(|&&(order, _)| order == q)
        .map(|&(_, coeffs)| coeffs)
}
