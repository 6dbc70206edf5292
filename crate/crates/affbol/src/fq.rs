//! Exact arithmetic in GF(q) for prime powers q <= 512.
//!
//! Elements are plain integers `0..q`. For prime q the integer is the
//! residue itself; for q = r^alpha with alpha > 1 it encodes the base-r
//! digits of the polynomial representative, least significant digit =
//! constant term. The modulus is the Conway polynomial of degree alpha
//! (see [`conway`]), so the encoding is a stable external contract.
//!
//! Products and inverses go through exp/log tables built once at
//! construction: the Conway polynomial is primitive, so `x` (encoded as the
//! integer `r`) generates the multiplicative group. Addition is digitwise
//! mod r. No floating point or rounding appears anywhere.

mod conway;

use std::fmt;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 512;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    /// The requested order has two distinct prime factors (or is < 2).
    NotPrimePower { q: u64 },
    /// The requested order exceeds [`MAX_ORDER`].
    OrderTooLarge { q: u64 },
    /// Multiplicative inverse of zero.
    DivisionByZero,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrimePower { q } => write!(f, "{q} is not a prime power"),
            FieldError::OrderTooLarge { q } => {
                write!(f, "field order {q} exceeds the supported maximum {MAX_ORDER}")
            }
            FieldError::DivisionByZero => write!(f, "division by zero field element"),
        }
    }
}

impl std::error::Error for FieldError {}

/// The finite field GF(q), q = r^alpha, with exact table-backed arithmetic.
///
/// Immutable after construction; all operations are pure, so a single
/// instance can be shared freely across threads.
#[derive(Clone)]
pub struct Fq {
    q: u32,
    r: u32,
    alpha: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fq")
            .field("q", &self.q)
            .field("r", &self.r)
            .field("alpha", &self.alpha)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        // The modulus is a function of q (fixed table), so q determines the field.
        self.q == other.q
    }
}

impl Eq for Fq {}

impl std::hash::Hash for Fq {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.q.hash(state);
    }
}

impl Fq {
    /// Constructs GF(q). Fails with [`FieldError::NotPrimePower`] unless
    /// q = r^alpha for a prime r, and with [`FieldError::OrderTooLarge`]
    /// beyond [`MAX_ORDER`].
    pub fn new(q: u64) -> Result<Fq, FieldError> {
        let (r, alpha) = prime_power_split(q).ok_or(FieldError::NotPrimePower { q })?;
        if q > MAX_ORDER as u64 {
            return Err(FieldError::OrderTooLarge { q });
        }
        let q = q as u32;
        let modulus: Vec<u32> = if alpha == 1 {
            Vec::new()
        } else {
            conway::lookup(q)
                .unwrap_or_else(|| panic!("conway table is missing q = {q}"))
                .to_vec()
        };

        let generator = if alpha == 1 {
            smallest_primitive_root(r)
        } else {
            // x: digit vector (0, 1, 0, ...), i.e. the integer r.
            r
        };

        let mut field = Fq {
            q,
            r,
            alpha,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.build_tables(generator);
        field.check_inverses();
        Ok(field)
    }

    fn build_tables(&mut self, generator: u32) {
        let q = self.q as usize;
        let mut exp = Vec::with_capacity(q - 1);
        let mut log = vec![u32::MAX; q];
        let mut cur: u32 = 1;
        for i in 0..(q as u32 - 1) {
            assert_eq!(
                log[cur as usize],
                u32::MAX,
                "generator of GF({}) revisited element {cur}; modulus is not primitive",
                self.q
            );
            log[cur as usize] = i;
            exp.push(cur);
            cur = self.mul_slow(cur, generator);
        }
        assert_eq!(cur, 1, "generator order mismatch in GF({})", self.q);
        self.exp = exp;
        self.log = log;
    }

    fn check_inverses(&self) {
        for a in 1..self.q {
            let inv = self.inv(a).expect("nonzero element");
            assert_eq!(self.mul(a, inv), 1, "inverse check failed in GF({})", self.q);
        }
    }

    /// Table-free product used only while the tables are being built.
    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if self.alpha == 1 {
            return ((a as u64 * b as u64) % self.r as u64) as u32;
        }
        let da = self.digits(a);
        let db = self.digits(b);
        let deg = self.alpha as usize;
        let mut prod = vec![0u32; 2 * deg - 1];
        for (i, &ca) in da.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (j, &cb) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ca * cb) % self.r;
            }
        }
        // Reduce by the monic modulus.
        for k in (deg..prod.len()).rev() {
            let lead = prod[k];
            if lead == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &m) in self.modulus.iter().enumerate().take(deg) {
                let idx = k - deg + i;
                prod[idx] = (prod[idx] + (self.r - m % self.r) % self.r * lead) % self.r;
            }
        }
        self.undigits(&prod[..deg])
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Field characteristic r.
    pub fn characteristic(&self) -> u32 {
        self.r
    }

    /// Extension degree alpha with q = r^alpha.
    pub fn extension_degree(&self) -> u32 {
        self.alpha
    }

    /// Modulus coefficients (constant term first), empty for prime q.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Base-r digits of an element, constant term first.
    pub fn digits(&self, a: u32) -> Vec<u32> {
        debug_assert!(a < self.q);
        let mut out = Vec::with_capacity(self.alpha as usize);
        let mut rest = a;
        for _ in 0..self.alpha {
            out.push(rest % self.r);
            rest /= self.r;
        }
        out
    }

    /// Inverse of [`Fq::digits`].
    pub fn undigits(&self, digits: &[u32]) -> u32 {
        let mut out = 0u32;
        for &d in digits.iter().rev() {
            debug_assert!(d < self.r);
            out = out * self.r + d;
        }
        out
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.q && b < self.q);
        if self.alpha == 1 {
            return (a + b) % self.r;
        }
        let mut out = 0u32;
        let mut pa = a;
        let mut pb = b;
        let mut place = 1u32;
        for _ in 0..self.alpha {
            out += (pa % self.r + pb % self.r) % self.r * place;
            pa /= self.r;
            pb /= self.r;
            place *= self.r;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        debug_assert!(a < self.q);
        if self.alpha == 1 {
            return (self.r - a) % self.r;
        }
        let mut out = 0u32;
        let mut pa = a;
        let mut place = 1u32;
        for _ in 0..self.alpha {
            out += (self.r - pa % self.r) % self.r * place;
            pa /= self.r;
            place *= self.r;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.q && b < self.q);
        if a == 0 || b == 0 {
            return 0;
        }
        let e = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % (self.q as u64 - 1);
        self.exp[e as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32, FieldError> {
        debug_assert!(a < self.q);
        if a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let e = (self.q as u64 - 1 - self.log[a as usize] as u64) % (self.q as u64 - 1);
        Ok(self.exp[e as usize])
    }

    /// a^e with the convention a^0 = 1 (including 0^0 = 1).
    pub fn pow(&self, a: u32, e: u64) -> u32 {
        debug_assert!(a < self.q);
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let e = (self.log[a as usize] as u64 % (self.q as u64 - 1) * (e % (self.q as u64 - 1)))
            % (self.q as u64 - 1);
        self.exp[e as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }
}

/// Splits q = r^alpha with r prime; None when q < 2 or q has two prime factors.
fn prime_power_split(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut n = q;
    let mut r = 0u64;
    for cand in 2..=n {
        if cand * cand > n {
            r = n;
            break;
        }
        if n.is_multiple_of(cand) {
            r = cand;
            break;
        }
    }
    let mut alpha = 0u32;
    while n.is_multiple_of(r) {
        n /= r;
        alpha += 1;
    }
    if n == 1 {
        Some((r as u32, alpha))
    } else {
        None
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn smallest_primitive_root(r: u32) -> u32 {
    if r == 2 {
        return 1;
    }
    let order = (r - 1) as u64;
    let factors = prime_factors(order);
    'cand: for g in 2..r {
        for &f in &factors {
            if pow_mod(g as u64, order / f, r as u64) == 1 {
                continue 'cand;
            }
        }
        return g;
    }
    unreachable!("every prime has a primitive root")
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}
