//! Finite-field scalars.
//!
//! Cohomology coefficients throughout this crate live in a finite field
//! `F_q` with `q = p^e`.  Elements are stored as canonical `u64` codes: the
//! residue polynomial `a_0 + a_1 x + … + a_{e-1} x^{e-1}` is encoded as the
//! integer `a_0 + a_1 p + … + a_{e-1} p^{e-1}`, so the codes are exactly
//! `0..q` and equality of elements is equality of codes.  All arithmetic
//! decodes to coefficient vectors, works modulo a fixed irreducible modulus
//! polynomial, and re-encodes.

use crate::GammaError;

/// Largest field order the table-free element sweeps are willing to handle.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// A concrete finite field `F_{p^e}`, presented as `F_p[x]` modulo a monic
/// irreducible polynomial of degree `e`.
///
/// The modulus is chosen canonically by the constructor (the first monic
/// polynomial of degree `e`, in lexicographic order of its coefficient
/// tuple, that passes an exact irreducibility test), so two fields of the
/// same order compare equal and element codes mean the same thing in both.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fq {
    p: u64,
    e: u32,
    q: u64,
    /// Little-endian coefficients of the monic modulus; length `e + 1`.
    modulus: Vec<u64>,
}

impl Fq {
    /// Builds `F_{p^e}`.  Rejects composite `p`, zero `e`, and orders past
    /// [`MAX_FIELD_ORDER`].
    pub fn new(p: u64, e: u32) -> Result<Self, GammaError> {
        if !is_prime(p) {
            return Err(GammaError::Precondition(format!(
                "field characteristic {p} is not prime"
            )));
        }
        if e == 0 {
            return Err(GammaError::Precondition(
                "field degree must be at least 1".into(),
            ));
        }
        let q = checked_power(p, e).ok_or_else(|| {
            GammaError::BoundExceeded(format!(
                "field order {p}^{e} exceeds the supported maximum {MAX_FIELD_ORDER}"
            ))
        })?;
        let modulus = canonical_modulus(p, e);
        Ok(Fq { p, e, q, modulus })
    }

    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self, GammaError> {
        Fq::new(p, 1)
    }

    /// Recovers the field from its order, which must be a prime power.
    pub fn from_order(q: u64) -> Result<Self, GammaError> {
        if q < 2 {
            return Err(GammaError::Precondition(format!(
                "field order {q} is not a prime power"
            )));
        }
        let p = smallest_prime_factor(q);
        let mut rest = q;
        let mut e = 0u32;
        while rest > 1 {
            if !rest.is_multiple_of(p) {
                return Err(GammaError::Precondition(format!(
                    "field order {q} is not a prime power"
                )));
            }
            rest /= p;
            e += 1;
        }
        Fq::new(p, e)
    }

    /// The characteristic `p`.
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// The extension degree `e` over the prime field.
    pub fn degree(&self) -> u32 {
        self.e
    }

    /// The number of elements `q = p^e`.
    pub fn order(&self) -> u64 {
        self.q
    }

    /// Little-endian coefficients of the monic irreducible modulus.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn one(&self) -> u64 {
        1
    }

    /// Embeds an integer through the prime subfield.
    pub fn from_int(&self, a: i64) -> u64 {
        let p = self.p as i64;
        (a.rem_euclid(p)) as u64
    }

    fn decode(&self, a: u64) -> Vec<u64> {
        debug_assert!(a < self.q, "element code {a} out of range for F_{}", self.q);
        let mut digits = vec![0u64; self.e as usize];
        let mut rest = a;
        for d in digits.iter_mut() {
            *d = rest % self.p;
            rest /= self.p;
        }
        digits
    }

    fn encode(&self, digits: &[u64]) -> u64 {
        let mut value = 0u64;
        for &d in digits.iter().rev() {
            value = value * self.p + d;
        }
        value
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let (da, db) = (self.decode(a), self.decode(b));
        let sum: Vec<u64> = da
            .iter()
            .zip(&db)
            .map(|(x, y)| (x + y) % self.p)
            .collect();
        self.encode(&sum)
    }

    pub fn neg(&self, a: u64) -> u64 {
        let da = self.decode(a);
        let flipped: Vec<u64> = da.iter().map(|&x| (self.p - x) % self.p).collect();
        self.encode(&flipped)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let product = poly_mul(self.p, &self.decode(a), &self.decode(b));
        let reduced = poly_rem(self.p, &product, &self.modulus);
        let mut digits = vec![0u64; self.e as usize];
        digits[..reduced.len()].copy_from_slice(&reduced);
        self.encode(&digits)
    }

    /// Raises `a` to the `k`-th power by square-and-multiply.
    pub fn pow(&self, a: u64, k: u64) -> u64 {
        let mut result = 1u64;
        let mut base = a;
        let mut exp = k;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        result
    }

    /// Multiplicative inverse; panics on zero, which callers must exclude.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero in F_{}", self.q);
        self.pow(a, self.q - 2)
    }

    /// The multiplicative order of a nonzero element.
    pub fn element_order(&self, a: u64) -> u64 {
        assert!(a != 0, "the zero element has no multiplicative order");
        let mut x = a;
        let mut ord = 1u64;
        while x != 1 {
            x = self.mul(x, a);
            ord += 1;
        }
        ord
    }

    /// A root of unity of exact multiplicative order `m`.
    ///
    /// Requires `m | q − 1`; the returned element is canonical (the sweep
    /// over element codes is deterministic), so e.g. `F_5` answers `2` for
    /// `m = 4` and `F_3` answers `2 = −1` for `m = 2`.
    pub fn root_of_unity(&self, m: u64) -> Result<u64, GammaError> {
        if m == 0 {
            return Err(GammaError::Precondition(
                "roots of unity need a positive order".into(),
            ));
        }
        if !(self.q - 1).is_multiple_of(m) {
            return Err(GammaError::Precondition(format!(
                "the field of order {} has no element of exact order {m}: {m} does not divide {}",
                self.q,
                self.q - 1
            )));
        }
        if m == 1 {
            return Ok(1);
        }
        let primes = distinct_prime_factors(m);
        for g in 1..self.q {
            let b = self.pow(g, (self.q - 1) / m);
            if primes.iter().all(|&l| self.pow(b, m / l) != 1) {
                return Ok(b);
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic");
    }
}

fn checked_power(p: u64, e: u32) -> Option<u64> {
    let q = p.checked_pow(e)?;
    if q > MAX_FIELD_ORDER {
        None
    } else {
        Some(q)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn smallest_prime_factor(n: u64) -> u64 {
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 1;
    }
    n
}

fn distinct_prime_factors(n: u64) -> Vec<u64> {
    let mut factors = Vec::new();
    let mut rest = n;
    let mut d = 2u64;
    while d * d <= rest {
        if rest.is_multiple_of(d) {
            factors.push(d);
            while rest.is_multiple_of(d) {
                rest /= d;
            }
        }
        d += 1;
    }
    if rest > 1 {
        factors.push(rest);
    }
    factors
}

// --- dense little-endian polynomial arithmetic over F_p ---

fn poly_trim(coeffs: &mut Vec<u64>) {
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
}

fn poly_mul(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_trim(&mut out);
    out
}

/// Remainder of `a` modulo a monic divisor.
fn poly_rem(p: u64, a: &[u64], divisor: &[u64]) -> Vec<u64> {
    debug_assert_eq!(*divisor.last().unwrap(), 1, "divisor must be monic");
    let mut rem: Vec<u64> = a.to_vec();
    poly_trim(&mut rem);
    let d = divisor.len() - 1;
    while rem.len() > d {
        let lead = *rem.last().unwrap();
        let shift = rem.len() - 1 - d;
        for (k, &c) in divisor.iter().enumerate() {
            let idx = shift + k;
            rem[idx] = (rem[idx] + (p - (lead * c) % p)) % p;
        }
        poly_trim(&mut rem);
    }
    rem
}

fn poly_pow_x(p: u64, exp: u64, modulus: &[u64]) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut base = poly_rem(p, &[0, 1], modulus);
    let mut k = exp;
    while k > 0 {
        if k & 1 == 1 {
            result = poly_rem(p, &poly_mul(p, &result, &base), modulus);
        }
        base = poly_rem(p, &poly_mul(p, &base, &base), modulus);
        k >>= 1;
    }
    result
}

fn poly_gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut x: Vec<u64> = a.to_vec();
    let mut y: Vec<u64> = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !y.is_empty() {
        // Scale y monic before using it as a divisor.
        let lead = *y.last().unwrap();
        let lead_inv = mod_inverse(lead, p);
        let monic: Vec<u64> = y.iter().map(|&c| (c * lead_inv) % p).collect();
        let r = poly_rem(p, &x, &monic);
        x = monic;
        y = r;
    }
    x
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // p is prime and a is nonzero mod p.
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = (result * base) % p;
        }
        base = (base * base) % p;
        exp >>= 1;
    }
    result
}

/// Rabin's criterion: a monic `f` of degree `e` is irreducible over `F_p`
/// exactly when `x^{p^e} ≡ x (mod f)` and, for every prime `ℓ | e`,
/// `gcd(x^{p^{e/ℓ}} − x, f)` is constant.
fn is_irreducible(p: u64, f: &[u64]) -> bool {
    let e = (f.len() - 1) as u32;
    if e == 1 {
        return true;
    }
    let full = match p.checked_pow(e) {
        Some(v) => v,
        None => return false,
    };
    let xq = poly_pow_x(p, full, f);
    let mut probe = xq;
    // probe − x
    if probe.len() < 2 {
        probe.resize(2, 0);
    }
    probe[1] = (probe[1] + p - 1) % p;
    poly_trim(&mut probe);
    if !probe.is_empty() {
        return false;
    }
    for l in distinct_prime_factors(e as u64) {
        let part = p.pow(e / l as u32);
        let mut witness = poly_pow_x(p, part, f);
        if witness.len() < 2 {
            witness.resize(2, 0);
        }
        witness[1] = (witness[1] + p - 1) % p;
        poly_trim(&mut witness);
        let g = poly_gcd(p, &witness, f);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// The first monic irreducible of degree `e`, scanning constant-first
/// coefficient tuples in increasing order.
fn canonical_modulus(p: u64, e: u32) -> Vec<u64> {
    if e == 1 {
        return vec![0, 1];
    }
    let count = p.pow(e);
    for k in 0..count {
        let mut f = vec![0u64; e as usize + 1];
        let mut rest = k;
        for c in f.iter_mut().take(e as usize) {
            *c = rest % p;
            rest /= p;
        }
        f[e as usize] = 1;
        if is_irreducible(p, &f) {
            return f;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p");
}
