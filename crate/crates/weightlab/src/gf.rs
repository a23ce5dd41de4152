//! Finite fields GF(p^k) in Zech-logarithm representation.
//!
//! An element is stored as a `u32` code: `0` is zero and `i + 1` stands for
//! `g^i`, where `g` is the fixed primitive element of the field. Products are
//! additions of logarithms; sums go through the Zech table `1 + g^i = g^{Z(i)}`.
//! The polynomial basis (coefficient vectors over GF(p)) is kept alongside for
//! conversion and serialization.

use crate::arith::{factorize, is_prime};
use crate::error::{Error, Result};
use serde::Serialize;
use std::fmt;

/// Largest field size this module will build.
pub const MAX_FIELD_SIZE: u64 = 1 << 22;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            write!(f, "0")
        } else {
            write!(f, "g^{}", self.0 - 1)
        }
    }
}

#[derive(Clone, Serialize)]
pub struct FieldSpec {
    pub p: u64,
    pub k: u32,
    pub size: u64,
    /// Monic modulus, coefficients from degree 0 upwards (length `k + 1`).
    pub modulus: Vec<u64>,
    /// The primitive element in the polynomial basis.
    pub generator: Vec<u64>,
    #[serde(skip)]
    exp: Vec<u32>,
    #[serde(skip)]
    log: Vec<u32>,
    #[serde(skip)]
    zech: Vec<u32>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.k)
    }
}

fn poly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p;
        if c != 0 {
            for i in 0..=dm {
                let idx = top - dm + i;
                r[idx] = (r[idx] + p * p - c * m[i] % p) % p;
            }
        }
        r.pop();
        poly_trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&prod, m, p)
}

fn poly_powmod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut r = vec![1u64];
    let mut b = poly_rem(a, m, p);
    while e > 0 {
        if e & 1 == 1 {
            r = poly_mulmod(&r, &b, m, p);
        }
        b = poly_mulmod(&b, &b, m, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    crate::arith::pow_mod(a, p - 2, p)
}

fn encode(c: &[u64], p: u64) -> u64 {
    c.iter().rev().fold(0, |acc, &x| acc * p + x)
}

fn decode(mut x: u64, p: u64, k: u32) -> Vec<u64> {
    let mut v = Vec::with_capacity(k as usize);
    for _ in 0..k {
        v.push(x % p);
        x /= p;
    }
    v
}

/// Monic polynomial of degree `deg` whose lower coefficients encode `idx` in base `p`.
fn monic_from_index(idx: u64, p: u64, deg: u32) -> Vec<u64> {
    let mut v = decode(idx, p, deg);
    v.push(1);
    v
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = (f.len() - 1) as u32;
    for d in 1..=k / 2 {
        for idx in 0..p.pow(d) {
            let g = monic_from_index(idx, p, d);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// Builds GF(p^k) with the smallest monic irreducible modulus (ordered by
    /// its lower coefficients read as a base-p number) and the smallest
    /// primitive element in the same encoding.
    pub fn new(p: u64, k: u32) -> Result<FieldSpec> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::Precondition("field degree must be positive".into()));
        }
        let size128 = (p as u128).pow(k);
        if size128 > MAX_FIELD_SIZE as u128 {
            return Err(Error::FieldTooLarge(size128));
        }
        let size = size128 as u64;
        let modulus = (0..p.pow(k))
            .map(|idx| monic_from_index(idx, p, k))
            .find(|f| is_irreducible(f, p))
            .expect("an irreducible polynomial exists in every degree");
        let order = size - 1;
        let primes: Vec<u64> = factorize(order).into_iter().map(|(r, _)| r).collect();
        let generator = (1..size)
            .map(|x| {
                let mut v = decode(x, p, k);
                poly_trim(&mut v);
                v
            })
            .find(|g| {
                primes
                    .iter()
                    .all(|r| poly_powmod(g, order / r, &modulus, p) != vec![1u64])
            })
            .expect("the multiplicative group is cyclic");

        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; size as usize];
        let mut cur = vec![1u64];
        for i in 0..order {
            let code = encode(&cur, p);
            exp[i as usize] = code as u32;
            log[code as usize] = i as u32;
            cur = poly_mulmod(&cur, &generator, &modulus, p);
        }
        let mut zech = vec![0u32; order as usize];
        for i in 0..order as usize {
            let c = exp[i] as u64;
            let plus_one = c - c % p + (c % p + 1) % p;
            zech[i] = if plus_one == 0 { 0 } else { log[plus_one as usize] + 1 };
        }
        let mut generator_full = generator.clone();
        generator_full.resize(k as usize, 0);
        Ok(FieldSpec { p, k, size, modulus, generator: generator_full, exp, log, zech })
    }

    /// Order of the multiplicative group.
    pub fn units(&self) -> u64 {
        self.size - 1
    }

    fn m(&self) -> u64 {
        self.size - 1
    }

    fn from_log(&self, l: u64) -> Fe {
        Fe((l % self.m()) as u32 + 1)
    }

    /// Discrete logarithm of a nonzero element.
    pub fn log_of(&self, a: Fe) -> u64 {
        debug_assert!(!a.is_zero());
        (a.0 - 1) as u64
    }

    pub fn gen(&self) -> Fe {
        self.from_log(1)
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.is_zero() || b.is_zero() {
            return Fe::ZERO;
        }
        let s = (a.0 - 1) as u64 + (b.0 - 1) as u64;
        let m = self.m();
        Fe((if s >= m { s - m } else { s }) as u32 + 1)
    }

    pub fn inv(&self, a: Fe) -> Fe {
        assert!(!a.is_zero(), "inverse of zero");
        let l = (a.0 - 1) as u64;
        self.from_log(self.m() - l)
    }

    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let la = (a.0 - 1) as u64;
        let lb = (b.0 - 1) as u64;
        let m = self.m();
        let d = if lb >= la { lb - la } else { lb + m - la };
        let z = self.zech[d as usize];
        if z == 0 {
            return Fe::ZERO;
        }
        self.from_log(la + (z - 1) as u64)
    }

    pub fn minus_one(&self) -> Fe {
        if self.p == 2 {
            Fe::ONE
        } else {
            self.from_log(self.m() / 2)
        }
    }

    pub fn neg(&self, a: Fe) -> Fe {
        self.mul(a, self.minus_one())
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn pow(&self, a: Fe, e: i64) -> Fe {
        if a.is_zero() {
            assert!(e > 0, "zero to a non-positive power");
            return Fe::ZERO;
        }
        let m = self.m() as i128;
        let l = ((a.0 - 1) as i128 * e as i128).rem_euclid(m);
        self.from_log(l as u64)
    }

    /// Image of an integer under Z -> GF(p).
    pub fn from_int(&self, x: i64) -> Fe {
        let r = x.rem_euclid(self.p as i64) as u64;
        if r == 0 {
            Fe::ZERO
        } else {
            Fe(self.log[r as usize] + 1)
        }
    }

    pub fn from_coeffs(&self, c: &[u64]) -> Fe {
        let mut v: Vec<u64> = c.iter().map(|x| x % self.p).collect();
        poly_trim(&mut v);
        let v = poly_rem(&v, &self.modulus, self.p);
        let code = encode(&v, self.p);
        if code == 0 {
            Fe::ZERO
        } else {
            Fe(self.log[code as usize] + 1)
        }
    }

    pub fn to_coeffs(&self, a: Fe) -> Vec<u64> {
        let code = self.code(a);
        decode(code, self.p, self.k)
    }

    /// Integer encoding of the coefficient vector (base p, degree 0 least significant).
    pub fn code(&self, a: Fe) -> u64 {
        if a.is_zero() {
            0
        } else {
            self.exp[(a.0 - 1) as usize] as u64
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Fe) -> u64 {
        let l = self.log_of(a);
        self.m() / crate::arith::gcd(l, self.m())
    }

    /// `g^((p^k - 1)/d)`, an element of exact order `d`.
    pub fn element_of_order(&self, d: u64) -> Result<Fe> {
        if d == 0 || self.m() % d != 0 {
            return Err(Error::NoSuchOrder { order: d, size: self.size });
        }
        Ok(self.from_log(self.m() / d))
    }

    pub fn is_square(&self, a: Fe) -> bool {
        a.is_zero() || self.p == 2 || self.log_of(a) % 2 == 0
    }

    /// A square root of `a`; of the two roots the one with the smaller
    /// coefficient encoding is returned.
    pub fn sqrt(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Ok(Fe::ZERO);
        }
        let l = self.log_of(a);
        let m = self.m();
        if self.p == 2 {
            let half = if l % 2 == 0 { l / 2 } else { (l + m) / 2 };
            return Ok(self.from_log(half));
        }
        if l % 2 != 0 {
            return Err(Error::NonSquare);
        }
        let r1 = self.from_log(l / 2);
        let r2 = self.from_log(l / 2 + m / 2);
        Ok(if self.code(r1) <= self.code(r2) { r1 } else { r2 })
    }

    /// `x^(p^j)`.
    pub fn frobenius_power(&self, a: Fe, j: u32) -> Fe {
        if a.is_zero() {
            return a;
        }
        let m = self.m();
        let mut e = 1u64;
        for _ in 0..(j % self.k) {
            e = e * self.p % m.max(1);
        }
        if m == 1 {
            return a;
        }
        self.from_log((self.log_of(a) as u128 * e as u128 % m as u128) as u64)
    }

    /// `x^(q^j)` for `q = p^f`.
    pub fn frob_q(&self, a: Fe, f: u32, j: u32) -> Fe {
        self.frobenius_power(a, f * j)
    }

    /// Elements of the subfield GF(p^d) (d must divide k).
    pub fn subfield(&self, d: u32) -> Vec<Fe> {
        assert_eq!(self.k % d, 0);
        let step = self.m() / (self.p.pow(d) - 1);
        let mut v = vec![Fe::ZERO];
        v.extend((0..self.p.pow(d) - 1).map(|i| self.from_log(i * step)));
        v
    }

    pub fn in_subfield(&self, a: Fe, d: u32) -> bool {
        a.is_zero() || self.log_of(a) % (self.m() / (self.p.pow(d) - 1)) == 0
    }
}

/// Builds GF(p^k).
pub fn make_field(p: u64, k: u32) -> Result<FieldSpec> {
    FieldSpec::new(p, k)
}

/// Smallest degree `k`, a multiple of `base`, such that every order in
/// `orders` divides `p^k - 1`.
pub fn degree_for_orders(p: u64, base: u32, orders: &[u64]) -> u32 {
    let mut k = base;
    loop {
        let m = (p as u128).pow(k) - 1;
        if orders.iter().all(|&d| m % d as u128 == 0) {
            return k;
        }
        k += base;
    }
}
