//! Roots of unity of order prime to `p`, written additively as fractions in
//! Q/Z, and their orbits under the Frobenius map `ξ ↦ ξ^{ηq}`. An orbit stands
//! for a monic irreducible polynomial Γ (an elementary divisor).

use crate::arith::{self, gcd, is_prime, mult_order, prime_power, rem, val};
use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GlobalContext {
    pub p: u64,
    pub f: u32,
    pub q: u64,
    pub eta: i8,
    pub ell: u64,
    pub e: u64,
    pub a: u32,
}

impl GlobalContext {
    pub fn new(q: u64, eta: i8, ell: u64) -> Result<GlobalContext> {
        let (p, f) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if eta != 1 && eta != -1 {
            return Err(Error::InvalidContext(format!("eta must be ±1, got {eta}")));
        }
        if !is_prime(ell) {
            return Err(Error::NotPrime(ell));
        }
        if ell == p {
            return Err(Error::InvalidContext(format!("ell = {ell} equals the characteristic")));
        }
        let eq = eta as i128 * q as i128;
        let (e, a) = if ell == 2 {
            let qm = (q as i128 - eta as i128) as u64;
            let qp = (q as i128 + eta as i128) as u64;
            if qm % 4 == 0 {
                (1, val(2, qm))
            } else {
                (1, val(2, qp))
            }
        } else {
            let e = mult_order(eq, ell);
            let a = arith::val_i(ell, eq.pow(e as u32) - 1);
            (e, a)
        };
        Ok(GlobalContext { p, f, q, eta, ell, e, a })
    }

    /// `ηq` as a signed integer.
    pub fn eq(&self) -> i128 {
        self.eta as i128 * self.q as i128
    }

    /// `q - η` (always positive).
    pub fn q_minus_eta(&self) -> u64 {
        (self.q as i128 - self.eta as i128) as u64
    }

    /// True in the ℓ = 2 setting where `4 | q + η`.
    pub fn two_unitary(&self) -> bool {
        self.ell == 2 && (self.q as i128 + self.eta as i128) % 4 == 0
    }

    /// True in the ℓ = 2 setting where `4 | q - η`.
    pub fn two_linear(&self) -> bool {
        self.ell == 2 && self.q_minus_eta() % 4 == 0
    }

    /// `ν_ℓ((ηq)^k - 1)` in closed form.
    pub fn nu(&self, k: u64) -> u32 {
        assert!(k >= 1);
        let l = self.ell;
        if l != 2 {
            if k % self.e != 0 {
                0
            } else {
                self.a + val(l, k)
            }
        } else if self.two_linear() || k % 2 == 0 {
            self.a + val(2, k)
        } else {
            1
        }
    }

    /// `|(ηq)^k - 1|`.
    pub fn abs_power_minus_one(&self, k: u64) -> u128 {
        let q = self.q as u128;
        let qk = q.checked_pow(k as u32).expect("power overflow");
        if self.eta == -1 && k % 2 == 1 {
            qk + 1
        } else {
            qk - 1
        }
    }
}

/// A root of unity `exp(2πi·num/den)`, kept as a reduced fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Root {
    pub num: u64,
    pub den: u64,
}

impl Ord for Root {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.den, self.num).cmp(&(other.den, other.num))
    }
}

impl PartialOrd for Root {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Root {
    pub const ONE: Root = Root { num: 0, den: 1 };

    /// Reduces `num/den` modulo 1.
    pub fn new(num: i128, den: u64) -> Root {
        assert!(den > 0);
        let n = rem(num, den);
        if n == 0 {
            return Root::ONE;
        }
        let g = gcd(n, den);
        Root { num: n / g, den: den / g }
    }

    /// Scales the exponent by an integer.
    pub fn scale(self, k: i128) -> Root {
        Root::new(self.num as i128 * rem(k, self.den) as i128, self.den)
    }

    pub fn order(self) -> u64 {
        self.den
    }
}

pub fn mul_root(a: Root, b: Root) -> Root {
    let den = arith::lcm(a.den, b.den);
    Root::new((a.num * (den / a.den) + b.num * (den / b.den)) as i128, den)
}

pub fn frobenius(ctx: &GlobalContext, x: Root) -> Root {
    x.scale(ctx.eq())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RootOrbit {
    pub rep: Root,
    pub members: Vec<Root>,
    pub d: u64,
    pub e_gamma: u64,
    pub m_gamma: u64,
    pub alpha_gamma: u32,
}

impl PartialOrd for RootOrbit {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RootOrbit {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.d, self.rep).cmp(&(other.d, other.rep))
    }
}

/// `e_Γ` for an orbit of length `d`.
pub fn e_gamma_of(ctx: &GlobalContext, d: u64) -> u64 {
    if ctx.ell == 2 {
        1
    } else {
        ctx.e / gcd(ctx.e, d)
    }
}

pub fn orbit_of(ctx: &GlobalContext, x: Root) -> Result<RootOrbit> {
    if x.den % ctx.p == 0 {
        return Err(Error::DenDivisibleByP { den: x.den, p: ctx.p });
    }
    let mut members = vec![x];
    let mut y = frobenius(ctx, x);
    while y != x {
        members.push(y);
        y = frobenius(ctx, y);
    }
    members.sort();
    let d = members.len() as u64;
    let e_gamma = e_gamma_of(ctx, d);
    let t = e_gamma * d / ctx.e;
    let alpha_gamma = val(ctx.ell, t);
    let m_gamma = t / ctx.ell.pow(alpha_gamma);
    Ok(RootOrbit { rep: members[0], members, d, e_gamma, m_gamma, alpha_gamma })
}

impl RootOrbit {
    pub fn den(&self) -> u64 {
        self.rep.den
    }

    pub fn is_ell_prime(&self, ell: u64) -> bool {
        self.rep.den % ell != 0
    }
}

/// Every Frobenius orbit with `d_Γ ≤ n`, sorted by `(d, den, num)`.
pub fn enumerate_orbits(ctx: &GlobalContext, n: u64, ell_prime_only: bool) -> Vec<RootOrbit> {
    let mut dens = BTreeSet::new();
    for k in 1..=n {
        let m = ctx.abs_power_minus_one(k);
        assert!(m < (1u128 << 40), "root enumeration too large");
        for d in arith::divisors(m as u64) {
            if !ell_prime_only || d % ctx.ell != 0 {
                dens.insert(d);
            }
        }
    }
    let mut out = Vec::new();
    for den in dens {
        let mut seen = vec![false; den as usize];
        for num in 0..den {
            if seen[num as usize] || gcd(num, den) != 1 && den != 1 {
                continue;
            }
            let orb = orbit_of(ctx, Root::new(num as i128, den)).expect("den prime to p");
            for m in &orb.members {
                seen[m.num as usize] = true;
            }
            out.push(orb);
        }
    }
    out.sort();
    out
}

/// The norm map from roots of order dividing `|(ηq)^{eℓ^α} - 1|` down to
/// roots of order dividing `q - η`.
pub fn norm_map(ctx: &GlobalContext, alpha: u32, x: Root) -> Result<Root> {
    let k = ctx.e * ctx.ell.pow(alpha);
    let big = ctx.abs_power_minus_one(k);
    if big % x.den as u128 != 0 {
        return Err(Error::Precondition(format!(
            "{}/{} is not fixed by the degree-{} Frobenius",
            x.num, x.den, k
        )));
    }
    let den = x.den as i128;
    let eq = ctx.eq().rem_euclid(den);
    let mut mult: i128 = 0;
    let mut pw: i128 = 1 % den;
    for _ in 0..k {
        mult = (mult + pw) % den;
        pw = pw * eq % den;
    }
    Ok(x.scale(mult))
}

/// Given an orbit under `×(ηq)^{eℓ^α}`, returns the Frobenius orbits
/// making up its Frobenius closure. The closure of a single orbit is one
/// Frobenius orbit, so the result always has length one.
pub fn phi_alpha(ctx: &GlobalContext, alpha: u32, set: &[Root]) -> Result<Vec<RootOrbit>> {
    let k = ctx.e * ctx.ell.pow(alpha);
    let Some(&first) = set.iter().min() else {
        return Err(Error::Precondition("empty root set".into()));
    };
    let qk = ctx.eq().pow(k as u32);
    let mut orbit = vec![first];
    let mut y = first.scale(qk);
    while y != first {
        orbit.push(y);
        y = y.scale(qk);
    }
    orbit.sort();
    let mut given: Vec<Root> = set.to_vec();
    given.sort();
    given.dedup();
    if orbit != given {
        return Err(Error::Precondition("input is not a single orbit of the extension Frobenius".into()));
    }
    Ok(vec![orbit_of(ctx, first)?])
}

/// The orbits of `×(ηq)^{eℓ^α}` inside a Frobenius orbit (the fiber of Φ_α).
pub fn phi_alpha_fiber(ctx: &GlobalContext, alpha: u32, gamma: &RootOrbit) -> Vec<Vec<Root>> {
    let k = ctx.e * ctx.ell.pow(alpha);
    let qk = ctx.eq().pow(k as u32);
    let mut left: BTreeSet<Root> = gamma.members.iter().copied().collect();
    let mut out = Vec::new();
    while let Some(&x) = left.iter().next() {
        let mut o = vec![x];
        left.remove(&x);
        let mut y = x.scale(qk);
        while y != x {
            left.remove(&y);
            o.push(y);
            y = y.scale(qk);
        }
        o.sort();
        out.push(o);
    }
    out
}

pub fn zeta_act_orbit(ctx: &GlobalContext, zeta: Root, gamma: &RootOrbit) -> Result<RootOrbit> {
    if ctx.q_minus_eta() % zeta.den != 0 {
        return Err(Error::Precondition(format!("order {} does not divide q - η", zeta.den)));
    }
    orbit_of(ctx, mul_root(zeta, gamma.rep))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum AutKind {
    FieldP,
    Graph,
}

pub fn aut_act(ctx: &GlobalContext, kind: AutKind, gamma: &RootOrbit) -> RootOrbit {
    let x = match kind {
        AutKind::FieldP => gamma.rep.scale(ctx.p as i128),
        AutKind::Graph => gamma.rep.scale(-1),
    };
    orbit_of(ctx, x).expect("den prime to p")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: u64, eta: i8, ell: u64) -> GlobalContext {
        GlobalContext::new(q, eta, ell).unwrap()
    }

    #[test]
    fn context_invariants() {
        let c = ctx(3, 1, 2);
        assert_eq!((c.e, c.a), (1, 2));
        assert!(c.two_unitary());
        let c = ctx(5, 1, 2);
        assert_eq!((c.e, c.a), (1, 2));
        assert!(c.two_linear());
        let c = ctx(3, 1, 5);
        assert_eq!((c.e, c.a), (4, 1));
        let c = ctx(2, -1, 3);
        assert_eq!((c.e, c.a), (1, 1));
        assert!(GlobalContext::new(9, 1, 3).is_err());
        assert!(GlobalContext::new(6, 1, 5).is_err());
    }

    #[test]
    fn root_ops() {
        assert_eq!(mul_root(Root::new(1, 3), Root::new(1, 3)), Root::new(2, 3));
        assert_eq!(mul_root(Root::new(1, 2), Root::new(1, 2)), Root::ONE);
        assert_eq!(mul_root(Root::new(1, 8), Root::new(3, 8)), Root::new(1, 2));
        assert_eq!(frobenius(&ctx(3, 1, 2), Root::new(1, 8)), Root::new(3, 8));
        assert_eq!(frobenius(&ctx(2, -1, 3), Root::new(1, 3)), Root::new(1, 3));
    }

    #[test]
    fn orbits() {
        let c = ctx(3, 1, 2);
        let o = orbit_of(&c, Root::new(1, 8)).unwrap();
        assert_eq!(o.members, vec![Root::new(1, 8), Root::new(3, 8)]);
        assert_eq!((o.d, o.alpha_gamma, o.m_gamma), (2, 1, 1));
        let all = enumerate_orbits(&c, 2, false);
        assert_eq!(all.iter().filter(|o| o.d == 1).count(), 2);
        assert_eq!(all.iter().filter(|o| o.d == 2).count(), 3);
        let u = ctx(2, -1, 3);
        let o = orbit_of(&u, Root::new(1, 3)).unwrap();
        assert_eq!((o.d, o.e_gamma), (1, 1));
        assert_eq!(enumerate_orbits(&u, 1, false).len(), 3);
        assert!(orbit_of(&c, Root::new(1, 3)).is_err());
    }

    #[test]
    fn norm_and_phi() {
        let c = ctx(3, 1, 2);
        assert_eq!(norm_map(&c, 1, Root::new(1, 8)).unwrap(), Root::new(1, 2));
        assert_eq!(norm_map(&c, 0, Root::new(1, 2)).unwrap(), Root::new(1, 2));
        let u = ctx(2, -1, 3);
        assert_eq!(norm_map(&u, 1, Root::new(1, 9)).unwrap(), Root::new(1, 3));
        let r = phi_alpha(&c, 1, &[Root::new(1, 8)]).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].members.len(), 2);
        assert_eq!(phi_alpha(&c, 1, &[Root::ONE]).unwrap()[0].members, vec![Root::ONE]);
        assert!(phi_alpha(&c, 0, &[Root::new(1, 8)]).is_err());
    }

    #[test]
    fn actions() {
        let c = ctx(3, 1, 2);
        let one = orbit_of(&c, Root::ONE).unwrap();
        assert_eq!(zeta_act_orbit(&c, Root::new(1, 2), &one).unwrap().rep, Root::new(1, 2));
        assert!(zeta_act_orbit(&c, Root::new(1, 4), &one).is_err());
        let o = orbit_of(&c, Root::new(1, 8)).unwrap();
        assert_eq!(aut_act(&c, AutKind::FieldP, &o), o);
        assert_eq!(aut_act(&c, AutKind::Graph, &one), one);
    }
}
