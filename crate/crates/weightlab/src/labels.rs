//! Label sets for Brauer characters and weights of `GL_n(ηq)`, the bijection
//! between them, the action of the center, restriction multiplicities to the
//! determinant-one subgroup, and defect valuations.

use crate::arith::{gcd, l_prime_part, val};
use crate::error::Result;
use crate::par;
use crate::partitions::{cores_of, partitions_of, pi_m, pi_m_inv, towers_of_weight, CoreTower, Partition};
use crate::roots::{aut_act, enumerate_orbits, zeta_act_orbit, AutKind, GlobalContext, Root, RootOrbit};
use serde::Serialize;
use std::collections::HashSet;

/// A semisimple class: multiplicities `m_Γ(s)` on Frobenius orbits, sorted by orbit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SemisimpleLabel {
    pub mult: Vec<(RootOrbit, u32)>,
}

impl SemisimpleLabel {
    pub fn degree(&self) -> u64 {
        self.mult.iter().map(|(o, m)| o.d * *m as u64).sum()
    }

    pub fn is_ell_prime(&self, ell: u64) -> bool {
        self.mult.iter().all(|(o, _)| o.is_ell_prime(ell))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IBrLabel {
    pub s: SemisimpleLabel,
    /// `mu[i]` is the partition attached to the `i`-th orbit of `s`.
    pub mu: Vec<Partition>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AlpLabel {
    pub s: SemisimpleLabel,
    pub lambda: Vec<Partition>,
    /// `k[i]` is the `e_Γ`-tuple of towers attached to the `i`-th orbit.
    pub k: Vec<Vec<CoreTower>>,
}

impl AlpLabel {
    /// `deg(K)`, the minimum over all towers; `None` when every tower is empty.
    pub fn deg(&self) -> Option<u32> {
        self.k.iter().flatten().filter_map(|t| t.deg()).min()
    }

    pub fn weights(&self) -> Vec<u64> {
        self.k.iter().map(|ts| ts.iter().map(|t| t.weight()).sum()).collect()
    }
}

pub fn enumerate_semisimple(ctx: &GlobalContext, n: u64, ell_prime: bool) -> Vec<SemisimpleLabel> {
    let orbits = enumerate_orbits(ctx, n, ell_prime);
    let mut out = Vec::new();
    fn rec(
        orbits: &[RootOrbit],
        start: usize,
        left: u64,
        cur: &mut Vec<(RootOrbit, u32)>,
        out: &mut Vec<SemisimpleLabel>,
    ) {
        if left == 0 {
            out.push(SemisimpleLabel { mult: cur.clone() });
            return;
        }
        for i in start..orbits.len() {
            let d = orbits[i].d;
            if d > left {
                break;
            }
            let mut m = 1;
            while m as u64 * d <= left {
                cur.push((orbits[i].clone(), m));
                rec(orbits, i + 1, left - m as u64 * d, cur, out);
                cur.pop();
                m += 1;
            }
        }
    }
    rec(&orbits, 0, n, &mut Vec::new(), &mut out);
    out.sort();
    out
}

fn cartesian<T: Clone>(options: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut acc: Vec<Vec<T>> = vec![Vec::new()];
    for opts in options {
        let mut next = Vec::with_capacity(acc.len() * opts.len());
        for prefix in &acc {
            for o in opts {
                let mut v = prefix.clone();
                v.push(o.clone());
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

pub fn ibr_labels_for(s: &SemisimpleLabel) -> Vec<IBrLabel> {
    let options: Vec<Vec<Partition>> = s.mult.iter().map(|(_, m)| partitions_of(*m)).collect();
    cartesian(&options).into_iter().map(|mu| IBrLabel { s: s.clone(), mu }).collect()
}

/// All `e`-tuples of towers whose weights sum to `w`.
pub fn tower_tuples(w: u64, e: u64, ell: u32) -> Vec<Vec<CoreTower>> {
    if e == 0 {
        return if w == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=w {
        let heads = towers_of_weight(first, ell);
        let heads = if first == 0 { vec![CoreTower::empty(ell)] } else { heads };
        for rest in tower_tuples(w - first, e - 1, ell) {
            for h in &heads {
                let mut v = vec![h.clone()];
                v.extend(rest.iter().cloned());
                out.push(v);
            }
        }
    }
    out
}

pub fn alp_labels_for(ctx: &GlobalContext, s: &SemisimpleLabel) -> Vec<AlpLabel> {
    let ell = ctx.ell as u32;
    let options: Vec<Vec<(Partition, Vec<CoreTower>)>> = s
        .mult
        .iter()
        .map(|(o, m)| {
            let eg = o.e_gamma;
            let mut opts = Vec::new();
            for c in 0..=*m {
                if (*m - c) as u64 % eg != 0 {
                    continue;
                }
                let w = (*m - c) as u64 / eg;
                for lam in cores_of(c, eg as u32) {
                    for k in tower_tuples(w, eg, ell) {
                        opts.push((lam.clone(), k));
                    }
                }
            }
            opts
        })
        .collect();
    cartesian(&options)
        .into_iter()
        .map(|v| {
            let (lambda, k) = v.into_iter().unzip();
            AlpLabel { s: s.clone(), lambda, k }
        })
        .collect()
}

pub fn enumerate_iibr(ctx: &GlobalContext, n: u64) -> Vec<IBrLabel> {
    let ss = enumerate_semisimple(ctx, n, true);
    par::map(&ss, ibr_labels_for).into_iter().flatten().collect()
}

pub fn enumerate_ialp(ctx: &GlobalContext, n: u64) -> Vec<AlpLabel> {
    let ss = enumerate_semisimple(ctx, n, true);
    par::map(&ss, |s| alp_labels_for(ctx, s)).into_iter().flatten().collect()
}

pub fn omega(ctx: &GlobalContext, x: &IBrLabel) -> AlpLabel {
    let ell = ctx.ell as u32;
    let mut lambda = Vec::with_capacity(x.mu.len());
    let mut k = Vec::with_capacity(x.mu.len());
    for ((o, _), mu) in x.s.mult.iter().zip(&x.mu) {
        let (core, quot) = mu.core_quotient(o.e_gamma as u32);
        lambda.push(core);
        k.push(quot.iter().map(|q| pi_m(q, ell)).collect());
    }
    AlpLabel { s: x.s.clone(), lambda, k }
}

pub fn omega_inv(_ctx: &GlobalContext, y: &AlpLabel) -> IBrLabel {
    let mu = y
        .lambda
        .iter()
        .zip(&y.k)
        .map(|(lam, ts)| {
            let quot: Vec<Partition> = ts.iter().map(pi_m_inv).collect();
            Partition::from_core_quotient(lam, &quot)
        })
        .collect();
    IBrLabel { s: y.s.clone(), mu }
}

/// A label whose supporting orbits can be moved around while the attached
/// data is carried along.
pub trait OrbitLabel: Clone + Ord + std::hash::Hash {
    fn semisimple(&self) -> &SemisimpleLabel;
    fn relabel(&self, f: &dyn Fn(&RootOrbit) -> RootOrbit) -> Self;
}

fn relabel_generic<T: Clone>(s: &SemisimpleLabel, data: &[T], f: &dyn Fn(&RootOrbit) -> RootOrbit) -> (SemisimpleLabel, Vec<T>) {
    let mut pairs: Vec<((RootOrbit, u32), T)> = s
        .mult
        .iter()
        .zip(data)
        .map(|((o, m), v)| ((f(o), *m), v.clone()))
        .collect();
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    let (mult, data) = pairs.into_iter().unzip();
    (SemisimpleLabel { mult }, data)
}

impl OrbitLabel for IBrLabel {
    fn semisimple(&self) -> &SemisimpleLabel {
        &self.s
    }
    fn relabel(&self, f: &dyn Fn(&RootOrbit) -> RootOrbit) -> Self {
        let (s, mu) = relabel_generic(&self.s, &self.mu, f);
        IBrLabel { s, mu }
    }
}

impl OrbitLabel for AlpLabel {
    fn semisimple(&self) -> &SemisimpleLabel {
        &self.s
    }
    fn relabel(&self, f: &dyn Fn(&RootOrbit) -> RootOrbit) -> Self {
        let data: Vec<(Partition, Vec<CoreTower>)> =
            self.lambda.iter().cloned().zip(self.k.iter().cloned()).collect();
        let (s, data) = relabel_generic(&self.s, &data, f);
        let (lambda, k) = data.into_iter().unzip();
        AlpLabel { s, lambda, k }
    }
}

pub fn zeta_act_label<L: OrbitLabel>(ctx: &GlobalContext, zeta: Root, x: &L) -> Result<L> {
    if ctx.q_minus_eta() % zeta.den != 0 {
        return Err(crate::Error::Precondition(format!("order {} does not divide q - η", zeta.den)));
    }
    Ok(x.relabel(&|o| zeta_act_orbit(ctx, zeta, o).expect("checked order")))
}

pub fn aut_act_label<L: OrbitLabel>(ctx: &GlobalContext, kind: AutKind, x: &L) -> L {
    x.relabel(&|o| aut_act(ctx, kind, o))
}

/// Order of `O_ℓ'(Z_{q-η})`.
pub fn ell_prime_center_order(ctx: &GlobalContext) -> u64 {
    l_prime_part(ctx.ell, ctx.q_minus_eta())
}

/// The `O_ℓ'(Z_{q-η})`-orbit of a label, listed as `ζ_0^k · x` for `k < |O_ℓ'|`.
pub fn center_orbit<L: OrbitLabel>(ctx: &GlobalContext, x: &L) -> Vec<L> {
    let np = ell_prime_center_order(ctx);
    (0..np)
        .map(|k| zeta_act_label(ctx, Root::new(k as i128, np), x).expect("order divides q - η"))
        .collect()
}

/// Stabilizer order in `O_ℓ'(Z_{q-η})`.
pub fn kappa_ell_prime<L: OrbitLabel>(ctx: &GlobalContext, x: &L) -> u64 {
    center_orbit(ctx, x).iter().filter(|y| *y == x).count() as u64
}

fn ell_part_capped(ctx: &GlobalContext, exp: Option<u32>) -> u64 {
    let full = val(ctx.ell, ctx.q_minus_eta());
    ctx.ell.pow(exp.map_or(full, |e| e.min(full)))
}

/// `Δ(μ')` over all orbits: the gcd of all column lengths of all partitions.
pub fn delta_transpose(x: &IBrLabel) -> u64 {
    x.mu.iter().fold(0, |g, mu| gcd(g, mu.transpose().delta()))
}

pub fn kappa_ibr(ctx: &GlobalContext, x: &IBrLabel) -> (u64, u64) {
    let d = delta_transpose(x);
    let exp = (d != 0).then(|| val(ctx.ell, d));
    (kappa_ell_prime(ctx, x), ell_part_capped(ctx, exp))
}

pub fn kappa_alp(ctx: &GlobalContext, x: &AlpLabel) -> (u64, u64) {
    (kappa_ell_prime(ctx, x), ell_part_capped(ctx, x.deg()))
}

/// Sum over `O_ℓ'`-orbit representatives of `κ_ℓ' · κ_ℓ`, with the κ pair
/// supplied by the caller.
pub fn restriction_count<L: OrbitLabel + Send + Sync>(
    ctx: &GlobalContext,
    labels: &[L],
    kappa: impl Fn(&L) -> (u64, u64),
) -> u64 {
    let mut seen: HashSet<L> = HashSet::new();
    let mut total = 0;
    for x in labels {
        if seen.contains(x) {
            continue;
        }
        for y in center_orbit(ctx, x) {
            seen.insert(y);
        }
        let (a, b) = kappa(x);
        total += a * b;
    }
    total
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GroupKind {
    Gl,
    Sl,
}

/// `(ibr_count, alp_count)` for `GL_n(ηq)` or its determinant-one subgroup.
pub fn count(ctx: &GlobalContext, n: u64, group: GroupKind) -> (u64, u64) {
    let ibr = enumerate_iibr(ctx, n);
    let alp = enumerate_ialp(ctx, n);
    match group {
        GroupKind::Gl => (ibr.len() as u64, alp.len() as u64),
        GroupKind::Sl => (
            restriction_count(ctx, &ibr, |x| kappa_ibr(ctx, x)),
            restriction_count(ctx, &alp, |x| kappa_alp(ctx, x)),
        ),
    }
}

pub fn nu_valuation(ctx: &GlobalContext, k: u64) -> u32 {
    ctx.nu(k)
}

/// `ν_ℓ(|GL_n(ηq)|)`.
pub fn group_valuation(ctx: &GlobalContext, n: u64) -> u32 {
    (1..=n).map(|k| ctx.nu(k)).sum()
}

/// Hook-sum defect of the character labelled by `x`.
pub fn defect_valuation(ctx: &GlobalContext, x: &IBrLabel) -> u32 {
    x.s.mult
        .iter()
        .zip(&x.mu)
        .map(|((o, _), mu)| mu.hook_lengths().iter().map(|&h| ctx.nu(o.d * h as u64)).sum::<u32>())
        .sum()
}

/// Per orbit: whether `λ_Γ` has no `e_Γ`-hook.
pub fn defect_zero_ordinary(s: &SemisimpleLabel, lambda: &[Partition]) -> Vec<bool> {
    s.mult.iter().zip(lambda).map(|((o, _), l)| l.is_core(o.e_gamma as u32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: u64, eta: i8, ell: u64) -> GlobalContext {
        GlobalContext::new(q, eta, ell).unwrap()
    }

    #[test]
    fn semisimple_counts() {
        let c = ctx(3, 1, 2);
        assert_eq!(enumerate_semisimple(&c, 2, false).len(), 6);
        assert_eq!(enumerate_semisimple(&c, 2, true).len(), 1);
        assert_eq!(enumerate_semisimple(&ctx(5, 1, 3), 1, false).len(), 4);
    }

    #[test]
    fn gl2_3() {
        let c = ctx(3, 1, 2);
        assert_eq!(count(&c, 2, GroupKind::Gl), (2, 2));
        assert_eq!(count(&c, 2, GroupKind::Sl), (3, 3));
        assert_eq!(count(&ctx(2, -1, 3), 2, GroupKind::Gl), (2, 2));
        for x in enumerate_iibr(&c, 2) {
            let y = omega(&c, &x);
            assert_eq!(kappa_alp(&c, &y), kappa_ibr(&c, &x));
            assert_eq!(omega_inv(&c, &y), x);
            assert_eq!(defect_valuation(&c, &x), 4);
        }
    }

    #[test]
    fn valuations() {
        let c = ctx(3, 1, 2);
        assert_eq!((nu_valuation(&c, 1), nu_valuation(&c, 2)), (1, 3));
        assert_eq!(nu_valuation(&ctx(4, 1, 3), 1), 1);
        assert_eq!(nu_valuation(&ctx(3, 1, 5), 1), 0);
        let x = IBrLabel {
            s: enumerate_semisimple(&c, 3, true)
                .into_iter()
                .find(|s| s.mult.len() == 1 && s.mult[0].0.d == 1 && s.mult[0].0.rep == Root::ONE)
                .unwrap(),
            mu: vec![Partition::new(vec![2, 1])],
        };
        assert_eq!(defect_valuation(&c, &x), 3);
    }

    #[test]
    fn defect_zero_flags() {
        let c = ctx(3, 1, 5);
        let s = &enumerate_semisimple(&c, 1, true)[0];
        assert_eq!(defect_zero_ordinary(s, &[Partition::empty()]), vec![true]);
        let c1 = ctx(3, 1, 2);
        let s1 = &enumerate_semisimple(&c1, 1, true)[0];
        assert_eq!(defect_zero_ordinary(s1, &[Partition::new(vec![1])]), vec![false]);
    }
}
