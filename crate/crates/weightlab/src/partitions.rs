//! Partitions, cores and quotients on the abacus, ℓ-core towers, and the
//! degree-preserving bijection between partitions and core towers.
//!
//! Quotient convention: the β-set of `μ` has a length `L` that is a multiple
//! of `d`, so bead `β` lies on runner `β mod d`; component `r` of the
//! quotient (0-based) is read off runner `r`.
//!
//! Tower convention: `μ^0_1 = μ`; `λ^δ_j` is the ℓ-core of `μ^δ_j`, and the
//! quotient component `i - 1` of `μ^δ_j` becomes `μ^{δ+1}_{(j-1)ℓ+i}`.

use crate::arith::{ceil_log, gcd, val};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct Partition {
    pub parts: Vec<u32>,
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.parts)
    }
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Partition {
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Partition {
        Partition { parts: Vec::new() }
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&x| x as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn transpose(&self) -> Partition {
        let w = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=w).map(|c| self.parts.iter().filter(|&&x| x >= c).count() as u32).collect();
        Partition { parts }
    }

    /// gcd of the parts (0 for the empty partition).
    pub fn delta(&self) -> u64 {
        self.parts.iter().fold(0, |g, &x| gcd(g, x as u64))
    }

    pub fn hook_lengths(&self) -> Vec<u32> {
        let t = self.transpose();
        let mut h = Vec::with_capacity(self.size() as usize);
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row as usize {
                let arm = row - j as u32 - 1;
                let leg = t.parts[j] - i as u32 - 1;
                h.push(arm + leg + 1);
            }
        }
        h.sort_unstable_by(|a, b| b.cmp(a));
        h
    }

    pub fn is_core(&self, d: u32) -> bool {
        self.hook_lengths().iter().all(|&h| h % d != 0)
    }

    /// β-set of length `len` (`len >= self.len()`), in decreasing order.
    pub fn beta_set(&self, len: usize) -> Vec<u64> {
        assert!(len >= self.len());
        (0..len)
            .map(|i| self.parts.get(i).copied().unwrap_or(0) as u64 + (len - 1 - i) as u64)
            .collect()
    }

    pub fn from_beta(beta: &[u64]) -> Partition {
        let mut b = beta.to_vec();
        b.sort_unstable_by(|x, y| y.cmp(x));
        let len = b.len();
        Partition::new(b.iter().enumerate().map(|(i, &x)| (x - (len - 1 - i) as u64) as u32).collect())
    }

    /// The `d`-core and `d`-quotient together.
    pub fn core_quotient(&self, d: u32) -> (Partition, Vec<Partition>) {
        assert!(d >= 1);
        let d64 = d as u64;
        let len = self.len().div_ceil(d as usize).max(1) * d as usize;
        let beta = self.beta_set(len);
        let mut runners: Vec<Vec<u64>> = vec![Vec::new(); d as usize];
        for &b in &beta {
            runners[(b % d64) as usize].push(b / d64);
        }
        let quotient = runners.iter().map(|r| Partition::from_beta(r)).collect();
        let mut core_beta = Vec::with_capacity(len);
        for (r, beads) in runners.iter().enumerate() {
            for k in 0..beads.len() as u64 {
                core_beta.push(k * d64 + r as u64);
            }
        }
        (Partition::from_beta(&core_beta), quotient)
    }

    pub fn d_core(&self, d: u32) -> Partition {
        self.core_quotient(d).0
    }

    pub fn d_quotient(&self, d: u32) -> Vec<Partition> {
        self.core_quotient(d).1
    }

    /// Inverse of [`Partition::core_quotient`].
    pub fn from_core_quotient(core: &Partition, quotient: &[Partition]) -> Partition {
        let d = quotient.len();
        let d64 = d as u64;
        let maxq = quotient.iter().map(|p| p.len()).max().unwrap_or(0);
        let len = d * (core.len() + maxq + 1);
        let cb = core.beta_set(len);
        let mut counts = vec![0usize; d];
        for &b in &cb {
            counts[(b % d64) as usize] += 1;
        }
        let mut beta = Vec::with_capacity(len);
        for (r, q) in quotient.iter().enumerate() {
            for k in q.beta_set(counts[r]) {
                beta.push(k * d64 + r as u64);
            }
        }
        Partition::from_beta(&beta)
    }
}

/// All partitions of `n` in decreasing lexicographic order.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for x in (1..=n.min(max)).rev() {
            cur.push(x);
            rec(n - x, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All `d`-cores of size `n`.
pub fn cores_of(n: u32, d: u32) -> Vec<Partition> {
    partitions_of(n).into_iter().filter(|p| p.is_core(d)).collect()
}

pub fn hook_lengths(mu: &Partition) -> Vec<u32> {
    mu.hook_lengths()
}

pub fn d_core(mu: &Partition, d: u32) -> Partition {
    mu.d_core(d)
}

pub fn d_quotient(mu: &Partition, d: u32) -> Vec<Partition> {
    mu.d_quotient(d)
}

/// Stratum of the slot `(δ, j)`: the `γ` with `ℓ^{δ-γ-1} < j ≤ ℓ^{δ-γ}`.
pub fn slot_stratum(ell: u32, delta: u32, j: u64) -> u32 {
    delta - ceil_log(ell as u64, j)
}

/// A finitely supported assignment `(δ, j) ↦ ℓ-core`. Only nonempty entries are stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CoreTower {
    pub ell: u32,
    #[serde(serialize_with = "entries_as_list")]
    pub entries: BTreeMap<(u32, u64), Partition>,
}

fn entries_as_list<S: serde::Serializer>(entries: &BTreeMap<(u32, u64), Partition>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(entries.iter().map(|(&(delta, j), p)| (delta, j, &p.parts)))
}

impl fmt::Debug for CoreTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tower{:?}", self.entries)
    }
}

impl CoreTower {
    pub fn empty(ell: u32) -> CoreTower {
        CoreTower { ell, entries: BTreeMap::new() }
    }

    pub fn weight(&self) -> u64 {
        self.entries.iter().map(|(&(d, _), p)| (self.ell as u64).pow(d) * p.size()).sum()
    }

    /// `None` stands for the empty tower's degree ∞.
    pub fn deg(&self) -> Option<u32> {
        self.entries.keys().map(|&(d, j)| slot_stratum(self.ell, d, j)).min()
    }

    /// Moves every entry from `(δ, j)` to `(δ + γ, j)`.
    pub fn shift(&self, gamma: u32) -> CoreTower {
        CoreTower {
            ell: self.ell,
            entries: self.entries.iter().map(|(&(d, j), p)| ((d + gamma, j), p.clone())).collect(),
        }
    }

    fn unshift(&self, gamma: u32) -> CoreTower {
        CoreTower {
            ell: self.ell,
            entries: self.entries.iter().map(|(&(d, j), p)| ((d - gamma, j), p.clone())).collect(),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.entries.iter().all(|(&(d, j), p)| {
            j >= 1 && j <= (self.ell as u64).pow(d) && !p.is_empty() && p.is_core(self.ell)
        })
    }
}

pub fn core_tower(mu: &Partition, ell: u32) -> CoreTower {
    fn rec(mu: &Partition, ell: u32, delta: u32, j: u64, out: &mut BTreeMap<(u32, u64), Partition>) {
        if mu.is_empty() {
            return;
        }
        let (core, quot) = mu.core_quotient(ell);
        if !core.is_empty() {
            out.insert((delta, j), core);
        }
        for (i, q) in quot.iter().enumerate() {
            rec(q, ell, delta + 1, (j - 1) * ell as u64 + i as u64 + 1, out);
        }
    }
    let mut entries = BTreeMap::new();
    rec(mu, ell, 0, 1, &mut entries);
    CoreTower { ell, entries }
}

pub fn tower_to_partition(f: &CoreTower) -> Partition {
    let Some(max_delta) = f.entries.keys().map(|&(d, _)| d).max() else {
        return Partition::empty();
    };
    fn rec(f: &CoreTower, delta: u32, j: u64, max_delta: u32) -> Partition {
        let core = f.entries.get(&(delta, j)).cloned().unwrap_or_default();
        if delta == max_delta {
            return core;
        }
        let l = f.ell as u64;
        let quot: Vec<Partition> = (1..=l).map(|i| rec(f, delta + 1, (j - 1) * l + i, max_delta)).collect();
        Partition::from_core_quotient(&core, &quot)
    }
    rec(f, 0, 1, max_delta)
}

/// All core towers of weight `m`.
pub fn towers_of_weight(m: u64, ell: u32) -> Vec<CoreTower> {
    let l = ell as u64;
    let mut slots = Vec::new();
    let mut delta = 0u32;
    while l.pow(delta) <= m.max(1) {
        for j in 1..=l.pow(delta) {
            slots.push((delta, j));
        }
        delta += 1;
    }
    let mut cores_by_size: Vec<Vec<Partition>> = Vec::new();
    for s in 0..=m as u32 {
        cores_by_size.push(cores_of(s, ell));
    }
    fn rec(
        idx: usize,
        left: u64,
        slots: &[(u32, u64)],
        l: u64,
        cores: &[Vec<Partition>],
        cur: &mut BTreeMap<(u32, u64), Partition>,
        out: &mut Vec<CoreTower>,
        ell: u32,
    ) {
        if left == 0 {
            out.push(CoreTower { ell, entries: cur.clone() });
            return;
        }
        if idx == slots.len() {
            return;
        }
        let (d, j) = slots[idx];
        let unit = l.pow(d);
        rec(idx + 1, left, slots, l, cores, cur, out, ell);
        let mut s = 1u64;
        while s * unit <= left {
            for c in &cores[s as usize] {
                cur.insert((d, j), c.clone());
                rec(idx + 1, left - s * unit, slots, l, cores, cur, out, ell);
                cur.remove(&(d, j));
            }
            s += 1;
        }
    }
    let mut out = Vec::new();
    rec(0, m, &slots, l, &cores_by_size, &mut BTreeMap::new(), &mut out, ell);
    out.sort();
    out
}

/// `ν_ℓ(Δ(μ'))`, the stratum of a nonempty partition.
pub fn partition_stratum(mu: &Partition, ell: u32) -> u32 {
    val(ell as u64, mu.transpose().delta())
}

pub fn strata_u(m: u32, ell: u32) -> BTreeMap<u32, Vec<Partition>> {
    let mut out: BTreeMap<u32, Vec<Partition>> = BTreeMap::new();
    for mu in partitions_of(m) {
        out.entry(partition_stratum(&mu, ell)).or_default().push(mu);
    }
    out
}

pub fn strata_d(m: u32, ell: u32) -> BTreeMap<u32, Vec<CoreTower>> {
    let mut out: BTreeMap<u32, Vec<CoreTower>> = BTreeMap::new();
    for t in towers_of_weight(m as u64, ell) {
        out.entry(t.deg().expect("nonempty")).or_default().push(t);
    }
    out
}

struct PiTable {
    parts: Vec<Partition>,
    towers: Vec<CoreTower>,
    part_rank: HashMap<Partition, usize>,
    tower_rank: HashMap<CoreTower, usize>,
}

fn pi_table(m: u32, ell: u32) -> Arc<PiTable> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<PiTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&(m, ell)) {
        return t.clone();
    }
    let parts: Vec<Partition> = partitions_of(m)
        .into_iter()
        .filter(|mu| partition_stratum(mu, ell) == 0)
        .collect();
    let towers: Vec<CoreTower> = towers_of_weight(m as u64, ell)
        .into_iter()
        .filter(|t| t.deg() == Some(0))
        .collect();
    assert_eq!(parts.len(), towers.len(), "stratum sizes differ for m={m}, ell={ell}");
    let part_rank = parts.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    let tower_rank = towers.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
    let t = Arc::new(PiTable { parts, towers, part_rank, tower_rank });
    cache.lock().unwrap().insert((m, ell), t.clone());
    t
}

/// The stratum-preserving bijection from partitions of `m` to towers of weight `m`.
pub fn pi_m(mu: &Partition, ell: u32) -> CoreTower {
    if mu.is_empty() {
        return CoreTower::empty(ell);
    }
    let gamma = partition_stratum(mu, ell);
    let s = ell.pow(gamma);
    let bar = Partition::new(mu.transpose().parts.iter().map(|&x| x / s).collect()).transpose();
    let table = pi_table(bar.size() as u32, ell);
    let rank = table.part_rank[&bar];
    table.towers[rank].shift(gamma)
}

pub fn pi_m_inv(f: &CoreTower) -> Partition {
    let Some(gamma) = f.deg() else {
        return Partition::empty();
    };
    let base = f.unshift(gamma);
    let table = pi_table(base.weight() as u32, f.ell);
    let rank = table.tower_rank[&base];
    let s = f.ell.pow(gamma);
    Partition::new(table.parts[rank].transpose().parts.iter().map(|&x| x * s).collect()).transpose()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec())
    }

    #[test]
    fn hooks_and_cores() {
        assert_eq!(p(&[2]).hook_lengths(), vec![2, 1]);
        assert_eq!(p(&[2, 1]).hook_lengths(), vec![3, 1, 1]);
        assert!(Partition::empty().hook_lengths().is_empty());
        assert_eq!(p(&[2]).d_core(2), Partition::empty());
        assert_eq!(p(&[2, 1, 1]).d_core(2), Partition::empty());
        assert_eq!(p(&[2, 1, 1]).d_quotient(2).iter().map(|q| q.size()).sum::<u64>(), 2);
        assert_eq!(p(&[3, 1]).d_core(1), Partition::empty());
    }

    #[test]
    fn towers() {
        let t = core_tower(&p(&[2]), 2);
        assert!(t.entries.get(&(0, 1)).is_none());
        assert_eq!(t.entries.len(), 1);
        assert_eq!(t.entries.keys().next().unwrap().0, 1);
        assert_eq!(tower_to_partition(&t), p(&[2]));
        assert_eq!(core_tower(&Partition::empty(), 3), CoreTower::empty(3));
    }

    #[test]
    fn strata_small() {
        let u = strata_u(4, 2);
        assert_eq!((u[&0].len(), u[&1].len(), u[&2].len()), (3, 1, 1));
        let d = strata_d(2, 2);
        assert_eq!((d[&0].len(), d[&1].len()), (1, 1));
        let t2 = pi_m(&p(&[2]), 2);
        let t11 = pi_m(&p(&[1, 1]), 2);
        assert_eq!(t2.deg(), Some(0));
        assert_eq!(t11.deg(), Some(1));
        assert_eq!(pi_m_inv(&t11), p(&[1, 1]));
    }
}
