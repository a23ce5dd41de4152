//! Explicit-list matrix groups: every element is stored, subgroups are sets
//! of element indices, and every question is answered by direct search.

use crate::error::{Error, Result};
use crate::gf::{Fe, FieldSpec};
use crate::matrix::Mat;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::sync::Arc;

pub const DEFAULT_CAP: usize = 2_000_000;
/// Bound on the number of raw matrices scanned when a classical group is
/// enumerated by filtering.
pub const SCAN_LIMIT: u64 = 50_000_000;

/// The closure cap, honoring the `WEIGHTLAB_CAP` environment variable.
pub fn configured_cap() -> usize {
    std::env::var("WEIGHTLAB_CAP").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_CAP)
}

pub struct FiniteMatrixGroup {
    pub field: Arc<FieldSpec>,
    pub n: usize,
    pub elems: Vec<Mat>,
    index: HashMap<Mat, u32>,
    inverse: Vec<u32>,
    pub gens: Vec<u32>,
    pub identity: u32,
}

/// A subgroup given by sorted element indices of its parent group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    pub elems: Vec<u32>,
    pub gens: Vec<u32>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elems.binary_search(&x).is_ok()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjClassTable {
    pub reps: Vec<u32>,
    pub sizes: Vec<usize>,
    pub orders: Vec<u64>,
}

impl FiniteMatrixGroup {
    fn from_elements(field: Arc<FieldSpec>, n: usize, mut elems: Vec<Mat>, gens: Option<Vec<Mat>>) -> Self {
        elems.sort();
        let index: HashMap<Mat, u32> = elems.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();
        let inverse = elems
            .iter()
            .map(|m| index[&m.inv(&field).expect("group elements are invertible")])
            .collect();
        let identity = index[&Mat::identity(n)];
        let mut g = FiniteMatrixGroup { field, n, elems, index, inverse, gens: Vec::new(), identity };
        g.gens = match gens {
            Some(gs) => gs.iter().map(|m| g.index[m]).collect(),
            None => g.extract_generators(),
        };
        g
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn idx(&self, m: &Mat) -> Option<u32> {
        self.index.get(m).copied()
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let m = self.elems[a as usize].mul(&self.field, &self.elems[b as usize]);
        self.index[&m]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    /// `g^{-1} x g`.
    pub fn conj(&self, x: u32, g: u32) -> u32 {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn elem_order(&self, a: u32) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn det(&self, a: u32) -> Fe {
        self.elems[a as usize].det(&self.field)
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { elems: (0..self.order() as u32).collect(), gens: self.gens.clone() }
    }

    /// Subgroup generated by the given elements.
    pub fn generate(&self, gens: &[u32]) -> Subgroup {
        let mut seen = HashSet::new();
        seen.insert(self.identity);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        let mut elems: Vec<u32> = seen.into_iter().collect();
        elems.sort_unstable();
        Subgroup { elems, gens: gens.to_vec() }
    }

    fn extract_generators(&self) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut h = Subgroup { elems: vec![self.identity], gens: Vec::new() };
        let mut candidates: Vec<u32> = (0..self.order() as u32).collect();
        candidates.sort_by_key(|&x| std::cmp::Reverse(self.elem_order(x)));
        for x in candidates {
            if h.order() == self.order() {
                break;
            }
            if !h.contains(x) {
                gens.push(x);
                h = self.generate(&gens);
            }
        }
        gens
    }

    pub fn conjugacy_classes(&self) -> ConjClassTable {
        let mut class_of = vec![u32::MAX; self.order()];
        let mut reps = Vec::new();
        let mut sizes = Vec::new();
        for x in 0..self.order() as u32 {
            if class_of[x as usize] != u32::MAX {
                continue;
            }
            let cid = reps.len() as u32;
            class_of[x as usize] = cid;
            let mut queue = VecDeque::from([x]);
            let mut size = 1;
            while let Some(y) = queue.pop_front() {
                for &g in &self.gens {
                    let z = self.conj(y, g);
                    if class_of[z as usize] == u32::MAX {
                        class_of[z as usize] = cid;
                        size += 1;
                        queue.push_back(z);
                    }
                }
            }
            reps.push(x);
            sizes.push(size);
        }
        let orders = reps.iter().map(|&r| self.elem_order(r)).collect();
        ConjClassTable { reps, sizes, orders }
    }

    pub fn ell_regular_class_count(&self, ell: u64) -> usize {
        self.conjugacy_classes().orders.iter().filter(|&&o| o % ell != 0).count()
    }

    pub fn is_ell_power(n: usize, ell: u64) -> bool {
        let mut n = n as u64;
        while n % ell == 0 {
            n /= ell;
        }
        n == 1
    }

    pub fn normalizer(&self, within: &Subgroup, h: &Subgroup) -> Subgroup {
        let gens = if h.gens.is_empty() { &h.elems } else { &h.gens };
        let elems: Vec<u32> = within
            .elems
            .iter()
            .copied()
            .filter(|&g| gens.iter().all(|&x| h.contains(self.conj(x, g))))
            .collect();
        self.with_generators(elems)
    }

    pub fn centralizer(&self, within: &Subgroup, h: &Subgroup) -> Subgroup {
        let gens = if h.gens.is_empty() { &h.elems } else { &h.gens };
        let elems: Vec<u32> = within
            .elems
            .iter()
            .copied()
            .filter(|&g| gens.iter().all(|&x| self.mul(x, g) == self.mul(g, x)))
            .collect();
        self.with_generators(elems)
    }

    fn with_generators(&self, elems: Vec<u32>) -> Subgroup {
        let mut gens = Vec::new();
        let mut cur: HashSet<u32> = HashSet::from([self.identity]);
        for &x in &elems {
            if cur.len() == elems.len() {
                break;
            }
            if !cur.contains(&x) {
                gens.push(x);
                cur = self.generate(&gens).elems.into_iter().collect();
            }
        }
        Subgroup { elems, gens }
    }

    /// A Sylow ℓ-subgroup of `h`, grown from the trivial group one normalizing
    /// ℓ-element at a time.
    pub fn sylow(&self, h: &Subgroup, ell: u64) -> Subgroup {
        let target = {
            let mut n = h.order() as u64;
            let mut t = 1;
            while n % ell == 0 {
                n /= ell;
                t *= ell;
            }
            t as usize
        };
        let ell_elems: Vec<u32> = h
            .elems
            .iter()
            .copied()
            .filter(|&x| Self::is_ell_power(self.elem_order(x) as usize, ell))
            .collect();
        let mut p = Subgroup { elems: vec![self.identity], gens: Vec::new() };
        while p.order() < target {
            let mut grown = false;
            for &x in &ell_elems {
                if p.contains(x) {
                    continue;
                }
                let normalizes = p.gens.iter().all(|&g| p.contains(self.conj(g, x)));
                if !normalizes {
                    continue;
                }
                let mut gens = p.gens.clone();
                gens.push(x);
                let k = self.generate(&gens);
                if Self::is_ell_power(k.order(), ell) {
                    p = k;
                    grown = true;
                    break;
                }
            }
            assert!(grown, "Sylow growth stalled");
        }
        p
    }

    /// The largest normal ℓ-subgroup of `h`: the intersection of the
    /// `h`-conjugates of one Sylow ℓ-subgroup.
    pub fn o_ell(&self, h: &Subgroup, ell: u64) -> Subgroup {
        let s = self.sylow(h, ell);
        let mut inter: HashSet<u32> = s.elems.iter().copied().collect();
        for &g in &h.elems {
            if inter.len() == 1 {
                break;
            }
            let conj: HashSet<u32> = s.elems.iter().map(|&x| self.conj(x, g)).collect();
            inter.retain(|x| conj.contains(x));
        }
        let mut elems: Vec<u32> = inter.into_iter().collect();
        elems.sort_unstable();
        self.with_generators(elems)
    }

    pub fn det_one_subgroup(&self, h: &Subgroup) -> Subgroup {
        let one = Fe::ONE;
        let elems = h.elems.iter().copied().filter(|&x| self.det(x) == one).collect();
        self.with_generators(elems)
    }

    /// `g^{-1} H g` as a sorted index list.
    pub fn conjugate_set(&self, h: &Subgroup, g: u32) -> Vec<u32> {
        let mut v: Vec<u32> = h.elems.iter().map(|&x| self.conj(x, g)).collect();
        v.sort_unstable();
        v
    }

    /// Smallest conjugate under `within` (a canonical class label).
    pub fn canonical_conjugate(&self, within: &Subgroup, h: &Subgroup) -> Vec<u32> {
        within.elems.iter().map(|&g| self.conjugate_set(h, g)).min().expect("nonempty")
    }

    /// Every subgroup of an ℓ-group `p`, found by climbing chains of normal
    /// subgroups of index ℓ.
    pub fn subgroups_of_ell_group(&self, p: &Subgroup, ell: u64) -> Vec<Subgroup> {
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        let triv = Subgroup { elems: vec![self.identity], gens: Vec::new() };
        seen.insert(triv.elems.clone());
        let mut out = vec![triv.clone()];
        let mut frontier = vec![triv];
        while let Some(h) = frontier.pop() {
            for &x in &p.elems {
                if h.contains(x) {
                    continue;
                }
                let xl = (0..ell).fold(self.identity, |acc, _| self.mul(acc, x));
                if !h.contains(xl) {
                    continue;
                }
                if !h.gens.iter().all(|&g| h.contains(self.conj(g, x))) {
                    continue;
                }
                let mut gens = h.gens.clone();
                gens.push(x);
                let k = self.generate(&gens);
                if seen.insert(k.elems.clone()) {
                    out.push(k.clone());
                    frontier.push(k);
                }
            }
        }
        out.sort_by(|a, b| (a.order(), &a.elems).cmp(&(b.order(), &b.elems)));
        out
    }

    /// Class representatives of radical ℓ-subgroups of `h` under `h`-conjugacy.
    pub fn radical_subgroups(&self, h: &Subgroup, ell: u64, max_sylow: usize) -> Result<Vec<Subgroup>> {
        let p = self.sylow(h, ell);
        if p.order() > max_sylow {
            return Err(Error::CapExceeded(max_sylow));
        }
        let mut classes: BTreeMap<Vec<u32>, Subgroup> = BTreeMap::new();
        for r in self.subgroups_of_ell_group(&p, ell) {
            let n = self.normalizer(h, &r);
            if self.o_ell(&n, ell).elems != r.elems {
                continue;
            }
            let key = self.canonical_conjugate(h, &r);
            classes.entry(key).or_insert(r);
        }
        let mut out: Vec<Subgroup> = classes.into_values().collect();
        out.sort_by(|a, b| (a.order(), &a.elems).cmp(&(b.order(), &b.elems)));
        Ok(out)
    }

    /// Multiset of `(element order, characteristic polynomial)` over a
    /// subgroup; invariant under conjugation in the full matrix group.
    pub fn fingerprint(&self, h: &Subgroup) -> Vec<(u64, Vec<Fe>)> {
        let mut v: Vec<(u64, Vec<Fe>)> = h
            .elems
            .iter()
            .map(|&x| (self.elem_order(x), char_poly(&self.field, &self.elems[x as usize])))
            .collect();
        v.sort();
        v
    }
}

/// Coefficients of `det(tI - A)`, leading coefficient first, by the
/// division-free Samuelson-Berkowitz recursion over leading principal blocks.
pub fn char_poly(f: &FieldSpec, a: &Mat) -> Vec<Fe> {
    let n = a.n;
    let mut poly = vec![Fe::ONE];
    for k in 0..n {
        // Leading (k+1)x(k+1) block: A_k = [[M, c],[r, d]] with M the k x k block.
        let d = a.get(k, k);
        let r: Vec<Fe> = (0..k).map(|j| a.get(k, j)).collect();
        let c: Vec<Fe> = (0..k).map(|i| a.get(i, k)).collect();
        // Toeplitz column: 1, -d, -r c, -r M c, -r M^2 c, ...
        let mut col = vec![Fe::ONE, f.neg(d)];
        let mut v = c.clone();
        for _ in 0..k {
            let rv = r.iter().zip(&v).fold(Fe::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)));
            col.push(f.neg(rv));
            let mut nv = vec![Fe::ZERO; k];
            for i in 0..k {
                for j in 0..k {
                    let m = a.get(i, j);
                    if !m.is_zero() && !v[j].is_zero() {
                        nv[i] = f.add(nv[i], f.mul(m, v[j]));
                    }
                }
            }
            v = nv;
        }
        let mut next = vec![Fe::ZERO; k + 2];
        for i in 0..k + 2 {
            for j in 0..=i.min(k) {
                if i - j < col.len() {
                    next[i] = f.add(next[i], f.mul(col[i - j], poly[j]));
                }
            }
        }
        poly = next;
    }
    poly
}

pub fn closure(field: Arc<FieldSpec>, gens: &[Mat], cap: usize) -> Result<FiniteMatrixGroup> {
    let n = gens.first().map_or(1, |g| g.n);
    let id = Mat::identity(n);
    let mut seen: HashSet<Mat> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(&field, g);
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return Err(Error::CapExceeded(cap));
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    let gens = if gens.is_empty() { None } else { Some(gens.to_vec()) };
    Ok(FiniteMatrixGroup::from_elements(field, n, seen.into_iter().collect(), gens))
}

fn scan_matrices(
    n: usize,
    entries: &[Fe],
    keep: impl Fn(&Mat) -> bool + Sync,
    cap: usize,
) -> Result<Vec<Mat>> {
    let k = entries.len() as u64;
    let total = (k as u128).pow((n * n) as u32);
    if total > SCAN_LIMIT as u128 {
        return Err(Error::CapExceeded(cap));
    }
    let total = total as u64;
    let rows: Vec<u64> = (0..k.pow(n as u32)).collect();
    let make = |code: u64| -> Mat {
        let mut m = Mat::zero(n);
        let mut c = code;
        for i in 0..n * n {
            m.a[i] = entries[(c % k) as usize];
            c /= k;
        }
        m
    };
    let per_first_row = total / rows.len() as u64;
    let chunks = crate::par::map(&rows, |&r| {
        let mut out = Vec::new();
        for rest in 0..per_first_row {
            let m = make(r + rows.len() as u64 * rest);
            if keep(&m) {
                out.push(m);
            }
        }
        out
    });
    let all: Vec<Mat> = chunks.into_iter().flatten().collect();
    if all.len() > cap {
        return Err(Error::CapExceeded(cap));
    }
    Ok(all)
}

/// `GL_n(p^f)` realized inside the given (possibly larger) field.
pub fn gl_group_in(field: Arc<FieldSpec>, n: usize, f: u32, det_one: bool) -> Result<FiniteMatrixGroup> {
    let entries = field.subfield(f);
    let fl = field.clone();
    let elems = scan_matrices(
        n,
        &entries,
        move |m| {
            let d = m.det(&fl);
            if det_one {
                d == Fe::ONE
            } else {
                !d.is_zero()
            }
        },
        configured_cap(),
    )?;
    Ok(FiniteMatrixGroup::from_elements(field, n, elems, None))
}

/// `GU_n(q)` for `q = p^f`, inside a field containing GF(q^2).
pub fn gu_group_in(field: Arc<FieldSpec>, n: usize, f: u32, det_one: bool) -> Result<FiniteMatrixGroup> {
    let entries = field.subfield(2 * f);
    let fl = field.clone();
    let elems = scan_matrices(
        n,
        &entries,
        move |m| {
            let fm = m.map(|x| fl.frobenius_power(x, f));
            if !fm.transpose().mul(&fl, m).is_identity() {
                return false;
            }
            !det_one || m.det(&fl) == Fe::ONE
        },
        configured_cap(),
    )?;
    Ok(FiniteMatrixGroup::from_elements(field, n, elems, None))
}

fn split_q(q: u64) -> Result<(u64, u32)> {
    crate::arith::prime_power(q).ok_or(Error::NotPrimePower(q))
}

pub fn gl_group(n: usize, q: u64) -> Result<FiniteMatrixGroup> {
    let (p, f) = split_q(q)?;
    gl_group_in(Arc::new(FieldSpec::new(p, f)?), n, f, false)
}

pub fn sl_group(n: usize, q: u64) -> Result<FiniteMatrixGroup> {
    let (p, f) = split_q(q)?;
    gl_group_in(Arc::new(FieldSpec::new(p, f)?), n, f, true)
}

pub fn gu_group(n: usize, q: u64) -> Result<FiniteMatrixGroup> {
    let (p, f) = split_q(q)?;
    gu_group_in(Arc::new(FieldSpec::new(p, 2 * f)?), n, f, false)
}

pub fn su_group(n: usize, q: u64) -> Result<FiniteMatrixGroup> {
    let (p, f) = split_q(q)?;
    gu_group_in(Arc::new(FieldSpec::new(p, 2 * f)?), n, f, true)
}
