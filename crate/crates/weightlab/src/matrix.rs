//! Dense square matrices over a [`FieldSpec`].

use crate::error::{Error, Result};
use crate::gf::{Fe, FieldSpec};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Mat {
    pub n: usize,
    pub a: Vec<Fe>,
}

impl Mat {
    pub fn zero(n: usize) -> Mat {
        Mat { n, a: vec![Fe::ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Mat {
        Mat::scalar(n, Fe::ONE)
    }

    pub fn scalar(n: usize, s: Fe) -> Mat {
        let mut m = Mat::zero(n);
        for i in 0..n {
            m.a[i * n + i] = s;
        }
        m
    }

    pub fn diag(d: &[Fe]) -> Mat {
        let n = d.len();
        let mut m = Mat::zero(n);
        for (i, &x) in d.iter().enumerate() {
            m.a[i * n + i] = x;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Fe>]) -> Mat {
        let n = rows.len();
        let mut m = Mat::zero(n);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n);
            m.a[i * n..(i + 1) * n].copy_from_slice(r);
        }
        m
    }

    /// Monomial matrix sending basis vector `e_j` to `s_j · e_{perm[j]}`.
    pub fn monomial(perm: &[usize], signs: &[Fe]) -> Mat {
        let n = perm.len();
        let mut m = Mat::zero(n);
        for j in 0..n {
            m.a[perm[j] * n + j] = signs[j];
        }
        m
    }

    pub fn permutation(perm: &[usize]) -> Mat {
        Mat::monomial(perm, &vec![Fe::ONE; perm.len()])
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: Fe) {
        self.a[i * self.n + j] = x;
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == if i == j { Fe::ONE } else { Fe::ZERO }))
    }

    /// Returns the scalar `s` when the matrix equals `s·I`.
    pub fn scalar_value(&self) -> Option<Fe> {
        let s = self.get(0, 0);
        (*self == Mat::scalar(self.n, s)).then_some(s)
    }

    pub fn mul(&self, f: &FieldSpec, b: &Mat) -> Mat {
        assert_eq!(self.n, b.n);
        let n = self.n;
        let mut c = Mat::zero(n);
        for i in 0..n {
            for k in 0..n {
                let x = self.a[i * n + k];
                if x.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let y = b.a[k * n + j];
                    if !y.is_zero() {
                        let idx = i * n + j;
                        c.a[idx] = f.add(c.a[idx], f.mul(x, y));
                    }
                }
            }
        }
        c
    }

    pub fn scale(&self, f: &FieldSpec, s: Fe) -> Mat {
        Mat { n: self.n, a: self.a.iter().map(|&x| f.mul(x, s)).collect() }
    }

    pub fn transpose(&self) -> Mat {
        let n = self.n;
        let mut t = Mat::zero(n);
        for i in 0..n {
            for j in 0..n {
                t.a[j * n + i] = self.a[i * n + j];
            }
        }
        t
    }

    pub fn map(&self, g: impl Fn(Fe) -> Fe) -> Mat {
        Mat { n: self.n, a: self.a.iter().map(|&x| g(x)).collect() }
    }

    /// Gauss-Jordan inverse.
    pub fn inv(&self, f: &FieldSpec) -> Result<Mat> {
        let n = self.n;
        let mut m = self.a.clone();
        let mut r = Mat::identity(n).a;
        for col in 0..n {
            let piv = (col..n).find(|&i| !m[i * n + col].is_zero()).ok_or(Error::Singular)?;
            if piv != col {
                for j in 0..n {
                    m.swap(piv * n + j, col * n + j);
                    r.swap(piv * n + j, col * n + j);
                }
            }
            let pinv = f.inv(m[col * n + col]);
            for j in 0..n {
                m[col * n + j] = f.mul(m[col * n + j], pinv);
                r[col * n + j] = f.mul(r[col * n + j], pinv);
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let c = m[i * n + col];
                if c.is_zero() {
                    continue;
                }
                let nc = f.neg(c);
                for j in 0..n {
                    let mv = m[col * n + j];
                    if !mv.is_zero() {
                        m[i * n + j] = f.add(m[i * n + j], f.mul(nc, mv));
                    }
                    let rv = r[col * n + j];
                    if !rv.is_zero() {
                        r[i * n + j] = f.add(r[i * n + j], f.mul(nc, rv));
                    }
                }
            }
        }
        Ok(Mat { n, a: r })
    }

    pub fn det(&self, f: &FieldSpec) -> Fe {
        let n = self.n;
        let mut m = self.a.clone();
        let mut d = Fe::ONE;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&i| !m[i * n + col].is_zero()) else {
                return Fe::ZERO;
            };
            if piv != col {
                for j in 0..n {
                    m.swap(piv * n + j, col * n + j);
                }
                d = f.neg(d);
            }
            let p = m[col * n + col];
            d = f.mul(d, p);
            let pinv = f.inv(p);
            for i in col + 1..n {
                let c = m[i * n + col];
                if c.is_zero() {
                    continue;
                }
                let factor = f.neg(f.mul(c, pinv));
                for j in col..n {
                    let v = m[col * n + j];
                    if !v.is_zero() {
                        m[i * n + j] = f.add(m[i * n + j], f.mul(factor, v));
                    }
                }
            }
        }
        d
    }

    /// `A ⊗ B = (b_ij · A)`: block `(i, j)` of the result is `b_ij A`, so the
    /// row index is `r_A + n_A · r_B`.
    pub fn kron(&self, f: &FieldSpec, b: &Mat) -> Mat {
        let (na, nb) = (self.n, b.n);
        let n = na * nb;
        let mut c = Mat::zero(n);
        for bi in 0..nb {
            for bj in 0..nb {
                let s = b.get(bi, bj);
                if s.is_zero() {
                    continue;
                }
                for ai in 0..na {
                    for aj in 0..na {
                        let x = self.get(ai, aj);
                        if !x.is_zero() {
                            c.set(ai + na * bi, aj + na * bj, f.mul(x, s));
                        }
                    }
                }
            }
        }
        c
    }

    pub fn block_diag(blocks: &[Mat]) -> Mat {
        let n: usize = blocks.iter().map(|b| b.n).sum();
        let mut c = Mat::zero(n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    c.set(off + i, off + j, b.get(i, j));
                }
            }
            off += b.n;
        }
        c
    }

    pub fn pow(&self, f: &FieldSpec, e: i64) -> Mat {
        let mut base = if e < 0 { self.inv(f).expect("invertible") } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut r = Mat::identity(self.n);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(f, &base);
            }
            base = base.mul(f, &base);
            e >>= 1;
        }
        r
    }

    /// `g^{-1} · self · g`.
    pub fn conj_by(&self, f: &FieldSpec, g: &Mat) -> Mat {
        g.inv(f).expect("invertible").mul(f, self).mul(f, g)
    }

    /// Multiplicative order, searched up to `limit`.
    pub fn order(&self, f: &FieldSpec, limit: u64) -> Option<u64> {
        let mut x = self.clone();
        for k in 1..=limit {
            if x.is_identity() {
                return Some(k);
            }
            x = x.mul(f, self);
        }
        None
    }
}

/// Shorthand for `self · other` with an implicit field.
pub fn mul_all(f: &FieldSpec, ms: &[&Mat]) -> Mat {
    let mut r = ms[0].clone();
    for m in &ms[1..] {
        r = r.mul(f, m);
    }
    r
}
