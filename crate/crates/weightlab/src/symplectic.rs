//! Generator matrices for groups of symplectic type and their normalizers,
//! the twisted embedding `ℏ`, wreathed basic subgroups, and a checker that
//! multiplies everything out and compares against the stated relations and
//! determinants.
//!
//! Tensor products follow `A ⊗ B = (b_ij A)`, so in `I_m ⊗ X_1 ⊗ … ⊗ X_γ` the
//! `I_m` index varies fastest and `ε_{j_1} ⊗ … ⊗ ε_{j_γ}` sits at offset
//! `j_1 + ℓ j_2 + … + ℓ^{γ−1} j_γ` inside each `ℓ^γ` block.
//!
//! Groups `R̃^0` are built in `GL_{mℓ^γ}((ηq)^{eℓ^α})` (level [`Level::Untwisted`]).
//! Everything else is written inside the fixed points of `vF_{ηq}` on
//! `GL_n(F̄)` for an explicit twisting element `v` (level [`Level::Twisted`];
//! `v = I` for the plus-type extraspecial groups). Membership is always tested
//! as `v F(B) v^{-1} = B`; the untwisting conjugator is never computed.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use serde::Serialize;

use crate::arith::{lcm, val};
use crate::error::{Error, Result};
use crate::gf::{Fe, FieldSpec};
use crate::matgroups::closure;
use crate::matrix::Mat;
use crate::radical::{normalize, validate, BasicShape, RadicalShape, ShapeKind};
use crate::roots::GlobalContext;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Level {
    Untwisted,
    Twisted,
}

#[derive(Clone, Debug)]
pub struct SymplecticTypeGens {
    pub kind: ShapeKind,
    pub m: u64,
    pub alpha: u32,
    pub gamma: u32,
    pub level: Level,
    pub z: Mat,
    pub x: Vec<Mat>,
    pub y: Vec<Mat>,
    /// `τ` for the semidihedral kind; empty otherwise.
    pub extras: Vec<Mat>,
}

impl SymplecticTypeGens {
    pub fn all(&self) -> Vec<Mat> {
        let mut v = vec![self.z.clone()];
        v.extend(self.x.iter().cloned());
        v.extend(self.y.iter().cloned());
        v.extend(self.extras.iter().cloned());
        v
    }

    pub fn dim(&self) -> usize {
        self.z.n
    }
}

#[derive(Clone, Debug)]
pub struct TwistedContext {
    pub v: Mat,
    pub eta: i8,
    pub q: u64,
    pub f: u32,
}

impl TwistedContext {
    pub fn new(ctx: &GlobalContext, v: Mat) -> TwistedContext {
        TwistedContext { v, eta: ctx.eta, q: ctx.q, f: ctx.f }
    }
}

#[derive(Clone, Debug)]
pub struct NamedMat {
    pub name: String,
    pub mat: Mat,
}

fn named(name: impl Into<String>, mat: Mat) -> NamedMat {
    NamedMat { name: name.into(), mat }
}

/// Deliberate corruptions used as negative controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Tamper {
    None,
    /// Flips the sign of the Vandermonde normalizing scalar.
    VandermondeSign,
}

/// Degree over the prime field of a field that holds every matrix built for
/// parameter `α` (and, for ℓ = 2, the auxiliary square roots).
pub fn field_degree(ctx: &GlobalContext, alpha: u32) -> u32 {
    let k = ctx.e * ctx.ell.pow(alpha);
    let mut d = ctx.f as u64 * k;
    if ctx.eta == -1 && k % 2 == 1 {
        d *= 2;
    }
    if ctx.ell == 2 {
        d = lcm(d, 2 * ctx.f as u64);
    }
    d as u32
}

pub fn field_for(ctx: &GlobalContext, alpha: u32) -> Result<Arc<FieldSpec>> {
    Ok(Arc::new(FieldSpec::new(ctx.p, field_degree(ctx, alpha))?))
}

fn k_of(ctx: &GlobalContext, alpha: u32) -> usize {
    (ctx.e * ctx.ell.pow(alpha)) as usize
}

/// `F_{ηq}` on matrices: entrywise `q`-th power, followed by transpose-inverse
/// when `η = −1`.
pub fn frobenius_map(field: &FieldSpec, f: u32, eta: i8, a: &Mat) -> Mat {
    let b = a.map(|x| field.frob_q(x, f, 1));
    if eta == 1 {
        b
    } else {
        b.inv(field).expect("invertible").transpose()
    }
}

/// `F_{ηq}` on scalars.
fn frob_scalar(ctx: &GlobalContext, field: &FieldSpec, x: Fe) -> Fe {
    let y = field.frob_q(x, ctx.f, 1);
    if ctx.eta == 1 {
        y
    } else {
        field.inv(y)
    }
}

/// `N_α(x) = x · F(x) · … · F^{eℓ^α − 1}(x)`.
pub fn norm_alpha(ctx: &GlobalContext, field: &FieldSpec, alpha: u32, x: Fe) -> Fe {
    let mut acc = Fe::ONE;
    let mut cur = x;
    for _ in 0..k_of(ctx, alpha) {
        acc = field.mul(acc, cur);
        cur = frob_scalar(ctx, field, cur);
    }
    acc
}

/// `ℏ(A) = diag{A, F(A), …, F^{eℓ^α−1}(A)}`.
pub fn hbar_embed(ctx: &GlobalContext, field: &FieldSpec, a: &Mat, alpha: u32) -> Mat {
    let mut blocks = vec![a.clone()];
    for _ in 1..k_of(ctx, alpha) {
        let next = frobenius_map(field, ctx.f, ctx.eta, blocks.last().unwrap());
        blocks.push(next);
    }
    Mat::block_diag(&blocks)
}

pub fn in_twisted_group(field: &FieldSpec, tw: &TwistedContext, b: &Mat) -> Result<bool> {
    if tw.v.n != b.n {
        return Err(Error::SizeMismatch(tw.v.n, b.n));
    }
    let fb = frobenius_map(field, tw.f, tw.eta, b);
    Ok(tw.v.mul(field, &fb).mul(field, &tw.v.inv(field)?) == *b)
}

fn root(field: &FieldSpec, order: u64) -> Result<Fe> {
    field.element_of_order(order)
}

fn m2(field: &FieldSpec, a: Fe, b: Fe, c: Fe, d: Fe) -> Mat {
    let _ = field;
    Mat::from_rows(&[vec![a, b], vec![c, d]])
}

fn kron_all(field: &FieldSpec, factors: &[Mat]) -> Mat {
    let mut acc = factors[0].clone();
    for f in &factors[1..] {
        acc = acc.kron(field, f);
    }
    acc
}

/// `I_m ⊗ I ⊗ … ⊗ base ⊗ … ⊗ I` with `base` in tensor slot `j` (0-based) of `γ`.
fn slot(field: &FieldSpec, m: usize, base: &Mat, gamma: u32, j: usize) -> Mat {
    let d = base.n;
    let mut factors = vec![Mat::identity(m)];
    for i in 0..gamma as usize {
        factors.push(if i == j { base.clone() } else { Mat::identity(d) });
    }
    kron_all(field, &factors)
}

/// Permutation matrix on `(F_ℓ)^γ`-indexed basis vectors sending
/// `ε_J ↦ ε_{map(J)}`.
fn tensor_perm(ell: usize, gamma: u32, map: impl Fn(&mut Vec<usize>)) -> Mat {
    let size = ell.pow(gamma);
    let perm: Vec<usize> = (0..size)
        .map(|idx| {
            let mut digits: Vec<usize> = (0..gamma as usize).map(|t| idx / ell.pow(t as u32) % ell).collect();
            map(&mut digits);
            digits.iter().enumerate().map(|(t, &d)| d * ell.pow(t as u32)).sum()
        })
        .collect();
    Mat::permutation(&perm)
}

fn signed(field: &FieldSpec, p: &Mat) -> Mat {
    p.scale(field, p.det(field))
}

fn diag_tensor(field: &FieldSpec, ell: usize, gamma: u32, entry: impl Fn(&[usize]) -> Fe) -> Mat {
    let size = ell.pow(gamma);
    let d: Vec<Fe> = (0..size)
        .map(|idx| {
            let digits: Vec<usize> = (0..gamma as usize).map(|t| idx / ell.pow(t as u32) % ell).collect();
            entry(&digits)
        })
        .collect();
    let _ = field;
    Mat::diag(&d)
}

fn check_params(ctx: &GlobalContext, m: u64, alpha: u32, gamma: u32, kind: ShapeKind) -> Result<()> {
    if m == 0 {
        return Err(Error::Precondition("m must be positive".into()));
    }
    match kind {
        ShapeKind::R => {
            if ctx.two_unitary() && alpha == 0 && gamma > 0 {
                return Err(Error::InvalidShape("for 4 | q+eta and alpha = 0 use the S kind".into()));
            }
        }
        _ => {
            if !ctx.two_unitary() {
                return Err(Error::InvalidContext(format!("{kind:?} needs ell = 2 and 4 | q+eta")));
            }
            if alpha != 0 || gamma == 0 {
                return Err(Error::InvalidShape(format!("{kind:?} needs alpha = 0 and gamma >= 1")));
            }
        }
    }
    Ok(())
}

/// The pair `(x⁰, y⁰)` used in every tensor slot.
fn base_pair(ctx: &GlobalContext, field: &FieldSpec, gamma: u32) -> Result<(Mat, Mat)> {
    let one = Fe::ONE;
    let zero = Fe::ZERO;
    let mo = field.minus_one();
    if ctx.ell == 2 {
        if gamma == 1 {
            let z4 = root(field, 4)?;
            Ok((Mat::diag(&[z4, field.neg(z4)]), m2(field, zero, one, mo, zero)))
        } else {
            Ok((Mat::diag(&[one, mo]), m2(field, zero, one, one, zero)))
        }
    } else {
        let l = ctx.ell as usize;
        let zl = root(field, ctx.ell)?;
        let x = Mat::diag(&(0..l).map(|i| field.pow(zl, i as i64)).collect::<Vec<_>>());
        let y = Mat::permutation(&(0..l).map(|j| (j + 1) % l).collect::<Vec<_>>());
        Ok((x, y))
    }
}

pub fn build_generators(
    ctx: &GlobalContext,
    field: &FieldSpec,
    m: u64,
    alpha: u32,
    gamma: u32,
    kind: ShapeKind,
) -> Result<SymplecticTypeGens> {
    check_params(ctx, m, alpha, gamma, kind)?;
    let mu = m as usize;
    let zero = Fe::ZERO;
    let one = Fe::ONE;
    let mo = field.minus_one();
    match kind {
        ShapeKind::R => {
            let dim = mu * (ctx.ell as usize).pow(gamma);
            if ctx.two_unitary() && alpha == 0 {
                return Ok(SymplecticTypeGens {
                    kind,
                    m,
                    alpha,
                    gamma,
                    level: Level::Untwisted,
                    z: Mat::scalar(dim, mo),
                    x: vec![],
                    y: vec![],
                    extras: vec![],
                });
            }
            let zeta = root(field, ctx.ell.pow(ctx.a + alpha))?;
            let (x0, y0) = base_pair(ctx, field, gamma)?;
            let x = (0..gamma as usize).map(|j| slot(field, mu, &x0, gamma, j)).collect();
            let y = (0..gamma as usize).map(|j| slot(field, mu, &y0, gamma, j)).collect();
            Ok(SymplecticTypeGens {
                kind,
                m,
                alpha,
                gamma,
                level: Level::Untwisted,
                z: Mat::scalar(dim, zeta),
                x,
                y,
                extras: vec![],
            })
        }
        ShapeKind::S => {
            let base = build_generators(ctx, field, m, 1, gamma - 1, ShapeKind::R)?;
            let h = |a: &Mat| hbar_embed(ctx, field, a, 1);
            let half = mu << (gamma - 1);
            let tau = Mat::identity(half).kron(field, &m2(field, zero, one, mo, zero));
            Ok(SymplecticTypeGens {
                kind,
                m,
                alpha,
                gamma,
                level: Level::Twisted,
                z: h(&base.z),
                x: base.x.iter().map(h).collect(),
                y: base.y.iter().map(h).collect(),
                extras: vec![tau],
            })
        }
        ShapeKind::Eplus | ShapeKind::Eminus => {
            let xp = Mat::diag(&[one, mo]);
            let yp = m2(field, zero, one, one, zero);
            let plus_pairs = if kind == ShapeKind::Eplus { gamma } else { gamma - 1 };
            let mut x: Vec<Mat> = (0..plus_pairs as usize).map(|j| slot(field, mu, &xp, gamma, j)).collect();
            let mut y: Vec<Mat> = (0..plus_pairs as usize).map(|j| slot(field, mu, &yp, gamma, j)).collect();
            if kind == ShapeKind::Eminus {
                let z4 = root(field, 4)?;
                let j = gamma as usize - 1;
                x.push(slot(field, mu, &Mat::diag(&[z4, field.neg(z4)]), gamma, j));
                y.push(slot(field, mu, &m2(field, zero, one, mo, zero), gamma, j));
            }
            Ok(SymplecticTypeGens {
                kind,
                m,
                alpha,
                gamma,
                level: Level::Twisted,
                z: Mat::scalar(mu << gamma, mo),
                x,
                y,
                extras: vec![],
            })
        }
    }
}

/// `v_α`: block companion `[[0, s], [I, 0]]` of size `eℓ^α`, with
/// `s = (−1)^{e−1}` for odd ℓ and `s = −1` for ℓ = 2. Size one gives `[1]`.
pub fn v_alpha(ctx: &GlobalContext, field: &FieldSpec, alpha: u32) -> Mat {
    let k = k_of(ctx, alpha);
    if k == 1 {
        return Mat::identity(1);
    }
    let s = if ctx.ell == 2 || ctx.e % 2 == 0 { field.minus_one() } else { Fe::ONE };
    let perm: Vec<usize> = (0..k).map(|j| (j + 1) % k).collect();
    let mut signs = vec![Fe::ONE; k];
    signs[k - 1] = s;
    Mat::monomial(&perm, &signs)
}

/// The twisting element `v` whose `vF`-fixed points contain the twisted form
/// of the given symplectic-type group.
pub fn twisting_element(
    ctx: &GlobalContext,
    field: &FieldSpec,
    m: u64,
    alpha: u32,
    gamma: u32,
    kind: ShapeKind,
) -> Result<Mat> {
    check_params(ctx, m, alpha, gamma, kind)?;
    let mu = m as usize;
    Ok(match kind {
        ShapeKind::R => Mat::identity(mu * (ctx.ell as usize).pow(gamma)).kron(field, &v_alpha(ctx, field, alpha)),
        ShapeKind::S => Mat::identity(mu << (gamma - 1)).kron(field, &v_alpha(ctx, field, 1)),
        ShapeKind::Eplus => Mat::identity(mu << gamma),
        ShapeKind::Eminus => {
            let t = m2(field, Fe::ZERO, Fe::ONE, field.minus_one(), Fe::ZERO);
            Mat::identity(mu << (gamma - 1)).kron(field, &t)
        }
    })
}

/// `μ V(ζ_ℓ)` with determinant one.
pub fn vandermonde_v0(field: &FieldSpec, ell: u64) -> Result<Mat> {
    v0_impl(field, ell, Tamper::None)
}

fn v0_impl(field: &FieldSpec, ell: u64, tamper: Tamper) -> Result<Mat> {
    if ell == 2 {
        return Err(Error::Precondition("the Vandermonde normalizer needs an odd prime".into()));
    }
    let zl = root(field, ell)?;
    let l = ell as usize;
    let rows: Vec<Vec<Fe>> =
        (0..l).map(|i| (0..l).map(|j| field.pow(zl, (i * j) as i64)).collect()).collect();
    let v = Mat::from_rows(&rows);
    let mu_inv = if ell == 3 {
        field.sub(Fe::ONE, zl)
    } else {
        let mut acc = if ((ell * ell - 1) / 8) % 2 == 1 { field.minus_one() } else { Fe::ONE };
        for i in 1..=(l - 1) / 2 {
            acc = field.mul(acc, field.sub(field.pow(zl, i as i64), Fe::ONE));
        }
        acc
    };
    let mut mu = field.inv(mu_inv);
    if tamper == Tamper::VandermondeSign {
        mu = field.neg(mu);
    }
    Ok(v.scale(field, mu))
}

/// Case `ℓ = 3, ν(m) = α = 0, γ = 1, a ≥ 2`.
fn case_3_2(ctx: &GlobalContext, m: u64, alpha: u32, gamma: u32) -> bool {
    ctx.ell == 3 && val(3, m) == 0 && alpha == 0 && gamma == 1 && ctx.a >= 2
}

/// Case `ℓ = 3, a = 1, ν(m) = α = 0, γ = 1`.
pub fn case_3_1(ctx: &GlobalContext, m: u64, alpha: u32, gamma: u32) -> bool {
    ctx.ell == 3 && ctx.a == 1 && val(3, m) == 0 && alpha == 0 && gamma == 1
}

/// Case `ℓ = 2, 4 | q−η, a = 2, ν(m) = α = 0, 1 ≤ γ ≤ 2`.
pub fn case_2_linear_1(ctx: &GlobalContext, m: u64, alpha: u32, gamma: u32) -> bool {
    ctx.two_linear() && ctx.a == 2 && val(2, m) == 0 && alpha == 0 && (1..=2).contains(&gamma)
}

/// Plus type with `γ ∈ {1, 2}` and odd `m`, or minus type with `γ = 1`, odd `m`, `a = 2`.
pub fn case_2_unitary_1(ctx: &GlobalContext, m: u64, gamma: u32, kind: ShapeKind) -> bool {
    let odd = val(2, m) == 0;
    match kind {
        ShapeKind::Eplus => odd && (1..=2).contains(&gamma),
        ShapeKind::Eminus => odd && gamma == 1 && ctx.a == 2,
        _ => false,
    }
}

pub fn normalizer_generators(
    ctx: &GlobalContext,
    field: &FieldSpec,
    m: u64,
    alpha: u32,
    gamma: u32,
    kind: ShapeKind,
) -> Result<Vec<NamedMat>> {
    normalizer_impl(ctx, field, m, alpha, gamma, kind, Tamper::None)
}

fn normalizer_impl(
    ctx: &GlobalContext,
    field: &FieldSpec,
    m: u64,
    alpha: u32,
    gamma: u32,
    kind: ShapeKind,
    tamper: Tamper,
) -> Result<Vec<NamedMat>> {
    check_params(ctx, m, alpha, gamma, kind)?;
    match kind {
        ShapeKind::R if ctx.ell != 2 => odd_normalizer(ctx, field, m, alpha, gamma, tamper),
        ShapeKind::R if ctx.two_unitary() && alpha == 0 => Ok(vec![]),
        ShapeKind::R => two_linear_normalizer(ctx, field, m, alpha, gamma),
        ShapeKind::S => Ok(two_linear_normalizer(ctx, field, m, 1, gamma - 1)?
            .into_iter()
            .map(|n| named(n.name, hbar_embed(ctx, field, &n.mat, 1)))
            .collect()),
        ShapeKind::Eplus | ShapeKind::Eminus => extraspecial_normalizer(ctx, field, m, gamma, kind),
    }
}

fn odd_normalizer(
    ctx: &GlobalContext,
    field: &FieldSpec,
    m: u64,
    alpha: u32,
    gamma: u32,
    tamper: Tamper,
) -> Result<Vec<NamedMat>> {
    let mut out = Vec::new();
    if gamma == 0 {
        return Ok(out);
    }
    let l = ctx.ell as usize;
    let mu = m as usize;
    let im = Mat::identity(mu);
    let zl = root(field, ctx.ell)?;
    let rest = Mat::identity(l.pow(gamma - 1));
    let v0 = v0_impl(field, ctx.ell, tamper)?;
    out.push(named("n1", kron_all(field, &[im.clone(), v0, rest])));

    let d2 = if case_3_2(ctx, m, alpha, gamma) {
        let z9 = root(field, 9)?;
        Mat::diag(&[field.inv(z9), field.pow(z9, 2), field.inv(z9)])
    } else {
        diag_tensor(field, l, gamma, |d| field.pow(zl, (d[0] * (d[0] + 1) / 2) as i64))
    };
    out.push(named("n2", im.kron(field, &d2)));

    for i in 2..=gamma as usize {
        let p = tensor_perm(l, gamma, |d| d.swap(0, i - 1));
        out.push(named(format!("n3_{i}"), im.kron(field, &signed(field, &p))));
    }
    if gamma >= 2 {
        let p = tensor_perm(l, gamma, |d| d[0] = (d[0] + 2 * l - d[1] + 1) % l);
        out.push(named("n4", im.kron(field, &signed(field, &p))));
    }
    for mu_ in 2..l {
        let mu_inv = (1..l).find(|t| t * mu_ % l == 1).unwrap();
        let p = tensor_perm(l, gamma, |d| d[0] = d[0] * mu_inv % l);
        out.push(named(format!("n5_{mu_}"), im.kron(field, &signed(field, &p))));
    }
    Ok(out)
}

fn two_linear_normalizer(
    ctx: &GlobalContext,
    field: &FieldSpec,
    m: u64,
    alpha: u32,
    gamma: u32,
) -> Result<Vec<NamedMat>> {
    let mut out = Vec::new();
    if gamma == 0 {
        return Ok(out);
    }
    let mu = m as usize;
    let im = Mat::identity(mu);
    let one = Fe::ONE;
    let mo = field.minus_one();
    let z4 = root(field, 4)?;
    let lambda = field.sqrt(field.mul(field.from_int(2), z4))?;
    let li = field.inv(lambda);
    let big_a = alpha >= 1 || ctx.a > 2;
    let nu_m = val(2, m);
    let z8 = if big_a { Some(root(field, 8)?) } else { None };
    if gamma == 1 {
        let nt = m2(field, mo, z4, mo, field.neg(z4)).scale(field, li);
        out.push(named("n1", im.kron(field, &nt)));
        let n2 = match z8 {
            Some(z8) => im.kron(field, &Mat::diag(&[z8, field.inv(z8)])),
            None if nu_m == 1 => {
                let mut d = vec![one; mu];
                d[0] = z4;
                Mat::diag(&d).kron(field, &Mat::diag(&[z4, one]))
            }
            None => im.kron(field, &Mat::diag(&[z4, one])),
        };
        out.push(named("n2", n2));
        return Ok(out);
    }
    let rest = Mat::identity(1 << (gamma - 1));
    let t1 = m2(field, one, one, field.neg(z4), z4).scale(field, li);
    out.push(named("n1", kron_all(field, &[im.clone(), t1, rest.clone()])));
    let d2 = match z8 {
        Some(z8) => Mat::diag(&[z8, field.inv(z8)]),
        None => Mat::diag(&[z4, one]),
    };
    out.push(named("n2", kron_all(field, &[im.clone(), d2, rest])));
    let front = if alpha == 0 && nu_m == 0 && gamma == 2 && ctx.a > 2 {
        let mut d = vec![one; mu];
        d[0] = z8.expect("a > 2 provides a primitive 8th root");
        Mat::diag(&d)
    } else {
        im.clone()
    };
    for i in 2..=gamma as usize {
        let p = tensor_perm(2, gamma, |d| d.swap(0, i - 1));
        out.push(named(format!("n3_{i}"), front.kron(field, &p)));
    }
    let p = tensor_perm(2, gamma, |d| d[0] = (d[0] + d[1] + 1) % 2);
    out.push(named("n4", front.kron(field, &p)));
    Ok(out)
}

/// `μ` with `μ² = ±2` as prescribed for the extraspecial normalizers, together
/// with the sign of `μ²`.
fn mu_root(ctx: &GlobalContext, field: &FieldSpec) -> Result<(Fe, bool)> {
    let two = field.from_int(2);
    let plus = if ctx.eta == 1 { ctx.q % 8 == 1 || ctx.q % 8 == 7 } else { ctx.q % 8 == 1 };
    let target = if plus { two } else { field.neg(two) };
    Ok((field.sqrt(target)?, plus))
}

fn extraspecial_normalizer(
    ctx: &GlobalContext,
    field: &FieldSpec,
    m: u64,
    gamma: u32,
    kind: ShapeKind,
) -> Result<Vec<NamedMat>> {
    let mu = m as usize;
    let im = Mat::identity(mu);
    let one = Fe::ONE;
    let mo = field.minus_one();
    let mut out = Vec::new();
    if kind == ShapeKind::Eminus && gamma == 1 {
        let z4 = root(field, 4)?;
        let z8 = root(field, 8)?;
        let lambda = field.sqrt(field.mul(field.from_int(2), z4))?;
        let nt = m2(field, mo, z4, mo, field.neg(z4)).scale(field, field.inv(lambda));
        out.push(named("n1", im.kron(field, &nt)));
        let z8q = field.pow(z8, ctx.eq().rem_euclid(8) as i64);
        out.push(named("n2", im.kron(field, &Mat::diag(&[z8, z8q]))));
        return Ok(out);
    }
    let (mu_, plus) = mu_root(ctx, field)?;
    let t = if plus { m2(field, one, mo, one, one) } else { m2(field, one, one, one, mo) };
    let rest = Mat::identity(1 << (gamma - 1));
    out.push(named("n1", kron_all(field, &[im.clone(), t.scale(field, field.inv(mu_)), rest])));
    if kind == ShapeKind::Eplus && gamma == 2 {
        let p2 = tensor_perm(2, 2, |d| d.swap(0, 1));
        let p3 = tensor_perm(2, 2, |d| d[0] = (d[0] + d[1] + 1) % 2);
        out.push(named("n2", im.kron(field, &p2)));
        out.push(named("n3", im.kron(field, &p3)));
        out.push(named("n4", im.kron(field, &Mat::diag(&[one, one, one, mo]))));
    }
    Ok(out)
}

/// Generators of `H ≀ A_{c_1} ≀ … ≀ A_{c_r}` where each `A_c` acts by its
/// regular representation on `ℓ^c` blocks. For ℓ = 2 a block permutation of
/// determinant −1 is multiplied by `diag{−I, I, …}` (same group whenever
/// `−I ∈ H`, which holds for every ℓ = 2 base group used here).
pub fn wreath_basic(field: &FieldSpec, gens: &[Mat], ell: u64, c: &[u32]) -> Vec<Mat> {
    let l = ell as usize;
    let mut cur = gens.to_vec();
    for &ci in c {
        let d = cur.first().map_or(1, |g| g.n);
        let blocks = l.pow(ci);
        let mut next: Vec<Mat> = cur
            .iter()
            .map(|g| {
                let mut bs = vec![g.clone()];
                bs.extend((1..blocks).map(|_| Mat::identity(d)));
                Mat::block_diag(&bs)
            })
            .collect();
        for t in 0..ci {
            let p = tensor_perm(l, ci, |digits| digits[t as usize] = (digits[t as usize] + 1) % l);
            let mut bp = Mat::identity(d).kron(field, &p);
            if ell == 2 && bp.det(field) != Fe::ONE {
                let mut s = vec![Fe::ONE; d * blocks];
                for x in s.iter_mut().take(d) {
                    *x = field.minus_one();
                }
                bp = Mat::diag(&s).mul(field, &bp);
            }
            next.push(bp);
        }
        cur = next;
    }
    cur
}

/// Generators (in twisted form) of a `GL_n(F̄)`-conjugate of the basic
/// subgroup, together with the twisting element of the ambient twisted group.
pub fn basic_subgroup(ctx: &GlobalContext, field: &FieldSpec, b: &BasicShape) -> Result<(Vec<Mat>, Mat)> {
    validate(ctx, b)?;
    let b = normalize(ctx, b);
    let g = build_generators(ctx, field, b.m, b.alpha, b.gamma, b.kind)?;
    let v = twisting_element(ctx, field, b.m, b.alpha, b.gamma, b.kind)?;
    let gens: Vec<Mat> = match g.level {
        Level::Untwisted => g.all().iter().map(|a| hbar_embed(ctx, field, a, b.alpha)).collect(),
        Level::Twisted => g.all(),
    };
    let gens = wreath_basic(field, &gens, ctx.ell, &b.c);
    let v = v.kron(field, &Mat::identity((ctx.ell as usize).pow(b.c_len())));
    Ok((gens, v))
}

/// Generators of the product `1_{n0} × R̃_1 × … × R̃_u`, block diagonally.
pub fn radical_subgroup(ctx: &GlobalContext, field: &FieldSpec, r: &RadicalShape) -> Result<(Vec<Mat>, Mat)> {
    let parts: Vec<(Vec<Mat>, Mat)> =
        r.components.iter().map(|b| basic_subgroup(ctx, field, b)).collect::<Result<_>>()?;
    let n0 = r.n0 as usize;
    let mut dims: Vec<usize> = vec![n0];
    dims.extend(parts.iter().map(|(_, v)| v.n));
    let ident = |i: usize| Mat::identity(dims[i]);
    let mut gens = Vec::new();
    for (pi, (gs, _)) in parts.iter().enumerate() {
        for g in gs {
            let blocks: Vec<Mat> =
                (0..dims.len()).map(|i| if i == pi + 1 { g.clone() } else { ident(i) }).collect();
            gens.push(Mat::block_diag(&blocks));
        }
    }
    let mut vblocks = vec![ident(0)];
    vblocks.extend(parts.into_iter().map(|(_, v)| v));
    let v = Mat::block_diag(&vblocks);
    if gens.is_empty() {
        gens.push(Mat::identity(v.n));
    }
    Ok((gens, v))
}

/// Coefficient-vector rendering of a matrix: `[row][col][coeff]`.
pub fn mat_coeffs(field: &FieldSpec, a: &Mat) -> Vec<Vec<Vec<u64>>> {
    (0..a.n).map(|i| (0..a.n).map(|j| field.to_coeffs(a.get(i, j))).collect()).collect()
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridPoint {
    pub ell: u64,
    pub q: u64,
    pub eta: i8,
    pub m: u64,
    pub alpha: u32,
    pub gamma: u32,
    pub kind: ShapeKind,
}

impl std::fmt::Display for GridPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "ell={} q={} eta={} {:?}(m={},alpha={},gamma={})",
            self.ell, self.q, self.eta, self.kind, self.m, self.alpha, self.gamma
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimRecord {
    pub claim: String,
    pub point: String,
    pub pass: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub records: Vec<ClaimRecord>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> Vec<&ClaimRecord> {
        self.records.iter().filter(|r| !r.pass).collect()
    }
}

/// The standard verification grid: the six base points with `η = 1`, a few
/// `η = −1` points, `m ∈ {1, 3}`, `α ≤ 1`, `γ ≤ 2`, and for `4 | q+η` the
/// semidihedral and extraspecial kinds with `γ ∈ {1, 2}`.
pub fn default_grid() -> Vec<GridPoint> {
    let bases: [(u64, u64, i8); 11] = [
        (3, 4, 1),
        (3, 7, 1),
        (5, 11, 1),
        (2, 3, 1),
        (2, 5, 1),
        (2, 7, 1),
        (3, 2, -1),
        (3, 5, -1),
        (3, 8, -1),
        (2, 3, -1),
        (2, 5, -1),
    ];
    let mut out = Vec::new();
    for (ell, q, eta) in bases {
        let ctx = GlobalContext::new(q, eta, ell).expect("grid contexts are valid");
        for m in [1u64, 3] {
            for alpha in 0..=1 {
                for gamma in 0..=2 {
                    if ctx.two_unitary() && alpha == 0 && gamma > 0 {
                        continue;
                    }
                    out.push(GridPoint { ell, q, eta, m, alpha, gamma, kind: ShapeKind::R });
                }
            }
            if ctx.two_unitary() {
                for gamma in 1..=2 {
                    for kind in [ShapeKind::S, ShapeKind::Eplus, ShapeKind::Eminus] {
                        out.push(GridPoint { ell, q, eta, m, alpha: 0, gamma, kind });
                    }
                }
            }
        }
    }
    out
}

/// Largest group order for which closures are enumerated during checking.
const CLOSURE_LIMIT: u64 = 4096;

struct Checker<'a> {
    f: &'a FieldSpec,
    point: String,
    out: Vec<ClaimRecord>,
}

fn show(f: &FieldSpec, a: &Mat) -> String {
    let n = a.n.min(8);
    let rows: Vec<String> = (0..n)
        .map(|i| {
            let r: Vec<String> = (0..n).map(|j| f.code(a.get(i, j)).to_string()).collect();
            format!("[{}]", r.join(","))
        })
        .collect();
    let more = if a.n > 8 { format!(" ({}x{} shown of {})", n, n, a.n) } else { String::new() };
    format!("[{}]{more}", rows.join(","))
}

impl<'a> Checker<'a> {
    fn claim(&mut self, name: impl Into<String>, pass: bool, witness: Option<String>) {
        self.out.push(ClaimRecord {
            claim: name.into(),
            point: self.point.clone(),
            pass,
            witness: if pass { None } else { witness },
        });
    }

    fn mat_eq(&mut self, name: impl Into<String>, actual: &Mat, expected: &Mat) {
        let pass = actual == expected;
        let w = (!pass).then(|| format!("got {} expected {}", show(self.f, actual), show(self.f, expected)));
        self.claim(name, pass, w);
    }

    fn fe_eq(&mut self, name: impl Into<String>, actual: Fe, expected: Fe) {
        let pass = actual == expected;
        let w = (!pass).then(|| {
            format!("got {:?} expected {:?}", self.f.to_coeffs(actual), self.f.to_coeffs(expected))
        });
        self.claim(name, pass, w);
    }

    fn num_eq(&mut self, name: impl Into<String>, actual: u64, expected: u64) {
        let pass = actual == expected;
        self.claim(name, pass, (!pass).then(|| format!("got {actual} expected {expected}")));
    }
}

fn conj(f: &FieldSpec, n: &Mat, x: &Mat) -> Mat {
    n.mul(f, x).mul(f, &n.inv(f).expect("invertible"))
}

fn order_of_subgroup_generated(f: &FieldSpec, dets: &[Fe]) -> u64 {
    dets.iter().fold(1, |acc, &d| lcm(acc, f.order(d)))
}

fn f_power(ctx: &GlobalContext, f: &FieldSpec, a: &Mat, k: usize) -> Mat {
    let mut b = a.clone();
    for _ in 0..k {
        b = frobenius_map(f, ctx.f, ctx.eta, &b);
    }
    b
}

/// Runs every check on every grid point.
pub fn verify_section3(points: &[GridPoint], tamper: Tamper) -> Result<Report> {
    let mut groups: BTreeMap<(u64, u64, i8), Vec<&GridPoint>> = BTreeMap::new();
    for p in points {
        groups.entry((p.ell, p.q, p.eta)).or_default().push(p);
    }
    let mut report = Report::default();
    for ((ell, q, eta), pts) in groups {
        let ctx = GlobalContext::new(q, eta, ell)?;
        let need = pts.iter().map(|p| if p.kind == ShapeKind::S { 1 } else { p.alpha }).max().unwrap_or(0);
        let field = field_for(&ctx, need)?;
        let results = crate::par::map(&pts, |p| check_point(&ctx, &field, p, tamper));
        for r in results {
            report.records.extend(r?);
        }
    }
    Ok(report)
}

fn check_point(ctx: &GlobalContext, field: &FieldSpec, p: &GridPoint, tamper: Tamper) -> Result<Vec<ClaimRecord>> {
    let mut ck = Checker { f: field, point: p.to_string(), out: Vec::new() };
    match p.kind {
        ShapeKind::R => check_r(&mut ck, ctx, p, tamper)?,
        ShapeKind::S => check_s(&mut ck, ctx, p)?,
        ShapeKind::Eplus | ShapeKind::Eminus => check_e(&mut ck, ctx, p)?,
    }
    Ok(ck.out)
}

fn closure_order(field: &FieldSpec, gens: &[Mat], expected: u64) -> Option<u64> {
    if expected > CLOSURE_LIMIT || gens.first().map_or(0, |g| g.n) > 64 {
        return None;
    }
    let g = closure(Arc::new(field.clone()), gens, 2 * CLOSURE_LIMIT as usize).ok()?;
    Some(g.order() as u64)
}

fn closure_set(field: &FieldSpec, gens: &[Mat]) -> Option<HashSet<Mat>> {
    let g = closure(Arc::new(field.clone()), gens, 2 * CLOSURE_LIMIT as usize).ok()?;
    Some(g.elems.into_iter().collect())
}

fn check_r(ck: &mut Checker, ctx: &GlobalContext, p: &GridPoint, tamper: Tamper) -> Result<()> {
    let f = ck.f;
    let (m, alpha, gamma) = (p.m, p.alpha, p.gamma);
    let g = build_generators(ctx, f, m, alpha, gamma, ShapeKind::R)?;
    let l = ctx.ell;
    let k = k_of(ctx, alpha);
    let unit_r_m = ctx.two_unitary() && alpha == 0;
    let zorder = if unit_r_m { 2 } else { l.pow(ctx.a + alpha) };
    let zs = g.z.scalar_value();
    ck.claim(
        "z central of order l^(a+alpha)",
        zs.is_some_and(|s| f.order(s) == zorder),
        Some(format!("z = {}", show(f, &g.z))),
    );

    let inv = |a: &Mat| a.inv(f).expect("invertible");
    let comm_expected = if l == 2 { f.minus_one() } else { root(f, l)? };
    for j in 0..gamma as usize {
        let c = g.x[j].mul(f, &g.y[j]).mul(f, &inv(&g.x[j])).mul(f, &inv(&g.y[j]));
        ck.mat_eq(format!("[x{0},y{0}] scalar of order l", j + 1), &c, &Mat::scalar(g.dim(), comm_expected));
        for t in 0..gamma as usize {
            if t != j {
                for (a, b, nm) in [(&g.x[j], &g.x[t], "x,x"), (&g.x[j], &g.y[t], "x,y"), (&g.y[j], &g.y[t], "y,y")] {
                    ck.mat_eq(format!("[{nm}] commute at {},{}", j + 1, t + 1), &a.mul(f, b), &b.mul(f, a));
                }
            }
        }
        if l == 2 {
            let sq = if gamma == 1 { f.minus_one() } else { Fe::ONE };
            ck.mat_eq(format!("x{}^2", j + 1), &g.x[j].mul(f, &g.x[j]), &Mat::scalar(g.dim(), sq));
            ck.mat_eq(format!("y{}^2", j + 1), &g.y[j].mul(f, &g.y[j]), &Mat::scalar(g.dim(), sq));
        }
        ck.fe_eq(format!("det x{}", j + 1), g.x[j].det(f), Fe::ONE);
        ck.fe_eq(format!("det y{}", j + 1), g.y[j].det(f), Fe::ONE);
    }
    let expected_order = if unit_r_m { 2 } else { l.pow(ctx.a + alpha + 2 * gamma) };
    if let Some(o) = closure_order(f, &g.all(), expected_order) {
        ck.num_eq("|Z_alpha E_gamma| = l^(a+alpha+2gamma)", o, expected_order);
    }
    for (i, h) in g.all().iter().enumerate() {
        ck.mat_eq(format!("generator {i} lies in G^0"), &f_power(ctx, f, h, k), h);
    }

    // Twisting.
    let v = twisting_element(ctx, f, m, alpha, gamma, ShapeKind::R)?;
    let tw = TwistedContext::new(ctx, v.clone());
    if k >= 2 {
        ck.fe_eq("det v = 1", v.det(f), Fe::ONE);
    }
    ck.claim("v lies in the twisted group", in_twisted_group(f, &tw, &v)?, None);
    for (i, h) in g.all().iter().enumerate() {
        let hb = hbar_embed(ctx, f, h, alpha);
        ck.claim(format!("hbar(generator {i}) twisted"), in_twisted_group(f, &tw, &hb)?, Some(show(f, &hb)));
    }
    if gamma >= 1 {
        let lhs = hbar_embed(ctx, f, &g.x[0].mul(f, &g.y[0]), alpha);
        let rhs = hbar_embed(ctx, f, &g.x[0], alpha).mul(f, &hbar_embed(ctx, f, &g.y[0], alpha));
        ck.mat_eq("hbar multiplicative", &lhs, &rhs);
    }
    if let Some(zeta) = zs {
        let dz = hbar_embed(ctx, f, &g.z, alpha).det(f);
        let expected = norm_alpha(ctx, f, alpha, f.pow(zeta, g.dim() as i64));
        ck.fe_eq("det hbar(z) = N_alpha(zeta^(m l^gamma))", dz, expected);
    }
    if m >= 2 {
        let cyc: Vec<usize> = (0..m as usize).map(|i| (i + 1) % m as usize).collect();
        let c = Mat::permutation(&cyc).kron(f, &Mat::identity((l as usize).pow(gamma)));
        let c = c.scale(f, zs.unwrap_or(Fe::ONE));
        let ok = g.all().iter().all(|h| h.mul(f, &c) == c.mul(f, h));
        ck.claim("GL_m (x) I centralizes R0", ok, None);
    }

    if l != 2 && gamma >= 1 {
        let v0 = v0_impl(f, l, tamper)?;
        ck.fe_eq("det V0 = 1", v0.det(f), Fe::ONE);
        if ctx.eta == -1 && k % 2 == 1 {
            let fv = v0.map(|x| f.frob_q(x, ctx.f, k as u32));
            ck.mat_eq("F(V0)^t V0 = I", &fv.transpose().mul(f, &v0), &Mat::identity(l as usize));
        }
    }

    // Normalizer generators.
    let ns = normalizer_impl(ctx, f, m, alpha, gamma, ShapeKind::R, tamper)?;
    let mut m_dets: Vec<Fe> = Vec::new();
    for h in g.x.iter().chain(&g.y) {
        m_dets.push(hbar_embed(ctx, f, h, alpha).det(f));
    }
    let z4 = if l == 2 { Some(root(f, 4)?) } else { None };
    for n in &ns {
        let actions = expected_action(ctx, f, &g, &n.name, z4)?;
        let centre: Vec<Fe> = if l == 2 { vec![Fe::ONE, f.minus_one()] } else { (0..l).map(|i| f.pow(root(f, l).unwrap(), i as i64)).collect() };
        for (label, src, expected, mod_centre) in actions {
            let actual = conj(f, &n.mat, &src);
            let name = format!("{} acts on {label}", n.name);
            if mod_centre {
                let ok = centre.iter().any(|&c| actual == expected.scale(f, c));
                ck.claim(format!("{name} (mod centre)"), ok, Some(show(f, &actual)));
            } else {
                ck.mat_eq(name, &actual, &expected);
            }
        }
        ck.mat_eq(format!("{} lies in G^0", n.name), &f_power(ctx, f, &n.mat, k), &n.mat);
        let hb = hbar_embed(ctx, f, &n.mat, alpha);
        ck.claim(format!("hbar({}) twisted", n.name), in_twisted_group(f, &tw, &hb)?, None);
        let d = hb.det(f);
        ck.fe_eq(format!("det hbar({}) = N_alpha(det)", n.name), d, norm_alpha(ctx, f, alpha, n.mat.det(f)));
        m_dets.push(d);
        let expected = expected_det(ctx, f, m, alpha, gamma, &n.name)?;
        if let Some(e) = expected {
            ck.fe_eq(format!("det hbar({}) as stated", n.name), d, e);
        }
        if l != 2 && n.name == "n2" && case_3_2(ctx, m, alpha, gamma) {
            ck.mat_eq("hbar(n2) = n2 in case 3-2", &hb, &n.mat);
        }
    }
    let expected_m = if l != 2 {
        if case_3_1(ctx, m, alpha, gamma) {
            3
        } else {
            1
        }
    } else if case_2_linear_1(ctx, m, alpha, gamma) {
        4 >> (gamma - 1)
    } else {
        1
    };
    ck.num_eq("|det M^tw|", order_of_subgroup_generated(f, &m_dets), expected_m);
    Ok(())
}

type Action = (String, Mat, Mat, bool);

/// Expected images `n g n^{-1}` of every `x_k, y_k` under the named generator.
fn expected_action(ctx: &GlobalContext, f: &FieldSpec, g: &SymplecticTypeGens, name: &str, z4: Option<Fe>) -> Result<Vec<Action>> {
    let gamma = g.x.len();
    let inv = |a: &Mat| a.inv(f).expect("invertible");
    let mul = |a: &Mat, b: &Mat| a.mul(f, b);
    let mut xs: Vec<(Mat, bool)> = g.x.iter().map(|a| (a.clone(), false)).collect();
    let mut ys: Vec<(Mat, bool)> = g.y.iter().map(|a| (a.clone(), false)).collect();
    let l = ctx.ell;
    let (base, idx) = match name.split_once('_') {
        Some((b, i)) => (b, i.parse::<usize>().unwrap_or(0)),
        None => (name, 0),
    };
    if l != 2 {
        match base {
            "n1" => {
                xs[0].0 = inv(&g.y[0]);
                ys[0].0 = g.x[0].clone();
            }
            "n2" => ys[0].0 = mul(&g.x[0], &g.y[0]),
            "n3" => {
                xs.swap(0, idx - 1);
                ys.swap(0, idx - 1);
            }
            "n4" => {
                xs[0] = (mul(&g.x[0], &g.x[1]), true);
                ys[1].0 = mul(&inv(&g.y[0]), &g.y[1]);
            }
            "n5" => {
                let li = l as usize;
                let mu_inv = (1..li).find(|t| t * idx % li == 1).unwrap();
                xs[0].0 = g.x[0].pow(f, idx as i64);
                ys[0].0 = g.y[0].pow(f, mu_inv as i64);
            }
            _ => return Err(Error::Precondition(format!("unknown generator {name}"))),
        }
    } else {
        let z4 = z4.expect("ell = 2 supplies zeta_4");
        match (base, gamma) {
            ("n1", 1) => {
                xs[0].0 = mul(&g.x[0], &g.y[0]);
                ys[0].0 = g.x[0].clone();
            }
            ("n2", 1) => ys[0].0 = mul(&g.x[0], &g.y[0]),
            ("n1", _) => {
                xs[0].0 = mul(&g.x[0], &g.y[0]).scale(f, z4);
                ys[0].0 = g.x[0].clone();
            }
            ("n2", _) => ys[0].0 = mul(&g.x[0], &g.y[0]).scale(f, z4),
            ("n3", _) => {
                xs.swap(0, idx - 1);
                ys.swap(0, idx - 1);
            }
            ("n4", _) => {
                xs[0] = (mul(&g.x[0], &g.x[1]), true);
                ys[1].0 = mul(&g.y[0], &g.y[1]);
            }
            _ => return Err(Error::Precondition(format!("unknown generator {name}"))),
        }
    }
    let mut out = Vec::new();
    for j in 0..gamma {
        out.push((format!("x{}", j + 1), g.x[j].clone(), xs[j].0.clone(), xs[j].1));
        out.push((format!("y{}", j + 1), g.y[j].clone(), ys[j].0.clone(), ys[j].1));
    }
    Ok(out)
}

/// Stated value of `det ℏ(n)` for a normalizer generator, when one is stated.
fn expected_det(ctx: &GlobalContext, f: &FieldSpec, m: u64, alpha: u32, gamma: u32, name: &str) -> Result<Option<Fe>> {
    let one = Fe::ONE;
    let base = name.split('_').next().unwrap_or(name);
    if ctx.ell != 2 {
        if base != "n2" {
            return Ok(Some(one));
        }
        if case_3_2(ctx, m, alpha, gamma) {
            return Ok(Some(one));
        }
        let l = ctx.ell;
        let s: u64 = (0..l).map(|j| j * (j + 1) / 2).sum();
        let e = s * m * l.pow(gamma - 1);
        let zl = root(f, l)?;
        return Ok(Some(norm_alpha(ctx, f, alpha, f.pow(zl, e as i64))));
    }
    let exceptional = alpha == 0 && val(2, m) == 0 && ctx.a == 2 && ctx.two_linear();
    Ok(Some(match (base, gamma) {
        ("n1", _) => one,
        ("n2", 1) if exceptional => f.pow(root(f, 4)?, m as i64),
        ("n2" | "n3" | "n4", 2) if exceptional => f.minus_one(),
        _ => one,
    }))
}

fn check_s(ck: &mut Checker, ctx: &GlobalContext, p: &GridPoint) -> Result<()> {
    let f = ck.f;
    let (m, gamma) = (p.m, p.gamma);
    let g = build_generators(ctx, f, m, 0, gamma, ShapeKind::S)?;
    let v = twisting_element(ctx, f, m, 0, gamma, ShapeKind::S)?;
    let tw = TwistedContext::new(ctx, v);
    let n = g.dim();
    let z = &g.z;
    let tau = &g.extras[0];
    let zo = 1i64 << (ctx.a + 1);
    ck.claim(
        "z has order 2^(a+1)",
        z.pow(f, zo).is_identity() && !z.pow(f, zo / 2).is_identity(),
        None,
    );
    ck.mat_eq("tau^2 = -I", &tau.mul(f, tau), &Mat::scalar(n, f.minus_one()));
    let eqmod = ctx.eq().rem_euclid(zo as i128) as i64;
    ck.mat_eq("tau z tau^-1 = z^(eta q)", &conj(f, tau, z), &z.pow(f, eqmod));
    let sd = 1u64 << (ctx.a + 2);
    if let Some(o) = closure_order(f, &[z.clone(), tau.clone()], sd) {
        ck.num_eq("<z, tau> semidihedral of order 2^(a+2)", o, sd);
    }
    let expected = 1u64 << (ctx.a + 2 * gamma);
    if let Some(o) = closure_order(f, &g.all(), expected) {
        ck.num_eq("|S| = 2^(a+2gamma)", o, expected);
    }
    let dz = if (m << (gamma - 1)) % 2 == 0 { Fe::ONE } else { f.minus_one() };
    ck.fe_eq("det z = (-1)^(m 2^(gamma-1))", z.det(f), dz);
    ck.fe_eq("det tau = 1", tau.det(f), Fe::ONE);
    for (i, h) in g.all().iter().enumerate() {
        ck.claim(format!("generator {i} twisted"), in_twisted_group(f, &tw, h)?, Some(show(f, h)));
    }
    let zpowers: Vec<Mat> = (0..zo).map(|t| z.pow(f, t)).collect();
    for h in g.x.iter().chain(&g.y) {
        ck.claim("E commutes with z", h.mul(f, z) == z.mul(f, h), None);
        let c = conj(f, tau, h).mul(f, &h.inv(f)?);
        ck.claim("tau normalizes E modulo <z>", zpowers.contains(&c), Some(show(f, &c)));
    }
    if m >= 2 {
        let cyc: Vec<usize> = (0..m as usize).map(|i| (i + 1) % m as usize).collect();
        let c = Mat::permutation(&cyc).kron(f, &Mat::identity(1 << gamma));
        ck.claim("GL_m (x) I centralizes S", g.all().iter().all(|h| h.mul(f, &c) == c.mul(f, h)), None);
    }
    let set = if expected <= CLOSURE_LIMIT { closure_set(f, &g.all()) } else { None };
    for nm in normalizer_generators(ctx, f, m, 0, gamma, ShapeKind::S)? {
        ck.claim(format!("{} twisted", nm.name), in_twisted_group(f, &tw, &nm.mat)?, None);
        if let Some(set) = &set {
            let ok = g.all().iter().all(|h| set.contains(&conj(f, &nm.mat, h)));
            ck.claim(format!("{} normalizes S", nm.name), ok, None);
        }
        ck.fe_eq(format!("det {}", nm.name), nm.mat.det(f), Fe::ONE);
    }
    Ok(())
}

fn check_e(ck: &mut Checker, ctx: &GlobalContext, p: &GridPoint) -> Result<()> {
    let f = ck.f;
    let (m, gamma, kind) = (p.m, p.gamma, p.kind);
    let g = build_generators(ctx, f, m, 0, gamma, kind)?;
    let v = twisting_element(ctx, f, m, 0, gamma, kind)?;
    let tw = TwistedContext::new(ctx, v);
    let gens: Vec<Mat> = g.x.iter().chain(&g.y).cloned().collect();
    let order = 1u64 << (2 * gamma + 1);
    let set = closure_set(f, &gens);
    if let Some(set) = &set {
        ck.num_eq("|E| = 2^(2gamma+1)", set.len() as u64, order);
        let inv = set.iter().filter(|h| !h.is_identity() && h.mul(f, h).is_identity()).count() as i64;
        let sign: i64 = if kind == ShapeKind::Eplus { 1 } else { -1 };
        let expected = (1i64 << (2 * gamma)) + sign * (1i64 << gamma) - 1;
        ck.num_eq("involution count fixes the type", inv as u64, expected as u64);
    }
    for (i, h) in gens.iter().enumerate() {
        ck.claim(format!("generator {i} twisted"), in_twisted_group(f, &tw, h)?, Some(show(f, h)));
    }
    let mut dets: Vec<Fe> = gens.iter().map(|h| h.det(f)).collect();
    let e_det = order_of_subgroup_generated(f, &dets);
    let e_expected = if kind == ShapeKind::Eplus && gamma == 1 && val(2, m) == 0 { 2 } else { 1 };
    ck.num_eq("|det E|", e_det, e_expected);
    let ns = normalizer_generators(ctx, f, m, 0, gamma, kind)?;
    let minus_one_case = kind == ShapeKind::Eminus && gamma == 1;
    let (_, plus_mu) = mu_root(ctx, f)?;
    for n in &ns {
        ck.claim(format!("{} twisted", n.name), in_twisted_group(f, &tw, &n.mat)?, None);
        if let Some(set) = &set {
            let ok = gens.iter().all(|h| set.contains(&conj(f, &n.mat, h)));
            ck.claim(format!("{} normalizes E", n.name), ok, None);
        }
        let d = n.mat.det(f);
        dets.push(d);
        if n.name == "n1" {
            ck.fe_eq("det n1 = 1", d, Fe::ONE);
            if minus_one_case {
                ck.mat_eq("n1: x -> xy", &conj(f, &n.mat, &g.x[0]), &g.x[0].mul(f, &g.y[0]));
                ck.mat_eq("n1: y -> x", &conj(f, &n.mat, &g.y[0]), &g.x[0]);
            } else {
                ck.mat_eq("n1: x1 -> y1", &conj(f, &n.mat, &g.x[0]), &g.y[0]);
                let ys = if plus_mu { g.x[0].scale(f, f.minus_one()) } else { g.x[0].clone() };
                ck.mat_eq("n1: y1 -> -+x1", &conj(f, &n.mat, &g.y[0]), &ys);
                for j in 1..gamma as usize {
                    ck.mat_eq(format!("n1 fixes x{}", j + 1), &conj(f, &n.mat, &g.x[j]), &g.x[j]);
                    ck.mat_eq(format!("n1 fixes y{}", j + 1), &conj(f, &n.mat, &g.y[j]), &g.y[j]);
                }
            }
        }
        if minus_one_case && n.name == "n2" {
            let e = if val(2, m) == 0 && ctx.a == 2 { f.minus_one() } else { Fe::ONE };
            ck.fe_eq("det n2", d, e);
        }
    }
    let expected = if case_2_unitary_1(ctx, m, gamma, kind) { 2 } else { 1 };
    ck.num_eq("|det M|", order_of_subgroup_generated(f, &dets), expected);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(q: u64, eta: i8, ell: u64, alpha: u32) -> (GlobalContext, Arc<FieldSpec>) {
        let ctx = GlobalContext::new(q, eta, ell).unwrap();
        let f = field_for(&ctx, alpha).unwrap();
        (ctx, f)
    }

    #[test]
    fn v0_has_det_one() {
        let f = FieldSpec::new(2, 2).unwrap();
        assert_eq!(vandermonde_v0(&f, 3).unwrap().det(&f), Fe::ONE);
        let f = FieldSpec::new(11, 1).unwrap();
        assert_eq!(vandermonde_v0(&f, 5).unwrap().det(&f), Fe::ONE);
        assert_ne!(v0_impl(&f, 5, Tamper::VandermondeSign).unwrap().det(&f), Fe::ONE);
    }

    #[test]
    fn odd_commutator() {
        let (ctx, f) = setup(4, 1, 3, 0);
        let g = build_generators(&ctx, &f, 1, 0, 1, ShapeKind::R).unwrap();
        let c = g.x[0].mul(&f, &g.y[0]).mul(&f, &g.x[0].inv(&f).unwrap()).mul(&f, &g.y[0].inv(&f).unwrap());
        assert_eq!(c, Mat::scalar(3, f.element_of_order(3).unwrap()));
    }

    #[test]
    fn hbar_identity_and_twist() {
        let (ctx, f) = setup(4, 1, 3, 1);
        assert!(hbar_embed(&ctx, &f, &Mat::identity(2), 1).is_identity());
        let v = twisting_element(&ctx, &f, 1, 1, 0, ShapeKind::R).unwrap();
        let tw = TwistedContext::new(&ctx, v.clone());
        assert!(in_twisted_group(&f, &tw, &Mat::identity(3)).unwrap());
        assert!(in_twisted_group(&f, &tw, &v).unwrap());
        assert!(in_twisted_group(&f, &tw, &Mat::identity(2)).is_err());
    }

    #[test]
    fn wreath_orders() {
        let (ctx, f) = setup(5, 1, 2, 0);
        let (gens, _) = basic_subgroup(&ctx, &f, &BasicShape::r(1, 0, 0, &[1])).unwrap();
        let g = closure(f.clone(), &gens, 1000).unwrap();
        assert_eq!(g.order(), 32);
        assert!(gens.iter().all(|h| h.det(&f) != Fe::ZERO));
        assert_eq!(wreath_basic(&f, &gens, 2, &[]), gens);
    }

    #[test]
    fn small_grid_passes() {
        let pts: Vec<GridPoint> = default_grid().into_iter().filter(|p| p.q == 4 || p.q == 3).collect();
        let rep = verify_section3(&pts, Tamper::None).unwrap();
        let bad: Vec<_> = rep.failures().into_iter().take(10).collect();
        assert!(bad.is_empty(), "{bad:#?}");
    }
}
