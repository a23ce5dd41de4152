//! Arithmetic classification of radical ℓ-subgroups of GL_n(ηq) relative to
//! SL_n(ηq): which basic or product shapes are special, the orders of the
//! determinant images of R̃, R̃C̃ and Ñ, and how many SL-classes a special
//! GL-class splits into.
//!
//! Throughout, `Q = q − η` and `ν` is the plain ℓ-adic valuation of integers.
//! In the ℓ = 2 unitary context (4 | q+η) a shape `R(m, 0, γ, c)` with γ ≥ 1
//! denotes the same group as `S(m, γ, c)` and is classified as such.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, l_part, lcm, val};
use crate::error::{Error, Result};
use crate::roots::GlobalContext;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ShapeKind {
    R,
    Eplus,
    Eminus,
    S,
}

/// Arithmetic descriptor of a basic subgroup `R̃_{m,α,γ} ≀ A_c` (or one of the
/// ℓ = 2 unitary variants `E^±_{m,γ} ≀ A_c`, `S̃_{m,1,γ−1} ≀ A_c`).
///
/// Field order matters: the derived `Ord` is the canonical component order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BasicShape {
    pub kind: ShapeKind,
    pub m: u64,
    pub alpha: u32,
    pub gamma: u32,
    pub c: Vec<u32>,
}

impl BasicShape {
    pub fn r(m: u64, alpha: u32, gamma: u32, c: &[u32]) -> BasicShape {
        BasicShape { kind: ShapeKind::R, m, alpha, gamma, c: c.to_vec() }
    }

    pub fn s(m: u64, gamma: u32, c: &[u32]) -> BasicShape {
        BasicShape { kind: ShapeKind::S, m, alpha: 0, gamma, c: c.to_vec() }
    }

    pub fn eplus(m: u64, gamma: u32, c: &[u32]) -> BasicShape {
        BasicShape { kind: ShapeKind::Eplus, m, alpha: 0, gamma, c: c.to_vec() }
    }

    pub fn eminus(m: u64, gamma: u32, c: &[u32]) -> BasicShape {
        BasicShape { kind: ShapeKind::Eminus, m, alpha: 0, gamma, c: c.to_vec() }
    }

    pub fn c_len(&self) -> u32 {
        self.c.iter().sum()
    }

    pub fn degree(&self, ctx: &GlobalContext) -> u64 {
        self.m * ctx.e * ctx.ell.pow(self.alpha + self.gamma + self.c_len())
    }

    /// `a(R̃_i) = ν(m) + γ`.
    pub fn a_of(&self, ctx: &GlobalContext) -> u32 {
        val(ctx.ell, self.m) + self.gamma
    }

    /// `δ(R̃_i) = γ + |c|`.
    pub fn delta_of(&self) -> u32 {
        self.gamma + self.c_len()
    }

    fn nu_m(&self, ctx: &GlobalContext) -> u32 {
        val(ctx.ell, self.m)
    }

    fn is_plain(&self) -> bool {
        self.kind == ShapeKind::R && self.alpha == 0 && self.gamma == 0 && self.c.is_empty()
    }
}

impl fmt::Display for BasicShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.c.iter().map(|x| x.to_string()).collect();
        match self.kind {
            ShapeKind::R => write!(f, "R({},{},{},[{}])", self.m, self.alpha, self.gamma, c.join(",")),
            ShapeKind::S => write!(f, "S({},{},[{}])", self.m, self.gamma, c.join(",")),
            ShapeKind::Eplus => write!(f, "E+({},{},[{}])", self.m, self.gamma, c.join(",")),
            ShapeKind::Eminus => write!(f, "E-({},{},[{}])", self.m, self.gamma, c.join(",")),
        }
    }
}

/// A direct product `R̃_0 × R̃_1 × ⋯ × R̃_u` with `R̃_0` trivial of degree `n0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RadicalShape {
    pub n0: u64,
    pub components: Vec<BasicShape>,
}

impl RadicalShape {
    /// Builds a shape with components in canonical order.
    pub fn new(n0: u64, mut components: Vec<BasicShape>) -> RadicalShape {
        components.sort();
        RadicalShape { n0, components }
    }

    pub fn basic(b: BasicShape) -> RadicalShape {
        RadicalShape { n0: 0, components: vec![b] }
    }

    pub fn degree(&self, ctx: &GlobalContext) -> u64 {
        self.n0 + self.components.iter().map(|b| b.degree(ctx)).sum::<u64>()
    }

    /// `a(R̃)`, the minimum of `a(R̃_i)`; `None` without components.
    pub fn a_of(&self, ctx: &GlobalContext) -> Option<u32> {
        self.components.iter().map(|b| b.a_of(ctx)).min()
    }

    pub fn delta_of(&self) -> Option<u32> {
        self.components.iter().map(|b| b.delta_of()).min()
    }
}

impl fmt::Display for RadicalShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|b| b.to_string()).collect();
        if self.n0 > 0 {
            write!(f, "1_{}", self.n0)?;
            if !parts.is_empty() {
                write!(f, " x ")?;
            }
        }
        write!(f, "{}", parts.join(" x "))
    }
}

/// Orders of `det R̃`, `det R̃C̃` and `det Ñ` inside the cyclic group of order `q − η`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetInfo {
    pub order_det_r: u64,
    pub order_det_rc: u64,
    pub order_det_n: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExceptionalCase {
    None,
    Ell3,
    Ell2Linear,
    Ell2Unitary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XiCase {
    Special,
    I,
    Ii,
    Iii,
    Iv,
    V,
    Vi,
    Vii,
    Viii,
    Ix,
}

impl fmt::Display for XiCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            XiCase::Special => "special",
            XiCase::I => "i",
            XiCase::Ii => "ii",
            XiCase::Iii => "iii",
            XiCase::Iv => "iv",
            XiCase::V => "v",
            XiCase::Vi => "vi",
            XiCase::Vii => "vii",
            XiCase::Viii => "viii",
            XiCase::Ix => "ix",
        };
        f.write_str(s)
    }
}

fn q_minus_eta(ctx: &GlobalContext) -> u64 {
    ctx.q_minus_eta()
}

/// True when ℓ divides `q − η`; otherwise every radical subgroup is special.
pub fn ell_divides(ctx: &GlobalContext) -> bool {
    q_minus_eta(ctx) % ctx.ell == 0
}

/// Order of the subgroup `Z_N^{k}` of the cyclic group of order `N`.
fn power_subgroup(n: u64, k: u64) -> u64 {
    n / gcd(n, k)
}

/// Replaces the unitary alias `R(m, 0, γ ≥ 1, c)` by `S(m, γ, c)`.
pub fn normalize(ctx: &GlobalContext, b: &BasicShape) -> BasicShape {
    if ctx.two_unitary() && b.kind == ShapeKind::R && b.alpha == 0 && b.gamma >= 1 {
        BasicShape { kind: ShapeKind::S, ..b.clone() }
    } else {
        b.clone()
    }
}

pub fn validate(ctx: &GlobalContext, b: &BasicShape) -> Result<()> {
    if b.m == 0 {
        return Err(Error::InvalidShape(format!("{b}: m must be positive")));
    }
    if b.c.iter().any(|&x| x == 0) {
        return Err(Error::InvalidShape(format!("{b}: entries of c must be positive")));
    }
    match b.kind {
        ShapeKind::R => {
            if ctx.two_unitary() && b.alpha == 0 && b.gamma == 0 && b.c.first() == Some(&1) {
                return Err(Error::InvalidShape(format!(
                    "{b}: not a radical subgroup when 4 | q+eta"
                )));
            }
        }
        kind => {
            if !ctx.two_unitary() {
                return Err(Error::InvalidShape(format!("{b}: kind {kind:?} needs ell = 2 and 4 | q+eta")));
            }
            if b.alpha != 0 {
                return Err(Error::InvalidShape(format!("{b}: alpha must be 0")));
            }
            let min_gamma = match kind {
                ShapeKind::Eplus => 2,
                _ => 1,
            };
            if b.gamma < min_gamma {
                return Err(Error::InvalidShape(format!("{b}: gamma must be at least {min_gamma}")));
            }
        }
    }
    Ok(())
}

pub fn validate_shape(ctx: &GlobalContext, r: &RadicalShape) -> Result<()> {
    for b in &r.components {
        validate(ctx, b)?;
    }
    Ok(())
}

/// Whether `det R̃_i` is nontrivial in the ℓ = 2 unitary context.
fn unitary_det_nontrivial(ctx: &GlobalContext, b: &BasicShape) -> bool {
    let b = normalize(ctx, b);
    let nm = b.nu_m(ctx);
    match b.kind {
        ShapeKind::R => nm + b.gamma == 0,
        ShapeKind::S => nm == 0 && b.gamma == 1,
        ShapeKind::Eplus | ShapeKind::Eminus => false,
    }
}

/// Whether `det R̃_i = 1` in any context where ℓ | q − η.
fn det_trivial(ctx: &GlobalContext, b: &BasicShape) -> bool {
    if ctx.two_unitary() {
        !unitary_det_nontrivial(ctx, b)
    } else {
        b.a_of(ctx) >= ctx.a
    }
}

/// Specialness of a single basic subgroup in its own `GL_{deg}(ηq)`.
pub fn is_special_basic(ctx: &GlobalContext, b: &BasicShape) -> Result<bool> {
    validate(ctx, b)?;
    if !ell_divides(ctx) {
        return Ok(true);
    }
    let b = normalize(ctx, b);
    let a = ctx.a;
    let nm = b.nu_m(ctx);
    if ctx.two_unitary() {
        if b.c.is_empty() {
            return Ok(match b.kind {
                ShapeKind::R if b.alpha >= 1 => nm + b.gamma > 0 || b.alpha == 1,
                ShapeKind::R => true,
                ShapeKind::Eplus | ShapeKind::Eminus => true,
                ShapeKind::S => !(nm == 0 && b.gamma == 1 && a == 2),
            });
        }
        let r002 = b.kind == ShapeKind::R && b.alpha == 0 && b.gamma == 0 && nm == 0 && b.c == [2];
        return Ok(!r002);
    }
    if b.c.is_empty() {
        return Ok(b.gamma + nm >= a || b.alpha == 0);
    }
    let base_exception = b.alpha == 0 && b.gamma == 0 && b.c == [1];
    if ctx.ell == 2 {
        Ok(!(base_exception && a == 2 && nm <= 1))
    } else {
        Ok(!(base_exception && ctx.ell == 3 && a == 1 && nm == 0))
    }
}

/// Specialness of a product of at least two basic subgroups (or any shape
/// with a trivial block).
pub fn is_special_product(ctx: &GlobalContext, r: &RadicalShape) -> Result<bool> {
    validate_shape(ctx, r)?;
    if !ell_divides(ctx) {
        return Ok(true);
    }
    if r.n0 > 0 {
        // O_ℓ of GL_{n0}(ηq) is a nontrivial scalar group, so R̃ is not radical.
        return Ok(false);
    }
    if r.components.len() == 1 {
        return is_special_basic(ctx, &r.components[0]);
    }
    if r.components.is_empty() {
        return Ok(true);
    }
    let comps: Vec<BasicShape> = r.components.iter().map(|b| normalize(ctx, b)).collect();
    if ctx.two_unitary() {
        Ok(special_product_unitary(ctx, &comps))
    } else {
        Ok(special_product_linear(ctx, &comps))
    }
}

pub fn is_special(ctx: &GlobalContext, r: &RadicalShape) -> Result<bool> {
    is_special_product(ctx, r)
}

fn special_product_linear(ctx: &GlobalContext, comps: &[BasicShape]) -> bool {
    let a = ctx.a;
    let l = ctx.ell;
    let mut sorted: Vec<&BasicShape> = comps.iter().collect();
    sorted.sort_by_key(|b| b.a_of(ctx));
    let a_min = sorted[0].a_of(ctx);
    if a_min >= a {
        return true;
    }
    let minimal: Vec<&BasicShape> = sorted.iter().copied().filter(|b| b.a_of(ctx) == a_min).collect();
    let weight: u64 = minimal.iter().map(|b| l.pow(b.c_len())).sum();
    if weight >= 2 {
        // (2a): two plain components whose sizes add up to a det-trivial one.
        let exc_a = minimal.len() == 2
            && minimal.iter().all(|b| b.is_plain() && b.nu_m(ctx) == 0)
            && val(l, minimal[0].m + minimal[1].m) >= a
            && sorted[2..].iter().all(|b| det_trivial(ctx, b));
        let first = minimal[0];
        let exc_b = minimal.len() == 1
            && first.alpha == 0
            && first.gamma == 0
            && first.c == [1]
            && if l == 2 { a == 2 && first.nu_m(ctx) <= 1 } else { l == 3 && a == 1 && first.nu_m(ctx) == 0 };
        return !(exc_a || exc_b);
    }
    // weight == 1: a unique minimal component with empty c.
    let first = minimal[0];
    first.c.is_empty() && first.alpha == 0
}

fn special_product_unitary(ctx: &GlobalContext, comps: &[BasicShape]) -> bool {
    let nontrivial: Vec<&BasicShape> = comps.iter().filter(|b| unitary_det_nontrivial(ctx, b)).collect();
    if nontrivial.is_empty() {
        return true;
    }
    let weight: u64 = nontrivial.iter().map(|b| 2u64.pow(b.c_len())).sum();
    if weight >= 2 {
        let exc_a = nontrivial.len() == 2 && nontrivial.iter().all(|b| b.is_plain() && b.nu_m(ctx) == 0);
        let first = nontrivial[0];
        let exc_b = nontrivial.len() == 1
            && first.kind == ShapeKind::R
            && first.alpha == 0
            && first.gamma == 0
            && first.nu_m(ctx) == 0
            && (first.c == [1] || first.c == [2]);
        return !(exc_a || exc_b);
    }
    let first = nontrivial[0];
    let case3 = first.kind == ShapeKind::R && first.c.is_empty() && first.gamma == 0 && first.alpha <= 1;
    let case4 = first.kind == ShapeKind::S && first.c.is_empty() && first.gamma == 1 && ctx.a > 2;
    case3 || case4
}

/// Orders of `det R̃_i` and `det C̃_i` for one component (ℓ | q − η).
fn component_r_c(ctx: &GlobalContext, b: &BasicShape) -> (u64, u64) {
    let qe = q_minus_eta(ctx);
    let l = ctx.ell;
    if ctx.two_unitary() {
        let dr = if unitary_det_nontrivial(ctx, b) { 2 } else { 1 };
        let b = normalize(ctx, b);
        let dc = if b.kind == ShapeKind::R && b.gamma == 0 && b.c.is_empty() { qe } else { qe / 2 };
        return (dr, dc);
    }
    let a = ctx.a;
    let dr = l.pow(a.saturating_sub(b.a_of(ctx)));
    let dc = power_subgroup(qe, l.pow(b.delta_of().min(a)));
    (dr, dc)
}

/// Determinant subgroup orders for a shape.
pub fn det_info(ctx: &GlobalContext, r: &RadicalShape) -> Result<DetInfo> {
    validate_shape(ctx, r)?;
    let qe = q_minus_eta(ctx);
    if !ell_divides(ctx) {
        return Ok(DetInfo { order_det_r: 1, order_det_rc: qe, order_det_n: qe });
    }
    let mut dr = 1u64;
    let mut dc = if r.n0 > 0 { qe } else { 1 };
    for b in &r.components {
        let (x, y) = component_r_c(ctx, b);
        dr = lcm(dr, x);
        dc = lcm(dc, y);
    }
    let drc = lcm(dr, dc);
    let l = ctx.ell;
    let dn = match exceptional_weight_case(ctx, r)? {
        ExceptionalCase::None => drc,
        ExceptionalCase::Ell3 | ExceptionalCase::Ell2Unitary => qe,
        ExceptionalCase::Ell2Linear => {
            let g = ell2_linear_gamma(ctx, r).expect("case detected");
            (qe / l_part(l, qe)) * l.pow(3 - g)
        }
    };
    Ok(DetInfo { order_det_r: dr, order_det_rc: drc, order_det_n: dn })
}

pub fn det_info_basic(ctx: &GlobalContext, b: &BasicShape) -> Result<DetInfo> {
    det_info(ctx, &RadicalShape::basic(b.clone()))
}

fn ell2_linear_gamma(ctx: &GlobalContext, r: &RadicalShape) -> Option<u32> {
    if !ctx.two_linear() || ctx.a != 2 || r.n0 > 0 {
        return None;
    }
    let a_r = r.a_of(ctx)?;
    let d_r = r.delta_of()?;
    r.components
        .iter()
        .find(|b| {
            b.kind == ShapeKind::R
                && b.alpha == 0
                && b.c.is_empty()
                && b.nu_m(ctx) == 0
                && (1..=2).contains(&b.gamma)
                && b.a_of(ctx) == a_r
                && a_r == d_r
        })
        .map(|b| b.gamma)
}

/// Which determinant-jump case (det Ñ strictly larger than det R̃C̃) holds.
pub fn exceptional_weight_case(ctx: &GlobalContext, r: &RadicalShape) -> Result<ExceptionalCase> {
    validate_shape(ctx, r)?;
    if !ell_divides(ctx) || r.n0 > 0 || r.components.is_empty() {
        return Ok(ExceptionalCase::None);
    }
    if ctx.ell == 3 && ctx.a == 1 && r.a_of(ctx) == Some(1) {
        let hit = r
            .components
            .iter()
            .any(|b| b.kind == ShapeKind::R && b.alpha == 0 && b.gamma == 1 && b.c.is_empty() && b.m % 3 != 0);
        if hit {
            return Ok(ExceptionalCase::Ell3);
        }
    }
    if ell2_linear_gamma(ctx, r).is_some() {
        return Ok(ExceptionalCase::Ell2Linear);
    }
    if ctx.two_unitary() {
        let comps: Vec<BasicShape> = r.components.iter().map(|b| normalize(ctx, b)).collect();
        let cond_i = comps.iter().any(|b| {
            b.c.is_empty()
                && b.nu_m(ctx) == 0
                && ((b.kind == ShapeKind::Eplus && b.gamma == 2)
                    || (b.kind == ShapeKind::Eminus && b.gamma == 1 && ctx.a == 2))
        });
        let cond_ii = !comps
            .iter()
            .any(|b| b.kind == ShapeKind::R && b.gamma == 0 && b.nu_m(ctx) == 0);
        let cond_iii = !comps
            .iter()
            .any(|b| b.kind == ShapeKind::S && b.gamma == 1 && b.nu_m(ctx) == 0);
        if cond_i && cond_ii && cond_iii {
            return Ok(ExceptionalCase::Ell2Unitary);
        }
    }
    Ok(ExceptionalCase::None)
}

/// Number of SL-classes of radical subgroups inside the intersection with the
/// GL-class of a special shape, `(q − η) / |det Ñ|`.
pub fn splitting_count(ctx: &GlobalContext, r: &RadicalShape) -> Result<u64> {
    if !is_special(ctx, r)? {
        return Err(Error::NotSpecial);
    }
    let d = det_info(ctx, r)?;
    Ok(q_minus_eta(ctx) / d.order_det_n)
}

/// The replacement `D̃` used for weights when ℓ = 2 and 4 | q+η.
pub fn substitute_d(ctx: &GlobalContext, b: &BasicShape) -> Result<BasicShape> {
    if !ctx.two_unitary() {
        return Err(Error::InvalidContext("substitution needs ell = 2 and 4 | q+eta".into()));
    }
    if b.kind != ShapeKind::R {
        // Already a substituted shape.
        return Ok(b.clone());
    }
    Ok(if b.alpha > 0 {
        b.clone()
    } else if b.gamma > 1 {
        BasicShape::s(b.m, b.gamma, &b.c)
    } else if b.gamma == 1 {
        BasicShape::eminus(b.m, 1, &b.c)
    } else if b.c.first() == Some(&1) {
        BasicShape::s(b.m, 1, &b.c[1..])
    } else {
        b.clone()
    })
}

/// Groups equal components, returning `(component, multiplicity)` pairs.
fn with_multiplicity(comps: &[BasicShape]) -> Vec<(BasicShape, usize)> {
    let mut out: Vec<(BasicShape, usize)> = Vec::new();
    for b in comps {
        match out.iter_mut().find(|(x, _)| x == b) {
            Some(entry) => entry.1 += 1,
            None => out.push((b.clone(), 1)),
        }
    }
    out
}

/// The replacement rule applying to a non-special shape that supports weights
/// (all `ν(m_i) = 0`).
pub fn xi_case(ctx: &GlobalContext, r: &RadicalShape) -> Result<XiCase> {
    if is_special(ctx, r)? {
        return Ok(XiCase::Special);
    }
    if r.components.iter().any(|b| b.nu_m(ctx) != 0) {
        return Err(Error::Precondition("all components need ell-prime m".into()));
    }
    let a = ctx.a;
    let l = ctx.ell;
    let grouped = with_multiplicity(&r.components);
    let found = if ctx.two_unitary() {
        let comps: Vec<(BasicShape, usize)> = grouped
            .into_iter()
            .map(|(b, t)| (substitute_d(ctx, &b).map(|d| normalize(ctx, &d)), t))
            .map(|(b, t)| b.map(|b| (b, t)))
            .collect::<Result<_>>()?;
        let nontriv: Vec<&(BasicShape, usize)> = comps.iter().filter(|(b, _)| unitary_det_nontrivial(ctx, b)).collect();
        match nontriv.as_slice() {
            [(b, 1)] if b.kind == ShapeKind::R && b.gamma == 0 && b.c.is_empty() && b.alpha > 1 => Some(XiCase::V),
            [(b1, 1), (b2, 1)] if b1.is_plain() && b2.is_plain() => Some(XiCase::Vi),
            [(b, 2)] if b.is_plain() => Some(XiCase::Vii),
            [(b, 1)] if b.kind == ShapeKind::R && b.alpha == 0 && b.gamma == 0 && b.c == [2] => Some(XiCase::Viii),
            [(b, 1)] if a == 2 && b.kind == ShapeKind::S && b.gamma == 1 && b.c.is_empty() => Some(XiCase::Ix),
            _ => None,
        }
    } else {
        let mut sorted = grouped;
        sorted.sort_by_key(|(b, _)| b.gamma);
        let (b1, t1) = &sorted[0];
        let g1 = b1.gamma;
        let others_above = |k: usize, bound: u32| sorted[k..].iter().all(|(b, _)| b.gamma > bound);
        if *t1 == 1 && b1.c.is_empty() && g1 < a && b1.alpha > 0 && others_above(1, g1) {
            Some(XiCase::I)
        } else if sorted.len() >= 2
            && *t1 == 1
            && sorted[1].1 == 1
            && b1.is_plain()
            && sorted[1].0.is_plain()
            && val(l, b1.m + sorted[1].0.m) >= a
            && sorted[2..].iter().all(|(b, _)| b.gamma >= a)
        {
            Some(XiCase::Ii)
        } else if *t1 == 1 && b1.alpha == 0 && g1 == 0 && b1.c == [1] && others_above(1, 0) {
            if l == 3 && a == 1 {
                Some(XiCase::Iii)
            } else if l == 2 && a == 2 {
                Some(XiCase::Iv)
            } else {
                None
            }
        } else {
            None
        }
    };
    found.ok_or_else(|| Error::Precondition(format!("no replacement case matches {r}")))
}

/// All basic shapes of degree at most `n` that are valid in the context.
pub fn basic_shapes_up_to(ctx: &GlobalContext, n: u64) -> Vec<BasicShape> {
    let l = ctx.ell;
    let unit = ctx.e;
    let mut out = Vec::new();
    let mut kinds = vec![ShapeKind::R];
    if ctx.two_unitary() {
        kinds.extend([ShapeKind::S, ShapeKind::Eplus, ShapeKind::Eminus]);
    }
    let mut exps = Vec::new();
    let mut k = 0u32;
    while unit * l.pow(k) <= n {
        exps.push(k);
        k += 1;
    }
    for &total in &exps {
        let scale = unit * l.pow(total);
        for m in 1..=n / scale {
            for alpha in 0..=total {
                for gamma in 0..=total - alpha {
                    for c in compositions(total - alpha - gamma) {
                        for &kind in &kinds {
                            if kind != ShapeKind::R && alpha != 0 {
                                continue;
                            }
                            let b = BasicShape { kind, m, alpha, gamma, c: c.clone() };
                            if kind == ShapeKind::R && ctx.two_unitary() && alpha == 0 && gamma >= 1 {
                                // Same group as S(m, γ, c).
                                continue;
                            }
                            if validate(ctx, &b).is_ok() {
                                out.push(b);
                            }
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out
}

fn compositions(n: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for rest in compositions(n - first) {
            let mut v = vec![first];
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

/// Every shape of total degree `n`. Trivial blocks are only produced when
/// ℓ ∤ q − η, since otherwise they are never radical.
pub fn candidate_shapes(ctx: &GlobalContext, n: u64) -> Vec<RadicalShape> {
    let basics = basic_shapes_up_to(ctx, n);
    let degs: Vec<u64> = basics.iter().map(|b| b.degree(ctx)).collect();
    let mut out = Vec::new();
    let max_n0 = if ell_divides(ctx) { 0 } else { n };
    for n0 in 0..=max_n0 {
        let mut stack = Vec::new();
        extend_multisets(&basics, &degs, 0, n - n0, &mut stack, &mut |chosen| {
            out.push(RadicalShape::new(n0, chosen.iter().map(|&i| basics[i].clone()).collect()));
        });
    }
    out.sort();
    out.dedup();
    out
}

fn extend_multisets(
    basics: &[BasicShape],
    degs: &[u64],
    start: usize,
    remaining: u64,
    stack: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if remaining == 0 {
        emit(stack);
        return;
    }
    for i in start..basics.len() {
        if degs[i] <= remaining {
            stack.push(i);
            extend_multisets(basics, degs, i, remaining - degs[i], stack, emit);
            stack.pop();
        }
    }
}
