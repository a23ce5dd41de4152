//! Brute-force comparison of radical ℓ-subgroups of a small `GL_n(ηq)` with
//! the shape classification.
//!
//! Each shape is realized as a twisted matrix group over a common extension
//! field and matched to brute-force classes by the multiset of
//! `(element order, characteristic polynomial)`, which is invariant under
//! conjugation in `GL_n(F̄)`. Specialness and splitting counts are then
//! recomputed directly from the enumerated group.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use serde::Serialize;

use crate::arith::lcm;
use crate::error::{Error, Result};
use crate::gf::{Fe, FieldSpec};
use crate::matgroups::{closure, gl_group_in, gu_group_in, FiniteMatrixGroup, Subgroup};
use crate::radical::{candidate_shapes, is_special, splitting_count, RadicalShape, ShapeKind};
use crate::roots::GlobalContext;
use crate::symplectic::{field_degree, in_twisted_group, radical_subgroup, TwistedContext};

#[derive(Clone, Debug, Serialize)]
pub struct ClassRow {
    pub order: usize,
    pub shapes: Vec<String>,
    pub special_direct: bool,
    pub special_predicted: Option<bool>,
    pub sl_classes_direct: Option<usize>,
    pub splitting_predicted: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossCheck {
    pub n: usize,
    pub q: u64,
    pub eta: i8,
    pub ell: u64,
    pub rows: Vec<ClassRow>,
    /// Shapes realized by an ℓ-subgroup of the ambient group that fails the
    /// direct radicality test.
    pub non_radical_shapes: Vec<String>,
    /// Shapes matching no ℓ-subgroup at all (always empty when the check passes).
    pub unmatched_shapes: Vec<String>,
    pub sl_radical_classes: usize,
    pub predicted_sl_classes: u64,
    pub pass: bool,
}

type Fingerprint = Vec<(u64, Vec<Fe>)>;

fn common_field(ctx: &GlobalContext, n: usize) -> Result<Arc<FieldSpec>> {
    let shapes = candidate_shapes(ctx, n as u64);
    let max_alpha = shapes
        .iter()
        .flat_map(|r| r.components.iter())
        .map(|b| if b.kind == ShapeKind::S { 1 } else { b.alpha })
        .max()
        .unwrap_or(0);
    let base = if ctx.eta == 1 { ctx.f as u64 } else { 2 * ctx.f as u64 };
    let d = lcm(field_degree(ctx, max_alpha) as u64, base);
    Ok(Arc::new(FieldSpec::new(ctx.p, d as u32)?))
}

/// The whole group `GL_n(ηq)` and its determinant-one subgroup inside `field`.
pub fn ambient(ctx: &GlobalContext, field: Arc<FieldSpec>, n: usize) -> Result<(FiniteMatrixGroup, Subgroup)> {
    let g = if ctx.eta == 1 { gl_group_in(field, n, ctx.f, false)? } else { gu_group_in(field, n, ctx.f, false)? };
    let whole = g.whole();
    let sl = g.det_one_subgroup(&whole);
    Ok((g, sl))
}

fn shape_fingerprint(ctx: &GlobalContext, field: &Arc<FieldSpec>, r: &RadicalShape, cap: usize) -> Result<Option<Fingerprint>> {
    let (gens, v) = radical_subgroup(ctx, field, r)?;
    let tw = TwistedContext::new(ctx, v);
    for g in &gens {
        if !in_twisted_group(field, &tw, g)? {
            return Err(Error::Precondition(format!("generator of {r} is not in the twisted group")));
        }
    }
    let h = closure(field.clone(), &gens, cap)?;
    if !FiniteMatrixGroup::is_ell_power(h.order(), ctx.ell) {
        return Ok(None);
    }
    Ok(Some(h.fingerprint(&h.whole())))
}

/// Number of classes under `G`-conjugacy of the subgroups `G ∩ gR̃g^{-1}`, `g ∈ G̃`.
fn direct_splitting(g: &FiniteMatrixGroup, sl: &Subgroup, r: &Subgroup) -> usize {
    let mut sets: HashSet<Vec<u32>> = HashSet::new();
    for &x in &g.whole().elems {
        let conj: Vec<u32> = g.conjugate_set(r, x).into_iter().filter(|&y| sl.contains(y)).collect();
        sets.insert(conj);
    }
    let mut labels: BTreeSet<Vec<u32>> = BTreeSet::new();
    for s in sets {
        let h = g.generate(&s);
        labels.insert(g.canonical_conjugate(sl, &h));
    }
    labels.len()
}

pub fn cross_check(q: u64, eta: i8, ell: u64, n: usize, cap: usize) -> Result<CrossCheck> {
    let ctx = GlobalContext::new(q, eta, ell)?;
    let field = common_field(&ctx, n)?;
    let (g, sl) = ambient(&ctx, field.clone(), n)?;
    let whole = g.whole();
    let classes = g.radical_subgroups(&whole, ell, cap)?;
    let fps: Vec<Fingerprint> = classes.iter().map(|r| g.fingerprint(r)).collect();

    let mut rows: Vec<ClassRow> = classes
        .iter()
        .map(|r| {
            let inter = g.det_one_subgroup(r);
            let nrm = g.normalizer(&whole, &inter);
            let special = g.o_ell(&nrm, ell).elems == r.elems;
            ClassRow {
                order: r.order(),
                shapes: Vec::new(),
                special_direct: special,
                special_predicted: None,
                sl_classes_direct: special.then(|| direct_splitting(&g, &sl, r)),
                splitting_predicted: None,
            }
        })
        .collect();

    let shapes = candidate_shapes(&ctx, n as u64);
    let sylow = g.sylow(&whole, ell);
    let non_radical_fps: HashSet<Fingerprint> = g
        .subgroups_of_ell_group(&sylow, ell)
        .iter()
        .filter(|h| g.o_ell(&g.normalizer(&whole, h), ell).elems != h.elems)
        .map(|h| g.fingerprint(h))
        .collect();
    let mut unmatched = Vec::new();
    let mut non_radical = Vec::new();
    let found: Vec<(RadicalShape, Option<Fingerprint>)> = crate::par::map(&shapes, |r| {
        (r.clone(), shape_fingerprint(&ctx, &field, r, cap).ok().flatten())
    });
    for (r, fp) in found {
        let pos = fp.as_ref().and_then(|fp| fps.iter().position(|x| x == fp));
        match pos {
            Some(i) => {
                rows[i].shapes.push(r.to_string());
                rows[i].special_predicted = Some(is_special(&ctx, &r)?);
                if rows[i].special_predicted == Some(true) {
                    rows[i].splitting_predicted = Some(splitting_count(&ctx, &r)?);
                }
            }
            None if fp.is_some_and(|fp| non_radical_fps.contains(&fp)) => non_radical.push(r.to_string()),
            None => unmatched.push(r.to_string()),
        }
    }

    let sl_radical = g.radical_subgroups(&sl, ell, cap)?.len();
    let predicted: u64 = rows.iter().filter_map(|r| r.splitting_predicted).sum();
    let rows_ok = rows.iter().all(|r| {
        r.shapes.len() == 1
            && r.special_predicted == Some(r.special_direct)
            && r.sl_classes_direct.map(|x| x as u64) == r.splitting_predicted
    });
    let pass = rows_ok && unmatched.is_empty() && predicted == sl_radical as u64;
    Ok(CrossCheck {
        n,
        q,
        eta,
        ell,
        rows,
        non_radical_shapes: non_radical,
        unmatched_shapes: unmatched,
        sl_radical_classes: sl_radical,
        predicted_sl_classes: predicted,
        pass,
    })
}
