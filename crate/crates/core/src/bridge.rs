//! The isomorphism from Sheu's groupoid onto the tight germ groupoid.
//!
//! For `(z, x, w)` with first infinity `r`,
//! `ψ(z, x, w) = [φ(w), B_{r+1}(t, m, n)]` where `t = z + x_1 + … + x_r`,
//! `m = (w_1, …, w_r, |x_{r+1}|, 0, …)` and
//! `n = (w_1 + x_1, …, w_r + x_r, x_{r+1} + |x_{r+1}|, 0, …)`.
//! When `r = ℓ` there is no `r+1` slot. For `r < ℓ` the `t` slot is erased by
//! canonicalization, so `t` only survives at level `ℓ+1`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::germ::{act_char, enumerate_germs, germ_eq, Germ};
use crate::index::ExtendedIndex;
use crate::semigroup::TElement;
use crate::sheu::{is_member, SheuTriple};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiData {
    pub level: usize,
    pub t: i64,
    pub m: Vec<u64>,
    pub n: Vec<u64>,
}

/// The data of `ψ` for any member triple, canonical or not.
pub fn psi_data(z: i64, x: &[i64], w: &ExtendedIndex) -> Result<PsiData> {
    if !is_member(z, x, w) {
        return Err(Error::NotMember {
            z,
            x: format!("{x:?}"),
            w: w.to_string(),
        });
    }
    let ell = w.ell();
    let r = w.first_infinity();
    let prefix = w.prefix(r);
    let mut m = prefix.clone();
    let mut n: Vec<u64> = prefix.iter().zip(x).map(|(&wi, &xi)| (wi as i64 + xi) as u64).collect();
    if r < ell {
        let a = x[r].unsigned_abs();
        m.push(a);
        n.push((x[r] + a as i64) as u64);
    }
    m.resize(ell, 0);
    n.resize(ell, 0);
    Ok(PsiData {
        level: r + 1,
        t: z + x[..r].iter().sum::<i64>(),
        m,
        n,
    })
}

/// `ψ` on a raw member triple, before canonicalizing the germ.
pub fn psi_representative(z: i64, x: &[i64], w: &ExtendedIndex) -> Result<Germ> {
    let d = psi_data(z, x, w)?;
    let elem = TElement::new(d.level, d.t, &d.m, &d.n)?;
    Germ::representative(w.clone(), elem)
}

pub fn psi(g: &SheuTriple) -> Germ {
    psi_representative(g.z(), g.x(), g.w())
        .expect("members map into the germ groupoid")
        .canonical()
}

pub fn psi_inverse(g: &Germ) -> Result<SheuTriple> {
    let not_in_image = || Error::NotInImage(g.to_string());
    let g = g.canonical();
    let w = g.base();
    let ell = w.ell();
    let r = w.first_infinity();
    let b = g.elem().as_b().ok_or_else(not_in_image)?;
    if b.level() != r + 1 {
        return Err(not_in_image());
    }
    let free = (r + 1).min(ell);
    let x: Vec<i64> = (0..ell)
        .map(|j| if j < free { b.n()[j] as i64 - b.m()[j] as i64 } else { 0 })
        .collect();
    SheuTriple::new(b.z_exp(), &x, w.clone()).map_err(|_| not_in_image())
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct IsoReport {
    pub ell: usize,
    pub bounds: [u64; 3],
    pub germ_bound: u64,
    pub triples: usize,
    pub germs: usize,
    pub lifts: usize,
    pub composable_pairs: usize,
    pub germ_preimages_in_enumeration: usize,
    pub well_defined: Vec<String>,
    pub injective: Vec<String>,
    pub surjective: Vec<String>,
    pub homomorphism: Vec<String>,
    pub compatibility: Vec<String>,
    pub units: Vec<String>,
}

impl IsoReport {
    pub fn counterexamples(&self) -> usize {
        self.well_defined.len()
            + self.injective.len()
            + self.surjective.len()
            + self.homomorphism.len()
            + self.compatibility.len()
            + self.units.len()
    }

    pub fn passed(&self) -> bool {
        self.counterexamples() == 0
    }
}

/// Every `∼`-lift of a canonical triple within `{0..=bw, ∞}` on the slots after `r+1`.
fn lifts(g: &SheuTriple, bw: u64) -> Vec<ExtendedIndex> {
    let ell = g.ell();
    let r = g.w().first_infinity();
    if r + 1 >= ell {
        return vec![];
    }
    let tails = ExtendedIndex::grid(ell - r - 1, bw);
    tails
        .into_iter()
        .map(|tail| {
            ExtendedIndex::new(
                g.w().entries()[..=r]
                    .iter()
                    .copied()
                    .chain(tail.entries().iter().copied()),
            )
        })
        .filter(|w| w != g.w())
        .collect()
}

/// Exhaustive check that `ψ` is a groupoid isomorphism over the Sheu triples with
/// `|z| <= bz`, `|x_i| <= bx`, `w ∈ {0..=bw, ∞}^ℓ`, and onto the germs enumerated
/// at `min(bx, bw)`.
pub fn verify_isomorphism(ell: usize, bz: u64, bx: u64, bw: u64) -> IsoReport {
    let triples = SheuTriple::enumerate(ell, bz as i64, bx as i64, bw);
    let germ_bound = bx.min(bw);
    let germs = enumerate_germs(ell, germ_bound);
    let mut rep = IsoReport {
        ell,
        bounds: [bz, bx, bw],
        germ_bound,
        triples: triples.len(),
        germs: germs.len(),
        ..Default::default()
    };

    let images: Vec<Germ> = triples.iter().map(psi).collect();
    let image_of: BTreeMap<&SheuTriple, &Germ> = triples.iter().zip(&images).collect();

    for (g, img) in triples.iter().zip(&images) {
        if img.base() != g.w() || img.source() != g.source() {
            rep.compatibility.push(format!("{g} -> {img}: base or source mismatch"));
        }
        if act_char(g.w(), img.elem()).ok() != Some(g.source()) {
            rep.compatibility.push(format!("{g} -> {img}: action is not w + x"));
        }
        if img.elem().level() != Some(g.w().first_infinity() + 1) {
            rep.compatibility.push(format!("{g} -> {img}: level"));
        }
        if g.is_unit() != img.is_unit() {
            rep.units.push(format!("{g} -> {img}"));
        }
        match psi_inverse(img) {
            Ok(back) if back == *g => {}
            Ok(back) => rep.injective.push(format!("{g} -> {img} -> {back}")),
            Err(e) => rep.surjective.push(format!("{g} -> {img}: {e}")),
        }
        for w in lifts(g, bw) {
            rep.lifts += 1;
            match psi_representative(g.z(), g.x(), &w) {
                Ok(h) if germ_eq(&h, img) && h.canonical() == *img => {}
                Ok(h) => rep
                    .well_defined
                    .push(format!("lift of {g} at {w} -> {h}, expected {img}")),
                Err(e) => rep.well_defined.push(format!("lift of {g} at {w}: {e}")),
            }
        }
    }

    // distinct triples at a common base never give equal germs
    let mut by_base: BTreeMap<&ExtendedIndex, Vec<(&SheuTriple, &Germ)>> = BTreeMap::new();
    for (g, img) in triples.iter().zip(&images) {
        by_base.entry(g.w()).or_default().push((g, img));
    }
    for group in by_base.values() {
        for (i, (g, a)) in group.iter().enumerate() {
            for (h, b) in &group[i + 1..] {
                if germ_eq(a, b) {
                    rep.injective.push(format!("{g} and {h} both map to {a}"));
                }
            }
        }
    }

    let in_enumeration: BTreeSet<&SheuTriple> = triples.iter().collect();
    for germ in &germs {
        match psi_inverse(germ) {
            Ok(t) => {
                if psi(&t) != *germ {
                    rep.surjective.push(format!("{germ} -> {t} -> {}", psi(&t)));
                }
                if in_enumeration.contains(&t) {
                    rep.germ_preimages_in_enumeration += 1;
                }
            }
            Err(e) => rep.surjective.push(e.to_string()),
        }
    }

    let mut by_range: BTreeMap<&ExtendedIndex, Vec<&SheuTriple>> = BTreeMap::new();
    for g in &triples {
        by_range.entry(g.range()).or_default().push(g);
    }
    for g in &triples {
        let pg = image_of[g];
        let inv = psi(&g.inverse());
        if inv != pg.inverse() {
            rep.homomorphism
                .push(format!("inverse of {g}: {inv} vs {}", pg.inverse()));
        }
        let src = g.source();
        for h in by_range.get(&src).into_iter().flatten() {
            rep.composable_pairs += 1;
            let gh = g.compose(h).expect("composable by construction");
            let lhs = psi(&gh);
            match pg.compose(image_of[h]) {
                Ok(rhs) if rhs == lhs && germ_eq(&lhs, &rhs) => {}
                Ok(rhs) => rep.homomorphism.push(format!("{g} * {h}: {lhs} vs {rhs}")),
                Err(e) => rep.homomorphism.push(format!("{g} * {h}: {e}")),
            }
        }
    }
    rep
}
