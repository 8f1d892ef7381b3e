//! The germ groupoid of the action of `T` on its tight characters.
//!
//! `T` acts on the right: `(x·s)(e) = x(s e s^*)`, defined on
//! `D_s = {x : x(ss^*) = 1}` with image `R_s = {x : x(s^*s) = 1}`. On a tight
//! character `φ(k)` this is the point `s^*(k)`, computed leg by leg with
//! `∞ ↦ ∞` on free legs.
//!
//! A germ `[φ(w), s]` has range `w` and source `w·s`; `[x,s][x·s,t] = [x,st]`.
//! Two germs at the same base agree when some `e` with `φ(w)(e) = 1`
//! equalizes them. Those `e` all dominate some `p_{r+1}(π_r(w), u)`
//! (`r` = first infinity of `w`), so witnesses of that shape suffice.
//!
//! Canonical form: premultiply by `p_{r+1}(π_r(w), 0)`, which lifts the element
//! to level `r+1` with prefix `π_r(w)`, then, when `r < ℓ`, lower both exponents
//! of the free leg by their minimum. Two germs are equal iff their canonical
//! forms are.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groupoid::Arrow;
use crate::index::{Entry, ExtendedIndex};
use crate::monomial::PrimitiveFactor;
use crate::semigroup::{Idempotent, TElement};
use crate::spectrum::phi_eval_element;

/// `w·s` for a tight character `φ(w)`.
pub fn act_char(k: &ExtendedIndex, s: &TElement) -> Result<ExtendedIndex> {
    let undefined = || Error::Undefined {
        base: k.to_string(),
        elem: s.to_string(),
    };
    let mono = s.to_monomial();
    let word = mono.as_word().ok_or_else(undefined)?;
    if word.ell() != k.ell() {
        return Err(Error::DimensionMismatch {
            expected: k.ell(),
            found: word.ell(),
        });
    }
    let k = k.canonical();
    let mut out = Vec::with_capacity(k.ell());
    for (f, &e) in word.factors().iter().zip(k.entries()) {
        // leg of s^*
        let moved = match (f.adjoint(), e) {
            (PrimitiveFactor::Identity, e) => e,
            (PrimitiveFactor::Pinched(a, b), Entry::Fin(v)) if v == b => Entry::Fin(a),
            (PrimitiveFactor::Pinched(..), _) => return Err(undefined()),
            (PrimitiveFactor::Free(..), Entry::Inf) => Entry::Inf,
            (PrimitiveFactor::Free(a, b), Entry::Fin(v)) if v >= b => Entry::Fin(v - b + a),
            (PrimitiveFactor::Free(..), _) => return Err(undefined()),
        };
        out.push(moved);
    }
    Ok(ExtendedIndex::new(out).canonical())
}

/// `φ(k)(s s^*) = 1`.
pub fn in_domain(k: &ExtendedIndex, s: &TElement) -> bool {
    let ss = s.mul(&s.star()).expect("same ell");
    phi_eval_element(k, &ss)
}

/// `φ(k)(s^* s) = 1`.
pub fn in_range(k: &ExtendedIndex, s: &TElement) -> bool {
    let ss = s.star().mul(s).expect("same ell");
    phi_eval_element(k, &ss)
}

/// The projection `p_{r+1}(π_r(w), u)` with `u` in slot `r+1` (absent when `r = ℓ`).
pub fn base_projection(w: &ExtendedIndex, u: u64) -> Idempotent {
    let r = w.first_infinity();
    let mut m = w.prefix(r);
    if r < w.ell() {
        m.push(u);
    }
    m.resize(w.ell(), 0);
    Idempotent::new(r + 1, &m).expect("level in range")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Germ {
    base: ExtendedIndex,
    elem: TElement,
}

impl Germ {
    /// `[φ(base), elem]` in canonical form.
    pub fn new(base: ExtendedIndex, elem: TElement) -> Result<Germ> {
        Ok(Germ::representative(base, elem)?.canonical())
    }

    /// `[φ(base), elem]` with `elem` kept as given. The base is canonicalized.
    pub fn representative(base: ExtendedIndex, elem: TElement) -> Result<Germ> {
        if let Some(ell) = elem.ell() {
            if ell != base.ell() {
                return Err(Error::DimensionMismatch {
                    expected: base.ell(),
                    found: ell,
                });
            }
        }
        let base = base.canonical();
        if !in_domain(&base, &elem) {
            return Err(Error::Undefined {
                base: base.to_string(),
                elem: elem.to_string(),
            });
        }
        Ok(Germ { base, elem })
    }

    pub fn unit(base: ExtendedIndex) -> Germ {
        let ell = base.ell();
        Germ::new(base, TElement::identity(ell)).expect("the unit is defined everywhere")
    }

    pub fn base(&self) -> &ExtendedIndex {
        &self.base
    }

    pub fn elem(&self) -> &TElement {
        &self.elem
    }

    pub fn ell(&self) -> usize {
        self.base.ell()
    }

    pub fn range(&self) -> &ExtendedIndex {
        &self.base
    }

    pub fn source(&self) -> ExtendedIndex {
        act_char(&self.base, &self.elem).expect("base lies in the domain")
    }

    pub fn is_unit(&self) -> bool {
        self.elem == TElement::identity(self.ell()) || *self == Germ::unit(self.base.clone())
    }

    /// `p_{r+1}(π_r(base), 0) · elem`, without trimming the free leg.
    pub fn premultiplied(&self) -> Germ {
        let e = base_projection(&self.base, 0).element();
        let elem = e.mul(&self.elem).expect("same ell");
        Germ {
            base: self.base.clone(),
            elem,
        }
    }

    pub fn canonical(&self) -> Germ {
        let lifted = self.premultiplied();
        let r = self.base.first_infinity();
        let b = lifted.elem.as_b().expect("non-zero on its domain");
        if r == self.ell() {
            return lifted;
        }
        let mut m = b.m().to_vec();
        let mut n = b.n().to_vec();
        let c = m[r].min(n[r]);
        m[r] -= c;
        n[r] -= c;
        Germ {
            base: self.base.clone(),
            elem: TElement::new(r + 1, 0, &m, &n).expect("level in range"),
        }
    }

    pub fn inverse(&self) -> Germ {
        Germ::new(self.source(), self.elem.star()).expect("the source lies in the domain of s^*")
    }

    pub fn compose(&self, other: &Germ) -> Result<Germ> {
        let src = self.source();
        if src != *other.range() {
            return Err(Error::NotComposable {
                source_index: src.to_string(),
                range: other.range().to_string(),
            });
        }
        // w lies in D_{st} once w·s is the range of [w·s, t]
        let elem = self.elem.mul(&other.elem)?;
        Ok(Germ {
            base: self.base.clone(),
            elem,
        }
        .canonical())
    }
}

impl Arrow for Germ {
    type Unit = ExtendedIndex;

    fn range(&self) -> ExtendedIndex {
        self.base.clone()
    }

    fn source(&self) -> ExtendedIndex {
        Germ::source(self)
    }

    fn unit(at: ExtendedIndex) -> Germ {
        Germ::unit(at)
    }

    fn compose(&self, other: &Germ) -> Result<Germ> {
        Germ::compose(self, other)
    }

    fn inverse(&self) -> Germ {
        Germ::inverse(self)
    }
}

impl fmt::Display for Germ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.base, self.elem)
    }
}

/// Germ equality by witness search: the bases are equivalent and
/// `e·g = e·h` for some `e = p_{r+1}(π_r(w), u)`, `0 <= u <= 1 + max index`.
pub fn germ_eq(g: &Germ, h: &Germ) -> bool {
    if !g.base.equivalent(&h.base) {
        return false;
    }
    let limit = 1 + g.elem.max_index().max(h.elem.max_index());
    let slots = if g.base.first_infinity() < g.ell() { limit } else { 0 };
    (0..=slots).any(|u| {
        let e = base_projection(&g.base, u).element();
        e.mul(&g.elem).expect("same ell") == e.mul(&h.elem).expect("same ell")
    })
}

/// All canonical germs with base in `{0..=bound, ∞}^ℓ` and element indices
/// (entries of `m`, `n` and `|r|`) at most `bound`, sorted.
pub fn enumerate_germs(ell: usize, bound: u64) -> Vec<Germ> {
    let elems: Vec<TElement> = TElement::enumerate(ell, bound, bound as i64)
        .into_iter()
        .filter(|s| !s.is_zero())
        .collect();
    let mut out = BTreeSet::new();
    for base in ExtendedIndex::canonical_grid(ell, bound) {
        for s in &elems {
            if let Ok(g) = Germ::new(base.clone(), s.clone()) {
                out.insert(g);
            }
        }
    }
    out.into_iter().collect()
}

/// `θ_s` restricted to the given bases: `{[w, s] : w ∈ bases ∩ D_s}`.
pub fn theta(s: &TElement, bases: &[ExtendedIndex]) -> BTreeSet<Germ> {
    bases
        .iter()
        .filter_map(|w| Germ::new(w.clone(), s.clone()).ok())
        .collect()
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ThetaReport {
    pub elements: usize,
    pub bases: usize,
    pub products: usize,
    pub inverses: usize,
    pub failures: Vec<String>,
}

/// `θ_s θ_t = θ_{st}` and `θ_s^{-1} = θ_{s^*}` over the nonzero elements with
/// indices `<= index_bound`, compared as sets of germs with range in
/// `{0..=grid_bound, ∞}^ℓ`. The second factor and the inverses are taken on the
/// grid widened by `index_bound`, which holds every source of the first factor.
pub fn check_theta_algebra(ell: usize, index_bound: u64, grid_bound: u64) -> ThetaReport {
    let elems: Vec<TElement> = TElement::enumerate(ell, index_bound, index_bound as i64)
        .into_iter()
        .filter(|s| !s.is_zero())
        .collect();
    let small = ExtendedIndex::canonical_grid(ell, grid_bound);
    let large = ExtendedIndex::canonical_grid(ell, grid_bound + index_bound);
    let small_set: BTreeSet<&ExtendedIndex> = small.iter().collect();
    let on_small: Vec<BTreeSet<Germ>> = elems.iter().map(|s| theta(s, &small)).collect();
    let on_large: Vec<BTreeMap<ExtendedIndex, Germ>> = elems
        .iter()
        .map(|s| theta(s, &large).into_iter().map(|g| (g.base().clone(), g)).collect())
        .collect();
    let mut rep = ThetaReport {
        elements: elems.len(),
        bases: small.len(),
        ..Default::default()
    };
    for (i, s) in elems.iter().enumerate() {
        rep.inverses += 1;
        let inverted: BTreeSet<Germ> = on_large[i]
            .values()
            .map(Germ::inverse)
            .filter(|g| small_set.contains(g.range()))
            .collect();
        if inverted != theta(&s.star(), &small) {
            rep.failures.push(format!("inverse of theta {s}"));
        }
        for (j, t) in elems.iter().enumerate() {
            rep.products += 1;
            let st = s.mul(t).expect("same ell");
            let mut product = BTreeSet::new();
            for g in &on_small[i] {
                let src = g.source();
                if !large.contains(&src) {
                    rep.failures
                        .push(format!("source {src} of {g} is outside the widened grid"));
                }
                if let Some(h) = on_large[j].get(&src) {
                    product.insert(g.compose(h).expect("composable"));
                }
            }
            if product != theta(&st, &small) {
                rep.failures.push(format!("theta {s} theta {t} != theta {st}"));
            }
        }
    }
    rep
}
