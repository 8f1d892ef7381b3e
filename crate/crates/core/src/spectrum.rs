//! Characters of the semilattice `E = {0} ∪ {p_i(m)}`, the tight characters
//! `φ(k)` for `k ∈ N̄^ℓ`, and brute-force filter computations on finite
//! windows of `E`.
//!
//! # Windows
//!
//! `E_B` is the set of `p_i(m)` with every entry of `m` at most `B`. It is closed
//! under products, so every filter on it is principal. Maximality is not
//! visible inside `E_B` alone: `φ((∞))` restricted to `E_B` is strictly below the
//! filter of the atom `p_2(B)`, although `φ((∞))` is an ultrafilter of `E`. The
//! witness that separates them, `p_1(B+1)`, lives one step further out. So a
//! character is an *ultrafilter at `B`* when every filter on `E_{B+1}` that
//! contains its support has the same trace on `E_B`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::index::{Entry, ExtendedIndex};
use crate::semigroup::{Idempotent, TElement};

/// `φ(k)(p_i(m))`: `δ_{π_{i-1}(m), π_{i-1}(k)} · 1_{[0,k_i]}(m_i)` for `i <= ℓ`,
/// and `δ_{m,k}` for `i = ℓ+1`.
pub fn phi_eval(k: &ExtendedIndex, e: &Idempotent) -> bool {
    let ell = k.ell();
    assert_eq!(e.ell(), ell, "index and idempotent over different ell");
    let i = e.level();
    let m = e.m();
    let prefix_ok = (0..i - 1).all(|j| k.get(j) == Entry::Fin(m[j]));
    if !prefix_ok {
        return false;
    }
    if i == ell + 1 {
        return true;
    }
    match k.get(i - 1) {
        Entry::Inf => true,
        Entry::Fin(v) => m[i - 1] <= v,
    }
}

/// [`phi_eval`] on an arbitrary element: 0 on zero, panics on non-projections.
pub fn phi_eval_element(k: &ExtendedIndex, e: &TElement) -> bool {
    if e.is_zero() {
        return false;
    }
    let p = Idempotent::from_element(e).expect("projection");
    phi_eval(k, &p)
}

/// A character of `E`, given by a point of `N̄^ℓ` or by a finite set of
/// generating projections (the indicator of the filter they generate).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Character {
    Tight(ExtendedIndex),
    Generated { ell: usize, least: Idempotent },
}

impl Character {
    pub fn tight(k: ExtendedIndex) -> Self {
        Character::Tight(k)
    }

    /// The filter generated by `generators`; the empty set generates `{e : e >= 1}`.
    pub fn generated(ell: usize, generators: &[Idempotent]) -> Result<Character> {
        let top = Idempotent::new(1, &vec![0; ell])?;
        let mut least = top;
        for g in generators {
            if g.ell() != ell {
                return Err(Error::DimensionMismatch {
                    expected: ell,
                    found: g.ell(),
                });
            }
            least = least.meet(g).ok_or(Error::ZeroCharacter)?;
        }
        Ok(Character::Generated { ell, least })
    }

    pub fn ell(&self) -> usize {
        match self {
            Character::Tight(k) => k.ell(),
            Character::Generated { ell, .. } => *ell,
        }
    }

    pub fn eval(&self, e: &Idempotent) -> bool {
        match self {
            Character::Tight(k) => phi_eval(k, e),
            Character::Generated { least, .. } => least.leq(e),
        }
    }
}

/// `A_x ∩ E_bound`, the support of `x` inside the window. Every character is 1
/// on the unit `p_1(0)`, so `EmptySupport` only guards against misuse.
pub fn filter_of(x: &Character, bound: u64) -> Result<BTreeSet<Idempotent>> {
    let support: BTreeSet<_> = Idempotent::enumerate(x.ell(), bound)
        .into_iter()
        .filter(|e| x.eval(e))
        .collect();
    if support.is_empty() {
        return Err(Error::EmptySupport { bound });
    }
    Ok(support)
}

/// The three filter axioms inside `E_bound`: non-empty, upward closed, closed
/// under products (zero never belongs, products are computed in `T`).
pub fn is_filter(set: &BTreeSet<Idempotent>, ell: usize, bound: u64) -> bool {
    if set.is_empty() {
        return false;
    }
    let window = Idempotent::enumerate(ell, bound);
    let upward = set
        .iter()
        .all(|e| window.iter().filter(|f| e.leq(f)).all(|f| set.contains(f)));
    let products = set
        .iter()
        .all(|e| set.iter().all(|f| e.meet(f).is_some_and(|g| set.contains(&g))));
    upward && products
}

/// `E_{bound+1}` with its order relation, and which of its members lie in `E_bound`.
struct Window {
    elems: Vec<Idempotent>,
    inner: Vec<bool>,
    leq: Vec<Vec<bool>>,
}

impl Window {
    fn new(ell: usize, bound: u64) -> Self {
        let elems = Idempotent::enumerate(ell, bound + 1);
        let inner = elems.iter().map(|e| e.m().iter().all(|&v| v <= bound)).collect();
        let leq = elems.iter().map(|e| elems.iter().map(|f| e.leq(f)).collect()).collect();
        Window { elems, inner, leq }
    }

    /// Trace on `E_bound` of the principal filter of `elems[i]`.
    fn trace(&self, i: usize) -> BTreeSet<Idempotent> {
        (0..self.elems.len())
            .filter(|&j| self.inner[j] && self.leq[i][j])
            .map(|j| self.elems[j].clone())
            .collect()
    }

    /// Whether the principal filter of `elems[i]` keeps its trace under every
    /// enlargement inside the window.
    fn is_maximal_at_bound(&self, i: usize) -> bool {
        let own = self.trace(i);
        (0..self.elems.len())
            .filter(|&j| self.leq[j][i])
            .all(|j| self.trace(j) == own)
    }
}

/// Brute-force maximality of `A_x` relative to the window `E_bound` (see the
/// module docs).
pub fn is_ultrafilter_at(x: &Character, bound: u64) -> bool {
    let window = Window::new(x.ell(), bound);
    let support: Vec<usize> = (0..window.elems.len()).filter(|&i| x.eval(&window.elems[i])).collect();
    // The support is a filter of the finite window, hence principal.
    let least = support
        .iter()
        .copied()
        .find(|&i| support.iter().all(|&j| window.leq[i][j]));
    match least {
        Some(i) => window.is_maximal_at_bound(i),
        None => false,
    }
}

/// The traces on `E_bound` of all filters of `E_{bound+1}` that are maximal at
/// `bound`, deduplicated and sorted.
pub fn bounded_ultrafilters(ell: usize, bound: u64) -> Vec<BTreeSet<Idempotent>> {
    let window = Window::new(ell, bound);
    let found: BTreeSet<BTreeSet<Idempotent>> = (0..window.elems.len())
        .filter(|&i| window.is_maximal_at_bound(i))
        .map(|i| window.trace(i))
        .collect();
    found.into_iter().collect()
}

/// `φ` is constant on classes and separates them: over all `k, k'` in
/// `{0..=bound, ∞}^ℓ`, agreement on `E_{bound+1}` holds iff `k ∼ k'`.
pub fn phi_injective_on_quotient(ell: usize, bound: u64) -> bool {
    let grid = ExtendedIndex::grid(ell, bound);
    let window = Idempotent::enumerate(ell, bound + 1);
    let profiles: Vec<Vec<bool>> = grid
        .iter()
        .map(|k| window.iter().map(|e| phi_eval(k, e)).collect())
        .collect();
    grid.iter().enumerate().all(|(a, k)| {
        grid.iter()
            .enumerate()
            .all(|(b, k2)| (profiles[a] == profiles[b]) == k.equivalent(k2))
    })
}

/// One point of the tight spectrum with its support in a window.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumPoint {
    pub index: ExtendedIndex,
    pub support: Vec<String>,
}

/// The canonical indices in `{0..=bound, ∞}^ℓ` with their supports in `E_bound`.
pub fn spectrum(ell: usize, bound: u64) -> Vec<SpectrumPoint> {
    ExtendedIndex::canonical_grid(ell, bound)
        .into_iter()
        .map(|k| {
            let support = filter_of(&Character::Tight(k.clone()), bound)
                .expect("every character contains the unit")
                .iter()
                .map(|e| e.element().to_string())
                .collect();
            SpectrumPoint { index: k, support }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use Entry::*;

    fn p(level: usize, m: &[u64]) -> Idempotent {
        Idempotent::new(level, m).unwrap()
    }

    #[test]
    fn phi_examples() {
        let k = ExtendedIndex::new([Fin(3), Inf]);
        assert!(phi_eval(&k, &p(1, &[2, 0])));
        assert!(!phi_eval(&k, &p(3, &[3, 5])));
        assert!(phi_eval(&ExtendedIndex::finite(&[2, 3]), &p(3, &[2, 3])));
        assert!(!phi_eval_element(&k, &TElement::Zero));
    }

    #[test]
    fn phi_matches_the_support_description() {
        // φ(k)(e) = 1 iff e >= p_{r+1}(π_r(k), n) for some n, where r = first infinity.
        for ell in 1..=2 {
            for k in ExtendedIndex::grid(ell, 2) {
                let r = k.first_infinity();
                for e in Idempotent::enumerate(ell, 3) {
                    let dominated = crate::semigroup::tuples(ell - r.min(ell), 4).iter().any(|tail| {
                        let mut m = k.prefix(r);
                        m.extend(tail);
                        m.resize(ell, 0);
                        p(r + 1, &m).leq(&e)
                    });
                    assert_eq!(phi_eval(&k, &e), dominated, "k={k} e={e}");
                }
            }
        }
    }

    #[test]
    fn tight_characters_are_characters() {
        for ell in 1..=2 {
            let window = Idempotent::enumerate(ell, 3);
            for k in ExtendedIndex::grid(ell, 2) {
                for e in &window {
                    for f in &window {
                        let ef = e.meet(f).is_some_and(|g| phi_eval(&k, &g));
                        assert_eq!(ef, phi_eval(&k, e) && phi_eval(&k, f));
                    }
                }
                assert!(window.iter().any(|e| phi_eval(&k, e)));
            }
        }
    }

    #[test]
    fn filter_examples() {
        let x = Character::Tight(ExtendedIndex::zero(2));
        assert!(filter_of(&x, 1).unwrap().contains(&p(3, &[0, 0])));

        let x = Character::Tight(ExtendedIndex::new([Fin(3), Inf]));
        let got = filter_of(&x, 4).unwrap();
        let mut want = BTreeSet::new();
        for m1 in 0..=3 {
            want.insert(p(1, &[m1, 0]));
        }
        for u in 0..=4 {
            want.insert(p(2, &[3, u]));
        }
        assert_eq!(got, want);
        assert!(is_filter(&got, 2, 4));
    }

    #[test]
    fn generated_characters() {
        let x = Character::generated(2, &[p(1, &[0, 0])]).unwrap();
        assert!(!is_ultrafilter_at(&x, 2));
        let y = Character::generated(2, &[p(2, &[1, 3]), p(1, &[1, 0])]).unwrap();
        assert_eq!(
            y,
            Character::Generated {
                ell: 2,
                least: p(2, &[1, 3])
            }
        );
        assert_eq!(
            Character::generated(2, &[p(3, &[1, 1]), p(3, &[1, 2])]),
            Err(Error::ZeroCharacter)
        );
    }

    #[test]
    fn ultrafilter_examples() {
        assert!(is_ultrafilter_at(&Character::Tight(ExtendedIndex::zero(2)), 2));
        assert!(is_ultrafilter_at(&Character::Tight(ExtendedIndex::infinite(2)), 2));
        assert!(is_ultrafilter_at(
            &Character::Tight(ExtendedIndex::new([Fin(1), Inf])),
            2
        ));
    }

    #[test]
    fn injective_on_quotient() {
        assert!(phi_injective_on_quotient(1, 2));
        assert!(phi_injective_on_quotient(2, 2));
    }

    #[test]
    fn continuity_along_diverging_sequences() {
        // (1, n) -> (1, ∞) and (n, 0) -> (∞, ∞) as n grows.
        let window = Idempotent::enumerate(2, 4);
        let limits = [
            (
                ExtendedIndex::new([Fin(1), Inf]),
                Box::new(|n: u64| ExtendedIndex::finite(&[1, n])) as Box<dyn Fn(u64) -> ExtendedIndex>,
            ),
            (
                ExtendedIndex::infinite(2),
                Box::new(|n: u64| ExtendedIndex::finite(&[n, 0])),
            ),
            (
                ExtendedIndex::infinite(2),
                Box::new(|n: u64| ExtendedIndex::new([Fin(n), Inf])),
            ),
        ];
        for (limit, seq) in &limits {
            for e in &window {
                let want = phi_eval(limit, e);
                for n in 5..12 {
                    assert_eq!(phi_eval(&seq(n), e), want, "n={n} e={e}");
                }
            }
        }
    }
}
