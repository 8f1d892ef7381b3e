//! The inverse semigroup `T = {0} ∪ {B_i(r, m, n)}` of partial isometries on
//! `ℓ²(ℕ)^{⊗ℓ} ⊗ ℓ²(ℤ)`.
//!
//! For `i <= ℓ`,
//!
//! ```text
//! B_i(r, m, n) = S^{*m_1}pS^{n_1} ⊗ … ⊗ S^{*m_{i-1}}pS^{n_{i-1}} ⊗ S^{*m_i}S^{n_i} ⊗ 1 ⊗ t^{Σ_{j<=i}(m_j-n_j)}
//! ```
//!
//! which does not depend on `r` or on the entries of `m`, `n` past `i`; the
//! canonical form zeroes them. For `i = ℓ+1` every leg is pinched and the
//! `t`-exponent is `r + Σ_j (m_j - n_j)`.
//!
//! Multiplication goes through [`Monomial`]: both operands are expanded, the
//! words are composed leg by leg and the product is read back. That the product
//! is always T-shaped is checked, not assumed.

pub mod relations;

use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::monomial::{Monomial, PrimitiveFactor};

pub type Exps = SmallVec<[u64; 4]>;

/// A non-zero element `B_level(r, m, n)` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BElement {
    level: usize,
    r: i64,
    m: Exps,
    n: Exps,
}

impl BElement {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn m(&self) -> &[u64] {
        &self.m
    }

    pub fn n(&self) -> &[u64] {
        &self.n
    }

    pub fn ell(&self) -> usize {
        self.m.len()
    }

    /// Exponent of `t` in the expanded word.
    pub fn z_exp(&self) -> i64 {
        let upto = self.level.min(self.ell());
        let diff: i64 = (0..upto).map(|j| self.m[j] as i64 - self.n[j] as i64).sum();
        if self.level == self.ell() + 1 {
            self.r + diff
        } else {
            diff
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TElement {
    Zero,
    B(BElement),
}

impl TElement {
    /// `B_level(r, m, n)`, canonicalized.
    pub fn new(level: usize, r: i64, m: &[u64], n: &[u64]) -> Result<TElement> {
        let ell = m.len();
        if n.len() != ell {
            return Err(Error::DimensionMismatch {
                expected: ell,
                found: n.len(),
            });
        }
        if ell == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if level == 0 || level > ell + 1 {
            return Err(Error::LevelOutOfRange { level, max: ell + 1 });
        }
        let mut m: Exps = m.iter().copied().collect();
        let mut n: Exps = n.iter().copied().collect();
        let mut r = r;
        if level <= ell {
            r = 0;
            for j in level..ell {
                m[j] = 0;
                n[j] = 0;
            }
        }
        Ok(TElement::B(BElement { level, r, m, n }))
    }

    /// The unit `B_1(0, 0, 0)`.
    pub fn identity(ell: usize) -> TElement {
        let zeros = vec![0; ell];
        TElement::new(1, 0, &zeros, &zeros).expect("ell >= 1")
    }

    /// `Z_k`: `B_k(0, e_k, 0)` for `k <= ℓ` and `B_{ℓ+1}(1, 0, 0)`.
    pub fn generator(ell: usize, k: usize) -> Result<TElement> {
        if k == 0 || k > ell + 1 {
            return Err(Error::GeneratorOutOfRange { index: k, max: ell + 1 });
        }
        let zeros = vec![0; ell];
        if k == ell + 1 {
            return TElement::new(k, 1, &zeros, &zeros);
        }
        let mut e = zeros.clone();
        e[k - 1] = 1;
        TElement::new(k, 0, &e, &zeros)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, TElement::Zero)
    }

    pub fn as_b(&self) -> Option<&BElement> {
        match self {
            TElement::Zero => None,
            TElement::B(b) => Some(b),
        }
    }

    pub fn ell(&self) -> Option<usize> {
        self.as_b().map(BElement::ell)
    }

    pub fn level(&self) -> Option<usize> {
        self.as_b().map(BElement::level)
    }

    /// Largest entry of `m`, `n` and `|r|`; 0 for the zero element.
    pub fn max_index(&self) -> u64 {
        match self {
            TElement::Zero => 0,
            TElement::B(b) => {
                b.m.iter()
                    .chain(b.n.iter())
                    .copied()
                    .chain(std::iter::once(b.r.unsigned_abs()))
                    .max()
                    .unwrap_or(0)
            }
        }
    }

    pub fn to_monomial(&self) -> Monomial {
        let b = match self {
            TElement::Zero => return Monomial::Zero,
            TElement::B(b) => b,
        };
        let ell = b.ell();
        let factors = (0..ell).map(|j| {
            if j + 1 < b.level {
                PrimitiveFactor::Pinched(b.m[j], b.n[j])
            } else if j + 1 == b.level {
                PrimitiveFactor::free(b.m[j], b.n[j])
            } else {
                PrimitiveFactor::Identity
            }
        });
        Monomial::new(factors, b.z_exp())
    }

    /// Reads a T-shaped word back: pinched prefix, one free leg, identity tail,
    /// with the `t`-exponent the prefix forces (any exponent when fully pinched).
    pub fn from_monomial(x: &Monomial) -> Result<TElement> {
        let w = match x.as_word() {
            None => return Ok(TElement::Zero),
            Some(w) => w,
        };
        let ell = w.ell();
        let not_in_t = || Error::NotInT(x.to_string());
        let mut m = Exps::from_elem(0, ell);
        let mut n = Exps::from_elem(0, ell);
        let mut level = ell + 1;
        for (j, f) in w.factors().iter().enumerate() {
            if level <= ell {
                if *f != PrimitiveFactor::Identity {
                    return Err(not_in_t());
                }
                continue;
            }
            match *f {
                PrimitiveFactor::Pinched(a, b) => {
                    m[j] = a;
                    n[j] = b;
                }
                PrimitiveFactor::Free(a, b) => {
                    m[j] = a;
                    n[j] = b;
                    level = j + 1;
                }
                PrimitiveFactor::Identity => level = j + 1,
            }
        }
        let upto = level.min(ell);
        let diff: i64 = (0..upto).map(|j| m[j] as i64 - n[j] as i64).sum();
        let r = if level == ell + 1 {
            w.z_exp() - diff
        } else {
            if w.z_exp() != diff {
                return Err(not_in_t());
            }
            0
        };
        TElement::new(level, r, &m, &n)
    }

    pub fn mul(&self, other: &TElement) -> Result<TElement> {
        if let (Some(a), Some(b)) = (self.ell(), other.ell()) {
            if a != b {
                return Err(Error::DimensionMismatch { expected: a, found: b });
            }
        }
        TElement::from_monomial(&self.to_monomial().mul(&other.to_monomial())?)
    }

    /// `B_i(r, m, n)^* = B_i(-r, n, m)`.
    pub fn star(&self) -> TElement {
        match self {
            TElement::Zero => TElement::Zero,
            TElement::B(b) => TElement::new(b.level, -b.r, &b.n, &b.m).expect("valid"),
        }
    }

    pub fn is_idempotent(&self) -> bool {
        *self == self.star() && self.mul(self).as_ref() == Ok(self)
    }

    /// Writes the element as a product of generators and their adjoints.
    ///
    /// For a level `i <= ℓ` element this is `Z_1^{m_1}⋯Z_i^{m_i} Z_i^{*n_i}⋯Z_1^{*n_1}`,
    /// except that when `i >= 2` and `m_i = n_i = 0` the middle needs the
    /// projection `Z_i^* Z_i = p ⊗ … ⊗ p ⊗ 1` to pin the first `i-1` legs.
    /// For level `ℓ+1` the middle is `Z_{ℓ+1}^r` or `(Z_{ℓ+1}^*)^{-r}`, and
    /// `Z_{ℓ+1} Z_{ℓ+1}^*` when `r = 0`.
    pub fn word(&self) -> Option<Vec<Letter>> {
        let b = self.as_b()?;
        let ell = b.ell();
        let i = b.level;
        let mut out = Vec::new();
        let upto = i.min(ell);
        for j in 0..upto {
            out.extend(std::iter::repeat_n(Letter::z(j + 1), b.m[j] as usize));
        }
        if i == ell + 1 {
            let g = ell + 1;
            if b.r > 0 {
                out.extend(std::iter::repeat_n(Letter::z(g), b.r as usize));
            } else if b.r < 0 {
                out.extend(std::iter::repeat_n(Letter::z_star(g), (-b.r) as usize));
            } else {
                out.push(Letter::z(g));
                out.push(Letter::z_star(g));
            }
        } else if i >= 2 && b.m[i - 1] == 0 && b.n[i - 1] == 0 {
            out.push(Letter::z_star(i));
            out.push(Letter::z(i));
        }
        for j in (0..upto).rev() {
            out.extend(std::iter::repeat_n(Letter::z_star(j + 1), b.n[j] as usize));
        }
        Some(out)
    }

    /// Every element with level in `1..=ℓ+1`, entries of `m`, `n` at most
    /// `max_index` and `|r| <= max_r`, preceded by zero.
    pub fn enumerate(ell: usize, max_index: u64, max_r: i64) -> Vec<TElement> {
        let mut out = vec![TElement::Zero];
        for level in 1..=ell + 1 {
            let free = level.min(ell);
            let tuples = tuples(free, max_index);
            let rs: Vec<i64> = if level == ell + 1 {
                (-max_r..=max_r).collect()
            } else {
                vec![0]
            };
            for m in &tuples {
                for n in &tuples {
                    for &r in &rs {
                        let mut mm = m.clone();
                        let mut nn = n.clone();
                        mm.resize(ell, 0);
                        nn.resize(ell, 0);
                        out.push(TElement::new(level, r, &mm, &nn).expect("in range"));
                    }
                }
            }
        }
        out
    }
}

/// All tuples of length `len` with entries in `0..=max`, in lexicographic order.
pub(crate) fn tuples(len: usize, max: u64) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..=max).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

impl fmt::Display for TElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TElement::Zero => write!(f, "0"),
            TElement::B(b) => {
                let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
                write!(f, "B[{};{};{};{}]", b.level, b.r, join(&b.m), join(&b.n))
            }
        }
    }
}

/// A generator `Z_k` or its adjoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub index: usize,
    pub star: bool,
}

impl Letter {
    pub fn z(index: usize) -> Self {
        Letter { index, star: false }
    }

    pub fn z_star(index: usize) -> Self {
        Letter { index, star: true }
    }

    pub fn element(self, ell: usize) -> Result<TElement> {
        let g = TElement::generator(ell, self.index)?;
        Ok(if self.star { g.star() } else { g })
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.star {
            write!(f, "Z*[{}]", self.index)
        } else {
            write!(f, "Z[{}]", self.index)
        }
    }
}

/// Multiplies a word out left to right; the empty word is the unit.
pub fn eval_word(ell: usize, word: &[Letter]) -> Result<TElement> {
    word.iter()
        .try_fold(TElement::identity(ell), |acc, l| acc.mul(&l.element(ell)?))
}

/// A projection `p_level(m) = B_level(0, m, m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Idempotent {
    level: usize,
    m: Exps,
}

impl Idempotent {
    pub fn new(level: usize, m: &[u64]) -> Result<Idempotent> {
        let ell = m.len();
        if level == 0 || level > ell + 1 {
            return Err(Error::LevelOutOfRange { level, max: ell + 1 });
        }
        let mut m: Exps = m.iter().copied().collect();
        for j in level.min(ell)..ell {
            m[j] = 0;
        }
        Ok(Idempotent { level, m })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn m(&self) -> &[u64] {
        &self.m
    }

    pub fn ell(&self) -> usize {
        self.m.len()
    }

    pub fn element(&self) -> TElement {
        TElement::new(self.level, 0, &self.m, &self.m).expect("valid")
    }

    pub fn from_element(e: &TElement) -> Option<Idempotent> {
        let b = e.as_b()?;
        if b.r != 0 || b.m != b.n {
            return None;
        }
        Some(Idempotent {
            level: b.level,
            m: b.m.clone(),
        })
    }

    /// `self · other`, `None` when the product is 0.
    pub fn meet(&self, other: &Idempotent) -> Option<Idempotent> {
        let p = self.element().mul(&other.element()).expect("same ell");
        Idempotent::from_element(&p)
    }

    /// The order of `E`: `e <= f` iff `e·f = e`.
    pub fn leq(&self, other: &Idempotent) -> bool {
        self.meet(other).as_ref() == Some(self)
    }

    /// All of `p_i(m)` with entries `<= bound`, levels ascending.
    pub fn enumerate(ell: usize, bound: u64) -> Vec<Idempotent> {
        let mut out = Vec::new();
        for level in 1..=ell + 1 {
            for mut m in tuples(level.min(ell), bound) {
                m.resize(ell, 0);
                out.push(Idempotent::new(level, &m).expect("in range"));
            }
        }
        out
    }
}

impl fmt::Display for Idempotent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<_> = self.m.iter().map(u64::to_string).collect();
        write!(f, "p_{}({})", self.level, m.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::PrimitiveFactor::*;

    fn b(level: usize, r: i64, m: &[u64], n: &[u64]) -> TElement {
        TElement::new(level, r, m, n).unwrap()
    }

    #[test]
    fn canonical_form_drops_irrelevant_parameters() {
        assert_eq!(b(1, 5, &[2, 7], &[1, 3]), b(1, 0, &[2, 0], &[1, 0]));
        assert_eq!(b(2, -4, &[2, 7], &[1, 3]), b(2, 0, &[2, 7], &[1, 3]));
        assert_ne!(b(3, -4, &[2, 7], &[1, 3]), b(3, 0, &[2, 7], &[1, 3]));
    }

    #[test]
    fn to_monomial_examples() {
        assert_eq!(b(1, 0, &[0, 0], &[0, 0]).to_monomial(), Monomial::identity(2));
        assert_eq!(
            b(2, 0, &[1, 0], &[0, 2]).to_monomial(),
            Monomial::new([Pinched(1, 0), Free(0, 2)], -1)
        );
        assert_eq!(
            b(3, 2, &[1, 0], &[0, 2]).to_monomial(),
            Monomial::new([Pinched(1, 0), Pinched(0, 2)], 1)
        );
    }

    #[test]
    fn from_monomial_rejects_non_t_shapes() {
        let bad = [
            Monomial::new([Identity, Free(1, 0)], 1),
            Monomial::new([Free(1, 0), Pinched(0, 0)], 1),
            Monomial::new([Pinched(1, 0), Identity], 0),
        ];
        for x in bad {
            assert!(matches!(TElement::from_monomial(&x), Err(Error::NotInT(_))), "{x}");
        }
        assert_eq!(TElement::from_monomial(&Monomial::Zero), Ok(TElement::Zero));
    }

    #[test]
    fn top_level_kronecker_relation() {
        let s = b(3, 1, &[0, 0], &[1, 0]);
        assert_eq!(s.mul(&b(3, 2, &[1, 0], &[2, 2])).unwrap(), b(3, 3, &[0, 0], &[2, 2]));
        assert_eq!(s.mul(&b(3, 2, &[0, 0], &[2, 2])).unwrap(), TElement::Zero);
    }

    #[test]
    fn level_one_times_level_two() {
        let got = b(1, 0, &[2, 0], &[1, 0]).mul(&b(2, 0, &[3, 1], &[0, 2])).unwrap();
        assert_eq!(got, b(2, 0, &[4, 1], &[0, 2]));
    }

    #[test]
    fn star_examples() {
        assert_eq!(TElement::Zero.star(), TElement::Zero);
        assert_eq!(TElement::identity(2).star(), TElement::identity(2));
        assert_eq!(b(3, 2, &[1, 0], &[0, 2]).star(), b(3, -2, &[0, 2], &[1, 0]));
    }

    #[test]
    fn generators() {
        assert_eq!(TElement::generator(2, 1).unwrap(), b(1, 0, &[1, 0], &[0, 0]));
        assert_eq!(TElement::generator(2, 3).unwrap(), b(3, 1, &[0, 0], &[0, 0]));
        let z1 = TElement::generator(2, 1).unwrap();
        let z2 = TElement::generator(2, 2).unwrap();
        assert_eq!(z1.star().mul(&z2).unwrap(), TElement::Zero);
        assert!(TElement::generator(2, 4).is_err());
        assert!(TElement::generator(2, 0).is_err());
    }

    #[test]
    fn mixing_dimensions_is_an_error() {
        let e = TElement::identity(2).mul(&TElement::identity(3)).unwrap_err();
        assert!(matches!(e, Error::DimensionMismatch { .. }));
        assert_eq!(TElement::Zero.mul(&TElement::identity(3)), Ok(TElement::Zero));
    }

    #[test]
    fn word_examples() {
        assert_eq!(TElement::identity(2).word().unwrap(), vec![]);
        let down = b(3, -2, &[0, 0], &[0, 0]);
        assert_eq!(down.word().unwrap(), vec![Letter::z_star(3); 2]);
        assert_eq!(eval_word(2, &down.word().unwrap()).unwrap(), down);
        // Z_1 alone is B_1(0,(1,0),(0,0)); pinning the first leg needs Z_2^* Z_2.
        let s = b(2, 0, &[1, 0], &[0, 0]);
        assert_ne!(TElement::generator(2, 1).unwrap(), s);
        let w = s.word().unwrap();
        assert_eq!(w, vec![Letter::z(1), Letter::z_star(2), Letter::z(2)]);
        assert_eq!(eval_word(2, &w).unwrap(), s);
        assert!(TElement::Zero.word().is_none());
    }

    #[test]
    fn word_round_trip_on_enumeration() {
        for ell in 1..=3 {
            for s in TElement::enumerate(ell, 2, 2).into_iter().skip(1) {
                let w = s.word().unwrap();
                assert_eq!(eval_word(ell, &w).unwrap(), s, "word for {s}");
            }
        }
    }

    #[test]
    fn idempotents_are_the_p_i() {
        let els = TElement::enumerate(2, 2, 2);
        let found: Vec<_> = els.iter().filter(|e| e.is_idempotent()).cloned().collect();
        let mut want = vec![TElement::Zero];
        want.extend(Idempotent::enumerate(2, 2).iter().map(Idempotent::element));
        let mut found_sorted = found.clone();
        found_sorted.sort();
        want.sort();
        assert_eq!(found_sorted, want);
    }

    #[test]
    fn idempotent_order() {
        let top = Idempotent::new(1, &[0, 0]).unwrap();
        let a = Idempotent::new(2, &[3, 1]).unwrap();
        let atom = Idempotent::new(3, &[3, 4]).unwrap();
        assert!(a.leq(&top));
        assert!(atom.leq(&a));
        assert!(!a.leq(&atom));
        assert_eq!(a.meet(&Idempotent::new(3, &[2, 4]).unwrap()), None);
    }

    #[test]
    fn display() {
        assert_eq!(b(3, 1, &[0, 0], &[1, 0]).to_string(), "B[3;1;0,0;1,0]");
        assert_eq!(TElement::Zero.to_string(), "0");
    }
}
