//! Tensor words in the primitive partial isometries of `ℓ²(ℕ)` and the
//! bilateral shift of `ℓ²(ℤ)`.
//!
//! With `S` the unilateral (left) shift, `S e_{j+1} = e_j`, and `p = |e_0⟩⟨e_0|`,
//! every leg of a word is one of
//!
//! * `Pinched(a, b) = S^{*a} p S^b = |e_a⟩⟨e_b|`,
//! * `Free(a, b) = S^{*a} S^b`, which sends `e_j` to `e_{j-b+a}` for `j >= b`,
//! * `Identity`.
//!
//! A [`Monomial`] is `ℓ` such legs tensored with `t^z`, or the absorbing zero.

use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Factors = SmallVec<[PrimitiveFactor; 4]>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimitiveFactor {
    /// `S^{*a} p S^b`
    Pinched(u64, u64),
    /// `S^{*a} S^b`; never `Free(0, 0)` once canonical.
    Free(u64, u64),
    Identity,
}

use PrimitiveFactor::*;

impl PrimitiveFactor {
    /// `S^{*a} S^b` in canonical form.
    pub fn free(a: u64, b: u64) -> Self {
        if a == 0 && b == 0 {
            Identity
        } else {
            Free(a, b)
        }
    }

    pub fn canonical(self) -> Self {
        match self {
            Free(0, 0) => Identity,
            f => f,
        }
    }

    /// The operator product `self · other`, or `None` when it vanishes.
    pub fn compose(self, other: Self) -> Option<Self> {
        let out = match (self.canonical(), other.canonical()) {
            (Identity, g) => g,
            (f, Identity) => f,
            (Pinched(a, b), Pinched(c, d)) => {
                if b != c {
                    return None;
                }
                Pinched(a, d)
            }
            (Free(a, b), Free(c, d)) => Self::free(a + c.saturating_sub(b), d + b.saturating_sub(c)),
            (Free(a, b), Pinched(c, d)) => {
                if c < b {
                    return None;
                }
                Pinched(a + c - b, d)
            }
            (Pinched(a, b), Free(c, d)) => {
                if c > b {
                    return None;
                }
                Pinched(a, b - c + d)
            }
        };
        Some(out)
    }

    pub fn adjoint(self) -> Self {
        match self {
            Pinched(a, b) => Pinched(b, a),
            Free(a, b) => Free(b, a),
            Identity => Identity,
        }
    }

    /// Largest shift exponent appearing in the factor.
    pub fn max_exponent(self) -> u64 {
        match self {
            Pinched(a, b) | Free(a, b) => a.max(b),
            Identity => 0,
        }
    }
}

impl fmt::Display for PrimitiveFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.canonical() {
            Pinched(a, b) => write!(f, "P({a},{b})"),
            Free(a, b) => write!(f, "F({a},{b})"),
            Identity => write!(f, "I"),
        }
    }
}

/// A non-zero word: `factors[0] ⊗ … ⊗ factors[ℓ-1] ⊗ t^{z_exp}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    factors: Factors,
    z_exp: i64,
}

impl Word {
    pub fn factors(&self) -> &[PrimitiveFactor] {
        &self.factors
    }

    pub fn z_exp(&self) -> i64 {
        self.z_exp
    }

    pub fn ell(&self) -> usize {
        self.factors.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Monomial {
    Zero,
    Word(Word),
}

impl Monomial {
    pub fn new<I>(factors: I, z_exp: i64) -> Self
    where
        I: IntoIterator<Item = PrimitiveFactor>,
    {
        let factors = factors.into_iter().map(PrimitiveFactor::canonical).collect();
        Monomial::Word(Word { factors, z_exp })
    }

    pub fn identity(ell: usize) -> Self {
        Self::new(std::iter::repeat_n(Identity, ell), 0)
    }

    /// The power `t^z` of the bilateral shift, identity on the `ℕ` legs.
    pub fn shift(ell: usize, z: i64) -> Self {
        Self::new(std::iter::repeat_n(Identity, ell), z)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Monomial::Zero)
    }

    /// Number of `ℓ²(ℕ)` legs; `None` for the zero word, which is shared by every `ℓ`.
    pub fn ell(&self) -> Option<usize> {
        match self {
            Monomial::Zero => None,
            Monomial::Word(w) => Some(w.ell()),
        }
    }

    pub fn as_word(&self) -> Option<&Word> {
        match self {
            Monomial::Zero => None,
            Monomial::Word(w) => Some(w),
        }
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        let (x, y) = match (self, other) {
            (Monomial::Word(x), Monomial::Word(y)) => (x, y),
            _ => return Ok(Monomial::Zero),
        };
        if x.ell() != y.ell() {
            return Err(Error::DimensionMismatch {
                expected: x.ell(),
                found: y.ell(),
            });
        }
        let mut factors = Factors::with_capacity(x.ell());
        for (f, g) in x.factors.iter().zip(&y.factors) {
            match f.compose(*g) {
                Some(h) => factors.push(h),
                None => return Ok(Monomial::Zero),
            }
        }
        Ok(Monomial::Word(Word {
            factors,
            z_exp: x.z_exp + y.z_exp,
        }))
    }

    pub fn adjoint(&self) -> Monomial {
        match self {
            Monomial::Zero => Monomial::Zero,
            Monomial::Word(w) => Monomial::Word(Word {
                factors: w.factors.iter().map(|f| f.adjoint()).collect(),
                z_exp: -w.z_exp,
            }),
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Monomial::Zero => write!(f, "ZERO"),
            Monomial::Word(w) => {
                write!(f, "[")?;
                for (i, factor) in w.factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, "|")?;
                    }
                    write!(f, "{factor}")?;
                }
                write!(f, "]*t^{}", w.z_exp)
            }
        }
    }
}

/// Every canonical factor with exponents `<= max`.
pub fn all_factors(max: u64) -> Vec<PrimitiveFactor> {
    let mut out = vec![Identity];
    for a in 0..=max {
        for b in 0..=max {
            out.push(Pinched(a, b));
            if a + b > 0 {
                out.push(Free(a, b));
            }
        }
    }
    out
}

/// Every non-zero monomial over `ell` legs with factor exponents `<= max` and
/// `|z| <= max_z`, plus the zero word.
pub fn all_monomials(ell: usize, max: u64, max_z: i64) -> Vec<Monomial> {
    let factors = all_factors(max);
    let mut words: Vec<Factors> = vec![Factors::new()];
    for _ in 0..ell {
        words = words
            .into_iter()
            .flat_map(|w| {
                factors.iter().map(move |f| {
                    let mut w = w.clone();
                    w.push(*f);
                    w
                })
            })
            .collect();
    }
    let mut out = vec![Monomial::Zero];
    for w in words {
        for z in -max_z..=max_z {
            out.push(Monomial::new(w.iter().copied(), z));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Dense `n×n` matrices of the primitives on `span{e_0..e_{n-1}}`, built from
    /// `S`, `S*` and `p` only.
    mod dense {
        pub type Mat = Vec<Vec<i64>>;

        pub fn ident(n: usize) -> Mat {
            (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect()
        }

        pub fn mul(a: &Mat, b: &Mat) -> Mat {
            let n = a.len();
            let mut c = vec![vec![0; n]; n];
            for i in 0..n {
                for k in 0..n {
                    if a[i][k] != 0 {
                        for j in 0..n {
                            c[i][j] += a[i][k] * b[k][j];
                        }
                    }
                }
            }
            c
        }

        pub fn pow(a: &Mat, e: u64) -> Mat {
            (0..e).fold(ident(a.len()), |acc, _| mul(&acc, a))
        }

        /// `S e_{j+1} = e_j`: entry (j, j+1).
        pub fn s(n: usize) -> Mat {
            let mut m = vec![vec![0; n]; n];
            for j in 0..n - 1 {
                m[j][j + 1] = 1;
            }
            m
        }

        pub fn s_star(n: usize) -> Mat {
            let s = s(n);
            (0..n).map(|i| (0..n).map(|j| s[j][i]).collect()).collect()
        }

        pub fn p(n: usize) -> Mat {
            let mut m = vec![vec![0; n]; n];
            m[0][0] = 1;
            m
        }
    }

    fn dense_of(f: PrimitiveFactor, n: usize) -> dense::Mat {
        use dense::*;
        match f {
            Pinched(a, b) => mul(&mul(&pow(&s_star(n), a), &p(n)), &pow(&s(n), b)),
            Free(a, b) => mul(&pow(&s_star(n), a), &pow(&s(n), b)),
            Identity => ident(n),
        }
    }

    #[test]
    fn identity_is_neutral() {
        assert_eq!(Identity.compose(Free(2, 1)), Some(Free(2, 1)));
        assert_eq!(Free(2, 1).compose(Identity), Some(Free(2, 1)));
    }

    #[test]
    fn shift_kills_vacuum_projection() {
        // S·p = 0
        assert_eq!(Free(0, 1).compose(Pinched(0, 0)), None);
    }

    #[test]
    fn pinched_chain_read_off_dense_product() {
        let n = 8;
        let prod = dense::mul(&dense_of(Pinched(1, 2), n), &dense_of(Pinched(2, 3), n));
        let matches: Vec<_> = all_factors(4).into_iter().filter(|f| dense_of(*f, n) == prod).collect();
        assert_eq!(matches, vec![Pinched(1, 3)]);
        assert_eq!(Pinched(1, 2).compose(Pinched(2, 3)), Some(Pinched(1, 3)));
    }

    #[test]
    fn composition_table_matches_dense_matrices_away_from_the_edge() {
        // Exponents <= 3 move vectors by at most 6; columns 0..n-7 never hit the edge.
        let n = 16;
        let safe = n - 7;
        let factors = all_factors(3);
        for &f in &factors {
            for &g in &factors {
                let want = dense::mul(&dense_of(f, n), &dense_of(g, n));
                let got = match f.compose(g) {
                    Some(h) => dense_of(h, n),
                    None => vec![vec![0; n]; n],
                };
                for j in 0..safe {
                    for i in 0..n {
                        assert_eq!(got[i][j], want[i][j], "{f} · {g} at ({i},{j})");
                    }
                }
            }
        }
    }

    #[test]
    fn free_zero_zero_is_identity() {
        assert_eq!(PrimitiveFactor::free(0, 0), Identity);
        assert_eq!(Monomial::new([Free(0, 0), Identity], 0), Monomial::identity(2));
    }

    #[test]
    fn zero_absorbs() {
        let y = Monomial::new([Free(1, 0), Pinched(0, 2)], 3);
        assert_eq!(Monomial::Zero.mul(&y).unwrap(), Monomial::Zero);
        assert_eq!(y.mul(&Monomial::Zero).unwrap(), Monomial::Zero);
        assert_eq!(Monomial::identity(2).mul(&y).unwrap(), y);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let err = Monomial::identity(2).mul(&Monomial::identity(3)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, found: 3 });
    }

    #[test]
    fn adjoint_of_level_three_word() {
        // B_3(2,(1,0),(0,2)) = [P(1,0)|P(0,2)]*t^1
        let x = Monomial::new([Pinched(1, 0), Pinched(0, 2)], 1);
        let want = Monomial::new([Pinched(0, 1), Pinched(2, 0)], -1);
        assert_eq!(x.adjoint(), want);
        assert_eq!(Monomial::Zero.adjoint(), Monomial::Zero);
        assert_eq!(Monomial::identity(2).adjoint(), Monomial::identity(2));
    }

    #[test]
    fn display() {
        let x = Monomial::new([Pinched(1, 0), Free(2, 1)], -3);
        assert_eq!(x.to_string(), "[P(1,0)|F(2,1)]*t^-3");
        assert_eq!(Monomial::Zero.to_string(), "ZERO");
    }

    #[test]
    fn exhaustive_algebraic_laws() {
        for ell in 1..=2 {
            let max_z = if ell == 1 { 1 } else { 0 };
            let words = all_monomials(ell, 2, max_z);
            for x in &words {
                if let Some(w) = x.as_word() {
                    let xx = x.mul(&x.adjoint().mul(x).unwrap()).unwrap();
                    assert_eq!(&xx, x, "partial isometry law for {x} ({w:?})");
                }
                assert_eq!(x.adjoint().adjoint(), *x);
            }
            for x in &words {
                for y in &words {
                    let lhs = x.mul(y).unwrap().adjoint();
                    let rhs = y.adjoint().mul(&x.adjoint()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
            for x in &words {
                for y in &words {
                    let xy = x.mul(y).unwrap();
                    for z in &words {
                        assert_eq!(
                            xy.mul(z).unwrap(),
                            x.mul(&y.mul(z).unwrap()).unwrap(),
                            "associativity {x} {y} {z}"
                        );
                    }
                }
            }
        }
    }
}
