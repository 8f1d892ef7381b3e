//! Points of `N̄^ℓ = (ℕ ∪ {∞})^ℓ`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

/// One coordinate of an [`ExtendedIndex`]. `Fin(_) < Inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Entry {
    Fin(u64),
    Inf,
}

impl Entry {
    pub fn is_inf(self) -> bool {
        self == Entry::Inf
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Entry::Fin(v) => Some(v),
            Entry::Inf => None,
        }
    }

    /// Translation by an integer; `∞ + x = ∞`. `None` if the result is negative.
    pub fn shifted(self, by: i64) -> Option<Entry> {
        match self {
            Entry::Inf => Some(Entry::Inf),
            Entry::Fin(v) => {
                let s = v as i64 + by;
                (s >= 0).then_some(Entry::Fin(s as u64))
            }
        }
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entry::Fin(v) => write!(f, "{v}"),
            Entry::Inf => write!(f, "inf"),
        }
    }
}

impl Serialize for Entry {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Entry::Fin(v) => s.serialize_u64(*v),
            Entry::Inf => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Entry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Entry::Fin(v)),
            Raw::Str(s) if s == "inf" => Ok(Entry::Inf),
            Raw::Str(s) => Err(serde::de::Error::custom(format!(
                "expected a number or \"inf\", got {s:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExtendedIndex(SmallVec<[Entry; 4]>);

impl ExtendedIndex {
    pub fn new<I: IntoIterator<Item = Entry>>(entries: I) -> Self {
        ExtendedIndex(entries.into_iter().collect())
    }

    pub fn finite(values: &[u64]) -> Self {
        Self::new(values.iter().map(|&v| Entry::Fin(v)))
    }

    pub fn infinite(ell: usize) -> Self {
        Self::new(std::iter::repeat_n(Entry::Inf, ell))
    }

    pub fn zero(ell: usize) -> Self {
        Self::new(std::iter::repeat_n(Entry::Fin(0), ell))
    }

    pub fn ell(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.0
    }

    pub fn get(&self, i: usize) -> Entry {
        self.0[i]
    }

    /// The least `r >= 0` with `k_{r+1} = ∞`, taking `k_{ℓ+1} = ∞`.
    pub fn first_infinity(&self) -> usize {
        self.0.iter().position(|e| e.is_inf()).unwrap_or(self.ell())
    }

    /// The first `r` coordinates, all finite when `r <= first_infinity()`.
    pub fn prefix(&self, r: usize) -> Vec<u64> {
        self.0[..r]
            .iter()
            .map(|e| e.finite().expect("prefix before the first infinity"))
            .collect()
    }

    /// Every entry after the first `∞` set to `∞`.
    pub fn canonical(&self) -> Self {
        let r = self.first_infinity();
        Self::new(
            self.0
                .iter()
                .enumerate()
                .map(|(i, &e)| if i > r { Entry::Inf } else { e }),
        )
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonical()
    }

    /// Agreement up to and including the first `∞`.
    pub fn equivalent(&self, other: &ExtendedIndex) -> bool {
        let r = self.first_infinity();
        self.ell() == other.ell() && r == other.first_infinity() && self.0[..r] == other.0[..r]
    }

    /// The relation as literally stated: some `r >= 0` with
    /// `π_r(k) = π_r(k')` and `k_{r+1} = k'_{r+1}`. It relates distinct finite
    /// tuples such as `(1,2)` and `(1,5)` (take `r = 0`), so it is not the
    /// kernel of `φ`; kept only to document that.
    pub fn equivalent_verbatim(&self, other: &ExtendedIndex) -> bool {
        if self.ell() != other.ell() {
            return false;
        }
        let ell = self.ell();
        let at = |k: &ExtendedIndex, i: usize| if i < ell { k.0[i] } else { Entry::Inf };
        (0..=ell).any(|r| self.0[..r] == other.0[..r] && at(self, r) == at(other, r))
    }

    /// Largest finite entry, 0 if there is none.
    pub fn max_finite(&self) -> u64 {
        self.0.iter().filter_map(|e| e.finite()).max().unwrap_or(0)
    }

    /// Coordinatewise translation; `None` if some coordinate leaves `N̄`.
    pub fn translated(&self, by: &[i64]) -> Option<ExtendedIndex> {
        self.0
            .iter()
            .zip(by)
            .map(|(e, &x)| e.shifted(x))
            .collect::<Option<SmallVec<_>>>()
            .map(ExtendedIndex)
    }

    /// All of `{0..=bound, ∞}^ℓ`.
    pub fn grid(ell: usize, bound: u64) -> Vec<ExtendedIndex> {
        let values: Vec<Entry> = (0..=bound).map(Entry::Fin).chain([Entry::Inf]).collect();
        let mut out = vec![ExtendedIndex::new([])];
        for _ in 0..ell {
            out = out
                .into_iter()
                .flat_map(|k| {
                    values.iter().map(move |&v| {
                        let mut k = k.clone();
                        k.0.push(v);
                        k
                    })
                })
                .collect();
        }
        out
    }

    /// The canonical members of [`ExtendedIndex::grid`], sorted.
    pub fn canonical_grid(ell: usize, bound: u64) -> Vec<ExtendedIndex> {
        let mut out: Vec<_> = Self::grid(ell, bound)
            .into_iter()
            .filter(ExtendedIndex::is_canonical)
            .collect();
        out.sort();
        out
    }
}

impl fmt::Display for ExtendedIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}
