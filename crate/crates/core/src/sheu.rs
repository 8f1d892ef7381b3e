//! Sheu's groupoid: triples `(z, x, w) ∈ ℤ × ℤ^ℓ × N̄^ℓ` with `w + x >= 0`
//! such that whenever `w_i = ∞`, `x_j = 0` for `j > i` and `z = -(x_1 + … + x_i)`.
//!
//! Range `w`, source `w + x`; `(z, x, w)(z', x', w + x) = (z + z', x + x', w)` and
//! `(z, x, w)^{-1} = (-z, -x, w + x)`. Triples are identified with their
//! `∼`-canonical form, where `w` is canonical and `x` is zeroed after the
//! first infinity.

use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::groupoid::Arrow;
use crate::index::{Entry, ExtendedIndex};

pub type Shift = SmallVec<[i64; 4]>;

/// Membership of a raw triple, checked at every infinite coordinate of `w`.
pub fn is_member(z: i64, x: &[i64], w: &ExtendedIndex) -> bool {
    if x.len() != w.ell() {
        return false;
    }
    if w.translated(x).is_none() {
        return false;
    }
    let mut partial = 0i64;
    for (i, e) in w.entries().iter().enumerate() {
        partial += x[i];
        if e.is_inf() && (x[i + 1..].iter().any(|&v| v != 0) || z != -partial) {
            return false;
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SheuTriple {
    z: i64,
    x: Shift,
    w: ExtendedIndex,
}

impl SheuTriple {
    /// The class of `(z, x, w)`, in canonical form.
    pub fn new(z: i64, x: &[i64], w: ExtendedIndex) -> Result<SheuTriple> {
        if x.len() != w.ell() {
            return Err(Error::DimensionMismatch {
                expected: w.ell(),
                found: x.len(),
            });
        }
        if !is_member(z, x, &w) {
            return Err(Error::NotMember {
                z,
                x: format!("{x:?}"),
                w: w.to_string(),
            });
        }
        let r = w.first_infinity();
        let mut x: Shift = x.iter().copied().collect();
        for v in x.iter_mut().skip(r + 1) {
            *v = 0;
        }
        Ok(SheuTriple { z, x, w: w.canonical() })
    }

    pub fn unit(w: ExtendedIndex) -> SheuTriple {
        let ell = w.ell();
        SheuTriple::new(0, &vec![0; ell], w).expect("units are members")
    }

    pub fn z(&self) -> i64 {
        self.z
    }

    pub fn x(&self) -> &[i64] {
        &self.x
    }

    pub fn w(&self) -> &ExtendedIndex {
        &self.w
    }

    pub fn ell(&self) -> usize {
        self.w.ell()
    }

    pub fn range(&self) -> &ExtendedIndex {
        &self.w
    }

    pub fn source(&self) -> ExtendedIndex {
        self.w.translated(&self.x).expect("w + x >= 0").canonical()
    }

    pub fn is_unit(&self) -> bool {
        self.z == 0 && self.x.iter().all(|&v| v == 0)
    }

    pub fn compose(&self, other: &SheuTriple) -> Result<SheuTriple> {
        let src = self.source();
        if src != other.w {
            return Err(Error::NotComposable {
                source_index: src.to_string(),
                range: other.w.to_string(),
            });
        }
        let x: Shift = self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect();
        SheuTriple::new(self.z + other.z, &x, self.w.clone())
    }

    pub fn inverse(&self) -> SheuTriple {
        let x: Shift = self.x.iter().map(|v| -v).collect();
        SheuTriple::new(-self.z, &x, self.source()).expect("inverse of a member")
    }

    /// Canonical triples with `|z| <= bz`, `|x_i| <= bx` and `w ∈ {0..=bw, ∞}^ℓ`.
    pub fn enumerate(ell: usize, bz: i64, bx: i64, bw: u64) -> Vec<SheuTriple> {
        let mut out = Vec::new();
        for w in ExtendedIndex::canonical_grid(ell, bw) {
            let r = w.first_infinity();
            // only x_1..x_{r+1} are free; z is forced when r < ℓ
            let free = (r + 1).min(ell);
            let mut xs: Vec<Vec<i64>> = vec![vec![]];
            for i in 0..ell {
                let lo = match w.get(i) {
                    Entry::Fin(v) => (-(v as i64)).max(-bx),
                    Entry::Inf => -bx,
                };
                let range: Vec<i64> = if i < free { (lo..=bx).collect() } else { vec![0] };
                xs = xs
                    .into_iter()
                    .flat_map(|p| {
                        range.iter().map(move |&v| {
                            let mut p = p.clone();
                            p.push(v);
                            p
                        })
                    })
                    .collect();
            }
            for x in xs {
                if r < ell {
                    let z = -x[..=r].iter().sum::<i64>();
                    if z.abs() <= bz {
                        out.push(SheuTriple::new(z, &x, w.clone()).expect("constructed as a member"));
                    }
                } else {
                    for z in -bz..=bz {
                        out.push(SheuTriple::new(z, &x, w.clone()).expect("constructed as a member"));
                    }
                }
            }
        }
        out
    }
}

impl Arrow for SheuTriple {
    type Unit = ExtendedIndex;

    fn range(&self) -> ExtendedIndex {
        self.w.clone()
    }

    fn source(&self) -> ExtendedIndex {
        SheuTriple::source(self)
    }

    fn unit(at: ExtendedIndex) -> SheuTriple {
        SheuTriple::unit(at)
    }

    fn compose(&self, other: &SheuTriple) -> Result<SheuTriple> {
        SheuTriple::compose(self, other)
    }

    fn inverse(&self) -> SheuTriple {
        SheuTriple::inverse(self)
    }
}

impl fmt::Display for SheuTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; ", self.z)?;
        for (i, v) in self.x.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "; ")?;
        for (i, e) in self.w.entries().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}
