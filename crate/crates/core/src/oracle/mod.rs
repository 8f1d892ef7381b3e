//! Truncated sparse models of the operators on `ℓ²(ℕ)^{⊗ℓ} ⊗ ℓ²(ℤ)`.
//!
//! The window keeps `e_{m,z}` with `m_i <= N` and `|z| <= M`. Every operator is
//! the compression `P A P` of an untruncated one, together with a mask of the
//! basis vectors whose image under `A` stays inside the window. Columns under
//! the mask are exact; products and sums propagate the mask conservatively.

mod regular;
mod sphere;

use std::collections::HashMap;

use num_complex::Complex64;
use serde::Serialize;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::monomial::{Monomial, PrimitiveFactor};
use crate::semigroup::TElement;

pub use regular::{regular_representation, theta_generator_check};
pub use sphere::{build_u, build_u_star, build_ykq, build_zkq, sphere_relations_check, RelationResidual, SphereReport};

pub type Point = SmallVec<[u64; 4]>;
type Column = SmallVec<[(u32, Complex64); 2]>;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TruncationSpec {
    pub ell: usize,
    pub n_max: u64,
    pub z_max: i64,
    pub q: f64,
}

impl TruncationSpec {
    pub fn new(ell: usize, n_max: u64, z_max: i64, q: f64) -> Result<TruncationSpec> {
        if ell == 0 {
            return Err(Error::InvalidTruncation("ell must be at least 1".into()));
        }
        if n_max == 0 || z_max <= 0 {
            return Err(Error::InvalidTruncation(format!(
                "cutoffs must be positive, got N={n_max} M={z_max}"
            )));
        }
        if !(0.0..1.0).contains(&q) {
            return Err(Error::InvalidTruncation(format!("q={q} is outside [0,1)")));
        }
        Ok(TruncationSpec { ell, n_max, z_max, q })
    }

    pub fn with_q(self, q: f64) -> Result<TruncationSpec> {
        TruncationSpec::new(self.ell, self.n_max, self.z_max, q)
    }

    pub fn dim(&self) -> usize {
        (self.n_max as usize + 1).pow(self.ell as u32) * (2 * self.z_max as usize + 1)
    }

    pub fn index(&self, m: &[u64], z: i64) -> Option<usize> {
        if z.abs() > self.z_max || m.iter().any(|&v| v > self.n_max) {
            return None;
        }
        let side = self.n_max as usize + 1;
        let mut idx = 0usize;
        for &v in m {
            idx = idx * side + v as usize;
        }
        Some(idx * (2 * self.z_max as usize + 1) + (z + self.z_max) as usize)
    }

    pub fn point(&self, idx: usize) -> (Point, i64) {
        let width = 2 * self.z_max as usize + 1;
        let z = (idx % width) as i64 - self.z_max;
        let mut rest = idx / width;
        let side = self.n_max as usize + 1;
        let mut m: Point = SmallVec::from_elem(0, self.ell);
        for slot in m.iter_mut().rev() {
            *slot = (rest % side) as u64;
            rest /= side;
        }
        (m, z)
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Comparison {
    pub checked: usize,
    pub max_residual: f64,
}

impl Comparison {
    pub fn exact(&self) -> bool {
        self.max_residual == 0.0
    }
}

#[derive(Clone, Debug)]
pub struct TruncatedOperator {
    spec: TruncationSpec,
    cols: Vec<Column>,
    mask: Vec<bool>,
}

impl TruncatedOperator {
    /// The compression of the operator sending `e_{m,z}` to `c·e_{m',z'}` (or 0).
    pub fn from_action<F>(spec: TruncationSpec, mut f: F) -> TruncatedOperator
    where
        F: FnMut(&[u64], i64) -> Option<(Point, i64, Complex64)>,
    {
        let dim = spec.dim();
        let mut cols = Vec::with_capacity(dim);
        let mut mask = Vec::with_capacity(dim);
        for j in 0..dim {
            let (m, z) = spec.point(j);
            let mut col = Column::new();
            let mut inside = true;
            if let Some((m2, z2, c)) = f(&m, z) {
                match spec.index(&m2, z2) {
                    Some(i) => {
                        if c != Complex64::new(0.0, 0.0) {
                            col.push((i as u32, c));
                        }
                    }
                    None => inside = false,
                }
            }
            cols.push(col);
            mask.push(inside);
        }
        TruncatedOperator { spec, cols, mask }
    }

    pub fn identity(spec: TruncationSpec) -> TruncatedOperator {
        Self::from_action(spec, |m, z| Some((m.into(), z, Complex64::new(1.0, 0.0))))
    }

    pub fn zero(spec: TruncationSpec) -> TruncatedOperator {
        Self::from_action(spec, |_, _| None)
    }

    pub fn spec(&self) -> &TruncationSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn interior(&self, j: usize) -> bool {
        self.mask[j]
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.cols[j]
            .iter()
            .find(|(r, _)| *r as usize == i)
            .map(|&(_, c)| c)
            .unwrap_or_default()
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.cols[j].iter().map(|&(i, c)| (i as usize, c))
    }

    pub fn mul(&self, rhs: &TruncatedOperator) -> TruncatedOperator {
        assert_eq!(self.spec, rhs.spec, "operators on different windows");
        let mut cols = Vec::with_capacity(rhs.cols.len());
        let mut mask = Vec::with_capacity(rhs.cols.len());
        for (j, bcol) in rhs.cols.iter().enumerate() {
            let mut inside = rhs.mask[j];
            let mut col = Column::new();
            for &(k, b) in bcol {
                inside &= self.mask[k as usize];
                for &(i, a) in &self.cols[k as usize] {
                    push_merge(&mut col, i, a * b);
                }
            }
            col.retain(|e| e.1 != Complex64::new(0.0, 0.0));
            col.sort_by_key(|e| e.0);
            cols.push(col);
            mask.push(inside);
        }
        TruncatedOperator {
            spec: self.spec,
            cols,
            mask,
        }
    }

    pub fn add(&self, rhs: &TruncatedOperator) -> TruncatedOperator {
        assert_eq!(self.spec, rhs.spec, "operators on different windows");
        let mut out = self.clone();
        for (j, bcol) in rhs.cols.iter().enumerate() {
            out.mask[j] &= rhs.mask[j];
            for &(i, b) in bcol {
                push_merge(&mut out.cols[j], i, b);
            }
            out.cols[j].retain(|e| e.1 != Complex64::new(0.0, 0.0));
            out.cols[j].sort_by_key(|e| e.0);
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> TruncatedOperator {
        let mut out = self.clone();
        for col in &mut out.cols {
            for e in col.iter_mut() {
                e.1 *= c;
            }
            col.retain(|e| e.1 != Complex64::new(0.0, 0.0));
        }
        out
    }

    pub fn sub(&self, rhs: &TruncatedOperator) -> TruncatedOperator {
        self.add(&rhs.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn pow(&self, e: u64) -> TruncatedOperator {
        (0..e).fold(Self::identity(self.spec), |acc, _| acc.mul(self))
    }

    /// Conjugate transpose of the compression, with every column kept.
    pub fn conj_transpose(&self) -> TruncatedOperator {
        let mut cols = vec![Column::new(); self.dim()];
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, c) in col {
                cols[i as usize].push((j as u32, c.conj()));
            }
        }
        TruncatedOperator {
            spec: self.spec,
            cols,
            mask: vec![true; self.dim()],
        }
    }

    /// Largest entrywise difference over the columns interior to both operators.
    pub fn compare(&self, other: &TruncatedOperator) -> Comparison {
        let mut cmp = Comparison::default();
        for j in 0..self.dim() {
            if !(self.mask[j] && other.mask[j]) {
                continue;
            }
            cmp.checked += 1;
            let mut diff: Column = self.cols[j].clone();
            for &(i, c) in &other.cols[j] {
                push_merge(&mut diff, i, -c);
            }
            for &(_, c) in &diff {
                cmp.max_residual = cmp.max_residual.max(c.norm());
            }
        }
        cmp
    }

    /// Largest entry over interior columns.
    pub fn max_interior_norm(&self) -> Comparison {
        self.compare(&Self::zero(self.spec))
    }

    pub fn interior_count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }
}

fn push_merge(col: &mut Column, i: u32, c: Complex64) {
    match col.iter_mut().find(|e| e.0 == i) {
        Some(e) => e.1 += c,
        None => col.push((i, c)),
    }
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn on_leg<F>(spec: TruncationSpec, leg: usize, f: F) -> TruncatedOperator
where
    F: Fn(u64) -> Option<(u64, Complex64)>,
{
    TruncatedOperator::from_action(spec, |m, z| {
        f(m[leg]).map(|(v, c)| {
            let mut m2: Point = m.into();
            m2[leg] = v;
            (m2, z, c)
        })
    })
}

/// `S` on one leg: `S e_{j+1} = e_j`, `S e_0 = 0`.
pub fn shift(spec: TruncationSpec, leg: usize) -> TruncatedOperator {
    on_leg(spec, leg, |j| (j > 0).then(|| (j - 1, one())))
}

/// `S^*` on one leg.
pub fn shift_star(spec: TruncationSpec, leg: usize) -> TruncatedOperator {
    on_leg(spec, leg, |j| Some((j + 1, one())))
}

/// `p = |e_0⟩⟨e_0|` on one leg.
pub fn projection(spec: TruncationSpec, leg: usize) -> TruncatedOperator {
    on_leg(spec, leg, |j| (j == 0).then(|| (0, one())))
}

/// `t^k`, with `t e_z = e_{z+1}`.
pub fn t_power(spec: TruncationSpec, k: i64) -> TruncatedOperator {
    TruncatedOperator::from_action(spec, move |m, z| Some((m.into(), z + k, one())))
}

/// One primitive factor on one leg, assembled from `S`, `S^*` and `p`.
pub fn build_primitive(f: PrimitiveFactor, leg: usize, spec: TruncationSpec) -> TruncatedOperator {
    match f {
        PrimitiveFactor::Identity => TruncatedOperator::identity(spec),
        PrimitiveFactor::Pinched(a, b) => shift_star(spec, leg)
            .pow(a)
            .mul(&projection(spec, leg))
            .mul(&shift(spec, leg).pow(b)),
        PrimitiveFactor::Free(a, b) => shift_star(spec, leg).pow(a).mul(&shift(spec, leg).pow(b)),
    }
}

pub fn build_monomial(x: &Monomial, spec: TruncationSpec) -> Result<TruncatedOperator> {
    let word = match x.as_word() {
        None => return Ok(TruncatedOperator::zero(spec)),
        Some(w) => w,
    };
    if word.ell() != spec.ell {
        return Err(Error::DimensionMismatch {
            expected: spec.ell,
            found: word.ell(),
        });
    }
    let legs = word
        .factors()
        .iter()
        .enumerate()
        .fold(TruncatedOperator::identity(spec), |acc, (leg, &f)| {
            build_primitive(f, leg, spec).mul(&acc)
        });
    Ok(t_power(spec, word.z_exp()).mul(&legs))
}

pub fn build_element(s: &TElement, spec: TruncationSpec) -> Result<TruncatedOperator> {
    build_monomial(&s.to_monomial(), spec)
}

/// `M(ab)` against `M(a)M(b)` on the common interior, exactly.
pub fn compare_symbolic_numeric(a: &TElement, b: &TElement, spec: TruncationSpec) -> Result<bool> {
    let lhs = build_element(&a.mul(b)?, spec)?;
    let rhs = build_element(a, spec)?.mul(&build_element(b, spec)?);
    Ok(lhs.compare(&rhs).exact())
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct OracleReport {
    pub checked: usize,
    pub failed: usize,
    pub max_residual: f64,
    pub failures: Vec<String>,
}

/// Every product of the enumeration `T(ℓ, bound, |r| <= bound)`, against the
/// matrix product, plus `s^*` against the conjugate transpose.
pub fn compare_all(spec: TruncationSpec, bound: u64) -> Result<OracleReport> {
    let elems = TElement::enumerate(spec.ell, bound, bound as i64);
    let mats: Vec<TruncatedOperator> = elems.iter().map(|s| build_element(s, spec)).collect::<Result<_>>()?;
    let mut cache: HashMap<TElement, TruncatedOperator> = elems.iter().cloned().zip(mats.iter().cloned()).collect();
    let mut rep = OracleReport::default();
    for (a, ma) in elems.iter().zip(&mats) {
        let adj = build_element(&a.star(), spec)?.compare(&ma.conj_transpose());
        rep.checked += 1;
        rep.max_residual = rep.max_residual.max(adj.max_residual);
        if !adj.exact() {
            rep.failed += 1;
            rep.failures.push(format!("star {a}"));
        }
        for (b, mb) in elems.iter().zip(&mats) {
            let ab = a.mul(b)?;
            if !cache.contains_key(&ab) {
                let m = build_element(&ab, spec)?;
                cache.insert(ab.clone(), m);
            }
            let cmp = cache[&ab].compare(&ma.mul(mb));
            rep.checked += 1;
            rep.max_residual = rep.max_residual.max(cmp.max_residual);
            if !cmp.exact() {
                rep.failed += 1;
                rep.failures.push(format!("{a} * {b} = {ab}"));
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(ell: usize, n: u64, m: i64) -> TruncationSpec {
        TruncationSpec::new(ell, n, m, 0.0).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(TruncationSpec::new(0, 4, 4, 0.0).is_err());
        assert!(TruncationSpec::new(1, 4, 4, 1.0).is_err());
        assert!(TruncationSpec::new(1, 0, 4, 0.5).is_err());
        let s = spec(2, 3, 2);
        assert_eq!(s.dim(), 16 * 5);
        for j in 0..s.dim() {
            let (m, z) = s.point(j);
            assert_eq!(s.index(&m, z), Some(j));
        }
    }

    #[test]
    fn projection_is_a_rank_one_idempotent() {
        let s = spec(1, 5, 4);
        let p = projection(s, 0);
        assert!(p.mul(&p).compare(&p).exact());
        let trace: f64 = (0..s.dim()).map(|j| p.entry(j, j).re).sum();
        // one copy per z
        assert_eq!(trace, 9.0);
    }

    #[test]
    fn shift_relations_on_the_interior() {
        let s = spec(1, 6, 4);
        let sh = shift(s, 0);
        let st = shift_star(s, 0);
        let id = TruncatedOperator::identity(s);
        assert!(sh.mul(&st).compare(&id).exact());
        assert_eq!(sh.mul(&st).interior_count(), 6 * 9);
        let ss = st.mul(&sh);
        assert!(ss.add(&projection(s, 0)).compare(&id).exact());
        let f = build_primitive(PrimitiveFactor::Free(0, 1), 0, s);
        let p = build_primitive(PrimitiveFactor::Pinched(0, 0), 0, s);
        assert_eq!(f.mul(&p).max_interior_norm().max_residual, 0.0);
        assert!(f.mul(&p).max_interior_norm().checked > 0);
    }

    #[test]
    fn monomial_examples() {
        let s = spec(2, 5, 5);
        let id = build_monomial(&Monomial::identity(2), s).unwrap();
        assert!(id.compare(&TruncatedOperator::identity(s)).exact());
        assert_eq!(id.interior_count(), s.dim());
        let x = TElement::new(3, 2, &[1, 0], &[0, 2]).unwrap();
        let built = build_element(&x, s).unwrap();
        // hand-built: |e_1⟩⟨e_0| ⊗ |e_0⟩⟨e_2| ⊗ t^{2 + 1 - 2}
        let hand = TruncatedOperator::from_action(s, |m, z| {
            (m[0] == 0 && m[1] == 2).then(|| (SmallVec::from_slice(&[1, 0]), z + 1, one()))
        });
        assert!(built.compare(&hand).exact());
        assert!(built.compare(&hand).checked > s.dim() / 2);
        let zero = build_element(&TElement::Zero, s).unwrap();
        assert_eq!(zero.max_interior_norm().max_residual, 0.0);
    }

    #[test]
    fn adjoint_is_conjugate_transpose() {
        let s = spec(2, 4, 4);
        for x in TElement::enumerate(2, 1, 1) {
            let a = build_element(&x, s).unwrap();
            let b = build_element(&x.star(), s).unwrap();
            let cmp = b.compare(&a.conj_transpose());
            assert!(cmp.exact(), "{x}");
            assert_eq!(cmp.checked, b.interior_count());
        }
    }

    #[test]
    fn products_match_in_rank_one() {
        let rep = compare_all(spec(1, 6, 6), 2).unwrap();
        assert_eq!(rep.failed, 0, "{:?}", rep.failures);
        assert!(rep.checked > 1000);
    }

    #[test]
    fn zero_products_vanish() {
        let s = spec(2, 5, 5);
        let z1s = TElement::generator(2, 1).unwrap().star();
        let z2 = TElement::generator(2, 2).unwrap();
        assert_eq!(z1s.mul(&z2).unwrap(), TElement::Zero);
        assert!(compare_symbolic_numeric(&z1s, &z2, s).unwrap());
        let prod = build_element(&z1s, s).unwrap().mul(&build_element(&z2, s).unwrap());
        assert_eq!(prod.max_interior_norm().max_residual, 0.0);
    }

    /// Masked columns do not move when the window grows.
    #[test]
    fn masks_are_stable_under_growth() {
        let small = spec(2, 4, 4);
        let big = spec(2, 6, 7);
        for x in TElement::enumerate(2, 2, 1) {
            let a = build_element(&x, small).unwrap();
            let b = build_element(&x, big).unwrap();
            for j in 0..small.dim() {
                if !a.interior(j) {
                    continue;
                }
                let (m, z) = small.point(j);
                let jb = big.index(&m, z).unwrap();
                assert!(b.interior(jb));
                let col_a: Vec<_> = a.column(j).map(|(i, c)| (small.point(i), c)).collect();
                let col_b: Vec<_> = b.column(jb).map(|(i, c)| (big.point(i), c)).collect();
                assert_eq!(col_a, col_b, "{x} at {m:?},{z}");
            }
        }
    }
}
