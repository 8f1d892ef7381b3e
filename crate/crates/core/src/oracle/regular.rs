//! The regular representation on `L²(G⁰)`, `G⁰ = {(z, x, 0) : x >= 0}`:
//! `(π(f)ξ)(γ) = Σ_{γ₁} f(γ^{-1}γ₁) ξ(γ₁)`.
//!
//! `(z, x, 0)` is identified with `e_{x,-z}`, so that `π(1_{θ_s})` is the
//! operator of `s` itself; in particular `π(1_{θ_{Z_k^*}}) = Z_k^*`.
//! Membership `γ^{-1}γ₁ ∈ θ_s` is decided by composing in Sheu's groupoid and
//! comparing `ψ(γ^{-1}γ₁)` with the germ `[φ(x), s]`.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::Serialize;
use smallvec::SmallVec;

use super::{build_element, Comparison, TruncatedOperator, TruncationSpec};
use crate::bridge::psi;
use crate::error::{Error, Result};
use crate::germ::Germ;
use crate::index::ExtendedIndex;
use crate::semigroup::TElement;
use crate::sheu::SheuTriple;

fn g0(z: i64, x: &[u64]) -> SheuTriple {
    let ell = x.len();
    let x: Vec<i64> = x.iter().map(|&v| v as i64).collect();
    SheuTriple::new(z, &x, ExtendedIndex::zero(ell)).expect("G0 arrows are members")
}

/// `π(1_{θ_s})` on the window. Candidate rows are searched in a box around each
/// column wide enough for the displacement of any arrow of `θ_s`.
pub fn regular_representation(s: &TElement, spec: TruncationSpec) -> Result<TruncatedOperator> {
    let ell = spec.ell;
    if let Some(e) = s.ell() {
        if e != ell {
            return Err(Error::DimensionMismatch {
                expected: ell,
                found: e,
            });
        }
    }
    let reach = s.max_index() + 1;
    let z_reach = (ell as i64 + 1) * reach as i64;
    let mut theta: HashMap<Vec<u64>, Option<Germ>> = HashMap::new();

    let mut offsets: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..ell {
        offsets = offsets
            .into_iter()
            .flat_map(|p| {
                (-(reach as i64)..=reach as i64).map(move |d| {
                    let mut p = p.clone();
                    p.push(d);
                    p
                })
            })
            .collect();
    }

    let op = TruncatedOperator::from_action(spec, |x1, zc| {
        let z1 = -zc;
        let gamma1 = g0(z1, x1);
        let mut hit = None;
        for off in &offsets {
            let x: Option<SmallVec<[u64; 4]>> = x1
                .iter()
                .zip(off)
                .map(|(&v, &d)| u64::try_from(v as i64 + d).ok())
                .collect();
            let Some(x) = x else { continue };
            let target = theta
                .entry(x.to_vec())
                .or_insert_with(|| Germ::new(ExtendedIndex::finite(&x), s.clone()).ok())
                .clone();
            let Some(target) = target else { continue };
            for z in z1 - z_reach..=z1 + z_reach {
                let arrow = g0(z, &x).inverse().compose(&gamma1).expect("range of γ₁ is 0");
                if psi(&arrow) == target {
                    assert!(hit.is_none(), "θ_s is a bisection");
                    hit = Some((x.clone(), -z, Complex64::new(1.0, 0.0)));
                }
            }
        }
        hit
    });
    Ok(op)
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaCheck {
    pub k: usize,
    pub comparison: Comparison,
}

/// `π(1_{θ_{Z_k^*}})` against the matrix of `Z_k^*`, for every `k`.
pub fn theta_generator_check(spec: TruncationSpec) -> Result<Vec<ThetaCheck>> {
    (1..=spec.ell + 1)
        .map(|k| {
            let s = TElement::generator(spec.ell, k)?.star();
            let pi = regular_representation(&s, spec)?;
            Ok(ThetaCheck {
                k,
                comparison: pi.compare(&build_element(&s, spec)?),
            })
        })
        .collect()
}
