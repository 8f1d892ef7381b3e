//! The operators `Y_{k,q}`, the unitary `U`, and the defining relations of
//! `C(S_q^{2ℓ+1})` evaluated on the window.

use num_complex::Complex64;
use serde::Serialize;

use super::{Point, TruncatedOperator, TruncationSpec};

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `Y_{k,q}`, or its adjoint. `q^N` is `p` at `q = 0`.
fn ykq(k: usize, spec: TruncationSpec, adjoint: bool) -> TruncatedOperator {
    assert!((1..=spec.ell + 1).contains(&k), "k={k} out of range");
    let q = spec.q;
    TruncatedOperator::from_action(spec, move |m, z| {
        let mut c = 1.0;
        for &v in &m[..k - 1] {
            c *= q.powi(v as i32);
        }
        let mut m2: Point = m.into();
        let mut z2 = z;
        if k <= spec.ell {
            let j = m[k - 1];
            if adjoint {
                if j == 0 {
                    return None;
                }
                c *= (1.0 - q.powi(2 * j as i32)).sqrt();
                m2[k - 1] = j - 1;
            } else {
                c *= (1.0 - q.powi(2 * (j as i32 + 1))).sqrt();
                m2[k - 1] = j + 1;
            }
        } else {
            z2 += if adjoint { -1 } else { 1 };
        }
        (c != 0.0).then(|| (m2, z2, real(c)))
    })
}

pub fn build_ykq(k: usize, spec: TruncationSpec) -> TruncatedOperator {
    ykq(k, spec, false)
}

pub fn build_ykq_star(k: usize, spec: TruncationSpec) -> TruncatedOperator {
    ykq(k, spec, true)
}

/// `U e_{m,z} = e_{m, z + m_1 + … + m_ℓ}`.
pub fn build_u(spec: TruncationSpec) -> TruncatedOperator {
    TruncatedOperator::from_action(spec, |m, z| {
        Some((m.into(), z + m.iter().sum::<u64>() as i64, real(1.0)))
    })
}

pub fn build_u_star(spec: TruncationSpec) -> TruncatedOperator {
    TruncatedOperator::from_action(spec, |m, z| {
        Some((m.into(), z - m.iter().sum::<u64>() as i64, real(1.0)))
    })
}

/// `Z_{k,q} = U Y_{k,q} U^*`.
pub fn build_zkq(k: usize, spec: TruncationSpec) -> TruncatedOperator {
    build_u(spec).mul(&build_ykq(k, spec)).mul(&build_u_star(spec))
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationResidual {
    pub family: String,
    pub instances: usize,
    pub checked: usize,
    pub max_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SphereReport {
    pub spec: TruncationSpec,
    pub families: Vec<RelationResidual>,
    pub checked: usize,
    pub max_residual: f64,
}

/// Residuals of the four relation families with `z_k ↦ Y_{k,q}`, over interior columns.
pub fn sphere_relations_check(spec: TruncationSpec) -> SphereReport {
    let n = spec.ell + 1;
    let q = spec.q;
    let y: Vec<_> = (1..=n).map(|k| build_ykq(k, spec)).collect();
    let ys: Vec<_> = (1..=n).map(|k| build_ykq_star(k, spec)).collect();
    let yys: Vec<_> = (0..n).map(|k| y[k].mul(&ys[k])).collect();

    let mut families = Vec::new();
    let mut record = |family: &str, exprs: Vec<TruncatedOperator>| {
        let mut res = RelationResidual {
            family: family.to_string(),
            instances: exprs.len(),
            checked: 0,
            max_residual: 0.0,
        };
        for e in exprs {
            let c = e.max_interior_norm();
            res.checked += c.checked;
            res.max_residual = res.max_residual.max(c.max_residual);
        }
        families.push(res);
    };

    let mut exprs = Vec::new();
    for i in 0..n {
        for j in 0..i {
            exprs.push(y[i].mul(&y[j]).sub(&y[j].mul(&y[i]).scale(real(q))));
        }
    }
    record("z_i z_j = q z_j z_i (j < i)", exprs);

    let mut exprs = Vec::new();
    for (i, zs) in ys.iter().enumerate() {
        for (_, z) in y.iter().enumerate().filter(|&(j, _)| j != i) {
            exprs.push(zs.mul(z).sub(&z.mul(zs).scale(real(q))));
        }
    }
    record("z_i^* z_j = q z_j z_i^* (i != j)", exprs);

    let mut exprs = Vec::new();
    for i in 0..n {
        let mut e = yys[i].sub(&ys[i].mul(&y[i]));
        for later in &yys[i + 1..] {
            e = e.add(&later.scale(real(1.0 - q * q)));
        }
        exprs.push(e);
    }
    record("z_i z_i^* - z_i^* z_i + (1-q^2) sum_{k>i} z_k z_k^* = 0", exprs);

    let total = yys
        .iter()
        .fold(TruncatedOperator::zero(spec), |acc, e| acc.add(e))
        .sub(&TruncatedOperator::identity(spec));
    record("sum_i z_i z_i^* = 1", vec![total]);

    SphereReport {
        spec,
        checked: families.iter().map(|f| f.checked).sum(),
        max_residual: families.iter().map(|f| f.max_residual).fold(0.0, f64::max),
        families,
    }
}
