//! Conditions on the generators `gamma_1, ..., gamma_s` of `Gamma`:
//! (1) `||gamma_i|| >= 3 g K`;
//! (2) `||sum b_i gamma_i||^2 >= 1/9 sum b_i^2 ||gamma_i||^2` for integer `b`.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::elliptic::{Curve, HeightEngine, PointVector};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "UPPERCASE")]
pub enum GammaCheck {
    Pass,
    /// `condition` is 1 or 2; `witness` is the offending coefficient vector
    /// (a unit vector for condition 1).
    Fail { condition: u8, witness: Vec<i64> },
    Boundary { condition: u8, witness: Vec<i64> },
}

impl fmt::Display for GammaCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = |v: &[i64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            GammaCheck::Pass => write!(f, "PASS"),
            GammaCheck::Fail { condition, witness } => write!(f, "FAIL(condition {condition}, b = ({}))", w(witness)),
            GammaCheck::Boundary { condition, witness } => write!(f, "BOUNDARY(condition {condition}, b = ({}))", w(witness)),
        }
    }
}

/// All integer vectors of length `s` with entries in `[-bound, bound]`, in
/// lexicographic order.
pub(crate) fn coefficient_box(s: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(s)];
    for _ in 0..s {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-bound..=bound).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

/// `sum_i b_i gamma_i`, exactly.
pub(crate) fn combination(curve: &Curve, gens: &[PointVector], b: &[i64]) -> Result<PointVector> {
    let g = gens[0].dim();
    let mut acc = PointVector::zero(g);
    for (gi, &bi) in gens.iter().zip(b) {
        if bi != 0 {
            acc = acc.add(curve, &gi.scale(curve, &BigInt::from(bi))?)?;
        }
    }
    Ok(acc)
}

pub fn gamma_basis_check(curve: &Curve, gens: &[PointVector], k: f64, tol: f64, coeff_box: u32) -> Result<GammaCheck> {
    if gens.is_empty() {
        return Err(Error::Validation("need at least one generator".into()));
    }
    if coeff_box == 0 {
        return Err(Error::Validation("coeff_box must be >= 1".into()));
    }
    let g = gens[0].dim();
    for x in gens {
        if x.dim() != g {
            return Err(Error::Dimension("generators live in different powers of E".into()));
        }
        x.check_on(curve)?;
    }
    let s = gens.len();
    let eng = HeightEngine::new(curve);
    let heights = gens.iter().map(|x| eng.vector_height(x, tol)).collect::<Result<Vec<_>>>()?;

    let target = 3.0 * g as f64 * k;
    let mut boundary = None;
    for (i, h) in heights.iter().enumerate() {
        let (lo, hi) = h.norm_bounds();
        let mut unit = vec![0; s];
        unit[i] = 1;
        if hi < target {
            return Ok(GammaCheck::Fail { condition: 1, witness: unit });
        }
        if lo < target && boundary.is_none() {
            boundary = Some(GammaCheck::Boundary { condition: 1, witness: unit });
        }
    }

    for b in coefficient_box(s, coeff_box as i64) {
        if b.iter().all(|&c| c == 0) {
            continue;
        }
        let lhs = eng.vector_height(&combination(curve, gens, &b)?, tol)?;
        let (mut rlo, mut rhi) = (0.0, 0.0);
        for (bi, h) in b.iter().zip(&heights) {
            let w = (bi * bi) as f64 / 9.0;
            rlo += w * h.lower();
            rhi += w * h.upper();
        }
        if lhs.upper() < rlo {
            return Ok(GammaCheck::Fail { condition: 2, witness: b });
        }
        if lhs.lower() < rhi && boundary.is_none() {
            boundary = Some(GammaCheck::Boundary { condition: 2, witness: b });
        }
    }
    Ok(boundary.unwrap_or(GammaCheck::Pass))
}
