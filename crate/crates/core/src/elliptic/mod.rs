//! Elliptic curves over Q, canonical heights, and the seminorm on `E^g`.

pub mod curve;
pub mod height;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use curve::{Curve, Point, PointVector, MAX_RATIONAL_TORSION_ORDER};
pub use height::{canonical_height, naive_height, nt_pairing, vector_height, HeightBudget, HeightEngine, HeightValue};

use crate::error::{Error, Result};
use crate::morphism::IntMorphism;

/// `x -> (sum_j [f_ij] x_j)_i`.
pub fn apply_morphism(curve: &Curve, f: &IntMorphism, x: &PointVector) -> Result<PointVector> {
    if f.cols() != x.dim() {
        return Err(Error::Dimension(format!("morphism has {} columns but the point has {} coordinates", f.cols(), x.dim())));
    }
    x.check_on(curve)?;
    let coords = (0..f.rows())
        .map(|i| {
            f.row(i).iter().zip(x.coords()).fold(Point::Infinity, |acc, (c, p)| {
                curve.add_unchecked(&acc, &curve.scalar_mul_unchecked(c, p))
            })
        })
        .collect();
    Ok(PointVector(coords))
}

/// Three-valued answer to a comparison made with approximate heights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum TubeVerdict {
    In,
    Out,
    Boundary,
}

impl fmt::Display for TubeVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TubeVerdict::In => "IN",
            TubeVerdict::Out => "OUT",
            TubeVerdict::Boundary => "BOUNDARY",
        })
    }
}

/// Compares a certified norm enclosure against `eps` with a band of width `tol`.
pub fn compare_norm(h: &HeightValue, eps: f64, tol: f64) -> TubeVerdict {
    let (lo, hi) = h.norm_bounds();
    if h.is_exact_zero() && eps >= 0.0 {
        return TubeVerdict::In;
    }
    if hi <= eps - tol {
        TubeVerdict::In
    } else if lo > eps + tol {
        TubeVerdict::Out
    } else {
        TubeVerdict::Boundary
    }
}

/// Height tolerance that keeps the norm error under `tol / 2`.
pub(crate) fn height_tol_for_norm(tol: f64) -> f64 {
    (tol * tol / 4.0).clamp(1e-12, 1e-6)
}

/// Membership of `x` in `O_eps = { ||x|| <= eps }`.
pub fn in_tube_o_eps(curve: &Curve, x: &PointVector, eps: f64, tol: f64) -> Result<TubeVerdict> {
    if eps.is_nan() || tol.is_nan() || eps < 0.0 || tol < 0.0 {
        return Err(Error::Validation(format!("need eps >= 0 and tol >= 0, got {eps} and {tol}")));
    }
    let h = vector_height(curve, x, height_tol_for_norm(tol))?;
    Ok(compare_norm(&h, eps, tol))
}
