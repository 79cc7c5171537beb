//! Tube-membership scans over bounded-height morphisms.
//!
//! Membership of `x` in `B_phi + Gamma_eps` is semi-decided by the residual
//! `min_b ||phi(x - sum b_i gamma_i)||` over a finite coefficient box, which
//! is at most `(g - r + 1) H(phi) eps` for every genuine member whose
//! `Gamma`-part lies in the box.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::chain::centro_m;
use crate::bounds::gamma::coefficient_box;
use crate::bounds::real::Real;
use crate::elliptic::{apply_morphism, compare_norm, height::HeightEngine, height_tol_for_norm, Curve, PointVector, TubeVerdict};
use crate::error::{Error, Result};
use crate::morphism::{count_gauss_reduced, enumerate_gauss_reduced, enumerate_special, is_gauss_reduced, IntMorphism};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaData {
    pub generators: Vec<PointVector>,
    pub coeff_box: u32,
}

impl GammaData {
    pub fn empty() -> Self {
        GammaData::default()
    }

    pub fn check(&self, curve: &Curve, g: usize) -> Result<()> {
        for x in &self.generators {
            if x.dim() != g {
                return Err(Error::Dimension(format!("generator {x} is not in E^{g}")));
            }
            x.check_on(curve)?;
        }
        Ok(())
    }
}

/// Certified enclosure of a residual norm together with its minimizing
/// coefficient vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    pub witness: Vec<i64>,
}

/// `min_b ||phi(x - sum_i b_i gamma_i)||` over `|b_i| <= coeff_box`.
pub fn tube_residual(curve: &Curve, phi: &IntMorphism, x: &PointVector, gamma: &GammaData, tol: f64) -> Result<Residual> {
    residual_with(&HeightEngine::new(curve), phi, x, gamma, tol)
}

fn residual_with(eng: &HeightEngine, phi: &IntMorphism, x: &PointVector, gamma: &GammaData, tol: f64) -> Result<Residual> {
    let curve = eng.curve();
    let fx = apply_morphism(curve, phi, x)?;
    let fg = gamma.generators.iter().map(|c| apply_morphism(curve, phi, c)).collect::<Result<Vec<_>>>()?;
    let htol = height_tol_for_norm(tol);
    let mut best: Option<Residual> = None;
    let mut lo_min = f64::INFINITY;
    for b in coefficient_box(fg.len(), gamma.coeff_box as i64) {
        let mut y = fx.clone();
        for (c, &bi) in fg.iter().zip(&b) {
            if bi != 0 {
                y = y.add(curve, &c.scale(curve, &BigInt::from(-bi))?)?;
            }
        }
        let h = eng.vector_height(&y, htol)?;
        let (lo, hi) = h.norm_bounds();
        lo_min = lo_min.min(lo);
        if best.as_ref().is_none_or(|r| hi < r.hi) {
            best = Some(Residual { value: h.norm(), lo, hi, witness: b });
        }
        if h.is_exact_zero() {
            break;
        }
    }
    let mut r = best.expect("the coefficient box is never empty");
    r.lo = lo_min.min(r.lo);
    Ok(r)
}

/// `x -> (x, gamma)`, from `E^g` into `E^(g+s)`.
pub fn product_embedding(x: &PointVector, gamma_point: Option<&PointVector>) -> PointVector {
    match gamma_point {
        Some(p) => x.concat(p),
        None => x.clone(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ScanVerdict {
    Hit,
    Miss,
    Boundary,
    Failed,
}

impl fmt::Display for ScanVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScanVerdict::Hit => "HIT",
            ScanVerdict::Miss => "MISS",
            ScanVerdict::Boundary => "BOUNDARY",
            ScanVerdict::Failed => "FAILED",
        })
    }
}

fn verdict(res: &Residual, threshold: f64, tol: f64) -> ScanVerdict {
    if res.hi <= threshold + tol {
        ScanVerdict::Hit
    } else if res.lo > threshold + tol {
        ScanVerdict::Miss
    } else {
        ScanVerdict::Boundary
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub point_id: usize,
    pub phi: String,
    pub height: u64,
    /// `IN` or `BOUNDARY` membership of the point in the ball of radius `K`.
    pub ball: TubeVerdict,
    pub threshold: f64,
    pub residual: Option<f64>,
    pub residual_hi: Option<f64>,
    pub witness: Vec<i64>,
    pub verdict: ScanVerdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    /// Radius of the height ball `V_K`.
    pub k: f64,
    pub eps: f64,
    pub r: usize,
    pub m_cap: u64,
    pub tol: f64,
    pub canonical_only: bool,
    /// Largest number of morphisms the scan may enumerate.
    pub budget: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub points: usize,
    pub points_in_ball: usize,
    pub points_on_ball_boundary: usize,
    pub points_outside_ball: usize,
    pub morphisms: usize,
    pub records: usize,
    pub hit: usize,
    pub miss: usize,
    pub boundary: usize,
    pub failed: usize,
    /// HIT counts keyed by `H(phi)`.
    pub hits_by_height: BTreeMap<u64, usize>,
    /// Number of distinct morphisms with at least one HIT.
    pub hit_morphisms: usize,
    /// Number of distinct points with at least one HIT.
    pub hit_points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanOutput {
    pub records: Vec<ScanRecord>,
    pub summary: ScanSummary,
}

/// The Gauss-reduced morphisms of rank `r` on `E^g` scanned by [`scan`].
pub fn scan_morphisms(g: usize, cfg: &ScanConfig) -> Result<Vec<IntMorphism>> {
    if cfg.r == 0 || cfg.r > g {
        return Err(Error::Validation(format!("need 1 <= r <= g, got r = {}, g = {g}", cfg.r)));
    }
    if cfg.m_cap == 0 {
        return Err(Error::Validation("M_cap must be >= 1".into()));
    }
    let canonical = count_gauss_reduced(g, cfg.r, cfg.m_cap);
    let perms: u128 = (1..=g as u128).product();
    let worst = if cfg.canonical_only { canonical } else { canonical.saturating_mul(perms) };
    if worst > cfg.budget as u128 {
        return Err(Error::Budget(format!(
            "up to {worst} morphisms of height <= {} exceed the enumeration budget {}",
            cfg.m_cap, cfg.budget
        )));
    }
    Ok(enumerate_gauss_reduced(g, cfg.r, cfg.m_cap, cfg.canonical_only).map(|f| f.matrix).collect())
}

/// Tube verdicts for every point of `V_K` against every Gauss-reduced `phi`
/// with `H(phi) <= M_cap`, at threshold `(g - r + 1) H(phi) eps`. Records are
/// ordered by point, then by enumeration order.
pub fn scan(curve: &Curve, points: &[PointVector], gamma: &GammaData, cfg: &ScanConfig) -> Result<ScanOutput> {
    if !(cfg.eps >= 0.0 && cfg.k >= 0.0 && cfg.tol > 0.0) {
        return Err(Error::Validation("need eps >= 0, K >= 0 and tol > 0".into()));
    }
    let mut summary = ScanSummary { points: points.len(), ..Default::default() };
    let Some(g) = points.first().map(|x| x.dim()) else {
        return Ok(ScanOutput { records: Vec::new(), summary });
    };
    for x in points {
        if x.dim() != g {
            return Err(Error::Dimension(format!("point {x} is not in E^{g}")));
        }
        x.check_on(curve)?;
    }
    gamma.check(curve, g)?;
    let morphisms = scan_morphisms(g, cfg)?;
    summary.morphisms = morphisms.len();
    let eng = HeightEngine::new(curve);
    let htol = height_tol_for_norm(cfg.tol);

    let balls: Vec<Result<TubeVerdict>> =
        points.par_iter().map(|x| eng.vector_height(x, htol).map(|h| compare_norm(&h, cfg.k, cfg.tol))).collect();
    let mut jobs = Vec::new();
    for (i, b) in balls.iter().enumerate() {
        match b {
            Ok(TubeVerdict::Out) => summary.points_outside_ball += 1,
            Ok(v) => {
                if *v == TubeVerdict::In {
                    summary.points_in_ball += 1;
                } else {
                    summary.points_on_ball_boundary += 1;
                }
                jobs.extend((0..morphisms.len()).map(|j| (i, j, *v)));
            }
            Err(e) => return Err(e.clone()),
        }
    }

    let records: Vec<ScanRecord> = jobs
        .par_iter()
        .map(|&(i, j, ball)| {
            let phi = &morphisms[j];
            let height = phi.height().to_u64().unwrap_or(u64::MAX);
            let threshold = (g - cfg.r + 1) as f64 * height as f64 * cfg.eps;
            let base = ScanRecord {
                point_id: i,
                phi: phi.to_wire(),
                height,
                ball,
                threshold,
                residual: None,
                residual_hi: None,
                witness: Vec::new(),
                verdict: ScanVerdict::Failed,
                error: None,
            };
            match residual_with(&eng, phi, &points[i], gamma, cfg.tol) {
                Ok(res) => ScanRecord {
                    residual: Some(res.value),
                    residual_hi: Some(res.hi),
                    verdict: verdict(&res, threshold, cfg.tol),
                    witness: res.witness,
                    ..base
                },
                Err(e) => ScanRecord { error: Some(e.to_string()), ..base },
            }
        })
        .collect();

    let mut hit_phis = std::collections::BTreeSet::new();
    let mut hit_pts = std::collections::BTreeSet::new();
    for rec in &records {
        match rec.verdict {
            ScanVerdict::Hit => {
                summary.hit += 1;
                *summary.hits_by_height.entry(rec.height).or_default() += 1;
                hit_phis.insert(rec.phi.clone());
                hit_pts.insert(rec.point_id);
            }
            ScanVerdict::Miss => summary.miss += 1,
            ScanVerdict::Boundary => summary.boundary += 1,
            ScanVerdict::Failed => summary.failed += 1,
        }
    }
    summary.records = records.len();
    summary.hit_morphisms = hit_phis.len();
    summary.hit_points = hit_pts.len();
    Ok(ScanOutput { records, summary })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CentroOutcome {
    /// A Special `psi` of height at most `M` whose tube contains the point.
    Found { psi: String, height: u64, residual_hi: f64, threshold: f64, n: u32, m_big: String },
    /// The point is not certified to lie in the starting tube.
    PreconditionUnmet { residual_lo: f64, threshold: f64 },
    /// No Special `psi` with `H(psi) <= M` works.
    Fail { n: u32, m_big: String },
}

/// Looks for a Special `psi` with `H(psi) <= M` and
/// `||psi(x)|| <= (g+s-r+1) H(psi) (g+s+1) eps / H(psi)^(1+1/(2n))`, starting
/// with `special_phi` itself. `x` lives in `E^(g+s)`; its first `g`
/// coordinates give `K` and the last `s` give `||p||`. The search stops with
/// a budget error when `M > cap` and nothing within `cap` works.
#[allow(clippy::too_many_arguments)]
pub fn centro_containment_check(
    curve: &Curve,
    x: &PointVector,
    special_phi: &IntMorphism,
    eps: f64,
    g: usize,
    s: usize,
    r: usize,
    tol: f64,
    cap: u64,
) -> Result<CentroOutcome> {
    if x.dim() != g + s || special_phi.cols() != g + s || special_phi.rows() != r {
        return Err(Error::Dimension(format!("expected a point in E^{} and an {r}x{} morphism", g + s, g + s)));
    }
    let class = crate::morphism::classify_special(special_phi, g, s)?;
    if !class.special {
        return Err(Error::Validation(format!("{special_phi} is not Special")));
    }
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::Validation("eps must be > 0".into()));
    }
    let eng = HeightEngine::new(curve);
    let htol = height_tol_for_norm(tol);
    let xs = PointVector(x.coords()[..g].to_vec());
    let k = eng.vector_height(&xs, htol)?.norm_bounds().1;
    let pn = if s == 0 { 0.0 } else { eng.vector_height(&PointVector(x.coords()[g..].to_vec()), htol)?.norm_bounds().1 };
    let to_real = |v: f64| Real::exact(num_rational::BigRational::from_float(v).unwrap_or_default());
    let (n, m_big, _) = centro_m(&to_real(k), &to_real(pn), &to_real(eps), r as u32, g as u32, s as u32)?;
    let expo = 1.0 + 1.0 / (2.0 * n as f64);
    let m_f = m_big.to_f64().unwrap_or(f64::INFINITY);
    let width = (g + s - r + 1) as f64;
    let empty = GammaData::empty();

    let h0 = special_phi.height().to_f64().unwrap_or(f64::INFINITY);
    let start = residual_with(&eng, special_phi, x, &empty, tol)?;
    let start_threshold = width * h0 * eps / m_f.powf(expo);
    if start.lo > start_threshold + tol {
        return Ok(CentroOutcome::PreconditionUnmet { residual_lo: start.lo, threshold: start_threshold });
    }

    let try_psi = |psi: &IntMorphism| -> Result<Option<CentroOutcome>> {
        let h = psi.height().to_u64().unwrap_or(u64::MAX);
        let radius = (g + s + 1) as f64 * eps / (h as f64).powf(expo);
        let threshold = width * h as f64 * radius;
        let res = if psi == special_phi { start.clone() } else { residual_with(&eng, psi, x, &empty, tol)? };
        Ok((res.hi <= threshold + tol).then(|| CentroOutcome::Found {
            psi: psi.to_wire(),
            height: h,
            residual_hi: res.hi,
            threshold,
            n,
            m_big: m_big.to_string(),
        }))
    };

    if special_phi.height() <= m_big {
        if let Some(found) = try_psi(special_phi)? {
            return Ok(found);
        }
    }
    let limit = m_big.to_u64().map_or(cap, |m| m.min(cap));
    for psi in enumerate_special(g, s, r, limit) {
        if let Some(found) = try_psi(&psi)? {
            return Ok(found);
        }
    }
    if m_big > BigInt::from(limit) {
        return Err(Error::Budget(format!("no Special morphism of height <= {limit} works and M = {m_big} exceeds the cap")));
    }
    Ok(CentroOutcome::Fail { n, m_big: m_big.to_string() })
}

/// Row-subset shadow of a rank-`r+1` morphism: its first `r` rows, if they are
/// still Gauss-reduced.
pub fn row_shadow(phi: &IntMorphism) -> Option<IntMorphism> {
    if phi.rows() < 2 {
        return None;
    }
    let sub = phi.select_rows(&(0..phi.rows() - 1).collect::<Vec<_>>()).ok()?;
    is_gauss_reduced(&sub).map(|f| f.matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::Point;

    fn e() -> Curve {
        Curve::from_ints(0, -2).unwrap()
    }

    fn m(s: &str) -> IntMorphism {
        s.parse().unwrap()
    }

    fn cfg(eps: f64, r: usize, m_cap: u64) -> ScanConfig {
        ScanConfig { k: 10.0, eps, r, m_cap, tol: 1e-6, canonical_only: false, budget: 1_000_000 }
    }

    #[test]
    fn residual_examples() {
        let e = e();
        let p = e.point_i(3, 5).unwrap();
        let p2 = e.mul_i(2, &p).unwrap();
        let x = PointVector(vec![p.clone(), p2]);
        let r = tube_residual(&e, &m("(2,-1)"), &x, &GammaData::empty(), 1e-6).unwrap();
        assert_eq!((r.value, r.hi), (0.0, 0.0));

        let y = PointVector(vec![p.clone(), p.clone()]);
        let gamma = GammaData { generators: vec![y.clone()], coeff_box: 2 };
        let r = tube_residual(&e, &m("(1,2)"), &y, &gamma, 1e-6).unwrap();
        assert_eq!(r.hi, 0.0);
        assert_eq!(r.witness, vec![1]);

        let r = tube_residual(&e, &m("(1,0)"), &y, &GammaData::empty(), 1e-6).unwrap();
        assert!(r.lo > 0.8);
        assert_eq!(verdict(&r, 0.01, 1e-6), ScanVerdict::Miss);
    }

    #[test]
    fn residual_shrinks_with_a_larger_box() {
        let e = e();
        let p = e.point_i(3, 5).unwrap();
        let x = PointVector(vec![e.mul_i(3, &p).unwrap(), p.clone()]);
        let gen = PointVector(vec![p.clone(), Point::Infinity]);
        let mut last = f64::INFINITY;
        for bx in 0..4 {
            let gamma = GammaData { generators: vec![gen.clone()], coeff_box: bx };
            let r = tube_residual(&e, &m("(1,1)"), &x, &gamma, 1e-6).unwrap();
            assert!(r.hi <= last + 1e-9);
            last = r.hi;
        }
        assert!(last > 0.0);
        let gamma = GammaData { generators: vec![gen], coeff_box: 4 };
        let r = tube_residual(&e, &m("(1,-3)"), &x, &gamma, 1e-6).unwrap();
        assert_eq!(r.hi, 0.0);
    }

    #[test]
    fn embedding() {
        let e = e();
        let p = e.point_i(3, 5).unwrap();
        let x = PointVector(vec![p.clone(), Point::Infinity]);
        assert_eq!(product_embedding(&x, None), x);
        let gp = PointVector(vec![e.mul_i(2, &p).unwrap()]);
        let z = product_embedding(&x, Some(&gp));
        assert_eq!(z.coords(), &[p.clone(), Point::Infinity, e.mul_i(2, &p).unwrap()]);
        let h = crate::elliptic::vector_height(&e, &z, 1e-9).unwrap();
        let hg = crate::elliptic::vector_height(&e, &gp, 1e-9).unwrap();
        assert_eq!(h.value, hg.value);
    }

    #[test]
    fn torsion_points_hit_everything() {
        let t = Curve::from_ints(0, 1).unwrap();
        let pts = vec![
            PointVector(vec![t.point_i(2, 3).unwrap(), t.point_i(0, 1).unwrap()]),
            PointVector(vec![t.point_i(-1, 0).unwrap(), Point::Infinity]),
        ];
        let out = scan(&t, &pts, &GammaData::empty(), &cfg(0.0, 1, 2)).unwrap();
        assert_eq!(out.summary.hit, out.records.len());
        assert_eq!(out.records.len(), 2 * out.summary.morphisms);
    }

    #[test]
    fn kernel_point_hits_only_annihilating_rows() {
        let e = e();
        let p = e.point_i(3, 5).unwrap();
        let x = PointVector(vec![p.clone(), e.mul_i(2, &p).unwrap()]);
        let out = scan(&e, &[x], &GammaData::empty(), &cfg(1e-3, 1, 2)).unwrap();
        let hits: Vec<&str> = out.records.iter().filter(|r| r.verdict == ScanVerdict::Hit).map(|r| r.phi.as_str()).collect();
        assert_eq!(hits, vec!["[1x2] 2 -1"]);
        assert_eq!(out.summary.miss, out.records.len() - 1);
        assert_eq!(out.summary.hits_by_height.get(&2), Some(&1));
    }

    #[test]
    fn empty_and_out_of_ball() {
        let e = e();
        let out = scan(&e, &[], &GammaData::empty(), &cfg(0.1, 1, 1)).unwrap();
        assert!(out.records.is_empty());
        assert_eq!(out.summary.hit, 0);
        let p = e.point_i(3, 5).unwrap();
        let mut c = cfg(0.1, 1, 1);
        c.k = 0.1;
        let out = scan(&e, &[PointVector(vec![p, Point::Infinity])], &GammaData::empty(), &c).unwrap();
        assert_eq!(out.summary.points_outside_ball, 1);
        assert!(out.records.is_empty());
    }

    #[test]
    fn budget_guard() {
        let e = e();
        let p = e.point_i(3, 5).unwrap();
        let mut c = cfg(0.1, 1, 3);
        c.budget = 10;
        let r = scan(&e, &[PointVector(vec![p.clone(), p])], &GammaData::empty(), &c);
        assert!(matches!(r, Err(Error::Budget(_))));
    }

    #[test]
    fn centro_on_kernel_points() {
        let e = e();
        let p = e.point_i(3, 5).unwrap();
        // (a I_2 | phi'), x = ([-f1 t]P, [-f2 t]P, [a t]P)
        let phi = m("[[3,0,1],[0,3,-2]]");
        let x = PointVector(vec![e.mul_i(-1, &p).unwrap(), e.mul_i(2, &p).unwrap(), e.mul_i(3, &p).unwrap()]);
        assert!(apply_morphism(&e, &phi, &x).unwrap().coords().iter().all(|c| c.is_infinity()));
        match centro_containment_check(&e, &x, &phi, 0.5, 2, 1, 2, 1e-6, 6).unwrap() {
            CentroOutcome::Found { psi, height, .. } => {
                assert_eq!(psi, phi.to_wire());
                assert_eq!(height, 3);
            }
            other => panic!("{other:?}"),
        }
        let y = PointVector(vec![p.clone(), Point::Infinity, Point::Infinity]);
        assert!(matches!(
            centro_containment_check(&e, &y, &phi, 0.5, 2, 1, 2, 1e-6, 6).unwrap(),
            CentroOutcome::PreconditionUnmet { .. }
        ));
        assert!(centro_containment_check(&e, &x, &m("[[1,0,3],[0,1,0]]"), 0.5, 2, 1, 2, 1e-6, 6).is_err());
    }

    #[test]
    fn row_shadow_examples() {
        assert_eq!(row_shadow(&m("[[2,0,1],[0,2,2]]")), Some(m("[[2,0,1]]")));
        assert_eq!(row_shadow(&m("(1,2)")), None);
    }
}
