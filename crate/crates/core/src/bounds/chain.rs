//! The chain of effective constants: degree bounds, the Bogomolov radius,
//! essential-minimum lower bounds, the finiteness thresholds, and the
//! `delta_1 -> M -> delta` chain with `K'`.
//!
//! Every unnamed constant is an explicit parameter defaulting to 1.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bounds::real::Real;
use crate::error::{Error, Result};
use crate::rational::{format_rational, serde_rational};

/// Significant digits used for inexact values in reports.
pub const REPORT_DIGITS: usize = 50;

pub const EXPONENT_NONPOSITIVE: &str = "EXPONENT_NONPOSITIVE";
pub const ETA_CASE2_EXPONENT: &str = "ETA_CASE2_EXPONENT";
pub const EPS_ABOVE_EPS0: &str = "EPS_ABOVE_EPS0";
pub const M_CEILING_AMBIGUOUS: &str = "M_CEILING_AMBIGUOUS";

fn one() -> BigRational {
    BigRational::one()
}

fn zero() -> BigRational {
    BigRational::zero()
}

fn one_int() -> BigInt {
    BigInt::one()
}

fn r(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundParams {
    pub g: u32,
    pub d: u32,
    #[serde(default)]
    pub s: u32,
    #[serde(rename = "K", with = "serde_rational")]
    pub k: BigRational,
    #[serde(rename = "degV", default = "one_int")]
    pub deg_v: BigInt,
    #[serde(default = "one_int")]
    pub stab_order: BigInt,
    #[serde(rename = "degE", default = "one_int")]
    pub deg_e: BigInt,
    /// Defaults to `1/(2d)`.
    #[serde(default, with = "serde_rational::option", skip_serializing_if = "Option::is_none")]
    pub eta: Option<BigRational>,
    #[serde(default = "one", with = "serde_rational")]
    pub c0: BigRational,
    #[serde(default = "one", with = "serde_rational")]
    pub c1: BigRational,
    #[serde(default = "one", with = "serde_rational")]
    pub c2: BigRational,
    /// `c(E^g, eta)`
    #[serde(default = "one", with = "serde_rational")]
    pub c_bog_g: BigRational,
    /// `c(E^(d+1), eta)`
    #[serde(default = "one", with = "serde_rational")]
    pub c_bog_d1: BigRational,
    #[serde(default = "one", with = "serde_rational")]
    pub c_p: BigRational,
    #[serde(default = "one", with = "serde_rational")]
    pub eps0_p: BigRational,
    #[serde(default = "zero", with = "serde_rational")]
    pub gamma_norm: BigRational,
    /// Replaces the derived `eps_1` threshold when set.
    #[serde(default, with = "serde_rational::option", skip_serializing_if = "Option::is_none")]
    pub eps1_override: Option<BigRational>,
}

impl BoundParams {
    /// Unit constants, `K = 1`, no generators.
    pub fn new(g: u32, d: u32, s: u32) -> Self {
        BoundParams {
            g,
            d,
            s,
            k: one(),
            deg_v: one_int(),
            stab_order: one_int(),
            deg_e: one_int(),
            eta: None,
            c0: one(),
            c1: one(),
            c2: one(),
            c_bog_g: one(),
            c_bog_d1: one(),
            c_p: one(),
            eps0_p: one(),
            gamma_norm: zero(),
            eps1_override: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1 <= self.d && self.d < self.g) {
            return Err(Error::Validation(format!("need 1 <= d < g, got d = {}, g = {}", self.d, self.g)));
        }
        if self.k.is_negative() {
            return Err(Error::Validation("K must be >= 0".into()));
        }
        if self.gamma_norm.is_negative() {
            return Err(Error::Validation("gamma_norm must be >= 0".into()));
        }
        for (name, v) in [("degV", &self.deg_v), ("stab_order", &self.stab_order), ("degE", &self.deg_e)] {
            if !v.is_positive() {
                return Err(Error::Validation(format!("{name} must be >= 1")));
            }
        }
        for (name, v) in [
            ("c0", &self.c0),
            ("c1", &self.c1),
            ("c2", &self.c2),
            ("c_bog_g", &self.c_bog_g),
            ("c_bog_d1", &self.c_bog_d1),
            ("c_p", &self.c_p),
            ("eps0_p", &self.eps0_p),
        ] {
            if !v.is_positive() {
                return Err(Error::Validation(format!("{name} must be > 0")));
            }
        }
        if let Some(eta) = &self.eta {
            if !eta.is_positive() {
                return Err(Error::Validation("eta must be > 0".into()));
            }
        }
        if let Some(e) = &self.eps1_override {
            if !e.is_positive() {
                return Err(Error::Validation("eps1_override must be > 0".into()));
            }
        }
        Ok(())
    }

    pub fn eta(&self) -> BigRational {
        self.eta.clone().unwrap_or_else(|| BigRational::new(BigInt::one(), BigInt::from(2 * self.d)))
    }

    pub fn codim(&self) -> u32 {
        self.g - self.d
    }
}

/// `c0 H^(2r)`
pub fn deg_subgroup_bound(r: u32, h: &BigInt, c0: &BigRational) -> BigRational {
    c0 * BigRational::from_integer(num_traits::pow(h.clone(), 2 * r as usize))
}

/// `c1 a^(2d) deg V`
pub fn deg_image_bound(d: u32, a: &BigInt, deg_v: &BigInt, c1: &BigRational) -> BigRational {
    c1 * BigRational::from_integer(num_traits::pow(a.clone(), 2 * d as usize) * deg_v)
}

/// `c2 a^(2(g-r)) |Stab V| deg V`
pub fn deg_helping_bound(g: u32, r: u32, a: &BigInt, deg_v: &BigInt, stab_order: &BigInt, c2: &BigRational) -> Result<BigRational> {
    if !(1 <= r && r <= g) {
        return Err(Error::Validation(format!("need 1 <= r <= g, got r = {r}, g = {g}")));
    }
    Ok(c2 * BigRational::from_integer(num_traits::pow(a.clone(), 2 * (g - r) as usize) * stab_order * deg_v))
}

/// Degree of `[b]X` for `X` of dimension `d`: `b^(2d) deg X / |Stab X ∩ E^g[b]|`.
pub fn multiplication_image_degree(b: &BigInt, d: u32, deg_x: &BigInt, stab_torsion: &BigInt) -> Result<BigRational> {
    if !stab_torsion.is_positive() || b.is_zero() {
        return Err(Error::Validation("need b != 0 and a positive stabilizer order".into()));
    }
    Ok(BigRational::new(num_traits::pow(b.clone(), 2 * d as usize) * deg_x, stab_torsion.clone()))
}

/// `c / deg X^(1/(2 cod X) + eta)`
pub fn bogomolov_epsilon(deg_x: &BigInt, cod_x: u32, eta: &BigRational, c: &BigRational) -> Result<Real> {
    if !deg_x.is_positive() || cod_x == 0 || eta.is_negative() || !c.is_positive() {
        return Err(Error::Validation("need deg X >= 1, cod X >= 1, eta >= 0, c > 0".into()));
    }
    let e = BigRational::new(BigInt::one(), BigInt::from(2 * cod_x)) + eta;
    Real::exact(c.clone()).div(&Real::big(deg_x).pow(&e)?)
}

/// `eps_1(V, eta) = c(E^(d+1), eta) / (c1 deg V)^(1/2 + eta)`
pub fn eps1_v(p: &BoundParams) -> Result<Real> {
    let base = Real::exact(&p.c1 * BigRational::from_integer(p.deg_v.clone()));
    let e = BigRational::new(BigInt::one(), BigInt::from(2)) + p.eta();
    Real::exact(p.c_bog_d1.clone()).div(&base.pow(&e)?)
}

/// `eps_2(V, eta) = c(E^g, eta) / (c2 |Stab V| deg V)^(1/(2(g-d)) + eta)`
pub fn eps2_v(p: &BoundParams) -> Result<Real> {
    let base = Real::exact(&p.c2 * BigRational::from_integer(&p.stab_order * &p.deg_v));
    let e = BigRational::new(BigInt::one(), BigInt::from(2 * p.codim())) + p.eta();
    Real::exact(p.c_bog_g.clone()).div(&base.pow(&e)?)
}

/// `(eps_1(V,eta) / a^(d + 2 d eta), eps_2(V,eta) a^(1/(g-d) - 2(g-d-1) eta))`
pub fn em_lower_bounds(p: &BoundParams, a: &BigInt) -> Result<(Real, Real)> {
    p.validate()?;
    if !a.is_positive() {
        return Err(Error::Validation("a must be >= 1".into()));
    }
    let eta = p.eta();
    let d = r(p.d as i64);
    let cod = p.codim() as i64;
    let e1 = &d + r(2) * &d * &eta;
    let e2 = BigRational::new(BigInt::one(), BigInt::from(cod)) - r(2) * r(cod - 1) * &eta;
    let av = Real::big(a);
    let first = eps1_v(p)?.div(&av.pow(&e1)?)?;
    let second = eps2_v(p)?.mul(&av.pow(&e2)?);
    Ok((first, second))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finito {
    pub eta: BigRational,
    /// `(g-d) / (1 - 2(g-d-1)(g-d) eta)`
    pub m_exponent: BigRational,
    pub m: Real,
    pub eps1_threshold: Real,
    pub diagnostics: Vec<String>,
}

/// `eta`, `m = (K/eps_2)^((g-d)/(1-2(g-d-1)(g-d)eta))` and
/// `eps_1 = min(K/g, eps_1(V,eta)/(g m^(d+1)))`.
pub fn finito_thresholds(p: &BoundParams) -> Result<Finito> {
    p.validate()?;
    if !p.k.is_positive() {
        return Err(Error::Validation("K must be > 0".into()));
    }
    let eta = p.eta();
    let cod = p.codim() as i64;
    let den = one() - r(2 * (cod - 1) * cod) * &eta;
    let mut diagnostics = Vec::new();
    if den.is_zero() {
        return Err(Error::Degenerate(format!(
            "the m-exponent denominator 1 - 2(g-d-1)(g-d)eta vanishes at g = {}, d = {}, eta = {}",
            p.g,
            p.d,
            format_rational(&eta)
        )));
    }
    if den.is_negative() {
        diagnostics.push(EXPONENT_NONPOSITIVE.to_string());
    }
    let d = r(p.d as i64);
    if &d + r(2) * &d * &eta > &d + one() {
        diagnostics.push(ETA_CASE2_EXPONENT.to_string());
    }
    let eps2 = eps2_v(p)?;
    if !eps2.is_positive() {
        return Err(Error::Degenerate("eps_2(V, eta) is zero".into()));
    }
    let m_exponent = r(cod) / &den;
    let m = Real::exact(p.k.clone()).div(&eps2)?.pow(&m_exponent)?;
    let g = Real::int(p.g as i64);
    let k_over_g = Real::exact(p.k.clone()).div(&g)?;
    let other = eps1_v(p)?.div(&g.mul(&m.powi(p.d as i64 + 1)?))?;
    let eps1_threshold = k_over_g.min(&other);
    Ok(Finito { eta, m_exponent, m, eps1_threshold, diagnostics })
}

/// `n = r(g+s) - r^2 + 1` and `M = max(2, ceil((K + ||p||)/eps)^2)^n`; the flag
/// reports a ceiling that could not be decided from the enclosure of the
/// quotient (the larger candidate is used).
pub fn centro_m(k: &Real, norm_p: &Real, eps: &Real, r: u32, g: u32, s: u32) -> Result<(u32, BigInt, bool)> {
    if !eps.is_positive() {
        return Err(Error::Validation("eps must be > 0".into()));
    }
    if r == 0 || r > g + s {
        return Err(Error::Validation(format!("need 1 <= r <= g + s, got r = {r}")));
    }
    let n = r * (g + s) - r * r + 1;
    let (c, ambiguous) = k.add(norm_p).div(eps)?.ceil_up();
    let base = (&c * &c).max(BigInt::from(2));
    Ok((n, num_traits::pow(base, n as usize), ambiguous))
}

/// `K' = (g+s) max(1, g(K+eps)/c(p))`
pub fn equi_kprime(g: u32, s: u32, k: &Real, eps: &Real, c_p: &BigRational) -> Result<Real> {
    if !c_p.is_positive() {
        return Err(Error::Validation("c(p) must be > 0".into()));
    }
    let gk = Real::int(g as i64).mul(&k.add(eps)).div(&Real::exact(c_p.clone()))?;
    Ok(Real::int((g + s) as i64).mul(&gk.max(&Real::int(1))))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub params: BoundParams,
    pub r: u32,
    pub n: u32,
    pub eta: BigRational,
    pub eps_bog: Real,
    pub eps1_em: Real,
    pub eps2_em: Real,
    pub m_exponent: BigRational,
    pub m: Real,
    pub eps1_threshold: Real,
    pub delta1: Real,
    pub m_big: BigInt,
    pub delta: Real,
    pub k_prime: Real,
    pub diagnostics: Vec<String>,
}

/// The full chain: `delta_1 = min(eps_1/(g+s), K)/(g+s+1)`,
/// `M = max(2, ceil((K + ||gamma||)/delta_1)^2)^n`, `delta = delta_1 M^(-1-1/(2n))`.
pub fn main_delta_chain(p: &BoundParams) -> Result<BoundReport> {
    let fin = finito_thresholds(p)?;
    let mut diagnostics = fin.diagnostics.clone();
    let r = p.d + 1;
    let gs = (p.g + p.s) as i64;
    let k = Real::exact(p.k.clone());
    let eps1 = match &p.eps1_override {
        Some(e) => Real::exact(e.clone()),
        None => fin.eps1_threshold.clone(),
    };
    let delta1 = eps1.div(&Real::int(gs))?.min(&k).div(&Real::int(gs + 1))?;
    let (n, m_big, ambiguous) = centro_m(&k, &Real::exact(p.gamma_norm.clone()), &delta1, r, p.g, p.s)?;
    if ambiguous {
        diagnostics.push(M_CEILING_AMBIGUOUS.to_string());
    }
    let e = -(one() + BigRational::new(BigInt::one(), BigInt::from(2 * n)));
    let delta = delta1.mul(&Real::big(&m_big).pow(&e)?);
    if delta.hi() > &p.eps0_p {
        diagnostics.push(EPS_ABOVE_EPS0.to_string());
    }
    let k_prime = equi_kprime(p.g, p.s, &k, &delta, &p.c_p)?;
    let eps_bog = bogomolov_epsilon(&p.deg_v, p.codim(), &fin.eta, &p.c_bog_g)?;
    Ok(BoundReport {
        params: p.clone(),
        r,
        n,
        eta: fin.eta,
        eps_bog,
        eps1_em: eps1_v(p)?,
        eps2_em: eps2_v(p)?,
        m_exponent: fin.m_exponent,
        m: fin.m,
        eps1_threshold: eps1,
        delta1,
        m_big,
        delta,
        k_prime,
        diagnostics,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Radius,
    Bound,
}

fn render(x: &Real, side: Side) -> String {
    if let Some(q) = x.as_exact() {
        if q.numer().bits() + q.denom().bits() <= 512 {
            return format_rational(q);
        }
    }
    match side {
        Side::Radius => x.decimal_down(REPORT_DIGITS),
        Side::Bound => x.decimal_up(REPORT_DIGITS),
    }
}

fn approx(x: &Real) -> String {
    format!("{:.6e}", x.to_f64())
}

impl BoundReport {
    fn rows(&self) -> Vec<(&'static str, String)> {
        let p = &self.params;
        let opt = |o: &Option<BigRational>| o.as_ref().map(format_rational).unwrap_or_else(|| "derived".into());
        vec![
            ("g", p.g.to_string()),
            ("d", p.d.to_string()),
            ("s", p.s.to_string()),
            ("K", format_rational(&p.k)),
            ("degV", p.deg_v.to_string()),
            ("stab_order", p.stab_order.to_string()),
            ("degE", p.deg_e.to_string()),
            ("c0", format_rational(&p.c0)),
            ("c1", format_rational(&p.c1)),
            ("c2", format_rational(&p.c2)),
            ("c_bog_g", format_rational(&p.c_bog_g)),
            ("c_bog_d1", format_rational(&p.c_bog_d1)),
            ("c_p", format_rational(&p.c_p)),
            ("eps0_p", format_rational(&p.eps0_p)),
            ("gamma_norm", format_rational(&p.gamma_norm)),
            ("eps1_override", opt(&p.eps1_override)),
            ("eta", format_rational(&self.eta)),
            ("r", self.r.to_string()),
            ("n", self.n.to_string()),
            ("eps_bog", render(&self.eps_bog, Side::Radius)),
            ("eps1_EM", render(&self.eps1_em, Side::Radius)),
            ("eps2_EM", render(&self.eps2_em, Side::Radius)),
            ("m_exponent", format_rational(&self.m_exponent)),
            ("m", render(&self.m, Side::Bound)),
            ("eps1_threshold", render(&self.eps1_threshold, Side::Radius)),
            ("delta1", render(&self.delta1, Side::Radius)),
            ("M_big", self.m_big.to_string()),
            ("delta", render(&self.delta, Side::Radius)),
            ("delta_approx", approx(&self.delta)),
            ("K_prime", render(&self.k_prime, Side::Bound)),
            ("diagnostics", if self.diagnostics.is_empty() { "none".into() } else { self.diagnostics.join(",") }),
        ]
    }

    /// One `key = value` line per quantity. Exact values are printed as
    /// rationals; inexact ones with 50 significant digits, radii rounded
    /// down and bounds rounded up.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "precision = exact rationals, else {REPORT_DIGITS} significant digits (radii down, bounds up)").unwrap();
        for (k, v) in self.rows() {
            writeln!(out, "{k} = {v}").unwrap();
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (k, v) in self.rows() {
            let v = match k {
                "diagnostics" => serde_json::Value::from(self.diagnostics.clone()),
                "g" | "d" | "s" | "r" | "n" => serde_json::Value::from(v.parse::<u64>().unwrap()),
                _ => serde_json::Value::from(v),
            };
            map.insert(k.to_string(), v);
        }
        serde_json::Value::Object(map)
    }
}
