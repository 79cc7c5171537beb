//! Run configuration: a sectioned TOML file with exact rational literals.
//!
//! ```toml
//! [curve]
//! A = "0"
//! B = "-2"
//!
//! [ambient]
//! g = 2
//! d = 1
//! s = 1
//!
//! [params]
//! K = "1"
//! gamma_norm = "2"
//!
//! [gamma]
//! generators = ["3,5; O"]
//! coeff_box = 1
//!
//! [scan]
//! points = "points.txt"
//! eps = "1/1000"
//! r = 1
//!
//! [tolerances]
//! height = "1e-8"
//! compare = "1e-6"
//!
//! [caps]
//! M_cap = 2
//! budget = 100000
//! ```

use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::bounds::chain::BoundParams;
use crate::elliptic::{Curve, HeightEngine, PointVector};
use crate::error::{Error, Result};
use crate::rational::{parse_exact_decimal, parse_rational, serde_rational};
use crate::scan::{GammaData, ScanConfig};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSection {
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
    #[serde(rename = "degE", default, skip_serializing_if = "Option::is_none")]
    pub deg_e: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ambient {
    pub g: u32,
    #[serde(default = "default_d")]
    pub d: u32,
    #[serde(default)]
    pub s: u32,
}

fn default_d() -> u32 {
    1
}

/// Overrides for [`BoundParams`]; absent keys keep the documented defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamOverrides {
    #[serde(rename = "K", default, with = "serde_rational::option", skip_serializing_if = "Option::is_none")]
    pub k: Option<BigRational>,
    #[serde(rename = "degV", default, skip_serializing_if = "Option::is_none")]
    pub deg_v: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stab_order: Option<u64>,
    #[serde(default, with = "serde_rational::option", skip_serializing_if = "Option::is_none")]
    pub eta: Option<BigRational>,
    #[serde(default, with = "serde_rational::option", skip_serializing_if = "Option::is_none")]
    pub c0: Option<BigRational>,
    #[serde(default, with = "serde_rational::option", skip_serializing_if = "Option::is_none")]
    pub c1: Option<BigRational>,
    #[serde(default, with = "serde_rational::option", skip_serializing_if = "Option::is_none")]
    pub c2: Option<BigRational>,
    #[serde(default, with = "serde_rational::option", skip_serializing_if = "Option::is_none")]
    pub c_bog_g: Option<BigRational>,
    #[serde(default, with = "serde_rational::option", skip_serializing_if = "Option::is_none")]
    pub c_bog_d1: Option<BigRational>,
    #[serde(default, with = "serde_rational::option", skip_serializing_if = "Option::is_none")]
    pub c_p: Option<BigRational>,
    #[serde(default, with = "serde_rational::option", skip_serializing_if = "Option::is_none")]
    pub eps0_p: Option<BigRational>,
    #[serde(default, with = "serde_rational::option", skip_serializing_if = "Option::is_none")]
    pub gamma_norm: Option<BigRational>,
    #[serde(default, with = "serde_rational::option", skip_serializing_if = "Option::is_none")]
    pub eps1_override: Option<BigRational>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaSection {
    #[serde(default)]
    pub generators: Vec<String>,
    #[serde(default)]
    pub coeff_box: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<PathBuf>,
    #[serde(with = "serde_rational")]
    pub eps: BigRational,
    #[serde(default = "default_r")]
    pub r: u32,
    #[serde(default)]
    pub canonical_only: bool,
}

fn default_r() -> u32 {
    1
}

impl Default for ScanSection {
    fn default() -> Self {
        ScanSection { points: None, eps: BigRational::new(BigInt::one(), BigInt::from(1000)), r: 1, canonical_only: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Absolute error allowed on each canonical height.
    #[serde(with = "serde_rational")]
    pub height: BigRational,
    /// Width of the band used in norm comparisons.
    #[serde(with = "serde_rational")]
    pub compare: BigRational,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            height: BigRational::new(BigInt::one(), BigInt::from(100_000_000)),
            compare: BigRational::new(BigInt::one(), BigInt::from(1_000_000)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    #[serde(rename = "M_cap")]
    pub m_cap: u64,
    pub budget: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { m_cap: 2, budget: 1_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub curve: CurveSection,
    pub ambient: Ambient,
    #[serde(default)]
    pub params: ParamOverrides,
    #[serde(default)]
    pub gamma: GammaSection,
    #[serde(default)]
    pub scan: ScanSection,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub caps: Caps,
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let c: RunConfig = toml::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
        c.curve()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }

    pub fn curve(&self) -> Result<Curve> {
        let c = Curve::new(parse_rational(&self.curve.a)?, parse_rational(&self.curve.b)?)?;
        Ok(match self.curve.deg_e {
            Some(d) => c.with_degree(d),
            None => c,
        })
    }

    pub fn height_tol(&self) -> f64 {
        to_f64(&self.tolerances.height)
    }

    pub fn compare_tol(&self) -> f64 {
        to_f64(&self.tolerances.compare)
    }

    pub fn gamma(&self) -> Result<GammaData> {
        let generators = self.gamma.generators.iter().map(|s| s.parse()).collect::<Result<Vec<PointVector>>>()?;
        Ok(GammaData { generators, coeff_box: self.gamma.coeff_box })
    }

    /// `max_i ||gamma_i||` rounded up to a rational, or `None` without generators.
    pub fn gamma_norm_from_generators(&self) -> Result<Option<BigRational>> {
        let gamma = self.gamma()?;
        if gamma.generators.is_empty() {
            return Ok(None);
        }
        let curve = self.curve()?;
        let eng = HeightEngine::new(&curve);
        let mut hi = 0.0f64;
        for x in &gamma.generators {
            hi = hi.max(eng.vector_height(x, self.height_tol())?.norm_bounds().1);
        }
        let q = BigRational::from_float(hi).ok_or_else(|| Error::Precision("non-finite generator norm".into()))?;
        Ok(Some(q))
    }

    pub fn bound_params(&self) -> Result<BoundParams> {
        let a = &self.ambient;
        let o = &self.params;
        let mut p = BoundParams::new(a.g, a.d, a.s);
        let set = |dst: &mut BigRational, v: &Option<BigRational>| {
            if let Some(v) = v {
                *dst = v.clone();
            }
        };
        set(&mut p.k, &o.k);
        set(&mut p.c0, &o.c0);
        set(&mut p.c1, &o.c1);
        set(&mut p.c2, &o.c2);
        set(&mut p.c_bog_g, &o.c_bog_g);
        set(&mut p.c_bog_d1, &o.c_bog_d1);
        set(&mut p.c_p, &o.c_p);
        set(&mut p.eps0_p, &o.eps0_p);
        if let Some(v) = o.deg_v {
            p.deg_v = BigInt::from(v);
        }
        if let Some(v) = o.stab_order {
            p.stab_order = BigInt::from(v);
        }
        if let Some(d) = self.curve.deg_e {
            p.deg_e = BigInt::from(d);
        }
        p.eta = o.eta.clone();
        p.eps1_override = o.eps1_override.clone();
        p.gamma_norm = match &o.gamma_norm {
            Some(v) => v.clone(),
            None => self.gamma_norm_from_generators()?.unwrap_or_default(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn scan_config(&self) -> ScanConfig {
        ScanConfig {
            k: to_f64(self.params.k.as_ref().unwrap_or(&BigRational::one())),
            eps: to_f64(&self.scan.eps),
            r: self.scan.r as usize,
            m_cap: self.caps.m_cap,
            tol: self.compare_tol(),
            canonical_only: self.scan.canonical_only,
            budget: self.caps.budget,
        }
    }
}

/// Parses a tolerance or radius given on the command line, exactly.
pub fn parse_cli_real(s: &str) -> Result<f64> {
    Ok(to_f64(&parse_exact_decimal(s)?))
}

/// One point vector per line; blank lines and `#` comments are skipped.
pub fn parse_points(text: &str) -> Result<Vec<PointVector>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| l.parse())
        .collect()
}

pub fn load_points(path: &Path) -> Result<Vec<PointVector>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_points(&text)
}
