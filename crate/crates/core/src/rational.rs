//! Small helpers around `BigRational`: parsing of exact literals, logarithms
//! of big integers and directed rounding to a fixed number of bits.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Parse `p`, `-p/q` or `p/q` with integer `p`, `q`. Decimal points are rejected
/// so that curve data stays exact.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer `{num}` in `{s}`")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer `{den}` in `{s}`")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(BigRational::new(n, d))
}

/// Like [`parse_rational`] but also accepts finite decimals such as `0.3` or
/// `1e-3`, read exactly. Used for bound parameters, never for curve data.
pub fn parse_exact_decimal(s: &str) -> Result<BigRational> {
    let t = s.trim();
    if t.contains('/') || !(t.contains('.') || t.contains(['e', 'E'])) {
        return parse_rational(t);
    }
    let bad = || Error::Parse(format!("bad decimal literal `{t}`"));
    let (mant, exp) = match t.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if !fp.chars().all(|c| c.is_ascii_digit()) || (ip.is_empty() || ip == "-" || ip == "+") && fp.is_empty() {
        return Err(bad());
    }
    let digits = format!("{}{}", if ip == "-" || ip == "+" { format!("{ip}0") } else { ip.to_string() }, fp);
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let e = exp - fp.len() as i64;
    let ten = BigInt::from(10);
    Ok(if e >= 0 {
        BigRational::from_integer(n * num_traits::pow(ten, e as usize))
    } else {
        BigRational::new(n, num_traits::pow(ten, (-e) as usize))
    })
}

/// Serde adapter writing a rational as its exact string form.
pub mod serde_rational {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Lit {
        Int(i64),
        Str(String),
    }

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        match Lit::deserialize(d)? {
            Lit::Int(n) => Ok(BigRational::from_integer(BigInt::from(n))),
            Lit::Str(s) => parse_exact_decimal(&s).map_err(de::Error::custom),
        }
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(q: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
            match q {
                Some(q) => s.serialize_some(&format_rational(q)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<BigRational>, D::Error> {
            match Option::<Lit>::deserialize(d)? {
                None => Ok(None),
                Some(Lit::Int(n)) => Ok(Some(BigRational::from_integer(BigInt::from(n)))),
                Some(Lit::Str(s)) => parse_exact_decimal(&s).map(Some).map_err(de::Error::custom),
            }
        }
    }
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Natural log of a positive big integer, accurate to about one part in 1e15.
pub fn ln_bigint(n: &BigInt) -> f64 {
    debug_assert!(n.sign() == Sign::Plus);
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 60;
    let top: BigInt = n >> shift;
    top.to_f64().unwrap().ln() + (shift as f64) * std::f64::consts::LN_2
}

/// Weil height of a rational number: `log max(|p|, |q|)` in lowest terms.
pub fn log_max_abs(q: &BigRational) -> f64 {
    let p = q.numer().abs();
    let d = q.denom().abs();
    let m = if p > d { p } else { d };
    if m.is_one() {
        0.0
    } else {
        ln_bigint(&m)
    }
}

/// Largest multiple of `2^-bits` (relative to the leading bit of `q`) that is `<= q`.
pub fn round_down(q: &BigRational, bits: u64) -> BigRational {
    round_dir(q, bits, false)
}

/// Smallest such multiple that is `>= q`.
pub fn round_up(q: &BigRational, bits: u64) -> BigRational {
    round_dir(q, bits, true)
}

fn round_dir(q: &BigRational, bits: u64, up: bool) -> BigRational {
    if q.is_zero() {
        return q.clone();
    }
    // Only round when the representation has grown past the target size.
    if q.numer().bits() + q.denom().bits() <= 2 * bits + 8 {
        return q.clone();
    }
    let mag = q.numer().bits() as i64 - q.denom().bits() as i64;
    let scale = bits as i64 - mag;
    let scaled = if scale >= 0 {
        q * BigRational::from_integer(BigInt::one() << scale as u64)
    } else {
        q / BigRational::from_integer(BigInt::one() << (-scale) as u64)
    };
    let r = if up { scaled.ceil() } else { scaled.floor() };
    if scale >= 0 {
        r / BigRational::from_integer(BigInt::one() << scale as u64)
    } else {
        r * BigRational::from_integer(BigInt::one() << (-scale) as u64)
    }
}

/// Exact integer `k`-th root of a non-negative integer, if it exists.
pub fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.nth_root(k);
    if num_traits::pow::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

pub fn lcm_all<'a>(it: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x))
}

/// Decimal rendering of `q` with `digits` significant digits, rounded toward
/// `-inf` (`up == false`) or `+inf` (`up == true`).
pub fn to_sig_decimal(q: &BigRational, digits: usize, up: bool) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let neg = q.is_negative();
    let a = q.abs();
    // exponent e with 10^e <= a < 10^(e+1)
    let mut e: i64 = (a.numer().to_string().len() as i64) - (a.denom().to_string().len() as i64);
    let ten = BigRational::from_integer(BigInt::from(10));
    let pow10 = |k: i64| -> BigRational {
        if k >= 0 {
            num_traits::pow::pow(ten.clone(), k as usize)
        } else {
            BigRational::one() / num_traits::pow::pow(ten.clone(), (-k) as usize)
        }
    };
    while a < pow10(e) {
        e -= 1;
    }
    while a >= pow10(e + 1) {
        e += 1;
    }
    let shift = digits as i64 - 1 - e;
    let scaled = &a * pow10(shift);
    // rounding direction for the magnitude flips with the sign
    let toward_larger_mag = up != neg;
    let mut m = if toward_larger_mag { scaled.ceil() } else { scaled.floor() }.to_integer();
    let mut shift = shift;
    if m.to_string().len() > digits {
        m /= 10;
        shift -= 1;
        if toward_larger_mag && &m * BigInt::from(10) != scaled.ceil().to_integer() {
            m += 1;
        }
    }
    let ms = m.to_string();
    let exp10 = ms.len() as i64 - 1 - shift;
    let mant = if ms.len() > 1 {
        let trimmed = ms[1..].trim_end_matches('0');
        if trimmed.is_empty() {
            ms[..1].to_string()
        } else {
            format!("{}.{}", &ms[..1], trimmed)
        }
    } else {
        ms.clone()
    };
    format!("{}{}e{}", if neg { "-" } else { "" }, mant, exp10)
}
