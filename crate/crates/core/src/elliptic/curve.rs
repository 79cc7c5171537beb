//! Short Weierstrass curves over the rationals and their group law.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational};

/// Largest order of a rational torsion point on an elliptic curve over Q (Mazur).
pub const MAX_RATIONAL_TORSION_ORDER: u32 = 12;

/// `y^2 = x^3 + A x + B` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Curve {
    a: BigRational,
    b: BigRational,
    /// Degree of the chosen projective model; enters the unnamed constants only.
    degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Infinity,
    Affine { x: BigRational, y: BigRational },
}

impl Curve {
    pub fn new(a: BigRational, b: BigRational) -> Result<Self> {
        let c = Curve { a, b, degree: 3 };
        if c.disc_core().is_zero() {
            return Err(Error::Validation(format!(
                "singular curve y^2 = x^3 + ({})x + ({})",
                format_rational(&c.a),
                format_rational(&c.b)
            )));
        }
        Ok(c)
    }

    pub fn from_ints(a: i64, b: i64) -> Result<Self> {
        Self::new(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()))
    }

    pub fn parse(a: &str, b: &str) -> Result<Self> {
        Self::new(parse_rational(a)?, parse_rational(b)?)
    }

    pub fn with_degree(mut self, degree: u32) -> Self {
        self.degree = degree;
        self
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    fn disc_core(&self) -> BigRational {
        let four = BigRational::from_integer(4.into());
        let tt = BigRational::from_integer(27.into());
        four * &self.a * &self.a * &self.a + tt * &self.b * &self.b
    }

    /// `-16 (4A^3 + 27B^2)`.
    pub fn discriminant(&self) -> BigRational {
        -BigRational::from_integer(16.into()) * self.disc_core()
    }

    /// Builds a point, checking the curve equation exactly.
    pub fn point(&self, x: BigRational, y: BigRational) -> Result<Point> {
        let p = Point::Affine { x, y };
        self.check(&p)?;
        Ok(p)
    }

    pub fn point_i(&self, x: i64, y: i64) -> Result<Point> {
        self.point(BigRational::from_integer(x.into()), BigRational::from_integer(y.into()))
    }

    pub fn contains(&self, p: &Point) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine { x, y } => y * y == x * x * x + &self.a * x + &self.b,
        }
    }

    pub fn check(&self, p: &Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::Validation(format!("point {p} is not on {self}")))
        }
    }

    /// Chord-tangent addition.
    pub fn add(&self, p: &Point, q: &Point) -> Result<Point> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.add_unchecked(p, q))
    }

    pub(crate) fn add_unchecked(&self, p: &Point, q: &Point) -> Point {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return q.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if (y1 + y2).is_zero() {
                return Point::Infinity;
            }
            let three = BigRational::from_integer(3.into());
            (three * x1 * x1 + &self.a) / (y1 + y1)
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let x3 = &lambda * &lambda - x1 - x2;
        let y3 = lambda * (x1 - &x3) - y1;
        Point::Affine { x: x3, y: y3 }
    }

    pub fn neg(&self, p: &Point) -> Point {
        p.neg()
    }

    pub fn sub(&self, p: &Point, q: &Point) -> Result<Point> {
        self.add(p, &q.neg())
    }

    /// `[n]P` by double-and-add; negative `n` negates the result.
    pub fn scalar_mul(&self, n: &BigInt, p: &Point) -> Result<Point> {
        self.check(p)?;
        Ok(self.scalar_mul_unchecked(n, p))
    }

    pub fn mul_i(&self, n: i64, p: &Point) -> Result<Point> {
        self.scalar_mul(&BigInt::from(n), p)
    }

    pub(crate) fn scalar_mul_unchecked(&self, n: &BigInt, p: &Point) -> Point {
        if n.is_zero() || p.is_infinity() {
            return Point::Infinity;
        }
        let k = n.abs();
        let mut acc = Point::Infinity;
        let mut base = p.clone();
        let bits = k.bits();
        for i in 0..bits {
            if k.bit(i) {
                acc = self.add_unchecked(&acc, &base);
            }
            if i + 1 < bits {
                base = self.add_unchecked(&base, &base);
            }
        }
        if n.is_negative() {
            acc.neg()
        } else {
            acc
        }
    }

    /// Order of `p` if it is at most `MAX_RATIONAL_TORSION_ORDER`; over Q this
    /// decides torsion completely.
    pub fn torsion_order(&self, p: &Point) -> Result<Option<u32>> {
        self.check(p)?;
        if let Point::Affine { x, y } = p {
            // Nagell-Lutz on the integral model: torsion points are integral
            // and y = 0 or y^2 divides 4A^3 + 27B^2.
            let u = BigRational::from_integer(self.integral_scale());
            let u2 = &u * &u;
            let (xs, ys) = (x * &u2, y * &u2 * &u);
            if !xs.is_integer() || !ys.is_integer() {
                return Ok(None);
            }
            let (a, b) = (&self.a * &u2 * &u2, &self.b * &u2 * &u2 * &u2);
            let disc = (BigRational::from_integer(4.into()) * &a * &a * &a + BigRational::from_integer(27.into()) * &b * &b).to_integer();
            let y = ys.to_integer();
            if !y.is_zero() && !(&disc % (&y * &y)).is_zero() {
                return Ok(None);
            }
        }
        let mut q = p.clone();
        for n in 1..=MAX_RATIONAL_TORSION_ORDER {
            if q.is_infinity() {
                return Ok(Some(n));
            }
            q = self.add_unchecked(&q, p);
        }
        Ok(None)
    }

    pub fn is_torsion(&self, p: &Point) -> Result<bool> {
        Ok(self.torsion_order(p)?.is_some())
    }

    /// Smallest `u > 0` with `u^4 A` and `u^6 B` integral, so that `x -> u^2 x`
    /// maps the curve onto an integral model.
    pub(crate) fn integral_scale(&self) -> BigInt {
        let da = self.a.denom().clone();
        let db = self.b.denom().clone();
        let fallback = da.lcm(&db);
        let mut u = BigInt::one();
        while u < fallback && u <= BigInt::from(1000) {
            let u4 = num_traits::pow::pow(u.clone(), 4);
            let u6 = num_traits::pow::pow(u.clone(), 6);
            if (&u4 % &da).is_zero() && (&u6 % &db).is_zero() {
                return u;
            }
            u += 1;
        }
        fallback
    }

    /// Parse a point in `O`, `x,y` or `(x,y)` syntax and check it is on the curve.
    pub fn parse_point(&self, s: &str) -> Result<Point> {
        let p: Point = s.parse()?;
        self.check(&p)?;
        Ok(p)
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + ({})x + ({})", format_rational(&self.a), format_rational(&self.b))
    }
}

impl Point {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn neg(&self) -> Point {
        match self {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine { x: x.clone(), y: -y },
        }
    }

    pub fn x(&self) -> Option<&BigRational> {
        match self {
            Point::Infinity => None,
            Point::Affine { x, .. } => Some(x),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "O"),
            Point::Affine { x, y } => write!(f, "{},{}", format_rational(x), format_rational(y)),
        }
    }
}

impl FromStr for Point {
    type Err = Error;

    fn from_str(s: &str) -> Result<Point> {
        let t = s.trim();
        if t == "O" || t == "o" {
            return Ok(Point::Infinity);
        }
        let t = t.strip_prefix('(').and_then(|u| u.strip_suffix(')')).unwrap_or(t);
        let (x, y) = t
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("point `{s}` is neither `O` nor `x,y`")))?;
        Ok(Point::Affine { x: parse_rational(x)?, y: parse_rational(y)? })
    }
}

/// An element of `E^g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointVector(pub Vec<Point>);

impl PointVector {
    pub fn new(coords: Vec<Point>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Validation("point vector must have g >= 1 coordinates".into()));
        }
        Ok(PointVector(coords))
    }

    pub fn zero(g: usize) -> Self {
        PointVector(vec![Point::Infinity; g])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Point] {
        &self.0
    }

    pub fn check_on(&self, curve: &Curve) -> Result<()> {
        self.0.iter().try_for_each(|p| curve.check(p))
    }

    pub fn add(&self, curve: &Curve, other: &PointVector) -> Result<PointVector> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!("{} vs {} coordinates", self.dim(), other.dim())));
        }
        let v = self.0.iter().zip(&other.0).map(|(p, q)| curve.add(p, q)).collect::<Result<_>>()?;
        Ok(PointVector(v))
    }

    pub fn neg(&self) -> PointVector {
        PointVector(self.0.iter().map(Point::neg).collect())
    }

    pub fn scale(&self, curve: &Curve, n: &BigInt) -> Result<PointVector> {
        let v = self.0.iter().map(|p| curve.scalar_mul(n, p)).collect::<Result<_>>()?;
        Ok(PointVector(v))
    }

    /// Concatenation `(x, y)` in `E^{g+s}`.
    pub fn concat(&self, other: &PointVector) -> PointVector {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        PointVector(v)
    }
}

impl fmt::Display for PointVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

impl FromStr for PointVector {
    type Err = Error;

    /// Coordinates separated by `;` or whitespace.
    fn from_str(s: &str) -> Result<PointVector> {
        let coords = s
            .split(|c: char| c == ';' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Point>>>()?;
        PointVector::new(coords)
    }
}

impl Serialize for PointVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PointVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
