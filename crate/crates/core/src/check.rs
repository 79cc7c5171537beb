//! A fast self-check of the core invariants, run by `ellsub check`.

use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::chain::{main_delta_chain, BoundParams, EXPONENT_NONPOSITIVE};
use crate::elliptic::{apply_morphism, canonical_height, vector_height, Curve, Point, PointVector};
use crate::error::Result;
use crate::morphism::{
    count_gauss_reduced, enumerate_gauss_reduced, gauss_reduce, helping_isogenies, is_gauss_reduced, kernel_contains_up_to_torsion,
    IntMorphism,
};

#[derive(Clone, Debug)]
pub struct CheckLine {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn line(name: &'static str, r: Result<(bool, String)>) -> CheckLine {
    match r {
        Ok((passed, detail)) => CheckLine { name, passed, detail },
        Err(e) => CheckLine { name, passed: false, detail: e.to_string() },
    }
}

fn group_law() -> Result<(bool, String)> {
    let e = Curve::from_ints(0, 1)?;
    let p = e.point_i(2, 3)?;
    let ok = e.add(&p, &p)? == e.point_i(0, 1)? && e.mul_i(6, &p)? == Point::Infinity && e.is_torsion(&p)?;
    let f = Curve::from_ints(0, -2)?;
    let q = f.point_i(3, 5)?;
    let mut assoc = true;
    for (a, b, c) in [(1, 2, 3), (-2, 5, 1), (4, -3, -1)] {
        let (x, y, z) = (f.mul_i(a, &q)?, f.mul_i(b, &q)?, f.mul_i(c, &q)?);
        assoc &= f.add(&f.add(&x, &y)?, &z)? == f.add(&x, &f.add(&y, &z)?)?;
    }
    Ok((ok && assoc && !f.is_torsion(&q)?, "doubling, order 6, associativity".into()))
}

fn heights() -> Result<(bool, String)> {
    let e = Curve::from_ints(0, -2)?;
    let p = e.point_i(3, 5)?;
    let tol = 1e-8;
    let h = canonical_height(&e, &p, tol)?.value;
    let mut worst: f64 = 0.0;
    for m in 2..=5i64 {
        let hm = canonical_height(&e, &e.mul_i(m, &p)?, tol)?.value;
        worst = worst.max((hm - (m * m) as f64 * h).abs() / ((m * m + 1) as f64 * tol));
    }
    Ok((worst <= 1.0, format!("h(3,5) = {h:.12}, worst quadraticity ratio {worst:.3}")))
}

fn reduction() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut n = 0;
    while n < 50 {
        let g = rng.gen_range(1..=4);
        let r = rng.gen_range(1..=g);
        let e: Vec<BigInt> = (0..r * g).map(|_| BigInt::from(rng.gen_range(-20..=20))).collect();
        let psi = IntMorphism::new(r, g, e)?;
        if psi.rank() < r {
            continue;
        }
        let f = gauss_reduce(&psi)?;
        if is_gauss_reduced(&f.matrix).is_none() || f.matrix.rank() != r || !kernel_contains_up_to_torsion(&psi, &f.matrix)? {
            return Ok((false, format!("failed on {psi}")));
        }
        n += 1;
    }
    Ok((true, "50 random full-rank matrices".into()))
}

fn enumeration() -> Result<(bool, String)> {
    let got: Vec<usize> = [(2, 1, 1), (2, 1, 2), (2, 2, 1)].iter().map(|&(g, r, m)| enumerate_gauss_reduced(g, r, m, true).count()).collect();
    let ok = got == [3, 8, 1] && (count_gauss_reduced(3, 2, 3) == enumerate_gauss_reduced(3, 2, 3, true).count() as u128);
    Ok((ok, format!("counts {got:?}")))
}

fn helping() -> Result<(bool, String)> {
    let mut n = 0;
    for g in 1..=3 {
        for r in 1..=g {
            for f in enumerate_gauss_reduced(g, r, 3, false) {
                if !helping_isogenies(&f, g)?.check_identity(&f.pivot)? {
                    return Ok((false, format!("identity fails for {}", f.matrix)));
                }
                n += 1;
            }
        }
    }
    Ok((true, format!("Phi F = a L on {n} morphisms")))
}

fn norms() -> Result<(bool, String)> {
    let e = Curve::from_ints(0, -2)?;
    let p = e.point_i(3, 5)?;
    let phi: IntMorphism = "[[2,0,1],[0,2,-2]]".parse()?;
    let x = PointVector(vec![e.mul_i(3, &p)?, e.mul_i(-1, &p)?, Point::Infinity]);
    let y = apply_morphism(&e, &phi, &x)?;
    let exact = y.coords() == [e.mul_i(6, &p)?, e.mul_i(-2, &p)?];
    let x2 = PointVector(vec![e.mul_i(1, &p)?, e.mul_i(2, &p)?, e.mul_i(-1, &p)?]);
    let tol = 1e-8;
    let hx = vector_height(&e, &x2, tol)?;
    let hy = vector_height(&e, &apply_morphism(&e, &phi, &x2)?, tol)?;
    let ok = hy.norm_bounds().0 <= 2.0 * 2.0 * hx.norm_bounds().1 + 4.0 * tol;
    Ok((exact && ok, "exact [a]x on E^r x O, seminorm bound".into()))
}

fn bounds() -> Result<(bool, String)> {
    let mut p = BoundParams::new(2, 1, 1);
    p.gamma_norm = BigInt::from(2).into();
    p.eps1_override = Some(num_rational::BigRational::new(3.into(), 10.into()));
    let rep = main_delta_chain(&p)?;
    let want = num_rational::BigRational::new(BigInt::from(1), BigInt::from(40) * BigInt::from(120).pow(7));
    let flagged = main_delta_chain(&BoundParams::new(3, 1, 0))?.diagnostics.iter().any(|d| d == EXPONENT_NONPOSITIVE);
    Ok((rep.n == 3 && rep.delta.as_exact() == Some(&want) && flagged, "delta = 1/(40*120^7), g = 3 flagged".into()))
}

type Check = fn() -> Result<(bool, String)>;

pub fn run_checks() -> Vec<(CheckLine, f64)> {
    let checks: [(&'static str, Check); 7] = [
        ("group_law", group_law),
        ("heights", heights),
        ("gauss_reduce", reduction),
        ("enumeration", enumeration),
        ("helping_isogenies", helping),
        ("norms", norms),
        ("bound_chain", bounds),
    ];
    checks
        .iter()
        .map(|(name, f)| {
            let t = Instant::now();
            let l = line(name, f());
            (l, t.elapsed().as_secs_f64())
        })
        .collect()
}
