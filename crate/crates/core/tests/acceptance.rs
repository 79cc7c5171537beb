//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ellsub::bounds::chain::EXPONENT_NONPOSITIVE;
use ellsub::bounds::{main_delta_chain, BoundParams};
use ellsub::config::{load_points, RunConfig};
use ellsub::elliptic::{apply_morphism, canonical_height, vector_height, Curve, Point, PointVector};
use ellsub::morphism::{
    enumerate_gauss_reduced, enumerate_special, gauss_reduce, helping_isogenies, is_gauss_reduced, kernel_contains_up_to_torsion,
    GaussReducedForm, IntMorphism,
};
use ellsub::rational::to_sig_decimal;
use ellsub::report::render_scan_report;
use ellsub::scan::{centro_containment_check, scan, CentroOutcome, ScanVerdict};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e() -> ellsub::Result<Curve> {
    Curve::from_ints(0, -2)
}

// y^2 = x^3 - 2, P = (3,5); independent CAS value, halved to this normalization.
const ORACLE_H_3_5: f64 = 0.674_788_417_840_059;

fn criterion_1() -> Outcome {
    let tol = 1e-8;
    let e = e().map_err(|x| x.to_string())?;
    let p = e.point_i(3, 5).map_err(|x| x.to_string())?;
    let h = canonical_height(&e, &p, tol).map_err(|x| x.to_string())?;
    ensure((h.value - ORACLE_H_3_5).abs() <= 2.0 * tol, || format!("h(3,5) = {} vs oracle {ORACLE_H_3_5}", h.value))?;
    let mut worst = 0.0f64;
    for m in 2..=5i64 {
        let hm = canonical_height(&e, &e.mul_i(m, &p).unwrap(), tol).map_err(|x| x.to_string())?;
        let dev = (hm.value - (m * m) as f64 * h.value).abs();
        ensure(dev <= (m * m + 1) as f64 * tol, || format!("m = {m}: deviation {dev:e}"))?;
        worst = worst.max(dev);
    }
    // E(Q)_tors = Z/6 generated by (2,3), listed by an independent CAS
    let t = Curve::from_ints(0, 1).unwrap();
    let tors = [Point::Infinity, t.point_i(-1, 0).unwrap(), t.point_i(0, 1).unwrap(), t.point_i(0, -1).unwrap(), t.point_i(2, 3).unwrap(), t.point_i(2, -3).unwrap()];
    for q in &tors {
        let hq = canonical_height(&t, q, tol).map_err(|x| x.to_string())?;
        ensure(hq.value <= tol && t.is_torsion(q).unwrap(), || format!("torsion point {q} has height {}", hq.value))?;
    }
    Ok(format!("h(3,5) = {:.12}, worst quadraticity deviation {worst:.2e}, 6 torsion points", h.value))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let mut done = 0;
    while done < 200 {
        let g = rng.gen_range(1..=4usize);
        let r = rng.gen_range(1..=g);
        let entries: Vec<BigInt> = (0..r * g).map(|_| BigInt::from(rng.gen_range(-20..=20))).collect();
        let psi = IntMorphism::new(r, g, entries).unwrap();
        if psi.rank() < r {
            continue;
        }
        let f = gauss_reduce(&psi).map_err(|x| format!("{psi}: {x}"))?;
        ensure(is_gauss_reduced(&f.matrix).is_some(), || format!("{} not Gauss-reduced", f.matrix))?;
        ensure(f.matrix.rank() == psi.rank(), || format!("rank changed for {psi}"))?;
        ensure(kernel_contains_up_to_torsion(&psi, &f.matrix).unwrap(), || format!("containment fails for {psi}"))?;
        done += 1;
    }
    Ok("200 seeded full-rank matrices".into())
}

/// Definition-level test: some column reordering is `(a I_r | L)` with `a = H`.
fn gauss_reduced_by_definition(m: &[i64], r: usize, g: usize) -> bool {
    let a = m.iter().map(|x| x.abs()).max().unwrap_or(0);
    if a == 0 {
        return false;
    }
    let mut used = [false; 8];
    (0..r).all(|i| {
        (0..g).any(|j| {
            let ok = !used[j] && (0..r).all(|k| m[k * g + j] == if k == i { a } else { 0 });
            if ok {
                used[j] = true;
            }
            ok
        })
    })
}

fn brute_force(g: usize, r: usize, bound: i64) -> (BTreeSet<Vec<i64>>, BTreeSet<Vec<i64>>) {
    let n = r * g;
    let mut cur = vec![-bound; n];
    let (mut all, mut canonical) = (BTreeSet::new(), BTreeSet::new());
    loop {
        if gauss_reduced_by_definition(&cur, r, g) {
            let a = cur.iter().map(|x| x.abs()).max().unwrap();
            if (0..r).all(|i| (0..r).all(|k| cur[k * g + i] == if k == i { a } else { 0 })) {
                canonical.insert(cur.clone());
            }
            all.insert(cur.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return (all, canonical);
            }
            i -= 1;
            if cur[i] < bound {
                cur[i] += 1;
                break;
            }
            cur[i] = -bound;
        }
    }
}

fn as_vec(f: &IntMorphism) -> Vec<i64> {
    f.entries().iter().map(|x| i64::try_from(x).unwrap()).collect()
}

fn criterion_3() -> Outcome {
    for ((g, r, m), want) in [((2, 1, 1), 3), ((2, 1, 2), 8), ((2, 2, 1), 1)] {
        let n = enumerate_gauss_reduced(g, r, m, true).count();
        ensure(n == want, || format!("(g,r,M) = ({g},{r},{m}): {n} != {want}"))?;
    }
    let mut compared = 0;
    for g in 1..=3usize {
        for r in 1..=g {
            for m in 1..=3u64 {
                let (all, canonical) = brute_force(g, r, m as i64);
                let canon: BTreeSet<_> = enumerate_gauss_reduced(g, r, m, true).map(|f| as_vec(&f.matrix)).collect();
                let full: BTreeSet<_> = enumerate_gauss_reduced(g, r, m, false).map(|f| as_vec(&f.matrix)).collect();
                ensure(canon == canonical, || format!("canonical set differs at ({g},{r},{m})"))?;
                ensure(full == all, || format!("permuted set differs at ({g},{r},{m})"))?;
                for v in all.iter().step_by(97) {
                    let f = IntMorphism::new(r, g, v.iter().map(|&x| BigInt::from(x)).collect()).unwrap();
                    ensure(is_gauss_reduced(&f).is_some(), || format!("library rejects {f}"))?;
                }
                compared += all.len();
            }
        }
    }
    Ok(format!("counts 3/8/1; {compared} morphisms matched by brute force"))
}

fn criterion_4() -> Outcome {
    let mut n = 0;
    for g in 1..=3usize {
        for r in 1..=g {
            for f in enumerate_gauss_reduced(g, r, 3, false) {
                let t = helping_isogenies(&f, g).map_err(|x| x.to_string())?;
                ensure(t.phi.mul(&t.f).unwrap() == t.l.scale(&f.pivot), || format!("Phi F != a L for {}", f.matrix))?;
                n += 1;
            }
        }
    }
    Ok(format!("Phi F = a L on {n} morphisms"))
}

fn criterion_5() -> Outcome {
    let tol = 1e-8;
    let e = e().unwrap();
    let p = e.point_i(3, 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut pool: Vec<(usize, GaussReducedForm)> = Vec::new();
    for g in 1..=3usize {
        for r in 1..=g {
            pool.extend(enumerate_gauss_reduced(g, r, 3, false).map(|f| (g, f)));
        }
    }
    let mult = |k: i64| e.mul_i(k, &p).unwrap();
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..100 {
        let (g, f) = pool.choose(&mut rng).unwrap();
        let x = PointVector((0..*g).map(|_| mult(rng.gen_range(-4..=4))).collect());
        let hx = vector_height(&e, &x, tol).map_err(|x| x.to_string())?;
        let hy = vector_height(&e, &apply_morphism(&e, &f.matrix, &x).unwrap(), tol).map_err(|x| x.to_string())?;
        let bound = (g - f.rank() + 1) as f64 * f.pivot.to_f64().unwrap_or(f64::MAX) * hx.norm_bounds().1;
        let lhs = hy.norm_bounds().0;
        ensure(lhs <= bound + 4.0 * tol, || format!("{} at {x}: {lhs} > {bound}", f.matrix))?;
        worst = worst.max(lhs - bound);
    }
    for _ in 0..50 {
        let (g, f) = pool.choose(&mut rng).unwrap();
        let mut coords = vec![Point::Infinity; *g];
        for &c in f.pivot_columns() {
            coords[c] = mult(rng.gen_range(-5..=5));
        }
        let x = PointVector(coords);
        let y = apply_morphism(&e, &f.matrix, &x).unwrap();
        let want: Vec<Point> = f.pivot_columns().iter().map(|&c| e.scalar_mul(&f.pivot, &x.coords()[c]).unwrap()).collect();
        ensure(y.coords() == &want[..], || format!("phi(x) != [a]x for {} at {x}", f.matrix))?;
    }
    Ok(format!("100 seminorm samples (max excess {worst:.3e}), 50 exact [a]x samples"))
}

fn criterion_6() -> Outcome {
    let mut p = BoundParams::new(2, 1, 1);
    p.gamma_norm = BigRational::from_integer(2.into());
    p.eps1_override = Some(BigRational::new(3.into(), 10.into()));
    let rep = main_delta_chain(&p).map_err(|x| x.to_string())?;
    ensure(rep.n == 3, || format!("n = {}", rep.n))?;
    ensure(rep.delta1.as_exact() == Some(&BigRational::new(1.into(), 40.into())), || "delta1 != 1/40".into())?;
    ensure(rep.m_big == BigInt::from(14400).pow(3), || format!("M = {}", rep.m_big))?;
    let want = BigRational::new(BigInt::from(1), BigInt::from(40) * BigInt::from(120).pow(7));
    let delta = rep.delta.as_exact().ok_or("delta is not exact")?;
    ensure(delta == &want, || format!("delta = {delta}"))?;
    let digits = to_sig_decimal(delta, 50, false);
    ensure(digits == "6.9770411808413351623228166438042981252857796067672e-17", || format!("delta digits {digits}"))?;
    ensure(rep.to_text() == main_delta_chain(&p).unwrap().to_text(), || "report not deterministic".into())?;
    let three = main_delta_chain(&BoundParams::new(3, 1, 0)).map_err(|x| x.to_string())?;
    ensure(three.diagnostics.iter().any(|d| d == EXPONENT_NONPOSITIVE), || "EXPONENT_NONPOSITIVE missing for (3,1)".into())?;
    Ok(format!("n = 3, delta1 = 1/40, M = 14400^3, delta = {digits}"))
}

fn criterion_7() -> Outcome {
    let e = e().unwrap();
    let p = e.point_i(3, 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let specials: Vec<IntMorphism> = enumerate_special(2, 1, 2, 6).collect();
    let mut found = 0;
    for _ in 0..20 {
        let phi = specials.choose(&mut rng).unwrap();
        let a = i64::try_from(phi.get(0, 0)).unwrap();
        let (f1, f2) = (i64::try_from(phi.get(0, 2)).unwrap(), i64::try_from(phi.get(1, 2)).unwrap());
        let t = rng.gen_range(1..=2);
        let x = PointVector(vec![e.mul_i(-f1 * t, &p).unwrap(), e.mul_i(-f2 * t, &p).unwrap(), e.mul_i(a * t, &p).unwrap()]);
        ensure(apply_morphism(&e, phi, &x).unwrap().coords().iter().all(Point::is_infinity), || format!("{x} not in ker {phi}"))?;
        match centro_containment_check(&e, &x, phi, 0.5, 2, 1, 2, 1e-6, 6).map_err(|x| x.to_string())? {
            CentroOutcome::Found { .. } => found += 1,
            other => return Err(format!("{phi} at {x}: {other:?}")),
        }
    }
    Ok(format!("{found}/20 kernel points contained"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn criterion_8() -> Outcome {
    let cfg = RunConfig::load(&fixture("kernel_scan.toml")).map_err(|x| x.to_string())?;
    let pts = load_points(&fixture("kernel_points.txt")).map_err(|x| x.to_string())?;
    let curve = cfg.curve().unwrap();
    let run = || -> Result<String, String> {
        let out = scan(&curve, &pts, &cfg.gamma().unwrap(), &cfg.scan_config()).map_err(|x| x.to_string())?;
        Ok(render_scan_report(&cfg, &pts, &out))
    };
    let first = run()?;
    ensure(first == run()?, || "reports differ between runs".into())?;
    let out = scan(&curve, &pts, &cfg.gamma().unwrap(), &cfg.scan_config()).unwrap();
    let manifest: BTreeSet<(usize, String, Vec<i64>)> = std::fs::read_to_string(fixture("kernel_manifest.txt"))
        .map_err(|x| x.to_string())?
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            (f[0].parse().unwrap(), f[1].to_string(), vec![f[2].parse().unwrap()])
        })
        .collect();
    let hits: BTreeSet<(usize, String, Vec<i64>)> =
        out.records.iter().filter(|r| r.verdict == ScanVerdict::Hit).map(|r| (r.point_id, r.phi.clone(), r.witness.clone())).collect();
    ensure(hits == manifest, || format!("HIT set {hits:?} != manifest {manifest:?}"))?;
    let others = out.records.iter().filter(|r| r.verdict != ScanVerdict::Hit).all(|r| r.verdict == ScanVerdict::Miss);
    ensure(others, || "non-HIT records that are not MISS".into())?;
    let dir = tempfile::tempdir().map_err(|x| x.to_string())?;
    for i in 0..2 {
        let target = dir.path().join(format!("scan{i}.txt"));
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_ellsub"))
            .args(["scan", "--config"])
            .arg(fixture("kernel_scan.toml"))
            .arg("--out")
            .arg(&target)
            .stderr(std::process::Stdio::null())
            .status()
            .map_err(|x| x.to_string())?;
        ensure(status.success(), || format!("cli scan exited with {status}"))?;
        let cli = std::fs::read_to_string(&target).map_err(|x| x.to_string())?;
        ensure(cli == first, || "cli report differs from library report".into())?;
    }
    Ok(format!("{} planted HITs reproduced, {} MISS, byte-identical reruns (library and cli)", hits.len(), out.summary.miss))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);
    let criteria: [Criterion; 8] = [
        ("1 height engine", criterion_1, Some(Duration::from_secs(10))),
        ("2 gauss reduction", criterion_2, Some(Duration::from_secs(5))),
        ("3 enumeration counts", criterion_3, Some(Duration::from_secs(5))),
        ("4 helping-isogeny identity", criterion_4, None),
        ("5 norm inequality", criterion_5, None),
        ("6 bound chain", criterion_6, None),
        ("7 centro containment", criterion_7, Some(Duration::from_secs(60))),
        ("8 scan determinism", criterion_8, None),
    ];
    let mut failed = 0;
    for (name, f, limit) in criteria {
        let t = Instant::now();
        let mut res = f();
        let el = t.elapsed();
        if let (Ok(_), Some(l)) = (&res, limit) {
            if el > l {
                res = Err(format!("took {el:.2?}, limit {l:?}"));
            }
        }
        match res {
            Ok(msg) => println!("PASS criterion {name} ({el:.2?}): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name} ({el:.2?}): {msg}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
