//! Finite enumerations of Gauss-reduced and Special morphisms of bounded height.
//!
//! Order is deterministic: pivot `a` ascending, then the free entries in
//! lexicographic order (each running from `-a` to `a`), then, for the
//! permuted variant, column permutations in lexicographic order.

use std::collections::HashSet;

use num_bigint::BigInt;

use crate::morphism::gauss::GaussReducedForm;
use crate::morphism::matrix::IntMorphism;

/// Odometer over `len` digits in `[-a, a]`.
#[derive(Clone, Debug)]
struct BoxCounter {
    a: i64,
    digits: Vec<i64>,
    done: bool,
}

impl BoxCounter {
    fn new(a: i64, len: usize) -> Self {
        BoxCounter { a, digits: vec![-a; len], done: false }
    }

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.done {
            return None;
        }
        let out = self.digits.clone();
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.digits[i] < self.a {
                self.digits[i] += 1;
                for d in &mut self.digits[i + 1..] {
                    *d = -self.a;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Lexicographic permutations of `0..n`.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else { return out };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
    }
}

fn canonical_matrix(g: usize, r: usize, a: i64, free: &[i64], extra: &[i64], s: usize) -> IntMorphism {
    let n = g + s;
    let w = g - r;
    let mut e = vec![BigInt::from(0); r * n];
    for i in 0..r {
        e[i * n + i] = BigInt::from(a);
        for j in 0..w {
            e[i * n + r + j] = BigInt::from(free[i * w + j]);
        }
        for j in 0..s {
            e[i * n + g + j] = BigInt::from(extra[i * s + j]);
        }
    }
    IntMorphism::new(r, n, e).expect("consistent dimensions")
}

/// Stream of Gauss-reduced morphisms `E^g -> E^r` with `1 <= H <= max_height`.
#[derive(Clone, Debug)]
pub struct GaussReducedIter {
    g: usize,
    r: usize,
    max_height: i64,
    a: i64,
    counter: BoxCounter,
    perms: Option<Vec<Vec<usize>>>,
    pending: Vec<GaussReducedForm>,
    seen: HashSet<IntMorphism>,
}

impl Iterator for GaussReducedIter {
    type Item = GaussReducedForm;

    fn next(&mut self) -> Option<GaussReducedForm> {
        loop {
            if let Some(f) = self.pending.pop() {
                return Some(f);
            }
            if self.a > self.max_height {
                return None;
            }
            let Some(free) = self.counter.next() else {
                self.a += 1;
                self.counter = BoxCounter::new(self.a, self.r * (self.g - self.r));
                continue;
            };
            let canon = canonical_matrix(self.g, self.r, self.a, &free, &[], 0);
            let pivot = BigInt::from(self.a);
            match &self.perms {
                None => {
                    let perm = (0..self.g).collect();
                    return Some(GaussReducedForm { matrix: canon, pivot, perm });
                }
                Some(perms) => {
                    let mut batch = Vec::new();
                    for p in perms {
                        let m = canon.scatter_columns(p);
                        if self.seen.insert(m.clone()) {
                            batch.push(GaussReducedForm { matrix: m, pivot: pivot.clone(), perm: p.clone() });
                        }
                    }
                    batch.reverse();
                    self.pending = batch;
                }
            }
        }
    }
}

/// All `(a I_r | L)` with `1 <= a <= max_height` and `|L| <= a`; unless
/// `canonical_only`, also every distinct column permutation of each.
pub fn enumerate_gauss_reduced(g: usize, r: usize, max_height: u64, canonical_only: bool) -> GaussReducedIter {
    assert!(1 <= r && r <= g, "need 1 <= r <= g");
    let max_height = max_height as i64;
    GaussReducedIter {
        g,
        r,
        max_height,
        a: 1,
        counter: BoxCounter::new(1, r * (g - r)),
        perms: if canonical_only { None } else { Some(permutations(g)) },
        pending: Vec::new(),
        seen: HashSet::new(),
    }
}

/// Number of canonical Gauss-reduced morphisms of height at most `max_height`.
pub fn count_gauss_reduced(g: usize, r: usize, max_height: u64) -> u128 {
    (1..=max_height as u128).map(|a| (2 * a + 1).pow((r * (g - r)) as u32)).sum()
}

/// Number of (canonical) Special morphisms enumerated by [`enumerate_special`].
pub fn count_special(g: usize, s: usize, r: usize, max_height: u64) -> u128 {
    (1..=max_height as u128)
        .map(|a| (2 * a + 1).checked_pow((r * (g - r + s)) as u32).unwrap_or(u128::MAX))
        .fold(0u128, |acc, x| acc.saturating_add(x))
}

/// Stream of Special morphisms `(phi | phi')` with canonical `phi`.
#[derive(Clone, Debug)]
pub struct SpecialIter {
    g: usize,
    s: usize,
    r: usize,
    max_height: i64,
    a: i64,
    counter: BoxCounter,
}

impl Iterator for SpecialIter {
    type Item = IntMorphism;

    fn next(&mut self) -> Option<IntMorphism> {
        let w = self.r * (self.g - self.r);
        loop {
            if self.a > self.max_height {
                return None;
            }
            match self.counter.next() {
                Some(d) => {
                    let (free, extra) = d.split_at(w);
                    return Some(canonical_matrix(self.g, self.r, self.a, free, extra, self.s));
                }
                None => {
                    self.a += 1;
                    self.counter = BoxCounter::new(self.a, w + self.r * self.s);
                }
            }
        }
    }
}

/// All `(phi | phi')` with `phi = (a I_r | L)`, `a <= max_height`, and every
/// entry of `L` and of the `r x s` block `phi'` in `[-a, a]`.
pub fn enumerate_special(g: usize, s: usize, r: usize, max_height: u64) -> SpecialIter {
    assert!(1 <= r && r <= g, "need 1 <= r <= g");
    SpecialIter {
        g,
        s,
        r,
        max_height: max_height as i64,
        a: 1,
        counter: BoxCounter::new(1, r * (g - r) + r * s),
    }
}
