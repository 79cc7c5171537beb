//! Gauss-reduced and Special morphisms.
//!
//! A morphism `phi: E^g -> E^r` is Gauss-reduced when some reordering of its
//! columns has the shape `(a I_r | L)` with `H(phi) = a`. The reordering is
//! kept explicitly so that point data never has to be permuted.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::morphism::matrix::IntMorphism;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaussReducedForm {
    /// The morphism in the ambient column order.
    pub matrix: IntMorphism,
    /// The pivot `a = H(matrix)`.
    pub pivot: BigInt,
    /// `perm[k]` is the ambient column placed at position `k` of `(a I_r | L)`;
    /// the first `r` entries are the pivot columns.
    pub perm: Vec<usize>,
}

impl GaussReducedForm {
    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    /// The matrix rearranged into the canonical shape `(a I_r | L)`.
    pub fn canonical(&self) -> IntMorphism {
        self.matrix.gather_columns(&self.perm)
    }

    /// The `r x (g - r)` block `L`.
    pub fn l_block(&self) -> Option<IntMorphism> {
        let c = self.canonical();
        let r = c.rows();
        if r == c.cols() {
            None
        } else {
            c.column_block(r, c.cols()).ok()
        }
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.perm[..self.rank()]
    }

    /// 1-based permutation, as printed by the CLI.
    pub fn perm_display(&self) -> String {
        let p: Vec<String> = self.perm.iter().map(|k| (k + 1).to_string()).collect();
        format!("({})", p.join(","))
    }
}

/// Recognise the Gauss-reduced shape, returning pivot and column permutation.
/// When several columns equal `a e_i` the leftmost one is taken as pivot.
pub fn is_gauss_reduced(f: &IntMorphism) -> Option<GaussReducedForm> {
    let a = f.height();
    if a.is_zero() {
        return None;
    }
    let (r, g) = (f.rows(), f.cols());
    let mut used = vec![false; g];
    let mut pivots = Vec::with_capacity(r);
    for i in 0..r {
        let col = (0..g).find(|&j| {
            !used[j] && (0..r).all(|k| if k == i { *f.get(k, j) == a } else { f.get(k, j).is_zero() })
        })?;
        used[col] = true;
        pivots.push(col);
    }
    let mut perm = pivots;
    perm.extend((0..g).filter(|&j| !used[j]));
    Some(GaussReducedForm { matrix: f.clone(), pivot: a, perm })
}

/// Every `k`-subset of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Produce a Gauss-reduced `phi` whose row space is contained in the row space
/// of the full-rank `psi` (equivalently `B_psi` lies in `B_phi` up to torsion in
/// the pivot coordinates).
///
/// The pivot columns maximise `|minor|` over all `C(g, r)` column subsets, ties
/// going to the lexicographically first subset. Solving for the row basis
/// `(I_r | L')` in those columns gives Cramer ratios of minors, so `|L'| <= 1`;
/// then `a` is the lcm of the denominators of `L'` and the result
/// `(a I_r | a L')` is divided by the gcd of its entries.
pub fn gauss_reduce(psi: &IntMorphism) -> Result<GaussReducedForm> {
    let (r, g) = (psi.rows(), psi.cols());
    let rank = psi.rank();
    if rank < r {
        return Err(Error::RankDeficient { rank, rows: r });
    }
    let mut best: Option<(BigInt, Vec<usize>)> = None;
    for cols in subsets(g, r) {
        let m = psi.minor(&cols).abs();
        if best.as_ref().is_none_or(|(b, _)| m > *b) {
            best = Some((m, cols));
        }
    }
    let (_, pivots) = best.expect("at least one column subset");
    let det = psi.minor(&pivots);
    let others: Vec<usize> = (0..g).filter(|j| !pivots.contains(j)).collect();

    // L'[i][j] = det(S with column i replaced by column j) / det(S)
    let mut lprime = vec![vec![BigRational::zero(); others.len()]; r];
    for (jj, &j) in others.iter().enumerate() {
        for i in 0..r {
            let mut cols = pivots.clone();
            cols[i] = j;
            let q = BigRational::new(psi.minor(&cols), det.clone());
            assert!(q.abs() <= BigRational::one(), "pivot minor is not maximal");
            lprime[i][jj] = q;
        }
    }
    let a = lprime.iter().flatten().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let mut out = IntMorphism::zero(r, g);
    for i in 0..r {
        out.set(i, pivots[i], a.clone());
        for (jj, &j) in others.iter().enumerate() {
            out.set(i, j, (&lprime[i][jj] * BigRational::from_integer(a.clone())).to_integer());
        }
    }
    let c = out.content();
    if !c.is_one() {
        let e = out.entries().iter().map(|x| x / &c).collect();
        out = IntMorphism::new(r, g, e)?;
    }
    let pivot = &a / &c;
    let mut perm = pivots;
    perm.extend(others);
    let form = GaussReducedForm { matrix: out, pivot, perm };
    debug_assert_eq!(form.matrix.height(), form.pivot);
    Ok(form)
}

/// Row space of `phi` contained in the row space of `psi` over Q.
pub fn kernel_contains_up_to_torsion(psi: &IntMorphism, phi: &IntMorphism) -> Result<bool> {
    if psi.cols() != phi.cols() {
        return Err(Error::Dimension(format!("{} vs {} columns", psi.cols(), phi.cols())));
    }
    let stacked = psi.vcat(phi)?;
    Ok(stacked.rank() == psi.rank())
}

/// Flags for `(phi | phi')` with `phi` the left `g` columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialClass {
    /// The whole matrix is Gauss-reduced.
    pub gauss_reduced: bool,
    /// `phi` is Gauss-reduced.
    pub quasi_special: bool,
    /// Quasi-special and `H(phi | phi') = H(phi)`.
    pub special: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpecialKind {
    Special,
    QuasiSpecial,
    GaussReducedOnly,
    None,
}

impl SpecialClass {
    pub fn kind(&self) -> SpecialKind {
        if self.special {
            SpecialKind::Special
        } else if self.quasi_special {
            SpecialKind::QuasiSpecial
        } else if self.gauss_reduced {
            SpecialKind::GaussReducedOnly
        } else {
            SpecialKind::None
        }
    }
}

pub fn classify_special(f: &IntMorphism, g: usize, s: usize) -> Result<SpecialClass> {
    if f.cols() != g + s || g == 0 {
        return Err(Error::Dimension(format!("expected g + s = {} columns, got {}", g + s, f.cols())));
    }
    let left = f.column_block(0, g)?;
    let quasi = is_gauss_reduced(&left).is_some();
    Ok(SpecialClass {
        gauss_reduced: is_gauss_reduced(f).is_some(),
        quasi_special: quasi,
        special: quasi && f.height() == left.height(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(s: &str) -> IntMorphism {
        s.parse().unwrap()
    }

    #[test]
    fn recognises_gauss_reduced_shapes() {
        let f = is_gauss_reduced(&m("(0,0,1)")).unwrap();
        assert_eq!(f.pivot, BigInt::one());
        assert_eq!(f.perm, vec![2, 0, 1]);
        // a = 2 sits in the last column
        let f = is_gauss_reduced(&m("(1,0,2)")).unwrap();
        assert_eq!(f.pivot, BigInt::from(2));
        assert_eq!(f.pivot_columns(), &[2]);
        assert!(is_gauss_reduced(&m("[[1,0,2],[0,1,3]]")).is_none());
        assert!(is_gauss_reduced(&m("(0,0)")).is_none());
        assert!(is_gauss_reduced(&m("[[0,1],[1,0]]")).is_some());
        assert!(is_gauss_reduced(&m("[[2,0,1],[1,2,0]]")).is_none());
    }

    #[test]
    fn reduction_of_a_single_row() {
        let f = gauss_reduce(&m("(2,4)")).unwrap();
        assert_eq!(f.pivot, BigInt::from(2));
        assert_eq!(f.matrix, m("(1,2)"));
        assert_eq!(f.canonical(), m("(2,1)"));
        assert_eq!(f.perm_display(), "(2,1)");
        assert!(kernel_contains_up_to_torsion(&m("(2,4)"), &f.matrix).unwrap());
    }

    #[test]
    fn reduction_examples() {
        let id = IntMorphism::identity(3);
        let f = gauss_reduce(&id).unwrap();
        assert_eq!(f.matrix, id);
        assert_eq!(f.pivot, BigInt::one());

        let psi = m("[[2,0,3],[0,2,5]]");
        let f = gauss_reduce(&psi).unwrap();
        assert_eq!(f.pivot, BigInt::from(5));
        assert_eq!(f.pivot_columns(), &[0, 2]);
        assert_eq!(f.matrix, m("[[5,-3,0],[0,2,5]]"));
        assert!(is_gauss_reduced(&f.matrix).is_some());
        assert!(kernel_contains_up_to_torsion(&psi, &f.matrix).unwrap());
    }

    #[test]
    fn rank_deficient_rejected() {
        assert_eq!(gauss_reduce(&m("[[1,2],[2,4]]")), Err(Error::RankDeficient { rank: 1, rows: 2 }));
    }

    #[test]
    fn containment_examples() {
        let psi = m("[[2,0,3],[0,2,5]]");
        assert!(kernel_contains_up_to_torsion(&psi, &psi).unwrap());
        assert!(kernel_contains_up_to_torsion(&m("(2,4)"), &m("(1,2)")).unwrap());
        assert!(!kernel_contains_up_to_torsion(&psi, &m("[[2,0,1],[0,2,1]]")).unwrap());
        assert!(kernel_contains_up_to_torsion(&psi, &m("(1,2)")).is_err());
    }

    #[test]
    fn special_classification_examples() {
        let c = classify_special(&m("(0,0,1)"), 2, 1).unwrap();
        assert!(c.gauss_reduced && !c.quasi_special && !c.special);
        assert_eq!(c.kind(), SpecialKind::GaussReducedOnly);

        let c = classify_special(&m("(1,0,2)"), 2, 1).unwrap();
        assert!(c.quasi_special && !c.special);
        assert_eq!(c.kind(), SpecialKind::QuasiSpecial);

        let c = classify_special(&m("[[1,0,2],[0,1,3]]"), 2, 1).unwrap();
        assert!(c.quasi_special && !c.special && !c.gauss_reduced);

        let c = classify_special(&m("[[2,0,-1],[0,2,2]]"), 2, 1).unwrap();
        assert_eq!(c.kind(), SpecialKind::Special);
        assert!(classify_special(&m("(1,0)"), 2, 1).is_err());
    }

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(2, 2), vec![vec![0, 1]]);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
    }

    /// Brute-force Special test: exists a column choice inside the first g columns
    /// forming a * I_r with a = max |entry| of the left block, and the whole height equals a.
    fn brute_class(e: &[i64], r: usize, g: usize, s: usize) -> (bool, bool, bool) {
        let n = g + s;
        let at = |i: usize, j: usize| e[i * n + j];
        let gr = |cols: usize| -> bool {
            let a = (0..r).flat_map(|i| (0..cols).map(move |j| (i, j))).map(|(i, j)| at(i, j).abs()).max().unwrap();
            if a == 0 {
                return false;
            }
            // try every injective assignment rows -> columns
            fn assign(i: usize, r: usize, cols: usize, used: &mut Vec<bool>, ok: &dyn Fn(usize, usize) -> bool) -> bool {
                if i == r {
                    return true;
                }
                for j in 0..cols {
                    if !used[j] && ok(i, j) {
                        used[j] = true;
                        if assign(i + 1, r, cols, used, ok) {
                            return true;
                        }
                        used[j] = false;
                    }
                }
                false
            }
            let ok = |i: usize, j: usize| (0..r).all(|k| at(k, j) == if k == i { a } else { 0 });
            assign(0, r, cols, &mut vec![false; cols], &ok)
        };
        let whole = gr(n);
        let quasi = gr(g);
        let hl = (0..r).flat_map(|i| (0..g).map(move |j| (i, j))).map(|(i, j)| at(i, j).abs()).max().unwrap();
        let h = e.iter().map(|x| x.abs()).max().unwrap();
        (whole, quasi, quasi && h == hl)
    }

    #[test]
    fn classification_matches_brute_force_small() {
        // every matrix with g + s <= 4, r <= 2 rows and entries in [-2, 2]
        for (r, g, s) in [(1, 1, 1), (1, 2, 1), (1, 2, 2), (1, 3, 1), (2, 2, 1), (1, 1, 2), (2, 2, 2), (2, 3, 1)] {
            let n = g + s;
            let count = 5usize.pow((r * n) as u32);
            for code in 0..count {
                let mut c = code;
                let e: Vec<i64> = (0..r * n).map(|_| { let v = (c % 5) as i64 - 2; c /= 5; v }).collect();
                let f = IntMorphism::new(r, n, e.iter().map(|&x| BigInt::from(x)).collect()).unwrap();
                let got = classify_special(&f, g, s).unwrap();
                let (w, q, sp) = brute_class(&e, r, g, s);
                assert_eq!((got.gauss_reduced, got.quasi_special, got.special), (w, q, sp), "{f}");
            }
        }
    }

    fn full_rank_matrix() -> impl Strategy<Value = IntMorphism> {
        (1usize..=4)
            .prop_flat_map(|g| (Just(g), 1usize..=g))
            .prop_flat_map(|(g, r)| (Just(g), Just(r), proptest::collection::vec(-20i64..=20, r * g)))
            .prop_map(|(g, r, e)| IntMorphism::new(r, g, e.into_iter().map(BigInt::from).collect()).unwrap())
            .prop_filter("full row rank", |m| m.rank() == m.rows())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn reduction_invariants(psi in full_rank_matrix()) {
            let f = gauss_reduce(&psi).unwrap();
            let again = is_gauss_reduced(&f.matrix);
            prop_assert!(again.is_some());
            prop_assert_eq!(again.unwrap().pivot, f.pivot.clone());
            prop_assert!(kernel_contains_up_to_torsion(&psi, &f.matrix).unwrap());
            prop_assert_eq!(f.matrix.rank(), psi.rank());
            prop_assert!(f.matrix.content().is_one());
        }
    }
}
