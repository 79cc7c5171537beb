//! The isogenies `F`, `L`, `Phi` attached to a Gauss-reduced morphism, with
//! `Phi F = a L` exactly.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::morphism::gauss::{is_gauss_reduced, GaussReducedForm};
use crate::morphism::matrix::IntMorphism;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HelpingTriple {
    /// `diag(1^r, a^(g-r))`
    pub f: IntMorphism,
    /// identity with the `L` block in the pivot rows
    pub l: IntMorphism,
    /// the rows of `phi` over the identity on the free coordinates
    pub phi: IntMorphism,
}

impl HelpingTriple {
    pub fn check_identity(&self, a: &BigInt) -> Result<bool> {
        Ok(self.phi.mul(&self.f)? == self.l.scale(a))
    }
}

/// Builds the triple in the canonical frame and conjugates it back to the
/// ambient column order of `form`.
pub fn helping_isogenies(form: &GaussReducedForm, g: usize) -> Result<HelpingTriple> {
    if form.matrix.cols() != g || form.rank() > g {
        return Err(Error::Dimension(format!("form has {} columns, expected g = {g}", form.matrix.cols())));
    }
    let check = is_gauss_reduced(&form.matrix);
    if check.as_ref().map(|c| &c.pivot) != Some(&form.pivot) || form.canonical().column_block(0, form.rank())?
        != IntMorphism::identity(form.rank()).scale(&form.pivot)
    {
        return Err(Error::Validation(format!("{} is not Gauss-reduced in the given frame", form.matrix)));
    }
    let r = form.rank();
    let a = &form.pivot;
    let canon = form.canonical();

    let diag: Vec<BigInt> = (0..g).map(|i| if i < r { BigInt::one() } else { a.clone() }).collect();
    let f = IntMorphism::diagonal(&diag);
    let mut l = IntMorphism::identity(g);
    let mut phi = IntMorphism::identity(g);
    for i in 0..r {
        for j in 0..g {
            phi.set(i, j, canon.get(i, j).clone());
            if j >= r {
                l.set(i, j, canon.get(i, j).clone());
            }
        }
    }
    // X_ambient[p[i]][p[j]] = X_canonical[i][j]
    let conj = |m: &IntMorphism| {
        let mut out = IntMorphism::zero(g, g);
        for i in 0..g {
            for j in 0..g {
                out.set(form.perm[i], form.perm[j], m.get(i, j).clone());
            }
        }
        out
    };
    let t = HelpingTriple { f: conj(&f), l: conj(&l), phi: conj(&phi) };
    debug_assert!(t.check_identity(a)?);
    Ok(t)
}
