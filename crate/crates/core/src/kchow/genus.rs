//! Multiplicative genera evaluated by the splitting principle.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{Field, Prime, Rational};
use crate::poly::NilPoly;
use crate::series::{r_series, todd_series, w_series, TruncSeries};

use super::chow::ChowElt;
use super::ktheory::VirtualBundle;

/// `c_1(O(a)) = Σ a_j h_j`.
fn first_chern(dims: &[u32], field: Field, a: &[i64]) -> NilPoly {
    let mut c = NilPoly::zero(dims, field);
    for (j, &aj) in a.iter().enumerate() {
        if aj != 0 {
            let term = NilPoly::var(dims, field, j)
                .scale(&Rational::from_integer(aj.into()))
                .expect("integers reduce in every field");
            c = c.add(&term).expect("same shape");
        }
    }
    c
}

/// The genus of `u` attached to the series `q`: `O(a) ↦ q(c_1 O(a))`,
/// sums to products, negatives to inverses. Coefficients live in the field
/// of `q`.
pub fn genus_apply(q: &TruncSeries, u: &VirtualBundle) -> Result<ChowElt> {
    if !q.coeff(0).is_one() {
        return Err(Error::Domain(format!("genus series must start with 1, got {}", q.coeff(0))));
    }
    let x = u.variety();
    if (q.order() as u32) < x.dim() {
        return Err(Error::Domain(format!(
            "series truncated at {} but {x} has dimension {}",
            q.order(),
            x.dim()
        )));
    }
    let dims = x.factors();
    let field = q.field();
    let mut acc = NilPoly::one(dims, field);
    for (a, m) in u.terms() {
        if a.iter().all(Zero::is_zero) {
            // q(0) = 1 on trivial summands.
            continue;
        }
        let value = NilPoly::eval_series(q, &first_chern(dims, field, a))?;
        let value = if m < 0 { value.inverse()? } else { value };
        acc = acc.mul(&value.pow(m.unsigned_abs() as u32)?)?;
    }
    Ok(ChowElt::from_poly(x, acc))
}

/// Todd class `Td(u)`, series `x / (1 - e^{-x})`.
pub fn todd_class(u: &VirtualBundle) -> Result<ChowElt> {
    genus_apply(&todd_series(u.variety().dim() as usize), u)
}

/// Inverse Todd genus mod p, series `Σ (-1)^i x^{p^i - 1}`.
pub fn r_class(p: Prime, u: &VirtualBundle) -> Result<ChowElt> {
    genus_apply(&r_series(p, u.variety().dim() as usize), u)
}

/// `r^{(p)}_j(u)`: the component of codimension `j(p - 1)`.
pub fn r_component(p: Prime, u: &VirtualBundle, j: u32) -> Result<ChowElt> {
    Ok(r_class(p, u)?.codim_part(j * (p.get() as u32 - 1)))
}

/// Genus mod p of the series `1 + x^{p-1}`.
pub fn w_class(p: Prime, u: &VirtualBundle) -> Result<ChowElt> {
    genus_apply(&w_series(p, u.variety().dim() as usize), u)
}
