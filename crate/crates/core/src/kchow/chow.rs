use std::fmt;

use num_traits::One;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactnum::{rational_string, Field, PValuation, Prime, Rational};
use crate::poly::NilPoly;
use crate::render;

use super::ModelVariety;

/// A class in the Chow ring of a model variety, written as a polynomial in
/// the hyperplane classes `h_j` with `h_j^{n_j+1} = 0`.
///
/// Monomial `h^e` has codimension `|e|`; on a smooth model it is also the
/// cycle `[L_I]` of the product of linear subspaces with `i_j = n_j - e_j`,
/// of homological dimension `dim X - |e|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChowElt {
    variety: ModelVariety,
    poly: NilPoly,
}

impl ChowElt {
    pub(crate) fn from_poly(variety: &ModelVariety, poly: NilPoly) -> Self {
        debug_assert_eq!(variety.factors(), poly.dims());
        ChowElt { variety: variety.clone(), poly }
    }

    pub fn zero(variety: &ModelVariety, field: Field) -> Self {
        Self::from_poly(variety, NilPoly::zero(variety.factors(), field))
    }

    /// The unit, i.e. the fundamental class `[X]`.
    pub fn one(variety: &ModelVariety, field: Field) -> Self {
        Self::from_poly(variety, NilPoly::one(variety.factors(), field))
    }

    pub fn constant(variety: &ModelVariety, field: Field, c: &Rational) -> Self {
        Self::from_poly(variety, NilPoly::constant(variety.factors(), field, c))
    }

    /// Hyperplane class of factor `j` (0-based).
    pub fn h(variety: &ModelVariety, field: Field, j: usize) -> Self {
        Self::from_poly(variety, NilPoly::var(variety.factors(), field, j))
    }

    pub fn monomial(variety: &ModelVariety, field: Field, exps: &[u32], c: &Rational) -> Self {
        Self::from_poly(variety, NilPoly::monomial(variety.factors(), field, exps, c))
    }

    /// `[L_I]`, the product of linear subspaces of dimensions `i_j`.
    pub fn linear_class(variety: &ModelVariety, field: Field, dims: &[u32]) -> Result<Self> {
        let exps = codim_exponents(variety, dims)?;
        Ok(Self::monomial(variety, field, &exps, &Rational::one()))
    }

    pub fn from_terms<'a, I>(variety: &ModelVariety, field: Field, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a [u32], &'a Rational)>,
    {
        Ok(Self::from_poly(variety, NilPoly::from_terms(variety.factors(), field, terms)?))
    }

    pub fn variety(&self) -> &ModelVariety {
        &self.variety
    }

    pub fn field(&self) -> Field {
        self.poly.field()
    }

    pub fn poly(&self) -> &NilPoly {
        &self.poly
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.poly.coeff(exps)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Vec<u32>, &Rational)> + '_ {
        self.poly.terms()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    fn wrap(&self, poly: NilPoly) -> Self {
        ChowElt { variety: self.variety.clone(), poly }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.variety != other.variety {
            return Err(Error::VarietyMismatch(
                self.variety.to_string(),
                other.variety.to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.wrap(self.poly.add(&other.poly)?))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.wrap(self.poly.sub(&other.poly)?))
    }

    pub fn neg(&self) -> Self {
        self.wrap(self.poly.neg())
    }

    pub fn scale(&self, c: &Rational) -> Result<Self> {
        Ok(self.wrap(self.poly.scale(c)?))
    }

    /// Intersection product (cup product on the smooth model).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.wrap(self.poly.mul(&other.poly)?))
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        Ok(self.wrap(self.poly.pow(e)?))
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(self.wrap(self.poly.inverse()?))
    }

    pub fn codim_part(&self, c: u32) -> Self {
        self.wrap(self.poly.degree_part(c))
    }

    /// Component of homological dimension `i` (zero when `i > dim X`).
    pub fn dim_part(&self, i: u32) -> Self {
        match self.variety.dim().checked_sub(i) {
            Some(c) => self.codim_part(c),
            None => Self::zero(&self.variety, self.field()),
        }
    }

    /// Components indexed by homological dimension `0..=dim X`.
    pub fn graded_by_dim(&self) -> Vec<ChowElt> {
        (0..=self.variety.dim()).map(|i| self.dim_part(i)).collect()
    }

    pub fn homogeneous_codim(&self) -> Option<u32> {
        self.poly.homogeneous_degree()
    }

    pub fn homogeneous_dim(&self) -> Option<u32> {
        self.homogeneous_codim().map(|c| self.variety.dim() - c)
    }

    /// Codimensions with a nonzero component, ascending.
    pub fn codims(&self) -> Vec<u32> {
        self.poly.degrees()
    }

    /// Degree of the zero-dimensional part.
    pub fn degree(&self) -> Rational {
        self.poly.coeff(self.variety.factors())
    }

    pub fn vp(&self, p: Prime) -> PValuation {
        self.poly.vp(p)
    }

    pub fn is_integral(&self) -> bool {
        self.poly.coeffs().iter().all(|c| c.is_integer())
    }

    pub fn with_field(&self, field: Field) -> Result<Self> {
        Ok(self.wrap(self.poly.with_field(field)?))
    }

    pub fn lift(&self) -> Self {
        self.wrap(self.poly.lift())
    }

    pub fn external(&self, other: &Self) -> Result<Self> {
        Ok(ChowElt {
            variety: self.variety.product(&other.variety),
            poly: self.poly.external(&other.poly)?,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms()
            .map(|(e, c)| json!({"exp": e, "coef": rational_string(c)}))
            .collect();
        json!({"variety": self.variety.to_string(), "terms": terms})
    }

    /// Nonzero terms ordered by codimension, then by exponent vector.
    pub fn sorted_terms(&self) -> Vec<(Vec<u32>, Rational)> {
        let mut v: Vec<(Vec<u32>, Rational)> =
            self.terms().map(|(e, c)| (e, c.clone())).collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        v
    }
}

/// `e_j = n_j - i_j`, checking `i_j ≤ n_j`.
pub fn codim_exponents(variety: &ModelVariety, dims: &[u32]) -> Result<Vec<u32>> {
    if dims.len() != variety.num_factors() {
        return Err(Error::Domain(format!(
            "index tuple {dims:?} does not match {variety}"
        )));
    }
    dims.iter()
        .zip(variety.factors())
        .map(|(&i, &n)| {
            n.checked_sub(i)
                .ok_or_else(|| Error::Domain(format!("index tuple {dims:?} exceeds {variety}")))
        })
        .collect()
}

impl fmt::Display for ChowElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in terms.iter().enumerate() {
            render::write_term(f, c, &render::monomial("h", e), k == 0)?;
        }
        Ok(())
    }
}
