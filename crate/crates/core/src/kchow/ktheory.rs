//! `K_0` and `K'_0` of model varieties.
//!
//! `K_0(X) = ⊗_j Z[t_j] / (1 - t_j)^{n_j+1}` with `t_j = [O_j(-1)]`. Elements
//! are stored in the basis `u^m = ∏ (1 - t_j)^{m_j}`, `m_j ≤ n_j`, where
//! nilpotent truncation is free. `K'_0(X)` uses the basis `⟦I⟧ = [O_{L_I}]`
//! of structure sheaves of products of linear subspaces; the Koszul
//! resolution identifies `⟦I⟧` with `u^{n - I}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactnum::{binomial, factorial, rational_string, Field, PValuation, Prime, Rational};
use crate::poly::NilPoly;
use crate::render;

use super::chow::{codim_exponents, ChowElt};
use super::genus::todd_class;
use super::ModelVariety;

/// Element of `K_0(X) ⊗ Q` in the `(1 - t)` basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KCohElt {
    variety: ModelVariety,
    poly: NilPoly,
}

/// Element of `K'_0(X) ⊗ Q` in the linear-subspace basis `⟦I⟧`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KHomElt {
    variety: ModelVariety,
    poly: NilPoly,
}

/// A finite Z-combination of line bundles `O(a_1, ..., a_k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VirtualBundle {
    variety: ModelVariety,
    terms: BTreeMap<Vec<i64>, i64>,
}

/// `(1 - u)^e` truncated at `u^{n+1}`, as coefficients of `u^m`.
fn one_minus_u_pow(e: i64, n: u32) -> Vec<Rational> {
    (0..=n as u64)
        .map(|m| {
            let sign = if m % 2 == 0 { 1 } else { -1 };
            Rational::from_integer(binomial(e, m) * BigInt::from(sign))
        })
        .collect()
}

fn univariate(dims: &[u32], j: usize, coeffs: &[Rational]) -> NilPoly {
    let mut p = NilPoly::zero(dims, Field::Rational);
    let mut exps = vec![0u32; dims.len()];
    for (m, c) in coeffs.iter().enumerate() {
        exps[j] = m as u32;
        p.set_coeff(&exps, c).expect("rational coefficient");
    }
    p
}

impl KCohElt {
    pub(crate) fn from_poly(variety: &ModelVariety, poly: NilPoly) -> Self {
        KCohElt { variety: variety.clone(), poly }
    }

    pub fn zero(variety: &ModelVariety) -> Self {
        Self::from_poly(variety, NilPoly::zero(variety.factors(), Field::Rational))
    }

    pub fn one(variety: &ModelVariety) -> Self {
        Self::constant(variety, &Rational::one())
    }

    pub fn constant(variety: &ModelVariety, c: &Rational) -> Self {
        Self::from_poly(variety, NilPoly::constant(variety.factors(), Field::Rational, c))
    }

    /// `t_j = [O_j(-1)]`.
    pub fn t(variety: &ModelVariety, j: usize) -> Self {
        let dims = variety.factors();
        Self::from_poly(variety, univariate(dims, j, &one_minus_u_pow(1, dims[j])))
    }

    /// `u^m = ∏ (1 - t_j)^{m_j}`.
    pub fn u_monomial(variety: &ModelVariety, exps: &[u32]) -> Self {
        Self::from_poly(
            variety,
            NilPoly::monomial(variety.factors(), Field::Rational, exps, &Rational::one()),
        )
    }

    /// `[O(a_1, ..., a_k)] = ∏ t_j^{-a_j}`.
    pub fn line_bundle(variety: &ModelVariety, a: &[i64]) -> Result<Self> {
        if a.len() != variety.num_factors() {
            return Err(Error::Domain(format!("twist {a:?} does not match {variety}")));
        }
        let dims = variety.factors();
        let mut acc = NilPoly::one(dims, Field::Rational);
        for (j, &aj) in a.iter().enumerate() {
            if aj != 0 {
                acc = acc.mul(&univariate(dims, j, &one_minus_u_pow(-aj, dims[j])))?;
            }
        }
        Ok(Self::from_poly(variety, acc))
    }

    pub fn variety(&self) -> &ModelVariety {
        &self.variety
    }

    pub fn poly(&self) -> &NilPoly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Rank: the constant term in the `(1 - t)` basis.
    pub fn augmentation(&self) -> Rational {
        self.poly.constant_term().clone()
    }

    fn wrap(&self, poly: NilPoly) -> Self {
        KCohElt { variety: self.variety.clone(), poly }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.variety != other.variety {
            return Err(Error::VarietyMismatch(self.variety.to_string(), other.variety.to_string()));
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

    /// Cohomological Adams operation: the ring endomorphism `t_j ↦ t_j^l`.
    pub fn adams(&self, l: i64) -> Result<Self> {
        if l == 0 {
            return Err(Error::Domain("Adams operation needs l != 0".into()));
        }
        let dims = self.variety.factors();
        // u ↦ 1 - (1 - u)^l
        let images: Vec<NilPoly> = dims
            .iter()
            .enumerate()
            .map(|(j, &n)| {
                let mut c = one_minus_u_pow(l, n);
                for x in c.iter_mut() {
                    *x = -x.clone();
                }
                c[0] += Rational::one();
                univariate(dims, j, &c)
            })
            .collect();
        Ok(self.wrap(self.poly.substitute(&images, dims)?))
    }

    /// Cohomological Chern character: the ring map `t_j ↦ e^{-h_j}`.
    pub fn ch(&self) -> Result<ChowElt> {
        let dims = self.variety.factors();
        // u ↦ 1 - e^{-h} = Σ_{k≥1} (-1)^{k+1} h^k / k!
        let images: Vec<NilPoly> = dims
            .iter()
            .enumerate()
            .map(|(j, &n)| {
                let c: Vec<Rational> = (0..=n as u64)
                    .map(|k| {
                        if k == 0 {
                            Rational::zero()
                        } else {
                            let sign = if k % 2 == 1 { 1 } else { -1 };
                            Rational::new(BigInt::from(sign), factorial(k))
                        }
                    })
                    .collect();
                univariate(dims, j, &c)
            })
            .collect();
        Ok(ChowElt::from_poly(&self.variety, self.poly.substitute(&images, dims)?))
    }

    /// Rewrite in the monomials `t^a`, `a_j ≤ n_j`.
    pub fn t_expansion(&self) -> NilPoly {
        let dims = self.variety.factors();
        let images: Vec<NilPoly> =
            dims.iter().enumerate().map(|(j, &n)| univariate(dims, j, &one_minus_u_pow(1, n))).collect();
        // (1 - t) expanded in t has the same shape as (1 - u) in u.
        self.poly.substitute(&images, dims).expect("shapes match")
    }

    pub fn to_json(&self) -> serde_json::Value {
        let t = self.t_expansion();
        let terms: Vec<serde_json::Value> =
            t.terms().map(|(e, c)| json!({"exp": e, "coef": rational_string(c)})).collect();
        json!({"variety": self.variety.to_string(), "terms": terms})
    }
}

impl fmt::Display for KCohElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.t_expansion();
        let mut first = true;
        for (e, c) in t.terms() {
            render::write_term(f, c, &render::monomial("t", &e), first)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl KHomElt {
    pub(crate) fn from_poly(variety: &ModelVariety, poly: NilPoly) -> Self {
        KHomElt { variety: variety.clone(), poly }
    }

    pub fn zero(variety: &ModelVariety) -> Self {
        Self::from_poly(variety, NilPoly::zero(variety.factors(), Field::Rational))
    }

    /// `⟦I⟧`, the structure sheaf of the product of linear subspaces of
    /// dimensions `I`.
    pub fn basis(variety: &ModelVariety, index: &[u32]) -> Result<Self> {
        codim_exponents(variety, index)?;
        Ok(Self::from_poly(
            variety,
            NilPoly::monomial(variety.factors(), Field::Rational, index, &Rational::one()),
        ))
    }

    /// `[O_X]`.
    pub fn structure_sheaf(variety: &ModelVariety) -> Self {
        Self::basis(variety, variety.factors()).expect("top index is valid")
    }

    pub fn from_terms<'a, I>(variety: &ModelVariety, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a [u32], &'a Rational)>,
    {
        Ok(Self::from_poly(variety, NilPoly::from_terms(variety.factors(), Field::Rational, terms)?))
    }

    pub fn variety(&self) -> &ModelVariety {
        &self.variety
    }

    pub fn coeff(&self, index: &[u32]) -> Rational {
        self.poly.coeff(index)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Vec<u32>, &Rational)> + '_ {
        self.poly.terms()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.poly.coeffs().iter().all(|c| c.is_integer())
    }

    pub fn vp(&self, p: Prime) -> PValuation {
        self.poly.vp(p)
    }

    /// Largest `|I|` with a nonzero coefficient.
    pub fn filtration_level(&self) -> Result<u32> {
        self.poly.degrees().last().copied().ok_or(Error::ZeroElement)
    }

    fn wrap(&self, poly: NilPoly) -> Self {
        KHomElt { variety: self.variety.clone(), poly }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.variety != other.variety {
            return Err(Error::VarietyMismatch(self.variety.to_string(), other.variety.to_string()));
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

    /// `⟦I⟧ ↦ ∏ (1 - t_j)^{n_j - i_j}` (Koszul resolution).
    pub fn to_coh(&self) -> KCohElt {
        let n = self.variety.factors().to_vec();
        let poly = self.poly.remap(&n, |i| Some(n.iter().zip(i).map(|(a, b)| a - b).collect()));
        KCohElt::from_poly(&self.variety, poly)
    }

    pub fn from_coh(x: &KCohElt) -> Self {
        let n = x.variety.factors().to_vec();
        let poly = x.poly.remap(&n, |e| Some(n.iter().zip(e).map(|(a, b)| a - b).collect()));
        KHomElt::from_poly(&x.variety, poly)
    }

    /// Homological Chern character `Td(T_X) · ch(x) ∩ [X]`, as one class;
    /// `ch_i` is its part of dimension `i`.
    pub fn ch_total(&self) -> Result<ChowElt> {
        let td = todd_class(&VirtualBundle::tangent(&self.variety))?;
        td.mul(&self.to_coh().ch()?)
    }

    /// `[ch_0, ch_1, ..., ch_dim]`.
    pub fn ch(&self) -> Result<Vec<ChowElt>> {
        Ok(self.ch_total()?.graded_by_dim())
    }

    /// Homological Adams operation `ψ_l(x) = θ^l(-T_X) · ψ^l(x)`.
    pub fn adams(&self, l: i64) -> Result<Self> {
        if l == 0 {
            return Err(Error::Domain("Adams operation needs l != 0".into()));
        }
        let theta = VirtualBundle::tangent(&self.variety).neg().theta(l)?;
        let psi = self.to_coh().adams(l)?;
        Ok(Self::from_coh(&theta.mul(&psi)?))
    }

    /// `χ = deg ch_0(x)`.
    pub fn euler_characteristic(&self) -> Result<Rational> {
        Ok(self.ch_total()?.degree())
    }

    pub fn external(&self, other: &Self) -> Result<Self> {
        Ok(KHomElt {
            variety: self.variety.product(&other.variety),
            poly: self.poly.external(&other.poly)?,
        })
    }

    /// The tautological cycle map `[L_I] ↦ ⟦I⟧` applied to an integral
    /// (or mod-p lifted) Chow class.
    pub fn from_cycle(x: &ChowElt) -> Self {
        let n = x.variety().factors().to_vec();
        let lifted = x.lift();
        let poly = lifted.poly().remap(&n, |e| Some(n.iter().zip(e).map(|(a, b)| a - b).collect()));
        KHomElt::from_poly(x.variety(), poly)
    }

    /// `ch_total` through per-factor matrices; agrees with [`Self::ch_total`]
    /// because both the Todd class and `ch` factor over `P^{n_1} x ... x P^{n_k}`.
    pub fn ch_total_with(&self, table: &FactorTable) -> Result<ChowElt> {
        table.check(&self.variety, "ch")?;
        Ok(ChowElt::from_poly(&self.variety, self.poly.apply_factorwise(&table.mats)?))
    }

    /// `ψ_l` through per-factor matrices.
    pub fn adams_with(&self, table: &FactorTable) -> Result<Self> {
        table.check(&self.variety, "adams")?;
        Ok(self.wrap(self.poly.apply_factorwise(&table.mats)?))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms()
            .map(|(i, c)| json!({"index": i, "coef": rational_string(c)}))
            .collect();
        json!({"variety": self.variety.to_string(), "terms": terms})
    }
}

/// Per-factor matrices of an operator on `K'_0` of a product that is the
/// tensor product of its restrictions to the factors.
#[derive(Debug, Clone)]
pub struct FactorTable {
    variety: ModelVariety,
    kind: &'static str,
    mats: Vec<Vec<Vec<Rational>>>,
}

impl FactorTable {
    fn build(variety: &ModelVariety, kind: &'static str, op: impl Fn(&KHomElt) -> Result<NilPoly>) -> Result<Self> {
        let mut mats = Vec::with_capacity(variety.num_factors());
        for &n in variety.factors() {
            let pn = ModelVariety::projective(n);
            let mut rows = Vec::with_capacity(n as usize + 1);
            for i in 0..=n {
                let image = op(&KHomElt::basis(&pn, &[i])?)?;
                rows.push(image.coeffs().to_vec());
            }
            mats.push(rows);
        }
        Ok(FactorTable { variety: variety.clone(), kind, mats })
    }

    /// Rows: `ch(⟦i⟧)` on `P^n` in powers of `h`.
    pub fn chern(variety: &ModelVariety) -> Result<Self> {
        Self::build(variety, "ch", |e| Ok(e.ch_total()?.poly().clone()))
    }

    /// Rows: `ψ_l(⟦i⟧)` on `P^n` in the basis `⟦j⟧`.
    pub fn adams(variety: &ModelVariety, l: i64) -> Result<Self> {
        Self::build(variety, "adams", |e| Ok(e.adams(l)?.poly.clone()))
    }

    fn check(&self, v: &ModelVariety, kind: &str) -> Result<()> {
        if &self.variety != v {
            return Err(Error::VarietyMismatch(self.variety.to_string(), v.to_string()));
        }
        if self.kind != kind {
            return Err(Error::Domain(format!("expected a {kind} table, got {}", self.kind)));
        }
        Ok(())
    }
}

impl fmt::Display for KHomElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(Vec<u32>, &Rational)> = self.terms().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (i, c)) in terms.iter().enumerate() {
            let args: Vec<String> = i.iter().map(u32::to_string).collect();
            render::write_term(f, c, &format!("OL({})", args.join(",")), k == 0)?;
        }
        Ok(())
    }
}

impl VirtualBundle {
    pub fn zero(variety: &ModelVariety) -> Self {
        VirtualBundle { variety: variety.clone(), terms: BTreeMap::new() }
    }

    /// `n · [O]`.
    pub fn trivial(variety: &ModelVariety, n: i64) -> Self {
        Self::zero(variety).plus(&vec![0; variety.num_factors()], n)
    }

    pub fn line(variety: &ModelVariety, a: &[i64]) -> Result<Self> {
        if a.len() != variety.num_factors() {
            return Err(Error::Domain(format!("twist {a:?} does not match {variety}")));
        }
        Ok(Self::zero(variety).plus(a, 1))
    }

    pub fn from_terms(variety: &ModelVariety, terms: &[(Vec<i64>, i64)]) -> Result<Self> {
        let mut b = Self::zero(variety);
        for (a, m) in terms {
            if a.len() != variety.num_factors() {
                return Err(Error::Domain(format!("twist {a:?} does not match {variety}")));
            }
            b = b.plus(a, *m);
        }
        Ok(b)
    }

    fn plus(mut self, a: &[i64], m: i64) -> Self {
        let e = self.terms.entry(a.to_vec()).or_insert(0);
        *e += m;
        if *e == 0 {
            self.terms.remove(a);
        }
        self
    }

    /// Virtual tangent bundle `Σ_j ((n_j + 1)[O_j(1)] - [O])` from the Euler
    /// sequences.
    pub fn tangent(variety: &ModelVariety) -> Self {
        let k = variety.num_factors();
        let mut b = Self::zero(variety);
        for (j, &n) in variety.factors().iter().enumerate() {
            let mut a = vec![0; k];
            a[j] = 1;
            b = b.plus(&a, n as i64 + 1).plus(&vec![0; k], -1);
        }
        b
    }

    pub fn variety(&self) -> &ModelVariety {
        &self.variety
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, i64)> {
        self.terms.iter().map(|(a, &m)| (a, m))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn rank(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.variety != other.variety {
            return Err(Error::VarietyMismatch(self.variety.to_string(), other.variety.to_string()));
        }
        Ok(other.terms().fold(self.clone(), |acc, (a, m)| acc.plus(a, m)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn scale(&self, n: i64) -> Self {
        let mut b = Self::zero(&self.variety);
        if n != 0 {
            b.terms = self.terms.iter().map(|(a, &m)| (a.clone(), m * n)).collect();
        }
        b
    }

    /// Tensor product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.variety != other.variety {
            return Err(Error::VarietyMismatch(self.variety.to_string(), other.variety.to_string()));
        }
        let mut b = Self::zero(&self.variety);
        for (a, m) in self.terms() {
            for (c, n) in other.terms() {
                let sum: Vec<i64> = a.iter().zip(c).map(|(x, y)| x + y).collect();
                b = b.plus(&sum, m * n);
            }
        }
        Ok(b)
    }

    /// `ψ^l`: `O(a) ↦ O(l a)`.
    pub fn adams(&self, l: i64) -> Result<Self> {
        if l == 0 {
            return Err(Error::Domain("Adams operation needs l != 0".into()));
        }
        let mut b = Self::zero(&self.variety);
        for (a, m) in self.terms() {
            let la: Vec<i64> = a.iter().map(|x| l * x).collect();
            b = b.plus(&la, m);
        }
        Ok(b)
    }

    pub fn to_kcoh(&self) -> Result<KCohElt> {
        let mut acc = KCohElt::zero(&self.variety);
        for (a, m) in self.terms() {
            let l = KCohElt::line_bundle(&self.variety, a)?;
            acc = acc.add(&l.scale(&Rational::from_integer(m.into()))?)?;
        }
        Ok(acc)
    }

    /// Bott's class: multiplicative, with `θ^l(L) = t^l([L^∨])` and
    /// `t^l(x) = (1 - x^l) / (1 - x)` read as a Laurent polynomial.
    pub fn theta(&self, l: i64) -> Result<KCohElt> {
        if l == 0 {
            return Err(Error::Domain("Bott class needs l != 0".into()));
        }
        let x = &self.variety;
        let mut acc = KCohElt::one(x);
        for (a, m) in self.terms() {
            let mut factor = KCohElt::zero(x);
            if l > 0 {
                for k in 0..l {
                    let twist: Vec<i64> = a.iter().map(|v| -k * v).collect();
                    factor = factor.add(&KCohElt::line_bundle(x, &twist)?)?;
                }
            } else {
                for k in 1..=-l {
                    let twist: Vec<i64> = a.iter().map(|v| k * v).collect();
                    factor = factor.sub(&KCohElt::line_bundle(x, &twist)?)?;
                }
            }
            let factor = if m < 0 { factor.inverse()? } else { factor };
            acc = acc.mul(&factor.pow(m.unsigned_abs() as u32)?)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for VirtualBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (a, &m)) in self.terms.iter().enumerate() {
            let args: Vec<String> = a.iter().map(i64::to_string).collect();
            let c = Rational::from_integer(m.into());
            render::write_term(f, &c, &format!("O({})", args.join(",")), k == 0)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, ratio};

    fn pn(n: u32) -> ModelVariety {
        ModelVariety::projective(n)
    }

    #[test]
    fn koszul_identification() {
        let p1 = pn(1);
        let pt = KHomElt::basis(&p1, &[0]).unwrap();
        let one_minus_t = KCohElt::one(&p1).sub(&KCohElt::t(&p1, 0)).unwrap();
        assert_eq!(pt.to_coh(), one_minus_t);
        assert_eq!(KHomElt::structure_sheaf(&p1).to_coh(), KCohElt::one(&p1));
        let p2 = pn(2);
        let line = KHomElt::basis(&p2, &[1]).unwrap();
        assert_eq!(line.to_coh(), KCohElt::one(&p2).sub(&KCohElt::t(&p2, 0)).unwrap());
    }

    #[test]
    fn filtration_levels() {
        let x = ModelVariety::new(&[2, 1]);
        assert_eq!(KHomElt::basis(&pn(3), &[0]).unwrap().filtration_level().unwrap(), 0);
        assert_eq!(KHomElt::structure_sheaf(&x).filtration_level().unwrap(), 3);
        let e = KHomElt::basis(&x, &[1, 0])
            .unwrap()
            .add(&KHomElt::basis(&x, &[0, 0]).unwrap().scale(&rat(5)).unwrap())
            .unwrap();
        assert_eq!(e.filtration_level().unwrap(), 1);
        assert_eq!(KHomElt::zero(&x).filtration_level(), Err(Error::ZeroElement));
    }

    #[test]
    fn tangent_bundles() {
        let t = VirtualBundle::tangent(&pn(1));
        assert_eq!(t.rank(), 1);
        assert_eq!(t.to_string(), "-O(0) + 2*O(1)");
        let t = VirtualBundle::tangent(&ModelVariety::new(&[2, 1]));
        assert_eq!(t.rank(), 3);
        assert_eq!(t.to_string(), "-2*O(0,0) + 2*O(0,1) + 3*O(1,0)");
        assert!(VirtualBundle::tangent(&ModelVariety::point()).is_zero());
    }

    #[test]
    fn chern_character_examples() {
        let p2 = pn(2);
        let ch = KCohElt::t(&p2, 0).ch().unwrap();
        let h = ChowElt::h(&p2, Field::Rational, 0);
        let expected = ChowElt::one(&p2, Field::Rational)
            .sub(&h)
            .unwrap()
            .add(&h.pow(2).unwrap().scale(&ratio(1, 2)).unwrap())
            .unwrap();
        assert_eq!(ch, expected);
        assert_eq!(KCohElt::one(&p2).ch().unwrap(), ChowElt::one(&p2, Field::Rational));
        let p1 = pn(1);
        let u = KCohElt::one(&p1).sub(&KCohElt::t(&p1, 0)).unwrap();
        assert_eq!(u.ch().unwrap(), ChowElt::h(&p1, Field::Rational, 0));
    }

    #[test]
    fn adams_on_k0() {
        let p1 = pn(1);
        let u = KCohElt::u_monomial(&p1, &[1]);
        assert_eq!(u.adams(2).unwrap(), u.scale(&rat(2)).unwrap());
        assert_eq!(KCohElt::one(&p1).adams(7).unwrap(), KCohElt::one(&p1));
        let p2 = pn(2);
        let expected = KCohElt::one(&p2)
            .sub(&KCohElt::u_monomial(&p2, &[1]).scale(&rat(3)).unwrap())
            .unwrap()
            .add(&KCohElt::u_monomial(&p2, &[2]).scale(&rat(3)).unwrap())
            .unwrap();
        assert_eq!(KCohElt::t(&p2, 0).adams(3).unwrap(), expected);
        assert!(u.adams(0).is_err());
    }

    #[test]
    fn adams_negative_is_dual() {
        let p2 = pn(2);
        let t = KCohElt::t(&p2, 0);
        let dual = KCohElt::line_bundle(&p2, &[1]).unwrap();
        assert_eq!(t.adams(-1).unwrap(), dual);
        assert_eq!(t.mul(&dual).unwrap(), KCohElt::one(&p2));
    }

    #[test]
    fn bott_class_examples() {
        let p1 = pn(1);
        let triv = VirtualBundle::trivial(&p1, 1);
        assert_eq!(triv.theta(2).unwrap(), KCohElt::constant(&p1, &rat(2)));
        for l in [2i64, 3, 5] {
            let th = VirtualBundle::tangent(&p1).theta(l).unwrap();
            let expected = KCohElt::one(&p1)
                .sub(&KCohElt::u_monomial(&p1, &[1]).scale(&rat(l - 1)).unwrap())
                .unwrap()
                .scale(&rat(l))
                .unwrap();
            assert_eq!(th, expected);
            assert_eq!(triv.neg().theta(l).unwrap(), KCohElt::constant(&p1, &ratio(1, l)));
        }
        assert!(triv.theta(0).is_err());
    }

    #[test]
    fn bott_class_augmentation() {
        let x = ModelVariety::new(&[2, 1]);
        let u = VirtualBundle::from_terms(&x, &[(vec![1, 2], 2), (vec![-1, 0], -1), (vec![0, 0], 3)])
            .unwrap();
        for l in [-3i64, -2, 2, 3, 5] {
            let aug = u.theta(l).unwrap().augmentation();
            let expected = if u.rank() >= 0 {
                Rational::from_integer(BigInt::from(l).pow(u.rank() as u32))
            } else {
                Rational::from_integer(BigInt::from(l).pow((-u.rank()) as u32)).recip()
            };
            assert_eq!(aug, expected, "l = {l}");
        }
    }

    #[test]
    fn homological_chern_character_examples() {
        let p1 = pn(1);
        let ch = KHomElt::structure_sheaf(&p1).ch().unwrap();
        assert_eq!(ch[1], ChowElt::one(&p1, Field::Rational));
        assert_eq!(ch[0], ChowElt::h(&p1, Field::Rational, 0));
        let p2 = pn(2);
        let ch = KHomElt::basis(&p2, &[0]).unwrap().ch().unwrap();
        assert_eq!(ch[0], ChowElt::h(&p2, Field::Rational, 0).pow(2).unwrap());
        assert!(ch[1].is_zero() && ch[2].is_zero());
        let pt = ModelVariety::point();
        let ch = KHomElt::structure_sheaf(&pt).ch().unwrap();
        assert_eq!(ch, vec![ChowElt::one(&pt, Field::Rational)]);
    }

    #[test]
    fn homological_adams_examples() {
        let p1 = pn(1);
        let pt = KHomElt::basis(&p1, &[0]).unwrap();
        let o = KHomElt::structure_sheaf(&p1);
        for l in [2i64, 3, -2] {
            assert_eq!(pt.adams(l).unwrap(), pt);
            let expected = o
                .scale(&ratio(1, l))
                .unwrap()
                .add(&pt.scale(&ratio(l - 1, l)).unwrap())
                .unwrap();
            assert_eq!(o.adams(l).unwrap(), expected);
        }
        let point = ModelVariety::point();
        let one = KHomElt::structure_sheaf(&point);
        assert_eq!(one.adams(5).unwrap(), one);
        assert!(o.adams(0).is_err());
    }

    #[test]
    fn euler_characteristic_examples() {
        let p2 = pn(2);
        assert_eq!(KHomElt::structure_sheaf(&p2).euler_characteristic().unwrap(), rat(1));
        assert_eq!(KHomElt::basis(&p2, &[0]).unwrap().euler_characteristic().unwrap(), rat(1));
        let p1 = pn(1);
        let o_minus_2 = KHomElt::from_coh(&KCohElt::line_bundle(&p1, &[-2]).unwrap());
        assert_eq!(o_minus_2.euler_characteristic().unwrap(), rat(-1));
    }

    #[test]
    fn external_products_add_levels() {
        let p1 = pn(1);
        let pt = KHomElt::basis(&p1, &[0]).unwrap();
        let prod = pt.external(&pt).unwrap();
        assert_eq!(prod, KHomElt::basis(&ModelVariety::new(&[1, 1]), &[0, 0]).unwrap());
        let o = KHomElt::structure_sheaf(&pn(2));
        assert_eq!(o.external(&pt).unwrap().filtration_level().unwrap(), 2);
    }

    #[test]
    fn factorwise_tables_match_direct_computation() {
        for x in ModelVariety::all_up_to_dim(4) {
            let ch = FactorTable::chern(&x).unwrap();
            let psi = FactorTable::adams(&x, 3).unwrap();
            for index in x.basis() {
                let e = KHomElt::basis(&x, &index).unwrap();
                assert_eq!(e.ch_total_with(&ch).unwrap(), e.ch_total().unwrap(), "{x} {index:?}");
                assert_eq!(e.adams_with(&psi).unwrap(), e.adams(3).unwrap(), "{x} {index:?}");
            }
        }
    }

    #[test]
    fn t_rendering() {
        let p2 = pn(2);
        assert_eq!(KCohElt::t(&p2, 0).pow(3).unwrap().to_string(), "1 - 3*t1 + 3*t1^2");
        let th = VirtualBundle::tangent(&pn(1)).theta(2).unwrap();
        assert_eq!(th.to_string(), "2*t1");
    }
}
