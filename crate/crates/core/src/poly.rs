//! Dense elements of `F[y_1..y_k] / (y_1^{n_1+1}, ..., y_k^{n_k+1})`.
//!
//! This is the common shape of the Chow ring of `P^{n_1} x ... x P^{n_k}`
//! (variables `h_j`), of its K_0 written in the `u_j = 1 - t_j` basis, and of
//! the coefficient tables of K'_0 indexed by linear subspaces. Coefficients
//! are stored in mixed radix with the last variable varying fastest, so
//! adding exponent vectors that stay in range is adding indices.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{vp_module, Field, PValuation, Prime, Rational};
use crate::series::TruncSeries;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NilPoly {
    dims: Vec<u32>,
    field: Field,
    coeffs: Vec<Rational>,
}

fn size_of(dims: &[u32]) -> usize {
    dims.iter().map(|&n| n as usize + 1).product()
}

impl NilPoly {
    pub fn zero(dims: &[u32], field: Field) -> Self {
        NilPoly { dims: dims.to_vec(), field, coeffs: vec![Rational::zero(); size_of(dims)] }
    }

    pub fn one(dims: &[u32], field: Field) -> Self {
        Self::constant(dims, field, &Rational::one())
    }

    pub fn constant(dims: &[u32], field: Field, c: &Rational) -> Self {
        let mut p = Self::zero(dims, field);
        p.coeffs[0] = field.norm(c.clone());
        p
    }

    /// `c * y^exps`; zero if an exponent is past its nilpotency bound.
    pub fn monomial(dims: &[u32], field: Field, exps: &[u32], c: &Rational) -> Self {
        let mut p = Self::zero(dims, field);
        if let Some(i) = p.index_of(exps) {
            p.coeffs[i] = field.norm(c.clone());
        }
        p
    }

    pub fn var(dims: &[u32], field: Field, j: usize) -> Self {
        let mut exps = vec![0; dims.len()];
        exps[j] = 1;
        Self::monomial(dims, field, &exps, &Rational::one())
    }

    pub fn from_terms<'a, I>(dims: &[u32], field: Field, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a [u32], &'a Rational)>,
    {
        let mut p = Self::zero(dims, field);
        for (exps, c) in terms {
            let i = p
                .index_of(exps)
                .ok_or_else(|| Error::Domain(format!("exponent {exps:?} out of range {dims:?}")))?;
            let c = field.reduce(c)?;
            p.coeffs[i] = field.add(&p.coeffs[i], &c);
        }
        Ok(p)
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_degree(&self) -> u32 {
        self.dims.iter().sum()
    }

    pub fn index_of(&self, exps: &[u32]) -> Option<usize> {
        if exps.len() != self.dims.len() {
            return None;
        }
        let mut idx = 0usize;
        for (&e, &n) in exps.iter().zip(&self.dims) {
            if e > n {
                return None;
            }
            idx = idx * (n as usize + 1) + e as usize;
        }
        Some(idx)
    }

    pub fn exps_of(&self, mut idx: usize) -> Vec<u32> {
        let mut exps = vec![0; self.dims.len()];
        for j in (0..self.dims.len()).rev() {
            let r = self.dims[j] as usize + 1;
            exps[j] = (idx % r) as u32;
            idx /= r;
        }
        exps
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.index_of(exps).map(|i| self.coeffs[i].clone()).unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, exps: &[u32], c: &Rational) -> Result<()> {
        let i = self
            .index_of(exps)
            .ok_or_else(|| Error::Domain(format!("exponent {exps:?} out of range")))?;
        self.coeffs[i] = self.field.reduce(c)?;
        Ok(())
    }

    /// Nonzero terms in index order.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<u32>, &Rational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.exps_of(i), c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        if self.dims != other.dims {
            return Err(Error::VarietyMismatch(
                format!("{:?}", self.dims),
                format!("{:?}", other.dims),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let f = self.field;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f.add(a, b)).collect();
        Ok(NilPoly { dims: self.dims.clone(), field: f, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        NilPoly {
            dims: self.dims.clone(),
            field: f,
            coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Result<Self> {
        let f = self.field;
        let c = f.reduce(c)?;
        Ok(NilPoly {
            dims: self.dims.clone(),
            field: f,
            coeffs: self.coeffs.iter().map(|a| f.mul(a, &c)).collect(),
        })
    }

    fn nonzero_with_exps(&self) -> Vec<(usize, Vec<u32>, &Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, self.exps_of(i), c))
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let lhs = self.nonzero_with_exps();
        let rhs = other.nonzero_with_exps();
        let mut acc = vec![Rational::zero(); self.coeffs.len()];
        for (ia, ea, a) in &lhs {
            for (ib, eb, b) in &rhs {
                let fits = ea.iter().zip(eb).zip(&self.dims).all(|((x, y), n)| x + y <= *n);
                if fits {
                    acc[ia + ib] += *a * *b;
                }
            }
        }
        let f = self.field;
        Ok(NilPoly {
            dims: self.dims.clone(),
            field: f,
            coeffs: acc.into_iter().map(|c| f.norm(c)).collect(),
        })
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(&self.dims, self.field);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Evaluate a power series at a nilpotent element (zero constant term).
    pub fn eval_series(series: &TruncSeries, at: &Self) -> Result<Self> {
        if series.field() != at.field {
            return Err(Error::FieldMismatch(series.field().to_string(), at.field.to_string()));
        }
        if !at.constant_term().is_zero() {
            return Err(Error::Composition("evaluation point is not nilpotent".into()));
        }
        let top = (at.max_degree() as usize).min(series.order());
        let mut acc = Self::zero(&at.dims, at.field);
        for k in (0..=top).rev() {
            acc = acc.mul(at)?;
            acc.coeffs[0] = at.field.add(&acc.coeffs[0], &series.coeff(k));
        }
        Ok(acc)
    }

    /// Inverse of a unit `c0 + n` with `n` nilpotent: `c0^{-1} Σ (-n/c0)^k`.
    pub fn inverse(&self) -> Result<Self> {
        let f = self.field;
        let c0 = self.constant_term().clone();
        let inv0 = f.inv(&c0).map_err(|_| Error::NotInvertible(format!("constant term {c0}")))?;
        let mut nil = self.scale(&inv0)?;
        nil.coeffs[0] = Rational::zero();
        let step = nil.neg();
        let mut term = Self::one(&self.dims, f);
        let mut acc = Self::one(&self.dims, f);
        for _ in 0..self.max_degree() {
            term = term.mul(&step)?;
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term)?;
        }
        acc.scale(&inv0)
    }

    /// Ring homomorphism into `target`'s ring given the images of the
    /// variables. Each image must be nilpotent there.
    pub fn substitute(&self, images: &[NilPoly], target_dims: &[u32]) -> Result<Self> {
        if images.len() != self.dims.len() {
            return Err(Error::Domain("wrong number of variable images".into()));
        }
        let f = self.field;
        // Powers of each image up to the nilpotency bound of its source variable.
        let mut powers: Vec<Vec<NilPoly>> = Vec::with_capacity(images.len());
        for (img, &n) in images.iter().zip(&self.dims) {
            let mut pw = vec![Self::one(target_dims, f)];
            for e in 1..=n as usize {
                let next = pw[e - 1].mul(img)?;
                pw.push(next);
            }
            powers.push(pw);
        }
        let mut acc = Self::zero(target_dims, f);
        for (exps, c) in self.terms() {
            let mut m = Self::constant(target_dims, f, c);
            for (j, &e) in exps.iter().enumerate() {
                if e > 0 {
                    m = m.mul(&powers[j][e as usize])?;
                }
            }
            acc = acc.add(&m)?;
        }
        Ok(acc)
    }

    /// Part of total degree exactly `d`.
    pub fn degree_part(&self, d: u32) -> Self {
        let mut out = Self::zero(&self.dims, self.field);
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() && self.exps_of(i).iter().sum::<u32>() == d {
                out.coeffs[i] = c.clone();
            }
        }
        out
    }

    /// The single total degree of all nonzero terms; `None` for zero or a
    /// mixed element.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms().map(|(e, _)| e.iter().sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.terms().map(|(e, _)| e.iter().sum::<u32>()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn vp(&self, p: Prime) -> PValuation {
        vp_module(&self.coeffs, p)
    }

    /// Re-read the coefficients in another field.
    pub fn with_field(&self, field: Field) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|c| field.reduce(c)).collect::<Result<_>>()?;
        Ok(NilPoly { dims: self.dims.clone(), field, coeffs })
    }

    /// Coefficients as exact rationals (mod-p representatives lifted to
    /// `0..p`).
    pub fn lift(&self) -> Self {
        NilPoly { dims: self.dims.clone(), field: Field::Rational, coeffs: self.coeffs.clone() }
    }

    /// External product: variables of `self` first, then those of `other`.
    pub fn external(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let f = self.field;
        let mut out = Self::zero(&dims, f);
        let stride = other.coeffs.len();
        for (ia, a) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (ib, b) in other.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                out.coeffs[ia * stride + ib] = f.mul(a, b);
            }
        }
        Ok(out)
    }

    /// Apply the tensor product of per-variable linear maps:
    /// `mats[j][a][b]` is the coefficient of `y_j^b` in the image of `y_j^a`.
    pub fn apply_factorwise(&self, mats: &[Vec<Vec<Rational>>]) -> Result<Self> {
        if mats.len() != self.dims.len()
            || mats.iter().zip(&self.dims).any(|(m, &n)| {
                m.len() != n as usize + 1 || m.iter().any(|row| row.len() != n as usize + 1)
            })
        {
            return Err(Error::Domain("factor matrices do not match the shape".into()));
        }
        let f = self.field;
        let mut cur = self.coeffs.clone();
        let mut inner = cur.len();
        for (j, m) in mats.iter().enumerate() {
            let r = self.dims[j] as usize + 1;
            inner /= r;
            let outer = cur.len() / (r * inner);
            let mut next = vec![Rational::zero(); cur.len()];
            for o in 0..outer {
                for a in 0..r {
                    for s in 0..inner {
                        let c = &cur[(o * r + a) * inner + s];
                        if c.is_zero() {
                            continue;
                        }
                        for (b, w) in m[a].iter().enumerate() {
                            if !w.is_zero() {
                                next[(o * r + b) * inner + s] += c * w;
                            }
                        }
                    }
                }
            }
            cur = next;
        }
        Ok(NilPoly { dims: self.dims.clone(), field: f, coeffs: cur.into_iter().map(|c| f.norm(c)).collect() })
    }

    /// Move every term to a new exponent vector (terms mapped to `None`
    /// vanish). Collisions add.
    pub fn remap(&self, target_dims: &[u32], map: impl Fn(&[u32]) -> Option<Vec<u32>>) -> Self {
        let f = self.field;
        let mut out = Self::zero(target_dims, f);
        for (exps, c) in self.terms() {
            if let Some(t) = map(&exps) {
                let i = out.index_of(&t).expect("remapped exponent in range");
                out.coeffs[i] = f.add(&out.coeffs[i], c);
            }
        }
        out
    }
}
