//! Truncated univariate power series over `Q` or `Z/p`.
//!
//! A series of order `N` stores exactly `N + 1` coefficients; everything from
//! `x^{N+1}` on is unknown. Binary operations truncate to the smaller order
//! and refuse to mix coefficient fields.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{factorial, rational_string, Field, Prime, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncSeries {
    coeffs: Vec<Rational>,
    field: Field,
}

impl TruncSeries {
    /// Coefficients are reduced into `field`; missing ones are zero.
    pub fn new(field: Field, order: usize, coeffs: &[Rational]) -> Result<Self> {
        let mut out = vec![Rational::zero(); order + 1];
        for (slot, c) in out.iter_mut().zip(coeffs) {
            *slot = field.reduce(c)?;
        }
        Ok(TruncSeries { coeffs: out, field })
    }

    pub fn from_fn(field: Field, order: usize, f: impl Fn(usize) -> Rational) -> Result<Self> {
        let coeffs: Vec<Rational> = (0..=order).map(f).collect();
        Self::new(field, order, &coeffs)
    }

    pub fn zero(field: Field, order: usize) -> Self {
        TruncSeries { coeffs: vec![Rational::zero(); order + 1], field }
    }

    pub fn one(field: Field, order: usize) -> Self {
        Self::monomial(field, order, 0)
    }

    /// `x^k`, or zero when `k` is past the truncation.
    pub fn monomial(field: Field, order: usize, k: usize) -> Self {
        let mut s = Self::zero(field, order);
        if k <= order {
            s.coeffs[k] = Rational::one();
        }
        s
    }

    pub fn x(field: Field, order: usize) -> Self {
        Self::monomial(field, order, 1)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order());
        TruncSeries { coeffs: self.coeffs[..=n].to_vec(), field: self.field }
    }

    pub fn with_field(&self, field: Field) -> Result<Self> {
        Self::new(field, self.order(), &self.coeffs)
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()))
        }
    }

    fn nonzero(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let n = self.order().min(other.order());
        let f = self.field;
        let coeffs = (0..=n).map(|k| f.add(&self.coeffs[k], &other.coeffs[k])).collect();
        Ok(TruncSeries { coeffs, field: f })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        TruncSeries { coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect(), field: f }
    }

    pub fn scale(&self, c: &Rational) -> Result<Self> {
        let c = self.field.reduce(c)?;
        let f = self.field;
        Ok(TruncSeries { coeffs: self.coeffs.iter().map(|a| f.mul(a, &c)).collect(), field: f })
    }

    /// Cauchy product, truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let n = self.order().min(other.order());
        let f = self.field;
        let mut acc = vec![Rational::zero(); n + 1];
        let rhs: Vec<(usize, &Rational)> = other.nonzero().collect();
        for (i, a) in self.nonzero() {
            if i > n {
                break;
            }
            for &(j, b) in &rhs {
                if i + j > n {
                    break;
                }
                acc[i + j] += a * b;
            }
        }
        Ok(TruncSeries { coeffs: acc.into_iter().map(|c| f.norm(c)).collect(), field: f })
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(self.field, self.order());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        let f = self.field;
        let c0 = &self.coeffs[0];
        let inv0 = f
            .inv(c0)
            .map_err(|_| Error::NotInvertible(format!("constant term {c0} over {f}")))?;
        let n = self.order();
        let mut out = vec![Rational::zero(); n + 1];
        out[0] = inv0.clone();
        for k in 1..=n {
            let mut s = Rational::zero();
            for j in 1..=k {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    s += a * &out[k - j];
                }
            }
            out[k] = f.norm(-(s * &inv0));
        }
        Ok(TruncSeries { coeffs: out, field: f })
    }

    /// `self ∘ inner`; the inner series must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check_field(inner)?;
        if !inner.coeffs[0].is_zero() {
            return Err(Error::Composition("inner series has a nonzero constant term".into()));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let f = self.field;
        // Horner from the top coefficient down.
        let mut acc = Self::zero(f, n);
        for k in (0..=n).rev() {
            acc = acc.mul(&inner)?;
            acc.coeffs[0] = f.add(&acc.coeffs[0], &self.coeffs[k]);
        }
        Ok(acc)
    }

    /// Compositional inverse `g` with `g ∘ self = x` up to the truncation.
    ///
    /// Requires `self = x + O(x^2)`. Coefficients are solved one degree at a
    /// time: `[x^n] Σ_k g_k self^k = 0` with `[x^n] self^n = 1`.
    pub fn comp_inverse(&self) -> Result<Self> {
        let f = self.field;
        if !self.coeffs[0].is_zero() {
            return Err(Error::Composition("series has a nonzero constant term".into()));
        }
        if self.order() == 0 || !self.coeffs[1].is_one() {
            return Err(Error::Composition("linear coefficient must be 1".into()));
        }
        let n = self.order();
        let mut powers = Vec::with_capacity(n + 1);
        powers.push(Self::one(f, n));
        for k in 1..=n {
            let next = powers[k - 1].mul(self)?;
            powers.push(next);
        }
        let mut g = vec![Rational::zero(); n + 1];
        g[1] = Rational::one();
        for m in 2..=n {
            let mut s = Rational::zero();
            for (k, gk) in g.iter().enumerate().take(m).skip(1) {
                if !gk.is_zero() {
                    s += gk * &powers[k].coeffs[m];
                }
            }
            g[m] = f.norm(-s);
        }
        Ok(TruncSeries { coeffs: g, field: f })
    }

    /// Multiply by `x`, keeping the order.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = vec![Rational::zero()];
        coeffs.extend_from_slice(&self.coeffs[..self.order()]);
        TruncSeries { coeffs, field: self.field }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.coeffs.iter().map(|c| serde_json::Value::String(rational_string(c))).collect(),
        )
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            crate::render::write_term(f, c, &mono, first)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}

/// `exp(x)` truncated at `order`.
pub fn exp_series(order: usize) -> TruncSeries {
    TruncSeries::from_fn(Field::Rational, order, |n| Rational::new(1.into(), factorial(n as u64)))
        .expect("rational coefficients")
}

/// `Σ (-x)^n / (n+1)!`, i.e. `(1 - e^{-x}) / x`: the Todd genus of `-L`.
pub fn todd_inverse_series(order: usize) -> TruncSeries {
    TruncSeries::from_fn(Field::Rational, order, |n| {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        Rational::new(sign.into(), factorial(n as u64 + 1))
    })
    .expect("rational coefficients")
}

/// `x / (1 - e^{-x})`.
pub fn todd_series(order: usize) -> TruncSeries {
    todd_inverse_series(order).inverse().expect("constant term 1")
}

/// `Σ_i (-1)^i x^{p^i - 1}` over `Z/p`.
pub fn r_series(p: Prime, order: usize) -> TruncSeries {
    let field = Field::ModP(p);
    let mut s = TruncSeries::zero(field, order);
    let mut exp = 1usize;
    let mut i = 0u32;
    while exp - 1 <= order {
        s.coeffs[exp - 1] = field.norm(if i.is_multiple_of(2) { Rational::one() } else { -Rational::one() });
        exp = match exp.checked_mul(p.get() as usize) {
            Some(e) => e,
            None => break,
        };
        i += 1;
    }
    s
}

/// `1 + x^{p-1}` over `Z/p`.
pub fn w_series(p: Prime, order: usize) -> TruncSeries {
    let field = Field::ModP(p);
    let mut s = TruncSeries::one(field, order);
    let k = p.get() as usize - 1;
    if k <= order {
        s.coeffs[k] = field.add(&s.coeffs[k], &Rational::one());
    }
    s
}
