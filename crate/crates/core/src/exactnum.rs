//! Exact scalars, p-adic valuations and the number-theoretic facts the
//! integrality bounds rest on.
//!
//! Integers and rationals come from `num-bigint` / `num-rational`; this module
//! adds primes, valuations, Todd numbers and the residue-field arithmetic used
//! for mod-p coefficients.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn primes_up_to(n: u64) -> impl Iterator<Item = Prime> {
    (2..=n).filter(|&q| is_prime(q)).map(Prime)
}

/// A rational prime, validated at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn big(self) -> BigInt {
        BigInt::from(self.0)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// p-adic valuation; `Infinity` only for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PValuation {
    Finite(i64),
    Infinity,
}

impl PValuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            PValuation::Finite(v) => Some(v),
            PValuation::Infinity => None,
        }
    }

    pub fn is_at_least(self, bound: i64) -> bool {
        match self {
            PValuation::Finite(v) => v >= bound,
            PValuation::Infinity => true,
        }
    }
}

impl Ord for PValuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (PValuation::Infinity, PValuation::Infinity) => Ordering::Equal,
            (PValuation::Infinity, _) => Ordering::Greater,
            (_, PValuation::Infinity) => Ordering::Less,
            (PValuation::Finite(a), PValuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for PValuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Add for PValuation {
    type Output = PValuation;
    fn add(self, rhs: PValuation) -> PValuation {
        match (self, rhs) {
            (PValuation::Finite(a), PValuation::Finite(b)) => PValuation::Finite(a + b),
            _ => PValuation::Infinity,
        }
    }
}

impl fmt::Display for PValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PValuation::Finite(v) => write!(f, "{v}"),
            PValuation::Infinity => write!(f, "inf"),
        }
    }
}

/// Exponent of `p` in a nonzero integer.
pub fn vp_int(n: &BigInt, p: Prime) -> PValuation {
    if n.is_zero() {
        return PValuation::Infinity;
    }
    let p = p.big();
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            break;
        }
        n = q;
        v += 1;
    }
    PValuation::Finite(v)
}

pub fn vp(x: &Rational, p: Prime) -> PValuation {
    if x.is_zero() {
        return PValuation::Infinity;
    }
    match (vp_int(x.numer(), p), vp_int(x.denom(), p)) {
        (PValuation::Finite(a), PValuation::Finite(b)) => PValuation::Finite(a - b),
        _ => unreachable!("nonzero rational has finite valuations"),
    }
}

/// Valuation of an element of a free module, read coefficient-wise in a fixed
/// basis. Only meaningful for free modules; torsion is not representable here.
pub fn vp_module<'a, I>(coeffs: I, p: Prime) -> PValuation
where
    I: IntoIterator<Item = &'a Rational>,
{
    coeffs
        .into_iter()
        .map(|c| vp(c, p))
        .min()
        .unwrap_or(PValuation::Infinity)
}

pub fn digit_sum(mut n: u64, base: u64) -> u64 {
    let mut s = 0;
    while n > 0 {
        s += n % base;
        n /= base;
    }
    s
}

/// `v_p(n!) = (n - s_p(n)) / (p - 1)` with `s_p` the base-p digit sum.
pub fn legendre_factorial_vp(n: u64, p: Prime) -> u64 {
    (n - digit_sum(n, p.get())) / (p.get() - 1)
}

/// `τ_d = ∏_p p^[d/(p-1)]`; only primes `p ≤ d + 1` contribute.
pub fn todd_number(d: u64) -> BigInt {
    primes_up_to(d + 1).fold(BigInt::one(), |acc, p| {
        acc * num_traits::pow(p.big(), (d / (p.get() - 1)) as usize)
    })
}

/// 1 if `(p-1) | n`, else 0.
pub fn a_p(n: u64, p: Prime) -> u64 {
    u64::from(n.is_multiple_of(p.get() - 1))
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut acc = 1u128 % m128;
    let mut b = base as u128 % m128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

pub fn multiplicative_order(a: u64, m: u64) -> Option<u64> {
    if num_integer::gcd(a, m) != 1 {
        return None;
    }
    let mut x = a % m;
    let mut k = 1;
    while x != 1 % m {
        x = ((x as u128 * a as u128) % m as u128) as u64;
        k += 1;
        if k > m {
            return None;
        }
    }
    Some(k)
}

/// Smallest `l > 1` whose class generates `(Z/p^2)^×`.
pub fn primitive_root_mod_p2(p: Prime) -> u64 {
    let p = p.get();
    let m = p * p;
    let target = p * (p - 1);
    (2..)
        .find(|&l| multiplicative_order(l, m) == Some(target))
        .expect("(Z/p^2)^x is cyclic")
}

const WILSON_GUARD: u64 = 1_000_000;

/// `(p^i)! · p^{-(p^i-1)/(p-1)} mod p`, computed by walking the factorial.
///
/// The p-free part of every factor is multiplied mod p and the stripped
/// powers of p are counted; the count must come out to `(p^i-1)/(p-1)`.
pub fn wilson_pp_residue(p: Prime, i: u32) -> Result<u64> {
    let pp = p.get();
    let n = pp
        .checked_pow(i)
        .filter(|&n| n <= WILSON_GUARD)
        .ok_or_else(|| Error::SizeGuard(format!("{pp}^{i} exceeds {WILSON_GUARD}")))?;
    let mut residue = 1u64;
    let mut stripped = 0u64;
    for mut k in 1..=n {
        while k % pp == 0 {
            k /= pp;
            stripped += 1;
        }
        residue = residue * (k % pp) % pp;
    }
    let expected = (n - 1) / (pp - 1);
    if stripped != expected {
        return Err(Error::Domain(format!(
            "stripped {stripped} factors of {pp} from ({pp}^{i})!, expected {expected}"
        )));
    }
    Ok(residue)
}

/// `(-1)^i mod p` as a residue in `0..p`.
pub fn sign_residue(i: u32, p: Prime) -> u64 {
    if i.is_multiple_of(2) {
        1 % p.get()
    } else {
        p.get() - 1
    }
}

pub fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

/// Coefficient field of a series or a truncated polynomial ring element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    ModP(Prime),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::ModP(p) => write!(f, "Z/{p}"),
        }
    }
}

impl Field {
    pub fn zero(self) -> Rational {
        Rational::zero()
    }

    pub fn one(self) -> Rational {
        Rational::one()
    }

    /// Bring an exact rational into canonical form for this field. For `Z/p`
    /// the denominator must be prime to p; canonical representatives are
    /// integers in `0..p`.
    pub fn reduce(self, x: &Rational) -> Result<Rational> {
        match self {
            Field::Rational => Ok(x.clone()),
            Field::ModP(p) => {
                let pb = p.big();
                let den = x.denom().mod_floor(&pb);
                if den.is_zero() {
                    return Err(Error::NotInLattice {
                        p: p.get(),
                        valuation: vp(x, p).finite().unwrap_or(0),
                    });
                }
                let inv = mod_inverse(&den, &pb).expect("prime modulus");
                let num = x.numer().mod_floor(&pb);
                Ok(Rational::from_integer((num * inv).mod_floor(&pb)))
            }
        }
    }

    /// `reduce` for values already known to be p-integral (integers, products
    /// of canonical representatives).
    pub fn norm(self, x: Rational) -> Rational {
        match self {
            Field::Rational => x,
            Field::ModP(p) if x.is_integer() => {
                Rational::from_integer(x.numer().mod_floor(&p.big()))
            }
            Field::ModP(_) => self.reduce(&x).expect("p-integral value"),
        }
    }

    pub fn add(self, a: &Rational, b: &Rational) -> Rational {
        self.norm(a + b)
    }

    pub fn sub(self, a: &Rational, b: &Rational) -> Rational {
        self.norm(a - b)
    }

    pub fn mul(self, a: &Rational, b: &Rational) -> Rational {
        self.norm(a * b)
    }

    pub fn neg(self, a: &Rational) -> Rational {
        self.norm(-a)
    }

    pub fn inv(self, a: &Rational) -> Result<Rational> {
        if a.is_zero() {
            return Err(Error::NotInvertible("0".into()));
        }
        match self {
            Field::Rational => Ok(a.recip()),
            Field::ModP(p) => {
                let pb = p.big();
                mod_inverse(a.numer(), &pb)
                    .map(Rational::from_integer)
                    .ok_or_else(|| Error::NotInvertible(format!("{a} mod {p}")))
            }
        }
    }
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Generalized binomial coefficient `C(n, k)` for any integer `n`, `k ≥ 0`.
pub fn binomial(n: i64, k: u64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k as i64 {
        num *= BigInt::from(n - j);
        den *= BigInt::from(j + 1);
    }
    num / den
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn to_i64(x: &BigInt) -> Option<i64> {
    x.to_i64()
}

/// `"a/b"` with `b ≥ 1`, the exact-rational string form used in JSON output.
pub fn rational_string(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}
