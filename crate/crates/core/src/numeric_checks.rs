//! Checks on the number-theoretic and series-level identities.

use num_bigint::BigInt;
use num_traits::One;
use serde_json::json;

use crate::error::Result;
use crate::exactnum::{
    legendre_factorial_vp, primes_up_to, rational_string, sign_residue, todd_number, vp, wilson_pp_residue, Field,
    Prime, Rational,
};
use crate::report::CheckReport;
use crate::series::{r_series, todd_series, w_series, TruncSeries};

/// `τ_d` two ways (prime-power product and `τ_{d-1} · ∏_{p-1 | d} p`), and
/// integrality of `τ_d` times the `x^d` coefficient of the Todd series.
pub fn check_todd_numbers(max_d: u64) -> CheckReport {
    let mut r = CheckReport::new("todd-numbers", 0).with_param("max_d", max_d);
    let td = todd_series(max_d as usize);
    let mut prev = BigInt::one();
    for d in 0..=max_d {
        let direct = todd_number(d);
        let recursive = if d == 0 {
            BigInt::one()
        } else {
            primes_up_to(d + 1).filter(|p| d % (p.get() - 1) == 0).fold(prev.clone(), |acc, p| acc * p.big())
        };
        r.expect(direct == recursive, || {
            json!({"d": d, "direct": direct.to_string(), "recursive": recursive.to_string()})
        });
        let scaled = td.coeff(d as usize) * Rational::from_integer(direct.clone());
        r.expect(scaled.is_integer(), || json!({"d": d, "tau_times_coefficient": rational_string(&scaled)}));
        prev = recursive;
    }
    r
}

/// `(x · R^(p)) ∘ (x · W^(p)) = x` over `Z/p` up to `order`.
pub fn check_inv_series(p: Prime, order: usize) -> Result<CheckReport> {
    let mut r = CheckReport::new("inv-series", 0).with_param("p", p.get()).with_param("order", order);
    let outer = r_series(p, order).shift_up().truncate(order);
    let inner = w_series(p, order).shift_up().truncate(order);
    let composed = outer.compose(&inner)?;
    let x = TruncSeries::x(Field::ModP(p), order);
    for k in 0..=order {
        let (lhs, rhs) = (composed.coeff(k), x.coeff(k));
        r.expect(lhs == rhs, || {
            json!({"degree": k, "composed": rational_string(&lhs), "expected": rational_string(&rhs)})
        });
    }
    Ok(r)
}

/// Digit-sum formula for `v_p(n!)` against the running sum of `v_p(k)`, `k ≤ n`.
pub fn check_legendre(max_n: u64, max_p: u64) -> CheckReport {
    let mut r = CheckReport::new("legendre", 0).with_param("max_n", max_n).with_param("max_p", max_p);
    for p in primes_up_to(max_p) {
        let mut brute = 0u64;
        for n in 0..=max_n {
            if n > 0 {
                brute += vp(&Rational::from_integer(n.into()), p).finite().expect("nonzero") as u64;
            }
            let formula = legendre_factorial_vp(n, p);
            r.expect(formula == brute, || json!({"p": p.get(), "n": n, "formula": formula, "brute_force": brute}));
        }
    }
    r
}

/// `(p^i)! · p^{-(p^i-1)/(p-1)} ≡ (-1)^i mod p` on the given `(p, max_i)` pairs.
pub fn check_wilson_pp(cases: &[(u64, u32)]) -> Result<CheckReport> {
    let mut r = CheckReport::new("wilson-pp", 0).with_param(
        "cases",
        cases.iter().map(|(p, i)| json!({"p": p, "max_i": i})).collect::<Vec<_>>(),
    );
    for &(p, max_i) in cases {
        let p = Prime::new(p)?;
        for i in 0..=max_i {
            let got = wilson_pp_residue(p, i)?;
            let want = sign_residue(i, p);
            r.expect(got == want, || json!({"p": p.get(), "i": i, "residue": got, "expected": want}));
        }
    }
    Ok(r)
}
