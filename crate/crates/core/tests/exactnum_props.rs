use chern_core::exactnum::{
    a_p, legendre_factorial_vp, primitive_root_mod_p2, todd_number, vp, vp_int, PValuation, Prime, Rational,
};
use num_bigint::BigInt;
use proptest::prelude::*;

fn prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11]).prop_map(|p| Prime::new(p).unwrap())
}

fn rational() -> impl Strategy<Value = Rational> {
    (-5000i64..5000, 1i64..5000).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn vp_is_multiplicative(x in rational(), y in rational(), p in prime()) {
        prop_assert_eq!(vp(&(&x * &y), p), vp(&x, p) + vp(&y, p));
    }

    #[test]
    fn vp_is_ultrametric(x in rational(), y in rational(), p in prime()) {
        prop_assert!(vp(&(&x + &y), p) >= vp(&x, p).min(vp(&y, p)));
    }

    #[test]
    fn vp_of_zero_is_infinite(p in prime()) {
        prop_assert_eq!(vp(&Rational::from_integer(0.into()), p), PValuation::Infinity);
    }

    #[test]
    fn legendre_matches_floor_sum(n in 0u64..=10_000, p in prime()) {
        let mut sum = 0;
        let mut q = p.get();
        while q <= n {
            sum += n / q;
            q *= p.get();
        }
        prop_assert_eq!(legendre_factorial_vp(n, p), sum);
    }
}

#[test]
fn vp_of_powers_of_primitive_root() {
    for p in [2u64, 3, 5, 7, 11] {
        let p = Prime::new(p).unwrap();
        let l = BigInt::from(primitive_root_mod_p2(p));
        for n in 1..p.get() * (p.get() - 1) {
            let direct = vp_int(&(num_traits::pow(l.clone(), n as usize) - 1), p);
            assert_eq!(direct, PValuation::Finite(a_p(n, p) as i64), "p = {p}, n = {n}");
        }
    }
}

#[test]
fn todd_numbers_step_by_primes() {
    for d in 1..=20u64 {
        let step: u64 = (2..=d + 1).filter(|&q| chern_core::exactnum::is_prime(q) && d % (q - 1) == 0).product();
        assert_eq!(todd_number(d), todd_number(d - 1) * step, "d = {d}");
    }
}
