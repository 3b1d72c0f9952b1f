use chern_core::exactnum::{todd_number, vp, Field, PValuation, Prime, Rational};
use chern_core::series::{todd_series, TruncSeries};
use num_traits::Zero;
use proptest::prelude::*;

const ORDER: usize = 12;

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::Rational),
        prop::sample::select(vec![2u64, 3, 5, 7]).prop_map(|p| Field::ModP(Prime::new(p).unwrap())),
    ]
}

fn coeffs(len: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-20i64..20, 1i64..6), len).prop_map(|v| v.into_iter().map(|(n, d)| Rational::new(n.into(), d.into())).collect())
}

/// Reduces `c` into `f`, replacing denominators divisible by `p` with 1.
fn series(f: Field, c: &[Rational]) -> TruncSeries {
    let c: Vec<Rational> = c
        .iter()
        .map(|x| if f.reduce(x).is_ok() { x.clone() } else { Rational::from_integer(x.numer().clone()) })
        .collect();
    TruncSeries::new(f, ORDER, &c).unwrap()
}

/// `x + a_2 x^2 + …`
fn monic_linear(f: Field, c: &[Rational]) -> TruncSeries {
    let mut c = c.to_vec();
    c[0] = Rational::zero();
    c[1] = Rational::from_integer(1.into());
    series(f, &c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn composition_distributes_over_products(
        f in field(), a in coeffs(ORDER + 1), b in coeffs(ORDER + 1), mut c in coeffs(ORDER + 1),
    ) {
        c[0] = Rational::zero();
        let (a, b, h) = (series(f, &a), series(f, &b), series(f, &c));
        let lhs = a.mul(&b).unwrap().compose(&h).unwrap();
        let rhs = a.compose(&h).unwrap().mul(&b.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn comp_inverse_round_trips(f in field(), c in coeffs(ORDER + 1)) {
        let s = monic_linear(f, &c);
        let g = s.comp_inverse().unwrap();
        let x = TruncSeries::x(f, ORDER);
        prop_assert_eq!(g.compose(&s).unwrap(), x.clone());
        prop_assert_eq!(s.compose(&g).unwrap(), x);
    }
}

#[test]
fn todd_denominators_are_bounded() {
    let s = todd_series(20);
    for p in chern_core::exactnum::primes_up_to(23) {
        for d in 1..=20usize {
            let bound = -((d as u64 / (p.get() - 1)) as i64);
            assert!(vp(&s.coeff(d), p) >= PValuation::Finite(bound), "p = {p}, d = {d}");
        }
    }
    for d in 0..=20usize {
        let scaled = s.coeff(d) * Rational::from_integer(todd_number(d as u64));
        assert!(scaled.is_integer(), "d = {d}");
    }
}
