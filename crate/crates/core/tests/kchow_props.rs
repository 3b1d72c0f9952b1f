use chern_core::exactnum::{factorial, Prime, Rational};
use chern_core::kchow::{genus_apply, KCohElt, KHomElt, ModelVariety, VirtualBundle};
use chern_core::rng::{case_rng, random_bundle, random_kcoh, random_khom};
use chern_core::series::{r_series, todd_series};
use num_bigint::BigInt;
use proptest::prelude::*;

fn models(max_dim: u32) -> Vec<ModelVariety> {
    ModelVariety::all_up_to_dim(max_dim)
}

fn model(max_dim: u32) -> impl Strategy<Value = ModelVariety> {
    prop::sample::select(models(max_dim))
}

/// `χ(P^n, O(a)) = (a+1)(a+2)…(a+n)/n!`.
fn chi_line(n: u32, a: i64) -> BigInt {
    let num: BigInt = (1..=n as i64).map(|k| BigInt::from(a + k)).product();
    num / factorial(n as u64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn coh_hom_conversions_are_inverse(x in model(8), seed in any::<u64>()) {
        let e = random_khom(&mut case_rng(seed, 0), &x);
        prop_assert_eq!(KHomElt::from_coh(&e.to_coh()), e.clone());
        let c = random_kcoh(&mut case_rng(seed, 1), &x);
        prop_assert_eq!(KHomElt::from_coh(&c).to_coh(), c);
    }

    #[test]
    fn ch_is_a_ring_homomorphism(x in model(6), seed in any::<u64>()) {
        let a = random_kcoh(&mut case_rng(seed, 0), &x);
        let b = random_kcoh(&mut case_rng(seed, 1), &x);
        prop_assert_eq!(a.mul(&b).unwrap().ch().unwrap(), a.ch().unwrap().mul(&b.ch().unwrap()).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().ch().unwrap(), a.ch().unwrap().add(&b.ch().unwrap()).unwrap());
    }

    #[test]
    fn genera_are_multiplicative(x in model(6), seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let u = random_bundle(&mut case_rng(seed, 0), &x);
        let v = random_bundle(&mut case_rng(seed, 1), &x);
        let d = x.dim() as usize;
        for q in [todd_series(d), r_series(Prime::new(p).unwrap(), d)] {
            let g = |w: &VirtualBundle| genus_apply(&q, w).unwrap();
            prop_assert_eq!(g(&u.add(&v).unwrap()), g(&u).mul(&g(&v)).unwrap());
            prop_assert_eq!(g(&u.neg()).mul(&g(&u)).unwrap(), g(&VirtualBundle::zero(&x)));
        }
        let one = genus_apply(&todd_series(d), &VirtualBundle::zero(&x)).unwrap();
        prop_assert_eq!(one.to_string(), "1");
    }

    #[test]
    fn euler_characteristic_of_line_bundles(x in model(8), twist in prop::collection::vec(-6i64..=6, 8)) {
        let a = &twist[..x.num_factors()];
        let e = KHomElt::from_coh(&KCohElt::line_bundle(&x, a).unwrap());
        let want: BigInt = x.factors().iter().zip(a).map(|(&n, &aj)| chi_line(n, aj)).product();
        prop_assert_eq!(e.euler_characteristic().unwrap(), Rational::from_integer(want));
    }
}

#[test]
fn euler_characteristic_of_basis() {
    for x in models(8) {
        for i in x.basis() {
            let e = KHomElt::basis(&x, &i).unwrap();
            assert_eq!(e.euler_characteristic().unwrap(), Rational::from_integer(1.into()), "{x} {i:?}");
        }
    }
}
