use chern_core::exactnum::{Field, Prime};
use chern_core::kchow::{ChowElt, ModelVariety};
use chern_core::rng::{case_rng, random_chow_mod_p};
use chern_core::series::r_series;
use chern_core::steenrod::Steenrod;
use num_traits::Zero;
use proptest::prelude::*;

fn model() -> impl Strategy<Value = ModelVariety> {
    prop::sample::select(ModelVariety::all_up_to_dim(6))
}

fn prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(vec![2u64, 3]).prop_map(|p| Prime::new(p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn t_prime_inverts_s(x in model(), p in prime(), seed in any::<u64>()) {
        let st = Steenrod::new(&x, p).unwrap();
        let c = random_chow_mod_p(&mut case_rng(seed, 0), &x, p);
        prop_assert_eq!(st.total_t_prime(&st.total_s(&c).unwrap()).unwrap(), c.clone());
        prop_assert_eq!(st.total_s(&st.total_t_prime(&c).unwrap()).unwrap(), c);
    }
}

#[test]
fn t_prime_on_divisors_is_h_times_r() {
    for p in [2u64, 3, 5] {
        let p = Prime::new(p).unwrap();
        for n in 1..=8 {
            let x = ModelVariety::projective(n);
            let field = Field::ModP(p);
            let st = Steenrod::new(&x, p).unwrap();
            let h = ChowElt::h(&x, field, 0);
            let r = r_series(p, n as usize);
            let mut want = ChowElt::zero(&x, field);
            for (k, c) in r.coeffs().iter().enumerate() {
                if !c.is_zero() && k < n as usize {
                    want = want.add(&ChowElt::monomial(&x, field, &[k as u32 + 1], c)).unwrap();
                }
            }
            assert_eq!(st.total_t_prime(&h).unwrap(), want, "P{n}, p = {p}");
        }
    }
}
