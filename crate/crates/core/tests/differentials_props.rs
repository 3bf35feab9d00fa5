use brauer_core::differentials::{
    d, dlog, kernel_decompose, kernel_expand, lemma16_lower_bound, paired_form, pullback_omega2,
    restrict_omega2, wedge, Omega2Form,
};
use brauer_core::sampling::{
    random_nonzero_ratfunc, random_omega1, random_omega2, random_quadratic_radical, random_ratfunc,
};
use brauer_core::{Embedding, FieldDescriptor, RatFunc};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn prime() -> impl Strategy<Value = u32> {
    prop_oneof![Just(2u32), Just(3), Just(5)]
}

fn random_roots(r: &mut ChaCha8Rng, n: usize) -> Vec<(usize, u32)> {
    (0..n)
        .filter_map(|j| match r.gen_range(0..3) {
            0 => None,
            k => Some((j, k)),
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn d_is_a_derivation(seed in any::<u64>(), p in prime(), n in 1usize..=3) {
        let mut r = rng(seed);
        let f = random_ratfunc(&mut r, n, p, 2);
        let g = random_ratfunc(&mut r, n, p, 2);
        let lhs = d(&f.mul(&g));
        let rhs = d(&g).scale(&f).add(&d(&f).scale(&g));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(d(&f.add(&g)), d(&f).add(&d(&g)));
    }

    #[test]
    fn d_kills_pth_powers_and_dlog_is_additive(seed in any::<u64>(), p in prime(), n in 1usize..=3) {
        let mut r = rng(seed);
        let f = random_nonzero_ratfunc(&mut r, n, p, 2);
        let g = random_nonzero_ratfunc(&mut r, n, p, 2);
        prop_assert!(d(&f.frobenius()).is_zero());
        prop_assert_eq!(
            dlog(&f.mul(&g)).unwrap(),
            dlog(&f).unwrap().add(&dlog(&g).unwrap())
        );
    }

    #[test]
    fn kernel_decomposition_is_sound(seed in any::<u64>(), p in prime(), n in 2usize..=3) {
        let mut r = rng(seed);
        let gens = vec![RatFunc::var(n, p, 0).add(&random_ratfunc(&mut r, n, p, 1).frobenius())];
        // half the time a form in the span, otherwise an arbitrary one
        let a = if r.gen_bool(0.5) {
            wedge(&d(&gens[0]), &random_omega1(&mut r, n, p, 1))
        } else {
            random_omega2(&mut r, n, p, 1)
        };
        if let Some(parts) = kernel_decompose(&a, &gens).unwrap() {
            prop_assert_eq!(kernel_expand(&gens, &parts, n, p), a);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn restriction_is_functorial(seed in any::<u64>(), p in prime(), n in 2usize..=3) {
        let mut r = rng(seed);
        let k = FieldDescriptor::standard(p, n).unwrap();
        let e1 = Embedding::adjoin_roots(&k, &random_roots(&mut r, n)).unwrap();
        let e2 = Embedding::adjoin_roots(e1.target(), &random_roots(&mut r, n)).unwrap();
        let a = random_omega2(&mut r, n, p, 1);
        let composite = e1.then(&e2).unwrap();
        prop_assert_eq!(
            restrict_omega2(&a, &composite),
            restrict_omega2(&restrict_omega2(&a, &e1), &e2)
        );
    }

    #[test]
    fn forms_killed_by_the_first_root_decompose(seed in any::<u64>()) {
        let (n, p) = (3, 2);
        let mut r = rng(seed);
        let k = FieldDescriptor::standard(p, n).unwrap();
        let e = Embedding::adjoin_roots(&k, &[(0, 1)]).unwrap();
        let mut a = Omega2Form::zero(n, p);
        for j in 1..n {
            a.add_to(0, j, &random_ratfunc(&mut r, n, p, 2));
        }
        prop_assert!(restrict_omega2(&a, &e).is_zero());
        let gens = vec![k.var(0)];
        let parts = kernel_decompose(&a, &gens).unwrap();
        prop_assert!(parts.is_some());
        prop_assert_eq!(kernel_expand(&gens, &parts.unwrap(), n, p), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn paired_form_survives_quadratic_radicals(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = FieldDescriptor::standard(2, 4).unwrap();
        let ones = vec![k.one(), k.one()];
        let gens = k.p_basis();
        let a = paired_form(&ones, &gens, 4, 2);
        prop_assert_eq!(lemma16_lower_bound(&ones, &gens).unwrap(), 2);
        let (g, shear, root) = random_quadratic_radical(&mut r, &k).unwrap();
        // the automorphism really carries g to the adjoined root's square
        prop_assert_eq!(shear.apply(&g), k.var(root.var_images().iter().position(|(_, e)| *e == 1).unwrap()));
        prop_assert!(!restrict_omega2(&pullback_omega2(&a, &shear), &root).is_zero());
    }
}
