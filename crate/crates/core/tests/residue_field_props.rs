use brauer_core::field::{frobenius_decompose, p_independence, pth_root};
use brauer_core::sampling::{random_nonzero_ratfunc, random_ratfunc};
use brauer_core::{Embedding, FieldDescriptor, RatFunc};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn prime() -> impl Strategy<Value = u32> {
    prop_oneof![Just(2u32), Just(3), Just(5)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_form_is_idempotent(seed in any::<u64>(), p in prime(), n in 0usize..=3) {
        let f = random_ratfunc(&mut rng(seed), n, p, 3);
        let again = RatFunc::new(f.num().clone(), f.den().clone()).unwrap();
        prop_assert_eq!(again, f);
    }

    #[test]
    fn frobenius_decomposition_reconstructs(seed in any::<u64>(), p in prime(), n in 0usize..=3) {
        let f = random_ratfunc(&mut rng(seed), n, p, 3);
        prop_assert_eq!(frobenius_decompose(&f).reconstruct(), f);
    }

    #[test]
    fn pth_root_is_sound(seed in any::<u64>(), p in prime(), n in 0usize..=3) {
        let mut r = rng(seed);
        let f = random_ratfunc(&mut r, n, p, 3);
        if let Some(g) = pth_root(&f) {
            prop_assert_eq!(g.pow(p as i64).unwrap(), f.clone());
        }
        prop_assert_eq!(pth_root(&f.frobenius()), Some(f));
    }

    #[test]
    fn p_independence_ignores_order_and_pth_power_factors(
        seed in any::<u64>(),
        p in prime(),
        n in 1usize..=3,
        k in 1usize..=3,
    ) {
        let mut r = rng(seed);
        let elems: Vec<RatFunc> = (0..k).map(|_| random_nonzero_ratfunc(&mut r, n, p, 2)).collect();
        let base = p_independence(&elems).rank;
        let mut reversed = elems.clone();
        reversed.reverse();
        prop_assert_eq!(p_independence(&reversed).rank, base);
        let scale = random_nonzero_ratfunc(&mut r, n, p, 1).frobenius();
        let mut scaled = elems.clone();
        scaled[0] = scaled[0].mul(&scale);
        prop_assert_eq!(p_independence(&scaled).rank, base);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn embedding_is_a_field_homomorphism(seed in any::<u64>(), p in prime(), n in 1usize..=3) {
        let mut r = rng(seed);
        let k = FieldDescriptor::standard(p, n).unwrap();
        let roots: Vec<(usize, u32)> = (0..n).filter(|_| r.gen_bool(0.5)).map(|j| (j, 1)).collect();
        let e = Embedding::adjoin_roots(&k, &roots).unwrap();
        let f = random_ratfunc(&mut r, n, p, 2);
        let g = random_nonzero_ratfunc(&mut r, n, p, 2);
        prop_assert_eq!(e.embed(&f.add(&g)), e.embed(&f).add(&e.embed(&g)));
        prop_assert_eq!(e.embed(&f.mul(&g)), e.embed(&f).mul(&e.embed(&g)));
        prop_assert_eq!(e.embed(&g.inv().unwrap()), e.embed(&g).inv().unwrap());
    }
}

use rand::Rng;
