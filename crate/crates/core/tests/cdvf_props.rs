use brauer_core::cdvf::CdvfModel;
use brauer_core::sampling::random_truncated_unit;
use brauer_core::FieldDescriptor;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn model(n: usize) -> CdvfModel {
    CdvfModel::new(FieldDescriptor::standard(2, n).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn layers_reconstruct_and_are_unique(seed in any::<u64>(), n in 0usize..=2) {
        let m = model(n);
        let u = random_truncated_unit(&mut ChaCha8Rng::seed_from_u64(seed), &m, 2);
        let layers = m.unit_layers(&u).unwrap();
        let back = m.reconstruct(&layers).unwrap();
        prop_assert_eq!(&back, &u);
        prop_assert_eq!(m.unit_layers(&back).unwrap(), layers);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn unit_arithmetic_laws(seed in any::<u64>(), n in 0usize..=2) {
        let m = model(n);
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = random_truncated_unit(&mut r, &m, 2);
        let b = random_truncated_unit(&mut r, &m, 2);
        let c = random_truncated_unit(&mut r, &m, 2);
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&a.inv()), m.unit_one());
        prop_assert_eq!(a.inv().mul(&a), m.unit_one());
    }

    #[test]
    fn reduction_is_multiplicative(seed in any::<u64>(), n in 0usize..=2) {
        let m = model(n);
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = random_truncated_unit(&mut r, &m, 2);
        let b = random_truncated_unit(&mut r, &m, 2);
        let (ra, rb) = (m.reduce_unit(&a).unwrap(), m.reduce_unit(&b).unwrap());
        prop_assert_eq!(m.reduce_unit(&a.mul(&b)).unwrap(), ra.mul(&rb));
        prop_assert_eq!(m.reduce_unit(&a.inv()).unwrap(), ra.inv().unwrap());
    }
}
