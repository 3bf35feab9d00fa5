use brauer_core::brauer::*;
use brauer_core::cdvf::CdvfModel;
use brauer_core::sampling::{
    random_br1_class, random_graded0, random_graded_i, random_odd_points, random_odd_unit,
};
use brauer_core::FieldDescriptor;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn model(n: usize) -> CdvfModel {
    CdvfModel::new(FieldDescriptor::standard(2, n).unwrap()).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn above(level: Level, i: usize) -> bool {
    match level {
        Level::Infinite => true,
        Level::Finite { level, .. } => level > i,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn graded_zero_roundtrip(seed in any::<u64>(), n in 0usize..=3) {
        let m = model(n);
        let d = random_graded0(&mut rng(seed), n, 2);
        let c = rho0_forward(&d, &m).unwrap();
        prop_assert!(rho0_extract(&c).unwrap().equivalent(&d).unwrap());
    }

    #[test]
    fn positive_levels_are_consistent(seed in any::<u64>(), n in 0usize..=2, level in 1usize..=2) {
        let m = model(n);
        let d = random_graded_i(&mut rng(seed), n, level, 1);
        let c = rhoi_forward(&d, &m).unwrap();
        prop_assert!(above(filtration_level(&c).unwrap(), level - 1));
        let back = rhoi_extract(&c, level).unwrap();
        let rest = c.plus(&rhoi_forward(&back, &m).unwrap().negated());
        prop_assert!(above(filtration_level(&rest).unwrap(), level));
    }

    #[test]
    fn normal_forms_are_sound(seed in any::<u64>(), n in 0usize..=2) {
        let m = model(n);
        let table = HilbertTable::new();
        let mut r = rng(seed);
        let c = random_br1_class(&mut r, &m).unwrap();
        let nf = normal_form(&c).unwrap();
        prop_assert!(nf.sweeps <= m.top_level());
        prop_assert!(nf.difference_vanishes);
        let shape = nf.to_class(&m);
        prop_assert_eq!(
            filtration_level(&c.plus(&shape.negated())).unwrap(),
            Level::Infinite
        );
        for point in random_odd_points(&mut r, n, 20) {
            prop_assert_eq!(
                hilbert_specialize(&c, &point, &table).unwrap(),
                hilbert_specialize(&shape, &point, &table).unwrap()
            );
        }
    }

    #[test]
    fn squares_drop_out(seed in any::<u64>(), n in 0usize..=2) {
        let m = model(n);
        let table = HilbertTable::new();
        let mut r = rng(seed);
        let x = m.element(r.gen_range(-1..=1), random_odd_unit(&mut r, &m, 1));
        let y = m.element(r.gen_range(-1..=1), random_odd_unit(&mut r, &m, 1));
        let z = m.element(r.gen_range(-1..=1), random_odd_unit(&mut r, &m, 1));
        let plain = BrauerClass::from_entries(m.clone(), vec![(x.clone(), z.clone())]);
        let padded = BrauerClass::from_entries(m.clone(), vec![(x, y.mul(&y).mul(&z))]);
        prop_assert!(rho0_extract(&plain)
            .unwrap()
            .equivalent(&rho0_extract(&padded).unwrap())
            .unwrap());
        for point in random_odd_points(&mut r, n, 20) {
            prop_assert_eq!(
                hilbert_specialize(&plain, &point, &table).unwrap(),
                hilbert_specialize(&padded, &point, &table).unwrap()
            );
        }
    }
}
