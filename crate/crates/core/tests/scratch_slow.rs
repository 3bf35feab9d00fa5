use brauer_core::milnor::{k2_is_zero, SymbolSum};
use brauer_core::sampling::random_dependent_pair;
use rand::SeedableRng;
#[test]
fn scratch() {
    for p in [2u32, 3, 5] {
        for seed in 0..400u64 {
            let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let t = std::time::Instant::now();
            let (a, b) = random_dependent_pair(&mut r, 3, p, 2);
            let gen = t.elapsed().as_millis();
            let _ = k2_is_zero(&SymbolSum::single(a.clone(), b.clone()), 3, p);
            let el = t.elapsed().as_millis();
            if el > 1000 {
                println!("p={p} seed={seed} gen {gen}ms total {el}ms\n a={:?}\n b num terms {} deg {} den terms {} deg {}", a, b.num().num_terms(), b.num().total_degree(), b.den().num_terms(), b.den().total_degree());
                return;
            }
        }
    }
}
