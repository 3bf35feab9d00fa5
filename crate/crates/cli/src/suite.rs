//! The acceptance suite behind `brauer selftest` and the `acceptance` test.
//!
//! Each criterion draws from its own ChaCha stream, so a criterion's result
//! depends only on the seed and its id.

use std::time::{Duration, Instant};

use brauer_core::brauer::{
    brdim_report, filtration_level, hilbert_specialize, index_bounds, normal_form, rho0_extract,
    rho0_forward, splitting_field, BrauerClass, HilbertTable, Level,
};
use brauer_core::cdvf::CdvfModel;
use brauer_core::differentials::{
    d, kernel_decompose, kernel_expand, lemma16_lower_bound, pullback_omega2, restrict_omega2,
    wedge,
};
use brauer_core::milnor::{h2p, k2_is_zero, k2_restrict, SymbolSum};
use brauer_core::sampling::{
    random_br1_class, random_dependent_pair, random_graded0, random_nonzero_ratfunc,
    random_odd_points, random_omega1, random_quadratic_radical, random_symbol_sum,
    random_truncated_unit,
};
use brauer_core::{Embedding, FieldDescriptor, RatFunc};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Failure messages kept per criterion; the count is always exact.
const KEPT_FAILURES: usize = 5;

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub failed: usize,
    pub failures: Vec<String>,
    pub elapsed: Duration,
    pub limit: Option<Duration>,
}

impl Outcome {
    /// One summary line, free of timing so that reports stay reproducible.
    pub fn line(&self) -> String {
        format!(
            "{} [{:>2}] {}: {} cases, {} failed",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.cases,
            self.failed
        )
    }
}

#[derive(Default)]
struct Tally {
    cases: usize,
    failed: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(what());
            }
        }
    }

    /// Records an error as a failed case.
    fn fail(&mut self, what: String) {
        self.check(false, || what);
    }
}

pub struct Criterion {
    pub id: u32,
    pub title: &'static str,
    pub limit: Option<Duration>,
    run: fn(&mut ChaCha8Rng, &mut Tally),
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: 1,
            title: "k2 vanishing: dependent pairs are zero, basis pairs are not",
            limit: Some(Duration::from_secs(10)),
            run: k2_decision,
        },
        Criterion {
            id: 2,
            title: "k2 dies after adjoining p-th roots of t1..t(n-1)",
            limit: Some(Duration::from_secs(10)),
            run: k2_root_restriction,
        },
        Criterion {
            id: 3,
            title: "forms killed by the root of t1 decompose as dt1 ^ f",
            limit: None,
            run: kernel_completeness,
        },
        Criterion {
            id: 4,
            title: "paired form survives quadratic radicals, lower bound m = 2",
            limit: None,
            run: paired_form_survives,
        },
        Criterion {
            id: 5,
            title: "unit layers reconstruct modulo pi^3",
            limit: None,
            run: unit_layers,
        },
        Criterion {
            id: 6,
            title: "graded-0 datum survives forward and extract",
            limit: None,
            run: graded_zero_roundtrip,
        },
        Criterion {
            id: 7,
            title: "normal forms of br_1 classes agree with the 2-adic oracle",
            limit: Some(Duration::from_secs(60)),
            run: normal_forms,
        },
        Criterion {
            id: 8,
            title: "exact index of paired classes and Brauer dimension intervals",
            limit: None,
            run: index_exactness,
        },
        Criterion {
            id: 9,
            title: "splitting field degrees and generator pattern",
            limit: None,
            run: splitting_degrees,
        },
        Criterion {
            id: 10,
            title: "2-adic Hilbert table is bilinear, symmetric, (x, -x) = 1",
            limit: None,
            run: hilbert_consistency,
        },
    ]
}

pub fn run_criterion(c: &Criterion, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(c.id as u64);
    let mut tally = Tally::default();
    let start = Instant::now();
    (c.run)(&mut rng, &mut tally);
    let elapsed = start.elapsed();
    let in_time = c.limit.is_none_or(|l| elapsed < l);
    if !in_time {
        tally.failures.push(format!(
            "took {:.1}s, limit {:.0}s",
            elapsed.as_secs_f64(),
            c.limit.expect("checked").as_secs_f64()
        ));
    }
    Outcome {
        id: c.id,
        title: c.title,
        passed: tally.failed == 0 && in_time && tally.cases > 0,
        cases: tally.cases,
        failed: tally.failed,
        failures: tally.failures,
        elapsed,
        limit: c.limit,
    }
}

pub fn run_all(seed: u64) -> Vec<Outcome> {
    criteria().iter().map(|c| run_criterion(c, seed)).collect()
}

fn field(p: u32, n: usize) -> FieldDescriptor {
    FieldDescriptor::standard(p, n).expect("standard fields are valid")
}

fn model(n: usize) -> CdvfModel {
    CdvfModel::new(field(2, n)).expect("p = 2 models exist")
}

fn k2_decision(rng: &mut ChaCha8Rng, t: &mut Tally) {
    for p in [2, 3] {
        for n in 1..=3 {
            for _ in 0..34 {
                let (a, b) = random_dependent_pair(rng, n, p, 2);
                let s = SymbolSum::single(a, b);
                let zero = k2_is_zero(&s, n, p) && h2p(&s, n, p).is_ok_and(|f| f.is_zero());
                t.check(zero, || format!("dependent pair reported nonzero: {s:?}"));
            }
        }
    }
    // (t_i g^p, t_j h^p) equals (t_i, t_j) modulo p-th multiples
    for p in [2, 3] {
        for n in 2..=3 {
            let k = field(p, n);
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    for twisted in [false, true, true, true] {
                        let (mut a, mut b) = (k.var(i), k.var(j));
                        if twisted {
                            a = a.mul(&random_nonzero_ratfunc(rng, n, p, 2).frobenius());
                            b = b.mul(&random_nonzero_ratfunc(rng, n, p, 2).frobenius());
                        }
                        let s = SymbolSum::single(a, b);
                        let nonzero = !k2_is_zero(&s, n, p);
                        t.check(nonzero, || format!("basis pair reported zero: {s:?}"));
                    }
                }
            }
        }
    }
}

fn k2_root_restriction(rng: &mut ChaCha8Rng, t: &mut Tally) {
    for p in [2, 3] {
        for n in 2..=3 {
            let k = field(p, n);
            let roots: Vec<(usize, u32)> = (0..n - 1).map(|j| (j, 1)).collect();
            let e = Embedding::adjoin_roots(&k, &roots).expect("valid roots");
            for _ in 0..25 {
                let s = random_symbol_sum(rng, n, p, 3, 2);
                let r = k2_restrict(&s, &e);
                t.check(k2_is_zero(&r, n, p), || {
                    format!("restriction survives: {s:?}")
                });
            }
        }
    }
}

fn kernel_completeness(rng: &mut ChaCha8Rng, t: &mut Tally) {
    let k = field(2, 3);
    let t1 = k.var(0);
    let e = Embedding::adjoin_roots(&k, &[(0, 1)]).expect("valid root");
    for _ in 0..100 {
        let a = wedge(&d(&t1), &random_omega1(rng, 3, 2, 2));
        if !restrict_omega2(&a, &e).is_zero() {
            t.fail(format!("form does not vanish over the root field: {a:?}"));
            continue;
        }
        let gens = [t1.clone()];
        match kernel_decompose(&a, &gens) {
            Ok(Some(parts)) => {
                let ok = kernel_expand(&gens, &parts, 3, 2) == a;
                t.check(ok, || format!("decomposition does not reconstruct {a:?}"));
            }
            Ok(None) => t.fail(format!("no decomposition for {a:?}")),
            Err(e) => t.fail(format!("{e}")),
        }
    }
}

fn paired_form_survives(rng: &mut ChaCha8Rng, t: &mut Tally) {
    let k = field(2, 4);
    let gens: Vec<RatFunc> = (0..4).map(|j| k.var(j)).collect();
    let a = wedge(&d(&gens[0]), &d(&gens[1])).add(&wedge(&d(&gens[2]), &d(&gens[3])));
    for _ in 0..50 {
        match random_quadratic_radical(rng, &k) {
            Ok((g, shear, root)) => {
                let r = restrict_omega2(&pullback_omega2(&a, &shear), &root);
                t.check(!r.is_zero(), || {
                    format!("form dies over the root field of {g:?}")
                });
            }
            Err(e) => t.fail(format!("{e}")),
        }
    }
    let m = lemma16_lower_bound(&[k.one(), k.one()], &gens);
    t.check(m == Ok(2), || format!("lower bound returned {m:?}"));
}

fn unit_layers(rng: &mut ChaCha8Rng, t: &mut Tally) {
    for n in 0..=2 {
        let m = model(n);
        t.check(m.precision() == 3, || {
            format!("precision {} for n = {n}", m.precision())
        });
        for _ in 0..67 {
            let u = random_truncated_unit(rng, &m, 2);
            let ok = m
                .unit_layers(&u)
                .and_then(|l| m.reconstruct(&l))
                .is_ok_and(|v| v == u);
            t.check(ok, || format!("unit does not reconstruct: {u:?}"));
        }
    }
    // 3 = 1 (1 + 2), 7 = 1 (1 + 2)(1 + 4), t + 2 = t (1 + 2/t)
    let m0 = model(0);
    let m1 = model(1);
    let k0 = m0.residue().clone();
    let k1 = m1.residue().clone();
    let tt = k1.var(0);
    let examples = [
        (&m0, vec![(vec![], 3)], vec![k0.one(), k0.one(), k0.zero()]),
        (&m0, vec![(vec![], 7)], vec![k0.one(), k0.one(), k0.one()]),
        (
            &m1,
            vec![(vec![1], 1), (vec![0], 2)],
            vec![tt.clone(), tt.inv().expect("t is nonzero"), k1.zero()],
        ),
    ];
    for (m, terms, expected) in examples {
        let ok = m
            .from_integer_terms(&terms, &[(vec![0; m.nvars()], 1)])
            .and_then(|x| m.unit_layers(&x.unit))
            .is_ok_and(|l| {
                l.residue == expected[0] && l.layer(1) == expected[1] && l.layer(2) == expected[2]
            });
        t.check(ok, || {
            format!("layers of {terms:?} differ from {expected:?}")
        });
    }
}

fn graded_zero_roundtrip(rng: &mut ChaCha8Rng, t: &mut Tally) {
    for n in 0..=2 {
        let m = model(n);
        for _ in 0..34 {
            let d0 = random_graded0(rng, n, 2);
            let ok = rho0_forward(&d0, &m)
                .and_then(|c| rho0_extract(&c))
                .and_then(|back| back.equivalent(&d0));
            t.check(ok == Ok(true), || {
                format!("roundtrip failed ({ok:?}) on {d0:?}")
            });
        }
    }
}

fn normal_forms(rng: &mut ChaCha8Rng, t: &mut Tally) {
    let table = HilbertTable::new();
    for n in 0..=2 {
        let m = model(n);
        for _ in 0..34 {
            let c = match random_br1_class(rng, &m) {
                Ok(c) => c,
                Err(e) => {
                    t.fail(format!("sampling failed: {e}"));
                    continue;
                }
            };
            let points = random_odd_points(rng, n, 20);
            t.check(check_normal_form(&c, &points, &table).is_ok(), || {
                format!(
                    "{}: {}",
                    c.format(),
                    check_normal_form(&c, &points, &table).unwrap_err()
                )
            });
        }
    }
}

fn check_normal_form(
    c: &BrauerClass,
    points: &[Vec<u64>],
    table: &HilbertTable,
) -> Result<(), String> {
    let m = c.model();
    let nf = normal_form(c).map_err(|e| e.to_string())?;
    if nf.sweeps > 2 {
        return Err(format!("{} sweeps", nf.sweeps));
    }
    let nf_class = nf.to_class(m);
    let level = filtration_level(&c.plus(&nf_class.negated())).map_err(|e| e.to_string())?;
    if level != Level::Infinite {
        return Err(format!("difference sits at {level:?}"));
    }
    if points.len() < 20 {
        return Err(format!("only {} specializations", points.len()));
    }
    for x in points {
        let a = hilbert_specialize(c, x, table).map_err(|e| e.to_string())?;
        let b = hilbert_specialize(&nf_class, x, table).map_err(|e| e.to_string())?;
        if a != b {
            return Err(format!("Hilbert symbols {a} and {b} at {x:?}"));
        }
    }
    Ok(())
}

fn basis_class(m: &CdvfModel, pairs: &[(usize, usize)]) -> BrauerClass {
    let k = m.residue();
    let lift = |j: usize| m.from_residue(&k.var(j)).expect("variables lift");
    let mut c = BrauerClass::new(m.clone());
    for &(i, j) in pairs {
        c.push(lift(i), lift(j));
    }
    c
}

fn index_exactness(_: &mut ChaCha8Rng, t: &mut Tally) {
    for (n, pairs, exp) in [(2, vec![(0, 1)], 1), (4, vec![(0, 1), (2, 3)], 2)] {
        let b = index_bounds(&basis_class(&model(n), &pairs));
        let ok = b
            .as_ref()
            .is_ok_and(|b| b.lower_exp == exp && b.upper_exp == exp);
        t.check(ok, || {
            format!("n = {n}: expected exponent {exp}, got {b:?}")
        });
    }
    for (n, lo, hi) in [(0, 0, 1), (1, 1, 2), (4, 2, 8)] {
        let r = brdim_report(&model(n));
        let ok = r.as_ref().is_ok_and(|r| (r.lower, r.upper) == (lo, hi));
        t.check(ok, || format!("n = {n}: expected [{lo}, {hi}], got {r:?}"));
    }
}

fn splitting_degrees(_: &mut ChaCha8Rng, t: &mut Tally) {
    for (n, degree) in [(0, 2), (1, 4), (2, 16)] {
        let m = model(n);
        let k = m.residue();
        let mut expected = Vec::new();
        for j in 0..n {
            let root = if j + 1 < n { 4 } else { 2 };
            expected.push((m.from_residue(&k.var(j)).expect("variables lift"), root));
        }
        expected.push((m.pi(), 2));
        let s = splitting_field(&BrauerClass::new(m.clone()));
        let ok = s.as_ref().is_ok_and(|s| {
            s.degree == degree
                && s.generators.len() == expected.len()
                && s.generators
                    .iter()
                    .zip(&expected)
                    .all(|(g, (x, r))| g.radicand == *x && g.root_degree == *r)
        });
        t.check(ok, || format!("n = {n}: got {s:?}"));
    }
}

/// `(-1)^(ε(u) ε(v) + α ω(v) + β ω(u))` for `a = 2^α u`, `b = 2^β v`.
fn closed_form(a: i64, b: i64) -> i8 {
    let split = |x: i64| {
        let v = x.trailing_zeros() as i64;
        (v, (x >> v).rem_euclid(8))
    };
    let ((alpha, u), (beta, v)) = (split(a), split(b));
    let eps = |x: i64| ((x - 1) / 2) % 2;
    let omega = |x: i64| ((x * x - 1) / 8) % 2;
    let e = eps(u) * eps(v) + (alpha % 2) * omega(v) + (beta % 2) * omega(u);
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

fn hilbert_consistency(_: &mut ChaCha8Rng, t: &mut Tally) {
    let table = HilbertTable::new();
    let mut values: Vec<i64> = vec![-1, 2, -2];
    values.extend((1..=31).step_by(2));
    let h = |a: i64, b: i64| table.integers(a, b).expect("nonzero integers");
    for &a in &values {
        t.check(h(a, -a) == 1, || format!("({a}, {}) != 1", -a));
        for &b in &values {
            t.check(h(a, b) == h(b, a), || {
                format!("({a}, {b}) is not symmetric")
            });
            t.check(h(a, b) == closed_form(a, b), || {
                format!("({a}, {b}) disagrees with the closed formula")
            });
            for &c in &values {
                t.check(h(a * c, b) == h(a, b) * h(c, b), || {
                    format!("({a} * {c}, {b}) is not multiplicative")
                });
            }
        }
    }
}
