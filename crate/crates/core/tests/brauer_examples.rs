use brauer_core::brauer::*;
use brauer_core::cdvf::{CdvfElement, CdvfModel};
use brauer_core::differentials::Omega1Form;
use brauer_core::milnor::SymbolSum;
use brauer_core::{FieldDescriptor, RatFunc};

fn model(n: usize) -> CdvfModel {
    CdvfModel::new(FieldDescriptor::standard(2, n).unwrap()).unwrap()
}

fn int(m: &CdvfModel, c: i128) -> CdvfElement {
    m.from_integer_terms(&[(vec![0; m.nvars()], c)], &[(vec![0; m.nvars()], 1)])
        .unwrap()
}

/// `c * t_1^e_1 ... t_n^e_n`.
fn mono(m: &CdvfModel, c: i128, exps: &[u32]) -> CdvfElement {
    m.from_integer_terms(&[(exps.to_vec(), c)], &[(vec![0; m.nvars()], 1)])
        .unwrap()
}

fn var(m: &CdvfModel, j: usize) -> CdvfElement {
    let mut e = vec![0; m.nvars()];
    e[j] = 1;
    mono(m, 1, &e)
}

fn class(m: &CdvfModel, entries: Vec<(CdvfElement, CdvfElement)>) -> BrauerClass {
    BrauerClass::from_entries(m.clone(), entries)
}

fn t(n: usize, j: usize) -> RatFunc {
    RatFunc::var(n, 2, j)
}

#[test]
fn rho0_extract_reads_uniformizer_part() {
    let m = model(1);
    let d = rho0_extract(&class(&m, vec![(int(&m, 2), var(&m, 0))])).unwrap();
    assert!(d.k2_part.is_empty());
    let expected = GradedDatum0 {
        k2_part: SymbolSum::new(),
        unit_class: t(1, 0),
    };
    assert!(d.equivalent(&expected).unwrap());

    let m0 = model(0);
    let d = rho0_extract(&class(&m0, vec![(int(&m0, 2), int(&m0, 2))])).unwrap();
    assert!(d.is_trivial());
}

#[test]
fn rho0_roundtrip_on_symbol() {
    let m = model(2);
    let d = GradedDatum0 {
        k2_part: SymbolSum::single(t(2, 0), t(2, 1)),
        unit_class: t(2, 0),
    };
    let c = rho0_forward(&d, &m).unwrap();
    assert_eq!(c.symbol_count(), 2);
    assert!(rho0_extract(&c).unwrap().equivalent(&d).unwrap());
}

#[test]
fn rhoi_examples() {
    let m = model(1);
    let dt = Omega1Form::basis(1, 2, 0);
    let fwd = rhoi_forward(
        &GradedDatumI {
            level: 1,
            form: dt.clone(),
            scalar: RatFunc::zero(1, 2),
        },
        &m,
    )
    .unwrap();
    let back = rhoi_extract(&fwd, 1).unwrap();
    assert_eq!(back.form, dt);
    assert!(back.scalar.is_zero());

    let three_t = class(&m, vec![(int(&m, 3), var(&m, 0))]);
    let d = rhoi_extract(&three_t, 1).unwrap();
    let dlog_t = dt.scale(&t(1, 0).inv().unwrap());
    assert_eq!(d.form, dlog_t);

    let m0 = model(0);
    let c = rhoi_forward(
        &GradedDatumI {
            level: 2,
            form: Omega1Form::zero(0, 2),
            scalar: RatFunc::one(0, 2),
        },
        &m0,
    )
    .unwrap();
    assert_eq!(c.entries()[0].1, int(&m0, 5));
    assert!(rhoi_forward(
        &GradedDatumI {
            level: 3,
            form: Omega1Form::zero(0, 2),
            scalar: RatFunc::one(0, 2),
        },
        &m0,
    )
    .is_err());
}

#[test]
fn filtration_examples() {
    let m2 = model(2);
    let c = class(&m2, vec![(var(&m2, 0), var(&m2, 1))]);
    assert_eq!(
        filtration_level(&c).unwrap(),
        Level::Finite {
            level: 0,
            exact: true
        }
    );
    let m1 = model(1);
    let c = class(&m1, vec![(int(&m1, 3), var(&m1, 0))]);
    assert!(matches!(
        filtration_level(&c).unwrap(),
        Level::Finite { level: 1, .. }
    ));
    assert_eq!(
        filtration_level(&BrauerClass::new(m1)).unwrap(),
        Level::Infinite
    );
}

#[test]
fn normal_form_examples() {
    let table = HilbertTable::new();
    let m0 = model(0);
    let c = class(&m0, vec![(int(&m0, 2), int(&m0, 5))]);
    let nf = normal_form(&c).unwrap();
    assert!(nf.difference_vanishes);
    assert_eq!(
        hilbert_specialize(&nf.to_class(&m0), &[], &table).unwrap(),
        -1
    );
    assert_eq!(nf.pi_coeff, int(&m0, 5).unit);

    let m1 = model(1);
    let c = class(&m1, vec![(mono(&m1, 3, &[1]), mono(&m1, 2, &[1]))]);
    assert!(matches!(
        normal_form(&c),
        Err(brauer_core::Error::NotInBr1(_))
    ));

    let c = class(&m1, vec![(mono(&m1, 5, &[2]), int(&m1, 3))]);
    let nf = normal_form(&c).unwrap();
    assert_eq!(nf.lambdas[0], m1.unit_one());
    assert_eq!(nf.pi_coeff, m1.unit_one());
}

#[test]
fn base_change_examples() {
    let m1 = model(1);
    let r = lemma21_reduce(&class(&m1, vec![(m1.pi(), var(&m1, 0))])).unwrap();
    assert_eq!(r.unit, var(&m1, 0).unit);
    assert!(r.reduced_in_br1);
    assert_eq!(filtration_level(&r.reduced).unwrap(), Level::Infinite);

    let m2 = model(2);
    let r = lemma21_reduce(&class(&m2, vec![(var(&m2, 0), var(&m2, 1))])).unwrap();
    assert_eq!(r.unit, m2.unit_one());
    assert!(r.reduced_in_br1);
    assert_eq!(r.base_change.degree(), 2);

    let r = lemma21_reduce(&class(
        &m2,
        vec![(var(&m2, 0), var(&m2, 1)), (m2.pi(), int(&m2, 5))],
    ))
    .unwrap();
    assert_eq!(r.unit, m2.unit_one());
    assert!(r.reduced_in_br1);
}

#[test]
fn splitting_field_examples() {
    for (n, degree, roots) in [(0, 2, vec![2]), (1, 4, vec![2, 2]), (2, 16, vec![4, 2, 2])] {
        let m = model(n);
        let s = splitting_field(&BrauerClass::new(m)).unwrap();
        assert_eq!(s.degree, degree);
        let got: Vec<u64> = s.generators.iter().map(|g| g.root_degree).collect();
        assert_eq!(got, roots);
    }
}

#[test]
fn index_bounds_examples() {
    let m2 = model(2);
    let b = index_bounds(&class(&m2, vec![(var(&m2, 0), var(&m2, 1))])).unwrap();
    assert_eq!((b.lower_exp, b.upper_exp), (1, 1));
    let m4 = model(4);
    let b = index_bounds(&class(
        &m4,
        vec![(var(&m4, 0), var(&m4, 1)), (var(&m4, 2), var(&m4, 3))],
    ))
    .unwrap();
    assert_eq!((b.lower_exp, b.upper_exp), (2, 2));
    let b = index_bounds(&BrauerClass::new(m4)).unwrap();
    assert_eq!((b.lower_exp, b.upper_exp), (0, 0));

    // over Q_2 the Hilbert symbol settles the index
    let m0 = model(0);
    for (a, b, e) in [(2, 5, 1), (3, 5, 0), (-1, -1, 1), (2, 7, 0)] {
        let got = index_bounds(&class(&m0, vec![(int(&m0, a), int(&m0, b))])).unwrap();
        assert_eq!((got.lower_exp, got.upper_exp), (e, e), "({a}, {b})");
    }
}

#[test]
fn brdim_examples() {
    for (n, lo, hi) in [(0, 0, 1), (1, 1, 2), (4, 2, 8)] {
        let r = brdim_report(&model(n)).unwrap();
        assert_eq!((r.lower, r.upper), (lo, hi), "n = {n}");
    }
    assert_eq!(period_power_bound(2, 3), 6);
    assert_eq!(period_power_bound(0, 5), 0);
    assert_eq!(period_power_bound(1, 1), 1);
}

#[test]
fn hilbert_examples() {
    let table = HilbertTable::new();
    let m0 = model(0);
    let c = class(&m0, vec![(int(&m0, 2), int(&m0, 5))]);
    assert_eq!(hilbert_specialize(&c, &[], &table).unwrap(), -1);
    let m1 = model(1);
    let c = class(&m1, vec![(var(&m1, 0), int(&m1, 2))]);
    assert_eq!(hilbert_specialize(&c, &[5], &table).unwrap(), -1);
    assert_eq!(hilbert_specialize(&c, &[7], &table).unwrap(), 1);
    assert!(hilbert_specialize(&c, &[4], &table).is_err());
}

/// `(2^α u, 2^β v)_2 = (-1)^(ε(u) ε(v) + α ω(v) + β ω(u))` with
/// `ε(u) = (u - 1) / 2` and `ω(u) = (u^2 - 1) / 8`.
fn closed_form_hilbert(alpha: i64, u: u64, beta: i64, v: u64) -> i8 {
    let eps = |x: u64| ((x - 1) / 2) % 2;
    let omega = |x: u64| ((x * x - 1) / 8) % 2;
    let e = eps(u) * eps(v) + (alpha as u64 % 2) * omega(v) + (beta as u64 % 2) * omega(u);
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[test]
fn hilbert_table_matches_closed_form() {
    let table = HilbertTable::new();
    for alpha in 0..2 {
        for beta in 0..2 {
            for u in [1u64, 3, 5, 7] {
                for v in [1u64, 3, 5, 7] {
                    assert_eq!(
                        table.symbol(alpha, u, beta, v),
                        closed_form_hilbert(alpha, u, beta, v),
                        "({alpha}, {u}, {beta}, {v})"
                    );
                }
            }
        }
    }
}

#[test]
fn more_graded_examples() {
    let m = model(1);
    let d = rhoi_extract(&class(&m, vec![(int(&m, 5), var(&m, 0))]), 2).unwrap();
    assert_eq!(
        d.form,
        Omega1Form::basis(1, 2, 0).scale(&t(1, 0).inv().unwrap())
    );
    assert!(d.scalar.is_zero());

    let tt = GradedDatum0 {
        k2_part: SymbolSum::single(t(1, 0), t(1, 0)),
        unit_class: RatFunc::one(1, 2),
    };
    let c = rho0_forward(&tt, &m).unwrap();
    assert!(rho0_extract(&c).unwrap().is_trivial());
    assert!(rho0_forward(
        &GradedDatum0 {
            k2_part: SymbolSum::new(),
            unit_class: RatFunc::one(1, 2)
        },
        &m
    )
    .unwrap()
    .is_empty());
}
