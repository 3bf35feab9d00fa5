//! Random generators for the property suites.
//!
//! Everything fed to the Brauer layer is "odd": numerators and denominators
//! are odd at the all-ones point. Over `F_2` that is the parity of the
//! coefficient sum, which is also the parity at every odd integer point, so
//! specializations of such data never hit an even denominator.

use alloc::vec::Vec;

use rand::Rng;

use crate::brauer::{rhoi_forward, BrauerClass, GradedDatum0, GradedDatumI};
use crate::cdvf::{CdvfElement, CdvfModel, TruncatedUnit};
use crate::differentials::{Omega1Form, Omega2Form};
use crate::error::Result;
use crate::field::{Embedding, FieldDescriptor, Substitution};
use crate::milnor::SymbolSum;
use crate::poly::{Monomial, Poly};
use crate::ratfunc::RatFunc;

/// Up to `max_terms` monomials of total degree `<= max_deg`, coefficients mod `modulus`.
pub fn random_poly<R: Rng + ?Sized>(
    rng: &mut R,
    nvars: usize,
    modulus: u32,
    max_deg: u32,
    max_terms: usize,
) -> Poly {
    let mut f = Poly::zero(nvars, modulus);
    let count = rng.gen_range(0..=max_terms);
    for _ in 0..count {
        let mut exps = alloc::vec![0u32; nvars];
        let mut budget = rng.gen_range(0..=max_deg);
        while budget > 0 && nvars > 0 {
            exps[rng.gen_range(0..nvars)] += 1;
            budget -= 1;
        }
        let c = rng.gen_range(1..modulus.max(2));
        f = f.add(&Poly::monomial(Monomial::new(exps), modulus, c));
    }
    f
}

fn nonzero_poly<R: Rng + ?Sized>(rng: &mut R, nvars: usize, p: u32, max_deg: u32) -> Poly {
    loop {
        let f = random_poly(rng, nvars, p, max_deg, 3);
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn random_ratfunc<R: Rng + ?Sized>(rng: &mut R, nvars: usize, p: u32, max_deg: u32) -> RatFunc {
    let num = random_poly(rng, nvars, p, max_deg, 3);
    let den = nonzero_poly(rng, nvars, p, max_deg);
    RatFunc::new(num, den).expect("nonzero denominator")
}

pub fn random_nonzero_ratfunc<R: Rng + ?Sized>(
    rng: &mut R,
    nvars: usize,
    p: u32,
    max_deg: u32,
) -> RatFunc {
    let num = nonzero_poly(rng, nvars, p, max_deg);
    let den = nonzero_poly(rng, nvars, p, max_deg);
    RatFunc::new(num, den).expect("nonzero denominator")
}

fn odd_poly<R: Rng + ?Sized>(rng: &mut R, nvars: usize, max_deg: u32) -> Poly {
    let f = random_poly(rng, nvars, 2, max_deg, 3);
    if f.terms().map(|(_, c)| c).sum::<u32>() % 2 == 1 {
        f
    } else {
        f.add(&Poly::one(nvars, 2))
    }
}

/// A nonzero element of `F_2(t)` whose parts are odd at the all-ones point.
pub fn random_odd_ratfunc<R: Rng + ?Sized>(rng: &mut R, nvars: usize, max_deg: u32) -> RatFunc {
    let num = odd_poly(rng, nvars, max_deg);
    let den = odd_poly(rng, nvars, max_deg);
    RatFunc::new(num, den).expect("odd polynomials are nonzero")
}

/// Zero, or an odd rational function.
fn odd_or_zero<R: Rng + ?Sized>(rng: &mut R, nvars: usize, max_deg: u32) -> RatFunc {
    if rng.gen_bool(0.3) {
        RatFunc::zero(nvars, 2)
    } else {
        random_odd_ratfunc(rng, nvars, max_deg)
    }
}

/// `(a, b)` with `b = Σ_{i<=2} λ_i^p a^i`, so the pair is p-dependent.
pub fn random_dependent_pair<R: Rng + ?Sized>(
    rng: &mut R,
    nvars: usize,
    p: u32,
    max_deg: u32,
) -> (RatFunc, RatFunc) {
    loop {
        let a = random_nonzero_ratfunc(rng, nvars, p, max_deg);
        let mut b = RatFunc::zero(nvars, p);
        let mut power = RatFunc::one(nvars, p);
        for _ in 0..3 {
            let lambda = random_ratfunc(rng, nvars, p, 1);
            b = b.add(&lambda.frobenius().mul(&power));
            power = power.mul(&a);
        }
        if !b.is_zero() {
            return (a, b);
        }
    }
}

pub fn random_symbol_sum<R: Rng + ?Sized>(
    rng: &mut R,
    nvars: usize,
    p: u32,
    max_len: usize,
    max_deg: u32,
) -> SymbolSum {
    let mut s = SymbolSum::new();
    for _ in 0..rng.gen_range(1..=max_len) {
        s.push(
            random_nonzero_ratfunc(rng, nvars, p, max_deg),
            random_nonzero_ratfunc(rng, nvars, p, max_deg),
        );
    }
    s
}

pub fn random_omega1<R: Rng + ?Sized>(
    rng: &mut R,
    nvars: usize,
    p: u32,
    max_deg: u32,
) -> Omega1Form {
    let coords = (0..nvars)
        .map(|_| random_ratfunc(rng, nvars, p, max_deg))
        .collect();
    Omega1Form::from_coords(nvars, p, coords).expect("coordinate count matches")
}

pub fn random_omega2<R: Rng + ?Sized>(
    rng: &mut R,
    nvars: usize,
    p: u32,
    max_deg: u32,
) -> Omega2Form {
    let mut a = Omega2Form::zero(nvars, p);
    for i in 0..nvars {
        for j in i + 1..nvars {
            a.add_to(i, j, &random_ratfunc(rng, nvars, p, max_deg));
        }
    }
    a
}

/// Random unit of the model ring, `num / den` with both parts nonzero mod `p`.
pub fn random_truncated_unit<R: Rng + ?Sized>(
    rng: &mut R,
    model: &CdvfModel,
    max_deg: u32,
) -> TruncatedUnit {
    let (n, m, p) = (model.nvars(), model.modulus(), model.p());
    loop {
        let num = random_poly(rng, n, m, max_deg, 3);
        let den = random_poly(rng, n, m, max_deg, 3);
        if !num.reduce_mod(p).is_zero() && !den.reduce_mod(p).is_zero() {
            return TruncatedUnit::new(num, den).expect("parts are units");
        }
    }
}

/// A unit `lift(r) (1 + 2 x)` with `r` and `x` odd.
pub fn random_odd_unit<R: Rng + ?Sized>(
    rng: &mut R,
    model: &CdvfModel,
    max_deg: u32,
) -> TruncatedUnit {
    let n = model.nvars();
    let r = model
        .lift_unit(&random_odd_ratfunc(rng, n, max_deg))
        .expect("odd functions are nonzero");
    r.mul(&random_one_unit(rng, model, max_deg))
}

/// `Π_i (1 + x_i π^i)` with each `x_i` zero or odd.
pub fn random_one_unit<R: Rng + ?Sized>(
    rng: &mut R,
    model: &CdvfModel,
    max_deg: u32,
) -> TruncatedUnit {
    let n = model.nvars();
    let mut u = model.unit_one();
    for level in 1..model.precision() {
        let x = odd_or_zero(rng, n, max_deg);
        if !x.is_zero() {
            u = u.mul(&model.one_plus(&x, level));
        }
    }
    u
}

pub fn random_graded0<R: Rng + ?Sized>(rng: &mut R, nvars: usize, max_deg: u32) -> GradedDatum0 {
    let mut k2 = SymbolSum::new();
    for _ in 0..rng.gen_range(0..=2) {
        k2.push(
            random_odd_ratfunc(rng, nvars, max_deg),
            random_odd_ratfunc(rng, nvars, max_deg),
        );
    }
    GradedDatum0 {
        k2_part: k2,
        unit_class: random_odd_ratfunc(rng, nvars, max_deg),
    }
}

/// A datum whose forward image has odd entries: `b_j = coords_j t_j` odd or zero.
pub fn random_graded_i<R: Rng + ?Sized>(
    rng: &mut R,
    nvars: usize,
    level: usize,
    max_deg: u32,
) -> GradedDatumI {
    let coords = (0..nvars)
        .map(|j| {
            odd_or_zero(rng, nvars, max_deg)
                .div(&RatFunc::var(nvars, 2, j))
                .expect("variables are nonzero")
        })
        .collect();
    GradedDatumI {
        level,
        form: Omega1Form::from_coords(nvars, 2, coords).expect("coordinate count matches"),
        scalar: odd_or_zero(rng, nvars, max_deg),
    }
}

fn unit(model: &CdvfModel, u: TruncatedUnit) -> CdvfElement {
    model.element(0, u)
}

fn square(u: &TruncatedUnit) -> TruncatedUnit {
    u.mul(u)
}

/// A class in `br(K)_1` over a `p = 2` model, built from a random mix of
/// families that are known to die in the level-0 graded piece.
pub fn random_br1_class<R: Rng + ?Sized>(rng: &mut R, model: &CdvfModel) -> Result<BrauerClass> {
    let n = model.nvars();
    let mut c = BrauerClass::new(model.clone());
    for _ in 0..rng.gen_range(1..=2) {
        match rng.gen_range(0..6) {
            // a graded datum at a positive level
            0 => {
                let level = rng.gen_range(1..=model.top_level());
                c = c.plus(&rhoi_forward(&random_graded_i(rng, n, level, 1), model)?);
            }
            // (one-unit, anything odd)
            1 => {
                let x = random_one_unit(rng, model, 1);
                let val = rng.gen_range(-1..=1);
                let y = random_odd_unit(rng, model, 1);
                c.push(unit(model, x), model.element(val, y));
            }
            // (π s^2 w, v^2 w') with one-units w, w'
            2 => {
                let s = random_odd_unit(rng, model, 1);
                let v = random_odd_unit(rng, model, 1);
                let x = square(&s).mul(&random_one_unit(rng, model, 1));
                let y = square(&v).mul(&random_one_unit(rng, model, 1));
                c.push(model.element(1, x), unit(model, y));
            }
            // lifted p-dependent residues
            3 => {
                let (a, b) = odd_dependent_pair(rng, n);
                let x = model.lift_unit(&a)?.mul(&random_one_unit(rng, model, 1));
                let y = model.lift_unit(&b)?.mul(&random_one_unit(rng, model, 1));
                c.push(unit(model, x), unit(model, y));
            }
            // twice an arbitrary symbol
            4 => {
                let x = model.element(rng.gen_range(-1..=1), random_odd_unit(rng, model, 1));
                let y = model.element(rng.gen_range(-1..=1), random_odd_unit(rng, model, 1));
                c.push(x.clone(), y.clone());
                c.push(x, y);
            }
            // (r, r) = (r, -1)
            _ => {
                let r = random_odd_unit(rng, model, 1);
                c.push(unit(model, r.clone()), unit(model, r));
            }
        }
    }
    Ok(c)
}

fn odd_dependent_pair<R: Rng + ?Sized>(rng: &mut R, nvars: usize) -> (RatFunc, RatFunc) {
    loop {
        let a = random_odd_ratfunc(rng, nvars, 1);
        let l0 = odd_or_zero(rng, nvars, 1);
        let l1 = odd_or_zero(rng, nvars, 1);
        let b = l0.frobenius().add(&l1.frobenius().mul(&a));
        let (num, den) = b.eval_at_ones();
        if !b.is_zero() && num == 1 && den == 1 {
            return (a, b);
        }
    }
}

/// `count` points with odd coordinates in `[1, 31]`.
pub fn random_odd_points<R: Rng + ?Sized>(
    rng: &mut R,
    nvars: usize,
    count: usize,
) -> Vec<Vec<u64>> {
    (0..count)
        .map(|_| {
            (0..nvars)
                .map(|_| 2 * rng.gen_range(0..16u64) + 1)
                .collect()
        })
        .collect()
}

/// Element of `F_2(t)` with no `t_var`, nonzero when asked.
fn free_of_var<R: Rng + ?Sized>(rng: &mut R, nvars: usize, var: usize, nonzero: bool) -> RatFunc {
    let strip = |f: Poly| {
        Poly::from_terms(
            nvars,
            2,
            f.terms()
                .filter(|(m, _)| m.exps()[var] == 0)
                .map(|(m, c)| (m.exps().to_vec(), c as i64)),
        )
    };
    loop {
        let num = strip(random_poly(rng, nvars, 2, 2, 3));
        let den = strip(random_poly(rng, nvars, 2, 2, 3));
        if den.is_zero() || (nonzero && num.is_zero()) {
            continue;
        }
        return RatFunc::new(num, den).expect("nonzero denominator");
    }
}

/// A quadratic radical extension `κ(√g)` of `κ = F_2(t)`, with
/// `g = c^2 t_k + b` and `b, c` free of `t_k`. It is returned as the
/// automorphism `t_k -> (t_k + b) / c^2`, which carries `g` to `t_k`, followed
/// by the embedding adjoining `√t_k`. Restricting a form to `κ(√g)` is
/// pulling it back along the automorphism, then restricting along the
/// embedding.
pub fn random_quadratic_radical<R: Rng + ?Sized>(
    rng: &mut R,
    field: &FieldDescriptor,
) -> Result<(RatFunc, Substitution, Embedding)> {
    let n = field.nvars();
    let var = rng.gen_range(0..n);
    let b = free_of_var(rng, n, var, false);
    let c = free_of_var(rng, n, var, true);
    let c2 = c.mul(&c);
    let g = c2.mul(&field.var(var)).add(&b);
    let images = (0..n)
        .map(|j| {
            if j == var {
                field.var(j).add(&b).div(&c2)
            } else {
                Ok(field.var(j))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let shear = Substitution::new(n, images)?;
    let root = Embedding::adjoin_roots(field, &[(var, 1)])?;
    Ok((g, shear, root))
}
