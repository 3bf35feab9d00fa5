//! Normal forms `(λ_1, t̃_1) + ... + (λ_n, t̃_n) + (π, λ)` of classes in
//! `br(K)_1`, and the base change that moves an arbitrary class there.

use alloc::format;
use alloc::vec::Vec;

use super::expand::expand;
use super::graded::{datum_from_layers, rho0_extract, GradedDatumI};
use super::BrauerClass;
use crate::cdvf::{CdvfElement, CdvfModel, TruncatedUnit};
use crate::error::{Error, Result};
use crate::field::Embedding;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    /// `λ_1, ..., λ_n`.
    pub lambdas: Vec<TruncatedUnit>,
    /// `λ`.
    pub pi_coeff: TruncatedUnit,
    /// `t̃_1, ..., t̃_n`.
    pub basis_lifts: Vec<TruncatedUnit>,
    /// Graded data consumed at levels `1..=M`.
    pub levels: Vec<GradedDatumI>,
    /// Number of levels that contributed a correction.
    pub sweeps: usize,
    /// `class - normal form` expanded to nothing.
    pub difference_vanishes: bool,
}

impl NormalForm {
    pub fn to_class(&self, model: &CdvfModel) -> BrauerClass {
        let mut c = BrauerClass::new(model.clone());
        for (l, u) in self.lambdas.iter().zip(&self.basis_lifts) {
            c.push(model.element(0, l.clone()), model.element(0, u.clone()));
        }
        c.push(model.pi(), model.element(0, self.pi_coeff.clone()));
        c
    }
}

/// Builds the normal form level by level:
/// `x_j <- x_j (1 + b̃_j π^i)`, `x <- x (1 + ã π^i)` for `i = 1, ..., M`.
pub fn normal_form(c: &BrauerClass) -> Result<NormalForm> {
    let model = c.model();
    let k = model.residue();
    let d0 = rho0_extract(c)?;
    if !d0.is_trivial() {
        let parts: Vec<_> = d0
            .k2_part
            .entries()
            .iter()
            .map(|(a, b)| format!("({}, {})", k.format(a), k.format(b)))
            .collect();
        return Err(Error::NotInBr1(format!(
            "k2 part [{}], unit class {}",
            parts.join(" + "),
            k.format(&d0.unit_class)
        )));
    }
    let exp = expand(c)?;
    if !exp.in_br1() {
        return Err(Error::Mismatch("graded-0 data did not cancel".into()));
    }
    let n = model.nvars();
    let mut lambdas = alloc::vec![model.unit_one(); n];
    let mut pi_coeff = model.unit_one();
    let mut levels = Vec::new();
    let mut sweeps = 0;
    for level in 1..=model.top_level() {
        let (forms, scalar) = exp.layer_datum(level)?;
        let datum = datum_from_layers(model, level, &forms, scalar.clone())?;
        if !datum.is_zero() {
            sweeps = level;
        }
        for (x, b) in lambdas.iter_mut().zip(&forms) {
            if !b.is_zero() {
                *x = x.mul(&model.one_plus(b, level as u32));
            }
        }
        if !scalar.is_zero() {
            pi_coeff = pi_coeff.mul(&model.one_plus(&scalar, level as u32));
        }
        levels.push(datum);
    }
    let basis_lifts = (0..n)
        .map(|j| model.lift_unit(&k.var(j)))
        .collect::<Result<Vec<_>>>()?;
    let mut nf = NormalForm {
        lambdas,
        pi_coeff,
        basis_lifts,
        levels,
        sweeps,
        difference_vanishes: false,
    };
    let difference = c.plus(&nf.to_class(model).negated());
    nf.difference_vanishes = expand(&difference)?.is_trivial()?;
    if !nf.difference_vanishes {
        return Err(Error::Mismatch(
            "normal form does not reproduce the class".into(),
        ));
    }
    Ok(nf)
}

/// Image of a class under a relabelling embedding of residue fields, over the
/// unramified model of the target with the same precision.
pub fn embed_class(c: &BrauerClass, e: &Embedding) -> Result<BrauerClass> {
    let model = c.model();
    if e.source() != model.residue() {
        return Err(Error::Mismatch(
            "embedding does not start at the residue field".into(),
        ));
    }
    let target = CdvfModel::with_precision(e.target().clone(), model.precision())?;
    let map = |x: &CdvfElement| -> Result<CdvfElement> {
        let unit = TruncatedUnit::new(e.embed_poly(x.unit.num()), e.embed_poly(x.unit.den()))?;
        Ok(target.element(x.val, unit))
    };
    let entries = c
        .entries()
        .iter()
        .map(|(x, y)| Ok((map(x)?, map(y)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(BrauerClass::from_entries(target, entries))
}

#[derive(Clone, Debug)]
pub struct BaseChangeReduction {
    /// `u` with `c - (π, u)` in `br_1` after base change.
    pub unit: TruncatedUnit,
    /// Adjoins square roots of `t̃_1, ..., t̃_{n-1}`.
    pub base_change: Embedding,
    /// `c - (π, u)` over the extension.
    pub reduced: BrauerClass,
    pub reduced_in_br1: bool,
}

/// Splits off the uniformizer part of the graded-0 datum and kills the `k_2`
/// part by adjoining p-th roots of all but the last basis lift.
pub fn lemma21_reduce(c: &BrauerClass) -> Result<BaseChangeReduction> {
    let model = c.model();
    let n = model.nvars();
    let d0 = rho0_extract(c)?;
    let unit = model.lift_unit(&d0.unit_class)?;
    let roots: Vec<(usize, u32)> = (0..n.saturating_sub(1)).map(|j| (j, 1)).collect();
    let base_change = Embedding::adjoin_roots(model.residue(), &roots)?;
    // -(π, u) = (π, u^{-1})
    let mut shifted = c.clone();
    shifted.push(model.pi(), model.element(0, unit.inv()));
    let reduced = embed_class(&shifted, &base_change)?;
    let reduced_in_br1 = rho0_extract(&reduced)?.is_trivial();
    if !reduced_in_br1 {
        return Err(Error::Mismatch(
            "base change left a graded-0 residue".into(),
        ));
    }
    Ok(BaseChangeReduction {
        unit,
        base_change,
        reduced,
        reduced_in_br1,
    })
}
