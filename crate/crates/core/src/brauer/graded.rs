//! Graded pieces of the filtration `br(K)_i`: the maps out of
//! `k_2 ⊕ κ*/κ*^p` and `Ω¹ ⊕ κ`, and their inverses read off expansions.

use alloc::vec::Vec;

use super::expand::expand;
use super::BrauerClass;
use crate::cdvf::CdvfModel;
use crate::differentials::Omega1Form;
use crate::error::{Error, Result};
use crate::field::pth_root;
use crate::milnor::{k2_is_zero, SymbolSum};
use crate::ratfunc::RatFunc;

/// An element of `k_2(κ) ⊕ κ*/κ*^p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedDatum0 {
    pub k2_part: SymbolSum,
    pub unit_class: RatFunc,
}

impl GradedDatum0 {
    pub fn is_trivial(&self) -> bool {
        let (n, p) = (self.unit_class.nvars(), self.unit_class.p());
        k2_is_zero(&self.k2_part, n, p) && pth_root(&self.unit_class).is_some()
    }

    /// Equality in `k_2 ⊕ κ*/κ*^p`: differential symbols agree and the unit
    /// classes differ by a p-th power.
    pub fn equivalent(&self, other: &GradedDatum0) -> Result<bool> {
        let (n, p) = (self.unit_class.nvars(), self.unit_class.p());
        // -(a, b) = (a, 1/b)
        let mut difference = self.k2_part.clone();
        for (a, b) in other.k2_part.entries() {
            difference.push(a.clone(), b.inv()?);
        }
        let same_k2 = k2_is_zero(&difference, n, p);
        let ratio = self.unit_class.div(&other.unit_class)?;
        Ok(same_k2 && pth_root(&ratio).is_some())
    }
}

/// An element of `Ω¹ ⊕ κ` placed at a positive level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedDatumI {
    pub level: usize,
    pub form: Omega1Form,
    pub scalar: RatFunc,
}

impl GradedDatumI {
    pub fn is_zero(&self) -> bool {
        self.form.is_zero() && self.scalar.is_zero()
    }
}

/// Position of a class in the filtration. `exact` is false when the class is
/// only known to lie in `br(K)_level`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Finite { level: usize, exact: bool },
    Infinite,
}

/// `Σ (x̃, ỹ) + (π, z̃)`.
pub fn rho0_forward(d: &GradedDatum0, model: &CdvfModel) -> Result<BrauerClass> {
    let mut c = BrauerClass::new(model.clone());
    for (x, y) in d.k2_part.entries() {
        c.push(model.from_residue(x)?, model.from_residue(y)?);
    }
    if !d.unit_class.is_one() {
        c.push(model.pi(), model.from_residue(&d.unit_class)?);
    }
    Ok(c)
}

/// Reads `(π^a u, π^b v) = ab (π, -1) + a (π, v) - b (π, u) + (u, v)` modulo `br(K)_1`.
pub fn rho0_extract(c: &BrauerClass) -> Result<GradedDatum0> {
    let model = c.model();
    let k = model.residue();
    let mut k2 = SymbolSum::new();
    let mut unit_class = k.one();
    for (x, y) in c.entries() {
        let u = model.reduce_unit(&x.unit)?;
        let v = model.reduce_unit(&y.unit)?;
        if !u.is_one() && !v.is_one() {
            k2.push(u.clone(), v.clone());
        }
        let (a, b) = (x.val, y.val);
        unit_class = unit_class.mul(&v.pow(a)?).mul(&u.pow(-b)?);
        if (a * b).rem_euclid(2) == 1 {
            unit_class = unit_class.neg();
        }
    }
    Ok(GradedDatum0 {
        k2_part: k2,
        unit_class,
    })
}

fn check_level(model: &CdvfModel, level: usize) -> Result<()> {
    if level == 0 || level > model.top_level() {
        return Err(Error::LevelOutOfRange {
            level,
            max: model.top_level(),
        });
    }
    Ok(())
}

/// `Σ_j (1 + b̃_j π^i, t̃_j) + (π, 1 + ã π^i)` where the form is `Σ b_j dt_j / t_j`.
pub fn rhoi_forward(d: &GradedDatumI, model: &CdvfModel) -> Result<BrauerClass> {
    check_level(model, d.level)?;
    let k = model.residue();
    let level = d.level as u32;
    let mut c = BrauerClass::new(model.clone());
    for (j, coord) in d.form.coords().iter().enumerate() {
        let b = coord.mul(&k.var(j));
        if !b.is_zero() {
            let lhs = model.element(0, model.one_plus(&b, level));
            c.push(lhs, model.from_residue(&k.var(j))?);
        }
    }
    if !d.scalar.is_zero() {
        c.push(
            model.pi(),
            model.element(0, model.one_plus(&d.scalar, level)),
        );
    }
    Ok(c)
}

/// The datum at `level` of a class lying in `br(K)_level`.
///
/// At level 1 the uniformizer scalar has been traded for the exact 1-form
/// `b dt/t + da`, so the returned scalar is zero there.
pub fn rhoi_extract(c: &BrauerClass, level: usize) -> Result<GradedDatumI> {
    let model = c.model();
    check_level(model, level)?;
    let exp = expand(c)?;
    if !exp.in_br1() {
        return Err(Error::NotInLevel(0));
    }
    for lower in 1..level {
        let (forms, scalar) = exp.layer_datum(lower)?;
        if !scalar.is_zero() || forms.iter().any(|b| !b.is_zero()) {
            return Err(Error::NotInLevel(lower));
        }
    }
    let (forms, scalar) = exp.layer_datum(level)?;
    datum_from_layers(model, level, &forms, scalar)
}

pub(crate) fn datum_from_layers(
    model: &CdvfModel,
    level: usize,
    forms: &[RatFunc],
    scalar: RatFunc,
) -> Result<GradedDatumI> {
    let k = model.residue();
    let coords = forms
        .iter()
        .enumerate()
        .map(|(j, b)| b.div(&k.var(j)))
        .collect::<Result<Vec<_>>>()?;
    Ok(GradedDatumI {
        level,
        form: Omega1Form::from_coords(k.nvars(), k.p(), coords)?,
        scalar,
    })
}

/// Level `i` is detected exactly when `i < N` and `p ∤ i`; at level 0 always.
fn exact_level(model: &CdvfModel, level: usize) -> bool {
    let cut = model.cutoff();
    let p = model.p() as usize;
    level == 0 || (level * cut.n_den as usize) < cut.n_num as usize && !level.is_multiple_of(p)
}

pub fn filtration_level(c: &BrauerClass) -> Result<Level> {
    if !rho0_extract(c)?.is_trivial() {
        return Ok(Level::Finite {
            level: 0,
            exact: true,
        });
    }
    let exp = expand(c)?;
    match exp.first_nonzero_level()? {
        Some(level) => Ok(Level::Finite {
            level,
            exact: exact_level(c.model(), level),
        }),
        None => Ok(Level::Infinite),
    }
}
