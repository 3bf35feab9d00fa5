//! Splitting fields, index bounds and the Brauer p-dimension interval.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use super::graded::{filtration_level, rho0_extract, Level};
use super::hilbert::{hilbert_specialize, HilbertTable};
use super::BrauerClass;
use crate::cdvf::{CdvfElement, CdvfModel};
use crate::differentials::lemma16_lower_bound;
use crate::error::Result;
use crate::field::p_independence;

/// `radicand^(1/root_degree)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalGenerator {
    pub radicand: CdvfElement,
    pub root_degree: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingField {
    pub generators: Vec<RadicalGenerator>,
    /// Product of the root degrees.
    pub degree: u64,
}

/// A radical extension splitting every period-`p` class over the model:
/// `π^(1/p)` when `n = 0`, otherwise
/// `t̃_1^(1/p²), ..., t̃_(n-1)^(1/p²), t̃_n^(1/p), π^(1/p)`.
pub fn splitting_field(c: &BrauerClass) -> Result<SplittingField> {
    let model = c.model();
    let p = model.p() as u64;
    let n = model.nvars();
    let k = model.residue();
    let mut generators = Vec::new();
    for j in 0..n {
        generators.push(RadicalGenerator {
            radicand: model.from_residue(&k.var(j))?,
            root_degree: if j + 1 < n { p * p } else { p },
        });
    }
    generators.push(RadicalGenerator {
        radicand: model.pi(),
        root_degree: p,
    });
    let degree = generators.iter().map(|g| g.root_degree).product();
    Ok(SplittingField { generators, degree })
}

/// The index lies in `[p^lower_exp, p^upper_exp]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexBounds {
    pub lower_exp: usize,
    pub upper_exp: usize,
    pub certificates: Vec<String>,
}

/// Residues of `Σ (x_{2i-1}, x_{2i})` with unit entries, if they form a
/// p-independent family.
fn paired_independent_residues(c: &BrauerClass) -> Result<Option<Vec<crate::RatFunc>>> {
    let model = c.model();
    if c.is_empty() || c.entries().iter().any(|(x, y)| x.val != 0 || y.val != 0) {
        return Ok(None);
    }
    let mut residues = Vec::with_capacity(2 * c.symbol_count());
    for (x, y) in c.entries() {
        residues.push(model.reduce_unit(&x.unit)?);
        residues.push(model.reduce_unit(&y.unit)?);
    }
    Ok(p_independence(&residues).independent.then_some(residues))
}

pub fn index_bounds(c: &BrauerClass) -> Result<IndexBounds> {
    let model = c.model();
    let n = model.nvars();
    let mut certificates = Vec::new();

    let (dim_bound, dim_note) = if n == 0 {
        (
            1,
            "upper: Brauer p-dimension is at most 1 for a finite residue field",
        )
    } else {
        (2 * n, "upper: Brauer p-dimension is at most 2n")
    };
    let mut upper = dim_bound;
    certificates.push(format!("{dim_note} ({dim_bound})"));
    if rho0_extract(c)?.is_trivial() {
        upper = upper.min(n + 1);
        certificates.push(format!(
            "upper: class lies in br_1, index divides p^(n+1) ({})",
            n + 1
        ));
    }
    let count = c.symbol_count();
    if count < upper {
        upper = count;
        certificates.push(format!("upper: sum of {count} cyclic algebras of degree p"));
    }

    // With no residue variables the model is Q_2 itself, where the Hilbert
    // symbol decides the class outright.
    if n == 0 && model.p() == 2 {
        let split = hilbert_specialize(c, &[], &HilbertTable::new())? == 1;
        let e = if split { 0 } else { 1 };
        certificates.push(format!(
            "exact: the 2-adic Hilbert symbol of the class is {}",
            if split { "+1" } else { "-1" }
        ));
        return Ok(IndexBounds {
            lower_exp: e,
            upper_exp: e,
            certificates,
        });
    }
    let lower = if let Some(residues) = paired_independent_residues(c)? {
        let scalars = vec![model.residue().one(); c.symbol_count()];
        let m = lemma16_lower_bound(&scalars, &residues)?;
        certificates.push(format!(
            "lower: {m} symbols on p-independent residues stay nonzero over every degree p^{} extension",
            m - 1
        ));
        m
    } else {
        match filtration_level(c)? {
            Level::Infinite => {
                upper = 0;
                certificates.push("upper: the class expands to zero".into());
                0
            }
            Level::Finite { level, exact: true } => {
                certificates.push(format!("lower: nonzero graded datum at level {level}"));
                1
            }
            Level::Finite {
                level,
                exact: false,
            } => {
                certificates.push(format!(
                    "lower: datum at level {level} may lie in the graded kernel, no bound"
                ));
                0
            }
        }
    };
    Ok(IndexBounds {
        lower_exp: lower,
        upper_exp: upper,
        certificates,
    })
}

/// Interval containing the Brauer p-dimension of the model field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrdimReport {
    pub lower: usize,
    pub upper: usize,
    /// Index bounds of `Σ (t̃_{2i-1}, t̃_{2i})` when `n` is even and positive.
    pub witness: Option<IndexBounds>,
}

pub fn brdim_report(model: &CdvfModel) -> Result<BrdimReport> {
    let n = model.nvars();
    if n == 0 {
        return Ok(BrdimReport {
            lower: 0,
            upper: 1,
            witness: None,
        });
    }
    let mut lower = n.div_ceil(2);
    let mut witness = None;
    if n.is_multiple_of(2) {
        let k = model.residue();
        let mut c = BrauerClass::new(model.clone());
        for i in 0..n / 2 {
            c.push(
                model.from_residue(&k.var(2 * i))?,
                model.from_residue(&k.var(2 * i + 1))?,
            );
        }
        let bounds = index_bounds(&c)?;
        lower = lower.max(bounds.lower_exp);
        witness = Some(bounds);
    }
    Ok(BrdimReport {
        lower,
        upper: 2 * n,
        witness,
    })
}

/// A class of period `ℓ^n` has index dividing `ℓ^(n d)` when every period-`ℓ`
/// class over every finite extension has index dividing `ℓ^d`.
pub fn period_power_bound(d: u32, n: u32) -> u32 {
    n * d
}
