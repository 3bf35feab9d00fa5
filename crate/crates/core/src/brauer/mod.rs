//! Period-`p` Brauer classes of the truncated field `K` as sums of symbols.
//!
//! An exact symbol calculus ([`expand`]) rewrites a class as a residual `k_2`
//! part plus one-unit coefficients against the lifted p-basis and the
//! uniformizer. Everything downstream reads off that decomposition.

use alloc::string::String;
use alloc::vec::Vec;

use crate::cdvf::{CdvfElement, CdvfModel};

mod bounds;
mod expand;
mod graded;
mod hilbert;
mod normal;

pub use bounds::{
    brdim_report, index_bounds, period_power_bound, splitting_field, BrdimReport, IndexBounds,
    RadicalGenerator, SplittingField,
};
pub use expand::{expand, Expansion};
pub use graded::{
    filtration_level, rho0_extract, rho0_forward, rhoi_extract, rhoi_forward, GradedDatum0,
    GradedDatumI, Level,
};
pub use hilbert::{hilbert_specialize, HilbertTable};
pub use normal::{embed_class, lemma21_reduce, normal_form, BaseChangeReduction, NormalForm};

/// `Σ (x_i, y_i)` over the model field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrauerClass {
    model: CdvfModel,
    entries: Vec<(CdvfElement, CdvfElement)>,
}

impl BrauerClass {
    pub fn new(model: CdvfModel) -> Self {
        BrauerClass {
            model,
            entries: Vec::new(),
        }
    }

    pub fn from_entries(model: CdvfModel, entries: Vec<(CdvfElement, CdvfElement)>) -> Self {
        BrauerClass { model, entries }
    }

    pub fn model(&self) -> &CdvfModel {
        &self.model
    }

    pub fn entries(&self) -> &[(CdvfElement, CdvfElement)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn symbol_count(&self) -> usize {
        self.entries.len()
    }

    pub fn push(&mut self, x: CdvfElement, y: CdvfElement) {
        self.entries.push((x, y));
    }

    /// `self + other`; both must live over the same model.
    pub fn plus(&self, other: &BrauerClass) -> BrauerClass {
        let mut out = self.clone();
        out.entries.extend(other.entries.iter().cloned());
        out
    }

    /// `-self`, using `-(x, y) = (x, y^{-1})`.
    pub fn negated(&self) -> BrauerClass {
        BrauerClass {
            model: self.model.clone(),
            entries: self
                .entries
                .iter()
                .map(|(x, y)| (x.clone(), y.inv()))
                .collect(),
        }
    }

    /// `sym(x1, y1) + sym(x2, y2) + ...`, or `0` for the empty sum.
    pub fn format(&self) -> String {
        if self.entries.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(x, y)| {
                alloc::format!(
                    "sym({}, {})",
                    self.model.format_element(x),
                    self.model.format_element(y)
                )
            })
            .collect();
        parts.join(" + ")
    }
}
