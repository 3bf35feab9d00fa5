//! `k_2 = K_2 / p` of the residue field, presented as sums of symbols and
//! compared through the differential symbol `(a, b) -> da/a ∧ db/b`.

use alloc::vec::Vec;

use crate::differentials::{pair_count, Omega2Form};
use crate::error::{Error, Result};
use crate::field::Embedding;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;

/// A (non-canonical) presentation `Σ (a_i, b_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SymbolSum {
    entries: Vec<(RatFunc, RatFunc)>,
}

impl SymbolSum {
    pub fn new() -> Self {
        SymbolSum::default()
    }

    pub fn from_entries(entries: Vec<(RatFunc, RatFunc)>) -> Self {
        SymbolSum { entries }
    }

    pub fn single(a: RatFunc, b: RatFunc) -> Self {
        SymbolSum {
            entries: alloc::vec![(a, b)],
        }
    }

    pub fn entries(&self) -> &[(RatFunc, RatFunc)] {
        &self.entries
    }

    pub fn push(&mut self, a: RatFunc, b: RatFunc) {
        self.entries.push((a, b));
    }

    pub fn extend(&mut self, other: &SymbolSum) {
        self.entries.extend(other.entries.iter().cloned());
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }
}

/// `dlog(num / den)` with coordinates over the common denominator `num * den`:
/// the j-th numerator is `num_j den - num den_j`.
fn dlog_numerators(f: &RatFunc) -> (Vec<Poly>, Poly) {
    let (num, den) = (f.num(), f.den());
    let coords = (0..f.nvars())
        .map(|j| num.derivative(j).mul(den).sub(&num.mul(&den.derivative(j))))
        .collect();
    (coords, num.mul(den))
}

/// Numerators of `dlog a ∧ dlog b` in pair order, over one returned denominator.
fn symbol_numerators(a: &RatFunc, b: &RatFunc) -> (Vec<Poly>, Poly) {
    let n = a.nvars();
    let (alpha, da) = dlog_numerators(a);
    let (beta, db) = dlog_numerators(b);
    let mut coords = Vec::with_capacity(pair_count(n));
    for i in 0..n {
        for j in i + 1..n {
            coords.push(alpha[i].mul(&beta[j]).sub(&alpha[j].mul(&beta[i])));
        }
    }
    (coords, da.mul(&db))
}

fn check_entries(s: &SymbolSum) -> Result<()> {
    if s.entries.iter().any(|(a, b)| a.is_zero() || b.is_zero()) {
        return Err(Error::ZeroEntry);
    }
    Ok(())
}

/// `Σ dlog a_i ∧ dlog b_i` in `Ω²` of a field with `nvars` variables over `F_p`.
pub fn h2p(s: &SymbolSum, nvars: usize, p: u32) -> Result<Omega2Form> {
    check_entries(s)?;
    let mut acc = Omega2Form::zero(nvars, p);
    for (a, b) in &s.entries {
        let (coords, den) = symbol_numerators(a, b);
        let mut k = 0;
        for i in 0..nvars {
            for j in i + 1..nvars {
                if !coords[k].is_zero() {
                    acc.add_to(i, j, &RatFunc::new(coords[k].clone(), den.clone())?);
                }
                k += 1;
            }
        }
    }
    Ok(acc)
}

/// Vanishing in `k_2`, decided by injectivity of the differential symbol.
/// Sums containing a zero entry are not elements and report `false`.
///
/// Works over the product of all symbol denominators, so no gcds are taken.
pub fn k2_is_zero(s: &SymbolSum, nvars: usize, p: u32) -> bool {
    if check_entries(s).is_err() {
        return false;
    }
    let parts: Vec<(Vec<Poly>, Poly)> = s
        .entries
        .iter()
        .map(|(a, b)| symbol_numerators(a, b))
        .filter(|(coords, _)| coords.iter().any(|c| !c.is_zero()))
        .collect();
    (0..pair_count(nvars)).all(|k| {
        let mut total = Poly::zero(nvars, p);
        for (idx, (coords, _)) in parts.iter().enumerate() {
            if coords[k].is_zero() {
                continue;
            }
            let scaled = parts
                .iter()
                .enumerate()
                .filter(|(other, _)| *other != idx)
                .fold(coords[k].clone(), |acc, (_, (_, den))| acc.mul(den));
            total = total.add(&scaled);
        }
        total.is_zero()
    })
}

/// Entrywise image under a field embedding.
pub fn k2_restrict(s: &SymbolSum, e: &Embedding) -> SymbolSum {
    SymbolSum {
        entries: s
            .entries
            .iter()
            .map(|(a, b)| (e.embed(a), e.embed(b)))
            .collect(),
    }
}
