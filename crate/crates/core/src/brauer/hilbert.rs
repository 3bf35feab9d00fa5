//! The 2-adic Hilbert symbol on specializations `t_j -> odd integer`.
//!
//! Values come from brute force: `(a, b) = 1` iff `a x^2 + b y^2 = z^2` has a
//! primitive solution modulo `2^6`.

use alloc::format;

use super::BrauerClass;
use crate::cdvf::CdvfElement;
use crate::error::{Error, Result};

const MODULUS: u64 = 64;

/// Symbols `(2^α u, 2^β v)` for `α, β ∈ {0, 1}` and odd `u, v` modulo 8.
#[derive(Clone, Debug)]
pub struct HilbertTable {
    // index: 8 * (4 α + u / 2) + (4 β + v / 2)
    signs: [i8; 64],
}

impl Default for HilbertTable {
    fn default() -> Self {
        Self::new()
    }
}

fn solvable(a: u64, b: u64) -> bool {
    let square = |x: u64| x * x % MODULUS;
    let mut any_square = [false; MODULUS as usize];
    let mut odd_square = [false; MODULUS as usize];
    for z in 0..MODULUS {
        any_square[square(z) as usize] = true;
        if z % 2 == 1 {
            odd_square[square(z) as usize] = true;
        }
    }
    (0..MODULUS).any(|x| {
        (0..MODULUS).any(|y| {
            let lhs = ((a * square(x) + b * square(y)) % MODULUS) as usize;
            // primitivity only constrains z when x and y are both even
            if (x | y) % 2 == 1 {
                any_square[lhs]
            } else {
                odd_square[lhs]
            }
        })
    })
}

fn slot(val: i64, unit: u64) -> usize {
    4 * (val.rem_euclid(2) as usize) + ((unit % 8) / 2) as usize
}

impl HilbertTable {
    pub fn new() -> Self {
        let mut signs = [0i8; 64];
        for i in 0..8usize {
            for j in 0..8usize {
                let a = (1 + (i % 4) as u64 * 2) << (i / 4);
                let b = (1 + (j % 4) as u64 * 2) << (j / 4);
                signs[8 * i + j] = if solvable(a, b) { 1 } else { -1 };
            }
        }
        HilbertTable { signs }
    }

    /// `(2^a u, 2^b v)` with `u, v` odd.
    pub fn symbol(&self, a: i64, u: u64, b: i64, v: u64) -> i8 {
        self.signs[8 * slot(a, u) + slot(b, v)]
    }

    /// `(a, b)` for nonzero integers.
    pub fn integers(&self, a: i64, b: i64) -> Result<i8> {
        let split = |x: i64| -> Result<(i64, u64)> {
            if x == 0 {
                return Err(Error::ZeroEntry);
            }
            let val = x.trailing_zeros() as i64;
            Ok((val, (x >> val).rem_euclid(8) as u64))
        };
        let (a_val, a_unit) = split(a)?;
        let (b_val, b_unit) = split(b)?;
        Ok(self.symbol(a_val, a_unit, b_val, b_unit))
    }

    fn specialize_entry(&self, x: &CdvfElement, point: &[u64]) -> Result<(i64, u64)> {
        let num = x.unit.num().eval_wrapping(point);
        let den = x.unit.den().eval_wrapping(point);
        if num.is_multiple_of(2) || den.is_multiple_of(2) {
            return Err(Error::BadSpecialization(format!(
                "unit specializes to {num}/{den} with an even part"
            )));
        }
        // odd d satisfies d^2 = 1 mod 8, so n/d = n*d there
        Ok((x.val, num.wrapping_mul(den) % 8))
    }
}

/// Product of the Hilbert symbols of the specialized entries. Every
/// coordinate of `point` must be odd.
pub fn hilbert_specialize(c: &BrauerClass, point: &[u64], table: &HilbertTable) -> Result<i8> {
    let model = c.model();
    if model.p() != 2 {
        return Err(Error::UnsupportedPrime(model.p()));
    }
    if point.len() != model.nvars() {
        return Err(Error::BadSpecialization(format!(
            "expected {} coordinates, got {}",
            model.nvars(),
            point.len()
        )));
    }
    if let Some(x) = point.iter().find(|x| *x % 2 == 0) {
        return Err(Error::BadSpecialization(format!("coordinate {x} is even")));
    }
    let mut sign = 1i8;
    for (x, y) in c.entries() {
        let (a, u) = table.specialize_entry(x, point)?;
        let (b, v) = table.specialize_entry(y, point)?;
        sign *= table.symbol(a, u, b, v);
    }
    Ok(sign)
}
