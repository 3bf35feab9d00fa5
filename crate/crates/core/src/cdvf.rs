//! Truncated model of the unramified complete field `K` with uniformizer
//! `π = p` and residue field `F_p(t_1, ..., t_n)`.
//!
//! The model ring is `(Z/p^L)[t]` localised at polynomials that are nonzero
//! modulo `p`. Such polynomials are non-zero-divisors, so fractions compare by
//! cross-multiplication and inversion is a swap of numerator and denominator.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::field::{format_poly, FieldDescriptor};
use crate::poly::{inv_mod, Poly};
use crate::ratfunc::RatFunc;

/// `N = e p / (p - 1)` as a reduced fraction, `M = floor(N)`, `L = M + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cutoff {
    pub n_num: u32,
    pub n_den: u32,
    pub m: u32,
    pub l: u32,
}

impl fmt::Display for Cutoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n_den == 1 {
            write!(f, "{}", self.n_num)
        } else {
            write!(f, "{}/{}", self.n_num, self.n_den)
        }
    }
}

fn gcd_u32(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Layers above `M` carry no period-`p` Brauer information.
pub fn filtration_cutoff(p: u32, e: u32) -> Cutoff {
    let (num, den) = (e * p, p - 1);
    let g = gcd_u32(num, den);
    let m = num / den;
    Cutoff {
        n_num: num / g,
        n_den: den / g,
        m,
        l: m + 1,
    }
}

/// Largest supported truncation exponent; keeps `p^L` well inside `u32`.
pub const MAX_PRECISION: u32 = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CdvfModel {
    residue: FieldDescriptor,
    e: u32,
    cutoff: Cutoff,
    precision: u32,
}

impl CdvfModel {
    /// The unramified model; only `p = 2` is instantiated.
    pub fn new(residue: FieldDescriptor) -> Result<Self> {
        if residue.p() != 2 {
            return Err(Error::UnsupportedPrime(residue.p()));
        }
        let cutoff = filtration_cutoff(residue.p(), 1);
        Ok(CdvfModel {
            residue,
            e: 1,
            precision: cutoff.l,
            cutoff,
        })
    }

    /// Works modulo `π^precision`; requires `M + 1 <= precision <= MAX_PRECISION`.
    pub fn with_precision(residue: FieldDescriptor, precision: u32) -> Result<Self> {
        let mut m = Self::new(residue)?;
        if precision < m.cutoff.l || precision > MAX_PRECISION {
            return Err(Error::LevelOutOfRange {
                level: precision as usize,
                max: MAX_PRECISION as usize,
            });
        }
        m.precision = precision;
        Ok(m)
    }

    pub fn residue(&self) -> &FieldDescriptor {
        &self.residue
    }

    pub fn p(&self) -> u32 {
        self.residue.p()
    }

    pub fn nvars(&self) -> usize {
        self.residue.nvars()
    }

    pub fn ramification(&self) -> u32 {
        self.e
    }

    pub fn cutoff(&self) -> Cutoff {
        self.cutoff
    }

    /// `M`: the top level that can carry Brauer information.
    pub fn top_level(&self) -> usize {
        self.cutoff.m as usize
    }

    /// `L`: elements are known modulo `π^L`.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `p^L`.
    pub fn modulus(&self) -> u32 {
        self.p().pow(self.precision)
    }

    pub fn unit_one(&self) -> TruncatedUnit {
        let one = Poly::one(self.nvars(), self.modulus());
        TruncatedUnit {
            num: one.clone(),
            den: one,
        }
    }

    /// Coefficientwise lift with representatives in `{0, ..., p - 1}`.
    pub fn lift_unit(&self, f: &RatFunc) -> Result<TruncatedUnit> {
        if f.is_zero() {
            return Err(Error::NonUnit);
        }
        let m = self.modulus();
        TruncatedUnit::new(f.num().lift_to(m), f.den().lift_to(m))
    }

    /// Lift of `f` viewed in `R`, allowing zero.
    pub fn lift_poly(&self, f: &Poly) -> Poly {
        f.lift_to(self.modulus())
    }

    /// `1 + lift(c) π^level`.
    pub fn one_plus(&self, c: &RatFunc, level: u32) -> TruncatedUnit {
        let m = self.modulus();
        let den = c.den().lift_to(m);
        let shift = self.p().pow(level.min(self.precision)) % m;
        let num = den.add(&c.num().lift_to(m).scale(shift));
        TruncatedUnit { num, den }.normalized()
    }

    /// `1 + π^level · x` for a unit `x` of the model ring.
    pub fn one_plus_unit(&self, x: &TruncatedUnit, level: u32) -> TruncatedUnit {
        let shift = self.p().pow(level.min(self.precision)) % self.modulus();
        TruncatedUnit {
            num: x.den.add(&x.num.scale(shift)),
            den: x.den.clone(),
        }
        .normalized()
    }

    /// Writes a unit `u ≡ 1 (mod π)` as `1 + π^i x` with `x` a unit; `None`
    /// when `u ≡ 1 (mod π^L)`.
    pub fn one_unit_excess(&self, u: &TruncatedUnit) -> Result<Option<(u32, TruncatedUnit)>> {
        let diff = u.num.sub(&u.den);
        if diff.is_zero() {
            return Ok(None);
        }
        let p = self.p();
        let level = diff
            .terms()
            .map(|(_, c)| {
                let mut c = c;
                let mut v = 0;
                while c % p == 0 {
                    c /= p;
                    v += 1;
                }
                v
            })
            .min()
            .unwrap_or(0);
        if level == 0 {
            return Err(Error::Mismatch("not congruent to 1 modulo π".into()));
        }
        let scaled = diff
            .div_exact_integer(p.pow(level))
            .expect("every coefficient is divisible")
            .lift_to(self.modulus());
        Ok(Some((
            level,
            TruncatedUnit {
                num: scaled,
                den: u.den.clone(),
            }
            .normalized(),
        )))
    }

    pub fn element(&self, val: i64, unit: TruncatedUnit) -> CdvfElement {
        CdvfElement { val, unit }
    }

    pub fn pi(&self) -> CdvfElement {
        CdvfElement {
            val: 1,
            unit: self.unit_one(),
        }
    }

    pub fn from_residue(&self, f: &RatFunc) -> Result<CdvfElement> {
        Ok(CdvfElement {
            val: 0,
            unit: self.lift_unit(f)?,
        })
    }

    /// Builds `num / den` from integer polynomials: the `p`-adic valuation is
    /// read from the coefficient contents, the rest reduced modulo `p^L`.
    pub fn from_integer_terms(
        &self,
        num: &[(Vec<u32>, i128)],
        den: &[(Vec<u32>, i128)],
    ) -> Result<CdvfElement> {
        let (vn, n) = self.strip_content(num)?;
        let (vd, d) = self.strip_content(den)?;
        Ok(CdvfElement {
            val: vn - vd,
            unit: TruncatedUnit::new(n, d)?,
        })
    }

    fn strip_content(&self, terms: &[(Vec<u32>, i128)]) -> Result<(i64, Poly)> {
        let p = self.p() as i128;
        let nonzero: Vec<&(Vec<u32>, i128)> = terms.iter().filter(|(_, c)| *c != 0).collect();
        if nonzero.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let mut v = 0i64;
        let mut div = 1i128;
        while nonzero.iter().all(|(_, c)| c % (div * p) == 0) {
            div *= p;
            v += 1;
        }
        let m = self.modulus() as i128;
        let poly = Poly::from_terms(
            self.nvars(),
            self.modulus(),
            nonzero
                .iter()
                .map(|(e, c)| (e.clone(), ((c / div).rem_euclid(m)) as i64)),
        );
        Ok((v, poly))
    }

    /// Residue-field image of a unit.
    pub fn reduce_unit(&self, u: &TruncatedUnit) -> Result<RatFunc> {
        let p = self.p();
        RatFunc::new(u.num.reduce_mod(p), u.den.reduce_mod(p))
    }

    /// Peels `u = lift(r) Π_{i=1}^{L-1} (1 + lift(c_i) π^i)` modulo `π^L`.
    pub fn unit_layers(&self, u: &TruncatedUnit) -> Result<UnitLayers> {
        let p = self.p();
        let residue = self.reduce_unit(u)?;
        let mut rem = u.div(&self.lift_unit(&residue)?);
        let mut layers = Vec::with_capacity(self.precision as usize - 1);
        for level in 1..self.precision {
            let pk = p.pow(level);
            let diff = rem.num.sub(&rem.den);
            let quotient = diff
                .div_exact_integer(pk)
                .ok_or_else(|| Error::Mismatch(format!("remainder is not 1 mod π^{level}")))?;
            let top = RatFunc::from_poly(quotient.reduce_mod(p));
            let den = RatFunc::from_poly(rem.den.reduce_mod(p));
            let c = top.div(&den)?;
            if !c.is_zero() {
                rem = rem.div(&self.one_plus(&c, level));
            }
            layers.push(c);
        }
        Ok(UnitLayers { residue, layers })
    }

    pub fn reconstruct(&self, layers: &UnitLayers) -> Result<TruncatedUnit> {
        let mut u = self.lift_unit(&layers.residue)?;
        for (i, c) in layers.layers.iter().enumerate() {
            if !c.is_zero() {
                u = u.mul(&self.one_plus(c, i as u32 + 1));
            }
        }
        Ok(u)
    }

    /// Rebuilds `u` from its layers; equal units get identical representatives
    /// and polynomial degrees stay bounded by the canonical residue data.
    pub fn canonical(&self, u: &TruncatedUnit) -> Result<TruncatedUnit> {
        self.reconstruct(&self.unit_layers(u)?)
    }

    pub fn format_unit(&self, u: &TruncatedUnit) -> String {
        let names = self.residue.var_names();
        format!(
            "({})/({})",
            format_poly(&u.num, names),
            format_poly(&u.den, names)
        )
    }

    /// `pi^k * ((num)/(den))`, re-parseable by the element grammar.
    pub fn format_element(&self, x: &CdvfElement) -> String {
        format!("pi^{} * ({})", x.val, self.format_unit(&x.unit))
    }
}

/// `num / den` over `Z/p^L` with both parts nonzero modulo `p`.
#[derive(Clone, Debug)]
pub struct TruncatedUnit {
    num: Poly,
    den: Poly,
}

impl TruncatedUnit {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        let p = prime_of(num.modulus());
        if num.reduce_mod(p).is_zero() || den.reduce_mod(p).is_zero() {
            return Err(Error::NonUnit);
        }
        Ok(TruncatedUnit { num, den }.normalized())
    }

    /// Scales so the denominator's leading coefficient is 1 when it is a unit.
    fn normalized(self) -> Self {
        let m = self.den.modulus();
        match self.den.leading().and_then(|(_, c)| inv_mod(c, m)) {
            Some(inv) if inv != 1 => TruncatedUnit {
                num: self.num.scale(inv),
                den: self.den.scale(inv),
            },
            _ => self,
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn modulus(&self) -> u32 {
        self.num.modulus()
    }

    pub fn mul(&self, other: &TruncatedUnit) -> TruncatedUnit {
        TruncatedUnit {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
        .normalized()
    }

    pub fn inv(&self) -> TruncatedUnit {
        TruncatedUnit {
            num: self.den.clone(),
            den: self.num.clone(),
        }
        .normalized()
    }

    pub fn div(&self, other: &TruncatedUnit) -> TruncatedUnit {
        self.mul(&other.inv())
    }

    pub fn neg(&self) -> TruncatedUnit {
        TruncatedUnit {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, k: i64) -> TruncatedUnit {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let e = k.unsigned_abs() as u32;
        TruncatedUnit {
            num: base.num.pow(e),
            den: base.den.pow(e),
        }
        .normalized()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }
}

impl PartialEq for TruncatedUnit {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for TruncatedUnit {}

fn prime_of(m: u32) -> u32 {
    (2..=m).find(|d| m.is_multiple_of(*d)).unwrap_or(m)
}

/// `π^val · unit`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CdvfElement {
    pub val: i64,
    pub unit: TruncatedUnit,
}

impl CdvfElement {
    pub fn mul(&self, other: &CdvfElement) -> CdvfElement {
        CdvfElement {
            val: self.val + other.val,
            unit: self.unit.mul(&other.unit),
        }
    }

    pub fn inv(&self) -> CdvfElement {
        CdvfElement {
            val: -self.val,
            unit: self.unit.inv(),
        }
    }

    pub fn div(&self, other: &CdvfElement) -> CdvfElement {
        self.mul(&other.inv())
    }

    pub fn neg(&self) -> CdvfElement {
        CdvfElement {
            val: self.val,
            unit: self.unit.neg(),
        }
    }

    pub fn pow(&self, k: i64) -> CdvfElement {
        CdvfElement {
            val: self.val * k,
            unit: self.unit.pow(k),
        }
    }
}

/// `residue` and `c_1, ..., c_{L-1}` with `u = lift(residue) Π (1 + lift(c_i) π^i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitLayers {
    pub residue: RatFunc,
    pub layers: Vec<RatFunc>,
}

impl UnitLayers {
    /// `c_level`, zero above the stored precision.
    pub fn layer(&self, level: usize) -> RatFunc {
        self.layers
            .get(level.wrapping_sub(1))
            .cloned()
            .unwrap_or_else(|| RatFunc::zero(self.residue.nvars(), self.residue.p()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn model(n: usize) -> CdvfModel {
        CdvfModel::new(FieldDescriptor::standard(2, n).unwrap()).unwrap()
    }

    fn int(m: &CdvfModel, c: i64) -> TruncatedUnit {
        let one = Poly::one(m.nvars(), m.modulus());
        TruncatedUnit::new(Poly::constant(m.nvars(), m.modulus(), c), one).unwrap()
    }

    #[test]
    fn cutoffs() {
        let c = filtration_cutoff(2, 1);
        assert_eq!((c.n_num, c.n_den, c.m, c.l), (2, 1, 2, 3));
        let c = filtration_cutoff(3, 1);
        assert_eq!((c.n_num, c.n_den, c.m, c.l), (3, 2, 1, 2));
        let c = filtration_cutoff(5, 1);
        assert_eq!((c.n_num, c.n_den, c.m, c.l), (5, 4, 1, 2));
        assert_eq!(
            CdvfModel::new(FieldDescriptor::standard(3, 1).unwrap()),
            Err(Error::UnsupportedPrime(3))
        );
    }

    #[test]
    fn lift_and_reduce() {
        let m = model(1);
        let k = m.residue().clone();
        let t1 = k.var(0).add(&k.one());
        let u = m.lift_unit(&t1).unwrap();
        assert_eq!(u.num().modulus(), 8);
        assert_eq!(m.reduce_unit(&u).unwrap(), t1);
        assert!(m.reduce_unit(&int(&m, 3)).unwrap().is_one());
        let x = m
            .from_integer_terms(&[(vec![1], 1), (vec![0], 3)], &[(vec![1], 1), (vec![0], 1)])
            .unwrap();
        assert_eq!(x.val, 0);
        assert!(m.reduce_unit(&x.unit).unwrap().is_one());
    }

    #[test]
    fn layer_examples() {
        let m = model(1);
        let k = m.residue().clone();
        let l3 = m.unit_layers(&int(&m, 3)).unwrap();
        assert!(l3.residue.is_one());
        assert_eq!(l3.layers, vec![k.one(), k.zero()]);
        let l7 = m.unit_layers(&int(&m, 7)).unwrap();
        assert_eq!(l7.layers, vec![k.one(), k.one()]);
        let x = m
            .from_integer_terms(&[(vec![1], 1), (vec![0], 2)], &[(vec![0], 1)])
            .unwrap();
        let lx = m.unit_layers(&x.unit).unwrap();
        assert_eq!(lx.residue, k.var(0));
        assert_eq!(lx.layers, vec![k.var(0).inv().unwrap(), k.zero()]);
        assert_eq!(m.reconstruct(&lx).unwrap(), x.unit);
    }

    #[test]
    fn arithmetic_examples() {
        let m = model(1);
        let sq = m.pi().mul(&m.pi());
        assert_eq!(sq.val, 2);
        assert!(sq.unit.is_one());
        let three = m.element(0, int(&m, 3));
        assert_eq!(three.inv(), three);
        let k = m.residue().clone();
        let a = m.element(1, m.lift_unit(&k.var(0)).unwrap());
        let b = m.element(-1, m.lift_unit(&k.var(0).inv().unwrap()).unwrap());
        let c = a.mul(&b);
        assert_eq!(c.val, 0);
        assert!(c.unit.is_one());
    }

    #[test]
    fn formatting() {
        let m = model(1);
        let x = m
            .from_integer_terms(&[(vec![1], 4), (vec![0], 2)], &[(vec![0], 1)])
            .unwrap();
        assert_eq!(m.format_element(&x), "pi^1 * ((2*t1 + 1)/(1))");
    }
}
