//! Canonical rational functions over `F_p`.

use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::poly::{inv_mod, Monomial, Poly};

/// `num / den` with `gcd(num, den) = 1` and `den` monic under graded-lex order.
/// Zero is `0 / 1`. Equality of values is equality of representations.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn zero(nvars: usize, p: u32) -> Self {
        RatFunc {
            num: Poly::zero(nvars, p),
            den: Poly::one(nvars, p),
        }
    }

    pub fn one(nvars: usize, p: u32) -> Self {
        Self::constant(nvars, p, 1)
    }

    pub fn constant(nvars: usize, p: u32, c: i64) -> Self {
        RatFunc {
            num: Poly::constant(nvars, p, c),
            den: Poly::one(nvars, p),
        }
    }

    pub fn var(nvars: usize, p: u32, i: usize) -> Self {
        RatFunc {
            num: Poly::var(nvars, p, i),
            den: Poly::one(nvars, p),
        }
    }

    pub fn from_poly(num: Poly) -> Self {
        let den = Poly::one(num.nvars(), num.modulus());
        RatFunc { num, den }
    }

    /// Builds and canonicalises `num / den`.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Poly, den: Poly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatFunc::zero(num.nvars(), num.modulus());
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides numerator"),
                den.exact_div(&g).expect("gcd divides denominator"),
            )
        };
        Self::make_monic(num, den)
    }

    /// Scales a coprime pair so the denominator is monic.
    fn make_monic(mut num: Poly, mut den: Poly) -> Self {
        let lc = den.leading().map(|(_, c)| c).unwrap_or(1);
        if lc != 1 {
            let inv = inv_mod(lc, den.modulus()).expect("prime modulus");
            num = num.scale(inv);
            den = den.scale(inv);
        }
        RatFunc { num, den }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn p(&self) -> u32 {
        self.num.modulus()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::normalize(self.num.add(&other.num), self.den.clone());
        }
        // Henrici: only the common part of the denominators can cancel.
        let g = self.den.gcd(&other.den);
        if g.is_one() {
            let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            return Self::make_monic(num, self.den.mul(&other.den));
        }
        let b = self.den.exact_div(&g).expect("gcd divides");
        let d = other.den.exact_div(&g).expect("gcd divides");
        let t = self.num.mul(&d).add(&other.num.mul(&b));
        if t.is_zero() {
            return RatFunc::zero(self.nvars(), self.p());
        }
        let g2 = t.gcd(&g);
        let num = t.exact_div(&g2).expect("gcd divides");
        let den = b.mul(&other.den.exact_div(&g2).expect("gcd divides"));
        Self::make_monic(num, den)
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero(self.nvars(), self.p());
        }
        // both inputs are reduced, so cross cancellation suffices
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let div = |x: &Poly, g: &Poly| x.exact_div(g).expect("gcd divides");
        let num = div(&self.num, &g1).mul(&div(&other.num, &g2));
        let den = div(&self.den, &g2).mul(&div(&other.den, &g1));
        Self::make_monic(num, den)
    }

    pub fn scale(&self, c: u32) -> RatFunc {
        Self::normalize(self.num.scale(c), self.den.clone())
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&other.inv()?))
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, k: i64) -> Result<RatFunc> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let e = k.unsigned_abs() as u32;
        Ok(RatFunc {
            num: base.num.pow(e),
            den: base.den.pow(e),
        }
        .renormalized())
    }

    fn renormalized(self) -> RatFunc {
        Self::normalize(self.num, self.den)
    }

    /// `f^p`, computed by scaling exponents (coefficients in `F_p` are fixed by Frobenius).
    pub fn frobenius(&self) -> RatFunc {
        let p = self.p();
        let n = self.nvars();
        RatFunc {
            num: self.num.map_monomials(n, |m| m.scale_exps(p)),
            den: self.den.map_monomials(n, |m| m.scale_exps(p)),
        }
    }

    /// Partial derivative in variable `var`.
    pub fn derivative(&self, var: usize) -> RatFunc {
        let dn = self.num.derivative(var);
        let dd = self.den.derivative(var);
        if dd.is_zero() {
            return Self::normalize(dn, self.den.clone());
        }
        Self::normalize(
            dn.mul(&self.den).sub(&self.num.mul(&dd)),
            self.den.mul(&self.den),
        )
    }

    /// Sum of numerator and denominator total degrees; used as a pivot size.
    pub fn weight(&self) -> u32 {
        self.num.total_degree() + self.den.total_degree()
    }

    /// Value of numerator and denominator at the all-ones point, modulo `p`.
    pub fn eval_at_ones(&self) -> (u32, u32) {
        let p = self.p();
        let sum = |q: &Poly| q.terms().fold(0u32, |a, (_, c)| (a + c) % p);
        (sum(&self.num), sum(&self.den))
    }

    pub fn is_monomial(&self) -> bool {
        self.num.num_terms() == 1 && self.den.num_terms() == 1
    }

    /// Exponent vector difference for a monomial `c t^a / t^b`.
    pub fn monomial_parts(&self) -> Option<(u32, &Monomial, &Monomial)> {
        if !self.is_monomial() {
            return None;
        }
        let (nm, c) = self.num.leading()?;
        let (dm, _) = self.den.leading()?;
        Some((c, nm, dm))
    }
}

impl Ord for RatFunc {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.den.cmp(&other.den))
            .then_with(|| self.num.cmp(&other.num))
    }
}

impl PartialOrd for RatFunc {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> RatFunc {
        RatFunc::var(1, 2, 0)
    }

    #[test]
    fn arithmetic_examples() {
        let one = RatFunc::one(1, 2);
        assert_eq!(t().mul(&t()), RatFunc::from_poly(Poly::var(1, 2, 0).pow(2)));
        assert!(t().add(&t()).is_zero());
        let f = t().add(&one).div(&t()).unwrap();
        assert_eq!(f.inv().unwrap(), t().div(&t().add(&one)).unwrap());
        assert_eq!(RatFunc::zero(1, 2).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn canonical_denominator_is_monic_and_coprime() {
        let x = RatFunc::var(1, 3, 0);
        let f = x.mul(&x).sub(&RatFunc::one(1, 3));
        let g = x.scale(2).sub(&RatFunc::constant(1, 3, 2));
        let q = f.div(&g).unwrap(); // (x^2 - 1) / (2x - 2) = (x + 1) / 2
        assert!(q.den().is_one());
        assert_eq!(q, x.add(&RatFunc::one(1, 3)).scale(2));
    }

    #[test]
    fn quotient_rule_in_characteristic_two() {
        let inv_t = t().inv().unwrap();
        assert_eq!(inv_t.derivative(0), t().mul(&t()).inv().unwrap());
    }
}
