//! Sparse multivariate polynomials with coefficients in `Z/m`.
//!
//! The same type carries residue-field polynomials (`m = p`) and the
//! truncated model-ring polynomials (`m = p^L`). Terms are kept in a
//! `BTreeMap` under graded-lex order so the leading term is the last entry.
//! GCDs and exact division are only meaningful for prime moduli.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(Monomial(out))
    }

    pub fn scale_exps(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|e| e * k).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u32, m: u32) -> Option<u32> {
    let (mut r0, mut r1) = (m as i64, (a % m) as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i64) as u32)
}

#[inline]
fn mulmod(a: u32, b: u32, m: u32) -> u32 {
    ((a as u64 * b as u64) % m as u64) as u32
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    nvars: usize,
    modulus: u32,
    terms: BTreeMap<Monomial, u32>,
}

impl Poly {
    pub fn zero(nvars: usize, modulus: u32) -> Self {
        Poly {
            nvars,
            modulus,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, modulus: u32, c: i64) -> Self {
        let mut p = Poly::zero(nvars, modulus);
        p.add_term(Monomial::one(nvars), c.rem_euclid(modulus as i64) as u32);
        p
    }

    pub fn one(nvars: usize, modulus: u32) -> Self {
        Poly::constant(nvars, modulus, 1)
    }

    pub fn var(nvars: usize, modulus: u32, i: usize) -> Self {
        Poly::monomial(Monomial::var(nvars, i), modulus, 1)
    }

    pub fn monomial(m: Monomial, modulus: u32, c: u32) -> Self {
        let mut p = Poly::zero(m.nvars(), modulus);
        p.add_term(m, c % modulus);
        p
    }

    /// Builds a polynomial from signed integer terms, reducing modulo `modulus`.
    pub fn from_terms<I>(nvars: usize, modulus: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, i64)>,
    {
        let mut p = Poly::zero(nvars, modulus);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(Monomial(e), c.rem_euclid(modulus as i64) as u32);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_coeff() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn constant_coeff(&self) -> u32 {
        self.terms
            .get(&Monomial::one(self.nvars))
            .copied()
            .unwrap_or(0)
    }

    pub fn coeff(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, u32)> + '_ {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn leading(&self) -> Option<(&Monomial, u32)> {
        self.terms.iter().next_back().map(|(m, c)| (m, *c))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: u32) {
        if c == 0 {
            return;
        }
        let modulus = self.modulus;
        let entry = self.terms.entry(m);
        match entry {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c % modulus);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let s = (*o.get() as u64 + c as u64) % modulus as u64;
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s as u32;
                }
            }
        }
    }

    fn check(&self, other: &Poly) {
        debug_assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        debug_assert_eq!(self.modulus, other.modulus, "modulus mismatch");
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        let m = self.modulus;
        Poly {
            nvars: self.nvars,
            modulus: m,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), m - c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> Poly {
        let mut out = Poly::zero(self.nvars, self.modulus);
        let c = c % self.modulus;
        for (m, a) in &self.terms {
            out.add_term(m.clone(), mulmod(*a, c, self.modulus));
        }
        out
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: u32) -> Poly {
        let mut out = Poly::zero(self.nvars, self.modulus);
        for (m, a) in &self.terms {
            out.add_term(m.mul(mono), mulmod(*a, c, self.modulus));
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check(other);
        let mut out = Poly::zero(self.nvars, self.modulus);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), mulmod(*c1, *c2, self.modulus));
            }
        }
        out
    }

    pub fn pow(&self, mut k: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.nvars, self.modulus);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Formal partial derivative in variable `var`.
    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero(self.nvars, self.modulus);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            out.add_term(Monomial(exps), mulmod(*c, e % self.modulus, self.modulus));
        }
        out
    }

    /// Reduces coefficients into `Z/new_modulus`; `new_modulus` must divide the current one.
    pub fn reduce_mod(&self, new_modulus: u32) -> Poly {
        debug_assert_eq!(self.modulus % new_modulus, 0);
        let mut out = Poly::zero(self.nvars, new_modulus);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c % new_modulus);
        }
        out
    }

    /// Reinterprets the coefficient representatives `0..m` in a larger modulus.
    pub fn lift_to(&self, new_modulus: u32) -> Poly {
        let mut out = Poly::zero(self.nvars, new_modulus);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }

    /// Divides every coefficient by `d`; all coefficients must be multiples of `d`
    /// and the result lives modulo `modulus / d`.
    pub fn div_exact_integer(&self, d: u32) -> Option<Poly> {
        if !self.modulus.is_multiple_of(d) {
            return None;
        }
        let mut out = Poly::zero(self.nvars, self.modulus / d);
        for (m, c) in &self.terms {
            if c % d != 0 {
                return None;
            }
            out.add_term(m.clone(), c / d);
        }
        Some(out)
    }

    /// Maps each exponent vector through `f` (used by monomial substitutions).
    pub fn map_monomials<F>(&self, target_nvars: usize, f: F) -> Poly
    where
        F: Fn(&Monomial) -> Monomial,
    {
        let mut out = Poly::zero(target_nvars, self.modulus);
        for (m, c) in &self.terms {
            out.add_term(f(m), *c);
        }
        out
    }

    /// Evaluates at an integer point with wrapping `u64` arithmetic, i.e. modulo `2^64`.
    pub fn eval_wrapping(&self, point: &[u64]) -> u64 {
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut v = *c as u64;
            for (x, e) in point.iter().zip(&m.0) {
                v = v.wrapping_mul(x.wrapping_pow(*e));
            }
            acc = acc.wrapping_add(v);
        }
        acc
    }

    /// Multiplies by the inverse of the leading coefficient (prime modulus only).
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = inv_mod(c, self.modulus).expect("leading coefficient is a unit");
                self.scale(inv)
            }
        }
    }

    /// Exact division over a prime modulus; `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        self.check(d);
        let (dm, dc) = d.leading()?;
        let dm = dm.clone();
        let dinv = inv_mod(dc, self.modulus)?;
        let mut r = self.clone();
        let mut q = Poly::zero(self.nvars, self.modulus);
        while let Some((m, c)) = r.leading() {
            let qm = m.checked_div(&dm)?;
            let qc = mulmod(c, dinv, self.modulus);
            r = r.sub(&d.mul_monomial(&qm, qc));
            q.add_term(qm, qc);
        }
        Some(q)
    }

    fn to_univariate(&self, var: usize) -> Vec<Poly> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Poly::zero(self.nvars, self.modulus); deg + 1];
        for (m, c) in &self.terms {
            let e = m.0[var] as usize;
            let mut exps = m.0.clone();
            exps[var] = 0;
            out[e].add_term(Monomial(exps), *c);
        }
        out
    }

    fn from_univariate(coeffs: &[Poly], var: usize, nvars: usize, modulus: u32) -> Poly {
        let mut out = Poly::zero(nvars, modulus);
        for (e, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                let mut exps = m.0.clone();
                exps[var] += e as u32;
                out.add_term(Monomial(exps), *a);
            }
        }
        out
    }

    /// Monic greatest common divisor over `F_p` (prime modulus), computed
    /// recursively through contents and subresultant pseudo-remainder sequences.
    pub fn gcd(&self, other: &Poly) -> Poly {
        self.check(other);
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return Poly::one(self.nvars, self.modulus);
        }
        if self == other {
            return self.monic();
        }
        if self.num_terms() == 1 || other.num_terms() == 1 {
            return monomial_gcd(self, other);
        }
        // A variable present in only one operand can only enter the gcd through
        // that operand's content with respect to it.
        for v in 0..self.nvars {
            let (da, db) = (self.degree_in(v), other.degree_in(v));
            if da > 0 && db == 0 {
                return content_gcd(&self.to_univariate(v), other);
            }
            if db > 0 && da == 0 {
                return content_gcd(&other.to_univariate(v), self);
            }
        }
        if let Some(g) = kronecker_gcd(self, other) {
            return g;
        }
        let var = (0..self.nvars)
            .filter(|&v| self.degree_in(v) > 0)
            .min_by_key(|&v| (self.degree_in(v).max(other.degree_in(v)), v))
            .expect("both operands are nonconstant");
        let ua = self.to_univariate(var);
        let ub = other.to_univariate(var);
        let ca = content(&ua);
        let cb = content(&ub);
        let c = ca.gcd(&cb);
        let pa = primitive_with(&ua, &ca);
        let pb = primitive_with(&ub, &cb);
        let g = subresultant_gcd(pa, pb);
        Poly::from_univariate(&g, var, self.nvars, self.modulus)
            .mul(&c)
            .monic()
    }
}

/// Gcd through the Kronecker substitution `t_v -> x^(D_0 ... D_{v-1})` with
/// `D_v` above both degrees in `t_v`.
///
/// The map is injective on monomials of any common divisor `g`, so `φ(g)`
/// divides the univariate gcd and has the same number of terms as `g`. If the
/// univariate gcd pulls back to some `G` dividing both inputs then `G | g`,
/// and `φ(G) = gcd(φ(a), φ(b))` forces `g / G` to be constant. `None` when the
/// pulled-back candidate fails that check.
fn kronecker_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    const MAX_DEGREE: u64 = 1 << 14;
    let mut radix = Vec::with_capacity(a.nvars);
    let mut w = 1u64;
    for v in 0..a.nvars {
        let base = a.degree_in(v).max(b.degree_in(v)) as u64 + 1;
        radix.push((w, base));
        w = w.saturating_mul(base);
    }
    if w > MAX_DEGREE {
        return None;
    }
    let image = |f: &Poly| {
        let mut dense = vec![0u32; w as usize];
        for (m, c) in &f.terms {
            let k: u64 =
                m.0.iter()
                    .zip(&radix)
                    .map(|(e, (w, _))| *e as u64 * w)
                    .sum();
            dense[k as usize] = *c;
        }
        dense
    };
    let g = dense_gcd(image(a), image(b), a.modulus);
    if g.len() == 1 {
        return Some(Poly::one(a.nvars, a.modulus));
    }
    let mut candidate = Poly::zero(a.nvars, a.modulus);
    for (k, c) in g.iter().enumerate().filter(|(_, c)| **c != 0) {
        let exps = radix
            .iter()
            .map(|(w, base)| ((k as u64 / w) % base) as u32)
            .collect();
        candidate.add_term(Monomial(exps), *c);
    }
    let divides = |f: &Poly| f.exact_div(&candidate).is_some();
    (divides(a) && divides(b)).then(|| candidate.monic())
}

/// Euclid over `F_p` on dense coefficient vectors (low degree first);
/// returns the gcd, trimmed.
fn dense_gcd(mut a: Vec<u32>, mut b: Vec<u32>, p: u32) -> Vec<u32> {
    let trim = |v: &mut Vec<u32>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv = inv_mod(*b.last().expect("nonempty"), p).expect("prime modulus");
        let db = b.len() - 1;
        while a.len() > db {
            let da = a.len() - 1;
            let q = mulmod(*a.last().expect("nonempty"), inv, p);
            for (k, bk) in b.iter().enumerate() {
                let x = &mut a[k + da - db];
                *x = (*x + p - mulmod(q, *bk, p)) % p;
            }
            trim(&mut a);
        }
        core::mem::swap(&mut a, &mut b);
    }
    a
}

/// `gcd(a, b)` where at least one side is a single term.
fn monomial_gcd(a: &Poly, b: &Poly) -> Poly {
    let (mono, other) = if a.num_terms() == 1 { (a, b) } else { (b, a) };
    let (m, _) = mono.leading().expect("nonzero");
    let exps = (0..a.nvars)
        .map(|v| {
            let lowest = other.terms.keys().map(|k| k.0[v]).min().unwrap_or(0);
            m.0[v].min(lowest)
        })
        .collect();
    Poly::monomial(Monomial(exps), a.modulus, 1)
}

/// `gcd(coeffs..., b)`, stopping as soon as it becomes constant.
fn content_gcd(coeffs: &[Poly], b: &Poly) -> Poly {
    let mut acc = b.monic();
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        acc = acc.gcd(c);
        if acc.is_constant() {
            break;
        }
    }
    acc
}

fn trim(u: &mut Vec<Poly>) {
    while u.last().is_some_and(Poly::is_zero) {
        u.pop();
    }
}

fn content(u: &[Poly]) -> Poly {
    let mut acc: Option<Poly> = None;
    for c in u.iter().filter(|c| !c.is_zero()) {
        let next = match acc {
            None => c.monic(),
            Some(a) => a.gcd(c),
        };
        if next.is_constant() {
            return next;
        }
        acc = Some(next);
    }
    acc.expect("content of a nonzero polynomial")
}

fn primitive_with(u: &[Poly], c: &Poly) -> Vec<Poly> {
    u.iter()
        .map(|x| x.exact_div(c).expect("content divides every coefficient"))
        .collect()
}

fn primitive(u: &[Poly]) -> Vec<Poly> {
    let c = content(u);
    primitive_with(u, &c)
}

/// `lc(b)^(deg a - deg b + 1) a mod b`, the exact pseudo-remainder.
fn prem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut r: Vec<Poly> = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = &b[db];
    let mut unused = (r.len() - 1 - db + 1) as u32;
    while !r.is_empty() && r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for x in r.iter_mut() {
            *x = x.mul(lb);
        }
        for (k, bk) in b.iter().enumerate() {
            r[k + shift] = r[k + shift].sub(&bk.mul(&lr));
        }
        trim(&mut r);
        unused -= 1;
    }
    if unused > 0 && !r.is_empty() {
        let f = lb.pow(unused);
        for x in r.iter_mut() {
            *x = x.mul(&f);
        }
    }
    r
}

fn exact_div_all(u: &[Poly], d: &Poly) -> Vec<Poly> {
    u.iter()
        .map(|x| x.exact_div(d).expect("subresultant division is exact"))
        .collect()
}

/// Gcd of two primitive polynomials in one distinguished variable.
fn subresultant_gcd(mut a: Vec<Poly>, mut b: Vec<Poly>) -> Vec<Poly> {
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        core::mem::swap(&mut a, &mut b);
    }
    let one = Poly::one(a[0].nvars, a[0].modulus);
    let mut g = one.clone();
    let mut h = one.clone();
    loop {
        if b.is_empty() {
            return primitive(&a);
        }
        let delta = (a.len() - b.len()) as u32;
        let r = prem(&a, &b);
        if r.is_empty() {
            return primitive(&b);
        }
        if r.len() == 1 {
            return vec![one];
        }
        a = b;
        b = exact_div_all(&r, &g.mul(&h.pow(delta)));
        g = a.last().expect("nonzero").clone();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta)
                .exact_div(&h.pow(delta - 1))
                .expect("subresultant division is exact")
        };
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.iter().rev().cmp(other.terms.iter().rev())
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2(terms: &[(&[u32], i64)]) -> Poly {
        let n = terms.first().map(|t| t.0.len()).unwrap_or(1);
        Poly::from_terms(n, 2, terms.iter().map(|(e, c)| (e.to_vec(), *c)))
    }

    #[test]
    fn graded_lex_orders_by_degree_first() {
        let a = Monomial::new(vec![0, 3]);
        let b = Monomial::new(vec![2, 0]);
        assert!(a > b);
        assert!(Monomial::new(vec![1, 1]) > Monomial::new(vec![0, 2]));
    }

    #[test]
    fn characteristic_two_cancels() {
        let t = Poly::var(1, 2, 0);
        assert!(t.add(&t).is_zero());
        assert_eq!(t.mul(&t), p2(&[(&[2], 1)]));
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (t1 + t2)(t1 + 1) and (t1 + t2)(t2 + 1) over F_2
        let a = p2(&[(&[1, 0], 1), (&[0, 1], 1)]);
        let f = a.mul(&p2(&[(&[1, 0], 1), (&[0, 0], 1)]));
        let g = a.mul(&p2(&[(&[0, 1], 1), (&[0, 0], 1)]));
        assert_eq!(f.gcd(&g), a);
    }

    #[test]
    fn gcd_over_f3_is_monic() {
        let x = Poly::var(1, 3, 0);
        let f = x.mul(&x).sub(&Poly::one(1, 3)).scale(2); // 2(x-1)(x+1)
        let g = x.sub(&Poly::one(1, 3)); // x - 1
        assert_eq!(f.gcd(&g.scale(2)), g);
    }

    #[test]
    fn exact_division_detects_non_divisors() {
        let x = Poly::var(2, 2, 0);
        let y = Poly::var(2, 2, 1);
        let f = x.mul(&y).add(&x);
        assert_eq!(f.exact_div(&x), Some(y.add(&Poly::one(2, 2))));
        assert_eq!(f.exact_div(&y), None);
    }

    #[test]
    fn inverse_modulo_powers_of_two() {
        assert_eq!(inv_mod(3, 8), Some(3));
        assert_eq!(inv_mod(5, 8), Some(5));
        assert_eq!(inv_mod(2, 8), None);
    }
}
