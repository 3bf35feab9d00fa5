//! Exact decomposition of a class (`p = 2`) into
//! `lift(k_2 part) + Σ_j (Λ_j, t̃_j) + (π, Λ)` with one-units `Λ_j`.
//!
//! Every rewrite is an identity of quaternion symbols over `K`: bilinearity,
//! `(x, 1 - x) = 0`, `(π, π) = (π, -1)`, 2-torsion, and the vanishing of
//! `(u, y)` for `u ≡ 1 (mod π^{M+1})`, which is a square. One-units are split
//! into factors `1 + π^i m / D` with `m` a monomial, so that no intermediate
//! quantity acquires a denominator that vanishes modulo `p` at points where
//! the input does not.

use alloc::format;
use alloc::vec::Vec;

use super::BrauerClass;
use crate::cdvf::{CdvfElement, CdvfModel, TruncatedUnit};
use crate::error::{Error, Result};
use crate::field::pth_root;
use crate::milnor::{k2_is_zero, SymbolSum};
use crate::poly::{Monomial, Poly};
use crate::ratfunc::RatFunc;

const STEP_BUDGET: usize = 250_000;

/// `1 + π^level · xhat` with `xhat` a unit.
#[derive(Clone, Debug)]
struct OneUnit {
    level: u32,
    xhat: TruncatedUnit,
    value: TruncatedUnit,
}

enum Item {
    Symbol(CdvfElement, CdvfElement),
    Units(TruncatedUnit, TruncatedUnit),
}

/// Output of [`expand`].
#[derive(Clone, Debug)]
pub struct Expansion {
    model: CdvfModel,
    /// Residue symbols left over; empty whenever the `k_2` part vanished.
    pub k2: SymbolSum,
    /// `Λ_j`, one per p-basis variable.
    pub basis_units: Vec<TruncatedUnit>,
    /// `Λ`; a one-unit with no level-1 layer once the class is in `br_1`.
    pub pi_unit: TruncatedUnit,
    /// Residue of the uniformizer coefficient before square normalisation.
    pub unit_class: RatFunc,
    in_br1: bool,
}

impl Expansion {
    pub fn model(&self) -> &CdvfModel {
        &self.model
    }

    /// The graded-0 part vanished and the uniformizer coefficient was normalised.
    pub fn in_br1(&self) -> bool {
        self.in_br1
    }

    /// Layer `level` of every `Λ_j` and of `Λ`.
    pub fn layer_datum(&self, level: usize) -> Result<(Vec<RatFunc>, RatFunc)> {
        let forms = self
            .basis_units
            .iter()
            .map(|u| Ok(self.model.unit_layers(u)?.layer(level)))
            .collect::<Result<Vec<_>>>()?;
        let scalar = self.model.unit_layers(&self.pi_unit)?.layer(level);
        Ok((forms, scalar))
    }

    /// First level in `1..=M` with a nonzero layer, if any.
    pub fn first_nonzero_level(&self) -> Result<Option<usize>> {
        for level in 1..=self.model.top_level() {
            let (forms, scalar) = self.layer_datum(level)?;
            if !scalar.is_zero() || forms.iter().any(|b| !b.is_zero()) {
                return Ok(Some(level));
            }
        }
        Ok(None)
    }

    /// Every symbol was consumed: the class is zero.
    pub fn is_trivial(&self) -> Result<bool> {
        Ok(self.in_br1 && self.first_nonzero_level()?.is_none())
    }
}

struct Engine<'a> {
    model: &'a CdvfModel,
    top: u32,
    basis: Vec<TruncatedUnit>,
    pi: TruncatedUnit,
    atoms: Vec<(RatFunc, RatFunc)>,
    work: Vec<Item>,
    steps: usize,
}

impl<'a> Engine<'a> {
    fn new(model: &'a CdvfModel) -> Self {
        Engine {
            model,
            top: model.top_level() as u32,
            basis: alloc::vec![model.unit_one(); model.nvars()],
            pi: model.unit_one(),
            atoms: Vec::new(),
            work: Vec::new(),
            steps: 0,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > STEP_BUDGET {
            return Err(Error::ExpansionBudget);
        }
        Ok(())
    }

    fn canon(&self, u: &TruncatedUnit) -> Result<TruncatedUnit> {
        self.model.canonical(u)
    }

    fn lift(&self, f: &RatFunc) -> Result<TruncatedUnit> {
        self.model.lift_unit(f)
    }

    fn lift_poly(&self, f: &Poly) -> Result<TruncatedUnit> {
        let m = self.model.modulus();
        TruncatedUnit::new(f.lift_to(m), Poly::one(self.model.nvars(), m))
    }

    fn monomial(&self, m: &Monomial) -> TruncatedUnit {
        let modulus = self.model.modulus();
        TruncatedUnit::new(
            Poly::monomial(m.clone(), modulus, 1),
            Poly::one(self.model.nvars(), modulus),
        )
        .expect("monomials are units")
    }

    fn minus_one(&self) -> TruncatedUnit {
        self.model.unit_one().neg()
    }

    fn one_unit(&self, level: u32, xhat: &TruncatedUnit) -> Result<OneUnit> {
        let xhat = self.canon(xhat)?;
        let value = self.canon(&self.model.one_plus_unit(&xhat, level))?;
        Ok(OneUnit { level, xhat, value })
    }

    fn mul_pi(&mut self, u: &TruncatedUnit, e: i64) -> Result<()> {
        if e != 0 {
            self.pi = self.canon(&self.pi.mul(&u.pow(e)))?;
        }
        Ok(())
    }

    fn mul_basis(&mut self, j: usize, u: &TruncatedUnit, e: i64) -> Result<()> {
        if e != 0 {
            self.basis[j] = self.canon(&self.basis[j].mul(&u.pow(e)))?;
        }
        Ok(())
    }

    /// `u = lift(r) · Π f_k · (square)`, each `f_k = 1 + π^i m / D` of level `<= M`.
    fn mono_layers(&mut self, u: &TruncatedUnit) -> Result<(RatFunc, Vec<OneUnit>)> {
        let r = self.model.reduce_unit(u)?;
        let mut rem = self.canon(&u.div(&self.lift(&r)?))?;
        let mut out = Vec::new();
        let mut last = 0;
        while let Some((level, xhat)) = self.model.one_unit_excess(&rem)? {
            self.tick()?;
            if level > self.top {
                break;
            }
            if level <= last {
                return Err(Error::Mismatch("layer peeling did not advance".into()));
            }
            last = level;
            let c = self.model.reduce_unit(&xhat)?;
            let den = self.lift_poly(c.den())?;
            let mut prod = self.model.unit_one();
            for (m, _) in c.num().terms() {
                let f = self.one_unit(level, &self.monomial(m).div(&den))?;
                prod = prod.mul(&f.value);
                out.push(f);
            }
            rem = self.canon(&rem.div(&prod))?;
        }
        Ok((r, out))
    }

    fn drain(&mut self) -> Result<()> {
        while let Some(item) = self.work.pop() {
            self.tick()?;
            match item {
                Item::Symbol(x, y) => self.symbol(&x, &y)?,
                Item::Units(u, v) => self.units(&u, &v)?,
            }
        }
        Ok(())
    }

    /// `(π^a u, π^b v) = ab (π, -1) + a (π, v) - b (π, u) + (u, v)`.
    fn symbol(&mut self, x: &CdvfElement, y: &CdvfElement) -> Result<()> {
        let (a, b) = (x.val, y.val);
        if (a * b).rem_euclid(2) == 1 {
            let m1 = self.minus_one();
            self.mul_pi(&m1, 1)?;
        }
        self.mul_pi(&y.unit, a)?;
        self.mul_pi(&x.unit, -b)?;
        self.units(&x.unit, &y.unit)
    }

    fn units(&mut self, u: &TruncatedUnit, v: &TruncatedUnit) -> Result<()> {
        let (r, fu) = self.mono_layers(u)?;
        let (s, fv) = self.mono_layers(v)?;
        if !r.is_one() && !s.is_one() {
            self.atoms.push((r.clone(), s.clone()));
        }
        if !r.is_one() {
            // (r̃, g) = (g, r̃^{-1})
            let rinv = r.inv()?;
            for g in &fv {
                self.convert(g, &rinv)?;
            }
        }
        if !s.is_one() {
            for f in &fu {
                self.convert(f, &s)?;
            }
        }
        for f in &fu {
            for g in &fv {
                if f.level + g.level <= self.top {
                    self.one_one(f, g)?;
                }
            }
        }
        Ok(())
    }

    /// `(g, lift(r))` rewritten against the p-basis.
    fn convert(&mut self, g: &OneUnit, r: &RatFunc) -> Result<()> {
        self.convert_poly(g, r.num(), 1)?;
        self.convert_poly(g, r.den(), -1)
    }

    /// `sign · (1 + X, P)` for a polynomial `P = Σ m_k` with `X = π^i xhat`:
    /// `(1 + X, P) = Σ_k (1 + X m_k / P, m_k) + (1 + Q, -X / P)` where
    /// `1 + Q = Π_k (1 + X m_k / P) / (1 + X)` lies in `U_{2i}`.
    fn convert_poly(&mut self, g: &OneUnit, poly: &Poly, sign: i64) -> Result<()> {
        if poly.is_one() {
            return Ok(());
        }
        let monos: Vec<Monomial> = poly.terms().map(|(m, _)| m.clone()).collect();
        if monos.len() == 1 {
            for (j, e) in monos[0].exps().iter().enumerate() {
                self.mul_basis(j, &g.value, sign * *e as i64)?;
            }
            return Ok(());
        }
        let whole = self.lift_poly(poly)?;
        let mut prod = self.model.unit_one();
        for m in &monos {
            let alpha = self.one_unit(g.level, &g.xhat.mul(&self.monomial(m)).div(&whole))?;
            for (j, e) in m.exps().iter().enumerate() {
                self.mul_basis(j, &alpha.value, sign * *e as i64)?;
            }
            prod = prod.mul(&alpha.value);
        }
        let q = self.canon(&prod.div(&g.value))?;
        if let Some((level, _)) = self.model.one_unit_excess(&q)? {
            if level <= self.top {
                // (1 + Q, π^i) = -i (π, 1 + Q)
                self.mul_pi(&q, -sign * g.level as i64)?;
                let mut second = g.xhat.neg().div(&whole);
                if sign < 0 {
                    second = second.inv();
                }
                self.work.push(Item::Units(q, second));
            }
        }
        Ok(())
    }

    /// `(1 + x, 1 + y) = (-x (1 + y), 1 + xy / (1 + x))`.
    fn one_one(&mut self, f: &OneUnit, g: &OneUnit) -> Result<()> {
        let z = self.one_unit(f.level + g.level, &f.xhat.mul(&g.xhat).div(&f.value))?;
        self.mul_pi(&z.value, f.level as i64)?;
        let w = f.xhat.mul(&g.value).neg();
        self.work.push(Item::Units(w, z.value));
        Ok(())
    }

    /// Rewrites residue symbols whose differential symbol vanishes into
    /// symbols of positive level. Returns `false` if some atoms are stuck.
    fn resolve_atoms(&mut self) -> Result<bool> {
        loop {
            self.tick()?;
            let mut progress = false;
            let atoms = core::mem::take(&mut self.atoms);
            let mut kept = Vec::new();
            for (a, b) in atoms {
                if self.rewrite_atom(&a, &b)? {
                    progress = true;
                } else {
                    kept.push((a, b));
                }
            }
            self.atoms = kept;
            if self.atoms.is_empty() {
                return Ok(true);
            }
            if !progress && !self.merge_once()? {
                return Ok(false);
            }
        }
    }

    fn square_excess(&self, a: &RatFunc, root: &RatFunc) -> Result<TruncatedUnit> {
        Ok(self.lift(a)?.div(&self.lift(root)?.pow(2)))
    }

    fn rewrite_atom(&mut self, a: &RatFunc, b: &RatFunc) -> Result<bool> {
        if a.is_one() || b.is_one() {
            return Ok(true);
        }
        if let Some(root) = pth_root(a) {
            let w = self.square_excess(a, &root)?;
            let lb = self.lift(b)?;
            self.work.push(Item::Units(w, lb));
            return Ok(true);
        }
        if let Some(root) = pth_root(b) {
            let w = self.square_excess(b, &root)?;
            let la = self.lift(a)?;
            self.work.push(Item::Units(la, w));
            return Ok(true);
        }
        if a == b {
            let la = self.lift(a)?;
            self.work.push(Item::Units(la, self.minus_one()));
            return Ok(true);
        }
        let single = SymbolSum::single(a.clone(), b.clone());
        if k2_is_zero(&single, a.nvars(), a.p()) {
            return self.dependent_pair(a, b);
        }
        Ok(false)
    }

    /// `s = λ0^2 + λ1^2 r` for a p-dependent pair with `r`, `s` non-squares.
    fn dependent_pair(&mut self, r: &RatFunc, s: &RatFunc) -> Result<bool> {
        let Some(j) = (0..r.nvars()).find(|&j| !r.derivative(j).is_zero()) else {
            return Ok(false);
        };
        let lam1_sq = s.derivative(j).div(&r.derivative(j))?;
        let lam0_sq = s.sub(&lam1_sq.mul(r));
        let (Some(lam0), Some(lam1)) = (pth_root(&lam0_sq), pth_root(&lam1_sq)) else {
            return Ok(false);
        };
        if lam1.is_zero() {
            return Ok(false);
        }
        let odd = |f: &RatFunc| f.eval_at_ones() == (1, 1);
        let rl = self.lift(r)?;
        let l1 = self.lift(&lam1)?.pow(2);
        let base = if lam0.is_zero() {
            l1.mul(&rl)
        } else {
            let l0 = self.lift(&lam0)?.pow(2);
            add_units(&l0, &l1.mul(&rl))?
        };
        let mut pushes = Vec::new();
        if lam0.is_zero() {
            // (r̃, λ̃1² r̃) = (r̃, -1)
            pushes.push(Item::Units(rl.clone(), self.minus_one()));
        } else if odd(&lam0) {
            // (r̃, 1 + μ̃² r̃) = (-1, 1 + μ̃² r̃) with μ = λ1 / λ0
            let l0 = self.lift(&lam0)?.pow(2);
            pushes.push(Item::Units(self.minus_one(), base.div(&l0)));
        } else if odd(&lam1) {
            // (r̃, r̃ + ν̃²) = (r̃, -1) + (-1, 1 + ν̃² / r̃) with ν = λ0 / λ1
            pushes.push(Item::Units(rl.clone(), self.minus_one()));
            pushes.push(Item::Units(self.minus_one(), base.div(&l1.mul(&rl))));
        } else {
            return Ok(false);
        }
        let w = self.lift(s)?.div(&base);
        pushes.push(Item::Units(rl, w));
        self.work.extend(pushes);
        Ok(true)
    }

    /// Combines two atoms sharing an entry by bilinearity, pushing the
    /// one-unit correction between the product of lifts and the lift of the product.
    fn merge_once(&mut self) -> Result<bool> {
        let n = self.atoms.len();
        for i in 0..n {
            for k in i + 1..n {
                let (a1, b1) = self.atoms[i].clone();
                let (a2, b2) = self.atoms[k].clone();
                // (x, y) + (x, z) = (x, yz); (x, y) + (z, x) = (x, y / z)
                let merged = if a1 == a2 {
                    Some((a1.clone(), b1.clone(), b2.clone(), 1))
                } else if b1 == b2 {
                    Some((b1.clone(), a1.clone(), a2.clone(), 1))
                } else if a1 == b2 {
                    Some((a1.clone(), b1.clone(), a2.clone(), -1))
                } else if b1 == a2 {
                    Some((b1.clone(), a1.clone(), b2.clone(), -1))
                } else {
                    None
                };
                let Some((shared, y, z, e)) = merged else {
                    continue;
                };
                let combined = y.mul(&z.pow(e)?);
                let lifted = self.lift(&y)?.mul(&self.lift(&z)?.pow(e));
                let w = lifted.div(&self.lift(&combined)?);
                let ls = self.lift(&shared)?;
                self.work.push(Item::Units(ls, w));
                self.atoms.remove(k);
                self.atoms.remove(i);
                self.atoms.push((shared, combined));
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn add_units(x: &TruncatedUnit, y: &TruncatedUnit) -> Result<TruncatedUnit> {
    TruncatedUnit::new(
        x.num().mul(y.den()).add(&y.num().mul(x.den())),
        x.den().mul(y.den()),
    )
}

/// Decomposes a class over a `p = 2` model.
///
/// Residue symbols are only rewritten when their differential symbol sums to
/// zero; otherwise they are returned untouched in [`Expansion::k2`].
pub fn expand(class: &BrauerClass) -> Result<Expansion> {
    let model = class.model();
    if model.p() != 2 {
        return Err(Error::UnsupportedPrime(model.p()));
    }
    let mut e = Engine::new(model);
    for (x, y) in class.entries().iter().rev() {
        e.work.push(Item::Symbol(x.clone(), y.clone()));
    }
    e.drain()?;
    if !e.atoms.is_empty() {
        let sum = SymbolSum::from_entries(e.atoms.clone());
        if k2_is_zero(&sum, model.nvars(), model.p()) {
            if !e.resolve_atoms()? {
                let stuck: Vec<_> = e
                    .atoms
                    .iter()
                    .map(|(a, b)| {
                        format!(
                            "({}, {})",
                            model.residue().format(a),
                            model.residue().format(b)
                        )
                    })
                    .collect();
                return Err(Error::UnresolvedK2(stuck.join(" + ")));
            }
            e.drain()?;
        }
    }
    let unit_class = model.reduce_unit(&e.pi)?;
    let mut in_br1 = false;
    if e.atoms.is_empty() {
        if let Some(root) = pth_root(&unit_class) {
            let sq = e.lift(&root)?.pow(2);
            e.pi = e.canon(&e.pi.div(&sq))?;
            in_br1 = true;
            absorb_first_level(&mut e)?;
        }
    }
    Ok(Expansion {
        model: model.clone(),
        k2: SymbolSum::from_entries(e.atoms),
        basis_units: e.basis,
        pi_unit: e.pi,
        unit_class,
        in_br1,
    })
}

/// `(π, 1 + π x̂) = (1 + π x̂, -x̂)`: moves the level-1 uniformizer scalar
/// into the basis coefficients, where level 1 is detected exactly.
fn absorb_first_level(e: &mut Engine<'_>) -> Result<()> {
    if e.top < 2 {
        return Ok(());
    }
    for _ in 0..4 {
        let pi = e.pi.clone();
        let (_, layers) = e.mono_layers(&pi)?;
        let first: Vec<OneUnit> = layers.into_iter().filter(|f| f.level == 1).collect();
        if first.is_empty() {
            return Ok(());
        }
        for f in first {
            e.pi = e.canon(&e.pi.div(&f.value))?;
            e.work.push(Item::Units(f.value.clone(), f.xhat.neg()));
        }
        e.drain()?;
    }
    Err(Error::Mismatch("level-1 absorption did not settle".into()))
}
