//! Kähler differentials `Ω¹` and `Ω²` of the residue field in the basis
//! `dt_j` and `dt_i ∧ dt_j` (`i < j`).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{p_independence, Embedding, FieldDescriptor, Substitution};
use crate::linalg;
use crate::ratfunc::RatFunc;

/// `Σ coords[j] dt_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Omega1Form {
    p: u32,
    coords: Vec<RatFunc>,
}

impl Omega1Form {
    pub fn zero(nvars: usize, p: u32) -> Self {
        Omega1Form {
            p,
            coords: alloc::vec![RatFunc::zero(nvars, p); nvars],
        }
    }

    /// `dt_j`.
    pub fn basis(nvars: usize, p: u32, j: usize) -> Self {
        let mut w = Self::zero(nvars, p);
        w.coords[j] = RatFunc::one(nvars, p);
        w
    }

    pub fn from_coords(nvars: usize, p: u32, coords: Vec<RatFunc>) -> Result<Self> {
        if coords.len() != nvars || coords.iter().any(|c| c.nvars() != nvars || c.p() != p) {
            return Err(Error::Mismatch(
                "1-form coordinates do not match the field".into(),
            ));
        }
        Ok(Omega1Form { p, coords })
    }

    pub fn nvars(&self) -> usize {
        self.coords.len()
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coords(&self) -> &[RatFunc] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(RatFunc::is_zero)
    }

    pub fn add(&self, other: &Omega1Form) -> Omega1Form {
        Omega1Form {
            p: self.p,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Omega1Form {
        Omega1Form {
            p: self.p,
            coords: self.coords.iter().map(RatFunc::neg).collect(),
        }
    }

    pub fn sub(&self, other: &Omega1Form) -> Omega1Form {
        self.add(&other.neg())
    }

    pub fn scale(&self, f: &RatFunc) -> Omega1Form {
        Omega1Form {
            p: self.p,
            coords: self.coords.iter().map(|c| c.mul(f)).collect(),
        }
    }
}

/// Number of `i < j` slots for `n` variables.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of `(i, j)`, `i < j`, in lexicographic order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// `Σ coords[(i, j)] dt_i ∧ dt_j` over `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Omega2Form {
    nvars: usize,
    p: u32,
    coords: Vec<RatFunc>,
}

impl Omega2Form {
    pub fn zero(nvars: usize, p: u32) -> Self {
        Omega2Form {
            nvars,
            p,
            coords: alloc::vec![RatFunc::zero(nvars, p); pair_count(nvars)],
        }
    }

    /// `dt_i ∧ dt_j`, normalised to the stored orientation.
    pub fn basis(nvars: usize, p: u32, i: usize, j: usize) -> Self {
        let mut a = Self::zero(nvars, p);
        a.add_to(i, j, &RatFunc::one(nvars, p));
        a
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Coefficient of `dt_i ∧ dt_j` for any ordered pair.
    pub fn coeff(&self, i: usize, j: usize) -> RatFunc {
        match i.cmp(&j) {
            core::cmp::Ordering::Less => self.coords[pair_index(self.nvars, i, j)].clone(),
            core::cmp::Ordering::Greater => self.coords[pair_index(self.nvars, j, i)].neg(),
            core::cmp::Ordering::Equal => RatFunc::zero(self.nvars, self.p),
        }
    }

    /// Adds `c dt_i ∧ dt_j`.
    pub fn add_to(&mut self, i: usize, j: usize, c: &RatFunc) {
        match i.cmp(&j) {
            core::cmp::Ordering::Less => {
                let k = pair_index(self.nvars, i, j);
                self.coords[k] = self.coords[k].add(c);
            }
            core::cmp::Ordering::Greater => {
                let k = pair_index(self.nvars, j, i);
                self.coords[k] = self.coords[k].sub(c);
            }
            core::cmp::Ordering::Equal => {}
        }
    }

    /// Nonzero coefficients with their `(i, j)` slots, `i < j`.
    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), &RatFunc)> {
        let n = self.nvars;
        (0..n)
            .flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
            .zip(self.coords.iter())
            .filter(|(_, c)| !c.is_zero())
    }

    pub fn coords(&self) -> &[RatFunc] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(RatFunc::is_zero)
    }

    pub fn add(&self, other: &Omega2Form) -> Omega2Form {
        Omega2Form {
            nvars: self.nvars,
            p: self.p,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Omega2Form {
        Omega2Form {
            nvars: self.nvars,
            p: self.p,
            coords: self.coords.iter().map(RatFunc::neg).collect(),
        }
    }

    pub fn sub(&self, other: &Omega2Form) -> Omega2Form {
        self.add(&other.neg())
    }

    pub fn scale(&self, f: &RatFunc) -> Omega2Form {
        Omega2Form {
            nvars: self.nvars,
            p: self.p,
            coords: self.coords.iter().map(|c| c.mul(f)).collect(),
        }
    }

    /// Rank of the associated alternating matrix.
    pub fn matrix_rank(&self) -> usize {
        let n = self.nvars;
        let m: Vec<Vec<RatFunc>> = (0..n)
            .map(|i| (0..n).map(|j| self.coeff(i, j)).collect())
            .collect();
        linalg::rank(&m).0
    }
}

/// `Σ ∂f/∂t_j dt_j`.
pub fn d(f: &RatFunc) -> Omega1Form {
    Omega1Form {
        p: f.p(),
        coords: (0..f.nvars()).map(|j| f.derivative(j)).collect(),
    }
}

/// `df / f`.
pub fn dlog(f: &RatFunc) -> Result<Omega1Form> {
    Ok(d(f).scale(&f.inv()?))
}

pub fn wedge(w: &Omega1Form, v: &Omega1Form) -> Omega2Form {
    let n = w.nvars();
    let mut out = Omega2Form::zero(n, w.p);
    for i in 0..n {
        for j in i + 1..n {
            let c = w.coords[i]
                .mul(&v.coords[j])
                .sub(&w.coords[j].mul(&v.coords[i]));
            out.coords[pair_index(n, i, j)] = c;
        }
    }
    out
}

/// Restriction along a relabelling embedding: `dt_j -> ds_{σ(j)}` when the
/// variable is not rooted and `0` otherwise.
pub fn restrict_omega2(a: &Omega2Form, e: &Embedding) -> Omega2Form {
    let target = e.target();
    let mut out = Omega2Form::zero(target.nvars(), target.p());
    let images = e.var_images();
    for ((i, j), c) in a.terms() {
        let (ti, ri) = images[i];
        let (tj, rj) = images[j];
        if ri == 0 && rj == 0 {
            out.add_to(ti, tj, &e.embed(c));
        }
    }
    out
}

/// Pullback of 1-forms along a general substitution: `dt_j -> d(image_j)`.
pub fn pullback_omega1(w: &Omega1Form, s: &Substitution) -> Omega1Form {
    let images = s.images();
    let (tn, p) = match images.first() {
        Some(g) => (g.nvars(), g.p()),
        None => (0, w.p),
    };
    let mut out = Omega1Form::zero(tn, p);
    for (c, img) in w.coords.iter().zip(images) {
        if !c.is_zero() {
            out = out.add(&d(img).scale(&s.apply(c)));
        }
    }
    out
}

/// Pullback of 2-forms along a general substitution.
pub fn pullback_omega2(a: &Omega2Form, s: &Substitution) -> Omega2Form {
    let images = s.images();
    let (tn, p) = match images.first() {
        Some(g) => (g.nvars(), g.p()),
        None => (0, a.p),
    };
    let diffs: Vec<Omega1Form> = images.iter().map(d).collect();
    let mut out = Omega2Form::zero(tn, p);
    for ((i, j), c) in a.terms() {
        out = out.add(&wedge(&diffs[i], &diffs[j]).scale(&s.apply(c)));
    }
    out
}

/// Finds `f_1, ..., f_k` with `a = Σ d(gens_i) ∧ f_i`, or `None` when `a` is
/// outside that span.
pub fn kernel_decompose(a: &Omega2Form, gens: &[RatFunc]) -> Result<Option<Vec<Omega1Form>>> {
    if !p_independence(gens).independent {
        return Err(Error::DependentGenerators);
    }
    let n = a.nvars;
    let p = a.p;
    let k = gens.len();
    let dg: Vec<Omega1Form> = gens.iter().map(d).collect();
    // Unknown (g, v) is the coefficient of dt_v in f_g, at column g * n + v.
    let mut rows = Vec::with_capacity(pair_count(n));
    let mut rhs = Vec::with_capacity(pair_count(n));
    for u in 0..n {
        for v in u + 1..n {
            let mut row = alloc::vec![RatFunc::zero(n, p); k * n];
            for (g, w) in dg.iter().enumerate() {
                row[g * n + v] = row[g * n + v].add(&w.coords[u]);
                row[g * n + u] = row[g * n + u].sub(&w.coords[v]);
            }
            rows.push(row);
            rhs.push(a.coeff(u, v));
        }
    }
    if rows.is_empty() {
        return Ok(Some((0..k).map(|_| Omega1Form::zero(n, p)).collect()));
    }
    Ok(linalg::solve(&rows, &rhs).map(|x| {
        x.chunks(n.max(1))
            .take(k)
            .map(|c| Omega1Form {
                p,
                coords: c.to_vec(),
            })
            .collect()
    }))
}

/// Re-expands `Σ d(gens_i) ∧ f_i`.
pub fn kernel_expand(gens: &[RatFunc], parts: &[Omega1Form], nvars: usize, p: u32) -> Omega2Form {
    gens.iter()
        .zip(parts)
        .fold(Omega2Form::zero(nvars, p), |acc, (g, f)| {
            acc.add(&wedge(&d(g), f))
        })
}

/// Checks the hypotheses under which `Σ λ_i da_{2i-1} ∧ da_{2i}` stays nonzero
/// over every extension of degree `< p^m`, and returns `m`.
pub fn lemma16_lower_bound(lambdas: &[RatFunc], gens: &[RatFunc]) -> Result<usize> {
    if gens.len() != 2 * lambdas.len() {
        return Err(Error::HypothesisFailed(format!(
            "expected {} generators for {} scalars, got {}",
            2 * lambdas.len(),
            lambdas.len(),
            gens.len()
        )));
    }
    if lambdas.iter().any(RatFunc::is_zero) {
        return Err(Error::HypothesisFailed("a scalar is zero".into()));
    }
    if !p_independence(gens).independent {
        return Err(Error::HypothesisFailed("generators are p-dependent".into()));
    }
    Ok(lambdas.len())
}

/// The form `Σ λ_i da_{2i-1} ∧ da_{2i}` certified by [`lemma16_lower_bound`].
pub fn paired_form(lambdas: &[RatFunc], gens: &[RatFunc], nvars: usize, p: u32) -> Omega2Form {
    lambdas
        .iter()
        .zip(gens.chunks(2))
        .fold(Omega2Form::zero(nvars, p), |acc, (l, pair)| {
            acc.add(&wedge(&d(&pair[0]), &d(&pair[1])).scale(l))
        })
}

fn format_coeff(field: &FieldDescriptor, c: &RatFunc) -> String {
    format!("({})", field.format(c))
}

/// `(c1) * dt1 + (c2) * dt2`, or `0`.
pub fn format_omega1(field: &FieldDescriptor, w: &Omega1Form) -> String {
    let names = field.var_names();
    let parts: Vec<String> = w
        .coords
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| format!("{} * d{}", format_coeff(field, c), names[j]))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// `(c) * dt1^dt2 + ...` in `(i, j)` order, or `0`.
pub fn format_omega2(field: &FieldDescriptor, a: &Omega2Form) -> String {
    let names = field.var_names();
    let parts: Vec<String> = a
        .terms()
        .map(|((i, j), c)| format!("{} * d{}^d{}", format_coeff(field, c), names[i], names[j]))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn k(n: usize) -> FieldDescriptor {
        FieldDescriptor::standard(2, n).unwrap()
    }

    #[test]
    fn d_examples() {
        let f = k(2);
        let (a, b) = (f.var(0), f.var(1));
        let w = d(&a.mul(&b));
        assert_eq!(w.coords(), &[b.clone(), a.clone()]);
        let g = k(1);
        let t = g.var(0);
        assert!(d(&t.mul(&t)).is_zero());
        assert_eq!(d(&t.inv().unwrap()).coords()[0], t.mul(&t).inv().unwrap());
    }

    #[test]
    fn dlog_examples() {
        let f = k(2);
        let (a, b) = (f.var(0), f.var(1));
        let w = dlog(&a.mul(&b)).unwrap();
        assert_eq!(w.coords(), &[a.inv().unwrap(), b.inv().unwrap()]);
        assert!(dlog(&a.mul(&a).mul(&b).mul(&b)).unwrap().is_zero());
        let g = k(1);
        let t1 = g.var(0).add(&g.one());
        assert_eq!(dlog(&t1).unwrap().coords()[0], t1.inv().unwrap());
        assert_eq!(dlog(&g.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn wedge_examples() {
        let f = k(2);
        let (a, b) = (f.var(0), f.var(1));
        let w = wedge(&dlog(&a).unwrap(), &dlog(&b).unwrap());
        assert_eq!(w.coeff(0, 1), a.mul(&b).inv().unwrap());
        assert!(wedge(&w_of(&f), &w_of(&f)).is_zero());
        let e1 = Omega1Form::basis(2, 2, 0);
        let e2 = Omega1Form::basis(2, 2, 1);
        assert!(wedge(&e1, &e2).add(&wedge(&e2, &e1)).is_zero());
    }

    fn w_of(f: &FieldDescriptor) -> Omega1Form {
        d(&f.var(0).mul(&f.var(1)).add(&f.var(0)))
    }

    #[test]
    fn restriction_examples() {
        let f = k(4);
        let e = Embedding::adjoin_roots(&f, &[(0, 1)]).unwrap();
        let a12 = Omega2Form::basis(4, 2, 0, 1);
        let a34 = Omega2Form::basis(4, 2, 2, 3);
        assert!(restrict_omega2(&a12, &e).is_zero());
        assert_eq!(restrict_omega2(&a34, &e), a34);
        let r = restrict_omega2(&a12.add(&a34), &e);
        assert_eq!(r, a34);
        assert!(!r.is_zero());
    }

    #[test]
    fn kernel_examples() {
        let f = k(3);
        let (t1, t3) = (f.var(0), f.var(2));
        let parts = kernel_decompose(&Omega2Form::basis(3, 2, 0, 1), core::slice::from_ref(&t1))
            .unwrap()
            .unwrap();
        assert_eq!(parts, vec![Omega1Form::basis(3, 2, 1)]);
        let a = Omega2Form::basis(3, 2, 0, 2).scale(&t3);
        let parts = kernel_decompose(&a, core::slice::from_ref(&t1))
            .unwrap()
            .unwrap();
        assert_eq!(parts, vec![Omega1Form::basis(3, 2, 2).scale(&t3)]);
        assert_eq!(
            kernel_decompose(&Omega2Form::basis(3, 2, 1, 2), core::slice::from_ref(&t1)).unwrap(),
            None
        );
        assert_eq!(
            kernel_decompose(&a, &[t1.clone(), t1.mul(&t1).add(&t1)]),
            Err(Error::DependentGenerators)
        );
    }

    #[test]
    fn paired_bound_examples() {
        let f = k(4);
        let one = f.one();
        assert_eq!(
            lemma16_lower_bound(&[one.clone(), one.clone()], &f.p_basis()),
            Ok(2)
        );
        let g = k(2);
        assert_eq!(lemma16_lower_bound(&[g.one()], &g.p_basis()), Ok(1));
        let h = k(1);
        let t = h.var(0);
        assert!(matches!(
            lemma16_lower_bound(&[h.one()], &[t.clone(), t.add(&h.one())]),
            Err(Error::HypothesisFailed(_))
        ));
    }

    #[test]
    fn formatting() {
        let f = k(2);
        let a = Omega2Form::basis(2, 2, 0, 1).scale(&f.var(0).inv().unwrap());
        assert_eq!(format_omega2(&f, &a), "((1)/(t1)) * dt1^dt2");
        assert_eq!(format_omega1(&f, &d(&f.var(1))), "(1) * dt2");
        assert_eq!(pair_index(4, 2, 3), 5);
        assert_eq!(pair_index(4, 0, 3), 2);
    }
}
