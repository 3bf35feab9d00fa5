//! Residue fields `F_p(t_1, ..., t_n)`: descriptors, p-th power structure,
//! p-independence and field embeddings.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{Monomial, Poly};
use crate::ratfunc::RatFunc;

pub const SUPPORTED_PRIMES: [u32; 3] = [2, 3, 5];

/// `F_p(t_1, ..., t_n)`; the variables form a p-basis, so the p-rank is `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldDescriptor {
    p: u32,
    var_names: Vec<String>,
}

impl FieldDescriptor {
    pub fn new<S: AsRef<str>>(p: u32, var_names: &[S]) -> Result<Self> {
        if !SUPPORTED_PRIMES.contains(&p) {
            return Err(Error::UnsupportedPrime(p));
        }
        let names: Vec<String> = var_names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, a) in names.iter().enumerate() {
            if a.is_empty() || a == "pi" || a == "sym" {
                return Err(Error::InvalidField(format!("reserved or empty name {a:?}")));
            }
            if names[..i].contains(a) {
                return Err(Error::InvalidField(format!("duplicate variable {a}")));
            }
        }
        Ok(FieldDescriptor {
            p,
            var_names: names,
        })
    }

    /// `F_p(t1, ..., tn)` with the default variable names.
    pub fn standard(p: u32, n: usize) -> Result<Self> {
        let names: Vec<String> = (1..=n).map(|i| format!("t{i}")).collect();
        Self::new(p, &names)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.var_names.len()
    }

    pub fn p_rank(&self) -> usize {
        self.nvars()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.var_names.iter().position(|v| v == name)
    }

    pub fn zero(&self) -> RatFunc {
        RatFunc::zero(self.nvars(), self.p)
    }

    pub fn one(&self) -> RatFunc {
        RatFunc::one(self.nvars(), self.p)
    }

    pub fn constant(&self, c: i64) -> RatFunc {
        RatFunc::constant(self.nvars(), self.p, c)
    }

    pub fn var(&self, i: usize) -> RatFunc {
        RatFunc::var(self.nvars(), self.p, i)
    }

    /// The p-basis `t_1, ..., t_n`.
    pub fn p_basis(&self) -> Vec<RatFunc> {
        (0..self.nvars()).map(|i| self.var(i)).collect()
    }

    pub fn owns(&self, f: &RatFunc) -> bool {
        f.nvars() == self.nvars() && f.p() == self.p
    }

    pub fn format_poly(&self, f: &Poly) -> String {
        format_poly(f, &self.var_names)
    }

    /// Renders in the textual element grammar, e.g. `(t1^2*t2 + 1)/(t2)`.
    pub fn format(&self, f: &RatFunc) -> String {
        if f.den().is_one() {
            return format_poly(f.num(), &self.var_names);
        }
        format!(
            "({})/({})",
            format_poly(f.num(), &self.var_names),
            format_poly(f.den(), &self.var_names)
        )
    }
}

pub fn format_monomial(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (e, name) in m.exps().iter().zip(names) {
        match e {
            0 => {}
            1 => parts.push(name.clone()),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

/// Terms from the graded-lex leading term down, joined by ` + `.
pub fn format_poly(f: &Poly, names: &[String]) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let terms: Vec<String> = f
        .terms()
        .rev()
        .map(|(m, c)| {
            if m.is_one() {
                format!("{c}")
            } else if c == 1 {
                format_monomial(m, names)
            } else {
                format!("{c}*{}", format_monomial(m, names))
            }
        })
        .collect();
    terms.join(" + ")
}

/// Returns `g` with `g^p = f` when `f` is a p-th power.
///
/// In `F_p(t)` this happens exactly when every exponent of the canonical
/// numerator and denominator is divisible by `p`.
pub fn pth_root(f: &RatFunc) -> Option<RatFunc> {
    let p = f.p();
    let divisible = |q: &Poly| q.terms().all(|(m, _)| m.exps().iter().all(|e| e % p == 0));
    if !divisible(f.num()) || !divisible(f.den()) {
        return None;
    }
    let n = f.nvars();
    let shrink = |q: &Poly| {
        q.map_monomials(n, |m| {
            Monomial::new(m.exps().iter().map(|e| e / p).collect())
        })
    };
    Some(RatFunc::new(shrink(f.num()), shrink(f.den())).expect("nonzero denominator"))
}

/// `f = sum_e c_e^p t^e` over exponent vectors `e` in `[0, p)^n`; zero parts omitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusDecomposition {
    parts: BTreeMap<Vec<u32>, RatFunc>,
    nvars: usize,
    p: u32,
}

impl FrobeniusDecomposition {
    pub fn parts(&self) -> &BTreeMap<Vec<u32>, RatFunc> {
        &self.parts
    }

    pub fn coefficient(&self, e: &[u32]) -> RatFunc {
        self.parts
            .get(e)
            .cloned()
            .unwrap_or_else(|| RatFunc::zero(self.nvars, self.p))
    }

    /// Expands `sum_e c_e^p t^e`.
    pub fn reconstruct(&self) -> RatFunc {
        let mut acc = RatFunc::zero(self.nvars, self.p);
        for (e, c) in &self.parts {
            let mono = RatFunc::from_poly(Poly::monomial(Monomial::new(e.clone()), self.p, 1));
            acc = acc.add(&c.frobenius().mul(&mono));
        }
        acc
    }
}

/// Clears the denominator with `den^p`, then sorts numerator monomials by
/// exponent residues modulo `p`.
pub fn frobenius_decompose(f: &RatFunc) -> FrobeniusDecomposition {
    let p = f.p();
    let n = f.nvars();
    let num = f.num().mul(&f.den().pow(p - 1));
    let mut groups: BTreeMap<Vec<u32>, Vec<(Vec<u32>, i64)>> = BTreeMap::new();
    for (m, c) in num.terms() {
        let e: Vec<u32> = m.exps().iter().map(|x| x % p).collect();
        let k: Vec<u32> = m.exps().iter().map(|x| x / p).collect();
        groups.entry(e).or_default().push((k, c as i64));
    }
    let parts = groups
        .into_iter()
        .map(|(e, terms)| {
            let c = RatFunc::new(Poly::from_terms(n, p, terms), f.den().clone())
                .expect("nonzero denominator");
            (e, c)
        })
        .filter(|(_, c)| !c.is_zero())
        .collect();
    FrobeniusDecomposition { parts, nvars: n, p }
}

/// Outcome of a p-independence test with its rank certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PIndependence {
    pub independent: bool,
    pub rank: usize,
    /// Pivot columns (variable indices) of the Jacobian.
    pub pivots: Vec<usize>,
}

/// Jacobian matrix `(d a_i / d t_j)`.
pub fn jacobian(elems: &[RatFunc]) -> Vec<Vec<RatFunc>> {
    elems
        .iter()
        .map(|a| (0..a.nvars()).map(|j| a.derivative(j)).collect())
        .collect()
}

/// `k` elements are p-independent iff their differentials are linearly
/// independent, i.e. the Jacobian has rank `k`.
pub fn p_independence(elems: &[RatFunc]) -> PIndependence {
    let (rank, pivots) = linalg::rank(&jacobian(elems));
    PIndependence {
        independent: rank == elems.len(),
        rank,
        pivots,
    }
}

/// A general field homomorphism `t_j -> images[j]`; source and target are
/// rational function fields over the same prime field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    source_nvars: usize,
    images: Vec<RatFunc>,
}

impl Substitution {
    pub fn new(source_nvars: usize, images: Vec<RatFunc>) -> Result<Self> {
        if images.len() != source_nvars {
            return Err(Error::Mismatch("one image per source variable".into()));
        }
        if let Some(first) = images.first() {
            if images
                .iter()
                .any(|g| g.nvars() != first.nvars() || g.p() != first.p())
            {
                return Err(Error::Mismatch("images live in different fields".into()));
            }
        }
        Ok(Substitution {
            source_nvars,
            images,
        })
    }

    pub fn identity(field: &FieldDescriptor) -> Self {
        Substitution {
            source_nvars: field.nvars(),
            images: field.p_basis(),
        }
    }

    pub fn images(&self) -> &[RatFunc] {
        &self.images
    }

    pub fn source_nvars(&self) -> usize {
        self.source_nvars
    }

    fn eval_poly(&self, f: &Poly, target_nvars: usize) -> RatFunc {
        let p = f.modulus();
        let mut acc = RatFunc::zero(target_nvars, p);
        for (m, c) in f.terms() {
            let mut term = RatFunc::constant(target_nvars, p, c as i64);
            for (img, e) in self.images.iter().zip(m.exps()) {
                if *e > 0 {
                    term = term.mul(&img.pow(*e as i64).expect("nonnegative power"));
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    pub fn apply(&self, f: &RatFunc) -> RatFunc {
        let tn = self.images.first().map(RatFunc::nvars).unwrap_or(f.nvars());
        let num = self.eval_poly(f.num(), tn);
        let den = self.eval_poly(f.den(), tn);
        num.div(&den)
            .expect("field homomorphisms keep denominators nonzero")
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Substitution) -> Substitution {
        Substitution {
            source_nvars: self.source_nvars,
            images: self.images.iter().map(|g| next.apply(g)).collect(),
        }
    }
}

/// Purely inseparable relabelling embedding: `t_j -> s_{target(j)}^(p^{r_j})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    source: FieldDescriptor,
    target: FieldDescriptor,
    var_images: Vec<(usize, u32)>,
}

impl Embedding {
    pub fn new(
        source: FieldDescriptor,
        target: FieldDescriptor,
        var_images: Vec<(usize, u32)>,
    ) -> Result<Self> {
        if source.p() != target.p() {
            return Err(Error::Mismatch(
                "source and target characteristics differ".into(),
            ));
        }
        if var_images.len() != source.nvars() {
            return Err(Error::Mismatch("one image per source variable".into()));
        }
        for (i, (t, _)) in var_images.iter().enumerate() {
            if *t >= target.nvars() || var_images[..i].iter().any(|(u, _)| u == t) {
                return Err(Error::Mismatch(
                    "variable images must be distinct target variables".into(),
                ));
            }
        }
        Ok(Embedding {
            source,
            target,
            var_images,
        })
    }

    pub fn identity(field: &FieldDescriptor) -> Self {
        Embedding {
            source: field.clone(),
            target: field.clone(),
            var_images: (0..field.nvars()).map(|j| (j, 0)).collect(),
        }
    }

    /// Adjoins `t_j^(1/p^r)` for each `(j, r)`; the root of `t_j` is renamed
    /// `<name>_<p^r>` in the target field and the other variables keep their names.
    pub fn adjoin_roots(field: &FieldDescriptor, roots: &[(usize, u32)]) -> Result<Self> {
        let mut exps = alloc::vec![0u32; field.nvars()];
        for &(j, r) in roots {
            if j >= field.nvars() {
                return Err(Error::Mismatch(format!("no variable with index {j}")));
            }
            exps[j] = r;
        }
        let names: Vec<String> = field
            .var_names()
            .iter()
            .zip(&exps)
            .map(|(name, &r)| {
                if r == 0 {
                    name.clone()
                } else {
                    format!("{name}_{}", field.p().pow(r))
                }
            })
            .collect();
        let target = FieldDescriptor::new(field.p(), &names)?;
        Self::new(
            field.clone(),
            target,
            exps.into_iter().enumerate().collect(),
        )
    }

    pub fn source(&self) -> &FieldDescriptor {
        &self.source
    }

    pub fn target(&self) -> &FieldDescriptor {
        &self.target
    }

    pub fn var_images(&self) -> &[(usize, u32)] {
        &self.var_images
    }

    /// Degree of the target over the image of the source, counting only the
    /// radical part (`prod_j p^{r_j}`).
    pub fn degree(&self) -> u64 {
        self.var_images
            .iter()
            .map(|(_, r)| (self.source.p() as u64).pow(*r))
            .product()
    }

    fn map_monomial(&self, m: &Monomial) -> Monomial {
        let p = self.source.p();
        let mut out = alloc::vec![0u32; self.target.nvars()];
        for (e, (t, r)) in m.exps().iter().zip(&self.var_images) {
            out[*t] += e * p.pow(*r);
        }
        Monomial::new(out)
    }

    pub fn embed_poly(&self, f: &Poly) -> Poly {
        f.map_monomials(self.target.nvars(), |m| self.map_monomial(m))
    }

    pub fn embed(&self, f: &RatFunc) -> RatFunc {
        RatFunc::new(self.embed_poly(f.num()), self.embed_poly(f.den()))
            .expect("monomial substitution keeps denominators nonzero")
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Embedding) -> Result<Embedding> {
        if next.source != self.target {
            return Err(Error::Mismatch("embeddings do not compose".into()));
        }
        let images = self
            .var_images
            .iter()
            .map(|(t, r)| {
                let (u, r2) = next.var_images[*t];
                (u, r + r2)
            })
            .collect();
        Embedding::new(self.source.clone(), next.target.clone(), images)
    }

    pub fn to_substitution(&self) -> Substitution {
        let p = self.source.p();
        let n = self.target.nvars();
        let images = self
            .var_images
            .iter()
            .map(|(t, r)| RatFunc::from_poly(Poly::var(n, p, *t).pow(p.pow(*r))))
            .collect();
        Substitution {
            source_nvars: self.source.nvars(),
            images,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn f2(n: usize) -> FieldDescriptor {
        FieldDescriptor::standard(2, n).unwrap()
    }

    #[test]
    fn descriptor_validation() {
        assert_eq!(
            FieldDescriptor::standard(7, 1),
            Err(Error::UnsupportedPrime(7))
        );
        assert!(FieldDescriptor::new(2, &["t", "t"]).is_err());
        assert_eq!(f2(3).p_rank(), 3);
    }

    #[test]
    fn pth_root_examples() {
        let k = f2(1);
        let t = k.var(0);
        assert_eq!(pth_root(&t.mul(&t)), Some(t.clone()));
        assert_eq!(pth_root(&t), None);
        let k2 = f2(2);
        let (a, b) = (k2.var(0), k2.var(1));
        let sq = a.mul(&a).mul(&b).mul(&b);
        assert_eq!(pth_root(&sq), Some(a.mul(&b)));
    }

    #[test]
    fn frobenius_examples() {
        let k = f2(1);
        let t = k.var(0);
        // t^3 + t = (t + 1)^2 * t
        let f = t.mul(&t).mul(&t).add(&t);
        let d = frobenius_decompose(&f);
        assert_eq!(d.coefficient(&[1]), t.add(&k.one()));
        assert!(d.coefficient(&[0]).is_zero());
        assert_eq!(frobenius_decompose(&t.mul(&t)).coefficient(&[0]), t);
        assert_eq!(frobenius_decompose(&t).coefficient(&[1]), k.one());
        assert_eq!(d.reconstruct(), f);
    }

    #[test]
    fn p_independence_examples() {
        let k = f2(2);
        let (a, b) = (k.var(0), k.var(1));
        assert!(p_independence(&[a.clone(), b.clone()]).independent);
        let k1 = f2(1);
        let t = k1.var(0);
        assert!(!p_independence(&[t.clone(), t.add(&k1.one())]).independent);
        let r = p_independence(&[a.clone(), a.mul(&a).mul(&b).mul(&b)]);
        assert!(!r.independent);
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn embedding_examples() {
        let k = f2(2);
        let e = Embedding::adjoin_roots(&k, &[(0, 1)]).unwrap();
        let s = e.target().clone();
        let (s1, s2) = (s.var(0), s.var(1));
        assert_eq!(e.embed(&k.var(0)), s1.mul(&s1));
        assert_eq!(e.embed(&k.var(0).add(&k.var(1))), s1.mul(&s1).add(&s2));
        assert_eq!(
            e.embed(&k.var(0).inv().unwrap()),
            s1.mul(&s1).inv().unwrap()
        );
        assert_eq!(e.degree(), 2);
        assert_eq!(s.var_names()[0], "t1_2");
        assert_eq!(s.format(&e.embed(&k.var(0).inv().unwrap())), "(1)/(t1_2^2)");
    }
}
