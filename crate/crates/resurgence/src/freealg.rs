//! Free graded algebra on symbols B_n, mould expansions, and a derivation harness.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::mould::Mould;
use crate::scalars::{factorial, ExactScalar};
use crate::words::{Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grading {
    /// Truncate words longer than this.
    Length(usize),
    /// Truncate integer words of weight above this (other letters weigh 1).
    Weight(i64),
}

impl Grading {
    pub fn grade(&self, w: &Word) -> i64 {
        match self {
            Grading::Length(_) => w.len() as i64,
            Grading::Weight(_) => w
                .letters()
                .iter()
                .map(|l| match l {
                    Letter::Int(n) => *n,
                    _ => 1,
                })
                .sum(),
        }
    }
    fn max(&self) -> i64 {
        match self {
            Grading::Length(n) => *n as i64,
            Grading::Weight(n) => *n,
        }
    }
    pub fn keeps(&self, w: &Word) -> bool {
        self.grade(w) <= self.max()
    }
}

/// Element of the free algebra. A key word `[a, b, c]` stands for the product B_a B_b B_c
/// read left to right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeElement {
    pub terms: BTreeMap<Word, ExactScalar>,
    pub grading: Grading,
}

impl FreeElement {
    pub fn zero(grading: Grading) -> Self {
        FreeElement { terms: BTreeMap::new(), grading }
    }
    pub fn unit(grading: Grading) -> Self {
        Self::monomial(Word::empty(), ExactScalar::one(), grading)
    }
    pub fn symbol(l: Letter, grading: Grading) -> Self {
        Self::monomial(Word::single(l), ExactScalar::one(), grading)
    }
    pub fn monomial(w: Word, c: ExactScalar, grading: Grading) -> Self {
        let mut e = Self::zero(grading);
        e.add_term(w, c);
        e
    }

    fn add_term(&mut self, w: Word, c: ExactScalar) {
        if c.is_zero() || !self.grading.keeps(&w) {
            return;
        }
        let v = self.terms.remove(&w).unwrap_or_default();
        let s = &v + &c;
        if !s.is_zero() {
            self.terms.insert(w, s);
        }
    }

    pub fn coeff(&self, w: &Word) -> ExactScalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Homogeneous component of grade k.
    pub fn component(&self, k: i64) -> Self {
        let mut e = Self::zero(self.grading);
        for (w, c) in &self.terms {
            if self.grading.grade(w) == k {
                e.add_term(w.clone(), c.clone());
            }
        }
        e
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut e = self.clone();
        for (w, c) in &o.terms {
            e.add_term(w.clone(), c.clone());
        }
        e
    }
    pub fn scale(&self, c: &ExactScalar) -> Self {
        let mut e = Self::zero(self.grading);
        for (w, v) in &self.terms {
            e.add_term(w.clone(), v * c);
        }
        e
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&ExactScalar::from_int(-1)))
    }
    pub fn mul(&self, o: &Self) -> Self {
        let mut e = Self::zero(self.grading);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let w = Word::new(a.letters().iter().chain(b.letters()).cloned().collect());
                e.add_term(w, x * y);
            }
        }
        e
    }
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }
    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::unit(self.grading), |acc, _| acc.mul(self))
    }

    /// exp(x) truncated at the grading; x must have no constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeff(&Word::empty()).is_zero() {
            return Err(Error::Precondition("exp of an element with a constant term".into()));
        }
        let mut acc = Self::unit(self.grading);
        let mut power = acc.clone();
        for k in 1..=self.grading.max().max(0) as u64 {
            power = power.mul(self);
            if power.is_zero() {
                break;
            }
            let f = ExactScalar::from_rational(BigRational::new(BigInt::from(1), factorial(k)));
            acc = acc.add(&power.scale(&f));
        }
        Ok(acc)
    }
}

fn mould_grading(m: &Mould) -> Grading {
    match m.max_weight() {
        Some(w) => Grading::Weight(w),
        None => Grading::Length(m.max_length()),
    }
}

/// MB = sum M^w B_w with B_w = B_{w_r} ... B_{w_1}.
pub fn mould_expand(m: &Mould) -> FreeElement {
    let mut e = FreeElement::zero(mould_grading(m));
    for (w, c) in m.entries() {
        e.add_term(w.reversed(), c.clone());
    }
    e
}

/// The nested bracket [B_{w_r}, [..., [B_{w_2}, B_{w_1}]...]].
pub fn bracket(w: &Word, grading: Grading) -> FreeElement {
    let ls = w.letters();
    let mut e = FreeElement::symbol(ls[0].clone(), grading);
    for l in &ls[1..] {
        e = FreeElement::symbol(l.clone(), grading).commutator(&e);
    }
    e
}

/// M[B] = sum over nonempty w of (1/r) M^w B_[w].
pub fn lie_expand(m: &Mould) -> Result<FreeElement> {
    if !m.get(&Word::empty()).is_zero() {
        return Err(Error::Precondition("lie_expand needs a zero empty-word entry".into()));
    }
    let g = mould_grading(m);
    let mut e = FreeElement::zero(g);
    for (w, c) in m.entries() {
        if w.is_empty() || c.is_zero() {
            continue;
        }
        e = e.add(&bracket(w, g).scale(&c.scale_rational(&BigRational::new(1.into(), (w.len() as i64).into()))));
    }
    Ok(e)
}

/// Weight-k components (k = 1..K) of exp(sum_j B_j), B_j of weight j.
pub fn stokes_components(k_max: usize) -> Result<Vec<FreeElement>> {
    if k_max == 0 {
        return Err(Error::Precondition("K must be positive".into()));
    }
    let g = Grading::Weight(k_max as i64);
    let x = (1..=k_max as i64).fold(FreeElement::zero(g), |acc, j| acc.add(&FreeElement::symbol(Letter::Int(j), g)));
    let e = x.exp()?;
    Ok((1..=k_max as i64).map(|k| e.component(k)).collect())
}

/// Polynomial in finitely many variables: exponent vector to coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    pub terms: BTreeMap<Vec<u32>, ExactScalar>,
}

impl Poly {
    pub fn constant(n: usize, c: ExactScalar) -> Poly {
        let mut p = Poly::default();
        p.add_term(vec![0; n], c);
        p
    }
    pub fn var(n: usize, i: usize) -> Poly {
        let mut e = vec![0; n];
        e[i] = 1;
        let mut p = Poly::default();
        p.add_term(e, ExactScalar::one());
        p
    }
    pub fn add_term(&mut self, e: Vec<u32>, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        let v = self.terms.remove(&e).unwrap_or_default();
        let s = &v + &c;
        if !s.is_zero() {
            self.terms.insert(e, s);
        }
    }
    pub fn add(&self, o: &Poly) -> Poly {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }
    pub fn scale(&self, c: &ExactScalar) -> Poly {
        let mut p = Poly::default();
        for (e, v) in &self.terms {
            p.add_term(e.clone(), v * c);
        }
        p
    }
    pub fn mul(&self, o: &Poly) -> Poly {
        let mut p = Poly::default();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                p.add_term(a.iter().zip(b).map(|(i, j)| i + j).collect(), x * y);
            }
        }
        p
    }
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }
    pub fn truncate(&self, deg: u32) -> Poly {
        Poly { terms: self.terms.iter().filter(|(e, _)| e.iter().sum::<u32>() <= deg).map(|(e, c)| (e.clone(), c.clone())).collect() }
    }
}

/// Symbols acting as derivations of a polynomial algebra.
#[derive(Clone, Debug)]
pub struct DerivationAction {
    pub variables: usize,
    pub images: BTreeMap<(Letter, usize), Poly>,
    pub degree: u32,
}

impl DerivationAction {
    fn derive(&self, l: &Letter, p: &Poly) -> Result<Poly> {
        let mut out = Poly::default();
        for (e, c) in &p.terms {
            for i in 0..self.variables {
                if e[i] == 0 {
                    continue;
                }
                let img = self
                    .images
                    .get(&(l.clone(), i))
                    .ok_or_else(|| Error::Precondition(format!("symbol {l} has no image for variable {i}")))?;
                let mut lower = e.clone();
                lower[i] -= 1;
                let mut m = Poly::default();
                m.add_term(lower, c.scale_int(e[i] as i64));
                out = out.add(&m.mul(img));
            }
        }
        Ok(out.truncate(self.degree))
    }

    /// Applies a word of symbols, rightmost symbol first.
    pub fn apply_word(&self, w: &Word, p: &Poly) -> Result<Poly> {
        let mut q = p.truncate(self.degree);
        for l in w.letters().iter().rev() {
            q = self.derive(l, &q)?;
        }
        Ok(q)
    }
}

pub fn apply_action(e: &FreeElement, act: &DerivationAction, p: &Poly) -> Result<Poly> {
    let mut out = Poly::default();
    for (w, c) in &e.terms {
        out = out.add(&act.apply_word(w, p)?.scale(c));
    }
    Ok(out)
}
