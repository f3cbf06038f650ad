//! Truncated moulds over a finite alphabet.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{factorial, ExactScalar, GaussRat};
use crate::words::{
    all_words, deconcatenations, shuffle_product, splittings, stuffle_expansion, Carrier, Letter, Word,
    WordCounts,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    pub carrier: Carrier,
    pub letters: Vec<Letter>,
}

impl Alphabet {
    pub fn new(mut letters: Vec<Letter>) -> Result<Alphabet> {
        let carrier = letters
            .first()
            .map(Letter::carrier)
            .ok_or_else(|| Error::Precondition("empty alphabet".into()))?;
        if letters.iter().any(|l| l.carrier() != carrier) {
            return Err(Error::CarrierMismatch("mixed alphabet".into()));
        }
        letters.sort();
        letters.dedup();
        Ok(Alphabet { carrier, letters })
    }
    pub fn ints(xs: &[i64]) -> Alphabet {
        Alphabet::new(xs.iter().map(|&x| Letter::Int(x)).collect()).expect("nonempty")
    }
    /// {1, ..., n}
    pub fn ints_upto(n: i64) -> Alphabet {
        Alphabet::ints(&(1..=n).collect::<Vec<_>>())
    }
    pub fn contains(&self, l: &Letter) -> bool {
        self.letters.binary_search(l).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mould {
    alphabet: Alphabet,
    max_length: usize,
    max_weight: Option<i64>,
    entries: BTreeMap<Word, ExactScalar>,
}

fn int_weight(w: &Word) -> Option<i64> {
    w.int_letters().map(|v| v.iter().sum())
}

impl Mould {
    pub fn zero(alphabet: Alphabet, max_length: usize) -> Mould {
        let mut entries = BTreeMap::new();
        entries.insert(Word::empty(), ExactScalar::zero());
        Mould { alphabet, max_length, max_weight: None, entries }
    }

    /// Restricts the domain to integer words of total weight at most `w`.
    pub fn with_max_weight(mut self, w: i64) -> Result<Mould> {
        if self.alphabet.carrier != Carrier::Int {
            return Err(Error::Precondition("weight truncation needs integer letters".into()));
        }
        self.max_weight = Some(w);
        self.entries.retain(|k, _| k.is_empty() || int_weight(k).is_some_and(|x| x <= w));
        Ok(self)
    }

    /// The same shape with no entries.
    pub fn blank(&self) -> Mould {
        Mould { entries: BTreeMap::from([(Word::empty(), ExactScalar::zero())]), ..self.clone() }
    }

    pub fn from_fn(
        alphabet: Alphabet,
        max_length: usize,
        max_weight: Option<i64>,
        mut f: impl FnMut(&Word) -> Result<ExactScalar>,
    ) -> Result<Mould> {
        let mut m = Mould::zero(alphabet, max_length);
        if let Some(w) = max_weight {
            m = m.with_max_weight(w)?;
        }
        for w in m.words() {
            let v = f(&w)?;
            m.set(w, v)?;
        }
        Ok(m)
    }

    /// The unit: 1 on the empty word, 0 elsewhere.
    pub fn one(alphabet: Alphabet, max_length: usize) -> Mould {
        let mut m = Mould::zero(alphabet, max_length);
        m.entries.insert(Word::empty(), ExactScalar::one());
        m
    }

    /// I: 1 on every one-letter word.
    pub fn identity(alphabet: Alphabet, max_length: usize) -> Mould {
        let mut m = Mould::zero(alphabet.clone(), max_length);
        if max_length >= 1 {
            for l in &alphabet.letters {
                m.entries.insert(Word::single(l.clone()), ExactScalar::one());
            }
        }
        m
    }

    /// Exp_w: w^r / r! on words of length r.
    pub fn exp_w(alphabet: Alphabet, max_length: usize, w: &ExactScalar) -> Mould {
        Mould::from_fn(alphabet, max_length, None, |word| {
            let r = word.len();
            let f = ExactScalar::from_rational(BigRational::from_integer(factorial(r as u64)));
            w.pow(r as i32)?.checked_div(&f)
        })
        .expect("exp_w entries are polynomial")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }
    pub fn carrier(&self) -> Carrier {
        self.alphabet.carrier
    }
    pub fn max_length(&self) -> usize {
        self.max_length
    }
    pub fn max_weight(&self) -> Option<i64> {
        self.max_weight
    }

    pub fn in_domain(&self, w: &Word) -> bool {
        w.len() <= self.max_length
            && w.letters().iter().all(|l| self.alphabet.contains(l))
            && match self.max_weight {
                Some(mw) => int_weight(w).is_some_and(|x| x <= mw),
                None => true,
            }
    }

    /// Every word of the domain, shortest first.
    pub fn words(&self) -> Vec<Word> {
        let mut ws = all_words(&self.alphabet.letters, self.max_length);
        if let Some(mw) = self.max_weight {
            ws.retain(|w| int_weight(w).is_some_and(|x| x <= mw));
        }
        ws
    }

    pub fn get(&self, w: &Word) -> ExactScalar {
        self.entries.get(w).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, w: Word, v: ExactScalar) -> Result<()> {
        if !self.in_domain(&w) {
            return Err(Error::CarrierEscape(w.to_string()));
        }
        if v.is_zero() && !w.is_empty() {
            self.entries.remove(&w);
        } else {
            self.entries.insert(w, v);
        }
        Ok(())
    }

    /// Nonzero entries and the empty-word entry, in word order.
    pub fn entries(&self) -> impl Iterator<Item = (&Word, &ExactScalar)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(ExactScalar::is_zero)
    }

    fn same_shape(&self, o: &Mould) -> Result<()> {
        if self.alphabet != o.alphabet || self.max_weight != o.max_weight {
            return Err(Error::CarrierMismatch("moulds over different alphabets".into()));
        }
        Ok(())
    }

    /// Restriction to a shorter truncation.
    pub fn truncate(&self, max_length: usize) -> Mould {
        let mut m = self.clone();
        m.max_length = max_length.min(self.max_length);
        m.entries.retain(|w, _| w.len() <= m.max_length);
        m
    }

    fn map_entries(&self, f: impl Fn(&ExactScalar) -> ExactScalar) -> Mould {
        let mut m = self.blank();
        for (w, v) in &self.entries {
            m.set(w.clone(), f(v)).expect("same domain");
        }
        m
    }

    pub fn scale(&self, c: &ExactScalar) -> Mould {
        self.map_entries(|v| v * c)
    }

    pub fn neg(&self) -> Mould {
        self.map_entries(|v| -v)
    }

    pub fn add(&self, o: &Mould) -> Result<Mould> {
        self.same_shape(o)?;
        let mut m = self.truncate(o.max_length);
        for (w, v) in &o.entries {
            if w.len() <= m.max_length {
                let s = &m.get(w) + v;
                m.set(w.clone(), s)?;
            }
        }
        Ok(m)
    }

    pub fn sub(&self, o: &Mould) -> Result<Mould> {
        self.add(&o.neg())
    }

    /// (M x N)^w = sum over w = ab of M^a N^b.
    pub fn product(&self, o: &Mould) -> Result<Mould> {
        self.same_shape(o)?;
        let mut m = self.blank();
        m.max_length = self.max_length.min(o.max_length);
        for w in m.words() {
            let mut acc = ExactScalar::zero();
            for (a, b) in deconcatenations(&w) {
                let (x, y) = (self.get(&a), o.get(&b));
                if !x.is_zero() && !y.is_zero() {
                    acc = &acc + &(&x * &y);
                }
            }
            m.set(w, acc)?;
        }
        Ok(m)
    }

    pub fn commutator(&self, o: &Mould) -> Result<Mould> {
        self.product(o)?.sub(&o.product(self)?)
    }

    /// (M o U)^w = sum over w = w^1...w^s of M^(||w^1||,...,||w^s||) U^(w^1)...U^(w^s).
    pub fn compose(&self, u: &Mould) -> Result<Mould> {
        if self.carrier() != u.carrier() {
            return Err(Error::CarrierMismatch("compose across carriers".into()));
        }
        let mut m = u.blank();
        m.max_length = self.max_length.min(u.max_length);
        for w in m.words() {
            if w.is_empty() {
                m.set(w, self.get(&Word::empty()))?;
                continue;
            }
            let mut acc = ExactScalar::zero();
            for s in 1..=w.len() {
                for parts in splittings(&w, s) {
                    let mut prod = ExactScalar::one();
                    for p in &parts {
                        let v = u.get(p);
                        if v.is_zero() {
                            prod = ExactScalar::zero();
                            break;
                        }
                        prod = &prod * &v;
                    }
                    if prod.is_zero() {
                        continue;
                    }
                    let comp = Word::new(
                        parts
                            .iter()
                            .map(|p| p.norm().map(|n| n.expect("nonempty factor")))
                            .collect::<Result<Vec<_>>>()?,
                    );
                    if !self.in_domain(&comp) {
                        return Err(Error::CarrierEscape(comp.to_string()));
                    }
                    acc = &acc + &(&self.get(&comp) * &prod);
                }
            }
            m.set(w, acc)?;
        }
        Ok(m)
    }

    /// exp(M) = sum M^(x k) / k!, for M^empty = 0.
    pub fn exp(&self) -> Result<Mould> {
        if !self.get(&Word::empty()).is_zero() {
            return Err(Error::Precondition("exp needs a zero empty-word entry".into()));
        }
        let mut acc = Mould::one(self.alphabet.clone(), self.max_length);
        acc.max_weight = self.max_weight;
        let mut power = acc.clone();
        for k in 1..=self.max_length {
            power = power.product(self)?;
            let f = ExactScalar::from_rational(BigRational::from_integer(factorial(k as u64)));
            acc = acc.add(&power.scale(&f.inv()?))?;
        }
        Ok(acc)
    }

    /// log(M) = sum (-1)^(k+1) (M - 1)^(x k) / k, for M^empty = 1.
    pub fn log(&self) -> Result<Mould> {
        if !self.get(&Word::empty()).is_one() {
            return Err(Error::Precondition("log needs empty-word entry 1".into()));
        }
        let mut one = Mould::one(self.alphabet.clone(), self.max_length);
        one.max_weight = self.max_weight;
        let n = self.sub(&one)?;
        let mut acc = self.blank();
        let mut power = one;
        for k in 1..=self.max_length {
            power = power.product(&n)?;
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&power.scale(&ExactScalar::from_ratio(sign, k as i64)))?;
        }
        Ok(acc)
    }

    pub fn mult_inverse(&self) -> Result<Mould> {
        let e = self.get(&Word::empty());
        let ei = e.inv().map_err(|_| Error::NotInvertible(format!("empty-word entry {e}")))?;
        let mut inv = self.blank();
        for w in self.words() {
            if w.is_empty() {
                inv.set(w, ei.clone())?;
                continue;
            }
            let mut acc = ExactScalar::zero();
            for (a, b) in deconcatenations(&w) {
                if a.is_empty() {
                    continue;
                }
                let x = self.get(&a);
                if !x.is_zero() {
                    acc = &acc + &(&x * &inv.get(&b));
                }
            }
            inv.set(w, -&(&ei * &acc))?;
        }
        Ok(inv)
    }

    /// W with (U o W) = I; needs U^empty = 0 and invertible one-letter entries.
    pub fn comp_inverse(&self) -> Result<Mould> {
        if !self.get(&Word::empty()).is_zero() {
            return Err(Error::Precondition("comp_inverse needs a zero empty-word entry".into()));
        }
        let mut inv = self.blank();
        for w in self.words() {
            if w.is_empty() {
                continue;
            }
            let norm = Word::single(w.norm()?.expect("nonempty"));
            if !self.in_domain(&norm) {
                return Err(Error::CarrierEscape(norm.to_string()));
            }
            let lead = self.get(&norm);
            let lead_inv = lead.inv().map_err(|_| Error::NotInvertible(format!("entry at {norm}: {lead}")))?;
            if w.len() == 1 {
                inv.set(w, lead_inv)?;
                continue;
            }
            let mut acc = ExactScalar::zero();
            for s in 2..=w.len() {
                for parts in splittings(&w, s) {
                    let mut prod = ExactScalar::one();
                    for p in &parts {
                        prod = &prod * &inv.get(p);
                        if prod.is_zero() {
                            break;
                        }
                    }
                    if prod.is_zero() {
                        continue;
                    }
                    let comp = Word::new(
                        parts.iter().map(|p| p.norm().map(|n| n.expect("nonempty"))).collect::<Result<Vec<_>>>()?,
                    );
                    if !self.in_domain(&comp) {
                        return Err(Error::CarrierEscape(comp.to_string()));
                    }
                    acc = &acc + &(&self.get(&comp) * &prod);
                }
            }
            inv.set(w, -&(&lead_inv * &acc))?;
        }
        Ok(inv)
    }

    /// Pairs (a, b) of nonempty words whose shuffles or stuffles are checked.
    fn pairs(&self) -> Vec<(Word, Word)> {
        let ws: Vec<Word> = self.words().into_iter().filter(|w| !w.is_empty()).collect();
        let mut out = vec![];
        for a in &ws {
            for b in &ws {
                if a.len() + b.len() > self.max_length {
                    continue;
                }
                if let Some(mw) = self.max_weight {
                    if int_weight(a).unwrap_or(0) + int_weight(b).unwrap_or(0) > mw {
                        continue;
                    }
                }
                out.push((a.clone(), b.clone()));
            }
        }
        out
    }

    fn check(&self, kind: Symmetry) -> bool {
        let get = |w: &Word| -> Option<ExactScalar> { self.in_domain(w).then(|| self.get(w)) };
        check_symmetry(&self.pairs(), get, kind, |x: &ExactScalar, y: &ExactScalar| x == y)
    }

    pub fn is_alternal(&self) -> bool {
        self.check(Symmetry::Alternal)
    }
    pub fn is_symmetral(&self) -> bool {
        self.check(Symmetry::Symmetral)
    }
    pub fn is_alternel(&self) -> bool {
        self.check(Symmetry::Alternel)
    }
    pub fn is_symmetrel(&self) -> bool {
        self.check(Symmetry::Symmetrel)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&MouldJson::from(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Mould> {
        let j: MouldJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        j.try_into()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    Alternal,
    Symmetral,
    Alternel,
    Symmetrel,
}

/// Values a symmetry relation can be checked on.
pub trait RelationValue: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn times(&self, k: u64) -> Self;
}

impl RelationValue for ExactScalar {
    fn zero() -> Self {
        ExactScalar::zero()
    }
    fn one() -> Self {
        ExactScalar::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn times(&self, k: u64) -> Self {
        self.scale(&GaussRat::from_rational(BigRational::from_integer(BigInt::from(k))))
    }
}

impl RelationValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn times(&self, k: u64) -> Self {
        self * k as f64
    }
}

/// Checks a shuffle or stuffle relation on the given pairs. Pairs whose expansion
/// leaves the domain (`get` returns None) are skipped.
pub fn check_symmetry<V: RelationValue>(
    pairs: &[(Word, Word)],
    get: impl Fn(&Word) -> Option<V>,
    kind: Symmetry,
    eq: impl Fn(&V, &V) -> bool,
) -> bool {
    let Some(e) = get(&Word::empty()) else { return false };
    let unit_ok = match kind {
        Symmetry::Alternal | Symmetry::Alternel => eq(&e, &V::zero()),
        Symmetry::Symmetral | Symmetry::Symmetrel => eq(&e, &V::one()),
    };
    if !unit_ok {
        return false;
    }
    for (a, b) in pairs {
        let expansion: WordCounts = match kind {
            Symmetry::Alternal | Symmetry::Symmetral => shuffle_product(a, b),
            _ => match stuffle_expansion(a, b) {
                Ok(x) => x,
                Err(_) => continue,
            },
        };
        let mut lhs = V::zero();
        let mut inside = true;
        for (w, c) in &expansion {
            match get(w) {
                Some(v) => lhs = lhs.add(&v.times(*c)),
                None => {
                    inside = false;
                    break;
                }
            }
        }
        if !inside {
            continue;
        }
        let rhs = match kind {
            Symmetry::Alternal | Symmetry::Alternel => V::zero(),
            _ => match (get(a), get(b)) {
                (Some(x), Some(y)) => x.mul(&y),
                _ => continue,
            },
        };
        if !eq(&lhs, &rhs) {
            return false;
        }
    }
    true
}

/// Parameters of the passage mould P_{theta, theta'}.
#[derive(Clone, Debug)]
pub struct PassageMould {
    pub theta: f64,
    pub theta_prime: f64,
    /// Arguments are taken in [window_start, window_start + 2 pi).
    pub window_start: f64,
    pub letters: Vec<Letter>,
}

fn same_direction(a: &Letter, b: &Letter) -> bool {
    match (a, b) {
        (Letter::Int(x), Letter::Int(y)) => (*x > 0) == (*y > 0),
        (Letter::Gauss(x), Letter::Gauss(y)) => {
            let p = x * &y.conj();
            p.im.is_zero() && p.re > BigRational::zero()
        }
        _ => false,
    }
}

pub fn passage_mould(p: &PassageMould, max_length: usize) -> Result<Mould> {
    if p.theta >= p.theta_prime {
        return Err(Error::Precondition("theta must be below theta'".into()));
    }
    if p.letters.iter().any(Letter::is_zero) {
        return Err(Error::Precondition("zero letter in passage mould".into()));
    }
    let tau = 2.0 * std::f64::consts::PI;
    let arg = |l: &Letter| -> f64 {
        let a = l.arg().unwrap_or(0.0);
        p.window_start + (a - p.window_start).rem_euclid(tau)
    };
    let alphabet = Alphabet::new(p.letters.clone())?;
    Mould::from_fn(alphabet, max_length, None, |w| {
        if w.is_empty() {
            return Ok(ExactScalar::one());
        }
        let ls = w.letters();
        let mut denom = BigInt::one();
        let mut run = 1u64;
        for k in 0..ls.len() {
            let a = arg(&ls[k]);
            if !(a > p.theta && a < p.theta_prime) {
                return Ok(ExactScalar::zero());
            }
            if k > 0 {
                if same_direction(&ls[k - 1], &ls[k]) {
                    run += 1;
                } else if arg(&ls[k - 1]) < a {
                    denom *= factorial(run);
                    run = 1;
                } else {
                    return Ok(ExactScalar::zero());
                }
            }
        }
        denom *= factorial(run);
        Ok(ExactScalar::from_rational(BigRational::new(BigInt::one(), denom)))
    })
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    word: String,
    value: ExactScalar,
}

#[derive(Serialize, Deserialize)]
struct MouldJson {
    carrier: String,
    alphabet: Vec<String>,
    max_length: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    max_weight: Option<i64>,
    entries: Vec<EntryJson>,
}

impl From<&Mould> for MouldJson {
    fn from(m: &Mould) -> Self {
        MouldJson {
            carrier: m.carrier().name().to_string(),
            alphabet: m.alphabet.letters.iter().map(|l| l.to_string()).collect(),
            max_length: m.max_length,
            max_weight: m.max_weight,
            entries: m
                .entries
                .iter()
                .map(|(w, v)| EntryJson { word: w.to_string(), value: v.clone() })
                .collect(),
        }
    }
}

impl TryFrom<MouldJson> for Mould {
    type Error = Error;
    fn try_from(j: MouldJson) -> Result<Mould> {
        let carrier = Carrier::from_name(&j.carrier)?;
        let letters = j.alphabet.iter().map(|s| Letter::parse(carrier, s)).collect::<Result<Vec<_>>>()?;
        let mut m = Mould::zero(Alphabet::new(letters)?, j.max_length);
        if let Some(w) = j.max_weight {
            m = m.with_max_weight(w)?;
        }
        for e in j.entries {
            m.set(Word::parse(carrier, &e.word)?, e.value)?;
        }
        Ok(m)
    }
}

/// Basis of the alternal moulds of the given shape, found by exact elimination
/// on the shuffle relations.
pub fn alternal_basis(alphabet: &Alphabet, max_length: usize, max_weight: Option<i64>) -> Result<Vec<Mould>> {
    let mut shape = Mould::zero(alphabet.clone(), max_length);
    if let Some(w) = max_weight {
        shape = shape.with_max_weight(w)?;
    }
    let vars: Vec<Word> = shape.words().into_iter().filter(|w| !w.is_empty()).collect();
    let index: BTreeMap<&Word, usize> = vars.iter().enumerate().map(|(k, w)| (w, k)).collect();
    let mut rows: Vec<Vec<BigRational>> = vec![];
    for (a, b) in shape.pairs() {
        let mut row = vec![BigRational::zero(); vars.len()];
        for (w, c) in shuffle_product(&a, &b) {
            row[index[&w]] += BigRational::from_integer(BigInt::from(c));
        }
        rows.push(row);
    }
    let null = nullspace(rows, vars.len());
    null.into_iter()
        .map(|v| {
            let mut m = shape.blank();
            for (k, x) in v.into_iter().enumerate() {
                m.set(vars[k].clone(), ExactScalar::from_rational(x))?;
            }
            Ok(m)
        })
        .collect()
}

fn nullspace(mut rows: Vec<Vec<BigRational>>, n: usize) -> Vec<Vec<BigRational>> {
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = BigRational::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x *= inv.clone();
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..n {
                    let d = &f * &rows[r][j];
                    rows[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![BigRational::zero(); n];
            v[fc] = BigRational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[i][fc].clone();
            }
            v
        })
        .collect()
}

fn small_rational<R: Rng>(rng: &mut R) -> ExactScalar {
    let n = rng.gen_range(-5i64..=5);
    let d = rng.gen_range(1i64..=4);
    ExactScalar::from_ratio(n, d)
}

/// Random mould with small rational entries.
pub fn random_mould<R: Rng>(rng: &mut R, alphabet: &Alphabet, max_length: usize, empty: Option<ExactScalar>) -> Mould {
    let mut m = Mould::zero(alphabet.clone(), max_length);
    for w in m.words() {
        let v = if w.is_empty() {
            empty.clone().unwrap_or_else(|| small_rational(rng))
        } else {
            small_rational(rng)
        };
        m.set(w, v).expect("in domain");
    }
    m
}

/// Random alternal mould: a random combination of the alternal basis.
pub fn random_alternal<R: Rng>(
    rng: &mut R,
    alphabet: &Alphabet,
    max_length: usize,
    max_weight: Option<i64>,
) -> Result<Mould> {
    let basis = alternal_basis(alphabet, max_length, max_weight)?;
    let mut m = Mould::zero(alphabet.clone(), max_length);
    if let Some(w) = max_weight {
        m = m.with_max_weight(w)?;
    }
    for b in &basis {
        m = m.add(&b.scale(&small_rational(rng)))?;
    }
    Ok(m)
}

/// Random symmetral mould: exp of a random alternal one.
pub fn random_symmetral<R: Rng>(rng: &mut R, alphabet: &Alphabet, max_length: usize) -> Result<Mould> {
    random_alternal(rng, alphabet, max_length, None)?.exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ab() -> Alphabet {
        Alphabet::ints(&[1, 2])
    }

    #[test]
    fn unit_law_and_length_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = random_mould(&mut rng, &ab(), 3, None);
        let n = random_mould(&mut rng, &ab(), 3, None);
        assert_eq!(m.product(&Mould::one(ab(), 3)).unwrap(), m);
        let p = m.product(&n).unwrap();
        let a = Word::ints(&[2]);
        let e = Word::empty();
        assert_eq!(p.get(&a), &(&m.get(&e) * &n.get(&a)) + &(&m.get(&a) * &n.get(&e)));
    }

    #[test]
    fn exp_w_product_and_inverse() {
        let half = ExactScalar::from_ratio(1, 2);
        let a = Mould::exp_w(ab(), 6, &half);
        let b = Mould::exp_w(ab(), 6, &-&half);
        assert_eq!(a.product(&b).unwrap(), Mould::one(ab(), 6));
        let w = ExactScalar::from_ratio(3, 2);
        let e = Mould::exp_w(ab(), 5, &w);
        assert_eq!(e.mult_inverse().unwrap(), Mould::exp_w(ab(), 5, &-&w));
        assert_eq!(Mould::one(ab(), 4).mult_inverse().unwrap(), Mould::one(ab(), 4));
    }

    #[test]
    fn exp_of_scaled_identity() {
        let w = ExactScalar::from_ratio(-2, 3);
        let e = Mould::identity(ab(), 5).scale(&w).exp().unwrap();
        assert_eq!(e, Mould::exp_w(ab(), 5, &w));
        assert!(Mould::one(ab(), 4).log().unwrap().is_zero());
        assert_eq!(Mould::zero(ab(), 4).exp().unwrap(), Mould::one(ab(), 4));
    }

    #[test]
    fn composition_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = random_mould(&mut rng, &ab(), 3, None);
        assert_eq!(m.compose(&Mould::identity(ab(), 3)).unwrap(), m);
        let al = Alphabet::ints_upto(6);
        let mut u = random_mould(&mut rng, &al, 3, Some(ExactScalar::zero())).with_max_weight(6).unwrap();
        u.set(Word::empty(), ExactScalar::zero()).unwrap();
        let i = Mould::identity(al.clone(), 3).with_max_weight(6).unwrap();
        assert_eq!(i.compose(&u).unwrap(), u);
        assert_eq!(m.compose(&u).is_err(), true);
        let mm = random_mould(&mut rng, &al, 3, None).with_max_weight(6).unwrap();
        assert_eq!(mm.compose(&u).unwrap().get(&Word::empty()), mm.get(&Word::empty()));
    }

    #[test]
    fn composition_inverse() {
        let al = Alphabet::ints_upto(4);
        let i = Mould::identity(al.clone(), 4).with_max_weight(4).unwrap();
        assert_eq!(i.comp_inverse().unwrap(), i);
        let c = ExactScalar::from_ratio(3, 7);
        let ci = i.scale(&c).comp_inverse().unwrap();
        assert_eq!(ci.get(&Word::ints(&[2])), c.inv().unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut u = random_mould(&mut rng, &al, 4, Some(ExactScalar::zero())).with_max_weight(4).unwrap();
        for k in 1..=4 {
            u.set(Word::ints(&[k]), ExactScalar::from_int(k + 1)).unwrap();
        }
        let w = u.comp_inverse().unwrap();
        assert_eq!(u.compose(&w).unwrap(), i);
        assert_eq!(w.compose(&u).unwrap(), i);
    }

    #[test]
    fn predicate_examples() {
        assert!(Mould::identity(ab(), 4).is_alternal());
        assert!(Mould::exp_w(ab(), 6, &ExactScalar::from_ratio(1, 3)).is_symmetral());
        let one = Mould::one(ab(), 4);
        assert!(one.is_symmetral() && !one.is_alternal());
    }

    #[test]
    fn passage_examples() {
        let g = |re: i64, im: i64| Letter::Gauss(GaussRat::from_int(re) + GaussRat::i().clone() * GaussRat::from_int(im));
        let p = PassageMould {
            theta: -0.1,
            theta_prime: 2.0,
            window_start: -std::f64::consts::PI,
            letters: vec![g(1, 0), g(1, 1), g(2, 2), g(-1, 0)],
        };
        let m = passage_mould(&p, 3).unwrap();
        assert_eq!(m.get(&Word::empty()), ExactScalar::one());
        assert_eq!(m.get(&Word::new(vec![g(1, 1), g(1, 1)])), ExactScalar::from_ratio(1, 2));
        assert_eq!(m.get(&Word::new(vec![g(1, 1), g(2, 2), g(1, 0)])), ExactScalar::zero());
        assert_eq!(m.get(&Word::new(vec![g(1, 0), g(1, 1), g(2, 2)])), ExactScalar::from_ratio(1, 2));
        assert_eq!(m.get(&Word::new(vec![g(-1, 0)])), ExactScalar::zero());
    }

    #[test]
    fn json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut m = random_mould(&mut rng, &ab(), 3, None);
        m.set(Word::ints(&[1, 2]), &ExactScalar::tau_pow(-1) + &ExactScalar::from_ratio(1, 3)).unwrap();
        let s = m.to_json();
        assert_eq!(Mould::from_json(&s).unwrap(), m);
        assert_eq!(Mould::from_json(&s).unwrap().to_json(), s);
    }

    #[test]
    fn alternal_basis_is_alternal() {
        let basis = alternal_basis(&ab(), 3, None).unwrap();
        // free Lie algebra on 2 generators: dimensions 2, 1, 2
        assert_eq!(basis.len(), 5);
        assert!(basis.iter().all(Mould::is_alternal));
    }
}
