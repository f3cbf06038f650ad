//! Words over semigroup-valued letters, shuffles and stuffles.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalars::{parse_rational, ExactScalar, GaussRat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Carrier {
    Int,
    Gauss,
    Bimould,
}

impl Carrier {
    pub fn name(&self) -> &'static str {
        match self {
            Carrier::Int => "int",
            Carrier::Gauss => "gauss",
            Carrier::Bimould => "bimould",
        }
    }
    pub fn from_name(s: &str) -> Result<Carrier> {
        match s {
            "int" => Ok(Carrier::Int),
            "gauss" => Ok(Carrier::Gauss),
            "bimould" => Ok(Carrier::Bimould),
            _ => Err(Error::Parse(format!("unknown carrier '{s}'"))),
        }
    }
}

/// A letter: an integer, a Gaussian rational, or a bimould pair (s; e) with e in [0, 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Int(i64),
    Gauss(GaussRat),
    Bi { s: u32, eps: BigRational },
}

fn frac(q: &BigRational) -> BigRational {
    q - q.floor()
}

impl Letter {
    pub fn bi(s: u32, eps: BigRational) -> Letter {
        Letter::Bi { s, eps: frac(&eps) }
    }

    pub fn carrier(&self) -> Carrier {
        match self {
            Letter::Int(_) => Carrier::Int,
            Letter::Gauss(_) => Carrier::Gauss,
            Letter::Bi { .. } => Carrier::Bimould,
        }
    }

    /// Semigroup sum; bimould letters add componentwise with e taken mod 1.
    pub fn add(&self, o: &Letter) -> Result<Letter> {
        match (self, o) {
            (Letter::Int(a), Letter::Int(b)) => a
                .checked_add(*b)
                .map(Letter::Int)
                .ok_or_else(|| Error::Precondition("integer letter overflow".into())),
            (Letter::Gauss(a), Letter::Gauss(b)) => Ok(Letter::Gauss(a + b)),
            (Letter::Bi { s, eps }, Letter::Bi { s: t, eps: f }) => Ok(Letter::bi(s + t, eps + f)),
            _ => Err(Error::CarrierMismatch(format!("{self} + {o}"))),
        }
    }

    pub fn to_scalar(&self) -> Option<ExactScalar> {
        match self {
            Letter::Int(n) => Some(ExactScalar::from_int(*n)),
            Letter::Gauss(g) => Some(ExactScalar::from_gauss(g.clone())),
            Letter::Bi { .. } => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Letter::Int(n) => *n == 0,
            Letter::Gauss(g) => g.is_zero(),
            Letter::Bi { .. } => false,
        }
    }

    /// Principal argument in (-pi, pi].
    pub fn arg(&self) -> Option<f64> {
        match self {
            Letter::Int(0) => None,
            Letter::Int(n) => Some(if *n > 0 { 0.0 } else { std::f64::consts::PI }),
            Letter::Gauss(g) if g.is_zero() => None,
            Letter::Gauss(g) => Some(g.to_c64().arg()),
            Letter::Bi { .. } => None,
        }
    }

    pub fn parse(carrier: Carrier, s: &str) -> Result<Letter> {
        let s = s.trim();
        match carrier {
            Carrier::Int => s
                .parse::<i64>()
                .map(Letter::Int)
                .map_err(|_| Error::Parse(format!("bad integer letter '{s}'"))),
            Carrier::Gauss => Ok(Letter::Gauss(s.parse()?)),
            Carrier::Bimould => {
                let inner = s
                    .strip_prefix('(')
                    .and_then(|x| x.strip_suffix(')'))
                    .ok_or_else(|| Error::Parse(format!("bad bimould letter '{s}'")))?;
                let (a, e) = inner
                    .split_once(';')
                    .ok_or_else(|| Error::Parse(format!("bad bimould letter '{s}'")))?;
                let a: u32 = a.trim().parse().map_err(|_| Error::Parse(format!("bad s in '{s}'")))?;
                let e = parse_rational(e)?;
                if a == 0 || e.is_negative() || e >= BigRational::one() {
                    return Err(Error::Parse(format!("bimould letter out of range '{s}'")));
                }
                Ok(Letter::Bi { s: a, eps: e })
            }
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Int(n) => write!(f, "{n}"),
            Letter::Gauss(g) => write!(f, "{g}"),
            Letter::Bi { s, eps } => write!(f, "({s};{eps})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(vec![])
    }
    pub fn new(letters: Vec<Letter>) -> Word {
        Word(letters)
    }
    pub fn ints(xs: &[i64]) -> Word {
        Word(xs.iter().map(|&x| Letter::Int(x)).collect())
    }
    pub fn single(l: Letter) -> Word {
        Word(vec![l])
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }
    pub fn carrier(&self) -> Option<Carrier> {
        self.0.first().map(Letter::carrier)
    }
    pub fn first(&self) -> Option<&Letter> {
        self.0.first()
    }
    pub fn last(&self) -> Option<&Letter> {
        self.0.last()
    }
    /// The word without its last letter.
    pub fn init(&self) -> Word {
        Word(self.0[..self.0.len().saturating_sub(1)].to_vec())
    }
    /// The word without its first letter.
    pub fn tail(&self) -> Word {
        Word(self.0.iter().skip(1).cloned().collect())
    }
    pub fn slice(&self, a: usize, b: usize) -> Word {
        Word(self.0[a..b].to_vec())
    }
    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().cloned().collect())
    }
    pub fn push(&self, l: Letter) -> Word {
        let mut v = self.0.clone();
        v.push(l);
        Word(v)
    }

    pub fn concat(&self, o: &Word) -> Result<Word> {
        if let (Some(a), Some(b)) = (self.carrier(), o.carrier()) {
            if a != b {
                return Err(Error::CarrierMismatch(format!("{self} . {o}")));
            }
        }
        let mut v = self.0.clone();
        v.extend(o.0.iter().cloned());
        Ok(Word(v))
    }

    /// ||w|| = sum of the letters; None for the empty word.
    pub fn norm(&self) -> Result<Option<Letter>> {
        let mut it = self.0.iter();
        let Some(first) = it.next() else { return Ok(None) };
        let mut acc = first.clone();
        for l in it {
            acc = acc.add(l)?;
        }
        Ok(Some(acc))
    }

    /// Partial sums w1, w1+w2, ..., w1+...+wr.
    pub fn prefix_sums(&self) -> Result<Vec<Letter>> {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for l in &self.0 {
            let next = match out.last() {
                Some(p) => p.add(l)?,
                None => l.clone(),
            };
            out.push(next);
        }
        Ok(out)
    }

    pub fn int_letters(&self) -> Option<Vec<i64>> {
        self.0
            .iter()
            .map(|l| match l {
                Letter::Int(n) => Some(*n),
                _ => None,
            })
            .collect()
    }

    pub fn parse(carrier: Carrier, s: &str) -> Result<Word> {
        let s = s.trim();
        let inner = s
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("bad word '{s}'")))?;
        if inner.trim().is_empty() {
            return Ok(Word::empty());
        }
        inner.split(',').map(|x| Letter::parse(carrier, x)).collect::<Result<Vec<_>>>().map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "]")
    }
}

/// Number of ways to interleave a and b into w.
pub fn shuffle_coefficient(a: &Word, b: &Word, w: &Word) -> u64 {
    let (n, m) = (a.len(), b.len());
    if n + m != w.len() {
        return 0;
    }
    // dp[i][j]: ways to build w[..i+j] from a[..i], b[..j]
    let mut dp = vec![vec![0u64; m + 1]; n + 1];
    dp[0][0] = 1;
    for i in 0..=n {
        for j in 0..=m {
            if i == 0 && j == 0 {
                continue;
            }
            let c = &w.0[i + j - 1];
            let mut v = 0;
            if i > 0 && a.0[i - 1] == *c {
                v += dp[i - 1][j];
            }
            if j > 0 && b.0[j - 1] == *c {
                v += dp[i][j - 1];
            }
            dp[i][j] = v;
        }
    }
    dp[n][m]
}

pub type WordCounts = BTreeMap<Word, u64>;

fn add_count(out: &mut WordCounts, w: Word, c: u64) {
    *out.entry(w).or_insert(0) += c;
}

/// Full shuffle product of two words with multiplicities.
pub fn shuffle_product(a: &Word, b: &Word) -> WordCounts {
    let mut out = WordCounts::new();
    if a.is_empty() || b.is_empty() {
        add_count(&mut out, Word(a.0.iter().chain(b.0.iter()).cloned().collect()), 1);
        return out;
    }
    // last letter comes from a or from b
    for (w, c) in shuffle_product(&a.init(), b) {
        add_count(&mut out, w.push(a.last().unwrap().clone()), c);
    }
    for (w, c) in shuffle_product(a, &b.init()) {
        add_count(&mut out, w.push(b.last().unwrap().clone()), c);
    }
    out
}

/// Contracting shuffle: take from a, take from b, or contract the two heads.
pub fn stuffle_expansion(a: &Word, b: &Word) -> Result<WordCounts> {
    let mut out = WordCounts::new();
    if a.is_empty() || b.is_empty() {
        add_count(&mut out, Word(a.0.iter().chain(b.0.iter()).cloned().collect()), 1);
        return Ok(out);
    }
    let (x, y) = (a.first().unwrap(), b.first().unwrap());
    for (w, c) in stuffle_expansion(&a.tail(), b)? {
        add_count(&mut out, Word::single(x.clone()).concat(&w)?, c);
    }
    for (w, c) in stuffle_expansion(a, &b.tail())? {
        add_count(&mut out, Word::single(y.clone()).concat(&w)?, c);
    }
    let xy = x.add(y)?;
    for (w, c) in stuffle_expansion(&a.tail(), &b.tail())? {
        add_count(&mut out, Word::single(xy.clone()).concat(&w)?, c);
    }
    Ok(out)
}

/// All ordered decompositions of w into k nonempty factors.
pub fn splittings(w: &Word, k: usize) -> Vec<Vec<Word>> {
    let r = w.len();
    if k == 0 {
        return if r == 0 { vec![vec![]] } else { vec![] };
    }
    if k > r {
        return vec![];
    }
    let mut out = vec![];
    for first in 1..=r - (k - 1) {
        let head = w.slice(0, first);
        for mut rest in splittings(&w.slice(first, r), k - 1) {
            rest.insert(0, head.clone());
            out.push(rest);
        }
    }
    out
}

/// All deconcatenations w = a.b including the trivial ones.
pub fn deconcatenations(w: &Word) -> Vec<(Word, Word)> {
    (0..=w.len()).map(|k| (w.slice(0, k), w.slice(k, w.len()))).collect()
}

/// All words over `letters` of length at most `max_len`, shortest first.
pub fn all_words(letters: &[Letter], max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = vec![];
        for w in &layer {
            for l in letters {
                next.push(w.push(l.clone()));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Linear combinations of words with integer coefficients.
pub type WordComb = BTreeMap<Word, BigInt>;

fn lin_product(x: &WordComb, y: &WordComb, f: impl Fn(&Word, &Word) -> Result<WordCounts>) -> Result<WordComb> {
    let mut out = WordComb::new();
    for (a, ca) in x {
        for (b, cb) in y {
            for (w, c) in f(a, b)? {
                *out.entry(w).or_insert_with(BigInt::zero) += ca * cb * BigInt::from(c);
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

pub fn shuffle_lin(x: &WordComb, y: &WordComb) -> WordComb {
    lin_product(x, y, |a, b| Ok(shuffle_product(a, b))).expect("shuffle never fails")
}

pub fn stuffle_lin(x: &WordComb, y: &WordComb) -> Result<WordComb> {
    lin_product(x, y, stuffle_expansion)
}

pub fn single_comb(w: Word) -> WordComb {
    let mut m = WordComb::new();
    m.insert(w, BigInt::one());
    m
}

/// Count as a plain integer (shuffle counts always fit).
pub fn total_count(c: &WordCounts) -> u64 {
    c.values().sum()
}

pub fn binomial_u64(n: u64, k: u64) -> u64 {
    crate::scalars::binomial(n, k).to_u64().unwrap_or(u64::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    #[test]
    fn concat_examples() {
        assert_eq!(Word::ints(&[1]).concat(&Word::ints(&[2])).unwrap(), Word::ints(&[1, 2]));
        assert_eq!(Word::empty().concat(&Word::ints(&[3])).unwrap(), Word::ints(&[3]));
        assert_eq!(Word::ints(&[1, 2]).concat(&Word::ints(&[1])).unwrap(), Word::ints(&[1, 2, 1]));
        let g = Word::single(Letter::Gauss(GaussRat::i()));
        assert!(Word::ints(&[1]).concat(&g).is_err());
    }

    #[test]
    fn shuffle_examples() {
        assert_eq!(shuffle_coefficient(&Word::ints(&[1]), &Word::ints(&[2]), &Word::ints(&[1, 2])), 1);
        assert_eq!(shuffle_coefficient(&Word::ints(&[1]), &Word::ints(&[1, 2]), &Word::ints(&[1, 1, 2])), 2);
        assert_eq!(shuffle_coefficient(&Word::ints(&[1]), &Word::ints(&[1]), &Word::ints(&[1, 1])), 2);
        assert_eq!(shuffle_coefficient(&Word::ints(&[1]), &Word::ints(&[1]), &Word::ints(&[1])), 0);
    }

    #[test]
    fn stuffle_examples() {
        let e = stuffle_expansion(&Word::ints(&[2]), &Word::ints(&[3])).unwrap();
        let want: WordCounts =
            [(Word::ints(&[2, 3]), 1), (Word::ints(&[3, 2]), 1), (Word::ints(&[5]), 1)].into_iter().collect();
        assert_eq!(e, want);
        let e = stuffle_expansion(&Word::empty(), &Word::ints(&[3])).unwrap();
        assert_eq!(e, [(Word::ints(&[3]), 1)].into_iter().collect());
        let e = stuffle_expansion(&Word::ints(&[2]), &Word::ints(&[2])).unwrap();
        assert_eq!(e, [(Word::ints(&[2, 2]), 2), (Word::ints(&[4]), 1)].into_iter().collect());
    }

    #[test]
    fn bimould_contraction() {
        let a = Letter::bi(1, rat(1, 2));
        let b = Letter::bi(2, rat(3, 4));
        assert_eq!(a.add(&b).unwrap(), Letter::bi(3, rat(1, 4)));
    }

    #[test]
    fn splitting_examples() {
        assert_eq!(splittings(&Word::ints(&[1, 2]), 2), vec![vec![Word::ints(&[1]), Word::ints(&[2])]]);
        assert_eq!(
            splittings(&Word::ints(&[1, 2, 3]), 2),
            vec![
                vec![Word::ints(&[1]), Word::ints(&[2, 3])],
                vec![Word::ints(&[1, 2]), Word::ints(&[3])]
            ]
        );
        assert!(splittings(&Word::ints(&[1]), 2).is_empty());
    }

    #[test]
    fn text_forms() {
        let w = Word::parse(Carrier::Bimould, "[(2;0),(1;1/2)]").unwrap();
        assert_eq!(w.to_string(), "[(2;0),(1;1/2)]");
        let w = Word::parse(Carrier::Gauss, "[1+1*i,-1/2*i]").unwrap();
        assert_eq!(Word::parse(Carrier::Gauss, &w.to_string()).unwrap(), w);
        assert_eq!(Word::parse(Carrier::Int, "[]").unwrap(), Word::empty());
        assert!(Word::parse(Carrier::Bimould, "[(1;1)]").is_err());
    }
}
