//! Exact coefficients in Q(i)[T, 1/T, log 2, log 3, ...] where T stands for 2*pi*i,
//! and high-precision complex floating values.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Gaussian rational re + im*i.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }
    pub fn zero() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::zero())
    }
    pub fn one() -> Self {
        GaussRat::from_rational(BigRational::one())
    }
    pub fn i() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::one())
    }
    pub fn from_int(n: i64) -> Self {
        GaussRat::from_rational(rat_int(n))
    }
    pub fn from_rational(q: BigRational) -> Self {
        GaussRat::new(q, BigRational::zero())
    }
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
    }
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm_sqr();
        Ok(GaussRat::new(&self.re / &n, -&self.im / &n))
    }
    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
    pub fn pow(&self, k: i32) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = GaussRat::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re.clone(), -self.im.clone())
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{}*i", self.im);
        }
        if self.im.is_negative() {
            write!(f, "{}-{}*i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}*i", self.re, self.im)
        }
    }
}

impl FromStr for GaussRat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty gaussian rational".into()));
        }
        if !s.ends_with('i') {
            return Ok(GaussRat::from_rational(parse_rational(&s)?));
        }
        let body = s.trim_end_matches('i').trim_end_matches('*');
        let split = body
            .char_indices()
            .filter(|&(k, c)| k > 0 && (c == '+' || c == '-'))
            .map(|(k, _)| k)
            .last();
        let (re, im) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("", body),
        };
        let im = match im {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            t => parse_rational(t.trim_start_matches('+'))?,
        };
        let re = if re.is_empty() { BigRational::zero() } else { parse_rational(re)? };
        Ok(GaussRat::new(re, im))
    }
}

/// Monomial T^tau * prod (log p)^e over primes p.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mono {
    pub tau: i32,
    pub logs: Vec<(u64, u32)>,
}

impl Mono {
    pub fn unit() -> Self {
        Mono::default()
    }
    pub fn tau(k: i32) -> Self {
        Mono { tau: k, logs: vec![] }
    }
    pub fn is_unit(&self) -> bool {
        self.tau == 0 && self.logs.is_empty()
    }
    fn mul(&self, o: &Mono) -> Mono {
        let mut logs: BTreeMap<u64, u32> = self.logs.iter().cloned().collect();
        for &(p, e) in &o.logs {
            *logs.entry(p).or_insert(0) += e;
        }
        Mono { tau: self.tau + o.tau, logs: logs.into_iter().collect() }
    }
    /// self / o when the log part divides.
    fn div(&self, o: &Mono) -> Option<Mono> {
        let mut logs: BTreeMap<u64, u32> = self.logs.iter().cloned().collect();
        for &(p, e) in &o.logs {
            let cur = logs.get_mut(&p)?;
            if *cur < e {
                return None;
            }
            *cur -= e;
        }
        logs.retain(|_, e| *e > 0);
        Some(Mono { tau: self.tau - o.tau, logs: logs.into_iter().collect() })
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tau == 1 {
            write!(f, "·T")?;
        } else if self.tau != 0 {
            write!(f, "·T^{}", self.tau)?;
        }
        for &(p, e) in &self.logs {
            if e == 1 {
                write!(f, "·log{p}")?;
            } else {
                write!(f, "·log{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Exact scalar: finite sum of Gaussian rationals times monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExactScalar {
    terms: BTreeMap<Mono, GaussRat>,
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar::default()
    }
    pub fn one() -> Self {
        ExactScalar::from_gauss(GaussRat::one())
    }
    pub fn i() -> Self {
        ExactScalar::from_gauss(GaussRat::i())
    }
    /// The symbol T = 2*pi*i.
    pub fn tau() -> Self {
        ExactScalar::monomial(GaussRat::one(), Mono::tau(1))
    }
    pub fn tau_pow(k: i32) -> Self {
        ExactScalar::monomial(GaussRat::one(), Mono::tau(k))
    }
    /// i*pi = T/2.
    pub fn i_pi() -> Self {
        ExactScalar::monomial(GaussRat::from_rational(rat(1, 2)), Mono::tau(1))
    }
    pub fn from_int(n: i64) -> Self {
        ExactScalar::from_gauss(GaussRat::from_int(n))
    }
    pub fn from_ratio(n: i64, d: i64) -> Self {
        ExactScalar::from_rational(rat(n, d))
    }
    pub fn from_rational(q: BigRational) -> Self {
        ExactScalar::from_gauss(GaussRat::from_rational(q))
    }
    pub fn from_gauss(g: GaussRat) -> Self {
        ExactScalar::monomial(g, Mono::unit())
    }
    pub fn monomial(c: GaussRat, m: Mono) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        ExactScalar { terms }
    }

    /// log q for a positive rational q, as a combination of log p over primes.
    pub fn log_rational(q: &BigRational) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::Precondition(format!("log of non-positive {q}")));
        }
        let mut out = ExactScalar::zero();
        for (p, e) in factor(q.numer())? {
            out = &out + &ExactScalar::log_prime(p).scale_int(e as i64);
        }
        for (p, e) in factor(q.denom())? {
            out = &out - &ExactScalar::log_prime(p).scale_int(e as i64);
        }
        Ok(out)
    }

    /// Principal logarithm of a nonzero real rational x (adds i*pi when x < 0).
    pub fn log_real(x: &BigRational) -> Result<Self> {
        if x.is_zero() {
            return Err(Error::Precondition("log of zero".into()));
        }
        let l = ExactScalar::log_rational(&x.abs())?;
        if x.is_negative() {
            Ok(&l + &ExactScalar::i_pi())
        } else {
            Ok(l)
        }
    }

    fn log_prime(p: u64) -> Self {
        ExactScalar::monomial(GaussRat::one(), Mono { tau: 0, logs: vec![(p, 1)] })
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &GaussRat)> {
        self.terms.iter()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn is_one(&self) -> bool {
        *self == ExactScalar::one()
    }
    /// The Gaussian rational when the scalar has no T or log part.
    pub fn as_gauss(&self) -> Option<GaussRat> {
        match self.terms.len() {
            0 => Some(GaussRat::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_unit().then(|| c.clone())
            }
            _ => None,
        }
    }
    pub fn as_rational(&self) -> Option<BigRational> {
        self.as_gauss().filter(|g| g.is_real()).map(|g| g.re)
    }
    pub fn as_integer(&self) -> Option<i64> {
        self.as_rational().filter(|q| q.is_integer()).and_then(|q| q.to_integer().to_i64())
    }
    pub fn as_monomial(&self) -> Option<(GaussRat, Mono)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        Some((c.clone(), m.clone()))
    }
    /// Coefficient of the monomial.
    pub fn coeff(&self, m: &Mono) -> GaussRat {
        self.terms.get(m).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn scale(&self, g: &GaussRat) -> Self {
        if g.is_zero() {
            return ExactScalar::zero();
        }
        ExactScalar { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * g)).collect() }
    }
    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&GaussRat::from_int(n))
    }
    pub fn scale_rational(&self, q: &BigRational) -> Self {
        self.scale(&GaussRat::from_rational(q.clone()))
    }

    pub fn conj(&self) -> Self {
        // conj(T) = -T
        let mut out = ExactScalar::zero();
        for (m, c) in &self.terms {
            let sign = if m.tau.rem_euclid(2) == 1 { -1 } else { 1 };
            out.add_term(m.clone(), c.conj().scale_sign(sign));
        }
        out
    }

    fn add_term(&mut self, m: Mono, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(GaussRat::zero);
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn inv(&self) -> Result<Self> {
        ExactScalar::one().checked_div(self)
    }

    /// Division by a monomial c*T^k*logs (any scalar with a single term).
    pub fn checked_div(&self, d: &ExactScalar) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (c, m) = d.as_monomial().ok_or_else(|| Error::UnsupportedDivision(d.to_string()))?;
        let ci = c.inv()?;
        let mut out = ExactScalar::zero();
        for (tm, tc) in &self.terms {
            let q = tm.div(&m).ok_or_else(|| Error::UnsupportedDivision(d.to_string()))?;
            out.add_term(q, tc * &ci);
        }
        Ok(out)
    }

    pub fn pow(&self, k: i32) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = ExactScalar::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    pub fn to_c64(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let tau = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        for (m, c) in &self.terms {
            let mut v = c.to_c64() * tau.powi(m.tau);
            for &(p, e) in &m.logs {
                v *= (p as f64).ln().powi(e as i32);
            }
            acc += v;
        }
        acc
    }

    /// Substitutes T = 2*pi*i at the requested precision (bits).
    pub fn evaluate(&self, precision: usize) -> Result<NumericComplex> {
        if precision < 53 {
            return Err(Error::Precondition(format!("precision {precision} < 53")));
        }
        let wp = precision + 64;
        let mut cc = consts()?;
        let two_pi = cc.pi(wp, RM).mul(&BigFloat::from_i64(2, wp), wp, RM);
        let mut re = BigFloat::from_i64(0, wp);
        let mut im = BigFloat::from_i64(0, wp);
        for (m, c) in &self.terms {
            // T^k = (2 pi)^k i^k
            let k = m.tau;
            let mut mag = two_pi.powi(k.unsigned_abs() as usize, wp, RM);
            if k < 0 {
                mag = BigFloat::from_i64(1, wp).div(&mag, wp, RM);
            }
            for &(p, e) in &m.logs {
                let lp = BigFloat::from_u64(p, wp).ln(wp, RM, &mut cc);
                mag = mag.mul(&lp.powi(e as usize, wp, RM), wp, RM);
            }
            let cre = big_rational(&c.re, wp, &mut cc);
            let cim = big_rational(&c.im, wp, &mut cc);
            // (cre + i cim) * i^k * mag
            let (tr, ti) = match k.rem_euclid(4) {
                0 => (cre, cim),
                1 => (cim.neg(), cre),
                2 => (cre.neg(), cim.neg()),
                _ => (cim, cre.neg()),
            };
            re = re.add(&tr.mul(&mag, wp, RM), wp, RM);
            im = im.add(&ti.mul(&mag, wp, RM), wp, RM);
        }
        Ok(NumericComplex::from_parts(re, im, precision))
    }
}

trait ScaleSign {
    fn scale_sign(self, s: i32) -> Self;
}

impl ScaleSign for GaussRat {
    fn scale_sign(self, s: i32) -> Self {
        if s < 0 {
            -&self
        } else {
            self
        }
    }
}

fn consts() -> Result<Consts> {
    Consts::new().map_err(|e| Error::Precondition(format!("float constants: {e:?}")))
}

fn big_int(n: &BigInt, p: usize, cc: &mut Consts) -> BigFloat {
    BigFloat::parse(&n.to_string(), Radix::Dec, p, RM, cc)
}

fn big_rational(q: &BigRational, p: usize, cc: &mut Consts) -> BigFloat {
    big_int(q.numer(), p, cc).div(&big_int(q.denom(), p, cc), p, RM)
}

fn factor(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    let mut n = n
        .abs()
        .to_u64()
        .ok_or_else(|| Error::ClosedFormUnavailable(format!("log of large integer {n}")))?;
    let mut out = vec![];
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    Ok(out)
}

impl Add for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: &ExactScalar) -> ExactScalar {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, o: &ExactScalar) -> ExactScalar {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: &ExactScalar) -> ExactScalar {
        let mut out = ExactScalar::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}

owned_ops!(ExactScalar);
owned_ops!(GaussRat);

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        ExactScalar::from_int(n)
    }
}

impl From<GaussRat> for ExactScalar {
    fn from(g: GaussRat) -> Self {
        ExactScalar::from_gauss(g)
    }
}

impl From<BigRational> for ExactScalar {
    fn from(q: BigRational) -> Self {
        ExactScalar::from_rational(q)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(g) = self.as_gauss() {
            return write!(f, "{g}");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c}){m}")?;
        }
        Ok(())
    }
}

impl FromStr for ExactScalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("2pii") {
            return Ok(ExactScalar::tau());
        }
        // multiples: "-2pii", "3*2pii", "1/2*2pii"
        if s.len() > 4 && s.is_char_boundary(s.len() - 4) && s[s.len() - 4..].eq_ignore_ascii_case("2pii") {
            let head = s[..s.len() - 4].trim_end_matches('*').trim();
            let c: GaussRat = match head {
                "-" => GaussRat::from_int(-1),
                "+" | "" => GaussRat::one(),
                h => h.parse()?,
            };
            return Ok(ExactScalar::tau().scale(&c));
        }
        if !s.contains('(') {
            return Ok(ExactScalar::from_gauss(s.parse()?));
        }
        let mut out = ExactScalar::zero();
        for term in split_terms(s) {
            let term = term.trim();
            let close = term
                .find(')')
                .ok_or_else(|| Error::Parse(format!("bad term '{term}'")))?;
            if !term.starts_with('(') {
                return Err(Error::Parse(format!("bad term '{term}'")));
            }
            let c: GaussRat = term[1..close].parse()?;
            let mut mono = Mono::unit();
            let rest = term[close + 1..].replace('*', "·");
            for factor in rest.split('·').map(str::trim).filter(|x| !x.is_empty()) {
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => (
                        b,
                        e.parse::<i32>().map_err(|_| Error::Parse(format!("bad exponent '{e}'")))?,
                    ),
                    None => (factor, 1),
                };
                if base == "T" {
                    mono = mono.mul(&Mono::tau(exp));
                } else if let Some(p) = base.strip_prefix("log") {
                    let p: u64 = p.parse().map_err(|_| Error::Parse(format!("bad log '{base}'")))?;
                    if exp < 0 {
                        return Err(Error::Parse("negative log power".into()));
                    }
                    mono = mono.mul(&Mono { tau: 0, logs: vec![(p, exp as u32)] });
                } else {
                    return Err(Error::Parse(format!("bad factor '{factor}'")));
                }
            }
            out.add_term(mono, c);
        }
        Ok(out)
    }
}

/// Splits on " + " separators outside parentheses.
fn split_terms(s: &str) -> Vec<String> {
    let mut out = vec![];
    let mut depth = 0;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if c == '+' && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    out.push(cur);
    out.into_iter().filter(|t| !t.trim().is_empty()).collect()
}

impl serde::Serialize for ExactScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for ExactScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Complex number with binary floating parts at a fixed precision.
#[derive(Clone, Debug)]
pub struct NumericComplex {
    pub re: BigFloat,
    pub im: BigFloat,
    pub precision: usize,
}

impl NumericComplex {
    pub fn from_parts(mut re: BigFloat, mut im: BigFloat, precision: usize) -> Self {
        let _ = re.set_precision(precision, RM);
        let _ = im.set_precision(precision, RM);
        NumericComplex { re, im, precision }
    }
    pub fn from_c64(z: Complex64) -> Self {
        NumericComplex::from_parts(BigFloat::from_f64(z.re, 53), BigFloat::from_f64(z.im, 53), 53)
    }
    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(big_to_f64(&self.re), big_to_f64(&self.im))
    }
    pub fn add(&self, o: &Self) -> Self {
        let p = self.precision.min(o.precision);
        NumericComplex::from_parts(self.re.add(&o.re, p, RM), self.im.add(&o.im, p, RM), p)
    }
    pub fn sub(&self, o: &Self) -> Self {
        let p = self.precision.min(o.precision);
        NumericComplex::from_parts(self.re.sub(&o.re, p, RM), self.im.sub(&o.im, p, RM), p)
    }
    pub fn mul(&self, o: &Self) -> Self {
        let p = self.precision.min(o.precision);
        let wp = p + 16;
        let re = self.re.mul(&o.re, wp, RM).sub(&self.im.mul(&o.im, wp, RM), wp, RM);
        let im = self.re.mul(&o.im, wp, RM).add(&self.im.mul(&o.re, wp, RM), wp, RM);
        NumericComplex::from_parts(re, im, p)
    }
    /// |self - o| in units of the last place of the larger component modulus.
    pub fn ulp_distance(&self, o: &Self) -> f64 {
        let p = self.precision.min(o.precision);
        let wp = p + 32;
        let d = self.sub(o);
        let dm = d.re.abs().max(&d.im.abs());
        let m = self.re.abs().max(&self.im.abs()).max(&o.re.abs().max(&o.im.abs()));
        if m.is_zero() {
            return if dm.is_zero() { 0.0 } else { f64::INFINITY };
        }
        // m = f * 2^e with f in [1/2, 1), so ulp(m) = 2^(e - p)
        let e = m.exponent().unwrap_or(0) as i64;
        let shift = p as i64 - e;
        let two = BigFloat::from_i64(2, wp);
        let scale = if shift >= 0 {
            two.powi(shift as usize, wp, RM)
        } else {
            BigFloat::from_i64(1, wp).div(&two.powi((-shift) as usize, wp, RM), wp, RM)
        };
        big_to_f64(&dm.mul(&scale, wp, RM))
    }
}

fn big_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let mut cc = match consts() {
        Ok(c) => c,
        Err(_) => return f64::NAN,
    };
    match x.format(Radix::Dec, RM, &mut cc) {
        Ok(s) => s.parse::<f64>().unwrap_or(f64::NAN),
        Err(_) => f64::NAN,
    }
}

impl fmt::Display for NumericComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.to_c64();
        if z.im >= 0.0 {
            write!(f, "{:.17e}+{:.17e}*i", z.re, z.im)
        } else {
            write!(f, "{:.17e}-{:.17e}*i", z.re, -z.im)
        }
    }
}

/// n! as a big integer.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Bernoulli numbers B_0..=B_n with B_1 = -1/2.
pub fn bernoulli(n: usize) -> Vec<BigRational> {
    let mut b = vec![BigRational::one()];
    for m in 1..=n {
        let mut s = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            s += BigRational::from_integer(binomial(m as u64 + 1, j as u64)) * bj;
        }
        b.push(-s / BigRational::from_integer(BigInt::from(m as u64 + 1)));
    }
    b
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}
