//! Coloured multizeta values: nested sums (Ze), iterated integrals (Wa), the dictionary
//! between them, and stuffle/shuffle relation checks.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::gauss_legendre;
use crate::scalars::{bernoulli, NumericComplex};
use crate::words::{shuffle_product, stuffle_expansion, Letter, Word};

fn frac(q: &BigRational) -> BigRational {
    q - q.floor()
}

fn root_of_unity(q: &BigRational) -> Complex64 {
    let x = q.to_f64().expect("finite");
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * x)
}

const MAX_DENOM: i64 = 12;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MzvIndex {
    pub s: Vec<u32>,
    /// Colours in [0, 1).
    pub eps: Vec<BigRational>,
}

impl MzvIndex {
    pub fn new(s: Vec<u32>, eps: Vec<BigRational>) -> Result<MzvIndex> {
        if s.len() != eps.len() {
            return Err(Error::Precondition("s and eps differ in length".into()));
        }
        if s.contains(&0) {
            return Err(Error::Precondition("s_i must be positive".into()));
        }
        let eps: Vec<_> = eps.iter().map(frac).collect();
        if eps.iter().any(|e| e.denom() > &BigInt::from(MAX_DENOM)) {
            return Err(Error::Precondition(format!("colour denominators are limited to {MAX_DENOM}")));
        }
        Ok(MzvIndex { s, eps })
    }

    pub fn plain(s: &[u32]) -> Result<MzvIndex> {
        MzvIndex::new(s.to_vec(), vec![BigRational::zero(); s.len()])
    }

    pub fn depth(&self) -> usize {
        self.s.len()
    }

    pub fn weight(&self) -> u32 {
        self.s.iter().sum()
    }

    pub fn is_convergent(&self) -> bool {
        !(self.s.first() == Some(&1) && self.eps[0].is_zero())
    }

    pub fn to_word(&self) -> Word {
        Word::new(self.s.iter().zip(&self.eps).map(|(s, e)| Letter::bi(*s, e.clone())).collect())
    }

    pub fn from_word(w: &Word) -> Result<MzvIndex> {
        let mut s = vec![];
        let mut eps = vec![];
        for l in w.letters() {
            match l {
                Letter::Bi { s: a, eps: e } => {
                    s.push(*a);
                    eps.push(e.clone());
                }
                _ => return Err(Error::CarrierMismatch(format!("{l} is not a bimould letter"))),
            }
        }
        MzvIndex::new(s, eps)
    }

    /// Parses "2,1" or "2,1;1/2,0", with or without the parentheses of the display form.
    pub fn parse(s: &str, eps: Option<&str>) -> Result<MzvIndex> {
        let strip = |x: &str| x.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']).to_string();
        let s = strip(s);
        let (s, eps) = match (s.split_once(';'), eps) {
            (Some(_), Some(_)) => return Err(Error::Parse("colours given twice".into())),
            (Some((a, b)), None) => (a.to_string(), Some(b.to_string())),
            (None, e) => (s.clone(), e.map(strip)),
        };
        let ss: Vec<u32> = s
            .split(',')
            .filter(|x| !x.trim().is_empty())
            .map(|x| x.trim().parse().map_err(|_| Error::Parse(format!("bad s '{x}'"))))
            .collect::<Result<_>>()?;
        let es = match eps {
            None => vec![BigRational::zero(); ss.len()],
            Some(e) => e.split(',').map(|x| crate::scalars::parse_rational(x.trim())).collect::<Result<_>>()?,
        };
        MzvIndex::new(ss, es)
    }
}

impl fmt::Display for MzvIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.s.iter().map(|x| x.to_string()).collect();
        if self.eps.iter().all(Zero::is_zero) {
            write!(f, "({})", s.join(","))
        } else {
            let e: Vec<String> = self.eps.iter().map(|x| x.to_string()).collect();
            write!(f, "({};{})", s.join(","), e.join(","))
        }
    }
}

/// A Wa letter: 0 or the root of unity e^{2 pi i q}.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WaLetter {
    Zero,
    Root(BigRational),
}

impl WaLetter {
    pub fn root(q: BigRational) -> WaLetter {
        WaLetter::Root(frac(&q))
    }

    pub fn value(&self) -> Complex64 {
        match self {
            WaLetter::Zero => Complex64::new(0.0, 0.0),
            WaLetter::Root(q) => root_of_unity(q),
        }
    }

    fn is_one(&self) -> bool {
        matches!(self, WaLetter::Root(q) if q.is_zero())
    }

    fn code(&self) -> i64 {
        match self {
            WaLetter::Zero => -1,
            WaLetter::Root(q) => (q * BigRational::from_integer(BigInt::from(720720))).to_integer().to_i64().expect("small"),
        }
    }

    fn from_code(c: i64) -> WaLetter {
        if c < 0 {
            WaLetter::Zero
        } else {
            WaLetter::Root(BigRational::new(BigInt::from(c), BigInt::from(720720)))
        }
    }
}

impl fmt::Display for WaLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WaLetter::Zero => write!(f, "0"),
            WaLetter::Root(q) if q.is_zero() => write!(f, "1"),
            WaLetter::Root(q) => write!(f, "e({q})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WaWord {
    pub alphas: Vec<WaLetter>,
}

impl WaWord {
    pub fn new(alphas: Vec<WaLetter>) -> WaWord {
        WaWord { alphas }
    }

    /// Words over {0, 1, -1}, written as integers.
    pub fn ints(xs: &[i64]) -> Result<WaWord> {
        xs.iter()
            .map(|&x| match x {
                0 => Ok(WaLetter::Zero),
                1 => Ok(WaLetter::root(BigRational::zero())),
                -1 => Ok(WaLetter::root(BigRational::new(1.into(), 2.into()))),
                _ => Err(Error::Precondition(format!("{x} is not 0 or a root of unity"))),
            })
            .collect::<Result<_>>()
            .map(WaWord::new)
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn zeros(&self) -> usize {
        self.alphas.iter().filter(|a| **a == WaLetter::Zero).count()
    }

    pub fn is_integrable(&self) -> bool {
        match (self.alphas.first(), self.alphas.last()) {
            (Some(a), Some(b)) => *a != WaLetter::Zero && !b.is_one(),
            _ => true,
        }
    }

    fn to_int_word(&self) -> Word {
        Word::new(self.alphas.iter().map(|a| Letter::Int(a.code())).collect())
    }

    fn from_int_word(w: &Word) -> WaWord {
        WaWord::new(
            w.letters()
                .iter()
                .map(|l| match l {
                    Letter::Int(c) => WaLetter::from_code(*c),
                    _ => unreachable!("encoded Wa words use integer letters"),
                })
                .collect(),
        )
    }
}

impl fmt::Display for WaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.alphas.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", a.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MzvValue {
    pub re: f64,
    pub im: f64,
    pub error: f64,
}

impl MzvValue {
    pub fn c64(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn numeric(&self) -> NumericComplex {
        NumericComplex::from_c64(self.c64())
    }

    fn new(z: Complex64, error: f64) -> MzvValue {
        MzvValue { re: z.re, im: z.im, error }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ZeConfig {
    /// Direct summation range n <= cutoff.
    pub cutoff: u64,
    /// Bernoulli corrections in the tail expansion.
    pub corrections: usize,
}

impl Default for ZeConfig {
    fn default() -> Self {
        ZeConfig { cutoff: 10_000, corrections: 4 }
    }
}

/// Power of 1/M kept in tail expansions.
const TAIL_ORDER: usize = 12;

/// Asymptotic expansion sum_j a_j(M mod d) M^{-j}.
type Expansion = Vec<Vec<Complex64>>;

fn binom_neg(q: usize, i: usize) -> f64 {
    // binomial(-q, i)
    let mut c = 1.0;
    for k in 0..i {
        c *= -((q + k) as f64) / (k + 1) as f64;
    }
    c
}

fn bernoulli_f64() -> &'static Vec<f64> {
    static B: OnceLock<Vec<f64>> = OnceLock::new();
    B.get_or_init(|| bernoulli(24).iter().map(|b| b.to_f64().expect("finite")).collect())
}

/// Adds c * x^{-q} with x = (M + delta) / d, expanded in 1/M, into `out`.
fn add_x_power(out: &mut [Complex64], c: Complex64, q: usize, delta: f64, d: f64) {
    let scale = d.powi(q as i32);
    for i in 0..out.len() {
        if q + i >= out.len() {
            break;
        }
        out[q + i] += c * scale * binom_neg(q, i) * delta.powi(i as i32);
    }
}

/// sum_{n > M, n = r mod d} n^{-p}, expanded in 1/M for M = c mod d; for p = 1 the
/// common divergent part -log M is dropped.
fn residue_tail(p: usize, delta: f64, d: f64, corrections: usize, out: &mut [Complex64], c: Complex64) {
    let b = bernoulli_f64();
    let c = c * d.powi(-(p as i32));
    if p == 1 {
        // -psi(x) ~ -log x + 1/(2x) + sum B_2i / (2i) x^{-2i}, with -log x = -log M + log d - log(1 + delta/M)
        for i in 1..out.len() {
            out[i] += c * (if i % 2 == 1 { -1.0 } else { 1.0 }) * delta.powi(i as i32) / i as f64;
        }
        add_x_power(out, c * 0.5, 1, delta, d);
        for i in 1..=corrections {
            add_x_power(out, c * (b[2 * i] / (2 * i) as f64), 2 * i, delta, d);
        }
        return;
    }
    // Hurwitz zeta: x^{1-p}/(p-1) + x^{-p}/2 + sum B_2i/(2i)! (p)_{2i-1} x^{-p-2i+1}
    add_x_power(out, c / (p - 1) as f64, p - 1, delta, d);
    add_x_power(out, c * 0.5, p, delta, d);
    for i in 1..=corrections {
        let mut rising = 1.0;
        for k in 0..(2 * i - 1) {
            rising *= (p + k) as f64;
        }
        let mut fact = 1.0;
        for k in 1..=(2 * i) {
            fact *= k as f64;
        }
        add_x_power(out, c * (b[2 * i] / fact * rising), p + 2 * i - 1, delta, d);
    }
}

/// Expansion of sum_{n > M} chi(n) n^{-s} E(n).
fn tail_step(e: &Expansion, chi: &[Complex64], s: usize, d: usize, corrections: usize) -> Expansion {
    let mut out = vec![vec![Complex64::new(0.0, 0.0); TAIL_ORDER + 1]; d];
    for (c, slot) in out.iter_mut().enumerate() {
        for r in 0..d {
            let delta = {
                let x = (r + d - c) % d;
                if x == 0 {
                    d
                } else {
                    x
                }
            } as f64;
            for (j, a) in e[r].iter().enumerate() {
                if a.norm() == 0.0 || j + s > TAIL_ORDER + 1 {
                    continue;
                }
                residue_tail(j + s, delta, d as f64, corrections, slot, chi[r] * a);
            }
        }
    }
    out
}

fn eval_expansion(e: &Expansion, m: u64) -> (Complex64, f64) {
    let d = e.len() as u64;
    let coeffs = &e[(m % d) as usize];
    let x = 1.0 / m as f64;
    let mut v = Complex64::new(0.0, 0.0);
    for (j, a) in coeffs.iter().enumerate() {
        v += a * x.powi(j as i32);
    }
    let last = coeffs.last().map(|a| a.norm() * x.powi(TAIL_ORDER as i32)).unwrap_or(0.0);
    (v, last)
}

fn lcm_denoms(eps: &[BigRational]) -> usize {
    eps.iter().fold(1i64, |acc, e| acc.lcm(&e.denom().to_i64().expect("small"))) as usize
}

/// Ze value by direct summation to the cutoff plus per-residue-class asymptotic tails.
pub fn ze_eval_with(idx: &MzvIndex, cfg: ZeConfig) -> Result<MzvValue> {
    if !idx.is_convergent() {
        return Err(Error::Divergent(format!("Ze{idx} diverges")));
    }
    let r = idx.depth();
    if r == 0 {
        return Ok(MzvValue::new(Complex64::new(1.0, 0.0), 0.0));
    }
    if r > 4 || idx.weight() > 12 {
        return Err(Error::Precondition("ze_eval supports depth <= 4 and weight <= 12".into()));
    }
    let n = cfg.cutoff;
    let d = lcm_denoms(&idx.eps);
    let chis: Vec<Vec<Complex64>> = idx
        .eps
        .iter()
        .map(|e| (0..d).map(|k| root_of_unity(&(e * BigRational::from_integer(BigInt::from(k))))).collect())
        .collect();
    // heads: h[j] = sum over N >= n_j > ... > n_r > 0 of the suffix j..r
    let mut h = vec![Complex64::new(0.0, 0.0); r + 1];
    h[r] = Complex64::new(1.0, 0.0);
    for m in 1..=n {
        let mf = m as f64;
        for j in 0..r {
            let t = chis[j][(m % d as u64) as usize] * mf.powi(-(idx.s[j] as i32));
            let next = h[j + 1];
            h[j] += t * next;
        }
    }
    // tails of prefixes
    let mut total = h[0];
    let mut err = 4e-16 * n as f64 * r as f64;
    let mut e: Expansion = vec![
        {
            let mut v = vec![Complex64::new(0.0, 0.0); TAIL_ORDER + 1];
            v[0] = Complex64::new(1.0, 0.0);
            v
        };
        d
    ];
    for k in 0..r {
        e = tail_step(&e, &chis[k], idx.s[k] as usize, d, cfg.corrections);
        let (t, last) = eval_expansion(&e, n);
        total += t * h[k + 1];
        err += last * h[k + 1].norm();
    }
    // size of the first omitted Bernoulli correction
    let b = bernoulli_f64();
    let k = 2 * (cfg.corrections + 1);
    err += b[k].abs() * (d as f64 / n as f64).powi(k as i32) * 10.0;
    Ok(MzvValue::new(total, err))
}

pub fn ze_eval(idx: &MzvIndex, precision: usize) -> Result<MzvValue> {
    let _ = precision;
    ze_eval_with(idx, ZeConfig::default())
}

/// Formal sum of indices with multiplicities.
pub type IndexSum = BTreeMap<MzvIndex, u64>;

pub fn stuffle_product(a: &MzvIndex, b: &MzvIndex) -> Result<IndexSum> {
    stuffle_expansion(&a.to_word(), &b.to_word())?
        .into_iter()
        .map(|(w, c)| Ok((MzvIndex::from_word(&w)?, c)))
        .collect()
}

pub fn wa_shuffle(a: &WaWord, b: &WaWord) -> BTreeMap<WaWord, u64> {
    shuffle_product(&a.to_int_word(), &b.to_int_word())
        .into_iter()
        .map(|(w, c)| (WaWord::from_int_word(&w), c))
        .collect()
}

/// (eps; s) -> (ê_r, 0^{s_r - 1}, ..., ê_1, 0^{s_1 - 1}) with ê_j = e^{-2 pi i (eps_1 + ... + eps_j)}.
/// The minus sign makes the dictionary an identity: 1/(a - zeta) expands in powers of 1/a.
pub fn ze_to_wa(idx: &MzvIndex) -> Result<WaWord> {
    if !idx.is_convergent() {
        return Err(Error::Divergent(format!("Ze{idx} diverges")));
    }
    let mut partial = BigRational::zero();
    let mut blocks = vec![];
    for (s, e) in idx.s.iter().zip(&idx.eps) {
        partial += e;
        let mut block = vec![WaLetter::root(-partial.clone())];
        block.extend(std::iter::repeat_n(WaLetter::Zero, *s as usize - 1));
        blocks.push(block);
    }
    Ok(WaWord::new(blocks.into_iter().rev().flatten().collect()))
}

/// Inverse of `ze_to_wa` on its image.
pub fn wa_to_ze(w: &WaWord) -> Result<MzvIndex> {
    let mut blocks: Vec<(BigRational, u32)> = vec![];
    for a in &w.alphas {
        match a {
            WaLetter::Root(q) => blocks.push((q.clone(), 1)),
            WaLetter::Zero => match blocks.last_mut() {
                Some(b) => b.1 += 1,
                None => return Err(Error::Precondition(format!("{w} starts with 0"))),
            },
        }
    }
    blocks.reverse();
    let mut prev = BigRational::zero();
    let mut s = vec![];
    let mut eps = vec![];
    for (q, n) in blocks {
        let partial = -q;
        eps.push(&partial - &prev);
        prev = partial;
        s.push(n);
    }
    MzvIndex::new(s, eps)
}

/// Spectral integration matrix: S[i][j] = int_{-1}^{x_i} l_j(t) dt for the Lagrange basis at GL nodes.
fn integration_matrix(n: usize) -> Vec<Vec<f64>> {
    static CACHE: OnceLock<Mutex<BTreeMap<usize, Vec<Vec<f64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(s) = cache.lock().expect("cache").get(&n) {
        return s.clone();
    }
    let (x, _) = gauss_legendre(n);
    let lagrange = |j: usize, t: f64| -> f64 {
        let mut v = 1.0;
        for k in 0..n {
            if k != j {
                v *= (t - x[k]) / (x[j] - x[k]);
            }
        }
        v
    };
    let (g, gw) = gauss_legendre(n);
    let s: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let (h, c) = ((x[i] + 1.0) / 2.0, (x[i] - 1.0) / 2.0);
            (0..n).map(|j| g.iter().zip(&gw).map(|(t, w)| w * lagrange(j, c + h * t)).sum::<f64>() * h).collect()
        })
        .collect();
    cache.lock().expect("cache").insert(n, s.clone());
    s
}

/// Iterated integral over 0 < zeta_1 < ... < zeta_l < 1 of prod 1/(alpha_k - zeta_k), on panels
/// graded geometrically towards 1.
fn wa_integral(alphas: &[Complex64], ones: &[bool], n: usize) -> Complex64 {
    let l = alphas.len();
    let (x, w) = gauss_legendre(n);
    let s = integration_matrix(n);
    // panels as (start, end) in terms of distance to 1 where useful
    let mut panels: Vec<(f64, f64)> = vec![(0.0, 0.25), (0.25, 0.5)];
    for k in 1..52 {
        panels.push((1.0 - 0.5f64.powi(k), 1.0 - 0.5f64.powi(k + 1)));
    }
    let mut start = vec![Complex64::new(0.0, 0.0); l + 1];
    start[0] = Complex64::new(1.0, 0.0);
    for (k, &(a, b)) in panels.iter().enumerate() {
        let h = (b - a) / 2.0;
        // distance to 1 of each node, computed without cancellation on the graded panels
        let om: Vec<f64> = if k >= 2 {
            let (da, db) = (0.5f64.powi(k as i32 - 1), 0.5f64.powi(k as i32));
            x.iter().map(|t| (da + db) / 2.0 - (da - db) / 2.0 * t).collect()
        } else {
            x.iter().map(|t| 1.0 - (a + b) / 2.0 - h * t).collect()
        };
        let z: Vec<f64> = x.iter().map(|t| (a + b) / 2.0 + h * t).collect();
        let mut vals = vec![Complex64::new(1.0, 0.0); n];
        let mut end = vec![Complex64::new(1.0, 0.0); l + 1];
        for j in 1..=l {
            let f: Vec<Complex64> = (0..n)
                .map(|i| {
                    let ker = if ones[j - 1] { Complex64::new(1.0 / om[i], 0.0) } else { 1.0 / (alphas[j - 1] - z[i]) };
                    ker * vals[i]
                })
                .collect();
            end[j] = start[j] + f.iter().zip(&w).map(|(fi, wi)| fi * wi).sum::<Complex64>() * h;
            vals = (0..n).map(|i| start[j] + (0..n).map(|m| f[m] * s[i][m]).sum::<Complex64>() * h).collect();
        }
        start = end;
    }
    start[l]
}

/// Wa by iterated spectral quadrature; the error is the difference of two resolutions.
pub fn wa_eval(w: &WaWord, precision: usize) -> Result<MzvValue> {
    let _ = precision;
    if w.is_empty() {
        return Ok(MzvValue::new(Complex64::new(1.0, 0.0), 0.0));
    }
    if !w.is_integrable() {
        return Err(Error::Divergent(format!("Wa{w} needs regularisation")));
    }
    if w.len() > 6 {
        return Err(Error::Precondition("wa_eval supports length <= 6".into()));
    }
    let alphas: Vec<Complex64> = w.alphas.iter().map(WaLetter::value).collect();
    let ones: Vec<bool> = w.alphas.iter().map(WaLetter::is_one).collect();
    let sign = if w.zeros() % 2 == 0 { 1.0 } else { -1.0 };
    let lo = wa_integral(&alphas, &ones, 16) * sign;
    let hi = wa_integral(&alphas, &ones, 24) * sign;
    // the last panel has width 2^-53 and contributes below the rounding level
    Ok(MzvValue::new(hi, (hi - lo).norm() + 1e-13))
}

#[derive(Clone, Debug, Serialize)]
pub struct Term {
    pub coefficient: u64,
    pub index: String,
    pub re: f64,
    pub im: f64,
    pub error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub terms: Vec<Term>,
    pub re: f64,
    pub im: f64,
    pub error: f64,
    pub residual: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub a: String,
    pub b: String,
    pub product: MzvValue,
    pub stuffle: Option<Decomposition>,
    pub shuffle: Option<Decomposition>,
}

impl RelationReport {
    pub fn ok(&self) -> bool {
        self.stuffle.as_ref().is_none_or(|d| d.ok) && self.shuffle.as_ref().is_none_or(|d| d.ok)
    }
}

fn decompose(terms: IndexSum, product: &MzvValue, tol: f64) -> Result<Decomposition> {
    let mut out = vec![];
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for (idx, c) in terms {
        let v = ze_eval(&idx, 53)?;
        total += v.c64() * c as f64;
        err += v.error * c as f64;
        out.push(Term { coefficient: c, index: idx.to_string(), re: v.re, im: v.im, error: v.error });
    }
    let residual = (total - product.c64()).norm();
    Ok(Decomposition { terms: out, re: total.re, im: total.im, error: err, residual, ok: residual <= tol.max(err + product.error) })
}

/// Checks Ze(a) Ze(b) against its stuffle expansion and against the shuffle of the Wa words.
pub fn verify_relation(a: &MzvIndex, b: &MzvIndex, stuffle: bool, shuffle: bool, tol: f64) -> Result<RelationReport> {
    let (va, vb) = (ze_eval(a, 53)?, ze_eval(b, 53)?);
    let p = va.c64() * vb.c64();
    let product = MzvValue::new(p, va.error * vb.c64().norm() + vb.error * va.c64().norm());
    let st = if stuffle { Some(decompose(stuffle_product(a, b)?, &product, tol)?) } else { None };
    let sh = if shuffle {
        let mut terms = IndexSum::new();
        for (w, c) in wa_shuffle(&ze_to_wa(a)?, &ze_to_wa(b)?) {
            *terms.entry(wa_to_ze(&w)?).or_default() += c;
        }
        Some(decompose(terms, &product, tol)?)
    } else {
        None
    };
    Ok(RelationReport { a: a.to_string(), b: b.to_string(), product, stuffle: st, shuffle: sh })
}

/// Ze as a mould value on bimould words; None outside the convergent range.
pub fn ze_mould_value(w: &Word) -> Option<Complex64> {
    let idx = MzvIndex::from_word(w).ok()?;
    if !idx.is_convergent() || idx.weight() > 12 || idx.depth() > 4 {
        return None;
    }
    ze_eval(&idx, 53).ok().map(|v| v.c64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn half() -> BigRational {
        BigRational::new(1.into(), 2.into())
    }

    #[test]
    fn single_values() {
        let z2 = ze_eval(&MzvIndex::plain(&[2]).unwrap(), 53).unwrap();
        assert!((z2.re - PI * PI / 6.0).abs() < 1e-12, "{z2:?}");
        assert!(z2.error <= 1e-10);
        let z3 = ze_eval(&MzvIndex::plain(&[3]).unwrap(), 53).unwrap();
        let z21 = ze_eval(&MzvIndex::plain(&[2, 1]).unwrap(), 53).unwrap();
        assert!((z3.re - 1.2020569031595942).abs() < 1e-12);
        assert!((z21.re - z3.re).abs() < 1e-11, "{z21:?}");
        let alt = ze_eval(&MzvIndex::new(vec![2], vec![half()]).unwrap(), 53).unwrap();
        assert!((alt.re + PI * PI / 12.0).abs() < 1e-12 && alt.im.abs() < 1e-12);
        let z31 = ze_eval(&MzvIndex::plain(&[3, 1]).unwrap(), 53).unwrap();
        assert!((z31.re - PI.powi(4) / 360.0).abs() < 1e-12);
        assert!(matches!(ze_eval(&MzvIndex::plain(&[1, 2]).unwrap(), 53), Err(Error::Divergent(_))));
    }

    #[test]
    fn coloured_depth_one_against_polylog() {
        // sum e^{2 pi i n/3} / n^2 = Li_2(e^{2 pi i/3})
        let third = BigRational::new(1.into(), 3.into());
        let v = ze_eval(&MzvIndex::new(vec![2], vec![third]).unwrap(), 53).unwrap();
        let li2 = polylog::Li2::li2(&Complex64::from_polar(1.0, 2.0 * PI / 3.0));
        assert!((v.c64() - li2).norm() < 1e-11, "{v:?} {li2}");
        // alternating harmonic series: sum (-1)^n / n = -log 2
        let v = ze_eval(&MzvIndex::new(vec![1], vec![half()]).unwrap(), 53).unwrap();
        assert!((v.re + 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn stuffle_examples() {
        let p = stuffle_product(&MzvIndex::plain(&[2]).unwrap(), &MzvIndex::plain(&[3]).unwrap()).unwrap();
        let want: IndexSum = [(vec![2, 3], 1), (vec![3, 2], 1), (vec![5], 1)]
            .into_iter()
            .map(|(s, c)| (MzvIndex::plain(&s).unwrap(), c))
            .collect();
        assert_eq!(p, want);
        let p = stuffle_product(&MzvIndex::plain(&[2]).unwrap(), &MzvIndex::plain(&[2]).unwrap()).unwrap();
        assert_eq!(p.get(&MzvIndex::plain(&[2, 2]).unwrap()), Some(&2));
        assert_eq!(p.get(&MzvIndex::plain(&[4]).unwrap()), Some(&1));
        let p = stuffle_product(&MzvIndex::plain(&[]).unwrap(), &MzvIndex::plain(&[3]).unwrap()).unwrap();
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn dictionary() {
        assert_eq!(ze_to_wa(&MzvIndex::plain(&[2]).unwrap()).unwrap(), WaWord::ints(&[1, 0]).unwrap());
        assert_eq!(ze_to_wa(&MzvIndex::plain(&[3]).unwrap()).unwrap(), WaWord::ints(&[1, 0, 0]).unwrap());
        assert_eq!(ze_to_wa(&MzvIndex::plain(&[2, 1]).unwrap()).unwrap(), WaWord::ints(&[1, 1, 0]).unwrap());
        let idx = MzvIndex::new(vec![2, 1], vec![BigRational::new(1.into(), 3.into()), half()]).unwrap();
        assert_eq!(wa_to_ze(&ze_to_wa(&idx).unwrap()).unwrap(), idx);
    }

    #[test]
    fn wa_values() {
        let v = wa_eval(&WaWord::ints(&[1, 0]).unwrap(), 53).unwrap();
        assert!((v.re - PI * PI / 6.0).abs() < 1e-10, "{v:?}");
        let v = wa_eval(&WaWord::ints(&[-1, 0]).unwrap(), 53).unwrap();
        assert!((v.re + PI * PI / 12.0).abs() < 1e-10, "{v:?}");
        let v = wa_eval(&WaWord::ints(&[1, 1, 0]).unwrap(), 53).unwrap();
        assert!((v.re - 1.2020569031595942).abs() < 1e-9, "{v:?}");
        assert!(matches!(wa_eval(&WaWord::ints(&[0, 1]).unwrap(), 53), Err(Error::Divergent(_))));
    }

    #[test]
    fn coloured_dictionary() {
        let third = BigRational::new(1.into(), 3.into());
        let idx = MzvIndex::new(vec![2, 1], vec![third, half()]).unwrap();
        let z = ze_eval(&idx, 53).unwrap();
        let w = wa_eval(&ze_to_wa(&idx).unwrap(), 53).unwrap();
        assert!((z.c64() - w.c64()).norm() < 1e-8, "{z:?} {w:?}");
    }

    #[test]
    fn zeta_two_squared() {
        let a = MzvIndex::plain(&[2]).unwrap();
        let r = verify_relation(&a, &a, true, true, 1e-8).unwrap();
        assert!(r.ok(), "{r:?}");
        assert_eq!(r.shuffle.as_ref().unwrap().terms.len(), 2);
        assert!((r.product.re - PI.powi(4) / 36.0).abs() < 1e-10);
    }
}
