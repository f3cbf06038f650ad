//! Hyperlogarithmic resurgence monomials V̊^w, the moulds V(eta), L(eta) and U,
//! and numerical L^w iterated integrals.

use std::collections::BTreeMap;
use std::sync::Mutex;

use num_complex::Complex64;

use crate::alien::{alien_derivation, alien_plus, ResurgentSeries};
use crate::borelfun::{BorelFunction, RationalFn};
use crate::error::{Error, Result};
use crate::mould::{Alphabet, Mould};
use crate::quad::gauss_legendre;
use crate::scalars::{factorial, ExactScalar, GaussRat, NumericComplex};
use crate::series::FormalSeries;
use crate::words::{splittings, Letter, Word};

fn letter_gauss(l: &Letter) -> Result<GaussRat> {
    match l {
        Letter::Int(n) => Ok(GaussRat::from_int(*n)),
        Letter::Gauss(g) => Ok(g.clone()),
        _ => Err(Error::CarrierMismatch("hyperlog letters are scalars".into())),
    }
}

pub struct MonomialFamily {
    pub letters: Vec<Letter>,
    /// Taylor coefficients of a_hat per letter; absent means a_hat = 1.
    pub a_hat: BTreeMap<Letter, Vec<ExactScalar>>,
    pub order: usize,
    cache: Mutex<BTreeMap<Word, FormalSeries>>,
}

impl MonomialFamily {
    pub fn new(letters: Vec<Letter>, order: usize) -> Result<Self> {
        if letters.iter().any(Letter::is_zero) {
            return Err(Error::Precondition("zero letter".into()));
        }
        for l in &letters {
            letter_gauss(l)?;
        }
        Ok(MonomialFamily { letters, a_hat: BTreeMap::new(), order, cache: Mutex::new(BTreeMap::new()) })
    }

    pub fn ints(xs: &[i64], order: usize) -> Result<Self> {
        Self::new(xs.iter().map(|&x| Letter::Int(x)).collect(), order)
    }

    pub fn with_a_hat(mut self, l: Letter, taylor: Vec<ExactScalar>) -> Self {
        self.a_hat.insert(l, taylor);
        self.cache.lock().expect("cache").clear();
        self
    }

    fn has_default_a_hat(&self, w: &Word) -> bool {
        w.letters().iter().all(|l| !self.a_hat.contains_key(l))
    }

    /// B^{-1} a_hat: sum a_n n! z^{-n-1}.
    fn inverse_borel_a(&self, l: &Letter) -> FormalSeries {
        let mut s = FormalSeries::zero(self.order);
        match self.a_hat.get(l) {
            None => {
                if self.order >= 1 {
                    s.coeffs[1] = ExactScalar::one();
                }
            }
            Some(t) => {
                for (n, a) in t.iter().enumerate() {
                    if n + 1 <= self.order {
                        s.coeffs[n + 1] = a.scale_rational(&num_rational::BigRational::from_integer(factorial(n as u64)));
                    }
                }
            }
        }
        s
    }

    fn check_resonance(&self, w: &Word) -> Result<()> {
        for (k, p) in w.prefix_sums()?.iter().enumerate() {
            if p.is_zero() {
                return Err(Error::Resonance(w.slice(0, k + 1).to_string()));
            }
        }
        for l in w.letters() {
            if !self.letters.contains(l) {
                return Err(Error::CarrierEscape(l.to_string()));
            }
        }
        Ok(())
    }

    /// V̊^w as a truncated series, from (d/dz + ||w||) V̊^w = -V̊^{w'} B^{-1}a_{w_r}.
    pub fn v_series(&self, w: &Word) -> Result<FormalSeries> {
        if w.is_empty() {
            return Ok(FormalSeries::constant(ExactScalar::one(), self.order));
        }
        self.check_resonance(w)?;
        if let Some(s) = self.cache.lock().expect("cache").get(w) {
            return Ok(s.clone());
        }
        let prev = self.v_series(&w.init())?;
        let rhs = prev.cauchy_product(&self.inverse_borel_a(w.last().expect("nonempty"))).scale(&ExactScalar::from_int(-1));
        let c = ExactScalar::from_gauss(letter_gauss(&w.norm()?.expect("nonempty"))?);
        let ci = c.inv()?;
        // (d/dz + c)^{-1} = sum_k (-1)^k c^{-k-1} (d/dz)^k
        let mut out = FormalSeries::zero(self.order);
        let mut d = rhs;
        let mut ck = ci.clone();
        for k in 0..=self.order {
            let term = d.scale(&if k % 2 == 0 { ck.clone() } else { -&ck });
            out = out.add(&term);
            d = d.differentiate();
            if d.coeffs.iter().all(ExactScalar::is_zero) {
                break;
            }
            ck = &ck * &ci;
        }
        self.cache.lock().expect("cache").insert(w.clone(), out.clone());
        Ok(out)
    }

    /// Exact Borel form of V̊^w for depth at most 2 and a_hat = 1.
    pub fn v_borel(&self, w: &Word) -> Result<BorelFunction> {
        self.check_resonance(w)?;
        if !self.has_default_a_hat(w) {
            return Err(Error::ClosedFormUnavailable("Borel form with a non-constant a_hat".into()));
        }
        let ls = w.letters();
        match ls.len() {
            0 => Err(Error::Precondition("the empty word has no minor".into())),
            1 => Ok(BorelFunction::Rational(RationalFn::simple_pole(ExactScalar::one(), letter_gauss(&ls[0])?))),
            2 => {
                let first = BorelFunction::Rational(RationalFn::simple_pole(ExactScalar::one(), letter_gauss(&ls[0])?));
                let one = BorelFunction::Rational(RationalFn::constant(ExactScalar::one()));
                first.convolve(&one)?.div_linear(&letter_gauss(&w.norm()?.expect("nonempty"))?)
            }
            r => Err(Error::ClosedFormUnavailable(format!("depth {r} Borel form"))),
        }
    }

    pub fn v_resurgent(&self, w: &Word) -> Result<ResurgentSeries> {
        if w.is_empty() {
            return Ok(ResurgentSeries::constant(ExactScalar::one()));
        }
        Ok(ResurgentSeries::from_minor(self.v_borel(w)?))
    }

    fn depth2_words(&self, alphabet: &Alphabet, max_length: usize) -> Result<Vec<Word>> {
        if max_length > 2 {
            return Err(Error::ClosedFormUnavailable(format!("depth {max_length} alien data")));
        }
        Ok(crate::words::all_words(&alphabet.letters, max_length).into_iter().filter(|w| !w.is_empty()).collect())
    }

    /// Solves (op V̊)^w = -X^w - sum_{w = ab, a, b nonempty} X^a V̊^b for the mould X,
    /// where op is Delta_eta (X = V(eta)) or Delta^+_eta (X = -L(eta)).
    fn solve_relation(&self, alphabet: &Alphabet, max_length: usize, eta: &ExactScalar, plus: bool) -> Result<Mould> {
        let mut m = Mould::zero(alphabet.clone(), max_length);
        for w in self.depth2_words(alphabet, max_length)? {
            let v = self.v_resurgent(&w)?;
            let d = if plus { alien_plus(&v, eta)? } else { alien_derivation(&v, eta)? };
            // subtract the prefix contributions
            let mut rest = d.minor.clone();
            let mut constant = d.constant.clone();
            for k in 1..w.len() {
                let (a, b) = (w.slice(0, k), w.slice(k, w.len()));
                let xa = m.get(&a);
                if xa.is_zero() {
                    continue;
                }
                // + X^a V̊^b with X = -V  (resp. +L)
                let vb = self.v_resurgent(&b)?;
                let s = if plus { -&xa } else { xa.clone() };
                rest = rest.add(&vb.minor.scale(&s)?)?;
                constant = &constant + &(&vb.constant * &s);
            }
            if !rest.is_zero() {
                return Err(Error::Unreachable(format!("non-scalar remainder at {w}")));
            }
            let x = if plus { constant } else { -&constant };
            m.set(w, x)?;
        }
        Ok(m)
    }

    /// The mould V(eta) from Delta_eta V̊ = -V(eta) x V̊, on words of length at most 2.
    pub fn extract_v(&self, eta: &ExactScalar, max_length: usize) -> Result<Mould> {
        self.solve_relation(&Alphabet::new(self.letters.clone())?, max_length, eta, false)
    }

    /// The mould L(eta) from Delta^+_eta V̊ = L(eta) x V̊, on words of length at most 2.
    pub fn extract_l(&self, eta: &ExactScalar, max_length: usize) -> Result<Mould> {
        self.solve_relation(&Alphabet::new(self.letters.clone())?, max_length, eta, true)
    }

    /// V = sum over eta of V(eta), on the graded alphabet {1..n} truncated at weight n.
    pub fn v_total(&self, n: i64, max_length: usize) -> Result<Mould> {
        let alphabet = Alphabet::ints_upto(n);
        let mut total = Mould::zero(alphabet.clone(), max_length).with_max_weight(n)?;
        for eta in 1..=n {
            let v = self.solve_relation(&alphabet, max_length, &ExactScalar::from_int(eta), false)?;
            for (w, x) in v.entries() {
                if !w.is_empty() && total.in_domain(w) && !x.is_zero() {
                    total.set(w.clone(), x.clone())?;
                }
            }
        }
        Ok(total)
    }

    /// gU^w = (V̊ o U)^w as a truncated series.
    pub fn gu_series(&self, u: &Mould, w: &Word) -> Result<FormalSeries> {
        self.gu_combination(u, w)?.into_iter().try_fold(FormalSeries::zero(self.order), |acc, (c, word)| {
            Ok(acc.add(&self.v_series(&word)?.scale(&c)))
        })
    }

    /// gU^w as an exact resurgent series (depth at most 2).
    pub fn gu_resurgent(&self, u: &Mould, w: &Word) -> Result<ResurgentSeries> {
        let mut out = ResurgentSeries::constant(ExactScalar::zero());
        for (c, word) in self.gu_combination(u, w)? {
            let v = self.v_resurgent(&word)?;
            out.constant = &out.constant + &(&v.constant * &c);
            out.minor = out.minor.add(&v.minor.scale(&c)?)?;
        }
        Ok(out)
    }

    /// gU^w as a combination of V̊ monomials.
    pub fn gu_combination(&self, u: &Mould, w: &Word) -> Result<Vec<(ExactScalar, Word)>> {
        if w.is_empty() {
            return Ok(vec![(ExactScalar::one(), Word::empty())]);
        }
        let mut out = vec![];
        for s in 1..=w.len() {
            for parts in splittings(w, s) {
                let mut c = ExactScalar::one();
                for p in &parts {
                    c = &c * &u.get(p);
                }
                if c.is_zero() {
                    continue;
                }
                let comp = Word::new(parts.iter().map(|p| p.norm().map(|n| n.expect("nonempty"))).collect::<Result<_>>()?);
                out.push((c, comp));
            }
        }
        Ok(out)
    }
}

/// U with (-V) o U = I, so that Delta_eta (V̊ o U) = -(V(eta) o U) x (V̊ o U) keeps only
/// the first letter. Agrees with -comp_inverse(V) on length-1 words.
pub fn build_u(v_total: &Mould) -> Result<Mould> {
    v_total.neg().comp_inverse()
}

#[derive(Clone, Debug)]
pub struct LValue {
    pub value: NumericComplex,
    pub error: f64,
}

/// A smooth piece of the contour: zeta(t) for t in [0, 1].
#[derive(Clone, Copy, Debug)]
enum Piece {
    Segment(f64, f64),
    /// centre, radius, start angle, end angle
    Arc(f64, f64, f64, f64),
}

impl Piece {
    fn point(&self, t: f64) -> (Complex64, Complex64) {
        match *self {
            Piece::Segment(a, b) => (Complex64::new(a + (b - a) * t, 0.0), Complex64::new(b - a, 0.0)),
            Piece::Arc(c, r, t0, t1) => {
                let th = t0 + (t1 - t0) * t;
                let e = Complex64::from_polar(r, th);
                (Complex64::new(c, 0.0) + e, e * Complex64::new(0.0, t1 - t0))
            }
        }
    }
}

/// Polyline 0 -> end along the real axis with radius-1/4 half circles on the right of
/// travel around the integers strictly between.
fn contour(end: i64) -> Vec<Piece> {
    let s = end.signum() as f64;
    let r = 0.25;
    let mut pieces = vec![];
    let mut x = 0.0;
    for k in 1..end.abs() {
        let c = s * k as f64;
        pieces.push(Piece::Segment(x, c - s * r));
        // travelling in +x the right side is below: angle pi -> 2 pi; in -x it is above: angle 0 -> -pi... (mirrored)
        if s > 0.0 {
            pieces.push(Piece::Arc(c, r, std::f64::consts::PI, 2.0 * std::f64::consts::PI));
        } else {
            pieces.push(Piece::Arc(c, r, 0.0, std::f64::consts::PI));
        }
        x = c + s * r;
    }
    pieces.push(Piece::Segment(x, end as f64));
    pieces
}

/// Iterated integral over 0 < zeta_1 < ... < zeta_m along the pieces, of prod 1/(zeta_k - a_k),
/// with n-point Gauss-Legendre panels.
fn iterated(pieces: &[Piece], poles: &[f64], n: usize) -> Complex64 {
    let (x, w) = gauss_legendre(n);
    let m = poles.len();
    // panels: each piece split into 4
    let panels: Vec<(Piece, f64, f64)> =
        pieces.iter().flat_map(|p| (0..4).map(move |k| (*p, k as f64 / 4.0, (k + 1) as f64 / 4.0))).collect();
    // value of the depth-j iterated integral up to a point given as (panel, t)
    // computed recursively: I_j(point) = I_j(start of panel) + int_{panel start}^{t} K_j I_{j-1}
    fn partial(
        panels: &[(Piece, f64, f64)],
        starts: &[Vec<Complex64>],
        poles: &[f64],
        x: &[f64],
        w: &[f64],
        j: usize,
        panel: usize,
        t: f64,
    ) -> Complex64 {
        if j == 0 {
            return Complex64::new(1.0, 0.0);
        }
        let (piece, t0, _) = panels[panel];
        let (h, c) = ((t - t0) / 2.0, (t + t0) / 2.0);
        let mut s = Complex64::new(0.0, 0.0);
        for (xi, wi) in x.iter().zip(w) {
            let tt = c + h * xi;
            let (z, dz) = piece.point(tt);
            s += dz / (z - poles[j - 1]) * partial(panels, starts, poles, x, w, j - 1, panel, tt) * *wi;
        }
        starts[panel][j] + s * h
    }
    // starts[p][j] = I_j at the start of panel p
    let mut starts: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); m + 1]];
    starts[0][0] = Complex64::new(1.0, 0.0);
    for p in 0..panels.len() {
        let end = panels[p].2;
        let mut next = vec![Complex64::new(1.0, 0.0)];
        for j in 1..=m {
            next.push(partial(&panels, &starts, poles, &x, &w, j, p, end));
        }
        starts.push(next);
    }
    starts[panels.len()][m]
}

/// L^w = 2 pi i times the iterated integral of dzeta_k / (zeta_k - w̌_k), k < r, from 0 to w̌_r.
pub fn l_numeric(w: &[i64], precision: usize) -> Result<LValue> {
    let _ = precision;
    if w.is_empty() || w.len() > 3 {
        return Err(Error::Precondition("L^w needs 1 <= r <= 3".into()));
    }
    if w.contains(&0) {
        return Err(Error::Precondition("zero letter".into()));
    }
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let sums: Vec<i64> = w.iter().scan(0, |s, x| {
        *s += x;
        Some(*s)
    }).collect();
    let end = *sums.last().expect("nonempty");
    if w.len() == 1 {
        return Ok(LValue { value: NumericComplex::from_c64(two_pi_i), error: 0.0 });
    }
    let poles: Vec<f64> = sums[..sums.len() - 1].iter().map(|&x| x as f64).collect();
    for (k, &p) in sums[..sums.len() - 1].iter().enumerate() {
        if p == 0 || p == end {
            return Err(Error::Resonance(format!("partial sum {} of {:?} hits an endpoint", k + 1, w)));
        }
    }
    if end == 0 {
        return Err(Error::Resonance(format!("{w:?} has zero sum")));
    }
    let pieces = contour(end);
    let lo = iterated(&pieces, &poles, 16);
    let hi = iterated(&pieces, &poles, 24);
    Ok(LValue { value: NumericComplex::from_c64(hi * two_pi_i), error: ((hi - lo) * two_pi_i).norm() })
}
