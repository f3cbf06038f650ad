//! Exact Borel-plane functions: rational functions, depth-2 hyperlogarithmic forms
//! and a few named builtins, with branch-tracked continuation and singularity
//! extraction.

use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed};
use polylog::Li2;

use crate::error::{Error, Result};
use crate::scalars::{bernoulli, factorial, parse_rational, ExactScalar, GaussRat, NumericComplex};
use crate::series::BorelSeries;

const I: Complex64 = Complex64::new(0.0, 1.0);
const TWO_PI_I: Complex64 = Complex64::new(0.0, 2.0 * std::f64::consts::PI);

// ---- univariate polynomials, ascending coefficients ----

fn ptrim(mut p: Vec<ExactScalar>) -> Vec<ExactScalar> {
    while p.last().is_some_and(ExactScalar::is_zero) {
        p.pop();
    }
    p
}

fn padd(a: &[ExactScalar], b: &[ExactScalar]) -> Vec<ExactScalar> {
    let n = a.len().max(b.len());
    ptrim((0..n).map(|k| &a.get(k).cloned().unwrap_or_default() + &b.get(k).cloned().unwrap_or_default()).collect())
}

fn pmul(a: &[ExactScalar], b: &[ExactScalar]) -> Vec<ExactScalar> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![ExactScalar::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    ptrim(out)
}

fn pscale(a: &[ExactScalar], c: &ExactScalar) -> Vec<ExactScalar> {
    ptrim(a.iter().map(|x| x * c).collect())
}

/// (zeta - p)
fn plinear(p: &GaussRat) -> Vec<ExactScalar> {
    vec![ExactScalar::from_gauss(-p), ExactScalar::one()]
}

fn peval(a: &[ExactScalar], p: &GaussRat) -> ExactScalar {
    let pe = ExactScalar::from_gauss(p.clone());
    a.iter().rev().fold(ExactScalar::zero(), |acc, c| &(&acc * &pe) + c)
}

fn peval_c64(a: &[ExactScalar], z: Complex64) -> Complex64 {
    a.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_c64())
}

/// Synthetic division by (zeta - p): (quotient, remainder).
fn pdiv_linear(a: &[ExactScalar], p: &GaussRat) -> (Vec<ExactScalar>, ExactScalar) {
    if a.is_empty() {
        return (vec![], ExactScalar::zero());
    }
    let pe = ExactScalar::from_gauss(p.clone());
    let n = a.len();
    let mut q = vec![ExactScalar::zero(); n - 1];
    let mut carry = ExactScalar::zero();
    for k in (0..n).rev() {
        let v = &a[k] + &carry;
        if k == 0 {
            return (ptrim(q), v);
        }
        q[k - 1] = v.clone();
        carry = &v * &pe;
    }
    unreachable!()
}

/// p(zeta + a)
fn pshift(a_: &[ExactScalar], a: &GaussRat) -> Vec<ExactScalar> {
    let lin = vec![ExactScalar::from_gauss(a.clone()), ExactScalar::one()];
    let mut out: Vec<ExactScalar> = vec![];
    for c in a_.iter().rev() {
        out = padd(&pmul(&out, &lin), &[c.clone()]);
    }
    out
}

fn pderiv(a: &[ExactScalar]) -> Vec<ExactScalar> {
    ptrim(a.iter().enumerate().skip(1).map(|(k, c)| c.scale_int(k as i64)).collect())
}

fn ppow_linear(p: &GaussRat, m: u32) -> Vec<ExactScalar> {
    (0..m).fold(vec![ExactScalar::one()], |acc, _| pmul(&acc, &plinear(p)))
}

fn gauss_to_scalar(g: &GaussRat) -> ExactScalar {
    ExactScalar::from_gauss(g.clone())
}

// ---- rational functions ----

/// num(zeta) / prod (zeta - p)^m, kept coprime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFn {
    pub num: Vec<ExactScalar>,
    pub poles: Vec<(GaussRat, u32)>,
}

impl RationalFn {
    pub fn new(num: Vec<ExactScalar>, poles: Vec<(GaussRat, u32)>) -> RationalFn {
        let mut num = ptrim(num);
        let mut merged: Vec<(GaussRat, u32)> = vec![];
        for (p, m) in poles {
            match merged.iter_mut().find(|(q, _)| *q == p) {
                Some(e) => e.1 += m,
                None => merged.push((p, m)),
            }
        }
        if num.is_empty() {
            merged.clear();
        }
        for (p, m) in merged.iter_mut() {
            while *m > 0 {
                let (q, r) = pdiv_linear(&num, p);
                if !r.is_zero() {
                    break;
                }
                num = q;
                *m -= 1;
            }
        }
        merged.retain(|(_, m)| *m > 0);
        merged.sort();
        RationalFn { num, poles: merged }
    }
    pub fn zero() -> RationalFn {
        RationalFn { num: vec![], poles: vec![] }
    }
    pub fn constant(c: ExactScalar) -> RationalFn {
        RationalFn::new(vec![c], vec![])
    }
    pub fn polynomial(c: Vec<ExactScalar>) -> RationalFn {
        RationalFn::new(c, vec![])
    }
    /// c / (zeta - p)
    pub fn simple_pole(c: ExactScalar, p: GaussRat) -> RationalFn {
        RationalFn::new(vec![c], vec![(p, 1)])
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }
    pub fn is_polynomial(&self) -> bool {
        self.poles.is_empty()
    }
    pub fn pole_order(&self, p: &GaussRat) -> u32 {
        self.poles.iter().find(|(q, _)| q == p).map_or(0, |(_, m)| *m)
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        let mut v = peval_c64(&self.num, z);
        for (p, m) in &self.poles {
            v /= (z - p.to_c64()).powi(*m as i32);
        }
        v
    }

    /// Exact value at a point that is not a pole.
    pub fn eval_exact(&self, x: &GaussRat) -> Result<ExactScalar> {
        let mut d = GaussRat::one();
        for (p, m) in &self.poles {
            d = &d * &(x - p).pow(*m as i32)?;
        }
        Ok(peval(&self.num, x).scale(&d.inv()?))
    }

    /// Residue at a simple pole.
    pub fn residue(&self, p: &GaussRat) -> Result<ExactScalar> {
        match self.pole_order(p) {
            0 => Ok(ExactScalar::zero()),
            1 => {
                let rest = RationalFn { num: self.num.clone(), poles: self.poles.iter().filter(|(q, _)| q != p).cloned().collect() };
                rest.eval_exact(p)
            }
            m => Err(Error::NotSimple(format!("pole of order {m} at {p}"))),
        }
    }

    pub fn scale(&self, c: &ExactScalar) -> RationalFn {
        RationalFn::new(pscale(&self.num, c), self.poles.clone())
    }

    pub fn mul(&self, o: &RationalFn) -> RationalFn {
        let mut poles = self.poles.clone();
        poles.extend(o.poles.iter().cloned());
        RationalFn::new(pmul(&self.num, &o.num), poles)
    }

    pub fn add(&self, o: &RationalFn) -> RationalFn {
        // common denominator: max multiplicity at each pole
        let mut poles = self.poles.clone();
        for (p, m) in &o.poles {
            match poles.iter_mut().find(|(q, _)| q == p) {
                Some(e) => e.1 = e.1.max(*m),
                None => poles.push((p.clone(), *m)),
            }
        }
        let lift = |r: &RationalFn| -> Vec<ExactScalar> {
            poles.iter().fold(r.num.clone(), |acc, (p, m)| pmul(&acc, &ppow_linear(p, m - r.pole_order(p))))
        };
        RationalFn::new(padd(&lift(self), &lift(o)), poles)
    }

    /// r(a + xi) as a function of xi.
    pub fn shift(&self, a: &GaussRat) -> RationalFn {
        RationalFn::new(pshift(&self.num, a), self.poles.iter().map(|(p, m)| (p - a, *m)).collect())
    }

    /// Adds a simple factor 1/(zeta - p).
    pub fn div_linear(&self, p: &GaussRat) -> RationalFn {
        let mut poles = self.poles.clone();
        poles.push((p.clone(), 1));
        RationalFn::new(self.num.clone(), poles)
    }

    /// Taylor coefficients at 0 up to zeta^(n-1).
    pub fn taylor(&self, n: usize) -> Result<Vec<ExactScalar>> {
        let mut acc: Vec<ExactScalar> = self.num.clone();
        acc.resize(n.max(acc.len()), ExactScalar::zero());
        acc.truncate(n);
        for (p, m) in &self.poles {
            if p.is_zero() {
                return Err(Error::Precondition("pole at the origin".into()));
            }
            // 1/(zeta - p) = -sum zeta^k / p^{k+1}
            let pi = p.inv()?;
            let mut geo = vec![ExactScalar::zero(); n];
            let mut pk = pi.clone();
            for g in geo.iter_mut() {
                *g = ExactScalar::from_gauss(-&pk);
                pk = &pk * &pi;
            }
            for _ in 0..*m {
                let mut prod = pmul(&acc, &geo);
                prod.resize(n, ExactScalar::zero());
                prod.truncate(n);
                acc = prod;
            }
        }
        acc.resize(n, ExactScalar::zero());
        Ok(acc)
    }

    /// Splits a function with a single simple pole into polynomial + c/(zeta - p).
    fn split_single_pole(&self) -> Option<(Vec<ExactScalar>, ExactScalar, GaussRat)> {
        match self.poles.as_slice() {
            [(p, 1)] => {
                let (q, r) = pdiv_linear(&self.num, p);
                Some((q, r, p.clone()))
            }
            _ => None,
        }
    }
}

fn fmt_poly(f: &mut fmt::Formatter<'_>, a: &[ExactScalar]) -> fmt::Result {
    if a.is_empty() {
        return write!(f, "0");
    }
    let mut first = true;
    for (k, c) in a.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        match k {
            0 => write!(f, "({c})")?,
            1 => write!(f, "({c})·ζ")?,
            _ => write!(f, "({c})·ζ^{k}")?,
        }
    }
    Ok(())
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        fmt_poly(f, &self.num)?;
        write!(f, "]")?;
        for (p, m) in &self.poles {
            if *m == 1 {
                write!(f, "/(ζ-({p}))")?;
            } else {
                write!(f, "/(ζ-({p}))^{m}")?;
            }
        }
        Ok(())
    }
}

// ---- the function class ----

/// sum r_k(zeta) log(1 - zeta/a_k) + rational part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperlogD2 {
    pub logs: Vec<(RationalFn, GaussRat)>,
    pub rational: RationalFn,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builtin {
    /// 1/(1+zeta)
    Euler,
    /// zeta^-2 (zeta/2 coth(zeta/2) - 1)
    Stirling,
    /// Li2(zeta)
    Dilog,
    /// g(sigma) zeta^(sigma-1), g = e^(i pi sigma) Gamma(1-sigma) / (2 pi i)
    ISigma(BigRational),
    /// d/dsigma of ISigma
    JSigma(BigRational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BorelFunction {
    Rational(RationalFn),
    HyperlogD2(HyperlogD2),
    ClosedForm(Builtin),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Detour {
    /// Pass with the singular point on the left of travel.
    Plus,
    Minus,
}

impl Detour {
    fn sign(self) -> f64 {
        match self {
            Detour::Plus => 1.0,
            Detour::Minus => -1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSpec {
    pub target: ExactScalar,
    /// One detour per singular point strictly inside ]0, target[, in order along the segment.
    pub detours: Vec<Detour>,
}

impl PathSpec {
    pub fn principal(target: ExactScalar) -> PathSpec {
        PathSpec { target, detours: vec![] }
    }
    pub fn all_plus(f: &BorelFunction, target: ExactScalar) -> PathSpec {
        let n = f.interior_points(&target).len();
        PathSpec { target, detours: vec![Detour::Plus; n] }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityData {
    pub a0: ExactScalar,
    /// minor of the log-coefficient germ
    pub chi: BorelFunction,
    pub is_log_branch: bool,
}

impl SingularityData {
    pub fn zero() -> SingularityData {
        SingularityData { a0: ExactScalar::zero(), chi: BorelFunction::zero(), is_log_branch: false }
    }
    pub fn chi_series(&self, n: usize) -> Result<BorelSeries> {
        Ok(BorelSeries { delta: self.a0.clone(), coeffs: self.chi.taylor(n)? })
    }
}

/// t in (0,1) with p = t w, if any.
pub fn segment_param(p: &ExactScalar, w: &ExactScalar) -> Option<BigRational> {
    let t = p.checked_div(w).ok()?.as_rational()?;
    (t.is_positive() && t < BigRational::one()).then_some(t)
}

/// The point on the ray through `a`, beyond it: z/a real and > 1.
fn beyond_on_ray(z: Complex64, a: Complex64) -> bool {
    let u = z / a;
    u.re > 1.0 && u.im.abs() <= 1e-13 * u.re
}

fn log1m(z: Complex64, a: Complex64) -> Complex64 {
    (Complex64::new(1.0, 0.0) - z / a).ln()
}

fn g_sigma(s: f64) -> Complex64 {
    let gamma = statrs::function::gamma::gamma(1.0 - s);
    (I * std::f64::consts::PI * s).exp() * gamma / TWO_PI_I
}

fn stirling_minor(z: Complex64) -> Complex64 {
    if z.norm() < 1.0 {
        // stored Taylor series: sum_{n>=1} B_{2n} zeta^{2n-2} / (2n)!
        thread_local! {
            static COEFFS: Vec<f64> = {
                let b = bernoulli(60);
                (1..30).map(|n| {
                    let c = &b[2 * n] / BigRational::from_integer(factorial(2 * n as u64));
                    ExactScalar::from_rational(c).to_c64().re
                }).collect()
            };
        }
        COEFFS.with(|c| {
            let z2 = z * z;
            c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, x| acc * z2 + x)
        })
    } else {
        let h = z / 2.0;
        let coth = if h.re.abs() > 20.0 {
            let s = h.re.signum();
            let e = (-2.0 * s * h).exp();
            s * (1.0 + e) / (1.0 - e)
        } else {
            h.cosh() / h.sinh()
        };
        (h * coth - 1.0) / (z * z)
    }
}

fn li2(z: Complex64) -> Complex64 {
    z.li2()
}

impl BorelFunction {
    pub fn zero() -> Self {
        BorelFunction::Rational(RationalFn::zero())
    }
    pub fn euler() -> Self {
        BorelFunction::ClosedForm(Builtin::Euler)
    }
    pub fn stirling() -> Self {
        BorelFunction::ClosedForm(Builtin::Stirling)
    }
    pub fn dilog() -> Self {
        BorelFunction::ClosedForm(Builtin::Dilog)
    }

    /// "euler", "stirling", "dilog", "I_sigma:s", "J_sigma:s".
    pub fn builtin(name: &str) -> Result<Self> {
        let b = match name {
            "euler" => Builtin::Euler,
            "stirling" => Builtin::Stirling,
            "dilog" => Builtin::Dilog,
            _ => {
                if let Some(s) = name.strip_prefix("I_sigma:") {
                    Builtin::ISigma(parse_rational(s)?)
                } else if let Some(s) = name.strip_prefix("J_sigma:") {
                    Builtin::JSigma(parse_rational(s)?)
                } else {
                    return Err(Error::Parse(format!("unknown Borel function {name}")));
                }
            }
        };
        Ok(BorelFunction::ClosedForm(b))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            BorelFunction::Rational(r) => r.is_zero(),
            BorelFunction::HyperlogD2(h) => h.logs.iter().all(|(r, _)| r.is_zero()) && h.rational.is_zero(),
            BorelFunction::ClosedForm(_) => false,
        }
    }

    /// Builtins with an equivalent exact representation.
    fn normalized(&self) -> BorelFunction {
        match self {
            BorelFunction::ClosedForm(Builtin::Euler) => {
                BorelFunction::Rational(RationalFn::simple_pole(ExactScalar::one(), GaussRat::from_int(-1)))
            }
            BorelFunction::HyperlogD2(h) => {
                let logs: Vec<_> = h.logs.iter().filter(|(r, _)| !r.is_zero()).cloned().collect();
                if logs.is_empty() {
                    BorelFunction::Rational(h.rational.clone())
                } else {
                    BorelFunction::HyperlogD2(HyperlogD2 { logs, rational: h.rational.clone() })
                }
            }
            f => f.clone(),
        }
    }

    fn as_hyperlog(&self) -> Option<HyperlogD2> {
        match self.normalized() {
            BorelFunction::Rational(r) => Some(HyperlogD2 { logs: vec![], rational: r }),
            BorelFunction::HyperlogD2(h) => Some(h),
            _ => None,
        }
    }

    pub fn scale(&self, c: &ExactScalar) -> Result<Self> {
        let h = self
            .as_hyperlog()
            .ok_or_else(|| Error::ClosedFormUnavailable("scaling a builtin".into()))?;
        Ok(BorelFunction::HyperlogD2(HyperlogD2 {
            logs: h.logs.iter().map(|(r, a)| (r.scale(c), a.clone())).collect(),
            rational: h.rational.scale(c),
        })
        .normalized())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let (Some(a), Some(b)) = (self.as_hyperlog(), o.as_hyperlog()) else {
            if o.is_zero() {
                return Ok(self.clone());
            }
            if self.is_zero() {
                return Ok(o.clone());
            }
            return Err(Error::ClosedFormUnavailable("sum involving a builtin".into()));
        };
        let mut logs = a.logs.clone();
        for (r, p) in b.logs {
            match logs.iter_mut().find(|(_, q)| *q == p) {
                Some(e) => e.0 = e.0.add(&r),
                None => logs.push((r, p)),
            }
        }
        Ok(BorelFunction::HyperlogD2(HyperlogD2 { logs, rational: a.rational.add(&b.rational) }).normalized())
    }

    /// f(zeta) / (zeta - p).
    pub fn div_linear(&self, p: &GaussRat) -> Result<Self> {
        let h = self
            .as_hyperlog()
            .ok_or_else(|| Error::ClosedFormUnavailable("division of a builtin".into()))?;
        Ok(BorelFunction::HyperlogD2(HyperlogD2 {
            logs: h.logs.iter().map(|(r, a)| (r.div_linear(p), a.clone())).collect(),
            rational: h.rational.div_linear(p),
        })
        .normalized())
    }

    /// All poles and branch points with modulus at most `radius`, ordered by modulus then argument.
    pub fn singular_points(&self, radius: f64) -> Vec<ExactScalar> {
        let mut pts: Vec<ExactScalar> = match self.normalized() {
            BorelFunction::Rational(r) => r.poles.iter().map(|(p, _)| gauss_to_scalar(p)).collect(),
            BorelFunction::HyperlogD2(h) => {
                let mut v: Vec<ExactScalar> = h.rational.poles.iter().map(|(p, _)| gauss_to_scalar(p)).collect();
                for (r, a) in &h.logs {
                    v.push(gauss_to_scalar(a));
                    v.extend(r.poles.iter().filter(|(p, _)| !p.is_zero()).map(|(p, _)| gauss_to_scalar(p)));
                }
                v
            }
            BorelFunction::ClosedForm(b) => match b {
                Builtin::Euler => unreachable!(),
                Builtin::Stirling => {
                    let kmax = (radius / (2.0 * std::f64::consts::PI)).floor() as i64;
                    (1..=kmax).flat_map(|k| [ExactScalar::tau().scale_int(k), ExactScalar::tau().scale_int(-k)]).collect()
                }
                Builtin::Dilog => vec![ExactScalar::one()],
                Builtin::ISigma(_) | Builtin::JSigma(_) => vec![ExactScalar::zero()],
            },
        };
        pts.retain(|p| p.to_c64().norm() <= radius * (1.0 + 1e-15));
        pts.sort_by(|a, b| {
            let (x, y) = (a.to_c64(), b.to_c64());
            x.norm().total_cmp(&y.norm()).then(x.arg().total_cmp(&y.arg()))
        });
        pts.dedup();
        pts
    }

    /// Singular points strictly inside ]0, w[, in order along the segment.
    pub fn interior_points(&self, w: &ExactScalar) -> Vec<ExactScalar> {
        let r = w.to_c64().norm();
        let mut v: Vec<(BigRational, ExactScalar)> = self
            .singular_points(r)
            .into_iter()
            .filter_map(|p| segment_param(&p, w).map(|t| (t, p)))
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v.into_iter().map(|(_, p)| p).collect()
    }

    /// Taylor coefficients of the minor at 0, zeta^0 .. zeta^(n-1).
    pub fn taylor(&self, n: usize) -> Result<Vec<ExactScalar>> {
        match self.normalized() {
            BorelFunction::Rational(r) => r.taylor(n),
            BorelFunction::HyperlogD2(h) => {
                let mut acc = h.rational.taylor(n)?;
                for (r, a) in &h.logs {
                    // log(1 - zeta/a) = -sum_{k>=1} zeta^k / (k a^k)
                    let ai = a.inv()?;
                    let mut lg = vec![ExactScalar::zero(); n];
                    let mut ak = ai.clone();
                    for (k, l) in lg.iter_mut().enumerate().skip(1) {
                        *l = ExactScalar::from_gauss(-&ak).scale_rational(&BigRational::new(1.into(), (k as i64).into()));
                        ak = &ak * &ai;
                    }
                    let mut prod = pmul(&r.taylor(n)?, &lg);
                    prod.resize(n, ExactScalar::zero());
                    prod.truncate(n);
                    acc = padd(&acc, &prod);
                }
                acc.resize(n, ExactScalar::zero());
                Ok(acc)
            }
            BorelFunction::ClosedForm(b) => match b {
                Builtin::Stirling => {
                    let bn = bernoulli(2 * n + 2);
                    Ok((0..n)
                        .map(|k| {
                            if k % 2 == 1 {
                                ExactScalar::zero()
                            } else {
                                ExactScalar::from_rational(&bn[k + 2] / BigRational::from_integer(factorial(k as u64 + 2)))
                            }
                        })
                        .collect())
                }
                Builtin::Dilog => Ok((0..n)
                    .map(|k| if k == 0 { ExactScalar::zero() } else { ExactScalar::from_ratio(1, (k * k) as i64) })
                    .collect()),
                _ => Err(Error::Precondition("minor is not analytic at the origin".into())),
            },
        }
    }

    pub fn to_borel_series(&self, c0: ExactScalar, n: usize) -> Result<BorelSeries> {
        Ok(BorelSeries { delta: c0, coeffs: self.taylor(n)? })
    }

    /// Principal-branch value (cuts run radially outward from each branch point).
    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        match self.normalized() {
            BorelFunction::Rational(r) => r.eval_c64(z),
            BorelFunction::HyperlogD2(h) => {
                h.rational.eval_c64(z) + h.logs.iter().map(|(r, a)| r.eval_c64(z) * log1m(z, a.to_c64())).sum::<Complex64>()
            }
            BorelFunction::ClosedForm(b) => match b {
                Builtin::Euler => unreachable!(),
                Builtin::Stirling => stirling_minor(z),
                Builtin::Dilog => li2(z),
                Builtin::ISigma(_) | Builtin::JSigma(_) => self.eval_polar(z.norm(), z.arg()),
            },
        }
    }

    /// Value at r e^{i arg}, with the logarithm at the origin taken as ln r + i arg.
    pub fn eval_polar(&self, r: f64, arg: f64) -> Complex64 {
        let lz = Complex64::new(r.ln(), arg);
        match self {
            BorelFunction::ClosedForm(Builtin::ISigma(s)) => {
                let s = ExactScalar::from_rational(s.clone()).to_c64().re;
                g_sigma(s) * ((s - 1.0) * lz).exp()
            }
            BorelFunction::ClosedForm(Builtin::JSigma(s)) => {
                let s = ExactScalar::from_rational(s.clone()).to_c64().re;
                let g = g_sigma(s);
                let gp = g * (I * std::f64::consts::PI - statrs::function::gamma::digamma(1.0 - s));
                ((s - 1.0) * lz).exp() * (g * lz + gp)
            }
            f => f.eval_c64(Complex64::from_polar(r, arg)),
        }
    }

    /// Value on the branch reached along the segment [0, z]. Singular points on that
    /// segment must be interior points of the path, and are passed as the path says.
    pub fn continue_eval_c64(&self, path: &PathSpec, z: Complex64) -> Result<Complex64> {
        let interior = self.interior_points(&path.target);
        if interior.len() != path.detours.len() {
            return Err(Error::Precondition(format!(
                "path to {} needs {} detours, got {}",
                path.target,
                interior.len(),
                path.detours.len()
            )));
        }
        let all = self.singular_points(z.norm() + 1.0);
        for p in &all {
            if (p.to_c64() - z).norm() <= 1e-12 * (1.0 + z.norm()) {
                return Err(Error::OnSingularSet(p.to_string()));
            }
        }
        let detour_at = |a: &GaussRat| -> Result<Detour> {
            let ae = gauss_to_scalar(a);
            interior
                .iter()
                .position(|p| *p == ae)
                .map(|k| path.detours[k])
                .ok_or_else(|| Error::Precondition(format!("no detour given for {a}")))
        };
        match self.normalized() {
            BorelFunction::HyperlogD2(h) => {
                let mut v = h.rational.eval_c64(z);
                for (r, a) in &h.logs {
                    let ac = a.to_c64();
                    let lg = if beyond_on_ray(z, ac) {
                        let d = detour_at(a)?;
                        Complex64::new((z / ac - 1.0).norm().ln(), d.sign() * std::f64::consts::PI)
                    } else {
                        log1m(z, ac)
                    };
                    v += r.eval_c64(z) * lg;
                }
                Ok(v)
            }
            BorelFunction::ClosedForm(Builtin::Dilog) if beyond_on_ray(z, Complex64::new(1.0, 0.0)) => {
                let d = detour_at(&GaussRat::one())?;
                let x = z.re;
                // Li2(x - i0) for Plus, Li2(x + i0) for Minus
                let below = li2(Complex64::new(x, 0.0));
                let re = below.re;
                Ok(Complex64::new(re, -d.sign() * std::f64::consts::PI * x.ln()))
            }
            f => Ok(f.eval_c64(z)),
        }
    }

    pub fn continue_eval(&self, path: &PathSpec, z: &NumericComplex) -> Result<NumericComplex> {
        Ok(NumericComplex::from_c64(self.continue_eval_c64(path, z.to_c64())?))
    }

    /// Principal value plus n_a counterclockwise monodromies around each listed point.
    pub fn eval_on_sheet(&self, windings: &[(ExactScalar, i32)], z: Complex64) -> Result<Complex64> {
        let mut v = self.eval_c64(z);
        for (a, n) in windings {
            v += self.monodromy(a, z)? * (*n as f64);
        }
        Ok(v)
    }

    /// Change of the function after one counterclockwise turn around `a`.
    pub fn monodromy(&self, a: &ExactScalar, z: Complex64) -> Result<Complex64> {
        match self.normalized() {
            BorelFunction::Rational(_) => Ok(Complex64::new(0.0, 0.0)),
            BorelFunction::HyperlogD2(h) => Ok(h
                .logs
                .iter()
                .filter(|(_, p)| gauss_to_scalar(p) == *a)
                .map(|(r, _)| r.eval_c64(z) * TWO_PI_I)
                .sum()),
            BorelFunction::ClosedForm(b) => match b {
                Builtin::Stirling => Ok(Complex64::new(0.0, 0.0)),
                Builtin::Dilog if a.is_one() => Ok(-TWO_PI_I * z.ln()),
                Builtin::Dilog => Ok(Complex64::new(0.0, 0.0)),
                _ => Err(Error::Unreachable(format!("monodromy of {self} at {a}"))),
            },
        }
    }

    /// a0 and chi of the singularity at the path target, on the branch reached by the path.
    pub fn extract_singularity(&self, path: &PathSpec) -> Result<SingularityData> {
        let w = &path.target;
        let interior = self.interior_points(w);
        if interior.len() != path.detours.len() {
            return Err(Error::Precondition(format!(
                "path to {w} needs {} detours, got {}",
                interior.len(),
                path.detours.len()
            )));
        }
        match self.normalized() {
            BorelFunction::Rational(r) => {
                let Some(wg) = w.as_gauss() else { return Ok(SingularityData::zero()) };
                let res = r.residue(&wg)?;
                Ok(SingularityData { a0: &ExactScalar::tau() * &res, chi: BorelFunction::zero(), is_log_branch: false })
            }
            BorelFunction::HyperlogD2(h) => {
                let Some(wg) = w.as_gauss() else { return Ok(SingularityData::zero()) };
                let mut a0 = &ExactScalar::tau() * &h.rational.residue(&wg)?;
                let mut chi = BorelFunction::zero();
                let mut is_log = false;
                for (r, a) in &h.logs {
                    if *a == wg {
                        if r.pole_order(a) > 0 {
                            return Err(Error::NotSimple(format!("pole on the branch point {a}")));
                        }
                        chi = chi.add(&BorelFunction::Rational(r.shift(a).scale(&ExactScalar::tau())))?;
                        is_log = true;
                        continue;
                    }
                    let m = r.pole_order(&wg);
                    if m == 0 {
                        continue;
                    }
                    if m > 1 {
                        return Err(Error::NotSimple(format!("pole of order {m} at {wg}")));
                    }
                    let x = &GaussRat::one() - &(&wg * &a.inv()?);
                    let lg = if x.is_real() && x.re.is_negative() {
                        let pos = interior.iter().position(|p| *p == gauss_to_scalar(a)).ok_or_else(|| {
                            Error::Unreachable(format!("branch point {a} not on the path"))
                        })?;
                        let base = ExactScalar::log_real(&x.re)?;
                        match path.detours[pos] {
                            Detour::Plus => base,
                            Detour::Minus => &base - &ExactScalar::tau(),
                        }
                    } else if x.is_real() {
                        ExactScalar::log_real(&x.re)?
                    } else {
                        return Err(Error::ClosedFormUnavailable(format!("log of {x}")));
                    };
                    a0 = &a0 + &(&(&ExactScalar::tau() * &r.residue(&wg)?) * &lg);
                }
                Ok(SingularityData { a0, chi, is_log_branch: is_log })
            }
            BorelFunction::ClosedForm(b) => match b {
                Builtin::Euler => unreachable!(),
                Builtin::Stirling => {
                    let m = w.checked_div(&ExactScalar::tau()).ok().and_then(|q| q.as_integer());
                    match m {
                        Some(m) if m != 0 => Ok(SingularityData {
                            a0: ExactScalar::from_ratio(1, m),
                            chi: BorelFunction::zero(),
                            is_log_branch: false,
                        }),
                        _ => Ok(SingularityData::zero()),
                    }
                }
                Builtin::Dilog => {
                    if w.is_one() {
                        let chi = HyperlogD2 {
                            logs: vec![(RationalFn::constant(-&ExactScalar::tau()), GaussRat::from_int(-1))],
                            rational: RationalFn::zero(),
                        };
                        Ok(SingularityData { a0: ExactScalar::zero(), chi: BorelFunction::HyperlogD2(chi), is_log_branch: true })
                    } else {
                        Ok(SingularityData::zero())
                    }
                }
                Builtin::ISigma(_) | Builtin::JSigma(_) => {
                    if w.is_zero() {
                        Err(Error::NotSimple("branch point at the origin".into()))
                    } else {
                        Ok(SingularityData::zero())
                    }
                }
            },
        }
    }

    /// Exact convolution for the supported pairs.
    pub fn convolve(&self, o: &Self) -> Result<Self> {
        let unsupported = || Error::ClosedFormUnavailable(format!("convolution of {self} and {o}"));
        let (BorelFunction::Rational(a), BorelFunction::Rational(b)) = (self.normalized(), o.normalized()) else {
            return Err(unsupported());
        };
        if a.is_polynomial() && b.is_polynomial() {
            return Ok(BorelFunction::Rational(RationalFn::polynomial(poly_convolve(&a.num, &b.num))));
        }
        let (f, g) = if b.is_polynomial() { (a, b) } else { (b, a) };
        if !g.is_polynomial() {
            return Err(unsupported());
        }
        let (q, c, p) = f.split_single_pole().ok_or_else(unsupported)?;
        let poly_part = poly_convolve(&q, &g.num);
        // c/(u-p) * P: sum_j (-1)^j P^(j)(zeta-p)/j! int_0^zeta (u-p)^(j-1) du
        let mut logs = vec![];
        let mut rational = poly_part;
        let mut deriv = g.num.clone();
        let zeta_minus_p = plinear(&p);
        let mut fact = ExactScalar::one();
        let minus_p = ExactScalar::from_gauss(-&p);
        for j in 0..=g.num.len() {
            let pj = compose_linear(&deriv, &zeta_minus_p);
            if j == 0 {
                logs.push((RationalFn::polynomial(pscale(&pj, &c)), p.clone()));
            } else {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                // ((zeta-p)^j - (-p)^j)/j
                let mut pw = vec![ExactScalar::one()];
                for _ in 0..j {
                    pw = pmul(&pw, &zeta_minus_p);
                }
                let diff = padd(&pw, &[-&minus_p.pow(j as i32)?]);
                let coef = c.scale_int(sign).checked_div(&fact.scale_int(j as i64))?;
                rational = padd(&rational, &pscale(&pmul(&pj, &diff), &coef));
            }
            deriv = pderiv(&deriv);
            fact = fact.scale_int(j as i64 + 1);
            if deriv.is_empty() {
                break;
            }
        }
        Ok(BorelFunction::HyperlogD2(HyperlogD2 { logs, rational: RationalFn::polynomial(rational) }).normalized())
    }
}

/// P(L(zeta)) for a linear polynomial L.
fn compose_linear(pc: &[ExactScalar], l: &[ExactScalar]) -> Vec<ExactScalar> {
    let mut out: Vec<ExactScalar> = vec![];
    for c in pc.iter().rev() {
        out = padd(&pmul(&out, l), &[c.clone()]);
    }
    out
}

/// zeta^a * zeta^b = a! b! / (a+b+1)! zeta^{a+b+1}
fn poly_convolve(a: &[ExactScalar], b: &[ExactScalar]) -> Vec<ExactScalar> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![ExactScalar::zero(); a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let c = BigRational::new(factorial(i as u64) * factorial(j as u64), factorial((i + j + 1) as u64));
            out[i + j + 1] = &out[i + j + 1] + &(x * y).scale_rational(&c);
        }
    }
    ptrim(out)
}

impl fmt::Display for BorelFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BorelFunction::Rational(r) => write!(f, "{r}"),
            BorelFunction::HyperlogD2(h) => {
                for (r, a) in &h.logs {
                    write!(f, "{r}·log(1-ζ/({a})) + ")?;
                }
                write!(f, "{}", h.rational)
            }
            BorelFunction::ClosedForm(b) => match b {
                Builtin::Euler => write!(f, "euler"),
                Builtin::Stirling => write!(f, "stirling"),
                Builtin::Dilog => write!(f, "dilog"),
                Builtin::ISigma(s) => write!(f, "I_sigma:{s}"),
                Builtin::JSigma(s) => write!(f, "J_sigma:{s}"),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn g(n: i64) -> GaussRat {
        GaussRat::from_int(n)
    }

    #[test]
    fn singular_point_examples() {
        assert_eq!(BorelFunction::euler().singular_points(10.0), vec![ExactScalar::from_int(-1)]);
        let st = BorelFunction::stirling().singular_points(20.0);
        assert_eq!(st.len(), 6);
        assert!(st.iter().all(|p| p.checked_div(&ExactScalar::tau()).unwrap().as_integer().is_some()));
        let r = BorelFunction::Rational(RationalFn::new(vec![ExactScalar::one()], vec![(g(1), 1), (g(2), 1)]));
        assert_eq!(r.singular_points(1.5), vec![ExactScalar::one()]);
    }

    #[test]
    fn euler_is_single_valued() {
        let f = BorelFunction::euler();
        let v = f.continue_eval_c64(&PathSpec::principal(ExactScalar::from_int(3)), c(2.0, 0.0)).unwrap();
        assert!((v - c(1.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn dilog_monodromy() {
        let f = BorelFunction::dilog();
        let z = c(0.5, 0.0);
        let v = f.eval_on_sheet(&[(ExactScalar::one(), 1)], z).unwrap() - f.eval_c64(z);
        assert!((v - (-TWO_PI_I * 0.5f64.ln())).norm() < 1e-14);
        // the two detours past 1 differ by the monodromy
        let p = |d| PathSpec { target: ExactScalar::from_int(3), detours: vec![d] };
        let up = f.continue_eval_c64(&p(Detour::Plus), c(2.0, 0.0)).unwrap();
        let dn = f.continue_eval_c64(&p(Detour::Minus), c(2.0, 0.0)).unwrap();
        assert!((up - dn - f.monodromy(&ExactScalar::one(), c(2.0, 0.0)).unwrap()).norm() < 1e-13);
        // "+" matches a point just below the axis
        let below = li2(c(2.0, -1e-12));
        assert!((up - below).norm() < 1e-9);
    }

    #[test]
    fn hyperlog_detours() {
        let h = BorelFunction::HyperlogD2(HyperlogD2 {
            logs: vec![(RationalFn::simple_pole(ExactScalar::one(), g(3)), g(1))],
            rational: RationalFn::zero(),
        });
        let p = |d| PathSpec { target: ExactScalar::from_int(3), detours: vec![d] };
        let plus = h.continue_eval_c64(&p(Detour::Plus), c(2.0, 0.0)).unwrap();
        let minus = h.continue_eval_c64(&p(Detour::Minus), c(2.0, 0.0)).unwrap();
        assert!((plus - c(0.0, -std::f64::consts::PI)).norm() < 1e-14);
        assert!((minus - plus - c(0.0, 2.0 * std::f64::consts::PI)).norm() < 1e-14);
        assert!(h.continue_eval_c64(&p(Detour::Plus), c(3.0, 0.0)).is_err());
    }

    #[test]
    fn extraction_examples() {
        let e = BorelFunction::euler().extract_singularity(&PathSpec::principal(ExactScalar::from_int(-1))).unwrap();
        assert_eq!(e.a0, ExactScalar::tau());
        assert!(e.chi.is_zero());
        for m in 1..=3 {
            let f = BorelFunction::stirling();
            let path = PathSpec::all_plus(&f, ExactScalar::tau().scale_int(m));
            assert_eq!(f.extract_singularity(&path).unwrap().a0, ExactScalar::from_ratio(1, m));
        }
        // log(1 - zeta/w1)/(zeta - w1 - w2) at w1
        let (w1, w2) = (g(2), g(3));
        let h = BorelFunction::HyperlogD2(HyperlogD2 {
            logs: vec![(RationalFn::simple_pole(ExactScalar::one(), &w1 + &w2), w1.clone())],
            rational: RationalFn::zero(),
        });
        let s = h.extract_singularity(&PathSpec::principal(gauss_to_scalar(&w1))).unwrap();
        assert!(s.a0.is_zero() && s.is_log_branch);
        assert_eq!(s.chi, BorelFunction::Rational(RationalFn::simple_pole(ExactScalar::tau(), w2.clone())));
        // far point: log(-w2/w1) on the branch
        let far = PathSpec { target: gauss_to_scalar(&(&w1 + &w2)), detours: vec![Detour::Plus] };
        let a0 = h.extract_singularity(&far).unwrap().a0;
        let want = &ExactScalar::tau() * &ExactScalar::log_real(&rat(-3, 2)).unwrap();
        assert_eq!(a0, want);
        let dbl = BorelFunction::Rational(RationalFn::new(vec![ExactScalar::one()], vec![(g(1), 2)]));
        assert!(matches!(dbl.extract_singularity(&PathSpec::principal(ExactScalar::one())), Err(Error::NotSimple(_))));
    }

    #[test]
    fn convolution_examples() {
        let pole = BorelFunction::Rational(RationalFn::simple_pole(ExactScalar::one(), g(2)));
        let one = BorelFunction::Rational(RationalFn::constant(ExactScalar::one()));
        let h = pole.convolve(&one).unwrap();
        let want = HyperlogD2 { logs: vec![(RationalFn::constant(ExactScalar::one()), g(2))], rational: RationalFn::zero() };
        assert_eq!(h, BorelFunction::HyperlogD2(want));
        let z = BorelFunction::Rational(RationalFn::polynomial(vec![ExactScalar::zero(), ExactScalar::one()]));
        let zz = z.convolve(&z).unwrap();
        assert_eq!(zz, BorelFunction::Rational(RationalFn::polynomial(vec![
            ExactScalar::zero(), ExactScalar::zero(), ExactScalar::zero(), ExactScalar::from_ratio(1, 6)
        ])));
        assert!(BorelFunction::stirling().convolve(&one).is_err());
    }

    #[test]
    fn convolution_with_linear_polynomial_numerically() {
        // 1/(u-2) * (1 + 3u), checked by quadrature at zeta = 0.7
        let pole = BorelFunction::Rational(RationalFn::simple_pole(ExactScalar::one(), g(2)));
        let p = BorelFunction::Rational(RationalFn::polynomial(vec![ExactScalar::one(), ExactScalar::from_int(3)]));
        let h = pole.convolve(&p).unwrap();
        let zeta = 0.7;
        let n = 2000;
        let mut s = 0.0;
        for k in 0..n {
            let u = (k as f64 + 0.5) * zeta / n as f64;
            s += (1.0 + 3.0 * (zeta - u)) / (u - 2.0);
        }
        s *= zeta / n as f64;
        assert!((h.eval_c64(c(zeta, 0.0)).re - s).abs() < 1e-6);
    }
}
