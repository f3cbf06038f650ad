//! Truncated formal series in 1/z and their Borel transforms.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{bernoulli, binomial, factorial, ExactScalar, NumericComplex};

/// sum_{n <= N} c_n z^{-n}
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalSeries {
    pub coeffs: Vec<ExactScalar>,
}

fn q(n: BigInt, d: BigInt) -> ExactScalar {
    ExactScalar::from_rational(BigRational::new(n, d))
}

impl FormalSeries {
    pub fn new(coeffs: Vec<ExactScalar>) -> Self {
        assert!(!coeffs.is_empty(), "a series has at least the constant term");
        FormalSeries { coeffs }
    }
    pub fn zero(order: usize) -> Self {
        FormalSeries { coeffs: vec![ExactScalar::zero(); order + 1] }
    }
    pub fn constant(c: ExactScalar, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }
    /// c z^{-k}
    pub fn monomial(k: usize, c: ExactScalar, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }
    pub fn coeff(&self, n: usize) -> ExactScalar {
        self.coeffs.get(n).cloned().unwrap_or_default()
    }
    pub fn truncate(&self, order: usize) -> Self {
        FormalSeries { coeffs: (0..=order).map(|n| self.coeff(n)).collect() }
    }

    /// Euler series: c_{n+1} = (-1)^n n!.
    pub fn euler(order: usize) -> Self {
        let mut s = Self::zero(order);
        for n in 0..order {
            let f = factorial(n as u64);
            s.coeffs[n + 1] = ExactScalar::from_rational(BigRational::from_integer(if n % 2 == 0 { f } else { -f }));
        }
        s
    }

    /// Stirling series: log Gamma(z) - (z - 1/2) log z + z - log(2 pi)/2,
    /// c_{2k+1} = B_{2k+2} / ((2k+1)(2k+2)).
    pub fn stirling(order: usize) -> Self {
        let b = bernoulli(order + 1);
        let mut s = Self::zero(order);
        for n in (1..=order).step_by(2) {
            let d = BigInt::from((n * (n + 1)) as u64);
            s.coeffs[n] = ExactScalar::from_rational(&b[n + 1] / BigRational::from_integer(d));
        }
        s
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        FormalSeries { coeffs: (0..=n).map(|k| &self.coeffs[k] + &o.coeffs[k]).collect() }
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&ExactScalar::from_int(-1)))
    }
    pub fn scale(&self, c: &ExactScalar) -> Self {
        FormalSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn cauchy_product(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let mut out = Self::zero(n);
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=n - i {
                if !o.coeffs[j].is_zero() {
                    out.coeffs[i + j] = &out.coeffs[i + j] + &(&self.coeffs[i] * &o.coeffs[j]);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::constant(ExactScalar::one(), self.order()), |acc, _| acc.cauchy_product(self))
    }

    pub fn differentiate(&self) -> Self {
        let mut out = Self::zero(self.order());
        for n in 1..self.order() {
            out.coeffs[n + 1] = self.coeffs[n].scale_int(-(n as i64));
        }
        out
    }

    /// z -> z + alpha, using (z+alpha)^{-n} = sum_k C(-n, k) alpha^k z^{-n-k}.
    pub fn shift(&self, alpha: &ExactScalar) -> Self {
        let order = self.order();
        let mut out = Self::zero(order);
        out.coeffs[0] = self.coeffs[0].clone();
        for n in 1..=order {
            if self.coeffs[n].is_zero() {
                continue;
            }
            let mut ak = ExactScalar::one();
            for k in 0..=order - n {
                let b = binomial((n + k - 1) as u64, k as u64);
                let b = if k % 2 == 1 { -b } else { b };
                let t = &self.coeffs[n] * &ak;
                out.coeffs[n + k] = &out.coeffs[n + k] + &t.scale_rational(&BigRational::from_integer(b));
                ak = &ak * alpha;
            }
        }
        out
    }

    /// self o (Id + psi): sum_n c_n z^{-n} (1 + psi/z)^{-n}.
    pub fn compose_id_plus(&self, psi: &Self) -> Result<Self> {
        if !psi.coeffs[0].is_zero() {
            return Err(Error::Precondition("shift series has a constant term".into()));
        }
        let order = self.order().min(psi.order());
        // u = psi / z
        let mut u = Self::zero(order);
        for k in 1..order {
            u.coeffs[k + 1] = psi.coeffs[k].clone();
        }
        let mut out = Self::zero(order);
        out.coeffs[0] = self.coeffs[0].clone();
        for n in 1..=order {
            if self.coeffs[n].is_zero() {
                continue;
            }
            // (1+u)^{-n}, u = O(z^-2)
            let mut acc = Self::zero(order);
            let mut uk = Self::constant(ExactScalar::one(), order);
            for k in 0..=order / 2 {
                let b = binomial((n + k - 1) as u64, k as u64);
                let b = if k % 2 == 1 { -b } else { b };
                acc = acc.add(&uk.scale(&ExactScalar::from_rational(BigRational::from_integer(b))));
                uk = uk.cauchy_product(&u);
            }
            let term = Self::monomial(n, self.coeffs[n].clone(), order).cauchy_product(&acc);
            out = out.add(&term);
        }
        Ok(out)
    }

    /// chi with (Id + psi) o (Id + chi) = Id, i.e. chi = -psi o (Id + chi).
    pub fn group_inverse(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Precondition("group_inverse needs a zero constant term".into()));
        }
        let mut chi = self.scale(&ExactScalar::from_int(-1));
        for _ in 0..=self.order() {
            let next = self.compose_id_plus(&chi)?.scale(&ExactScalar::from_int(-1));
            if next == chi {
                break;
            }
            chi = next;
        }
        Ok(chi)
    }

    pub fn substitute(outer: &Outer, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::Precondition("inner series has a constant term".into()));
        }
        let order = inner.order();
        let a = outer.taylor(order);
        let mut out = Self::zero(order);
        let mut p = Self::constant(ExactScalar::one(), order);
        for ak in a {
            out = out.add(&p.scale(&ak));
            p = p.cauchy_product(inner);
        }
        Ok(out)
    }

    pub fn to_c64(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(ExactScalar::to_c64).collect()
    }
}

/// A convergent series at 0, given by its Taylor coefficients.
#[derive(Clone, Debug)]
pub enum Outer {
    Identity,
    Exp,
    /// log(1 + x)
    Log1p,
    /// 1 / (1 - x)
    Geometric,
    Taylor(Vec<ExactScalar>),
}

impl Outer {
    pub fn taylor(&self, order: usize) -> Vec<ExactScalar> {
        (0..=order)
            .map(|k| match self {
                Outer::Identity => ExactScalar::from_int((k == 1) as i64),
                Outer::Exp => q(BigInt::one(), factorial(k as u64)),
                Outer::Log1p if k == 0 => ExactScalar::zero(),
                Outer::Log1p => ExactScalar::from_ratio(if k % 2 == 1 { 1 } else { -1 }, k as i64),
                Outer::Geometric => ExactScalar::one(),
                Outer::Taylor(v) => v.get(k).cloned().unwrap_or_default(),
            })
            .collect()
    }
}

/// c delta + sum_n b_n zeta^n with b_n = c_{n+1} / n!.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorelSeries {
    pub delta: ExactScalar,
    pub coeffs: Vec<ExactScalar>,
}

impl BorelSeries {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Truncated convolution with delta as unit; zeta^p * zeta^q = p! q! / (p+q+1)! zeta^{p+q+1}.
    pub fn convolve(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let mut coeffs: Vec<ExactScalar> = (0..n)
            .map(|k| &(&self.delta * &o.coeffs[k]) + &(&o.delta * &self.coeffs[k]))
            .collect();
        for p in 0..n {
            for r in 0..n {
                if p + r + 1 >= n {
                    break;
                }
                let c = q(factorial(p as u64) * factorial(r as u64), factorial((p + r + 1) as u64));
                coeffs[p + r + 1] = &coeffs[p + r + 1] + &(&(&self.coeffs[p] * &o.coeffs[r]) * &c);
            }
        }
        BorelSeries { delta: &self.delta * &o.delta, coeffs }
    }

    /// Multiplication by -zeta (image of d/dz).
    pub fn times_minus_zeta(&self) -> Self {
        let mut coeffs = vec![ExactScalar::zero(); self.order()];
        for n in 1..self.order() {
            coeffs[n] = -&self.coeffs[n - 1];
        }
        BorelSeries { delta: ExactScalar::zero(), coeffs }
    }
}

pub fn borel(s: &FormalSeries) -> BorelSeries {
    BorelSeries {
        delta: s.coeffs[0].clone(),
        coeffs: (0..s.order()).map(|n| s.coeffs[n + 1].checked_div(&q(factorial(n as u64), BigInt::one())).expect("integer divisor")).collect(),
    }
}

pub fn inverse_borel(b: &BorelSeries) -> FormalSeries {
    let mut c = vec![b.delta.clone()];
    for (n, x) in b.coeffs.iter().enumerate() {
        c.push(x.scale_rational(&BigRational::from_integer(factorial(n as u64))));
    }
    FormalSeries { coeffs: c }
}

/// Exact leading-order prediction -(1/T) n! sum omega^{-n-1} a (T = 2 pi i).
pub fn predict_coefficients_exact(sings: &[(ExactScalar, ExactScalar)], n: usize) -> Result<ExactScalar> {
    let mut acc = ExactScalar::zero();
    for (omega, a) in sings {
        if omega.is_zero() {
            return Err(Error::Precondition("singularity at the origin".into()));
        }
        acc = &acc + &(&omega.pow(-(n as i32) - 1)? * a);
    }
    let f = ExactScalar::from_rational(BigRational::from_integer(-factorial(n as u64)));
    Ok(&(&acc * &f) * &ExactScalar::tau_pow(-1))
}

pub fn predict_coefficients(sings: &[(ExactScalar, ExactScalar)], n: usize, precision: usize) -> Result<NumericComplex> {
    predict_coefficients_exact(sings, n)?.evaluate(precision.max(53))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GevreyFit {
    pub c: f64,
    pub m: f64,
    pub max_residual: f64,
}

/// Least-squares fit of log |c_{n+1}| / n! = log C + n log M over nonzero terms.
pub fn gevrey_bound(s: &FormalSeries) -> Result<GevreyFit> {
    let mut pts = vec![];
    for n in 0..s.order() {
        let c = &s.coeffs[n + 1];
        if c.is_zero() {
            continue;
        }
        let v = match c.as_rational() {
            Some(r) => log_abs_rational(&r),
            None => c.to_c64().norm().ln(),
        };
        pts.push((n as f64, v - ln_factorial(n)));
    }
    if pts.len() < 4 {
        return Err(Error::Precondition(format!("only {} nonzero coefficients", pts.len())));
    }
    let k = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / k, sy / k);
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let max_residual = pts.iter().map(|(x, y)| (y - icpt - slope * x).abs()).fold(0.0, f64::max);
    Ok(GevreyFit { c: icpt.exp(), m: slope.exp(), max_residual })
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

fn log_abs_rational(r: &BigRational) -> f64 {
    let ln_big = |x: &BigInt| -> f64 {
        let bits = x.bits();
        if bits < 1000 {
            x.abs().to_f64().unwrap().ln()
        } else {
            let shift = bits - 900;
            (x.abs() >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
        }
    };
    ln_big(r.numer()) - ln_big(r.denom())
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    order: usize,
    coeffs: Vec<ExactScalar>,
}

impl FormalSeries {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&SeriesJson { order: self.order(), coeffs: self.coeffs.clone() }).expect("serializable")
    }
    pub fn from_json(s: &str) -> Result<Self> {
        let j: SeriesJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if j.coeffs.is_empty() {
            return Err(Error::Parse("empty coefficient list".into()));
        }
        let mut c = j.coeffs;
        c.resize(j.order + 1, ExactScalar::zero());
        Ok(FormalSeries { coeffs: c })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[i64]) -> FormalSeries {
        FormalSeries::new(v.iter().map(|&x| ExactScalar::from_int(x)).collect())
    }

    #[test]
    fn borel_examples() {
        let b = borel(&FormalSeries::euler(8));
        for (p, c) in b.coeffs.iter().enumerate() {
            assert_eq!(*c, ExactScalar::from_int(if p % 2 == 0 { 1 } else { -1 }));
        }
        let one = borel(&FormalSeries::constant(ExactScalar::one(), 5));
        assert!(one.delta.is_one() && one.coeffs.iter().all(ExactScalar::is_zero));
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(s(&[1, 1, 0, 0]).pow(2), s(&[1, 2, 1, 0]));
        assert_eq!(s(&[0, 1, 0, 0]).differentiate(), s(&[0, 0, -1, 0]));
        let a = ExactScalar::from_ratio(2, 3);
        let sh = s(&[0, 1, 0, 0, 0]).shift(&a);
        let want: Vec<ExactScalar> =
            vec![ExactScalar::zero(), ExactScalar::one(), -&a, a.pow(2).unwrap(), -&a.pow(3).unwrap()];
        assert_eq!(sh.coeffs, want);
    }

    #[test]
    fn substitution_examples() {
        let psi = s(&[0, 1, 0, 0, 0]);
        let e = FormalSeries::substitute(&Outer::Exp, &psi).unwrap();
        assert_eq!(e.coeffs[2], ExactScalar::from_ratio(1, 2));
        assert_eq!(e.coeffs[4], ExactScalar::from_ratio(1, 24));
        assert_eq!(FormalSeries::substitute(&Outer::Identity, &psi).unwrap(), psi);
        assert!(FormalSeries::substitute(&Outer::Exp, &s(&[1, 1])).is_err());
    }

    #[test]
    fn group_inverse_of_inverse_z() {
        let chi = s(&[0, 1, 0, 0, 0, 0, 0]).group_inverse().unwrap();
        assert_eq!(chi.coeffs[1], ExactScalar::from_int(-1));
        assert_eq!(chi.coeffs[2], ExactScalar::zero());
        assert_eq!(chi.coeffs[3], ExactScalar::from_int(-1));
        // re-composition: chi + psi o (Id + chi) = 0
        let psi = s(&[0, 1, 0, 0, 0, 0, 0]);
        assert!(chi.add(&psi.compose_id_plus(&chi).unwrap()).coeffs.iter().all(ExactScalar::is_zero));
    }

    #[test]
    fn euler_prediction_is_exact() {
        let sing = [(ExactScalar::from_int(-1), ExactScalar::tau())];
        let e = FormalSeries::euler(12);
        for n in 0..12 {
            assert_eq!(predict_coefficients_exact(&sing, n).unwrap(), e.coeffs[n + 1]);
        }
        assert!(predict_coefficients_exact(&[], 5).unwrap().is_zero());
    }

    #[test]
    fn gevrey_examples() {
        let f = gevrey_bound(&FormalSeries::euler(30)).unwrap();
        assert!((f.m - 1.0).abs() < 0.1);
        let g = FormalSeries::new((0..=20).map(|n| ExactScalar::from_ratio(1, 1 << n)).collect());
        assert!(gevrey_bound(&g).unwrap().m <= 1.0);
        assert!(gevrey_bound(&FormalSeries::zero(10)).is_err());
    }
}
