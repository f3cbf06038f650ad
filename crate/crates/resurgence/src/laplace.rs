//! Numerical Borel-Laplace summation along rays and Hankel contours.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::borelfun::{BorelFunction, Builtin};
use crate::error::{Error, Result};
use crate::quad::{adaptive, tanh_sinh, QuadResult};
use crate::scalars::{ExactScalar, NumericComplex};
use crate::series::{BorelSeries, FormalSeries};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug)]
pub struct RaySpec {
    pub theta: f64,
    pub z: Complex64,
    pub target_err: f64,
    /// Maximal bisection depth of the adaptive rule.
    pub max_depth: u32,
}

impl RaySpec {
    pub fn new(theta: f64, z: Complex64) -> RaySpec {
        RaySpec { theta, z, target_err: 1e-12, max_depth: 24 }
    }

    pub fn with_target(mut self, e: f64) -> RaySpec {
        self.target_err = e;
        self
    }

    fn margin(&self) -> f64 {
        (self.z * Complex64::from_polar(1.0, self.theta)).re
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SummationResult {
    pub re: f64,
    pub im: f64,
    pub error_estimate: f64,
    pub nodes_used: usize,
    pub truncation_radius: f64,
    pub tail_bound: f64,
    /// False for values obtained from a Pade approximant of raw coefficients.
    pub certified: bool,
}

impl SummationResult {
    pub fn c64(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn value(&self) -> NumericComplex {
        NumericComplex::from_c64(self.c64())
    }
}

fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

fn endpoint_singular(f: &BorelFunction) -> bool {
    matches!(f, BorelFunction::ClosedForm(Builtin::ISigma(_) | Builtin::JSigma(_)))
}

/// Integrates e^{-z t e^{i theta}} g(t) e^{i theta} dt over [0, infinity) for a minor given
/// along the ray by g; `endpoint` selects the double-exponential rule near 0.
fn ray_integral(g: &dyn Fn(f64) -> Complex64, spec: &RaySpec, endpoint: bool) -> Result<(QuadResult, f64, f64)> {
    let kappa = spec.margin();
    if kappa <= 0.0 {
        return Err(Error::Precondition(format!("decay margin Re(z e^(i theta)) = {kappa} is not positive")));
    }
    let dir = Complex64::from_polar(1.0, spec.theta);
    let integrand = |t: f64| (-spec.z * dir * t).exp() * g(t) * dir;
    // e^{-kappa R} below the target, with room for polynomial growth of the minor
    let r_max = (-(spec.target_err * 1e-3).ln() + 10.0) / kappa;
    let first = (1.0 / kappa).min(r_max).min(1.0);
    let head = if endpoint {
        tanh_sinh(&|t, da, _| if da == 0.0 { Complex64::new(0.0, 0.0) } else { integrand(t) }, 0.0, first, spec.target_err / 4.0)
    } else {
        adaptive(&integrand, 0.0, first, spec.target_err / 4.0, spec.max_depth)
    };
    let mut total = head;
    let mut a = first;
    let mut panels = 0;
    while a < r_max {
        let b = (2.0 * a).min(r_max);
        let r = adaptive(&integrand, a, b, spec.target_err / 8.0 / (panels + 1) as f64, spec.max_depth);
        total.value += r.value;
        total.error += r.error;
        total.evals += r.evals;
        a = b;
        panels += 1;
    }
    // tail: |g| assumed to grow at most like its value at R times (t/R)^2
    let gr = g(r_max).norm().max(g(r_max / 2.0).norm());
    let tail = gr * (-kappa * r_max).exp() / kappa * (1.0 + 2.0 / (kappa * r_max)).powi(2) * 4.0;
    Ok((total, r_max, tail))
}

fn check_ray(f: &BorelFunction, theta: f64, radius: f64) -> Result<()> {
    for p in f.singular_points(radius) {
        let c = p.to_c64();
        if c.norm() == 0.0 {
            continue;
        }
        if angle_diff(c.arg(), theta) < 1e-12 {
            return Err(Error::OnSingularSet(format!("the ray at angle {theta} hits the singular point {p}")));
        }
    }
    Ok(())
}

/// c0 + int_0^{e^{i theta} infinity} e^{-z zeta} f(zeta) d zeta.
pub fn laplace_ray(f: &BorelFunction, c0: &ExactScalar, spec: &RaySpec) -> Result<SummationResult> {
    laplace_ray_moment(f, c0, spec, 0)
}

/// As `laplace_ray` with the minor multiplied by (-zeta)^k: the k-th z-derivative of the sum.
pub fn laplace_ray_moment(f: &BorelFunction, c0: &ExactScalar, spec: &RaySpec, k: u32) -> Result<SummationResult> {
    let kappa = spec.margin();
    if kappa <= 0.0 {
        return Err(Error::Precondition(format!("decay margin Re(z e^(i theta)) = {kappa} is not positive")));
    }
    let r_guess = (-(spec.target_err * 1e-3).ln() + 10.0) / kappa;
    check_ray(f, spec.theta, r_guess)?;
    let theta = spec.theta;
    let dir = Complex64::from_polar(1.0, theta);
    let g = |t: f64| {
        let v = if endpoint_singular(f) { f.eval_polar(t, theta) } else { f.eval_c64(dir * t) };
        v * (-dir * t).powu(k)
    };
    let (q, r_max, tail) = ray_integral(&g, spec, endpoint_singular(f))?;
    let c = if k == 0 { c0.to_c64() } else { Complex64::new(0.0, 0.0) };
    let v = c + q.value;
    Ok(SummationResult {
        re: v.re,
        im: v.im,
        error_estimate: q.error + tail + 1e-15 * v.norm(),
        nodes_used: q.evals,
        truncation_radius: r_max,
        tail_bound: tail,
        certified: true,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LateralJump {
    pub plus: SummationResult,
    pub minus: SummationResult,
    pub jump_re: f64,
    pub jump_im: f64,
    pub error: f64,
}

impl LateralJump {
    pub fn jump(&self) -> Complex64 {
        Complex64::new(self.jump_re, self.jump_im)
    }
}

/// Lateral sums across theta_star: S+ along theta_star - delta, S- along theta_star + delta.
pub fn lateral_jump(f: &BorelFunction, c0: &ExactScalar, theta_star: f64, delta: f64, z: Complex64) -> Result<LateralJump> {
    if !(delta > 0.0 && delta < PI / 2.0) {
        return Err(Error::Precondition("delta must lie in (0, pi/2)".into()));
    }
    let plus = laplace_ray(f, c0, &RaySpec::new(theta_star - delta, z))?;
    let minus = laplace_ray(f, c0, &RaySpec::new(theta_star + delta, z))?;
    let j = plus.c64() - minus.c64();
    Ok(LateralJump { error: plus.error_estimate + minus.error_estimate, plus, minus, jump_re: j.re, jump_im: j.im })
}

/// Integral over the Hankel contour around the direction theta: in along arg theta - 2 pi,
/// counterclockwise around the origin, out along arg theta.
pub fn hankel_laplace(f: &BorelFunction, theta: f64, z: Complex64) -> Result<SummationResult> {
    let spec = RaySpec::new(theta, z);
    let kappa = spec.margin();
    if kappa <= 0.0 {
        return Err(Error::Precondition(format!("decay margin Re(z e^(i theta)) = {kappa} is not positive")));
    }
    let nearest = f.singular_points(1e3).into_iter().map(|p| p.to_c64().norm()).find(|r| *r > 0.0);
    let rho = nearest.map(|r| r / 4.0).unwrap_or(0.25);
    let dir = Complex64::from_polar(1.0, theta);
    let jump = |t: f64| f.eval_polar(t, theta) - f.eval_polar(t, theta - 2.0 * PI);
    // rays from rho outwards
    let (q, r_max, tail) = ray_integral(&|t| jump(t + rho), &spec, false)?;
    let rays = q.value * (-spec.z * dir * rho).exp();
    let circle = adaptive(
        &|phi| {
            let zeta = Complex64::from_polar(rho, phi);
            (-z * zeta).exp() * f.eval_polar(rho, phi) * I * zeta
        },
        theta - 2.0 * PI,
        theta,
        1e-13,
        20,
    );
    let v = rays + circle.value;
    let scale = (-spec.z * dir * rho).exp().norm();
    Ok(SummationResult {
        re: v.re,
        im: v.im,
        error_estimate: (q.error + tail) * scale + circle.error + 1e-15 * v.norm(),
        nodes_used: q.evals + circle.evals,
        truncation_radius: r_max + rho,
        tail_bound: tail * scale,
        certified: true,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticsRow {
    pub n: usize,
    /// sup over the z-sequence of |z|^{n+1} |S(z) - sum_{k<=n} c_k z^{-k}|
    pub scaled_remainder: f64,
    /// the same over n! M^n, for a 1-Gevrey envelope
    pub gevrey_ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticsReport {
    pub zs: Vec<(f64, f64)>,
    pub sums: Vec<(f64, f64)>,
    pub rows: Vec<AsymptoticsRow>,
    /// true when the Gevrey ratios stay within a factor 1e3 of their minimum
    pub bounded: bool,
}

/// Compares the Borel sum with partial sums of its series along the z-sequence.
pub fn verify_asymptotics(
    f: &BorelFunction,
    c0: &ExactScalar,
    series: &FormalSeries,
    theta: f64,
    zs: &[Complex64],
    m: f64,
) -> Result<AsymptoticsReport> {
    let sums: Vec<Complex64> =
        zs.iter().map(|z| laplace_ray(f, c0, &RaySpec::new(theta, *z)).map(|r| r.c64())).collect::<Result<_>>()?;
    let coeffs = series.to_c64();
    let mut rows = vec![];
    let mut fact = 1.0;
    for n in 0..coeffs.len() {
        if n > 0 {
            fact *= n as f64;
        }
        let mut sup: f64 = 0.0;
        for (z, s) in zs.iter().zip(&sums) {
            let partial: Complex64 = (0..=n).map(|k| coeffs[k] * z.powi(-(k as i32))).sum();
            sup = sup.max(z.norm().powi(n as i32 + 1) * (s - partial).norm());
        }
        rows.push(AsymptoticsRow { n, scaled_remainder: sup, gevrey_ratio: sup / (fact * m.powi(n as i32)) });
    }
    let ratios: Vec<f64> = rows.iter().skip(1).map(|r| r.gevrey_ratio).filter(|r| *r > 0.0).collect();
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(0.0, f64::max);
    Ok(AsymptoticsReport {
        zs: zs.iter().map(|z| (z.re, z.im)).collect(),
        sums: sums.iter().map(|z| (z.re, z.im)).collect(),
        rows,
        bounded: ratios.is_empty() || hi <= lo * 1e3,
    })
}

/// [m/n] Pade approximant of a Borel series' minor; a convenience path whose sums are not certified.
#[derive(Clone, Debug)]
pub struct Pade {
    pub num: Vec<Complex64>,
    pub den: Vec<Complex64>,
}

impl Pade {
    pub fn from_borel(b: &BorelSeries, m: usize, n: usize) -> Result<Pade> {
        let c: Vec<Complex64> = b.coeffs.iter().map(ExactScalar::to_c64).collect();
        if c.len() < m + n + 1 {
            return Err(Error::Precondition(format!("[{m}/{n}] needs {} coefficients", m + n + 1)));
        }
        let get = |k: i64| if k < 0 { Complex64::new(0.0, 0.0) } else { c[k as usize] };
        // denominator q_0 = 1: sum_{j=1..n} q_j c_{m+i-j} = -c_{m+i}, i = 1..n
        let mut a = vec![vec![Complex64::new(0.0, 0.0); n + 1]; n];
        for i in 0..n {
            for j in 0..n {
                a[i][j] = get((m + i + 1) as i64 - (j + 1) as i64);
            }
            a[i][n] = -get((m + i + 1) as i64);
        }
        let q = solve(a)?;
        let mut den = vec![Complex64::new(1.0, 0.0)];
        den.extend(q);
        let num = (0..=m).map(|i| (0..=i.min(n)).map(|j| den[j] * get(i as i64 - j as i64)).sum()).collect();
        Ok(Pade { num, den })
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let h = |p: &[Complex64]| p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
        h(&self.num) / h(&self.den)
    }

    pub fn laplace_ray(&self, c0: Complex64, spec: &RaySpec) -> Result<SummationResult> {
        let dir = Complex64::from_polar(1.0, spec.theta);
        let (q, r_max, tail) = ray_integral(&|t| self.eval(dir * t), spec, false)?;
        let v = c0 + q.value;
        Ok(SummationResult {
            re: v.re,
            im: v.im,
            error_estimate: q.error + tail,
            nodes_used: q.evals,
            truncation_radius: r_max,
            tail_bound: tail,
            certified: false,
        })
    }
}

fn solve(mut a: Vec<Vec<Complex64>>) -> Result<Vec<Complex64>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm())).expect("nonempty");
        if a[piv][col].norm() < 1e-300 {
            return Err(Error::NotInvertible("singular Pade system".into()));
        }
        a.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                for k in col..=n {
                    let t = a[col][k];
                    a[r][k] -= f * t;
                }
            }
        }
    }
    Ok((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// e^x E1(x) by the continued fraction, independent of the quadrature.
    fn ex_e1(x: f64) -> f64 {
        let mut f = 0.0;
        for k in (1..200).rev() {
            let k = k as f64;
            f = k / (1.0 + k / (x + f));
        }
        1.0 / (x + f)
    }

    #[test]
    fn euler_at_two() {
        let r = laplace_ray(&BorelFunction::euler(), &ExactScalar::zero(), &RaySpec::new(0.0, Complex64::new(2.0, 0.0))).unwrap();
        assert!((r.re - ex_e1(2.0)).abs() < 1e-12, "{r:?}");
        assert!((r.re - 0.361328616888222).abs() < 1e-12);
    }

    #[test]
    fn stirling_at_ten() {
        let r = laplace_ray(&BorelFunction::stirling(), &ExactScalar::zero(), &RaySpec::new(0.0, Complex64::new(10.0, 0.0))).unwrap();
        let want = 362880f64.ln() - 9.5 * 10f64.ln() + 10.0 - 0.5 * (2.0 * PI).ln();
        assert!((r.re - want).abs() < 1e-9, "{r:?} {want}");
    }

    #[test]
    fn zero_function() {
        let r = laplace_ray(&BorelFunction::zero(), &ExactScalar::from_int(3), &RaySpec::new(0.0, Complex64::new(1.0, 0.0))).unwrap();
        assert_eq!(r.c64(), Complex64::new(3.0, 0.0));
    }

    #[test]
    fn ray_through_pole() {
        let e = laplace_ray(&BorelFunction::euler(), &ExactScalar::zero(), &RaySpec::new(PI, Complex64::new(-1.0, 0.0)));
        assert!(matches!(e, Err(Error::OnSingularSet(_))));
        let e = laplace_ray(&BorelFunction::euler(), &ExactScalar::zero(), &RaySpec::new(0.0, Complex64::new(-1.0, 0.0)));
        assert!(matches!(e, Err(Error::Precondition(_))));
    }

    #[test]
    fn euler_jump() {
        let j = lateral_jump(&BorelFunction::euler(), &ExactScalar::zero(), PI, 0.3, Complex64::new(-3.0, 0.0)).unwrap();
        let want = I * 2.0 * PI * (-3.0f64).exp();
        assert!((j.jump() - want).norm() < 1e-9, "{j:?}");
    }

    #[test]
    fn hankel_identities() {
        let f = BorelFunction::Rational(crate::borelfun::RationalFn::simple_pole(
            ExactScalar::tau_pow(-1),
            crate::scalars::GaussRat::zero(),
        ));
        let r = hankel_laplace(&f, 0.7, Complex64::new(3.0, 0.0)).unwrap();
        assert!((r.c64() - 1.0).norm() < 1e-10, "{r:?}");
        let half = num_rational::BigRational::new(1.into(), 2.into());
        let i = BorelFunction::ClosedForm(Builtin::ISigma(half.clone()));
        let r = hankel_laplace(&i, 0.0, Complex64::new(2.0, 0.0)).unwrap();
        assert!((r.c64() - 0.5f64.sqrt()).norm() < 1e-10, "{r:?}");
        let j = BorelFunction::ClosedForm(Builtin::JSigma(half));
        let r = hankel_laplace(&j, 0.0, Complex64::new(2.0, 0.0)).unwrap();
        assert!((r.c64() + 0.5f64.sqrt() * 2f64.ln()).norm() < 1e-8, "{r:?}");
    }

    #[test]
    fn pade_reproduces_rational_minor() {
        let b = BorelFunction::euler().to_borel_series(ExactScalar::zero(), 6).unwrap();
        let p = Pade::from_borel(&b, 1, 1).unwrap();
        let r = p.laplace_ray(Complex64::new(0.0, 0.0), &RaySpec::new(0.0, Complex64::new(2.0, 0.0))).unwrap();
        assert!(!r.certified);
        assert!((r.re - ex_e1(2.0)).abs() < 1e-11);
    }
}
