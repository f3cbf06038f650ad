//! Quadrature rules for complex-valued integrands of a real variable.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    static CACHE: OnceLock<Mutex<HashMap<usize, (Vec<f64>, Vec<f64>)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("cache").get(&n) {
        return v.clone();
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    cache.lock().expect("cache").insert(n, (x.clone(), w.clone()));
    (x, w)
}

pub fn gl(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, n: usize) -> Complex64 {
    let (x, w) = gauss_legendre(n);
    let (h, c) = ((b - a) / 2.0, (b + a) / 2.0);
    x.iter().zip(&w).map(|(xi, wi)| f(c + h * xi) * *wi).sum::<Complex64>() * h
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub evals: usize,
}

/// Adaptive bisection with a 10/20-point Gauss-Legendre pair; the difference of the
/// pair is the local error estimate.
pub fn adaptive(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, tol: f64, max_depth: u32) -> QuadResult {
    fn rec(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, tol: f64, depth: u32, out: &mut QuadResult) {
        let lo = gl(f, a, b, 10);
        let hi = gl(f, a, b, 20);
        let err = (hi - lo).norm();
        if err <= tol || depth == 0 {
            out.value += hi;
            out.error += err;
            out.evals += 30;
            return;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, tol / 2.0, depth - 1, out);
        rec(f, m, b, tol / 2.0, depth - 1, out);
    }
    let mut out = QuadResult { value: Complex64::new(0.0, 0.0), error: 0.0, evals: 0 };
    rec(f, a, b, tol, max_depth, &mut out);
    out
}

/// Double-exponential rule on [a, b] for integrands singular at the endpoints.
/// `f` receives (x, distance to a, distance to b) so that it can evaluate accurately near the ends.
pub fn tanh_sinh(f: &dyn Fn(f64, f64, f64) -> Complex64, a: f64, b: f64, tol: f64) -> QuadResult {
    let c = 0.5 * (b - a);
    let pi2 = std::f64::consts::FRAC_PI_2;
    let sum_at = |h: f64, odd_only: bool| -> (Complex64, usize) {
        let mut s = Complex64::new(0.0, 0.0);
        let mut n = 0;
        let mut k = if odd_only { 1 } else { 0 };
        loop {
            let t = k as f64 * h;
            let u = pi2 * t.sinh();
            let ch = u.cosh();
            // 1 - tanh(u) computed without cancellation
            let d = 1.0 / (u.exp() * ch);
            let w = pi2 * t.cosh() / (ch * ch);
            if w * c < 1e-300 || d == 0.0 {
                break;
            }
            let xr = b - c * d;
            let xl = a + c * d;
            if k == 0 {
                s += f(a + c, c, c) * w;
            } else {
                s += (f(xr, b - a - c * d, c * d) + f(xl, c * d, b - a - c * d)) * w;
            }
            n += 2;
            k += if odd_only { 2 } else { 1 };
            if t > 6.0 {
                break;
            }
        }
        (s, n)
    };
    let mut h = 0.5;
    let (mut s, mut evals) = sum_at(h, false);
    let mut value = s * h * c;
    let mut error = f64::INFINITY;
    for _ in 0..8 {
        h /= 2.0;
        let (s_odd, n) = sum_at(h, true);
        evals += n;
        s += s_odd;
        let next = s * h * c;
        error = (next - value).norm();
        value = next;
        if error <= tol {
            break;
        }
    }
    QuadResult { value, error, evals }
}
