use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use resurgence::alien::{alien_derivation, alien_plus, ResurgentSeries};
use resurgence::borelfun::BorelFunction;
use resurgence::hyperlog::{l_numeric, MonomialFamily};
use resurgence::laplace::{hankel_laplace, lateral_jump, laplace_ray, RaySpec};
use resurgence::mould::{Alphabet, Mould};
use resurgence::mzv::{wa_eval, ze_eval, MzvIndex, WaWord};
use resurgence::scalars::ExactScalar;
use resurgence::series::{borel, gevrey_bound, FormalSeries};
use resurgence::words::Word;

fn err(e: resurgence::error::Error) -> PyErr {
    PyValueError::new_err(format!("{}: {e}", e.kind()))
}

fn scalar(s: &str) -> PyResult<ExactScalar> {
    s.parse().map_err(err)
}

/// Exact scalar in Q(i)[2 pi i, 1/(2 pi i), log p].
#[pyclass(name = "Scalar", frozen)]
struct PyScalar(ExactScalar);

#[pymethods]
impl PyScalar {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyScalar(scalar(text)?))
    }
    #[staticmethod]
    fn tau() -> Self {
        PyScalar(ExactScalar::tau())
    }
    fn __str__(&self) -> String {
        self.0.to_string()
    }
    fn __repr__(&self) -> String {
        format!("Scalar('{}')", self.0)
    }
    fn __eq__(&self, o: &Self) -> bool {
        self.0 == o.0
    }
    fn __add__(&self, o: &Self) -> Self {
        PyScalar(&self.0 + &o.0)
    }
    fn __sub__(&self, o: &Self) -> Self {
        PyScalar(&self.0 - &o.0)
    }
    fn __mul__(&self, o: &Self) -> Self {
        PyScalar(&self.0 * &o.0)
    }
    fn __neg__(&self) -> Self {
        PyScalar(-&self.0)
    }
    fn __truediv__(&self, o: &Self) -> PyResult<Self> {
        Ok(PyScalar(self.0.checked_div(&o.0).map_err(err)?))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn __complex__(&self) -> Complex64 {
        self.0.to_c64()
    }
    /// Decimal strings (re, im) at the given binary precision.
    fn evaluate(&self, precision: usize) -> PyResult<(String, String)> {
        let v = self.0.evaluate(precision).map_err(err)?;
        Ok((v.re.to_string(), v.im.to_string()))
    }
}

/// Truncated mould on an integer alphabet.
#[pyclass(name = "Mould", frozen)]
struct PyMould(Mould);

#[pymethods]
impl PyMould {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyMould(Mould::from_json(text).map_err(err)?))
    }
    #[staticmethod]
    #[pyo3(signature = (w, alphabet, max_length))]
    fn exp_w(w: &str, alphabet: Vec<i64>, max_length: usize) -> PyResult<Self> {
        Ok(PyMould(Mould::exp_w(Alphabet::ints(&alphabet), max_length, &scalar(w)?)))
    }
    #[staticmethod]
    fn one(alphabet: Vec<i64>, max_length: usize) -> Self {
        PyMould(Mould::one(Alphabet::ints(&alphabet), max_length))
    }
    #[staticmethod]
    fn identity(alphabet: Vec<i64>, max_length: usize) -> Self {
        PyMould(Mould::identity(Alphabet::ints(&alphabet), max_length))
    }
    fn to_json(&self) -> String {
        self.0.to_json()
    }
    fn get(&self, word: Vec<i64>) -> String {
        self.0.get(&Word::ints(&word)).to_string()
    }
    fn set(&self, word: Vec<i64>, value: &str) -> PyResult<Self> {
        let mut m = self.0.clone();
        m.set(Word::ints(&word), scalar(value)?).map_err(err)?;
        Ok(PyMould(m))
    }
    fn __eq__(&self, o: &Self) -> bool {
        self.0 == o.0
    }
    fn __add__(&self, o: &Self) -> PyResult<Self> {
        Ok(PyMould(self.0.add(&o.0).map_err(err)?))
    }
    fn __mul__(&self, o: &Self) -> PyResult<Self> {
        Ok(PyMould(self.0.product(&o.0).map_err(err)?))
    }
    fn compose(&self, u: &Self) -> PyResult<Self> {
        Ok(PyMould(self.0.compose(&u.0).map_err(err)?))
    }
    fn commutator(&self, o: &Self) -> PyResult<Self> {
        Ok(PyMould(self.0.commutator(&o.0).map_err(err)?))
    }
    fn exp(&self) -> PyResult<Self> {
        Ok(PyMould(self.0.exp().map_err(err)?))
    }
    fn log(&self) -> PyResult<Self> {
        Ok(PyMould(self.0.log().map_err(err)?))
    }
    fn inverse(&self) -> PyResult<Self> {
        Ok(PyMould(self.0.mult_inverse().map_err(err)?))
    }
    fn comp_inverse(&self) -> PyResult<Self> {
        Ok(PyMould(self.0.comp_inverse().map_err(err)?))
    }
    fn is_alternal(&self) -> bool {
        self.0.is_alternal()
    }
    fn is_symmetral(&self) -> bool {
        self.0.is_symmetral()
    }
    fn is_alternel(&self) -> bool {
        self.0.is_alternel()
    }
    fn is_symmetrel(&self) -> bool {
        self.0.is_symmetrel()
    }
}

/// Truncated formal series sum c_n z^-n.
#[pyclass(name = "Series", frozen)]
struct PySeries(FormalSeries);

#[pymethods]
impl PySeries {
    #[new]
    fn new(coeffs: Vec<String>) -> PyResult<Self> {
        Ok(PySeries(FormalSeries::new(coeffs.iter().map(|c| scalar(c)).collect::<PyResult<_>>()?)))
    }
    #[staticmethod]
    fn euler(order: usize) -> Self {
        PySeries(FormalSeries::euler(order))
    }
    #[staticmethod]
    fn stirling(order: usize) -> Self {
        PySeries(FormalSeries::stirling(order))
    }
    fn coefficients(&self) -> Vec<String> {
        self.0.coeffs.iter().map(|c| c.to_string()).collect()
    }
    fn __eq__(&self, o: &Self) -> bool {
        self.0 == o.0
    }
    fn __mul__(&self, o: &Self) -> Self {
        PySeries(self.0.cauchy_product(&o.0))
    }
    fn __add__(&self, o: &Self) -> Self {
        PySeries(self.0.add(&o.0))
    }
    fn shift(&self, alpha: &str) -> PyResult<Self> {
        Ok(PySeries(self.0.shift(&scalar(alpha)?)))
    }
    fn group_inverse(&self) -> PyResult<Self> {
        Ok(PySeries(self.0.group_inverse().map_err(err)?))
    }
    /// (delta coefficient, minor Taylor coefficients)
    fn borel(&self) -> (String, Vec<String>) {
        let b = borel(&self.0);
        (b.delta.to_string(), b.coeffs.iter().map(|c| c.to_string()).collect())
    }
    /// (C, M) of the fit |c_{n+1}| / n! ~ C M^n.
    fn gevrey(&self) -> PyResult<(f64, f64)> {
        let g = gevrey_bound(&self.0).map_err(err)?;
        Ok((g.c, g.m))
    }
}

fn builtin(name: &str) -> PyResult<BorelFunction> {
    BorelFunction::builtin(name).map_err(err)
}

/// Delta_omega (or Delta^+_omega with plus=True) of a built-in series; returns the
/// constant of the result and whether its minor vanishes.
#[pyfunction]
#[pyo3(signature = (name, omega, plus = false))]
fn alien(name: &str, omega: &str, plus: bool) -> PyResult<(String, bool)> {
    let phi = ResurgentSeries::from_minor(builtin(name)?);
    let om = scalar(omega)?;
    let r = if plus { alien_plus(&phi, &om) } else { alien_derivation(&phi, &om) }.map_err(err)?;
    Ok((r.constant.to_string(), r.minor.is_zero()))
}

/// Borel-Laplace sum along arg theta: (value, error estimate).
#[pyfunction]
#[pyo3(signature = (name, z, theta = 0.0, c0 = "0", target_err = 1e-12))]
fn laplace(name: &str, z: Complex64, theta: f64, c0: &str, target_err: f64) -> PyResult<(Complex64, f64)> {
    let r = laplace_ray(&builtin(name)?, &scalar(c0)?, &RaySpec::new(theta, z).with_target(target_err)).map_err(err)?;
    Ok((r.c64(), r.error_estimate))
}

/// S+ - S- across theta_star: (jump, error).
#[pyfunction]
#[pyo3(signature = (name, theta_star, z, delta = 0.3, c0 = "0"))]
fn jump(name: &str, theta_star: f64, z: Complex64, delta: f64, c0: &str) -> PyResult<(Complex64, f64)> {
    let j = lateral_jump(&builtin(name)?, &scalar(c0)?, theta_star, delta, z).map_err(err)?;
    Ok((j.jump(), j.error))
}

#[pyfunction]
#[pyo3(signature = (name, z, theta = 0.0))]
fn hankel(name: &str, z: Complex64, theta: f64) -> PyResult<(Complex64, f64)> {
    let r = hankel_laplace(&builtin(name)?, theta, z).map_err(err)?;
    Ok((r.c64(), r.error_estimate))
}

/// Coefficients of the resurgence monomial for a word over the given letters.
#[pyfunction]
fn monomial(letters: Vec<i64>, word: Vec<i64>, order: usize) -> PyResult<Vec<String>> {
    let fam = MonomialFamily::ints(&letters, order).map_err(err)?;
    let s = fam.v_series(&Word::ints(&word)).map_err(err)?;
    Ok(s.coeffs.iter().map(|c| c.to_string()).collect())
}

#[pyfunction]
#[pyo3(signature = (word, precision = 53))]
fn l_value(word: Vec<i64>, precision: usize) -> PyResult<(Complex64, f64)> {
    let l = l_numeric(&word, precision).map_err(err)?;
    Ok((l.value.to_c64(), l.error))
}

/// Coloured multizeta value: s like "2,1", colours like "1/2,0".
#[pyfunction]
#[pyo3(signature = (s, eps = None, precision = 53))]
fn ze(s: &str, eps: Option<&str>, precision: usize) -> PyResult<(Complex64, f64)> {
    let v = ze_eval(&MzvIndex::parse(s, eps).map_err(err)?, precision).map_err(err)?;
    Ok((v.c64(), v.error))
}

/// Iterated integral over letters 0, 1, -1.
#[pyfunction]
#[pyo3(signature = (alphas, precision = 53))]
fn wa(alphas: Vec<i64>, precision: usize) -> PyResult<(Complex64, f64)> {
    let v = wa_eval(&WaWord::ints(&alphas).map_err(err)?, precision).map_err(err)?;
    Ok((v.c64(), v.error))
}

/// Runs the command line with the given arguments: (exit code, output).
#[pyfunction]
fn cli(args: Vec<String>) -> (i32, String) {
    resurgence::cli::run(std::iter::once("resurgence".to_string()).chain(args))
}

#[pymodule]
fn pyresurgence(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScalar>()?;
    m.add_class::<PyMould>()?;
    m.add_class::<PySeries>()?;
    m.add_function(wrap_pyfunction!(alien, m)?)?;
    m.add_function(wrap_pyfunction!(laplace, m)?)?;
    m.add_function(wrap_pyfunction!(jump, m)?)?;
    m.add_function(wrap_pyfunction!(hankel, m)?)?;
    m.add_function(wrap_pyfunction!(monomial, m)?)?;
    m.add_function(wrap_pyfunction!(l_value, m)?)?;
    m.add_function(wrap_pyfunction!(ze, m)?)?;
    m.add_function(wrap_pyfunction!(wa, m)?)?;
    m.add_function(wrap_pyfunction!(cli, m)?)?;
    Ok(())
}
