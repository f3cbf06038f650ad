//! Alien operators on exactly represented resurgent series, and the symbolic Stokes
//! automorphism on truncated transseries.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::borelfun::{BorelFunction, Detour, PathSpec};
use crate::error::{Error, Result};
use crate::freealg::{mould_expand, FreeElement};
use crate::mould::{Alphabet, Mould};
use crate::scalars::{factorial, ExactScalar};
use crate::series::{inverse_borel, FormalSeries, Outer};
use crate::words::Letter;

/// c0 + B^{-1}(minor)
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResurgentSeries {
    pub constant: ExactScalar,
    pub minor: BorelFunction,
}

impl ResurgentSeries {
    pub fn new(constant: ExactScalar, minor: BorelFunction) -> Self {
        ResurgentSeries { constant, minor }
    }
    pub fn constant(c: ExactScalar) -> Self {
        Self::new(c, BorelFunction::zero())
    }
    pub fn from_minor(minor: BorelFunction) -> Self {
        Self::new(ExactScalar::zero(), minor)
    }

    /// Truncation sum_{n <= order} c_n z^{-n}.
    pub fn to_formal(&self, order: usize) -> Result<FormalSeries> {
        Ok(inverse_borel(&self.minor.to_borel_series(self.constant.clone(), order)?))
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.minor.is_zero()
    }
}

/// p! q! / r! for a detour sequence with p "+" and q "-" (r - 1 = p + q).
pub fn path_weight(detours: &[Detour]) -> BigRational {
    let p = detours.iter().filter(|d| **d == Detour::Plus).count() as u64;
    let q = detours.len() as u64 - p;
    BigRational::new(factorial(p) * factorial(q), factorial(p + q + 1))
}

/// All 2^n detour sequences of length n.
pub fn all_detours(n: usize) -> Vec<Vec<Detour>> {
    (0..1u64 << n)
        .map(|m| (0..n).map(|k| if m >> k & 1 == 0 { Detour::Plus } else { Detour::Minus }).collect())
        .collect()
}

fn from_extraction(f: &BorelFunction, path: &PathSpec) -> Result<ResurgentSeries> {
    let s = f.extract_singularity(path)?;
    Ok(ResurgentSeries::new(s.a0, s.chi))
}

/// Delta^+_w: extraction along the all-"+" path.
pub fn alien_plus(phi: &ResurgentSeries, omega: &ExactScalar) -> Result<ResurgentSeries> {
    if omega.is_zero() {
        return Err(Error::Precondition("alien operators need a nonzero index".into()));
    }
    from_extraction(&phi.minor, &PathSpec::all_plus(&phi.minor, omega.clone()))
}

/// Delta_w: weighted average over all detour sequences.
pub fn alien_derivation(phi: &ResurgentSeries, omega: &ExactScalar) -> Result<ResurgentSeries> {
    if omega.is_zero() {
        return Err(Error::Precondition("alien operators need a nonzero index".into()));
    }
    let n = phi.minor.interior_points(omega).len();
    let mut a0 = ExactScalar::zero();
    let mut chi = BorelFunction::zero();
    for eps in all_detours(n) {
        let wgt = ExactScalar::from_rational(path_weight(&eps));
        let s = phi.minor.extract_singularity(&PathSpec { target: omega.clone(), detours: eps })?;
        a0 = &a0 + &(&s.a0 * &wgt);
        if !s.chi.is_zero() {
            chi = chi.add(&s.chi.scale(&wgt)?)?;
        }
    }
    Ok(ResurgentSeries::new(a0, chi))
}

/// Delta_w(e^phi) = (Delta_w phi) e^phi, as truncated series; phi must have zero constant term.
pub fn alien_of_exp(phi: &ResurgentSeries, omega: &ExactScalar, order: usize) -> Result<FormalSeries> {
    if !phi.constant.is_zero() {
        return Err(Error::Precondition("exp of a series with a constant term".into()));
    }
    let d = alien_derivation(phi, omega)?.to_formal(order)?;
    let e = FormalSeries::substitute(&Outer::Exp, &phi.to_formal(order)?)?;
    Ok(d.cauchy_product(&e))
}

/// sum_{k <= K} e^{-k w1 z} psi_k
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transseries {
    pub components: Vec<FormalSeries>,
    pub step: ExactScalar,
}

impl Transseries {
    pub fn new(components: Vec<FormalSeries>, step: ExactScalar) -> Result<Self> {
        if components.is_empty() || step.is_zero() {
            return Err(Error::Precondition("transseries needs a component and a nonzero step".into()));
        }
        Ok(Transseries { components, step })
    }
    pub fn truncation(&self) -> usize {
        self.components.len() - 1
    }
    fn order(&self) -> usize {
        self.components.iter().map(FormalSeries::order).min().unwrap_or(0)
    }
    fn zero_like(&self) -> Vec<FormalSeries> {
        vec![FormalSeries::zero(self.order()); self.components.len()]
    }
    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.step != o.step {
            return Err(Error::Precondition("different grading steps".into()));
        }
        let k = self.truncation().min(o.truncation());
        let order = self.order().min(o.order());
        let mut c = vec![FormalSeries::zero(order); k + 1];
        for i in 0..=k {
            for j in 0..=k - i {
                c[i + j] = c[i + j].add(&self.components[i].cauchy_product(&o.components[j]));
            }
        }
        Transseries::new(c, self.step.clone())
    }
}

/// An alien operator indexed by j (standing for the point j w1), applied to a series
/// sitting in component k of a transseries.
pub trait AlienAction {
    fn apply(&self, j: usize, k: usize, s: &FormalSeries) -> Result<FormalSeries>;
}

impl<F> AlienAction for F
where
    F: Fn(usize, usize, &FormalSeries) -> Result<FormalSeries>,
{
    fn apply(&self, j: usize, k: usize, s: &FormalSeries) -> Result<FormalSeries> {
        self(j, k, s)
    }
}

/// Explicit images: (j, k) -> image of component k under the operator j.
pub struct MapAction(pub std::collections::BTreeMap<(usize, usize), FormalSeries>);

impl AlienAction for MapAction {
    fn apply(&self, j: usize, k: usize, _s: &FormalSeries) -> Result<FormalSeries> {
        self.0
            .get(&(j, k))
            .cloned()
            .ok_or_else(|| Error::Precondition(format!("no alien action for index {j} on component {k}")))
    }
}

/// D^+ = Id + sum_j e^{-j w1 z} Delta^+_j: component k gets sum_j Delta^+_j psi_{k-j}.
pub fn apply_stokes(t: &Transseries, plus: &dyn AlienAction) -> Result<Transseries> {
    let mut c = t.components.clone();
    for k in 1..=t.truncation() {
        for j in 1..=k {
            let src = &t.components[k - j];
            if src.coeffs.iter().all(ExactScalar::is_zero) {
                continue;
            }
            c[k] = c[k].add(&plus.apply(j, k - j, src)?);
        }
    }
    Transseries::new(c, t.step.clone())
}

/// Applies a free-algebra element whose letters index alien operators; a key word acts
/// rightmost letter first, each raising the component by its index.
pub fn apply_free_element(t: &Transseries, e: &FreeElement, act: &dyn AlienAction) -> Result<Transseries> {
    let kmax = t.truncation();
    let mut out = t.zero_like();
    for (w, coef) in &e.terms {
        let idx: Vec<usize> = w
            .letters()
            .iter()
            .map(|l| match l {
                Letter::Int(n) if *n > 0 => Ok(*n as usize),
                _ => Err(Error::Precondition(format!("operator index {l}"))),
            })
            .collect::<Result<_>>()?;
        let shift: usize = idx.iter().sum();
        for m in 0..=kmax {
            if m + shift > kmax {
                break;
            }
            let mut s = t.components[m].clone();
            let mut at = m;
            for &j in idx.iter().rev() {
                if s.coeffs.iter().all(ExactScalar::is_zero) {
                    break;
                }
                s = act.apply(j, at, &s)?;
                at += j;
            }
            out[m + shift] = out[m + shift].add(&s.scale(coef));
        }
    }
    Transseries::new(out, t.step.clone())
}

/// (D^+)^w = sum w^r / r! e^{-||w|| z} Delta_w, from the Exp_w mould.
pub fn stokes_power(t: &Transseries, w: &ExactScalar, delta: &dyn AlienAction) -> Result<Transseries> {
    let k = t.truncation().max(1);
    let m = Mould::exp_w(Alphabet::ints_upto(k as i64), k, w).with_max_weight(k as i64)?;
    apply_free_element(t, &mould_expand(&m), delta)
}

/// Delta^+_j built from the Delta_j through D^+ = exp(sum Delta_j).
pub struct PlusFromDelta<'a> {
    pub delta: &'a dyn AlienAction,
    pub components: Vec<FreeElement>,
}

impl<'a> PlusFromDelta<'a> {
    pub fn new(delta: &'a dyn AlienAction, k: usize) -> Result<Self> {
        Ok(PlusFromDelta { delta, components: crate::freealg::stokes_components(k)? })
    }
}

impl AlienAction for PlusFromDelta<'_> {
    fn apply(&self, j: usize, k: usize, s: &FormalSeries) -> Result<FormalSeries> {
        let e = self
            .components
            .get(j - 1)
            .ok_or_else(|| Error::Precondition(format!("component {j} not computed")))?;
        // a lone series placed at component k of a scratch transseries
        let mut comps = vec![FormalSeries::zero(s.order()); k + j + 1];
        comps[k] = s.clone();
        let t = Transseries { components: comps, step: ExactScalar::one() };
        Ok(apply_free_element(&t, e, self.delta)?.components[k + j].clone())
    }
}

pub fn rational_weight_total(r: usize) -> BigRational {
    all_detours(r.saturating_sub(1)).iter().map(|e| path_weight(e)).fold(BigRational::new(BigInt::from(0), BigInt::from(1)), |a, b| a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::borelfun::RationalFn;
    use crate::scalars::GaussRat;
    use num_traits::One;

    #[test]
    fn euler_and_stirling() {
        let e = ResurgentSeries::from_minor(BorelFunction::euler());
        assert_eq!(alien_plus(&e, &ExactScalar::from_int(-1)).unwrap(), ResurgentSeries::constant(ExactScalar::tau()));
        assert!(alien_plus(&e, &ExactScalar::one()).unwrap().is_zero());
        let s = ResurgentSeries::from_minor(BorelFunction::stirling());
        for r in 1..=3 {
            let w = ExactScalar::tau().scale_int(r);
            assert_eq!(alien_derivation(&s, &w).unwrap(), ResurgentSeries::constant(ExactScalar::from_ratio(1, r)));
            assert_eq!(alien_plus(&s, &w).unwrap(), ResurgentSeries::constant(ExactScalar::from_ratio(1, r)));
        }
    }

    #[test]
    fn weights_sum_to_one() {
        for r in 1..=6 {
            assert!(rational_weight_total(r).is_one());
        }
    }

    #[test]
    fn convergent_series_are_annihilated() {
        let p = ResurgentSeries::from_minor(BorelFunction::Rational(RationalFn::polynomial(vec![
            ExactScalar::one(),
            ExactScalar::from_int(2),
        ])));
        assert!(alien_derivation(&p, &ExactScalar::from_int(3)).unwrap().is_zero());
    }

    #[test]
    fn rational_minor_plus_equals_delta() {
        let r = BorelFunction::Rational(RationalFn::new(
            vec![ExactScalar::from_int(5)],
            vec![(GaussRat::from_int(1), 1), (GaussRat::from_int(2), 1), (GaussRat::from_int(3), 1)],
        ));
        let phi = ResurgentSeries::from_minor(r);
        let w = ExactScalar::from_int(3);
        assert_eq!(alien_plus(&phi, &w).unwrap(), alien_derivation(&phi, &w).unwrap());
    }

    #[test]
    fn stokes_one_step() {
        let phi = FormalSeries::euler(6);
        let t = Transseries::new(vec![phi.clone(), FormalSeries::zero(6), FormalSeries::zero(6)], ExactScalar::from_int(-1))
            .unwrap();
        let c = ExactScalar::tau();
        let act = |j: usize, k: usize, _s: &FormalSeries| -> Result<FormalSeries> {
            Ok(if j == 1 && k == 0 { FormalSeries::constant(c.clone(), 6) } else { FormalSeries::zero(6) })
        };
        let out = apply_stokes(&t, &act).unwrap();
        assert_eq!(out.components[0], phi);
        assert_eq!(out.components[1], FormalSeries::constant(c.clone(), 6));
        assert_eq!(out.components[2], FormalSeries::zero(6));
        let zero = |_: usize, _: usize, s: &FormalSeries| -> Result<FormalSeries> { Ok(FormalSeries::zero(s.order())) };
        assert_eq!(apply_stokes(&t, &zero).unwrap(), t);
    }
}
