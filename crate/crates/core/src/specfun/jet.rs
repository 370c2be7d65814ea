//! Truncated Taylor arithmetic ("jets").
//!
//! A jet of order `m` at `c` stores `f(c+h) = Σ_{r≤m} a_r h^r + O(h^{m+1})`
//! through the factorial-scaled coefficients `a_r = f^{(r)}(c) / r!`. All
//! operations are exact on the retained coefficients.

use super::{gamma, lower_inc_gamma, ln_factorial};
use crate::{Error, Result};

/// Highest derivative order supported by [`exp_phi_jet`].
pub const MAX_JET_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct TaylorJet {
    pub center: f64,
    pub coeffs: Vec<f64>,
}

impl TaylorJet {
    pub fn constant(center: f64, value: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Self { center, coeffs }
    }

    /// The identity `h ↦ c + h`.
    pub fn variable(center: f64, order: usize) -> Self {
        let mut j = Self::constant(center, center, order);
        if order >= 1 {
            j.coeffs[1] = 1.0;
        }
        j
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// `f^{(r)}(center)`.
    pub fn derivative(&self, r: usize) -> f64 {
        self.coeffs[r] * ln_factorial(r as u64).exp()
    }

    /// Evaluates the truncated polynomial at `center + h`.
    pub fn eval(&self, h: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * h + c)
    }

    fn same_shape(&self, other: &Self) {
        debug_assert_eq!(self.coeffs.len(), other.coeffs.len());
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_shape(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Self { center: self.center, coeffs }
    }

    pub fn add_scalar(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { center: self.center, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_shape(other);
        let m = self.order();
        let coeffs = (0..=m).map(|n| (0..=n).map(|k| self.coeffs[k] * other.coeffs[n - k]).sum()).collect();
        Self { center: self.center, coeffs }
    }

    /// `exp ∘ f` via `n e_n = Σ_{k=1}^n k g_k e_{n−k}`.
    pub fn exp(&self) -> Self {
        let g = &self.coeffs;
        let m = self.order();
        let mut e = vec![0.0; m + 1];
        e[0] = g[0].exp();
        for n in 1..=m {
            let s: f64 = (1..=n).map(|k| k as f64 * g[k] * e[n - k]).sum();
            e[n] = s / n as f64;
        }
        Self { center: self.center, coeffs: e }
    }

    /// `ln ∘ f`, requires `f(center) > 0`.
    pub fn ln(&self) -> Result<Self> {
        let g = &self.coeffs;
        if g[0] <= 0.0 {
            return Err(Error::Domain(format!("jet ln at non-positive value {}", g[0])));
        }
        let m = self.order();
        let mut l = vec![0.0; m + 1];
        l[0] = g[0].ln();
        for n in 1..=m {
            let s: f64 = (1..n).map(|k| k as f64 * l[k] * g[n - k]).sum();
            l[n] = (g[n] - s / n as f64) / g[0];
        }
        Ok(Self { center: self.center, coeffs: l })
    }

    /// `f^p` by Miller's recurrence, requires `f(center) > 0`.
    pub fn powf(&self, p: f64) -> Result<Self> {
        let g = &self.coeffs;
        if g[0] <= 0.0 {
            return Err(Error::Domain(format!("jet power at non-positive value {}", g[0])));
        }
        let m = self.order();
        let mut b = vec![0.0; m + 1];
        b[0] = g[0].powf(p);
        for n in 1..=m {
            let s: f64 = (1..=n)
                .map(|k| ((p + 1.0) * k as f64 - n as f64) * g[k] * b[n - k])
                .sum();
            b[n] = s / (n as f64 * g[0]);
        }
        Ok(Self { center: self.center, coeffs: b })
    }

    /// `outer ∘ self`, where `outer` is a jet centred at `self.value()`.
    pub fn compose(&self, outer: &Self) -> Self {
        let m = self.order();
        let mut inner = self.clone();
        inner.coeffs[0] = 0.0;
        // Horner in the shifted inner series
        let mut acc = Self::constant(self.center, outer.coeffs[outer.order().min(m)], m);
        for k in (0..outer.order().min(m)).rev() {
            acc = acc.mul(&inner).add_scalar(outer.coeffs[k]);
        }
        acc
    }

    /// Antiderivative with value `c0` at the center.
    pub fn integrate(&self, c0: f64) -> Self {
        let m = self.order();
        let coeffs = std::iter::once(c0).chain((1..=m).map(|k| self.coeffs[k - 1] / k as f64)).collect();
        Self { center: self.center, coeffs }
    }

    /// Jet of `h ↦ f(center − h)`.
    pub fn reflect(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(r, &c)| if r % 2 == 1 { -c } else { c })
            .collect();
        Self { center: self.center, coeffs }
    }
}

/// Laplace exponents of the subordinators whose `e^{−tφ(Λ)}` gets differentiated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhiKind {
    /// `φ(η) = η^β`.
    StablePower { beta: f64 },
    /// `φ(η) = α ε^{−α} γ(α; εη)`.
    IncGamma { alpha: f64, eps: f64 },
    /// `φ(η) = α (γ(α; η+θ) − γ(α; θ))`.
    TemperedIncGamma { alpha: f64, theta: f64 },
}

impl PhiKind {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            PhiKind::StablePower { beta } => beta > 0.0 && beta <= 1.0,
            PhiKind::IncGamma { alpha, eps } => alpha > 0.0 && alpha <= 1.0 && eps > 0.0,
            PhiKind::TemperedIncGamma { alpha, theta } => {
                alpha > 0.0 && alpha <= 1.0 && theta > 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("invalid Laplace exponent {self:?}")))
        }
    }

    /// `φ(η)`.
    pub fn eval(&self, eta: f64) -> Result<f64> {
        match *self {
            PhiKind::StablePower { beta } => Ok(eta.powf(beta)),
            PhiKind::IncGamma { alpha, eps } => {
                Ok(alpha * eps.powf(-alpha) * lower_inc_gamma(alpha, eps * eta)?)
            }
            PhiKind::TemperedIncGamma { alpha, theta } => Ok(alpha
                * (lower_inc_gamma(alpha, eta + theta)? - lower_inc_gamma(alpha, theta)?)),
        }
    }

    /// `φ(∞)`, the total jump intensity (infinite for the stable kind).
    pub fn total_rate(&self) -> f64 {
        match *self {
            PhiKind::StablePower { .. } => f64::INFINITY,
            PhiKind::IncGamma { alpha, eps } => alpha * gamma(alpha) * eps.powf(-alpha),
            PhiKind::TemperedIncGamma { alpha, theta } => {
                alpha * super::upper_inc_gamma(alpha, theta).unwrap_or(f64::NAN)
            }
        }
    }

    /// Jet of `h ↦ φ(λ − h)`.
    ///
    /// Working in the reflected variable keeps every coefficient of order
    /// `≥ 1` non-positive (φ is a Bernstein function), so the exponential
    /// recurrence downstream never cancels.
    pub fn reflected_jet(&self, lambda: f64, order: usize) -> Result<TaylorJet> {
        self.validate()?;
        let x = TaylorJet::variable(lambda, order).reflect();
        match *self {
            PhiKind::StablePower { beta } => x.powf(beta),
            PhiKind::IncGamma { alpha, eps } => {
                // φ'(η) = α η^{α−1} e^{−εη}
                let d = x.powf(alpha - 1.0)?.mul(&x.scale(-eps).exp()).scale(alpha);
                Ok(d.integrate(0.0).scale(-1.0).add_scalar(self.eval(lambda)?))
            }
            PhiKind::TemperedIncGamma { alpha, theta } => {
                // φ'(η) = α (η+θ)^{α−1} e^{−(η+θ)}
                let y = x.add_scalar(theta);
                let d = y.powf(alpha - 1.0)?.mul(&y.scale(-1.0).exp()).scale(alpha);
                Ok(d.integrate(0.0).scale(-1.0).add_scalar(self.eval(lambda)?))
            }
        }
    }
}

/// `(−1)^r d^r/dΛ^r e^{−tφ(Λ)}` for `r = 0..=order`.
///
/// For a subordinator `G` with exponent φ these are `E[G(t)^r e^{−ΛG(t)}]`.
pub fn exp_phi_jet(kind: PhiKind, t: f64, lambda: f64, order: usize) -> Result<Vec<f64>> {
    if order > MAX_JET_ORDER {
        return Err(Error::OrderOverflow { order, max: MAX_JET_ORDER });
    }
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(Error::Domain(format!("jet center must be positive, got {lambda}")));
    }
    if t.is_nan() || t < 0.0 {
        return Err(Error::Domain(format!("time must be non-negative, got {t}")));
    }
    let e = kind.reflected_jet(lambda, order)?.scale(-t).exp();
    Ok(e.coeffs
        .iter()
        .enumerate()
        .map(|(r, c)| c * ln_factorial(r as u64).exp())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn elementary_jets_match_known_series() {
        // exp at 0.5: all derivatives e^{0.5}
        let e = TaylorJet::variable(0.5, 6).exp();
        for r in 0..=6 {
            assert!(close(e.derivative(r), 0.5f64.exp(), 1e-14));
        }
        // ln(1+h) at 1: (-1)^{r+1}/r
        let l = TaylorJet::variable(1.0, 5).ln().unwrap();
        for r in 1..=5 {
            let expected = if r % 2 == 1 { 1.0 } else { -1.0 } / r as f64;
            assert!(close(l.coeffs[r], expected, 1e-14));
        }
        // (2+h)^{1/2}
        let p = TaylorJet::variable(2.0, 3).powf(0.5).unwrap();
        assert!(close(p.derivative(1), 0.5 / 2f64.sqrt(), 1e-14));
        assert!(close(p.derivative(2), -0.25 * 2f64.powf(-1.5), 1e-14));
        assert!(close(p.derivative(3), 0.375 * 2f64.powf(-2.5), 1e-14));
    }

    #[test]
    fn compose_matches_direct_exp_of_power() {
        let x = TaylorJet::variable(1.3, 7);
        let inner = x.powf(0.6).unwrap();
        let outer = TaylorJet::variable(inner.value(), 7).exp();
        let a = inner.compose(&outer);
        let b = inner.exp();
        for r in 0..=7 {
            assert!(close(a.coeffs[r], b.coeffs[r], 1e-13), "{r}");
        }
    }

    #[test]
    fn ln_and_exp_are_inverse() {
        let x = TaylorJet::variable(0.7, 9).powf(1.7).unwrap();
        let back = x.ln().unwrap().exp();
        for r in 0..=9 {
            assert!((back.coeffs[r] - x.coeffs[r]).abs() < 1e-13);
        }
    }

    #[test]
    fn order_zero_and_first_derivative() {
        let kind = PhiKind::StablePower { beta: 0.5 };
        let v = exp_phi_jet(kind, 1.0, 1.0, 1).unwrap();
        assert!(close(v[0], (-1.0f64).exp(), 1e-15));
        assert!(close(v[1], 0.5 * (-1.0f64).exp(), 1e-15));
        assert!((v[1] - 0.183940).abs() < 1e-6);
    }

    #[test]
    fn order_cap() {
        let kind = PhiKind::StablePower { beta: 0.5 };
        assert!(exp_phi_jet(kind, 1.0, 1.0, MAX_JET_ORDER).is_ok());
        assert!(matches!(
            exp_phi_jet(kind, 1.0, 1.0, MAX_JET_ORDER + 1),
            Err(Error::OrderOverflow { .. })
        ));
    }

    #[test]
    fn beta_one_is_poisson_moments() {
        // φ(η)=η: E[t^r e^{-Λt}]
        let v = exp_phi_jet(PhiKind::StablePower { beta: 1.0 }, 2.0, 0.5, 6).unwrap();
        for (r, x) in v.iter().enumerate() {
            assert!(close(*x, 2f64.powi(r as i32) * (-1.0f64).exp(), 1e-14));
        }
    }

    #[test]
    fn incgamma_phi_derivative_matches_density_integral() {
        // first derivative of φ is α η^{α-1} e^{-εη}
        let kind = PhiKind::IncGamma { alpha: 0.4, eps: 2.0 };
        let j = kind.reflected_jet(1.5, 3).unwrap();
        let expected = 0.4 * 1.5f64.powf(-0.6) * (-3.0f64).exp();
        assert!(close(-j.coeffs[1], expected, 1e-14));
        assert!(close(j.value(), kind.eval(1.5).unwrap(), 1e-15));
    }

    #[test]
    fn reflected_coefficients_are_sign_definite() {
        for kind in [
            PhiKind::StablePower { beta: 0.3 },
            PhiKind::IncGamma { alpha: 0.6, eps: 1.0 },
            PhiKind::TemperedIncGamma { alpha: 0.5, theta: 0.2 },
        ] {
            let j = kind.reflected_jet(0.8, 20).unwrap();
            assert!(j.coeffs[1..].iter().all(|&c| c <= 0.0), "{kind:?}");
            let e = exp_phi_jet(kind, 1.5, 0.8, 20).unwrap();
            assert!(e.iter().all(|&c| c > 0.0));
        }
    }
}
