//! Coherent states `|s,γ⟩_ε` and excited coherent states `|s,γ,m⟩_ε`.
//!
//! The excited state of order `m` is the normalised `a_ε†^m |s,γ⟩_ε`; it has
//! support on energies `E ≥ mε` and, writing `E' = E - mε`, amplitude
//!
//! ```text
//! ψ(E) = 𝒩_{ε,m}(s) · exp(½ mαε (2E' + mε)) · s^{E'} · exp(-αE'²/2) · exp(-iγE')
//! ```
//!
//! `m = 0` is the plain coherent state. Labels keep `ln s` rather than `s`,
//! since `s^{2E}` leaves the `f64` range long before anything physical does.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::specfun::{self, Quadrature, LN_MAX};

/// Spectrum and deformation parameters `(α, ε, ω)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    alpha: f64,
    epsilon: f64,
    omega: f64,
}

impl ModelParams {
    pub fn new(alpha: f64, epsilon: f64, omega: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("epsilon", epsilon), ("omega", omega)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(invalid(name, format!("must be finite and > 0, got {v}")));
            }
        }
        Ok(Self {
            alpha,
            epsilon,
            omega,
        })
    }

    /// `ω = 1`.
    pub fn unit_omega(alpha: f64, epsilon: f64) -> Result<Self> {
        Self::new(alpha, epsilon, 1.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// `αε²`, the combination most closed forms are written in.
    pub fn alpha_eps2(&self) -> f64 {
        self.alpha * self.epsilon * self.epsilon
    }

    /// Weight `C(E, ε) = exp(α(εE - ε²/2))` of the ladder kernels.
    pub fn ladder_weight(&self, energy: f64) -> f64 {
        (self.alpha * self.epsilon * (energy - 0.5 * self.epsilon)).exp()
    }
}

/// Label `(s, γ, m)` of a (possibly excited) coherent state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateLabel {
    ln_s: f64,
    gamma: f64,
    m: u32,
}

impl StateLabel {
    pub fn new(s: f64, gamma: f64, m: u32) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(invalid("s", format!("must be finite and > 0, got {s}")));
        }
        Self::from_ln_s(s.ln(), gamma, m)
    }

    pub fn from_ln_s(ln_s: f64, gamma: f64, m: u32) -> Result<Self> {
        if !ln_s.is_finite() {
            return Err(invalid("s", format!("ln s must be finite, got {ln_s}")));
        }
        if !gamma.is_finite() {
            return Err(invalid("gamma", format!("must be finite, got {gamma}")));
        }
        Ok(Self { ln_s, gamma, m })
    }

    /// Plain coherent state `|s, γ⟩_ε`.
    pub fn coherent(s: f64, gamma: f64) -> Result<Self> {
        Self::new(s, gamma, 0)
    }

    pub fn s(&self) -> f64 {
        self.ln_s.exp()
    }

    pub fn ln_s(&self) -> f64 {
        self.ln_s
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn with_gamma(self, gamma: f64) -> Self {
        Self { gamma, ..self }
    }

    pub fn with_m(self, m: u32) -> Self {
        Self { m, ..self }
    }
}

/// `ln 𝒩_ε(s) = -½ ln ∫_0^∞ s^{2E} e^{-αE²} dE`.
pub fn ln_normalization_coherent(p: &ModelParams, ln_s: f64) -> Result<f64> {
    Ok(-0.5 * specfun::ln_gauss_tail(p.alpha, 2.0 * ln_s, 0)?)
}

/// `𝒩_ε(s)` of the plain coherent state.
pub fn normalization_coherent(p: &ModelParams, s: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(invalid("s", format!("must be > 0, got {s}")));
    }
    exp_checked(ln_normalization_coherent(p, s.ln())?)
}

/// `ln 𝒩_{ε,m}(s)` from its erf closed form:
///
/// `(4α/π)^{1/4} e^{-(ln s)²/2α} e^{-m²αε²} s^{-mε} [1 + erf((mαε + ln s)/√α)]^{-1/2}`.
pub fn ln_normalization_excited(p: &ModelParams, ln_s: f64, m: u32) -> f64 {
    let a = p.alpha;
    let m = f64::from(m);
    let z = (m * a * p.epsilon + ln_s) / a.sqrt();
    0.25 * (4.0 * a / std::f64::consts::PI).ln()
        - ln_s * ln_s / (2.0 * a)
        - m * m * p.alpha_eps2()
        - m * p.epsilon * ln_s
        - 0.5 * specfun::ln_one_plus_erf(z)
}

/// `𝒩_{ε,m}(s)` of the excited state of order `m`.
pub fn normalization_excited(p: &ModelParams, s: f64, m: u32) -> Result<f64> {
    if !(s > 0.0) {
        return Err(invalid("s", format!("must be > 0, got {s}")));
    }
    exp_checked(ln_normalization_excited(p, s.ln(), m))
}

fn exp_checked(ln: f64) -> Result<f64> {
    if ln > LN_MAX {
        Err(Error::Overflow { ln_value: ln })
    } else {
        Ok(ln.exp())
    }
}

/// Energies within this fraction of `ε` below `mε` still count as on the support,
/// so grid points `i·ε/r` that round a hair low are not dropped.
const SUPPORT_SLACK: f64 = 1e-9;

/// A state's amplitude function with its normalisation evaluated once.
#[derive(Debug, Clone, Copy)]
pub struct Wavefunction {
    params: ModelParams,
    label: StateLabel,
    ln_norm: f64,
}

impl Wavefunction {
    pub fn new(params: &ModelParams, label: &StateLabel) -> Self {
        Self {
            params: *params,
            label: *label,
            ln_norm: ln_normalization_excited(params, label.ln_s, label.m),
        }
    }

    pub fn label(&self) -> &StateLabel {
        &self.label
    }

    /// Lowest energy carrying amplitude, `mε`.
    pub fn support_start(&self) -> f64 {
        f64::from(self.label.m) * self.params.epsilon
    }

    /// Shifted energy `E' = E - mε`, or `None` below the support.
    fn shifted(&self, energy: f64) -> Option<f64> {
        let shifted = energy - self.support_start();
        if shifted >= 0.0 {
            Some(shifted)
        } else if shifted >= -SUPPORT_SLACK * self.params.epsilon {
            Some(0.0)
        } else {
            None
        }
    }

    /// `ln |ψ(E)|`, `None` where the amplitude vanishes.
    pub fn ln_modulus(&self, energy: f64) -> Option<f64> {
        let e = self.shifted(energy)?;
        let p = &self.params;
        let m = f64::from(self.label.m);
        Some(
            self.ln_norm
                + 0.5 * m * p.alpha * p.epsilon * (2.0 * e + m * p.epsilon)
                + e * self.label.ln_s
                - 0.5 * p.alpha * e * e,
        )
    }

    /// Phase angle `-γE'` of `ψ(E)` on the support.
    pub fn phase(&self, energy: f64) -> f64 {
        self.shifted(energy).map_or(0.0, |e| -self.label.gamma * e)
    }

    pub fn eval(&self, energy: f64) -> Result<Complex64> {
        match self.ln_modulus(energy) {
            None => Ok(Complex64::new(0.0, 0.0)),
            Some(ln) => Ok(Complex64::from_polar(exp_checked(ln)?, self.phase(energy))),
        }
    }

    /// `|ψ(E)|²`, zero below the support.
    pub fn density(&self, energy: f64) -> f64 {
        self.ln_modulus(energy).map_or(0.0, |ln| (2.0 * ln).exp())
    }
}

/// Amplitude `⟨E|s,γ,m⟩_ε`; zero for `E < mε`.
pub fn amplitude(p: &ModelParams, l: &StateLabel, energy: f64) -> Result<Complex64> {
    if !(energy >= 0.0) {
        return Err(invalid("E", format!("must be ≥ 0, got {energy}")));
    }
    Wavefunction::new(p, l).eval(energy)
}

/// `e^{-iHt}|s,γ,m⟩ = e^{-imεωt} |s, γ+ωt, m⟩`: the relabelled state and the phase.
pub fn evolve(p: &ModelParams, l: &StateLabel, t: f64) -> (StateLabel, Complex64) {
    let label = StateLabel {
        gamma: l.gamma + p.omega * t,
        ..*l
    };
    let phase = Complex64::from_polar(1.0, -f64::from(l.m) * p.epsilon * p.omega * t);
    (label, phase)
}

/// `⟨l1|l2⟩` by quadrature over the common support.
pub fn overlap(p: &ModelParams, l1: &StateLabel, l2: &StateLabel, tol: f64) -> Result<Complex64> {
    let w1 = Wavefunction::new(p, l1);
    let w2 = Wavefunction::new(p, l2);
    let lower = w1.support_start().max(w2.support_start());
    let quad = Quadrature::new(tol)?.abs_tol(1e-3 * tol);
    quad.semi_infinite_polar(|x| {
        let e = lower + x;
        let (a, b) = (w1.ln_modulus(e)?, w2.ln_modulus(e)?);
        Some(((a + b).exp(), w2.phase(e) - w1.phase(e)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::quad_oracle;

    fn params() -> ModelParams {
        ModelParams::new(10.0, 0.07, 1.0).unwrap()
    }

    #[test]
    fn constructor_validation() {
        assert!(ModelParams::new(0.0, 0.1, 1.0).is_err());
        assert!(ModelParams::new(1.0, -0.1, 1.0).is_err());
        assert!(ModelParams::new(1.0, 0.1, f64::INFINITY).is_err());
        assert!(StateLabel::new(0.0, 0.0, 0).is_err());
        assert!(StateLabel::new(-1.0, 0.0, 0).is_err());
        assert!(StateLabel::new(1.0, f64::NAN, 0).is_err());
    }

    #[test]
    fn coherent_normalization_at_unit_s() {
        let n = normalization_coherent(&params(), 1.0).unwrap();
        let expected = (40.0 / std::f64::consts::PI).powf(0.25);
        assert!((n / expected - 1.0).abs() < 1e-14);
    }

    #[test]
    fn coherent_normalization_against_oracle() {
        let p = params();
        // s = e^10: integrand s^{2E} e^{-αE²} peaks at E = 1 with height e^10
        let ln_s = 10.0;
        let integral = quad_oracle(|e| (2.0 * ln_s * e - 10.0 * e * e).exp(), 1e-12).unwrap();
        let n = ln_normalization_coherent(&p, ln_s).unwrap().exp();
        assert!((n / integral.powf(-0.5) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn excited_normalization_against_oracle() {
        let p = params();
        let (m, s) = (3.0, 2.0f64);
        let f = |e: f64| {
            (m * 10.0 * 0.07 * (2.0 * e + m * 0.07) + 2.0 * e * s.ln() - 10.0 * e * e).exp()
        };
        let oracle = quad_oracle(f, 1e-12).unwrap().powf(-0.5);
        let n = normalization_excited(&p, s, 3).unwrap();
        assert!((n / oracle - 1.0).abs() < 1e-9, "{n} vs {oracle}");
    }

    #[test]
    fn excited_normalization_deep_tail_is_finite() {
        let p = params();
        let ln_s = -3.0 * 10f64.sqrt();
        let ln_n = ln_normalization_excited(&p, ln_s, 12);
        assert!(ln_n.is_finite());
        let f =
            |e: f64| (12.0 * 0.7 * (2.0 * e + 12.0 * 0.07) + 2.0 * e * ln_s - 10.0 * e * e).exp();
        let oracle = -0.5 * quad_oracle(f, 1e-12).unwrap().ln();
        assert!((ln_n - oracle).abs() < 1e-9);
    }

    #[test]
    fn amplitude_support_and_origin() {
        let p = params();
        let l = StateLabel::new(2.3, 0.7, 0).unwrap();
        let a0 = amplitude(&p, &l, 0.0).unwrap();
        let n = normalization_coherent(&p, 2.3).unwrap();
        assert!((a0.re - n).abs() < 1e-12 * n && a0.im == 0.0);

        let l1 = StateLabel::new(2.3, 0.7, 1).unwrap();
        assert_eq!(amplitude(&p, &l1, 0.05).unwrap(), Complex64::new(0.0, 0.0));
        assert!(amplitude(&p, &l1, 0.07).unwrap().norm() > 0.0);
        assert!(amplitude(&p, &l1, -1.0).is_err());
    }

    #[test]
    fn evolution_phase_and_label() {
        let p = ModelParams::new(10.0, 0.07, 2.0).unwrap();
        let l = StateLabel::new(1.5, 0.3, 0).unwrap();
        let (l0, ph0) = evolve(&p, &l, 0.0);
        assert_eq!(l0, l);
        assert_eq!(ph0, Complex64::new(1.0, 0.0));
        let (lt, ph) = evolve(&p, &l, 1.25);
        assert_eq!(ph, Complex64::new(1.0, 0.0));
        assert!((lt.gamma() - (0.3 + 2.5)).abs() < 1e-15);

        let l3 = l.with_m(3);
        let (_, ph3) = evolve(&p, &l3, 1.25);
        assert!((ph3.arg() - (-3.0f64 * 0.07 * 2.0 * 1.25)).abs() < 1e-15);
    }

    #[test]
    fn overlap_identities() {
        let p = params();
        let l1 = StateLabel::new(1.7, 0.4, 2).unwrap();
        let l2 = StateLabel::new(2.2, -1.1, 2).unwrap();
        let self_ov = overlap(&p, &l1, &l1, 1e-11).unwrap();
        assert!((self_ov.re - 1.0).abs() < 1e-9 && self_ov.im.abs() < 1e-9);
        let a = overlap(&p, &l1, &l2, 1e-11).unwrap();
        let b = overlap(&p, &l2, &l1, 1e-11).unwrap();
        assert!((a - b.conj()).norm() < 1e-12);
        assert!(a.norm() <= 1.0 + 1e-11);
    }

    #[test]
    fn overlap_across_orders_uses_common_support() {
        let p = params();
        let l0 = StateLabel::new(1.7, 0.4, 0).unwrap();
        let l1 = l0.with_m(1);
        let ov = overlap(&p, &l0, &l1, 1e-11).unwrap();
        assert!(ov.norm() > 0.0 && ov.norm() < 1.0);
    }
}
