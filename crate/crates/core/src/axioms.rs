//! Certification of the coherent-state axioms for the excited family.
//!
//! The resolution of identity reduces, after the analytic `γ` integration,
//! to a Stieltjes moment problem in `s` with weight
//! `σ_m(s) = [1 + erf((mαε + ln s)/√α)] / (2sα)`. All `s` integrals here run
//! over `u = ln s ∈ (-∞, ∞)`.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::grid_ops::{EnergyGrid, GridState};
use crate::specfun::{self, Quadrature};
use crate::states::{self, ModelParams, StateLabel, Wavefunction};

/// Measure density `σ_m(s)` for the excited states of order `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightFunction {
    params: ModelParams,
    m: u32,
}

impl WeightFunction {
    pub fn new(alpha: f64, epsilon: f64, m: u32) -> Result<Self> {
        Ok(Self {
            params: ModelParams::unit_omega(alpha, epsilon)?,
            m,
        })
    }

    pub fn from_params(params: &ModelParams, m: u32) -> Self {
        Self { params: *params, m }
    }

    pub fn alpha(&self) -> f64 {
        self.params.alpha()
    }

    pub fn epsilon(&self) -> f64 {
        self.params.epsilon()
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    fn erf_argument(&self, ln_s: f64) -> f64 {
        let a = self.alpha();
        (f64::from(self.m) * a * self.epsilon() + ln_s) / a.sqrt()
    }

    /// `ln σ_m(s)` from `ln s`; finite for every real `ln s`.
    pub fn ln_sigma(&self, ln_s: f64) -> f64 {
        specfun::ln_one_plus_erf(self.erf_argument(ln_s)) - ln_s - (2.0 * self.alpha()).ln()
    }

    /// `ln h_m(s)` with `h_m = σ_m 𝒩²_{ε,m}` in its simplified Gaussian form.
    pub fn ln_h(&self, ln_s: f64) -> f64 {
        let a = self.alpha();
        let m = f64::from(self.m);
        -(2.0 * m * self.epsilon() + 1.0) * ln_s
            - ln_s * ln_s / a
            - 2.0 * m * m * self.params.alpha_eps2()
            - 0.5 * (a * std::f64::consts::PI).ln()
    }
}

/// `σ_m(s)`.
pub fn sigma_weight(w: &WeightFunction, s: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(invalid("s", format!("must be finite and > 0, got {s}")));
    }
    let a = w.alpha();
    // erfc(-x) keeps 1 + erf(x) accurate for large negative x
    Ok(specfun::erfc(-w.erf_argument(s.ln())) / (2.0 * s * a))
}

/// Outcome of one moment probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentResidual {
    pub energy: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_error: f64,
}

/// `ln` of `e^{α(E-mε)²} e^{-2m²αε²}`.
fn ln_moment_target(w: &WeightFunction, energy: f64) -> f64 {
    let m = f64::from(w.m);
    let shifted = energy - m * w.epsilon();
    w.alpha() * shifted * shifted - 2.0 * m * m * w.params.alpha_eps2()
}

/// `∫ f(u) du` over the real line, split at `centre`, for a unimodal `f`.
fn integrate_line<F: Fn(f64) -> f64>(quad: &Quadrature, f: F, centre: f64) -> Result<f64> {
    let right = quad.semi_infinite(|x| f(centre + x))?;
    let left = quad.semi_infinite(|x| f(centre - x))?;
    Ok(right.value + left.value)
}

/// Checks `∫_0^∞ σ_m(s) 𝒩²_{ε,m}(s) s^{2E} ds = e^{α(E-mε)²} e^{-2m²αε²}`.
///
/// The integrand is built from the separately evaluated `σ_m` and `𝒩_{ε,m}`
/// closed forms, so the erf factors have to cancel numerically. Both sides
/// are scaled by the target before integrating.
pub fn moment_check(w: &WeightFunction, energy: f64, tol: f64) -> Result<MomentResidual> {
    if !(energy >= 0.0) || !energy.is_finite() {
        return Err(invalid(
            "E",
            format!("must be finite and ≥ 0, got {energy}"),
        ));
    }
    let ln_rhs = ln_moment_target(w, energy);
    let quad = Quadrature::new(tol)?;
    let integrand = |u: f64| {
        let ln_n = states::ln_normalization_excited(&w.params, u, w.m);
        (w.ln_sigma(u) + 2.0 * ln_n + u * (2.0 * energy + 1.0) - ln_rhs).exp()
    };
    let centre = w.alpha() * (energy - f64::from(w.m) * w.epsilon());
    let scaled = integrate_line(&quad, integrand, centre)?;
    let rhs = ln_rhs.exp();
    Ok(MomentResidual {
        energy,
        lhs: scaled * rhs,
        rhs,
        rel_error: (scaled - 1.0).abs(),
    })
}

/// Grid form of the resolution of identity.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolutionReport {
    /// `∫ ds σ_m |ψ_s(E_i)|²` per grid point; `0` below `mε`.
    pub diagonal: Vec<f64>,
    /// `max |diagonal_i - 1|` over the sector `E_i ≥ mε`.
    pub diagonal_defect: f64,
    /// Rows below `mε`, where the diagonal must vanish.
    pub rows_below_sector: usize,
    /// Same defect when `γ` is integrated over `[-Γ, Γ]` only.
    pub truncated_gamma_defect: f64,
}

/// Sine integral `Si(x) = ∫_0^x sin t / t dt`.
pub fn sine_integral(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.0);
    }
    let sinc = |t: f64| if t == 0.0 { 1.0 } else { t.sin() / t };
    let quad = Quadrature::new(1e-12)?.abs_tol(1e-15).max_segments(100_000);
    Ok(quad.integrate(sinc, 0.0, x)?.value)
}

/// Builds `∫dγ/2π ∫ds σ_m |s,γ,m⟩⟨s,γ,m|` on `grid`.
///
/// With `γ` over the whole line the kernel is `δ(E-E')` times the diagonal
/// below, so off-diagonal entries vanish identically. With `γ ∈ [-Γ, Γ]`
/// the delta becomes `sin(Γx)/(πx)`; one grid cell then retains the
/// fraction `(2/π) Si(ΓΔ/2)` of it, which approaches 1 like `1/Γ`.
pub fn resolution_check(
    w: &WeightFunction,
    grid: &EnergyGrid,
    gamma_cutoff: f64,
) -> Result<ResolutionReport> {
    if !(gamma_cutoff > 0.0) {
        return Err(invalid(
            "gamma_cutoff",
            format!("must be > 0, got {gamma_cutoff}"),
        ));
    }
    if (grid.epsilon() - w.epsilon()).abs() > 1e-12 * w.epsilon() {
        return Err(Error::GridMismatch);
    }
    let quad = Quadrature::new(1e-11)?;
    let sector_start = f64::from(w.m) * w.epsilon();
    let mut diagonal = Vec::with_capacity(grid.len());
    let mut defect: f64 = 0.0;
    let mut below = 0;
    for energy in grid.energies() {
        let shifted = energy - sector_start;
        let probe = StateLabel::from_ln_s(0.0, 0.0, w.m)?;
        let wf = Wavefunction::new(&w.params, &probe);
        if wf.ln_modulus(energy).is_none() {
            below += 1;
            diagonal.push(0.0);
            continue;
        }
        let density = |u: f64| -> f64 {
            let label = StateLabel::from_ln_s(u, 0.0, w.m).expect("finite ln s");
            let wf = Wavefunction::new(&w.params, &label);
            wf.ln_modulus(energy)
                .map_or(0.0, |ln| (w.ln_sigma(u) + 2.0 * ln + u).exp())
        };
        let centre = w.alpha() * (shifted.max(0.0) - sector_start);
        let value = integrate_line(&quad, density, centre)?;
        defect = defect.max((value - 1.0).abs());
        diagonal.push(value);
    }
    let cell = (2.0 / std::f64::consts::PI) * sine_integral(0.5 * gamma_cutoff * grid.delta_e())?;
    let truncated = diagonal
        .iter()
        .skip(below)
        .map(|d| (d * cell - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(ResolutionReport {
        diagonal,
        diagonal_defect: defect,
        rows_below_sector: below,
        truncated_gamma_defect: truncated,
    })
}

/// `J(s) = 𝒩²_{ε,m}(s) ∫_0^∞ e^{mαε(2E+mε)} s^{2E} e^{-αE²} E dE`, the mean
/// of `E - mε` in the state; `⟨H⟩ = ω(J + mε)`.
pub fn action_identity(p: &ModelParams, m: u32, s: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(invalid("s", format!("must be finite and > 0, got {s}")));
    }
    action_from_ln_s(p, m, s.ln())
}

/// [`action_identity`] as a function of `ln s`.
pub fn action_from_ln_s(p: &ModelParams, m: u32, ln_s: f64) -> Result<f64> {
    let q = 2.0 * ln_s + 2.0 * f64::from(m) * p.alpha() * p.epsilon();
    Ok(specfun::ln_gauss_tail_ratio(p.alpha(), (1, q), (0, q))?.exp())
}

/// `|ln s|` bound for the inversion bracket.
const LN_S_LIMIT: f64 = 1e4;

/// Solves `J(s) = target` for `s` by bisection on `ln s`.
///
/// The bracket is seeded at the saturated asymptote `ln s = αJ - mαε` and
/// widened geometrically. `J` ranges over `(0, ∞)`; targets outside the
/// reachable part for `|ln s| ≤ 10⁴` yield [`Error::OutOfRange`].
pub fn invert_action(p: &ModelParams, m: u32, target: f64, tol: f64) -> Result<f64> {
    let j = |u: f64| action_from_ln_s(p, m, u);
    let (j_lo, j_hi) = (j(-LN_S_LIMIT)?, j(LN_S_LIMIT)?);
    if !(target > j_lo && target < j_hi) {
        return Err(Error::OutOfRange {
            target,
            lo: j_lo,
            hi: j_hi,
        });
    }
    if !(tol > 0.0) {
        return Err(invalid("tol", format!("must be > 0, got {tol}")));
    }
    let seed = (p.alpha() * target - f64::from(m) * p.alpha() * p.epsilon())
        .clamp(-LN_S_LIMIT, LN_S_LIMIT);
    let mut step = 1.0;
    let (mut lo, mut hi) = (seed - step, seed + step);
    while lo > -LN_S_LIMIT && j(lo)? >= target {
        step *= 2.0;
        lo = (seed - step).max(-LN_S_LIMIT);
    }
    step = 1.0;
    while hi < LN_S_LIMIT && j(hi)? <= target {
        step *= 2.0;
        hi = (seed + step).min(LN_S_LIMIT);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let value = j(mid)?;
        if (value - target).abs() <= tol * target || hi - lo <= f64::EPSILON * mid.abs().max(1.0) {
            return Ok(mid.exp());
        }
        if value < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// Phase-sensitive fidelity `Re⟨φ|ψ⟩ / (‖φ‖‖ψ‖)` between the grid-evolved
/// state and the relabelled state `e^{-imεωt}|s, γ+ωt, m⟩`.
pub fn temporal_stability(
    p: &ModelParams,
    l: &StateLabel,
    t: f64,
    grid: EnergyGrid,
) -> Result<f64> {
    let evolved = GridState::sample(p, l, grid)?.evolve(p.omega(), t);
    let (label, phase) = states::evolve(p, l, t);
    let relabelled = GridState::sample(p, &label, grid)?.scale(phase);
    let inner: Complex64 = relabelled.inner(&evolved)?;
    Ok(inner.re / (evolved.norm() * relabelled.norm()))
}

/// `1 - |⟨l|l'⟩|` for normalised states; small when `l'` is close to `l`.
pub fn labelling_continuity(
    p: &ModelParams,
    l: &StateLabel,
    nearby: &StateLabel,
    tol: f64,
) -> Result<f64> {
    Ok(1.0 - states::overlap(p, l, nearby, tol)?.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weight(m: u32) -> WeightFunction {
        WeightFunction::new(10.0, 0.07, m).unwrap()
    }

    #[test]
    fn sigma_reference_and_errors() {
        assert!((sigma_weight(&weight(0), 1.0).unwrap() - 0.05).abs() < 1e-17);
        assert!(sigma_weight(&weight(0), 0.0).is_err());
        assert!(sigma_weight(&weight(0), -2.0).is_err());
    }

    #[test]
    fn sigma_times_norm_is_h() {
        for m in [0, 1, 3, 12] {
            let w = weight(m);
            for ln_s in [-5.0, -0.7, 0.0, 2.0, 9.0] {
                let ln_n = states::ln_normalization_excited(&w.params, ln_s, m);
                let assembled = w.ln_sigma(ln_s) + 2.0 * ln_n;
                assert!(
                    (assembled - w.ln_h(ln_s)).abs() < 1e-12,
                    "m={m} ln s={ln_s}"
                );
            }
        }
    }

    #[test]
    fn moment_examples() {
        let r = moment_check(&weight(0), 0.0, 1e-10).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-9 && r.rhs == 1.0);
        let r = moment_check(&weight(0), 1.0, 1e-10).unwrap();
        assert!((r.rhs - 10f64.exp()).abs() < 1e-9 * r.rhs);
        assert!(r.rel_error < 1e-8, "{r:?}");
        let r = moment_check(&weight(2), 0.14, 1e-10).unwrap();
        assert!((r.rhs - (-2.0 * 4.0 * 10.0 * 0.0049f64).exp()).abs() < 1e-15);
        assert!(r.rel_error < 1e-8, "{r:?}");
    }

    #[test]
    fn action_reference() {
        let p = ModelParams::unit_omega(10.0, 0.07).unwrap();
        let j = action_identity(&p, 0, 1.0).unwrap();
        assert!((j - 1.0 / (10.0 * std::f64::consts::PI).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn action_saturated_regime() {
        let p = ModelParams::unit_omega(10.0, 0.07).unwrap();
        let ln_s = 4.0 * 10f64.sqrt();
        for m in [0, 3] {
            let j = action_from_ln_s(&p, m, ln_s).unwrap();
            let mean = (ln_s + f64::from(m) * 0.7) / 10.0;
            assert!((j / mean - 1.0).abs() < 1e-6, "m={m}");
        }
    }

    #[test]
    fn inversion_round_trip_and_range() {
        let p = ModelParams::unit_omega(10.0, 0.07).unwrap();
        for s in [1e-3, 0.5, 1.0, 7.0, 1e4] {
            let j = action_identity(&p, 2, s).unwrap();
            let back = invert_action(&p, 2, j, 1e-13).unwrap();
            assert!((back / s - 1.0).abs() < 1e-8, "s={s} back={back}");
        }
        assert!(matches!(
            invert_action(&p, 0, -0.1, 1e-10),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            invert_action(&p, 0, 0.0, 1e-10),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn sine_integral_values() {
        assert!((sine_integral(1.0).unwrap() - 0.946_083_070_367_183).abs() < 1e-13);
        assert!((sine_integral(50.0).unwrap() - 1.551_617_072_485_974).abs() < 1e-12);
    }
}
