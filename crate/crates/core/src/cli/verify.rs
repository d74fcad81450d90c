use std::fmt;

use clap::ValueEnum;

use super::Settings;
use crate::axioms::{self, WeightFunction};
use crate::error::Result;
use crate::grid_ops::{self, CommutatorPair, EnergyGrid};
use crate::observables::{self, formal, EvalMode, Observable};
use crate::specfun;
use crate::states::{self, ModelParams, StateLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Axioms,
    Algebra,
    ClosedForms,
    All,
}

/// One reported check: `measured` must not exceed `tol` unless stated.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tol: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `measured ≤ tol`.
    fn at_most(name: impl Into<String>, measured: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            tol,
            passed: measured <= tol,
        }
    }

    /// Passes when `measured > tol`.
    fn above(name: impl Into<String>, measured: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            tol,
            passed: measured > tol,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {} {:.6e} {:.1e}",
            self.name, self.measured, self.tol
        )
    }
}

/// Tolerances used when no `--tol` is given.
const GRID_TOL: f64 = 1e-12;
const ALGEBRA_TOL: f64 = 1e-12;
const MOMENT_TOL: f64 = 1e-8;
const RESOLUTION_TOL: f64 = 1e-7;
const NORM_ORACLE_TOL: f64 = 1e-9;
const EXACT_ORACLE_TOL: f64 = 1e-8;
const SATURATION_TOL: f64 = 1e-6;

/// Runs `suite` with parameters from `settings` (defaults `α = 10`,
/// `ε = 0.07`, `s = 1`, `γ = 0`, `m = 0`).
pub fn run_suite(suite: Suite, settings: &Settings) -> Result<Vec<Check>> {
    let p = settings.params(10.0, 0.07)?;
    let label = settings.label(0)?;
    let oracle_tol = settings.tol;
    Ok(match suite {
        Suite::Algebra => algebra(&p, &label)?,
        Suite::Axioms => axioms_suite(&p, label.m(), oracle_tol)?,
        Suite::ClosedForms => closed_forms(&p, &label, oracle_tol)?,
        Suite::All => {
            let mut all = algebra(&p, &label)?;
            all.extend(axioms_suite(&p, label.m(), oracle_tol)?);
            all.extend(closed_forms(&p, &label, oracle_tol)?);
            all
        }
    })
}

fn algebra(p: &ModelParams, l: &StateLabel) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let coherent = l.with_m(0);
    let grid = EnergyGrid::for_state(p, &coherent)?;
    let eig = grid_ops::eigenvalue_residual(p, &coherent, grid)?;
    out.push(Check::at_most(
        "eigenvalue_residual",
        eig.residual,
        GRID_TOL,
    ));

    let grid = EnergyGrid::covering(p.epsilon(), 4, 4.0_f64.max(8.0 * p.epsilon()))?;
    for (name, pair) in [
        ("commutator_a_ad", CommutatorPair::AnnihilationCreation),
        ("commutator_n_a", CommutatorPair::NumberAnnihilation),
        ("commutator_n_ad", CommutatorPair::NumberCreation),
    ] {
        let d = grid_ops::commutator_defect(p, grid, pair)?;
        out.push(Check::at_most(
            format!("{name}_interior"),
            d.interior_max_relative(),
            ALGEBRA_TOL,
        ));
        out.push(Check::at_most(
            format!("{name}_boundary"),
            d.boundary_max_mismatch(p),
            ALGEBRA_TOL,
        ));
    }

    let rows = grid_ops::limit_check(grid, p.epsilon(), &[1e-2, 1e-3, 1e-4])?;
    let worst = rows
        .iter()
        .filter_map(|r| r.ratios)
        .flatten()
        .map(|ratio| (ratio / 0.1 - 1.0).abs())
        .fold(0.0, f64::max);
    out.push(Check::at_most("small_alpha_linear_ratio", worst, 0.2));
    Ok(out)
}

fn axioms_suite(p: &ModelParams, m: u32, oracle_tol: Option<f64>) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let w = WeightFunction::from_params(p, m);

    let mut min_sigma = f64::INFINITY;
    for i in 0..1000 {
        let s = 10f64.powf(-6.0 + 12.0 * f64::from(i) / 999.0);
        min_sigma = min_sigma.min(axioms::sigma_weight(&w, s)?);
    }
    out.push(Check::above("sigma_positive", min_sigma, 0.0));

    let tol = oracle_tol.unwrap_or(MOMENT_TOL);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let energy = 4.0 * f64::from(i) / 49.0;
        worst = worst.max(axioms::moment_check(&w, energy, 1e-11)?.rel_error);
    }
    out.push(Check::at_most("moment_identity", worst, tol));

    let grid = EnergyGrid::covering(p.epsilon(), 1, 4.0)?;
    let res = axioms::resolution_check(&w, &grid, 1e4)?;
    out.push(Check::at_most(
        "resolution_diagonal",
        res.diagonal_defect,
        RESOLUTION_TOL,
    ));

    let mut trip: f64 = 0.0;
    let mut previous = 0.0;
    let mut monotone = true;
    for i in 0..60 {
        let s = 10f64.powf(-3.0 + 9.0 * f64::from(i) / 59.0);
        let j = axioms::action_identity(p, m, s)?;
        monotone &= j > previous;
        previous = j;
        let back = axioms::invert_action(p, m, j, 1e-14)?;
        trip = trip.max((back / s - 1.0).abs());
    }
    out.push(Check::at_most("action_round_trip", trip, MOMENT_TOL));
    out.push(Check::at_most(
        "action_monotone",
        if monotone { 0.0 } else { 1.0 },
        0.0,
    ));

    let label = StateLabel::new(1.5, 0.3, m)?;
    let grid = EnergyGrid::for_state(p, &label)?;
    let fidelity = axioms::temporal_stability(p, &label, 2.7, grid)?;
    out.push(Check::at_most("temporal_stability", 1.0 - fidelity, 1e-10));

    let nearby = StateLabel::new(1.5 * (1.0 + 1e-4), 0.3 + 1e-4, m)?;
    let gap = axioms::labelling_continuity(p, &label, &nearby, 1e-12)?;
    out.push(Check::at_most("labelling_continuity", gap, 1e-6));
    Ok(out)
}

fn relative(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

fn closed_forms(p: &ModelParams, l: &StateLabel, oracle_tol: Option<f64>) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let m = l.m();
    let formal_mom = observables::moments(p, l, EvalMode::Formal)?;

    let q_closed = observables::mandel_q(p, l, EvalMode::Formal)?;
    let q_assembled = observables::mandel_from_moments(formal_mom.ad_a, formal_mom.n2);
    // Q + 1 carries the scale of the moments involved
    out.push(Check::at_most(
        "mandel_dual_path",
        (q_closed - q_assembled).abs() / (1.0 + q_closed.abs()),
        ALGEBRA_TOL,
    ));
    out.push(Check::at_most(
        "g2_formal_is_one",
        (observables::g2(p, l, EvalMode::Formal)? - 1.0).abs(),
        ALGEBRA_TOL,
    ));

    let quad = observables::quadrature_stats(p, l, EvalMode::Formal)?;
    let amp = observables::amp_squared_stats(p, l, EvalMode::Formal)?;
    out.push(Check::at_most(
        "intelligent_quadrature",
        quad.relative_residual().abs(),
        ALGEBRA_TOL,
    ));
    out.push(Check::at_most(
        "intelligent_amp_squared",
        amp.relative_residual().abs(),
        ALGEBRA_TOL,
    ));

    let mut gamma_spread: f64 = 0.0;
    for gamma in [0.0, 1.0, -3.0] {
        let lg = l.with_gamma(gamma);
        let q = observables::quadrature_stats(p, &lg, EvalMode::Formal)?;
        let a = observables::amp_squared_stats(p, &lg, EvalMode::Formal)?;
        gamma_spread = gamma_spread
            .max(relative(q.dx_sq, quad.dx_sq))
            .max(relative(q.dy_sq, quad.dy_sq))
            .max(relative(a.dx_sq, amp.dx_sq))
            .max(relative(a.dy_sq, amp.dy_sq));
    }
    out.push(Check::at_most(
        "gamma_invariance",
        gamma_spread,
        ALGEBRA_TOL,
    ));

    let wf_mass = specfun::quad_oracle(
        |x| states::Wavefunction::new(p, l).density(f64::from(m) * p.epsilon() + x),
        1e-12,
    )?;
    out.push(Check::at_most(
        "normalization_oracle",
        (wf_mass - 1.0).abs(),
        oracle_tol.unwrap_or(NORM_ORACLE_TOL),
    ));
    let ln_n0 = states::ln_normalization_coherent(p, l.ln_s())?;
    let ln_n0_erf = states::ln_normalization_excited(p, l.ln_s(), 0);
    out.push(Check::at_most(
        "normalization_m0_reduction",
        (ln_n0.exp() / ln_n0_erf.exp() - 1.0).abs(),
        ALGEBRA_TOL,
    ));

    let exact = observables::moments(p, l, EvalMode::Exact)?;
    let oracle = observables::oracle_moments(p, l, 1e-12)?;
    let worst = [
        relative(exact.ad_a, oracle.ad_a),
        relative(exact.a_ad, oracle.a_ad),
        relative(exact.n2, oracle.n2),
        relative(exact.ad2_a2, oracle.ad2_a2),
        relative(exact.a2_ad2, oracle.a2_ad2),
        (exact.a - oracle.a).norm() / exact.a.norm(),
        (exact.a2 - oracle.a2).norm() / exact.a2.norm(),
        (exact.a4 - oracle.a4).norm() / exact.a4.norm(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    out.push(Check::at_most(
        "exact_moments_oracle",
        worst,
        oracle_tol.unwrap_or(EXACT_ORACLE_TOL),
    ));

    // erf arguments ≥ 4 for every moment
    let saturated = StateLabel::from_ln_s(
        4.0 * p.alpha().sqrt() - f64::from(m) * p.alpha() * p.epsilon(),
        l.gamma(),
        m,
    )?;
    let mut sat: f64 = 0.0;
    for obs in [Observable::Number, Observable::NumberSq, Observable::G2] {
        sat = sat.max((observables::report(p, &saturated, obs)?.correction_ratio - 1.0).abs());
    }
    out.push(Check::at_most(
        "correction_ratio_saturated",
        sat,
        SATURATION_TOL,
    ));

    let at_one = StateLabel::new(1.0, l.gamma(), m)?;
    for row in observables::gap_audit(p, &at_one)? {
        let name = match row.observable {
            Observable::Number => "gap_number",
            Observable::NumberSq => "gap_number_sq",
            _ => "gap_g2",
        };
        out.push(Check::at_most(
            format!(
                "{name}[ratio={:.12e},predicted={:.12e}]",
                row.measured_ratio, row.predicted_ratio
            ),
            row.agreement(),
            MOMENT_TOL,
        ));
    }

    let crossing = formal::mandel_zero_crossing(p, m);
    out.push(Check::at_most(
        "mandel_zero_crossing",
        formal::mandel_q(p, crossing, m).abs(),
        1e-10,
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_format() {
        let c = Check::at_most("x", 1e-13, 1e-12);
        assert_eq!(c.to_string(), "PASS x 1.000000e-13 1.0e-12");
        assert!(!Check::at_most("y", 2.0, 1.0).passed);
        assert!(Check::above("z", 1.0, 0.0).passed);
    }
}
