//! Closed forms against the independent quadrature oracle.

use gk_coherent::axioms::{self, WeightFunction};
use gk_coherent::grid_ops::EnergyGrid;
use gk_coherent::observables::{self, EvalMode};
use gk_coherent::states::{self, ModelParams, StateLabel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn exact_moments_match_oracle_on_random_labels() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..12 {
        let p =
            ModelParams::unit_omega(rng.gen_range(1.0..20.0), rng.gen_range(0.03..0.2)).unwrap();
        let l = StateLabel::from_ln_s(
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(0..5),
        )
        .unwrap();
        let exact = observables::moments(&p, &l, EvalMode::Exact).unwrap();
        let oracle = observables::oracle_moments(&p, &l, 1e-12).unwrap();
        let worst = [
            rel(exact.ad_a, oracle.ad_a),
            rel(exact.a_ad, oracle.a_ad),
            rel(exact.n2, oracle.n2),
            rel(exact.ad2_a2, oracle.ad2_a2),
            rel(exact.a2_ad2, oracle.a2_ad2),
            (exact.a - oracle.a).norm() / exact.a.norm(),
            (exact.a2 - oracle.a2).norm() / exact.a2.norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        assert!(worst < 1e-8, "{p:?} {l:?}: {worst:e}");
    }
}

#[test]
fn normalized_states_have_unit_overlap() {
    let p = ModelParams::unit_omega(6.0, 0.1).unwrap();
    for m in [0, 2, 5] {
        let l = StateLabel::new(0.8, 1.1, m).unwrap();
        let o = states::overlap(&p, &l, &l, 1e-12).unwrap();
        assert!(
            (o.re - 1.0).abs() < 1e-10 && o.im.abs() < 1e-10,
            "m={m}: {o}"
        );
    }
}

#[test]
fn moment_identity_over_energies() {
    for (alpha, eps, m) in [(10.0, 0.07, 0), (3.0, 0.2, 4), (25.0, 0.02, 9)] {
        let w = WeightFunction::new(alpha, eps, m).unwrap();
        for i in 0..20 {
            let e = 6.0 * f64::from(i) / 19.0;
            let r = axioms::moment_check(&w, e, 1e-11).unwrap();
            assert!(
                r.rel_error < 1e-8,
                "α={alpha} ε={eps} m={m} E={e}: {:e}",
                r.rel_error
            );
        }
    }
}

#[test]
fn resolution_diagonal_is_one_in_sector() {
    let w = WeightFunction::new(10.0, 0.07, 3).unwrap();
    let grid = EnergyGrid::covering(0.07, 1, 3.0).unwrap();
    let r = axioms::resolution_check(&w, &grid, 1e4).unwrap();
    assert!(r.diagonal_defect < 1e-7, "{:e}", r.diagonal_defect);
    assert!(r.rows_below_sector > 0);
    assert!(r
        .diagonal
        .iter()
        .take(r.rows_below_sector)
        .all(|&d| d == 0.0));
}

#[test]
fn truncated_gamma_defect_inside_inverse_cutoff_envelope() {
    // |Si(x) - π/2| ≤ 1/x, so the cell defect is bounded by 2/(πx) plus the diagonal defect
    let w = WeightFunction::new(10.0, 0.07, 0).unwrap();
    let grid = EnergyGrid::covering(0.07, 1, 1.0).unwrap();
    for cutoff in [1e2, 1e3, 3e3, 1e4, 1e5] {
        let r = axioms::resolution_check(&w, &grid, cutoff).unwrap();
        let x = 0.5 * cutoff * grid.delta_e();
        let envelope = 2.0 / (std::f64::consts::PI * x);
        assert!(
            r.truncated_gamma_defect <= envelope + 2.0 * r.diagonal_defect,
            "Γ={cutoff}: {:e} > {envelope:e}",
            r.truncated_gamma_defect
        );
    }
}
