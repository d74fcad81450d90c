//! Quadrature and amplitude-squared dispersions against their uncertainty bounds.

use gk_coherent::observables::{self, EvalMode};
use gk_coherent::states::{ModelParams, StateLabel};

fn main() -> gk_coherent::Result<()> {
    let p = ModelParams::unit_omega(10.0, 0.07)?;
    for mode in [EvalMode::Formal, EvalMode::Exact] {
        println!("{mode:?}");
        for (s, m) in [(0.3, 0), (1.0, 0), (1.0, 4), (8.0, 2)] {
            let l = StateLabel::new(s, 0.7, m)?;
            let q = observables::quadrature_stats(&p, &l, mode)?;
            let a = observables::amp_squared_stats(&p, &l, mode)?;
            println!(
                "  s = {s:<4} m = {m}: (ΔX)² = {:.6e}, |[X,Y]|/2 = {:.6e}, amp² residual {:+.2e}",
                q.dx_sq,
                q.comm_mag / 2.0,
                a.relative_residual()
            );
        }
    }
    Ok(())
}
