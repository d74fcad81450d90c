//! Weight function, moment identity, resolution of identity and action variable.

use gk_coherent::axioms::{self, WeightFunction};
use gk_coherent::grid_ops::EnergyGrid;
use gk_coherent::states::ModelParams;

fn main() -> gk_coherent::Result<()> {
    let p = ModelParams::unit_omega(10.0, 0.07)?;
    let m = 2;
    let w = WeightFunction::from_params(&p, m);

    for s in [1e-4, 1e-2, 1.0, 1e2] {
        println!("σ_{m}({s:e}) = {:.6e}", axioms::sigma_weight(&w, s)?);
    }

    println!();
    for e in [0.0, 0.5, 2.0] {
        let r = axioms::moment_check(&w, e, 1e-11)?;
        println!(
            "moment E = {e}: lhs {:.10e}, rhs {:.10e}, rel {:.1e}",
            r.lhs, r.rhs, r.rel_error
        );
    }

    let grid = EnergyGrid::covering(p.epsilon(), 1, 2.0)?;
    for cutoff in [1e2, 1e3, 1e4] {
        let r = axioms::resolution_check(&w, &grid, cutoff)?;
        println!(
            "Γ = {cutoff:e}: diagonal defect {:.2e}, truncated-γ defect {:.2e}, {} rows below mε",
            r.diagonal_defect, r.truncated_gamma_defect, r.rows_below_sector
        );
    }

    println!();
    for s in [0.1, 1.0, 10.0] {
        let j = axioms::action_identity(&p, m, s)?;
        let back = axioms::invert_action(&p, m, j, 1e-14)?;
        println!("J({s}) = {j:.12e}, inverted s = {back:.12e}");
    }
    Ok(())
}
