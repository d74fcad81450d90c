//! Ladder operators as banded kernels on an energy grid.

use gk_coherent::grid_ops::{self, CommutatorPair, EnergyGrid};
use gk_coherent::states::{ModelParams, StateLabel};

fn main() -> gk_coherent::Result<()> {
    let p = ModelParams::unit_omega(10.0, 0.07)?;
    let l = StateLabel::coherent(1.3, 0.2)?;

    let grid = EnergyGrid::for_state(&p, &l)?;
    let eig = grid_ops::eigenvalue_residual(&p, &l, grid)?;
    println!("a_ε ψ = λ ψ with λ = {:.12}", eig.eigenvalue);
    println!(
        "relative residual on {} grid points: {:.3e}",
        grid.len(),
        eig.residual
    );

    // a cutoff too close to the bulk of the state is flagged
    let short = EnergyGrid::covering(p.epsilon(), 1, 0.3)?;
    if let Some(w) = grid_ops::eigenvalue_residual(&p, &l, short)?.warning {
        println!(
            "short grid: need E_max ≥ {:.3}, tail mass {:.3e}",
            w.required_e_max, w.tail_mass
        );
    }

    let grid = EnergyGrid::covering(p.epsilon(), 4, 4.0)?;
    for pair in [
        CommutatorPair::AnnihilationCreation,
        CommutatorPair::NumberAnnihilation,
        CommutatorPair::NumberCreation,
    ] {
        let d = grid_ops::commutator_defect(&p, grid, pair)?;
        println!(
            "{pair:?}: interior {:.3e}, boundary mismatch {:.3e}",
            d.interior_max_relative(),
            d.boundary_max_mismatch(&p)
        );
    }

    println!("\nsmall α: scaled commutators approach the canonical algebra");
    for row in grid_ops::limit_check(grid, p.epsilon(), &[1e-1, 1e-2, 1e-3, 1e-4])? {
        println!(
            "α = {:.0e}: {:.3e} {:.3e} {:.3e}",
            row.alpha, row.identity_distance, row.annihilation_distance, row.creation_distance
        );
    }
    Ok(())
}
