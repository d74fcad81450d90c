//! Mandel parameter and g²(0), formal against exact.

use gk_coherent::observables::{self, formal, Observable};
use gk_coherent::states::{ModelParams, StateLabel};

fn main() -> gk_coherent::Result<()> {
    let p = ModelParams::unit_omega(10.0, 0.07)?;

    for m in [0, 3, 12] {
        let s0 = formal::mandel_zero_crossing(&p, m);
        println!("m = {m:>2}: Q < 0 for s < {s0:.6e}");
    }

    println!(
        "\n{:>8} {:>3} {:>14} {:>14} {:>14}",
        "s", "m", "Q formal", "Q exact", "ratio"
    );
    for m in [0, 3] {
        for s in [0.05, 0.5, 1.0, 5.0, 20.0] {
            let r = observables::report(&p, &StateLabel::new(s, 0.0, m)?, Observable::Mandel)?;
            println!(
                "{s:>8} {m:>3} {:>14.6e} {:>14.6e} {:>14.6e}",
                r.formal_value, r.exact_value, r.correction_ratio
            );
        }
    }

    // the formal g²(0) is exactly one; truncation moves it
    let l = StateLabel::new(0.2, 0.0, 0)?;
    let r = observables::report(&p, &l, Observable::G2)?;
    println!(
        "\ng²(0) at s = 0.2: formal {:.12}, exact {:.12}",
        r.formal_value, r.exact_value
    );

    println!("\nmeasured vs predicted correction ratios at s = 1:");
    for row in observables::gap_audit(&p, &StateLabel::new(1.0, 0.0, 0)?)? {
        println!(
            "{:?}: {:.12e} vs {:.12e} (agreement {:.1e})",
            row.observable,
            row.measured_ratio,
            row.predicted_ratio,
            row.agreement()
        );
    }
    Ok(())
}
