//! Gaussian tail moments in closed form next to the quadrature oracle.

use gk_coherent::specfun::{self, gauss_tail_moment, quad_oracle, GaussTailParams};

fn main() -> gk_coherent::Result<()> {
    println!("{:>6} {:>24} {:>24}", "x", "erf(x)", "erfc(x)");
    for x in [-3.0, -0.5, 0.0, 1.0, 5.0, 27.0] {
        println!(
            "{x:>6} {:>24.16e} {:>24.16e}",
            specfun::erf(x),
            specfun::erfc(x)
        );
    }

    println!("\nG_k(p, q) = ∫_0^∞ E^k e^(-pE² + qE) dE");
    println!(
        "{:>5} {:>7} {:>2} {:>24} {:>24}",
        "p", "q", "k", "closed form", "quadrature"
    );
    for (p, q) in [(1.0, 0.0), (0.5, -4.0), (2.0, 10.0)] {
        for k in 0..3u8 {
            let closed = gauss_tail_moment(GaussTailParams::new(p, q, k)?)?.value()?;
            let quad = quad_oracle(|e| e.powi(i32::from(k)) * (-p * e * e + q * e).exp(), 1e-12)?;
            println!("{p:>5} {q:>7} {k:>2} {closed:>24.16e} {quad:>24.16e}");
        }
    }

    // far beyond the f64 range: only the logarithm is meaningful
    let huge = gauss_tail_moment(GaussTailParams::new(0.01, 60.0, 2)?)?;
    println!(
        "\nln G_2(0.01, 60) = {:.12} (log domain required: {})",
        huge.ln(),
        huge.requires_log_domain()
    );
    Ok(())
}
