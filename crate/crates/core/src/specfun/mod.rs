//! Error functions and Gaussian tail moments.
//!
//! Every closed form in this crate reduces to
//!
//! ```text
//! G_k(p, q) = ∫_0^∞ E^k exp(-p E² + q E) dE,   k ∈ {0, 1, 2}
//! ```
//!
//! which is evaluated here through the substitution `t = √p E`,
//! `x = -q / (2√p)`:
//!
//! ```text
//! G_k(p, q) = p^{-(k+1)/2} I_k(x),   I_k(x) = ∫_0^∞ t^k exp(-t² - 2 x t) dt
//! I_0 = (√π/2) e^{x²} erfc(x)
//! I_1 = 1/2 - x I_0
//! I_2 = I_0 / 2 - x I_1
//! ```
//!
//! For `x ≥ 3` the forward recursion cancels, so the ratios `I_1/I_0` and
//! `I_2/I_0` are read off the tails of the erfc continued fraction instead.
//! All results are carried as logarithms; [`TailMoment::value`] converts
//! back when the number fits in an `f64`.

mod quad;

pub use quad::{quad_oracle, quad_oracle_polar, QuadResult, Quadrature};

use crate::error::{invalid, Error, Result};

/// `ln(f64::MAX)`; anything above this overflows on exponentiation.
pub const LN_MAX: f64 = 709.782_712_893_384;

/// Exponent `q²/(4p)` above which a tail moment is considered log-domain only.
pub const LOG_DOMAIN_THRESHOLD: f64 = 700.0;

const LN_SQRT_PI: f64 = 0.572_364_942_924_700_1;
const LN_2: f64 = std::f64::consts::LN_2;

/// Below this the erfc continued fraction is replaced by `libm::erfc`.
const CF_SWITCH: f64 = 3.0;
/// Backward-recurrence depth; 30 terms already reach 1e-16 at `x = 3`.
const CF_DEPTH: usize = 60;

/// Error function. Evaluated on `|x|` so that `erf(-x) == -erf(x)` bit for bit.
pub fn erf(x: f64) -> f64 {
    let v = libm::erf(x.abs());
    if x.is_sign_negative() {
        -v
    } else {
        v
    }
}

/// Complementary error function `1 - erf(x)`, accurate in the far tail.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Tails `T_1, T_2` of `√π e^{x²} erfc(x) = 1/(x + T_1)`, `T_n = (n/2)/(x + T_{n+1})`.
fn erfc_cf_tails(x: f64) -> (f64, f64) {
    let mut t = 0.0;
    for n in (2..=CF_DEPTH).rev() {
        t = (n as f64 / 2.0) / (x + t);
    }
    let t2 = t;
    let t1 = 0.5 / (x + t2);
    (t1, t2)
}

/// Scaled complementary error function `e^{x²} erfc(x)`.
///
/// Overflows to `+∞` for large negative `x`; use [`ln_erfc`] there.
pub fn erfcx(x: f64) -> f64 {
    if x >= CF_SWITCH {
        let (t1, _) = erfc_cf_tails(x);
        1.0 / ((x + t1) * std::f64::consts::PI.sqrt())
    } else {
        (x * x).exp() * libm::erfc(x)
    }
}

/// `ln erfc(x)` without underflow for large positive `x`.
pub fn ln_erfc(x: f64) -> f64 {
    if x >= CF_SWITCH {
        let (t1, _) = erfc_cf_tails(x);
        -x * x - (x + t1).ln() - LN_SQRT_PI
    } else {
        libm::erfc(x).ln()
    }
}

/// `ln(1 + erf(z))`, i.e. `ln erfc(-z)`.
pub fn ln_one_plus_erf(z: f64) -> f64 {
    ln_erfc(-z)
}

/// Parameters of `G_k(p, q) = ∫_0^∞ E^k e^{-pE² + qE} dE`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussTailParams {
    p: f64,
    q: f64,
    k: u8,
}

impl GaussTailParams {
    pub fn new(p: f64, q: f64, k: u8) -> Result<Self> {
        if !(p > 0.0) || !p.is_finite() {
            return Err(invalid("p", format!("must be finite and > 0, got {p}")));
        }
        if !q.is_finite() {
            return Err(invalid("q", format!("must be finite, got {q}")));
        }
        if k > 2 {
            return Err(invalid(
                "k",
                format!("moment order must be 0, 1 or 2, got {k}"),
            ));
        }
        Ok(Self { p, q, k })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn k(&self) -> u8 {
        self.k
    }
}

/// A positive tail moment held as a logarithm.
///
/// `ln G = square + rest`, where `square` is the `x²` term of the
/// `e^{x²} erfc(x)` factor when that branch is used (zero otherwise). Keeping
/// it separate lets [`TailMoment::ln_ratio`] difference two large squares as
/// a product instead of subtracting them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailMoment {
    x: f64,
    has_square: bool,
    rest: f64,
    requires_log: bool,
}

impl TailMoment {
    /// Natural logarithm of the moment.
    pub fn ln(&self) -> f64 {
        self.square() + self.rest
    }

    /// Always `+1`: the integrand is positive.
    pub fn sign(&self) -> f64 {
        1.0
    }

    /// Whether `q²/(4p)` exceeds [`LOG_DOMAIN_THRESHOLD`].
    pub fn requires_log_domain(&self) -> bool {
        self.requires_log
    }

    /// Linear-domain value, or [`Error::Overflow`] if it does not fit.
    pub fn value(&self) -> Result<f64> {
        let ln = self.ln();
        if ln > LN_MAX {
            Err(Error::Overflow { ln_value: ln })
        } else {
            Ok(ln.exp())
        }
    }

    /// `ln(self / other)`, both moments sharing the same `p`.
    pub fn ln_ratio(&self, other: &TailMoment) -> f64 {
        let squares = if self.has_square && other.has_square {
            (self.x - other.x) * (self.x + other.x)
        } else {
            self.square() - other.square()
        };
        squares + (self.rest - other.rest)
    }

    fn square(&self) -> f64 {
        if self.has_square {
            self.x * self.x
        } else {
            0.0
        }
    }
}

/// `G_k(p, q)` in closed form.
///
/// Equivalent to `G_0 = ½√(π/p) e^{q²/4p} [1 + erf(q/2√p)]`,
/// `G_1 = 1/(2p) + q/(2p) G_0`, `G_2 = G_0/(2p) + q/(2p) G_1`, but computed
/// so that neither overflow nor cancellation occurs for any finite `q`.
pub fn gauss_tail_moment(g: GaussTailParams) -> Result<TailMoment> {
    let GaussTailParams { p, q, k } = g;
    let sqrt_p = p.sqrt();
    let x = -q / (2.0 * sqrt_p);

    // ln I_0 split as square + rest, plus the ratios r_k = I_k / I_0.
    let (has_square, ln_i0_rest, r1, r2) = if x >= CF_SWITCH {
        let (t1, t2) = erfc_cf_tails(x);
        // I_0 = 1 / (2 (x + T_1))
        let ln_i0 = -LN_2 - (x + t1).ln();
        (false, ln_i0, t1, t1 * t2)
    } else {
        let ln_erfc_x = libm::erfc(x).ln();
        let ln_i0_rest = LN_SQRT_PI - LN_2 + ln_erfc_x;
        // 1/(2 I_0) = exp(-ln(2 I_0)); underflows harmlessly for x ≪ 0.
        let inv_two_i0 = (-(x * x + LN_SQRT_PI + ln_erfc_x)).exp();
        let r1 = inv_two_i0 - x;
        let r2 = 0.5 - x * r1;
        (true, ln_i0_rest, r1, r2)
    };

    let ln_rk = match k {
        0 => 0.0,
        1 => r1.ln(),
        _ => r2.ln(),
    };
    let rest = ln_i0_rest + ln_rk - 0.5 * f64::from(k + 1) * p.ln();
    if !rest.is_finite() {
        return Err(invalid(
            "q",
            format!("tail moment not finite for p={p}, q={q}"),
        ));
    }
    Ok(TailMoment {
        x,
        has_square,
        rest,
        requires_log: q * q / (4.0 * p) > LOG_DOMAIN_THRESHOLD,
    })
}

/// Convenience: `G_k(p, q)` as an `f64`.
pub fn gauss_tail_value(p: f64, q: f64, k: u8) -> Result<f64> {
    gauss_tail_moment(GaussTailParams::new(p, q, k)?)?.value()
}

/// `ln G_k(p, q)`.
pub fn ln_gauss_tail(p: f64, q: f64, k: u8) -> Result<f64> {
    Ok(gauss_tail_moment(GaussTailParams::new(p, q, k)?)?.ln())
}

/// `ln [G_{k1}(p, q1) / G_{k0}(p, q0)]`, well conditioned for large `|q|`.
pub fn ln_gauss_tail_ratio(p: f64, (k1, q1): (u8, f64), (k0, q0): (u8, f64)) -> Result<f64> {
    let num = gauss_tail_moment(GaussTailParams::new(p, q1, k1)?)?;
    let den = gauss_tail_moment(GaussTailParams::new(p, q0, k0)?)?;
    Ok(num.ln_ratio(&den))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `erf(x) = (2/√π) e^{-x²} Σ 2ⁿ x^{2n+1} / (2n+1)!!`; all terms share a
    /// sign, so there is no cancellation.
    fn erf_series(x: f64) -> f64 {
        let mut term = x;
        let mut sum = x;
        let mut n = 0.0;
        while term.abs() > 1e-20 * sum.abs() {
            n += 1.0;
            term *= 2.0 * x * x / (2.0 * n + 1.0);
            sum += term;
        }
        sum * 2.0 / std::f64::consts::PI.sqrt() * (-x * x).exp()
    }

    #[test]
    fn erf_reference_values() {
        assert_eq!(erf(0.0), 0.0);
        assert!((erf(1.0) - 0.842_700_792_949_714_9).abs() <= 1e-15);
        for x in [6.0, 7.5, 12.0, 40.0] {
            assert!((erf(x) - 1.0).abs() <= 1e-15);
        }
    }

    #[test]
    fn erf_matches_taylor_oracle() {
        for i in 0..=60 {
            let x = -3.0 + 0.1 * i as f64;
            let d = (erf(x) - erf_series(x)).abs();
            assert!(d <= 1e-15, "x={x} diff={d}");
        }
    }

    #[test]
    fn erf_is_exactly_odd() {
        for x in [1e-300, 0.3, 1.7, 2.9, 5.5] {
            assert_eq!(erf(-x), -erf(x));
        }
    }

    #[test]
    fn ln_erfc_continuous_at_switch() {
        let below = ln_erfc(CF_SWITCH - 1e-12);
        let above = ln_erfc(CF_SWITCH);
        assert!((below - above).abs() < 1e-10);
        // far tail stays finite where erfc itself underflows
        assert!(ln_erfc(40.0).is_finite());
        assert!(
            (ln_erfc(40.0) - (-1600.0 - (40.0 * std::f64::consts::PI.sqrt()).ln())).abs() < 1e-3
        );
    }

    #[test]
    fn erfcx_matches_definition() {
        for x in [-2.0_f64, 0.0, 1.0, 2.5, 3.0, 5.0, 10.0] {
            let direct = (x * x).exp() * libm::erfc(x);
            assert!((erfcx(x) - direct).abs() <= 1e-14 * direct, "x={x}");
        }
    }

    #[test]
    fn half_gaussian_moments() {
        let sp = std::f64::consts::PI.sqrt();
        assert!((gauss_tail_value(1.0, 0.0, 0).unwrap() - sp / 2.0).abs() < 1e-15);
        assert!((gauss_tail_value(1.0, 0.0, 1).unwrap() - 0.5).abs() < 1e-15);
        assert!((gauss_tail_value(1.0, 0.0, 2).unwrap() - sp / 4.0).abs() < 1e-15);
        let p10 = gauss_tail_value(10.0, 0.0, 0).unwrap();
        assert!((p10 - 0.280_249_560_819_896_4).abs() < 1e-15);
    }

    #[test]
    fn recursion_holds_on_both_branches() {
        for &(p, q) in &[
            (1.0, 0.0),
            (0.1, -20.0),
            (50.0, 20.0),
            (2.0, -9.0),
            (0.3, 7.0),
        ] {
            let g0 = gauss_tail_value(p, q, 0).unwrap();
            let g1 = gauss_tail_value(p, q, 1).unwrap();
            let g2 = gauss_tail_value(p, q, 2).unwrap();
            let scale = (q * g0).abs().max(1.0);
            assert!(
                (g1 * 2.0 * p - q * g0 - 1.0).abs() < 1e-12 * scale,
                "p={p} q={q}"
            );
            assert!(
                ((g2 * 2.0 * p - q * g1) / g0 - 1.0).abs() < 1e-12,
                "p={p} q={q}"
            );
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(GaussTailParams::new(0.0, 1.0, 0).is_err());
        assert!(GaussTailParams::new(-1.0, 1.0, 0).is_err());
        assert!(GaussTailParams::new(1.0, f64::NAN, 0).is_err());
        assert!(GaussTailParams::new(1.0, 1.0, 3).is_err());
    }

    #[test]
    fn overflow_is_signalled() {
        let m = gauss_tail_moment(GaussTailParams::new(0.1, 40.0, 0).unwrap()).unwrap();
        assert!(m.requires_log_domain());
        // ln G_0 ≈ q²/4p = 4000
        assert!((m.ln() - 4000.0).abs() < 5.0);
        assert!(matches!(m.value(), Err(Error::Overflow { .. })));
    }

    #[test]
    fn ratio_agrees_with_difference_of_logs() {
        let r = ln_gauss_tail_ratio(3.0, (0, 12.0), (0, 11.0)).unwrap();
        let d = ln_gauss_tail(3.0, 12.0, 0).unwrap() - ln_gauss_tail(3.0, 11.0, 0).unwrap();
        assert!((r - d).abs() < 1e-12);
    }
}
