//! Adaptive Gauss–Kronrod quadrature, used as the independent check on every
//! closed form. Nothing here knows about error functions or tail moments.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Integral estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    /// Estimate of `∫|f|` over the same range.
    pub abs_mass: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs_mass: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// 21-point Kronrod rule with the embedded 10-point Gauss rule.
fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut kronrod = f_center * WGK[10];
    let mut gauss = 0.0;
    let mut abs_mass = kronrod.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_mass += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let abs_mass = abs_mass * half.abs();
    let asc = asc * half.abs();

    let mut error = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    if abs_mass > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * abs_mass);
    }
    Segment {
        a,
        b,
        value,
        error,
        abs_mass,
    }
}

/// Adaptive quadrature settings.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    rel_tol: f64,
    abs_tol: f64,
    max_segments: usize,
}

/// Smallest relative tolerance the oracle accepts.
pub const MIN_REL_TOL: f64 = 1e-12;

impl Quadrature {
    pub fn new(rel_tol: f64) -> Result<Self> {
        if !(rel_tol >= MIN_REL_TOL) || !rel_tol.is_finite() {
            return Err(invalid(
                "tol",
                format!("relative tolerance must be ≥ {MIN_REL_TOL:e}, got {rel_tol}"),
            ));
        }
        Ok(Self {
            rel_tol,
            abs_tol: 0.0,
            max_segments: 4000,
        })
    }

    /// Also accept results whose absolute error is below `abs_tol`.
    pub fn abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol.max(0.0);
        self
    }

    /// Subdivision budget per finite interval.
    pub fn max_segments(mut self, n: usize) -> Self {
        self.max_segments = n.max(1);
        self
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    /// Integrate over the finite interval `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<QuadResult> {
        self.integrate_with_floor(&f, a, b, self.abs_tol)
    }

    fn integrate_with_floor<F: Fn(f64) -> f64>(
        &self,
        f: &F,
        a: f64,
        b: f64,
        abs_floor: f64,
    ) -> Result<QuadResult> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(invalid("interval", "finite endpoints required"));
        }
        if a == b {
            return Ok(QuadResult {
                value: 0.0,
                abs_error: 0.0,
                abs_mass: 0.0,
                evaluations: 0,
            });
        }
        let mut heap = BinaryHeap::new();
        let first = gk21(f, a, b);
        let mut value = first.value;
        let mut error = first.error;
        let mut evaluations = 21;
        heap.push(first);

        let target = |value: f64| (self.rel_tol * value.abs()).max(abs_floor);
        while error > target(value) {
            if heap.len() >= self.max_segments {
                return Err(Error::Quadrature {
                    estimate: value,
                    abs_error: error,
                    evaluations,
                });
            }
            let worst = heap.pop().expect("heap is non-empty");
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                // interval at machine resolution; nothing more to gain
                return Err(Error::Quadrature {
                    estimate: value,
                    abs_error: error,
                    evaluations,
                });
            }
            let left = gk21(f, worst.a, mid);
            let right = gk21(f, mid, worst.b);
            evaluations += 42;
            value += left.value + right.value - worst.value;
            error += left.error + right.error - worst.error;
            heap.push(left);
            heap.push(right);
        }
        // re-sum to shed the drift of the running updates
        let (value, error, mass) = heap.iter().fold((0.0, 0.0, 0.0), |(v, e, m), s| {
            (v + s.value, e + s.error, m + s.abs_mass)
        });
        Ok(QuadResult {
            value,
            abs_error: error,
            abs_mass: mass,
            evaluations,
        })
    }

    /// Integrate over `[0, ∞)`.
    ///
    /// The half-line is split into geometrically growing panels, each
    /// integrated adaptively. Integration stops at the first upper limit `U`
    /// past the bulk of the mass where both the last panel's `∫|f|` and
    /// `|f(U)|·width` are below `10⁻³·tol` of the accumulated `∫|f|`; for
    /// Gaussian-dominated integrands the remaining tail is smaller still.
    pub fn semi_infinite<F: Fn(f64) -> f64>(&self, f: F) -> Result<QuadResult> {
        const FIRST: f64 = 0.25;
        const GROWTH: f64 = 1.5;
        const U_MAX: f64 = 1e9;
        let slack = 1e-3 * self.rel_tol;

        let mut total = 0.0;
        let mut error = 0.0;
        let mut mass = 0.0;
        let mut evaluations = 0;
        let (mut a, mut b) = (0.0, FIRST);
        loop {
            let floor = (0.1 * self.rel_tol * mass).max(self.abs_tol * 0.1);
            let panel = self.integrate_with_floor(&f, a, b, floor)?;
            total += panel.value;
            error += panel.abs_error;
            mass += panel.abs_mass;
            evaluations += panel.evaluations + 1;
            let edge = f(b).abs() * (b - a);
            if mass > 0.0 && panel.abs_mass <= slack * mass && edge <= slack * mass {
                break;
            }
            if b >= U_MAX {
                return Err(Error::Quadrature {
                    estimate: total,
                    abs_error: error.max(panel.abs_mass),
                    evaluations,
                });
            }
            a = b;
            b *= GROWTH;
        }
        Ok(QuadResult {
            value: total,
            abs_error: error,
            abs_mass: mass,
            evaluations,
        })
    }
}

/// `∫_0^∞ f(E) dE` to relative tolerance `tol` (≥ 1e-12).
pub fn quad_oracle<F: Fn(f64) -> f64>(f: F, tol: f64) -> Result<f64> {
    Ok(Quadrature::new(tol)?.semi_infinite(f)?.value)
}

/// `∫_0^∞ ρ(E) e^{iθ(E)} dE` for `f(E) = Some((ρ, θ))`, `ρ ≥ 0`; `None`
/// means zero.
pub fn quad_oracle_polar<F: Fn(f64) -> Option<(f64, f64)>>(f: F, tol: f64) -> Result<Complex64> {
    Quadrature::new(tol)?.semi_infinite_polar(f)
}

impl Quadrature {
    /// Complex half-line integral in polar form.
    ///
    /// The parts are computed as `∫ρ(1 + cos θ) - ∫ρ` and `∫ρ(1 + sin θ) - ∫ρ`:
    /// an imaginary part that vanishes identically would otherwise never
    /// accumulate the mass the stopping rule needs.
    pub fn semi_infinite_polar<F: Fn(f64) -> Option<(f64, f64)>>(&self, f: F) -> Result<Complex64> {
        let part = |g: fn(f64) -> f64| -> Result<f64> {
            let h = |x: f64| f(x).map_or(0.0, |(rho, theta)| rho * (1.0 + g(theta)));
            Ok(self.semi_infinite(h)?.value)
        };
        let mass = part(|_| 0.0)?;
        Ok(Complex64::new(
            part(f64::cos)? - mass,
            part(f64::sin)? - mass,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_weights_sum_to_two() {
        let k: f64 = WGK[10] + 2.0 * WGK[..10].iter().sum::<f64>();
        let g: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn polynomials_are_exact() {
        let q = Quadrature::new(1e-12).unwrap();
        let r = q.integrate(|x| x.powi(7) - 3.0 * x * x, -1.0, 2.0).unwrap();
        let exact = (2f64.powi(8) - 1.0) / 8.0 - (8.0 + 1.0);
        assert!((r.value - exact).abs() < 1e-13);
    }

    #[test]
    fn half_gaussians() {
        let v = quad_oracle(|e| (-e * e).exp(), 1e-10).unwrap();
        assert!((v - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-10);
        let v = quad_oracle(|e| e * (-e * e).exp(), 1e-10).unwrap();
        assert!((v - 0.5).abs() < 1e-10);
    }

    #[test]
    fn finds_a_distant_narrow_peak() {
        // mass centred at 100 with width ~2
        let v = quad_oracle(|e| (-(e - 100.0) * (e - 100.0) / 8.0).exp(), 1e-12).unwrap();
        let exact = (8.0 * std::f64::consts::PI).sqrt();
        assert!((v / exact - 1.0).abs() < 1e-11, "{v}");
    }

    #[test]
    fn rejects_tight_tolerance() {
        assert!(Quadrature::new(1e-13).is_err());
        assert!(Quadrature::new(f64::NAN).is_err());
    }

    #[test]
    fn reports_non_convergence() {
        let q = Quadrature::new(1e-12).unwrap().max_segments(3);
        let err = q
            .integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0)
            .unwrap_err();
        assert!(matches!(err, Error::Quadrature { .. }));
    }

    #[test]
    fn zero_integrand_is_reported() {
        let err = quad_oracle(|_| 0.0, 1e-10).unwrap_err();
        assert!(matches!(err, Error::Quadrature { .. }));
    }
}
