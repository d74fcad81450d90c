//! Ladder operators as banded kernels on a uniform energy grid.
//!
//! The grid spacing divides `ε` exactly (`r·Δ = ε`), so `a_ε` and `a_ε†` are
//! pure index shifts by `r` with the weights `C(E, ε)`. Samples `ψ_i = ψ(E_i)`
//! are amplitudes and the inner product carries `Δ`, i.e. `⟨E_i|E_j⟩ = δ_ij/Δ`.
//!
//! Boundary convention: `a_ε` drops whatever would land below `E = 0` and
//! `a_ε†` drops whatever would land above the last grid point. Every
//! operator below is a single band `e_i ↦ w_i e_{i+offset}`.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::states::{ModelParams, StateLabel, Wavefunction};

/// Upper limit on grid size.
pub const MAX_POINTS: usize = 1 << 20;

/// Uniform grid `E_i = i·Δ`, `i = 0..n`, with `Δ = ε / r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyGrid {
    n: usize,
    shift_steps: usize,
    delta_e: f64,
    epsilon: f64,
}

impl EnergyGrid {
    /// Grid with `n` points and `r = shift_steps` points per `ε`.
    pub fn new(epsilon: f64, shift_steps: usize, n: usize) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(invalid(
                "epsilon",
                format!("must be finite and > 0, got {epsilon}"),
            ));
        }
        if shift_steps == 0 {
            return Err(invalid("shift_steps", "need at least one step per ε"));
        }
        if n <= shift_steps || n > MAX_POINTS {
            return Err(invalid(
                "n",
                format!("need shift_steps < n ≤ {MAX_POINTS}, got n={n}"),
            ));
        }
        Ok(Self {
            n,
            shift_steps,
            delta_e: epsilon / shift_steps as f64,
            epsilon,
        })
    }

    /// Smallest grid reaching `e_max` with `r` steps per `ε`.
    pub fn covering(epsilon: f64, shift_steps: usize, e_max: f64) -> Result<Self> {
        if !(e_max > 0.0) || !e_max.is_finite() {
            return Err(invalid(
                "e_max",
                format!("must be finite and > 0, got {e_max}"),
            ));
        }
        let delta = epsilon / shift_steps as f64;
        let n = (e_max / delta).ceil() as usize;
        Self::new(epsilon, shift_steps, n.max(shift_steps + 1))
    }

    /// Default grid for a state: cutoff `max(ln s/α, 0) + 8/√α + (m+1)ε`,
    /// four points per `ε`.
    pub fn for_state(p: &ModelParams, l: &StateLabel) -> Result<Self> {
        let e_max = (l.ln_s() / p.alpha()).max(0.0)
            + 8.0 / p.alpha().sqrt()
            + f64::from(l.m() + 1) * p.epsilon();
        Self::covering(p.epsilon(), 4, e_max)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn shift_steps(&self) -> usize {
        self.shift_steps
    }

    pub fn delta_e(&self) -> f64 {
        self.delta_e
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `n·Δ`.
    pub fn e_max(&self) -> f64 {
        self.n as f64 * self.delta_e
    }

    pub fn energy(&self, i: usize) -> f64 {
        i as f64 * self.delta_e
    }

    pub fn energies(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.energy(i))
    }

    /// Rows `[r, n-1-r]`, where no boundary convention is involved.
    pub fn interior(&self) -> std::ops::RangeInclusive<usize> {
        self.shift_steps..=self.n.saturating_sub(1 + self.shift_steps)
    }
}

/// Sampled wavefunction on an [`EnergyGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    grid: EnergyGrid,
    samples: Vec<Complex64>,
}

impl GridState {
    pub fn from_samples(grid: EnergyGrid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        Ok(Self { grid, samples })
    }

    /// `ψ(E_i) = ⟨E_i|s,γ,m⟩_ε`.
    pub fn sample(p: &ModelParams, l: &StateLabel, grid: EnergyGrid) -> Result<Self> {
        let wf = Wavefunction::new(p, l);
        let samples = grid.energies().map(|e| wf.eval(e)).collect::<Result<_>>()?;
        Ok(Self { grid, samples })
    }

    /// Basis vector `e_i`.
    pub fn basis(grid: EnergyGrid, i: usize) -> Self {
        let mut samples = vec![Complex64::new(0.0, 0.0); grid.len()];
        samples[i] = Complex64::new(1.0, 0.0);
        Self { grid, samples }
    }

    pub fn grid(&self) -> &EnergyGrid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// `⟨self|other⟩ = Σ conj(ψ_i) φ_i Δ`.
    pub fn inner(&self, other: &GridState) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let sum: Complex64 = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(sum * self.grid.delta_e)
    }

    pub fn norm(&self) -> f64 {
        let sq: f64 = self.samples.iter().map(|a| a.norm_sqr()).sum();
        (sq * self.grid.delta_e).sqrt()
    }

    /// Largest sample modulus.
    pub fn max_modulus(&self) -> f64 {
        self.samples.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Pointwise `e^{-iωE_i t} ψ_i`.
    pub fn evolve(&self, omega: f64, t: f64) -> Self {
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(i, a)| a * Complex64::from_polar(1.0, -omega * self.grid.energy(i) * t))
            .collect();
        Self {
            grid: self.grid,
            samples,
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            grid: self.grid,
            samples: self.samples.iter().map(|a| a * factor).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    Annihilation,
    Creation,
    Number,
    Hamiltonian,
}

/// Single-band operator `e_i ↦ weights[i] · e_{i+offset}`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelOperator {
    kind: KernelKind,
    grid: EnergyGrid,
    offset: isize,
    weights: Vec<f64>,
}

impl KernelOperator {
    pub fn build(kind: KernelKind, p: &ModelParams, grid: EnergyGrid) -> Result<Self> {
        check_commensurate(p, &grid)?;
        let r = grid.shift_steps;
        let n = grid.n;
        let c = |i: usize| p.ladder_weight(grid.energy(i));
        let (offset, weights) = match kind {
            // e_i -> C(E_i) e_{i-r}; nothing below E = 0
            KernelKind::Annihilation => (
                -(r as isize),
                (0..n).map(|i| if i >= r { c(i) } else { 0.0 }).collect(),
            ),
            // e_i -> C(E_i + ε) e_{i+r}; nothing past the top of the grid
            KernelKind::Creation => (
                r as isize,
                (0..n)
                    .map(|i| if i + r < n { c(i + r) } else { 0.0 })
                    .collect(),
            ),
            // a†a: C(E_i)² for i ≥ r, zero where a projects out
            KernelKind::Number => (
                0,
                (0..n)
                    .map(|i| if i >= r { c(i) * c(i) } else { 0.0 })
                    .collect(),
            ),
            KernelKind::Hamiltonian => (0, grid.energies().map(|e| p.omega() * e).collect()),
        };
        Ok(Self {
            kind,
            grid,
            offset,
            weights,
        })
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn offset(&self) -> isize {
        self.offset
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Banded matrix-vector product.
    pub fn apply(&self, psi: &GridState) -> Result<GridState> {
        if psi.grid != self.grid {
            return Err(Error::GridMismatch);
        }
        let n = self.grid.n as isize;
        let mut out = vec![Complex64::new(0.0, 0.0); self.grid.n];
        for (i, (&w, &a)) in self.weights.iter().zip(&psi.samples).enumerate() {
            let j = i as isize + self.offset;
            if w != 0.0 && (0..n).contains(&j) {
                out[j as usize] += a * w;
            }
        }
        Ok(GridState {
            grid: self.grid,
            samples: out,
        })
    }
}

fn check_commensurate(p: &ModelParams, grid: &EnergyGrid) -> Result<()> {
    if (grid.epsilon - p.epsilon()).abs() > 1e-12 * p.epsilon() {
        return Err(invalid(
            "grid",
            format!(
                "grid built for ε={}, model has ε={}",
                grid.epsilon,
                p.epsilon()
            ),
        ));
    }
    Ok(())
}

/// Set when the grid cutoff is too close to the state's bulk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailWarning {
    pub required_e_max: f64,
    /// Analytic Gaussian estimate of the probability beyond the cutoff.
    pub tail_mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenResidual {
    pub residual: f64,
    pub eigenvalue: Complex64,
    pub warning: Option<TailWarning>,
}

/// `max_i |(a_ε ψ)_i - (s e^{-iγ})^ε ψ_i| / max|ψ|` over `i ∈ [0, n-1-r]`.
pub fn eigenvalue_residual(
    p: &ModelParams,
    l: &StateLabel,
    grid: EnergyGrid,
) -> Result<EigenResidual> {
    if l.m() != 0 {
        return Err(invalid("m", "eigenvalue equation holds for m = 0 only"));
    }
    let psi = GridState::sample(p, l, grid)?;
    let a = KernelOperator::build(KernelKind::Annihilation, p, grid)?;
    let a_psi = a.apply(&psi)?;
    let eigenvalue =
        Complex64::from_polar((p.epsilon() * l.ln_s()).exp(), -l.gamma() * p.epsilon());
    let top = grid.len() - 1 - grid.shift_steps;
    let scale = psi.max_modulus();
    let residual = (0..=top)
        .map(|i| (a_psi.samples[i] - eigenvalue * psi.samples[i]).norm())
        .fold(0.0, f64::max)
        / scale;

    let required = (l.ln_s() / p.alpha()).max(0.0) + 8.0 / p.alpha().sqrt() + p.epsilon();
    let warning = (grid.e_max() < required).then(|| {
        // |ψ|² ∝ exp(-α(E - μ)²), μ = ln s / α
        let mu = l.ln_s() / p.alpha();
        let sa = p.alpha().sqrt();
        let tail = crate::specfun::erfc(sa * (grid.e_max() - mu)) / crate::specfun::erfc(-sa * mu);
        TailWarning {
            required_e_max: required,
            tail_mass: tail,
        }
    });
    Ok(EigenResidual {
        residual,
        eigenvalue,
        warning,
    })
}

/// Which commutator to probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommutatorPair {
    /// `[a_ε, a_ε†] = 2 sinh(αε²) e^{2αεE}` (diagonal).
    AnnihilationCreation,
    /// `[N_ε, a_ε] = -e^{3αεE - 7αε²/2}(e^{2αε²} - 1) |E-ε⟩⟨E|`.
    NumberAnnihilation,
    /// `[N_ε, a_ε†]`, the adjoint band of the above.
    NumberCreation,
}

/// Per-row comparison of the grid commutator with its closed-form kernel.
///
/// Row `j` indexes the lower-energy end of the matrix element: the diagonal
/// element `(j, j)` for `[a, a†]`, and the band element joining `E_j` and
/// `E_j + ε` for the two `N` commutators.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorDefect {
    pub pair: CommutatorPair,
    pub grid: EnergyGrid,
    /// `|closed form - grid|` per row.
    pub defect: Vec<f64>,
    /// `|closed form|` per row, for relative comparisons.
    pub reference: Vec<f64>,
}

impl CommutatorDefect {
    /// Largest `defect / reference` over rows `[r, n-1-r]`.
    pub fn interior_max_relative(&self) -> f64 {
        self.grid
            .interior()
            .map(|j| self.defect[j] / self.reference[j])
            .fold(0.0, f64::max)
    }

    /// Largest relative mismatch between the boundary rows `j < r` and the
    /// directly computed dropped terms.
    pub fn boundary_max_mismatch(&self, p: &ModelParams) -> f64 {
        (0..self.grid.shift_steps)
            .map(|j| {
                let dropped = dropped_term(p, &self.grid, self.pair, j);
                (self.defect[j] - dropped).abs() / dropped
            })
            .fold(0.0, f64::max)
    }
}

/// The term that the `E ≥ 0` projection removes from row `j < r`.
///
/// `[a, a†]`: the `a†a` contribution `C²(E_j)`. `[N, a]` and `[N, a†]`: the
/// `N a` (resp. `a† N`) contribution `C(E, ε) C²(E - ε, ε)` at `E = E_j + ε`.
pub fn dropped_term(p: &ModelParams, grid: &EnergyGrid, pair: CommutatorPair, j: usize) -> f64 {
    let e = grid.energy(j);
    match pair {
        CommutatorPair::AnnihilationCreation => p.ladder_weight(e).powi(2),
        CommutatorPair::NumberAnnihilation | CommutatorPair::NumberCreation => {
            p.ladder_weight(e + p.epsilon()) * p.ladder_weight(e).powi(2)
        }
    }
}

/// Closed-form kernel entry for row `j`.
fn closed_form_entry(p: &ModelParams, e: f64, pair: CommutatorPair) -> f64 {
    let ae = p.alpha() * p.epsilon();
    let ae2 = p.alpha_eps2();
    match pair {
        CommutatorPair::AnnihilationCreation => 2.0 * ae2.sinh() * (2.0 * ae * e).exp(),
        CommutatorPair::NumberAnnihilation | CommutatorPair::NumberCreation => {
            // evaluated at the upper energy E = E_j + ε of the band element
            let upper = e + p.epsilon();
            let v = (3.0 * ae * upper - 3.5 * ae2).exp() * (2.0 * ae2).exp_m1();
            if pair == CommutatorPair::NumberAnnihilation {
                -v
            } else {
                v
            }
        }
    }
}

struct Kernels {
    a: KernelOperator,
    ad: KernelOperator,
    n: KernelOperator,
}

impl Kernels {
    fn new(p: &ModelParams, grid: EnergyGrid) -> Result<Self> {
        Ok(Self {
            a: KernelOperator::build(KernelKind::Annihilation, p, grid)?,
            ad: KernelOperator::build(KernelKind::Creation, p, grid)?,
            n: KernelOperator::build(KernelKind::Number, p, grid)?,
        })
    }

    /// Apply `[X, Y]` to `e_i`.
    fn commutator_on_basis(&self, pair: CommutatorPair, i: usize) -> Result<GridState> {
        let e = GridState::basis(self.a.grid, i);
        let (x, y) = match pair {
            CommutatorPair::AnnihilationCreation => (&self.a, &self.ad),
            CommutatorPair::NumberAnnihilation => (&self.n, &self.a),
            CommutatorPair::NumberCreation => (&self.n, &self.ad),
        };
        let xy = x.apply(&y.apply(&e)?)?;
        let yx = y.apply(&x.apply(&e)?)?;
        Ok(GridState {
            grid: self.a.grid,
            samples: xy
                .samples
                .iter()
                .zip(&yx.samples)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Grid matrix element for row `j` (see [`CommutatorDefect`]), or
    /// `None` if the element lies partly off the grid.
    fn grid_entry(&self, pair: CommutatorPair, j: usize) -> Result<Option<f64>> {
        let grid = self.a.grid;
        let r = grid.shift_steps;
        let (column, row) = match pair {
            CommutatorPair::AnnihilationCreation => (j, j),
            // e_{j+r} -> e_j
            CommutatorPair::NumberAnnihilation => (j + r, j),
            // e_j -> e_{j+r}
            CommutatorPair::NumberCreation => (j, j + r),
        };
        if column >= grid.n || row >= grid.n {
            return Ok(None);
        }
        Ok(Some(
            self.commutator_on_basis(pair, column)?.samples[row].re,
        ))
    }
}

/// Apply both orderings to every basis vector and compare with the closed form.
pub fn commutator_defect(
    p: &ModelParams,
    grid: EnergyGrid,
    pair: CommutatorPair,
) -> Result<CommutatorDefect> {
    let kernels = Kernels::new(p, grid)?;
    let mut defect = Vec::with_capacity(grid.n);
    let mut reference = Vec::with_capacity(grid.n);
    for j in 0..grid.n {
        let closed = closed_form_entry(p, grid.energy(j), pair);
        let on_grid = kernels.grid_entry(pair, j)?.unwrap_or(0.0);
        defect.push((closed - on_grid).abs());
        reference.push(closed.abs());
    }
    Ok(CommutatorDefect {
        pair,
        grid,
        defect,
        reference,
    })
}

/// One `α` of a [`limit_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitRow {
    pub alpha: f64,
    /// `‖[a,a†]/(2αε²) - 𝕀‖` over interior rows.
    pub identity_distance: f64,
    /// `‖[N,a]/(2αε²) + a‖`.
    pub annihilation_distance: f64,
    /// `‖[N,a†]/(2αε²) - a†‖`.
    pub creation_distance: f64,
    /// Ratio of each distance to the previous row's, `None` on the first row.
    pub ratios: Option<[f64; 3]>,
}

impl LimitRow {
    fn distances(&self) -> [f64; 3] {
        [
            self.identity_distance,
            self.annihilation_distance,
            self.creation_distance,
        ]
    }
}

/// Scaled commutators against `𝕀`, `-a` and `a†` as `α` decreases.
///
/// Every operator involved is a single band, so the operator distance is the
/// largest entry difference over the interior rows.
pub fn limit_check(grid: EnergyGrid, epsilon: f64, alphas: &[f64]) -> Result<Vec<LimitRow>> {
    if alphas.is_empty() {
        return Err(invalid("alphas", "need at least one value"));
    }
    for w in alphas.windows(2) {
        if !(w[1] < w[0]) {
            return Err(invalid("alphas", "must be strictly decreasing"));
        }
    }
    if let Some(bad) = alphas.iter().find(|a| !(**a > 0.0)) {
        return Err(invalid(
            "alphas",
            format!("all values must be > 0, got {bad}"),
        ));
    }
    let mut rows: Vec<LimitRow> = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let p = ModelParams::new(alpha, epsilon, 1.0)?;
        let kernels = Kernels::new(&p, grid)?;
        let scale = 2.0 * p.alpha_eps2();
        let r = grid.shift_steps;
        let mut d = [0.0f64; 3];
        for j in grid.interior() {
            let comm = kernels
                .grid_entry(CommutatorPair::AnnihilationCreation, j)?
                .expect("interior row on grid");
            d[0] = d[0].max((comm / scale - 1.0).abs());
            // band element between E_j and E_{j+r}
            let a_entry = kernels.a.weights[j + r];
            let ad_entry = kernels.ad.weights[j];
            let na = kernels
                .grid_entry(CommutatorPair::NumberAnnihilation, j)?
                .expect("interior row on grid");
            let nad = kernels
                .grid_entry(CommutatorPair::NumberCreation, j)?
                .expect("interior row on grid");
            d[1] = d[1].max((na / scale + a_entry).abs());
            d[2] = d[2].max((nad / scale - ad_entry).abs());
        }
        let ratios = rows.last().map(|prev| {
            let pd = prev.distances();
            [d[0] / pd[0], d[1] / pd[1], d[2] / pd[2]]
        });
        rows.push(LimitRow {
            alpha,
            identity_distance: d[0],
            annihilation_distance: d[1],
            creation_distance: d[2],
            ratios,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (ModelParams, EnergyGrid) {
        let p = ModelParams::new(10.0, 0.07, 1.0).unwrap();
        let g = EnergyGrid::covering(0.07, 4, 4.0).unwrap();
        (p, g)
    }

    #[test]
    fn grid_construction() {
        let g = EnergyGrid::new(0.1, 5, 100).unwrap();
        assert_eq!(g.len(), 100);
        assert!((g.delta_e() * 5.0 - 0.1).abs() < 1e-17);
        assert!((g.e_max() - 100.0 * g.delta_e()).abs() < 1e-15);
        assert!(EnergyGrid::new(0.1, 0, 10).is_err());
        assert!(EnergyGrid::new(0.1, 10, 10).is_err());
        assert!(EnergyGrid::new(0.1, 1, MAX_POINTS + 1).is_err());
    }

    #[test]
    fn default_grid_respects_limits() {
        let p = ModelParams::new(10.0, 0.07, 1.0).unwrap();
        let l = StateLabel::new(3.0, 0.0, 2).unwrap();
        let g = EnergyGrid::for_state(&p, &l).unwrap();
        assert!(g.delta_e() <= 0.07 / 4.0 + 1e-18);
        assert!(g.e_max() >= 3f64.ln() / 10.0 + 8.0 / 10f64.sqrt() + 3.0 * 0.07);
    }

    #[test]
    fn number_kernel_eigenvalues() {
        let (p, g) = setup();
        let n = KernelOperator::build(KernelKind::Number, &p, g).unwrap();
        for i in [g.shift_steps(), 50, 200] {
            let out = n.apply(&GridState::basis(g, i)).unwrap();
            let e = g.energy(i);
            let expected = (-p.alpha_eps2()).exp() * (2.0 * 10.0 * 0.07 * e).exp();
            assert!((out.samples()[i].re / expected - 1.0).abs() < 1e-13);
            assert_eq!(out.samples().iter().filter(|a| a.norm() > 0.0).count(), 1);
        }
    }

    #[test]
    fn annihilation_kills_ground_row() {
        let (p, g) = setup();
        let a = KernelOperator::build(KernelKind::Annihilation, &p, g).unwrap();
        let out = a.apply(&GridState::basis(g, 0)).unwrap();
        assert!(out.samples().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn hamiltonian_is_diagonal() {
        let p = ModelParams::new(10.0, 0.07, 2.5).unwrap();
        let g = EnergyGrid::covering(0.07, 4, 4.0).unwrap();
        let l = StateLabel::new(1.3, 0.2, 0).unwrap();
        let psi = GridState::sample(&p, &l, g).unwrap();
        let h = KernelOperator::build(KernelKind::Hamiltonian, &p, g).unwrap();
        let out = h.apply(&psi).unwrap();
        for i in 0..g.len() {
            let expected = psi.samples()[i] * (2.5 * g.energy(i));
            assert!((out.samples()[i] - expected).norm() <= 1e-15 * expected.norm().max(1e-300));
        }
    }

    #[test]
    fn grid_mismatch_rejected() {
        let (p, g) = setup();
        let other = EnergyGrid::covering(0.07, 4, 5.0).unwrap();
        let a = KernelOperator::build(KernelKind::Annihilation, &p, g).unwrap();
        assert_eq!(
            a.apply(&GridState::basis(other, 0)),
            Err(Error::GridMismatch)
        );
        let wrong_eps = EnergyGrid::covering(0.05, 4, 4.0).unwrap();
        assert!(KernelOperator::build(KernelKind::Number, &p, wrong_eps).is_err());
    }

    #[test]
    fn eigenvalue_special_cases() {
        let (p, g) = setup();
        let l = StateLabel::new(2.0, 0.0, 0).unwrap();
        let r = eigenvalue_residual(&p, &l, g).unwrap();
        assert!(r.eigenvalue.im == 0.0 && (r.eigenvalue.re - 2f64.powf(0.07)).abs() < 1e-15);
        assert!(r.residual <= 1e-12);
        let one = StateLabel::new(1.0, 0.0, 0).unwrap();
        let r1 = eigenvalue_residual(&p, &one, g).unwrap();
        assert_eq!(r1.eigenvalue, Complex64::new(1.0, 0.0));
        assert!(eigenvalue_residual(&p, &l.with_m(1), g).is_err());
    }

    #[test]
    fn short_grid_raises_tail_warning() {
        let p = ModelParams::new(10.0, 0.07, 1.0).unwrap();
        let g = EnergyGrid::covering(0.07, 4, 1.0).unwrap();
        let l = StateLabel::new(20.0, 0.0, 0).unwrap();
        let r = eigenvalue_residual(&p, &l, g).unwrap();
        let w = r.warning.expect("cutoff below the required margin");
        assert!(w.tail_mass > 0.0 && w.tail_mass < 1.0);
        assert!(r.residual <= 1e-12);
    }

    #[test]
    fn creation_is_adjoint_of_annihilation() {
        let (p, g) = setup();
        let a = KernelOperator::build(KernelKind::Annihilation, &p, g).unwrap();
        let ad = KernelOperator::build(KernelKind::Creation, &p, g).unwrap();
        let phi = GridState::sample(&p, &StateLabel::new(1.4, 0.3, 1).unwrap(), g).unwrap();
        let psi = GridState::sample(&p, &StateLabel::new(2.1, -0.8, 0).unwrap(), g).unwrap();
        let lhs = ad.apply(&phi).unwrap().inner(&psi).unwrap();
        let rhs = phi.inner(&a.apply(&psi).unwrap()).unwrap();
        assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm());
    }

    #[test]
    fn commutators_interior_and_boundary() {
        let (p, g) = setup();
        for pair in [
            CommutatorPair::AnnihilationCreation,
            CommutatorPair::NumberAnnihilation,
            CommutatorPair::NumberCreation,
        ] {
            let d = commutator_defect(&p, g, pair).unwrap();
            assert!(d.interior_max_relative() <= 1e-12, "{pair:?}");
            assert!(d.boundary_max_mismatch(&p) <= 1e-12, "{pair:?}");
        }
    }

    #[test]
    fn limit_ratios_follow_alpha() {
        let g = EnergyGrid::covering(0.1, 4, 5.0).unwrap();
        let rows = limit_check(g, 0.1, &[1e-2, 1e-3, 1e-4]).unwrap();
        for row in &rows[1..] {
            for ratio in row.ratios.unwrap() {
                assert!((ratio / 0.1 - 1.0).abs() < 0.2, "{ratio}");
            }
        }
        assert!(limit_check(g, 0.1, &[1e-2, 0.0]).is_err());
        assert!(limit_check(g, 0.1, &[1e-3, 1e-2]).is_err());
    }
}
