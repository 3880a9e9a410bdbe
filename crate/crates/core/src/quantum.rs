//! Level structure and radial densities of the infinite spherical well in
//! the group-theoretical solution.
//!
//! Units: well radius `a = 1`, `ħ = 1`, mass `μ = 1`. Wavenumbers are in
//! `1/a`, energies in `ħ²/(μa²)` and densities in `1/a`.
//!
//! Level `n` has wavenumber `k_n = nπ` and contains every `l` with
//! `l(l+1) <= (nπ)²`. For `l >= 1` the radial function is `j_l(k_n r)`
//! (`2l+1` states); `l = 0` carries two states, spanned either by
//! `{j_0, n_0}` or by `{h_0(1), h_0(2)}`.

use std::f64::consts::PI;

use rayon::prelude::*;
use thiserror::Error;

use crate::classical::{self, ClassicalError};
use crate::numerics::{self, curve_distance, DensityCurve, Metric, NumericsError, RadialGrid};
use crate::specfun::{self, BesselOrderRange, SpecfunError};

/// Relative disagreement tolerated between the closed-form normalization
/// and its quadrature check.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("level index must be at least 1")]
    InvalidLevel,
    #[error("l = {l} is not allowed at level n = {n} (l(l+1) > (nπ)²)")]
    DisallowedL { n: u32, l: u32 },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("normalization mismatch at n = {n}, l = {l}: closed form {closed}, quadrature {quadrature}")]
    NormalizationMismatch { n: u32, l: u32, closed: f64, quadrature: f64 },
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Classical(#[from] ClassicalError),
}

pub type Result<T> = std::result::Result<T, QuantumError>;

/// Dimensionless unit convention: `a = ħ = μ = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitConvention {
    pub a: f64,
    pub hbar: f64,
    pub mu: f64,
}

impl UnitConvention {
    pub const NATURAL: Self = Self { a: 1.0, hbar: 1.0, mu: 1.0 };
}

impl Default for UnitConvention {
    fn default() -> Self {
        Self::NATURAL
    }
}

fn wavenumber(n: u32) -> f64 {
    f64::from(n) * PI
}

fn check_level(n: u32) -> Result<()> {
    if n == 0 {
        Err(QuantumError::InvalidLevel)
    } else {
        Ok(())
    }
}

fn check_allowed(n: u32, l: u32) -> Result<()> {
    check_level(n)?;
    if l > allowed_l_max(n) {
        Err(QuantumError::DisallowedL { n, l })
    } else {
        Ok(())
    }
}

/// Largest `l` with `l(l+1) <= (nπ)²`; `n` must be at least 1.
pub fn allowed_l_max(n: u32) -> u32 {
    let bound = wavenumber(n).powi(2);
    let fits = |l: u64| (l * (l + 1)) as f64 <= bound;
    let mut l = ((-1.0 + (1.0 + 4.0 * bound).sqrt()) / 2.0).floor().max(0.0) as u64;
    while l > 0 && !fits(l) {
        l -= 1;
    }
    while fits(l + 1) {
        l += 1;
    }
    l as u32
}

/// Quantum numbers and degeneracy weights of level `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSpec {
    pub n: u32,
    /// `nπ`, units `1/a`
    pub k: f64,
    /// `(nπ)² / 2`, units `ħ²/(μa²)`
    pub energy: f64,
    pub l_max: u32,
    /// fraction of the level's states carrying each `l = 0..=l_max`
    pub weights: Vec<f64>,
    /// `(l_max + 1)² + 1`
    pub degeneracy: u64,
}

impl LevelSpec {
    /// Number of orthonormal states per `l`: 2 for `l = 0`, `2l + 1` above.
    pub fn state_counts(&self) -> Vec<u64> {
        (0..=u64::from(self.l_max)).map(|l| if l == 0 { 2 } else { 2 * l + 1 }).collect()
    }
}

pub fn level_spec(n: u32) -> Result<LevelSpec> {
    check_level(n)?;
    let l_max = allowed_l_max(n);
    let degeneracy = (u64::from(l_max) + 1).pow(2) + 1;
    let k = wavenumber(n);
    let mut spec = LevelSpec { n, k, energy: 0.5 * k * k, l_max, weights: Vec::new(), degeneracy };
    spec.weights = spec.state_counts().iter().map(|&c| c as f64 / degeneracy as f64).collect();
    Ok(spec)
}

/// Radial solution family of a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `j_l(k_n r)`, any allowed `l`
    J,
    /// `n_0(k_n r)`, `l = 0` only
    N0,
    /// `h_0(1)(k_n r)`, `l = 0` only
    H1,
    /// `h_0(2)(k_n r)`, `l = 0` only
    H2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StateLabel {
    n: u32,
    l: u32,
    m: i32,
    branch: Branch,
}

impl StateLabel {
    pub fn new(n: u32, l: u32, m: i32, branch: Branch) -> Result<Self> {
        check_allowed(n, l)?;
        if m.unsigned_abs() > l {
            return Err(QuantumError::InvalidState(format!("|m| = {} exceeds l = {l}", m.abs())));
        }
        if branch != Branch::J && l != 0 {
            return Err(QuantumError::InvalidState(format!("branch {branch:?} requires l = 0")));
        }
        Ok(Self { n, l, m, branch })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }
}

/// A labelled state with its squared normalization constant `A²` (units
/// `1/a³`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialState {
    label: StateLabel,
    norm_const_sq: f64,
}

impl RadialState {
    pub fn new(label: StateLabel) -> Result<Self> {
        let norm_const_sq = match label.branch {
            Branch::J | Branch::N0 => normalization_constant_sq(label.n, label.l)?,
            // |h_0(kr)|² r² = 1/k²
            Branch::H1 | Branch::H2 => wavenumber(label.n).powi(2),
        };
        Ok(Self { label, norm_const_sq })
    }

    pub fn label(&self) -> StateLabel {
        self.label
    }

    pub fn norm_const_sq(&self) -> f64 {
        self.norm_const_sq
    }

    /// `|R(r)|² r²` at one radius.
    pub fn density_at(&self, r: f64) -> Result<f64> {
        let k = wavenumber(self.label.n);
        let x = k * r;
        Ok(match self.label.branch {
            Branch::J => self.norm_const_sq * (r * specfun::sph_bessel_j(self.label.l, x)?).powi(2),
            // r n_0(kr) = -cos(kr) / k, finite at the origin
            Branch::N0 => self.norm_const_sq * (x.cos() / k).powi(2),
            Branch::H1 | Branch::H2 => self.norm_const_sq / (k * k),
        })
    }
}

/// `∫_0^1 j_l(x r)² r² dr = [j_l(x)² - j_{l-1}(x) j_{l+1}(x)] / 2`, with
/// `j_{-1}(x) = cos x / x`.
fn bessel_norm_integral(l: u32, x: f64) -> Result<f64> {
    let j = specfun::sph_bessel_j_all(BesselOrderRange::new(l + 1, x)?);
    let l = l as usize;
    let below = if l == 0 { x.cos() / x } else { j[l - 1] };
    Ok(0.5 * (j[l] * j[l] - below * j[l + 1]))
}

/// `A²_{nl}` from the closed-form Bessel integral; `2n²π²` for `l = 0`.
pub fn normalization_constant_sq(n: u32, l: u32) -> Result<f64> {
    check_allowed(n, l)?;
    if l == 0 {
        return Ok(2.0 * wavenumber(n).powi(2));
    }
    Ok(1.0 / bessel_norm_integral(l, wavenumber(n))?)
}

/// `A²_{nl}` as the reciprocal of `∫_0^1 j_l(nπr)² r² dr` by adaptive
/// quadrature.
pub fn normalization_constant_sq_by_quadrature(n: u32, l: u32) -> Result<f64> {
    check_allowed(n, l)?;
    let k = wavenumber(n);
    let scale = 0.5 / (k * k);
    let integral = numerics::integrate(
        |r| (r * specfun::sph_bessel_j(l, k * r).unwrap_or(f64::NAN)).powi(2),
        0.0,
        1.0,
        1e-13 * scale,
    )?;
    Ok(1.0 / integral)
}

/// Closed form guarded by quadrature; disagreement beyond
/// [`NORMALIZATION_TOLERANCE`] is reported as an error.
pub fn checked_normalization_constant_sq(n: u32, l: u32) -> Result<f64> {
    let closed = normalization_constant_sq(n, l)?;
    let quadrature = normalization_constant_sq_by_quadrature(n, l)?;
    if ((closed - quadrature) / closed).abs() > NORMALIZATION_TOLERANCE {
        return Err(QuantumError::NormalizationMismatch { n, l, closed, quadrature });
    }
    Ok(closed)
}

/// Density `|R(r)|² r²` of one state on a grid.
pub fn state_radial_density(state: &RadialState, grid: &RadialGrid) -> Result<DensityCurve> {
    DensityCurve::from_fn(grid.clone(), |r| state.density_at(r))
}

/// Mean density over the states of angular momentum `l` at level `n`:
/// the `j_l` density for `l >= 1`, the equal-weight average of the `j_0`
/// and `n_0` densities (identically 1) for `l = 0`.
pub fn mean_radial_density(n: u32, l: u32, grid: &RadialGrid) -> Result<DensityCurve> {
    check_allowed(n, l)?;
    if l == 0 {
        let k = wavenumber(n);
        let a2 = normalization_constant_sq(n, 0)?;
        return DensityCurve::from_fn(grid.clone(), |r| Ok(mean_l0_density(a2, k, r)));
    }
    let state = RadialState::new(StateLabel::new(n, l, 0, Branch::J)?)?;
    state_radial_density(&state, grid)
}

/// `A²/2 · (sin²(kr) + cos²(kr)) / k²`
fn mean_l0_density(norm_const_sq: f64, k: f64, r: f64) -> f64 {
    let (s, c) = (k * r).sin_cos();
    0.5 * norm_const_sq * (s * s + c * c) / (k * k)
}

/// Pointwise evaluator of the degeneracy-weighted total density of a level.
#[derive(Debug, Clone)]
pub struct TotalDensity {
    spec: LevelSpec,
    /// `w_l A²_{nl}` for `l = 0..=l_max`
    coefficients: Vec<f64>,
}

impl TotalDensity {
    pub fn new(n: u32) -> Result<Self> {
        let spec = level_spec(n)?;
        let k = spec.k;
        let l_max = spec.l_max;
        let j = specfun::sph_bessel_j_all(BesselOrderRange::new(l_max + 1, k)?);
        let mut coefficients = Vec::with_capacity(l_max as usize + 1);
        coefficients.push(spec.weights[0] * 2.0 * k * k);
        for l in 1..=l_max as usize {
            let integral = 0.5 * (j[l] * j[l] - j[l - 1] * j[l + 1]);
            coefficients.push(spec.weights[l] / integral);
        }
        Ok(Self { spec, coefficients })
    }

    pub fn level(&self) -> &LevelSpec {
        &self.spec
    }

    /// `Σ_l w_l P̄_{nl}(r)`, summed pairwise in ascending `l`.
    pub fn at(&self, r: f64) -> Result<f64> {
        let k = self.spec.k;
        let x = k * r;
        let j = specfun::sph_bessel_j_all(BesselOrderRange::new(self.spec.l_max, x)?);
        let mut terms = Vec::with_capacity(j.len());
        terms.push(self.spec.weights[0] * mean_l0_density(2.0 * k * k, k, r));
        for (c, jl) in self.coefficients.iter().zip(&j).skip(1) {
            terms.push(c * (r * jl).powi(2));
        }
        Ok(pairwise_sum(&terms))
    }
}

fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 8 {
        return values.iter().sum();
    }
    let (left, right) = values.split_at(values.len() / 2);
    pairwise_sum(left) + pairwise_sum(right)
}

/// Total radial density of level `n`, `Σ_l w_l P̄_{nl}(r)`. Grid points are
/// evaluated in parallel; each point's value is schedule-independent.
pub fn total_radial_density(n: u32, grid: &RadialGrid) -> Result<DensityCurve> {
    let total = TotalDensity::new(n)?;
    let values = grid
        .points()
        .par_iter()
        .map(|&r| total.at(r))
        .collect::<Result<Vec<_>>>()?;
    Ok(DensityCurve::new(grid.clone(), values)?)
}

/// `⟨l(l+1) / 2r²⟩` in the `j_l(nπr)` state (units `ħ²/(μa²)`):
/// `l(l+1)/2 · A² ∫_0^1 j_l(nπr)² dr`.
pub fn centrifugal_expectation(n: u32, l: u32) -> Result<f64> {
    check_allowed(n, l)?;
    if l == 0 {
        return Err(QuantumError::InvalidState("centrifugal expectation needs l >= 1".into()));
    }
    let k = wavenumber(n);
    let a2 = normalization_constant_sq(n, l)?;
    let integral = numerics::integrate(
        |r| specfun::sph_bessel_j(l, k * r).unwrap_or(f64::NAN).powi(2),
        0.0,
        1.0,
        1e-14,
    )?;
    let lf = f64::from(l);
    Ok(0.5 * lf * (lf + 1.0) * a2 * integral)
}

/// Textbook-solution density `C² j_l(β r)² r²`, `β` the `n_r`-th zero of
/// `j_l`, normalized on `[0, 1]`. Vanishes at the wall.
pub fn conventional_radial_density(n_r: u32, l: u32, grid: &RadialGrid) -> Result<DensityCurve> {
    if n_r == 0 {
        return Err(QuantumError::InvalidLevel);
    }
    let beta = specfun::sph_bessel_zero(l, n_r)?;
    let c2 = 1.0 / bessel_norm_integral(l, beta)?;
    DensityCurve::from_fn(grid.clone(), |r| {
        Ok::<_, QuantumError>(c2 * (r * specfun::sph_bessel_j(l, beta * r)?).powi(2))
    })
}

/// Distances between the total density of one level and the classical
/// total density `r ln((1+r)/(1-r))` on `[0, r_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub n: u32,
    pub r_max: f64,
    pub l1_distance: f64,
    pub sup_distance: f64,
    pub degeneracy: u64,
    pub l_max: u32,
}

/// Comparison report plus the two curves it was computed from.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub report: ComparisonReport,
    pub quantum: DensityCurve,
    pub classical: DensityCurve,
}

pub fn compare_with_classical(n: u32, grid: &RadialGrid) -> Result<Comparison> {
    if grid.r_max() >= 1.0 {
        return Err(ClassicalError::InvalidRadius(grid.r_max()).into());
    }
    let quantum = total_radial_density(n, grid)?;
    let classical = DensityCurve::from_fn(grid.clone(), |r| Ok::<_, QuantumError>(classical::classical_total_density(r)?))?;
    let spec = level_spec(n)?;
    let report = ComparisonReport {
        n,
        r_max: grid.r_max(),
        l1_distance: curve_distance(&quantum, &classical, Metric::L1)?,
        sup_distance: curve_distance(&quantum, &classical, Metric::Sup)?,
        degeneracy: spec.degeneracy,
        l_max: spec.l_max,
    };
    Ok(Comparison { report, quantum, classical })
}
