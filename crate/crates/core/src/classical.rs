//! Classical radial densities of a free particle bouncing specularly inside
//! a sphere of unit radius.
//!
//! Units: radius `a = 1`, speed `v = 1`, times in units of `a / v`. A
//! straight flight with impact parameter `σ` (closest approach to the
//! centre) sits at radius `r(t) = sqrt(t² + σ²)`, so the time spent in
//! `[r, r + dr]` on one chord gives the density `P_σ(r)`.
//!
//! Two ensembles over `σ` are provided:
//!
//! * [`McMode::Paper`] weights each `P_σ` by the solid-angle measure
//!   `σ sqrt(1 - σ²) dσ` divided by the chord duration `sqrt(1 - σ²)`,
//!   i.e. density `2σ`. The mixture is `r ln((1 + r) / (1 - r))`.
//! * [`McMode::Liouville`] uses the flow-invariant weight
//!   `3σ sqrt(1 - σ²)` (positions uniform in the ball, isotropic
//!   directions). The mixture is `3r²`.

use rayon::prelude::*;
use thiserror::Error;

use crate::numerics::{self, DensityCurve, Histogram, NumericsError, SeededRng};

/// Samples drawn from one RNG stream. Fixed so that Monte Carlo output does
/// not depend on the number of worker threads.
pub const MC_BLOCK_SIZE: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassicalError {
    #[error("impact parameter {0} is outside [0, 1)")]
    InvalidImpactParameter(f64),
    #[error("radius {0} is outside the allowed domain")]
    InvalidRadius(f64),
    #[error("P_sigma is singular at r = sigma = {0}")]
    Singular(f64),
    #[error("invalid Monte Carlo configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

pub type Result<T> = std::result::Result<T, ClassicalError>;

/// Dimensionless impact parameter `σ = a_min / a`, equivalently the angular
/// momentum `L / (μ v a)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ImpactParameter(f64);

impl ImpactParameter {
    pub fn new(sigma: f64) -> Result<Self> {
        if (0.0..1.0).contains(&sigma) {
            Ok(Self(sigma))
        } else {
            Err(ClassicalError::InvalidImpactParameter(sigma))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// One point on a chord: time `t` after closest approach and its radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChordSample {
    sigma: ImpactParameter,
    t: f64,
    r: f64,
}

impl ChordSample {
    /// `t` must lie in `[0, sqrt(1 - σ²)]`.
    pub fn new(sigma: ImpactParameter, t: f64) -> Result<Self> {
        let half_chord = (1.0 - sigma.0 * sigma.0).sqrt();
        if !(0.0..=half_chord).contains(&t) {
            return Err(ClassicalError::InvalidConfig(format!(
                "chord time {t} outside [0, {half_chord}]"
            )));
        }
        let r = (t * t + sigma.0 * sigma.0).sqrt().min(1.0);
        Ok(Self { sigma, t, r })
    }

    pub fn sigma(&self) -> ImpactParameter {
        self.sigma
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn r(&self) -> f64 {
        self.r
    }
}

/// Radial density of a single chord:
/// `r / (sqrt(1 - σ²) sqrt(r² - σ²))` for `r >= σ`, zero below.
pub fn p_sigma(r: f64, sigma: ImpactParameter) -> Result<f64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(ClassicalError::InvalidRadius(r));
    }
    let s = sigma.0;
    if (r - s).abs() < 1e-15 {
        return Err(ClassicalError::Singular(s));
    }
    if r < s {
        return Ok(0.0);
    }
    Ok(r / ((1.0 - s * s).sqrt() * ((r - s) * (r + s)).sqrt()))
}

/// Normalized weight `3σ sqrt(1 - σ²)` of the solid-angle measure.
pub fn angular_momentum_weight(sigma: ImpactParameter) -> f64 {
    let s = sigma.0;
    3.0 * s * (1.0 - s * s).sqrt()
}

/// `r ln((1 + r) / (1 - r))`, the bounce-weighted total density.
pub fn classical_total_density(r: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(ClassicalError::InvalidRadius(r));
    }
    Ok(r * (2.0 * r.atanh()))
}

/// The mixture `2 ∫_0^r σ P_σ(r) dσ` evaluated by quadrature after the
/// substitution `σ = r sin φ`, which removes the `1/sqrt(r² - σ²)`
/// endpoint singularity:
/// `2 ∫_0^{π/2} r² sin φ / sqrt(1 - r² sin² φ) dφ`.
pub fn classical_total_density_by_quadrature(r: f64, tol: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(ClassicalError::InvalidRadius(r));
    }
    let r2 = r * r;
    let integrand = |phi: f64| {
        let s = phi.sin();
        2.0 * r2 * s / (1.0 - r2 * s * s).sqrt()
    };
    Ok(numerics::integrate(integrand, 0.0, std::f64::consts::FRAC_PI_2, tol)?)
}

/// Which weighting over impact parameters the sampler draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McMode {
    /// density `2σ`
    Paper,
    /// density `3σ sqrt(1 - σ²)`
    Liouville,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    mode: McMode,
    samples: u64,
    bins: usize,
    seed: u64,
    r_max: f64,
}

impl McConfig {
    pub fn new(mode: McMode, samples: u64, bins: usize, seed: u64, r_max: f64) -> Result<Self> {
        if samples == 0 {
            return Err(ClassicalError::InvalidConfig("samples must be at least 1".into()));
        }
        // a density curve needs two grid points
        if bins < 2 {
            return Err(ClassicalError::InvalidConfig("bins must be at least 2".into()));
        }
        if !(r_max > 0.0 && r_max <= 1.0) {
            return Err(ClassicalError::InvalidConfig(format!("r_max = {r_max} is outside (0, 1]")));
        }
        Ok(Self { mode, samples, bins, seed, r_max })
    }

    pub fn mode(&self) -> McMode {
        self.mode
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }
}

/// Draws one chord point: `σ` by inverse transform, then `t` uniform on the
/// half chord.
pub fn draw_chord_sample(mode: McMode, rng: &mut SeededRng) -> ChordSample {
    let u = rng.uniform();
    let sigma = match mode {
        McMode::Paper => u.sqrt(),
        McMode::Liouville => (1.0 - (1.0 - u).powf(2.0 / 3.0)).sqrt(),
    };
    // u < 1 keeps sigma < 1; the clamp only guards rounding
    let sigma = ImpactParameter(sigma.min(1.0 - f64::EPSILON));
    let half_chord = (1.0 - sigma.0 * sigma.0).sqrt();
    let t = rng.uniform() * half_chord;
    ChordSample::new(sigma, t).expect("t lies on the chord by construction")
}

/// Histogram of sampled radii together with its density curve.
#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    pub histogram: Histogram,
    pub curve: DensityCurve,
}

/// Monte Carlo estimate of the radial density on `bins` equal bins over
/// `[0, r_max)`.
///
/// Samples are split into blocks of [`MC_BLOCK_SIZE`]; block `i` uses RNG
/// stream `i`. Blocks run on the current rayon pool and their integer
/// counts are summed, so the result is independent of the thread count.
pub fn mc_radial_density(config: &McConfig) -> Result<McEstimate> {
    let empty = Histogram::uniform(config.bins, 0.0, config.r_max)?;
    let blocks = config.samples.div_ceil(MC_BLOCK_SIZE);
    let partials: Vec<Histogram> = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = SeededRng::with_stream(config.seed, block);
            let mut local = empty.clone();
            let start = block * MC_BLOCK_SIZE;
            let count = MC_BLOCK_SIZE.min(config.samples - start);
            for _ in 0..count {
                local.push(draw_chord_sample(config.mode, &mut rng).r());
            }
            local
        })
        .collect();
    let mut histogram = empty;
    for partial in &partials {
        histogram.merge(partial)?;
    }
    let curve = histogram.to_density_curve()?;
    Ok(McEstimate { histogram, curve })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_singular, EndpointSingularity};

    fn sigma(s: f64) -> ImpactParameter {
        ImpactParameter::new(s).unwrap()
    }

    /// `p_sigma`, except inside the guard band `|r - σ| < 1e-15` where the
    /// raw expression is still finite and exact (`r - σ` is exact there).
    fn chord_density(r: f64, s: f64) -> f64 {
        match p_sigma(r, sigma(s)) {
            Ok(p) => p,
            Err(ClassicalError::Singular(_)) if r > s => {
                r / ((1.0 - s * s).sqrt() * ((r - s) * (r + s)).sqrt())
            }
            Err(ClassicalError::Singular(_)) => 0.0,
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn p_sigma_examples() {
        for &r in &[0.01, 0.3, 0.77, 1.0] {
            assert!((p_sigma(r, sigma(0.0)).unwrap() - 1.0).abs() < 1e-15);
        }
        let expected = 0.8 / (0.75f64.sqrt() * 0.39f64.sqrt());
        assert!((p_sigma(0.8, sigma(0.5)).unwrap() - expected).abs() < 1e-14);
        assert!((expected - 1.4792005232672).abs() < 1e-12);
        assert_eq!(p_sigma(0.3, sigma(0.5)).unwrap(), 0.0);
        assert_eq!(p_sigma(0.5, sigma(0.5)), Err(ClassicalError::Singular(0.5)));
        assert!(p_sigma(1.2, sigma(0.5)).is_err());
        assert!(ImpactParameter::new(1.0).is_err());
        assert!(ImpactParameter::new(-0.1).is_err());
    }

    #[test]
    fn weight_examples() {
        assert_eq!(angular_momentum_weight(sigma(0.0)), 0.0);
        assert!(angular_momentum_weight(sigma(1.0 - 1e-12)) < 1e-5);
        let mass = numerics::integrate(|s| angular_momentum_weight(sigma(s)), 0.0, 1.0 - 1e-16, 1e-12).unwrap();
        assert!((mass - 1.0).abs() < 1e-10, "{mass}");
    }

    #[test]
    fn total_density_examples() {
        assert_eq!(classical_total_density(0.0).unwrap(), 0.0);
        assert!((classical_total_density(0.5).unwrap() - 0.5 * 3f64.ln()).abs() < 1e-15);
        assert!((classical_total_density(0.5).unwrap() - 0.5493061443).abs() < 1e-10);
        assert!(classical_total_density(1.0).is_err());
        assert!(classical_total_density(1.5).is_err());
        let mass = integrate_singular(
            |r| classical_total_density(r).unwrap(),
            0.0,
            1.0,
            1e-11,
            EndpointSingularity::LogRight,
        )
        .unwrap();
        assert!((mass - 1.0).abs() < 1e-9);
    }

    #[test]
    fn total_density_is_increasing() {
        let values: Vec<f64> = (1..=99).map(|i| classical_total_density(i as f64 / 100.0).unwrap()).collect();
        assert!(values.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn quadrature_route_matches_closed_form() {
        for i in 1..=99 {
            let r = i as f64 / 100.0;
            let q = classical_total_density_by_quadrature(r, 1e-12).unwrap();
            assert!((q - classical_total_density(r).unwrap()).abs() < 1e-10, "r={r}");
        }
        let q = classical_total_density_by_quadrature(0.99, 1e-12).unwrap();
        assert!((q - 0.99 * 199f64.ln()).abs() < 1e-10);
        assert!((q - 5.2403717764772).abs() < 1e-10);
        assert!(classical_total_density_by_quadrature(1e-6, 1e-14).unwrap() < 1e-11);
        assert!(classical_total_density_by_quadrature(0.0, 1e-12).is_err());
    }

    /// Mixture identities checked on the raw integrand over σ, with the
    /// `1/sqrt(r - σ)` endpoint removed by substitution.
    #[test]
    fn mixture_identities() {
        for i in 1..=19 {
            let r = i as f64 / 20.0;
            let paper = integrate_singular(
                |s| 2.0 * s * chord_density(r, s),
                0.0,
                r,
                1e-12,
                EndpointSingularity::InvSqrtRight,
            )
            .unwrap();
            assert!((paper - classical_total_density(r).unwrap()).abs() < 1e-8, "r={r}");
            let liouville = integrate_singular(
                |s| 3.0 * s * (1.0 - s * s).sqrt() * chord_density(r, s),
                0.0,
                r,
                1e-12,
                EndpointSingularity::InvSqrtRight,
            )
            .unwrap();
            assert!((liouville - 3.0 * r * r).abs() < 1e-8, "r={r}");
        }
    }

    #[test]
    fn each_chord_density_is_normalized() {
        for &s in &[0.0, 0.25, 0.5, 0.9] {
            let mass = integrate_singular(
                |r| chord_density(r, s),
                s,
                1.0,
                1e-12,
                EndpointSingularity::InvSqrtLeft,
            )
            .unwrap();
            assert!((mass - 1.0).abs() < 1e-9, "sigma={s}: {mass}");
        }
    }

    #[test]
    fn chord_sample_geometry() {
        let c = ChordSample::new(sigma(0.6), 0.8).unwrap();
        assert!((c.r() - 1.0).abs() < 1e-15);
        assert!(ChordSample::new(sigma(0.6), 0.81).is_err());
        let mut rng = SeededRng::new(3);
        for mode in [McMode::Paper, McMode::Liouville] {
            for _ in 0..1000 {
                let c = draw_chord_sample(mode, &mut rng);
                let s = c.sigma().value();
                assert!(s <= c.r() && c.r() <= 1.0);
                assert!((c.r() * c.r() - c.t() * c.t() - s * s).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn config_validation() {
        assert!(McConfig::new(McMode::Paper, 0, 10, 1, 0.99).is_err());
        assert!(McConfig::new(McMode::Paper, 10, 1, 1, 0.99).is_err());
        assert!(McConfig::new(McMode::Paper, 10, 10, 1, 1.5).is_err());
        assert!(McConfig::new(McMode::Paper, 10, 10, 1, 1.0).is_ok());
    }

    #[test]
    fn single_sample_fills_one_bin() {
        let config = McConfig::new(McMode::Paper, 1, 10, 5, 1.0).unwrap();
        let est = mc_radial_density(&config).unwrap();
        assert_eq!(est.histogram.counts().iter().filter(|&&c| c == 1).count(), 1);
        assert_eq!(est.histogram.in_range(), 1);
    }

    #[test]
    fn thread_count_does_not_change_result() {
        let config = McConfig::new(McMode::Liouville, 300_000, 50, 11, 0.99).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| mc_radial_density(&config).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn paper_mode_converges_to_log_density() {
        let config = McConfig::new(McMode::Paper, 2_000_000, 50, 42, 0.99).unwrap();
        let est = mc_radial_density(&config).unwrap();
        let peak = classical_total_density(0.99).unwrap();
        for (r, v) in est.curve.iter() {
            assert!((v - classical_total_density(r).unwrap()).abs() < 0.02 * peak, "r={r} v={v}");
        }
        assert!(est.histogram.in_range() <= config.samples());
    }
}
