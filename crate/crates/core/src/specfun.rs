//! Real-argument special functions: spherical Bessel, Neumann and Hankel
//! functions, associated Legendre functions, spherical harmonics and the
//! positive zeros of `j_l`.
//!
//! Everything here is a pure function of its arguments and evaluated in
//! binary64.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

/// Largest order accepted by the Bessel routines.
pub const MAX_ORDER: u32 = 100_000;

/// Downward-recurrence values above this are rescaled by its reciprocal.
const RESCALE_THRESHOLD: f64 = 1e280;
const RESCALE_FACTOR: f64 = 1e-280;

const ZERO_BISECTION_TOL: f64 = 1e-13;
const ZERO_MAX_ITER: usize = 400;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecfunError {
    #[error("order {0} exceeds the supported maximum {MAX_ORDER}")]
    OrderOverflow(u32),
    #[error("invalid argument {0}: must be finite and non-negative")]
    InvalidArgument(f64),
    #[error("pole at x = 0")]
    Pole,
    #[error("invalid degree/order pair l = {l}, m = {m}")]
    InvalidDegreeOrder { l: u32, m: i64 },
    #[error("invalid angle theta = {theta}, phi = {phi}")]
    InvalidAngle { theta: f64, phi: f64 },
    #[error("zero index must be at least 1")]
    InvalidZeroIndex,
    #[error("root search for zero {k} of j_{l} did not converge")]
    NoConvergence { l: u32, k: u32 },
}

pub type Result<T> = std::result::Result<T, SpecfunError>;

/// Polar and azimuthal angle in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularPoint {
    theta: f64,
    phi: f64,
}

impl AngularPoint {
    /// `theta` must lie in `[0, π]` and `phi` in `[0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        let theta_ok = (0.0..=PI).contains(&theta);
        let phi_ok = (0.0..2.0 * PI).contains(&phi);
        if theta_ok && phi_ok {
            Ok(Self { theta, phi })
        } else {
            Err(SpecfunError::InvalidAngle { theta, phi })
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// Orders `0..=l_max` of `j_l` at a single argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselOrderRange {
    l_max: u32,
    x: f64,
}

impl BesselOrderRange {
    pub fn new(l_max: u32, x: f64) -> Result<Self> {
        check_order(l_max)?;
        check_argument(x)?;
        Ok(Self { l_max, x })
    }

    pub fn l_max(&self) -> u32 {
        self.l_max
    }

    pub fn x(&self) -> f64 {
        self.x
    }
}

fn check_order(l: u32) -> Result<()> {
    if l > MAX_ORDER {
        Err(SpecfunError::OrderOverflow(l))
    } else {
        Ok(())
    }
}

fn check_argument(x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(SpecfunError::InvalidArgument(x))
    }
}

fn check_positive_argument(x: f64) -> Result<()> {
    check_argument(x)?;
    if x == 0.0 {
        Err(SpecfunError::Pole)
    } else {
        Ok(())
    }
}

/// Spherical Bessel function of the first kind, `j_l(x)`.
///
/// Ascending series for small arguments, upward recurrence for `x > l`
/// and Miller's downward recurrence in between.
pub fn sph_bessel_j(l: u32, x: f64) -> Result<f64> {
    check_order(l)?;
    check_argument(x)?;
    if x == 0.0 {
        return Ok(if l == 0 { 1.0 } else { 0.0 });
    }
    let order = f64::from(l);
    if x < 0.5 || x < 0.1 * order {
        return Ok(ascending_series(l, x));
    }
    if x > order {
        return Ok(*upward_j(l, x).last().expect("non-empty"));
    }
    Ok(miller_j(l, x, false)[0])
}

/// `j_0(x), …, j_{l_max}(x)` in one recurrence sweep.
pub fn sph_bessel_j_all(range: BesselOrderRange) -> Vec<f64> {
    let BesselOrderRange { l_max, x } = range;
    if x == 0.0 {
        let mut out = vec![0.0; l_max as usize + 1];
        out[0] = 1.0;
        return out;
    }
    if x > f64::from(l_max) {
        upward_j(l_max, x)
    } else {
        miller_j(l_max, x, true)
    }
}

fn ascending_series(l: u32, x: f64) -> f64 {
    // x^l / (2l+1)!!
    let mut prefactor = 1.0;
    for i in 1..=l {
        prefactor *= x / f64::from(2 * i + 1);
        if prefactor == 0.0 {
            return 0.0;
        }
    }
    let half_x2 = -0.5 * x * x;
    let two_l = 2.0 * f64::from(l);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let kf = f64::from(k);
        term *= half_x2 / (kf * (two_l + 2.0 * kf + 1.0));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    prefactor * sum
}

fn j0_j1(x: f64) -> (f64, f64) {
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    (j0, (j0 - c) / x)
}

fn upward_j(l_max: u32, x: f64) -> Vec<f64> {
    let (j0, j1) = j0_j1(x);
    let mut out = Vec::with_capacity(l_max as usize + 1);
    out.push(j0);
    if l_max >= 1 {
        out.push(j1);
    }
    for k in 1..l_max as usize {
        let next = (2 * k + 1) as f64 / x * out[k] - out[k - 1];
        out.push(next);
    }
    out
}

/// Miller's algorithm. With `keep_all` the result holds orders `0..=l`,
/// otherwise a single element with order `l`.
fn miller_j(l: u32, x: f64, keep_all: bool) -> Vec<f64> {
    let order = f64::from(l);
    let extra = (40.0 * order).sqrt().ceil().max(20.0) as usize;
    let start = l as usize + extra;

    let mut stored = if keep_all {
        vec![0.0; l as usize + 1]
    } else {
        vec![0.0; 1]
    };
    let store = |k: usize, v: f64, stored: &mut Vec<f64>| {
        if keep_all {
            if k <= l as usize {
                stored[k] = v;
            }
        } else if k == l as usize {
            stored[0] = v;
        }
    };

    // f_{k+1}, f_k
    let mut above = 0.0;
    let mut current = 1.0;
    store(start, current, &mut stored);
    let mut f1 = 0.0;
    for k in (1..=start).rev() {
        let below = (2 * k + 1) as f64 / x * current - above;
        above = current;
        current = below;
        if current.abs() > RESCALE_THRESHOLD {
            current *= RESCALE_FACTOR;
            above *= RESCALE_FACTOR;
            for v in stored.iter_mut() {
                *v *= RESCALE_FACTOR;
            }
        }
        store(k - 1, current, &mut stored);
        if k == 1 {
            f1 = above;
        }
    }
    let f0 = current;

    // normalize on whichever of j_0, j_1 is larger in magnitude
    let (j0, j1) = j0_j1(x);
    let scale = if j0.abs() >= j1.abs() { j0 / f0 } else { j1 / f1 };
    for v in stored.iter_mut() {
        *v *= scale;
    }
    stored
}

/// Spherical Neumann function `n_l(x)`, `n_0(x) = -cos x / x`.
pub fn sph_bessel_n(l: u32, x: f64) -> Result<f64> {
    Ok(*sph_bessel_n_all(l, x)?.last().expect("non-empty"))
}

/// `n_0(x), …, n_{l_max}(x)` by upward recurrence (stable for the
/// dominant solution). Large orders at small `x` overflow to `-inf`.
pub fn sph_bessel_n_all(l_max: u32, x: f64) -> Result<Vec<f64>> {
    check_order(l_max)?;
    check_positive_argument(x)?;
    let (s, c) = x.sin_cos();
    let n0 = -c / x;
    let mut out = Vec::with_capacity(l_max as usize + 1);
    out.push(n0);
    if l_max >= 1 {
        out.push((n0 - s) / x);
    }
    for k in 1..l_max as usize {
        let next = (2 * k + 1) as f64 / x * out[k] - out[k - 1];
        out.push(next);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HankelKind {
    First,
    Second,
}

/// Zeroth-order spherical Hankel function:
/// `h0(1)(x) = -i e^{ix} / x`, `h0(2)(x) = i e^{-ix} / x`.
pub fn sph_hankel0(kind: HankelKind, x: f64) -> Result<Complex64> {
    check_positive_argument(x)?;
    let (s, c) = x.sin_cos();
    let first = Complex64::new(s / x, -c / x);
    Ok(match kind {
        HankelKind::First => first,
        HankelKind::Second => first.conj(),
    })
}

/// Associated Legendre function `P_l^m(u)` for `0 <= m <= l`, without the
/// Condon–Shortley phase.
pub fn assoc_legendre(l: u32, m: u32, u: f64) -> Result<f64> {
    if m > l {
        return Err(SpecfunError::InvalidDegreeOrder { l, m: i64::from(m) });
    }
    if !(-1.0..=1.0).contains(&u) {
        return Err(SpecfunError::InvalidArgument(u));
    }
    let sin_theta = ((1.0 - u) * (1.0 + u)).sqrt();
    let mut p_mm = 1.0;
    let mut odd = 1.0;
    for _ in 0..m {
        p_mm *= odd * sin_theta;
        odd += 2.0;
    }
    if l == m {
        return Ok(p_mm);
    }
    let mf = f64::from(m);
    let mut prev = p_mm;
    let mut cur = u * (2.0 * mf + 1.0) * p_mm;
    for ll in (m + 2)..=l {
        let lf = f64::from(ll);
        let next = (u * (2.0 * lf - 1.0) * cur - (lf + mf - 1.0) * prev) / (lf - mf);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Spherical harmonic
/// `Y_l^m = (-1)^{(m+|m|)/2} sqrt((2l+1)/4π · (l-|m|)!/(l+|m|)!) P_l^{|m|}(cos θ) e^{imφ}`.
pub fn sph_harmonic(l: u32, m: i32, point: AngularPoint) -> Result<Complex64> {
    let abs_m = m.unsigned_abs();
    if abs_m > l {
        return Err(SpecfunError::InvalidDegreeOrder { l, m: i64::from(m) });
    }
    let phase = if m > 0 && m % 2 == 1 { -1.0 } else { 1.0 };
    let mut ratio = 1.0;
    for i in (l - abs_m + 1)..=(l + abs_m) {
        ratio /= f64::from(i);
    }
    let norm = ((2.0 * f64::from(l) + 1.0) / (4.0 * PI) * ratio).sqrt();
    let legendre = assoc_legendre(l, abs_m, point.theta.cos().clamp(-1.0, 1.0))?;
    let azimuth = Complex64::from_polar(1.0, f64::from(m) * point.phi);
    Ok(azimuth * (phase * norm * legendre))
}

/// The `k`-th positive zero of `j_l`.
pub fn sph_bessel_zero(l: u32, k: u32) -> Result<f64> {
    check_order(l)?;
    if k == 0 {
        return Err(SpecfunError::InvalidZeroIndex);
    }
    let j = |x: f64| sph_bessel_j(l, x).expect("positive finite argument");

    let (mut lo, mut hi) = match mcmahon_bracket(l, k, &j) {
        Some(bracket) => bracket,
        None => scan_bracket(l, k, &j)?,
    };
    let mut f_lo = j(lo);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    let mut iterations = 0;
    while hi - lo > ZERO_BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = j(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        iterations += 1;
        if iterations > ZERO_MAX_ITER {
            return Err(SpecfunError::NoConvergence { l, k });
        }
    }

    let mut root = 0.5 * (lo + hi);
    for _ in 0..2 {
        let value = j(root);
        let slope = j_derivative(l, root);
        if slope == 0.0 || !slope.is_finite() {
            break;
        }
        let polished = root - value / slope;
        // a Newton step may only refine, never leave the bracket
        if polished >= lo - ZERO_BISECTION_TOL && polished <= hi + ZERO_BISECTION_TOL {
            root = polished;
        }
    }
    Ok(root)
}

/// `j_l'(x) = j_{l-1}(x) - (l+1)/x · j_l(x)`, with `j_0' = -j_1`.
fn j_derivative(l: u32, x: f64) -> f64 {
    let all = sph_bessel_j_all(BesselOrderRange { l_max: l + 1, x });
    let l = l as usize;
    if l == 0 {
        -all[1]
    } else {
        all[l - 1] - (l as f64 + 1.0) / x * all[l]
    }
}

/// McMahon's expansion for zeros of `J_{l+1/2}`; used when `k >= l`, where
/// its error is far below the `π/4` half-width of the bracket.
fn mcmahon_bracket(l: u32, k: u32, j: &impl Fn(f64) -> f64) -> Option<(f64, f64)> {
    if k < l {
        return None;
    }
    let nu = f64::from(l) + 0.5;
    let mu = 4.0 * nu * nu;
    let beta = (f64::from(k) + 0.5 * nu - 0.25) * PI;
    let eight_beta = 8.0 * beta;
    let guess = beta
        - (mu - 1.0) / eight_beta
        - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * eight_beta.powi(3))
        - 32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0)
            / (15.0 * eight_beta.powi(5));
    let lo = (guess - 0.25 * PI).max(f64::MIN_POSITIVE);
    let hi = guess + 0.25 * PI;
    let (a, b) = (j(lo), j(hi));
    if a == 0.0 {
        return Some((lo, lo));
    }
    if (a > 0.0) != (b > 0.0) {
        Some((lo, hi))
    } else {
        None
    }
}

/// Counts sign changes upward from `l + 1/2`, below which `j_l` has no
/// zeros. Consecutive zeros are at least `π` apart so a `π/2` step cannot
/// skip one.
fn scan_bracket(l: u32, k: u32, j: &impl Fn(f64) -> f64) -> Result<(f64, f64)> {
    let step = 0.5 * PI;
    let mut x = f64::from(l) + 0.5;
    let mut fx = j(x);
    let mut found = 0;
    let max_steps = 4 * (k as usize + l as usize + 16);
    for _ in 0..max_steps {
        let next = x + step;
        let f_next = j(next);
        if f_next == 0.0 || (f_next > 0.0) != (fx > 0.0) {
            found += 1;
            if found == k {
                return Ok((x, next));
            }
            if f_next == 0.0 {
                // land strictly past an exact zero
                x = next + 1e-9;
                fx = j(x);
                continue;
            }
        }
        x = next;
        fx = f_next;
    }
    Err(SpecfunError::NoConvergence { l, k })
}
