use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use super::{NumericsError, Result};

const MAX_DEPTH: u32 = 60;
const MAX_PANELS: usize = 1_000_000;
/// Lower cut used for logarithmic right-endpoint singularities.
const LOG_TAIL_CUT: f64 = 1e-12;

/// An `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes from Newton iteration on `P_n`, weights `2 / ((1 - x²) P_n'(x)²)`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut derivative = 1.0;
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                derivative = dp;
                let dx = p / dp;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            if dp.is_finite() {
                derivative = dp;
            }
            let w = 2.0 / ((1.0 - x * x) * derivative * derivative);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Single-panel estimate of `∫_a^b f`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

fn rules() -> &'static (GaussLegendre, GaussLegendre) {
    static RULES: OnceLock<(GaussLegendre, GaussLegendre)> = OnceLock::new();
    RULES.get_or_init(|| (GaussLegendre::new(15), GaussLegendre::new(7)))
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    estimate: f64,
    error: f64,
    depth: u32,
}

impl Panel {
    fn new(f: &impl Fn(f64) -> f64, lo: f64, hi: f64, depth: u32) -> Self {
        let (fine, coarse) = rules();
        let estimate = fine.integrate(f, lo, hi);
        let error = (estimate - coarse.integrate(f, lo, hi)).abs();
        Self { lo, hi, estimate, error, depth }
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then(other.lo.total_cmp(&self.lo))
    }
}

/// Adaptive bisection with 15-point Gauss–Legendre panels. Each panel's
/// error is estimated by the 7-point rule on the same panel; the panel with
/// the largest estimate is bisected until the summed estimate is within
/// `tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(NumericsError::InvalidInterval { a, b });
    }
    let failure = NumericsError::NoConvergence { a, b, tol };
    let first = Panel::new(&f, a, b, 0);
    let mut total_error = first.error;
    let mut total = first.estimate;
    let mut panels = BinaryHeap::from([first]);

    while total_error > tol.max(64.0 * f64::EPSILON * total.abs()) {
        if !total.is_finite() || panels.len() > MAX_PANELS {
            return Err(failure);
        }
        let worst = panels.pop().expect("at least one panel");
        if worst.depth >= MAX_DEPTH {
            return Err(failure);
        }
        let mid = 0.5 * (worst.lo + worst.hi);
        let left = Panel::new(&f, worst.lo, mid, worst.depth + 1);
        let right = Panel::new(&f, mid, worst.hi, worst.depth + 1);
        total += left.estimate + right.estimate - worst.estimate;
        total_error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }

    // resum in interval order so the result does not depend on heap layout
    let mut finished = panels.into_vec();
    finished.sort_by(|p, q| p.lo.total_cmp(&q.lo));
    Ok(finished.iter().map(|p| p.estimate).sum())
}

/// Kind of integrable endpoint singularity to remove by substitution before
/// adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndpointSingularity {
    None,
    /// `(x - a)^{-1/2}`: `x = a + (b - a) s²`.
    InvSqrtLeft,
    /// `(b - x)^{-1/2}`: `x = b - (b - a) s²`.
    InvSqrtRight,
    /// `log(b - x)`: `x = b - (b - a) e^{-u}`, truncated where `b - x`
    /// reaches `1e-12`.
    LogRight,
}

pub fn integrate_singular(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    singularity: EndpointSingularity,
) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(NumericsError::InvalidInterval { a, b });
    }
    let width = b - a;
    match singularity {
        EndpointSingularity::None => integrate(f, a, b, tol),
        EndpointSingularity::InvSqrtLeft => {
            integrate(|s| 2.0 * width * s * f(a + width * s * s), 0.0, 1.0, tol)
        }
        EndpointSingularity::InvSqrtRight => {
            integrate(|s| 2.0 * width * s * f(b - width * s * s), 0.0, 1.0, tol)
        }
        EndpointSingularity::LogRight => {
            let u_max = (width / LOG_TAIL_CUT).ln().max(1.0);
            integrate(
                |u| {
                    let gap = width * (-u).exp();
                    gap * f(b - gap)
                },
                0.0,
                u_max,
                tol,
            )
        }
    }
}
