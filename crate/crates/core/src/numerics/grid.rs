use super::{NumericsError, Result};

/// Strictly increasing radial abscissae in `[0, 1]`, in units of the well
/// radius. `r_max` is the last point.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    points: Vec<f64>,
}

impl RadialGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(NumericsError::InvalidGrid("need at least two points".into()));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(NumericsError::InvalidGrid("non-finite point".into()));
        }
        if points[0] < 0.0 {
            return Err(NumericsError::InvalidGrid("first point is negative".into()));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(NumericsError::InvalidGrid("points are not strictly increasing".into()));
        }
        let last = points[points.len() - 1];
        if last > 1.0 {
            return Err(NumericsError::InvalidGrid(format!("r_max = {last} exceeds 1")));
        }
        Ok(Self { points })
    }

    /// `n` equally spaced points from 0 to `r_max` inclusive.
    pub fn uniform(n: usize, r_max: f64) -> Result<Self> {
        check_r_max(r_max)?;
        if n < 2 {
            return Err(NumericsError::InvalidGrid("need at least two points".into()));
        }
        let last = (n - 1) as f64;
        let mut points: Vec<f64> = (0..n).map(|i| r_max * i as f64 / last).collect();
        points[n - 1] = r_max;
        Self::new(points)
    }

    /// Midpoints of `cells` equal cells covering `[0, upper]`.
    pub fn midpoints(cells: usize, upper: f64) -> Result<Self> {
        check_r_max(upper)?;
        let width = upper / cells as f64;
        Self::new((0..cells).map(|i| (i as f64 + 0.5) * width).collect())
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn r_max(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    /// Trapezoidal integral of `values` sampled on this grid.
    pub fn trapezoid(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.points.len());
        self.points
            .windows(2)
            .zip(values.windows(2))
            .map(|(r, v)| 0.5 * (r[1] - r[0]) * (v[0] + v[1]))
            .sum()
    }
}

fn check_r_max(r_max: f64) -> Result<()> {
    if r_max > 0.0 && r_max <= 1.0 {
        Ok(())
    } else {
        Err(NumericsError::InvalidGrid(format!("r_max = {r_max} is outside (0, 1]")))
    }
}

/// A radial probability density sampled on a grid (probability per unit
/// radius, radius in units of the well radius).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityCurve {
    grid: RadialGrid,
    values: Vec<f64>,
}

impl DensityCurve {
    pub fn new(grid: RadialGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(NumericsError::InvalidCurve(format!(
                "{} values for {} grid points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(NumericsError::InvalidCurve(format!("value {bad} is negative or not finite")));
        }
        Ok(Self { grid, values })
    }

    /// Samples `density` at every grid point.
    pub fn from_fn<E>(grid: RadialGrid, density: impl Fn(f64) -> std::result::Result<f64, E>) -> std::result::Result<Self, E>
    where
        E: From<NumericsError>,
    {
        let values = grid.points().iter().map(|&r| density(r)).collect::<std::result::Result<Vec<_>, E>>()?;
        Ok(Self::new(grid, values)?)
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Trapezoidal mass over the grid.
    pub fn mass(&self) -> f64 {
        self.grid.trapezoid(&self.values)
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.points().iter().copied().zip(self.values.iter().copied())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    L1,
    Sup,
}

/// Distance between two curves on an identical grid: trapezoidal integral of
/// `|p - q|` for `L1`, the largest pointwise gap for `Sup`.
pub fn curve_distance(p: &DensityCurve, q: &DensityCurve, metric: Metric) -> Result<f64> {
    if p.grid != q.grid {
        return Err(NumericsError::GridMismatch);
    }
    let gaps: Vec<f64> = p.values.iter().zip(&q.values).map(|(a, b)| (a - b).abs()).collect();
    Ok(match metric {
        Metric::L1 => p.grid.trapezoid(&gaps),
        Metric::Sup => gaps.iter().copied().fold(0.0, f64::max),
    })
}
