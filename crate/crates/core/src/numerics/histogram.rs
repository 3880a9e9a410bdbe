use super::{DensityCurve, NumericsError, RadialGrid, Result};

/// Counts over half-open bins `[e_i, e_{i+1})`. Samples outside the edges
/// count towards the total but land in no bin.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    bin_edges: Vec<f64>,
    counts: Vec<u64>,
    samples: u64,
}

impl Histogram {
    pub fn new(bin_edges: Vec<f64>) -> Result<Self> {
        if bin_edges.len() < 2 {
            return Err(NumericsError::InvalidEdges("need at least two edges".into()));
        }
        if bin_edges.iter().any(|e| !e.is_finite()) || bin_edges.windows(2).any(|w| w[1] <= w[0]) {
            return Err(NumericsError::InvalidEdges("edges must be finite and strictly increasing".into()));
        }
        let bins = bin_edges.len() - 1;
        Ok(Self { bin_edges, counts: vec![0; bins], samples: 0 })
    }

    /// `bins` equal-width bins on `[lo, hi)`.
    pub fn uniform(bins: usize, lo: f64, hi: f64) -> Result<Self> {
        if bins == 0 || !(lo < hi) {
            return Err(NumericsError::InvalidEdges(format!("{bins} bins on [{lo}, {hi})")));
        }
        let width = (hi - lo) / bins as f64;
        let mut edges: Vec<f64> = (0..=bins).map(|i| lo + width * i as f64).collect();
        edges[bins] = hi;
        Self::new(edges)
    }

    pub fn push(&mut self, x: f64) {
        self.samples += 1;
        let above = self.bin_edges.partition_point(|&e| e <= x);
        if above >= 1 && above < self.bin_edges.len() {
            self.counts[above - 1] += 1;
        }
    }

    /// Adds another histogram's counts. Integer sums, so the result does not
    /// depend on merge order.
    pub fn merge(&mut self, other: &Histogram) -> Result<()> {
        if self.bin_edges != other.bin_edges {
            return Err(NumericsError::InvalidEdges("cannot merge histograms with different edges".into()));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.samples += other.samples;
        Ok(())
    }

    pub fn bin_edges(&self) -> &[f64] {
        &self.bin_edges
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of samples pushed, in range or not.
    pub fn total_weight(&self) -> f64 {
        self.samples as f64
    }

    pub fn in_range(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn bin_midpoints(&self) -> Vec<f64> {
        self.bin_edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Density `count / (N · width)` placed at each bin midpoint.
    pub fn to_density_curve(&self) -> Result<DensityCurve> {
        if self.samples == 0 {
            return Err(NumericsError::EmptySamples);
        }
        let n = self.total_weight();
        let values = self
            .bin_edges
            .windows(2)
            .zip(&self.counts)
            .map(|(w, &c)| c as f64 / (n * (w[1] - w[0])))
            .collect();
        DensityCurve::new(RadialGrid::new(self.bin_midpoints())?, values)
    }
}

pub fn accumulate_histogram(samples: &[f64], bin_edges: &[f64]) -> Result<Histogram> {
    if samples.is_empty() {
        return Err(NumericsError::EmptySamples);
    }
    let mut histogram = Histogram::new(bin_edges.to_vec())?;
    for &x in samples {
        histogram.push(x);
    }
    Ok(histogram)
}
