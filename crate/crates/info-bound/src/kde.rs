//! Frame-averaged Gaussian kernel density estimation on fixed grids.
//!
//! For each frame a Gaussian-kernel density is evaluated on the shared grid
//! and normalized by numerical (trapezoidal) integration; the per-frame
//! densities are then averaged. Kernels are truncated at +-5 sigma, which the
//! per-frame normalization absorbs.
//!
//! Zero-variance data cannot support a data-driven bandwidth; such an axis is
//! marked degenerate and its density collapses to a delta at the nearest grid
//! node (logged as a warning by the callers that hit it).

use serde::{Deserialize, Serialize};

use crate::error::InfoError;

/// Kernel truncation radius in bandwidths.
const KERNEL_TAIL_SIGMAS: f64 = 5.0;

/// Grid span padding beyond the data range, in bandwidths.
const GRID_PAD_SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KdeConfig {
    /// Grid nodes per axis.
    pub bin_count: usize,
    /// Bandwidth factor k in `h = k * range / bin_count`.
    pub bandwidth_scale: f64,
    /// Subsequence length in samples.
    pub frame_len: usize,
    /// Hop between subsequent frames in samples.
    pub frame_hop: usize,
}

impl Default for KdeConfig {
    fn default() -> Self {
        Self {
            bin_count: 128,
            bandwidth_scale: 1.0,
            frame_len: 4096,
            frame_hop: 4096,
        }
    }
}

impl KdeConfig {
    pub fn validate(&self) -> Result<(), InfoError> {
        if self.bin_count < 8 {
            return Err(InfoError::InvalidArgument(format!(
                "bin_count {} must be >= 8",
                self.bin_count
            )));
        }
        if !(self.bandwidth_scale > 0.0) {
            return Err(InfoError::InvalidArgument(
                "bandwidth_scale must be positive".into(),
            ));
        }
        if self.frame_len == 0 || self.frame_hop == 0 {
            return Err(InfoError::InvalidArgument(
                "frame_len and frame_hop must be positive".into(),
            ));
        }
        if self.frame_hop > self.frame_len {
            return Err(InfoError::InvalidArgument(format!(
                "frame_hop {} must not exceed frame_len {}",
                self.frame_hop, self.frame_len
            )));
        }
        Ok(())
    }
}

/// A fixed ascending evaluation grid for one axis, with the data-driven
/// bandwidth attached.
#[derive(Debug, Clone)]
pub struct GridAxis {
    pub nodes: Vec<f64>,
    pub step: f64,
    pub bandwidth: f64,
    pub degenerate: bool,
    lo: f64,
    hi: f64,
}

impl GridAxis {
    /// Build the shared grid `[min - 3h, max + 3h]` for a value set, with
    /// `h = bandwidth_scale * range / bin_count`.
    pub fn from_values(values: &[f64], config: &KdeConfig) -> Result<Self, InfoError> {
        if values.is_empty() {
            return Err(InfoError::InvalidArgument("no values for grid".into()));
        }
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for &v in values {
            min = min.min(v);
            max = max.max(v);
        }
        let range = max - min;
        if range == 0.0 {
            // Delta-like data; pick an arbitrary unit span around the value.
            return Ok(Self::build(min - 0.5, min + 0.5, config.bin_count, 0.0, true));
        }
        let h = config.bandwidth_scale * range / config.bin_count as f64;
        Ok(Self::build(
            min - GRID_PAD_SIGMAS * h,
            max + GRID_PAD_SIGMAS * h,
            config.bin_count,
            h,
            false,
        ))
    }

    /// Build an explicit uniform grid.
    pub fn uniform(lo: f64, hi: f64, bin_count: usize, bandwidth: f64) -> Result<Self, InfoError> {
        if !(hi > lo) || bin_count < 2 {
            return Err(InfoError::InvalidArgument(
                "grid needs hi > lo and at least 2 nodes".into(),
            ));
        }
        Ok(Self::build(lo, hi, bin_count, bandwidth, false))
    }

    fn build(lo: f64, hi: f64, bin_count: usize, bandwidth: f64, degenerate: bool) -> Self {
        let step = (hi - lo) / (bin_count - 1) as f64;
        let nodes = (0..bin_count).map(|i| lo + i as f64 * step).collect();
        Self {
            nodes,
            step,
            bandwidth,
            degenerate,
            lo,
            hi,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn covers(&self, v: f64) -> bool {
        v >= self.lo - 1e-12 && v <= self.hi + 1e-12
    }

    fn nearest(&self, v: f64) -> usize {
        let idx = ((v - self.lo) / self.step).round();
        (idx.max(0.0) as usize).min(self.nodes.len() - 1)
    }

    /// Trapezoidal cell measure of node `i` (half-width end cells).
    pub fn cell_measure(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.nodes.len() {
            0.5 * self.step
        } else {
            self.step
        }
    }
}

/// Averaged 1-D density estimate on a fixed grid.
#[derive(Debug, Clone)]
pub struct Density1d {
    pub grid: Vec<f64>,
    pub pdf: Vec<f64>,
    /// Deviation of the averaged density's integral from 1 before the final
    /// exact renormalization.
    pub normalization_residual: f64,
    pub degenerate: bool,
    pub step: f64,
}

/// Averaged 2-D density estimate; `pdf` is row-major over (x, y) nodes.
#[derive(Debug, Clone)]
pub struct Density2d {
    pub grid_x: Vec<f64>,
    pub grid_y: Vec<f64>,
    pub pdf: Vec<f64>,
    pub normalization_residual: f64,
    pub degenerate: bool,
    pub step_x: f64,
    pub step_y: f64,
}

/// Deposit the (truncated) kernel weights of one value onto the grid.
#[inline]
fn deposit(axis: &GridAxis, bandwidth: f64, v: f64, acc: &mut [f64]) {
    if axis.degenerate || bandwidth == 0.0 {
        acc[axis.nearest(v)] += 1.0;
        return;
    }
    let radius = ((KERNEL_TAIL_SIGMAS * bandwidth / axis.step).ceil() as usize).max(2);
    let center = axis.nearest(v);
    let lo = center.saturating_sub(radius);
    let hi = (center + radius).min(axis.nodes.len() - 1);
    let inv = 1.0 / bandwidth;
    for i in lo..=hi {
        let u = (axis.nodes[i] - v) * inv;
        acc[i] += (-0.5 * u * u).exp();
    }
}

fn trapz_1d(axis: &GridAxis, values: &[f64]) -> f64 {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| v * axis.cell_measure(i))
        .sum()
}

/// Per-frame Gaussian KDE on `grid`, averaged across frames.
pub fn kde_pdf_1d(
    frames: &[&[f64]],
    grid: &GridAxis,
    bandwidth: f64,
) -> Result<Density1d, InfoError> {
    if frames.is_empty() || frames.iter().any(|f| f.is_empty()) {
        return Err(InfoError::InvalidArgument(
            "need at least one non-empty frame".into(),
        ));
    }
    if !grid.degenerate && !(bandwidth > 0.0) {
        return Err(InfoError::InvalidArgument(
            "bandwidth must be positive".into(),
        ));
    }
    for frame in frames {
        if let Some(v) = frame.iter().find(|v| !grid.covers(**v)) {
            return Err(InfoError::InvalidArgument(format!(
                "value {v} outside the evaluation grid"
            )));
        }
    }

    let n = grid.len();
    let mut avg = vec![0.0f64; n];
    let mut frame_density = vec![0.0f64; n];
    for frame in frames {
        frame_density.iter_mut().for_each(|v| *v = 0.0);
        for &v in *frame {
            deposit(grid, bandwidth, v, &mut frame_density);
        }
        let integral = trapz_1d(grid, &frame_density);
        if integral > 0.0 {
            for v in frame_density.iter_mut() {
                *v /= integral;
            }
        } else {
            // Kernel underflow (bandwidth far below the grid step): fall back
            // to a delta at the frame mean's nearest node.
            let mean = frame.iter().sum::<f64>() / frame.len() as f64;
            let idx = grid.nearest(mean);
            frame_density[idx] = 1.0 / grid.cell_measure(idx);
        }
        for (a, v) in avg.iter_mut().zip(frame_density.iter()) {
            *a += v;
        }
    }
    let inv_frames = 1.0 / frames.len() as f64;
    avg.iter_mut().for_each(|v| *v *= inv_frames);

    let integral = trapz_1d(grid, &avg);
    let residual = integral - 1.0;
    if integral > 0.0 {
        avg.iter_mut().for_each(|v| *v /= integral);
    }

    Ok(Density1d {
        grid: grid.nodes.clone(),
        pdf: avg,
        normalization_residual: residual,
        degenerate: grid.degenerate,
        step: grid.step,
    })
}

/// Per-frame 2-D Gaussian KDE of paired frames, averaged across frames.
pub fn kde_pdf_2d(
    frames_x: &[&[f64]],
    frames_y: &[&[f64]],
    grid_x: &GridAxis,
    grid_y: &GridAxis,
    bandwidth_x: f64,
    bandwidth_y: f64,
) -> Result<Density2d, InfoError> {
    if frames_x.len() != frames_y.len() || frames_x.is_empty() {
        return Err(InfoError::InvalidArgument(
            "paired frame lists must be non-empty and equal length".into(),
        ));
    }
    for (fx, fy) in frames_x.iter().zip(frames_y.iter()) {
        if fx.len() != fy.len() || fx.is_empty() {
            return Err(InfoError::InvalidArgument(
                "paired frames must be non-empty and equal length".into(),
            ));
        }
    }
    if (!grid_x.degenerate && !(bandwidth_x > 0.0)) || (!grid_y.degenerate && !(bandwidth_y > 0.0))
    {
        return Err(InfoError::InvalidArgument(
            "bandwidth must be positive".into(),
        ));
    }

    let (nx, ny) = (grid_x.len(), grid_y.len());
    let mut avg = vec![0.0f64; nx * ny];
    let mut frame_density = vec![0.0f64; nx * ny];
    let mut wx = vec![0.0f64; nx];
    let mut wy = vec![0.0f64; ny];

    for (fx, fy) in frames_x.iter().zip(frames_y.iter()) {
        frame_density.iter_mut().for_each(|v| *v = 0.0);
        for (&vx, &vy) in fx.iter().zip(fy.iter()) {
            if !grid_x.covers(vx) || !grid_y.covers(vy) {
                return Err(InfoError::InvalidArgument(
                    "value outside the evaluation grid".into(),
                ));
            }
            wx.iter_mut().for_each(|v| *v = 0.0);
            wy.iter_mut().for_each(|v| *v = 0.0);
            deposit(grid_x, bandwidth_x, vx, &mut wx);
            deposit(grid_y, bandwidth_y, vy, &mut wy);
            // The outer product is sparse thanks to kernel truncation.
            for (ix, &wxv) in wx.iter().enumerate() {
                if wxv == 0.0 {
                    continue;
                }
                let row = &mut frame_density[ix * ny..(ix + 1) * ny];
                for (iy, &wyv) in wy.iter().enumerate() {
                    if wyv != 0.0 {
                        row[iy] += wxv * wyv;
                    }
                }
            }
        }
        let integral = trapz_2d(grid_x, grid_y, &frame_density);
        if integral > 0.0 {
            for v in frame_density.iter_mut() {
                *v /= integral;
            }
        }
        for (a, v) in avg.iter_mut().zip(frame_density.iter()) {
            *a += v;
        }
    }
    let inv_frames = 1.0 / frames_x.len() as f64;
    avg.iter_mut().for_each(|v| *v *= inv_frames);

    let integral = trapz_2d(grid_x, grid_y, &avg);
    let residual = integral - 1.0;
    if integral > 0.0 {
        avg.iter_mut().for_each(|v| *v /= integral);
    }

    Ok(Density2d {
        grid_x: grid_x.nodes.clone(),
        grid_y: grid_y.nodes.clone(),
        pdf: avg,
        normalization_residual: residual,
        degenerate: grid_x.degenerate || grid_y.degenerate,
        step_x: grid_x.step,
        step_y: grid_y.step,
    })
}

fn trapz_2d(grid_x: &GridAxis, grid_y: &GridAxis, values: &[f64]) -> f64 {
    let ny = grid_y.len();
    let mut acc = 0.0;
    for ix in 0..grid_x.len() {
        let mx = grid_x.cell_measure(ix);
        let row = &values[ix * ny..(ix + 1) * ny];
        let mut row_acc = 0.0;
        for (iy, v) in row.iter().enumerate() {
            row_acc += v * grid_y.cell_measure(iy);
        }
        acc += mx * row_acc;
    }
    acc
}

/// CSV form `value,pdf` for external plotting.
pub fn density1d_to_csv(density: &Density1d) -> String {
    let mut out = String::from("value,pdf\n");
    for (g, p) in density.grid.iter().zip(density.pdf.iter()) {
        out.push_str(&format!("{g},{p}\n"));
    }
    out
}

/// CSV form `x,y,pdf` for external plotting.
pub fn density2d_to_csv(density: &Density2d) -> String {
    let mut out = String::from("x,y,pdf\n");
    let ny = density.grid_y.len();
    for (ix, gx) in density.grid_x.iter().enumerate() {
        for (iy, gy) in density.grid_y.iter().enumerate() {
            out.push_str(&format!("{gx},{gy},{}\n", density.pdf[ix * ny + iy]));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn normal_samples(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    fn config() -> KdeConfig {
        KdeConfig::default()
    }

    #[test]
    fn repeated_single_value_concentrates_mass() {
        let values = vec![2.5f64; 512];
        let cfg = config();
        let axis = GridAxis::from_values(&values, &cfg).unwrap();
        assert!(axis.degenerate);
        let density = kde_pdf_1d(&[&values], &axis, axis.bandwidth).unwrap();
        let integral: f64 = density
            .pdf
            .iter()
            .enumerate()
            .map(|(i, p)| p * axis.cell_measure(i))
            .sum();
        assert!((integral - 1.0).abs() < 1e-9);
        // All mass within the immediate neighborhood of 2.5.
        let mass_near: f64 = density
            .pdf
            .iter()
            .enumerate()
            .filter(|(i, _)| (axis.nodes[*i] - 2.5).abs() <= 3.0 * axis.step)
            .map(|(i, p)| p * axis.cell_measure(i))
            .sum();
        assert!(mass_near > 0.999);
    }

    #[test]
    fn gaussian_bump_concentrates_within_three_bandwidths() {
        let values = vec![0.0f64; 256];
        let cfg = config();
        let axis = GridAxis::uniform(-1.0, 1.0, 128, 0.05).unwrap();
        let density = kde_pdf_1d(&[&values], &axis, 0.05).unwrap();
        let mass_near: f64 = density
            .pdf
            .iter()
            .enumerate()
            .filter(|(i, _)| axis.nodes[*i].abs() <= 3.0 * 0.05)
            .map(|(i, p)| p * axis.cell_measure(i))
            .sum();
        assert!(mass_near > 0.99, "mass near zero {mass_near}");
        let _ = cfg;
    }

    #[test]
    fn standard_normal_pdf_at_zero() {
        let values = normal_samples(100_000, 11);
        let cfg = config();
        let axis = GridAxis::from_values(&values, &cfg).unwrap();
        let frames: Vec<&[f64]> = values.chunks(cfg.frame_len).collect();
        let density = kde_pdf_1d(&frames, &axis, axis.bandwidth).unwrap();
        let zero_idx = axis.nearest(0.0);
        let p0 = density.pdf[zero_idx];
        assert!(
            (0.37..0.43).contains(&p0),
            "pdf at 0 is {p0}, expected near 0.3989"
        );
    }

    #[test]
    fn joint_of_independent_normals_factorizes() {
        let n = 200_000;
        let xs = normal_samples(n, 21);
        let ys = normal_samples(n, 22);
        let cfg = config();
        let axis_x = GridAxis::from_values(&xs, &cfg).unwrap();
        let axis_y = GridAxis::from_values(&ys, &cfg).unwrap();
        let fx: Vec<&[f64]> = xs.chunks(cfg.frame_len).collect();
        let fy: Vec<&[f64]> = ys.chunks(cfg.frame_len).collect();

        let dx = kde_pdf_1d(&fx, &axis_x, axis_x.bandwidth).unwrap();
        let dy = kde_pdf_1d(&fy, &axis_y, axis_y.bandwidth).unwrap();
        let joint = kde_pdf_2d(&fx, &fy, &axis_x, &axis_y, axis_x.bandwidth, axis_y.bandwidth)
            .unwrap();

        let ny = axis_y.len();
        let mut max_dev = 0.0f64;
        for ix in 0..axis_x.len() {
            for iy in 0..ny {
                let dev = (joint.pdf[ix * ny + iy] - dx.pdf[ix] * dy.pdf[iy]).abs();
                max_dev = max_dev.max(dev);
            }
        }
        assert!(max_dev < 0.02, "max deviation from product {max_dev}");
    }

    #[test]
    fn empty_frames_rejected() {
        let axis = GridAxis::uniform(0.0, 1.0, 16, 0.1).unwrap();
        assert!(kde_pdf_1d(&[], &axis, 0.1).is_err());
        let empty: &[f64] = &[];
        assert!(kde_pdf_1d(&[empty], &axis, 0.1).is_err());
    }

    #[test]
    fn grid_must_cover_data() {
        let axis = GridAxis::uniform(0.0, 1.0, 16, 0.1).unwrap();
        let values = [0.5, 2.0];
        assert!(kde_pdf_1d(&[&values], &axis, 0.1).is_err());
    }

    #[test]
    fn averaging_across_frames_is_well_defined() {
        // Two frames with disjoint supports: the average puts half the mass
        // on each side.
        let left = vec![-1.0f64; 128];
        let right = vec![1.0f64; 128];
        let axis = GridAxis::uniform(-2.0, 2.0, 64, 0.05).unwrap();
        let density = kde_pdf_1d(&[&left, &right], &axis, 0.05).unwrap();
        let mass_left: f64 = density
            .pdf
            .iter()
            .enumerate()
            .filter(|(i, _)| axis.nodes[*i] < 0.0)
            .map(|(i, p)| p * axis.cell_measure(i))
            .sum();
        assert!((mass_left - 0.5).abs() < 1e-6, "left mass {mass_left}");
    }

    #[test]
    fn csv_exports_have_headers_and_rows() {
        let values = vec![0.0f64, 0.5, 1.0];
        let axis = GridAxis::uniform(-1.0, 2.0, 8, 0.2).unwrap();
        let d1 = kde_pdf_1d(&[&values], &axis, 0.2).unwrap();
        let csv = density1d_to_csv(&d1);
        assert!(csv.starts_with("value,pdf\n"));
        assert_eq!(csv.lines().count(), 9);

        let d2 = kde_pdf_2d(&[&values], &[&values], &axis, &axis, 0.2, 0.2).unwrap();
        let csv = density2d_to_csv(&d2);
        assert!(csv.starts_with("x,y,pdf\n"));
        assert_eq!(csv.lines().count(), 65);
    }
}
