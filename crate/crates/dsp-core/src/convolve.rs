use rustfft::{num_complex::Complex, FftPlanner};

use crate::error::{DspError, Result};
use crate::types::{ImpulseResponse, Waveform};

/// Linear convolution of `signal` with `ir`, truncated to the input signal's
/// length (causal filtering semantics), so filtered signals stay aligned
/// sample-for-sample with their source.
pub fn fft_convolve(signal: &Waveform, ir: &ImpulseResponse) -> Result<Waveform> {
    let full = convolve_impl(signal, ir)?;
    let mut samples = full;
    samples.truncate(signal.len());
    Waveform::new(samples, signal.sample_rate_hz())
}

/// Full-length linear convolution (`n + m - 1` samples).
pub fn fft_convolve_full(signal: &Waveform, ir: &ImpulseResponse) -> Result<Waveform> {
    let full = convolve_impl(signal, ir)?;
    Waveform::new(full, signal.sample_rate_hz())
}

fn convolve_impl(signal: &Waveform, ir: &ImpulseResponse) -> Result<Vec<f64>> {
    if signal.is_empty() {
        return Err(DspError::EmptyInput("fft_convolve signal"));
    }
    if signal.sample_rate_hz() != ir.sample_rate_hz() {
        return Err(DspError::SampleRateMismatch {
            left: signal.sample_rate_hz(),
            right: ir.sample_rate_hz(),
        });
    }

    let n = signal.len();
    let m = ir.len();
    let out_len = n + m - 1;
    let size = out_len.next_power_of_two();

    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(size);
    let ifft = planner.plan_fft_inverse(size);

    let mut a: Vec<Complex<f64>> = signal
        .samples()
        .iter()
        .map(|&s| Complex::new(s, 0.0))
        .collect();
    a.resize(size, Complex::new(0.0, 0.0));
    let mut b: Vec<Complex<f64>> = ir.taps().iter().map(|&t| Complex::new(t, 0.0)).collect();
    b.resize(size, Complex::new(0.0, 0.0));

    fft.process(&mut a);
    fft.process(&mut b);
    for (x, y) in a.iter_mut().zip(b.iter()) {
        *x *= *y;
    }
    ifft.process(&mut a);

    let scale = 1.0 / size as f64;
    Ok(a[..out_len].iter().map(|c| c.re * scale).collect())
}
