//! Uniform grids, sampled generators, time-frequency shifts and the
//! centered DFT.
//!
//! A [`Signal`] stands for a function on the real line that vanishes outside
//! `[-T, T)`. Translations fill with zeros; sub-grid translations use
//! band-limited (trigonometric) interpolation of the samples.

use std::f64::consts::PI;
use std::io::{BufRead, Write};

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{evaluate, Expr};

/// Isolated undefined samples tolerated by [`sample`].
pub const MAX_FILLED: usize = 8;

#[derive(Debug, Error)]
pub enum SignalError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("generator undefined on grid ({count} of {total} samples)")]
    UndefinedOnGrid { count: usize, total: usize },
    #[error("shift exceeds grid support: |alpha| = {alpha} > 2T = {limit}")]
    ShiftOutOfRange { alpha: f64, limit: f64 },
    #[error("signal csv: {0}")]
    Csv(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// `n` points `x_j = -T + jΔ`, `Δ = 2T/n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub half_width: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(half_width: f64, count: usize) -> Result<Grid, SignalError> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(SignalError::InvalidGrid(format!("half width must be positive, got {half_width}")));
        }
        if count < 8 || count % 2 != 0 {
            return Err(SignalError::InvalidGrid(format!("count must be even and at least 8, got {count}")));
        }
        Ok(Grid { half_width, count })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.count as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.spacing()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|j| self.point(j))
    }

    /// The grid of the centered DFT: same count, half width `n/(4T)`.
    pub fn dual(&self) -> Grid {
        Grid { half_width: self.count as f64 / (4.0 * self.half_width), count: self.count }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Signal {
    grid: Grid,
    samples: Vec<Complex64>,
    l2_norm: f64,
}

impl Signal {
    pub fn new(grid: Grid, samples: Vec<Complex64>) -> Signal {
        assert_eq!(samples.len(), grid.count, "sample count must match the grid");
        let l2_norm = l2(&grid, &samples);
        Signal { grid, samples, l2_norm }
    }

    pub fn from_real(grid: Grid, samples: &[f64]) -> Signal {
        Signal::new(grid, samples.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    /// `sqrt(Δ Σ |s_j|²)`.
    pub fn l2_norm(&self) -> f64 {
        self.l2_norm
    }

    pub fn scaled(&self, c: Complex64) -> Signal {
        Signal::new(self.grid, self.samples.iter().map(|v| v * c).collect())
    }

    /// `Δ Σ conj(self_j) other_j`.
    pub fn inner(&self, other: &Signal) -> Complex64 {
        assert_eq!(self.grid, other.grid, "inner product needs a common grid");
        let s: Complex64 = self.samples.iter().zip(&other.samples).map(|(a, b)| a.conj() * b).sum();
        s * self.grid.spacing()
    }

    /// Band-limited interpolation at an arbitrary `x`; zero outside `[-T, T)`.
    pub fn interpolate(&self, x: f64) -> Complex64 {
        Interpolator::new(self).at(x)
    }
}

fn l2(grid: &Grid, samples: &[Complex64]) -> f64 {
    (grid.spacing() * samples.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleReport {
    pub signal: Signal,
    /// Grid points where the generator was undefined and 0 was used.
    pub filled: Vec<f64>,
    /// Quadrature estimate of `∫_{|x|>T} |g|²`.
    pub mass_outside: f64,
}

/// Samples `e` on `grid`, filling up to [`MAX_FILLED`] undefined points by 0.
pub fn sample(e: &Expr, grid: Grid) -> Result<SampleReport, SignalError> {
    let mut filled = Vec::new();
    let samples: Vec<Complex64> = grid
        .points()
        .map(|x| match evaluate(e, x) {
            Ok(v) if v.is_finite() => Complex64::new(v, 0.0),
            _ => {
                filled.push(x);
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    if filled.len() > MAX_FILLED {
        return Err(SignalError::UndefinedOnGrid { count: filled.len(), total: grid.count });
    }
    if !filled.is_empty() {
        log::warn!("generator undefined at {} grid points; filled with 0", filled.len());
    }
    Ok(SampleReport { signal: Signal::new(grid, samples), filled, mass_outside: mass_outside(e, grid.half_width) })
}

/// `∫_{|x|>T} |g(x)|² dx` by Simpson's rule in `s = ln(x/T)` up to `x = 10⁸ T`.
/// Undefined evaluations count as zero.
pub fn mass_outside(e: &Expr, half_width: f64) -> f64 {
    const INTERVALS: usize = 20_000;
    let s_max = (1e8f64).ln();
    let h = s_max / INTERVALS as f64;
    let reflected = e.reflect();
    let f = |s: f64| {
        let x = half_width * s.exp();
        let g = |ex: &Expr| evaluate(ex, x).ok().filter(|v| v.is_finite()).map_or(0.0, |v| v * v);
        (g(e) + g(&reflected)) * x
    };
    let mut acc = f(0.0) + f(s_max);
    for i in 1..INTERVALS {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(i as f64 * h);
    }
    acc * h / 3.0
}

/// `M_β T_α s`: `out_j = e^{2πiβx_j} s(x_j − α)`.
pub fn tf_shift(s: &Signal, alpha: f64, beta: f64) -> Result<Signal, SignalError> {
    let translated = translate(s, alpha)?;
    Ok(modulate(&translated, beta))
}

/// `T_α s` with zero fill. Whole-step shifts move indices; other shifts
/// multiply the spectrum by a linear phase.
pub fn translate(s: &Signal, alpha: f64) -> Result<Signal, SignalError> {
    let g = s.grid;
    let limit = 2.0 * g.half_width;
    if !alpha.is_finite() || alpha.abs() > limit {
        return Err(SignalError::ShiftOutOfRange { alpha, limit });
    }
    if alpha == 0.0 {
        return Ok(s.clone());
    }
    let n = g.count;
    let dx = g.spacing();
    let steps = alpha / dx;
    let rounded = steps.round();
    let zero = Complex64::new(0.0, 0.0);
    let mut out = vec![zero; n];
    if (steps - rounded).abs() <= 1e-9 * steps.abs().max(1.0) {
        let k = rounded as i64;
        for (j, o) in out.iter_mut().enumerate() {
            let src = j as i64 - k;
            if (0..n as i64).contains(&src) {
                *o = s.samples[src as usize];
            }
        }
        return Ok(Signal::new(g, out));
    }
    let mut planner = FftPlanner::new();
    let mut buf = s.samples.clone();
    planner.plan_fft_forward(n).process(&mut buf);
    for (m, v) in buf.iter_mut().enumerate() {
        let k = signed_bin(m, n) as f64;
        *v *= Complex64::from_polar(1.0 / n as f64, -2.0 * PI * k * steps / n as f64);
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    for (j, o) in out.iter_mut().enumerate() {
        let src = j as f64 - steps;
        if src >= 0.0 && src <= (n - 1) as f64 {
            *o = buf[j];
        }
    }
    Ok(Signal::new(g, out))
}

/// `M_β s`, exact pointwise.
pub fn modulate(s: &Signal, beta: f64) -> Signal {
    if beta == 0.0 {
        return s.clone();
    }
    let g = s.grid;
    let samples = s
        .samples
        .iter()
        .enumerate()
        .map(|(j, v)| v * Complex64::from_polar(1.0, 2.0 * PI * beta * g.point(j)))
        .collect();
    Signal::new(g, samples)
}

/// FFT bin `m` as a signed frequency index in `[-n/2, n/2)`.
fn signed_bin(m: usize, n: usize) -> i64 {
    if m < n / 2 {
        m as i64
    } else {
        m as i64 - n as i64
    }
}

/// Samples of `ĝ(ξ) = ∫ g(x) e^{−2πixξ} dx` on [`Grid::dual`].
///
/// With `x_j = −T + jΔ` and `ξ_k = −n/(4T) + k/(nΔ)` the Riemann sum
/// reduces to `Δ (−1)^{n/2} (−1)^k FFT[(−1)^j g_j]_k`.
pub fn dft(s: &Signal) -> Signal {
    let g = s.grid;
    let n = g.count;
    let mut buf: Vec<Complex64> = s.samples.iter().enumerate().map(|(j, v)| if j % 2 == 0 { *v } else { -v }).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let base = if (n / 2) % 2 == 0 { g.spacing() } else { -g.spacing() };
    for (k, v) in buf.iter_mut().enumerate() {
        *v *= if k % 2 == 0 { base } else { -base };
    }
    Signal::new(g.dual(), buf)
}

/// Inverse of [`dft`].
pub fn idft(s: &Signal) -> Signal {
    let g = s.grid;
    let n = g.count;
    let mut buf: Vec<Complex64> = s.samples.iter().enumerate().map(|(k, v)| if k % 2 == 0 { *v } else { -v }).collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    // Dual spacing times the sign pattern of the forward map.
    let dxi = g.spacing();
    let base = if (n / 2) % 2 == 0 { dxi } else { -dxi };
    for (j, v) in buf.iter_mut().enumerate() {
        *v *= if j % 2 == 0 { base } else { -base };
    }
    Signal::new(g.dual(), buf)
}

/// Trigonometric interpolant of a signal, evaluated pointwise.
pub struct Interpolator {
    grid: Grid,
    spectrum: Vec<Complex64>,
}

impl Interpolator {
    pub fn new(s: &Signal) -> Interpolator {
        let n = s.grid.count;
        let mut spectrum = s.samples.clone();
        FftPlanner::new().plan_fft_forward(n).process(&mut spectrum);
        for v in spectrum.iter_mut() {
            *v /= n as f64;
        }
        Interpolator { grid: s.grid, spectrum }
    }

    /// Value at `x`; 0 outside `[-T, T)`. The Nyquist bin is split evenly
    /// between `±n/2` so real samples interpolate to real values.
    pub fn at(&self, x: f64) -> Complex64 {
        let g = self.grid;
        if x < -g.half_width || x >= g.half_width {
            return Complex64::new(0.0, 0.0);
        }
        let n = g.count;
        let t = (x + g.half_width) / g.spacing();
        let w = Complex64::from_polar(1.0, 2.0 * PI * t / n as f64);
        let mut acc = self.spectrum[0];
        let mut pw = w;
        for k in 1..n / 2 {
            acc += self.spectrum[k] * pw + self.spectrum[n - k] * pw.conj();
            pw *= w;
        }
        let nyq = self.spectrum[n / 2];
        acc += nyq * (pw + pw.conj()) * 0.5;
        acc
    }
}

const CSV_TAG: &str = "# gabor-hrt-lab signal";

/// Writes `x,re,im` rows under the `# gabor-hrt-lab signal T=<T> n=<n>` header.
pub fn write_csv<W: Write>(s: &Signal, mut out: W) -> Result<(), SignalError> {
    writeln!(out, "{CSV_TAG} T={} n={}", s.grid.half_width, s.grid.count)?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    for (j, v) in s.samples.iter().enumerate() {
        w.write_record([s.grid.point(j).to_string(), v.re.to_string(), v.im.to_string()])
            .map_err(|e| SignalError::Csv(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: BufRead>(mut input: R) -> Result<Signal, SignalError> {
    let bad = |m: String| SignalError::Csv(m);
    let mut header = String::new();
    input.read_line(&mut header)?;
    let rest = header
        .trim_end()
        .strip_prefix(CSV_TAG)
        .ok_or_else(|| bad(format!("missing header line {CSV_TAG:?}")))?;
    let mut half_width = None;
    let mut count = None;
    for field in rest.split_whitespace() {
        match field.split_once('=') {
            Some(("T", v)) => half_width = v.parse::<f64>().ok(),
            Some(("n", v)) => count = v.parse::<usize>().ok(),
            _ => return Err(bad(format!("unexpected header field {field:?}"))),
        }
    }
    let grid = Grid::new(
        half_width.ok_or_else(|| bad("header lacks T".into()))?,
        count.ok_or_else(|| bad("header lacks n".into()))?,
    )?;
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(input);
    let mut samples = Vec::with_capacity(grid.count);
    for (j, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        if rec.len() != 3 {
            return Err(bad(format!("row {} has {} fields, expected 3", j + 2, rec.len())));
        }
        let num = |i: usize| rec[i].parse::<f64>().map_err(|_| bad(format!("row {}: bad number {:?}", j + 2, &rec[i])));
        let (x, re, im) = (num(0)?, num(1)?, num(2)?);
        if j >= grid.count {
            return Err(bad(format!("more than {} rows", grid.count)));
        }
        let want = grid.point(j);
        if (x - want).abs() > 1e-9 * (1.0 + want.abs()) {
            return Err(bad(format!("row {}: x = {x} is off the grid (expected {want})", j + 2)));
        }
        samples.push(Complex64::new(re, im));
    }
    if samples.len() != grid.count {
        return Err(bad(format!("{} rows for a {}-point grid", samples.len(), grid.count)));
    }
    Ok(Signal::new(grid, samples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn spike(grid: Grid, at: usize) -> Signal {
        let mut v = vec![0.0; grid.count];
        v[at] = 1.0;
        Signal::from_real(grid, &v)
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(4.0, 6).is_err());
        assert!(Grid::new(4.0, 9).is_err());
        assert!(Grid::new(0.0, 8).is_err());
        let g = Grid::new(4.0, 8).unwrap();
        assert_eq!(g.spacing(), 1.0);
        assert_eq!(g.points().collect::<Vec<_>>(), vec![-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn sampling_matches_pointwise_and_fills() {
        let g = Grid::new(4.0, 8).unwrap();
        let e = parse("exp(-x^2)").unwrap();
        let r = sample(&e, g).unwrap();
        for (x, v) in g.points().zip(r.signal.samples()) {
            assert_eq!(v.re, (-x * x).exp());
        }
        assert!(r.filled.is_empty());
        let r = sample(&parse("1/x").unwrap(), g).unwrap();
        assert_eq!(r.filled, vec![0.0]);
        match sample(&parse("log(x)").unwrap(), Grid::new(4.0, 32).unwrap()) {
            Err(SignalError::UndefinedOnGrid { count: 17, total: 32 }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn shifts() {
        let g = Grid::new(4.0, 8).unwrap();
        let s = spike(g, 4);
        assert_eq!(tf_shift(&s, 0.0, 0.0).unwrap(), s);
        assert_eq!(tf_shift(&s, 1.0, 0.0).unwrap(), spike(g, 5));
        assert_eq!(tf_shift(&s, -4.0, 0.0).unwrap(), spike(g, 0));
        assert_eq!(tf_shift(&s, 4.0, 0.0).unwrap().l2_norm(), 0.0);
        assert!(matches!(tf_shift(&s, 8.5, 0.0), Err(SignalError::ShiftOutOfRange { .. })));
    }

    #[test]
    fn modulation_commutes_in_the_documented_order() {
        let g = Grid::new(8.0, 256).unwrap();
        let s = sample(&parse("exp(-x^2)").unwrap(), g).unwrap().signal;
        let a = tf_shift(&tf_shift(&s, 0.3, 0.0).unwrap(), 0.0, 0.7).unwrap();
        assert_eq!(a, tf_shift(&s, 0.3, 0.7).unwrap());
    }

    #[test]
    fn spike_transform_is_flat() {
        let g = Grid::new(4.0, 16).unwrap();
        let f = dft(&spike(g, 8));
        for v in f.samples() {
            assert!((v - Complex64::new(g.spacing(), 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn inverse_transform_round_trips() {
        let g = Grid::new(3.0, 64).unwrap();
        let s = sample(&parse("exp(-x^2)*(1 + x)").unwrap(), g).unwrap().signal;
        let back = idft(&dft(&s));
        assert_eq!(back.grid(), g);
        for (a, b) in back.samples().iter().zip(s.samples()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn interpolation_reproduces_samples() {
        let g = Grid::new(8.0, 128).unwrap();
        let s = sample(&parse("exp(-x^2)").unwrap(), g).unwrap().signal;
        let it = Interpolator::new(&s);
        for j in [0, 17, 64, 100] {
            assert!((it.at(g.point(j)) - s.samples()[j]).norm() < 1e-13);
        }
        assert!((it.at(0.37).re - (-0.37f64 * 0.37).exp()).abs() < 1e-9);
        assert_eq!(it.at(8.0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let g = Grid::new(2.0, 8).unwrap();
        let s = modulate(&sample(&parse("exp(-x^2)").unwrap(), g).unwrap().signal, 0.3);
        let mut buf = Vec::new();
        write_csv(&s, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# gabor-hrt-lab signal T=2 n=8\n-2,"));
        assert_eq!(read_csv(&buf[..]).unwrap(), s);
        assert!(read_csv("x,re,im\n".as_bytes()).is_err());
        let short = "# gabor-hrt-lab signal T=2 n=8\n-2,1,0\n";
        assert!(read_csv(short.as_bytes()).is_err());
    }

    #[test]
    fn mass_outside_of_a_cauchy_profile() {
        // ∫_{|x|>T} (1+x²)^{-2} dx = π/2 − arctan T − T/(1+T²)
        let t = 8.0f64;
        let exact = PI / 2.0 - t.atan() - t / (1.0 + t * t);
        let got = mass_outside(&parse("1/(1 + x^2)").unwrap(), t);
        assert!((got - exact).abs() < 1e-9, "{got} vs {exact}");
    }
}
