//! Periodic sampling grid and Fourier-multiplier calculus.
//!
//! The domain is `[-L/2, L/2)` with periodic identification and `N` points
//! `x_i = -L/2 + i h`, `h = L / N`. Frequencies are `xi_k = 2 pi k / L` in FFT
//! order; the forward transform is unnormalized and the inverse divides by
//! `N`, so Parseval reads `mean |u|^2 = sum |u_hat|^2 / N^2`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::io::{Read, Write};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform periodic grid on `[-L/2, L/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    n_points: usize,
    length: f64,
}

impl Grid {
    /// `n_points` must be a power of two and at least 16; `length` positive.
    pub fn new(n_points: usize, length: f64) -> Result<Self> {
        if n_points < 16 || !n_points.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n_points must be a power of two >= 16, got {n_points}"
            )));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "length must be positive and finite, got {length}"
            )));
        }
        Ok(Self { n_points, length })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n_points as f64
    }

    /// Position of grid point `i`.
    pub fn x(&self, i: usize) -> f64 {
        -0.5 * self.length + i as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.x(i)).collect()
    }

    /// Index of the grid point at `x = 0`.
    pub fn origin_index(&self) -> usize {
        self.n_points / 2
    }

    /// Signed wavenumber of FFT bin `k` (the Nyquist bin maps to `-N/2`).
    pub fn wavenumber(&self, k: usize) -> i64 {
        let n = self.n_points as i64;
        let k = k as i64;
        if k < n / 2 {
            k
        } else {
            k - n
        }
    }

    pub fn frequency(&self, k: usize) -> f64 {
        2.0 * PI * self.wavenumber(k) as f64 / self.length
    }

    /// Frequencies `xi_k` in FFT ordering.
    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.n_points).map(|k| self.frequency(k)).collect()
    }

    /// Magnitude of the Nyquist frequency, `pi N / L`.
    pub fn nyquist(&self) -> f64 {
        PI * self.n_points as f64 / self.length
    }

    /// Maps `x` into the fundamental domain `[-L/2, L/2)`.
    pub fn wrap(&self, x: f64) -> f64 {
        let l = self.length;
        x - l * ((x + 0.5 * l) / l).floor()
    }
}

/// Closed interval `[lo, hi]` used for local sup-norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Window {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidArgument(format!("bad window [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    /// The central half `[-L/4, L/4]` of the domain.
    pub fn central_half(grid: &Grid) -> Self {
        let q = 0.25 * grid.length();
        Self { lo: -q, hi: q }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    /// Indices of the grid points inside the window.
    pub fn indices(&self, grid: &Grid) -> Result<Vec<usize>> {
        let half = 0.5 * grid.length();
        if self.lo < -half - 1e-12 * half || self.hi > half + 1e-12 * half {
            return Err(Error::InvalidArgument(format!(
                "window [{}, {}] exceeds the domain [{}, {})",
                self.lo, self.hi, -half, half
            )));
        }
        let idx: Vec<usize> = (0..grid.n_points()).filter(|&i| self.contains(grid.x(i))).collect();
        if idx.is_empty() {
            return Err(Error::EmptyWindow {
                lo: self.lo,
                hi: self.hi,
            });
        }
        Ok(idx)
    }
}

/// Samples of a (generally complex) function on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    grid: Grid,
    values: Vec<Complex64>,
    is_real: bool,
}

impl SampledSignal {
    pub fn from_real(grid: Grid, values: Vec<f64>) -> Result<Self> {
        Self::check_len(&grid, values.len())?;
        Ok(Self {
            grid,
            values: values.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
            is_real: true,
        })
    }

    pub fn from_complex(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        Self::check_len(&grid, values.len())?;
        Ok(Self {
            grid,
            values,
            is_real: false,
        })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..grid.n_points())
            .map(|i| Complex64::new(f(grid.x(i)), 0.0))
            .collect();
        Self {
            grid,
            values,
            is_real: true,
        }
    }

    pub fn from_complex_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = (0..grid.n_points()).map(|i| f(grid.x(i))).collect();
        Self {
            grid,
            values,
            is_real: false,
        }
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.n_points()],
            is_real: true,
        }
    }

    fn check_len(grid: &Grid, len: usize) -> Result<()> {
        if len != grid.n_points() {
            return Err(Error::InvalidArgument(format!(
                "expected {} samples, got {len}",
                grid.n_points()
            )));
        }
        Ok(())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn is_real(&self) -> bool {
        self.is_real
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    /// Re-evaluates the real flag from the data; imaginary parts within
    /// `1e-10` of the largest modulus are dropped when the flag is set.
    pub fn with_real_check(mut self) -> Self {
        let m = self.max_modulus();
        if self.max_imag() <= 1e-10 * m {
            self.values.iter_mut().for_each(|v| v.im = 0.0);
            self.is_real = true;
        } else {
            self.is_real = false;
        }
        self
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
            is_real: false,
        }
        .with_real_check()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| v * c).collect(),
            is_real: self.is_real,
        }
    }

    /// `a * self + b * other`.
    pub fn axpby(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&x, &y)| x * a + y * b)
                .collect(),
            is_real: self.is_real && other.is_real,
        })
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(&x, &y)| x * y).collect(),
            is_real: self.is_real && other.is_real,
        })
    }

    /// Cyclic shift by `k` cells: `out[i] = self[i - k]`.
    pub fn shifted(&self, k: usize) -> Self {
        let n = self.values.len();
        let mut values = self.values.clone();
        values.rotate_right(k % n);
        Self {
            grid: self.grid,
            values,
            is_real: self.is_real,
        }
    }

    /// Evaluates the trigonometric interpolant at an arbitrary point.
    ///
    /// Exact for band-limited samples; `O(N)` per point. The Nyquist mode is
    /// split symmetrically so real data interpolate to real values.
    pub fn interpolate(&self, y: f64) -> Complex64 {
        let spec = Spectrum::of(self);
        spec.evaluate(y)
    }
}

/// Trait for anything usable as a Fourier profile `xi -> k_hat(xi)`.
pub trait FourierProfile {
    fn profile(&self, xi: f64) -> Complex64;
}

impl<F: Fn(f64) -> Complex64> FourierProfile for F {
    fn profile(&self, xi: f64) -> Complex64 {
        self(xi)
    }
}

type PlanCache = Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>;

fn plan(n: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    static PLANS: OnceLock<PlanCache> = OnceLock::new();
    let key = (n, matches!(direction, FftDirection::Forward));
    let mut plans = PLANS
        .get_or_init(|| Mutex::new(HashMap::new()))
        .lock()
        .expect("fft plan cache poisoned");
    plans
        .entry(key)
        .or_insert_with(|| FftPlanner::new().plan_fft(n, direction))
        .clone()
}

fn fft_in_place(buf: &mut [Complex64], direction: FftDirection) {
    plan(buf.len(), direction).process(buf);
}

/// Unnormalized forward DFT coefficients of a signal.
#[derive(Debug, Clone)]
pub struct Spectrum {
    grid: Grid,
    coeffs: Vec<Complex64>,
    is_real: bool,
}

impl Spectrum {
    pub fn of(u: &SampledSignal) -> Self {
        let mut coeffs = u.values.clone();
        fft_in_place(&mut coeffs, FftDirection::Forward);
        Self {
            grid: u.grid,
            coeffs,
            is_real: u.is_real,
        }
    }

    /// Wraps precomputed coefficients; `is_real` asserts they are Hermitian.
    pub fn from_coeffs(grid: Grid, coeffs: Vec<Complex64>, is_real: bool) -> Result<Self> {
        if coeffs.len() != grid.n_points() {
            return Err(Error::InvalidArgument("coefficient count does not match grid".into()));
        }
        Ok(Self { grid, coeffs, is_real })
    }

    /// Inverse transform.
    pub fn inverse(&self) -> SampledSignal {
        let mut buf = self.coeffs.clone();
        fft_in_place(&mut buf, FftDirection::Inverse);
        let inv_n = 1.0 / self.grid.n_points() as f64;
        buf.iter_mut().for_each(|v| *v *= inv_n);
        let u = SampledSignal {
            grid: self.grid,
            values: buf,
            is_real: false,
        };
        if self.is_real {
            u.with_real_check()
        } else {
            u
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Mean value of the underlying signal.
    pub fn mean(&self) -> Complex64 {
        self.coeffs[0] / self.grid.n_points() as f64
    }

    /// Inverse transform of `m_k * u_hat_k` for precomputed multiplier values.
    pub fn apply_values(&self, m: &[Complex64]) -> Result<SampledSignal> {
        if m.len() != self.coeffs.len() {
            return Err(Error::InvalidArgument("multiplier length does not match grid".into()));
        }
        for (k, v) in m.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFiniteMultiplier {
                    xi: self.grid.frequency(k),
                });
            }
        }
        let mut buf: Vec<Complex64> = self.coeffs.iter().zip(m).map(|(&c, &w)| c * w).collect();
        fft_in_place(&mut buf, FftDirection::Inverse);
        let inv_n = 1.0 / self.grid.n_points() as f64;
        buf.iter_mut().for_each(|v| *v *= inv_n);
        let real = self.is_real && is_hermitian(m);
        if real {
            buf.iter_mut().for_each(|v| v.im = 0.0);
        }
        Ok(SampledSignal {
            grid: self.grid,
            values: buf,
            is_real: real,
        })
    }

    /// Applies `m` evaluated at every grid frequency.
    pub fn apply<M: FourierProfile + ?Sized>(&self, m: &M) -> Result<SampledSignal> {
        let values: Vec<Complex64> = (0..self.grid.n_points())
            .map(|k| m.profile(self.grid.frequency(k)))
            .collect();
        self.apply_values(&values)
    }

    /// Evaluates the trigonometric interpolant at `y`.
    pub fn evaluate(&self, y: f64) -> Complex64 {
        let n = self.grid.n_points();
        let x0 = self.grid.x(0);
        let w = 2.0 * PI / self.grid.length();
        let step = Complex64::from_polar(1.0, w * (y - x0));
        let mut acc = self.coeffs[0];
        let mut rot = Complex64::new(1.0, 0.0);
        for k in 1..n / 2 {
            rot *= step;
            acc += self.coeffs[k] * rot + self.coeffs[n - k] * rot.conj();
        }
        let nyq = (w * (n / 2) as f64 * (y - x0)).cos();
        acc += self.coeffs[n / 2] * nyq;
        if self.is_real {
            Complex64::new(acc.re, 0.0) / n as f64
        } else {
            acc / n as f64
        }
    }
}

/// Hermitian symmetry `m(-xi) = conj(m(xi))` on the FFT bins (self-paired
/// bins must be real).
fn is_hermitian(m: &[Complex64]) -> bool {
    let n = m.len();
    let scale = m.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let tol = 1e-14 * scale.max(f64::MIN_POSITIVE);
    if m[0].im.abs() > tol || m[n / 2].im.abs() > tol {
        return false;
    }
    (1..n / 2).all(|k| (m[k] - m[n - k].conj()).norm() <= tol)
}

/// `f(D) u = F^{-1}(m F u)`.
pub fn apply_multiplier<M: FourierProfile + ?Sized>(u: &SampledSignal, m: &M) -> Result<SampledSignal> {
    Spectrum::of(u).apply(m)
}

/// Spectral `k`-th derivative. The Nyquist bin is dropped for odd `k` so that
/// real input stays real.
pub fn spectral_derivative(u: &SampledSignal, k: u32) -> Result<SampledSignal> {
    Spectrum::of(u).apply_values(&derivative_multiplier(u.grid(), k))
}

pub(crate) fn derivative_multiplier(grid: &Grid, k: u32) -> Vec<Complex64> {
    let n = grid.n_points();
    (0..n)
        .map(|j| {
            if k % 2 == 1 && j == n / 2 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, grid.frequency(j)).powu(k)
            }
        })
        .collect()
}

/// `u * k_eps` with `k_eps(y) = k(y / eps) / eps`, i.e. the multiplier
/// `k_hat(eps xi)`.
pub fn convolve_scaled<K: FourierProfile + ?Sized>(u: &SampledSignal, kernel: &K, eps: f64) -> Result<SampledSignal> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidArgument(format!("scale must be positive, got {eps}")));
    }
    apply_multiplier(u, &|xi: f64| kernel.profile(eps * xi))
}

/// Max modulus over the grid points in `window` (whole grid if `None`).
pub fn sup_norm(u: &SampledSignal, window: Option<&Window>) -> Result<f64> {
    match window {
        None => Ok(u.max_modulus()),
        Some(w) => {
            let idx = w.indices(u.grid())?;
            Ok(idx.iter().map(|&i| u.values[i].norm()).fold(0.0, f64::max))
        }
    }
}

/// Sup-norm over precomputed window indices (no validation).
pub(crate) fn sup_on(values: &[Complex64], idx: &[usize]) -> f64 {
    idx.iter().map(|&i| values[i].norm()).fold(0.0, f64::max)
}

/// Writes `x,value` (real) or `x,re,im` (complex) CSV with a header line.
pub fn write_csv<W: Write>(u: &SampledSignal, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    if u.is_real() {
        w.write_record(["x", "value"]).map_err(io)?;
        for (i, v) in u.values().iter().enumerate() {
            w.write_record([u.grid().x(i).to_string(), v.re.to_string()])
                .map_err(io)?;
        }
    } else {
        w.write_record(["x", "re", "im"]).map_err(io)?;
        for (i, v) in u.values().iter().enumerate() {
            w.write_record([u.grid().x(i).to_string(), v.re.to_string(), v.im.to_string()])
                .map_err(io)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads the CSV produced by [`write_csv`], inferring the grid from the `x`
/// column (uniform spacing, first point at `-L/2`).
pub fn read_csv<R: Read>(input: R) -> Result<SampledSignal> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    let cols: Vec<&str> = headers.iter().map(str::trim).collect();
    let complex = match cols.as_slice() {
        ["x", "value"] => false,
        ["x", "re", "im"] => true,
        _ => {
            return Err(Error::Parse(format!(
                "expected header x,value or x,re,im, got {}",
                cols.join(",")
            )))
        }
    };
    let mut xs = Vec::new();
    let mut vals = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        let field = |j: usize| -> Result<f64> {
            rec.get(j)
                .ok_or_else(|| Error::Parse(format!("row {}: missing column {j}", line + 2)))?
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("row {}: {e}", line + 2)))
        };
        xs.push(field(0)?);
        let re = field(1)?;
        let im = if complex { field(2)? } else { 0.0 };
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::Parse(format!("row {}: non-finite value", line + 2)));
        }
        vals.push(Complex64::new(re, im));
    }
    let n = xs.len();
    if n < 2 {
        return Err(Error::Parse("too few rows".into()));
    }
    let grid = Grid::new(n, -2.0 * xs[0]).map_err(|e| Error::Parse(e.to_string()))?;
    for (i, &x) in xs.iter().enumerate() {
        if (x - grid.x(i)).abs() > 1e-9 * grid.length() {
            return Err(Error::Parse(format!(
                "x column is not the uniform grid on [-L/2, L/2) at row {}",
                i + 2
            )));
        }
    }
    let u = SampledSignal::from_complex(grid, vals)?;
    Ok(if complex { u } else { u.with_real_check() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_2pi(n: usize) -> Grid {
        Grid::new(n, 2.0 * PI).unwrap()
    }

    #[test]
    fn make_grid_examples() {
        let g = Grid::new(16, 1.0).unwrap();
        assert_eq!(g.spacing(), 0.0625);
        let g = Grid::new(1 << 14, 2.0 * PI).unwrap();
        assert_eq!(g.spacing(), 2.0 * PI / 16384.0);
        assert_eq!(g.spacing() * g.n_points() as f64, g.length());
        assert!(Grid::new(15, 1.0).is_err());
        assert!(Grid::new(8, 1.0).is_err());
        assert!(Grid::new(32, 0.0).is_err());
        assert!(Grid::new(32, -1.0).is_err());
    }

    #[test]
    fn frequency_grid_is_symmetric_except_nyquist() {
        let g = grid_2pi(32);
        let f = g.frequencies();
        assert_eq!(f[0], 0.0);
        assert_eq!(f[16], -16.0);
        for k in 1..16 {
            assert_eq!(f[k], -f[32 - k]);
        }
    }

    #[test]
    fn identity_multiplier() {
        let g = grid_2pi(256);
        let u = SampledSignal::from_fn(g, |x| (3.0 * x).sin() + 0.2 * x.cos().powi(3));
        let v = apply_multiplier(&u, &|_: f64| Complex64::new(1.0, 0.0)).unwrap();
        let dev = u
            .values()
            .iter()
            .zip(v.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(dev <= 1e-12);
        assert!(v.is_real());
    }

    #[test]
    fn band_pass_kills_tone() {
        let g = grid_2pi(256);
        let u = SampledSignal::from_fn(g, |x| (2.0 * x).cos());
        let v = apply_multiplier(&u, &|xi: f64| {
            Complex64::new(if xi.abs() <= 1.0 { 1.0 } else { 0.0 }, 0.0)
        })
        .unwrap();
        assert!(v.max_modulus() <= 1e-13);
    }

    #[test]
    fn spectral_derivative_of_sine() {
        let g = grid_2pi(256);
        let u = SampledSignal::from_fn(g, f64::sin);
        let v = apply_multiplier(&u, &|xi: f64| Complex64::new(0.0, xi)).unwrap();
        for (i, val) in v.values().iter().enumerate() {
            assert!((val - Complex64::new(g.x(i).cos(), 0.0)).norm() <= 1e-10);
        }
        let d = spectral_derivative(&u, 1).unwrap();
        assert!(d.is_real());
        for (i, val) in d.values().iter().enumerate() {
            assert!((val.re - g.x(i).cos()).abs() <= 1e-10);
        }
    }

    #[test]
    fn non_finite_multiplier_rejected() {
        let g = grid_2pi(32);
        let u = SampledSignal::from_fn(g, f64::sin);
        let err = apply_multiplier(&u, &|xi: f64| Complex64::new(1.0 / xi, 0.0)).unwrap_err();
        assert!(matches!(err, Error::NonFiniteMultiplier { xi } if xi == 0.0));
    }

    #[test]
    fn convolve_rejects_bad_scale() {
        let g = grid_2pi(32);
        let u = SampledSignal::from_fn(g, f64::sin);
        let k = |xi: f64| Complex64::new((-xi * xi).exp(), 0.0);
        assert!(convolve_scaled(&u, &k, 0.0).is_err());
        assert!(convolve_scaled(&u, &k, -1.0).is_err());
    }

    #[test]
    fn tone_is_convolution_eigenfunction() {
        let g = grid_2pi(128);
        let xi0 = 5.0;
        let u = SampledSignal::from_complex_fn(g, |x| Complex64::from_polar(1.0, xi0 * x));
        let k = |xi: f64| Complex64::new((-xi * xi).exp(), 0.3 * xi);
        let eps = 0.3;
        let v = convolve_scaled(&u, &k, eps).unwrap();
        let gain = k(eps * xi0);
        for (i, val) in v.values().iter().enumerate() {
            assert!((val - u.values()[i] * gain).norm() <= 1e-10);
        }
    }

    #[test]
    fn sup_norm_examples() {
        let g = grid_2pi(1024);
        assert_eq!(sup_norm(&SampledSignal::zeros(g), None).unwrap(), 0.0);
        let s = SampledSignal::from_fn(g, f64::sin);
        assert!((sup_norm(&s, None).unwrap() - 1.0).abs() <= 1e-3);

        let g1 = Grid::new(1024, 1.0).unwrap();
        let lin = SampledSignal::from_fn(g1, |x| x);
        let w = Window::new(0.0, 0.25).unwrap();
        assert!((sup_norm(&lin, Some(&w)).unwrap() - 0.25).abs() <= g1.spacing());

        let empty = Window::new(0.1, 0.1 + 1e-6).unwrap();
        assert!(matches!(sup_norm(&lin, Some(&empty)), Err(Error::EmptyWindow { .. })));
    }

    #[test]
    fn parseval_convention() {
        let g = grid_2pi(64);
        let u = SampledSignal::from_fn(g, |x| (x.sin() + 0.3).exp());
        let spec = Spectrum::of(&u);
        let n = g.n_points() as f64;
        let lhs = u.values().iter().map(|v| v.norm_sqr()).sum::<f64>() / n;
        let rhs = spec.coeffs().iter().map(|v| v.norm_sqr()).sum::<f64>() / (n * n);
        assert!((lhs - rhs).abs() <= 1e-12 * lhs);
    }

    #[test]
    fn interpolation_is_exact_for_band_limited_samples() {
        let g = grid_2pi(64);
        let f = |x: f64| (3.0 * x).cos() - 0.5 * (7.0 * x + 0.2).sin();
        let u = SampledSignal::from_fn(g, f);
        for &y in &[0.123, -2.9, 3.1, 10.0] {
            assert!((u.interpolate(y).re - f(y)).abs() <= 1e-12);
        }
    }

    #[test]
    fn csv_round_trip_and_malformed() {
        let g = grid_2pi(32);
        let u = SampledSignal::from_fn(g, |x| x.sin() * 1e-3 + 1.0 / 3.0);
        let mut buf = Vec::new();
        write_csv(&u, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x,value\n"));
        let v = read_csv(buf.as_slice()).unwrap();
        assert_eq!(v, u);

        assert!(read_csv("x,value\n0,1\n".as_bytes()).is_err());
        assert!(read_csv("a,b\n0,1\n1,2\n".as_bytes()).is_err());
        assert!(read_csv("x,value\n0,abc\n1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn shift_moves_samples() {
        let g = grid_2pi(16);
        let u = SampledSignal::from_fn(g, |x| x);
        let s = u.shifted(1);
        assert_eq!(s.values()[1], u.values()[0]);
        assert_eq!(s.values()[0], u.values()[15]);
    }
}
