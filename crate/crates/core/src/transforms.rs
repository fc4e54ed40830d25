//! Continuous wavelet transform, synthesis, Littlewood-Paley blocks and the
//! log-log fits that turn decay curves into exponents.

use std::io::Write;
use std::ops::RangeInclusive;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::grid::{sup_on, FourierProfile, Grid, SampledSignal, Spectrum, Window};
use crate::kernels::{LPFamily, Wavelet};

/// Geometric scales `eps_j = eps_max q^j`, strictly decreasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleGrid {
    scales: Vec<f64>,
}

pub const MIN_SCALES: usize = 12;

impl ScaleGrid {
    /// `count` scales from `eps_max` down to `eps_min` inclusive.
    pub fn geometric(eps_min: f64, eps_max: f64, count: usize) -> Result<Self> {
        if !(eps_min > 0.0 && eps_min < eps_max && eps_max.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "need 0 < eps_min < eps_max, got [{eps_min}, {eps_max}]"
            )));
        }
        if count < MIN_SCALES {
            return Err(Error::InvalidArgument(format!(
                "at least {MIN_SCALES} scales required, got {count}"
            )));
        }
        let q = (eps_min / eps_max).powf(1.0 / (count - 1) as f64);
        let mut scales: Vec<f64> = (0..count).map(|j| eps_max * q.powi(j as i32)).collect();
        scales[count - 1] = eps_min;
        Ok(Self { scales })
    }

    /// Scales `eps_max q^j` for `j = 0..count`.
    pub fn with_ratio(eps_max: f64, q: f64, count: usize) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidArgument(format!("ratio must lie in (0, 1), got {q}")));
        }
        Self::geometric(eps_max * q.powi(count as i32 - 1), eps_max, count)
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn len(&self) -> usize {
        self.scales.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scales.is_empty()
    }

    pub fn eps_max(&self) -> f64 {
        self.scales[0]
    }

    pub fn eps_min(&self) -> f64 {
        *self.scales.last().expect("non-empty")
    }

    pub fn ratio(&self) -> f64 {
        self.scales[1] / self.scales[0]
    }

    /// Rejects scales finer than eight grid cells.
    pub fn check_resolution(&self, grid: &Grid) -> Result<()> {
        let floor = 8.0 * grid.spacing();
        if self.eps_min() < floor * (1.0 - 1e-12) {
            return Err(Error::InvalidArgument(format!(
                "eps_min = {} is below the resolution limit 8h = {floor}",
                self.eps_min()
            )));
        }
        Ok(())
    }

    /// The fit window used throughout: drop the coarsest third of the scales,
    /// which is pre-asymptotic for nets with smooth background terms, and the
    /// two finest, which sit near the resolution limit.
    pub fn default_window(&self) -> RangeInclusive<usize> {
        default_window(self.len())
    }
}

pub fn default_window(n: usize) -> RangeInclusive<usize> {
    if n >= 8 {
        (n + 1) / 3..=n - 3
    } else {
        0..=n.saturating_sub(1)
    }
}

/// Rows `W_g u(., eps_j)` of a wavelet transform.
#[derive(Debug, Clone)]
pub struct Scalogram {
    wavelet: Wavelet,
    scales: ScaleGrid,
    rows: Vec<SampledSignal>,
}

impl Scalogram {
    pub fn from_rows(wavelet: Wavelet, scales: ScaleGrid, rows: Vec<SampledSignal>) -> Result<Self> {
        if rows.len() != scales.len() {
            return Err(Error::InvalidArgument("row count must match scale count".into()));
        }
        if rows.windows(2).any(|w| w[0].grid() != w[1].grid()) {
            return Err(Error::GridMismatch);
        }
        Ok(Self { wavelet, scales, rows })
    }

    pub fn wavelet(&self) -> &Wavelet {
        &self.wavelet
    }

    pub fn scales(&self) -> &ScaleGrid {
        &self.scales
    }

    pub fn rows(&self) -> &[SampledSignal] {
        &self.rows
    }

    pub fn grid(&self) -> &Grid {
        self.rows[0].grid()
    }

    /// `(eps_j, sup_K |W(., eps_j)|)`.
    pub fn sup_curve(&self, window: Option<&Window>) -> Result<Vec<(f64, f64)>> {
        let idx = match window {
            Some(w) => w.indices(self.grid())?,
            None => (0..self.grid().n_points()).collect(),
        };
        Ok(self
            .scales
            .scales()
            .iter()
            .zip(&self.rows)
            .map(|(&e, r)| (e, sup_on(r.values(), &idx)))
            .collect())
    }

    /// `a * self + b * other` (same wavelet and scales assumed).
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if self.scales != other.scales {
            return Err(Error::InvalidArgument("scale grids differ".into()));
        }
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(x, y)| x.axpby(a, y, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            wavelet: self.wavelet,
            scales: self.scales.clone(),
            rows,
        })
    }

    /// CSV matrix: header `eps,x_0,...`, then one row per scale. Real rows are
    /// written as values, complex ones as moduli.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        let mut header = vec!["eps".to_string()];
        header.extend(self.grid().points().iter().map(|x| x.to_string()));
        w.write_record(&header).map_err(io)?;
        let real = self.rows.iter().all(|r| r.is_real());
        for (e, r) in self.scales.scales().iter().zip(&self.rows) {
            let mut rec = vec![e.to_string()];
            rec.extend(
                r.values()
                    .iter()
                    .map(|v| if real { v.re.to_string() } else { v.norm().to_string() }),
            );
            w.write_record(&rec).map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `W_g u(., eps) = u * conj(g_check)_eps`, i.e. the multiplier
/// `conj(g_hat(eps xi))`, for every scale.
pub fn cwt(u: &SampledSignal, g: &Wavelet, sg: &ScaleGrid) -> Result<Scalogram> {
    sg.check_resolution(u.grid())?;
    let spec = Spectrum::of(u);
    let rows = exec::try_map(sg.scales(), |&eps| spec.apply(&|xi: f64| g.profile(eps * xi).conj()))?;
    Scalogram::from_rows(*g, sg.clone(), rows)
}

/// `int_r^R H(., eps) * g_eps deps/eps`, trapezoid rule in `log eps` over the
/// scalogram rows whose scale lies in `[r, R]`.
pub fn synthesis(s: &Scalogram, g: &Wavelet, r: f64, big_r: f64) -> Result<SampledSignal> {
    let tol = 1e-12;
    let sel: Vec<usize> = (0..s.scales.len())
        .filter(|&j| {
            let e = s.scales.scales()[j];
            e >= r * (1.0 - tol) && e <= big_r * (1.0 + tol)
        })
        .collect();
    if sel.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "scale range [{r}, {big_r}] selects {} rows, need at least 2",
            sel.len()
        )));
    }
    let logs: Vec<f64> = sel.iter().map(|&j| s.scales.scales()[j].ln()).collect();
    let m = sel.len();
    let weights: Vec<f64> = (0..m)
        .map(|i| {
            let left = if i > 0 { (logs[i - 1] - logs[i]).abs() } else { 0.0 };
            let right = if i + 1 < m { (logs[i] - logs[i + 1]).abs() } else { 0.0 };
            0.5 * (left + right)
        })
        .collect();
    let grid = *s.grid();
    let n = grid.n_points();
    let freqs = grid.frequencies();
    let parts = exec::map_range(m, |i| {
        let j = sel[i];
        let eps = s.scales.scales()[j];
        let spec = Spectrum::of(&s.rows[j]);
        spec.coeffs()
            .iter()
            .zip(&freqs)
            .map(|(&c, &xi)| c * g.profile(eps * xi) * weights[i])
            .collect::<Vec<Complex64>>()
    });
    let mut acc = vec![Complex64::new(0.0, 0.0); n];
    for p in &parts {
        for (a, v) in acc.iter_mut().zip(p) {
            *a += v;
        }
    }
    let all_real = sel.iter().all(|&j| s.rows[j].is_real());
    Ok(Spectrum::from_coeffs(grid, acc, all_real)?.inverse())
}

/// `min_p ||synthesis(cwt(u)) + p - u||_inf / ||u||_inf` over constants `p`.
pub fn reconstruction_residual(u: &SampledSignal, g: &Wavelet, sg: &ScaleGrid, poly_degree: u32) -> Result<f64> {
    if poly_degree != 0 {
        return Err(Error::InvalidArgument(
            "on the torus only constants (degree 0) can be absorbed".into(),
        ));
    }
    let norm = u.max_modulus();
    if norm == 0.0 {
        return Err(Error::InvalidArgument("zero signal has no relative residual".into()));
    }
    let s = cwt(u, g, sg)?;
    let v = synthesis(&s, g, sg.eps_min(), sg.eps_max())?;
    let d = v.axpby(1.0, u, -1.0)?;
    Ok(best_constant_offset(d.values()) / norm)
}

/// `min_c max_i |d_i + c|`, exact for real data and a centred upper bound for
/// complex data.
fn best_constant_offset(d: &[Complex64]) -> f64 {
    let (mut rlo, mut rhi, mut ilo, mut ihi) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for v in d {
        rlo = rlo.min(v.re);
        rhi = rhi.max(v.re);
        ilo = ilo.min(v.im);
        ihi = ihi.max(v.im);
    }
    let c = Complex64::new(0.5 * (rlo + rhi), 0.5 * (ilo + ihi));
    d.iter().map(|v| (v - c).norm()).fold(0.0, f64::max)
}

/// Least-squares fit of a decay curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// Fitted exponent; 0 when the logarithmic case is detected.
    pub exponent: f64,
    /// Raw slope of `log y` against `log eps`.
    pub slope: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    /// Inclusive index range into the input curve.
    pub window: [usize; 2],
    pub log_flag: bool,
}

const ZERO_FLOOR: f64 = 1e-30;

struct LineFit {
    slope: f64,
    intercept: f64,
    rms: f64,
}

fn line_fit(xs: &[f64], ys: &[f64]) -> LineFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let rms = (xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    LineFit { slope, intercept, rms }
}

/// Fits `log y = slope * log eps + intercept` over `window`.
///
/// Points with `y <= 1e-30` are excluded. The logarithmic flag is raised
/// when the slope is small (`|slope| < 0.5`), `log y` is at least twice as
/// well explained by a line in `log log(1/eps)` with slope in `[0.5, 2]`,
/// and the power fit leaves a visible residual.
pub fn decay_exponent(curve: &[(f64, f64)], window: RangeInclusive<usize>) -> Result<DecayFit> {
    let (lo, hi) = (*window.start(), *window.end());
    if hi >= curve.len() || lo > hi {
        return Err(Error::InvalidArgument(format!(
            "window {lo}..={hi} outside curve of length {}",
            curve.len()
        )));
    }
    let pts: Vec<(f64, f64)> = curve[lo..=hi]
        .iter()
        .copied()
        .filter(|&(e, y)| y > ZERO_FLOOR && e > 0.0)
        .collect();
    if pts.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "{} usable points in fit window, need 4",
            pts.len()
        )));
    }
    if pts.iter().any(|&(e, y)| !e.is_finite() || !y.is_finite()) {
        return Err(Error::Numerical("non-finite value in decay curve".into()));
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let fit = line_fit(&xs, &ys);
    let mut log_flag = false;
    if fit.slope.abs() < 0.5 && fit.rms > 1e-6 && pts.iter().all(|p| p.0 < 1.0) {
        let ls: Vec<f64> = pts.iter().map(|p| (1.0 / p.0).ln().ln()).collect();
        let lf = line_fit(&ls, &ys);
        log_flag = (0.5..=2.0).contains(&lf.slope) && 2.0 * lf.rms <= fit.rms;
    }
    Ok(DecayFit {
        exponent: if log_flag { 0.0 } else { fit.slope },
        slope: fit.slope,
        intercept: fit.intercept,
        residual_rms: fit.rms,
        window: [lo, hi],
        log_flag,
    })
}

/// `psi(D/t) u`.
pub fn lp_block(u: &SampledSignal, fam: &LPFamily, t: f64) -> Result<SampledSignal> {
    if !(t >= 1.0) {
        return Err(Error::InvalidArgument(format!("t must be >= 1, got {t}")));
    }
    crate::grid::apply_multiplier(u, &|xi: f64| Complex64::new(fam.psi(xi / t), 0.0))
}

/// `phi_j(D) u` for the dyadic partition.
pub fn dyadic_block(u: &SampledSignal, fam: &LPFamily, j: u32) -> Result<SampledSignal> {
    crate::grid::apply_multiplier(u, &|xi: f64| Complex64::new(fam.dyadic(j, xi), 0.0))
}

/// `t0 * ratio^j` up to and including `t_max`.
pub fn geometric_t_grid(t0: f64, ratio: f64, t_max: f64) -> Result<Vec<f64>> {
    if !(t0 >= 1.0 && ratio > 1.0 && t_max >= t0) {
        return Err(Error::InvalidArgument(format!(
            "bad t grid: t0 = {t0}, ratio = {ratio}, t_max = {t_max}"
        )));
    }
    let mut out = vec![t0];
    while let Some(&last) = out.last() {
        let next = last * ratio;
        if next > t_max * (1.0 + 1e-12) {
            break;
        }
        out.push(next);
    }
    Ok(out)
}

/// Dyadic `t` grid aligned with the lowest nonzero mode (`psi` peaks near
/// `3/4`), capped at an eighth of the Nyquist frequency.
pub fn default_t_grid(grid: &Grid) -> Result<Vec<f64>> {
    let t0 = (4.0 / 3.0 * 2.0 * std::f64::consts::PI / grid.length()).max(1.0);
    geometric_t_grid(t0, 2.0, grid.nyquist() / 8.0)
}

fn block_norms(u: &SampledSignal, fam: &LPFamily, t_grid: &[f64]) -> Result<Vec<f64>> {
    let spec = Spectrum::of(u);
    exec::try_map(t_grid, |&t| {
        if !(t >= 1.0) {
            return Err(Error::InvalidArgument(format!("t must be >= 1, got {t}")));
        }
        Ok(spec
            .apply(&|xi: f64| Complex64::new(fam.psi(xi / t), 0.0))?
            .max_modulus())
    })
}

/// Littlewood-Paley estimate: fit `log ||psi(D/t) u||_inf` against `log t`,
/// exponent `= -slope`. Blocks below `1e-12` of the largest are treated as
/// empty; the fit drops two blocks at each end when at least eight remain.
pub fn besov_exponent(u: &SampledSignal, fam: &LPFamily, t_grid: &[f64]) -> Result<DecayFit> {
    let nyq = u.grid().nyquist();
    if let Some(&t_max) = t_grid.iter().max_by(|a, b| a.total_cmp(b)) {
        if t_max > 0.5 * nyq * (1.0 + 1e-12) {
            return Err(Error::InvalidArgument(format!(
                "t_max = {t_max} exceeds half the Nyquist frequency {nyq}"
            )));
        }
    }
    let norms = block_norms(u, fam, t_grid)?;
    let top = norms.iter().cloned().fold(0.0, f64::max);
    let curve: Vec<(f64, f64)> = t_grid
        .iter()
        .zip(&norms)
        .filter(|(_, &y)| y > 1e-12 * top && y > ZERO_FLOOR)
        .map(|(&t, &y)| (1.0 / t, y))
        .collect();
    if curve.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "only {} nonempty frequency blocks",
            curve.len()
        )));
    }
    decay_exponent(&curve, default_window(curve.len()))
}

/// `||phi(D) u||_inf + max_t t^s ||psi(D/t) u||_inf` over `t_grid`.
pub fn zygmund_seminorm(u: &SampledSignal, fam: &LPFamily, s: f64, t_grid: &[f64]) -> Result<f64> {
    let low = crate::grid::apply_multiplier(u, &|xi: f64| Complex64::new(fam.phi(xi), 0.0))?.max_modulus();
    let norms = block_norms(u, fam, t_grid)?;
    let high = t_grid
        .iter()
        .zip(&norms)
        .map(|(&t, &y)| t.powf(s) * y)
        .fold(0.0, f64::max);
    Ok(low + high)
}

/// Wavelet-decay estimate: fit of `sup_K |W_g u(., eps)|` over the default window.
pub fn wavelet_exponent(u: &SampledSignal, g: &Wavelet, sg: &ScaleGrid, window: Option<&Window>) -> Result<DecayFit> {
    let s = cwt(u, g, sg)?;
    decay_exponent(&s.sup_curve(window)?, sg.default_window())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::kernels::{make_lp_family, make_mollifier, wavelet_from_derivative, wavelet_mu};
    use std::f64::consts::PI;

    fn g2pi(n: usize) -> Grid {
        Grid::new(n, 2.0 * PI).unwrap()
    }

    #[test]
    fn scale_grid_validation() {
        assert!(ScaleGrid::geometric(0.01, 0.25, 11).is_err());
        assert!(ScaleGrid::geometric(0.3, 0.25, 16).is_err());
        let sg = ScaleGrid::geometric(0.01, 0.25, 16).unwrap();
        assert!(sg.scales().windows(2).all(|w| w[1] < w[0]));
        assert_eq!(sg.eps_min(), 0.01);
        let coarse = Grid::new(64, 2.0 * PI).unwrap();
        assert!(sg.check_resolution(&coarse).is_err());
        assert!(sg.check_resolution(&g2pi(1 << 13)).is_ok());
        let r = ScaleGrid::with_ratio(0.25, 0.5f64.sqrt(), 12).unwrap();
        assert!((r.ratio() - 0.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn cwt_kills_constants_and_scales_tones() {
        let grid = g2pi(1 << 10);
        let sg = ScaleGrid::geometric(0.05, 0.5, 12).unwrap();
        let g = wavelet_from_derivative(&make_mollifier(), 2).unwrap();
        let c = SampledSignal::from_fn(grid, |_| 3.0);
        let s = cwt(&c, &g, &sg).unwrap();
        assert!(s.rows().iter().all(|r| r.max_modulus() == 0.0));

        let xi0 = 7.0;
        let tone = SampledSignal::from_complex_fn(grid, |x| Complex64::from_polar(1.0, xi0 * x));
        let s = cwt(&tone, &g, &sg).unwrap();
        for (e, row) in sg.scales().iter().zip(s.rows()) {
            let m = g.profile(e * xi0).norm();
            assert!(row.values().iter().all(|v| (v.norm() - m).abs() <= 1e-10));
        }
    }

    #[test]
    fn cwt_shift_covariance() {
        let grid = g2pi(256);
        let sg = ScaleGrid::geometric(0.2, 0.9, 12).unwrap();
        let g = wavelet_mu(&make_mollifier());
        let u = SampledSignal::from_fn(grid, |x| (x.sin() * 2.0).exp());
        let a = cwt(&u.shifted(1), &g, &sg).unwrap();
        let b = cwt(&u, &g, &sg).unwrap();
        for (ra, rb) in a.rows().iter().zip(b.rows()) {
            let sb = rb.shifted(1);
            let d = ra
                .values()
                .iter()
                .zip(sb.values())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            assert!(d <= 1e-12 * rb.max_modulus().max(1.0));
        }
    }

    #[test]
    fn synthesis_linear_and_zero() {
        let grid = g2pi(256);
        let sg = ScaleGrid::geometric(0.2, 0.9, 12).unwrap();
        let g = wavelet_mu(&make_mollifier());
        let u = SampledSignal::from_fn(grid, |x| (3.0 * x).cos() + 0.3 * (5.0 * x).sin());
        let v = SampledSignal::from_fn(grid, |x| (x.cos()).exp());
        let su = cwt(&u, &g, &sg).unwrap();
        let sv = cwt(&v, &g, &sg).unwrap();
        let zero = su.combine(0.0, &sv, 0.0).unwrap();
        assert_eq!(synthesis(&zero, &g, 0.2, 0.9).unwrap().max_modulus(), 0.0);
        let comb = su.combine(2.0, &sv, -0.5).unwrap();
        let lhs = synthesis(&comb, &g, 0.2, 0.9).unwrap();
        let rhs = synthesis(&su, &g, 0.2, 0.9)
            .unwrap()
            .axpby(2.0, &synthesis(&sv, &g, 0.2, 0.9).unwrap(), -0.5)
            .unwrap();
        let d = lhs
            .values()
            .iter()
            .zip(rhs.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(d <= 1e-12 * rhs.max_modulus().max(1.0));
        assert!(synthesis(&su, &g, 0.95, 0.99).is_err());
    }

    #[test]
    fn reconstruction_of_constant_is_exact() {
        let grid = g2pi(256);
        let sg = ScaleGrid::geometric(0.2, 0.9, 12).unwrap();
        let g = crate::kernels::normalize_weakly_radial(&wavelet_mu(&make_mollifier())).unwrap();
        let c = SampledSignal::from_fn(grid, |_| 2.0);
        assert_eq!(reconstruction_residual(&c, &g, &sg, 0).unwrap(), 0.0);
        assert!(reconstruction_residual(&c, &g, &sg, 1).is_err());
        assert!(reconstruction_residual(&SampledSignal::zeros(grid), &g, &sg, 0).is_err());
    }

    fn curve(f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
        let sg = ScaleGrid::geometric(1e-3, 0.25, 24).unwrap();
        sg.scales().iter().map(|&e| (e, f(e))).collect()
    }

    #[test]
    fn decay_fit_examples() {
        let c = curve(|e| e.powf(0.7));
        let f = decay_exponent(&c, default_window(c.len())).unwrap();
        assert!((f.exponent - 0.7).abs() <= 1e-12 && f.residual_rms <= 1e-12 && !f.log_flag);

        let c = curve(|_| 3.0);
        let f = decay_exponent(&c, default_window(c.len())).unwrap();
        assert!(f.exponent.abs() <= 1e-12 && !f.log_flag);

        let c = curve(|e| (1.0 / e).ln());
        let f = decay_exponent(&c, default_window(c.len())).unwrap();
        assert!(f.log_flag && f.exponent == 0.0);

        assert!(matches!(decay_exponent(&c, 0..=2), Err(Error::InsufficientData(_))));
        let mut z = curve(|e| e);
        for p in z.iter_mut().skip(3) {
            p.1 = 0.0;
        }
        assert!(matches!(decay_exponent(&z, 0..=10), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn decay_fit_json_fields() {
        let c = curve(|e| e);
        let f = decay_exponent(&c, 0..=10).unwrap();
        let v: serde_json::Value = serde_json::to_value(&f).unwrap();
        for key in ["exponent", "intercept", "residual_rms", "window", "log_flag"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn lp_block_examples() {
        let grid = g2pi(256);
        let fam = make_lp_family();
        let tone = SampledSignal::from_fn(grid, |x| (3.0 * x).cos());
        assert!(lp_block(&tone, &fam, 2.0).unwrap().max_modulus() <= 1e-14);
        let b = lp_block(&tone, &fam, 4.0).unwrap();
        let k = fam.psi(0.75);
        for (i, v) in b.values().iter().enumerate() {
            assert!((v.re - k * (3.0 * grid.x(i)).cos()).abs() <= 1e-12);
        }
        assert!(lp_block(&tone, &fam, 0.5).is_err());
    }

    #[test]
    fn dyadic_blocks_reassemble() {
        let grid = g2pi(512);
        let fam = make_lp_family();
        let u = SampledSignal::from_fn(grid, |x| (x.sin()).exp() + (40.0 * x).cos() * 0.1);
        let mut acc = SampledSignal::zeros(grid);
        for j in 0..=9 {
            acc = acc.axpby(1.0, &dyadic_block(&u, &fam, j).unwrap(), 1.0).unwrap();
        }
        let d = acc
            .values()
            .iter()
            .zip(u.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(d <= 1e-10);
    }

    #[test]
    fn besov_tone_is_degenerate() {
        let grid = g2pi(1 << 12);
        let fam = make_lp_family();
        let tone = SampledSignal::from_fn(grid, |x| (3.0 * x).cos());
        let t = default_t_grid(&grid).unwrap();
        assert!(matches!(
            besov_exponent(&tone, &fam, &t),
            Err(Error::InsufficientData(_))
        ));
        let too_high = vec![1.0, 2.0, 4.0, grid.nyquist()];
        assert!(besov_exponent(&tone, &fam, &too_high).is_err());
    }

    #[test]
    fn seminorm_zero_and_monotone() {
        let grid = g2pi(1 << 10);
        let fam = make_lp_family();
        let t = default_t_grid(&grid).unwrap();
        assert_eq!(
            zygmund_seminorm(&SampledSignal::zeros(grid), &fam, 0.5, &t).unwrap(),
            0.0
        );
        let u = SampledSignal::from_fn(grid, |x| x.sin().abs().powf(0.4));
        let mut prev = 0.0;
        for s in [0.0, 0.2, 0.4, 0.6, 1.0] {
            let v = zygmund_seminorm(&u, &fam, s, &t).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }
}
