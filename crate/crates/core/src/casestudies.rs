//! Primitives, the linear ODE `u' = a u` and the transport equation
//! `u_t + a(x) u_x = 0` with nets as coefficients and data.

use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use crate::colombeau::Prediction;

use crate::colombeau::{
    classify_regularity, growth_profile, GenConst, GrowthTable, JetSource, Net, NetKind, RegularityReport,
};
use crate::error::{Error, Result};
use crate::exec;
use crate::grid::{derivative_multiplier, spectral_derivative, sup_on, Grid, SampledSignal, Spectrum, Window};
use crate::quad::fd_weights;
use crate::transforms::{decay_exponent, ScaleGrid};

/// Spectral antiderivative of the zero-mean part: multiplier `1/(i xi)`,
/// zero on the mean and Nyquist bins.
fn periodic_antiderivative(spec: &Spectrum) -> Result<SampledSignal> {
    let g = *spec.grid();
    let n = g.n_points();
    let m: Vec<Complex64> = (0..n)
        .map(|k| {
            if k == 0 || k == n / 2 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, -1.0 / g.frequency(k))
            }
        })
        .collect();
    spec.apply_values(&m)
}

/// Relative floor below which Fourier modes of pointwise-composed samples
/// are rounding noise.
const NOISE_FLOOR: f64 = 1e-13;

/// Derivatives `0..=max_order` of a pointwise-composed sample, with the
/// Fourier modes below `NOISE_FLOOR` times the largest one zeroed in the same
/// multiplier. Resampling between masking and differentiating would bring the
/// rounding noise back at every mode.
fn denoised_derivatives(u: &SampledSignal, max_order: usize) -> Result<Vec<SampledSignal>> {
    let spec = Spectrum::of(u);
    let top = spec.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    let keep: Vec<bool> = spec.coeffs().iter().map(|c| c.norm() >= NOISE_FLOOR * top).collect();
    (0..=max_order)
        .map(|k| {
            let m: Vec<Complex64> = derivative_multiplier(u.grid(), k as u32)
                .into_iter()
                .zip(&keep)
                .map(|(d, &on)| if on { d } else { Complex64::new(0.0, 0.0) })
                .collect();
            let out = spec.apply_values(&m)?;
            Ok(if u.is_real() { out.with_real_check() } else { out })
        })
        .collect()
}

/// `v(x) = int_{x0}^x u(y) dy` for periodic samples: the mean contributes
/// `mean (x - x0)`, the rest is antidifferentiated spectrally.
pub fn primitive_signal(u: &SampledSignal, x0: f64) -> Result<SampledSignal> {
    let g = *u.grid();
    let spec = Spectrum::of(u);
    let mean = spec.mean();
    let p = periodic_antiderivative(&spec)?;
    let p0 = Spectrum::of(&p).evaluate(x0);
    let vals: Vec<Complex64> = p
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| v - p0 + mean * (g.x(i) - x0))
        .collect();
    let out = SampledSignal::from_complex(g, vals)?;
    Ok(if u.is_real() { out.with_real_check() } else { out })
}

/// Cumulative trapezoid primitive on a grid refined `refine` times by
/// trigonometric interpolation, read back at the original points. Used as an
/// independent check of [`primitive_signal`].
pub fn primitive_trapezoid(u: &SampledSignal, x0_index: usize, refine: usize) -> Result<SampledSignal> {
    let g = *u.grid();
    let n = g.n_points();
    let fine_n = n * refine.max(1);
    let fine = Grid::new(fine_n, g.length())?;
    let spec = Spectrum::of(u);
    // zero-pad the spectrum, splitting the Nyquist bin
    let mut c = vec![Complex64::new(0.0, 0.0); fine_n];
    let scale = refine.max(1) as f64;
    for k in 0..n {
        let w = g.wavenumber(k);
        let v = spec.coeffs()[k] * scale;
        if k == n / 2 && refine > 1 {
            c[fine_n / 2 - n / 2] = v * 0.5;
            c[fine_n - n / 2] = v * 0.5;
            continue;
        }
        let idx = if w >= 0 {
            w as usize
        } else {
            (fine_n as i64 + w) as usize
        };
        c[idx] = v;
    }
    let uf = Spectrum::from_coeffs(fine, c, u.is_real())?.inverse();
    let h = fine.spacing();
    let start = x0_index * refine.max(1);
    let vals = uf.values();
    let mut cum = vec![Complex64::new(0.0, 0.0); fine_n];
    for i in start + 1..fine_n {
        cum[i] = cum[i - 1] + (vals[i - 1] + vals[i]) * (0.5 * h);
    }
    for i in (0..start).rev() {
        cum[i] = cum[i + 1] - (vals[i] + vals[i + 1]) * (0.5 * h);
    }
    let out: Vec<Complex64> = (0..n).map(|i| cum[i * refine.max(1)]).collect();
    let s = SampledSignal::from_complex(g, out)?;
    Ok(if u.is_real() { s.with_real_check() } else { s })
}

#[derive(Debug)]
struct Primitive {
    inner: Net,
    x0: f64,
}

impl JetSource for Primitive {
    fn jet(&self, eps: f64, order: usize) -> Result<Vec<SampledSignal>> {
        let mut inner = self.inner.jet(eps, order.saturating_sub(1))?;
        let v = primitive_signal(&inner[0], self.x0)?;
        inner.truncate(order);
        let mut out = Vec::with_capacity(order + 1);
        out.push(v);
        out.extend(inner);
        Ok(out)
    }
}

/// `v_eps(x) = int_{x0}^x u_eps`.
pub fn primitive_net(u: &Net, x0: f64) -> Result<Net> {
    let half = 0.5 * u.grid().length();
    if !(x0 >= -half && x0 < half) {
        return Err(Error::InvalidArgument(format!("x0 = {x0} outside the domain")));
    }
    Net::new(
        NetKind::Derived,
        *u.grid(),
        *u.window(),
        Arc::new(Primitive { inner: u.clone(), x0 }),
    )
}

#[derive(Debug)]
struct OdeSolution {
    a: Net,
    b: GenConst,
}

impl JetSource for OdeSolution {
    fn jet(&self, eps: f64, order: usize) -> Result<Vec<SampledSignal>> {
        let ja = self.a.jet(eps, order.saturating_sub(1))?;
        let v = primitive_signal(&ja[0], 0.0)?;
        let b = self.b.value(eps);
        let u0 = v.map(|z| b * z.exp());
        let mut out = vec![u0];
        // u^(k) = sum_j C(k-1, j) a^(j) u^(k-1-j)
        for k in 1..=order {
            let mut acc = SampledSignal::zeros(*v.grid());
            let mut c = 1.0;
            for j in 0..k {
                acc = acc.axpby(1.0, &ja[j].mul(&out[k - 1 - j])?, c)?;
                c = c * (k - 1 - j) as f64 / (j + 1) as f64;
            }
            out.push(acc);
        }
        Ok(out)
    }
}

/// `u_eps = b_eps exp(int_0^x a_eps)`, the solution of `u' = a u`, `u(0) = b`.
/// Overflow shows up as non-finite samples, which the classifier reports as
/// a non-moderate net.
pub fn ode_solve(a: &Net, b: GenConst) -> Result<Net> {
    Net::new(
        NetKind::Derived,
        *a.grid(),
        *a.window(),
        Arc::new(OdeSolution { a: a.clone(), b }),
    )
}

/// `||u' - a u||_K / ||u||_K` with `u'` from an 8th-order central difference.
pub fn ode_residual(a: &SampledSignal, u: &SampledSignal, window: &Window) -> Result<f64> {
    if a.grid() != u.grid() {
        return Err(Error::GridMismatch);
    }
    let g = u.grid();
    let h = g.spacing();
    let xs: Vec<f64> = (-4..=4).map(|j| j as f64 * h).collect();
    let w = fd_weights(0.0, &xs, 1);
    let idx = window.indices(g)?;
    let n = g.n_points();
    let (mut res, mut norm) = (0.0f64, 0.0f64);
    for &i in &idx {
        if i < 4 || i + 4 >= n {
            continue;
        }
        let d: Complex64 = (0..9).map(|j| u.values()[i + j - 4] * w[j]).sum();
        res = res.max((d - a.values()[i] * u.values()[i]).norm());
        norm = norm.max(u.values()[i].norm());
    }
    if norm == 0.0 {
        return Ok(res);
    }
    Ok(res / norm)
}

/// Whether `sup_K |Re a_eps|` stays bounded as `eps -> 0`.
pub fn real_part_bounded(a: &Net, sg: &ScaleGrid) -> Result<bool> {
    let idx = a.window().indices(a.grid())?;
    let curve = exec::try_map(sg.scales(), |&e| {
        let v = a.eval(e)?;
        let re: Vec<Complex64> = v.values().iter().map(|z| Complex64::new(z.re, 0.0)).collect();
        Ok((e, sup_on(&re, &idx)))
    })?;
    if curve.iter().all(|p| p.1 == 0.0) {
        return Ok(true);
    }
    Ok(decay_exponent(&curve, sg.default_window())?.slope >= crate::colombeau::BOUNDED_SLOPE)
}

/// Regularity of `u' = a u`, `u(0) = b` for `a` of class `s` and `b` of class `t`.
pub fn predicted_regularity_ode(s: f64, t: f64) -> Result<Prediction> {
    if !(s >= -1.0) {
        return Err(Error::InvalidArgument(format!("need s >= -1, got {s}")));
    }
    Ok(if t > 0.0 {
        Prediction::Value(s + 1.0)
    } else if t < 0.0 {
        Prediction::Value(t)
    } else if s == -1.0 {
        Prediction::Below(0.0)
    } else {
        Prediction::Value(0.0)
    })
}

/// Regularity of the transport solution for coefficient class `s >= 0` and
/// data class `t`.
pub fn predicted_regularity_pde(s: f64, t: f64) -> Result<Prediction> {
    if !(s >= 0.0) {
        return Err(Error::InvalidArgument(format!("need s >= 0, got {s}")));
    }
    Ok(if s > 0.0 {
        Prediction::Value(t.min(s + 1.0))
    } else {
        Prediction::Below(t.min(1.0))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientBounds {
    pub c1: f64,
    pub c2: f64,
}

impl CoefficientBounds {
    pub fn new(c1: f64, c2: f64) -> Result<Self> {
        if !(c1 > 0.0 && c1 <= c2 && c2.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "need 0 < c1 <= c2, got c1 = {c1}, c2 = {c2}"
            )));
        }
        Ok(Self { c1, c2 })
    }

    /// Rejects the first sample outside `[c1, c2]` (or with an imaginary part).
    pub fn verify(&self, a: &SampledSignal) -> Result<()> {
        for (i, v) in a.values().iter().enumerate() {
            if v.im.abs() > 1e-12 * v.norm() || !(v.re >= self.c1 && v.re <= self.c2) {
                return Err(Error::BoundsViolation {
                    x: a.grid().x(i),
                    value: v.re,
                    c1: self.c1,
                    c2: self.c2,
                });
            }
        }
        Ok(())
    }
}

/// Taylor evaluation of a smooth periodic sample from its spectral
/// derivatives at the nearest grid point.
#[derive(Debug, Clone)]
pub struct LocalJet {
    grid: Grid,
    derivs: Vec<Vec<Complex64>>,
}

const JET_TERMS: usize = 14;

impl LocalJet {
    pub fn new(u: &SampledSignal) -> Result<Self> {
        let derivs = exec::try_map_range(JET_TERMS, |k| Ok(spectral_derivative(u, k as u32)?.into_values()))?;
        Ok(Self {
            grid: *u.grid(),
            derivs,
        })
    }

    fn from_derivs(grid: Grid, derivs: Vec<Vec<Complex64>>) -> Self {
        Self { grid, derivs }
    }

    /// Value of the `m`-th derivative at an arbitrary point.
    pub fn eval_derivative(&self, m: usize, y: f64) -> Complex64 {
        let g = &self.grid;
        let yw = g.wrap(y);
        let n = g.n_points();
        let pos = (yw - g.x(0)) / g.spacing();
        let i = (pos.round() as usize) % n;
        let mut d = yw - g.x(i);
        if d > 0.5 * g.length() {
            d -= g.length();
        } else if d < -0.5 * g.length() {
            d += g.length();
        }
        let mut acc = Complex64::new(0.0, 0.0);
        let mut term = 1.0;
        for (j, row) in self.derivs.iter().enumerate().skip(m) {
            acc += row[i] * term;
            term *= d / (j + 1 - m) as f64;
        }
        acc
    }

    pub fn eval(&self, y: f64) -> Complex64 {
        self.eval_derivative(0, y)
    }
}

/// Monotone piecewise-cubic (Fritsch-Carlson) interpolant of increasing data.
#[derive(Debug, Clone)]
struct Pchip {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ds: Vec<f64>,
}

impl Pchip {
    fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let n = xs.len();
        let del: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])).collect();
        let mut ds = vec![0.0; n];
        ds[0] = del[0];
        ds[n - 1] = del[n - 2];
        for i in 1..n - 1 {
            if del[i - 1] * del[i] > 0.0 {
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                let w1 = 2.0 * h1 + h0;
                let w2 = h1 + 2.0 * h0;
                ds[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
            }
        }
        Self { xs, ys, ds }
    }

    fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        let i = match self.xs.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(i) => return self.ys[i],
            Err(i) => i.clamp(1, n - 1) - 1,
        };
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        (2.0 * t3 - 3.0 * t2 + 1.0) * self.ys[i]
            + (t3 - 2.0 * t2 + t) * h * self.ds[i]
            + (-2.0 * t3 + 3.0 * t2) * self.ys[i + 1]
            + (t3 - t2) * h * self.ds[i + 1]
    }
}

/// Characteristic map of a positive coefficient: `A(x) = int_0^x dr / a(r)`
/// extended by `A(x + L) = A(x) + P`, and its inverse.
#[derive(Debug, Clone)]
pub struct Flow {
    grid: Grid,
    mean_inv: f64,
    p0: f64,
    /// Taylor jet of `P`, the periodic part of `A` (row `j` is `P^(j)`).
    jet: LocalJet,
    inverse_table: Pchip,
    period: f64,
}

impl Flow {
    pub fn new(a: &SampledSignal, bounds: &CoefficientBounds) -> Result<Self> {
        bounds.verify(a)?;
        let grid = *a.grid();
        let f = SampledSignal::from_real(grid, a.values().iter().map(|v| 1.0 / v.re).collect())?;
        let spec = Spectrum::of(&f);
        let mean_inv = spec.mean().re;
        let p = periodic_antiderivative(&spec)?;
        let mut derivs = Vec::with_capacity(JET_TERMS);
        derivs.push(p.values().to_vec());
        let fz = f.map(|v| v - mean_inv);
        let rest = exec::try_map_range(JET_TERMS - 1, |k| Ok(spectral_derivative(&fz, k as u32)?.into_values()))?;
        derivs.extend(rest);
        let jet = LocalJet::from_derivs(grid, derivs);
        let p0 = p.values()[grid.origin_index()].re;
        let period = mean_inv * grid.length();
        let n = grid.n_points();
        let xs: Vec<f64> = (0..=n).map(|i| grid.x(0) + i as f64 * grid.spacing()).collect();
        let avals: Vec<f64> = (0..=n)
            .map(|i| {
                let pv = p.values()[i % n].re;
                mean_inv * xs[i] + pv - p0
            })
            .collect();
        Ok(Self {
            grid,
            mean_inv,
            p0,
            jet,
            inverse_table: Pchip::new(avals, xs),
            period,
        })
    }

    /// Increment of `A` over one spatial period.
    pub fn period(&self) -> f64 {
        self.period
    }

    /// `A(y)` for any real `y`.
    pub fn a_of(&self, y: f64) -> f64 {
        self.mean_inv * y + self.jet.eval(y).re - self.p0
    }

    /// `A'(y) = 1 / a(y)`.
    fn slope(&self, y: f64) -> f64 {
        self.mean_inv + self.jet.eval_derivative(1, y).re
    }

    /// Solves `A(h) = target`.
    pub fn inverse(&self, target: f64) -> f64 {
        let base = self.inverse_table.xs[0];
        let k = ((target - base) / self.period).floor();
        let mut h = self.inverse_table.eval(target - k * self.period) + k * self.grid.length();
        for _ in 0..12 {
            let step = (self.a_of(h) - target) / self.slope(h);
            h -= step;
            if step.abs() <= 1e-15 * (1.0 + h.abs()) {
                break;
            }
        }
        h
    }

    /// `h(x, t) = A^{-1}(A(x) - t)`.
    pub fn foot(&self, x: f64, t: f64) -> f64 {
        self.inverse(self.a_of(x) - t)
    }
}

/// Foot points `h(x, t)` of the characteristics through `xs`.
pub fn char_flow(a_eps: &SampledSignal, bounds: &CoefficientBounds, xs: &[f64], t: f64) -> Result<Vec<f64>> {
    let flow = Flow::new(a_eps, bounds)?;
    Ok(xs.iter().map(|&x| flow.foot(x, t)).collect())
}

pub const DEFAULT_T_MAX: f64 = 1.0;

/// `t_max * l / (count - 1)` for `l = 0..count`.
pub fn default_t_values(t_max: f64, count: usize) -> Vec<f64> {
    let c = count.max(2);
    (0..c).map(|l| t_max * l as f64 / (c - 1) as f64).collect()
}

/// Solution net `u_eps(x, t) = b_eps(h_eps(x, t))` of the transport problem.
#[derive(Debug, Clone)]
pub struct TransportNet {
    a: Net,
    b: Net,
    bounds: CoefficientBounds,
    t_values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdeResidual {
    pub eps: f64,
    pub t: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Checks `c1 <= a_eps <= c2` on every retained scale and packages the solver.
pub fn transport_solve(
    a: &Net,
    b: &Net,
    t_values: &[f64],
    t_max: f64,
    bounds: CoefficientBounds,
    sg: &ScaleGrid,
) -> Result<TransportNet> {
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch);
    }
    if t_values.is_empty() {
        return Err(Error::InvalidArgument("no time values".into()));
    }
    if let Some(&t) = t_values.iter().find(|&&t| !(0.0..=t_max).contains(&t)) {
        return Err(Error::InvalidArgument(format!("t = {t} outside [0, {t_max}]")));
    }
    exec::try_map(sg.scales(), |&e| bounds.verify(&a.eval(e)?))?;
    Ok(TransportNet {
        a: a.clone(),
        b: b.clone(),
        bounds,
        t_values: t_values.to_vec(),
    })
}

impl TransportNet {
    pub fn grid(&self) -> &Grid {
        self.a.grid()
    }

    pub fn window(&self) -> &Window {
        self.b.window()
    }

    pub fn t_values(&self) -> &[f64] {
        &self.t_values
    }

    pub fn bounds(&self) -> &CoefficientBounds {
        &self.bounds
    }

    fn setup(&self, eps: f64) -> Result<(SampledSignal, Flow, LocalJet, SampledSignal)> {
        let a = self.a.eval(eps)?;
        let flow = Flow::new(&a, &self.bounds)?;
        let b = self.b.eval(eps)?;
        let jet = LocalJet::new(&b)?;
        Ok((a, flow, jet, b))
    }

    fn slice_with(&self, flow: &Flow, jet: &LocalJet, real: bool, t: f64) -> Result<SampledSignal> {
        let g = *self.grid();
        let vals: Vec<Complex64> = exec::map_range(g.n_points(), |i| jet.eval(flow.foot(g.x(i), t)));
        if real {
            SampledSignal::from_real(g, vals.iter().map(|v| v.re).collect())
        } else {
            SampledSignal::from_complex(g, vals)
        }
    }

    /// `u_eps(., t)`.
    pub fn slice(&self, eps: f64, t: f64) -> Result<SampledSignal> {
        let (_, flow, jet, b) = self.setup(eps)?;
        self.slice_with(&flow, &jet, b.is_real(), t)
    }

    /// All time slices at one scale.
    pub fn slices(&self, eps: f64) -> Result<Vec<SampledSignal>> {
        let (_, flow, jet, b) = self.setup(eps)?;
        self.t_values
            .iter()
            .map(|&t| self.slice_with(&flow, &jet, b.is_real(), t))
            .collect()
    }

    /// Foot points at `(x_i, t)` and the data evaluated there.
    pub fn feet(&self, eps: f64, t: f64) -> Result<(Vec<f64>, SampledSignal)> {
        let a = self.a.eval(eps)?;
        let flow = Flow::new(&a, &self.bounds)?;
        let g = *self.grid();
        Ok((
            (0..g.n_points()).map(|i| flow.foot(g.x(i), t)).collect(),
            self.b.eval(eps)?,
        ))
    }

    /// `max |u_eps(x_i, t) - b_eps(h_eps(x_i, t))| / ||b_eps||` over `samples`
    /// evenly spaced grid points, with `b_eps` at the foot point evaluated by
    /// direct trigonometric interpolation rather than the Taylor jet.
    pub fn characteristic_defect(&self, eps: f64, t: f64, samples: usize) -> Result<f64> {
        let (_, flow, jet, b) = self.setup(eps)?;
        let u = self.slice_with(&flow, &jet, b.is_real(), t)?;
        let spec = Spectrum::of(&b);
        let g = *self.grid();
        let stride = (g.n_points() / samples.max(1)).max(1);
        let worst = exec::map_range(g.n_points().div_ceil(stride), |m| {
            let i = m * stride;
            (u.values()[i] - spec.evaluate(flow.foot(g.x(i), t))).norm()
        })
        .into_iter()
        .fold(0.0, f64::max);
        Ok(worst / b.max_modulus().max(f64::MIN_POSITIVE))
    }

    /// `||u_t + a u_x||_K` with `u_t` by a centred difference of step
    /// `1e-3 eps / c2` and `u_x` spectral; tolerance `1e-4 c2 ||u_x||_K`.
    pub fn pde_residual(&self, eps: f64, t: f64) -> Result<PdeResidual> {
        let (a, flow, jet, b) = self.setup(eps)?;
        let dt = 1e-3 * eps / self.bounds.c2;
        let real = b.is_real();
        let up = self.slice_with(&flow, &jet, real, t + dt)?;
        let um = self.slice_with(&flow, &jet, real, t - dt)?;
        let u = self.slice_with(&flow, &jet, real, t)?;
        let ux = denoised_derivatives(&u, 1)?.pop().expect("two orders");
        let idx = self.window().indices(self.grid())?;
        let mut res = 0.0f64;
        for &i in &idx {
            let ut = (up.values()[i] - um.values()[i]) / (2.0 * dt);
            res = res.max((ut + a.values()[i] * ux.values()[i]).norm());
        }
        let tol = 1e-4 * self.bounds.c2 * sup_on(ux.values(), &idx);
        Ok(PdeResidual {
            eps,
            t,
            residual: res,
            tolerance: tol,
            passed: res <= tol,
        })
    }

    /// Mixed-derivative growth table at one scale: entry `n` is
    /// `max_{i + j = n, t} ||d_x^i d_t^j u_eps(., t)||_K`, with time
    /// derivatives generated by `d_t -> -a_eps d_x`.
    fn mixed_norms(&self, eps: f64, max_order: usize, idx: &[usize]) -> Result<Vec<f64>> {
        let (a, flow, jet, b) = self.setup(eps)?;
        let mut best = vec![0.0f64; max_order + 1];
        for &t in &self.t_values {
            let mut w = self.slice_with(&flow, &jet, b.is_real(), t)?;
            for j in 0..=max_order {
                let derivs = denoised_derivatives(&w, max_order - j)?;
                for (i, d) in derivs.iter().enumerate() {
                    best[i + j] = best[i + j].max(sup_on(d.values(), idx));
                }
                if j < max_order {
                    w = a.mul(&derivs[1])?.scale(-1.0);
                }
            }
        }
        Ok(best)
    }

    /// Writes `x,t_0,t_1,...` with one column per time slice.
    pub fn write_slices_csv<W: Write>(&self, eps: f64, out: W) -> Result<()> {
        let slices = self.slices(eps)?;
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        let mut header = vec!["x".to_string()];
        header.extend(self.t_values.iter().map(|t| t.to_string()));
        w.write_record(&header).map_err(io)?;
        let g = self.grid();
        for i in 0..g.n_points() {
            let mut rec = vec![g.x(i).to_string()];
            rec.extend(slices.iter().map(|s| s.values()[i].re.to_string()));
            w.write_record(&rec).map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Growth table of `u_eps(x, t)` over total orders `i + j <= max_order`.
pub fn growth_profile_2d(u: &TransportNet, max_order: usize, sg: &ScaleGrid) -> Result<GrowthTable> {
    let idx = u.window().indices(u.grid())?;
    let cols = exec::try_map(sg.scales(), |&e| u.mixed_norms(e, max_order, &idx))?;
    Ok(GrowthTable {
        max_order,
        scales: sg.scales().to_vec(),
        norms: (0..=max_order).map(|k| cols.iter().map(|c| c[k]).collect()).collect(),
        window: *u.window(),
    })
}

/// Classifies the space-time solution; fails if the PDE identity that the
/// time derivatives rely on is not met at the finest and coarsest scale.
pub fn classify_regularity_2d(u: &TransportNet, max_order: usize, sg: &ScaleGrid) -> Result<RegularityReport> {
    let t_mid = u.t_values[u.t_values.len() / 2];
    for &e in &[sg.eps_max(), sg.eps_min()] {
        let r = u.pde_residual(e, t_mid)?;
        if !r.passed {
            return Err(Error::Numerical(format!(
                "PDE residual {} exceeds {} at eps = {e}",
                r.residual, r.tolerance
            )));
        }
    }
    classify_regularity(&growth_profile_2d(u, max_order, sg)?)
}

/// 1-D classification of each fixed-time slice.
pub fn classify_slices(u: &TransportNet, max_order: usize, sg: &ScaleGrid) -> Result<Vec<RegularityReport>> {
    let idx = u.window().indices(u.grid())?;
    // per scale: per slice: per order
    let cols = exec::try_map(sg.scales(), |&e| {
        u.slices(e)?
            .iter()
            .map(|s| {
                Ok(denoised_derivatives(s, max_order)?
                    .iter()
                    .map(|d| sup_on(d.values(), &idx))
                    .collect::<Vec<f64>>())
            })
            .collect::<Result<Vec<Vec<f64>>>>()
    })?;
    (0..u.t_values.len())
        .map(|l| {
            classify_regularity(&GrowthTable {
                max_order,
                scales: sg.scales().to_vec(),
                norms: (0..=max_order)
                    .map(|k| cols.iter().map(|c| c[l][k]).collect())
                    .collect(),
                window: *u.window(),
            })
        })
        .collect()
}

/// Growth table of a net restricted to one window; re-exported for the
/// experiments that compare slices against data.
pub fn growth_profile_on(net: &Net, window: Window, max_order: usize, sg: &ScaleGrid) -> Result<GrowthTable> {
    growth_profile(&net.with_window(window)?, max_order, sg)
}
