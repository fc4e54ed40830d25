//! Band-limited mollifiers, wavelets and the Littlewood-Paley pair.
//!
//! Every kernel is defined by its Fourier profile. The building block is the
//! smooth step `S(t) = 1 / (1 + exp(1/t - 1/(1-t)))` on `(0, 1)`, which is
//! `C^inf`, equals 0 for `t <= 0` and 1 for `t >= 1`. The lowpass plateau is
//! `1 - S((|xi| - a) / (b - a))`: identically 1 on `|xi| <= a` and supported in
//! `|xi| <= b`.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{convolve_scaled, FourierProfile, Grid, SampledSignal};
use crate::quad::{fd_weights, Composite};

/// Smooth step from 0 (t <= 0) to 1 (t >= 1).
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        1.0 / (1.0 + (1.0 / t - 1.0 / (1.0 - t)).exp())
    }
}

/// Derivative of [`smooth_step`].
pub fn smooth_step_derivative(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        return 0.0;
    }
    let s = smooth_step(t);
    s * (1.0 - s) * (1.0 / (t * t) + 1.0 / ((1.0 - t) * (1.0 - t)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    Mollifier,
    Wavelet,
    Lowpass,
    Band,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    /// `phi(xi) = 1 - S((|xi| - a)/(b - a))`.
    Plateau,
    /// `psi(xi) = -xi phi'(xi) = |xi| S'((|xi| - a)/(b - a)) / (b - a)`.
    Band,
}

/// Fourier profile `amplitude * (-i xi)^derivative * shape(xi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub shape: Shape,
    /// Inner radius `a` of the transition.
    pub flat: f64,
    /// Outer radius `b`; the profile vanishes for `|xi| >= b`.
    pub support: f64,
    pub derivative: u32,
    pub amplitude: f64,
}

impl KernelSpec {
    fn shape_value(&self, xi: f64) -> f64 {
        let r = xi.abs();
        let (a, b) = (self.flat, self.support);
        match self.shape {
            Shape::Plateau => {
                if r <= a {
                    1.0
                } else {
                    1.0 - smooth_step((r - a) / (b - a))
                }
            }
            Shape::Band => {
                if r <= a || r >= b {
                    0.0
                } else {
                    r * smooth_step_derivative((r - a) / (b - a)) / (b - a)
                }
            }
        }
    }

    pub fn support_radius(&self) -> f64 {
        self.support
    }

    /// `k_eps(x)` sampled on `grid`, centred at `x = 0`.
    pub fn sample(&self, grid: Grid, eps: f64) -> Result<SampledSignal> {
        convolve_scaled(&unit_impulse(grid), self, eps)
    }

    fn scaled(mut self, factor: f64) -> Self {
        self.amplitude *= factor;
        self
    }
}

impl FourierProfile for KernelSpec {
    fn profile(&self, xi: f64) -> Complex64 {
        let s = self.shape_value(xi);
        if s == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::new(0.0, -xi).powu(self.derivative) * (self.amplitude * s)
    }
}

/// Sample `1/h` at the origin and zero elsewhere: the grid delta.
pub fn unit_impulse(grid: Grid) -> SampledSignal {
    let mut v = vec![0.0; grid.n_points()];
    v[grid.origin_index()] = 1.0 / grid.spacing();
    SampledSignal::from_real(grid, v).expect("length matches")
}

/// Even real mollifier with a flat Fourier profile at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mollifier {
    spec: KernelSpec,
}

impl Mollifier {
    /// Plateau on `|xi| <= flat`, supported in `|xi| <= support`.
    pub fn with_plateau(flat: f64, support: f64) -> Result<Self> {
        if !(flat > 0.0 && flat < support && support.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "need 0 < flat < support, got flat = {flat}, support = {support}"
            )));
        }
        Ok(Self {
            spec: KernelSpec {
                kind: KernelKind::Mollifier,
                shape: Shape::Plateau,
                flat,
                support,
                derivative: 0,
                amplitude: 1.0,
            },
        })
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }
}

impl FourierProfile for Mollifier {
    fn profile(&self, xi: f64) -> Complex64 {
        self.spec.profile(xi)
    }
}

/// The canonical mollifier: flat on `|xi| <= 1/2`, supported in `|xi| <= 1`.
pub fn make_mollifier() -> Mollifier {
    Mollifier::with_plateau(0.5, 1.0).expect("valid plateau")
}

/// A wavelet with its number of vanishing moments and weak-radial constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wavelet {
    spec: KernelSpec,
    /// Vanishing moments; `None` when every moment vanishes.
    order: Option<u32>,
    weakly_radial_constant: f64,
}

impl Wavelet {
    fn from_spec(spec: KernelSpec, order: Option<u32>) -> Self {
        let c = weak_radial_integral(&spec, 1.0);
        Self {
            spec,
            order,
            weakly_radial_constant: c,
        }
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn order(&self) -> Option<u32> {
        self.order
    }

    pub fn weakly_radial_constant(&self) -> f64 {
        self.weakly_radial_constant
    }

    /// Multiplies the profile by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self::from_spec(self.spec.scaled(factor), self.order)
    }

    pub fn label(&self) -> String {
        match (self.spec.shape, self.spec.derivative) {
            (Shape::Band, _) => "mu".to_string(),
            (_, k) => format!("rho{k}"),
        }
    }
}

impl FourierProfile for Wavelet {
    fn profile(&self, xi: f64) -> Complex64 {
        self.spec.profile(xi)
    }
}

/// The derivative wavelet with profile `(-i xi)^k rho_hat(xi)`.
///
/// With the transform multiplier `conj(g_hat(eps xi))` this gives
/// `eps^{-k} W u(., eps) = d^k/dx^k (u * rho_eps)` exactly.
pub fn wavelet_from_derivative(rho: &Mollifier, k: u32) -> Result<Wavelet> {
    if k == 0 {
        return Err(Error::InvalidArgument("derivative order must be at least 1".into()));
    }
    let spec = KernelSpec {
        kind: KernelKind::Wavelet,
        derivative: k,
        ..rho.spec
    };
    Ok(Wavelet::from_spec(spec, Some(k)))
}

/// The scale-derivative wavelet, profile `-xi rho_hat'(xi)`.
pub fn wavelet_mu(rho: &Mollifier) -> Wavelet {
    let spec = KernelSpec {
        kind: KernelKind::Wavelet,
        shape: Shape::Band,
        ..rho.spec
    };
    Wavelet::from_spec(spec, None)
}

/// `int_0^inf |g_hat(t xi)|^2 dt / t`; independent of `xi != 0` for even
/// `|g_hat|`.
pub fn weak_radial_integral(spec: &KernelSpec, xi: f64) -> f64 {
    let r = xi.abs();
    if r == 0.0 {
        return f64::INFINITY;
    }
    let q = Composite::new(16);
    let lo = match spec.shape {
        Shape::Plateau => 0.0,
        Shape::Band => spec.flat / r,
    };
    let hi = spec.support / r;
    q.integrate(lo, hi, 96, |t| spec.profile(t * xi).norm_sqr() / t)
}

/// Rescales `g` so its weak-radial constant is 1.
pub fn normalize_weakly_radial(g: &Wavelet) -> Result<Wavelet> {
    if g.profile(0.0).norm() > 1e-14 {
        return Err(Error::InvalidArgument(
            "wavelet profile must vanish at 0 to be normalizable".into(),
        ));
    }
    let c = g.weakly_radial_constant;
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Numerical(format!("weak-radial constant {c}")));
    }
    Ok(g.scaled(1.0 / c.sqrt()))
}

/// `|int x^k g dx| = |g_hat^(k)(0)|` for `0 <= k < m`, by finite differences
/// of the profile on a 13-point stencil of step 1/64 around the origin.
pub fn moment_defect(spec: &KernelSpec, m: usize) -> Vec<f64> {
    const HALF: i32 = 6;
    let delta = spec.flat.min(0.5) / 32.0;
    let xs: Vec<f64> = (-HALF..=HALF).map(|j| j as f64 * delta).collect();
    let vals: Vec<Complex64> = xs.iter().map(|&x| spec.profile(x)).collect();
    let centre = vals[HALF as usize];
    (0..m)
        .map(|k| {
            if k == 0 {
                return centre.norm();
            }
            // derivative weights sum to zero, so differences from the centre
            // make flat profiles come out exactly zero; weights are symmetrised
            // so that parity cancellations are exact too
            let w = fd_weights(0.0, &xs, k);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            (1..=HALF as usize)
                .map(|j| {
                    let (p, q) = (HALF as usize + j, HALF as usize - j);
                    let wj = 0.5 * (w[p] + sign * w[q]);
                    ((vals[p] - centre) + (vals[q] - centre) * sign) * wj
                })
                .sum::<Complex64>()
                .norm()
        })
        .collect()
}

/// Littlewood-Paley pair with `psi(xi) = -xi phi'(xi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LPFamily {
    pub phi: KernelSpec,
    pub psi: KernelSpec,
}

impl LPFamily {
    pub fn phi(&self, xi: f64) -> f64 {
        self.phi.profile(xi).re
    }

    pub fn psi(&self, xi: f64) -> f64 {
        self.psi.profile(xi).re
    }

    /// Dyadic block `phi_j(xi) = phi(2^-j xi) - phi(2^{1-j} xi)`, `phi_0 = phi`.
    pub fn dyadic(&self, j: u32, xi: f64) -> f64 {
        if j == 0 {
            return self.phi(xi);
        }
        let s = 0.5f64.powi(j as i32);
        self.phi(s * xi) - self.phi(2.0 * s * xi)
    }

    /// `int_1^T psi(xi/t) dt/t` by Gauss-Legendre in `log t`, restricted to
    /// the support of the integrand.
    pub fn psi_integral(&self, xi: f64, t_max: f64, quad_points: usize) -> f64 {
        let r = xi.abs();
        if r == 0.0 || t_max <= 1.0 {
            return 0.0;
        }
        let lo = (r / self.psi.support).ln().max(0.0);
        let hi = (r / self.psi.flat).ln().min(t_max.ln());
        if hi <= lo {
            return 0.0;
        }
        let q = Composite::new(16);
        let panels = (quad_points / 16).max(1);
        q.integrate(lo, hi, panels, |tau| self.psi(xi * (-tau).exp()))
    }
}

pub fn make_lp_family() -> LPFamily {
    let phi = KernelSpec {
        kind: KernelKind::Lowpass,
        shape: Shape::Plateau,
        flat: 0.5,
        support: 1.0,
        derivative: 0,
        amplitude: 1.0,
    };
    LPFamily {
        phi,
        psi: KernelSpec {
            kind: KernelKind::Band,
            shape: Shape::Band,
            ..phi
        },
    }
}

/// `|phi(xi) + int_1^T psi(xi/t) dt/t - phi(xi/T)|`.
pub fn partition_residual(fam: &LPFamily, xi: f64, t_max: f64, quad_points: usize) -> Result<f64> {
    if !(t_max >= 1.0) {
        return Err(Error::InvalidArgument(format!("T must be >= 1, got {t_max}")));
    }
    Ok((fam.phi(xi) + fam.psi_integral(xi, t_max, quad_points) - fam.phi(xi / t_max)).abs())
}

/// Writes `xi,re,im` rows of the profile on `n` points of `[-xi_max, xi_max]`.
pub fn write_profile_csv<W: Write>(spec: &KernelSpec, xi_max: f64, n: usize, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(["xi", "re", "im"]).map_err(io)?;
    let n = n.max(2);
    for i in 0..n {
        let xi = -xi_max + 2.0 * xi_max * i as f64 / (n - 1) as f64;
        let v = spec.profile(xi);
        w.write_record([xi.to_string(), v.re.to_string(), v.im.to_string()])
            .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_step_derivative_matches_difference_quotient() {
        for &t in &[0.1, 0.3, 0.5, 0.77, 0.95] {
            let h = 1e-6;
            let fd = (smooth_step(t + h) - smooth_step(t - h)) / (2.0 * h);
            assert!((fd - smooth_step_derivative(t)).abs() < 1e-7);
        }
        assert_eq!(smooth_step(0.5), 0.5);
    }

    #[test]
    fn mollifier_flat_region_and_support() {
        let rho = make_mollifier();
        assert_eq!(rho.profile(0.0).re, 1.0);
        assert_eq!(rho.profile(0.4).re, 1.0);
        assert_eq!(rho.profile(-0.5).re, 1.0);
        assert_eq!(rho.profile(1.0).norm(), 0.0);
        assert_eq!(rho.profile(1.0 + 1e-6).norm(), 0.0);
        assert!(rho.profile(0.75).re > 0.0 && rho.profile(0.75).re < 1.0);
        for &x in &[0.1, 0.55, 0.8, 0.99] {
            assert_eq!(rho.profile(x), rho.profile(-x));
        }
    }

    #[test]
    fn mollifier_moments() {
        let rho = make_mollifier();
        let d = moment_defect(rho.spec(), 9);
        assert_eq!(d[0], 1.0);
        assert!(d[1..].iter().all(|&v| v <= 1e-8), "{d:?}");
    }

    #[test]
    fn derivative_wavelet_moments() {
        let rho = make_mollifier();
        for k in 1..=8u32 {
            let g = wavelet_from_derivative(&rho, k).unwrap();
            let d = moment_defect(g.spec(), k as usize + 1);
            assert!(d[..k as usize].iter().all(|&v| v <= 1e-8), "k={k} {d:?}");
            assert!(d[k as usize] > 1e-3);
        }
        assert!(wavelet_from_derivative(&rho, 0).is_err());
    }

    #[test]
    fn mu_has_all_moments_vanishing() {
        let mu = wavelet_mu(&make_mollifier());
        assert_eq!(mu.order(), None);
        let d = moment_defect(mu.spec(), 9);
        assert!(d.iter().all(|&v| v <= 1e-8), "{d:?}");
    }

    #[test]
    fn odd_wavelet_even_moments_vanish_by_parity() {
        let g = wavelet_from_derivative(&make_mollifier(), 3).unwrap();
        let d = moment_defect(g.spec(), 3);
        assert_eq!(d[0], 0.0);
        assert_eq!(d[2], 0.0);
    }

    #[test]
    fn weak_radial_normalization() {
        let rho = make_mollifier();
        for g in [
            wavelet_from_derivative(&rho, 1).unwrap(),
            wavelet_from_derivative(&rho, 2).unwrap(),
            wavelet_mu(&rho),
        ] {
            let n = normalize_weakly_radial(&g).unwrap();
            assert!((n.weakly_radial_constant() - 1.0).abs() <= 1e-6);
            for &xi in &[0.5, 1.0, 3.0] {
                assert!((weak_radial_integral(n.spec(), xi) - 1.0).abs() <= 1e-6);
            }
            let again = normalize_weakly_radial(&n).unwrap();
            assert!((again.spec().amplitude - n.spec().amplitude).abs() <= 1e-6 * n.spec().amplitude);
            let tripled = normalize_weakly_radial(&g.scaled(3.0)).unwrap();
            assert!((tripled.spec().amplitude - n.spec().amplitude).abs() <= 1e-12);
        }
    }

    #[test]
    fn normalize_rejects_nonzero_mean() {
        let rho = make_mollifier();
        let fake = Wavelet::from_spec(*rho.spec(), Some(0));
        assert!(normalize_weakly_radial(&fake).is_err());
    }

    #[test]
    fn lp_family_support_and_blocks() {
        let fam = make_lp_family();
        for &x in &[0.0, 0.3, 0.5, 1.0, 1.5, -0.2, -1.2] {
            assert_eq!(fam.psi(x), 0.0);
        }
        assert!(fam.psi(0.75) > 0.0);
        assert_eq!(fam.dyadic(1, 0.4), 0.0);
        assert_eq!(fam.dyadic(1, 1.0), 1.0);
        for &xi in &[0.0, 0.3, 7.0, 100.0, 511.9, -300.0] {
            let s: f64 = (0..=10).map(|j| fam.dyadic(j, xi)).sum();
            assert!((s - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn partition_of_unity() {
        let fam = make_lp_family();
        assert_eq!(partition_residual(&fam, 0.0, 5.0, 64).unwrap(), 0.0);
        assert!(partition_residual(&fam, 4.0, 16.0, 512).unwrap() <= 1e-8);
        assert!(partition_residual(&fam, 4.0, 2.0, 512).unwrap() <= 1e-8);
        assert!(partition_residual(&fam, 4.0, 0.5, 64).is_err());
        for &xi in &[0.6, 0.9, 1.7, 3.3, 10.0] {
            for &t in &[1.0, 1.5, 3.0, 20.0] {
                assert!(partition_residual(&fam, xi, t, 512).unwrap() <= 1e-8, "xi={xi} T={t}");
            }
        }
    }

    #[test]
    fn sampled_kernel_integrates_to_profile_at_zero() {
        let grid = Grid::new(1 << 12, 200.0).unwrap();
        let rho = make_mollifier();
        let k = rho.spec().sample(grid, 1.0).unwrap();
        assert!(k.is_real());
        let integral: f64 = k.real_parts().iter().sum::<f64>() * grid.spacing();
        assert!((integral - 1.0).abs() < 1e-12);
    }
}
