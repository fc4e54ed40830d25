//! Checks against independently computed reference values.

use std::f64::consts::PI;

use approx::assert_relative_eq;
use num_complex::Complex64;
use zyglab::colombeau::*;
use zyglab::grid::*;
use zyglab::kernels::*;
use zyglab::quad::Composite;
use zyglab::signals::*;
use zyglab::transforms::*;

/// `rho_eps(x) = (1/pi) int_0^{1/eps} rho_hat(eps xi) cos(xi x) dxi`, summed
/// over the periodic images `x + nL`.
fn mollifier_image_sum(rho: &Mollifier, eps: f64, x: f64, l: f64, images: i32) -> f64 {
    let q = Composite::new(32);
    let support = rho.spec().support_radius() / eps;
    (-images..=images)
        .map(|n| {
            let y = x + n as f64 * l;
            // about four panels per oscillation of cos(xi y)
            let panels = 64 + (4.0 * support * y.abs() / (2.0 * PI)).ceil() as usize;
            q.integrate(0.0, support, panels, |xi| rho.profile(eps * xi).re * (xi * y).cos()) / PI
        })
        .sum()
}

#[test]
fn embedded_delta_matches_image_sum() {
    let grid = Grid::new(1 << 12, 2.0 * PI).unwrap();
    let rho = make_mollifier();
    let sg = ScaleGrid::geometric(0.02, 0.25, 12).unwrap();
    let net = embed(
        &Recipe::DeltaComb.sample(&grid).unwrap(),
        &rho,
        &sg,
        Window::central_half(&grid),
    )
    .unwrap();
    for &eps in &[0.02, 0.05] {
        let v = net.eval(eps).unwrap();
        for di in [0i64, 1, 3, -7] {
            let i = (grid.origin_index() as i64 + di) as usize;
            let oracle = mollifier_image_sum(&rho, eps, grid.x(i), grid.length(), 30);
            assert_relative_eq!(v.values()[i].re, oracle, max_relative = 1e-6);
        }
    }
}

#[test]
fn embedded_delta_matches_fourier_series() {
    // (1/L) sum_k rho_hat(eps xi_k) cos(xi_k x) summed directly
    let grid = Grid::new(1 << 10, 2.0 * PI).unwrap();
    let rho = make_mollifier();
    let eps = 0.1;
    let v = convolve_scaled(&unit_impulse(grid), &rho, eps).unwrap();
    for i in [0usize, 100, 512, 700] {
        let x = grid.x(i);
        let direct: f64 = (-100i64..=100)
            .map(|k| rho.profile(eps * k as f64).re * (k as f64 * x).cos())
            .sum::<f64>()
            / grid.length();
        assert!((v.values()[i].re - direct).abs() <= 1e-12 * v.max_modulus());
    }
}

/// Width of the Gaussian damping. Its Fourier transform is below `e^-72` at
/// the plateau edge, so damping changes no moment at the 1e-6 level.
const SIGMA: f64 = 24.0;

/// `int x^k g(x) exp(-x^2 / 2 sigma^2) dx` by the rectangle rule on a wide grid.
fn damped_moments(spec: &KernelSpec, orders: usize) -> Vec<Complex64> {
    let sigma = SIGMA;
    let grid = Grid::new(1 << 14, 400.0).unwrap();
    let g = spec.sample(grid, 1.0).unwrap();
    (0..orders)
        .map(|k| {
            g.values()
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let x = grid.x(i);
                    v * x.powi(k as i32) * (-x * x / (2.0 * sigma * sigma)).exp()
                })
                .sum::<Complex64>()
                * grid.spacing()
        })
        .collect()
}

#[test]
fn moments_against_damped_quadrature() {
    let rho = make_mollifier();
    let m = damped_moments(rho.spec(), 9);
    assert!((m[0].re - 1.0).abs() <= 1e-6);
    let fd = moment_defect(rho.spec(), 9);
    for k in 1..9 {
        assert!(m[k].norm() <= 1e-6 * SIGMA.powi(k as i32), "order {k}: {}", m[k]);
        assert!(fd[k] <= 1e-8);
    }
    // rho integrates any function with spectrum inside its plateau to the
    // value at 0, so int x^j rho^(k) G = d^k(x^j G)(0) = C(k,j) j! G^(k-j)(0)
    let gauss_derivative = |m: usize| -> f64 {
        if m % 2 == 1 {
            return 0.0;
        }
        let n = m / 2;
        let double_fact: f64 = (1..=n).map(|i| (2 * i - 1) as f64).product();
        (-1f64).powi(n as i32) * double_fact / SIGMA.powi(m as i32)
    };
    let fact = |n: usize| (1..=n).map(|i| i as f64).product::<f64>();
    for order in 1..=4usize {
        let g = wavelet_from_derivative(&rho, order as u32).unwrap();
        let m = damped_moments(g.spec(), order + 1);
        let fd = moment_defect(g.spec(), order + 1);
        for (j, mj) in m.iter().enumerate().take(order + 1) {
            let oracle = fact(order) / fact(order - j) * gauss_derivative(order - j);
            assert!(
                (mj.re - oracle).abs() <= 1e-6 * fact(order) && mj.im.abs() <= 1e-9,
                "rho^{order} moment {j}: {mj} vs {oracle}"
            );
        }
        assert!(fd[..order].iter().all(|&d| d <= 1e-8));
        assert_relative_eq!(fd[order], fact(order), max_relative = 1e-6);
    }
}

#[test]
fn weak_radial_against_log_trapezoid() {
    let rho = make_mollifier();
    for g in [
        wavelet_from_derivative(&rho, 1).unwrap(),
        wavelet_from_derivative(&rho, 3).unwrap(),
        wavelet_mu(&rho),
    ] {
        for &xi in &[0.7, 5.0] {
            // trapezoid in log t on a wide range; the integrand is compactly supported
            let (a, b, n) = ((1e-6f64 / xi).ln(), (2.0 / xi).ln(), 200_000);
            let h = (b - a) / n as f64;
            let trap: f64 = (0..=n)
                .map(|i| {
                    let t = (a + i as f64 * h).exp();
                    let w = if i == 0 || i == n { 0.5 } else { 1.0 };
                    w * g.profile(t * xi).norm_sqr()
                })
                .sum::<f64>()
                * h;
            assert_relative_eq!(weak_radial_integral(g.spec(), xi), trap, max_relative = 1e-8);
        }
    }
}

#[test]
fn partition_of_unity_reference_case() {
    let fam = make_lp_family();
    assert!(partition_residual(&fam, 4.0, 16.0, 512).unwrap() <= 1e-8);
    // phi(xi/T) - phi(xi) is the integral ψ-sum, checked at an interior value
    let xi = 0.75;
    let lhs = fam.phi(xi / 1.2) - fam.phi(xi);
    assert_relative_eq!(fam.psi_integral(xi, 1.2, 512), lhs.abs(), max_relative = 1e-10);
}

#[test]
fn lp_block_of_tone_is_profile_value() {
    let grid = Grid::new(256, 2.0 * PI).unwrap();
    let fam = make_lp_family();
    let u = SampledSignal::from_fn(grid, |x| (12.0 * x).cos());
    for &t in &[14.0, 20.0, 30.0] {
        let b = lp_block(&u, &fam, t).unwrap();
        let c = fam.psi(12.0 / t);
        assert!((sup_norm(&b, None).unwrap() - c.abs()).abs() <= 1e-12);
    }
}

#[test]
fn synthesis_of_tone_against_closed_form() {
    // the reconstruction multiplier is sum_j w_j |g_hat(eps_j xi)|^2
    let grid = Grid::new(4096, 2.0 * PI).unwrap();
    let rho = make_mollifier();
    let g = wavelet_from_derivative(&rho, 2).unwrap();
    let sg = ScaleGrid::geometric(0.02, 0.5, 30).unwrap();
    let u = SampledSignal::from_fn(grid, |x| (6.0 * x).cos());
    let v = synthesis(&cwt(&u, &g, &sg).unwrap(), &g, sg.eps_min(), sg.eps_max()).unwrap();
    let logs: Vec<f64> = sg.scales().iter().map(|e| e.ln()).collect();
    let m: f64 = (0..sg.len())
        .map(|j| {
            let l = if j > 0 { (logs[j - 1] - logs[j]).abs() } else { 0.0 };
            let r = if j + 1 < sg.len() {
                (logs[j] - logs[j + 1]).abs()
            } else {
                0.0
            };
            0.5 * (l + r) * g.profile(sg.scales()[j] * 6.0).norm_sqr()
        })
        .sum();
    for i in (0..4096).step_by(37) {
        assert!((v.values()[i].re - m * (6.0 * grid.x(i)).cos()).abs() <= 1e-12);
    }
}

#[test]
fn eps_pow_sine_growth_is_closed_form() {
    let grid = Grid::new(1 << 12, 2.0 * PI).unwrap();
    let w = Window::central_half(&grid);
    let sg = ScaleGrid::geometric(0.01, 0.25, 12).unwrap();
    let net = formula_net(Formula::EpsPowSine { s: 0.5 }, grid, w).unwrap();
    let t = growth_profile(&net, 3, &sg).unwrap();
    let idx = w.indices(&grid).unwrap();
    for (j, &e) in sg.scales().iter().enumerate() {
        for k in 0..=3usize {
            // sup over the window of eps^{0.5-k} |sin^{(k)}(x/eps)|
            let sup = idx
                .iter()
                .map(|&i| {
                    let y = grid.x(i) / e;
                    (if k % 2 == 0 { y.sin() } else { y.cos() }).abs()
                })
                .fold(0.0, f64::max);
            assert_relative_eq!(t.norms[k][j], e.powf(0.5 - k as f64) * sup, max_relative = 1e-9);
        }
    }
}
