use std::f64::consts::PI;

use zyglab::casestudies::*;
use zyglab::colombeau::*;
use zyglab::grid::{Grid, Window};
use zyglab::kernels::make_mollifier;
use zyglab::signals::Recipe;
use zyglab::transforms::ScaleGrid;
use zyglab::Error;

fn small() -> (Grid, Window, ScaleGrid) {
    let grid = Grid::new(1 << 12, 2.0 * PI).unwrap();
    let sg = ScaleGrid::geometric(8.0 * grid.spacing(), 0.25, 16).unwrap();
    (grid, Window::central_half(&grid), sg)
}

fn one(grid: Grid, window: Window) -> Net {
    formula_net(Formula::GeneralizedConst { c: GenConst::real(1.0) }, grid, window).unwrap()
}

#[test]
fn unit_speed_translates_a_linear_profile() {
    let (grid, window, sg) = small();
    let b = embed(&Recipe::Linear.sample(&grid).unwrap(), &make_mollifier(), &sg, window).unwrap();
    // grid-multiple times make the exact answer a pure index shift
    let shifts = [0usize, 256, 512];
    let ts: Vec<f64> = shifts.iter().map(|&m| m as f64 * grid.spacing()).collect();
    let u = transport_solve(
        &one(grid, window),
        &b,
        &ts,
        DEFAULT_T_MAX,
        CoefficientBounds::new(0.5, 2.0).unwrap(),
        &sg,
    )
    .unwrap();
    let idx = window.indices(&grid).unwrap();
    let interior = Window::new(-0.5, 0.5).unwrap().indices(&grid).unwrap();
    let eps_min = *sg.scales().last().unwrap();
    for &eps in &[sg.scales()[0], eps_min] {
        let b_eps = b.eval(eps).unwrap();
        for (&m, &t) in shifts.iter().zip(&ts) {
            let slice = u.slice(eps, t).unwrap();
            let shift = idx
                .iter()
                .map(|&i| (slice.values()[i] - b_eps.values()[i - m]).norm())
                .fold(0.0, f64::max);
            assert!(shift <= 1e-10, "eps {eps} t {t}: {shift:e}");
            if eps == eps_min {
                // b_eps = x up to the mollified cutoff tail
                let lin = interior
                    .iter()
                    .map(|&i| (slice.values()[i].re - (grid.x(i) - t)).abs())
                    .fold(0.0, f64::max);
                assert!(lin <= 1e-5, "t {t}: {lin:e}");
            }
        }
    }
}

#[test]
fn rough_coefficient_characteristics_solve_the_flow_equation() {
    let (grid, window, sg) = small();
    let recipe = Recipe::Affine {
        offset: 1.5,
        scale: 0.35,
        inner: Box::new(Recipe::weierstrass_with_exponent(0.5, 4, 5, true)),
    };
    let a = embed(&recipe.sample(&grid).unwrap(), &make_mollifier(), &sg, window).unwrap();
    let bounds = CoefficientBounds::new(1.1, 1.9).unwrap();
    let xs: Vec<f64> = (0..97).map(|i| -2.0 + 4.0 * i as f64 / 96.0).collect();
    for &eps in &[sg.scales()[0], sg.scales()[15]] {
        let a_eps = a.eval(eps).unwrap();
        let flow = Flow::new(&a_eps, &bounds).unwrap();
        for &t in &[0.1, 0.6, 1.0] {
            let feet = char_flow(&a_eps, &bounds, &xs, t).unwrap();
            for (&x, &h) in xs.iter().zip(&feet) {
                // A(h) = A(x) - t characterises the foot point
                let r = flow.a_of(h) - flow.a_of(x) + t;
                assert!(r.abs() <= 1e-8 * (1.0 + t / bounds.c1), "x {x} t {t}: {r:e}");
                assert!(h <= x - t * bounds.c1 + 1e-12 && h >= x - t * bounds.c2 - 1e-12);
            }
        }
    }
}

#[test]
fn transported_delta_keeps_order_minus_one() {
    let (grid, window, sg) = small();
    let d = embed(
        &Recipe::DeltaComb.sample(&grid).unwrap(),
        &make_mollifier(),
        &sg,
        window,
    )
    .unwrap();
    let a = one(grid, window);
    let u = transport_solve(
        &a,
        &d,
        &[0.0, 0.25],
        DEFAULT_T_MAX,
        CoefficientBounds::new(0.5, 2.0).unwrap(),
        &sg,
    )
    .unwrap();
    let r = classify_regularity_2d(&u, 3, &sg).unwrap();
    assert!((r.s_hat + 1.0).abs() <= 0.05, "s_hat {}", r.s_hat);
}

#[test]
fn coefficient_outside_bounds_is_rejected() {
    let (grid, window, sg) = small();
    let a = formula_net(Formula::GeneralizedConst { c: GenConst::real(3.0) }, grid, window).unwrap();
    let err = transport_solve(
        &a,
        &one(grid, window),
        &[0.5],
        DEFAULT_T_MAX,
        CoefficientBounds::new(0.5, 2.0).unwrap(),
        &sg,
    )
    .unwrap_err();
    assert!(matches!(err, Error::BoundsViolation { value, .. } if value == 3.0));
    assert!(CoefficientBounds::new(2.0, 1.0).is_err());
    assert!(CoefficientBounds::new(0.0, 1.0).is_err());
}

#[test]
fn times_beyond_horizon_are_rejected() {
    let (grid, window, sg) = small();
    let a = one(grid, window);
    let bounds = CoefficientBounds::new(0.5, 2.0).unwrap();
    assert!(matches!(
        transport_solve(&a, &a, &[0.5, 1.5], DEFAULT_T_MAX, bounds, &sg),
        Err(Error::InvalidArgument(_))
    ));
    assert!(transport_solve(&a, &a, &[-0.1], DEFAULT_T_MAX, bounds, &sg).is_err());
    assert!(transport_solve(&a, &a, &[], DEFAULT_T_MAX, bounds, &sg).is_err());
}

#[test]
fn derivative_of_delta_drops_one_order() {
    let (grid, window, sg) = small();
    let d = embed(
        &Recipe::DeltaComb.sample(&grid).unwrap(),
        &make_mollifier(),
        &sg,
        window,
    )
    .unwrap();
    let r = classify_net(&derivative_net(&d, 1).unwrap(), 3, &sg).unwrap();
    assert!((r.s_hat + 2.0).abs() <= 0.05, "s_hat {}", r.s_hat);
}

#[test]
fn smooth_nets_stay_bounded_under_differentiation() {
    let (grid, window, sg) = small();
    let u = embed(
        &Recipe::Tone { xi0: 3.0 }.sample(&grid).unwrap(),
        &make_mollifier(),
        &sg,
        window,
    )
    .unwrap();
    let r = classify_net(&derivative_net(&u, 2).unwrap(), 3, &sg).unwrap();
    assert!(r.all_bounded, "{r:?}");
}

#[test]
fn products_meet_the_predicted_class() {
    let (grid, window, sg) = small();
    let rho = make_mollifier();
    let cusp = |s| {
        embed(
            &Recipe::Cusp { s, center: 0.0 }.sample(&grid).unwrap(),
            &rho,
            &sg,
            window,
        )
        .unwrap()
    };
    let (a, b) = (cusp(0.4), cusp(0.6));
    let r = classify_net(&a, 3, &sg).unwrap().s_hat;
    let s = classify_net(&b, 3, &sg).unwrap().s_hat;
    let p = classify_net(&product_net(&a, &b).unwrap(), 3, &sg).unwrap().s_hat;
    assert!(
        p >= predicted_product_regularity(r, s).target() - 0.05,
        "{p} vs {r}, {s}"
    );

    let sine = |s| formula_net(Formula::EpsPowSine { s }, grid, window).unwrap();
    let p = classify_net(&product_net(&sine(0.3), &sine(-0.5)).unwrap(), 3, &sg)
        .unwrap()
        .s_hat;
    assert!(p >= -0.55, "{p}");
}

#[test]
fn ode_with_constant_coefficient_is_exponential() {
    let (grid, window, sg) = small();
    let a = formula_net(Formula::GeneralizedConst { c: GenConst::real(0.7) }, grid, window).unwrap();
    let u = ode_solve(&a, GenConst::real(2.0)).unwrap();
    let v = u.eval(sg.scales()[4]).unwrap();
    let idx = window.indices(&grid).unwrap();
    for &i in &idx {
        let exact = 2.0 * (0.7 * grid.x(i)).exp();
        assert!((v.values()[i].re - exact).abs() <= 1e-10 * exact);
    }
    let res = ode_residual(&a.eval(sg.scales()[4]).unwrap(), &v, &window).unwrap();
    assert!(res <= 1e-8, "{res:e}");
}

#[test]
fn log_constant_coefficient_is_not_moderate_regular() {
    let (grid, window, sg) = small();
    let a = formula_net(
        Formula::GeneralizedConst {
            c: GenConst::LogInv { coef: 1.0.into() },
        },
        grid,
        window,
    )
    .unwrap();
    let u = ode_solve(&a, GenConst::real(1.0)).unwrap();
    assert!(classify_net(&u, 3, &sg).unwrap().non_regular);
}
