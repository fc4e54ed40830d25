//! Regularization nets `eps -> u_eps`, their derivative-growth tables and the
//! generalized Zygmund classifier.
//!
//! A net of class `s` satisfies, on every compact `K`,
//! `||d^k u_eps||_K = O(1)` for `k < s`, `O(log 1/eps)` for `k = s` integer,
//! and `O(eps^{s-k})` for `k > s`. The estimate `s_hat` reported here is the
//! largest `s` compatible with the measured per-order behaviour.

use std::fmt;
use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exec;
use crate::grid::{sup_on, Grid, SampledSignal, Spectrum, Window};
use crate::kernels::Mollifier;
use crate::transforms::{decay_exponent, default_window, ScaleGrid};

/// Anything that can produce `u_eps` together with its first derivatives.
pub trait JetSource: Send + Sync + fmt::Debug {
    /// `[u_eps, d u_eps, ..., d^order u_eps]` on the net's grid.
    fn jet(&self, eps: f64, order: usize) -> Result<Vec<SampledSignal>>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NetKind {
    Embedded,
    Formula,
    Derived,
}

/// A regularization net on a grid with its compact window `K`.
#[derive(Debug, Clone)]
pub struct Net {
    kind: NetKind,
    grid: Grid,
    window: Window,
    source: Arc<dyn JetSource>,
}

impl Net {
    pub fn new(kind: NetKind, grid: Grid, window: Window, source: Arc<dyn JetSource>) -> Result<Self> {
        window.indices(&grid)?;
        Ok(Self {
            kind,
            grid,
            window,
            source,
        })
    }

    pub fn kind(&self) -> NetKind {
        self.kind
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn with_window(&self, window: Window) -> Result<Self> {
        window.indices(&self.grid)?;
        Ok(Self { window, ..self.clone() })
    }

    pub fn eval(&self, eps: f64) -> Result<SampledSignal> {
        Ok(self.jet(eps, 0)?.swap_remove(0))
    }

    pub fn jet(&self, eps: f64, order: usize) -> Result<Vec<SampledSignal>> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::InvalidArgument(format!("scale must be positive, got {eps}")));
        }
        let j = self.source.jet(eps, order)?;
        debug_assert_eq!(j.len(), order + 1);
        Ok(j)
    }
}

#[derive(Debug)]
struct Embedded {
    spectrum: Spectrum,
    rho: Mollifier,
}

impl JetSource for Embedded {
    fn jet(&self, eps: f64, order: usize) -> Result<Vec<SampledSignal>> {
        let grid = *self.spectrum.grid();
        let base: Vec<Complex64> = grid
            .frequencies()
            .iter()
            .map(|&xi| crate::grid::FourierProfile::profile(&self.rho, eps * xi))
            .collect();
        exec::try_map_range(order + 1, |k| {
            let d = crate::grid::derivative_multiplier(&grid, k as u32);
            let m: Vec<Complex64> = base.iter().zip(&d).map(|(a, b)| a * b).collect();
            self.spectrum.apply_values(&m)
        })
    }
}

/// `iota(u) = (u * rho_eps)_eps`.
pub fn embed(u: &SampledSignal, rho: &Mollifier, sg: &ScaleGrid, window: Window) -> Result<Net> {
    sg.check_resolution(u.grid())?;
    Net::new(
        NetKind::Embedded,
        *u.grid(),
        window,
        Arc::new(Embedded {
            spectrum: Spectrum::of(u),
            rho: *rho,
        }),
    )
}

/// Smooth profiles for scaled compositions `f(x / eps^r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmoothFn {
    Sin,
    Cos,
    /// `exp(i y)`
    ExpI,
    /// `1 / (1 + y^2)`
    Lorentzian,
}

impl SmoothFn {
    fn derivative(self, k: usize, y: f64) -> Complex64 {
        let phase = k as f64 * std::f64::consts::FRAC_PI_2;
        match self {
            SmoothFn::Sin => Complex64::new((y + phase).sin(), 0.0),
            SmoothFn::Cos => Complex64::new((y + phase).cos(), 0.0),
            SmoothFn::ExpI => Complex64::from_polar(1.0, y + phase),
            SmoothFn::Lorentzian => {
                // f^(k)(y) = Im[(-1)^k k! (y - i)^(-k-1)]
                let fact: f64 = (1..=k).map(|i| i as f64).product();
                let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
                let z = Complex64::new(y, -1.0).powi(-(k as i32) - 1);
                Complex64::new(sign * fact * z.im, 0.0)
            }
        }
    }

    fn is_real(self) -> bool {
        !matches!(self, SmoothFn::ExpI)
    }
}

/// Scale-dependent constants `c_eps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum GenConst {
    Constant {
        value: Complex64,
    },
    /// `coef * eps^exponent`
    Power {
        coef: Complex64,
        exponent: f64,
    },
    /// `coef * log(1/eps)`
    LogInv {
        coef: Complex64,
    },
}

impl GenConst {
    pub fn real(value: f64) -> Self {
        GenConst::Constant {
            value: Complex64::new(value, 0.0),
        }
    }

    pub fn value(&self, eps: f64) -> Complex64 {
        match *self {
            GenConst::Constant { value } => value,
            GenConst::Power { coef, exponent } => coef * eps.powf(exponent),
            GenConst::LogInv { coef } => coef * (1.0 / eps).ln(),
        }
    }

    fn is_real(&self) -> bool {
        match *self {
            GenConst::Constant { value } => value.im == 0.0,
            GenConst::Power { coef, .. } | GenConst::LogInv { coef } => coef.im == 0.0,
        }
    }
}

/// Closed-form nets with analytic derivatives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Formula {
    /// `eps^s sin(x / eps)`
    EpsPowSine { s: f64 },
    /// `f(x / eps^r)`
    ScaledSmooth { f: SmoothFn, r: f64 },
    /// `p(x / eps^r)` with `p(y) = sum_m coeffs[m] y^m`
    ScaledPoly { coeffs: Vec<f64>, r: f64 },
    /// `c_eps`, constant in `x`
    GeneralizedConst { c: GenConst },
}

impl Formula {
    /// `1 / (1 + x^2 / eps)`.
    pub fn lorentz() -> Self {
        Formula::ScaledSmooth {
            f: SmoothFn::Lorentzian,
            r: 0.5,
        }
    }

    fn validate(&self) -> Result<()> {
        let finite = match self {
            Formula::EpsPowSine { s } => s.is_finite(),
            Formula::ScaledSmooth { r, .. } => r.is_finite() && *r >= 0.0,
            Formula::ScaledPoly { coeffs, r } => {
                !coeffs.is_empty() && coeffs.iter().all(|c| c.is_finite()) && r.is_finite()
            }
            Formula::GeneralizedConst { .. } => true,
        };
        if finite {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("bad formula parameters {self:?}")))
        }
    }

    fn is_real(&self) -> bool {
        match self {
            Formula::ScaledSmooth { f, .. } => f.is_real(),
            Formula::GeneralizedConst { c } => c.is_real(),
            _ => true,
        }
    }

    /// `d^k/dx^k` of the formula at `x`.
    pub fn derivative_at(&self, eps: f64, k: usize, x: f64) -> Complex64 {
        match self {
            Formula::EpsPowSine { s } => {
                let phase = k as f64 * std::f64::consts::FRAC_PI_2;
                Complex64::new(eps.powf(s - k as f64) * (x / eps + phase).sin(), 0.0)
            }
            Formula::ScaledSmooth { f, r } => {
                let sc = eps.powf(*r);
                f.derivative(k, x / sc) * sc.powi(-(k as i32))
            }
            Formula::ScaledPoly { coeffs, r } => {
                let sc = eps.powf(-*r);
                let mut acc = 0.0;
                for (m, &c) in coeffs.iter().enumerate().skip(k) {
                    let falling: f64 = ((m - k + 1)..=m).map(|i| i as f64).product();
                    acc += c * falling * x.powi((m - k) as i32) * sc.powi(m as i32);
                }
                Complex64::new(acc, 0.0)
            }
            Formula::GeneralizedConst { c } => {
                if k == 0 {
                    c.value(eps)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
        }
    }
}

#[derive(Debug)]
struct FormulaSource {
    formula: Formula,
    grid: Grid,
}

impl JetSource for FormulaSource {
    fn jet(&self, eps: f64, order: usize) -> Result<Vec<SampledSignal>> {
        let xs = self.grid.points();
        let real = self.formula.is_real();
        (0..=order)
            .map(|k| {
                let v: Vec<Complex64> = xs.iter().map(|&x| self.formula.derivative_at(eps, k, x)).collect();
                if real {
                    SampledSignal::from_real(self.grid, v.iter().map(|c| c.re).collect())
                } else {
                    SampledSignal::from_complex(self.grid, v)
                }
            })
            .collect()
    }
}

pub fn formula_net(formula: Formula, grid: Grid, window: Window) -> Result<Net> {
    formula.validate()?;
    Net::new(
        NetKind::Formula,
        grid,
        window,
        Arc::new(FormulaSource { formula, grid }),
    )
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[derive(Debug)]
struct Product {
    a: Net,
    b: Net,
}

impl JetSource for Product {
    fn jet(&self, eps: f64, order: usize) -> Result<Vec<SampledSignal>> {
        let ja = self.a.jet(eps, order)?;
        let jb = self.b.jet(eps, order)?;
        (0..=order)
            .map(|k| {
                let mut acc = ja[0].mul(&jb[k])?;
                for j in 1..=k {
                    acc = acc.axpby(1.0, &ja[j].mul(&jb[k - j])?, binomial(k, j))?;
                }
                Ok(acc)
            })
            .collect()
    }
}

/// Pointwise product `eps -> a_eps b_eps` (Leibniz rule for derivatives).
pub fn product_net(a: &Net, b: &Net) -> Result<Net> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    Net::new(
        NetKind::Derived,
        a.grid,
        a.window,
        Arc::new(Product {
            a: a.clone(),
            b: b.clone(),
        }),
    )
}

#[derive(Debug)]
struct Derivative {
    inner: Net,
    k: usize,
}

impl JetSource for Derivative {
    fn jet(&self, eps: f64, order: usize) -> Result<Vec<SampledSignal>> {
        let mut j = self.inner.jet(eps, order + self.k)?;
        Ok(j.split_off(self.k))
    }
}

/// `eps -> d^k a_eps`.
pub fn derivative_net(a: &Net, k: usize) -> Result<Net> {
    Net::new(
        NetKind::Derived,
        a.grid,
        a.window,
        Arc::new(Derivative { inner: a.clone(), k }),
    )
}

/// `||d^k u_{eps_j}||_{L^inf(K)}` for `k = 0..=A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthTable {
    pub max_order: usize,
    pub scales: Vec<f64>,
    /// `norms[k][j]`
    pub norms: Vec<Vec<f64>>,
    pub window: Window,
}

impl GrowthTable {
    pub fn curve(&self, k: usize) -> Vec<(f64, f64)> {
        self.scales.iter().copied().zip(self.norms[k].iter().copied()).collect()
    }

    /// Header `order,<eps_0>,...`, one row per order.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        let mut header = vec!["order".to_string()];
        header.extend(self.scales.iter().map(|e| e.to_string()));
        w.write_record(&header).map_err(io)?;
        for (k, row) in self.norms.iter().enumerate() {
            let mut rec = vec![k.to_string()];
            rec.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&rec).map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub const DEFAULT_MAX_ORDER: usize = 6;

/// Builds the growth table of `net` over `sg` on the net's window.
pub fn growth_profile(net: &Net, max_order: usize, sg: &ScaleGrid) -> Result<GrowthTable> {
    let idx = net.window.indices(&net.grid)?;
    let cols = exec::try_map(sg.scales(), |&eps| {
        let jet = net.jet(eps, max_order)?;
        Ok(jet.iter().map(|d| sup_on(d.values(), &idx)).collect::<Vec<f64>>())
    })?;
    let norms = (0..=max_order).map(|k| cols.iter().map(|c| c[k]).collect()).collect();
    Ok(GrowthTable {
        max_order,
        scales: sg.scales().to_vec(),
        norms,
        window: net.window,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderClass {
    Bounded,
    Logarithmic,
    Power,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderFit {
    pub order: usize,
    pub slope: f64,
    pub class: OrderClass,
    /// `slope + order` for power-class orders.
    pub s_k: Option<f64>,
    pub residual_rms: f64,
}

/// Outcome of the classifier. `s_hat` is `+inf` when every order stays
/// bounded and `-inf` when the net is not moderate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    #[serde(serialize_with = "ser_ext", deserialize_with = "de_ext")]
    pub s_hat: f64,
    pub per_order: Vec<OrderFit>,
    pub consistency_spread: f64,
    pub moderate: bool,
    pub all_bounded: bool,
    /// Per-order exponents disagree by more than 0.5.
    pub non_regular: bool,
}

fn ser_ext<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str(if *v > 0.0 { "+inf" } else { "-inf" })
    } else {
        s.serialize_f64(*v)
    }
}

fn de_ext<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Ext {
        Num(f64),
        Text(String),
    }
    match Ext::deserialize(d)? {
        Ext::Num(v) => Ok(v),
        Ext::Text(t) => match t.as_str() {
            "+inf" | "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            _ => Err(serde::de::Error::custom(format!("bad exponent {t}"))),
        },
    }
}

/// Slope threshold below which an order counts as growing.
pub const BOUNDED_SLOPE: f64 = -0.1;
pub const NON_REGULAR_SPREAD: f64 = 0.5;

/// Classifies every order of `table` and combines them into `s_hat`.
///
/// An order is bounded when its fitted slope is at least -0.1 (decaying
/// orders are bounded too), logarithmic when the log test fires, and power
/// otherwise with `s_k = slope + k`. Orders that vanish to rounding level
/// (below `1e-12 max ||u_eps|| eps^-k`) are bounded. `s_hat` is the smallest
/// of the power-class `s_k` and the logarithmic orders `k`, which is the
/// supremum of the `s` for which all three branches of the definition hold.
pub fn classify_regularity(table: &GrowthTable) -> Result<RegularityReport> {
    let n = table.scales.len();
    let window = default_window(n);
    if window.clone().count() < 4 {
        return Err(Error::InsufficientData(format!(
            "{n} scales, need at least 4 in the fit window"
        )));
    }
    let moderate = table.norms.iter().all(|row| {
        row.iter()
            .zip(&table.scales)
            .all(|(&y, &e)| y.is_finite() && y <= e.min(1.0).powi(-20))
    });
    if !moderate {
        return Ok(RegularityReport {
            s_hat: f64::NEG_INFINITY,
            per_order: Vec::new(),
            consistency_spread: f64::NAN,
            moderate: false,
            all_bounded: false,
            non_regular: true,
        });
    }
    let m0 = table.norms[0].iter().cloned().fold(0.0, f64::max);
    let mut per_order = Vec::with_capacity(table.max_order + 1);
    for k in 0..=table.max_order {
        let curve: Vec<(f64, f64)> = table
            .curve(k)
            .into_iter()
            .map(|(e, y)| {
                let floor = 1e-12 * m0 * e.powi(-(k as i32));
                (e, if y <= floor { 0.0 } else { y })
            })
            .collect();
        let negligible = curve[window.clone()].iter().all(|p| p.1 == 0.0);
        if negligible {
            per_order.push(OrderFit {
                order: k,
                slope: 0.0,
                class: OrderClass::Bounded,
                s_k: None,
                residual_rms: 0.0,
            });
            continue;
        }
        let fit = decay_exponent(&curve, window.clone())?;
        let class = if fit.log_flag {
            OrderClass::Logarithmic
        } else if fit.slope >= BOUNDED_SLOPE {
            OrderClass::Bounded
        } else {
            OrderClass::Power
        };
        per_order.push(OrderFit {
            order: k,
            slope: fit.slope,
            class,
            s_k: (class == OrderClass::Power).then_some(fit.slope + k as f64),
            residual_rms: fit.residual_rms,
        });
    }
    let mut s_hat = f64::INFINITY;
    for o in &per_order {
        match o.class {
            OrderClass::Power => s_hat = s_hat.min(o.s_k.expect("power order")),
            OrderClass::Logarithmic => s_hat = s_hat.min(o.order as f64),
            OrderClass::Bounded => {}
        }
    }
    let all_bounded = s_hat.is_infinite();
    let spread = per_order
        .iter()
        .filter_map(|o| o.s_k)
        .map(|s| (s - s_hat).abs())
        .fold(0.0, f64::max);
    Ok(RegularityReport {
        s_hat,
        per_order,
        consistency_spread: if all_bounded { 0.0 } else { spread },
        moderate,
        all_bounded,
        non_regular: spread > NON_REGULAR_SPREAD,
    })
}

pub fn classify_net(net: &Net, max_order: usize, sg: &ScaleGrid) -> Result<RegularityReport> {
    classify_regularity(&growth_profile(net, max_order, sg)?)
}

/// Checks that the table satisfies the defining bounds for every `s' < s - 0.1`
/// on a ladder of test values: each normalized sequence `||d^k u_eps|| / B_k(eps)`
/// (with `B_k = 1`, `log 1/eps` or `eps^{s'-k}`) must not grow as `eps -> 0`.
pub fn nesting_holds(table: &GrowthTable, report: &RegularityReport) -> bool {
    if !report.moderate {
        return false;
    }
    let top = if report.s_hat.is_finite() {
        report.s_hat - 0.1
    } else {
        table.max_order as f64 + 1.0
    };
    let window = default_window(table.scales.len());
    let m0 = table.norms[0].iter().cloned().fold(0.0, f64::max);
    [0.0, 0.25, 0.5, 1.0, 2.0, 3.0].iter().all(|&d| {
        let sp = top - d;
        (0..=table.max_order).all(|k| {
            let kf = k as f64;
            let curve: Vec<(f64, f64)> = table
                .curve(k)
                .into_iter()
                .filter(|&(e, y)| y > 1e-12 * m0 * e.powi(-(k as i32)))
                .map(|(e, y)| {
                    let bound = if (kf - sp).abs() < 1e-9 {
                        (1.0 / e).ln()
                    } else if kf < sp {
                        1.0
                    } else {
                        e.powf(sp - kf)
                    };
                    (e, y / bound)
                })
                .collect();
            let lo = *window.start();
            let hi = (*window.end()).min(curve.len().saturating_sub(1));
            if curve.len() < 4 || hi < lo + 3 {
                return true;
            }
            match decay_exponent(&curve, lo..=hi) {
                Ok(f) => f.slope >= BOUNDED_SLOPE,
                Err(_) => true,
            }
        })
    })
}

/// A predicted regularity: an exact value, or "any number below" it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prediction {
    Value(f64),
    Below(f64),
}

impl Prediction {
    pub fn target(&self) -> f64 {
        match *self {
            Prediction::Value(v) | Prediction::Below(v) => v,
        }
    }
}

/// Class of a product of nets of classes `r` and `s`: `r + s` when both are
/// negative, `min(r, s)` when one is positive, and anything below `min(r, s)`
/// when the larger is exactly zero.
pub fn predicted_product_regularity(r: f64, s: f64) -> Prediction {
    let hi = r.max(s);
    if hi < 0.0 {
        Prediction::Value(r + s)
    } else if hi > 0.0 {
        Prediction::Value(r.min(s))
    } else {
        Prediction::Below(r.min(s))
    }
}
