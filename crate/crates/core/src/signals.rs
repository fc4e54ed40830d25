//! Deterministic test signals and the reference corpus.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::colombeau::{embed, formula_net, Formula, Net, SmoothFn};
use crate::error::{Error, Result};
use crate::grid::{write_csv, Grid, SampledSignal, Window};
use crate::kernels::{smooth_step, unit_impulse, Mollifier};
use crate::transforms::ScaleGrid;

/// Smooth cutoff: 1 on `|x| <= 5L/16`, 0 on `|x| >= 7L/16`.
pub fn cutoff(grid: &Grid, x: f64) -> f64 {
    let l = grid.length();
    let (inner, outer) = (5.0 * l / 16.0, 7.0 * l / 16.0);
    1.0 - smooth_step((x.abs() - inner) / (outer - inner))
}

/// Signal recipes understood by [`Recipe::sample`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Recipe {
    /// `sum_{k < n_terms} a^k cos(b^k 2 pi x / L)`, optionally divided by
    /// `sum a^k` so the sup is 1.
    Weierstrass {
        a: f64,
        b: u32,
        n_terms: u32,
        #[serde(default)]
        normalize: bool,
    },
    /// `|x - center|^s` times the cutoff.
    Cusp {
        s: f64,
        #[serde(default)]
        center: f64,
    },
    /// Step at 0 times the cutoff.
    Heaviside,
    /// `1/h` at `x = 0`.
    DeltaComb,
    /// `sum_{j <= j_max} 2^{-j s} cos(2^j 2 pi x / L + theta_j)`.
    DyadicSum {
        s: f64,
        j_max: u32,
        #[serde(default)]
        phases: Option<Vec<f64>>,
    },
    /// `cos(xi0 x)`; `xi0` must be a grid frequency.
    Tone { xi0: f64 },
    /// `x` times the cutoff.
    Linear,
    /// `offset + scale * inner`.
    Affine {
        offset: f64,
        scale: f64,
        inner: Box<Recipe>,
    },
}

impl Recipe {
    /// Weierstrass recipe with exponent `s`, i.e. `a = b^{-s}`.
    pub fn weierstrass_with_exponent(s: f64, b: u32, n_terms: u32, normalize: bool) -> Self {
        Recipe::Weierstrass {
            a: (b as f64).powf(-s),
            b,
            n_terms,
            normalize,
        }
    }

    /// The regularity the construction is known to have (`+inf` if smooth).
    pub fn expected_regularity(&self) -> f64 {
        match self {
            Recipe::Weierstrass { a, b, .. } => (1.0 / a).ln() / (*b as f64).ln(),
            Recipe::Cusp { s, .. } => *s,
            Recipe::Heaviside => 0.0,
            Recipe::DeltaComb => -1.0,
            Recipe::DyadicSum { s, .. } => *s,
            Recipe::Tone { .. } | Recipe::Linear => f64::INFINITY,
            Recipe::Affine { inner, .. } => inner.expected_regularity(),
        }
    }

    pub fn sample(&self, grid: &Grid) -> Result<SampledSignal> {
        let l = grid.length();
        let w = 2.0 * PI / l;
        match self {
            Recipe::Weierstrass {
                a,
                b,
                n_terms,
                normalize,
            } => {
                if !(*a > 0.0 && *a < 1.0) || *b < 2 || *n_terms == 0 {
                    return Err(Error::InvalidArgument(format!(
                        "weierstrass needs 0 < a < 1, b >= 2, n_terms >= 1 (a = {a}, b = {b}, n = {n_terms})"
                    )));
                }
                let top = (*b as f64).powi(*n_terms as i32 - 1);
                if top >= (grid.n_points() / 2) as f64 {
                    return Err(Error::InvalidArgument(format!(
                        "weierstrass mode {top} aliases on a grid of {} points",
                        grid.n_points()
                    )));
                }
                let norm = if *normalize {
                    (0..*n_terms).map(|k| a.powi(k as i32)).sum::<f64>()
                } else {
                    1.0
                };
                let modes: Vec<(f64, f64)> = (0..*n_terms)
                    .map(|k| (a.powi(k as i32) / norm, (*b as f64).powi(k as i32) * w))
                    .collect();
                Ok(SampledSignal::from_fn(*grid, |x| {
                    modes.iter().map(|&(c, f)| c * (f * x).cos()).sum()
                }))
            }
            Recipe::Cusp { s, center } => {
                if !(*s > 0.0 && *s < 1.0) {
                    return Err(Error::InvalidArgument(format!(
                        "cusp exponent must lie in (0, 1), got {s}"
                    )));
                }
                if center.abs() > l / 8.0 {
                    return Err(Error::InvalidArgument(format!(
                        "cusp centre {center} too close to the cutoff"
                    )));
                }
                Ok(SampledSignal::from_fn(*grid, |x| {
                    (x - center).abs().powf(*s) * cutoff(grid, x)
                }))
            }
            Recipe::Heaviside => Ok(SampledSignal::from_fn(*grid, |x| {
                if x >= 0.0 {
                    cutoff(grid, x)
                } else {
                    0.0
                }
            })),
            Recipe::DeltaComb => Ok(unit_impulse(*grid)),
            Recipe::DyadicSum { s, j_max, phases } => {
                if (2f64).powi(*j_max as i32) >= (grid.n_points() / 2) as f64 {
                    return Err(Error::InvalidArgument(format!(
                        "dyadic mode 2^{j_max} aliases on a grid of {} points",
                        grid.n_points()
                    )));
                }
                let theta = |j: u32| match phases {
                    Some(p) if !p.is_empty() => p[j as usize % p.len()],
                    _ => 0.7 * j as f64,
                };
                Ok(SampledSignal::from_fn(*grid, |x| {
                    (0..=*j_max)
                        .map(|j| {
                            let f = (2f64).powi(j as i32);
                            f.powf(-s) * (f * w * x + theta(j)).cos()
                        })
                        .sum()
                }))
            }
            Recipe::Tone { xi0 } => {
                let m = xi0 / w;
                if (m - m.round()).abs() > 1e-9 * m.abs().max(1.0) || m.abs() >= (grid.n_points() / 2) as f64 {
                    return Err(Error::InvalidArgument(format!(
                        "tone frequency {xi0} is not a resolved grid frequency"
                    )));
                }
                Ok(SampledSignal::from_fn(*grid, |x| (xi0 * x).cos()))
            }
            Recipe::Linear => Ok(SampledSignal::from_fn(*grid, |x| x * cutoff(grid, x))),
            Recipe::Affine { offset, scale, inner } => {
                let u = inner.sample(grid)?;
                Ok(u.map(|v| v * *scale + *offset))
            }
        }
    }
}

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// Follows from the construction (scaling law, coefficients).
    Analytic,
    /// Stated for this example in the literature.
    Published,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CorpusItem {
    Signal { recipe: Recipe },
    Net { formula: Formula },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    pub item: CorpusItem,
    pub expected: f64,
    pub basis: Basis,
}

impl CorpusEntry {
    /// The entry as a net: signals are embedded with `rho`, formulas are used
    /// as they stand.
    pub fn net(&self, grid: &Grid, rho: &Mollifier, sg: &ScaleGrid, window: Window) -> Result<Net> {
        match &self.item {
            CorpusItem::Signal { recipe } => embed(&recipe.sample(grid)?, rho, sg, window),
            CorpusItem::Net { formula } => formula_net(formula.clone(), *grid, window),
        }
    }

    pub fn signal(&self, grid: &Grid) -> Option<Result<SampledSignal>> {
        match &self.item {
            CorpusItem::Signal { recipe } => Some(recipe.sample(grid)),
            CorpusItem::Net { .. } => None,
        }
    }
}

/// The corpus grid: `L = 2 pi`, `N = 2^15`.
pub fn corpus_grid() -> Grid {
    Grid::new(1 << 15, 2.0 * PI).expect("valid grid")
}

/// Scale grid used with the corpus: 24 geometric scales from `8h` to 1/4.
pub fn corpus_scales(grid: &Grid) -> Result<ScaleGrid> {
    ScaleGrid::geometric(8.0 * grid.spacing(), 0.25, 24)
}

/// The fixed experiment matrix.
pub fn corpus() -> Vec<CorpusEntry> {
    let sig = |name: &str, recipe: Recipe, basis| {
        let expected = recipe.expected_regularity();
        CorpusEntry {
            name: name.into(),
            item: CorpusItem::Signal { recipe },
            expected,
            basis,
        }
    };
    let net = |name: &str, formula: Formula, expected: f64| CorpusEntry {
        name: name.into(),
        item: CorpusItem::Net { formula },
        expected,
        basis: Basis::Published,
    };
    vec![
        sig("delta_comb", Recipe::DeltaComb, Basis::Analytic),
        sig("heaviside", Recipe::Heaviside, Basis::Analytic),
        sig("cusp_0.3", Recipe::Cusp { s: 0.3, center: 0.0 }, Basis::Analytic),
        sig(
            "weierstrass_0.5",
            Recipe::weierstrass_with_exponent(0.5, 4, 7, false),
            Basis::Analytic,
        ),
        sig(
            "weierstrass_1.5",
            Recipe::weierstrass_with_exponent(1.5, 4, 7, false),
            Basis::Analytic,
        ),
        net("eps_pow_sine_0.5", Formula::EpsPowSine { s: 0.5 }, 0.5),
        net(
            "sin_x_over_eps",
            Formula::ScaledSmooth {
                f: SmoothFn::Sin,
                r: 1.0,
            },
            0.0,
        ),
        net("lorentz", Formula::lorentz(), 0.5),
        net(
            "scaled_poly_x2",
            Formula::ScaledPoly {
                coeffs: vec![0.0, 0.0, 1.0],
                r: 0.5,
            },
            -1.0,
        ),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRow {
    pub name: String,
    pub item: CorpusItem,
    /// Signal CSV relative to the manifest, absent for closed-form nets.
    pub file: Option<String>,
    #[serde(serialize_with = "ser_f64_ext", deserialize_with = "de_f64_ext")]
    pub expected: f64,
    pub basis: Basis,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub grid: Grid,
    pub entries: Vec<ManifestRow>,
}

fn ser_f64_ext<S: serde::Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str(if *v > 0.0 { "+inf" } else { "-inf" })
    } else {
        s.serialize_f64(*v)
    }
}

fn de_f64_ext<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    let v = serde_json::Value::deserialize(d)?;
    match &v {
        serde_json::Value::Number(n) => n.as_f64().ok_or_else(|| serde::de::Error::custom("bad number")),
        serde_json::Value::String(s) if s == "+inf" => Ok(f64::INFINITY),
        serde_json::Value::String(s) if s == "-inf" => Ok(f64::NEG_INFINITY),
        _ => Err(serde::de::Error::custom(format!("bad expected value {v}"))),
    }
}

/// Writes every corpus signal as CSV into `dir` plus `manifest.json`.
/// Output depends only on the grid, so repeated runs are byte-identical.
pub fn export_corpus(dir: &Path, grid: &Grid) -> Result<Manifest> {
    fs::create_dir_all(dir)?;
    let mut entries = Vec::new();
    for e in corpus() {
        let file = match &e.item {
            CorpusItem::Signal { recipe } => {
                let name = format!("{}.csv", e.name);
                let u = recipe.sample(grid)?;
                let mut buf = Vec::new();
                write_csv(&u, &mut buf)?;
                fs::write(dir.join(&name), buf)?;
                Some(name)
            }
            CorpusItem::Net { .. } => None,
        };
        entries.push(ManifestRow {
            name: e.name,
            item: e.item,
            file,
            expected: e.expected,
            basis: e.basis,
        });
    }
    let manifest = Manifest { grid: *grid, entries };
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Numerical(e.to_string()))?;
    fs::write(dir.join("manifest.json"), text + "\n")?;
    Ok(manifest)
}
