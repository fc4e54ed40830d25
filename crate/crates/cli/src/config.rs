//! Run configuration: JSON on disk, flag overrides, and validation.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use zyglab::casestudies::{default_t_values, CoefficientBounds, DEFAULT_T_MAX};
use zyglab::colombeau::{embed, formula_net, Formula, GenConst, Net};
use zyglab::grid::{read_csv, Grid, SampledSignal, Window};
use zyglab::kernels::{make_mollifier, normalize_weakly_radial, wavelet_from_derivative, wavelet_mu, Wavelet};
use zyglab::signals::{corpus_grid, Recipe};
use zyglab::transforms::ScaleGrid;
use zyglab::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n_points: usize,
    pub length: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        let g = corpus_grid();
        GridConfig {
            n_points: g.n_points(),
            length: g.length(),
        }
    }
}

/// `eps_min` defaults to eight grid spacings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaleConfig {
    #[serde(default)]
    pub eps_min: Option<f64>,
    #[serde(default = "default_eps_max")]
    pub eps_max: f64,
    #[serde(default = "default_eps_count")]
    pub count: usize,
}

fn default_eps_max() -> f64 {
    0.25
}

fn default_eps_count() -> usize {
    24
}

impl Default for ScaleConfig {
    fn default() -> Self {
        ScaleConfig {
            eps_min: None,
            eps_max: default_eps_max(),
            count: default_eps_count(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WaveletChoice {
    /// `rho - rho_{1/2}`
    #[default]
    Mu,
    /// `d^k rho`, rescaled to weak-radial constant 1.
    Derivative { k: u32 },
}

impl WaveletChoice {
    pub fn build(&self) -> Result<Wavelet> {
        let rho = make_mollifier();
        match *self {
            WaveletChoice::Mu => Ok(wavelet_mu(&rho)),
            WaveletChoice::Derivative { k } => normalize_weakly_radial(&wavelet_from_derivative(&rho, k)?),
        }
    }
}

/// Where a signal or net comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Recipe(Recipe),
    Formula(Formula),
    /// Two-column (or `x,re,im`) CSV; its `x` column fixes the grid.
    Csv(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Problem {
    /// `u' = a u`, `u(0) = b`.
    Ode {
        a: Source,
        #[serde(default = "unit_constant")]
        b: GenConst,
    },
    /// `u_t + a u_x = 0`, `u(0, .) = b`.
    Transport {
        a: Source,
        b: Source,
        c1: f64,
        c2: f64,
        #[serde(default)]
        t_values: Option<Vec<f64>>,
        #[serde(default = "default_t_max")]
        t_max: f64,
    },
}

fn unit_constant() -> GenConst {
    GenConst::real(1.0)
}

fn default_t_max() -> f64 {
    DEFAULT_T_MAX
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default = "default_report")]
    pub report: String,
    #[serde(default = "default_growth")]
    pub growth: String,
    #[serde(default = "default_scalogram")]
    pub scalogram: String,
}

fn default_report() -> String {
    "report.json".into()
}

fn default_growth() -> String {
    "growth.csv".into()
}

fn default_scalogram() -> String {
    "scalogram.csv".into()
}

impl Default for Outputs {
    fn default() -> Self {
        Outputs {
            report: default_report(),
            growth: default_growth(),
            scalogram: default_scalogram(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Filled in from the subcommand; ignored on input.
    #[serde(default)]
    pub command: String,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub scale_grid: ScaleConfig,
    #[serde(default = "default_orders")]
    pub orders: usize,
    /// Defaults to the central half of the domain.
    #[serde(default)]
    pub window: Option<WindowConfig>,
    #[serde(default)]
    pub wavelet: WaveletChoice,
    #[serde(default)]
    pub signal: Option<Source>,
    #[serde(default)]
    pub problem: Option<Problem>,
    /// Allowed |measured - predicted| for `solve`.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub outputs: Outputs,
}

fn default_orders() -> usize {
    4
}

fn default_tolerance() -> f64 {
    0.2
}

impl Default for RunConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("every field has a default")
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub eps_min: Option<f64>,
    pub eps_max: Option<f64>,
    pub eps_count: Option<usize>,
    pub orders: Option<usize>,
    pub window: Option<(f64, f64)>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(RunConfig::default());
        };
        let text = fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("config {}: {e}", path.display())))
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(v) = o.eps_min {
            self.scale_grid.eps_min = Some(v);
        }
        if let Some(v) = o.eps_max {
            self.scale_grid.eps_max = v;
        }
        if let Some(v) = o.eps_count {
            self.scale_grid.count = v;
        }
        if let Some(v) = o.orders {
            self.orders = v;
        }
        if let Some((lo, hi)) = o.window {
            self.window = Some(WindowConfig { lo, hi });
        }
    }

    /// Validates everything and fills defaults that depend on the grid, so
    /// the returned config reproduces the run on its own.
    pub fn resolve(mut self, command: &str) -> Result<Resolved> {
        self.command = command.into();
        // a CSV signal fixes the grid
        let csv = match (&self.signal, &self.problem) {
            (Some(Source::Csv(p)), _) => Some(load_csv(p)?),
            (_, Some(Problem::Transport { b: Source::Csv(p), .. })) => Some(load_csv(p)?),
            _ => None,
        };
        if let Some(u) = &csv {
            self.grid = GridConfig {
                n_points: u.grid().n_points(),
                length: u.grid().length(),
            };
        }
        let grid = Grid::new(self.grid.n_points, self.grid.length)?;
        let window = match self.window {
            Some(w) => Window::new(w.lo, w.hi)?,
            None => Window::central_half(&grid),
        };
        window.indices(&grid)?;
        if window.lo < -grid.length() / 2.0 || window.hi > grid.length() / 2.0 {
            return Err(Error::InvalidArgument(format!(
                "window [{}, {}] leaves the domain",
                window.lo, window.hi
            )));
        }
        self.window = Some(WindowConfig {
            lo: window.lo,
            hi: window.hi,
        });
        let eps_min = self.scale_grid.eps_min.unwrap_or(8.0 * grid.spacing());
        self.scale_grid.eps_min = Some(eps_min);
        let sg = ScaleGrid::geometric(eps_min, self.scale_grid.eps_max, self.scale_grid.count)?;
        sg.check_resolution(&grid)?;
        if self.orders == 0 {
            return Err(Error::InvalidArgument("orders must be at least 1".into()));
        }
        if self.tolerance.is_nan() || self.tolerance < 0.0 {
            return Err(Error::InvalidArgument(format!("bad tolerance {}", self.tolerance)));
        }
        if let Some(Problem::Transport {
            c1,
            c2,
            t_values,
            t_max,
            ..
        }) = &mut self.problem
        {
            CoefficientBounds::new(*c1, *c2)?;
            if t_values.is_none() {
                *t_values = Some(default_t_values(*t_max, 9));
            }
        }
        let wavelet = self.wavelet.build()?;
        Ok(Resolved {
            config: self,
            grid,
            window,
            sg,
            wavelet,
        })
    }
}

fn load_csv(path: &Path) -> Result<SampledSignal> {
    let file =
        fs::File::open(path).map_err(|e| Error::InvalidArgument(format!("cannot open {}: {e}", path.display())))?;
    read_csv(file)
}

pub struct Resolved {
    pub config: RunConfig,
    pub grid: Grid,
    pub window: Window,
    pub sg: ScaleGrid,
    pub wavelet: Wavelet,
}

impl Resolved {
    pub fn sample(&self, src: &Source) -> Result<Option<SampledSignal>> {
        match src {
            Source::Recipe(r) => r.sample(&self.grid).map(Some),
            Source::Csv(p) => {
                let u = load_csv(p)?;
                if *u.grid() != self.grid {
                    return Err(Error::GridMismatch);
                }
                Ok(Some(u))
            }
            Source::Formula(_) => Ok(None),
        }
    }

    pub fn net(&self, src: &Source) -> Result<Net> {
        match (src, self.sample(src)?) {
            (Source::Formula(f), _) => formula_net(f.clone(), self.grid, self.window),
            (_, Some(u)) => embed(&u, &make_mollifier(), &self.sg, self.window),
            _ => unreachable!("signals always sample"),
        }
    }
}
