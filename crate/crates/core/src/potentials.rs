//! Scalar phase fields on the grid and the diagonal operator `exp(i f(x, y))`.

use std::f64::consts::{E, PI};
use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{GridGeometry, Vertex, WalkerState, COIN_DIM};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PotentialKind {
    BivariateGaussian,
    DeltaOracle,
    Linear,
    Ackley,
    Rastrigin,
    Custom,
}

impl fmt::Display for PotentialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PotentialKind::BivariateGaussian => "gaussian",
            PotentialKind::DeltaOracle => "delta",
            PotentialKind::Linear => "linear",
            PotentialKind::Ackley => "ackley",
            PotentialKind::Rastrigin => "rastrigin",
            PotentialKind::Custom => "custom",
        };
        f.write_str(s)
    }
}

/// Parameters of a peak-normalized bivariate Gaussian field.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianParams {
    pub mu_x: f64,
    pub mu_y: f64,
    pub sigma_x: f64,
    pub sigma_y: f64,
    pub rho: f64,
    /// Peak phase in radians.
    pub lambda: f64,
}

impl GaussianParams {
    /// Isotropic, uncorrelated Gaussian centered at `(L/2, L/2)`.
    pub fn centered(geometry: GridGeometry, sigma: f64, lambda: f64) -> Result<Self> {
        let mu = geometry.side() as f64 / 2.0;
        let p = GaussianParams { mu_x: mu, mu_y: mu, sigma_x: sigma, sigma_y: sigma, rho: 0.0, lambda };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidPotential(m));
        if !(self.sigma_x > 0.0 && self.sigma_x.is_finite()) {
            return bad(format!("sigma_x must be positive and finite, got {}", self.sigma_x));
        }
        if !(self.sigma_y > 0.0 && self.sigma_y.is_finite()) {
            return bad(format!("sigma_y must be positive and finite, got {}", self.sigma_y));
        }
        if self.rho.is_nan() || self.rho.abs() >= 1.0 {
            return bad(format!("|rho| must be < 1 (singular covariance), got {}", self.rho));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return bad(format!("lambda must be nonnegative and finite, got {}", self.lambda));
        }
        if !(self.mu_x.is_finite() && self.mu_y.is_finite()) {
            return bad("mean must be finite".to_string());
        }
        Ok(())
    }

    /// Exponent of the density at `(x, y)`, dropping the constant prefactor.
    pub fn log_density(&self, x: f64, y: f64) -> f64 {
        let dx = (x - self.mu_x) / self.sigma_x;
        let dy = (y - self.mu_y) / self.sigma_y;
        let z = dx * dx + dy * dy - 2.0 * self.rho * dx * dy;
        -z / (2.0 * (1.0 - self.rho * self.rho))
    }
}

/// Vertices marked by a phase oracle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleSpec {
    pub marked: Vec<Vertex>,
    /// Phase imprinted on marked vertices; `pi` inverts them.
    pub phase: f64,
}

impl OracleSpec {
    pub fn single(at: Vertex) -> Self {
        OracleSpec { marked: vec![at], phase: PI }
    }
}

/// Real field `f(x, y)` with precomputed phase factors `exp(i f)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialField {
    geometry: GridGeometry,
    kind: PotentialKind,
    values: Vec<f64>,
    phase_factors: Vec<Complex64>,
}

impl PotentialField {
    /// Builds a field from per-vertex values indexed by `y * L + x`.
    pub fn from_values(geometry: GridGeometry, kind: PotentialKind, values: Vec<f64>) -> Result<Self> {
        if values.len() != geometry.n_vertices() {
            return Err(Error::AmplitudeLength { got: values.len(), expected: geometry.n_vertices() });
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            let v = geometry.vertex_at(bad);
            return Err(Error::InvalidPotential(format!("non-finite value at ({}, {})", v.x, v.y)));
        }
        let phase_factors = values.iter().map(|&v| Complex64::from_polar(1.0, v)).collect();
        Ok(PotentialField { geometry, kind, values, phase_factors })
    }

    /// Zero field: the identity operator.
    pub fn zero(geometry: GridGeometry) -> Self {
        Self::constant(geometry, 0.0)
    }

    pub fn constant(geometry: GridGeometry, value: f64) -> Self {
        Self::from_values(geometry, PotentialKind::Custom, vec![value; geometry.n_vertices()]).expect("finite constant")
    }

    pub fn geometry(&self) -> GridGeometry {
        self.geometry
    }

    pub fn kind(&self) -> PotentialKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, at: Vertex) -> f64 {
        self.values[self.geometry.vertex_index(at)]
    }

    pub fn phase_factors(&self) -> &[Complex64] {
        &self.phase_factors
    }

    pub fn phase_factor(&self, at: Vertex) -> Complex64 {
        self.phase_factors[self.geometry.vertex_index(at)]
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Same field plus a uniform offset (a global phase per step).
    pub fn offset(&self, delta: f64) -> Result<Self> {
        Self::from_values(self.geometry, self.kind, self.values.iter().map(|v| v + delta).collect())
    }

    /// Plain-text grid: `L` lines of `L` space-separated reals, row `y = 0` first.
    pub fn to_text(&self) -> String {
        let side = self.geometry.side();
        let mut buf = ryu::Buffer::new();
        let mut out = String::with_capacity(self.values.len() * 12);
        for row in self.values.chunks(side) {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                out.push_str(buf.format(*v));
            }
            out.push('\n');
        }
        out
    }

    /// Parses the plain-text grid format; the side length is the row count.
    pub fn from_text(text: &str) -> std::result::Result<Self, String> {
        let rows: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        let side = rows.len();
        let geometry = GridGeometry::new(side).map_err(|e| e.to_string())?;
        let mut values = Vec::with_capacity(side * side);
        for (y, line) in rows.iter().enumerate() {
            let before = values.len();
            for tok in line.split_whitespace() {
                let v: f64 = tok.parse().map_err(|_| format!("row {y}: `{tok}` is not a number"))?;
                values.push(v);
            }
            let got = values.len() - before;
            if got != side {
                return Err(format!("row {y}: expected {side} values, found {got}"));
            }
        }
        Self::from_values(geometry, PotentialKind::Custom, values).map_err(|e| e.to_string())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text).map_err(|message| Error::Parse { path: path.to_path_buf(), message })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}

/// `lambda * f(x, y) / max_grid f`, with the maximum taken over grid points.
pub fn bivariate_gaussian_field(geometry: GridGeometry, params: &GaussianParams) -> Result<PotentialField> {
    params.validate()?;
    let side = geometry.side();
    let logs: Vec<f64> =
        (0..geometry.n_vertices()).map(|i| params.log_density((i % side) as f64, (i / side) as f64)).collect();
    // Normalizing in log space keeps sigma -> 0 from underflowing the peak.
    let peak = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let values = logs.iter().map(|l| params.lambda * (l - peak).exp()).collect();
    PotentialField::from_values(geometry, PotentialKind::BivariateGaussian, values)
}

/// `phase` on every marked vertex, zero elsewhere.
pub fn delta_oracle_field(geometry: GridGeometry, spec: &OracleSpec) -> Result<PotentialField> {
    if spec.marked.is_empty() {
        return Err(Error::InvalidPotential("oracle needs at least one marked vertex".into()));
    }
    let mut values = vec![0.0; geometry.n_vertices()];
    for &m in &spec.marked {
        geometry.check(m)?;
        values[geometry.vertex_index(m)] = spec.phase;
    }
    PotentialField::from_values(geometry, PotentialKind::DeltaOracle, values)
}

/// Electric-walk field `phi * x`.
pub fn linear_field(geometry: GridGeometry, phi: f64) -> Result<PotentialField> {
    let side = geometry.side();
    let values = (0..geometry.n_vertices()).map(|i| phi * (i % side) as f64).collect();
    PotentialField::from_values(geometry, PotentialKind::Linear, values)
}

/// Maps grid coordinate `x` onto `[-half_width, half_width]` with `L/2 -> 0`.
fn to_domain(geometry: GridGeometry, x: usize, half_width: f64) -> f64 {
    let half = geometry.side() as f64 / 2.0;
    (x as f64 - half) / half * half_width
}

fn inverted_benchmark(
    geometry: GridGeometry,
    lambda: f64,
    kind: PotentialKind,
    half_width: f64,
    f: impl Fn(f64, f64) -> f64,
) -> Result<PotentialField> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidPotential(format!("lambda must be nonnegative, got {lambda}")));
    }
    let side = geometry.side();
    let raw: Vec<f64> = (0..geometry.n_vertices())
        .map(|i| f(to_domain(geometry, i % side, half_width), to_domain(geometry, i / side, half_width)))
        .collect();
    let worst = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let best = raw.iter().copied().fold(f64::INFINITY, f64::min);
    let span = worst - best;
    let values = raw.iter().map(|r| if span > 0.0 { lambda * (worst - r) / span } else { lambda }).collect();
    PotentialField::from_values(geometry, kind, values)
}

/// Negated 2-D Ackley function (a = 20, b = 0.2, c = 2 pi on `[-5, 5]^2`),
/// rescaled so the global optimum at the grid center has phase `lambda` and
/// the worst grid point has phase 0.
pub fn ackley_field(geometry: GridGeometry, lambda: f64) -> Result<PotentialField> {
    const A: f64 = 20.0;
    const B: f64 = 0.2;
    const C: f64 = 2.0 * PI;
    inverted_benchmark(geometry, lambda, PotentialKind::Ackley, 5.0, |u, v| {
        -A * (-B * (0.5 * (u * u + v * v)).sqrt()).exp() - (0.5 * ((C * u).cos() + (C * v).cos())).exp() + A + E
    })
}

/// Negated 2-D Rastrigin function (A = 10 on `[-5.12, 5.12]^2`), rescaled
/// like [`ackley_field`].
pub fn rastrigin_field(geometry: GridGeometry, lambda: f64) -> Result<PotentialField> {
    const A: f64 = 10.0;
    inverted_benchmark(geometry, lambda, PotentialKind::Rastrigin, 5.12, |u, v| {
        2.0 * A + (u * u - A * (2.0 * PI * u).cos()) + (v * v - A * (2.0 * PI * v).cos())
    })
}

/// Multiplies every amplitude at `(x, y)` by `exp(i f(x, y))`, in place.
pub fn apply_phase_in_place(state: &mut WalkerState, field: &PotentialField) -> Result<()> {
    state.geometry().ensure_same(&field.geometry)?;
    for (block, phase) in state.amplitudes_mut().chunks_exact_mut(COIN_DIM).zip(&field.phase_factors) {
        for a in block {
            *a *= phase;
        }
    }
    Ok(())
}

pub fn apply_phase(state: &WalkerState, field: &PotentialField) -> Result<WalkerState> {
    let mut out = state.clone();
    apply_phase_in_place(&mut out, field)?;
    Ok(out)
}
