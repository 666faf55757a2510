//! Walker state on an `L x L` grid with a four-dimensional coin register.
//!
//! Amplitudes are stored position-major, coin-minor: the four coin amplitudes
//! of a vertex are contiguous, and vertices are laid out row by row
//! (`y` selects the row). Callers should go through [`WalkerState::encode`] and
//! [`WalkerState::decode`] rather than relying on the layout.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimension of the coin register.
pub const COIN_DIM: usize = 4;

/// Norm tolerance used when validating states.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Amplitudes below this many vertices are reduced serially.
const PAR_THRESHOLD: usize = 1 << 14;

/// Square grid of side `L` (`N = L^2` vertices).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridGeometry {
    side: usize,
}

impl GridGeometry {
    pub fn new(side: usize) -> Result<Self> {
        if side < 2 {
            return Err(Error::GridTooSmall(side));
        }
        Ok(GridGeometry { side })
    }

    /// Side length `L`.
    pub fn side(&self) -> usize {
        self.side
    }

    /// Number of vertices `N = L^2`.
    pub fn n_vertices(&self) -> usize {
        self.side * self.side
    }

    /// Length of the amplitude vector, `4 N`.
    pub fn dim(&self) -> usize {
        COIN_DIM * self.n_vertices()
    }

    /// The vertex `(L/2, L/2)`.
    pub fn center(&self) -> Vertex {
        Vertex::new(self.side / 2, self.side / 2)
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.x < self.side && v.y < self.side
    }

    pub fn check(&self, v: Vertex) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { x: v.x, y: v.y, side: self.side })
        }
    }

    /// Flat vertex index, `y * L + x`.
    #[inline]
    pub fn vertex_index(&self, v: Vertex) -> usize {
        v.y * self.side + v.x
    }

    #[inline]
    pub fn vertex_at(&self, index: usize) -> Vertex {
        Vertex::new(index % self.side, index / self.side)
    }

    pub(crate) fn ensure_same(&self, other: &GridGeometry) -> Result<()> {
        if self.side == other.side {
            Ok(())
        } else {
            Err(Error::GeometryMismatch { left: self.side, right: other.side })
        }
    }
}

/// Grid vertex `(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub x: usize,
    pub y: usize,
}

impl Vertex {
    pub const fn new(x: usize, y: usize) -> Self {
        Vertex { x, y }
    }
}

/// Coin basis label `|j, k>`: `j` picks the axis (1 = x, 0 = y) and `k` the
/// sign of the move, `(-1)^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CoinIndex {
    j: u8,
    k: u8,
}

impl CoinIndex {
    pub const ALL: [CoinIndex; 4] =
        [CoinIndex { j: 0, k: 0 }, CoinIndex { j: 0, k: 1 }, CoinIndex { j: 1, k: 0 }, CoinIndex { j: 1, k: 1 }];

    /// Panics unless both bits are 0 or 1.
    pub fn new(j: u8, k: u8) -> Self {
        assert!(j < 2 && k < 2, "coin bits must be 0 or 1, got ({j}, {k})");
        CoinIndex { j, k }
    }

    pub fn j(&self) -> u8 {
        self.j
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    /// Position of this label inside a vertex's coin block, `2j + k`.
    #[inline]
    pub fn offset(&self) -> usize {
        (2 * self.j + self.k) as usize
    }

    #[inline]
    pub fn from_offset(offset: usize) -> Self {
        Self::ALL[offset]
    }

    /// Same axis, opposite direction.
    #[inline]
    pub fn flipped(&self) -> Self {
        CoinIndex { j: self.j, k: 1 - self.k }
    }

    /// Unit displacement `(dx, dy)` selected by this coin state.
    #[inline]
    pub fn displacement(&self) -> (isize, isize) {
        let sign = if self.k == 0 { 1 } else { -1 };
        if self.j == 1 {
            (sign, 0)
        } else {
            (0, sign)
        }
    }
}

/// Pure state `sum psi_{j,k;x,y} |j,k>|x,y>`.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkerState {
    amplitudes: Vec<Complex64>,
    geometry: GridGeometry,
}

impl WalkerState {
    /// Equal superposition over every coin and position basis state.
    pub fn uniform(geometry: GridGeometry) -> Self {
        let a = 1.0 / (geometry.dim() as f64).sqrt();
        WalkerState { amplitudes: vec![Complex64::new(a, 0.0); geometry.dim()], geometry }
    }

    pub fn basis(geometry: GridGeometry, coin: CoinIndex, at: Vertex) -> Result<Self> {
        geometry.check(at)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); geometry.dim()];
        amplitudes[encode(&geometry, coin, at)] = Complex64::new(1.0, 0.0);
        Ok(WalkerState { amplitudes, geometry })
    }

    /// Wraps raw amplitudes, checking length and unit norm.
    pub fn from_amplitudes(geometry: GridGeometry, amplitudes: Vec<Complex64>) -> Result<Self> {
        let state = Self::from_amplitudes_unchecked(geometry, amplitudes)?;
        let n = state.norm();
        if (n - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(n));
        }
        Ok(state)
    }

    /// Wraps raw amplitudes, checking only the length.
    pub fn from_amplitudes_unchecked(geometry: GridGeometry, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != geometry.dim() {
            return Err(Error::AmplitudeLength { got: amplitudes.len(), expected: geometry.dim() });
        }
        Ok(WalkerState { amplitudes, geometry })
    }

    pub fn geometry(&self) -> GridGeometry {
        self.geometry
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn encode(&self, coin: CoinIndex, at: Vertex) -> usize {
        encode(&self.geometry, coin, at)
    }

    pub fn decode(&self, index: usize) -> (CoinIndex, Vertex) {
        decode(&self.geometry, index)
    }

    pub fn amplitude(&self, coin: CoinIndex, at: Vertex) -> Complex64 {
        self.amplitudes[self.encode(coin, at)]
    }

    /// The four coin amplitudes at a vertex, in `2j + k` order.
    pub fn coin_block(&self, at: Vertex) -> &[Complex64] {
        let base = COIN_DIM * self.geometry.vertex_index(at);
        &self.amplitudes[base..base + COIN_DIM]
    }

    /// Euclidean norm of the amplitude vector.
    pub fn norm(&self) -> f64 {
        let sq: f64 = if self.amplitudes.len() >= PAR_THRESHOLD {
            self.amplitudes.par_chunks(4096).map(|c| c.iter().map(|a| a.norm_sqr()).sum::<f64>()).sum()
        } else {
            self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
        };
        sq.sqrt()
    }

    /// Hermitian inner product `<self|other>`.
    pub fn inner_product(&self, other: &WalkerState) -> Result<Complex64> {
        self.geometry.ensure_same(&other.geometry)?;
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    /// Born-rule probability of finding the walker at `at`.
    pub fn probability_at(&self, at: Vertex) -> Result<f64> {
        self.geometry.check(at)?;
        Ok(self.coin_block(at).iter().map(|a| a.norm_sqr()).sum())
    }

    pub fn position_distribution(&self, time_step: usize) -> PositionDistribution {
        let probabilities =
            self.amplitudes.chunks_exact(COIN_DIM).map(|c| c.iter().map(|a| a.norm_sqr()).sum()).collect();
        PositionDistribution { probabilities, geometry: self.geometry, time_step }
    }
}

#[inline]
pub(crate) fn encode(geometry: &GridGeometry, coin: CoinIndex, at: Vertex) -> usize {
    COIN_DIM * geometry.vertex_index(at) + coin.offset()
}

#[inline]
pub(crate) fn decode(geometry: &GridGeometry, index: usize) -> (CoinIndex, Vertex) {
    (CoinIndex::from_offset(index % COIN_DIM), geometry.vertex_at(index / COIN_DIM))
}

/// Position probabilities `p_t(x, y)` at one time step.
#[derive(Clone, Debug, PartialEq)]
pub struct PositionDistribution {
    probabilities: Vec<f64>,
    geometry: GridGeometry,
    time_step: usize,
}

impl PositionDistribution {
    pub fn new(geometry: GridGeometry, probabilities: Vec<f64>, time_step: usize) -> Result<Self> {
        if probabilities.len() != geometry.n_vertices() {
            return Err(Error::AmplitudeLength { got: probabilities.len(), expected: geometry.n_vertices() });
        }
        Ok(PositionDistribution { probabilities, geometry, time_step })
    }

    pub fn geometry(&self) -> GridGeometry {
        self.geometry
    }

    pub fn time_step(&self) -> usize {
        self.time_step
    }

    pub fn get(&self, at: Vertex) -> f64 {
        self.probabilities[self.geometry.vertex_index(at)]
    }

    /// Probabilities indexed by `y * L + x`.
    pub fn values(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// Vertex with the largest probability; ties go to the lowest flat index.
    pub fn argmax(&self) -> Vertex {
        let mut best = 0;
        for (i, &p) in self.probabilities.iter().enumerate() {
            if p > self.probabilities[best] {
                best = i;
            }
        }
        self.geometry.vertex_at(best)
    }
}

pub fn position_distribution(state: &WalkerState) -> PositionDistribution {
    state.position_distribution(0)
}

pub fn success_probability(state: &WalkerState, target: Vertex) -> Result<f64> {
    state.probability_at(target)
}

pub fn norm(state: &WalkerState) -> f64 {
    state.norm()
}

pub fn inner_product(a: &WalkerState, b: &WalkerState) -> Result<Complex64> {
    a.inner_product(b)
}
