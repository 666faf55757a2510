//! Coin operators, shift rules and the walk substep `S (C x I)`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{decode, encode, CoinIndex, GridGeometry, Vertex, WalkerState, COIN_DIM};

/// Entrywise tolerance for the unitarity check on coin matrices.
pub const UNITARITY_TOLERANCE: f64 = 1e-12;

pub type CoinMatrix = [[Complex64; COIN_DIM]; COIN_DIM];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoinKind {
    Grover,
    HadamardTensor,
    Custom,
}

/// A 4x4 unitary acting on the coin register of every vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct CoinOperator {
    matrix: CoinMatrix,
    kind: CoinKind,
}

impl CoinOperator {
    /// `2|d><d| - I` with `|d>` the uniform coin state.
    pub fn grover() -> Self {
        let mut matrix = [[Complex64::new(0.5, 0.0); COIN_DIM]; COIN_DIM];
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = Complex64::new(-0.5, 0.0);
        }
        CoinOperator { matrix, kind: CoinKind::Grover }
    }

    /// `H x H`, with the first factor acting on the axis bit `j`.
    pub fn hadamard_tensor() -> Self {
        let mut matrix = [[Complex64::new(0.0, 0.0); COIN_DIM]; COIN_DIM];
        for (r, row) in matrix.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                // <r|H x H|c> = (-1)^{popcount(r & c)} / 2
                let sign = if (r & c).count_ones() % 2 == 0 { 0.5 } else { -0.5 };
                *entry = Complex64::new(sign, 0.0);
            }
        }
        CoinOperator { matrix, kind: CoinKind::HadamardTensor }
    }

    /// Any unitary 4x4 matrix, rows indexed by output coin offset `2j + k`.
    pub fn custom(matrix: CoinMatrix) -> Result<Self> {
        let dev = unitarity_deviation(&matrix);
        if dev > UNITARITY_TOLERANCE || !dev.is_finite() {
            return Err(Error::NonUnitaryCoin(dev));
        }
        Ok(CoinOperator { matrix, kind: CoinKind::Custom })
    }

    pub fn kind(&self) -> CoinKind {
        self.kind
    }

    pub fn matrix(&self) -> &CoinMatrix {
        &self.matrix
    }

    /// Conjugate transpose. Grover and Hadamard coins are Hermitian, so the
    /// kind carries over.
    pub fn adjoint(&self) -> Self {
        let mut matrix = [[Complex64::new(0.0, 0.0); COIN_DIM]; COIN_DIM];
        for (r, row) in matrix.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = self.matrix[c][r].conj();
            }
        }
        CoinOperator { matrix, kind: self.kind }
    }

    /// Applies the coin to one vertex block in place.
    #[inline]
    pub fn apply_block(&self, block: &mut [Complex64]) {
        debug_assert_eq!(block.len(), COIN_DIM);
        match self.kind {
            CoinKind::Grover => {
                let half = (block[0] + block[1] + block[2] + block[3]) * 0.5;
                for a in block.iter_mut() {
                    *a = half - *a;
                }
            }
            _ => {
                let v = [block[0], block[1], block[2], block[3]];
                for (out, row) in block.iter_mut().zip(&self.matrix) {
                    *out = row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3];
                }
            }
        }
    }

    /// Applies `C x I` to a full amplitude vector in place.
    pub fn apply_in_place(&self, amplitudes: &mut [Complex64]) {
        for block in amplitudes.chunks_exact_mut(COIN_DIM) {
            self.apply_block(block);
        }
    }
}

fn unitarity_deviation(m: &CoinMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..COIN_DIM {
        for c in 0..COIN_DIM {
            let dot: Complex64 = (0..COIN_DIM).map(|k| m[r][k] * m[c][k].conj()).sum();
            let target = if r == c { 1.0 } else { 0.0 };
            worst = worst.max((dot - target).norm());
        }
    }
    worst
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShiftKind {
    /// Move and invert the direction bit; positions wrap modulo `L`.
    FlipFlopPeriodic,
    /// Move keeping the coin; at a wall the walker stays put and the
    /// direction bit flips.
    StandardReflective,
}

impl ShiftKind {
    /// Image of one basis state.
    pub fn map(&self, geometry: GridGeometry, coin: CoinIndex, at: Vertex) -> (CoinIndex, Vertex) {
        let side = geometry.side() as isize;
        let (dx, dy) = coin.displacement();
        let (nx, ny) = (at.x as isize + dx, at.y as isize + dy);
        match self {
            ShiftKind::FlipFlopPeriodic => {
                let wrapped = Vertex::new(nx.rem_euclid(side) as usize, ny.rem_euclid(side) as usize);
                (coin.flipped(), wrapped)
            }
            ShiftKind::StandardReflective => {
                if (0..side).contains(&nx) && (0..side).contains(&ny) {
                    (coin, Vertex::new(nx as usize, ny as usize))
                } else {
                    (coin.flipped(), at)
                }
            }
        }
    }
}

impl fmt::Display for ShiftKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShiftKind::FlipFlopPeriodic => write!(f, "flip-flop/periodic"),
            ShiftKind::StandardReflective => write!(f, "standard/reflective"),
        }
    }
}

/// A shift kind bound to a grid, with its basis permutation tabulated.
#[derive(Clone, Debug)]
pub struct ShiftRule {
    kind: ShiftKind,
    geometry: GridGeometry,
    /// `target[i]` is the image of basis index `i`.
    target: Arc<[u32]>,
    /// `source[i]` is the preimage of basis index `i`.
    source: Arc<[u32]>,
}

impl ShiftRule {
    pub fn new(kind: ShiftKind, geometry: GridGeometry) -> Self {
        let dim = geometry.dim();
        assert!(dim <= u32::MAX as usize, "grid too large for a 32-bit shift table");
        let mut target = vec![0u32; dim];
        let mut source = vec![u32::MAX; dim];
        for (i, slot) in target.iter_mut().enumerate() {
            let (coin, at) = decode(&geometry, i);
            let (c2, v2) = kind.map(geometry, coin, at);
            let j = encode(&geometry, c2, v2);
            *slot = j as u32;
            source[j] = i as u32;
        }
        debug_assert!(source.iter().all(|&s| s != u32::MAX), "shift is not a permutation");
        ShiftRule { kind, geometry, target: target.into(), source: source.into() }
    }

    pub fn kind(&self) -> ShiftKind {
        self.kind
    }

    pub fn geometry(&self) -> GridGeometry {
        self.geometry
    }

    /// Image of a flat basis index.
    pub fn map_index(&self, index: usize) -> usize {
        self.target[index] as usize
    }

    /// Preimage of a flat basis index.
    pub fn source_index(&self, index: usize) -> usize {
        self.source[index] as usize
    }

    pub(crate) fn sources(&self) -> &[u32] {
        &self.source
    }

    /// `out[i] = input[source[i]]`.
    pub fn apply_into(&self, input: &[Complex64], out: &mut [Complex64]) {
        for (o, &s) in out.iter_mut().zip(self.source.iter()) {
            *o = input[s as usize];
        }
    }

    /// `out[i] = input[target[i]]`, the inverse shift.
    pub fn apply_inverse_into(&self, input: &[Complex64], out: &mut [Complex64]) {
        for (o, &t) in out.iter_mut().zip(self.target.iter()) {
            *o = input[t as usize];
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelLabel {
    /// Grover coin, flip-flop shift, periodic boundaries (AKR).
    Model1,
    /// Hadamard x Hadamard coin, standard shift, reflective boundaries.
    Model2,
    Custom,
}

impl fmt::Display for ModelLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelLabel::Model1 => write!(f, "model1"),
            ModelLabel::Model2 => write!(f, "model2"),
            ModelLabel::Custom => write!(f, "custom"),
        }
    }
}

/// Coin plus shift kind. Geometry-free; bind to a grid with [`WalkModel::shift_rule`].
#[derive(Clone, Debug, PartialEq)]
pub struct WalkModel {
    coin: CoinOperator,
    shift: ShiftKind,
    label: ModelLabel,
}

impl WalkModel {
    pub fn model1() -> Self {
        WalkModel { coin: CoinOperator::grover(), shift: ShiftKind::FlipFlopPeriodic, label: ModelLabel::Model1 }
    }

    pub fn model2() -> Self {
        WalkModel {
            coin: CoinOperator::hadamard_tensor(),
            shift: ShiftKind::StandardReflective,
            label: ModelLabel::Model2,
        }
    }

    pub fn from_label(label: ModelLabel) -> Option<Self> {
        match label {
            ModelLabel::Model1 => Some(Self::model1()),
            ModelLabel::Model2 => Some(Self::model2()),
            ModelLabel::Custom => None,
        }
    }

    pub fn custom(coin: CoinOperator, shift: ShiftKind) -> Self {
        WalkModel { coin, shift, label: ModelLabel::Custom }
    }

    pub fn coin(&self) -> &CoinOperator {
        &self.coin
    }

    pub fn shift_kind(&self) -> ShiftKind {
        self.shift
    }

    pub fn label(&self) -> ModelLabel {
        self.label
    }

    pub fn shift_rule(&self, geometry: GridGeometry) -> ShiftRule {
        ShiftRule::new(self.shift, geometry)
    }
}

pub fn apply_coin(state: &WalkerState, coin: &CoinOperator) -> WalkerState {
    let mut out = state.clone();
    coin.apply_in_place(out.amplitudes_mut());
    out
}

pub fn apply_shift(state: &WalkerState, shift: &ShiftRule) -> Result<WalkerState> {
    state.geometry().ensure_same(&shift.geometry())?;
    let mut out = vec![Complex64::new(0.0, 0.0); state.amplitudes().len()];
    shift.apply_into(state.amplitudes(), &mut out);
    WalkerState::from_amplitudes_unchecked(state.geometry(), out)
}

/// One application of `S (C x I)`.
pub fn walk_substep(state: &WalkerState, model: &WalkModel) -> WalkerState {
    let shift = model.shift_rule(state.geometry());
    apply_shift(&apply_coin(state, model.coin()), &shift).expect("shift built for this geometry")
}
