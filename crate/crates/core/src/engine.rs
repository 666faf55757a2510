//! The evolution loop `U = exp(i f) S (C x I)` and per-step recording.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{CoinOperator, ShiftRule, WalkModel};
use crate::potentials::PotentialField;
use crate::state::{GridGeometry, PositionDistribution, Vertex, WalkerState, COIN_DIM};

/// Vertices per parallel chunk in the fused step kernel.
const PAR_CHUNK_VERTICES: usize = 4096;
/// Grids with fewer vertices than this are stepped serially.
const PAR_MIN_VERTICES: usize = 1 << 16;

/// Inclusive range of time steps `[start, end]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub start: usize,
    pub end: usize,
}

impl Window {
    pub fn new(start: usize, end: usize) -> Self {
        Window { start, end }
    }

    /// `[0, 3 sqrt(N)] = [0, 3L]`.
    pub fn default_for(geometry: GridGeometry) -> Self {
        Window { start: 0, end: 3 * geometry.side() }
    }
}

/// Time step and value of a series maximum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub step: usize,
    pub probability: f64,
}

/// Argmax and max of `series[window]`; ties go to the earliest step.
pub fn peak_in_window(series: &[f64], window: Window) -> Result<Peak> {
    if window.start > window.end || window.end >= series.len() {
        return Err(Error::InvalidWindow { start: window.start, end: window.end, len: series.len() });
    }
    let mut best = Peak { step: window.start, probability: series[window.start] };
    for (t, &p) in series.iter().enumerate().take(window.end + 1).skip(window.start + 1) {
        if p > best.probability {
            best = Peak { step: t, probability: p };
        }
    }
    Ok(best)
}

/// Everything needed for one run.
#[derive(Clone, Debug)]
pub struct EvolutionConfig {
    pub model: WalkModel,
    pub field: PotentialField,
    pub steps: usize,
    pub target: Vertex,
    pub window: Window,
    /// Steps at which to store the full position distribution.
    pub snapshots: Vec<usize>,
    pub keep_final_state: bool,
}

impl EvolutionConfig {
    /// Runs for `3L` steps with the default window.
    pub fn new(model: WalkModel, field: PotentialField, target: Vertex) -> Self {
        let window = Window::default_for(field.geometry());
        EvolutionConfig {
            model,
            field,
            steps: window.end,
            target,
            window,
            snapshots: Vec::new(),
            keep_final_state: false,
        }
    }

    pub fn geometry(&self) -> GridGeometry {
        self.field.geometry()
    }

    /// Sets the peak window, extending `steps` to cover it if needed.
    pub fn with_window(mut self, window: Window) -> Self {
        self.window = window;
        self.steps = self.steps.max(window.end);
        self
    }

    pub fn with_steps(mut self, steps: usize) -> Self {
        self.steps = steps;
        self
    }

    pub fn with_snapshots(mut self, snapshots: Vec<usize>) -> Self {
        self.snapshots = snapshots;
        self
    }

    pub fn with_final_state(mut self) -> Self {
        self.keep_final_state = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry().check(self.target)?;
        if self.window.start > self.window.end || self.window.end > self.steps {
            return Err(Error::InvalidWindow { start: self.window.start, end: self.window.end, len: self.steps + 1 });
        }
        if let Some(&s) = self.snapshots.iter().find(|&&s| s > self.steps) {
            return Err(Error::InvalidWindow { start: s, end: s, len: self.steps + 1 });
        }
        Ok(())
    }
}

/// Outcome of [`run`].
#[derive(Clone, Debug)]
pub struct RunRecord {
    /// `p_t(target)` for `t = 0..=steps`.
    pub success_series: Vec<f64>,
    pub snapshots: Vec<PositionDistribution>,
    pub window: Window,
    pub peak: Peak,
    pub final_state: Option<WalkerState>,
}

/// Precomputed single-step propagator for one (model, field) pair.
pub struct Propagator {
    coin: CoinOperator,
    shift: ShiftRule,
    field: PotentialField,
    scratch: Vec<Complex64>,
}

impl Propagator {
    pub fn new(model: &WalkModel, field: &PotentialField) -> Self {
        let geometry = field.geometry();
        Propagator {
            coin: model.coin().clone(),
            shift: model.shift_rule(geometry),
            field: field.clone(),
            scratch: vec![Complex64::new(0.0, 0.0); geometry.dim()],
        }
    }

    pub fn geometry(&self) -> GridGeometry {
        self.field.geometry()
    }

    /// Coin, then shift, then phase.
    pub fn step(&mut self, state: &mut WalkerState) -> Result<()> {
        state.geometry().ensure_same(&self.geometry())?;
        let amps = state.amplitudes_mut();
        let coin = &self.coin;
        let sources = self.shift.sources();
        let phases = self.field.phase_factors();

        let gather = |out: &mut [Complex64], src: &[u32], phase: &[Complex64], input: &[Complex64]| {
            for ((o, s), p) in out.chunks_exact_mut(COIN_DIM).zip(src.chunks_exact(COIN_DIM)).zip(phase) {
                for c in 0..COIN_DIM {
                    o[c] = p * input[s[c] as usize];
                }
            }
        };

        if phases.len() >= PAR_MIN_VERTICES {
            let chunk = PAR_CHUNK_VERTICES * COIN_DIM;
            amps.par_chunks_mut(chunk).for_each(|c| coin.apply_in_place(c));
            let input: &[Complex64] = amps;
            self.scratch
                .par_chunks_mut(chunk)
                .zip(sources.par_chunks(chunk))
                .zip(phases.par_chunks(PAR_CHUNK_VERTICES))
                .for_each(|((o, s), p)| gather(o, s, p, input));
        } else {
            coin.apply_in_place(amps);
            gather(&mut self.scratch, sources, phases, amps);
        }
        amps.copy_from_slice(&self.scratch);
        Ok(())
    }
}

/// One evolution step applied to a copy of `state`.
pub fn step(state: &WalkerState, config: &EvolutionConfig) -> Result<WalkerState> {
    let mut prop = Propagator::new(&config.model, &config.field);
    let mut out = state.clone();
    prop.step(&mut out)?;
    Ok(out)
}

/// Evolves the uniform state for `config.steps` steps, recording the
/// success probability at every step including `t = 0`.
pub fn run(config: &EvolutionConfig) -> Result<RunRecord> {
    config.validate()?;
    let geometry = config.geometry();
    let mut prop = Propagator::new(&config.model, &config.field);
    let mut state = WalkerState::uniform(geometry);
    let mut series = Vec::with_capacity(config.steps + 1);
    let mut snapshots = Vec::new();

    let mut record = |t: usize, state: &WalkerState| -> Result<()> {
        series.push(state.probability_at(config.target)?);
        if config.snapshots.contains(&t) {
            snapshots.push(state.position_distribution(t));
        }
        Ok(())
    };

    record(0, &state)?;
    for t in 1..=config.steps {
        prop.step(&mut state)?;
        record(t, &state)?;
    }

    let peak = peak_in_window(&series, config.window)?;
    Ok(RunRecord {
        success_series: series,
        snapshots,
        window: config.window,
        peak,
        final_state: config.keep_final_state.then_some(state),
    })
}
