//! Dense 64x64 reference operators on a 4x4 grid, assembled directly from
//! the operator definitions without the library's tabulated permutations.
#![allow(dead_code)]

use num_complex::Complex64;
use qwsearch::{
    bivariate_gaussian_field, delta_oracle_field, CoinOperator, GaussianParams, GridGeometry, OracleSpec,
    PotentialField, Propagator, ShiftKind, Vertex, WalkModel, WalkerState,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const L: usize = 4;
pub const D: usize = 4 * L * L;

pub type Dense = Vec<Vec<Complex64>>;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn idx(x: usize, y: usize, j: usize, k: usize) -> usize {
    4 * (y * L + x) + 2 * j + k
}

pub fn zeros() -> Dense {
    vec![vec![c(0.0); D]; D]
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let mut out = zeros();
    for i in 0..D {
        for k in 0..D {
            if a[i][k] == c(0.0) {
                continue;
            }
            for j in 0..D {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn matvec(a: &Dense, v: &[Complex64]) -> Vec<Complex64> {
    a.iter().map(|row| row.iter().zip(v).map(|(m, x)| m * x).sum()).collect()
}

pub fn grover4() -> [[f64; 4]; 4] {
    let mut m = [[0.5; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= 1.0;
    }
    m
}

pub fn hadamard4() -> [[f64; 4]; 4] {
    let h = [[1.0, 1.0], [1.0, -1.0]];
    let mut m = [[0.0; 4]; 4];
    for r in 0..4 {
        for s in 0..4 {
            m[r][s] = h[r >> 1][s >> 1] * h[r & 1][s & 1] / 2.0;
        }
    }
    m
}

pub fn coin_matrix(block: [[f64; 4]; 4]) -> Dense {
    let mut m = zeros();
    for v in 0..L * L {
        for r in 0..4 {
            for s in 0..4 {
                m[4 * v + r][4 * v + s] = c(block[r][s]);
            }
        }
    }
    m
}

// |j,k>|x,y> moves one site along x when j = 1 and along y when j = 0,
// forward for k = 0 and backward for k = 1.
fn step_of(j: usize, k: usize) -> (isize, isize) {
    let s = if k == 0 { 1 } else { -1 };
    if j == 1 {
        (s, 0)
    } else {
        (0, s)
    }
}

pub fn flip_flop_matrix() -> Dense {
    let mut m = zeros();
    for y in 0..L {
        for x in 0..L {
            for j in 0..2 {
                for k in 0..2 {
                    let (dx, dy) = step_of(j, k);
                    let nx = (x as isize + dx).rem_euclid(L as isize) as usize;
                    let ny = (y as isize + dy).rem_euclid(L as isize) as usize;
                    m[idx(nx, ny, j, 1 - k)][idx(x, y, j, k)] = c(1.0);
                }
            }
        }
    }
    m
}

pub fn reflective_matrix() -> Dense {
    let mut m = zeros();
    for y in 0..L {
        for x in 0..L {
            for j in 0..2 {
                for k in 0..2 {
                    let (dx, dy) = step_of(j, k);
                    let (nx, ny) = (x as isize + dx, y as isize + dy);
                    let inside = nx >= 0 && ny >= 0 && nx < L as isize && ny < L as isize;
                    let to = if inside { idx(nx as usize, ny as usize, j, k) } else { idx(x, y, j, 1 - k) };
                    m[to][idx(x, y, j, k)] = c(1.0);
                }
            }
        }
    }
    m
}

pub fn phase_matrix(values: &[f64]) -> Dense {
    let mut m = zeros();
    for v in 0..L * L {
        for r in 0..4 {
            m[4 * v + r][4 * v + r] = Complex64::from_polar(1.0, values[v]);
        }
    }
    m
}

fn random_state(rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let v: Vec<Complex64> =
        (0..D).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / n).collect()
}

fn fields(g: GridGeometry) -> Vec<PotentialField> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let random: Vec<f64> = (0..L * L).map(|_| rng.gen_range(-4.0..4.0)).collect();
    vec![
        delta_oracle_field(g, &OracleSpec::single(Vertex::new(2, 1))).unwrap(),
        bivariate_gaussian_field(g, &GaussianParams::centered(g, 0.8, std::f64::consts::PI).unwrap()).unwrap(),
        PotentialField::from_values(g, qwsearch::PotentialKind::Custom, random).unwrap(),
    ]
}

/// Steps random states with every coin/shift pairing and three fields, and
/// returns the number of comparisons and the largest amplitude deviation from
/// the assembled `phase * shift * coin` matrix.
pub fn dense_step_deviation() -> (usize, f64) {
    let g = GridGeometry::new(L).unwrap();
    let coins = [(CoinOperator::grover(), grover4()), (CoinOperator::hadamard_tensor(), hadamard4())];
    let shifts =
        [(ShiftKind::FlipFlopPeriodic, flip_flop_matrix()), (ShiftKind::StandardReflective, reflective_matrix())];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut checked, mut worst) = (0, 0.0f64);
    for (coin, block) in &coins {
        for (shift, shift_m) in &shifts {
            let model = WalkModel::custom(coin.clone(), *shift);
            for field in fields(g) {
                let u = matmul(&phase_matrix(field.values()), &matmul(shift_m, &coin_matrix(*block)));
                let mut prop = Propagator::new(&model, &field);
                for _ in 0..3 {
                    let psi = random_state(&mut rng);
                    let expected = matvec(&u, &psi);
                    let mut state = WalkerState::from_amplitudes(g, psi).unwrap();
                    prop.step(&mut state).unwrap();
                    let err = state.amplitudes().iter().zip(&expected).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                    worst = worst.max(err);
                    checked += 1;
                }
            }
        }
    }
    (checked, worst)
}
