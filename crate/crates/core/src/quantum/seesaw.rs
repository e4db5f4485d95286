//! Alternating ("see-saw") minimization of the expected cost over quantum
//! strategies.
//!
//! The objective is linear in each block separately — the state ρ, agent A's
//! projectors, agent B's projectors — so each block update is an exact
//! minimization and the objective is monotonically non-increasing:
//!
//! * ρ-update: ρ ← |ψ⟩⟨ψ| for the minimum eigenvector ψ of the Hermitian
//!   cost operator assembled from the current projectors;
//! * projector update (per observation value): P ← projector onto the
//!   negative eigenspace of an effective 2×2 Hermitian operator obtained by
//!   contracting ρ against the other agent's projectors.
//!
//! Restarts draw independent random measurement directions; the state is
//! updated first, so it needs no initialization. Everything is deterministic
//! given the seed: restart r uses a counter-mode RNG keyed by (seed, r), and
//! the best restart is selected by (value, restart index).

use super::eigen::{min_eigenpair, negative_eigenspace_projector};
use super::matrix::{ComplexSquareMatrix, C64};
use super::{bloch_projector, QuantumStrategy};
use crate::scalar::Scalar;
use crate::team::ProblemInstance;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::TAU;

/// Options for [`seesaw_optimize`].
#[derive(Clone, Debug)]
pub struct SeesawOptions {
    /// Number of independent random restarts (≥ 1).
    pub restarts: usize,
    /// Iteration cap per restart.
    pub max_iters: usize,
    /// RNG seed; the same seed always yields the same outcome.
    pub seed: u64,
    /// Declare convergence when one iteration improves the objective by less
    /// than this.
    pub improvement_tol: f64,
}

impl Default for SeesawOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iters: 500,
            seed: 0,
            improvement_tol: 1e-12,
        }
    }
}

/// Result of [`seesaw_optimize`]: the best strategy over all restarts.
#[derive(Clone, Debug)]
pub struct SeesawOutcome {
    pub strategy: QuantumStrategy,
    /// Expected cost of `strategy`.
    pub value: f64,
    /// Whether the best restart's improvement dropped below the tolerance
    /// before hitting the iteration cap. Non-convergence is not an error;
    /// the caller decides what to do with a non-converged value.
    pub converged: bool,
    /// Iterations used by the best restart.
    pub iterations: usize,
    /// Objective after each iteration of the best restart (non-increasing).
    pub objective_trace: Vec<f64>,
    /// Index of the winning restart.
    pub restart_index: usize,
}

struct RestartResult {
    pa: [ComplexSquareMatrix; 2],
    pb: [ComplexSquareMatrix; 2],
    rho: ComplexSquareMatrix,
    value: f64,
    converged: bool,
    trace: Vec<f64>,
}

/// Per-restart RNG: ChaCha keyed by the seed and the restart index, so
/// restarts are independent and the whole run is reproducible regardless of
/// how the restarts are scheduled across threads.
fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(restart as u64).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Rank-one projector onto a Bloch direction drawn uniformly on the sphere.
fn random_projector(rng: &mut ChaCha8Rng) -> ComplexSquareMatrix {
    let theta = (1.0 - 2.0 * rng.gen::<f64>()).acos();
    let phi = TAU * rng.gen::<f64>();
    bloch_projector(theta, phi)
}

fn complement(p: &ComplexSquareMatrix) -> ComplexSquareMatrix {
    ComplexSquareMatrix::identity(2).sub(p)
}

/// Partial trace of ρ against agent B's operator Y:
/// R[a', a] = Σ_{b, b'} Y[b, b'] ρ[(a'b'), (ab)], so that
/// Tr[(X ⊗ Y) ρ] = Tr(X · R) for every X.
fn contract_b(rho: &ComplexSquareMatrix, y: &ComplexSquareMatrix) -> ComplexSquareMatrix {
    let mut r = ComplexSquareMatrix::zeros(2);
    for ap in 0..2usize {
        for a in 0..2usize {
            let mut acc = C64::new(0.0, 0.0);
            for b in 0..2usize {
                for bp in 0..2usize {
                    acc += y.get(b, bp) * rho.get(2 * ap + bp, 2 * a + b);
                }
            }
            r.set(ap, a, acc);
        }
    }
    r
}

/// Partial trace of ρ against agent A's operator X:
/// S[b', b] = Σ_{a, a'} X[a, a'] ρ[(a'b'), (ab)], so that
/// Tr[(X ⊗ Y) ρ] = Tr(Y · S) for every Y.
fn contract_a(rho: &ComplexSquareMatrix, x: &ComplexSquareMatrix) -> ComplexSquareMatrix {
    let mut s = ComplexSquareMatrix::zeros(2);
    for bp in 0..2usize {
        for b in 0..2usize {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..2usize {
                for ap in 0..2usize {
                    acc += x.get(a, ap) * rho.get(2 * ap + bp, 2 * a + b);
                }
            }
            s.set(bp, b, acc);
        }
    }
    s
}

/// Hermitian cost operator Σ_obs Σ_act W[obs][act] · P^A ⊗ P^B for the
/// current projector choices.
fn cost_operator(
    w: &[[f64; 4]; 4],
    pa: &[ComplexSquareMatrix; 2],
    pb: &[ComplexSquareMatrix; 2],
) -> ComplexSquareMatrix {
    let mut h = ComplexSquareMatrix::zeros(4);
    for obs in 0..4usize {
        let (xa, xb) = (obs >> 1, obs & 1);
        let pa_eff = [pa[xa].clone(), complement(&pa[xa])];
        let pb_eff = [pb[xb].clone(), complement(&pb[xb])];
        for act in 0..4usize {
            if w[obs][act] == 0.0 {
                continue;
            }
            let (ua, ub) = (act >> 1, act & 1);
            h = h.add(&pa_eff[ua].kron(&pb_eff[ub]).scale(w[obs][act]));
        }
    }
    h
}

fn objective(
    w: &[[f64; 4]; 4],
    pa: &[ComplexSquareMatrix; 2],
    pb: &[ComplexSquareMatrix; 2],
    rho: &ComplexSquareMatrix,
) -> f64 {
    cost_operator(w, pa, pb).mul(rho).trace().re
}

fn run_restart(w: &[[f64; 4]; 4], opts: &SeesawOptions, restart: usize) -> RestartResult {
    let mut rng = restart_rng(opts.seed, restart);
    let mut pa = [random_projector(&mut rng), random_projector(&mut rng)];
    let mut pb = [random_projector(&mut rng), random_projector(&mut rng)];
    let mut rho = ComplexSquareMatrix::identity(4).scale(0.25);
    let mut trace = Vec::new();
    let mut prev = f64::INFINITY;
    let mut converged = false;

    for _ in 0..opts.max_iters {
        // State update: the minimum eigenvector of the cost operator.
        let h = cost_operator(w, &pa, &pb);
        let (_, psi) = min_eigenpair(&h);
        rho = ComplexSquareMatrix::outer(&psi);

        // Measurement update for agent A, one observation value at a time:
        // J is Tr[P_0(ξ_A) G] + const with
        // G = Σ_{ξ_B, u_B} (W[obs][(0,u_B)] − W[obs][(1,u_B)]) · Tr_B[ρ; P^B_{u_B}(ξ_B)],
        // minimized by the projector onto G's negative eigenspace.
        for xa in 0..2usize {
            let mut g = ComplexSquareMatrix::zeros(2);
            for xb in 0..2usize {
                let obs = xa << 1 | xb;
                let pb_eff = [pb[xb].clone(), complement(&pb[xb])];
                for (ub, pb_u) in pb_eff.iter().enumerate() {
                    let coeff = w[obs][ub] - w[obs][2 + ub];
                    if coeff != 0.0 {
                        g = g.add(&contract_b(&rho, pb_u).scale(coeff));
                    }
                }
            }
            pa[xa] = negative_eigenspace_projector(&g.hermitian_part());
        }

        // Symmetric measurement update for agent B.
        for xb in 0..2usize {
            let mut g = ComplexSquareMatrix::zeros(2);
            for xa in 0..2usize {
                let obs = xa << 1 | xb;
                let pa_eff = [pa[xa].clone(), complement(&pa[xa])];
                for (ua, pa_u) in pa_eff.iter().enumerate() {
                    let coeff = w[obs][2 * ua] - w[obs][2 * ua + 1];
                    if coeff != 0.0 {
                        g = g.add(&contract_a(&rho, pa_u).scale(coeff));
                    }
                }
            }
            pb[xb] = negative_eigenspace_projector(&g.hermitian_part());
        }

        let value = objective(w, &pa, &pb, &rho);
        trace.push(value);
        if prev - value < opts.improvement_tol {
            converged = true;
            break;
        }
        prev = value;
    }

    let value = *trace.last().expect("max_iters >= 1 pushes at least once");
    RestartResult {
        pa,
        pb,
        rho,
        value,
        converged,
        trace,
    }
}

/// Minimizes the expected cost of `instance` over quantum strategies by
/// alternating exact block updates, over `opts.restarts` random restarts.
/// Returns the best strategy found. Deterministic for a fixed seed.
pub fn seesaw_optimize<S: Scalar>(
    instance: &ProblemInstance<S>,
    opts: &SeesawOptions,
) -> SeesawOutcome {
    assert!(opts.restarts >= 1, "at least one restart");
    assert!(opts.max_iters >= 1, "at least one iteration");
    let w = instance.to_f64().w_table();

    let results: Vec<RestartResult> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| run_restart(&w, opts, r))
        .collect();

    let (best_index, best) = results
        .into_iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| {
            a.value
                .partial_cmp(&b.value)
                .expect("objectives are finite")
                .then(i.cmp(j))
        })
        .expect("restarts >= 1");

    let strategy = QuantumStrategy {
        rho: best.rho,
        proj_a: [
            [best.pa[0].clone(), complement(&best.pa[0])],
            [best.pa[1].clone(), complement(&best.pa[1])],
        ],
        proj_b: [
            [best.pb[0].clone(), complement(&best.pb[0])],
            [best.pb[1].clone(), complement(&best.pb[1])],
        ],
    };
    SeesawOutcome {
        strategy,
        value: best.value,
        converged: best.converged,
        iterations: best.trace.len(),
        objective_trace: best.trace,
        restart_index: best_index,
    }
}
