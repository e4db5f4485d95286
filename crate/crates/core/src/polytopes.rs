//! Polytopes of conditional policies and optimal values over them.
//!
//! Three nested strategy classes matter here, each optimized by enumerating
//! vertices of the corresponding polytope of conditionals Q(u_A, u_B | ξ_A, ξ_B):
//!
//! * **local / classical** — convex hull of the 16 deterministic policies
//!   [`deterministic_vertex`]; shared randomness never beats its best vertex,
//!   so the local optimum is the deterministic one.
//! * **no-signalling** — conditionals whose action marginals don't depend on
//!   the other agent's observation. For binary teams this polytope has the 16
//!   deterministic vertices plus 8 non-local ones ([`ns_vertex`], the
//!   correlated-parity boxes).
//! * membership of an arbitrary conditional in the local polytope is decided
//!   by a small linear program ([`local_membership`]).
//!
//! [`chsh_value`] evaluates the standard correlation functional separating
//! the two polytopes (local maximum 2, no-signalling maximum 4).

use crate::scalar::Scalar;
use crate::simplex::solve_equality_form;
use crate::team::{ConditionalPolicy, ProblemInstance};
use std::fmt;

/// Label (α, γ, β, δ) of a deterministic policy: agent A plays
/// u_A = α·ξ_A ⊕ β and agent B plays u_B = γ·ξ_B ⊕ δ.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct DeterministicVertexLabel {
    pub alpha: u8,
    pub gamma: u8,
    pub beta: u8,
    pub delta: u8,
}

impl DeterministicVertexLabel {
    pub fn new(alpha: u8, gamma: u8, beta: u8, delta: u8) -> Self {
        Self {
            alpha: alpha & 1,
            gamma: gamma & 1,
            beta: beta & 1,
            delta: delta & 1,
        }
    }

    /// All 16 labels in lexicographic (α, γ, β, δ) order.
    pub fn all() -> [Self; 16] {
        std::array::from_fn(|k| {
            let k = k as u8;
            Self::new(k >> 3, k >> 2, k >> 1, k)
        })
    }

    /// Action of agent A on observing ξ_A.
    pub fn action_a(&self, xi_a: u8) -> u8 {
        (self.alpha & xi_a & 1) ^ self.beta
    }

    /// Action of agent B on observing ξ_B.
    pub fn action_b(&self, xi_b: u8) -> u8 {
        (self.gamma & xi_b & 1) ^ self.delta
    }

    /// Label of the deterministic policy with the given response maps
    /// (`map_a[ξ_A]` = action of A, `map_b[ξ_B]` = action of B).
    pub fn from_response_maps(map_a: [u8; 2], map_b: [u8; 2]) -> Self {
        Self::new(
            map_a[0] ^ map_a[1],
            map_b[0] ^ map_b[1],
            map_a[0],
            map_b[0],
        )
    }
}

impl fmt::Display for DeterministicVertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pi^{}{}{}{}",
            self.alpha, self.gamma, self.beta, self.delta
        )
    }
}

/// Label (α, β, δ) of a non-local no-signalling vertex: uniform marginals
/// with actions correlated by u_A ⊕ u_B = ξ_A·ξ_B ⊕ α·ξ_A ⊕ β·ξ_B ⊕ δ.
/// The (0, 0, 0) vertex is the standard PR box.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct NoSignallingVertexLabel {
    pub alpha: u8,
    pub beta: u8,
    pub delta: u8,
}

impl NoSignallingVertexLabel {
    pub fn new(alpha: u8, beta: u8, delta: u8) -> Self {
        Self {
            alpha: alpha & 1,
            beta: beta & 1,
            delta: delta & 1,
        }
    }

    /// All 8 labels in lexicographic (α, β, δ) order.
    pub fn all() -> [Self; 8] {
        std::array::from_fn(|k| {
            let k = k as u8;
            Self::new(k >> 2, k >> 1, k)
        })
    }

    /// Target parity u_A ⊕ u_B at an observation pair.
    pub fn parity(&self, xi_a: u8, xi_b: u8) -> u8 {
        (xi_a & xi_b) ^ (self.alpha & xi_a) ^ (self.beta & xi_b) ^ self.delta
    }
}

impl fmt::Display for NoSignallingVertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q^{}{}{}", self.alpha, self.beta, self.delta)
    }
}

/// The deterministic policy with the given label (a 0/1 conditional).
pub fn deterministic_vertex<S: Scalar>(label: DeterministicVertexLabel) -> ConditionalPolicy<S> {
    ConditionalPolicy::from_fn(|u_a, u_b, xi_a, xi_b| {
        if u_a == label.action_a(xi_a) && u_b == label.action_b(xi_b) {
            S::one()
        } else {
            S::zero()
        }
    })
    .expect("deterministic vertices are valid policies")
}

/// The non-local no-signalling vertex with the given label: mass 1/2 on each
/// action pair with the labelled parity, zero elsewhere.
pub fn ns_vertex<S: Scalar>(label: NoSignallingVertexLabel) -> ConditionalPolicy<S> {
    let half = S::from_ratio(1, 2);
    ConditionalPolicy::from_fn(|u_a, u_b, xi_a, xi_b| {
        if (u_a ^ u_b) == label.parity(xi_a, xi_b) {
            half.clone()
        } else {
            S::zero()
        }
    })
    .expect("no-signalling vertices are valid policies")
}

/// Whether a conditional satisfies the no-signalling conditions: agent A's
/// action marginal is independent of ξ_B and vice versa, within `tol`
/// (use zero for exact scalars).
pub fn is_no_signalling<S: Scalar>(policy: &ConditionalPolicy<S>, tol: &S) -> bool {
    let marginal_a = |u_a: u8, xi_a: u8, xi_b: u8| {
        policy.prob(u_a, 0, xi_a, xi_b).clone() + policy.prob(u_a, 1, xi_a, xi_b).clone()
    };
    let marginal_b = |u_b: u8, xi_a: u8, xi_b: u8| {
        policy.prob(0, u_b, xi_a, xi_b).clone() + policy.prob(1, u_b, xi_a, xi_b).clone()
    };
    for u in 0..2u8 {
        for xi in 0..2u8 {
            let da = marginal_a(u, xi, 0) - marginal_a(u, xi, 1);
            if da.abs() > *tol {
                return false;
            }
            let db = marginal_b(u, 0, xi) - marginal_b(u, 1, xi);
            if db.abs() > *tol {
                return false;
            }
        }
    }
    true
}

fn vertex_value<S: Scalar>(w: &[[S; 4]; 4], label: DeterministicVertexLabel) -> S {
    let mut value = S::zero();
    for obs in 0..4usize {
        let (xi_a, xi_b) = ((obs >> 1) as u8, (obs & 1) as u8);
        let act = ((label.action_a(xi_a) << 1) | label.action_b(xi_b)) as usize;
        value = value + w[obs][act].clone();
    }
    value
}

fn ns_vertex_value<S: Scalar>(w: &[[S; 4]; 4], label: NoSignallingVertexLabel) -> S {
    let half = S::from_ratio(1, 2);
    let mut value = S::zero();
    for obs in 0..4usize {
        let (xi_a, xi_b) = ((obs >> 1) as u8, (obs & 1) as u8);
        let parity = label.parity(xi_a, xi_b) as usize;
        // Action pairs (0, parity) and (1, 1 ⊕ parity), mass 1/2 each.
        let v = w[obs][parity].clone() + w[obs][2 + (parity ^ 1)].clone();
        value = value + half.clone() * v;
    }
    value
}

/// Expected cost of the deterministic vertex `label` on `instance`.
pub fn deterministic_vertex_cost<S: Scalar>(
    instance: &ProblemInstance<S>,
    label: DeterministicVertexLabel,
) -> S {
    vertex_value(&instance.w_table(), label)
}

/// Expected cost of the no-signalling vertex `label` on `instance`.
pub fn ns_vertex_cost<S: Scalar>(
    instance: &ProblemInstance<S>,
    label: NoSignallingVertexLabel,
) -> S {
    ns_vertex_value(&instance.w_table(), label)
}

/// Minimum expected cost over deterministic policies — equivalently over all
/// local (shared-randomness) policies, since the cost is linear in the
/// conditional. Ties break to the lexicographically smallest (α, γ, β, δ).
pub fn local_optimum<S: Scalar>(
    instance: &ProblemInstance<S>,
) -> (S, DeterministicVertexLabel) {
    let w = instance.w_table();
    let mut best_label = DeterministicVertexLabel::new(0, 0, 0, 0);
    let mut best = vertex_value(&w, best_label);
    for label in DeterministicVertexLabel::all().into_iter().skip(1) {
        let value = vertex_value(&w, label);
        if value < best {
            best = value;
            best_label = label;
        }
    }
    (best, best_label)
}

/// Argmin of [`ns_optimum`]: either a deterministic vertex or a non-local
/// no-signalling vertex.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum NsArgmin {
    Local(DeterministicVertexLabel),
    NonLocal(NoSignallingVertexLabel),
}

impl fmt::Display for NsArgmin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NsArgmin::Local(l) => write!(f, "{l}"),
            NsArgmin::NonLocal(l) => write!(f, "{l}"),
        }
    }
}

/// Minimum expected cost over no-signalling conditionals, by enumerating all
/// 24 vertices of the no-signalling polytope. On ties a deterministic vertex
/// is preferred (then the lexicographically smallest label), so the argmin is
/// non-local only when non-locality strictly helps.
pub fn ns_optimum<S: Scalar>(instance: &ProblemInstance<S>) -> (S, NsArgmin) {
    let w = instance.w_table();
    let (local_value, local_label) = local_optimum(instance);
    let mut best = local_value;
    let mut best_label = NsArgmin::Local(local_label);
    for label in NoSignallingVertexLabel::all() {
        let value = ns_vertex_value(&w, label);
        if value < best {
            best = value;
            best_label = NsArgmin::NonLocal(label);
        }
    }
    (best, best_label)
}

/// Result of the local-polytope membership test.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalMembership<S> {
    /// Whether the conditional is a convex combination of deterministic
    /// policies (within the tolerance).
    pub is_member: bool,
    /// Best achievable sup-norm distance between the conditional and the
    /// local polytope (zero, up to tolerance, for members).
    pub distance: S,
    /// Convex weights over the 16 deterministic vertices in
    /// [`DeterministicVertexLabel::all`] order, for the closest local point.
    pub weights: [S; 16],
}

/// Decides membership of a conditional in the local polytope by minimizing,
/// with an exact two-phase simplex, the sup-norm distance to a convex
/// combination of the 16 deterministic vertices. Exact scalars decide
/// exactly with `tol` = 0; for doubles use a tolerance like 1e-9.
pub fn local_membership<S: Scalar>(
    policy: &ConditionalPolicy<S>,
    tol: &S,
) -> LocalMembership<S> {
    // Variables: w_0..w_15 (vertex weights), t (distance), s_0..s_31 (slacks).
    // Constraints, for each of the 16 conditional entries e:
    //     Σ_k w_k V_k[e] − t ≤ q[e]   and   −Σ_k w_k V_k[e] − t ≤ −q[e],
    // as equalities with slacks, plus Σ_k w_k = 1. Minimize t.
    const NV: usize = 16;
    let n = NV + 1 + 32;
    let t_col = NV;
    let vertices: Vec<ConditionalPolicy<S>> = DeterministicVertexLabel::all()
        .into_iter()
        .map(deterministic_vertex)
        .collect();

    let mut a: Vec<Vec<S>> = Vec::with_capacity(33);
    let mut b: Vec<S> = Vec::with_capacity(33);
    let mut entry_idx = 0usize;
    for obs in 0..4u8 {
        for act in 0..4u8 {
            let (xi_a, xi_b) = (obs >> 1, obs & 1);
            let (u_a, u_b) = (act >> 1, act & 1);
            let q_e = policy.prob(u_a, u_b, xi_a, xi_b).clone();
            for sign in [1i64, -1] {
                let mut row = vec![S::zero(); n];
                for (k, v) in vertices.iter().enumerate() {
                    row[k] = S::from_int(sign) * v.prob(u_a, u_b, xi_a, xi_b).clone();
                }
                row[t_col] = -S::one();
                row[NV + 1 + 2 * entry_idx + usize::from(sign < 0)] = S::one();
                a.push(row);
                b.push(S::from_int(sign) * q_e.clone());
            }
            entry_idx += 1;
        }
    }
    let mut norm_row = vec![S::zero(); n];
    for cell in norm_row.iter_mut().take(NV) {
        *cell = S::one();
    }
    a.push(norm_row);
    b.push(S::one());

    let mut c = vec![S::zero(); n];
    c[t_col] = S::one();

    let (distance, x) = solve_equality_form(&a, &b, &c)
        .expect("membership program is always feasible and bounded");
    let weights = std::array::from_fn(|k| x[k].clone());
    LocalMembership {
        is_member: distance <= *tol,
        distance,
        weights,
    }
}

/// The standard correlation functional over conditionals:
/// Σ_{ξ_A, ξ_B} (−1)^{ξ_A·ξ_B} E(ξ_A, ξ_B) with
/// E(ξ_A, ξ_B) = Σ_{u} (−1)^{u_A ⊕ u_B} Q(u | ξ_A, ξ_B).
/// Local policies reach at most 2; the PR box reaches 4.
pub fn chsh_value<S: Scalar>(policy: &ConditionalPolicy<S>) -> S {
    let mut total = S::zero();
    for xi_a in 0..2u8 {
        for xi_b in 0..2u8 {
            let mut correlator = S::zero();
            for u_a in 0..2u8 {
                for u_b in 0..2u8 {
                    let term = policy.prob(u_a, u_b, xi_a, xi_b).clone();
                    correlator = if u_a ^ u_b == 0 {
                        correlator + term
                    } else {
                        correlator - term
                    };
                }
            }
            total = if xi_a & xi_b == 0 {
                total + correlator
            } else {
                total - correlator
            };
        }
    }
    total
}
