//! Problem data for binary two-agent static teams.
//!
//! Two agents observe private bits ξ_A and ξ_B, choose binary actions
//! u_A and u_B without communicating, and share a cost that also depends on a
//! hidden world bit ξ_W:
//!
//! ```text
//! ℓ(u_A^i, u_B^j, 0) =   [M]_{i+1, j+1}
//! ℓ(u_A^i, u_B^j, 1) = χ [N]_{i+1, j+1}
//! ```
//!
//! with M, N ∈ {0, −1}^{2×2} and a weight χ ≥ 0. A problem instance is the
//! matrix pair together with a joint prior on (ξ_A, ξ_B, ξ_W) and χ.

use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Errors from constructing problem data.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TeamError {
    #[error("cost matrix entries must be 0 or -1, got {0}")]
    BadCostEntry(i8),
    #[error("chi must be nonnegative, got {0}")]
    NegativeChi(String),
    #[error("prior mass at (xi_A, xi_B, xi_W) = ({1}, {2}, {3}) is negative: {0}")]
    NegativePriorMass(String, u8, u8, u8),
    #[error("prior must sum to 1, got {0}")]
    UnnormalizedPrior(String),
    #[error("policy weight at actions ({1}, {2}) given ({3}, {4}) is negative: {0}")]
    NegativePolicyWeight(String, u8, u8, u8, u8),
    #[error("policy must sum to 1 for each observation pair; sum at (xi_A, xi_B) = ({1}, {2}) is {0}")]
    UnnormalizedPolicy(String, u8, u8),
    #[error("the exchange action inverts chi and is undefined at chi = 0")]
    ExchangeAtZeroChi,
    #[error("{0}")]
    InvalidInput(String),
}

fn validate_binary_matrix(m: &[[i8; 2]; 2]) -> Result<(), TeamError> {
    for row in m {
        for &e in row {
            if e != 0 && e != -1 {
                return Err(TeamError::BadCostEntry(e));
            }
        }
    }
    Ok(())
}

/// A pair (M, N) of 2×2 cost matrices with entries in {0, −1}.
///
/// There are 256 such pairs. Each is identified by an 8-bit code: bit k of
/// the low nibble flags a −1 in M at (row, col) = (k / 2, k mod 2), and the
/// high nibble does the same for N.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(into = "u8", from = "u8")]
pub struct BinaryCostPair {
    m: [[i8; 2]; 2],
    n: [[i8; 2]; 2],
}

impl From<BinaryCostPair> for u8 {
    fn from(pair: BinaryCostPair) -> u8 {
        pair.code()
    }
}

impl From<u8> for BinaryCostPair {
    fn from(code: u8) -> Self {
        BinaryCostPair::from_code(code)
    }
}

impl BinaryCostPair {
    pub fn new(m: [[i8; 2]; 2], n: [[i8; 2]; 2]) -> Result<Self, TeamError> {
        validate_binary_matrix(&m)?;
        validate_binary_matrix(&n)?;
        Ok(Self { m, n })
    }

    /// Builds the pair whose −1 positions are the set bits of the two masks
    /// (bit k ↔ entry (k / 2, k mod 2)).
    pub fn from_masks(m_mask: u8, n_mask: u8) -> Self {
        debug_assert!(m_mask < 16 && n_mask < 16);
        let decode = |mask: u8| {
            let mut m = [[0i8; 2]; 2];
            for k in 0..4u8 {
                if mask >> k & 1 == 1 {
                    m[(k >> 1) as usize][(k & 1) as usize] = -1;
                }
            }
            m
        };
        Self {
            m: decode(m_mask),
            n: decode(n_mask),
        }
    }

    /// Builds the pair from its packed code (M mask in the low nibble, N mask
    /// in the high nibble).
    pub fn from_code(code: u8) -> Self {
        Self::from_masks(code & 0xf, code >> 4)
    }

    /// Packed 8-bit code of this pair.
    pub fn code(&self) -> u8 {
        self.m_mask() | self.n_mask() << 4
    }

    fn mask_of(m: &[[i8; 2]; 2]) -> u8 {
        let mut mask = 0u8;
        for k in 0..4u8 {
            if m[(k >> 1) as usize][(k & 1) as usize] == -1 {
                mask |= 1 << k;
            }
        }
        mask
    }

    /// 4-bit mask of the −1 entries of M.
    pub fn m_mask(&self) -> u8 {
        Self::mask_of(&self.m)
    }

    /// 4-bit mask of the −1 entries of N.
    pub fn n_mask(&self) -> u8 {
        Self::mask_of(&self.n)
    }

    pub fn m(&self) -> &[[i8; 2]; 2] {
        &self.m
    }

    pub fn n(&self) -> &[[i8; 2]; 2] {
        &self.n
    }

    /// Entry of M at action pair (i, j).
    pub fn m_entry(&self, i: u8, j: u8) -> i8 {
        self.m[(i & 1) as usize][(j & 1) as usize]
    }

    /// Entry of N at action pair (i, j).
    pub fn n_entry(&self, i: u8, j: u8) -> i8 {
        self.n[(i & 1) as usize][(j & 1) as usize]
    }
}

impl fmt::Display for BinaryCostPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "M=[[{},{}],[{},{}]] N=[[{},{}],[{},{}]]",
            self.m[0][0],
            self.m[0][1],
            self.m[1][0],
            self.m[1][1],
            self.n[0][0],
            self.n[0][1],
            self.n[1][0],
            self.n[1][1]
        )
    }
}

/// Joint distribution of the bit triple (ξ_A, ξ_B, ξ_W).
///
/// Entries are indexed by `(ξ_A << 2) | (ξ_B << 1) | ξ_W`. Validation
/// requires nonnegative masses summing to one — exactly for exact scalars,
/// within `1e-12` for doubles.
#[derive(Clone, Debug, PartialEq)]
pub struct JointPrior<S> {
    p: [S; 8],
}

const FLOAT_VALIDATION_TOL: f64 = 1e-12;

fn nonneg_ok<S: Scalar>(x: &S) -> bool {
    if S::EXACT {
        *x >= S::zero()
    } else {
        x.to_f64() >= -FLOAT_VALIDATION_TOL
    }
}

fn sums_to_one<S: Scalar>(sum: &S) -> bool {
    if S::EXACT {
        *sum == S::one()
    } else {
        (sum.to_f64() - 1.0).abs() <= FLOAT_VALIDATION_TOL
    }
}

impl<S: Scalar> JointPrior<S> {
    pub const fn index(xi_a: u8, xi_b: u8, xi_w: u8) -> usize {
        ((xi_a & 1) << 2 | (xi_b & 1) << 1 | (xi_w & 1)) as usize
    }

    pub fn new(p: [S; 8]) -> Result<Self, TeamError> {
        for xi_a in 0..2u8 {
            for xi_b in 0..2u8 {
                for xi_w in 0..2u8 {
                    let mass = &p[Self::index(xi_a, xi_b, xi_w)];
                    if !nonneg_ok(mass) {
                        return Err(TeamError::NegativePriorMass(
                            mass.to_string(),
                            xi_a,
                            xi_b,
                            xi_w,
                        ));
                    }
                }
            }
        }
        let sum = p.iter().fold(S::zero(), |acc, x| acc + x.clone());
        if !sums_to_one(&sum) {
            return Err(TeamError::UnnormalizedPrior(sum.to_string()));
        }
        Ok(Self { p })
    }

    /// Builds a prior from a mass function over (ξ_A, ξ_B, ξ_W).
    pub fn from_fn(mut mass: impl FnMut(u8, u8, u8) -> S) -> Result<Self, TeamError> {
        let p = std::array::from_fn(|idx| {
            let idx = idx as u8;
            mass(idx >> 2 & 1, idx >> 1 & 1, idx & 1)
        });
        Self::new(p)
    }

    /// Mass of the outcome (ξ_A, ξ_B, ξ_W).
    pub fn mass(&self, xi_a: u8, xi_b: u8, xi_w: u8) -> &S {
        &self.p[Self::index(xi_a, xi_b, xi_w)]
    }

    pub fn entries(&self) -> &[S; 8] {
        &self.p
    }

    /// Maps every mass through `f`. The image must still be a valid prior.
    pub fn map_scalar<T: Scalar>(&self, mut f: impl FnMut(&S) -> T) -> Result<JointPrior<T>, TeamError> {
        JointPrior::new(std::array::from_fn(|i| f(&self.p[i])))
    }
}

/// Display names of the two actions of each agent, carried through reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionLabels {
    pub agent_a: [String; 2],
    pub agent_b: [String; 2],
}

impl Default for ActionLabels {
    fn default() -> Self {
        Self {
            agent_a: ["uA0".into(), "uA1".into()],
            agent_b: ["uB0".into(), "uB1".into()],
        }
    }
}

impl ActionLabels {
    fn swapped_agents(&self) -> Self {
        Self {
            agent_a: self.agent_b.clone(),
            agent_b: self.agent_a.clone(),
        }
    }

    fn swapped_a(&self) -> Self {
        Self {
            agent_a: [self.agent_a[1].clone(), self.agent_a[0].clone()],
            agent_b: self.agent_b.clone(),
        }
    }

    fn swapped_b(&self) -> Self {
        Self {
            agent_a: self.agent_a.clone(),
            agent_b: [self.agent_b[1].clone(), self.agent_b[0].clone()],
        }
    }

    /// Relabels for a symmetry action: agents swapped, agent A's actions
    /// swapped, or agent B's actions swapped.
    pub(crate) fn relabel(&self, swap_agents: bool, swap_a: bool, swap_b: bool) -> Self {
        let mut labels = self.clone();
        if swap_agents {
            labels = labels.swapped_agents();
        }
        if swap_a {
            labels = labels.swapped_a();
        }
        if swap_b {
            labels = labels.swapped_b();
        }
        labels
    }
}

/// A complete decision problem: cost pair, prior, and world-bit weight χ.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemInstance<S> {
    pair: BinaryCostPair,
    prior: JointPrior<S>,
    chi: S,
    labels: ActionLabels,
}

/// Validates and assembles a problem instance (χ must be nonnegative).
pub fn make_instance<S: Scalar>(
    pair: BinaryCostPair,
    prior: JointPrior<S>,
    chi: S,
) -> Result<ProblemInstance<S>, TeamError> {
    make_instance_with_labels(pair, prior, chi, ActionLabels::default())
}

/// [`make_instance`] with explicit action display names.
pub fn make_instance_with_labels<S: Scalar>(
    pair: BinaryCostPair,
    prior: JointPrior<S>,
    chi: S,
    labels: ActionLabels,
) -> Result<ProblemInstance<S>, TeamError> {
    if chi < S::zero() {
        return Err(TeamError::NegativeChi(chi.to_string()));
    }
    Ok(ProblemInstance {
        pair,
        prior,
        chi,
        labels,
    })
}

/// Optimal action pair per observation pair, indexed by `(ξ_A << 1) | ξ_B`.
pub type CentralizedArgmin = [(u8, u8); 4];

impl<S: Scalar> ProblemInstance<S> {
    pub fn pair(&self) -> &BinaryCostPair {
        &self.pair
    }

    pub fn prior(&self) -> &JointPrior<S> {
        &self.prior
    }

    pub fn chi(&self) -> &S {
        &self.chi
    }

    pub fn labels(&self) -> &ActionLabels {
        &self.labels
    }

    pub(crate) fn with_parts(
        pair: BinaryCostPair,
        prior: JointPrior<S>,
        chi: S,
        labels: ActionLabels,
    ) -> Self {
        Self {
            pair,
            prior,
            chi,
            labels,
        }
    }

    /// Cost ℓ(u_A^i, u_B^j, ξ_W): an entry of M when ξ_W = 0, χ times an
    /// entry of N when ξ_W = 1.
    pub fn cost(&self, i: u8, j: u8, xi_w: u8) -> S {
        if xi_w & 1 == 0 {
            S::from_int(self.pair.m_entry(i, j) as i64)
        } else {
            self.chi.clone() * S::from_int(self.pair.n_entry(i, j) as i64)
        }
    }

    /// Per-observation expected costs W[obs][act] = Σ_{ξ_W} ℙ(ξ) ℓ(u, ξ_W),
    /// with obs = (ξ_A << 1) | ξ_B and act = (u_A << 1) | u_B. Every expected
    /// cost of a policy is a linear functional of this table.
    pub fn w_table(&self) -> [[S; 4]; 4] {
        std::array::from_fn(|obs| {
            let (xi_a, xi_b) = ((obs >> 1) as u8, (obs & 1) as u8);
            std::array::from_fn(|act| {
                let (i, j) = ((act >> 1) as u8, (act & 1) as u8);
                let mut w = S::zero();
                for xi_w in 0..2u8 {
                    w = w + self.prior.mass(xi_a, xi_b, xi_w).clone() * self.cost(i, j, xi_w);
                }
                w
            })
        })
    }

    /// Expected cost of a conditional policy under this instance.
    pub fn expected_cost(&self, policy: &ConditionalPolicy<S>) -> S {
        let w = self.w_table();
        let mut total = S::zero();
        for obs in 0..4usize {
            for act in 0..4usize {
                total = total + w[obs][act].clone() * policy.q[obs][act].clone();
            }
        }
        total
    }

    /// Minimum expected cost over *all* decision rules, i.e. with both
    /// observations available to a single decision maker: Σ_obs min_act
    /// W[obs][act]. Returns the value and, per observation pair, the
    /// lexicographically smallest optimal action pair (u_A, u_B).
    /// Observation pairs with zero prior mass contribute zero cost.
    pub fn centralized_optimum(&self) -> (S, CentralizedArgmin) {
        let w = self.w_table();
        let mut value = S::zero();
        let mut argmin = [(0u8, 0u8); 4];
        for obs in 0..4usize {
            let mut best_act = 0usize;
            for act in 1..4usize {
                if w[obs][act] < w[obs][best_act] {
                    best_act = act;
                }
            }
            value = value + w[obs][best_act].clone();
            argmin[obs] = ((best_act >> 1) as u8, (best_act & 1) as u8);
        }
        (value, argmin)
    }

    /// Converts every scalar through `f`. Fails if the image prior or χ is
    /// invalid (it never is for value-preserving conversions).
    pub fn map_scalar<T: Scalar>(
        &self,
        mut f: impl FnMut(&S) -> T,
    ) -> Result<ProblemInstance<T>, TeamError> {
        let prior = self.prior.map_scalar(&mut f)?;
        make_instance_with_labels(self.pair, prior, f(&self.chi), self.labels.clone())
    }

    /// Double-precision image of this instance.
    pub fn to_f64(&self) -> ProblemInstance<f64> {
        self.map_scalar(|x| x.to_f64())
            .expect("float image of a valid instance is valid")
    }
}

/// A conditional distribution Q(u_A, u_B | ξ_A, ξ_B): the behavioural object
/// every strategy class ultimately produces.
///
/// Entries are indexed by `[obs][act]` with obs = (ξ_A << 1) | ξ_B and
/// act = (u_A << 1) | u_B. Validation requires nonnegative weights and unit
/// row sums — exactly for exact scalars, within `1e-12` for doubles.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalPolicy<S> {
    q: [[S; 4]; 4],
}

impl<S: Scalar> ConditionalPolicy<S> {
    pub const fn obs_index(xi_a: u8, xi_b: u8) -> usize {
        ((xi_a & 1) << 1 | (xi_b & 1)) as usize
    }

    pub const fn act_index(u_a: u8, u_b: u8) -> usize {
        ((u_a & 1) << 1 | (u_b & 1)) as usize
    }

    pub fn new(q: [[S; 4]; 4]) -> Result<Self, TeamError> {
        for obs in 0..4usize {
            let (xi_a, xi_b) = ((obs >> 1) as u8, (obs & 1) as u8);
            for act in 0..4usize {
                if !nonneg_ok(&q[obs][act]) {
                    return Err(TeamError::NegativePolicyWeight(
                        q[obs][act].to_string(),
                        (act >> 1) as u8,
                        (act & 1) as u8,
                        xi_a,
                        xi_b,
                    ));
                }
            }
            let sum = q[obs].iter().fold(S::zero(), |acc, x| acc + x.clone());
            if !sums_to_one(&sum) {
                return Err(TeamError::UnnormalizedPolicy(sum.to_string(), xi_a, xi_b));
            }
        }
        Ok(Self { q })
    }

    /// Builds a policy from a weight function (u_A, u_B, ξ_A, ξ_B) ↦ Q.
    pub fn from_fn(mut weight: impl FnMut(u8, u8, u8, u8) -> S) -> Result<Self, TeamError> {
        let q = std::array::from_fn(|obs| {
            std::array::from_fn(|act| {
                weight(
                    (act >> 1) as u8,
                    (act & 1) as u8,
                    (obs >> 1) as u8,
                    (obs & 1) as u8,
                )
            })
        });
        Self::new(q)
    }

    /// Weight Q(u_A, u_B | ξ_A, ξ_B).
    pub fn prob(&self, u_a: u8, u_b: u8, xi_a: u8, xi_b: u8) -> &S {
        &self.q[Self::obs_index(xi_a, xi_b)][Self::act_index(u_a, u_b)]
    }

    pub fn entries(&self) -> &[[S; 4]; 4] {
        &self.q
    }

    /// Convex combination `t * self + (1 - t) * other` (valid for t ∈ [0, 1]).
    pub fn mix(&self, other: &Self, t: &S) -> Result<Self, TeamError> {
        let one_minus = S::one() - t.clone();
        Self::new(std::array::from_fn(|obs| {
            std::array::from_fn(|act| {
                t.clone() * self.q[obs][act].clone() + one_minus.clone() * other.q[obs][act].clone()
            })
        }))
    }

    pub fn map_scalar<T: Scalar>(
        &self,
        mut f: impl FnMut(&S) -> T,
    ) -> Result<ConditionalPolicy<T>, TeamError> {
        ConditionalPolicy::new(std::array::from_fn(|obs| {
            std::array::from_fn(|act| f(&self.q[obs][act]))
        }))
    }

    pub fn to_f64(&self) -> ConditionalPolicy<f64> {
        self.map_scalar(|x| x.to_f64())
            .expect("float image of a valid policy is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat64;

    fn r(n: i64, d: i64) -> Rat64 {
        Rat64::from_ratio(n, d)
    }

    #[test]
    fn cost_pair_codes_round_trip() {
        for code in 0..=255u8 {
            let pair = BinaryCostPair::from_code(code);
            assert_eq!(pair.code(), code);
            assert_eq!(pair.m_mask(), code & 0xf);
            assert_eq!(pair.n_mask(), code >> 4);
        }
    }

    #[test]
    fn cost_pair_rejects_bad_entries() {
        assert_eq!(
            BinaryCostPair::new([[1, 0], [0, 0]], [[0; 2]; 2]),
            Err(TeamError::BadCostEntry(1))
        );
    }

    #[test]
    fn mask_bit_positions() {
        // bit k flags entry (k / 2, k mod 2)
        let pair = BinaryCostPair::from_masks(0b0010, 0b0100);
        assert_eq!(*pair.m(), [[0, -1], [0, 0]]);
        assert_eq!(*pair.n(), [[0, 0], [-1, 0]]);
    }

    #[test]
    fn prior_validation() {
        let uniform = JointPrior::from_fn(|_, _, _| r(1, 8)).unwrap();
        assert_eq!(*uniform.mass(1, 0, 1), r(1, 8));

        let bad_sum = JointPrior::new([r(1, 8); 7].iter().cloned().chain([r(1, 4)]).collect::<Vec<_>>().try_into().unwrap());
        assert!(matches!(bad_sum, Err(TeamError::UnnormalizedPrior(_))));

        let negative = JointPrior::from_fn(|a, b, w| if (a, b, w) == (0, 0, 0) { r(-1, 8) } else { r(9, 56) });
        assert!(matches!(negative, Err(TeamError::NegativePriorMass(..))));
    }

    #[test]
    fn float_prior_tolerance() {
        // A tiny normalization error is accepted in float mode...
        let p = JointPrior::<f64>::from_fn(|_, _, _| 0.125 + 1e-14);
        assert!(p.is_ok());
        // ...a visible one is not.
        let p = JointPrior::<f64>::from_fn(|_, _, _| 0.125 + 1e-10);
        assert!(p.is_err());
    }

    #[test]
    fn chi_must_be_nonnegative() {
        let prior = JointPrior::from_fn(|_, _, _| r(1, 8)).unwrap();
        let res = make_instance(BinaryCostPair::from_code(0x69), prior, r(-1, 2));
        assert!(matches!(res, Err(TeamError::NegativeChi(_))));
    }

    #[test]
    fn cost_reads_matrices_and_chi() {
        // M has a -1 only at (0,0); N only at (0,1) and (1,0).
        let pair = BinaryCostPair::from_masks(0b0001, 0b0110);
        let prior = JointPrior::from_fn(|_, _, _| r(1, 8)).unwrap();
        let inst = make_instance(pair, prior, r(2, 1)).unwrap();
        assert_eq!(inst.cost(0, 0, 0), r(-1, 1));
        assert_eq!(inst.cost(1, 1, 0), r(0, 1));
        assert_eq!(inst.cost(0, 1, 1), r(-2, 1));
        assert_eq!(inst.cost(0, 0, 1), r(0, 1));
    }

    #[test]
    fn expected_cost_of_constant_policy() {
        // Always play (u_A^0, u_B^0) on the pair with M = -1 at (0,0) only:
        // cost is -P(xi_W = 0).
        let pair = BinaryCostPair::from_masks(0b0001, 0);
        let prior = JointPrior::from_fn(|_, _, w| if w == 0 { r(3, 16) } else { r(1, 16) }).unwrap();
        let inst = make_instance(pair, prior, r(1, 1)).unwrap();
        let constant = ConditionalPolicy::from_fn(|ua, ub, _, _| {
            if ua == 0 && ub == 0 {
                r(1, 1)
            } else {
                r(0, 1)
            }
        })
        .unwrap();
        assert_eq!(inst.expected_cost(&constant), r(-3, 4));
    }

    /// Exhaustive reference check of the centralized optimum: enumerate all
    /// 4^4 joint decision rules (an action pair per observation pair) and
    /// compare the minimum and the tie-break.
    #[test]
    fn centralized_optimum_matches_exhaustive_search() {
        let prior = JointPrior::from_fn(|a, b, w| match (a, b, w) {
            (0, 0, 1) | (0, 1, 1) | (1, 0, 1) => r(1, 5),
            (1, 1, 0) => r(2, 5),
            _ => r(0, 1),
        })
        .unwrap();
        for code in [0x69u8, 0x61, 0x00, 0xff, 0x2d] {
            let inst = make_instance(BinaryCostPair::from_code(code), prior.clone(), r(2, 1)).unwrap();
            let w = inst.w_table();
            let mut best = (r(1, 1) * r(100, 1), [0usize; 4]);
            for rule in 0..256usize {
                let acts = [rule & 3, rule >> 2 & 3, rule >> 4 & 3, rule >> 6 & 3];
                let val = (0..4).fold(r(0, 1), |acc, obs| acc + w[obs][acts[obs]].clone());
                // strictly-less keeps the lexicographically smallest rule,
                // because `rule` enumerates act indices in lex order
                // (obs 0 varying slowest in the comparison below).
                let key = (val.clone(), acts);
                let best_key = (best.0.clone(), best.1);
                if key < best_key {
                    best = (val, acts);
                }
            }
            let (value, argmin) = inst.centralized_optimum();
            assert_eq!(value, best.0, "value mismatch at code {code}");
            for obs in 0..4 {
                let (i, j) = argmin[obs];
                assert_eq!(
                    (i as usize) << 1 | j as usize,
                    best.1[obs],
                    "argmin mismatch at code {code}, obs {obs}"
                );
            }
        }
    }

    #[test]
    fn zero_mass_observations_contribute_zero() {
        // All mass on (0, 0, 0): other observation rows of W are zero, so
        // the centralized optimum equals the best cost at (0, 0) alone.
        let prior = JointPrior::from_fn(|a, b, w| {
            if (a, b, w) == (0, 0, 0) {
                r(1, 1)
            } else {
                r(0, 1)
            }
        })
        .unwrap();
        let inst = make_instance(BinaryCostPair::from_code(0x01), prior, r(7, 3)).unwrap();
        let (value, argmin) = inst.centralized_optimum();
        assert_eq!(value, r(-1, 1));
        assert_eq!(argmin[0], (0, 0));
        // Zero-mass rows tie at zero; the tie-break picks (0, 0).
        assert_eq!(argmin[1], (0, 0));
        assert_eq!(argmin[2], (0, 0));
        assert_eq!(argmin[3], (0, 0));
    }

    #[test]
    fn policy_validation_and_mixing() {
        let uniform = ConditionalPolicy::from_fn(|_, _, _, _| r(1, 4)).unwrap();
        let constant = ConditionalPolicy::from_fn(|ua, ub, _, _| {
            if (ua, ub) == (1, 1) {
                r(1, 1)
            } else {
                r(0, 1)
            }
        })
        .unwrap();
        let mixed = uniform.mix(&constant, &r(1, 2)).unwrap();
        assert_eq!(*mixed.prob(1, 1, 0, 1), r(5, 8));
        assert_eq!(*mixed.prob(0, 0, 1, 1), r(1, 8));

        let bad = ConditionalPolicy::from_fn(|ua, _, _, _| if ua == 0 { r(1, 2) } else { r(1, 4) });
        assert!(matches!(bad, Err(TeamError::UnnormalizedPolicy(..))));
    }

    #[test]
    fn expected_cost_is_linear_in_the_policy() {
        let prior = JointPrior::from_fn(|a, b, w| match (a, b, w) {
            (0, 0, 0) => r(1, 2),
            (1, 1, 1) => r(1, 3),
            (0, 1, 0) => r(1, 6),
            _ => r(0, 1),
        })
        .unwrap();
        let inst = make_instance(BinaryCostPair::from_code(0xb7), prior, r(5, 7)).unwrap();
        let p = ConditionalPolicy::from_fn(|_, _, _, _| r(1, 4)).unwrap();
        let q = ConditionalPolicy::from_fn(|ua, ub, xa, xb| {
            if (ua ^ xa, ub ^ xb) == (0, 0) {
                r(1, 1)
            } else {
                r(0, 1)
            }
        })
        .unwrap();
        let t = r(2, 7);
        let mixed = p.mix(&q, &t).unwrap();
        assert_eq!(
            inst.expected_cost(&mixed),
            t.clone() * inst.expected_cost(&p) + (r(1, 1) - t) * inst.expected_cost(&q)
        );
    }
}
