//! The superstructure of all 256 cost-matrix pairs and its symmetry group.
//!
//! Four involutive symmetries act on pairs (M, N) — transposition, row swap,
//! column swap, and the exchange of M with N — and generate a group whose
//! orbits partition the 256 classes. Each symmetry corresponds to a
//! relabelling of an actual decision problem (agents, actions, or the world
//! bit), so optimal values over every strategy class are invariant along an
//! orbit (up to the 1/χ scaling of the exchange).
//!
//! Classes are organised in cells by the signature (m, n) = (#−1 in M,
//! #−1 in N) and by whether the −1 patterns of M and N overlap. The central
//! classification result: quantum strategies beat no-signalling boxes *only*
//! on the orbit of the fully-symmetric pair [`cac_form`] (2 classes) and the
//! orbit of its half-cost variant [`half_cac_form`] (8 classes); everywhere
//! else the no-signalling optimum already equals the local one.

use crate::scalar::Scalar;
use crate::team::{BinaryCostPair, ConditionalPolicy, JointPrior, ProblemInstance, TeamError};
use num_integer::binomial;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// The involutive symmetries of the superstructure (plus the identity).
///
/// * `Transpose` — transpose both matrices: swaps the two agents.
/// * `RowSwap` — swap the rows of both matrices: relabels agent A's actions.
/// * `ColSwap` — swap the columns of both matrices: relabels agent B's actions.
/// * `Exchange` — swap M and N: flips the world bit and inverts χ.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum GroupAction {
    Identity,
    Transpose,
    RowSwap,
    ColSwap,
    Exchange,
}

impl GroupAction {
    pub const ALL: [GroupAction; 5] = [
        GroupAction::Identity,
        GroupAction::Transpose,
        GroupAction::RowSwap,
        GroupAction::ColSwap,
        GroupAction::Exchange,
    ];

    /// The non-identity generators of the symmetry group.
    pub const GENERATORS: [GroupAction; 4] = [
        GroupAction::Transpose,
        GroupAction::RowSwap,
        GroupAction::ColSwap,
        GroupAction::Exchange,
    ];
}

impl fmt::Display for GroupAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GroupAction::Identity => "I",
            GroupAction::Transpose => "T",
            GroupAction::RowSwap => "R",
            GroupAction::ColSwap => "R'",
            GroupAction::Exchange => "E",
        };
        f.write_str(s)
    }
}

fn transpose2(m: &[[i8; 2]; 2]) -> [[i8; 2]; 2] {
    [[m[0][0], m[1][0]], [m[0][1], m[1][1]]]
}

fn swap_rows(m: &[[i8; 2]; 2]) -> [[i8; 2]; 2] {
    [m[1], m[0]]
}

fn swap_cols(m: &[[i8; 2]; 2]) -> [[i8; 2]; 2] {
    [[m[0][1], m[0][0]], [m[1][1], m[1][0]]]
}

/// Applies a symmetry to a cost pair.
pub fn apply_action(pair: BinaryCostPair, action: GroupAction) -> BinaryCostPair {
    let (m, n) = (pair.m(), pair.n());
    let (m2, n2) = match action {
        GroupAction::Identity => (*m, *n),
        GroupAction::Transpose => (transpose2(m), transpose2(n)),
        GroupAction::RowSwap => (swap_rows(m), swap_rows(n)),
        GroupAction::ColSwap => (swap_cols(m), swap_cols(n)),
        GroupAction::Exchange => (*n, *m),
    };
    BinaryCostPair::new(m2, n2).expect("symmetries preserve {0,-1} entries")
}

/// All 256 cost pairs, in packed-code order 0..=255 (M mask in the low
/// nibble, N mask in the high nibble, each little-endian over entries).
pub fn enumerate_classes() -> Vec<BinaryCostPair> {
    (0u16..=255).map(|c| BinaryCostPair::from_code(c as u8)).collect()
}

/// Signature (m, n): the number of −1 entries in M and in N.
pub fn mn_signature(pair: BinaryCostPair) -> (u8, u8) {
    (pair.m_mask().count_ones() as u8, pair.n_mask().count_ones() as u8)
}

/// Position of an entry after the both-labels flip (i, j) ↦ (1−i, 1−j),
/// as a 4-bit mask permutation: bit k ↦ bit 3−k.
fn reverse4(mask: u8) -> u8 {
    ((mask & 1) << 3) | ((mask & 2) << 1) | ((mask & 4) >> 1) | ((mask & 8) >> 3)
}

/// Relation between the −1 patterns of M and N within a cell.
///
/// * `Overlapping` — some entry is −1 in both M and N.
/// * `Achiral` — disjoint patterns, but some −1 of M faces a −1 of N at the
///   diagonally-opposite position (i, j) vs (1−i, 1−j).
/// * `Chiral` — disjoint patterns with no diagonally-opposite facing pair.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cell {
    Overlapping,
    Achiral,
    Chiral,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Cell::Overlapping => "overlapping",
            Cell::Achiral => "achiral",
            Cell::Chiral => "chiral",
        };
        f.write_str(s)
    }
}

/// Classifies the overlap relation of a pair's −1 patterns.
pub fn classify_cell(pair: BinaryCostPair) -> Cell {
    let (m, n) = (pair.m_mask(), pair.n_mask());
    if m & n != 0 {
        Cell::Overlapping
    } else if m & reverse4(n) != 0 {
        Cell::Achiral
    } else {
        Cell::Chiral
    }
}

/// Orbit of a pair under the symmetry group, sorted by code.
pub fn orbit(pair: BinaryCostPair) -> Vec<BinaryCostPair> {
    orbit_paths(pair).into_iter().map(|(p, _)| p).collect()
}

/// Orbit of a pair together with, for each member, a shortest sequence of
/// generator actions mapping `pair` to it (breadth-first; members sorted by
/// code). The empty sequence maps `pair` to itself.
pub fn orbit_paths(pair: BinaryCostPair) -> Vec<(BinaryCostPair, Vec<GroupAction>)> {
    let mut paths: BTreeMap<u8, Vec<GroupAction>> = BTreeMap::new();
    paths.insert(pair.code(), Vec::new());
    let mut frontier = vec![pair];
    while let Some(current) = frontier.pop() {
        let path = paths[&current.code()].clone();
        for action in GroupAction::GENERATORS {
            let next = apply_action(current, action);
            paths.entry(next.code()).or_insert_with(|| {
                let mut p = path.clone();
                p.push(action);
                frontier.push(next);
                p
            });
        }
    }
    paths
        .into_iter()
        .map(|(code, path)| (BinaryCostPair::from_code(code), path))
        .collect()
}

/// The fully-symmetric advantage-prone pair: M = [[−1,0],[0,−1]],
/// N = [[0,−1],[−1,0]].
pub fn cac_form() -> BinaryCostPair {
    BinaryCostPair::from_masks(0b1001, 0b0110)
}

/// The half-cost advantage-prone pair: M = [[−1,0],[0,0]],
/// N = [[0,−1],[−1,0]].
pub fn half_cac_form() -> BinaryCostPair {
    BinaryCostPair::from_masks(0b0001, 0b0110)
}

/// Whether quantum strategies can strictly beat no-signalling boxes on some
/// instance of this class: true exactly on the orbits of [`cac_form`] and
/// [`half_cac_form`].
pub fn theorem_predicate(pair: BinaryCostPair) -> bool {
    let targets = [cac_form().code(), half_cac_form().code()];
    orbit(pair).iter().any(|p| targets.contains(&p.code()))
}

/// How a class escapes quantum advantage — or doesn't.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Verdict {
    /// M and N share a −1 (or one of them is all zero): a constant action
    /// pair is pointwise optimal, so even the centralized optimum is local.
    #[serde(rename = "no-advantage:overlap")]
    NoAdvantageOverlap,
    /// Every no-signalling extreme point is beaten by one of two
    /// deterministic policies (half-sum vertex bound).
    #[serde(rename = "no-advantage:vertex-bound")]
    NoAdvantageVertexBound,
    /// The cost decomposes through a boolean reparametrization that makes
    /// the no-signalling optimum achievable locally.
    #[serde(rename = "no-advantage:decomposition")]
    NoAdvantageDecomposition,
    /// Orbit of the fully-symmetric pair: quantum advantage exists.
    #[serde(rename = "advantage:CAC-orbit")]
    AdvantageCacOrbit,
    /// Orbit of the half-cost pair: quantum advantage exists.
    #[serde(rename = "advantage:halfCAC-orbit")]
    AdvantageHalfCacOrbit,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::NoAdvantageOverlap => "no-advantage:overlap",
            Verdict::NoAdvantageVertexBound => "no-advantage:vertex-bound",
            Verdict::NoAdvantageDecomposition => "no-advantage:decomposition",
            Verdict::AdvantageCacOrbit => "advantage:CAC-orbit",
            Verdict::AdvantageHalfCacOrbit => "advantage:halfCAC-orbit",
        };
        f.write_str(s)
    }
}

/// Full classification of one of the 256 classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub pair: BinaryCostPair,
    /// (#−1 in M, #−1 in N).
    pub mn: (u8, u8),
    pub cell: Cell,
    /// Smallest-code member of the pair's orbit.
    pub orbit_representative: BinaryCostPair,
    pub verdict: Verdict,
}

/// Classifies a cost pair: signature, cell, orbit representative, and the
/// verdict explaining why quantum advantage is or is not possible.
pub fn classify(pair: BinaryCostPair) -> ClassificationRecord {
    let mn = mn_signature(pair);
    let cell = classify_cell(pair);
    let members = orbit(pair);
    let orbit_representative = members[0];
    let codes: Vec<u8> = members.iter().map(|p| p.code()).collect();

    let verdict = if codes.contains(&cac_form().code()) {
        Verdict::AdvantageCacOrbit
    } else if codes.contains(&half_cac_form().code()) {
        Verdict::AdvantageHalfCacOrbit
    } else if cell == Cell::Overlapping || mn.0 == 0 || mn.1 == 0 {
        // A shared −1 gives a pointwise-dominant constant action pair; if M
        // (or N) is all zero the world bit ξ_W = 0 (resp. 1) is costless and
        // the same argument applies to the other matrix alone.
        Verdict::NoAdvantageOverlap
    } else if cell == Cell::Achiral && (mn == (1, 3) || mn == (3, 1)) {
        Verdict::NoAdvantageDecomposition
    } else {
        Verdict::NoAdvantageVertexBound
    };

    ClassificationRecord {
        pair,
        mn,
        cell,
        orbit_representative,
        verdict,
    }
}

/// Number of classes with signature (m, n): C(4, m) · C(4, n).
pub fn class_count(m: u8, n: u8) -> u64 {
    binomial(4u64, m as u64) * binomial(4u64, n as u64)
}

/// Number of classes with signature (m, n) whose −1 patterns overlap:
/// C(4, m) · Σ_{k ≥ 1} C(m, k) · C(4 − m, n − k).
pub fn overlapping_class_count(m: u8, n: u8) -> u64 {
    let (m, n) = (m as u64, n as u64);
    let mut total = 0;
    for k in 1..=m.min(n) {
        if n - k <= 4 - m {
            total += binomial(m, k) * binomial(4 - m, n - k);
        }
    }
    binomial(4, m) * total
}

/// Number of classes ruled out by counting alone: every class with
/// m + n ≥ 5 overlaps by pigeonhole, and every class with m = 0 or n = 0
/// has a costless world-bit value. Both sets get the overlap verdict.
pub fn counting_eliminated_total() -> u64 {
    let mut total = 0;
    for m in 0..=4u8 {
        for n in 0..=4u8 {
            if m as u16 + n as u16 >= 5 || m == 0 || n == 0 {
                total += class_count(m, n);
            }
        }
    }
    total
}

/// Transports a problem instance along a symmetry so that optimal values are
/// preserved (scaled by 1/χ for the exchange):
///
/// * `Transpose` also swaps ξ_A with ξ_B in the prior and the agents'
///   labels;
/// * `RowSwap` / `ColSwap` relabel one agent's actions (prior unchanged);
/// * `Exchange` swaps the ξ_W slices of the prior and replaces χ by 1/χ
///   (fails at χ = 0).
pub fn transport_instance<S: Scalar>(
    instance: &ProblemInstance<S>,
    action: GroupAction,
) -> Result<ProblemInstance<S>, TeamError> {
    let pair = apply_action(*instance.pair(), action);
    let prior = instance.prior();
    let (prior, chi, labels) = match action {
        GroupAction::Identity => (
            prior.clone(),
            instance.chi().clone(),
            instance.labels().clone(),
        ),
        GroupAction::Transpose => (
            JointPrior::from_fn(|a, b, w| prior.mass(b, a, w).clone())?,
            instance.chi().clone(),
            instance.labels().relabel(true, false, false),
        ),
        GroupAction::RowSwap => (
            prior.clone(),
            instance.chi().clone(),
            instance.labels().relabel(false, true, false),
        ),
        GroupAction::ColSwap => (
            prior.clone(),
            instance.chi().clone(),
            instance.labels().relabel(false, false, true),
        ),
        GroupAction::Exchange => {
            if instance.chi().is_zero() {
                return Err(TeamError::ExchangeAtZeroChi);
            }
            (
                JointPrior::from_fn(|a, b, w| prior.mass(a, b, 1 - w).clone())?,
                S::one() / instance.chi().clone(),
                instance.labels().clone(),
            )
        }
    };
    Ok(ProblemInstance::with_parts(pair, prior, chi, labels))
}

/// Transports a conditional policy along with [`transport_instance`]: the
/// returned policy achieves on the transported instance the same expected
/// cost the input achieves on the original (scaled by 1/χ for the exchange).
pub fn transport_policy<S: Scalar>(
    policy: &ConditionalPolicy<S>,
    action: GroupAction,
) -> ConditionalPolicy<S> {
    let build = |f: &dyn Fn(u8, u8, u8, u8) -> S| {
        ConditionalPolicy::from_fn(|ua, ub, xa, xb| f(ua, ub, xa, xb))
            .expect("permuting a valid policy keeps it valid")
    };
    match action {
        GroupAction::Identity | GroupAction::Exchange => policy.clone(),
        GroupAction::Transpose => build(&|ua, ub, xa, xb| policy.prob(ub, ua, xb, xa).clone()),
        GroupAction::RowSwap => build(&|ua, ub, xa, xb| policy.prob(1 - ua, ub, xa, xb).clone()),
        GroupAction::ColSwap => build(&|ua, ub, xa, xb| policy.prob(ua, 1 - ub, xa, xb).clone()),
    }
}
