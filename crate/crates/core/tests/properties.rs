//! Randomized invariants: cost linearity, the optimum hierarchy, orbit
//! structure of the symmetry group, value-preserving transport, and the
//! polytope membership facts the solvers rely on.

use proptest::prelude::*;

use qteam_core::polytopes::{
    deterministic_vertex, is_no_signalling, local_membership, local_optimum, ns_optimum,
    ns_vertex, DeterministicVertexLabel, NoSignallingVertexLabel,
};
use qteam_core::scalar::{Rat64, Scalar};
use qteam_core::superstructure::{
    apply_action, classify, classify_cell, orbit, transport_instance, transport_policy,
    GroupAction,
};
use qteam_core::team::{make_instance, BinaryCostPair, ConditionalPolicy, JointPrior};

type Instance = qteam_core::team::ProblemInstance<Rat64>;

/// All 24 extreme points of the no-signalling polytope, deterministic first.
fn all_vertices() -> Vec<ConditionalPolicy<Rat64>> {
    let mut vs: Vec<ConditionalPolicy<Rat64>> = DeterministicVertexLabel::all()
        .into_iter()
        .map(deterministic_vertex)
        .collect();
    vs.extend(NoSignallingVertexLabel::all().into_iter().map(ns_vertex));
    vs
}

/// Convex combination with the given nonnegative integer weights.
fn mix(weights: &[i64], policies: &[ConditionalPolicy<Rat64>]) -> ConditionalPolicy<Rat64> {
    let total: i64 = weights.iter().sum();
    assert!(total > 0);
    ConditionalPolicy::from_fn(|ua, ub, xa, xb| {
        weights
            .iter()
            .zip(policies)
            .fold(Rat64::from_int(0), |acc, (w, p)| {
                acc + Rat64::from_ratio(*w, total) * *p.prob(ua, ub, xa, xb)
            })
    })
    .expect("a convex mix of valid policies is valid")
}

prop_compose! {
    fn arb_prior()(weights in prop::array::uniform8(0..=12i64)
        .prop_filter("some mass", |w| w.iter().sum::<i64>() > 0)) -> JointPrior<Rat64> {
        let total: i64 = weights.iter().sum();
        JointPrior::from_fn(|a, b, w| {
            Rat64::from_ratio(weights[((a << 2) | (b << 1) | w) as usize], total)
        })
        .expect("weights normalize to a distribution")
    }
}

prop_compose! {
    fn arb_chi()(num in 1..=16i64, den in 1..=8i64) -> Rat64 {
        Rat64::from_ratio(num, den)
    }
}

prop_compose! {
    fn arb_instance()(code in 0..=255u8, prior in arb_prior(), chi in arb_chi()) -> Instance {
        make_instance(BinaryCostPair::from_code(code), prior, chi)
            .expect("generated parts are valid")
    }
}

prop_compose! {
    fn arb_policy()(weights in prop::collection::vec(0..=6i64, 24)
        .prop_filter("some mass", |w| w.iter().sum::<i64>() > 0)) -> ConditionalPolicy<Rat64> {
        mix(&weights, &all_vertices())
    }
}

proptest! {
    #[test]
    fn expected_cost_is_linear(
        instance in arb_instance(),
        q1 in arb_policy(),
        q2 in arb_policy(),
        t_num in 0..=8i64,
    ) {
        let t = Rat64::from_ratio(t_num, 8);
        let mixed = q1.mix(&q2, &t).expect("convex combination");
        let lhs = instance.expected_cost(&mixed);
        let rhs = t * instance.expected_cost(&q1)
            + (Rat64::from_int(1) - t) * instance.expected_cost(&q2);
        prop_assert_eq!(lhs, rhs);
    }

    /// Entries of the cost pair weighted by zero prior mass cannot matter:
    /// with no mass on ξ_W = 1 both N and χ are irrelevant, and with no mass
    /// on ξ_W = 0 the matrix M is.
    #[test]
    fn zero_mass_slice_leaves_cost_unchanged(
        weights in prop::array::uniform4(0..=9i64).prop_filter("some mass", |w| w.iter().sum::<i64>() > 0),
        m_masks in (0..=15u8, 0..=15u8),
        n_masks in (0..=15u8, 0..=15u8),
        chis in (arb_chi(), arb_chi()),
        policy in arb_policy(),
    ) {
        let total: i64 = weights.iter().sum();
        let concentrated = |world: u8| {
            JointPrior::from_fn(|a, b, w| {
                if w == world {
                    Rat64::from_ratio(weights[((a << 1) | b) as usize], total)
                } else {
                    Rat64::from_int(0)
                }
            })
            .expect("weights normalize to a distribution")
        };

        let ground = concentrated(0);
        let with = |m: u8, n: u8, chi: Rat64, prior: &JointPrior<Rat64>| {
            make_instance(BinaryCostPair::from_masks(m, n), prior.clone(), chi)
                .expect("valid instance")
                .expected_cost(&policy)
        };
        prop_assert_eq!(
            with(m_masks.0, n_masks.0, chis.0, &ground),
            with(m_masks.0, n_masks.1, chis.1, &ground)
        );

        let excited = concentrated(1);
        prop_assert_eq!(
            with(m_masks.0, n_masks.0, chis.0, &excited),
            with(m_masks.1, n_masks.0, chis.0, &excited)
        );
    }

    #[test]
    fn centralized_optimum_floors_every_policy(
        instance in arb_instance(),
        policy in arb_policy(),
    ) {
        prop_assert!(instance.centralized_optimum().0 <= instance.expected_cost(&policy));
    }

    #[test]
    fn optimum_hierarchy_is_ordered(instance in arb_instance()) {
        let local = local_optimum(&instance).0;
        let ns = ns_optimum(&instance).0;
        let centralized = instance.centralized_optimum().0;
        prop_assert!(local >= ns);
        prop_assert!(ns >= centralized);
    }

    #[test]
    fn orbits_are_equal_or_disjoint(first in 0..=255u8, second in 0..=255u8) {
        let codes = |code: u8| -> std::collections::BTreeSet<u8> {
            orbit(BinaryCostPair::from_code(code))
                .into_iter()
                .map(|p| p.code())
                .collect()
        };
        let (a, b) = (codes(first), codes(second));
        prop_assert!(a.contains(&first), "an orbit contains its base point");
        if a.intersection(&b).next().is_some() {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn cell_and_verdict_are_orbit_invariant(code in 0..=255u8) {
        let pair = BinaryCostPair::from_code(code);
        let base = classify(pair);
        for member in orbit(pair) {
            prop_assert_eq!(classify_cell(member), base.cell);
            let record = classify(member);
            prop_assert_eq!(record.verdict, base.verdict);
            prop_assert_eq!(record.orbit_representative, base.orbit_representative);
        }
    }

    #[test]
    fn group_actions_are_involutions(code in 0..=255u8) {
        let pair = BinaryCostPair::from_code(code);
        for action in GroupAction::ALL {
            prop_assert_eq!(apply_action(apply_action(pair, action), action), pair);
        }
    }

    /// Transporting instance and policy together preserves the expected
    /// cost — scaled by 1/χ for the exchange, which keeps the policy as is.
    #[test]
    fn transported_policies_achieve_transported_costs(
        instance in arb_instance(),
        policy in arb_policy(),
    ) {
        let base = instance.expected_cost(&policy);
        for action in GroupAction::ALL {
            let moved = transport_instance(&instance, action).expect("χ > 0");
            let moved_policy = transport_policy(&policy, action);
            let expected = match action {
                GroupAction::Exchange => base / *instance.chi(),
                _ => base,
            };
            prop_assert_eq!(moved.expected_cost(&moved_policy), expected);
        }
    }

    #[test]
    fn instance_transport_is_an_involution(
        instance in arb_instance(),
        policy in arb_policy(),
    ) {
        for action in GroupAction::ALL {
            let twice = transport_instance(
                &transport_instance(&instance, action).expect("χ > 0"),
                action,
            )
            .expect("transported χ stays positive");
            prop_assert_eq!(twice.pair().code(), instance.pair().code());
            prop_assert_eq!(twice.chi(), instance.chi());
            prop_assert_eq!(twice.prior().entries(), instance.prior().entries());
            prop_assert_eq!(twice.expected_cost(&policy), instance.expected_cost(&policy));
        }
    }
}

// ---------------------------------------------------------------------------
// Finite vertex facts the randomized properties build on.
// ---------------------------------------------------------------------------

#[test]
fn deterministic_vertices_are_local_and_no_signalling() {
    let zero = Rat64::from_int(0);
    for label in DeterministicVertexLabel::all() {
        let v: ConditionalPolicy<Rat64> = deterministic_vertex(label);
        assert!(is_no_signalling(&v, &zero));
        let membership = local_membership(&v, &zero);
        assert!(membership.is_member, "deterministic vertex {label} must be local");
        assert_eq!(membership.distance, zero);
    }
}

#[test]
fn ns_vertices_do_not_signal_but_are_not_local() {
    let zero = Rat64::from_int(0);
    for label in NoSignallingVertexLabel::all() {
        let v: ConditionalPolicy<Rat64> = ns_vertex(label);
        assert!(is_no_signalling(&v, &zero));
        let membership = local_membership(&v, &zero);
        assert!(!membership.is_member, "vertex {label} must lie outside the local polytope");
        assert!(membership.distance > zero);
    }
}

#[test]
fn uniform_policy_is_local() {
    let uniform = ConditionalPolicy::from_fn(|_, _, _, _| Rat64::from_ratio(1, 4))
        .expect("uniform weights are a policy");
    assert!(local_membership(&uniform, &Rat64::from_int(0)).is_member);
}

#[test]
fn embedded_deterministic_strategies_reproduce_their_vertices() {
    for label in DeterministicVertexLabel::all() {
        let strategy = qteam_core::quantum::embed_deterministic(label);
        let q = qteam_core::quantum::occupation_measure(&strategy)
            .expect("embedded strategies are projective");
        assert!(is_no_signalling(&q, &1e-9));
        let vertex: ConditionalPolicy<f64> = deterministic_vertex(label);
        for ua in 0..2u8 {
            for ub in 0..2u8 {
                for xa in 0..2u8 {
                    for xb in 0..2u8 {
                        let got = *q.prob(ua, ub, xa, xb);
                        let want = *vertex.prob(ua, ub, xa, xb);
                        assert!(
                            (got - want).abs() < 1e-12,
                            "label {label}: Q({ua},{ub}|{xa},{xb}) = {got}, want {want}"
                        );
                    }
                }
            }
        }
    }
}
