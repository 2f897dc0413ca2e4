use intercomm::audit::ambiguity_bounds_hold;
use intercomm::bits::{push_uint, read_uint};
use intercomm::fixtures::random_support;
use intercomm::lifetime::{energy_gap, energy_profile, lifetime_of_schedule, optimize_lifetime, EnergyParams};
use intercomm::netsim::{simulate_instance, NetworkParams, Protocol};
use intercomm::protocol::{decode_transcript, run_transcript, worst_case_budget, Transcript};
use intercomm::scheduling::{exchange_path, mcn, schedule_value, Aggregate, UplinkCost};
use intercomm::{ConditioningContext, JointSupport, Problem, ProtocolKind, Schedule};
use num::{BigRational, One};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn support(seed: u64, informants: usize, n: u32) -> JointSupport {
    random_support(&mut ChaCha8Rng::seed_from_u64(seed), informants, n)
}

fn shuffled(seed: u64, n: usize) -> Schedule {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Schedule::new(order).unwrap()
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn energy(path_loss: &[i64], rx: i64, reserves: &[i64], bs: i64) -> EnergyParams {
    EnergyParams::new(
        path_loss.iter().map(|&d| q(d)).collect(),
        q(rx),
        reserves.iter().map(|&e| q(e)).collect(),
        q(bs),
    )
    .unwrap()
}

/// Subsets of `0..n` without `target`, as index lists.
fn subsets_without(n: usize, target: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m & (1 << target) == 0)
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn joint_ambiguity_is_inside_every_single_conditioning(seed: u64, informants in 2usize..=5, n in 2u32..=6) {
        let js = support(seed, informants, n);
        for target in 0..informants {
            for given in subsets_without(informants, target) {
                for ctx in js.enumerate_contexts(&given).unwrap() {
                    let joint = js.ambiguity_set(&ctx, target).unwrap();
                    for (&j, &v) in ctx.indices().iter().zip(ctx.values()) {
                        let single = js.ambiguity_set(&ConditioningContext::new([(j, v)]).unwrap(), target).unwrap();
                        prop_assert!(joint.values().iter().all(|&x| single.contains(x)));
                        prop_assert!(joint.len() <= single.len());
                    }
                }
            }
        }
    }

    #[test]
    fn conditioning_on_more_never_raises_ambiguity(seed: u64, informants in 2usize..=5, n in 2u32..=6) {
        let js = support(seed, informants, n);
        for target in 0..informants {
            let subsets = subsets_without(informants, target);
            for a in &subsets {
                prop_assert!(ambiguity_bounds_hold(&js, a, target));
                let mu_a = js.max_conditional_ambiguity(a, target).unwrap();
                prop_assert!(mu_a <= n);
                for b in subsets.iter().filter(|b| a.iter().all(|i| b.contains(i))) {
                    prop_assert!(js.max_conditional_ambiguity(b, target).unwrap() <= mu_a);
                }
            }
        }
    }

    #[test]
    fn context_enumeration_is_repeatable(seed: u64, informants in 2usize..=5, n in 2u32..=6, mask in 0u32..32) {
        let js = support(seed, informants, n);
        let given: Vec<usize> = (0..informants).filter(|i| mask & (1 << i) != 0).collect();
        prop_assert_eq!(js.enumerate_contexts(&given).unwrap(), js.enumerate_contexts(&given).unwrap());
    }

    #[test]
    fn support_text_round_trips(seed: u64, informants in 1usize..=5, n in 2u32..=8) {
        let js = support(seed, informants, n);
        prop_assert_eq!(JointSupport::parse(&js.to_text()).unwrap(), js);
    }

    #[test]
    fn packed_integers_round_trip(values in prop::collection::vec((0u64..1 << 20, 0u32..=20), 0..12)) {
        let mut out = Vec::new();
        for &(v, w) in &values {
            push_uint(&mut out, v & ((1u64 << w) - 1), w);
        }
        let mut pos = 0;
        for &(v, w) in &values {
            prop_assert_eq!(read_uint(&out, &mut pos, w), Some(v & ((1u64 << w) - 1)));
        }
        prop_assert_eq!(pos, out.len());
    }

    #[test]
    fn every_truth_decodes_within_budget(seed: u64, order_seed: u64, informants in 1usize..=4, n in 2u32..=6) {
        let js = support(seed, informants, n);
        let schedule = shuffled(order_seed, informants);
        for kind in [ProtocolKind::OneMessage, ProtocolKind::TwoMessage] {
            let budget = worst_case_budget(&js, &schedule, kind).unwrap();
            for truth in js.tuples() {
                let t = run_transcript(&js, &schedule, kind, truth).unwrap();
                prop_assert_eq!(decode_transcript(&js, &schedule, kind, &t).unwrap(), truth.to_vec());
                prop_assert_eq!(Transcript::parse_dump(&t.dump()).unwrap(), t.clone());
                let realized = t.bit_counts(informants);
                for i in 0..informants {
                    prop_assert!(realized.uplink[i] <= budget.uplink[i]);
                }
            }
        }
    }

    #[test]
    fn two_message_downlink_dominates_uplink(seed: u64, order_seed: u64, informants in 1usize..=5, n in 2u32..=8) {
        let js = support(seed, informants, n);
        let b = worst_case_budget(&js, &shuffled(order_seed, informants), ProtocolKind::TwoMessage).unwrap();
        for i in 0..informants {
            prop_assert!(b.downlink[i] >= b.uplink[i]);
        }
        prop_assert!(b.recipient_total() > b.max_uplink());
    }

    #[test]
    fn one_message_is_never_worse_on_problem2(seed: u64, order_seed: u64, informants in 1usize..=5, n in 2u32..=8) {
        let js = support(seed, informants, n);
        let s = shuffled(order_seed, informants);
        let one = worst_case_budget(&js, &s, ProtocolKind::OneMessage).unwrap();
        let two = worst_case_budget(&js, &s, ProtocolKind::TwoMessage).unwrap();
        prop_assert!(two.objective(Problem::MaxOverall) >= one.objective(Problem::MaxOverall));
    }

    #[test]
    fn exchange_steps_never_raise_the_max_uplink(seed: u64, order_seed: u64, informants in 1usize..=6, n in 2u32..=8) {
        let js = support(seed, informants, n);
        let costs = UplinkCost::new(&js, ProtocolKind::TwoMessage);
        let greedy = mcn(&costs, informants);
        prop_assert_eq!(&greedy, &mcn(&costs, informants));
        let path = exchange_path(&shuffled(order_seed, informants), &greedy);
        prop_assert_eq!(path.last().unwrap(), &greedy);
        for w in path.windows(2) {
            prop_assert!(schedule_value(&costs, &w[1], Aggregate::Max) <= schedule_value(&costs, &w[0], Aggregate::Max));
        }
    }

    #[test]
    fn lifetime_times_max_form_is_one(
        seed: u64, order_seed: u64, informants in 1usize..=5, n in 2u32..=6,
        d in prop::collection::vec(1i64..20, 5), rx in 0i64..3,
        reserves in prop::collection::vec(50i64..500, 5), bs in 50i64..5000,
    ) {
        let js = support(seed, informants, n);
        let params = energy(&d[..informants], rx, &reserves[..informants], bs);
        let r = lifetime_of_schedule(&js, &shuffled(order_seed, informants), &params, ProtocolKind::TwoMessage).unwrap();
        prop_assert_eq!(&r.inverse, std::cmp::max(&r.bs_load, &r.node_load));
        if let Some(l) = r.lifetime() {
            prop_assert!((l * &r.inverse).is_one());
        }
    }

    #[test]
    fn scaling_reserves_scales_lifetime(
        seed: u64, informants in 1usize..=5, n in 2u32..=6, c in 1i64..50,
        d in prop::collection::vec(1i64..20, 5), reserves in prop::collection::vec(50i64..500, 5), bs in 50i64..5000,
    ) {
        let js = support(seed, informants, n);
        let params = energy(&d[..informants], 1, &reserves[..informants], bs);
        let scaled = params.scale_energy(&q(c)).unwrap();
        let a = optimize_lifetime(&js, &params, ProtocolKind::TwoMessage).unwrap();
        let b = optimize_lifetime(&js, &scaled, ProtocolKind::TwoMessage).unwrap();
        prop_assert_eq!(&a.sum_candidate.schedule, &b.sum_candidate.schedule);
        prop_assert_eq!(&a.max_candidate.schedule, &b.max_candidate.schedule);
        prop_assert_eq!(a.best.inverse, b.best.inverse * q(c));
    }

    #[test]
    fn base_station_spends_more_when_path_loss_covers_reception(
        seed: u64, order_seed: u64, informants in 1usize..=5, n in 2u32..=6,
        rx in 0i64..5, extra in prop::collection::vec(0i64..10, 5),
    ) {
        let js = support(seed, informants, n);
        let d: Vec<i64> = extra[..informants].iter().map(|e| (rx + e).max(1)).collect();
        let params = energy(&d, rx, &vec![100; informants], 1000);
        let budget = worst_case_budget(&js, &shuffled(order_seed, informants), ProtocolKind::TwoMessage).unwrap();
        let profile = energy_profile(&budget, &params).unwrap();
        prop_assert!(energy_gap(&profile).iter().all(|g| *g >= q(0)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn simulated_rounds_conserve_energy_and_never_revive(seed: u64, nodes in 3usize..30, mcn_protocol: bool, side_info: bool) {
        let params = NetworkParams {
            nodes,
            initial_energy: 2e4,
            head_fraction: 0.2,
            head_side_info: side_info,
            max_rounds: 5_000,
            ..Default::default()
        };
        let protocol = if mcn_protocol { Protocol::Mcn } else { Protocol::Leach { ratio: 0.5 } };
        let out = simulate_instance(&params, protocol, seed, 0, true);
        prop_assert_eq!(&out, &simulate_instance(&params, protocol, seed, 0, true));
        let initial = (2e4 * 1e6) as u64;
        let mut spent_total = 0u64;
        let mut last_alive = nodes;
        for (summary, log) in out.rounds.iter().zip(&out.logs) {
            prop_assert_eq!(summary.spent, log.total_spent());
            prop_assert!(summary.alive <= last_alive);
            last_alive = summary.alive;
            spent_total += summary.spent;
        }
        prop_assert!(spent_total <= initial * nodes as u64);
        prop_assert!(out.lifetime <= out.rounds.len() as u64);
    }
}
