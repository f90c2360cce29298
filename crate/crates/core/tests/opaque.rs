use dummymark::opaque::{
    eval_group, pell_false, run_observation, step_world, Algorithm, Atom, PredicateGroup, PredicateWorld, Sym,
    WorldShape,
};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pell_oracle(x: u64, y: u64) -> bool {
    let (x, y) = (BigInt::from(x), BigInt::from(y));
    BigInt::from(7) * &x * &x - 1 == &y * &y
}

fn shapes() -> [WorldShape; 2] {
    [WorldShape::Listing, WorldShape::Extended { extra: 2 }]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn pell_agrees_with_bigint(x in any::<u64>(), y in any::<u64>()) {
        prop_assert_eq!(pell_false(x, y), pell_oracle(x, y));
        prop_assert!(!pell_false(x, y));
    }

    #[test]
    fn pell_near_squares(x in any::<u32>()) {
        // y close to sqrt(7) * x is where a wrong overflow would bite.
        let y = ((x as f64) * 7f64.sqrt()) as u64;
        for y in y.saturating_sub(2)..=y + 2 {
            prop_assert_eq!(pell_false(x as u64, y), pell_oracle(x as u64, y));
        }
    }
}

#[test]
fn pell_small_square_exhaustive() {
    for x in 0..=1000i64 {
        for y in 0..=1000i64 {
            assert_ne!(7 * x * x - 1, y * y);
            assert!(!pell_false(x as u64, y as u64));
        }
    }
}

#[test]
fn groups_are_false_at_every_guard_point() {
    let groups = [PredicateGroup::listing(Algorithm::I), PredicateGroup::listing(Algorithm::II)];
    for shape in shapes() {
        let world = PredicateWorld::new(shape);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut seen = [[false; 2]; 2];
        for seed in 0..50 {
            for state in step_world(&world, seed, 200).states {
                for g in &groups {
                    assert!(!eval_group(g, &world, &state, &mut rng).value, "{shape:?} seed {seed}");
                }
                seen[0][world.token(state.p) as usize] = true;
                seen[1][world.token(state.q) as usize] = true;
            }
        }
        assert_eq!(seen, [[true; 2]; 2], "{shape:?}: tokens must take both values");
    }
}

#[test]
fn groups_are_false_in_every_reachable_or_unreachable_state() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for shape in [WorldShape::Listing, WorldShape::Extended { extra: 5 }] {
        let world = PredicateWorld::new(shape);
        for state in world.all_states() {
            for alg in [Algorithm::I, Algorithm::II] {
                assert!(!eval_group(&PredicateGroup::listing(alg), &world, &state, &mut rng).value);
            }
        }
    }
}

#[test]
fn algorithm_two_members_vary_and_enforcement_fires() {
    let world = PredicateWorld::new(WorldShape::Listing);
    let log = run_observation(&world, &[PredicateGroup::listing(Algorithm::II)], 3, 10, 30);
    let g = &log.stats.groups[0];
    assert_eq!(g.group_true_count, 0);
    assert!(g.enforced_count > 0);
    for r in &g.member_true_rate {
        assert!(*r > 0.0 && *r < 1.0, "{r}");
    }
}

#[test]
fn unguarded_conjunction_can_be_true() {
    // Without the enforcement line, p.token && q.token is sometimes true.
    let world = PredicateWorld::new(WorldShape::Listing);
    let raw = PredicateGroup::unchecked(vec![Atom::TokenOf(Sym::P), Atom::TokenOf(Sym::Q)], dummymark::opaque::GroupOp::And);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let any_true = (0..20)
        .flat_map(|s| step_world(&world, s, 60).states)
        .any(|st| eval_group(&raw, &world, &st, &mut rng).value);
    assert!(any_true);
}

#[test]
fn stylepad_log_pattern() {
    let world = PredicateWorld::new(WorldShape::Listing);
    let log = run_observation(&world, &[PredicateGroup::listing(Algorithm::I)], 2004, 3, 40);
    let obs: Vec<&String> = log.lines.iter().filter(|l| l.starts_with("P token")).collect();
    assert_eq!(obs.len(), 3 * 41);
    assert!(obs.iter().all(|l| l.ends_with("P == Q false")));
    assert!(log.stats.p_token_true_rate > 0.0 && log.stats.p_token_true_rate < 1.0);
    assert!(log.stats.q_token_true_rate > 0.0 && log.stats.q_token_true_rate < 1.0);
    assert_eq!(log.stats.p_equals_q_true_count, 0);
}
