use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::predicate::{eval_atom, eval_group, Algorithm, Atom, PredicateGroup};
use super::world::{step_world, PredicateWorld, Sym};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupStats {
    pub algorithm: Option<Algorithm>,
    pub members: Vec<String>,
    pub member_true_rate: Vec<f64>,
    pub group_true_count: u64,
    pub enforced_count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservationStats {
    pub seed: u64,
    pub runs: u64,
    pub ticks_per_run: u64,
    pub observations: u64,
    pub p_token_true_rate: f64,
    pub q_token_true_rate: f64,
    pub p_equals_q_true_count: u64,
    pub groups: Vec<GroupStats>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObservationLog {
    pub lines: Vec<String>,
    pub stats: ObservationStats,
}

impl ObservationLog {
    pub fn text(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }

    pub fn stats_json(&self) -> String {
        serde_json::to_string_pretty(&self.stats).expect("stats serialize")
    }
}

fn word(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

/// Plays `runs` independent runs of `ticks_per_run` ticks each and samples
/// every group at every tick (the initial state included). Run `r` gets its
/// own trajectory seed drawn from `seed`.
pub fn run_observation(
    world: &PredicateWorld,
    groups: &[PredicateGroup],
    seed: u64,
    runs: u64,
    ticks_per_run: u64,
) -> ObservationLog {
    let mut seeds = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = ChaCha8Rng::seed_from_u64(seed ^ 0x005e_ed0f_7a11);
    let mut lines = Vec::new();
    let mut observations = 0u64;
    let (mut p_true, mut q_true, mut pq_true) = (0u64, 0u64, 0u64);
    let mut member_true: Vec<Vec<u64>> = groups.iter().map(|g| vec![0; g.members().len()]).collect();
    let mut group_true = vec![0u64; groups.len()];
    let mut enforced = vec![0u64; groups.len()];
    for run in 1..=runs {
        lines.push(format!("Run {run}"));
        let traj = step_world(world, seeds.next_u64(), ticks_per_run);
        for state in &traj.states {
            observations += 1;
            let pt = world.token(state.p);
            let qt = world.token(state.q);
            let same = eval_atom(&Atom::SameNode(Sym::P, Sym::Q), world, state, &mut samples);
            p_true += pt as u64;
            q_true += qt as u64;
            pq_true += same as u64;
            lines.push(format!("P token = {}, Q token = {}, P == Q {}", word(pt), word(qt), word(same)));
            for (gi, g) in groups.iter().enumerate() {
                let e = eval_group(g, world, state, &mut samples);
                for (mi, &v) in e.members.iter().enumerate() {
                    member_true[gi][mi] += v as u64;
                }
                group_true[gi] += e.value as u64;
                enforced[gi] += e.enforced as u64;
                let label = match g.algorithm() {
                    Some(Algorithm::I) => "I",
                    Some(Algorithm::II) => "II",
                    None => "-",
                };
                let vals: Vec<&str> = e.members.iter().map(|&b| word(b)).collect();
                lines.push(format!("  group {} ({label}): {} => {}", gi + 1, vals.join(" - "), word(e.value)));
            }
        }
    }
    let rate = |n: u64| if observations == 0 { 0.0 } else { n as f64 / observations as f64 };
    let groups = groups
        .iter()
        .enumerate()
        .map(|(gi, g)| GroupStats {
            algorithm: g.algorithm(),
            members: g.members().iter().map(Atom::java).collect(),
            member_true_rate: member_true[gi].iter().map(|&n| rate(n)).collect(),
            group_true_count: group_true[gi],
            enforced_count: enforced[gi],
        })
        .collect();
    ObservationLog {
        lines,
        stats: ObservationStats {
            seed,
            runs,
            ticks_per_run,
            observations,
            p_token_true_rate: rate(p_true),
            q_token_true_rate: rate(q_true),
            p_equals_q_true_count: pq_true,
            groups,
        },
    }
}
