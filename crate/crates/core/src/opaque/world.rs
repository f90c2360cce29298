use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ring::{NodeRing, ROOT};

/// Named references of the guard code: roots `g`, `h` and movers `p`, `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sym {
    G,
    H,
    P,
    Q,
}

impl Sym {
    /// 0 for ring G, 1 for ring H.
    pub fn ring(self) -> usize {
        match self {
            Sym::G | Sym::P => 0,
            Sym::H | Sym::Q => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sym::G => "g",
            Sym::H => "h",
            Sym::P => "p",
            Sym::Q => "q",
        }
    }
}

/// A reference into one of the two rings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Ptr {
    pub ring: usize,
    pub node: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Next,
    Back,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mover {
    pub pointer: Sym,
    pub direction: Direction,
    /// Fires every `period` ticks.
    pub period: u32,
}

/// How many nodes each ring gets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WorldShape {
    /// `p = g.addNode(); q = h.addNode();` and nothing else.
    Listing,
    /// The listing followed by `extra` more `g.addNode()` / `h.addNode()`
    /// calls, so that each ring holds `2 + extra` nodes.
    Extended { extra: usize },
}

impl WorldShape {
    pub fn nodes_per_ring(self) -> usize {
        match self {
            WorldShape::Listing => 2,
            WorldShape::Extended { extra } => 2 + extra,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateWorld {
    pub rings: [NodeRing; 2],
    /// Where `p` and `q` start.
    pub start: WorldState,
    pub movers: Vec<Mover>,
}

/// Pointer positions at one tick.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WorldState {
    pub tick: u64,
    pub p: Ptr,
    pub q: Ptr,
}

impl WorldState {
    pub fn resolve(&self, s: Sym) -> Ptr {
        match s {
            Sym::G => Ptr { ring: 0, node: ROOT },
            Sym::H => Ptr { ring: 1, node: ROOT },
            Sym::P => self.p,
            Sym::Q => self.q,
        }
    }
}

impl PredicateWorld {
    /// Rings built as in the constructor listing with the thread periods of
    /// the `run()` listing: `t` (moving `p` forward) sleeps 12000 ms, `s`
    /// (moving `q` back) sleeps 4000 ms, i.e. periods 3 and 1.
    pub fn new(shape: WorldShape) -> Self {
        PredicateWorld::with_movers(
            shape,
            vec![
                Mover { pointer: Sym::P, direction: Direction::Next, period: 3 },
                Mover { pointer: Sym::Q, direction: Direction::Back, period: 1 },
            ],
        )
    }

    pub fn with_movers(shape: WorldShape, movers: Vec<Mover>) -> Self {
        let mut rings = [NodeRing::new(true), NodeRing::new(true)];
        let p = rings[0].add_node(ROOT);
        let q = rings[1].add_node(ROOT);
        if let WorldShape::Extended { extra } = shape {
            for _ in 0..extra {
                rings[0].add_node(ROOT);
                rings[1].add_node(ROOT);
            }
        }
        PredicateWorld {
            rings,
            start: WorldState { tick: 0, p: Ptr { ring: 0, node: p }, q: Ptr { ring: 1, node: q } },
            movers,
        }
    }

    pub fn token(&self, ptr: Ptr) -> bool {
        self.rings[ptr.ring].node(ptr.node).token
    }

    fn step(&self, ptr: Ptr, d: Direction) -> Ptr {
        let ring = &self.rings[ptr.ring];
        let node = match d {
            Direction::Next => ring.move_next(ptr.node),
            Direction::Back => ring.move_back(ptr.node),
        };
        Ptr { ring: ptr.ring, node }
    }

    /// Every pointer state, regardless of reachability.
    pub fn all_states(&self) -> Vec<WorldState> {
        let mut out = Vec::new();
        for p in 0..self.rings[0].len() {
            for q in 0..self.rings[1].len() {
                out.push(WorldState { tick: 0, p: Ptr { ring: 0, node: p }, q: Ptr { ring: 1, node: q } });
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    /// `ticks + 1` states, the initial one first.
    pub states: Vec<WorldState>,
    /// Phase offset chosen for each mover.
    pub phases: Vec<u32>,
    /// Number of times each mover fired.
    pub fires: Vec<u64>,
}

/// Runs the movers for `ticks` virtual ticks. At tick `t` (from 1) mover
/// `i` fires when `(t + phase_i) % period_i == 0`; movers fire in list
/// order. The seed only picks the phases.
pub fn step_world(world: &PredicateWorld, seed: u64, ticks: u64) -> Trajectory {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phases: Vec<u32> = world.movers.iter().map(|m| rng.gen_range(0..m.period.max(1))).collect();
    let mut fires = vec![0; world.movers.len()];
    let mut state = world.start;
    let mut states = Vec::with_capacity(ticks as usize + 1);
    states.push(state);
    for t in 1..=ticks {
        for (i, m) in world.movers.iter().enumerate() {
            let period = m.period.max(1) as u64;
            if (t + phases[i] as u64) % period != 0 {
                continue;
            }
            fires[i] += 1;
            match m.pointer {
                Sym::P => state.p = world.step(state.p, m.direction),
                Sym::Q => state.q = world.step(state.q, m.direction),
                // Roots never move.
                Sym::G | Sym::H => {}
            }
        }
        state.tick = t;
        states.push(state);
    }
    Trajectory { states, phases, fires }
}
