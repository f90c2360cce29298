//! Opaque predicates over aliased Node rings moved by concurrent threads,
//! simulated on a virtual clock, and their grouping into always-false guards.

mod observe;
mod predicate;
mod ring;
mod world;

pub use observe::{run_observation, GroupStats, ObservationLog, ObservationStats};
pub use predicate::{
    eval_atom, eval_group, fold, pell_false, Algorithm, Atom, GroupError, GroupEval, GroupOp, PredicateGroup,
};
pub use ring::{Node, NodeRing, ROOT};
pub use world::{step_world, Direction, Mover, PredicateWorld, Ptr, Sym, Trajectory, WorldShape, WorldState};
