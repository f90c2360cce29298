use rand::Rng;
use serde::{Deserialize, Serialize};

use super::world::{PredicateWorld, Sym, WorldState};

/// `(7x² − 1) == y²`, exactly. Squares mod 7 are {0, 1, 2, 4}, never 6, so
/// this is false for every pair; it is still computed, not assumed.
pub fn pell_false(x: u64, y: u64) -> bool {
    let x2 = x as u128 * x as u128;
    let y2 = y as u128 * y as u128;
    if x2 == 0 || x2 > u128::MAX / 7 {
        // -1 is no square; above the bound 7x² − 1 exceeds every u64 square.
        return false;
    }
    7 * x2 - 1 == y2
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Atom {
    ConstTrue,
    ConstFalse,
    SameNode(Sym, Sym),
    TokenOf(Sym),
    /// `(7x² − 1) == y²` on a freshly drawn pair.
    PellFalse,
    Not(Box<Atom>),
    And(Box<Atom>, Box<Atom>),
    Or(Box<Atom>, Box<Atom>),
}

impl Atom {
    pub fn or(a: Atom, b: Atom) -> Atom {
        Atom::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: Atom, b: Atom) -> Atom {
        Atom::And(Box::new(a), Box::new(b))
    }

    pub fn negate(a: Atom) -> Atom {
        Atom::Not(Box::new(a))
    }

    /// Value fixed by the world's structure alone, if any. Pointers never
    /// leave their ring and roots keep `token = true`.
    pub fn structural(&self) -> Option<bool> {
        match self {
            Atom::ConstTrue => Some(true),
            Atom::ConstFalse | Atom::PellFalse => Some(false),
            Atom::SameNode(a, b) if a == b => Some(true),
            Atom::SameNode(a, b) if a.ring() != b.ring() => Some(false),
            Atom::SameNode(..) => None,
            Atom::TokenOf(Sym::G | Sym::H) => Some(true),
            Atom::TokenOf(_) => None,
            Atom::Not(a) => a.structural().map(|v| !v),
            Atom::And(a, b) => match (a.structural(), b.structural()) {
                (Some(false), _) | (_, Some(false)) => Some(false),
                (Some(true), Some(true)) => Some(true),
                _ => None,
            },
            Atom::Or(a, b) => match (a.structural(), b.structural()) {
                (Some(true), _) | (_, Some(true)) => Some(true),
                (Some(false), Some(false)) => Some(false),
                _ => None,
            },
        }
    }

    /// Source form used in logs and emitted guards.
    pub fn java(&self) -> String {
        match self {
            Atom::ConstTrue => "true".into(),
            Atom::ConstFalse => "false".into(),
            Atom::SameNode(a, b) => format!("{}.equals({})", a.name(), b.name()),
            Atom::TokenOf(a) => format!("{}.token", a.name()),
            Atom::PellFalse => "(7 * x * x - 1 == y * y)".into(),
            Atom::Not(a) => format!("!({})", a.java()),
            Atom::And(a, b) => format!("({} && {})", a.java(), b.java()),
            Atom::Or(a, b) => format!("({} || {})", a.java(), b.java()),
        }
    }
}

/// Evaluates `atom` in `state`. `PellFalse` draws its pair from `rng`.
pub fn eval_atom<R: Rng>(atom: &Atom, world: &PredicateWorld, state: &WorldState, rng: &mut R) -> bool {
    match atom {
        Atom::ConstTrue => true,
        Atom::ConstFalse => false,
        Atom::SameNode(a, b) => state.resolve(*a) == state.resolve(*b),
        Atom::TokenOf(a) => world.token(state.resolve(*a)),
        Atom::PellFalse => pell_false(rng.gen(), rng.gen()),
        Atom::Not(a) => !eval_atom(a, world, state, rng),
        Atom::And(a, b) => {
            let x = eval_atom(a, world, state, rng);
            let y = eval_atom(b, world, state, rng);
            x && y
        }
        Atom::Or(a, b) => {
            let x = eval_atom(a, world, state, rng);
            let y = eval_atom(b, world, state, rng);
            x || y
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Algorithm {
    /// Fixed membership, unconditional: one member is always false.
    I,
    /// Fixed membership, conditional: `if (p1) p2 = false;`.
    II,
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "I" | "1" | "i" => Ok(Algorithm::I),
            "II" | "2" | "ii" => Ok(Algorithm::II),
            _ => Err(format!("unknown grouping algorithm `{s}` (expected I or II)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupOp {
    And,
    Or,
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("malformed group: {0}")]
    MalformedGroup(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateGroup {
    members: Vec<Atom>,
    op: GroupOp,
    algorithm: Option<Algorithm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupEval {
    pub value: bool,
    /// Member values as evaluated, before any enforcement.
    pub members: Vec<bool>,
    /// Algorithm II forced P₂ to false at this point.
    pub enforced: bool,
}

impl PredicateGroup {
    /// Algorithm I under AND: at least one member must be false in every
    /// world state by construction.
    pub fn algorithm_one(members: Vec<Atom>) -> Result<Self, GroupError> {
        if !members.iter().any(|m| m.structural() == Some(false)) {
            return Err(GroupError::MalformedGroup(
                "Algorithm I needs a member that is false in every state".into(),
            ));
        }
        Ok(PredicateGroup { members, op: GroupOp::And, algorithm: Some(Algorithm::I) })
    }

    /// Algorithm II under AND: members[0] is P₁, members[1] is P₂.
    pub fn algorithm_two(members: Vec<Atom>) -> Result<Self, GroupError> {
        if members.len() < 2 {
            return Err(GroupError::MalformedGroup("Algorithm II needs P1 and P2".into()));
        }
        Ok(PredicateGroup { members, op: GroupOp::And, algorithm: Some(Algorithm::II) })
    }

    /// A plain fold with no falsity guarantee, e.g. to reproduce a group
    /// that comes out true in some run.
    pub fn unchecked(members: Vec<Atom>, op: GroupOp) -> Self {
        PredicateGroup { members, op, algorithm: None }
    }

    pub fn new(algorithm: Algorithm, members: Vec<Atom>) -> Result<Self, GroupError> {
        match algorithm {
            Algorithm::I => PredicateGroup::algorithm_one(members),
            Algorithm::II => PredicateGroup::algorithm_two(members),
        }
    }

    /// The guard wired around the dummy call in the carrier listings:
    /// `b2 = (h.equals(p) || p.token); b1 = p.token; b2 && b1 && g.equals(h)`.
    pub fn listing_algorithm_one() -> Self {
        PredicateGroup::algorithm_one(vec![
            Atom::SameNode(Sym::G, Sym::H),
            Atom::TokenOf(Sym::P),
            Atom::or(Atom::SameNode(Sym::H, Sym::P), Atom::TokenOf(Sym::P)),
        ])
        .expect("g == h is structurally false")
    }

    /// `p1 = p.token; p2 = q.token; if (p1) p2 = false; p1 && p2`.
    pub fn listing_algorithm_two() -> Self {
        PredicateGroup::algorithm_two(vec![Atom::TokenOf(Sym::P), Atom::TokenOf(Sym::Q)]).expect("two members")
    }

    pub fn listing(algorithm: Algorithm) -> Self {
        match algorithm {
            Algorithm::I => PredicateGroup::listing_algorithm_one(),
            Algorithm::II => PredicateGroup::listing_algorithm_two(),
        }
    }

    pub fn members(&self) -> &[Atom] {
        &self.members
    }

    pub fn op(&self) -> GroupOp {
        self.op
    }

    pub fn algorithm(&self) -> Option<Algorithm> {
        self.algorithm
    }
}

/// Evaluates each member, applies Algorithm II's rule, then folds.
pub fn eval_group<R: Rng>(group: &PredicateGroup, world: &PredicateWorld, state: &WorldState, rng: &mut R) -> GroupEval {
    let members: Vec<bool> = group.members.iter().map(|a| eval_atom(a, world, state, rng)).collect();
    fold(group, members)
}

/// Group value from already evaluated members.
pub fn fold(group: &PredicateGroup, members: Vec<bool>) -> GroupEval {
    let mut effective = members.clone();
    let mut enforced = false;
    if group.algorithm == Some(Algorithm::II) && effective[0] {
        enforced = effective[1];
        effective[1] = false;
    }
    let value = match group.op {
        GroupOp::And => effective.iter().all(|&b| b),
        GroupOp::Or => effective.iter().any(|&b| b),
    };
    GroupEval { value, members, enforced }
}
