//! Distortive transformations on class files, and a survival matrix that
//! re-verifies the watermark after each one.

mod debug;
mod external;
mod matrix;
mod normalize;
mod rename;
mod trim;

pub use debug::{attack_scramble_debug, attack_strip_debug};
pub use external::run_external;
pub use matrix::{survival_matrix, Attack, Cell, Row, SurvivalMatrix};
pub use normalize::attack_normalize_opcodes;
pub use rename::attack_rename;
pub use trim::{attack_trim, reachable_methods};

use crate::classfile::ClassFileError;

#[derive(Debug, thiserror::Error)]
pub enum AttackError {
    #[error("entry point `{0}` is not a method of the class")]
    UnknownEntryPoint(String),
    #[error("external tool not available (`{command}`): {detail}")]
    ToolMissing { command: String, detail: String },
    #[error("external tool failed (`{command}`, status {status:?}): {stderr}")]
    ToolFailed { command: String, status: Option<i32>, stderr: String },
    #[error(transparent)]
    ClassFile(#[from] ClassFileError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
