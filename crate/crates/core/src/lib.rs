//! Permutation-group machinery for vertex-primitive s-arc-transitive
//! digraphs of alternating and symmetric groups.

pub mod actions;
pub mod digraph;
pub mod error;
pub mod factor;
pub mod fixtures;
pub mod grp;
pub mod numth;
pub mod perm;
pub mod verify;

pub use error::{Error, Result};
pub use grp::{BlockSystem, GroupAction, Label, LabelKind, PermGroup};
pub use perm::Permutation;
