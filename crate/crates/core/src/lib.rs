//! Signed quantum weight enumerators of `[[n,1]]` stabilizer codes and the
//! |T⟩ magic-state distillation thresholds they determine.

pub mod cli;
pub mod code;
pub mod enumerator;
pub mod error;
pub mod oracle;
pub mod pauli;
pub mod search;

pub use code::{LogicalFrame, Relabeling, StabilizerCode};
pub use enumerator::{analyze, DistillationReport, IntPolynomial, SignedEnumeratorSet};
pub use pauli::{Axis, PauliOperator};
