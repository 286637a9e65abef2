//! Partial information decomposition of two-source discrete systems.
//!
//! For a finite joint distribution of sources `X`, `Y` and target `Z`, the
//! mutual information `I(X,Y;Z)` splits into four atoms:
//!
//! - `Un(X→Z|Y)`, `Un(Y→Z|X)`: unique information of each source,
//! - `Red(X,Y→Z)`: information available from either source,
//! - `Syn(X,Y→Z)`: information available only from both together.
//!
//! Unique information is computed from the [`do_op`] construction, which
//! rescales the joint so the target marginal matches a prescribed
//! conditional while keeping `Pr(x, y | z)`. The other atoms follow from
//! `Red + Un = I(X;Z)` and `Syn + Un = I(X;Z|Y)`.
//!
//! ```
//! use dopid::axioms::{make_gate, GateKind, GateSpec};
//! use dopid::pid::decompose;
//!
//! let xor = make_gate(GateSpec::new(GateKind::Xor)).unwrap();
//! let r = decompose(&xor);
//! assert!((r.syn - 1.0).abs() < 1e-9);
//! assert!(r.red.abs() < 1e-9);
//! ```
//!
//! The [`axioms`] module checks every identity and bound the construction
//! satisfies, on single systems or seeded random batteries.

#![forbid(unsafe_code)]

pub mod axioms;
pub mod do_op;
pub mod error;
pub mod info;
pub mod io;
pub mod pid;
pub mod prob;
pub mod sampling;
pub mod sum;

pub use error::{PidError, Result};
pub use info::LogBase;
pub use pid::{decompose, decompose_with_base, PidResult};
pub use prob::{Alphabet, Dist1, JointDist2, JointDist3, Marginal, SampleTable, Var};
