//! Hankel determinants of the Cantor sequence.
//!
//! The crate computes `|Γ_n^p|` and `|Δ_n^p|` (Hankel determinants of the
//! Cantor sequence `c` and of `dₙ = cₙ + cₙ₊₂`) in two independent ways:
//! exactly, by elimination on explicit matrices ([`hankel`]), and mod 3, by
//! the ternary recurrences ([`recurrence`]). On top of the mod-3 values it
//! builds periodic generating series ([`series`]), the 3-kernel and a
//! two-dimensional automaton ([`kernel`]), and the Padé and irrationality
//! exponent experiments ([`pade`]). [`verify`] runs every check at once and
//! [`cli`] is the command-line front end.

pub mod cli;
pub mod hankel;
pub mod kernel;
pub mod pade;
pub mod recurrence;
pub mod residue;
pub mod sequences;
pub mod series;
pub mod verify;

pub use hankel::{det_exact, det_mod3, hankel_matrix, ExactMatrix, HankelSpec, PermutationP};
pub use kernel::{Dfao2D, KernelExpr};
pub use pade::{pade, PadeApproximant, RationalInterval};
pub use recurrence::Engine;
pub use residue::Residue3;
pub use sequences::{cantor_term, diff_term, Bit, DiffValue, Kind};
pub use series::PeriodicSeries;
