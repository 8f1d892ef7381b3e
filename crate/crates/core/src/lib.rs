//! Symbolic engine for the inverse semigroup generating the odd quantum sphere
//! algebra `C(S_q^{2ℓ+1})`, its tight groupoid, Sheu's groupoid, and the
//! isomorphism between the two, cross-checked against truncated operators.

pub mod bridge;
pub mod error;
pub mod export;
pub mod germ;
pub mod groupoid;
pub mod index;
pub mod literal;
pub mod monomial;
pub mod oracle;
pub mod semigroup;
pub mod sheu;
pub mod spectrum;

pub use bridge::{psi, psi_inverse};
pub use error::{Error, Result};
pub use germ::{germ_eq, Germ};
pub use index::{Entry, ExtendedIndex};
pub use monomial::{Monomial, PrimitiveFactor};
pub use semigroup::{Idempotent, Letter, TElement};
pub use sheu::SheuTriple;
