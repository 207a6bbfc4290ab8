//! Exact computations in incidence algebras of finite posets: involutions,
//! *-derivations and Jordan *-derivations, and the decomposition of every
//! Jordan *-derivation into an inner part plus a transposed part.

pub mod error;
pub mod incidence;
pub mod involution;
pub mod linalg;
pub mod maps;
pub mod poset;
pub mod scalar;
pub mod starmaps;
pub mod text;

pub use error::{Error, Result};
pub use incidence::Element;
pub use involution::{factor_involution, InvolutionSpec, MultiplicativeElement};
pub use maps::LinearMap;
pub use poset::{Poset, PosetInvolution};
pub use scalar::{Field, Scalar};
