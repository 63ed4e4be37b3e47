//! Quantum speed limits for open qubit and multi-qubit systems under
//! non-Markovian dephasing and amplitude damping.
//!
//! The crate is layered: [`hermitian`] holds dense complex linear algebra,
//! [`states`] the state families and coherence measures, [`channels`] the
//! decoherence processes, [`qsl`] the speed-limit bounds and [`nonmarkov`]
//! the non-Markovianity diagnostics.

pub mod channels;
pub mod error;
pub mod hermitian;
pub mod nonmarkov;
pub mod qsl;
pub mod quadrature;
pub mod states;

pub use error::{Error, Result};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
pub struct ReadmeDoctests;

#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/states.md")]
    pub mod states {}
    #[doc = include_str!("../../../book/src/channels.md")]
    pub mod channels {}
    #[doc = include_str!("../../../book/src/speed-limits.md")]
    pub mod speed_limits {}
    #[doc = include_str!("../../../book/src/non-markovianity.md")]
    pub mod non_markovianity {}
}
