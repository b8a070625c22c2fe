//! Bidirectional controlled remote state preparation (BCRSP) of equatorial
//! qudit states.
//!
//! Two three-qudit GHZ states link Alice, Bob and the controller Charlie.
//! Alice and Bob each measure one particle in a basis keyed to the phases of
//! the state they want to send, Charlie measures both of his particles in the
//! Fourier basis, and diagonal phase corrections on `A1` and `B2` complete the
//! exchange.
//!
//! * [`qudit`]: dense state vectors, projective measurement, Kraus channels, fidelity.
//! * [`protocol`]: the noiseless engine for any dimension `N >= 2`.
//! * [`session`]: the three parties as explicit state machines with a transcript.
//! * [`noise`]: qudit-flip, dephasing and qudit-phase-flip channels on the distributed particles.
//! * [`optics`]: beam-splitter networks realising the bases and corrections.

pub mod noise;
pub mod optics;
pub mod protocol;
pub mod qudit;
pub mod session;

pub use qudit::{C64, STRUCTURAL_TOL, WEIGHT_TOL};
