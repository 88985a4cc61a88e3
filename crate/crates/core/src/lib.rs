//! Conceptual spaces in complex-phasor hyperspace.
//!
//! Concept prototypes are points in property domains (for example the
//! three-dimensional color domain). Each point is encoded as a unitary
//! hypervector by fractional power encoding of per-dimension basis vectors,
//! analogies are solved with binding algebra, and answers are read back out
//! with a resonator network over per-dimension codebooks.
//!
//! Module map:
//! - [`hdc`]: hypervector algebra (bind, unbind, fractional powers, similarity)
//! - [`space`]: domains, HSB preprocessing, prototype encoding
//! - [`resonator`]: codebooks, resonator decoding and the brute-force oracle
//! - [`store`]: persistent registry of domains and labeled concepts
//! - [`analogy`]: category- and property-based analogies
//! - [`fixtures`]: the color/weight example store

pub mod analogy;
pub mod error;
pub mod fixtures;
pub mod hdc;
pub mod resonator;
pub mod space;
pub mod store;

pub use error::{Error, ErrorCategory, Result};
pub use hdc::{Hypervector, PhaseDistribution, RngSeed, UnitaryHypervector};
pub use resonator::{Codebook, DecodeMethod, DecodeResult, GridSpec, ResonatorConfig};
pub use space::{ColorHsb, DomainConfig, DomainSpec, Prototype, ScalingConstant, ValueRange};
pub use store::{ConceptRecord, Store};
pub use analogy::{AnalogyAnswer, AnalogyKind, AnalogyQuery, DecoderConfig, Operand};

