//! Distance-preserving ZX rewriting and Floquetification of stabiliser
//! codes.

pub mod circuit;
pub mod diagram;
pub mod error;
pub mod fault;
pub mod floquet;
pub mod flow;
pub mod gf2;
pub mod pauli;
pub mod phase;
pub mod rewrite;
pub mod synth;
pub mod tableau;
pub mod tensor;
pub mod web;

pub use diagram::{EdgeId, VertexId, VertexKind, ZXDiagram};
pub use error::{Error, Result};
pub use phase::Phase;
