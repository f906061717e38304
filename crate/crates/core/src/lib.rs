//! Exact symbolic engine for quantum cluster algebras attached to simply-laced
//! quantum affine algebras: (q,t)-characters of Kirillov-Reshetikhin and
//! fundamental modules via quantum mutation.

pub mod cartan;
pub mod characters;
pub mod error;
pub mod format;
pub mod oplus;
pub mod qcluster;
pub mod qtorus;
pub mod quiver;

pub use cartan::{CartanData, Family, HeightFunction, LieType, Node, SignConvention};
pub use error::{Error, Result};
pub use qcluster::{
    dependency_schedule, initial_seed, sequence_s, sequence_si, Basis, Config, MutationRecord, MutationSequence,
    QuantumSeed,
};
pub use qtorus::{Monomial, QTPoly, QuantumTorus, TCoeff, Var};
pub use quiver::{build_window, k_factors, ExchangeMatrix, Frozen, Vertex, VertexWindow, WindowVariant};
