//! Document counting over string collections: given a pattern, how many
//! documents contain it.
//!
//! Build a [`suffix::TextIndex`] over a [`corpus::Collection`], locate a
//! pattern with [`suffix::TextIndex::find`], and answer with any structure in
//! [`counter::StructureKind`].

pub mod analysis;
pub mod bench;
pub mod bits;
pub mod bitvec;
pub mod container;
pub mod corpus;
pub mod counter;
pub mod error;
pub mod ilcp;
pub mod pdl;
pub mod sada;
pub mod suffix;
pub mod wavelet;

pub use error::{Error, Result};
