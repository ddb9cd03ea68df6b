//! GF(2) linear algebra and code construction.
//!
//! Everything the decoders need from coding theory lives here: packed bit
//! vectors/matrices, binary polynomials, GF(2^m) tables, and the BCH
//! constructor that produces systematic `(G, H)` pairs.

pub mod bits;
pub mod code;
pub mod field;
pub mod poly;

pub use bits::{BitMatrix, BitVector};
pub use code::{bch_construct, min_distance_bruteforce, LinearCode};
pub use field::Gf2mField;
pub use poly::Gf2Poly;
