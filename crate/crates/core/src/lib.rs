pub mod char2;
pub mod ecurve;
pub mod error;
pub mod field;
pub mod gen;
pub mod io;
pub mod par;
pub mod poly;
pub mod poncelet;
pub mod projective;
pub mod svg;
pub mod sweep;

pub use error::{Error, Result};
pub use field::{Elem, Embedding, Field};
