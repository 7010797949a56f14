pub mod error;
pub mod balmer;
pub mod group;
pub mod series;
pub mod fgl;
pub mod equivariant;
pub mod io;
pub mod isotropy;

pub use error::{Error, Result};
