pub mod bundles;
pub mod cohomology;
pub mod delpezzo;
pub mod error;
pub mod exactlat;
pub mod graded;
pub mod hirzebruch;
pub mod transforms;

pub use error::{Error, Result};
