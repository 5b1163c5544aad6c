pub mod checks;
pub mod cone;
pub mod config;
pub mod critical;
pub mod error;
pub mod figure;
pub mod growth;
pub mod lie;
pub mod linalg;
pub mod lp;
pub mod orbit;
pub mod par;
pub mod qp;
pub mod rational;
pub mod report;
pub mod sampling;

pub use cone::PolyCone;
pub use config::Config;
pub use error::{Error, Result};
pub use growth::GrowthIndicator;
pub use lie::{RootSystem, RootSystemSpec};
