//! Verification campaigns and decomposition reports over `hodgelab`.

pub mod campaign;
pub mod checks;
pub mod decompose;
pub mod error;
pub mod report;

pub use campaign::{parse_backend, parse_seeds, Campaign, CampaignName};
pub use decompose::{decompose_file, decompose_str, Decomposition};
pub use error::CliError;
pub use report::{Case, Report};
