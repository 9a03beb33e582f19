//! Quantum and geometric discord of generalized Bloch sphere states (GBSS).
//!
//! A GBSS on C^N ⊗ C^M (N = 2ⁿ ≤ M = 2ᵐ) is
//! ρ = (1/NM)(I + Σⱼ tⱼ γⱼ^A ⊗ γⱼ^B) built on a maximal set of 2n+1 pairwise
//! anticommuting Hermitian matrices. The crate builds those sets, realizes
//! the states, evaluates discord for von Neumann, Rényi and Tsallis entropies
//! and the geometric discord in closed form, and checks every closed form
//! against a numerical search over measurement bases.
//!
//! ```
//! use gbss_core::{discord, EntropySpec, GammaConvention, GbssSpec};
//!
//! let bell = GbssSpec::new(1, 1, vec![1.0, -1.0, 1.0]).unwrap();
//! let report = discord::discord_closed(&bell, EntropySpec::VonNeumann, GammaConvention::Tower).unwrap();
//! assert!((report.discord_closed - 1.0).abs() < 1e-12);
//! ```

pub mod acceptance;
pub mod clifford;
pub mod discord;
pub mod entropy;
pub mod error;
pub mod gmqd;
pub mod json;
pub mod linalg;
pub mod measurement;
pub mod region;
pub mod search;
pub mod state;

pub use clifford::{GammaConvention, GammaSet, PauliString, SuBasis};
pub use discord::DiscordReport;
pub use entropy::EntropySpec;
pub use error::{Error, Result};
pub use gmqd::GmqdReport;
pub use linalg::CMatrix;
pub use measurement::{CoherenceVector, Povm};
pub use region::{ExtremalReport, RegionReport};
pub use search::SearchConfig;
pub use state::{DensityMatrix, GbssSpec, Side};
