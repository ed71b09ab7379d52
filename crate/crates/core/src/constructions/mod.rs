//! Building new states: free products, compressions, named laws, soul
//! companions of derivations, dual derivation systems and convolution powers.

mod compression;
mod derivations;
mod free_product;
mod laws;
mod powers;

pub use compression::{compress_cumulants, compress_state_model, xax_cumulants, CompressionParams};
pub use derivations::{dds_canonical, dds_check, soul_companion, DualDerivationSystem, Functional};
pub use free_product::{free_product, FreeProduct};
pub use laws::{free_poisson_spec, semicircular_moments, semicircular_spec, semicircular_state, z2_state};
pub use powers::{convolution_power, inf_limit_of_powers};
