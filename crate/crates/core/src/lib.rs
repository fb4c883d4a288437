pub mod dispersion;
pub mod error;
pub mod green;
pub mod potential;
pub mod quadrature;
pub mod sweep;
pub mod types;
pub mod units;
