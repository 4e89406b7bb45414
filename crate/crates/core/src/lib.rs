//! Lattice points of SL₂(ℤ) and of the quaternion group Γ(2,5) counted by
//! size and sorted by angle, through Gaussian integers and ℤ[√2].
//!
//! The counting paths are exact integer arithmetic over factorizations; floats
//! enter only when angles are evaluated.

pub mod analytics;
pub mod arith;
pub mod cli;
pub mod elliptic;
pub mod error;
pub mod gaussian;
pub mod quadratic;
pub mod quaternion;

pub use analytics::equidist::{box_discrepancy, build_sample, weyl_table, Case, TorusSample, WeylTable};
pub use analytics::euler::{constant_c, constant_c_prime, euler_product};
pub use analytics::{li, Character, Constants, EulerProduct, Mode, Scale, StatReport};
pub use elliptic::{cartan_angles, enumerate_norm, s_e_direct, s_e_factored, CartanAngles, UniModularMat};
pub use error::{Error, Result};
pub use gaussian::GaussInt;
pub use quadratic::{ClassRep, QuadInt};
pub use quaternion::{enumerate_cosets, hyperbolic_decompose, recompose, s_h, s_h_direct, HypDecomposition, QuatMat};
