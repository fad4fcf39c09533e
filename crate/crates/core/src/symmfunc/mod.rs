//! Partition combinatorics, symmetric-group characters, and the
//! Schur <-> power-sum change of basis.

mod character;
mod partition;
mod powersum;

pub use character::{character, CharCache};
pub use partition::{partitions_of, partitions_up_to, FrobeniusForm, Partition};
pub use powersum::{
    elementary_in_powersums, homogeneous_in_powersums, schur_in_powersums,
    schur_in_powersums_cached, schur_in_powersums_jacobi_trudi, PowerSumPolynomial,
};
