pub mod criticality;
pub mod domain_model;
pub mod error;
pub mod factorization;
pub mod ideal_fn;
pub mod inv_group;
pub mod ordinal_space;
pub mod random;
pub mod verify;
