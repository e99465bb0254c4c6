pub mod exact;
pub mod nabla;
pub mod order;
pub mod random;
pub mod search;
pub mod spectrum;
pub mod suite;
