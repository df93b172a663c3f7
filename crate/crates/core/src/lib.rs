pub mod dynamics;
pub mod geometry;
pub mod hjcheck;
pub mod scenarios;
pub mod vect;

pub use vect::Vect;
