pub mod demo;
pub mod derivation;
pub mod diagnostic;
pub mod lie;
pub mod matrix;
#[doc(hidden)]
pub mod mutation;
pub mod ring;
pub mod scenario;
pub mod selftest;
