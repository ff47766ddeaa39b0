pub mod analysis;
pub mod automorphism;
pub mod curve;
pub mod descriptor;
pub mod forge;
pub mod gf;
pub mod matrix;
pub mod presets;
pub mod repair;
