//! Ladder translation surfaces with parameter `λ_{k,l}`: exact arithmetic,
//! cylinder decompositions, Veech-group generators, and the Fuchsian group
//! `G = ⟨R, T⟩` with its fundamental domain.

pub mod checks;
pub mod cylinders;
pub mod fuchsian;
pub mod moebius;
pub mod numeric;
pub mod render;
pub mod surface;
