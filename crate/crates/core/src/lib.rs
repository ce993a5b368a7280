pub mod algebra;
pub mod linear;
pub mod exec;
pub mod gradedgeom;
pub mod filtration;
pub mod nevanlinna;
pub mod cli;
