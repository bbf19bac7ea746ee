pub mod arith;
pub mod intersection;
pub mod residue;
pub mod series;
pub mod toric;
pub mod verify;
