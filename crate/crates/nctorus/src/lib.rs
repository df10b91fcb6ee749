pub mod cocycles;
pub mod complexes;
pub mod crossed;
pub mod numeric;
pub mod pairing;
pub mod random;
pub mod scalar;
pub mod torus;
pub mod verify;
