pub mod contour;
pub mod eigen;
pub mod error;
pub mod euclidean;
pub mod geometry;
pub mod matrix;
pub mod scalar;
pub mod special;
pub mod sphere;
pub mod grassmann;
pub mod projective;
pub mod simulation;
