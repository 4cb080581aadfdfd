//! Reference-element machinery: quadrature, shape functions, element matrices.

pub mod element;
pub mod quadrature;
pub mod shape;

pub use element::{element_matrices, ElementMatrices};
pub use quadrature::{quadrature, QuadratureRule};
pub use shape::{p2_shape_gradients, p2_shape_values, TriangleGeometry};
