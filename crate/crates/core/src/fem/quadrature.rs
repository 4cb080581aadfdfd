use crate::error::{Error, Result};

/// Quadrature on the reference triangle in barycentric coordinates.
/// Weights sum to the reference area 1/2; scale by `2 * area` for a physical element.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub degree: usize,
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Weights rescaled for an element of the given area.
    pub fn scaled_weights(&self, area: f64) -> impl Iterator<Item = f64> + '_ {
        self.weights.iter().map(move |w| 2.0 * area * w)
    }
}

/// The 7-point symmetric rule exact for polynomials of degree 5.
pub fn quadrature(degree: usize) -> Result<QuadratureRule> {
    if degree != 5 {
        return Err(Error::Argument(format!(
            "only the degree-5 triangle rule is available, asked for {degree}"
        )));
    }
    Ok(degree5())
}

pub fn degree5() -> QuadratureRule {
    let s15 = 15f64.sqrt();
    let a1 = (6.0 - s15) / 21.0;
    let a2 = (6.0 + s15) / 21.0;
    let w0 = 9.0 / 40.0;
    let w1 = (155.0 - s15) / 1200.0;
    let w2 = (155.0 + s15) / 1200.0;
    let mut points = vec![[1.0 / 3.0; 3]];
    let mut weights = vec![w0];
    for (a, w) in [(a1, w1), (a2, w2)] {
        let b = 1.0 - 2.0 * a;
        points.extend([[b, a, a], [a, b, a], [a, a, b]]);
        weights.extend([w; 3]);
    }
    let weights = weights.into_iter().map(|w| 0.5 * w).collect();
    QuadratureRule {
        degree: 5,
        points,
        weights,
    }
}
