use serde::{Deserialize, Serialize};

use crate::rational::{serde_rational, Rational};
use crate::Vector;

/// The closed halfspace `{x : <normal, x> <= offset}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Vector,
    #[serde(with = "serde_rational")]
    pub offset: Rational,
}

impl Halfspace {
    pub fn new(normal: Vector, offset: Rational) -> Self {
        Halfspace { normal, offset }
    }

    /// Homogeneous halfspace `<normal, x> <= 0`.
    pub fn through_origin(normal: Vector) -> Self {
        Halfspace { normal, offset: num_traits::Zero::zero() }
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    pub fn contains(&self, x: &Vector) -> bool {
        self.normal.dot(x) <= self.offset
    }

    pub fn is_homogeneous(&self) -> bool {
        num_traits::Zero::is_zero(&self.offset)
    }
}

/// The hyperplane `{x : <normal, x> = offset}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Hyperplane {
    pub normal: Vector,
    #[serde(with = "serde_rational")]
    pub offset: Rational,
}

impl Hyperplane {
    pub fn contains(&self, x: &Vector) -> bool {
        self.normal.dot(x) == self.offset
    }
}
