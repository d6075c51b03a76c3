//! Continuous city grid centred on the origin.
//!
//! Locations are real-valued points in `[-half_extent, half_extent]²`. Travel
//! and wait times are measured in Manhattan distance; "distance from the city
//! centre" is Euclidean.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GridPoint<F> {
    pub x: F,
    pub y: F,
}

impl<F: Scalar> GridPoint<F> {
    pub fn new(x: F, y: F) -> Self {
        Self { x, y }
    }

    pub fn origin() -> Self {
        Self::new(F::zero(), F::zero())
    }

    /// Euclidean distance to the city centre.
    pub fn center_dist(&self) -> F {
        euclidean(*self, Self::origin())
    }

    pub fn in_bounds(&self, half_extent: F) -> bool {
        self.x.abs() <= half_extent && self.y.abs() <= half_extent
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, bound(deserialize = "F: Scalar"))]
pub struct GridConfig<F> {
    pub half_extent: F,
    pub sample_sd: F,
}

impl<F: Scalar> Default for GridConfig<F> {
    fn default() -> Self {
        Self {
            half_extent: F::lit(50.0),
            sample_sd: F::lit(20.0),
        }
    }
}

impl<F: Scalar> GridConfig<F> {
    pub fn validate(&self) -> Result<()> {
        if !(self.half_extent > F::zero()) {
            return Err(Error::Config("grid half_extent must be positive".into()));
        }
        if !(self.sample_sd > F::zero()) {
            return Err(Error::Config("grid sample_sd must be positive".into()));
        }
        Ok(())
    }
}

pub fn manhattan<F: Scalar>(a: GridPoint<F>, b: GridPoint<F>) -> F {
    (a.x - b.x).abs() + (a.y - b.y).abs()
}

pub fn euclidean<F: Scalar>(a: GridPoint<F>, b: GridPoint<F>) -> F {
    (a.x - b.x).hypot(a.y - b.y)
}

/// Samples a point with both coordinates drawn from `Normal(0, sample_sd)`.
/// Out-of-bounds draws are discarded as a whole point and redrawn.
pub fn sample_location<F: Scalar, R: Rng + ?Sized>(rng: &mut R, cfg: &GridConfig<F>) -> GridPoint<F> {
    loop {
        let p = GridPoint::new(
            cfg.sample_sd * F::standard_normal(rng),
            cfg.sample_sd * F::standard_normal(rng),
        );
        if p.in_bounds(cfg.half_extent) {
            return p;
        }
    }
}
