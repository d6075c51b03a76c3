//! Driver and passenger populations.
//!
//! Drivers persist for a whole run and carry their income history; passengers
//! are drawn fresh every round and vanish afterwards.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::economics::compute_wtp;
use crate::error::{Error, Result};
use crate::geometry::{sample_location, GridConfig, GridPoint};
use crate::ids::{DriverId, PassengerId};
use crate::scalar::{sample_normal_where, Scalar};

/// Distribution parameters for per-agent coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, bound(deserialize = "F: Scalar"))]
pub struct AgentConfig<F> {
    /// Mean of the driver cost coefficient before truncation to `[0, 1]`.
    pub gamma_mean: F,
    pub gamma_sd: F,
    /// Passenger willingness-to-pay coefficient.
    pub alpha_mean: F,
    pub alpha_sd: F,
    /// Driver weight on cost when ranking passengers.
    pub w_p_mean: F,
    pub w_p_sd: F,
}

impl<F: Scalar> Default for AgentConfig<F> {
    fn default() -> Self {
        Self {
            gamma_mean: F::lit(0.1),
            gamma_sd: F::lit(0.05),
            alpha_mean: F::one(),
            alpha_sd: F::lit(0.1),
            w_p_mean: F::one(),
            w_p_sd: F::lit(0.2),
        }
    }
}

impl<F: Scalar> AgentConfig<F> {
    pub fn validate(&self) -> Result<()> {
        let sds = [
            ("gamma_sd", self.gamma_sd),
            ("alpha_sd", self.alpha_sd),
            ("w_p_sd", self.w_p_sd),
        ];
        for (name, sd) in sds {
            if !(sd >= F::zero()) || !sd.is_finite() {
                return Err(Error::Config(format!("{name} must be finite and non-negative")));
            }
        }
        if !self.gamma_mean.is_finite() {
            return Err(Error::Config("gamma_mean must be finite".into()));
        }
        // Rejection sampling onto [0, 1] has to accept often enough to finish.
        let gap = (-self.gamma_mean).max(self.gamma_mean - F::one()).max(F::zero());
        if gap > F::lit(4.0) * self.gamma_sd {
            return Err(Error::Config("gamma_mean must lie within 4 gamma_sd of [0, 1]".into()));
        }
        if !(self.alpha_mean > F::zero()) || !self.alpha_mean.is_finite() {
            return Err(Error::Config("alpha_mean must be positive".into()));
        }
        if !(self.w_p_mean > F::zero()) || !self.w_p_mean.is_finite() {
            return Err(Error::Config("w_p_mean must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriverState<F> {
    pub id: DriverId,
    pub location: GridPoint<F>,
    /// Cost coefficient, always in `[0, 1]`.
    pub gamma: F,
    /// Weight on trip cost in the driver's ranking, always positive.
    pub w_p: F,
    pub total_income: F,
    /// Fare minus trip cost, summed over completed rides.
    pub total_profit: F,
    pub total_rides: usize,
    /// Starting location followed by every dropoff, in order.
    pub visited: Vec<GridPoint<F>>,
}

impl<F: Scalar> DriverState<F> {
    pub fn new(id: DriverId, location: GridPoint<F>, gamma: F, w_p: F) -> Self {
        Self {
            id,
            location,
            gamma,
            w_p,
            total_income: F::zero(),
            total_profit: F::zero(),
            total_rides: 0,
            visited: vec![location],
        }
    }

    /// Records a completed ride: the fare is added to income and the driver
    /// ends up at the passenger's dropoff.
    pub fn apply_outcome(&mut self, passenger: &PassengerRequest<F>) {
        let cost = crate::economics::compute_cost(self.location, passenger.pickup, passenger.dropoff, self.gamma);
        self.total_income = self.total_income + passenger.wtp;
        self.total_profit = self.total_profit + (passenger.wtp - cost);
        self.total_rides += 1;
        self.location = passenger.dropoff;
        self.visited.push(passenger.dropoff);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassengerRequest<F> {
    pub id: PassengerId,
    pub pickup: GridPoint<F>,
    pub dropoff: GridPoint<F>,
    pub alpha: F,
    /// Fare offered, fixed at creation.
    pub wtp: F,
}

impl<F: Scalar> PassengerRequest<F> {
    pub fn new(id: PassengerId, pickup: GridPoint<F>, dropoff: GridPoint<F>, alpha: F) -> Self {
        Self {
            id,
            pickup,
            dropoff,
            alpha,
            wtp: compute_wtp(pickup, dropoff, alpha),
        }
    }
}

pub fn spawn_drivers<F: Scalar, R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
    cfg: &AgentConfig<F>,
    grid: &GridConfig<F>,
) -> Result<Vec<DriverState<F>>> {
    if n == 0 {
        return Err(Error::Config("at least one driver is required".into()));
    }
    let drivers = (0..n)
        .map(|i| {
            let location = sample_location(rng, grid);
            let gamma = sample_normal_where(rng, cfg.gamma_mean, cfg.gamma_sd, |g| g >= F::zero() && g <= F::one());
            let w_p = sample_normal_where(rng, cfg.w_p_mean, cfg.w_p_sd, |w| w > F::zero());
            DriverState::new(DriverId(i), location, gamma, w_p)
        })
        .collect();
    Ok(drivers)
}

pub fn spawn_passengers<F: Scalar, R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
    cfg: &AgentConfig<F>,
    grid: &GridConfig<F>,
) -> Result<Vec<PassengerRequest<F>>> {
    if n == 0 {
        return Err(Error::Config("at least one passenger is required".into()));
    }
    let passengers = (0..n)
        .map(|i| {
            let (pickup, dropoff) = loop {
                let pickup = sample_location(rng, grid);
                let dropoff = sample_location(rng, grid);
                if pickup != dropoff {
                    break (pickup, dropoff);
                }
            };
            let alpha = sample_normal_where(rng, cfg.alpha_mean, cfg.alpha_sd, |a| a > F::zero());
            PassengerRequest::new(PassengerId(i), pickup, dropoff, alpha)
        })
        .collect();
    Ok(passengers)
}
