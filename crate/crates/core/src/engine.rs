//! Multi-round simulation.
//!
//! Drivers are spawned once and persist; every round draws a fresh batch of
//! passengers, builds both sides' lists, runs one mechanism and moves matched
//! drivers to their dropoffs. All rides finish within their round.
//!
//! Randomness comes from three ChaCha streams derived from one seed (driver
//! spawn, passenger spawn, mechanism). Passenger batches therefore do not
//! depend on the mechanism, so runs that differ only in mechanism see the same
//! populations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::agents::{spawn_drivers, spawn_passengers, AgentConfig, DriverState, PassengerRequest};
use crate::economics::{build_preferences, compute_cost, EconWeights, PassengerScoring};
use crate::error::{Error, Result};
use crate::geometry::GridConfig;
use crate::ids::{DriverId, PassengerId};
use crate::mechanisms::{
    run_boston, run_closest, run_deferred_acceptance, run_random, MatchingOutcome, Mechanism, PreferenceProfile,
};
use crate::scalar::Scalar;
use crate::stats::{gini, mean, population_sd};

const DRIVER_STREAM: u64 = 1;
const PASSENGER_STREAM: u64 = 2;
const MECHANISM_STREAM: u64 = 3;

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, bound(deserialize = "F: Scalar"))]
pub struct SimConfig<F> {
    pub n_drivers: usize,
    pub n_passengers: usize,
    pub n_rounds: usize,
    pub mechanism: Mechanism,
    pub weights: EconWeights<F>,
    pub passenger_scoring: PassengerScoring,
    /// Longest acceptable pickup wait, in Manhattan distance.
    pub wait_threshold: F,
    pub grid: GridConfig<F>,
    pub agent_cfg: AgentConfig<F>,
    pub seed: u64,
}

impl<F: Scalar> Default for SimConfig<F> {
    fn default() -> Self {
        Self {
            n_drivers: 15,
            n_passengers: 15,
            n_rounds: 50,
            mechanism: Mechanism::Da,
            weights: EconWeights::default(),
            passenger_scoring: PassengerScoring::default(),
            wait_threshold: F::lit(40.0),
            grid: GridConfig::default(),
            agent_cfg: AgentConfig::default(),
            seed: 0,
        }
    }
}

impl<F: Scalar> SimConfig<F> {
    pub fn validate(&self) -> Result<()> {
        if self.n_drivers == 0 || self.n_passengers == 0 || self.n_rounds == 0 {
            return Err(Error::Config(
                "drivers, passengers and rounds must all be at least 1".into(),
            ));
        }
        if !(self.wait_threshold >= F::zero()) {
            return Err(Error::Config("wait_threshold must be non-negative".into()));
        }
        self.weights.validate()?;
        self.grid.validate()?;
        self.agent_cfg.validate()
    }
}

/// A completed ride.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RideRecord<F> {
    pub driver: DriverId,
    pub passenger: PassengerId,
    pub fare: F,
    pub cost: F,
}

impl<F: Scalar> RideRecord<F> {
    pub fn profit(&self) -> F {
        self.fare - self.cost
    }
}

#[derive(Debug, Clone)]
pub struct RoundRecord<F> {
    pub round: usize,
    pub passengers: Vec<PassengerRequest<F>>,
    pub profile: PreferenceProfile<F>,
    pub outcome: MatchingOutcome,
    pub rides: Vec<RideRecord<F>>,
    /// Sum of matched fares.
    pub revenue: F,
    /// Income gained by each driver this round.
    pub income_deltas: Vec<F>,
}

/// Per-round aggregates kept in a [`RunSummary`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundStats<F> {
    pub round: usize,
    pub revenue: F,
    pub rides: usize,
    pub cumulative_revenue: F,
    pub cumulative_rides: usize,
    pub mean_income: F,
    pub income_sd: F,
    pub gini: F,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary<F> {
    pub mechanism: Mechanism,
    pub seed: u64,
    pub total_revenue: F,
    pub total_rides: usize,
    pub revenue_per_ride: F,
    pub mean_income: F,
    pub income_sd: F,
    pub gini: F,
    pub total_profit: F,
    /// Final income of each driver, by id.
    pub driver_incomes: Vec<F>,
    pub rounds: Vec<RoundStats<F>>,
}

/// Plays one round against the current driver population.
pub fn run_round<F: Scalar>(
    round: usize,
    drivers: &mut [DriverState<F>],
    cfg: &SimConfig<F>,
    passenger_rng: &mut ChaCha8Rng,
    mechanism_rng: &mut ChaCha8Rng,
) -> Result<RoundRecord<F>> {
    if drivers.is_empty() {
        return Err(Error::Config("at least one driver is required".into()));
    }
    let passengers = spawn_passengers(cfg.n_passengers, passenger_rng, &cfg.agent_cfg, &cfg.grid)?;
    let profile = build_preferences(
        drivers,
        &passengers,
        &cfg.weights,
        cfg.wait_threshold,
        cfg.passenger_scoring,
    );

    let outcome = match cfg.mechanism {
        Mechanism::Da => run_deferred_acceptance(&profile),
        Mechanism::Boston => run_boston(&profile),
        Mechanism::Random => run_random(&profile, mechanism_rng),
        Mechanism::Closest => {
            let locs: Vec<_> = drivers.iter().map(|d| d.location).collect();
            let pickups: Vec<_> = passengers.iter().map(|p| p.pickup).collect();
            run_closest(&locs, &pickups, &profile)?
        }
    };

    let mut rides = Vec::with_capacity(outcome.pairs.len());
    let mut income_deltas = vec![F::zero(); drivers.len()];
    for &(d, p) in &outcome.pairs {
        let driver = &mut drivers[d.0];
        let passenger = &passengers[p.0];
        rides.push(RideRecord {
            driver: d,
            passenger: p,
            fare: passenger.wtp,
            cost: compute_cost(driver.location, passenger.pickup, passenger.dropoff, driver.gamma),
        });
        income_deltas[d.0] = passenger.wtp;
        driver.apply_outcome(passenger);
    }
    let revenue = rides.iter().fold(F::zero(), |acc, r| acc + r.fare);

    Ok(RoundRecord {
        round,
        passengers,
        profile,
        outcome,
        rides,
        revenue,
        income_deltas,
    })
}

/// Round-by-round driver of a single seeded run.
#[derive(Debug, Clone)]
pub struct Simulation<F> {
    cfg: SimConfig<F>,
    drivers: Vec<DriverState<F>>,
    passenger_rng: ChaCha8Rng,
    mechanism_rng: ChaCha8Rng,
    stats: Vec<RoundStats<F>>,
}

impl<F: Scalar> Simulation<F> {
    pub fn new(cfg: SimConfig<F>) -> Result<Self> {
        cfg.validate()?;
        let mut driver_rng = stream(cfg.seed, DRIVER_STREAM);
        let drivers = spawn_drivers(cfg.n_drivers, &mut driver_rng, &cfg.agent_cfg, &cfg.grid)?;
        Ok(Self {
            passenger_rng: stream(cfg.seed, PASSENGER_STREAM),
            mechanism_rng: stream(cfg.seed, MECHANISM_STREAM),
            drivers,
            stats: Vec::with_capacity(cfg.n_rounds),
            cfg,
        })
    }

    pub fn config(&self) -> &SimConfig<F> {
        &self.cfg
    }

    pub fn drivers(&self) -> &[DriverState<F>] {
        &self.drivers
    }

    pub fn rounds_played(&self) -> usize {
        self.stats.len()
    }

    pub fn is_finished(&self) -> bool {
        self.stats.len() >= self.cfg.n_rounds
    }

    /// Plays the next round. Rounds past `n_rounds` may still be played.
    pub fn step(&mut self) -> Result<RoundRecord<F>> {
        let round = self.stats.len();
        let record = run_round(
            round,
            &mut self.drivers,
            &self.cfg,
            &mut self.passenger_rng,
            &mut self.mechanism_rng,
        )?;

        let (prev_rev, prev_rides) = self
            .stats
            .last()
            .map_or((F::zero(), 0), |s| (s.cumulative_revenue, s.cumulative_rides));
        let incomes: Vec<F> = self.drivers.iter().map(|d| d.total_income).collect();
        self.stats.push(RoundStats {
            round,
            revenue: record.revenue,
            rides: record.rides.len(),
            cumulative_revenue: prev_rev + record.revenue,
            cumulative_rides: prev_rides + record.rides.len(),
            mean_income: mean(&incomes),
            income_sd: population_sd(&incomes),
            gini: gini(&incomes),
        });
        Ok(record)
    }

    pub fn summary(&self) -> RunSummary<F> {
        let incomes: Vec<F> = self.drivers.iter().map(|d| d.total_income).collect();
        let total_revenue = self.stats.last().map_or(F::zero(), |s| s.cumulative_revenue);
        let total_rides = self.stats.last().map_or(0, |s| s.cumulative_rides);
        RunSummary {
            mechanism: self.cfg.mechanism,
            seed: self.cfg.seed,
            total_revenue,
            total_rides,
            revenue_per_ride: total_revenue / F::lit(total_rides.max(1) as f64),
            mean_income: mean(&incomes),
            income_sd: population_sd(&incomes),
            gini: gini(&incomes),
            total_profit: self.drivers.iter().map(|d| d.total_profit).sum(),
            driver_incomes: incomes,
            rounds: self.stats.clone(),
        }
    }
}

/// Runs `cfg.n_rounds` rounds and summarises them.
pub fn run_simulation<F: Scalar>(cfg: &SimConfig<F>) -> Result<RunSummary<F>> {
    let mut sim = Simulation::new(cfg.clone())?;
    while !sim.is_finished() {
        sim.step()?;
    }
    Ok(sim.summary())
}

/// Parameter varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// Total agents; split evenly between drivers and passengers.
    Agents,
    /// Passenger weight on driver income.
    WI,
    /// Driver weight on dropoff centre distance.
    WCenter,
}

impl SweepAxis {
    pub fn tag(self) -> &'static str {
        match self {
            SweepAxis::Agents => "agents",
            SweepAxis::WI => "w_i",
            SweepAxis::WCenter => "w_center",
        }
    }

    /// Applies one axis value to a copy of `base`.
    pub fn apply<F: Scalar>(self, base: &SimConfig<F>, value: F) -> Result<SimConfig<F>> {
        let mut cfg = base.clone();
        match self {
            SweepAxis::Agents => {
                let v = value.as_f64();
                if v < 2.0 || v.fract() != 0.0 || v % 2.0 != 0.0 {
                    return Err(Error::Config(format!(
                        "agent count {v} must be a positive even integer"
                    )));
                }
                let half = (v / 2.0) as usize;
                cfg.n_drivers = half;
                cfg.n_passengers = half;
            }
            SweepAxis::WI => cfg.weights.w_i = value,
            SweepAxis::WCenter => cfg.weights.w_center = value,
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [SweepAxis::Agents, SweepAxis::WI, SweepAxis::WCenter]
            .into_iter()
            .find(|a| a.tag() == s)
            .ok_or_else(|| Error::Config(format!("unknown sweep axis `{s}` (expected agents, w_i or w_center)")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell<F> {
    pub axis: SweepAxis,
    pub value: F,
    pub seed: u64,
    pub mechanism: Mechanism,
    pub summary: RunSummary<F>,
}

/// One run per (value, seed, mechanism), in that nesting order. Cells run in
/// parallel; the returned order is deterministic.
pub fn run_sweep<F: Scalar>(
    base: &SimConfig<F>,
    axis: SweepAxis,
    values: &[F],
    seeds: &[u64],
    mechanisms: &[Mechanism],
) -> Result<Vec<SweepCell<F>>> {
    if values.is_empty() || seeds.is_empty() || mechanisms.is_empty() {
        return Err(Error::Config(
            "sweep needs at least one value, seed and mechanism".into(),
        ));
    }
    let mut mechs = mechanisms.to_vec();
    mechs.sort();
    mechs.dedup();

    let mut jobs = Vec::new();
    for &value in values {
        let cfg = axis.apply(base, value)?;
        for &seed in seeds {
            for &mechanism in &mechs {
                let cfg = SimConfig {
                    seed,
                    mechanism,
                    ..cfg.clone()
                };
                jobs.push((value, cfg));
            }
        }
    }
    jobs.into_par_iter()
        .map(|(value, cfg)| {
            let summary = run_simulation(&cfg)?;
            Ok(SweepCell {
                axis,
                value,
                seed: cfg.seed,
                mechanism: cfg.mechanism,
                summary,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(mechanism: Mechanism, seed: u64) -> SimConfig<f64> {
        SimConfig {
            n_rounds: 5,
            mechanism,
            seed,
            ..Default::default()
        }
    }

    #[test]
    fn zero_counts_rejected() {
        for cfg in [
            SimConfig::<f64> {
                n_rounds: 0,
                ..Default::default()
            },
            SimConfig::<f64> {
                n_drivers: 0,
                ..Default::default()
            },
            SimConfig::<f64> {
                n_passengers: 0,
                ..Default::default()
            },
        ] {
            assert!(matches!(run_simulation(&cfg), Err(Error::Config(_))));
        }
    }

    #[test]
    fn empty_market_round() {
        // Nobody is willing to drive at cost coefficient 1.
        let cfg = SimConfig::<f64> {
            agent_cfg: AgentConfig {
                gamma_mean: 1.0,
                gamma_sd: 0.0,
                ..Default::default()
            },
            ..small(Mechanism::Da, 3)
        };
        let mut sim = Simulation::new(cfg).unwrap();
        let before = sim.drivers().to_vec();
        let rec = sim.step().unwrap();
        assert_eq!(rec.revenue, 0.0);
        assert!(rec.outcome.pairs.is_empty());
        assert_eq!(sim.drivers(), &before[..]);
    }

    #[test]
    fn singleton_revenue_is_fare_for_every_mechanism() {
        for m in Mechanism::ALL {
            let cfg = SimConfig::<f64> {
                n_drivers: 1,
                n_passengers: 1,
                wait_threshold: 1e9,
                agent_cfg: AgentConfig {
                    gamma_mean: 0.0,
                    gamma_sd: 0.0,
                    ..Default::default()
                },
                ..small(m, 1)
            };
            let mut sim = Simulation::new(cfg).unwrap();
            let rec = sim.step().unwrap();
            assert_eq!(rec.outcome.pairs.len(), 1, "{m}");
            assert_eq!(rec.revenue, rec.passengers[0].wtp);
        }
    }

    #[test]
    fn matched_driver_starts_next_round_at_dropoff() {
        let mut sim = Simulation::new(small(Mechanism::Da, 17)).unwrap();
        let r1 = sim.step().unwrap();
        let &(d, p) = r1.outcome.pairs.first().expect("some ride in round one");
        let dropoff = r1.passengers[p.0].dropoff;
        assert_eq!(sim.drivers()[d.0].location, dropoff);
        let start = sim.drivers()[d.0].visited[0];
        assert_eq!(sim.drivers()[d.0].visited, vec![start, dropoff]);
        sim.step().unwrap();
        let trace = &sim.drivers()[d.0].visited;
        assert_eq!(trace[1], dropoff);
        assert_eq!(*trace.last().unwrap(), sim.drivers()[d.0].location);
    }

    #[test]
    fn deterministic_and_conserving() {
        for m in Mechanism::ALL {
            let a = run_simulation(&small(m, 9)).unwrap();
            let b = run_simulation(&small(m, 9)).unwrap();
            assert_eq!(a, b);
            let by_rounds: f64 = a.rounds.iter().map(|r| r.revenue).sum();
            let by_drivers: f64 = a.driver_incomes.iter().sum();
            assert!((by_rounds - a.total_revenue).abs() <= 1e-9 * a.total_revenue.max(1.0));
            assert!((by_drivers - a.total_revenue).abs() <= 1e-9 * a.total_revenue.max(1.0));
        }
    }

    #[test]
    fn mechanism_does_not_change_passenger_stream() {
        let mut a = Simulation::new(small(Mechanism::Da, 4)).unwrap();
        let mut b = Simulation::new(small(Mechanism::Random, 4)).unwrap();
        assert_eq!(a.drivers(), b.drivers());
        let ra = a.step().unwrap();
        let rb = b.step().unwrap();
        assert_eq!(ra.passengers, rb.passengers);
    }

    #[test]
    fn f32_runs() {
        let cfg = SimConfig::<f32> {
            n_rounds: 3,
            ..Default::default()
        };
        let s = run_simulation(&cfg).unwrap();
        assert_eq!(s.rounds.len(), 3);
        assert!(s.total_revenue >= 0.0);
    }

    #[test]
    fn sweep_axes() {
        let base = SimConfig::<f64>::default();
        let cfg = SweepAxis::Agents.apply(&base, 30.0).unwrap();
        assert_eq!((cfg.n_drivers, cfg.n_passengers), (15, 15));
        assert!(SweepAxis::Agents.apply(&base, 31.0).is_err());
        assert!(SweepAxis::Agents.apply(&base, 0.0).is_err());
        assert_eq!(SweepAxis::WI.apply(&base, 1.0).unwrap().weights.w_i, 1.0);
        assert_eq!(SweepAxis::WCenter.apply(&base, 2.0).unwrap().weights.w_center, 2.0);
        assert_eq!("w_center".parse::<SweepAxis>().unwrap(), SweepAxis::WCenter);
        assert!("speed".parse::<SweepAxis>().is_err());
    }

    #[test]
    fn degenerate_sweep_equals_single_run() {
        let base = small(Mechanism::Da, 0);
        let cells = run_sweep(&base, SweepAxis::WI, &[0.0], &[6], &[Mechanism::Da]).unwrap();
        assert_eq!(cells.len(), 1);
        let direct = run_simulation(&SimConfig { seed: 6, ..base }).unwrap();
        assert_eq!(cells[0].summary, direct);
    }

    #[test]
    fn sweep_order_and_validation() {
        let base = small(Mechanism::Da, 0);
        let cells = run_sweep(
            &base,
            SweepAxis::Agents,
            &[4.0, 6.0],
            &[1, 2],
            &[Mechanism::Random, Mechanism::Da],
        )
        .unwrap();
        let keys: Vec<(f64, u64, Mechanism)> = cells.iter().map(|c| (c.value, c.seed, c.mechanism)).collect();
        assert_eq!(
            keys,
            vec![
                (4.0, 1, Mechanism::Da),
                (4.0, 1, Mechanism::Random),
                (4.0, 2, Mechanism::Da),
                (4.0, 2, Mechanism::Random),
                (6.0, 1, Mechanism::Da),
                (6.0, 1, Mechanism::Random),
                (6.0, 2, Mechanism::Da),
                (6.0, 2, Mechanism::Random),
            ]
        );
        assert!(run_sweep(&base, SweepAxis::WI, &[], &[1], &[Mechanism::Da]).is_err());
    }
}
