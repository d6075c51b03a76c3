use crate::error::{Error, Result};
use crate::ids::{DriverId, PassengerId};
use crate::scalar::Scalar;

/// Both sides' ranked lists of acceptable partners.
///
/// Lists are ascending in score (lower is better) with ties broken by the
/// counterpart's id. A pair is listed on one side exactly when it is listed on
/// the other.
#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceProfile<F> {
    driver_lists: Vec<Vec<(PassengerId, F)>>,
    passenger_lists: Vec<Vec<(DriverId, F)>>,
    driver_rank: Vec<Vec<Option<usize>>>,
    passenger_rank: Vec<Vec<Option<usize>>>,
}

fn check_sorted<I: Ord + Copy + std::fmt::Display, F: Scalar>(
    side: &str,
    owner: usize,
    list: &[(I, F)],
    bound: usize,
    index: impl Fn(I) -> usize,
) -> Result<()> {
    for &(id, score) in list {
        if index(id) >= bound {
            return Err(Error::Profile(format!("{side} {owner} lists unknown counterpart {id}")));
        }
        if score.is_nan() {
            return Err(Error::Profile(format!("{side} {owner} has a NaN score for {id}")));
        }
    }
    for w in list.windows(2) {
        let ((a, sa), (b, sb)) = (w[0], w[1]);
        let ascending = sa < sb || (sa == sb && a < b);
        if !ascending {
            return Err(Error::Profile(format!(
                "{side} {owner} list is not strictly ascending at {a}, {b}"
            )));
        }
    }
    Ok(())
}

impl<F: Scalar> PreferenceProfile<F> {
    pub fn new(driver_lists: Vec<Vec<(PassengerId, F)>>, passenger_lists: Vec<Vec<(DriverId, F)>>) -> Result<Self> {
        let (nd, np) = (driver_lists.len(), passenger_lists.len());
        for (d, list) in driver_lists.iter().enumerate() {
            check_sorted("driver", d, list, np, |p: PassengerId| p.0)?;
        }
        for (p, list) in passenger_lists.iter().enumerate() {
            check_sorted("passenger", p, list, nd, |d: DriverId| d.0)?;
        }

        let mut driver_rank = vec![vec![None; np]; nd];
        for (d, list) in driver_lists.iter().enumerate() {
            for (r, &(p, _)) in list.iter().enumerate() {
                driver_rank[d][p.0] = Some(r);
            }
        }
        let mut passenger_rank = vec![vec![None; nd]; np];
        for (p, list) in passenger_lists.iter().enumerate() {
            for (r, &(d, _)) in list.iter().enumerate() {
                passenger_rank[p][d.0] = Some(r);
            }
        }
        for d in 0..nd {
            for p in 0..np {
                if driver_rank[d][p].is_some() != passenger_rank[p][d].is_some() {
                    return Err(Error::Profile(format!("pair (D{d}, P{p}) is listed by one side only")));
                }
            }
        }

        Ok(Self {
            driver_lists,
            passenger_lists,
            driver_rank,
            passenger_rank,
        })
    }

    /// Builds a profile from plain orderings; each entry's score is its position.
    pub fn from_orders(driver_orders: &[Vec<usize>], passenger_orders: &[Vec<usize>]) -> Result<Self> {
        let driver_lists = driver_orders
            .iter()
            .map(|o| {
                o.iter()
                    .enumerate()
                    .map(|(r, &p)| (PassengerId(p), F::lit(r as f64)))
                    .collect()
            })
            .collect();
        let passenger_lists = passenger_orders
            .iter()
            .map(|o| {
                o.iter()
                    .enumerate()
                    .map(|(r, &d)| (DriverId(d), F::lit(r as f64)))
                    .collect()
            })
            .collect();
        Self::new(driver_lists, passenger_lists)
    }

    pub fn n_drivers(&self) -> usize {
        self.driver_lists.len()
    }

    pub fn n_passengers(&self) -> usize {
        self.passenger_lists.len()
    }

    pub fn driver_list(&self, d: DriverId) -> &[(PassengerId, F)] {
        &self.driver_lists[d.0]
    }

    pub fn passenger_list(&self, p: PassengerId) -> &[(DriverId, F)] {
        &self.passenger_lists[p.0]
    }

    pub fn driver_lists(&self) -> &[Vec<(PassengerId, F)>] {
        &self.driver_lists
    }

    pub fn passenger_lists(&self) -> &[Vec<(DriverId, F)>] {
        &self.passenger_lists
    }

    /// Position of `p` in `d`'s list, if acceptable.
    pub fn driver_rank(&self, d: DriverId, p: PassengerId) -> Option<usize> {
        self.driver_rank[d.0][p.0]
    }

    pub fn passenger_rank(&self, p: PassengerId, d: DriverId) -> Option<usize> {
        self.passenger_rank[p.0][d.0]
    }

    pub fn is_admissible(&self, d: DriverId, p: PassengerId) -> bool {
        self.driver_rank[d.0][p.0].is_some()
    }

    /// Whether `d` strictly prefers `a` to `b`; `None` means unmatched, which
    /// is worse than any acceptable partner.
    pub fn driver_prefers(&self, d: DriverId, a: Option<PassengerId>, b: Option<PassengerId>) -> bool {
        let rank = |x: Option<PassengerId>| x.and_then(|p| self.driver_rank(d, p));
        strictly_better(rank(a), rank(b))
    }

    pub fn passenger_prefers(&self, p: PassengerId, a: Option<DriverId>, b: Option<DriverId>) -> bool {
        let rank = |x: Option<DriverId>| x.and_then(|d| self.passenger_rank(p, d));
        strictly_better(rank(a), rank(b))
    }

    pub fn admissible_pairs(&self) -> usize {
        self.driver_lists.iter().map(Vec::len).sum()
    }

    /// Copy of the profile with driver `d`'s list replaced by `report`.
    /// Passengers absent from the report drop `d` from their own lists.
    pub fn with_driver_report(&self, d: DriverId, report: &[PassengerId]) -> Result<Self> {
        let mut driver_lists = self.driver_lists.clone();
        driver_lists[d.0] = report.iter().enumerate().map(|(r, &p)| (p, F::lit(r as f64))).collect();
        let mut passenger_lists = self.passenger_lists.clone();
        for (p, list) in passenger_lists.iter_mut().enumerate() {
            if !report.contains(&PassengerId(p)) {
                list.retain(|&(x, _)| x != d);
            }
        }
        for &p in report {
            if self.passenger_rank(p, d).is_none() {
                return Err(Error::Inadmissible {
                    driver: d.0,
                    passenger: p.0,
                });
            }
        }
        Self::new(driver_lists, passenger_lists)
    }
}

fn strictly_better(a: Option<usize>, b: Option<usize>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x < y,
        (Some(_), None) => true,
        (None, _) => false,
    }
}
