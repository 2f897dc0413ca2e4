//! Worst-case energy accounting and lifetime maximization for a single-hop
//! network where the base-station polls every node once per slot.
//!
//! All arithmetic is exact ([`BigRational`]), so comparisons between
//! schedules never depend on rounding.

use std::fmt;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::correlation::JointSupport;
use crate::error::{Error, Result};
use crate::protocol::{check_schedule, slice_mask, step_bits, worst_case_budget, Accounting, BitBudget};
use crate::scheduling::{brute_force_by, mcn, Schedule, StepCost};

pub type Energy = BigRational;

/// Per-bit transmit costs, reception cost and energy reserves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergyParams {
    path_loss: Vec<Energy>,
    rx_cost: Energy,
    node_energy: Vec<Energy>,
    bs_energy: Energy,
}

impl EnergyParams {
    pub fn new(path_loss: Vec<Energy>, rx_cost: Energy, node_energy: Vec<Energy>, bs_energy: Energy) -> Result<Self> {
        if path_loss.len() != node_energy.len() {
            return Err(Error::DimensionMismatch {
                expected: path_loss.len(),
                found: node_energy.len(),
            });
        }
        if path_loss.is_empty() {
            return Err(Error::InvalidEnergy("at least one node is required".into()));
        }
        if path_loss.iter().any(|d| !d.is_positive()) {
            return Err(Error::InvalidEnergy("path loss must be positive".into()));
        }
        if rx_cost.is_negative() {
            return Err(Error::InvalidEnergy("reception cost must be non-negative".into()));
        }
        if node_energy.iter().any(|e| !e.is_positive()) || !bs_energy.is_positive() {
            return Err(Error::InvalidEnergy("energy reserves must be positive".into()));
        }
        Ok(EnergyParams {
            path_loss,
            rx_cost,
            node_energy,
            bs_energy,
        })
    }

    /// Same path loss and reserve for every node.
    pub fn uniform(
        n: usize,
        path_loss: Energy,
        rx_cost: Energy,
        node_energy: Energy,
        bs_energy: Energy,
    ) -> Result<Self> {
        Self::new(vec![path_loss; n], rx_cost, vec![node_energy; n], bs_energy)
    }

    pub fn len(&self) -> usize {
        self.path_loss.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path_loss.is_empty()
    }

    pub fn path_loss(&self) -> &[Energy] {
        &self.path_loss
    }

    pub fn rx_cost(&self) -> &Energy {
        &self.rx_cost
    }

    pub fn node_energy(&self) -> &[Energy] {
        &self.node_energy
    }

    pub fn bs_energy(&self) -> &Energy {
        &self.bs_energy
    }

    /// Multiplies every reserve (nodes and base-station) by `factor`.
    pub fn scale_energy(&self, factor: &Energy) -> Result<Self> {
        Self::new(
            self.path_loss.clone(),
            self.rx_cost.clone(),
            self.node_energy.iter().map(|e| e * factor).collect(),
            &self.bs_energy * factor,
        )
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.len(),
            });
        }
        Ok(())
    }

    /// `(base-station side, node side)` energy of one exchange with node `i`.
    fn exchange_energy(&self, i: usize, uplink: u64, downlink: u64) -> (Energy, Energy) {
        let up = BigRational::from_integer(BigInt::from(uplink));
        let down = BigRational::from_integer(BigInt::from(downlink));
        let d = &self.path_loss[i];
        let bs = &down * d + &up * &self.rx_cost;
        let node = &up * d + &down * &self.rx_cost;
        (bs, node)
    }
}

/// Per-node worst-case energy per slot, indexed by node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergyProfile {
    /// `Ê_BS,i`: spent by the base-station on node `i`.
    pub bs_side: Vec<Energy>,
    /// `Ê_i,BS`: spent by node `i` itself.
    pub node_side: Vec<Energy>,
}

impl EnergyProfile {
    /// `bs_side − node_side` per node, equal to `(B̂_i − Î_i)(d_i − E_r)`.
    pub fn energy_gap(&self) -> Vec<Energy> {
        energy_gap(self)
    }

    pub fn bs_total(&self) -> Energy {
        self.bs_side.iter().sum()
    }
}

pub fn energy_profile(budget: &BitBudget, params: &EnergyParams) -> Result<EnergyProfile> {
    let n = budget.uplink.len();
    if budget.downlink.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: budget.downlink.len(),
        });
    }
    params.check_len(n)?;
    let (bs_side, node_side) = (0..n)
        .map(|i| params.exchange_energy(i, budget.uplink[i], budget.downlink[i]))
        .unzip();
    Ok(EnergyProfile { bs_side, node_side })
}

pub fn energy_gap(profile: &EnergyProfile) -> Vec<Energy> {
    profile
        .bs_side
        .iter()
        .zip(&profile.node_side)
        .map(|(b, n)| b - n)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bottleneck {
    BaseStation,
    Node(usize),
}

impl fmt::Display for Bottleneck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bottleneck::BaseStation => f.write_str("bs"),
            Bottleneck::Node(i) => write!(f, "node {i}"),
        }
    }
}

/// Worst-case lifetime of one schedule.
///
/// `inverse = max(bs_load, node_load)` is always finite; the lifetime itself
/// is its reciprocal and is unbounded when nothing is ever spent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LifetimeResult {
    pub schedule: Schedule,
    /// `Σ_i Ê_BS,i / E_BS`.
    pub bs_load: Energy,
    /// `max_i Ê_i,BS / E_i`.
    pub node_load: Energy,
    pub inverse: Energy,
    pub bottleneck: Bottleneck,
}

impl LifetimeResult {
    /// `L̂` in slots, `None` when unbounded.
    pub fn lifetime(&self) -> Option<Energy> {
        (!self.inverse.is_zero()).then(|| self.inverse.recip())
    }

    fn evaluate(schedule: Schedule, profile: &EnergyProfile, params: &EnergyParams) -> Self {
        let bs_load = profile.bs_total() / params.bs_energy();
        let mut node_load = BigRational::zero();
        let mut worst_node = 0;
        for (i, (spent, reserve)) in profile.node_side.iter().zip(params.node_energy()).enumerate() {
            let load = spent / reserve;
            if load > node_load {
                node_load = load;
                worst_node = i;
            }
        }
        let (inverse, bottleneck) = if bs_load >= node_load {
            (bs_load.clone(), Bottleneck::BaseStation)
        } else {
            (node_load.clone(), Bottleneck::Node(worst_node))
        };
        LifetimeResult {
            schedule,
            bs_load,
            node_load,
            inverse,
            bottleneck,
        }
    }
}

impl fmt::Display for LifetimeResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "schedule {}", self.schedule)?;
        match self.lifetime() {
            Some(l) => writeln!(f, "lifetime {} {}", fraction(&l), decimal(&l, 6))?,
            None => writeln!(f, "lifetime unbounded")?,
        }
        writeln!(f, "inverse {}", fraction(&self.inverse))?;
        writeln!(f, "bs_load {}", fraction(&self.bs_load))?;
        writeln!(f, "node_load {}", fraction(&self.node_load))?;
        writeln!(f, "bottleneck {}", self.bottleneck)
    }
}

/// Always `num/den`, even for integers.
pub fn fraction(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Exact decimal rounded half away from zero to `places` digits.
pub fn decimal(x: &BigRational, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let scaled = x * BigRational::from_integer(scale.clone());
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let rounded = if scaled.is_negative() {
        -((-scaled + half).floor())
    } else {
        (scaled + half).floor()
    }
    .to_integer();
    let (int, frac) = rounded.abs().div_rem(&scale);
    let sign = if rounded.is_negative() { "-" } else { "" };
    if places == 0 {
        return format!("{sign}{int}");
    }
    format!("{sign}{int}.{:0>width$}", frac.to_string(), width = places as usize)
}

/// Step cost `Ê_BS,i` given the already-polled set.
pub struct BsSideCost<'a> {
    pub js: &'a JointSupport,
    pub params: &'a EnergyParams,
    pub acct: Accounting,
}

impl StepCost for BsSideCost<'_> {
    type Cost = Energy;

    fn cost(&self, candidate: usize, polled: &[usize]) -> Energy {
        let (up, down) = step_bits(self.js, self.acct, candidate, slice_mask(polled));
        self.params.exchange_energy(candidate, up, down).0
    }
}

/// Step cost `Ê_i,BS / E_i` given the already-polled set.
pub struct NodeLoadCost<'a> {
    pub js: &'a JointSupport,
    pub params: &'a EnergyParams,
    pub acct: Accounting,
}

impl StepCost for NodeLoadCost<'_> {
    type Cost = Energy;

    fn cost(&self, candidate: usize, polled: &[usize]) -> Energy {
        let (up, down) = step_bits(self.js, self.acct, candidate, slice_mask(polled));
        self.params.exchange_energy(candidate, up, down).1 / &self.params.node_energy[candidate]
    }
}

pub fn lifetime_of_schedule(
    js: &JointSupport,
    schedule: &Schedule,
    params: &EnergyParams,
    acct: impl Into<Accounting>,
) -> Result<LifetimeResult> {
    check_schedule(js, schedule)?;
    params.check_len(js.num_informants())?;
    let budget = worst_case_budget(js, schedule, acct)?;
    let profile = energy_profile(&budget, params)?;
    Ok(LifetimeResult::evaluate(schedule.clone(), &profile, params))
}

/// MCN on the base-station side cost; targets `min_π Σ Ê_BS,π(i) / E_BS`.
pub fn mcn_sum(js: &JointSupport, params: &EnergyParams, acct: impl Into<Accounting>) -> Result<Schedule> {
    params.check_len(js.num_informants())?;
    let costs = BsSideCost {
        js,
        params,
        acct: acct.into(),
    };
    Ok(mcn(&costs, js.num_informants()))
}

/// MCN on the normalized node-side cost; targets `min_π max_i Ê_π(i),BS / E_π(i)`.
pub fn mcn_max(js: &JointSupport, params: &EnergyParams, acct: impl Into<Accounting>) -> Result<Schedule> {
    params.check_len(js.num_informants())?;
    let costs = NodeLoadCost {
        js,
        params,
        acct: acct.into(),
    };
    Ok(mcn(&costs, js.num_informants()))
}

/// Both MCN candidates and the better of the two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimizedLifetime {
    pub best: LifetimeResult,
    pub sum_candidate: LifetimeResult,
    pub max_candidate: LifetimeResult,
}

impl fmt::Display for OptimizedLifetime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.best)?;
        for (label, c) in [("sum", &self.sum_candidate), ("max", &self.max_candidate)] {
            writeln!(
                f,
                "candidate {label} schedule {} inverse {}",
                c.schedule,
                fraction(&c.inverse)
            )?;
        }
        Ok(())
    }
}

/// Evaluates the MCN-sum and MCN-max schedules and keeps the longer-lived
/// one (MCN-sum on ties).
pub fn optimize_lifetime(
    js: &JointSupport,
    params: &EnergyParams,
    acct: impl Into<Accounting>,
) -> Result<OptimizedLifetime> {
    let acct = acct.into();
    let sum_candidate = lifetime_of_schedule(js, &mcn_sum(js, params, acct)?, params, acct)?;
    let max_candidate = lifetime_of_schedule(js, &mcn_max(js, params, acct)?, params, acct)?;
    let best = if sum_candidate.inverse <= max_candidate.inverse {
        sum_candidate.clone()
    } else {
        max_candidate.clone()
    };
    Ok(OptimizedLifetime {
        best,
        sum_candidate,
        max_candidate,
    })
}

/// Exhaustive lifetime optimum over all `N!` schedules.
pub fn brute_force_lifetime(
    js: &JointSupport,
    params: &EnergyParams,
    acct: impl Into<Accounting>,
) -> Result<LifetimeResult> {
    let acct = acct.into();
    params.check_len(js.num_informants())?;
    let (schedule, _) = brute_force_by(js.num_informants(), |s| {
        lifetime_of_schedule(js, s, params, acct)
            .expect("valid schedule")
            .inverse
    })?;
    lifetime_of_schedule(js, &schedule, params, acct)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::Alphabet;
    use crate::protocol::ProtocolKind;

    fn q(n: i64, d: i64) -> Energy {
        BigRational::new(n.into(), d.into())
    }

    fn int(n: i64) -> Energy {
        q(n, 1)
    }

    fn budget(up: &[u64], down: &[u64]) -> BitBudget {
        BitBudget {
            schedule: Schedule::identity(up.len()),
            uplink: up.to_vec(),
            downlink: down.to_vec(),
        }
    }

    #[test]
    fn profile_without_reception_cost() {
        let params = EnergyParams::uniform(1, int(1), int(0), int(20), int(80)).unwrap();
        let p = energy_profile(&budget(&[2], &[8]), &params).unwrap();
        assert_eq!(p.bs_side, vec![int(8)]);
        assert_eq!(p.node_side, vec![int(2)]);
    }

    #[test]
    fn profile_with_reception_cost() {
        let params = EnergyParams::uniform(1, int(2), int(1), int(20), int(80)).unwrap();
        let p = energy_profile(&budget(&[1], &[4]), &params).unwrap();
        assert_eq!(p.bs_side, vec![int(9)]);
        assert_eq!(p.node_side, vec![int(6)]);
        assert_eq!(p.energy_gap(), vec![int(3)]);
    }

    #[test]
    fn gap_vanishes_when_path_loss_equals_reception_cost() {
        let params = EnergyParams::uniform(2, q(3, 2), q(3, 2), int(1), int(1)).unwrap();
        let p = energy_profile(&budget(&[1, 3], &[4, 11]), &params).unwrap();
        assert!(p.energy_gap().iter().all(Zero::is_zero));
    }

    #[test]
    fn profile_dimension_mismatch() {
        let params = EnergyParams::uniform(3, int(1), int(0), int(1), int(1)).unwrap();
        assert!(matches!(
            energy_profile(&budget(&[1], &[2]), &params),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn params_validation() {
        assert!(EnergyParams::uniform(1, int(0), int(0), int(1), int(1)).is_err());
        assert!(EnergyParams::uniform(1, int(1), int(-1), int(1), int(1)).is_err());
        assert!(EnergyParams::uniform(1, int(1), int(0), int(0), int(1)).is_err());
        assert!(EnergyParams::uniform(1, int(1), int(0), int(1), int(0)).is_err());
        assert!(EnergyParams::new(vec![int(1)], int(0), vec![], int(1)).is_err());
    }

    #[test]
    fn single_node_lifetime_ties_to_base_station() {
        // One informant over 4 symbols: uplink 2, downlink 8.
        let js = JointSupport::uniform(1, Alphabet::new(4).unwrap(), (0..4).map(|x| vec![x])).unwrap();
        let params = EnergyParams::uniform(1, int(1), int(0), int(20), int(80)).unwrap();
        let r = lifetime_of_schedule(&js, &Schedule::identity(1), &params, ProtocolKind::TwoMessage).unwrap();
        assert_eq!(r.lifetime(), Some(int(10)));
        assert_eq!(r.bottleneck, Bottleneck::BaseStation);
        assert_eq!(&r.inverse * r.lifetime().unwrap(), int(1));
    }

    #[test]
    fn unbounded_lifetime_on_unary_alphabet() {
        let js = JointSupport::uniform(2, Alphabet::new(1).unwrap(), [vec![0, 0]]).unwrap();
        let params = EnergyParams::uniform(2, int(1), int(1), int(1), int(1)).unwrap();
        let r = lifetime_of_schedule(&js, &Schedule::identity(2), &params, ProtocolKind::TwoMessage).unwrap();
        assert_eq!(r.lifetime(), None);
        assert!(r.to_string().contains("lifetime unbounded"));
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(decimal(&q(10, 1), 6), "10.000000");
        assert_eq!(decimal(&q(2, 3), 6), "0.666667");
        assert_eq!(decimal(&q(-1, 8), 2), "-0.13");
        assert_eq!(decimal(&q(5, 2), 0), "3");
        assert_eq!(fraction(&int(4)), "4/1");
    }

    #[test]
    fn symmetric_fixture_gives_identity_schedules() {
        let js = JointSupport::uniform(3, Alphabet::new(4).unwrap(), (0..4).map(|x| vec![x; 3])).unwrap();
        let params = EnergyParams::uniform(3, int(2), int(1), int(50), int(50)).unwrap();
        assert_eq!(
            mcn_sum(&js, &params, ProtocolKind::TwoMessage).unwrap(),
            Schedule::identity(3)
        );
        assert_eq!(
            mcn_max(&js, &params, ProtocolKind::TwoMessage).unwrap(),
            Schedule::identity(3)
        );
        let one = JointSupport::uniform(1, Alphabet::new(4).unwrap(), [vec![1]]).unwrap();
        let p1 = EnergyParams::uniform(1, int(2), int(1), int(50), int(50)).unwrap();
        assert_eq!(
            mcn_sum(&one, &p1, ProtocolKind::TwoMessage).unwrap(),
            Schedule::identity(1)
        );
    }
}
