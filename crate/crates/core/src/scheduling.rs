//! Polling schedules: the Minimum Cost Next greedy, exhaustive search over all
//! `N!` schedules, and solvers for the four communication objectives.

use std::fmt;
use std::ops::Add;

use itertools::Itertools;

use crate::correlation::JointSupport;
use crate::error::{Error, Result};
use crate::protocol::{
    objective, optimal_message_count, slice_mask, step_bits, worst_case_budget, Accounting, BitBudget, Problem,
    ProtocolKind,
};

/// Largest `N` for which exhaustive search is allowed (`8! = 40320` schedules).
pub const BRUTE_FORCE_CAP: usize = 8;

/// Order in which the recipient polls the informants.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Schedule(Vec<usize>);

impl Schedule {
    /// Accepts any permutation of `0..order.len()`.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &i in &order {
            if i >= order.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidSchedule(order));
            }
        }
        Ok(Schedule(order))
    }

    pub fn identity(n: usize) -> Self {
        Schedule((0..n).collect())
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Position at which informant `i` is polled.
    pub fn position_of(&self, i: usize) -> Option<usize> {
        self.0.iter().position(|&x| x == i)
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.iter().join(" "))
    }
}

/// Cost of polling `candidate` next when `polled` (in polling order) have
/// already been decoded. Must be deterministic in `(candidate, set of polled)`.
pub trait StepCost {
    type Cost: PartialOrd + Clone;

    fn cost(&self, candidate: usize, polled: &[usize]) -> Self::Cost;
}

impl<F, C> StepCost for F
where
    F: Fn(usize, &[usize]) -> C,
    C: PartialOrd + Clone,
{
    type Cost = C;

    fn cost(&self, candidate: usize, polled: &[usize]) -> C {
        self(candidate, polled)
    }
}

/// Minimum Cost Next: repeatedly poll the unpolled informant with the smallest
/// step cost. Ties go to the lowest index.
pub fn mcn<S: StepCost + ?Sized>(costs: &S, n: usize) -> Schedule {
    let mut polled: Vec<usize> = Vec::with_capacity(n);
    let mut remaining: Vec<usize> = (0..n).collect();
    while !remaining.is_empty() {
        let mut best: Option<(usize, S::Cost)> = None;
        for (slot, &candidate) in remaining.iter().enumerate() {
            let c = costs.cost(candidate, &polled);
            if best.as_ref().is_none_or(|(_, b)| c < *b) {
                best = Some((slot, c));
            }
        }
        let (slot, _) = best.expect("remaining is non-empty");
        polled.push(remaining.remove(slot));
    }
    Schedule(polled)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregate {
    Max,
    Sum,
}

/// Per-position step costs of a schedule.
pub fn step_costs<S: StepCost + ?Sized>(costs: &S, schedule: &Schedule) -> Vec<S::Cost> {
    let order = schedule.order();
    (0..order.len()).map(|k| costs.cost(order[k], &order[..k])).collect()
}

/// Max or sum of the step costs along `schedule`.
pub fn schedule_value<S>(costs: &S, schedule: &Schedule, aggregate: Aggregate) -> S::Cost
where
    S: StepCost + ?Sized,
    S::Cost: Add<Output = S::Cost>,
{
    let mut steps = step_costs(costs, schedule).into_iter();
    let first = steps.next().expect("schedule is non-empty");
    steps.fold(first, |acc, c| match aggregate {
        Aggregate::Max => {
            if c > acc {
                c
            } else {
                acc
            }
        }
        Aggregate::Sum => acc + c,
    })
}

/// Exhaustive minimum of `value` over all `n!` schedules. Schedules are
/// visited in lexicographic order and only a strictly better value replaces
/// the incumbent, so ties resolve to the lexicographically smallest schedule.
pub fn brute_force_by<V, F>(n: usize, mut value: F) -> Result<(Schedule, V)>
where
    V: PartialOrd,
    F: FnMut(&Schedule) -> V,
{
    if n > BRUTE_FORCE_CAP {
        return Err(Error::TooLarge {
            count: n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    if n == 0 {
        return Err(Error::InvalidSchedule(Vec::new()));
    }
    let mut best: Option<(Schedule, V)> = None;
    for order in (0..n).permutations(n) {
        let schedule = Schedule(order);
        let v = value(&schedule);
        if best.as_ref().is_none_or(|(_, b)| v < *b) {
            best = Some((schedule, v));
        }
    }
    Ok(best.expect("n >= 1 yields at least one schedule"))
}

/// Exhaustive optimum of an aggregated step cost.
pub fn brute_force<S>(costs: &S, n: usize, aggregate: Aggregate) -> Result<(Schedule, S::Cost)>
where
    S: StepCost + ?Sized,
    S::Cost: Add<Output = S::Cost>,
{
    brute_force_by(n, |s| schedule_value(costs, s, aggregate))
}

/// Worst-case uplink bits `⌈log2 μ̂⌉` of the candidate (uncoded width under one message).
#[derive(Debug, Clone, Copy)]
pub struct UplinkCost<'a> {
    pub js: &'a JointSupport,
    pub acct: Accounting,
}

impl<'a> UplinkCost<'a> {
    pub fn new(js: &'a JointSupport, acct: impl Into<Accounting>) -> Self {
        UplinkCost { js, acct: acct.into() }
    }
}

impl StepCost for UplinkCost<'_> {
    type Cost = u64;

    fn cost(&self, candidate: usize, polled: &[usize]) -> u64 {
        step_bits(self.js, self.acct, candidate, slice_mask(polled)).0
    }
}

/// Uplink plus downlink bits of the candidate's exchange.
#[derive(Debug, Clone, Copy)]
pub struct ExchangeCost<'a> {
    pub js: &'a JointSupport,
    pub acct: Accounting,
}

impl StepCost for ExchangeCost<'_> {
    type Cost = u64;

    fn cost(&self, candidate: usize, polled: &[usize]) -> u64 {
        let (up, down) = step_bits(self.js, self.acct, candidate, slice_mask(polled));
        up + down
    }
}

/// Greedy result reported next to the exhaustive optimum for objectives
/// where greedy optimality is not established.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeuristicGap {
    pub schedule: Schedule,
    pub objective: u64,
    /// `objective - optimum`.
    pub gap: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub problem: Problem,
    pub kind: ProtocolKind,
    pub schedule: Schedule,
    pub objective: u64,
    pub budget: BitBudget,
    pub heuristic: Option<HeuristicGap>,
}

impl fmt::Display for SolveReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "problem {}", self.problem)?;
        writeln!(f, "protocol {}", self.kind)?;
        writeln!(f, "schedule {}", self.schedule)?;
        writeln!(f, "uplink {}", self.budget.uplink.iter().join(" "))?;
        writeln!(f, "downlink {}", self.budget.downlink.iter().join(" "))?;
        writeln!(f, "recipient_total {}", self.budget.recipient_total())?;
        writeln!(f, "objective {}", self.objective)?;
        if let Some(h) = &self.heuristic {
            writeln!(f, "mcn_schedule {}", h.schedule)?;
            writeln!(f, "mcn_objective {}", h.objective)?;
            writeln!(f, "mcn_gap {}", h.gap)?;
        }
        Ok(())
    }
}

/// Solves one of the four objectives.
///
/// Problem 1 uses MCN on the two-message uplink cost and accepts any `N`.
/// Problem 2 is the uncoded one-message protocol in identity order. Problems
/// 3 and 4 use exhaustive search under [`optimal_message_count`], with the
/// greedy schedule reported alongside.
pub fn solve_problem(js: &JointSupport, problem: Problem) -> Result<SolveReport> {
    solve_problem_with(js, problem, false)
}

/// [`solve_problem`] with the optional `⌈log2 log2 μ̂⌉` downlink charge.
pub fn solve_problem_with(js: &JointSupport, problem: Problem, loglog_overhead: bool) -> Result<SolveReport> {
    let n = js.num_informants();
    if problem != Problem::MaxInformant && n > BRUTE_FORCE_CAP {
        return Err(Error::TooLarge {
            count: n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let kind = optimal_message_count(problem);
    let acct = Accounting { kind, loglog_overhead };
    let (schedule, heuristic) = match problem {
        Problem::MaxInformant => (mcn(&UplinkCost { js, acct }, n), None),
        Problem::MaxOverall => (Schedule::identity(n), None),
        Problem::SumInformant | Problem::SumOverall => {
            let (best, optimum) = brute_force_by(n, |s| {
                objective(&worst_case_budget(js, s, acct).expect("valid schedule"), problem)
            })?;
            let greedy = if problem == Problem::SumInformant {
                mcn(&UplinkCost { js, acct }, n)
            } else {
                mcn(&ExchangeCost { js, acct }, n)
            };
            let greedy_value = objective(&worst_case_budget(js, &greedy, acct)?, problem);
            let gap = HeuristicGap {
                schedule: greedy,
                objective: greedy_value,
                gap: greedy_value - optimum,
            };
            (best, Some(gap))
        }
    };
    let budget = worst_case_budget(js, &schedule, acct)?;
    Ok(SolveReport {
        problem,
        kind,
        objective: objective(&budget, problem),
        schedule,
        budget,
        heuristic,
    })
}

/// One step of the prefix-exchange transformation: move `target`'s element at
/// the first differing position forward to that position, shifting the
/// intervening block back by one. `None` once the schedules agree.
pub fn exchange_step(current: &Schedule, target: &Schedule) -> Option<Schedule> {
    let m = current.order().iter().zip(target.order()).position(|(a, b)| a != b)?;
    let wanted = target.order()[m];
    let l = current.position_of(wanted)?;
    let mut next = current.order().to_vec();
    next[m..=l].rotate_right(1);
    Some(Schedule(next))
}

/// Every schedule visited when exchanging `start` into `target`, both included.
pub fn exchange_path(start: &Schedule, target: &Schedule) -> Vec<Schedule> {
    let mut path = vec![start.clone()];
    while let Some(next) = exchange_step(path.last().expect("non-empty"), target) {
        path.push(next);
    }
    path
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeAudit {
    pub target: Schedule,
    pub path: Vec<Schedule>,
    /// Max-uplink objective at each schedule on the path.
    pub objectives: Vec<u64>,
}

impl ExchangeAudit {
    pub fn exchanges(&self) -> usize {
        self.path.len() - 1
    }

    /// True iff no exchange increased the max-uplink objective.
    pub fn holds(&self) -> bool {
        self.objectives.windows(2).all(|w| w[1] <= w[0])
    }
}

/// Walks `schedule` toward the MCN schedule by prefix exchanges, recording the
/// two-message max-uplink objective after each step.
pub fn verify_exchange_argument(js: &JointSupport, schedule: &Schedule) -> Result<ExchangeAudit> {
    crate::protocol::check_schedule(js, schedule)?;
    let costs = UplinkCost::new(js, ProtocolKind::TwoMessage);
    let target = mcn(&costs, js.num_informants());
    let path = exchange_path(schedule, &target);
    let objectives = path.iter().map(|s| schedule_value(&costs, s, Aggregate::Max)).collect();
    Ok(ExchangeAudit {
        target,
        path,
        objectives,
    })
}
