use rand::Rng;

use super::Micro;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Nodes in a disc of radius `radius` around a base station at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    pub radius: f64,
    pub positions: Vec<Point>,
}

impl Topology {
    pub fn base_station(&self) -> Point {
        Point::ORIGIN
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.positions[i].distance(self.positions[j])
    }

    pub fn distance_to_bs(&self, i: usize) -> f64 {
        self.positions[i].distance(Point::ORIGIN)
    }
}

/// Uniform in area: `r = R·√u`, `θ = 2πv`.
pub fn place_nodes<R: Rng + ?Sized>(nodes: usize, radius: f64, rng: &mut R) -> Topology {
    let positions = (0..nodes)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            let theta = std::f64::consts::TAU * rng.random::<f64>();
            Point {
                x: r * theta.cos(),
                y: r * theta.sin(),
            }
        })
        .collect();
    Topology { radius, positions }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeState {
    pub remaining: Micro,
    /// Already served as head in the current election epoch.
    pub served: bool,
}

impl NodeState {
    pub fn alive(&self) -> bool {
        self.remaining > 0
    }
}

/// Distance-driven correlation: a node at distance `d` from a node whose
/// reading is known needs `⌈d⌉` bits, saturating at the raw width `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorrelationModel {
    pub max_bits: u32,
}

impl CorrelationModel {
    pub fn new(max_bits: u32) -> Self {
        CorrelationModel { max_bits }
    }
}

pub fn pairwise_bits(model: CorrelationModel, d: f64) -> u32 {
    let n = f64::from(model.max_bits);
    if d <= n {
        d.ceil() as u32
    } else {
        model.max_bits
    }
}

/// Bits needed given the already-decoded nodes at `polled_distances`; the
/// first node sends its raw reading.
pub fn conditional_bits(model: CorrelationModel, polled_distances: &[f64]) -> u32 {
    polled_distances
        .iter()
        .map(|&d| pairwise_bits(model, d))
        .min()
        .unwrap_or(model.max_bits)
}
