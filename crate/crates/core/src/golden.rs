//! Published reference values for the three benchmark instances.

use crate::graph::Graph;
use crate::generators::{gen_c60, gen_gp, gen_tri2lift};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Instance {
    Gp15_2,
    Tri2Lift,
    C60,
}

impl Instance {
    pub const ALL: [Instance; 3] = [Instance::Gp15_2, Instance::Tri2Lift, Instance::C60];

    pub fn name(self) -> &'static str {
        match self {
            Instance::Gp15_2 => "gp15_2",
            Instance::Tri2Lift => "tri2lift",
            Instance::C60 => "c60",
        }
    }

    pub fn from_name(name: &str) -> Option<Instance> {
        Instance::ALL.into_iter().find(|i| i.name() == name)
    }

    pub fn graph(self) -> Graph {
        match self {
            Instance::Gp15_2 => gen_gp(15, 2).expect("valid parameters"),
            Instance::Tri2Lift => gen_tri2lift(),
            Instance::C60 => gen_c60(),
        }
    }

    fn row(self) -> usize {
        self as usize
    }
}

/// One `(instance, p)` row of the published comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub instance: Instance,
    pub p: usize,
    pub gamma: &'static [f64],
    pub beta: &'static [f64],
    pub qaoa: f64,
    pub bm: f64,
    pub th: f64,
    /// BM-k weights `(α_0, .., α_p)`.
    pub alpha: &'static [f64],
    /// Th-s thresholds, one per round.
    pub thresholds: &'static [u32],
    pub local_treewidth: usize,
}

const GAMMA: [[&[f64]; 3]; 3] = [
    [&[0.3077], &[0.2437, 0.4431], &[0.2110, 0.3990, 0.4685]],
    [&[0.2851], &[0.2917, 0.5623], &[0.2014, 0.4855, 0.5916]],
    [&[0.3078], &[0.2490, 0.4451], &[0.2110, 0.3990, 0.4685]],
];

// 0.3927 is a tabulated angle, not π/8.
#[allow(clippy::approx_constant)]
const BETA: [[&[f64]; 3]; 3] = [
    [&[0.3927], &[0.5159, 0.2513], &[0.6090, 0.4590, 0.2350]],
    [&[0.3481], &[0.4090, 0.2408], &[0.5410, 0.3187, 0.1851]],
    [&[0.3927], &[0.5252, 0.2469], &[0.6090, 0.4590, 0.2350]],
];

const QAOA: [[f64; 3]; 3] = [[0.6624, 0.7360, 0.7836], [0.6599, 0.7208, 0.7456], [0.6925, 0.7514, 0.7893]];
const BM: [[f64; 3]; 3] = [[0.6959, 0.7477, 0.7561], [0.6587, 0.6964, 0.7114], [0.6959, 0.7584, 0.7868]];
const TH: [[f64; 3]; 3] = [[0.6882, 0.7021, 0.7589], [0.6448, 0.6578, 0.7145], [0.6870, 0.7297, 0.7801]];

const ALPHA: [[&[f64]; 3]; 3] = [
    [&[1.0, -0.5770], &[1.0, -0.7021, 0.2391], &[1.0, -0.7209, 0.2793, -0.0973]],
    [&[1.0, -0.4800], &[1.0, -0.5932, 0.2842], &[1.0, -0.6428, 0.4050, -0.1638]],
    [&[1.0, -0.5779], &[1.0, -0.7255, 0.2897], &[1.0, -0.7864, 0.4270, -0.2092]],
];

const THRESHOLDS: [[&[u32]; 3]; 3] = [
    [&[3], &[2, 3], &[3, 2, 3]],
    [&[3], &[3, 3], &[2, 3, 3]],
    [&[3], &[2, 3], &[3, 2, 3]],
];

const LOCAL_TREEWIDTH: [[usize; 3]; 3] = [[1, 2, 3], [2, 2, 2], [1, 2, 3]];

/// The published row for `instance` at round `p ∈ {1, 2, 3}`.
pub fn row(instance: Instance, p: usize) -> Option<Row> {
    if !(1..=3).contains(&p) {
        return None;
    }
    let (i, j) = (instance.row(), p - 1);
    Some(Row {
        instance,
        p,
        gamma: GAMMA[i][j],
        beta: BETA[i][j],
        qaoa: QAOA[i][j],
        bm: BM[i][j],
        th: TH[i][j],
        alpha: ALPHA[i][j],
        thresholds: THRESHOLDS[i][j],
        local_treewidth: LOCAL_TREEWIDTH[i][j],
    })
}

/// All nine rows, instance-major.
pub fn rows() -> Vec<Row> {
    Instance::ALL
        .into_iter()
        .flat_map(|inst| (1..=3).filter_map(move |p| row(inst, p)))
        .collect()
}
