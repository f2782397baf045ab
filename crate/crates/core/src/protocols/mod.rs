//! Entanglement concentration protocols.
//!
//! Every protocol runs in two ways from the same pipeline code:
//! [`run_protocol`] enumerates the full outcome tree with exact
//! probabilities, and [`run_monte_carlo`] samples seeded trajectories.
//! Local corrections are applied automatically and logged, so a success
//! branch always carries the target state.
//!
//! | id | input | success |
//! |---|---|---|
//! | `bs` | two hybrid pairs, coherent modes interfered on a BS | 2a²b² |
//! | `bs-improved` | two pairs, photon-number readout instead of BS | 2a²b² |
//! | `bs-multi` | two N-photon, M-mode states | 2a²b² |
//! | `single-photon` | one pair plus a prepared single photon | 2a²b² |
//! | `single-photon-multi` | one N-photon, M-mode state plus one photon | 2a²b² |
//! | `qnd` | one pair, cross-Kerr parity check, failures recycled | Σ rounds |
//! | `vbs` | one pair, no ancilla | 2·min(a², b²) |

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::state::{HybridState, SimConfig, C64};

mod bs;
mod qnd;
mod single_photon;
mod tree;
mod vbs;

pub use qnd::next_coefficients;
pub use vbs::reflectance;

use tree::{Explorer, Tree};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProtocolId {
    #[serde(rename = "bs")]
    Bs,
    #[serde(rename = "bs-improved")]
    BsImproved,
    #[serde(rename = "bs-multi")]
    BsMulti,
    #[serde(rename = "single-photon")]
    SinglePhoton,
    #[serde(rename = "single-photon-multi")]
    SinglePhotonMulti,
    #[serde(rename = "qnd")]
    Qnd,
    #[serde(rename = "vbs")]
    Vbs,
}

impl ProtocolId {
    pub const ALL: [ProtocolId; 7] = [
        ProtocolId::Bs,
        ProtocolId::BsImproved,
        ProtocolId::BsMulti,
        ProtocolId::SinglePhoton,
        ProtocolId::SinglePhotonMulti,
        ProtocolId::Qnd,
        ProtocolId::Vbs,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProtocolId::Bs => "bs",
            ProtocolId::BsImproved => "bs-improved",
            ProtocolId::BsMulti => "bs-multi",
            ProtocolId::SinglePhoton => "single-photon",
            ProtocolId::SinglePhotonMulti => "single-photon-multi",
            ProtocolId::Qnd => "qnd",
            ProtocolId::Vbs => "vbs",
        }
    }
}

impl fmt::Display for ProtocolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProtocolId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProtocolId::ALL.into_iter().find(|id| id.as_str() == s).ok_or_else(|| Error::UnknownProtocol(s.to_string()))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Success,
    Failure,
    /// An intermediate record: the branch continues into another round.
    Recycled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathStep {
    pub measurement: String,
    pub outcome: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommEntry {
    pub sender: String,
    pub receiver: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchRecord {
    pub path: Vec<PathStep>,
    pub probability: f64,
    pub verdict: Verdict,
    pub output: Option<HybridState>,
    /// Fidelity of `output` with the protocol's target; success branches only.
    pub fidelity: Option<f64>,
    pub corrections_applied: Vec<String>,
    pub comm: Vec<CommEntry>,
    /// QND round in which the record was produced.
    pub round: Option<usize>,
}

impl BranchRecord {
    pub fn is_terminal(&self) -> bool {
        self.verdict != Verdict::Recycled
    }

    /// Outcome labels along the path, joined with `/`.
    pub fn outcome_key(&self) -> String {
        self.path.iter().map(|s| s.outcome.as_str()).collect::<Vec<_>>().join("/")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolParams {
    pub a: f64,
    pub b: f64,
    pub beta: C64,
    pub alpha_probe: C64,
    pub theta: f64,
    pub n_photons: usize,
    pub n_coherent: usize,
    pub k_max: usize,
}

impl ProtocolParams {
    /// Coefficient `a` with `b = √(1 − a²)` and default settings elsewhere:
    /// β = 2, probe amplitude 5, θ = 0.2, one party of each kind, one round.
    pub fn new(a: f64) -> Self {
        ProtocolParams {
            a,
            b: (1.0 - a * a).sqrt(),
            beta: C64::new(2.0, 0.0),
            alpha_probe: C64::new(5.0, 0.0),
            theta: 0.2,
            n_photons: 1,
            n_coherent: 1,
            k_max: 1,
        }
    }

    pub fn with_coefficients(mut self, a: f64, b: f64) -> Self {
        self.a = a;
        self.b = b;
        self
    }

    pub fn with_beta(mut self, beta: C64) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_probe(mut self, alpha_probe: C64, theta: f64) -> Self {
        self.alpha_probe = alpha_probe;
        self.theta = theta;
        self
    }

    pub fn with_parties(mut self, n_photons: usize, n_coherent: usize) -> Self {
        self.n_photons = n_photons;
        self.n_coherent = n_coherent;
        self
    }

    pub fn with_rounds(mut self, k_max: usize) -> Self {
        self.k_max = k_max;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |x: f64| x > 0.0 && x < 1.0;
        if !unit(self.a) || !unit(self.b) {
            return Err(Error::InvalidParameter(format!("coefficients must lie in (0, 1), got a = {}, b = {}", self.a, self.b)));
        }
        if (self.a * self.a + self.b * self.b - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!("a² + b² = {} is not 1", self.a * self.a + self.b * self.b)));
        }
        if self.n_photons < 1 || self.n_coherent < 1 || self.k_max < 1 {
            return Err(Error::InvalidParameter("party counts and round count must be at least 1".into()));
        }
        let finite = |z: C64| z.re.is_finite() && z.im.is_finite();
        if !finite(self.beta) || !finite(self.alpha_probe) || !self.theta.is_finite() {
            return Err(Error::InvalidParameter("amplitudes and θ must be finite".into()));
        }
        Ok(())
    }

    fn validate_probe(&self, prune_tol: f64) -> Result<()> {
        let shift = (self.alpha_probe * (C64::from_polar(1.0, 2.0 * self.theta) - 1.0)).norm();
        if self.theta == 0.0 || shift <= prune_tol * self.alpha_probe.norm().max(1.0) {
            return Err(Error::InvalidParameter(format!(
                "probe phase classes are not separable (θ = {}, |α| = {})",
                self.theta,
                self.alpha_probe.norm()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolResult {
    pub protocol: ProtocolId,
    pub params: ProtocolParams,
    pub branches: Vec<BranchRecord>,
    pub success_probability: f64,
    /// Probability-weighted fidelity of success outputs with the target.
    pub mean_output_fidelity: f64,
    /// Unconditional success probability of each QND round; empty otherwise.
    pub rounds: Vec<f64>,
    /// Wiring and modeling notes.
    pub metadata: BTreeMap<String, String>,
}

impl ProtocolResult {
    pub fn terminal(&self) -> impl Iterator<Item = &BranchRecord> {
        self.branches.iter().filter(|b| b.is_terminal())
    }

    pub fn successes(&self) -> impl Iterator<Item = &BranchRecord> {
        self.branches.iter().filter(|b| b.verdict == Verdict::Success)
    }

    pub fn total_probability(&self) -> f64 {
        self.terminal().map(|b| b.probability).sum()
    }

    /// Nested JSON view: each level maps a measurement to its outcomes.
    pub fn outcome_tree(&self) -> Value {
        let mut root = json!({});
        for rec in &self.branches {
            let mut node = &mut root;
            for step in &rec.path {
                node = node
                    .as_object_mut()
                    .expect("tree nodes are objects")
                    .entry(step.measurement.clone())
                    .or_insert_with(|| json!({}))
                    .as_object_mut()
                    .expect("tree nodes are objects")
                    .entry(step.outcome.clone())
                    .or_insert_with(|| json!({}));
            }
            let obj = node.as_object_mut().expect("tree nodes are objects");
            obj.insert("probability".into(), json!(rec.probability));
            obj.insert("verdict".into(), json!(rec.verdict));
            if !rec.corrections_applied.is_empty() {
                obj.insert("corrections".into(), json!(rec.corrections_applied));
            }
        }
        root
    }

    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("result serialization cannot fail");
        v["tree"] = self.outcome_tree();
        v
    }
}

fn explore(id: ProtocolId, p: &ProtocolParams, cfg: SimConfig, tree: &mut Tree) -> Result<()> {
    match id {
        ProtocolId::Bs => bs::explore_bs(p, cfg, tree),
        ProtocolId::BsImproved => bs::explore_improved(p, cfg, tree),
        ProtocolId::BsMulti => bs::explore_multi(p, cfg, tree),
        ProtocolId::SinglePhoton => single_photon::explore(p, 1, 1, cfg, tree),
        ProtocolId::SinglePhotonMulti => single_photon::explore(p, p.n_photons, p.n_coherent, cfg, tree),
        ProtocolId::Qnd => qnd::explore(p, cfg, tree),
        ProtocolId::Vbs => vbs::explore(p, cfg, tree),
    }
}

fn target(id: ProtocolId, p: &ProtocolParams, cfg: SimConfig) -> Result<HybridState> {
    match id {
        ProtocolId::Bs => bs::target_bs(p, 1, 1, cfg),
        ProtocolId::BsMulti => bs::target_bs(p, p.n_photons, p.n_coherent, cfg),
        ProtocolId::BsImproved => bs::target_improved(p, cfg),
        ProtocolId::SinglePhoton => single_photon::target(p, 1, 1, cfg),
        ProtocolId::SinglePhotonMulti => single_photon::target(p, p.n_photons, p.n_coherent, cfg),
        ProtocolId::Qnd => qnd::target(p, cfg),
        ProtocolId::Vbs => vbs::target(p, cfg),
    }
}

fn metadata(id: ProtocolId, p: &ProtocolParams) -> BTreeMap<String, String> {
    let mut m: BTreeMap<String, String> = match id {
        ProtocolId::Bs => bs::metadata_bs(1, 1),
        ProtocolId::BsMulti => bs::metadata_bs(p.n_photons, p.n_coherent),
        ProtocolId::BsImproved => bs::metadata_improved(),
        ProtocolId::SinglePhoton => single_photon::metadata(1, 1),
        ProtocolId::SinglePhotonMulti => single_photon::metadata(p.n_photons, p.n_coherent),
        ProtocolId::Qnd => qnd::metadata(p),
        ProtocolId::Vbs => vbs::metadata(p),
    }
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    m.insert("protocol".into(), id.to_string());
    m
}

fn check(id: ProtocolId, p: &ProtocolParams, cfg: SimConfig) -> Result<()> {
    cfg.validate()?;
    p.validate()?;
    if id == ProtocolId::Qnd {
        p.validate_probe(cfg.prune_tol)?;
    }
    Ok(())
}

/// Exact enumeration of every outcome branch.
pub fn run_protocol(id: ProtocolId, p: &ProtocolParams, cfg: SimConfig) -> Result<ProtocolResult> {
    check(id, p, cfg)?;
    let mut tree = Tree::new(Explorer::Exhaustive, target(id, p, cfg)?);
    explore(id, p, cfg, &mut tree)?;
    let branches = tree.records;

    let success_probability: f64 = branches.iter().filter(|b| b.verdict == Verdict::Success).map(|b| b.probability).sum();
    let weighted: f64 = branches
        .iter()
        .filter(|b| b.verdict == Verdict::Success)
        .map(|b| b.probability * b.fidelity.unwrap_or(0.0))
        .sum();
    let mean_output_fidelity = if success_probability > 0.0 { weighted / success_probability } else { 0.0 };
    let rounds = if id == ProtocolId::Qnd {
        (1..=p.k_max)
            .map(|k| branches.iter().filter(|b| b.verdict == Verdict::Success && b.round == Some(k)).map(|b| b.probability).sum())
            .collect()
    } else {
        Vec::new()
    };
    Ok(ProtocolResult {
        protocol: id,
        params: p.clone(),
        branches,
        success_probability,
        mean_output_fidelity,
        rounds,
        metadata: metadata(id, p),
    })
}

pub fn run_bs_protocol(p: &ProtocolParams, cfg: SimConfig) -> Result<ProtocolResult> {
    run_protocol(ProtocolId::Bs, p, cfg)
}

pub fn run_bs_improved(p: &ProtocolParams, cfg: SimConfig) -> Result<ProtocolResult> {
    run_protocol(ProtocolId::BsImproved, p, cfg)
}

pub fn run_bs_multiparty(p: &ProtocolParams, cfg: SimConfig) -> Result<ProtocolResult> {
    run_protocol(ProtocolId::BsMulti, p, cfg)
}

pub fn run_single_photon(p: &ProtocolParams, cfg: SimConfig) -> Result<ProtocolResult> {
    run_protocol(ProtocolId::SinglePhoton, p, cfg)
}

pub fn run_qnd_protocol(p: &ProtocolParams, cfg: SimConfig) -> Result<ProtocolResult> {
    run_protocol(ProtocolId::Qnd, p, cfg)
}

pub fn run_vbs_protocol(p: &ProtocolParams, cfg: SimConfig) -> Result<ProtocolResult> {
    run_protocol(ProtocolId::Vbs, p, cfg)
}

/// One sampled trajectory.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    /// Records in the order produced; the last one is terminal.
    pub records: Vec<BranchRecord>,
}

impl Trajectory {
    pub fn outcome(&self) -> &BranchRecord {
        self.records.last().expect("a trajectory ends in a terminal record")
    }
}

/// Runs one trajectory with the generator for `(cfg.seed, trial)`.
pub fn run_trajectory(id: ProtocolId, p: &ProtocolParams, cfg: SimConfig, trial: u64) -> Result<Trajectory> {
    check(id, p, cfg)?;
    trajectory(id, p, cfg, trial, &target(id, p, cfg)?)
}

fn trajectory(id: ProtocolId, p: &ProtocolParams, cfg: SimConfig, trial: u64, target: &HybridState) -> Result<Trajectory> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(trial);
    let mut tree = Tree::new(Explorer::Sampled(&mut rng), target.clone());
    explore(id, p, cfg, &mut tree)?;
    let records = tree.records;
    debug_assert_eq!(records.iter().filter(|r| r.is_terminal()).count(), 1);
    Ok(Trajectory { records })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonteCarloSummary {
    pub protocol: ProtocolId,
    pub seed: u64,
    pub trials: u64,
    pub successes: u64,
    pub success_frequency: f64,
    /// Terminal outcome paths (labels joined with `/`) and their counts.
    pub outcome_counts: BTreeMap<String, u64>,
    /// Mean fidelity over successful trials; 0 when there were none.
    pub mean_fidelity: f64,
}

/// Seeded trajectories; trial `i` uses stream `i` of the generator seeded
/// with `cfg.seed`, so the result does not depend on scheduling.
pub fn run_monte_carlo(id: ProtocolId, p: &ProtocolParams, cfg: SimConfig, trials: u64) -> Result<MonteCarloSummary> {
    if trials < 1 {
        return Err(Error::InvalidParameter("at least one trial is required".into()));
    }
    check(id, p, cfg)?;
    let target = target(id, p, cfg)?;
    let finals: Vec<(String, Verdict, Option<f64>)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let traj = trajectory(id, p, cfg, t, &target)?;
            let last = traj.outcome();
            Ok((last.outcome_key(), last.verdict, last.fidelity))
        })
        .collect::<Result<_>>()?;

    let mut outcome_counts = BTreeMap::new();
    let mut successes = 0u64;
    let mut fidelity_sum = 0.0;
    for (key, verdict, fidelity) in finals {
        *outcome_counts.entry(key).or_insert(0) += 1;
        if verdict == Verdict::Success {
            successes += 1;
            fidelity_sum += fidelity.unwrap_or(0.0);
        }
    }
    Ok(MonteCarloSummary {
        protocol: id,
        seed: cfg.seed,
        trials,
        successes,
        success_frequency: successes as f64 / trials as f64,
        outcome_counts,
        mean_fidelity: if successes > 0 { fidelity_sum / successes as f64 } else { 0.0 },
    })
}
