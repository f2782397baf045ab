//! Branch bookkeeping shared by all protocols.
//!
//! A protocol is written once as straight-line code over [`Node`]s. Each
//! measurement goes through [`Tree::split`]: in exhaustive mode every outcome
//! becomes a child node, in sampled mode one outcome is drawn. The same code
//! therefore produces both the exact outcome tree and single trajectories.

use rand_chacha::ChaCha8Rng;

use super::{BranchRecord, CommEntry, PathStep, Verdict};
use crate::error::Result;
use crate::measurement::{sample_index, MeasurementOutcome};
use crate::state::{HybridState, ModeId};

pub(crate) enum Explorer<'r> {
    Exhaustive,
    Sampled(&'r mut ChaCha8Rng),
}

#[derive(Clone)]
pub(crate) struct Node {
    pub state: HybridState,
    pub probability: f64,
    pub path: Vec<PathStep>,
    pub corrections: Vec<String>,
    pub comm: Vec<CommEntry>,
    pub round: Option<usize>,
}

impl Node {
    pub fn root(state: HybridState) -> Self {
        Node { state, probability: 1.0, path: Vec::new(), corrections: Vec::new(), comm: Vec::new(), round: None }
    }

    pub fn say(&mut self, sender: &str, receiver: &str, message: impl Into<String>) {
        self.comm.push(CommEntry { sender: sender.into(), receiver: receiver.into(), message: message.into() });
    }

    /// Applies a local correction and logs it.
    pub fn correct(&mut self, tag: impl Into<String>, op: impl FnOnce(&HybridState) -> Result<HybridState>) -> Result<()> {
        self.state = op(&self.state)?;
        self.corrections.push(tag.into());
        Ok(())
    }
}

pub(crate) struct Tree<'r> {
    explorer: Explorer<'r>,
    target: HybridState,
    pub records: Vec<BranchRecord>,
}

impl<'r> Tree<'r> {
    pub fn new(explorer: Explorer<'r>, target: HybridState) -> Self {
        Tree { explorer, target, records: Vec::new() }
    }

    /// Children of `node` for the given outcomes, as `(label, child)` pairs.
    /// Outcomes too unlikely to carry a state end as failure records.
    pub fn split(&mut self, node: Node, measurement: &str, outcomes: Vec<MeasurementOutcome>) -> Result<Vec<(String, Node)>> {
        let chosen = match &mut self.explorer {
            Explorer::Exhaustive => outcomes,
            Explorer::Sampled(rng) => {
                let probs: Vec<f64> = outcomes.iter().map(|o| o.probability).collect();
                let i = sample_index(&probs, &mut **rng)?;
                outcomes.into_iter().nth(i).into_iter().collect()
            }
        };
        let mut children = Vec::with_capacity(chosen.len());
        for o in chosen {
            let mut path = node.path.clone();
            path.push(PathStep { measurement: measurement.to_string(), outcome: o.label.clone() });
            let probability = node.probability * o.probability;
            match o.post_state {
                Some(state) => children.push((
                    o.label,
                    Node { state, probability, path, corrections: node.corrections.clone(), comm: node.comm.clone(), round: node.round },
                )),
                None => self.records.push(BranchRecord {
                    path,
                    probability,
                    verdict: Verdict::Failure,
                    output: None,
                    fidelity: None,
                    corrections_applied: node.corrections.clone(),
                    comm: node.comm.clone(),
                    round: node.round,
                }),
            }
        }
        Ok(children)
    }

    pub fn finish(&mut self, node: Node, verdict: Verdict) -> Result<()> {
        let fidelity = match verdict {
            Verdict::Success => Some(node.state.fidelity(&self.target)?),
            _ => None,
        };
        self.records.push(BranchRecord {
            path: node.path,
            probability: node.probability,
            verdict,
            output: Some(node.state),
            fidelity,
            corrections_applied: node.corrections,
            comm: node.comm,
            round: node.round,
        });
        Ok(())
    }
}

/// `base` for a single party, `base_j` otherwise.
pub(crate) fn indexed(base: &str, j: usize, count: usize) -> ModeId {
    if count == 1 {
        ModeId::new(base)
    } else {
        ModeId::new(format!("{base}_{j}"))
    }
}

pub(crate) const ALICE: &str = "Alice";
pub(crate) const BOB: &str = "Bob";

pub(crate) fn photon_party(j: usize) -> String {
    if j == 1 {
        ALICE.to_string()
    } else {
        format!("photon-holder-{j}")
    }
}

pub(crate) fn coherent_party(k: usize) -> String {
    if k == 1 {
        BOB.to_string()
    } else {
        format!("coherent-holder-{k}")
    }
}
