//! JSON form of [`HybridState`].
//!
//! ```json
//! {"overlap_mode": "ideal",
//!  "kets": [{"amp": [0.7071067811865476, 0.0],
//!            "photons": [["a1", "H"]],
//!            "coherent": {"b1": [2.0, 0.0]}}]}
//! ```
//!
//! Amplitudes are written with the shortest representation that parses back
//! to the same double, so a round trip is exact. Loading keeps the kets in
//! the order given; prune tolerance and seed take their defaults.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::state::{CoherentRegister, HybridState, Ket, OverlapMode, PhotonRegister, Polarization, SimConfig, C64};

#[derive(Serialize, Deserialize)]
struct StateDoc {
    overlap_mode: OverlapMode,
    kets: Vec<KetDoc>,
}

#[derive(Serialize, Deserialize)]
struct KetDoc {
    amp: [f64; 2],
    photons: Vec<(String, Polarization)>,
    coherent: BTreeMap<String, [f64; 2]>,
}

impl From<&HybridState> for StateDoc {
    fn from(s: &HybridState) -> Self {
        let kets = s
            .kets()
            .iter()
            .map(|k| KetDoc {
                amp: [k.coeff.re, k.coeff.im],
                photons: k.photons.iter().map(|(m, p)| (m.to_string(), *p)).collect(),
                coherent: k.coherents.iter().map(|(m, a)| (m.to_string(), [a.re, a.im])).collect(),
            })
            .collect();
        StateDoc { overlap_mode: s.config().overlap_mode, kets }
    }
}

impl TryFrom<StateDoc> for HybridState {
    type Error = Error;

    fn try_from(doc: StateDoc) -> Result<Self> {
        let mut kets = Vec::with_capacity(doc.kets.len());
        for k in doc.kets {
            let photons = PhotonRegister::from_pairs(k.photons)?;
            let coherents = CoherentRegister::from_pairs(k.coherent.into_iter().map(|(m, [re, im])| (m, C64::new(re, im))))?;
            kets.push(Ket::new(C64::new(k.amp[0], k.amp[1]), photons, coherents));
        }
        let config = SimConfig { overlap_mode: doc.overlap_mode, ..SimConfig::default() };
        HybridState::from_raw(kets, config)
    }
}

impl Serialize for HybridState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StateDoc::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HybridState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = StateDoc::deserialize(deserializer)?;
        HybridState::try_from(doc).map_err(serde::de::Error::custom)
    }
}

impl HybridState {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("state serialization cannot fail")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
