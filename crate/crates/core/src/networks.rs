//! Bundled example networks.
//!
//! - `drug`: sex confounds drug assignment and recovery (Simpson's paradox).
//! - `asia`: the chest-clinic network with its textbook parameters.
//! - `academe`: course marks. The structure is standard; the CPTs are
//!   illustrative only.

use crate::format::parse_network;
use crate::network::Network;

pub const DRUG_JSON: &str = include_str!("../networks/drug.json");
pub const ASIA_JSON: &str = include_str!("../networks/asia.json");
pub const ACADEME_JSON: &str = include_str!("../networks/academe.json");

pub fn drug() -> Network {
    parse_network(DRUG_JSON).expect("bundled drug network is valid")
}

pub fn asia() -> Network {
    parse_network(ASIA_JSON).expect("bundled asia network is valid")
}

pub fn academe() -> Network {
    parse_network(ACADEME_JSON).expect("bundled academe network is valid")
}
