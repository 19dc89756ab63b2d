use serde::Serialize;
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Common wrapper for every JSON report. No wall-clock fields, so equal
/// inputs give byte-identical output.
#[derive(Debug, Serialize)]
pub struct Envelope<'a, C: Serialize, R: Serialize> {
    pub command: &'a str,
    pub seed: u64,
    pub config_hash: String,
    pub version: &'a str,
    pub config: &'a C,
    pub result: R,
}

/// SHA-256 of the command name, seed and canonical JSON of the config.
pub fn config_hash<C: Serialize>(command: &str, seed: u64, config: &C) -> String {
    let json = serde_json::to_string(config).expect("config serializes");
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    h.update([0]);
    h.update(seed.to_le_bytes());
    h.update(json.as_bytes());
    hex::encode(h.finalize())
}

pub fn render<C: Serialize, R: Serialize>(
    command: &str,
    seed: u64,
    config: &C,
    result: R,
) -> String {
    let env = Envelope {
        command,
        seed,
        config_hash: config_hash(command, seed, config),
        version: VERSION,
        config,
        result,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("report serializes");
    s.push('\n');
    s
}
