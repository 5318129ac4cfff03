use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

/// Record attached to every CLI run. `outputs_digest` is the SHA-256 of the
/// compact JSON serialisation of the result, so it depends only on the
/// inputs (thread count and output paths are not parameters).
#[derive(Clone, Debug, PartialEq)]
pub struct RunManifest {
    pub subcommand: String,
    pub parameters: Map<String, Value>,
    pub seed: Option<u64>,
    pub version: String,
    pub statement: String,
    pub outputs_digest: String,
}

pub fn digest(v: &Value) -> String {
    let bytes = serde_json::to_vec(v).expect("values always serialise");
    format!("{:x}", Sha256::digest(bytes))
}

impl RunManifest {
    pub fn new(subcommand: &str, parameters: Map<String, Value>, seed: Option<u64>, statement: &str, outputs: &Value) -> RunManifest {
        RunManifest {
            subcommand: subcommand.into(),
            parameters,
            seed,
            version: env!("CARGO_PKG_VERSION").into(),
            statement: statement.into(),
            outputs_digest: digest(outputs),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "subcommand": self.subcommand,
            "parameters": self.parameters,
            "seed": self.seed,
            "version": self.version,
            "statement": self.statement,
            "outputs_digest": self.outputs_digest,
        })
    }
}

/// The full document printed by the CLI.
pub fn document(manifest: &RunManifest, result: Value) -> Value {
    json!({ "manifest": manifest.to_json(), "result": result })
}
