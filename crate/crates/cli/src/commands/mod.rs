pub mod exponents;
pub mod phase;
pub mod replay;
pub mod simulate;

use serde_json::{Map, Value};

/// Parameter record of a manifest: the resolved values plus the argument
/// vector that reproduces them.
pub(crate) fn parameters(resolved: Value, argv: Vec<String>) -> Map<String, Value> {
    let mut map = match resolved {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("value".into(), other);
            m
        }
    };
    map.insert("argv".into(), Value::from(argv));
    map
}
