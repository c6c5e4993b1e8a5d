use std::fs;
use std::path::Path;

use anyhow::{anyhow, Context, Result};
use serde::de::DeserializeOwned;
use serde_json::Value;
use sigprime::designs::DesignDoc;
use sigprime::permgroup::GroupDoc;
use sigprime::{IncidenceStructure, PermGroup};

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{}: invalid JSON", path.display()))
}

fn decode<T: DeserializeOwned>(value: Value, path: &Path, what: &str) -> Result<T> {
    serde_json::from_value(value).with_context(|| format!("{}: malformed {what} document", path.display()))
}

/// A bare document, or the member `key` of a combined one.
fn select(value: Value, key: Option<&str>, default_key: &str, bare_marker: &str, path: &Path) -> Result<Value> {
    match key {
        Some(k) => value
            .get(k)
            .cloned()
            .ok_or_else(|| anyhow!("{}: no member \"{k}\"", path.display())),
        None if value.get(bare_marker).is_some() => Ok(value),
        None => value.get(default_key).cloned().ok_or_else(|| {
            anyhow!(
                "{}: expected a bare document with \"{bare_marker}\" or a \"{default_key}\" member",
                path.display()
            )
        }),
    }
}

pub fn load_design(path: &Path) -> Result<IncidenceStructure> {
    let doc: DesignDoc = decode(select(read_json(path)?, None, "design", "lines", path)?, path, "design")?;
    IncidenceStructure::from_doc(&doc).with_context(|| format!("{}: malformed design", path.display()))
}

pub fn load_group(path: &Path, key: Option<&str>, cap: Option<usize>) -> Result<PermGroup> {
    let doc: GroupDoc = decode(select(read_json(path)?, key, "group", "generators", path)?, path, "group")?;
    let g = PermGroup::from_doc(&doc).with_context(|| format!("{}: malformed group", path.display()))?;
    Ok(match cap {
        Some(c) => g.with_cap(c),
        None => g,
    })
}
