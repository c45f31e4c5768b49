//! Flat `key = value` config files for the `random` subcommand.
//!
//! Keys mirror the long flag names (`n`, `steps`, `reals`, `seed`, `cut`,
//! `sample-every`, `out`, `oracle-check`). A run manifest (JSON) is also
//! accepted; its `config` object uses the same keys.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::manifest::RunManifest;

pub const KNOWN_KEYS: &[&str] = &[
    "n",
    "steps",
    "reals",
    "seed",
    "cut",
    "sample-every",
    "out",
    "oracle-check",
];

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    if text.trim_start().starts_with('{') {
        let manifest: RunManifest = serde_json::from_str(text)
            .map_err(|e| Error::InvalidConfig(format!("manifest: {e}")))?;
        return check_keys(manifest.config, 0);
    }
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: idx + 1,
            message: format!("expected `key = value`, found {line:?}"),
        })?;
        let key = key.trim().trim_start_matches("--").to_string();
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("duplicate key {key:?}"),
            });
        }
    }
    check_keys(map, 1)
}

fn check_keys(map: BTreeMap<String, String>, line: usize) -> Result<BTreeMap<String, String>> {
    if let Some(bad) = map.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
        return Err(Error::Parse {
            line,
            message: format!("unknown config key {bad:?}"),
        });
    }
    Ok(map)
}

pub fn get_parsed<T: std::str::FromStr>(
    map: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>> {
    map.get(key)
        .map(|v| {
            v.parse::<T>()
                .map_err(|_| Error::InvalidConfig(format!("config key {key}: cannot parse {v:?}")))
        })
        .transpose()
}
