//! Flat `key = value` files whose keys mirror the long flags.

use std::collections::HashSet;
use std::ffi::OsString;
use std::path::Path;

use crate::error::CliError;

/// `(key, value)` pairs in file order. Blank lines and `#` comments are
/// skipped; keys may carry a leading `--`.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Usage(format!("config line {}: expected key = value, got {line:?}", i + 1)));
        };
        let key = k.trim().trim_start_matches("--").to_string();
        if key.is_empty() {
            return Err(CliError::Usage(format!("config line {}: empty key", i + 1)));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

/// Appends the settings of `--config <path>` to `argv` for every flag not
/// already given on the command line. `true` becomes a bare switch and
/// `false` is dropped. A `command` key supplies the subcommand when argv
/// has none.
pub fn expand_args(argv: Vec<OsString>, subcommands: &[&str]) -> Result<Vec<String>, CliError> {
    let mut args = argv
        .into_iter()
        .map(|a| a.into_string().map_err(|a| CliError::Usage(format!("argument {a:?} is not UTF-8"))))
        .collect::<Result<Vec<_>, _>>()?;
    let Some(path) = config_path(&args) else { return Ok(args) };
    let text = std::fs::read_to_string(Path::new(&path)).map_err(|e| CliError::Usage(format!("config {path}: {e}")))?;
    let given: HashSet<String> = args
        .iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a).to_string())
        .collect();
    let has_command = args.iter().skip(1).any(|a| subcommands.contains(&a.as_str()));
    for (key, value) in parse_config(&text)? {
        if key == "command" {
            if !has_command {
                args.insert(1.min(args.len()), value);
            }
            continue;
        }
        if key == "config" || given.contains(&key) {
            continue;
        }
        match value.as_str() {
            "true" => args.push(format!("--{key}")),
            "false" => {}
            _ => {
                args.push(format!("--{key}"));
                args.push(value);
            }
        }
    }
    Ok(args)
}
