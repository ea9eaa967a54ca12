//! `key = value` config files. Each entry becomes a `--key value` flag placed
//! before the command-line flags, so explicit flags win.

use std::ffi::OsString;
use std::path::Path;

use crate::error::{AppError, AppResult};

/// Flags produced by a config file. `true`/`false` values toggle switches.
pub fn parse_config(text: &str) -> AppResult<Vec<OsString>> {
    let mut args = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| AppError::Config(format!("line {}: expected key = value", idx + 1)))?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        let value = value.trim().trim_matches('"');
        if key.is_empty() || key == "config" {
            return Err(AppError::Config(format!("line {}: invalid key {key:?}", idx + 1)));
        }
        match value {
            "true" => args.push(format!("--{key}").into()),
            "false" => {}
            _ => {
                args.push(format!("--{key}").into());
                args.push(value.into());
            }
        }
    }
    Ok(args)
}

pub fn load_config(path: &Path) -> AppResult<Vec<OsString>> {
    let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
    parse_config(&text).map_err(|e| AppError::Config(format!("{}: {e}", path.display())))
}

/// Removes `--config <path>` / `--config=<path>` from `argv` and splices the
/// file's flags in right after the subcommand.
pub fn expand_config(argv: Vec<OsString>) -> AppResult<Vec<OsString>> {
    let mut rest = Vec::with_capacity(argv.len());
    let mut config = None;
    let mut iter = argv.into_iter();
    while let Some(arg) = iter.next() {
        match arg.to_str() {
            Some("--config") => {
                let path = iter
                    .next()
                    .ok_or_else(|| AppError::Usage("--config needs a path".into()))?;
                config = Some(path);
            }
            Some(s) if s.starts_with("--config=") => config = Some(s["--config=".len()..].into()),
            _ => rest.push(arg),
        }
    }
    let Some(path) = config else { return Ok(rest) };
    let extra = load_config(Path::new(&path))?;
    // program name, then subcommand
    let split = rest.len().min(2);
    let tail = rest.split_off(split);
    rest.extend(extra);
    rest.extend(tail);
    Ok(rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_become_flags() {
        let args = parse_config("# sweep\nrho = 0.3\neta_x=0.1 # comment\ndedup = true\nserial = false\n").unwrap();
        let args: Vec<_> = args.iter().map(|a| a.to_str().unwrap()).collect();
        assert_eq!(args, ["--rho", "0.3", "--eta-x", "0.1", "--dedup"]);
    }

    #[test]
    fn malformed_line() {
        assert!(matches!(parse_config("rho 0.3"), Err(AppError::Config(_))));
    }
}
