//! `key = value` config files, merged into the command line as flags.

use std::collections::BTreeMap;

use clap::{ArgAction, ArgMatches, Command};

use crate::error::CliError;

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected `key = value`", no + 1)))?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() {
            return Err(CliError::Usage(format!("config line {}: empty key", no + 1)));
        }
        if out.iter().any(|(k, _)| *k == key) {
            return Err(CliError::Usage(format!("config line {}: duplicate key '{key}'", no + 1)));
        }
        out.push((key, value.trim().to_string()));
    }
    Ok(out)
}

/// Turns config entries into flags for `sub`. Unknown keys are errors.
pub fn to_flags(sub: &Command, entries: &[(String, String)]) -> Result<Vec<String>, CliError> {
    let mut flags = Vec::new();
    for (key, value) in entries {
        let arg = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()) && a.get_id() != "config")
            .ok_or_else(|| CliError::Usage(format!("unknown config key '{key}' for {}", sub.get_name())))?;
        if matches!(arg.get_action(), ArgAction::SetTrue) {
            match value.as_str() {
                "true" => flags.push(format!("--{key}")),
                "false" => {}
                other => return Err(CliError::Usage(format!("config key '{key}': expected true or false, got '{other}'"))),
            }
        } else {
            flags.push(format!("--{key}={value}"));
        }
    }
    Ok(flags)
}

/// Inserts file flags right after the subcommand token, so flags given
/// later on the real command line override them.
pub fn merge(argv: &[String], sub_name: &str, file_flags: Vec<String>) -> Vec<String> {
    let at = argv.iter().skip(1).position(|a| a == sub_name).map_or(argv.len(), |i| i + 2);
    let mut out = argv[..at].to_vec();
    out.extend(file_flags);
    out.extend_from_slice(&argv[at..]);
    out
}

/// Every resolved value of the subcommand's flags, defaults included, keyed
/// by long name. Feeding this back as a config file reruns the command.
pub fn resolved(sub: &Command, m: &ArgMatches) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for arg in sub.get_arguments() {
        let (Some(long), id) = (arg.get_long(), arg.get_id().as_str()) else {
            continue;
        };
        if matches!(long, "config" | "help" | "version") {
            continue;
        }
        if matches!(arg.get_action(), ArgAction::SetTrue) {
            out.insert(long.to_string(), m.get_flag(id).to_string());
        } else if let Some(mut vals) = m.get_raw(id) {
            if let Some(v) = vals.next() {
                out.insert(long.to_string(), v.to_string_lossy().into_owned());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    fn sub(name: &str) -> Command {
        crate::args::Cli::command().find_subcommand(name).unwrap().clone()
    }

    #[test]
    fn comments_and_blank_lines() {
        let e = parse("# header\n\nscheme = upw5  # inline\n nx=422\n").unwrap();
        assert_eq!(e, vec![("scheme".into(), "upw5".into()), ("nx".into(), "422".into())]);
    }

    #[test]
    fn malformed_and_duplicate_lines() {
        assert!(parse("scheme upw5").is_err());
        assert!(parse("= 3").is_err());
        assert!(parse("nx = 1\nnx = 2").is_err());
    }

    #[test]
    fn unknown_key_is_rejected() {
        let e = parse("shceme = upw5").unwrap();
        assert!(to_flags(&sub("spectrum"), &e).is_err());
    }

    #[test]
    fn booleans_become_bare_flags() {
        let e = parse("exact = true\nnx = 48").unwrap();
        assert_eq!(to_flags(&sub("simulate"), &e).unwrap(), vec!["--exact", "--nx=48"]);
        let e = parse("exact = false").unwrap();
        assert!(to_flags(&sub("simulate"), &e).unwrap().is_empty());
        assert!(to_flags(&sub("simulate"), &parse("exact = yes").unwrap()).is_err());
    }

    #[test]
    fn file_flags_precede_command_line_flags() {
        let argv: Vec<String> = ["specwave", "--config", "f", "spectrum", "--nx", "64"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let merged = merge(&argv, "spectrum", vec!["--nx=422".into()]);
        assert_eq!(merged, ["specwave", "--config", "f", "spectrum", "--nx=422", "--nx", "64"]);
    }
}
