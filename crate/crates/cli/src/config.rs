//! `key = value` files whose keys are long flag names of the chosen command.
//! Flags given on the command line win over the file.

use std::fs;

use clap::{ArgAction, Command};

use crate::CliError;

/// Value of `--config PATH` or `--config=PATH`.
fn config_path(argv: &[String]) -> Result<Option<String>, CliError> {
    for (i, a) in argv.iter().enumerate() {
        if a == "--config" {
            return argv
                .get(i + 1)
                .cloned()
                .map(Some)
                .ok_or_else(|| CliError::Usage("--config needs a path".into()));
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Ok(Some(p.to_string()));
        }
    }
    Ok(None)
}

fn given_on_command_line(argv: &[String], long: &str) -> bool {
    let flag = format!("--{long}");
    let with_eq = format!("{flag}=");
    argv.iter().any(|a| *a == flag || a.starts_with(&with_eq))
}

/// Parsed `(line, key, value)` entries.
pub fn parse_config(text: &str) -> Result<Vec<(usize, String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| CliError::Config {
            line: i + 1,
            msg: "expected `key = value`".into(),
        })?;
        let key = k.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() {
            return Err(CliError::Config {
                line: i + 1,
                msg: "empty key".into(),
            });
        }
        out.push((i + 1, key, v.trim().to_string()));
    }
    Ok(out)
}

/// Appends the config file's settings to `argv` as flags, skipping those already given.
pub fn merge_config(argv: Vec<String>, root: &Command) -> Result<Vec<String>, CliError> {
    let Some(path) = config_path(&argv)? else {
        return Ok(argv);
    };
    let text = fs::read_to_string(&path).map_err(|e| CliError::Io {
        path: path.clone(),
        msg: e.to_string(),
    })?;
    let entries = parse_config(&text)?;

    let mut cur = root;
    let mut chain = vec![root];
    for a in argv.iter().skip(1) {
        if a.starts_with('-') {
            continue;
        }
        if let Some(sc) = cur.find_subcommand(a) {
            cur = sc;
            chain.push(sc);
        }
    }
    let cmd_name: Vec<&str> = chain.iter().skip(1).map(|c| c.get_name()).collect();
    let cmd_name = if cmd_name.is_empty() { "vlasym".to_string() } else { cmd_name.join(" ") };

    let mut out = argv.clone();
    for (line, key, value) in entries {
        if key == "config" {
            return Err(CliError::Config {
                line,
                msg: "`config` cannot be set from a config file".into(),
            });
        }
        let arg = chain
            .iter()
            .rev()
            .flat_map(|c| c.get_arguments())
            .find(|a| a.get_long() == Some(key.as_str()) || a.get_all_aliases().is_some_and(|al| al.contains(&key.as_str())))
            .ok_or_else(|| CliError::Config {
                line,
                msg: format!("unknown key `{key}` for `{cmd_name}`"),
            })?;
        let long = arg.get_long().expect("matched by long name");
        if given_on_command_line(&argv, long) {
            continue;
        }
        if matches!(arg.get_action(), ArgAction::SetTrue) {
            match value.as_str() {
                "true" | "yes" | "1" => out.push(format!("--{long}")),
                "false" | "no" | "0" => {}
                _ => {
                    return Err(CliError::Config {
                        line,
                        msg: format!("`{key}` takes true or false"),
                    })
                }
            }
        } else {
            let v: Vec<&str> = value.split(',').map(str::trim).collect();
            out.push(format!("--{long}={}", v.join(",")));
        }
    }
    Ok(out)
}
