//! `key = value` config files. Keys are long flag names (`_` and `-` are
//! interchangeable). Keys before any `[section]` apply to every subcommand;
//! keys inside `[name]` only to subcommand `name`. Values are spliced into
//! the argument list ahead of the real flags, so flags win.

use std::ffi::OsString;
use std::path::Path;

use clap::{ArgAction, CommandFactory};

use crate::args::Cli;
use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub section: Option<String>,
    pub key: String,
    pub value: String,
    pub line: usize,
}

pub fn parse(text: &str) -> CliResult<Vec<Entry>> {
    let mut section = None;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let n = i + 1;
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| CliError::Usage(format!("config line {n}: unterminated section header")))?;
            section = Some(name.trim().to_string());
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {n}: expected key = value")))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(CliError::Usage(format!("config line {n}: empty key")));
        }
        out.push(Entry { section: section.clone(), key, value: v.trim().to_string(), line: n });
    }
    Ok(out)
}

fn find_config(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

/// Converts config entries into flags for `subcommand`. Unknown keys, and
/// keys naming another subcommand's section that does not exist, are errors.
pub fn to_flags(entries: &[Entry], subcommand: &str) -> CliResult<Vec<OsString>> {
    let cmd = Cli::command();
    let names: Vec<String> = cmd.get_subcommands().map(|c| c.get_name().to_string()).collect();
    let sub = cmd
        .find_subcommand(subcommand)
        .ok_or_else(|| CliError::Usage(format!("unknown subcommand {subcommand}")))?;
    let mut flags = Vec::new();
    for e in entries {
        if let Some(s) = &e.section {
            if !names.contains(s) {
                return Err(CliError::Usage(format!("config line {}: unknown section [{s}]", e.line)));
            }
            if s != subcommand {
                continue;
            }
        }
        if e.key == "config" {
            return Err(CliError::Usage(format!("config line {}: config files cannot include others", e.line)));
        }
        let arg = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(e.key.as_str()))
            .ok_or_else(|| CliError::Usage(format!("config line {}: unknown key '{}' for {subcommand}", e.line, e.key)))?;
        match arg.get_action() {
            ArgAction::SetTrue => match e.value.as_str() {
                "true" | "yes" | "1" => flags.push(format!("--{}", e.key).into()),
                "false" | "no" | "0" => {}
                v => return Err(CliError::Usage(format!("config line {}: '{v}' is not a boolean", e.line))),
            },
            a if a.takes_values() => flags.push(format!("--{}={}", e.key, e.value).into()),
            _ => return Err(CliError::Usage(format!("config line {}: key '{}' takes no value", e.line, e.key))),
        }
    }
    Ok(flags)
}

/// Splices the `--config` file (if any) into the raw argument list.
pub fn expand(args: Vec<OsString>) -> CliResult<Vec<OsString>> {
    if args.len() < 2 || args[1].to_string_lossy().starts_with('-') {
        return Ok(args);
    }
    let Some(path) = find_config(&args[2..]) else { return Ok(args) };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let flags = to_flags(&parse(&text)?, &args[1].to_string_lossy())?;
    let mut out = Vec::with_capacity(args.len() + flags.len());
    out.extend_from_slice(&args[..2]);
    out.extend(flags);
    out.extend_from_slice(&args[2..]);
    Ok(out)
}
