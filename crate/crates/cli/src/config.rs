//! `key=value` run files: the optional `--config` input and the manifest
//! written next to every output.
//!
//! A config file maps one-to-one onto long flags. It is spliced into the
//! argument list right after the subcommand, so flags typed on the command
//! line come later and win.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

pub const SUBCOMMANDS: [&str; 4] = ["embed", "evaluate", "gridsearch", "spread"];

const RESERVED: [&str; 2] = ["command", "version"];

#[derive(Debug, Default, PartialEq)]
pub struct RunFile {
    pub command: Option<String>,
    pub version: Option<String>,
    pub entries: Vec<(String, String)>,
}

pub fn parse_run_file(text: &str) -> Result<RunFile> {
    let mut file = RunFile::default();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("line {}: expected key=value, got {line:?}", n + 1);
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || key.starts_with('-') {
            bail!("line {}: bad key {key:?}", n + 1);
        }
        match key {
            "command" => file.command = Some(value.to_owned()),
            "version" => file.version = Some(value.to_owned()),
            _ => file.entries.push((key.to_owned(), value.to_owned())),
        }
    }
    Ok(file)
}

/// Strips `--config FILE` from `args` and splices the file's entries in as
/// flags directly after the subcommand. When no subcommand is given the
/// file's `command` key supplies one.
pub fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut rest = Vec::with_capacity(args.len());
    let mut config = None;
    let mut iter = args.into_iter();
    let program = iter.next().unwrap_or_else(|| "qwalkvec".into());
    while let Some(arg) = iter.next() {
        let text = arg.to_string_lossy();
        if text == "--config" {
            let path = iter.next().context("--config needs a file")?;
            config = Some(path);
        } else if let Some(path) = text.strip_prefix("--config=") {
            config = Some(path.into());
        } else {
            rest.push(arg);
        }
    }
    let Some(path) = config else {
        let mut out = vec![program];
        out.extend(rest);
        return Ok(out);
    };

    let text = fs::read_to_string(&path).with_context(|| format!("reading config {}", path.to_string_lossy()))?;
    let file = parse_run_file(&text)?;
    if let Some(version) = &file.version {
        if version != env!("CARGO_PKG_VERSION") {
            log::warn!("config written by version {version}, running {}", env!("CARGO_PKG_VERSION"));
        }
    }

    let position = rest
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()));
    let (before, command, after) = match position {
        Some(i) => {
            let after = rest.split_off(i + 1);
            let command = rest.pop().expect("subcommand present");
            (rest, command, after)
        }
        None => match &file.command {
            Some(c) => (Vec::new(), OsString::from(c), rest),
            None => bail!("config has no command= entry and no subcommand was given"),
        },
    };

    let mut out = vec![program];
    out.extend(before);
    out.push(command);
    for (key, value) in &file.entries {
        out.push(format!("--{key}").into());
        out.push(value.into());
    }
    out.extend(after);
    Ok(out)
}

/// Resolved flags of one run, written as `<out>.manifest`.
#[derive(Debug)]
pub struct Manifest {
    command: &'static str,
    entries: Vec<(&'static str, String)>,
}

impl Manifest {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            entries: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &'static str, value: impl ToString) -> &mut Self {
        debug_assert!(!RESERVED.contains(&key));
        self.entries.push((key, value.to_string()));
        self
    }

    pub fn render(&self) -> String {
        let mut out = String::from("# rerun with: qwalkvec --config <this file>\n");
        let _ = writeln!(out, "command={}", self.command);
        let _ = writeln!(out, "version={}", env!("CARGO_PKG_VERSION"));
        for (key, value) in &self.entries {
            let _ = writeln!(out, "{key}={value}");
        }
        out
    }

    pub fn write_beside(&self, output: &Path) -> Result<()> {
        let mut path = output.as_os_str().to_owned();
        path.push(".manifest");
        fs::write(&path, self.render()).with_context(|| format!("writing {}", path.to_string_lossy()))
    }
}
