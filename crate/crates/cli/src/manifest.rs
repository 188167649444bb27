use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use specwave::io::create;

/// Everything needed to rerun a command: the resolved flag values (usable
/// directly as a `--config` file) plus what the run produced.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest<T> {
    pub command: String,
    pub version: String,
    pub settings: BTreeMap<String, String>,
    pub rerun: String,
    pub result: T,
}

impl<T: Serialize> Manifest<T> {
    pub fn new(command: &str, settings: BTreeMap<String, String>, result: T) -> Self {
        let flags: Vec<String> = settings.iter().map(|(k, v)| format!("--{k}={v}")).collect();
        Self {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            rerun: format!("specwave {command} {}", flags.join(" ")),
            settings,
            result,
        }
    }

    pub fn write(&self, path: &Path) -> specwave::Result<()> {
        let mut w = create(path)?;
        serde_json::to_writer_pretty(&mut w, self)?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }
}

/// `dir/out.csv` gets `dir/out.manifest.json`.
pub fn sidecar(path: &Path) -> std::path::PathBuf {
    let stem = path.file_stem().map_or("output".into(), |s| s.to_string_lossy().into_owned());
    path.with_file_name(format!("{stem}.manifest.json"))
}
