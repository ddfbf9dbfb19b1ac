use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::CliError;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "INSUPERABLE_OUT_DIR";

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<String>,
    pub params: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tool_version: String,
    /// File names relative to the output directory.
    pub outputs: Vec<String>,
}

/// Collects output files for one run and writes them, plus `manifest.json`,
/// into the output directory when there is one.
pub struct Sink {
    dir: Option<PathBuf>,
    manifest: RunManifest,
}

impl Sink {
    pub fn new(out: Option<PathBuf>, command: &str) -> Self {
        let dir = out.or_else(|| std::env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from));
        Sink {
            dir,
            manifest: RunManifest {
                command: command.to_string(),
                inputs: Vec::new(),
                params: Value::Object(Default::default()),
                seed: None,
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                outputs: Vec::new(),
            },
        }
    }

    pub fn input(&mut self, path: &Path) {
        self.manifest.inputs.push(path.display().to_string());
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("parameter serializes");
        if let Value::Object(m) = &mut self.manifest.params {
            m.insert(key.to_string(), v);
        }
    }

    pub fn seed(&mut self, seed: u64) {
        self.manifest.seed = Some(seed);
    }

    pub fn file(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let Some(dir) = &self.dir else { return Ok(()) };
        fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("cannot create {}: {e}", dir.display())))?;
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
        self.manifest.outputs.push(name.to_string());
        Ok(())
    }

    /// Prints `report` to stdout and stores it as `name`, then writes the
    /// manifest.
    pub fn finish(mut self, name: &str, report: &impl Serialize) -> Result<(), CliError> {
        let text = insuperable::rational::with_decimal_rendering(|| serde_json::to_string_pretty(report))
            .expect("report serializes");
        // A closed pipe on stdout is not an error; the files still get written.
        let _ = writeln!(std::io::stdout().lock(), "{text}");
        self.file(name, &format!("{text}\n"))?;
        if self.dir.is_some() {
            let manifest = serde_json::to_string_pretty(&self.manifest).expect("manifest serializes");
            self.file("manifest.json", &format!("{manifest}\n"))?;
        }
        Ok(())
    }
}
