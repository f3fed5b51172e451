use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::ScenarioConfig;
use super::mc::BerCurve;
use crate::{Error, Result};

#[derive(Serialize)]
struct Sidecar<'a, T: Serialize> {
    fingerprint: String,
    flagged: bool,
    config: &'a ScenarioConfig,
    result: &'a T,
}

/// Path of the JSON file written next to `out`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("json")
}

/// Writes `csv` to `out` and a JSON sidecar with the resolved configuration,
/// its fingerprint, and the full result.
pub fn write_with_sidecar<T: Serialize>(
    out: &Path,
    csv: &str,
    cfg: &ScenarioConfig,
    result: &T,
    flagged: bool,
) -> Result<PathBuf> {
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(out, csv)?;
    let side = sidecar_path(out);
    let json = serde_json::to_string_pretty(&Sidecar {
        fingerprint: cfg.fingerprint()?,
        flagged,
        config: cfg,
        result,
    })
    .map_err(|e| Error::invalid(e.to_string()))?;
    fs::write(&side, json)?;
    Ok(side)
}

pub fn write_curve(out: &Path, curve: &BerCurve, cfg: &ScenarioConfig) -> Result<PathBuf> {
    write_with_sidecar(out, &curve.to_csv(), cfg, curve, curve.flagged())
}
