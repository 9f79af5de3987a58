//! Output file handling: atomic writes and the CSV dialect (comma separator,
//! `.` decimal point, UTF-8, LF line endings, header row first).

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

/// Writes via a temp file in the target directory plus rename, so a failed
/// run never leaves a partial file at the destination.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let tmp = temp_path(path);
    let finish = (|| -> std::io::Result<()> {
        fs::write(&tmp, contents)?;
        fs::rename(&tmp, path)
    })();
    if finish.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    finish.map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))
}

fn temp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".tmp");
    path.with_file_name(name)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut body = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::data(format!("cannot serialize output: {e}")))?;
    body.push('\n');
    write_atomic(path, &body)
}

/// Sibling path with the extension swapped (used for the report CSV written
/// next to the report JSON).
pub fn with_extension(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}

pub fn csv_line(fields: &[String]) -> String {
    fields.join(",")
}
