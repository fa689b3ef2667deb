use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use breathradar::{read_cube, write_cube, IqCube};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| CliError::io(path, e))
}

pub fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

/// Creates `path`, hands the writer to `fill`, and flushes.
pub fn write_with<F>(path: &Path, fill: F) -> CliResult<()>
where
    F: FnOnce(&mut BufWriter<File>) -> breathradar::Result<()>,
{
    let mut w = create(path)?;
    fill(&mut w).map_err(|e| CliError::from(e).at(path))?;
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    let mut w = create(path)?;
    w.write_all(text.as_bytes()).map_err(|e| CliError::io(path, e))?;
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    write_text(path, &to_json(value)?)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    serde_json::from_reader(open(path)?).map_err(|e| CliError::from(e).at(path))
}

pub fn load_cube(path: &Path) -> CliResult<IqCube> {
    read_cube(open(path)?).map_err(|e| CliError::from(e).at(path))
}

pub fn save_cube(path: &Path, cube: &IqCube) -> CliResult<()> {
    write_with(path, |w| write_cube(cube, w))
}
