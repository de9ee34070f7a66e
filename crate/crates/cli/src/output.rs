use std::io::Write;
use std::path::Path;

use ssfilt_core::io::{encode, encode_field_pfm, BitDepth, Format};
use ssfilt_core::{Image, ScalarField};
use tempfile::NamedTempFile;

use crate::error::{CliError, CliResult};

/// Depth for `format` given the depth the input was read with.
pub fn output_depth(format: Format, input: BitDepth) -> BitDepth {
    match (format, input) {
        (Format::Pfm, _) => BitDepth::Float,
        (_, BitDepth::Float) => BitDepth::Sixteen,
        (_, d) => d,
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let err = |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(err)?;
    tmp.write_all(bytes).map_err(err)?;
    tmp.as_file().sync_all().map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}

pub fn save_image(path: &Path, img: &Image, input_depth: BitDepth) -> CliResult<()> {
    let format = Format::from_path(path)?;
    let bytes = encode(img, format, output_depth(format, input_depth), path)?;
    write_atomic(path, &bytes)
}

pub fn save_field_pfm(path: &Path, field: &ScalarField) -> CliResult<()> {
    write_atomic(path, &encode_field_pfm(field))
}
