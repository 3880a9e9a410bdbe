use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use super::CliError;
use crate::numerics::DensityCurve;

/// Formats `x` with 17 significant digits, which round-trips binary64.
/// Positional notation for moderate magnitudes, scientific otherwise.
pub fn sig17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.16e}");
    let exponent: i32 = sci[sci.find('e').expect("scientific format") + 1..]
        .parse()
        .expect("integer exponent");
    if (-5..17).contains(&exponent) {
        format!("{:.*}", (16 - exponent) as usize, x)
    } else {
        sci
    }
}

/// Writes `contents` to a sibling temporary file, then renames it over
/// `path`.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io_error = |source| CliError::Io { path: path.to_path_buf(), source };
    let file_name = path
        .file_name()
        .ok_or_else(|| CliError::Usage(format!("{} is not a file path", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(file_name);
    tmp_name.push(format!(".{}.tmp", std::process::id()));
    let tmp = path.with_file_name(tmp_name);

    let result = fs::File::create(&tmp)
        .and_then(|mut file| {
            file.write_all(contents.as_bytes())?;
            file.sync_all()
        })
        .and_then(|()| fs::rename(&tmp, path));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(io_error)
}

/// `r,density` table of a curve.
pub fn curve_csv(curve: &DensityCurve) -> String {
    let mut out = String::from("r,density\n");
    for (r, density) in curve.iter() {
        writeln!(out, "{},{}", sig17(r), sig17(density)).expect("writing to a String");
    }
    out
}

/// `<stem>_<suffix>.csv` next to `path`.
pub fn sibling_path(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}_{suffix}.csv"))
}
