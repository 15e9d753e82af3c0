//! Binary and CSV serialization of grid data.
//!
//! Binary layout, little-endian: magic `CYLF`, `u32` version (1), `u32` n_t,
//! `u32` n_x, `f64` X, `u8` kind, then `n_t * n_x` pairs of `f64` (re, im) in
//! row-major order.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{DataKind, GridData};
use crate::grid::CylinderGrid;

pub const MAGIC: &[u8; 4] = b"CYLF";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 4 + 4 + 8 + 1;

pub fn encode(data: &GridData) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 16 * data.values.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(data.grid.n_t() as u32).to_le_bytes());
    out.extend_from_slice(&(data.grid.n_x() as u32).to_le_bytes());
    out.extend_from_slice(&data.grid.half_width().to_le_bytes());
    out.push(data.kind.code());
    for z in &data.values {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
    out
}

pub fn decode(bytes: &[u8]) -> Result<GridData> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format(format!("{} bytes is shorter than the header", bytes.len())));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::Format("bad magic, expected CYLF".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let version = u32_at(4);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let grid = CylinderGrid::new(u32_at(8) as usize, u32_at(12) as usize, f64_at(16))?;
    let kind = DataKind::from_code(bytes[24])
        .ok_or_else(|| Error::Format(format!("unknown kind byte {}", bytes[24])))?;
    let body = &bytes[HEADER_LEN..];
    if body.len() != 16 * grid.len() {
        return Err(Error::Format(format!(
            "payload has {} bytes, expected {}",
            body.len(),
            16 * grid.len()
        )));
    }
    let values = body
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect();
    Ok(GridData { kind, grid, values })
}

/// CSV with header `row,col,re,im`, one line per entry in row-major order.
pub fn to_csv(data: &GridData) -> String {
    let nx = data.grid.n_x();
    let mut s = String::from("row,col,re,im\n");
    for (i, z) in data.values.iter().enumerate() {
        s.push_str(&format!("{},{},{:e},{:e}\n", i / nx, i % nx, z.re, z.im));
    }
    s
}

/// Writes through a temporary file in the destination directory and renames it
/// into place, so a failed write never leaves a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn write_file(path: &Path, data: &GridData) -> Result<()> {
    write_atomic(path, &encode(data))
}

pub fn write_csv(path: &Path, data: &GridData) -> Result<()> {
    write_atomic(path, to_csv(data).as_bytes())
}

pub fn read_file(path: &Path) -> Result<GridData> {
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    decode(&bytes)
}
