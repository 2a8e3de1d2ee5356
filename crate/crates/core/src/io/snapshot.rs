//! Binary field snapshots.
//!
//! Layout, all little-endian: 8-byte magic `NLSFARF1`; `u32` version; `u32`
//! dim; `dim × u32` points; `dim × f64` extents; far field re, im and time
//! as `f64`; then `2·∏Nᵢ` `f64` values interleaved (re, im), row-major
//! with axis 0 slowest.

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{Field, Grid};

pub const MAGIC: &[u8; 8] = b"NLSFARF1";
pub const VERSION: u32 = 1;

pub fn encode_snapshot(field: &Field, t: f64) -> Vec<u8> {
    let grid = field.grid();
    let mut out = Vec::with_capacity(64 + 16 * grid.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(grid.dim() as u32).to_le_bytes());
    for &n in grid.points() {
        out.extend_from_slice(&(n as u32).to_le_bytes());
    }
    for &l in grid.extents() {
        out.extend_from_slice(&l.to_le_bytes());
    }
    let c = field.farfield();
    for x in [c.re, c.im, t] {
        out.extend_from_slice(&x.to_le_bytes());
    }
    for z in field.values() {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
    out
}

pub fn write_snapshot(field: &Field, t: f64, path: &Path) -> Result<()> {
    fs::write(path, encode_snapshot(field, t))?;
    Ok(())
}

/// Reads a snapshot, returning the field and its time.
pub fn read_snapshot(path: &Path) -> Result<(Field, f64)> {
    let bytes = fs::read(path)?;
    decode_snapshot(&bytes).map_err(|(offset, msg)| Error::Snapshot { path: path.to_path_buf(), offset, msg })
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

type DecodeResult<T> = std::result::Result<T, (u64, String)>;

impl Reader<'_> {
    fn take<const N: usize>(&mut self, what: &str) -> DecodeResult<[u8; N]> {
        let end = self.pos + N;
        if end > self.bytes.len() {
            return Err((self.pos as u64, format!("file ends inside {what} ({} bytes total)", self.bytes.len())));
        }
        let mut out = [0u8; N];
        out.copy_from_slice(&self.bytes[self.pos..end]);
        self.pos = end;
        Ok(out)
    }

    fn u32(&mut self, what: &str) -> DecodeResult<u32> {
        self.take::<4>(what).map(u32::from_le_bytes)
    }

    fn f64(&mut self, what: &str) -> DecodeResult<f64> {
        self.take::<8>(what).map(f64::from_le_bytes)
    }
}

/// Decodes snapshot bytes; errors carry the byte offset where decoding stopped.
pub fn decode_snapshot(bytes: &[u8]) -> DecodeResult<(Field, f64)> {
    let mut r = Reader { bytes, pos: 0 };
    if &r.take::<8>("magic")? != MAGIC {
        return Err((0, "bad magic, expected NLSFARF1".into()));
    }
    let version = r.u32("version")?;
    if version != VERSION {
        return Err((8, format!("unsupported version {version}")));
    }
    let dim_at = r.pos as u64;
    let dim = r.u32("dim")? as usize;
    if !(1..=3).contains(&dim) {
        return Err((dim_at, format!("dim = {dim} outside 1..=3")));
    }
    let mut points = Vec::with_capacity(dim);
    for _ in 0..dim {
        points.push(r.u32("points")? as usize);
    }
    let mut extents = Vec::with_capacity(dim);
    for _ in 0..dim {
        extents.push(r.f64("extents")?);
    }
    let grid = Grid::new(dim, &extents, &points).map_err(|e| (dim_at, e.to_string()))?;
    let c = Complex64::new(r.f64("farfield")?, r.f64("farfield")?);
    let t = r.f64("time")?;
    let payload_at = r.pos;
    let expected = payload_at + 16 * grid.len();
    if bytes.len() != expected {
        let at = bytes.len().min(expected) as u64;
        return Err((at, format!("payload of {} bytes, header declares {}", bytes.len() - payload_at, 16 * grid.len())));
    }
    let values: Vec<Complex64> = bytes[payload_at..]
        .chunks_exact(16)
        .map(|ch| {
            let re = f64::from_le_bytes(ch[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(ch[8..].try_into().expect("8 bytes"));
            Complex64::new(re, im)
        })
        .collect();
    let field = Field::new(grid, values, c).map_err(|e| (payload_at as u64, e.to_string()))?;
    Ok((field, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Field {
        let g = Grid::new(2, &[3.0, 5.5], &[4, 8]).unwrap();
        let v: Vec<Complex64> = (0..g.len()).map(|i| Complex64::new((i as f64).sin(), 1.0 / (i as f64 + 1.0))).collect();
        Field::from_perturbation(g, Complex64::from_polar(1.0, 0.4), &v).unwrap()
    }

    #[test]
    fn roundtrip_is_bitwise() {
        let f = sample();
        let (g, t) = decode_snapshot(&encode_snapshot(&f, 0.125)).unwrap();
        assert_eq!(t, 0.125);
        assert_eq!(g, f);
    }

    #[test]
    fn truncation_reports_offset() {
        let bytes = encode_snapshot(&sample(), 1.0);
        let cut = &bytes[..bytes.len() - 5];
        let (offset, msg) = decode_snapshot(cut).unwrap_err();
        assert_eq!(offset as usize, cut.len());
        assert!(msg.contains("payload"), "{msg}");
        let (offset, _) = decode_snapshot(&bytes[..10]).unwrap_err();
        assert_eq!(offset, 8);
    }

    #[test]
    fn rejects_other_versions_and_magic() {
        let mut bytes = encode_snapshot(&sample(), 1.0);
        bytes[8..12].copy_from_slice(&2u32.to_le_bytes());
        assert!(decode_snapshot(&bytes).unwrap_err().1.contains("unsupported version 2"));
        bytes[0] = b'X';
        assert_eq!(decode_snapshot(&bytes).unwrap_err().0, 0);
    }
}
