use std::io::{BufRead, Read, Write};

use super::LinearMap;
use crate::{Error, Result, C64};

const MAGIC: &[u8; 8] = b"SXXZMAP1";

/// Coordinate-triplet text: a header line `ell L_in L_out nnz`, then one
/// `row col re im` line per stored entry.
pub fn write_triplets<W: Write>(map: &LinearMap, mut w: W) -> Result<()> {
    writeln!(
        w,
        "{} {} {} {}",
        map.ell(),
        map.len_in(),
        map.len_out(),
        map.nnz()
    )?;
    for (r, c, v) in map.triplets() {
        writeln!(w, "{r} {c} {:e} {:e}", v.re, v.im)?;
    }
    Ok(())
}

pub fn read_triplets<R: BufRead>(r: R) -> Result<LinearMap> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("missing header".into()))??;
    let h: Vec<usize> = header
        .split_whitespace()
        .map(|s| s.parse().map_err(|_| Error::Format(format!("bad header field {s:?}"))))
        .collect::<Result<_>>()?;
    let [ell, len_in, len_out, nnz] = h[..] else {
        return Err(Error::Format("header needs four fields".into()));
    };
    let mut t = Vec::with_capacity(nnz);
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 4 {
            return Err(Error::Format(format!("bad entry line {line:?}")));
        }
        let bad = |_| Error::Format(format!("bad entry line {line:?}"));
        let row: usize = f[0].parse().map_err(|_| Error::Format(line.clone()))?;
        let col: usize = f[1].parse().map_err(|_| Error::Format(line.clone()))?;
        let re: f64 = f[2].parse().map_err(bad)?;
        let im: f64 = f[3].parse().map_err(bad)?;
        t.push((row, col, C64::new(re, im)));
    }
    if t.len() != nnz {
        return Err(Error::Format(format!(
            "header announces {nnz} entries, found {}",
            t.len()
        )));
    }
    LinearMap::from_triplets(ell, len_in, len_out, t)
}

/// Little-endian binary: magic, four `u64` header fields, then
/// `(u64 row, u64 col, f64 re, f64 im)` records.
pub fn write_binary<W: Write>(map: &LinearMap, mut w: W) -> Result<()> {
    w.write_all(MAGIC)?;
    for h in [map.ell(), map.len_in(), map.len_out(), map.nnz()] {
        w.write_all(&(h as u64).to_le_bytes())?;
    }
    for (r, c, v) in map.triplets() {
        w.write_all(&(r as u64).to_le_bytes())?;
        w.write_all(&(c as u64).to_le_bytes())?;
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut r: R) -> Result<LinearMap> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let mut buf = [0u8; 8];
    let mut next = |r: &mut R| -> Result<[u8; 8]> {
        r.read_exact(&mut buf)?;
        Ok(buf)
    };
    let mut header = [0usize; 4];
    for h in header.iter_mut() {
        *h = u64::from_le_bytes(next(&mut r)?) as usize;
    }
    let [ell, len_in, len_out, nnz] = header;
    let mut t = Vec::with_capacity(nnz);
    for _ in 0..nnz {
        let row = u64::from_le_bytes(next(&mut r)?) as usize;
        let col = u64::from_le_bytes(next(&mut r)?) as usize;
        let re = f64::from_le_bytes(next(&mut r)?);
        let im = f64::from_le_bytes(next(&mut r)?);
        t.push((row, col, C64::new(re, im)));
    }
    LinearMap::from_triplets(ell, len_in, len_out, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{global_supercharge, SuperchargeSpec};

    fn sample() -> LinearMap {
        let spec = SuperchargeSpec::new(2, 2)
            .with_y(C64::new(0.3, -0.2))
            .with_labels(1, 0);
        global_supercharge(&spec).unwrap()
    }

    #[test]
    fn text_round_trip() {
        let m = sample();
        let mut buf = Vec::new();
        write_triplets(&m, &mut buf).unwrap();
        let back = read_triplets(&buf[..]).unwrap();
        assert!(back.max_abs_diff(&m).unwrap() < 1e-15);
        assert_eq!(back.nnz(), m.nnz());
    }

    #[test]
    fn binary_round_trip_is_exact() {
        let m = sample();
        let mut buf = Vec::new();
        write_binary(&m, &mut buf).unwrap();
        assert_eq!(read_binary(&buf[..]).unwrap(), m);
    }

    #[test]
    fn rejects_truncated_input() {
        assert!(read_triplets(&b"1 1 2 3\n0 0 1 0\n"[..]).is_err());
        assert!(read_binary(&b"SXXZMAP1"[..]).is_err());
    }
}
