//! Displacement field snapshots.
//!
//! Each snapshot is a little-endian binary file: the 8-byte magic
//! `NLTRSNAP`, a `u32` format version, a `u64` node count and the `f64`
//! time in seconds, followed by `(u_x, u_y)` per node as `f64` pairs. An
//! index CSV (`index,time_s,file`) lists the snapshots of a run.

use std::io::{self, BufRead, Read, Write};

pub const MAGIC: &[u8; 8] = b"NLTRSNAP";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 8 + 4 + 8 + 8;

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    /// Interleaved `u_x, u_y` per node.
    pub displacement: Vec<f64>,
}

impl Snapshot {
    pub fn n_nodes(&self) -> usize {
        self.displacement.len() / 2
    }

    pub fn uy(&self) -> impl Iterator<Item = f64> + '_ {
        self.displacement.iter().skip(1).step_by(2).copied()
    }
}

pub fn write_snapshot<W: Write>(mut w: W, time: f64, displacement: &[f64]) -> io::Result<()> {
    if displacement.len() % 2 != 0 {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "displacement length must be even"));
    }
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&((displacement.len() / 2) as u64).to_le_bytes())?;
    w.write_all(&time.to_le_bytes())?;
    for v in displacement {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_snapshot<R: Read>(mut r: R) -> io::Result<Snapshot> {
    let bad = |m: &str| io::Error::new(io::ErrorKind::InvalidData, m.to_string());
    let mut header = [0u8; HEADER_LEN];
    r.read_exact(&mut header)?;
    if &header[..8] != MAGIC {
        return Err(bad("not a snapshot file"));
    }
    let version = u32::from_le_bytes(header[8..12].try_into().unwrap());
    if version != VERSION {
        return Err(bad("unsupported snapshot version"));
    }
    let n = u64::from_le_bytes(header[12..20].try_into().unwrap()) as usize;
    let time = f64::from_le_bytes(header[20..28].try_into().unwrap());
    let mut body = vec![0u8; 16 * n];
    r.read_exact(&mut body)?;
    let displacement = body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    Ok(Snapshot { time, displacement })
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndexEntry {
    pub index: usize,
    pub time: f64,
    pub file: String,
}

pub fn write_index<W: Write>(mut w: W, entries: &[IndexEntry]) -> io::Result<()> {
    writeln!(w, "index,time_s,file")?;
    for e in entries {
        writeln!(w, "{},{:e},{}", e.index, e.time, e.file)?;
    }
    Ok(())
}

pub fn read_index<R: BufRead>(r: R) -> io::Result<Vec<IndexEntry>> {
    let bad = |l: usize| io::Error::new(io::ErrorKind::InvalidData, format!("bad index line {l}"));
    let mut out = Vec::new();
    for (n, line) in r.lines().enumerate().skip(1) {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.splitn(3, ',');
        let index = it.next().and_then(|s| s.parse().ok()).ok_or_else(|| bad(n + 1))?;
        let time = it.next().and_then(|s| s.parse().ok()).ok_or_else(|| bad(n + 1))?;
        let file = it.next().ok_or_else(|| bad(n + 1))?.to_string();
        out.push(IndexEntry { index, time, file });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let u = vec![1.0, -2.5e-10, 0.0, f64::MIN_POSITIVE, 3.0, 4.0];
        let mut buf = Vec::new();
        write_snapshot(&mut buf, 3.26e-5, &u).unwrap();
        assert_eq!(buf.len(), HEADER_LEN + 16 * 3);
        assert_eq!(&buf[..8], b"NLTRSNAP");
        assert_eq!(u64::from_le_bytes(buf[12..20].try_into().unwrap()), 3);
        let s = read_snapshot(buf.as_slice()).unwrap();
        assert_eq!(s.time, 3.26e-5);
        assert_eq!(s.displacement, u);
        assert_eq!(s.uy().collect::<Vec<_>>(), vec![-2.5e-10, f64::MIN_POSITIVE, 4.0]);
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_snapshot(&b"NOTASNAPxxxxxxxxxxxxxxxxxxxxxxxx"[..]).is_err());
        let mut buf = Vec::new();
        write_snapshot(&mut buf, 0.0, &[1.0, 2.0]).unwrap();
        buf.truncate(buf.len() - 1);
        assert!(read_snapshot(buf.as_slice()).is_err());
    }

    #[test]
    fn index_round_trip() {
        let e = vec![
            IndexEntry { index: 0, time: 0.0, file: "snap_000000.bin".into() },
            IndexEntry { index: 1, time: 1.5e-6, file: "snap_000001.bin".into() },
        ];
        let mut buf = Vec::new();
        write_index(&mut buf, &e).unwrap();
        assert_eq!(read_index(buf.as_slice()).unwrap(), e);
    }
}
