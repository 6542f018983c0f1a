//! Text serialization for sparse vectors and match results.
//!
//! The `.sv` format is line oriented:
//!
//! ```text
//! # optional comments anywhere
//! N=38
//! 5
//! 8
//! ...
//! ```
//!
//! The first non-comment, non-blank line declares the domain size; every
//! following line is one nonzero index in decimal, strictly ascending. Match
//! position files are the same minus the header: one decimal position per
//! line, ascending, with a trailing newline.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::sparse::SparseBinaryVector;

/// Parses a sparse vector from `.sv` text.
pub fn read_sparse<R: Read>(reader: R) -> Result<SparseBinaryVector> {
    let reader = BufReader::new(reader);
    let mut domain: Option<u128> = None;
    let mut support: Vec<u128> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        match domain {
            None => {
                let rest = trimmed.strip_prefix("N=").ok_or_else(|| Error::Parse {
                    line: line_no,
                    msg: format!("expected header 'N=<decimal>', found {trimmed:?}"),
                })?;
                let n: u128 = rest.trim().parse().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("invalid domain size {rest:?}"),
                })?;
                domain = Some(n);
            }
            Some(n) => {
                let value: u128 = trimmed.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("invalid index {trimmed:?}"),
                })?;
                if value >= n {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("index {value} out of range for N={n}"),
                    });
                }
                if let Some(&last) = support.last() {
                    if last >= value {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: format!("indices must be strictly ascending, saw {last} then {value}"),
                        });
                    }
                }
                support.push(value);
            }
        }
    }
    let domain = domain.ok_or(Error::Parse { line: 1, msg: "missing 'N=' header".into() })?;
    // Already validated line by line; the constructor re-checks cheaply.
    SparseBinaryVector::new(domain, support)
}

/// Writes a sparse vector in canonical `.sv` form (no comments).
pub fn write_sparse<W: Write>(mut writer: W, v: &SparseBinaryVector) -> Result<()> {
    writeln!(writer, "N={}", v.domain_size())?;
    for &i in v.support() {
        writeln!(writer, "{i}")?;
    }
    Ok(())
}

/// Reads a `.sv` file from disk.
pub fn read_sparse_file<P: AsRef<Path>>(path: P) -> Result<SparseBinaryVector> {
    read_sparse(File::open(path)?)
}

/// Writes a `.sv` file to disk.
pub fn write_sparse_file<P: AsRef<Path>>(path: P, v: &SparseBinaryVector) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_sparse(&mut w, v)?;
    w.flush()?;
    Ok(())
}

/// Writes match positions: one decimal per line, ascending, trailing newline.
pub fn write_match_positions<W: Write>(mut writer: W, positions: &[u128]) -> Result<()> {
    for &p in positions {
        writeln!(writer, "{p}")?;
    }
    Ok(())
}

/// 64-bit FNV-1a over the canonical serialization of a vector.
///
/// Used to tie a persisted assignment table to the text it was built for;
/// stable across platforms and independent of comments or whitespace in the
/// source file because it hashes the canonical form, not the raw bytes.
pub fn fingerprint(v: &SparseBinaryVector) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    let mut absorb = |word: u128| {
        for byte in word.to_le_bytes() {
            h ^= u64::from(byte);
            h = h.wrapping_mul(PRIME);
        }
    };
    absorb(v.domain_size());
    for &i in v.support() {
        absorb(i);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn parses_minimal_file() {
        let v = read_sparse("N=8\n1\n6\n".as_bytes()).unwrap();
        assert_eq!(v.domain_size(), 8);
        assert_eq!(v.support(), &[1, 6]);
    }

    #[test]
    fn parses_comments_and_blanks() {
        let text = "# text from the worked example\n\nN=38\n# ones\n5\n8\n35\n";
        let v = read_sparse(text.as_bytes()).unwrap();
        assert_eq!(v.domain_size(), 38);
        assert_eq!(v.support(), &[5, 8, 35]);
    }

    #[test]
    fn rejects_out_of_range_with_line_number() {
        let err = read_sparse("N=8\n1\n9\n".as_bytes()).unwrap_err();
        match err {
            crate::Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_unsorted_and_duplicates() {
        assert!(read_sparse("N=8\n6\n1\n".as_bytes()).is_err());
        assert!(read_sparse("N=8\n1\n1\n".as_bytes()).is_err());
        assert!(read_sparse("1\n2\n".as_bytes()).is_err());
        assert!(read_sparse("N=8\nx\n".as_bytes()).is_err());
        assert!(read_sparse("".as_bytes()).is_err());
    }

    #[test]
    fn canonical_write_format() {
        let v = SparseBinaryVector::new(8, vec![1, 6]).unwrap();
        let mut buf = Vec::new();
        write_sparse(&mut buf, &v).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "N=8\n1\n6\n");
    }

    #[test]
    fn roundtrip_random_vectors() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let n: u128 = rng.gen_range(1..=u128::MAX);
            let weight = rng.gen_range(0..64usize);
            let mut sup: Vec<u128> = (0..weight).map(|_| rng.gen_range(0..n)).collect();
            sup.sort_unstable();
            sup.dedup();
            let v = SparseBinaryVector::new(n, sup).unwrap();
            let mut buf = Vec::new();
            write_sparse(&mut buf, &v).unwrap();
            let back = read_sparse(buf.as_slice()).unwrap();
            assert_eq!(back, v);
        }
    }

    #[test]
    fn match_positions_format() {
        let mut buf = Vec::new();
        write_match_positions(&mut buf, &[15, 19, 21]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "15\n19\n21\n");
        let mut empty = Vec::new();
        write_match_positions(&mut empty, &[]).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn fingerprint_tracks_content_not_formatting() {
        let a = read_sparse("N=38\n5\n8\n".as_bytes()).unwrap();
        let b = read_sparse("# comment\n\nN=38\n5\n8\n".as_bytes()).unwrap();
        assert_eq!(fingerprint(&a), fingerprint(&b));
        let c = read_sparse("N=38\n5\n9\n".as_bytes()).unwrap();
        assert_ne!(fingerprint(&a), fingerprint(&c));
        let d = read_sparse("N=39\n5\n8\n".as_bytes()).unwrap();
        assert_ne!(fingerprint(&a), fingerprint(&d));
    }
}
