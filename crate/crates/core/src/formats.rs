//! File formats for bit streams.
//!
//! Text: ASCII lines of `0`/`1`, one stream per line, first bit leftmost.
//! Blank lines are skipped.
//!
//! Packed: an 8-byte little-endian bit count followed by ⌈len/8⌉ bytes;
//! bit i of the stream is bit (i mod 8) of byte ⌊i/8⌋, least significant
//! first. Padding bits in the last byte are zero.

use std::io::{BufRead, Write};

use crate::dynamics::BitStream;
use crate::error::{Error, Result};
use crate::types::BitVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum StreamFormat {
    #[default]
    Text,
    Packed,
}

pub fn read_text_streams<R: BufRead>(reader: R) -> Result<Vec<BitStream>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let s = line
            .parse()
            .map_err(|e: Error| Error::parse(format!("line {}", i + 1), e.to_string()))?;
        out.push(s);
    }
    Ok(out)
}

pub fn write_text_streams<W: Write>(mut writer: W, streams: &[BitStream]) -> Result<()> {
    for s in streams {
        writeln!(writer, "{s}")?;
    }
    Ok(())
}

/// Reads one point per line (same syntax as text streams).
pub fn read_points<R: BufRead>(reader: R) -> Result<Vec<BitVector>> {
    read_text_streams(reader)?
        .into_iter()
        .map(|s| BitVector::new(s.into_inner()))
        .collect()
}

pub fn pack(stream: &BitStream) -> Vec<u8> {
    let bits = stream.as_slice();
    let mut out = Vec::with_capacity(8 + bits.len().div_ceil(8));
    out.extend_from_slice(&(bits.len() as u64).to_le_bytes());
    for chunk in bits.chunks(8) {
        let byte = chunk
            .iter()
            .enumerate()
            .fold(0u8, |acc, (i, &b)| acc | (u8::from(b) << i));
        out.push(byte);
    }
    out
}

pub fn unpack(bytes: &[u8]) -> Result<BitStream> {
    let header: [u8; 8] = bytes
        .get(..8)
        .and_then(|h| h.try_into().ok())
        .ok_or_else(|| Error::parse("header", "packed stream shorter than its 8-byte header"))?;
    let len = usize::try_from(u64::from_le_bytes(header))
        .map_err(|_| Error::parse("header", "bit count does not fit in memory"))?;
    let body = &bytes[8..];
    if body.len() != len.div_ceil(8) {
        return Err(Error::parse(
            "body",
            format!("{len} bits need {} bytes, found {}", len.div_ceil(8), body.len()),
        ));
    }
    if len % 8 != 0 && body[body.len() - 1] >> (len % 8) != 0 {
        return Err(Error::parse("body", "nonzero padding bits in the last byte"));
    }
    let bits = (0..len).map(|i| body[i / 8] >> (i % 8) & 1 == 1).collect();
    BitStream::new(bits)
}
