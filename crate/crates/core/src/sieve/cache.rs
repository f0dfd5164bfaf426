//! On-disk cache of indicator blocks.
//!
//! Layout: `b"KFRZ"`, version byte `0x01`, `k` (one byte), `start` and `len`
//! as little-endian `u64`, then `ceil(len / 8)` bytes of bitstream. Bit `i`
//! of the stream is bit `i % 8` (least significant first) of byte `i / 8`.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use super::{sieve_kfree_with, IndicatorBlock, SieveConfig};
use crate::{Error, Result};

pub const MAGIC: &[u8; 4] = b"KFRZ";
pub const VERSION: u8 = 0x01;
const HEADER_LEN: usize = 4 + 1 + 1 + 8 + 8;

pub fn encode(block: &IndicatorBlock) -> Vec<u8> {
    let nbytes = block.len().div_ceil(8) as usize;
    let mut out = Vec::with_capacity(HEADER_LEN + nbytes);
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(block.k() as u8);
    out.extend_from_slice(&block.start().to_le_bytes());
    out.extend_from_slice(&block.len().to_le_bytes());
    for w in block.words() {
        out.extend_from_slice(&w.to_le_bytes());
    }
    out.truncate(HEADER_LEN + nbytes);
    out
}

pub fn decode(bytes: &[u8]) -> std::result::Result<IndicatorBlock, String> {
    if bytes.len() < HEADER_LEN {
        return Err("truncated header".into());
    }
    if &bytes[..4] != MAGIC {
        return Err("bad magic".into());
    }
    if bytes[4] != VERSION {
        return Err(format!("unsupported version {}", bytes[4]));
    }
    let k = bytes[5] as u32;
    let start = u64::from_le_bytes(bytes[6..14].try_into().unwrap());
    let len = u64::from_le_bytes(bytes[14..22].try_into().unwrap());
    let payload = &bytes[HEADER_LEN..];
    if payload.len() as u64 != len.div_ceil(8) {
        return Err(format!(
            "payload is {} bytes, header promises {}",
            payload.len(),
            len.div_ceil(8)
        ));
    }
    let mut words = Vec::with_capacity(len.div_ceil(64) as usize);
    for chunk in payload.chunks(8) {
        let mut buf = [0u8; 8];
        buf[..chunk.len()].copy_from_slice(chunk);
        words.push(u64::from_le_bytes(buf));
    }
    IndicatorBlock::from_words(k, start, len, words).map_err(|e| e.to_string())
}

pub fn write(block: &IndicatorBlock, path: &Path) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&encode(block))?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read(path: &Path) -> Result<IndicatorBlock> {
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    decode(&bytes).map_err(|reason| Error::Cache {
        path: path.to_path_buf(),
        reason,
    })
}

pub fn file_name(k: u32, start: u64, len: u64) -> String {
    format!("kfree-k{k}-s{start}-n{len}.kfrz")
}

/// Loads `[lo, hi]` from `dir` if cached, otherwise sieves and stores it.
/// A corrupt or mismatched cache file is replaced.
pub fn load_or_sieve(
    k: u32,
    lo: u64,
    hi: u64,
    config: &SieveConfig,
    dir: &Path,
) -> Result<IndicatorBlock> {
    let path: PathBuf = dir.join(file_name(k, lo, hi - lo + 1));
    if path.exists() {
        if let Ok(block) = read(&path) {
            if block.k() == k && block.start() == lo && block.len() == hi - lo + 1 {
                return Ok(block);
            }
        }
    }
    let block = sieve_kfree_with(k, lo, hi, config)?;
    fs::create_dir_all(dir)?;
    write(&block, &path)?;
    Ok(block)
}
