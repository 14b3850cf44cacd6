//! Serialized filter envelope.
//!
//! One fixed 44-byte header followed by the raw filter payload. All integers
//! are little-endian; the three geometry fields are interpreted per kind and
//! reserved fields must be zero.
//!
//! | offset | size | field                                                        |
//! |--------|------|--------------------------------------------------------------|
//! | 0      | 8    | magic `binfuse\0`                                            |
//! | 8      | 2    | format version, currently 1                                  |
//! | 10     | 1    | filter kind: 0 fuse3, 1 fuse4, 2 xor, 3 bloom                |
//! | 11     | 1    | fingerprint bits (8 or 16); for bloom, the hash count        |
//! | 12     | 8    | hashing seed                                                 |
//! | 20     | 8    | fuse: segment length; xor: block length; bloom: bit length m |
//! | 28     | 8    | fuse: start segment count; otherwise reserved                |
//! | 36     | 8    | fuse/xor: slot array length; bloom: reserved                 |
//! | 44     | ...  | payload: fingerprint words in index order, or bloom words    |
//!
//! The header alone determines the payload length, so a shortened or padded
//! stream is rejected as corrupt before any payload is touched.

use crate::Error;
use crate::bloom::BloomFilter;
use crate::fuse::{Fuse8, Fuse16};
use crate::hashing::Seed;
use crate::layout::{Arity, FilterLayout};
use crate::xor::{Xor8, Xor16};

pub const MAGIC: [u8; 8] = *b"binfuse\0";
pub const FORMAT_VERSION: u16 = 1;
const HEADER_LEN: usize = 44;

/// Filter kind tag of the envelope; also the CLI's filter name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FilterKind {
    Fuse3,
    Fuse4,
    Xor,
    Bloom,
}

impl FilterKind {
    fn tag(self) -> u8 {
        match self {
            FilterKind::Fuse3 => 0,
            FilterKind::Fuse4 => 1,
            FilterKind::Xor => 2,
            FilterKind::Bloom => 3,
        }
    }

    fn from_tag(tag: u8) -> Result<Self, Error> {
        match tag {
            0 => Ok(FilterKind::Fuse3),
            1 => Ok(FilterKind::Fuse4),
            2 => Ok(FilterKind::Xor),
            3 => Ok(FilterKind::Bloom),
            other => Err(Error::UnknownKind(other)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FilterKind::Fuse3 => "fuse3",
            FilterKind::Fuse4 => "fuse4",
            FilterKind::Xor => "xor",
            FilterKind::Bloom => "bloom",
        }
    }
}

impl std::str::FromStr for FilterKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fuse3" => Ok(FilterKind::Fuse3),
            "fuse4" => Ok(FilterKind::Fuse4),
            "xor" => Ok(FilterKind::Xor),
            "bloom" => Ok(FilterKind::Bloom),
            other => Err(format!(
                "unknown filter kind {other:?} (expected fuse3, fuse4, xor, or bloom)"
            )),
        }
    }
}

/// Any filter this crate can store, unified for loading and querying.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyFilter {
    Fuse8(Fuse8),
    Fuse16(Fuse16),
    Xor8(Xor8),
    Xor16(Xor16),
    Bloom(BloomFilter),
}

impl AnyFilter {
    pub fn contains(&self, key: u64) -> bool {
        match self {
            AnyFilter::Fuse8(f) => f.contains(key),
            AnyFilter::Fuse16(f) => f.contains(key),
            AnyFilter::Xor8(f) => f.contains(key),
            AnyFilter::Xor16(f) => f.contains(key),
            AnyFilter::Bloom(f) => f.contains(key),
        }
    }

    pub fn kind(&self) -> FilterKind {
        let fuse_kind = |arity: Arity| match arity {
            Arity::Three => FilterKind::Fuse3,
            Arity::Four => FilterKind::Fuse4,
        };
        match self {
            AnyFilter::Fuse8(f) => fuse_kind(f.layout().arity()),
            AnyFilter::Fuse16(f) => fuse_kind(f.layout().arity()),
            AnyFilter::Xor8(_) | AnyFilter::Xor16(_) => FilterKind::Xor,
            AnyFilter::Bloom(_) => FilterKind::Bloom,
        }
    }

    /// Total payload size in bits.
    pub fn storage_bits(&self) -> usize {
        match self {
            AnyFilter::Fuse8(f) => f.fingerprints().len() * 8,
            AnyFilter::Fuse16(f) => f.fingerprints().len() * 16,
            AnyFilter::Xor8(f) => f.fingerprints().len() * 8,
            AnyFilter::Xor16(f) => f.fingerprints().len() * 16,
            AnyFilter::Bloom(f) => f.bit_len(),
        }
    }

    /// Storage cost in bits per key for a set of `n` keys.
    pub fn bits_per_key(&self, n: usize) -> Result<f64, Error> {
        if n == 0 {
            return Err(Error::UndefinedBitsPerKey);
        }
        Ok(self.storage_bits() as f64 / n as f64)
    }
}

impl From<Fuse8> for AnyFilter {
    fn from(f: Fuse8) -> Self {
        AnyFilter::Fuse8(f)
    }
}

impl From<Fuse16> for AnyFilter {
    fn from(f: Fuse16) -> Self {
        AnyFilter::Fuse16(f)
    }
}

impl From<Xor8> for AnyFilter {
    fn from(f: Xor8) -> Self {
        AnyFilter::Xor8(f)
    }
}

impl From<Xor16> for AnyFilter {
    fn from(f: Xor16) -> Self {
        AnyFilter::Xor16(f)
    }
}

impl From<BloomFilter> for AnyFilter {
    fn from(f: BloomFilter) -> Self {
        AnyFilter::Bloom(f)
    }
}

struct Header {
    kind: FilterKind,
    bits: u8,
    seed: Seed,
    geometry: [u64; 3],
}

fn write_header(out: &mut Vec<u8>, header: &Header) {
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.push(header.kind.tag());
    out.push(header.bits);
    out.extend_from_slice(&header.seed.value().to_le_bytes());
    for field in header.geometry {
        out.extend_from_slice(&field.to_le_bytes());
    }
}

fn read_u64(bytes: &[u8], offset: usize) -> u64 {
    u64::from_le_bytes(bytes[offset..offset + 8].try_into().unwrap())
}

fn parse_header(bytes: &[u8]) -> Result<Header, Error> {
    if bytes.len() >= 8 && bytes[..8] != MAGIC {
        return Err(Error::BadMagic);
    }
    if bytes.len() < HEADER_LEN {
        return Err(Error::Corrupt {
            expected: HEADER_LEN,
            found: bytes.len(),
        });
    }
    let version = u16::from_le_bytes(bytes[8..10].try_into().unwrap());
    if version != FORMAT_VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    Ok(Header {
        kind: FilterKind::from_tag(bytes[10])?,
        bits: bytes[11],
        seed: Seed::new(read_u64(bytes, 12)),
        geometry: [
            read_u64(bytes, 20),
            read_u64(bytes, 28),
            read_u64(bytes, 36),
        ],
    })
}

fn push_fingerprints_u8(out: &mut Vec<u8>, fingerprints: &[u8]) {
    out.extend_from_slice(fingerprints);
}

fn push_fingerprints_u16(out: &mut Vec<u8>, fingerprints: &[u16]) {
    for &f in fingerprints {
        out.extend_from_slice(&f.to_le_bytes());
    }
}

/// Encodes a filter into the envelope format above.
pub fn serialize(filter: &AnyFilter) -> Vec<u8> {
    let (header, payload_len) = match filter {
        AnyFilter::Fuse8(f) => (
            Header {
                kind: filter.kind(),
                bits: 8,
                seed: f.seed(),
                geometry: fuse_geometry(f.layout()),
            },
            f.fingerprints().len(),
        ),
        AnyFilter::Fuse16(f) => (
            Header {
                kind: filter.kind(),
                bits: 16,
                seed: f.seed(),
                geometry: fuse_geometry(f.layout()),
            },
            f.fingerprints().len() * 2,
        ),
        AnyFilter::Xor8(f) => (
            Header {
                kind: FilterKind::Xor,
                bits: 8,
                seed: f.seed(),
                geometry: [f.block_length() as u64, 0, f.fingerprints().len() as u64],
            },
            f.fingerprints().len(),
        ),
        AnyFilter::Xor16(f) => (
            Header {
                kind: FilterKind::Xor,
                bits: 16,
                seed: f.seed(),
                geometry: [f.block_length() as u64, 0, f.fingerprints().len() as u64],
            },
            f.fingerprints().len() * 2,
        ),
        AnyFilter::Bloom(f) => (
            Header {
                kind: FilterKind::Bloom,
                bits: u8::try_from(f.hash_count()).expect("hash count fits a byte"),
                seed: f.seed(),
                geometry: [f.bit_len() as u64, 0, 0],
            },
            f.bit_len() / 8,
        ),
    };
    let mut out = Vec::with_capacity(HEADER_LEN + payload_len);
    write_header(&mut out, &header);
    match filter {
        AnyFilter::Fuse8(f) => push_fingerprints_u8(&mut out, f.fingerprints()),
        AnyFilter::Fuse16(f) => push_fingerprints_u16(&mut out, f.fingerprints()),
        AnyFilter::Xor8(f) => push_fingerprints_u8(&mut out, f.fingerprints()),
        AnyFilter::Xor16(f) => push_fingerprints_u16(&mut out, f.fingerprints()),
        AnyFilter::Bloom(f) => {
            for &word in f.words() {
                out.extend_from_slice(&word.to_le_bytes());
            }
        }
    }
    out
}

fn fuse_geometry(layout: &FilterLayout) -> [u64; 3] {
    [
        layout.segment_length() as u64,
        layout.start_segment_count() as u64,
        layout.array_length() as u64,
    ]
}

fn expect_len(bytes: &[u8], payload_len: usize) -> Result<&[u8], Error> {
    let expected = HEADER_LEN + payload_len;
    if bytes.len() != expected {
        return Err(Error::Corrupt {
            expected,
            found: bytes.len(),
        });
    }
    Ok(&bytes[HEADER_LEN..])
}

fn read_payload_u16(payload: &[u8]) -> Vec<u16> {
    payload
        .chunks_exact(2)
        .map(|pair| u16::from_le_bytes([pair[0], pair[1]]))
        .collect()
}

/// Decodes an envelope produced by [`serialize`].
pub fn deserialize(bytes: &[u8]) -> Result<AnyFilter, Error> {
    let header = parse_header(bytes)?;
    match header.kind {
        FilterKind::Fuse3 | FilterKind::Fuse4 => {
            let arity = if header.kind == FilterKind::Fuse3 {
                Arity::Three
            } else {
                Arity::Four
            };
            let layout = FilterLayout::from_parts(arity, header.geometry[0], header.geometry[1])?;
            if header.geometry[2] != layout.array_length() as u64 {
                return Err(Error::InvalidHeader("array length disagrees with layout"));
            }
            match header.bits {
                8 => {
                    let payload = expect_len(bytes, layout.array_length())?;
                    Ok(AnyFilter::Fuse8(Fuse8::from_parts(
                        header.seed,
                        layout,
                        payload.to_vec(),
                    )))
                }
                16 => {
                    let payload = expect_len(bytes, layout.array_length() * 2)?;
                    Ok(AnyFilter::Fuse16(Fuse16::from_parts(
                        header.seed,
                        layout,
                        read_payload_u16(payload),
                    )))
                }
                _ => Err(Error::InvalidHeader("fingerprint width must be 8 or 16")),
            }
        }
        FilterKind::Xor => {
            let block_length = usize::try_from(header.geometry[0])
                .ok()
                .filter(|&b| b >= 1)
                .ok_or(Error::InvalidHeader("block length out of range"))?;
            if header.geometry[1] != 0 {
                return Err(Error::InvalidHeader("reserved field must be zero"));
            }
            let array_length = block_length
                .checked_mul(3)
                .ok_or(Error::InvalidHeader("array length overflows"))?;
            if header.geometry[2] != array_length as u64 {
                return Err(Error::InvalidHeader("array length disagrees with blocks"));
            }
            match header.bits {
                8 => {
                    let payload = expect_len(bytes, array_length)?;
                    Ok(AnyFilter::Xor8(Xor8::from_parts(
                        header.seed,
                        block_length,
                        payload.to_vec(),
                    )))
                }
                16 => {
                    let payload = expect_len(bytes, array_length * 2)?;
                    Ok(AnyFilter::Xor16(Xor16::from_parts(
                        header.seed,
                        block_length,
                        read_payload_u16(payload),
                    )))
                }
                _ => Err(Error::InvalidHeader("fingerprint width must be 8 or 16")),
            }
        }
        FilterKind::Bloom => {
            if header.bits == 0 {
                return Err(Error::InvalidHeader("bloom hash count must be positive"));
            }
            if header.geometry[1] != 0 || header.geometry[2] != 0 {
                return Err(Error::InvalidHeader("reserved field must be zero"));
            }
            let bit_len = usize::try_from(header.geometry[0])
                .ok()
                .filter(|&m| m >= 64 && m % 64 == 0)
                .ok_or(Error::InvalidHeader("bit length must be whole words"))?;
            let payload = expect_len(bytes, bit_len / 8)?;
            let words = payload
                .chunks_exact(8)
                .map(|chunk| u64::from_le_bytes(chunk.try_into().unwrap()))
                .collect();
            Ok(AnyFilter::Bloom(BloomFilter::from_parts(
                header.seed,
                u32::from(header.bits),
                bit_len,
                words,
            )))
        }
    }
}
