/// Errors reported by construction, accounting, and the storage codec.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Fingerprints are stored as whole bytes; only 8- and 16-bit widths exist.
    #[error("unsupported fingerprint width {0} (expected 8 or 16 bits)")]
    UnsupportedFingerprintBits(u32),

    /// Every peeling attempt failed without the input being detectably bad.
    #[error("construction failed after {attempts} attempts")]
    ConstructionFailed { attempts: u32 },

    /// The input key sequence contains a repeated key, which can never peel.
    #[error("input keys are not distinct")]
    DuplicateKeys,

    /// Bits per key is a ratio over the key count, undefined for n = 0.
    #[error("bits per key is undefined for an empty key set")]
    UndefinedBitsPerKey,

    /// The byte stream does not start with the filter file magic.
    #[error("not a filter file: bad magic bytes")]
    BadMagic,

    /// The header declares a format version this build does not read.
    #[error("unsupported filter format version {0}")]
    UnsupportedVersion(u16),

    /// The header declares a filter kind tag this build does not know.
    #[error("unknown filter kind tag {0}")]
    UnknownKind(u8),

    /// The stream is shorter or longer than the header says it must be.
    #[error("corrupt filter file: expected {expected} bytes, found {found}")]
    Corrupt { expected: usize, found: usize },

    /// A header field combination violates the layout invariants.
    #[error("corrupt filter file: {0}")]
    InvalidHeader(&'static str),
}
