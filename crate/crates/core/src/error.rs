use alloc::string::String;
use core::fmt;

/// Which factor of a chain product a function table sits in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Left => f.write_str("left"),
            Side::Right => f.write_str("right"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The block layout does not describe a valid domain.
    InvalidDomain(String),
    /// An integer index fell outside `[0, bound)`.
    IndexOutOfRange { index: usize, bound: usize },
    /// A digit exceeded the radix of the position it sits in.
    DigitOutOfRange { position: usize, digit: u32, radix: u32 },
    /// A vector had the wrong number of entries.
    LengthMismatch { expected: usize, found: usize },
    /// Two objects over different moduli were combined.
    ModulusMismatch { expected: u32, found: u32 },
    /// A value was not reduced modulo its modulus.
    ValueOutOfRange { value: u32, modulus: u32 },
    /// `p` does not divide the table modulus.
    NonDividingPrime { prime: u32, modulus: u32 },
    /// |shift| must be below the sequence length.
    ShiftOutOfRange { shift: i64, length: usize },
    /// Structural problem in a function spec (bad permutation, restriction set, ...).
    InvalidSpec(String),
    /// A chain function fails the permutation condition of its block.
    NotPermutation { block: usize, link: usize, side: Side, radix: u32 },
    /// `corrupt_spec` was handed a replacement that still permutes.
    ReplacementIsPermutation { block: usize, link: usize, side: Side },
    /// The operation requires a spec flagged as corrupted.
    NotCorrupted,
    /// A restricted view was evaluated outside its support.
    OffSupport { index: usize },
    /// Code-set rows have inconsistent shapes.
    Shape(String),
    /// Integer arithmetic overflowed.
    Overflow,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDomain(msg) => write!(f, "invalid domain: {msg}"),
            Error::IndexOutOfRange { index, bound } => {
                write!(f, "index {index} out of range [0, {bound})")
            }
            Error::DigitOutOfRange {
                position,
                digit,
                radix,
            } => write!(
                f,
                "digit {digit} at position {position} exceeds radix {radix}"
            ),
            Error::LengthMismatch { expected, found } => {
                write!(f, "expected {expected} entries, found {found}")
            }
            Error::ModulusMismatch { expected, found } => {
                write!(f, "modulus mismatch: expected {expected}, found {found}")
            }
            Error::ValueOutOfRange { value, modulus } => {
                write!(f, "value {value} is not reduced modulo {modulus}")
            }
            Error::NonDividingPrime { prime, modulus } => {
                write!(f, "{prime} does not divide modulus {modulus}")
            }
            Error::ShiftOutOfRange { shift, length } => {
                write!(f, "shift {shift} out of range for length {length}")
            }
            Error::InvalidSpec(msg) => write!(f, "invalid spec: {msg}"),
            Error::NotPermutation {
                block,
                link,
                side,
                radix,
            } => write!(
                f,
                "block {block} chain link {link} ({side}) does not permute Z_{radix} modulo {radix}"
            ),
            Error::ReplacementIsPermutation { block, link, side } => write!(
                f,
                "replacement for block {block} chain link {link} ({side}) is a permutation; nothing to corrupt"
            ),
            Error::NotCorrupted => f.write_str("spec is not flagged as corrupted"),
            Error::OffSupport { index } => {
                write!(f, "index {index} lies outside the restriction's support")
            }
            Error::Shape(msg) => write!(f, "shape error: {msg}"),
            Error::Overflow => f.write_str("integer overflow"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
