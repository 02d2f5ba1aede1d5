//! Compact storage for per-n Liouville/square-free data.
//!
//! In memory a [`FactorSignTable`] keeps two bit planes (λ sign and
//! square-free flag, one bit per n, 64 values per word) plus an optional Ω
//! byte channel. The planes are what the correlation kernels scan. On disk the
//! table uses the `.lmt` layout:
//!
//! ```text
//! offset  size  field
//!      0     4  magic "LMT1"
//!      4     4  format version (u32 LE, currently 1)
//!      8     8  start (u64 LE, first n)
//!     16     8  count (u64 LE, number of records)
//!     24     8  flags (u64 LE, bit 0 = Ω channel present, other bits zero)
//!     32     -  ceil(count / 4) bytes of 2-bit records, ascending n,
//!               4 per byte, low bits first (bit 0: λ = -1, bit 1: square-free)
//!      -     -  count bytes of Ω(n), only if flag bit 0 is set
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

pub const MAGIC: [u8; 4] = *b"LMT1";
pub const FORMAT_VERSION: u32 = 1;
pub const HEADER_LEN: u64 = 32;
pub const FLAG_OMEGA: u64 = 1;

/// Value of λ(n).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(omega: u32) -> Self {
        if omega.is_multiple_of(2) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// Arithmetic data for a single n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NValues {
    pub n: u64,
    /// Ω(n); `None` when read from a table stored without the Ω channel.
    pub omega: Option<u8>,
    pub lambda: Sign,
    pub square_free: bool,
}

impl NValues {
    /// μ(n): λ(n) when n is square-free, zero otherwise.
    pub fn mu(&self) -> i8 {
        if self.square_free {
            self.lambda.value()
        } else {
            0
        }
    }
}

/// Packed λ / square-free / Ω data over the contiguous range `[start, start + count)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSignTable {
    start: u64,
    count: u64,
    /// Bit set means λ(n) = -1.
    sign: Vec<u64>,
    /// Bit set means n is square-free.
    square_free: Vec<u64>,
    omega: Option<Vec<u8>>,
}

pub(crate) fn words_for(count: u64) -> usize {
    count.div_ceil(64) as usize
}

impl FactorSignTable {
    /// Builds a table from raw planes. Bits past `count` must be clear.
    pub(crate) fn from_planes(
        start: u64,
        count: u64,
        sign: Vec<u64>,
        square_free: Vec<u64>,
        omega: Option<Vec<u8>>,
    ) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidTable("count must be at least 1".into()));
        }
        if start == 0 {
            return Err(Error::InvalidTable("start must be at least 1".into()));
        }
        let words = words_for(count);
        if sign.len() != words || square_free.len() != words {
            return Err(Error::InvalidTable(format!(
                "expected {words} plane words for {count} records"
            )));
        }
        let tail = count % 64;
        if tail != 0 {
            let mask = !((1u64 << tail) - 1);
            if sign[words - 1] & mask != 0 || square_free[words - 1] & mask != 0 {
                return Err(Error::InvalidTable("bits set past the last record".into()));
            }
        }
        if let Some(om) = &omega {
            if om.len() as u64 != count {
                return Err(Error::InvalidTable(format!(
                    "omega channel has {} entries, expected {count}",
                    om.len()
                )));
            }
        }
        let table = FactorSignTable {
            start,
            count,
            sign,
            square_free,
            omega,
        };
        if let Some(i) = table.first_parity_mismatch() {
            return Err(Error::InvalidTable(format!(
                "λ sign bit disagrees with Ω parity at n = {}",
                start + i
            )));
        }
        Ok(table)
    }

    /// Builds a table from consecutive records starting at `start`.
    ///
    /// Either every record carries Ω or none does.
    pub fn from_values(start: u64, values: &[NValues]) -> Result<Self> {
        let count = values.len() as u64;
        let words = words_for(count);
        let mut sign = vec![0u64; words];
        let mut square_free = vec![0u64; words];
        let with_omega = values.first().is_some_and(|v| v.omega.is_some());
        let mut omega = with_omega.then(|| Vec::with_capacity(values.len()));
        for (i, v) in values.iter().enumerate() {
            if v.n != start + i as u64 {
                return Err(Error::InvalidTable(format!(
                    "record {i} has n = {}, expected {}",
                    v.n,
                    start + i as u64
                )));
            }
            if v.lambda == Sign::Minus {
                sign[i / 64] |= 1 << (i % 64);
            }
            if v.square_free {
                square_free[i / 64] |= 1 << (i % 64);
            }
            match (&mut omega, v.omega) {
                (Some(om), Some(o)) => om.push(o),
                (None, None) => {}
                _ => {
                    return Err(Error::InvalidTable(
                        "Ω must be present on all records or on none".into(),
                    ))
                }
            }
        }
        Self::from_planes(start, count, sign, square_free, omega)
    }

    fn first_parity_mismatch(&self) -> Option<u64> {
        let om = self.omega.as_ref()?;
        om.iter().enumerate().find_map(|(i, &o)| {
            let neg = (self.sign[i / 64] >> (i % 64)) & 1 == 1;
            (neg != (o % 2 == 1)).then_some(i as u64)
        })
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Largest n covered.
    pub fn last(&self) -> u64 {
        self.start + self.count - 1
    }

    pub fn has_omega(&self) -> bool {
        self.omega.is_some()
    }

    pub(crate) fn sign_words(&self) -> &[u64] {
        &self.sign
    }

    pub(crate) fn square_free_words(&self) -> &[u64] {
        &self.square_free
    }

    /// Decodes the record for `n` in O(1).
    pub fn query(&self, n: u64) -> Result<NValues> {
        if n < self.start || n > self.last() {
            return Err(Error::OutOfRange {
                n,
                first: self.start,
                last: self.last(),
            });
        }
        Ok(self.decode((n - self.start) as usize))
    }

    fn decode(&self, i: usize) -> NValues {
        let (w, b) = (i / 64, i % 64);
        NValues {
            n: self.start + i as u64,
            omega: self.omega.as_ref().map(|om| om[i]),
            lambda: if (self.sign[w] >> b) & 1 == 1 {
                Sign::Minus
            } else {
                Sign::Plus
            },
            square_free: (self.square_free[w] >> b) & 1 == 1,
        }
    }

    /// Streams every record in ascending n.
    pub fn iter(&self) -> impl Iterator<Item = NValues> + '_ {
        (0..self.count as usize).map(move |i| self.decode(i))
    }

    /// Exact size of the serialized table.
    pub fn file_len(&self) -> u64 {
        let omega = if self.has_omega() { self.count } else { 0 };
        HEADER_LEN + self.count.div_ceil(4) + omega
    }

    /// Writes the table in `.lmt` format and returns the number of bytes written.
    pub fn save<W: Write>(&self, mut sink: W) -> Result<u64> {
        let mut header = [0u8; HEADER_LEN as usize];
        header[0..4].copy_from_slice(&MAGIC);
        header[4..8].copy_from_slice(&FORMAT_VERSION.to_le_bytes());
        header[8..16].copy_from_slice(&self.start.to_le_bytes());
        header[16..24].copy_from_slice(&self.count.to_le_bytes());
        let flags = if self.has_omega() { FLAG_OMEGA } else { 0 };
        header[24..32].copy_from_slice(&flags.to_le_bytes());
        sink.write_all(&header)?;

        let payload_len = self.count.div_ceil(4) as usize;
        let mut written = 0usize;
        let mut buf = Vec::with_capacity(1 << 16);
        for (&s, &q) in self.sign.iter().zip(&self.square_free) {
            let lo = spread(s as u32) | (spread(q as u32) << 1);
            let hi = spread((s >> 32) as u32) | (spread((q >> 32) as u32) << 1);
            let mut bytes = [0u8; 16];
            bytes[..8].copy_from_slice(&lo.to_le_bytes());
            bytes[8..].copy_from_slice(&hi.to_le_bytes());
            let take = (payload_len - written).min(16);
            buf.extend_from_slice(&bytes[..take]);
            written += take;
            if buf.len() >= (1 << 16) - 16 {
                sink.write_all(&buf)?;
                buf.clear();
            }
        }
        sink.write_all(&buf)?;
        if let Some(om) = &self.omega {
            sink.write_all(om)?;
        }
        sink.flush()?;
        Ok(self.file_len())
    }

    pub fn save_to_path(&self, path: impl AsRef<Path>) -> Result<u64> {
        let file = File::create(path)?;
        self.save(BufWriter::with_capacity(1 << 20, file))
    }

    /// Reads a table written by [`FactorSignTable::save`], validating the header
    /// and the declared payload length against the stream.
    pub fn load<R: Read>(mut source: R) -> Result<Self> {
        let mut header = [0u8; HEADER_LEN as usize];
        let got = read_up_to(&mut source, &mut header)?;
        if got < header.len() {
            return Err(Error::Format(format!(
                "header truncated: {got} of {HEADER_LEN} bytes"
            )));
        }
        if header[0..4] != MAGIC {
            return Err(Error::Format(format!(
                "bad magic {:?}, expected {:?}",
                &header[0..4],
                MAGIC
            )));
        }
        let version = u32::from_le_bytes(header[4..8].try_into().unwrap());
        if version != FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported version {version}, expected {FORMAT_VERSION}"
            )));
        }
        let start = u64::from_le_bytes(header[8..16].try_into().unwrap());
        let count = u64::from_le_bytes(header[16..24].try_into().unwrap());
        let flags = u64::from_le_bytes(header[24..32].try_into().unwrap());
        if flags & !FLAG_OMEGA != 0 {
            return Err(Error::Format(format!("unknown flag bits {flags:#x}")));
        }
        if count == 0 || start == 0 {
            return Err(Error::Format(format!(
                "invalid range start = {start}, count = {count}"
            )));
        }
        let with_omega = flags & FLAG_OMEGA != 0;
        let packed_len = count.div_ceil(4);
        let expected = packed_len + if with_omega { count } else { 0 };

        let mut payload = Vec::new();
        source
            .by_ref()
            .take(expected + 1)
            .read_to_end(&mut payload)?;
        let actual = payload.len() as u64;
        if actual < expected {
            return Err(Error::Truncated { expected, actual });
        }
        if actual > expected {
            return Err(Error::Corrupt(format!(
                "trailing data past the declared {expected} payload bytes"
            )));
        }

        let words = words_for(count);
        let mut sign = Vec::with_capacity(words);
        let mut square_free = Vec::with_capacity(words);
        for chunk in payload[..packed_len as usize].chunks(16) {
            let mut bytes = [0u8; 16];
            bytes[..chunk.len()].copy_from_slice(chunk);
            let lo = u64::from_le_bytes(bytes[..8].try_into().unwrap());
            let hi = u64::from_le_bytes(bytes[8..].try_into().unwrap());
            sign.push(compact(lo) as u64 | ((compact(hi) as u64) << 32));
            square_free.push(compact(lo >> 1) as u64 | ((compact(hi >> 1) as u64) << 32));
        }
        let tail = count % 64;
        if tail != 0 {
            let mask = !((1u64 << tail) - 1);
            if (sign[words - 1] | square_free[words - 1]) & mask != 0 {
                return Err(Error::Corrupt(
                    "nonzero padding bits in last record byte".into(),
                ));
            }
        }
        let omega = with_omega.then(|| payload[packed_len as usize..].to_vec());
        drop(payload);
        Self::from_planes(start, count, sign, square_free, omega).map_err(|e| match e {
            Error::InvalidTable(msg) => Error::Corrupt(msg),
            other => other,
        })
    }

    pub fn load_from_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = File::open(path)?;
        Self::load(BufReader::with_capacity(1 << 20, file))
    }
}

fn read_up_to<R: Read>(source: &mut R, buf: &mut [u8]) -> std::io::Result<usize> {
    let mut filled = 0;
    while filled < buf.len() {
        match source.read(&mut buf[filled..]) {
            Ok(0) => break,
            Ok(k) => filled += k,
            Err(e) if e.kind() == std::io::ErrorKind::Interrupted => {}
            Err(e) => return Err(e),
        }
    }
    Ok(filled)
}

/// Moves bit k of `x` to bit 2k.
fn spread(x: u32) -> u64 {
    let mut x = x as u64;
    x = (x | (x << 16)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x << 8)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    (x | (x << 1)) & 0x5555_5555_5555_5555
}

/// Inverse of [`spread`]: gathers the even bits of `x`.
fn compact(x: u64) -> u32 {
    let mut x = x & 0x5555_5555_5555_5555;
    x = (x | (x >> 1)) & 0x3333_3333_3333_3333;
    x = (x | (x >> 2)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x >> 4)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x >> 8)) & 0x0000_FFFF_0000_FFFF;
    (x | (x >> 16)) as u32
}
