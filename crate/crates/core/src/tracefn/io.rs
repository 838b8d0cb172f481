//! `TFN1` binary container.
//!
//! Layout (all integers little-endian): magic `TFN1`, `q: u64`, `flags: u32`
//! (bit 0 = real-valued), family name length `u32` followed by UTF-8 bytes,
//! then `q` pairs of `f64` `(re, im)`.

use std::io::{Read, Write};
use std::sync::Arc;

use num_complex::Complex64;

use super::function::{FamilyMeta, Modulus, TraceFunction};
use crate::arith::{is_prime, CompositeModulus, PrimeModulus};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"TFN1";
pub const FLAG_REAL: u32 = 1;

pub fn write_tfn<W: Write>(k: &TraceFunction, mut w: W) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&k.q().to_le_bytes())?;
    let flags = if k.meta().real_valued { FLAG_REAL } else { 0 };
    w.write_all(&flags.to_le_bytes())?;
    let name = k.family().as_bytes();
    w.write_all(&(name.len() as u32).to_le_bytes())?;
    w.write_all(name)?;
    let mut buf = Vec::with_capacity(k.values().len() * 16);
    for v in k.values() {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

fn read_exact<R: Read, const N: usize>(r: &mut R) -> Result<[u8; N]> {
    let mut b = [0u8; N];
    r.read_exact(&mut b)
        .map_err(|e| Error::Format(format!("truncated TFN1 stream: {e}")))?;
    Ok(b)
}

pub fn read_tfn<R: Read>(mut r: R) -> Result<TraceFunction> {
    let magic: [u8; 4] = read_exact(&mut r)?;
    if &magic != MAGIC {
        return Err(Error::Format(format!("bad magic {magic:?}")));
    }
    let q = u64::from_le_bytes(read_exact(&mut r)?);
    let flags = u32::from_le_bytes(read_exact(&mut r)?);
    let len = u32::from_le_bytes(read_exact(&mut r)?) as usize;
    let mut name = vec![0u8; len];
    r.read_exact(&mut name)
        .map_err(|e| Error::Format(format!("truncated family name: {e}")))?;
    let family =
        String::from_utf8(name).map_err(|e| Error::Format(format!("family name: {e}")))?;
    let modulus = if is_prime(q) {
        Modulus::Prime(Arc::new(PrimeModulus::new(q)?))
    } else {
        Modulus::Composite(Arc::new(CompositeModulus::new(q)?))
    };
    let mut raw = vec![0u8; q as usize * 16];
    r.read_exact(&mut raw)
        .map_err(|e| Error::Format(format!("truncated values: {e}")))?;
    let values = raw
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect();
    let meta = FamilyMeta::new(family).real(flags & FLAG_REAL != 0);
    TraceFunction::new(modulus, values, meta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::make_prime_modulus;
    use crate::tracefn::families::additive_character;
    use crate::tracefn::ops::all_ones;

    #[test]
    fn roundtrip() {
        let q = Arc::new(make_prime_modulus(31).unwrap());
        for k in [additive_character(&q), all_ones(&q)] {
            let mut buf = Vec::new();
            write_tfn(&k, &mut buf).unwrap();
            assert_eq!(&buf[..4], b"TFN1");
            assert_eq!(u64::from_le_bytes(buf[4..12].try_into().unwrap()), 31);
            let back = read_tfn(buf.as_slice()).unwrap();
            assert_eq!(back.values(), k.values());
            assert_eq!(back.family(), k.family());
            assert_eq!(back.meta().real_valued, k.meta().real_valued);
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(read_tfn(&b"TFN2"[..]), Err(Error::Format(_))));
        assert!(matches!(read_tfn(&b"TFN1\x05"[..]), Err(Error::Format(_))));
    }
}
