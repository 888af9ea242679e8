//! Byte-level helpers shared by the four snapshot formats. Reads track the
//! file offset so corruption errors point at the failing byte.

use std::io::{Read, Write};

use byteorder::{BigEndian, LittleEndian, ReadBytesExt, WriteBytesExt};

use crate::error::{Error, Result};

pub(crate) struct SnapshotReader<R> {
    inner: R,
    offset: u64,
}

impl<R: Read> SnapshotReader<R> {
    pub(crate) fn new(inner: R) -> Self {
        SnapshotReader { inner, offset: 0 }
    }

    pub(crate) fn offset(&self) -> u64 {
        self.offset
    }

    pub(crate) fn corrupt(&self, what: impl Into<String>) -> Error {
        Error::corrupt(self.offset, what)
    }

    fn track<T>(&mut self, n: u64, res: std::io::Result<T>, what: &str) -> Result<T> {
        match res {
            Ok(v) => {
                self.offset += n;
                Ok(v)
            }
            Err(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => {
                Err(Error::corrupt(self.offset, format!("truncated {what}")))
            }
            Err(e) => Err(e.into()),
        }
    }

    pub(crate) fn read_exact(&mut self, buf: &mut [u8], what: &str) -> Result<()> {
        let n = buf.len() as u64;
        let res = self.inner.read_exact(buf);
        self.track(n, res, what)
    }

    pub(crate) fn expect_magic(&mut self, magic: &[u8; 4]) -> Result<()> {
        let mut got = [0u8; 4];
        self.read_exact(&mut got, "magic")?;
        if &got != magic {
            return Err(Error::corrupt(
                0,
                format!(
                    "bad magic: expected {:?}, got {:?}",
                    String::from_utf8_lossy(magic),
                    String::from_utf8_lossy(&got)
                ),
            ));
        }
        Ok(())
    }

    pub(crate) fn expect_version(&mut self, version: u8) -> Result<()> {
        let got = self.read_u8("version")?;
        if got != version {
            return Err(Error::corrupt(
                self.offset - 1,
                format!("unsupported format version {got}"),
            ));
        }
        Ok(())
    }

    pub(crate) fn read_u8(&mut self, what: &str) -> Result<u8> {
        let res = self.inner.read_u8();
        self.track(1, res, what)
    }

    pub(crate) fn read_u32_be(&mut self, what: &str) -> Result<u32> {
        let res = self.inner.read_u32::<BigEndian>();
        self.track(4, res, what)
    }

    pub(crate) fn read_u64_be(&mut self, what: &str) -> Result<u64> {
        let res = self.inner.read_u64::<BigEndian>();
        self.track(8, res, what)
    }

    pub(crate) fn read_f32_le(&mut self, what: &str) -> Result<f32> {
        let res = self.inner.read_f32::<LittleEndian>();
        self.track(4, res, what)
    }

    /// Verifies there are no trailing bytes after a complete snapshot.
    pub(crate) fn expect_eof(&mut self) -> Result<()> {
        let mut byte = [0u8; 1];
        match self.inner.read(&mut byte) {
            Ok(0) => Ok(()),
            Ok(_) => Err(self.corrupt("trailing bytes after snapshot")),
            Err(e) => Err(e.into()),
        }
    }
}

pub(crate) fn write_header<W: Write>(w: &mut W, magic: &[u8; 4], version: u8) -> Result<()> {
    w.write_all(magic)?;
    w.write_u8(version)?;
    Ok(())
}

pub(crate) fn write_u32_be<W: Write>(w: &mut W, v: u32) -> Result<()> {
    w.write_u32::<BigEndian>(v)?;
    Ok(())
}

pub(crate) fn write_u64_be<W: Write>(w: &mut W, v: u64) -> Result<()> {
    w.write_u64::<BigEndian>(v)?;
    Ok(())
}

pub(crate) fn write_f32_le<W: Write>(w: &mut W, v: f32) -> Result<()> {
    w.write_f32::<LittleEndian>(v)?;
    Ok(())
}
