// SPDX-License-Identifier: Apache-2.0

//! Canonical byte encoding helpers and message framing.
//!
//! A frame is `type (1 byte) || payload length (u32 BE) || payload`.

use crate::group::{Group, GroupError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("unexpected end of input: wanted {wanted} bytes at offset {offset}")]
    Truncated { offset: usize, wanted: usize },
    #[error("{0} trailing bytes")]
    Trailing(usize),
    #[error("unexpected frame type {found:#04x}, expected {expected:#04x}")]
    FrameType { expected: u8, found: u8 },
    #[error("invalid field: {0}")]
    Invalid(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Append-only encoder for canonical payloads.
#[derive(Debug, Default, Clone)]
pub struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn u8(&mut self, v: u8) -> &mut Self {
        self.buf.push(v);
        self
    }

    pub fn u16(&mut self, v: u16) -> &mut Self {
        self.buf.extend_from_slice(&v.to_be_bytes());
        self
    }

    pub fn u32(&mut self, v: u32) -> &mut Self {
        self.buf.extend_from_slice(&v.to_be_bytes());
        self
    }

    pub fn u64(&mut self, v: u64) -> &mut Self {
        self.buf.extend_from_slice(&v.to_be_bytes());
        self
    }

    pub fn bytes(&mut self, b: &[u8]) -> &mut Self {
        self.buf.extend_from_slice(b);
        self
    }

    /// u32 length prefix followed by the bytes.
    pub fn var_bytes(&mut self, b: &[u8]) -> &mut Self {
        self.u32(b.len() as u32).bytes(b)
    }

    pub fn point<G: Group>(&mut self, p: &G::Point) -> &mut Self {
        self.bytes(&G::encode_point(p))
    }

    pub fn scalar<G: Group>(&mut self, k: &G::Scalar) -> &mut Self {
        self.bytes(&G::encode_scalar(k))
    }

    pub fn finish(self) -> Vec<u8> {
        self.buf
    }
}

/// Cursor over a canonical payload.
#[derive(Debug, Clone)]
pub struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Reader { buf, pos: 0 }
    }

    pub fn take(&mut self, n: usize) -> Result<&'a [u8], CodecError> {
        if self.buf.len() - self.pos < n {
            return Err(CodecError::Truncated { offset: self.pos, wanted: n });
        }
        let out = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    pub fn u8(&mut self) -> Result<u8, CodecError> {
        Ok(self.take(1)?[0])
    }

    pub fn u16(&mut self) -> Result<u16, CodecError> {
        Ok(u16::from_be_bytes(self.take(2)?.try_into().expect("len 2")))
    }

    pub fn u32(&mut self) -> Result<u32, CodecError> {
        Ok(u32::from_be_bytes(self.take(4)?.try_into().expect("len 4")))
    }

    pub fn u64(&mut self) -> Result<u64, CodecError> {
        Ok(u64::from_be_bytes(self.take(8)?.try_into().expect("len 8")))
    }

    pub fn var_bytes(&mut self) -> Result<&'a [u8], CodecError> {
        let n = self.u32()? as usize;
        self.take(n)
    }

    pub fn point<G: Group>(&mut self) -> Result<G::Point, CodecError> {
        Ok(G::decode_point(self.take(G::POINT_BYTES)?)?)
    }

    pub fn scalar<G: Group>(&mut self) -> Result<G::Scalar, CodecError> {
        Ok(G::decode_scalar(self.take(G::SCALAR_BYTES)?)?)
    }

    pub fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    pub fn finish(self) -> Result<(), CodecError> {
        match self.remaining() {
            0 => Ok(()),
            n => Err(CodecError::Trailing(n)),
        }
    }
}

/// Types with a canonical wire encoding over group `G`.
pub trait Encode<G: Group>: Sized {
    fn write(&self, w: &mut Writer);
    fn read(r: &mut Reader<'_>) -> Result<Self, CodecError>;

    fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        self.write(&mut w);
        w.finish()
    }

    fn from_bytes(bytes: &[u8]) -> Result<Self, CodecError> {
        let mut r = Reader::new(bytes);
        let v = Self::read(&mut r)?;
        r.finish()?;
        Ok(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub kind: u8,
    pub payload: Vec<u8>,
}

impl Frame {
    pub fn new(kind: u8, payload: Vec<u8>) -> Self {
        Frame { kind, payload }
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(5 + self.payload.len());
        out.push(self.kind);
        out.extend_from_slice(&(self.payload.len() as u32).to_be_bytes());
        out.extend_from_slice(&self.payload);
        out
    }

    /// Reads one frame from the front of `r`.
    pub fn read(r: &mut Reader<'_>) -> Result<Frame, CodecError> {
        let kind = r.u8()?;
        let payload = r.var_bytes()?.to_vec();
        Ok(Frame { kind, payload })
    }

    /// Splits a byte stream into consecutive frames.
    pub fn decode_all(bytes: &[u8]) -> Result<Vec<Frame>, CodecError> {
        let mut r = Reader::new(bytes);
        let mut frames = Vec::new();
        while r.remaining() > 0 {
            frames.push(Frame::read(&mut r)?);
        }
        Ok(frames)
    }

    pub fn expect(&self, kind: u8) -> Result<&[u8], CodecError> {
        if self.kind != kind {
            return Err(CodecError::FrameType { expected: kind, found: self.kind });
        }
        Ok(&self.payload)
    }
}
