//! Portable bitmap (PBM) reading and writing.
//!
//! Supports P1 (ASCII) and P4 (packed binary). In both, 1 is black. P4
//! rows are packed most-significant bit first and padded to a byte
//! boundary; padding bits are ignored on read and zeroed on write.

use std::fs;
use std::path::Path;

use crate::codec::PixelColor;
use crate::error::{Error, Result};
use crate::imaging::Bitmap;

fn parse_err(offset: usize, reason: impl Into<String>) -> Error {
    Error::PbmParse {
        offset,
        reason: reason.into(),
    }
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while self.pos < self.data.len() && self.data[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn read_number(&mut self, what: &str) -> Result<u32> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self
            .data
            .get(self.pos)
            .is_some_and(u8::is_ascii_digit)
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(parse_err(start, format!("expected {what}")));
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| parse_err(start, format!("{what} out of range")))
    }
}

/// Decodes a P1 or P4 image from raw bytes.
pub fn read_pbm(data: &[u8]) -> Result<Bitmap> {
    let magic = data.get(..2).ok_or_else(|| parse_err(0, "truncated magic"))?;
    let packed = match magic {
        b"P1" => false,
        b"P4" => true,
        _ => return Err(parse_err(0, "magic is neither P1 nor P4")),
    };
    let mut cur = Cursor { data, pos: 2 };
    let width = cur.read_number("width")?;
    let height = cur.read_number("height")?;
    if width == 0 || height == 0 {
        return Err(parse_err(2, "dimensions must be positive"));
    }
    let count = width as usize * height as usize;
    let mut pixels = Vec::with_capacity(count);
    if packed {
        // exactly one whitespace byte separates the header from the payload
        match data.get(cur.pos) {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            _ => return Err(parse_err(cur.pos, "expected whitespace before payload")),
        }
        let row_bytes = width.div_ceil(8) as usize;
        for row in 0..height as usize {
            let start = cur.pos + row * row_bytes;
            let bytes = data
                .get(start..start + row_bytes)
                .ok_or_else(|| parse_err(data.len(), "truncated pixel payload"))?;
            for x in 0..width as usize {
                let bit = bytes[x / 8] >> (7 - x % 8) & 1;
                pixels.push(PixelColor::from_bit(bit == 1));
            }
        }
    } else {
        while pixels.len() < count {
            cur.skip_space_and_comments();
            match data.get(cur.pos) {
                Some(b'0') => pixels.push(PixelColor::White),
                Some(b'1') => pixels.push(PixelColor::Black),
                Some(_) => return Err(parse_err(cur.pos, "expected '0' or '1'")),
                None => return Err(parse_err(cur.pos, "truncated pixel payload")),
            }
            cur.pos += 1;
        }
    }
    Bitmap::new(width, height, pixels)
}

/// Encodes as ASCII P1, one image row per line.
pub fn write_p1(bitmap: &Bitmap) -> Vec<u8> {
    let mut out = format!("P1\n{} {}\n", bitmap.width(), bitmap.height()).into_bytes();
    for y in 0..bitmap.height() {
        for x in 0..bitmap.width() {
            if x > 0 {
                out.push(b' ');
            }
            out.push(b'0' + bitmap.get(x, y).bit());
        }
        out.push(b'\n');
    }
    out
}

/// Encodes as packed binary P4.
pub fn write_p4(bitmap: &Bitmap) -> Vec<u8> {
    let mut out = format!("P4\n{} {}\n", bitmap.width(), bitmap.height()).into_bytes();
    for y in 0..bitmap.height() {
        let mut byte = 0u8;
        for x in 0..bitmap.width() {
            byte |= bitmap.get(x, y).bit() << (7 - x % 8);
            if x % 8 == 7 {
                out.push(byte);
                byte = 0;
            }
        }
        if !bitmap.width().is_multiple_of(8) {
            out.push(byte);
        }
    }
    out
}

pub fn read_pbm_file(path: impl AsRef<Path>) -> Result<Bitmap> {
    read_pbm(&fs::read(path)?)
}

pub fn write_pbm_file(path: impl AsRef<Path>, bitmap: &Bitmap, ascii: bool) -> Result<()> {
    let bytes = if ascii {
        write_p1(bitmap)
    } else {
        write_p4(bitmap)
    };
    Ok(fs::write(path, bytes)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use PixelColor::{Black, White};

    #[test]
    fn p1_checkerboard() {
        let bitmap = read_pbm(b"P1\n2 2\n1 0\n0 1\n").unwrap();
        assert_eq!(bitmap.pixels(), [Black, White, White, Black]);
    }

    #[test]
    fn p1_tolerates_comments_and_dense_digits() {
        let bitmap = read_pbm(b"P1\n# card\n2 2\n1001\n").unwrap();
        assert_eq!(bitmap.pixels(), [Black, White, White, Black]);
    }

    #[test]
    fn p4_row_padding() {
        // 5-wide rows occupy one byte; low 3 bits ignored
        let bitmap = read_pbm(b"P4\n5 2\n\xAF\x07").unwrap();
        assert_eq!(
            bitmap.pixels(),
            [Black, White, Black, White, Black, White, White, White, White, White]
        );
        // and zeroed on write
        let out = write_p4(&bitmap);
        assert_eq!(&out[out.len() - 2..], b"\xA8\x00");
    }

    #[test]
    fn malformed_inputs_report_offsets() {
        let cases: [(&[u8], usize); 5] = [
            (b"P2\n2 2\n", 0),
            (b"P1\n0 2\n", 2),
            (b"P1\n2 x\n", 5),
            (b"P1\n2 2\n1 0 1\n", 13),
            (b"P4\n9 1\n\xFF", 8),
        ];
        for (bytes, offset) in cases {
            match read_pbm(bytes) {
                Err(Error::PbmParse { offset: got, .. }) => {
                    assert_eq!(got, offset, "input {bytes:?}")
                }
                other => panic!("expected parse error for {bytes:?}, got {other:?}"),
            }
        }
    }

    proptest! {
        #[test]
        fn roundtrip_identity(
            width in 1u32..40,
            height in 1u32..20,
            seed in any::<u64>(),
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let pixels = (0..width * height)
                .map(|_| PixelColor::from_bit(rng.random()))
                .collect();
            let bitmap = Bitmap::new(width, height, pixels).unwrap();
            prop_assert_eq!(&read_pbm(&write_p1(&bitmap)).unwrap(), &bitmap);
            prop_assert_eq!(&read_pbm(&write_p4(&bitmap)).unwrap(), &bitmap);
        }
    }
}
