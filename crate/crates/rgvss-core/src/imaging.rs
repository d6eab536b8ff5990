//! Binary image model, share-set lifecycle, and PBM file I/O.

use crate::analytic::{SchemeParams, StackOp};
use crate::codec::{self, EncodingPolicy, PixelColor};
use crate::error::{Error, Result};
use crate::numeric::Ratio;

pub mod pbm;

/// A rectangular binary image, row-major. Bit 1 is black/opaque.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitmap {
    width: u32,
    height: u32,
    pixels: Vec<PixelColor>,
}

impl Bitmap {
    pub fn new(width: u32, height: u32, pixels: Vec<PixelColor>) -> Result<Bitmap> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyBitmap);
        }
        assert_eq!(
            pixels.len(),
            width as usize * height as usize,
            "pixel count must be width*height"
        );
        Ok(Bitmap {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: u32, height: u32, color: PixelColor) -> Result<Bitmap> {
        Bitmap::new(width, height, vec![color; width as usize * height as usize])
    }

    /// Top half white, bottom half black. The standard card for empirical
    /// transmission measurements.
    pub fn test_card(width: u32, height: u32) -> Result<Bitmap> {
        let pixels = (0..height)
            .flat_map(|y| {
                let color = if y < height / 2 {
                    PixelColor::White
                } else {
                    PixelColor::Black
                };
                std::iter::repeat_n(color, width as usize)
            })
            .collect();
        Bitmap::new(width, height, pixels)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[PixelColor] {
        &self.pixels
    }

    pub fn get(&self, x: u32, y: u32) -> PixelColor {
        self.pixels[y as usize * self.width as usize + x as usize]
    }

    fn same_size(&self, other: &Bitmap) -> Result<()> {
        if self.width != other.width || self.height != other.height {
            return Err(Error::DimensionMismatch(
                self.width,
                self.height,
                other.width,
                other.height,
            ));
        }
        Ok(())
    }
}

/// The `n` shares generated from one secret, with the inputs needed to
/// regenerate them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShareSet {
    pub scheme: SchemeParams,
    pub policy: EncodingPolicy,
    pub master_seed: u64,
    pub shares: Vec<Bitmap>,
}

/// Encodes every pixel of `secret` independently under `policy`. The
/// result is a pure function of `(secret, policy, seed)`.
pub fn encode_image(secret: &Bitmap, policy: &EncodingPolicy, seed: u64) -> Result<ShareSet> {
    let n = policy.scheme().n() as usize;
    let mut shares = vec![Vec::with_capacity(secret.pixels.len()); n];
    for (index, &s) in secret.pixels.iter().enumerate() {
        let mut rng = codec::pixel_rng(seed, index as u64);
        let vector = codec::encode_pixel(s, policy, &mut rng)?;
        for (share, &bit) in shares.iter_mut().zip(vector.bits()) {
            share.push(bit);
        }
    }
    Ok(ShareSet {
        scheme: policy.scheme(),
        policy: *policy,
        master_seed: seed,
        shares: shares
            .into_iter()
            .map(|pixels| Bitmap::new(secret.width, secret.height, pixels))
            .collect::<Result<_>>()?,
    })
}

/// Pixelwise stack of any nonempty set of equally sized shares.
pub fn reconstruct(shares: &[&Bitmap], op: StackOp) -> Result<Bitmap> {
    let first = *shares.first().ok_or(Error::NoShares)?;
    for share in &shares[1..] {
        first.same_size(share)?;
    }
    let pixels = (0..first.pixels.len())
        .map(|i| {
            let stacked: Vec<PixelColor> = shares.iter().map(|s| s.pixels[i]).collect();
            codec::stack(&stacked, op)
        })
        .collect::<Result<_>>()?;
    Bitmap::new(first.width, first.height, pixels)
}

/// Fraction of white pixels in `recon` over the region of `secret` whose
/// color is `region`. Exact.
pub fn measure_transmission(recon: &Bitmap, secret: &Bitmap, region: PixelColor) -> Result<Ratio> {
    recon.same_size(secret)?;
    let mut area = 0u64;
    let mut white = 0u64;
    for (r, s) in recon.pixels.iter().zip(&secret.pixels) {
        if *s == region {
            area += 1;
            white += !r.is_black() as u64;
        }
    }
    if area == 0 {
        return Err(Error::EmptyRegion(region.bit()));
    }
    Ratio::from_integer(white).checked_div(&Ratio::from_integer(area))
}

/// Canonical share file name: `<stem>.share<i>.pbm`, `i` starting at 1.
pub fn share_file_name(stem: &str, index: usize) -> String {
    format!("{stem}.share{index}.pbm")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::PolicyVariant;
    use PixelColor::{Black, White};

    fn scheme(k: u32, n: u32) -> SchemeParams {
        SchemeParams::new(k, n).unwrap()
    }

    #[test]
    fn encode_is_deterministic() {
        let secret = Bitmap::test_card(16, 16).unwrap();
        let policy = EncodingPolicy::averaged(scheme(2, 3));
        let a = encode_image(&secret, &policy, 42).unwrap();
        let b = encode_image(&secret, &policy, 42).unwrap();
        assert_eq!(a, b);
        let c = encode_image(&secret, &policy, 43).unwrap();
        assert_ne!(a.shares, c.shares);
    }

    #[test]
    fn single_pixel_secret() {
        let secret = Bitmap::new(1, 1, vec![White]).unwrap();
        let policy = EncodingPolicy::averaged(scheme(2, 3));
        let set = encode_image(&secret, &policy, 7).unwrap();
        assert_eq!(set.shares.len(), 3);
        assert!(set.shares.iter().all(|s| s.pixels().len() == 1));
    }

    #[test]
    fn empty_bitmap_rejected() {
        assert!(Bitmap::new(0, 4, vec![]).is_err());
    }

    #[test]
    fn reconstruct_identity_and_errors() {
        let r = Bitmap::new(2, 1, vec![White, Black]).unwrap();
        assert_eq!(reconstruct(&[&r], StackOp::Or).unwrap(), r);
        assert!(reconstruct(&[], StackOp::Or).is_err());
        let other = Bitmap::new(1, 2, vec![White, Black]).unwrap();
        assert!(matches!(
            reconstruct(&[&r, &other], StackOp::Or),
            Err(Error::DimensionMismatch(..))
        ));
    }

    #[test]
    fn xor_of_full_fixed_n_set_is_the_secret() {
        let secret = Bitmap::test_card(24, 24).unwrap();
        let policy = EncodingPolicy::fixed(scheme(2, 4), 4).unwrap();
        assert_eq!(policy.variant(), PolicyVariant::FixedThreshold(4));
        let set = encode_image(&secret, &policy, 5).unwrap();
        let all: Vec<&Bitmap> = set.shares.iter().collect();
        assert_eq!(reconstruct(&all, StackOp::Xor).unwrap(), secret);
    }

    #[test]
    fn or_of_all_averaged_shares_blacks_out_black_region() {
        let secret = Bitmap::test_card(32, 32).unwrap();
        let policy = EncodingPolicy::averaged(scheme(2, 3));
        let set = encode_image(&secret, &policy, 11).unwrap();
        let all: Vec<&Bitmap> = set.shares.iter().collect();
        let recon = reconstruct(&all, StackOp::Or).unwrap();
        let t1 = measure_transmission(&recon, &secret, Black).unwrap();
        assert!(t1.is_zero());
    }

    #[test]
    fn measure_transmission_bounds_and_errors() {
        let secret = Bitmap::test_card(4, 4).unwrap();
        assert_eq!(
            measure_transmission(&secret, &secret, White).unwrap(),
            Ratio::one()
        );
        let black = Bitmap::filled(4, 4, Black).unwrap();
        assert_eq!(
            measure_transmission(&black, &secret, White).unwrap(),
            Ratio::zero()
        );
        let all_white = Bitmap::filled(4, 4, White).unwrap();
        assert!(matches!(
            measure_transmission(&secret, &all_white, Black),
            Err(Error::EmptyRegion(1))
        ));
    }

    #[test]
    fn single_share_black_fraction_near_half() {
        let secret = Bitmap::test_card(64, 64).unwrap();
        let policy = EncodingPolicy::averaged(scheme(2, 3));
        let set = encode_image(&secret, &policy, 3).unwrap();
        for share in &set.shares {
            let black = share.pixels().iter().filter(|p| p.is_black()).count() as f64;
            let frac = black / (64.0 * 64.0);
            assert!((frac - 0.5).abs() < 0.05, "fraction {frac}");
        }
    }

    #[test]
    fn share_file_names() {
        assert_eq!(share_file_name("secret", 1), "secret.share1.pbm");
        assert_eq!(share_file_name("a.b", 3), "a.b.share3.pbm");
    }
}
