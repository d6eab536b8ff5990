//! Random-grid (k,n) visual secret sharing.
//!
//! A secret binary image is split into `n` noise-like shares. Any `t >= k`
//! of them reveal the secret when stacked (pixelwise OR) or combined
//! computationally (pixelwise XOR); fewer than `k` reveal nothing.
//!
//! The crate has three layers:
//!
//! * [`analytic`] — closed-form light transmissions and contrast values,
//!   computed exactly over arbitrary-precision rationals ([`numeric`]).
//! * [`codec`] / [`imaging`] — the per-pixel share generator, OR/XOR
//!   stacking, and PBM image I/O.
//! * [`oracle`] — exhaustive enumeration over all generator randomness and
//!   seeded Monte Carlo estimation, used to cross-check the closed forms
//!   against the generator's actual distribution.

pub mod analytic;
pub mod codec;
pub mod error;
pub mod imaging;
pub mod numeric;
pub mod oracle;

pub use analytic::{ContrastRow, SchemeParams, StackOp, TransmissionSpec};
pub use codec::{EncodingPolicy, PixelColor};
pub use error::{Error, Result};
pub use imaging::Bitmap;
pub use numeric::Ratio;
