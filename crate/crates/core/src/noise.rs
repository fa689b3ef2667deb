//! Counter-based Gaussian noise.
//!
//! Every noise value is a pure function of `(seed, counter)`, so any sample
//! of a synthesised cube can be regenerated independently of the order in
//! which the cube was filled.
//!
//! Algorithm, for implementations that need to reproduce the stream:
//!
//! 1. `z = seed + (counter + 1) * 0x9E3779B97F4A7C15` (wrapping u64), i.e. the
//!    SplitMix64 state after `counter + 1` steps from `seed`.
//! 2. SplitMix64 finaliser:
//!    `z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;`
//!    `z = (z ^ (z >> 27)) * 0x94D049BB133111EB;`
//!    `z ^= z >> 31`.
//! 3. Uniform in (0, 1): `((z >> 11) as f64 + 0.5) * 2^-53`.
//! 4. A complex sample with flat index `k` uses counters `2k` and `2k + 1`
//!    for uniforms `u1`, `u2` and the Box-Muller pair
//!    `re = sqrt(-2 ln u1) cos(2π u2)`, `im = sqrt(-2 ln u1) sin(2π u2)`,
//!    giving unit variance per component.

use std::f64::consts::TAU;

use num_complex::Complex64;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
pub fn splitmix64(seed: u64, counter: u64) -> u64 {
    let mut z = seed.wrapping_add(counter.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
pub fn uniform(seed: u64, counter: u64) -> f64 {
    ((splitmix64(seed, counter) >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Standard complex Gaussian pair (unit variance per component) at `index`.
#[inline]
pub fn gaussian_pair(seed: u64, index: u64) -> Complex64 {
    let u1 = uniform(seed, 2 * index);
    let u2 = uniform(seed, 2 * index + 1);
    let r = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (TAU * u2).sin_cos();
    Complex64::new(r * c, r * s)
}
