//! Taylor amplitude taper for the virtual array.
//!
//! The taper is synthesised from the Taylor line-source pattern: `nbar - 1`
//! Fourier coefficients `F_m` are chosen so that the first `nbar - 1` nulls
//! of the array factor sit at the Dolph-Chebyshev positions for the requested
//! sidelobe level, and the weights are `1 + 2 Σ F_m cos(2π m x / n)` sampled
//! at the element positions.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_NBAR: usize = 4;
pub const DEFAULT_SIDELOBE_DB: f64 = -30.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaylorWeights {
    pub n: usize,
    pub nbar: usize,
    pub sidelobe_db: f64,
    pub weights: Vec<f64>,
}

impl TaylorWeights {
    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    /// Uniform weights, for comparisons against an untapered aperture.
    pub fn uniform(n: usize) -> Self {
        Self {
            n,
            nbar: 1,
            sidelobe_db: 0.0,
            weights: vec![1.0; n],
        }
    }
}

pub fn taylor_weights(n: usize, nbar: usize, sidelobe_db: f64) -> Result<TaylorWeights> {
    if n == 0 {
        return Err(Error::InvalidParameter("taper length must be >= 1".into()));
    }
    if nbar == 0 {
        return Err(Error::InvalidParameter("nbar must be >= 1".into()));
    }
    if !(sidelobe_db.is_finite() && sidelobe_db < 0.0) {
        return Err(Error::InvalidParameter(format!(
            "sidelobe level must be negative dB, got {sidelobe_db}"
        )));
    }
    if n == 1 {
        return Ok(TaylorWeights {
            n,
            nbar,
            sidelobe_db,
            weights: vec![1.0],
        });
    }

    let coefficients = pattern_coefficients(nbar, sidelobe_db);
    let centre = (n as f64 - 1.0) / 2.0;
    let mut weights: Vec<f64> = (0..n)
        .map(|i| {
            let x = i as f64 - centre;
            1.0 + 2.0
                * coefficients
                    .iter()
                    .enumerate()
                    .map(|(j, f)| f * (2.0 * PI * (j + 1) as f64 * x / n as f64).cos())
                    .sum::<f64>()
        })
        .collect();

    // Mirror so the taper is symmetric to the last bit.
    for i in 0..n / 2 {
        let avg = 0.5 * (weights[i] + weights[n - 1 - i]);
        weights[i] = avg;
        weights[n - 1 - i] = avg;
    }

    // Too many equalised sidelobes pushes the taper towards Dolph-Chebyshev
    // behaviour: the edges brighten and the weights stop decreasing outwards.
    let half = &weights[..n.div_ceil(2)];
    let monotone = half.windows(2).all(|p| p[1] >= p[0] - 1e-12);
    if !monotone || weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "nbar = {nbar} is too large for a {sidelobe_db} dB taper over {n} elements \
             (taper is not monotone towards the edges)"
        )));
    }
    let peak = weights.iter().cloned().fold(f64::MIN, f64::max);
    for w in &mut weights {
        *w /= peak;
    }

    Ok(TaylorWeights {
        n,
        nbar,
        sidelobe_db,
        weights,
    })
}

/// `F_m`, m = 1..nbar-1, in product-ratio form.
fn pattern_coefficients(nbar: usize, sidelobe_db: f64) -> Vec<f64> {
    let ratio = 10f64.powf(-sidelobe_db / 20.0);
    let a = ratio.acosh() / PI;
    let a2 = a * a;
    let nb = nbar as f64;
    let sigma2 = nb * nb / (a2 + (nb - 0.5) * (nb - 0.5));

    (1..nbar)
        .map(|m| {
            let m2 = (m * m) as f64;
            let numer: f64 = (1..nbar)
                .map(|n| {
                    let nf = n as f64 - 0.5;
                    1.0 - m2 / sigma2 / (a2 + nf * nf)
                })
                .product();
            let denom: f64 = (1..nbar)
                .filter(|&n| n != m)
                .map(|n| 1.0 - m2 / (n * n) as f64)
                .product();
            let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
            sign * numer / (2.0 * denom)
        })
        .collect()
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn positive_symmetric_peak_normalised(n in 1usize..=64) {
            let t = taylor_weights(n, DEFAULT_NBAR, DEFAULT_SIDELOBE_DB).unwrap();
            prop_assert_eq!(t.weights.len(), n);
            let max = t.weights.iter().cloned().fold(f64::MIN, f64::max);
            prop_assert!((max - 1.0).abs() < 1e-15);
            for i in 0..n {
                prop_assert!(t.weights[i] > 0.0);
                prop_assert!((t.weights[i] - t.weights[n - 1 - i]).abs() <= 1e-12);
            }
        }
    }
}
