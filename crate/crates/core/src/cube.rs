//! Range-compressed slow-time data cube and its `RIQ1` file format.
//!
//! Layout (little-endian):
//!
//! | offset | field |
//! |-------:|-------|
//! | 0  | magic `b"RIQ1"` |
//! | 4  | `u32` version = 1 |
//! | 8  | `f64` center_frequency_hz |
//! | 16 | `f64` bandwidth_hz |
//! | 24 | `f64` frame_interval_s |
//! | 32 | `f64` range_bin_m |
//! | 40 | `f64` stated_range_resolution_m |
//! | 48 | `f64` start_time_s |
//! | 56 | `u32` n_tx, n_rx, n_frames, n_ranges |
//! | 72 | payload: `f32` I, `f32` Q per sample, (frame, element, range) row-major |

use std::io::{Read, Write};

use num_complex::Complex64;

use crate::config::RadarConfig;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"RIQ1";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 72;

/// Complex baseband samples `s_i(t, r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IqCube {
    config: RadarConfig,
    n_frames: usize,
    n_elements: usize,
    n_ranges: usize,
    start_time_s: f64,
    samples: Vec<Complex64>,
}

impl IqCube {
    pub fn new(
        config: RadarConfig,
        n_frames: usize,
        n_ranges: usize,
        start_time_s: f64,
        samples: Vec<Complex64>,
    ) -> Result<Self> {
        config.validate()?;
        let n_elements = config.n_virtual();
        let expected = n_frames
            .checked_mul(n_elements)
            .and_then(|v| v.checked_mul(n_ranges))
            .ok_or_else(|| Error::DimensionMismatch("cube dimensions overflow".into()))?;
        if samples.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "{n_frames} frames x {n_elements} elements x {n_ranges} ranges needs {expected} \
                 samples, got {}",
                samples.len()
            )));
        }
        if !start_time_s.is_finite() {
            return Err(Error::InvalidParameter("start time must be finite".into()));
        }
        if let Some(pos) = samples.iter().position(|s| !(s.re.is_finite() && s.im.is_finite())) {
            return Err(Error::InvalidParameter(format!("non-finite sample at index {pos}")));
        }
        Ok(Self {
            config,
            n_frames,
            n_elements,
            n_ranges,
            start_time_s,
            samples,
        })
    }

    pub fn zeros(config: RadarConfig, n_frames: usize, n_ranges: usize) -> Result<Self> {
        let len = n_frames * config.n_virtual() * n_ranges;
        Self::new(config, n_frames, n_ranges, 0.0, vec![Complex64::new(0.0, 0.0); len])
    }

    pub fn config(&self) -> &RadarConfig {
        &self.config
    }

    pub fn n_frames(&self) -> usize {
        self.n_frames
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn n_ranges(&self) -> usize {
        self.n_ranges
    }

    pub fn start_time_s(&self) -> f64 {
        self.start_time_s
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    #[inline]
    pub fn index(&self, frame: usize, element: usize, range: usize) -> usize {
        (frame * self.n_elements + element) * self.n_ranges + range
    }

    #[inline]
    pub fn get(&self, frame: usize, element: usize, range: usize) -> Complex64 {
        self.samples[self.index(frame, element, range)]
    }

    /// All element samples of one frame, `[element][range]` flattened.
    pub fn frame(&self, frame: usize) -> &[Complex64] {
        let stride = self.n_elements * self.n_ranges;
        &self.samples[frame * stride..(frame + 1) * stride]
    }

    pub fn duration_s(&self) -> f64 {
        self.n_frames as f64 * self.config.frame_interval_s
    }
}

pub fn write_cube<W: Write>(cube: &IqCube, mut sink: W) -> Result<()> {
    let cfg = &cube.config;
    let mut header = Vec::with_capacity(HEADER_LEN);
    header.extend_from_slice(MAGIC);
    header.extend_from_slice(&VERSION.to_le_bytes());
    for v in [
        cfg.center_frequency_hz,
        cfg.bandwidth_hz,
        cfg.frame_interval_s,
        cfg.range_bin_m,
        cfg.stated_range_resolution_m,
        cube.start_time_s,
    ] {
        header.extend_from_slice(&v.to_le_bytes());
    }
    for v in [cfg.n_tx, cfg.n_rx, dim_u32(cube.n_frames)?, dim_u32(cube.n_ranges)?] {
        header.extend_from_slice(&v.to_le_bytes());
    }
    debug_assert_eq!(header.len(), HEADER_LEN);
    sink.write_all(&header)?;

    let mut buf = Vec::with_capacity(cube.n_elements * cube.n_ranges * 8);
    for f in 0..cube.n_frames {
        buf.clear();
        for s in cube.frame(f) {
            buf.extend_from_slice(&(s.re as f32).to_le_bytes());
            buf.extend_from_slice(&(s.im as f32).to_le_bytes());
        }
        sink.write_all(&buf)?;
    }
    sink.flush()?;
    Ok(())
}

fn dim_u32(v: usize) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::DimensionMismatch(format!("dimension {v} exceeds u32")))
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        if self.bytes.len() - self.pos < n {
            return Err(Error::format(
                self.bytes.len() as u64,
                format!("truncated while reading {what}"),
            ));
        }
        let out = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }
}

pub fn read_cube<R: Read>(mut source: R) -> Result<IqCube> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    decode_cube(&bytes)
}

pub fn decode_cube(bytes: &[u8]) -> Result<IqCube> {
    let mut cur = Cursor { bytes, pos: 0 };
    if cur.take(4, "magic")? != MAGIC {
        return Err(Error::format(0, "bad magic, expected \"RIQ1\""));
    }
    let version = cur.u32("version")?;
    if version != VERSION {
        return Err(Error::format(4, format!("unsupported version {version}")));
    }

    let mut reals = [0.0f64; 6];
    for (i, name) in [
        "center_frequency_hz",
        "bandwidth_hz",
        "frame_interval_s",
        "range_bin_m",
        "stated_range_resolution_m",
        "start_time_s",
    ]
    .iter()
    .enumerate()
    {
        reals[i] = cur.f64(name)?;
    }
    let n_tx = cur.u32("n_tx")?;
    let n_rx = cur.u32("n_rx")?;
    let n_frames = cur.u32("n_frames")? as usize;
    let n_ranges = cur.u32("n_ranges")? as usize;

    let config = RadarConfig {
        center_frequency_hz: reals[0],
        bandwidth_hz: reals[1],
        frame_interval_s: reals[2],
        range_bin_m: reals[3],
        stated_range_resolution_m: reals[4],
        n_tx,
        n_rx,
    };
    config
        .validate()
        .map_err(|e| Error::format(8, e.to_string()))?;
    if !reals[5].is_finite() {
        return Err(Error::format(48, "start_time_s is not finite"));
    }

    let n_elements = config.n_virtual();
    let count = (n_frames as u64)
        .checked_mul(n_elements as u64)
        .and_then(|v| v.checked_mul(n_ranges as u64))
        .filter(|v| v.checked_mul(8).is_some_and(|b| b <= usize::MAX as u64))
        .ok_or_else(|| Error::format(56, "dimension overflow"))? as usize;

    let payload_len = count * 8;
    let available = bytes.len() - HEADER_LEN;
    if available < payload_len {
        return Err(Error::format(
            bytes.len() as u64,
            format!("truncated payload: expected {payload_len} bytes, found {available}"),
        ));
    }
    if available > payload_len {
        return Err(Error::format(
            (HEADER_LEN + payload_len) as u64,
            format!("{} trailing bytes after payload", available - payload_len),
        ));
    }

    let mut samples = Vec::with_capacity(count);
    for (k, chunk) in bytes[HEADER_LEN..].chunks_exact(8).enumerate() {
        let re = f32::from_le_bytes(chunk[..4].try_into().unwrap());
        let im = f32::from_le_bytes(chunk[4..].try_into().unwrap());
        if !(re.is_finite() && im.is_finite()) {
            return Err(Error::format(
                (HEADER_LEN + 8 * k) as u64,
                "non-finite sample",
            ));
        }
        samples.push(Complex64::new(re as f64, im as f64));
    }

    IqCube::new(config, n_frames, n_ranges, reals[5], samples)
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn cube_strategy() -> impl Strategy<Value = IqCube> {
        (1u32..=3, 1u32..=4, 0usize..6, 1usize..6, -1e4f64..1e4)
            .prop_flat_map(|(n_tx, n_rx, frames, ranges, start)| {
                let len = frames * (n_tx * n_rx) as usize * ranges;
                (
                    Just((n_tx, n_rx, frames, ranges, start)),
                    prop::collection::vec((-1e3f32..1e3, -1e3f32..1e3), len),
                )
            })
            .prop_map(|((n_tx, n_rx, frames, ranges, start), iq)| {
                let cfg = RadarConfig {
                    n_tx,
                    n_rx,
                    ..RadarConfig::default()
                };
                let samples = iq
                    .into_iter()
                    .map(|(i, q)| Complex64::new(i as f64, q as f64))
                    .collect();
                IqCube::new(cfg, frames, ranges, start, samples).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]
        #[test]
        fn codec_round_trip_is_identity(cube in cube_strategy()) {
            let mut buf = Vec::new();
            write_cube(&cube, &mut buf).unwrap();
            prop_assert_eq!(buf.len(), HEADER_LEN + cube.samples().len() * 8);
            let back = read_cube(buf.as_slice()).unwrap();
            prop_assert_eq!(back, cube);
        }
    }
}
