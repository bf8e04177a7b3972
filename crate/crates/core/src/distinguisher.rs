//! The two distinguishers. Both build a dichotomy from the input bits and
//! answer `McCulloch-Pitts` exactly when it is linearly separable.
//!
//! Any stream produced by a McCulloch-Pitts system is always accepted: the
//! label of each chunk is the first unit's output on that chunk, and a
//! threshold function's positive and negative sets are linearly separable.
//! Uniform bits are rejected with high probability once there are enough
//! labeled chunks; that part is statistical and is measured by the
//! experiment harness rather than asserted per input.

use crate::dynamics::BitStream;
use crate::error::{Error, Result};
use crate::separability::{build_multi_dichotomy, build_single_dichotomy, separate};
use crate::types::Verdict;

/// One stream of t ≥ n+1 bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingleStreamInput {
    n: usize,
    y: BitStream,
}

impl SingleStreamInput {
    pub fn new(n: usize, y: BitStream) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("n must be positive"));
        }
        if y.len() <= n {
            return Err(Error::StreamTooShort { len: y.len(), n });
        }
        Ok(SingleStreamInput { n, y })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stream(&self) -> &BitStream {
        &self.y
    }

    /// Number of labeled chunks, ⌊(t−1)/n⌋.
    pub fn chunk_count(&self) -> usize {
        (self.y.len() - 1) / self.n
    }
}

/// m ≥ 1 samples, each of exactly n+1 bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiSampleInput {
    n: usize,
    samples: Vec<BitStream>,
}

impl MultiSampleInput {
    pub fn new(n: usize, samples: Vec<BitStream>) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("n must be positive"));
        }
        if samples.is_empty() {
            return Err(Error::domain("at least one sample is required"));
        }
        if let Some((i, s)) = samples.iter().enumerate().find(|(_, s)| s.len() != n + 1) {
            return Err(Error::domain(format!(
                "sample {} has {} bits, expected n + 1 = {}",
                i + 1,
                s.len(),
                n + 1
            )));
        }
        Ok(MultiSampleInput { n, samples })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn samples(&self) -> &[BitStream] {
        &self.samples
    }
}

pub fn classify_single(input: &SingleStreamInput) -> Result<Verdict> {
    let d = build_single_dichotomy(&input.y, input.n)?;
    Ok(match separate(&d) {
        Some(w) => Verdict::McCullochPitts(w),
        None => Verdict::Random,
    })
}

pub fn classify_multi(input: &MultiSampleInput) -> Result<Verdict> {
    let d = build_multi_dichotomy(&input.samples, input.n)?;
    Ok(match separate(&d) {
        Some(w) => Verdict::McCullochPitts(w),
        None => Verdict::Random,
    })
}
