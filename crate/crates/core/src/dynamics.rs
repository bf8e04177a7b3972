//! Iteration of McCulloch-Pitts systems: Φ, the induced integer map Φ*,
//! truncated trajectories Φ_t and orbit cycle structure.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::types::{decode_state, encode_state, BitVector, MPSystem};

/// Above this arity `find_cycle` switches from a visited-state table to
/// Brent's constant-memory search.
pub const HASHED_CYCLE_MAX_ARITY: usize = 24;

/// A finite nonempty sequence of bits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitStream(Vec<bool>);

impl BitStream {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::domain("bit stream must have length >= 1"));
        }
        Ok(BitStream(bits))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<bool> {
        self.0
    }

    /// Bits `start..end` (0-based, half-open) as a point of {0,1}^(end−start).
    pub fn chunk(&self, start: usize, end: usize) -> BitVector {
        BitVector::new(self.0[start..end].to_vec()).expect("nonempty chunk")
    }
}

impl fmt::Display for BitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitStream {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v: BitVector = s.parse()?;
        Ok(BitStream(v.into_inner()))
    }
}

impl From<BitVector> for BitStream {
    fn from(v: BitVector) -> Self {
        BitStream(v.into_inner())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycleInfo {
    /// Steps taken before the orbit first enters its cycle.
    pub tail_length: u64,
    pub cycle_length: u64,
}

fn check_arity(s: &MPSystem, x: &BitVector) -> Result<()> {
    if x.len() != s.arity() {
        return Err(Error::domain(format!(
            "state of length {} for a system of arity {}",
            x.len(),
            s.arity()
        )));
    }
    Ok(())
}

/// Φ(x): coordinate j is unit j evaluated at x.
pub fn step(s: &MPSystem, x: &BitVector) -> Result<BitVector> {
    check_arity(s, x)?;
    let bits = s
        .units()
        .iter()
        .map(|u| u.eval(x))
        .collect::<Result<Vec<_>>>()?;
    BitVector::new(bits)
}

/// Φ*(k) under the little-endian encoding.
pub fn next_integer(s: &MPSystem, k: u64) -> Result<u64> {
    let x = encode_state(k, s.arity())?;
    decode_state(&step(s, &x)?)
}

/// The first `t` bits of x ‖ Φ(x) ‖ Φ(Φ(x)) ‖ …
pub fn trajectory_bits(s: &MPSystem, x: &BitVector, t: usize) -> Result<BitStream> {
    check_arity(s, x)?;
    if t == 0 {
        return Err(Error::domain("stream length t must be positive"));
    }
    let mut out = Vec::with_capacity(t);
    let mut state = x.clone();
    loop {
        let take = (t - out.len()).min(state.len());
        out.extend(state.iter().take(take));
        if out.len() == t {
            break;
        }
        state = step(s, &state)?;
    }
    BitStream::new(out)
}

/// Least pre-period and period of the orbit of `x`.
pub fn find_cycle(s: &MPSystem, x: &BitVector) -> Result<CycleInfo> {
    if s.arity() <= HASHED_CYCLE_MAX_ARITY {
        find_cycle_hashed(s, x)
    } else {
        find_cycle_brent(s, x)
    }
}

/// Visited-state table; memory grows with the orbit length.
pub fn find_cycle_hashed(s: &MPSystem, x: &BitVector) -> Result<CycleInfo> {
    check_arity(s, x)?;
    let mut seen: HashMap<BitVector, u64> = HashMap::new();
    let mut state = x.clone();
    let mut i = 0u64;
    loop {
        if let Some(&first) = seen.get(&state) {
            return Ok(CycleInfo {
                tail_length: first,
                cycle_length: i - first,
            });
        }
        let next = step(s, &state)?;
        seen.insert(state, i);
        state = next;
        i += 1;
    }
}

/// Brent's cycle detection; constant memory.
pub fn find_cycle_brent(s: &MPSystem, x: &BitVector) -> Result<CycleInfo> {
    check_arity(s, x)?;
    let mut power = 1u64;
    let mut cycle_length = 1u64;
    let mut tortoise = x.clone();
    let mut hare = step(s, x)?;
    while tortoise != hare {
        if power == cycle_length {
            tortoise = hare.clone();
            power *= 2;
            cycle_length = 0;
        }
        hare = step(s, &hare)?;
        cycle_length += 1;
    }

    let mut tortoise = x.clone();
    let mut hare = x.clone();
    for _ in 0..cycle_length {
        hare = step(s, &hare)?;
    }
    let mut tail_length = 0u64;
    while tortoise != hare {
        tortoise = step(s, &tortoise)?;
        hare = step(s, &hare)?;
        tail_length += 1;
    }
    Ok(CycleInfo {
        tail_length,
        cycle_length,
    })
}
