//! Fixed-width bit vectors with the handful of set operations routing needs.

use std::fmt;

use crate::{Error, Result};

type Block = u64;
const BITS: usize = Block::BITS as usize;

/// A bit vector of fixed width. Bits beyond `width` are always zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitSet {
    width: usize,
    blocks: Vec<Block>,
}

impl BitSet {
    pub fn new(width: usize) -> Self {
        BitSet {
            width,
            blocks: vec![0; width.div_ceil(BITS)],
        }
    }

    /// Builds a set of the given width from bit positions.
    ///
    /// Fails if any position lies outside the width.
    pub fn from_positions<I>(width: usize, positions: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut set = BitSet::new(width);
        for p in positions {
            if p >= width {
                return Err(Error::InvalidParameter(format!(
                    "bit position {p} outside width {width}"
                )));
            }
            set.insert(p);
        }
        Ok(set)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    /// Sets bit `i`.
    ///
    /// # Panics
    ///
    /// Panics if `i >= width`.
    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.width, "bit {i} out of width {}", self.width);
        self.blocks[i / BITS] |= 1 << (i % BITS);
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.width && self.blocks[i / BITS] & (1 << (i % BITS)) != 0
    }

    pub fn count_ones(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    /// `self ⊆ other`, computed blockwise as `self & !other == 0`.
    pub fn is_subset(&self, other: &BitSet) -> Result<bool> {
        self.check_width(other)?;
        Ok(self.is_subset_unchecked(other))
    }

    #[inline]
    pub(crate) fn is_subset_unchecked(&self, other: &BitSet) -> bool {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &BitSet) -> Result<()> {
        self.check_width(other)?;
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a |= b;
        }
        Ok(())
    }

    /// Copies this set into a wider one, moving every bit up by `offset`.
    pub fn shifted(&self, offset: usize, width: usize) -> Result<BitSet> {
        BitSet::from_positions(width, self.ones().map(|p| p + offset))
    }

    /// Positions of set bits in ascending order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            let mut rest = block;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let tz = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(bi * BITS + tz)
            })
        })
    }

    fn check_width(&self, other: &BitSet) -> Result<()> {
        if self.width != other.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: other.width,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitSet<{}>", self.width)?;
        f.debug_set().entries(self.ones()).finish()
    }
}
