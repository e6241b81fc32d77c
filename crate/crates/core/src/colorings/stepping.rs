use crate::error::{Error, Result};

use super::{check_triple, ColorLabel, Oracle};

/// Binary digit `i` of `x`.
pub fn bit(x: u64, i: u32) -> u8 {
    if i >= 64 {
        0
    } else {
        ((x >> i) & 1) as u8
    }
}

/// Highest position where `x` and `y` differ.
pub fn delta(x: u64, y: u64) -> Result<u32> {
    if x == y {
        return Err(Error::Domain(format!("delta({x}, {x}) is undefined")));
    }
    Ok(delta_unchecked(x, y))
}

#[inline]
fn delta_unchecked(x: u64, y: u64) -> u32 {
    63 - (x ^ y).leading_zeros()
}

/// The stepping-up coloring for even `q`. Vertices are `0..2^{2^{q/2}}`;
/// from `q = 14` on, that range exceeds 64 bits and only the window
/// `0..2^64` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhiQ {
    q: u32,
}

impl PhiQ {
    pub fn new(q: u32) -> Result<Self> {
        if q == 0 || q % 2 == 1 {
            return Err(Error::Domain(format!("the stepping-up coloring needs an even positive q, got {q}")));
        }
        Ok(PhiQ { q })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Whether every vertex of the nominal domain is addressable.
    pub fn is_full_domain(&self) -> bool {
        self.q <= 12
    }

    #[inline]
    fn pair(t: [u64; 3]) -> (u32, u8) {
        let a = delta_unchecked(t[0], t[1]);
        let b = delta_unchecked(t[1], t[2]);
        (delta_unchecked(a as u64, b as u64), (a > b) as u8)
    }
}

impl Oracle for PhiQ {
    fn name(&self) -> String {
        format!("phi-q:q={}", self.q)
    }

    fn domain_size(&self) -> u128 {
        1u128 << (1u32 << (self.q / 2).min(6))
    }

    fn color_count(&self) -> u64 {
        self.q as u64
    }

    #[inline]
    fn color_id(&self, t: [u64; 3]) -> u32 {
        let (c, s) = Self::pair(t);
        2 * c + s as u32
    }

    fn label(&self, id: u32) -> ColorLabel {
        ColorLabel::Pair { t: id / 2, s: (id % 2) as u8 }
    }
}

/// Checked evaluation of the stepping-up coloring on one triple.
pub fn phi_q(q: u32, x: u64, y: u64, z: u64) -> Result<ColorLabel> {
    let phi = PhiQ::new(q)?;
    check_triple([x, y, z], phi.domain_size())?;
    let (t, s) = PhiQ::pair([x, y, z]);
    Ok(ColorLabel::Pair { t, s })
}
