//! Operation counters threaded through the arithmetic kernels.
//!
//! Kernels take `&mut impl Meter`; passing `&mut ()` compiles the counting
//! away.

pub trait Meter {
    /// `n` general-width modular multiplications were performed.
    fn modmul(&mut self, _n: u64) {}
    /// `n` packed-lane accumulation steps were performed.
    fn lane_steps(&mut self, _n: u64) {}
    /// `n` bytes were squeezed from an XOF.
    fn xof_bytes(&mut self, _n: u64) {}
    /// A secret key was decoded.
    fn sk_decode(&mut self) {}
}

impl Meter for () {}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub modmul: u64,
    pub lane_steps: u64,
    pub xof_bytes: u64,
    pub sk_decodes: u64,
}

impl Meter for OpCounts {
    #[inline]
    fn modmul(&mut self, n: u64) {
        self.modmul += n;
    }

    #[inline]
    fn lane_steps(&mut self, n: u64) {
        self.lane_steps += n;
    }

    #[inline]
    fn xof_bytes(&mut self, n: u64) {
        self.xof_bytes += n;
    }

    #[inline]
    fn sk_decode(&mut self) {
        self.sk_decodes += 1;
    }
}

impl core::ops::AddAssign for OpCounts {
    fn add_assign(&mut self, rhs: Self) {
        self.modmul += rhs.modmul;
        self.lane_steps += rhs.lane_steps;
        self.xof_bytes += rhs.xof_bytes;
        self.sk_decodes += rhs.sk_decodes;
    }
}
