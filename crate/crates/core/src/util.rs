//! Numeric helpers and the PRNG used by every seeded component.

/// SplitMix64 (Steele, Lea, Vigna). Chosen as the project-wide PRNG because
/// its output for a given seed is a fixed 64-bit sequence that any
/// implementation can reproduce from the published constants.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[0, bound)` by 128-bit multiply-shift; `bound > 0`.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }
}

/// `n^{num/den}` for the fractional exponents the budgets are built from.
pub fn frac_pow(n: u64, num: u32, den: u32) -> f64 {
    (n as f64).powf(num as f64 / den as f64)
}

/// Ceiling with a snap-to-integer guard.
///
/// `powf` can land one ulp above an exact power (400^{1/2} computing as
/// 20.000000000000004 must ceil to 20, not 21), so values within a relative
/// 1e-9 of a whole number are treated as that whole number.
pub fn ceil_guarded(x: f64) -> u64 {
    debug_assert!(x >= 0.0 && x.is_finite());
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.max(1.0) {
        r as u64
    } else {
        x.ceil() as u64
    }
}
