//! Integer bit-width helpers shared by the protocol and simulator code.

/// `⌈log2 x⌉` with the convention that values `0` and `1` need zero bits.
pub fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// `⌈log2 log2 x⌉`, i.e. the smallest `k` with `2^(2^k) >= x`.
///
/// Zero for `x <= 2`, where `log2 x <= 1`.
pub fn ceil_loglog2(x: u64) -> u32 {
    if x <= 2 {
        return 0;
    }
    ceil_log2(u64::from(ceil_log2(x)))
}

/// Fixed-width unsigned integer encoding, most significant bit first.
pub fn push_uint(out: &mut Vec<bool>, value: u64, width: u32) {
    debug_assert!(width == 64 || value < (1u64 << width));
    for shift in (0..width).rev() {
        out.push((value >> shift) & 1 == 1);
    }
}

/// Reads a `width`-bit unsigned integer starting at `*pos`, advancing it.
pub fn read_uint(bits: &[bool], pos: &mut usize, width: u32) -> Option<u64> {
    let end = pos.checked_add(width as usize)?;
    if end > bits.len() {
        return None;
    }
    let value = bits[*pos..end].iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b));
    *pos = end;
    Some(value)
}
