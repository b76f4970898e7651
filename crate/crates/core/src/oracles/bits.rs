/// Bit level of a number, with a distinguished value for "no set bit".
///
/// `Bit(l)` means the most significant set bit is bit `l`, counted from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    NegInf,
    Bit(u32),
}

/// Most significant set bit of `x mod 2^i`.
pub fn msb(x: u64, i: u32) -> Level {
    let residue = if i >= 64 { x } else { x & ((1u64 << i) - 1) };
    if residue == 0 {
        Level::NegInf
    } else {
        Level::Bit(64 - residue.leading_zeros())
    }
}

/// `floor(log2 x)` for `x >= 1`, and 0 for `x = 0`.
pub fn floor_log_plus(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        63 - x.leading_zeros()
    }
}

/// `floor(log+ x) + 1`, the number of binary digits needed for `x` (at least 1).
pub fn level_of(x: u64) -> u32 {
    floor_log_plus(x) + 1
}
