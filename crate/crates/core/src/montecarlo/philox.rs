//! Philox4x32-10 counter-based generator (Salmon et al., SC'11).
//!
//! Stateless: every output block is a pure function of a 128-bit counter and
//! a 64-bit key, so any trial/step can be drawn independently of the others.

const M0: u32 = 0xD251_1F53;
const M1: u32 = 0xCD9E_8D57;
const W0: u32 = 0x9E37_79B9;
const W1: u32 = 0xBB67_AE85;

#[inline]
fn mulhilo(a: u32, b: u32) -> (u32, u32) {
    let prod = a as u64 * b as u64;
    ((prod >> 32) as u32, prod as u32)
}

#[inline]
fn round(ctr: [u32; 4], key: [u32; 2]) -> [u32; 4] {
    let (hi0, lo0) = mulhilo(M0, ctr[0]);
    let (hi1, lo1) = mulhilo(M1, ctr[2]);
    [hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0]
}

/// Ten rounds of Philox4x32 on `ctr` under `key`.
pub fn philox4x32_10(mut ctr: [u32; 4], mut key: [u32; 2]) -> [u32; 4] {
    for i in 0..10 {
        if i > 0 {
            key[0] = key[0].wrapping_add(W0);
            key[1] = key[1].wrapping_add(W1);
        }
        ctr = round(ctr, key);
    }
    ctr
}

/// Uniform 64-bit draw keyed by `(seed, stream, index)`.
///
/// Layout: key = seed (low word first); counter = (index / 2 as two words,
/// stream as two words). Each block yields two draws; `index` picks the
/// low (`x1:x0`) or high (`x3:x2`) half.
#[inline]
pub fn draw_u64(seed: u64, stream: u64, index: u64) -> u64 {
    let block = index >> 1;
    let out = philox4x32_10(
        [block as u32, (block >> 32) as u32, stream as u32, (stream >> 32) as u32],
        [seed as u32, (seed >> 32) as u32],
    );
    if index & 1 == 0 {
        ((out[1] as u64) << 32) | out[0] as u64
    } else {
        ((out[3] as u64) << 32) | out[2] as u64
    }
}
