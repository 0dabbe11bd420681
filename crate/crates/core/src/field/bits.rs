//! Packed GF(2) digit windows: up to 256 coefficients in four machine words.
//!
//! Bit `i` of the window is the coefficient of `t^(v+i)` where `v` is the
//! owning number's valuation. Bits at or above the window length are zero.

pub(crate) const WORDS: usize = 4;
pub(crate) const CAPACITY: u32 = 64 * WORDS as u32;

pub(crate) type Window = [u64; WORDS];

pub(crate) fn mask(w: &mut Window, len: u32) {
    for (i, word) in w.iter_mut().enumerate() {
        let lo = 64 * i as u32;
        if len <= lo {
            *word = 0;
        } else if len < lo + 64 {
            *word &= (1u64 << (len - lo)) - 1;
        }
    }
}

pub(crate) fn shl(w: &Window, s: u32) -> Window {
    let mut out = [0u64; WORDS];
    if s >= CAPACITY {
        return out;
    }
    let (ws, bs) = ((s / 64) as usize, s % 64);
    for i in (ws..WORDS).rev() {
        let src = i - ws;
        out[i] = w[src] << bs;
        if bs > 0 && src > 0 {
            out[i] |= w[src - 1] >> (64 - bs);
        }
    }
    out
}

pub(crate) fn shr(w: &Window, s: u32) -> Window {
    let mut out = [0u64; WORDS];
    if s >= CAPACITY {
        return out;
    }
    let (ws, bs) = ((s / 64) as usize, s % 64);
    for i in 0..WORDS - ws {
        let src = i + ws;
        out[i] = w[src] >> bs;
        if bs > 0 && src + 1 < WORDS {
            out[i] |= w[src + 1] << (64 - bs);
        }
    }
    out
}

pub(crate) fn trailing_zeros(w: &Window) -> Option<u32> {
    w.iter()
        .enumerate()
        .find(|(_, &word)| word != 0)
        .map(|(i, word)| 64 * i as u32 + word.trailing_zeros())
}

pub(crate) fn bit(w: &Window, i: u32) -> u32 {
    ((w[(i / 64) as usize] >> (i % 64)) & 1) as u32
}

pub(crate) fn set_bit(w: &mut Window, i: u32) {
    w[(i / 64) as usize] |= 1u64 << (i % 64);
}

fn clmul_soft(a: u64, b: u64) -> (u64, u64) {
    let (mut lo, mut hi) = (0u64, 0u64);
    let mut x = a;
    while x != 0 {
        let i = x.trailing_zeros();
        lo ^= b << i;
        if i > 0 {
            hi ^= b >> (64 - i);
        }
        x &= x - 1;
    }
    (lo, hi)
}

#[inline(always)]
fn mul_trunc_with(a: &Window, b: &Window, len: u32, clmul: impl Fn(u64, u64) -> (u64, u64)) -> Window {
    let nw = len.div_ceil(64) as usize;
    let mut r = [0u64; WORDS];
    for i in 0..nw {
        if a[i] == 0 {
            continue;
        }
        for j in 0..nw - i {
            let (lo, hi) = clmul(a[i], b[j]);
            r[i + j] ^= lo;
            if i + j + 1 < nw {
                r[i + j + 1] ^= hi;
            }
        }
    }
    mask(&mut r, len);
    r
}

#[cfg(target_arch = "x86_64")]
mod hw {
    use super::Window;
    use std::arch::x86_64::*;

    #[target_feature(enable = "pclmulqdq,sse2")]
    unsafe fn clmul(a: u64, b: u64) -> (u64, u64) {
        let r = _mm_clmulepi64_si128(_mm_set_epi64x(0, a as i64), _mm_set_epi64x(0, b as i64), 0);
        let lo = _mm_cvtsi128_si64(r) as u64;
        let hi = _mm_cvtsi128_si64(_mm_unpackhi_epi64(r, r)) as u64;
        (lo, hi)
    }

    #[target_feature(enable = "pclmulqdq,sse2")]
    pub(super) unsafe fn mul_trunc(a: &Window, b: &Window, len: u32) -> Window {
        super::mul_trunc_with(a, b, len, |x, y| unsafe { clmul(x, y) })
    }
}

/// Low `len` coefficients of the product of two GF(2) windows.
pub(crate) fn mul_trunc(a: &Window, b: &Window, len: u32) -> Window {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("pclmulqdq") {
            // SAFETY: the required CPU feature was detected at runtime.
            return unsafe { hw::mul_trunc(a, b, len) };
        }
    }
    mul_trunc_with(a, b, len, clmul_soft)
}

/// Inverse of a unit window (bit 0 set) modulo `t^len`, by Newton iteration.
///
/// In characteristic 2 the update `b(2 - ab)` reduces to `b * (a * b)`.
pub(crate) fn inv_trunc(a: &Window, len: u32) -> Window {
    debug_assert!(a[0] & 1 == 1);
    let mut b = [0u64; WORDS];
    b[0] = 1;
    let mut prec = 1u32;
    while prec < len {
        let next = (2 * prec).min(len);
        let ab = mul_trunc(a, &b, next);
        b = mul_trunc(&b, &ab, next);
        prec = next;
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_mul(a: &Window, b: &Window, len: u32) -> Window {
        let mut r = [0u64; WORDS];
        for i in 0..len {
            for j in 0..len - i {
                if bit(a, i) & bit(b, j) == 1 {
                    r[((i + j) / 64) as usize] ^= 1u64 << ((i + j) % 64);
                }
            }
        }
        r
    }

    #[test]
    fn soft_and_dispatch_agree_with_naive() {
        let mut x = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            x
        };
        for len in [1, 7, 63, 64, 65, 130, 200, 256] {
            let mut a = [next(), next(), next(), next()];
            let mut b = [next(), next(), next(), next()];
            mask(&mut a, len);
            mask(&mut b, len);
            let want = naive_mul(&a, &b, len);
            assert_eq!(mul_trunc(&a, &b, len), want, "len {len}");
            assert_eq!(mul_trunc_with(&a, &b, len, clmul_soft), want, "len {len}");
        }
    }

    #[test]
    fn shifts_roundtrip() {
        let w = [0xdead_beef_0123_4567, 0x89ab_cdef, 7, 1 << 40];
        for s in [0, 1, 63, 64, 65, 100] {
            let mut back = shr(&shl(&w, s), s);
            let mut expect = w;
            mask(&mut expect, CAPACITY - s);
            mask(&mut back, CAPACITY);
            assert_eq!(back, expect, "shift {s}");
        }
    }

    #[test]
    fn newton_inverse() {
        let mut a = [0x1234_5678_9abc_def1u64, 0x0fed_cba9_8765_4321, 0x5555, 0xffff];
        mask(&mut a, 200);
        let b = inv_trunc(&a, 200);
        let mut one = [0u64; WORDS];
        one[0] = 1;
        assert_eq!(mul_trunc(&a, &b, 200), one);
    }
}
