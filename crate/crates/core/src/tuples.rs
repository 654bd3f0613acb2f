//! Index-tuple enumeration helpers.

/// All strictly increasing `len`-tuples over `0..dim`, in lexicographic order.
pub fn increasing_tuples(dim: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut next = if len <= dim { Some((0..len).collect::<Vec<_>>()) } else { None };
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut t = current.clone();
        // Advance: rightmost position that can still grow.
        let mut pos = len;
        while pos > 0 {
            pos -= 1;
            if t[pos] < dim - len + pos {
                t[pos] += 1;
                for q in pos + 1..len {
                    t[q] = t[q - 1] + 1;
                }
                next = Some(t);
                break;
            }
        }
        Some(current)
    })
}

/// Writes the base-`dim` digits of `linear` into `out`, most significant first.
pub fn decode_lex(mut linear: u64, dim: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = (linear % dim as u64) as usize;
        linear /= dim as u64;
    }
}

/// `dim^len`, or `None` on overflow.
pub fn tuple_count(dim: usize, len: usize) -> Option<u64> {
    (dim as u64).checked_pow(len as u32)
}

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Sorts `t` in place and returns the sign of the sorting permutation, or 0
/// when `t` contains a repeated index.
pub fn sort_with_sign(t: &mut [usize]) -> i8 {
    let mut sign = 1i8;
    for i in 1..t.len() {
        let mut j = i;
        while j > 0 && t[j - 1] > t[j] {
            t.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && t[j - 1] == t[j] {
            return 0;
        }
    }
    sign
}
