//! Polynomial arithmetic over the prime field of order 2^61 - 1, used as a
//! cheap filter in front of exact gcds.

/// The Mersenne prime 2^61 - 1.
pub const P: u64 = (1 << 61) - 1;

#[inline]
pub fn reduce128(x: u128) -> u64 {
    let lo = (x as u64) & P;
    let mid = ((x >> 61) as u64) & P;
    let hi = (x >> 122) as u64;
    let mut r = lo + mid + hi;
    while r >= P {
        r -= P;
    }
    r
}

#[inline]
pub fn mul(a: u64, b: u64) -> u64 {
    reduce128(a as u128 * b as u128)
}

#[inline]
pub fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

pub fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

pub fn inv(a: u64) -> Option<u64> {
    (!a.is_multiple_of(P)).then(|| pow(a % P, P - 2))
}

pub fn div(a: u64, b: u64) -> Option<u64> {
    inv(b).map(|bi| mul(a, bi))
}

/// Residue of a signed integer.
pub fn from_i128(x: i128) -> u64 {
    x.rem_euclid(P as i128) as u64
}

/// Smallest `(num, den)` with `num / den = a mod P` and
/// `|num|, den <= sqrt(P / 2)`.
pub fn rational_reconstruct(a: u64) -> Option<(i64, u64)> {
    let bound: i128 = 1 << 30;
    let (mut r0, mut r1) = (P as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 >= bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if t1 == 0 || t1.abs() >= bound {
        return None;
    }
    let (num, den) = if t1 < 0 { (-r1, -t1) } else { (r1, t1) };
    if from_i128(num) != mul(a, from_i128(den)) {
        return None;
    }
    Some((num as i64, den as u64))
}

pub fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub fn poly_mul(a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (o, &y) in out[i..].iter_mut().zip(b) {
            *o = add(*o, mul(x, y));
        }
    }
    trim(&mut out);
    out
}

pub fn poly_add(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        *o = add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0));
    }
    trim(&mut out);
    out
}

pub fn poly_scale(a: &[u64], c: u64) -> Vec<u64> {
    let mut out: Vec<u64> = a.iter().map(|&x| mul(x, c)).collect();
    trim(&mut out);
    out
}

/// Replaces `x` by `x mod y` (`y` nonzero and trimmed).
fn rem_in_place(x: &mut Vec<u64>, y: &[u64]) {
    let dy = y.len() - 1;
    let li = inv(y[dy]).expect("trimmed divisor");
    trim(x);
    while x.len() > dy {
        let top = x.len() - 1;
        let c = mul(x[top], li);
        if c != 0 {
            let shift = top - dy;
            for (xv, &yv) in x[shift..].iter_mut().zip(y) {
                *xv = sub(*xv, mul(c, yv));
            }
        }
        x.pop();
        trim(x);
    }
}

pub fn poly_rem(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    rem_in_place(&mut r, b);
    r
}

/// Monic gcd; empty iff both inputs are zero.
pub fn poly_gcd(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        rem_in_place(&mut x, &y);
        std::mem::swap(&mut x, &mut y);
    }
    if let Some(&lc) = x.last() {
        let li = inv(lc).expect("nonzero");
        for c in x.iter_mut() {
            *c = mul(*c, li);
        }
    }
    x
}

/// Degree of the gcd of two nonzero polynomials.
pub fn gcd_degree(a: &[u64], b: &[u64]) -> usize {
    poly_gcd(a, b).len().saturating_sub(1)
}
