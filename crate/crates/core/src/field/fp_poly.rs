//! Dense polynomials over the prime field, coefficients ascending.
//! Only what modulus construction and inversion need.

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    crate::arith::pow_mod(a, p - 2, p)
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y % p) % p;
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
fn divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead_inv = inv_mod_p(b[db], p);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![0u64; rem.len() - db];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem[rem.len() - 1] * lead_inv % p;
        quot[shift] = c;
        for (j, &bj) in b.iter().enumerate() {
            rem[shift + j] = (rem[shift + j] + p - c * bj % p) % p;
        }
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

fn mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    divmod(&mul(a, b, p), f, p).1
}

fn powmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = divmod(base, f, p).1;
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(&result, &b, f, p);
        }
        b = mulmod(&b, &b, f, p);
        e >>= 1;
    }
    result
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = divmod(&x, &y, p).1;
        x = y;
        y = r;
    }
    x
}

/// Rabin-style test: no factor of degree `<= deg/2`.
pub(super) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let r = f.len() - 1;
    if r == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let x = vec![0u64, 1];
    let mut h = x.clone();
    for _ in 1..=r / 2 {
        h = powmod(&h, p, f, p);
        let g = gcd(&sub(&h, &x, p), f, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `r`, comparing
/// `(c_0, ..., c_{r-1})` with `c_0` most significant.
pub(super) fn smallest_irreducible(p: u64, r: usize) -> Vec<u64> {
    let mut coeffs = vec![0u64; r + 1];
    coeffs[r] = 1;
    loop {
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
        // increment with c_{r-1} least significant
        let mut i = r;
        loop {
            // an irreducible of every degree exists, so this never runs off the front
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
        }
    }
}

/// Inverse of `a` modulo `f`, or `None` when they share a factor.
pub(super) fn inverse_mod(a: &[u64], f: &[u64], p: u64) -> Option<Vec<u64>> {
    let (mut old_r, mut r) = (divmod(a, f, p).1, f.to_vec());
    let (mut old_s, mut s) = (vec![1u64], Vec::new());
    while !r.is_empty() {
        let (q, rem) = divmod(&old_r, &r, p);
        old_r = std::mem::replace(&mut r, rem);
        let new_s = sub(&old_s, &mul(&q, &s, p), p);
        old_s = std::mem::replace(&mut s, new_s);
    }
    if old_r.len() != 1 {
        return None;
    }
    let c = inv_mod_p(old_r[0], p);
    let mut inv: Vec<u64> = old_s.iter().map(|&x| x * c % p).collect();
    trim(&mut inv);
    Some(inv)
}
