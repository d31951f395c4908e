//! Counting torus points of `M1 + M2 + M3 = 0` for three monomials in two
//! variables.
//!
//! Dividing by the third monomial gives `A + B + 1 = 0` with `A`, `B`
//! monomials whose exponent vectors form the rows of an integer matrix `M`.
//! On `(F_q^*)^2` the map `(x, y) -> (A, B)` is a group homomorphism; every
//! point of the image has exactly `|ker|` preimages. With a Smith form
//! `W M V = diag(d1, d2)` (`W`, `V` unimodular), a pair with discrete logs
//! `w = (log A, log B)` is in the image iff `(W w)_i ≡ 0 mod gcd(d_i, q-1)`,
//! and `|ker| = gcd(d1, q-1) gcd(d2, q-1)`.
//!
//! Only the logs modulo `G = lcm(gcd(d_i, q-1))` matter. Two engines
//! evaluate them: a table for fields up to [`TorusEngine::table_limit`]
//! elements, and the power map `a -> a^{(q-1)/G}` beyond that.

use crate::arith::{self, gcd};
use crate::field::{FieldSpec, RawScratch};

use super::parallel::{chunked_sum, Parallelism};

/// Smith data of a 2x2 exponent matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonomialLattice {
    pub matrix: [[i64; 2]; 2],
    /// Left unimodular transform `W`.
    pub left: [[i64; 2]; 2],
    pub d1: u64,
    pub d2: u64,
}

impl MonomialLattice {
    pub fn new(matrix: [[i64; 2]; 2]) -> Self {
        let (left, d1, d2) = smith_2x2(matrix);
        MonomialLattice {
            matrix,
            left,
            d1,
            d2,
        }
    }

    /// Lattice of `x^n y^l + y^n + x^l`, normalised by `x^l`.
    pub fn hurwitz(n: u64, l: u64) -> Self {
        let (n, l) = (n as i64, l as i64);
        MonomialLattice::new([[n - l, l], [-l, n]])
    }

    /// Lattice of `u^d + v^d + 1`.
    pub fn fermat(d: u64) -> Self {
        let d = d as i64;
        MonomialLattice::new([[d, 0], [0, d]])
    }

    pub fn determinant(&self) -> i64 {
        let m = self.matrix;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }
}

/// Returns `(W, d1, d2)` with `W M V = diag(d1, d2)` for some unimodular
/// `V`, `d1 | d2`, both nonnegative.
fn smith_2x2(matrix: [[i64; 2]; 2]) -> ([[i64; 2]; 2], u64, u64) {
    let mut a = matrix;
    let mut w = [[1i64, 0], [0, 1]];
    loop {
        // pivot: smallest nonzero absolute value to (0, 0)
        let mut best: Option<(usize, usize)> = None;
        for i in 0..2 {
            for j in 0..2 {
                if a[i][j] != 0
                    && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else {
            return (w, 0, 0);
        };
        if bi == 1 {
            a.swap(0, 1);
            w.swap(0, 1);
        }
        if bj == 1 {
            for row in a.iter_mut() {
                row.swap(0, 1);
            }
        }
        let piv = a[0][0];
        // clear column 0 with row operations (tracked in W)
        let q = a[1][0] / piv;
        for k in 0..2 {
            a[1][k] -= q * a[0][k];
            w[1][k] -= q * w[0][k];
        }
        // clear row 0 with column operations
        let q = a[0][1] / piv;
        for row in a.iter_mut() {
            row[1] -= q * row[0];
        }
        if a[1][0] != 0 || a[0][1] != 0 {
            continue;
        }
        if a[1][1] % piv != 0 {
            // fold row 1 into row 0 and retry
            for k in 0..2 {
                a[0][k] += a[1][k];
                w[0][k] += w[1][k];
            }
            continue;
        }
        for i in 0..2 {
            if a[i][i] < 0 {
                for k in 0..2 {
                    a[i][k] = -a[i][k];
                    w[i][k] = -w[i][k];
                }
            }
        }
        return (w, a[0][0] as u64, a[1][1] as u64);
    }
}

/// Image test for one field, in terms of discrete logs reduced mod
/// `G = lcm(g_1, g_2)`.
#[derive(Clone, Debug)]
struct ImageTest {
    /// `gcd(d_i, q-1)`.
    g: [u64; 2],
    /// Rows of `W` reduced mod `g_i`.
    rows: [[u64; 2]; 2],
    modulus: u64,
    kernel: u64,
}

impl ImageTest {
    fn new(lattice: &MonomialLattice, q: u64) -> Self {
        let n = q - 1;
        let g = [gcd(lattice.d1, n), gcd(lattice.d2, n)];
        let w = lattice.left;
        let red = |x: i64, m: u64| x.rem_euclid(m as i64) as u64;
        ImageTest {
            g,
            rows: [
                [red(w[0][0], g[0]), red(w[0][1], g[0])],
                [red(w[1][0], g[1]), red(w[1][1], g[1])],
            ],
            modulus: arith::lcm(g[0], g[1]),
            kernel: g[0] * g[1],
        }
    }

    /// `ok[la * G + lb]` for logs `la`, `lb` mod `G`.
    fn grid(&self) -> Vec<bool> {
        let big = self.modulus;
        let mut ok = Vec::with_capacity((big * big) as usize);
        for la in 0..big {
            for lb in 0..big {
                ok.push((0..2).all(|i| (self.rows[i][0] * la + self.rows[i][1] * lb).is_multiple_of(self.g[i])));
            }
        }
        ok
    }
}

/// Which evaluation strategy to use for the image test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorusEngine {
    /// Fields with at most this many elements get a table of discrete logs
    /// mod `G` (one byte per element for `G < 256`).
    pub table_limit: u64,
}

impl Default for TorusEngine {
    fn default() -> Self {
        TorusEngine {
            table_limit: 1 << 27,
        }
    }
}

/// Number of `(x, y)` in `(F_q^*)^2` with `A(x, y) + B(x, y) + 1 = 0`.
pub fn count_torus(
    spec: &FieldSpec,
    lattice: &MonomialLattice,
    engine: TorusEngine,
    parallelism: Parallelism,
) -> u64 {
    let q = spec.order().expect("counting fields fit in u64");
    let test = ImageTest::new(lattice, q);
    if test.g == [1, 1] {
        // homomorphism is onto: every (A, -1-A) with both nonzero is hit
        return (q - 2) * test.kernel;
    }
    let hits = if q > engine.table_limit {
        count_with_powers(spec, q, &test, parallelism)
    } else if test.modulus <= u8::MAX as u64 + 1 {
        count_with_table::<u8>(spec, q, &test, parallelism)
    } else if test.modulus <= u16::MAX as u64 + 1 {
        count_with_table::<u16>(spec, q, &test, parallelism)
    } else {
        count_with_table::<u32>(spec, q, &test, parallelism)
    };
    hits * test.kernel
}

/// Index of `-1 - A` given the digits of `A`.
fn minus_one_minus(p: u64, digits: &[u64]) -> u64 {
    let mut idx = 0u64;
    for (i, &a) in digits.iter().enumerate().rev() {
        let b = if i == 0 { (2 * p - 1 - a) % p } else { (p - a) % p };
        idx = idx * p + b;
    }
    idx
}

/// Storage for a discrete log mod `G`.
trait LogCell: Copy + Default + Send + Sync {
    fn from_u64(v: u64) -> Self;
    fn get(self) -> usize;
}

macro_rules! log_cell {
    ($($t:ty),*) => {$(
        impl LogCell for $t {
            fn from_u64(v: u64) -> Self {
                v as $t
            }
            fn get(self) -> usize {
                self as usize
            }
        }
    )*};
}
log_cell!(u8, u16, u32);

fn count_with_table<C: LogCell>(spec: &FieldSpec, q: u64, test: &ImageTest, parallelism: Parallelism) -> u64 {
    let logs: Vec<C> = log_table(spec, q, test.modulus);
    let ok = test.grid();
    let big = test.modulus as usize;
    let p = spec.characteristic();
    let r = spec.degree();
    chunked_sum(1..q, parallelism, |range| {
        let mut digits = vec![0u64; r];
        spec.raw_from_index(range.start, &mut digits);
        let mut hits = 0;
        for idx in range {
            let b = minus_one_minus(p, &digits);
            if b != 0 && ok[logs[idx as usize].get() * big + logs[b as usize].get()] {
                hits += 1;
            }
            // increment base-p digits
            for d in digits.iter_mut() {
                *d += 1;
                if *d < p {
                    break;
                }
                *d = 0;
            }
        }
        hits
    })
}

fn count_with_powers(spec: &FieldSpec, q: u64, test: &ImageTest, parallelism: Parallelism) -> u64 {
    let p = spec.characteristic();
    let r = spec.degree();
    let n = q - 1;
    let big = test.modulus;
    // χ(a) = a^{n/G} lands in the G-th roots of unity ζ^k, ζ = γ^{n/G}
    let gamma = primitive_element(spec, q);
    let mut scratch = spec.scratch();
    let mut zeta = vec![0u64; r];
    spec.raw_pow(&gamma, n / big, &mut zeta, &mut scratch);
    let mut roots = std::collections::HashMap::new();
    let mut z = vec![0u64; r];
    z[0] = 1;
    let mut wide = vec![0u64; 2 * r];
    let mut next = vec![0u64; r];
    for k in 0..big {
        roots.insert(spec.raw_index(&z), k as usize);
        spec.raw_mul(&z, &zeta, &mut next, &mut wide);
        std::mem::swap(&mut z, &mut next);
    }
    let ok = test.grid();
    let exponent = n / big;
    chunked_sum(1..q, parallelism, |range| {
        let mut a = vec![0u64; r];
        let mut b = vec![0u64; r];
        let mut pa = vec![0u64; r];
        let mut pb = vec![0u64; r];
        let mut scratch: RawScratch = spec.scratch();
        let mut hits = 0;
        for idx in range {
            spec.raw_from_index(idx, &mut a);
            let bi = minus_one_minus(p, &a);
            if bi == 0 {
                continue;
            }
            spec.raw_from_index(bi, &mut b);
            spec.raw_pow(&a, exponent, &mut pa, &mut scratch);
            spec.raw_pow(&b, exponent, &mut pb, &mut scratch);
            let la = roots[&spec.raw_index(&pa)];
            let lb = roots[&spec.raw_index(&pb)];
            if ok[la * big as usize + lb] {
                hits += 1;
            }
        }
        hits
    })
}

/// Smallest-index primitive element.
pub(crate) fn primitive_element(spec: &FieldSpec, q: u64) -> Vec<u64> {
    let n = q - 1;
    let primes: Vec<u64> = arith::factorize(n).into_iter().map(|(l, _)| l).collect();
    let r = spec.degree();
    let mut cand = vec![0u64; r];
    let mut out = vec![0u64; r];
    let mut scratch = spec.scratch();
    for idx in 1..q {
        spec.raw_from_index(idx, &mut cand);
        let primitive = primes.iter().all(|&l| {
            spec.raw_pow(&cand, n / l, &mut out, &mut scratch);
            !spec.raw_is_one(&out)
        });
        if primitive {
            return cand;
        }
    }
    unreachable!("multiplicative group of a finite field is cyclic")
}

/// `table[index(γ^k)] = k mod G` for a primitive `γ`; entry 0 is unused.
fn log_table<C: LogCell>(spec: &FieldSpec, q: u64, big: u64) -> Vec<C> {
    let gamma = primitive_element(spec, q);
    let r = spec.degree();
    // the variable t itself is often primitive; multiplying by it is a shift
    let by_t = r >= 2 && gamma[1] == 1 && gamma.iter().enumerate().all(|(i, &c)| i == 1 || c == 0);
    let mut table = vec![C::default(); q as usize];
    let mut x = vec![0u64; r];
    x[0] = 1;
    let mut next = vec![0u64; r];
    let mut wide = vec![0u64; 2 * r];
    let mut k = 0u64;
    for _ in 0..q - 1 {
        table[spec.raw_index(&x) as usize] = C::from_u64(k);
        k += 1;
        if k == big {
            k = 0;
        }
        if by_t {
            spec.raw_mul_by_t(&mut x);
        } else {
            spec.raw_mul(&x, &gamma, &mut next, &mut wide);
            std::mem::swap(&mut x, &mut next);
        }
    }
    table
}
