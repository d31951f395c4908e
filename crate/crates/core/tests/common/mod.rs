//! Oracles shared by the integration suites.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// `C_0..C_upto` by Newton's identities from `P_s = q^s + 1 - N_s`:
/// `k e_k = Σ_{i=1}^k (-1)^{i-1} e_{k-i} P_i`, `C_k = (-1)^k e_k`.
pub fn newton_identity_coefficients(counts: &[u64], q: u64, upto: usize) -> Vec<BigInt> {
    let qb = BigInt::from(q);
    let power_sums: Vec<BigInt> = (1..=upto)
        .map(|s| num_traits::pow(qb.clone(), s) + 1 - BigInt::from(counts[s - 1]))
        .collect();
    let mut e: Vec<BigInt> = vec![BigInt::one()];
    for k in 1..=upto {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            let term = &e[k - i] * &power_sums[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        assert!((&acc % BigInt::from(k)).is_zero(), "Newton identity not integral at k={k}");
        e.push(acc / BigInt::from(k));
    }
    e.iter()
        .enumerate()
        .map(|(k, ek)| if k % 2 == 0 { ek.clone() } else { -ek })
        .collect()
}
