//! Complete elliptic integrals `K(k)` and `E(k)` of modulus `k`, by the
//! arithmetic-geometric mean.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

const AGM_TOL: f64 = 1e-16;
const AGM_MAX_ITER: usize = 60;

/// `(K, E)` from the complementary modulus `kc = sqrt(1 - k^2)`, `0 < kc <= 1`.
///
/// Passing `kc` directly avoids forming `1 - k^2` when `k` is close to 1.
pub fn elliptic_ke_complement(kc: f64) -> Result<(f64, f64)> {
    if !(kc > 0.0 && kc <= 1.0) {
        return Err(Error::EllipticModulus((1.0 - kc * kc).max(0.0).sqrt()));
    }
    let mut a = 1.0f64;
    let mut b = kc;
    let c0 = (1.0 - kc) * (1.0 + kc);
    let mut c_sq = c0;
    let mut sum = 0.5 * c0;
    let mut pow = 0.5;
    for _ in 0..AGM_MAX_ITER {
        if c_sq.sqrt() <= AGM_TOL * a {
            break;
        }
        let a_next = 0.5 * (a + b);
        let c_next = c_sq / (4.0 * a_next);
        b = (a * b).sqrt();
        a = a_next;
        c_sq = c_next * c_next;
        pow *= 2.0;
        sum += pow * c_sq;
    }
    let k = FRAC_PI_2 / a;
    Ok((k, k * (1.0 - sum)))
}

fn check_modulus(k: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::EllipticModulus(k));
    }
    Ok(())
}

fn complement(k: f64) -> f64 {
    ((1.0 - k) * (1.0 + k)).sqrt()
}

/// `K(k)` for `0 <= k < 1`.
pub fn elliptic_k(k: f64) -> Result<f64> {
    check_modulus(k)?;
    if k == 1.0 {
        return Err(Error::EllipticModulus(k));
    }
    Ok(elliptic_ke_complement(complement(k))?.0)
}

/// `E(k)` for `0 <= k <= 1`.
pub fn elliptic_e(k: f64) -> Result<f64> {
    check_modulus(k)?;
    if k == 1.0 {
        return Ok(1.0);
    }
    Ok(elliptic_ke_complement(complement(k))?.1)
}

/// `(K(k), E(k))` for `0 <= k < 1`.
pub fn elliptic_ke(k: f64) -> Result<(f64, f64)> {
    check_modulus(k)?;
    if k == 1.0 {
        return Err(Error::EllipticModulus(k));
    }
    elliptic_ke_complement(complement(k))
}
