use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complete elliptic integral of the first kind, `K(k) = π / (2 AGM(1, k'))`.
///
/// Takes the modulus `k` (not the parameter `m = k²`).
pub fn complete_elliptic_k(k: f64) -> Result<f64> {
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::domain(format!("modulus k = {k} must lie in (0, 1)")));
    }
    let kc = ((1.0 - k) * (1.0 + k)).sqrt();
    Ok(k_from_complement(kc))
}

/// `K` evaluated from the complementary modulus `k'`. Used for `K'` where `k'`
/// is known to full precision and `1 - k'²` would lose digits.
pub(crate) fn k_from_complement(kc: f64) -> f64 {
    FRAC_PI_2 / agm(1.0, kc)
}

pub(crate) fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        if (an - bn).abs() <= 1e-16 * an {
            return an;
        }
        a = an;
        b = bn;
    }
    0.5 * (a + b)
}

/// Carlson's symmetric integral `R_F(x, y, z)` for complex arguments
/// (duplication theorem, principal square roots).
pub(crate) fn carlson_rf(x: Complex64, y: Complex64, z: Complex64) -> Complex64 {
    let (mut x, mut y, mut z) = (x, y, z);
    for _ in 0..200 {
        let a = (x + y + z) / 3.0;
        let scale = a.norm().max(1e-300);
        let dx = (a - x).norm() / scale;
        let dy = (a - y).norm() / scale;
        let dz = (a - z).norm() / scale;
        if dx.max(dy).max(dz) < 1e-4 {
            break;
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sx * sz + sy * sz;
        x = (x + lambda) * 0.25;
        y = (y + lambda) * 0.25;
        z = (z + lambda) * 0.25;
    }
    let a = (x + y + z) / 3.0;
    let dx = (a - x) / a;
    let dy = (a - y) / a;
    let dz = -(dx + dy);
    let e2 = dx * dy - dz * dz;
    let e3 = dx * dy * dz;
    (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - e2 * e3 * (3.0 / 44.0)) / a.sqrt()
}
