//! Wigner D-matrices and angular-momentum generators for integer `l`.
//!
//! Convention (active z-y-z Euler angles):
//! `D^l_{m'm}(alpha, beta, gamma) = exp(-i m' alpha) d^l_{m'm}(beta) exp(-i m gamma)`,
//! rows and columns indexed by `m', m = -l..l` (ascending, so matrix row `0`
//! is `m' = -l`). This pins the two convention checks
//! `D^{l*}(z, phi)|w> = e^{i w phi}|w>` and
//! `D^{l*}(y, pi)|w> = (-1)^{l+w}|-w>`.
//!
//! The little-d matrix is evaluated through the cached eigendecomposition
//! of `L_y` (stable at large `l`); the factorial-sum formula and an
//! exact-rational evaluator are kept as cross-check oracles.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::rotation::Rotation;
use crate::Error;

/// Largest `l` accepted by default; regularized sums at the smallest damping
/// in use need tails `exp(-Delta l (l+1)) < 1e-12`, reached well below this.
pub const L_CAP: usize = 128;

/// One `(2l+1) x (2l+1)` Wigner block `D^l(g)`.
#[derive(Debug, Clone)]
pub struct WignerBlock {
    pub ell: usize,
    /// Rows `m' = -l..l`, columns `m = -l..l`, both ascending.
    pub matrix: DMatrix<Complex64>,
}

/// The three angular-momentum generators at fixed `l`, with
/// `D^l(z-rotation by phi) = exp(-i phi L_z)`.
#[derive(Debug, Clone)]
pub struct MomentumGenerators {
    pub ell: usize,
    pub lx: DMatrix<Complex64>,
    pub ly: DMatrix<Complex64>,
    pub lz: DMatrix<Complex64>,
}

impl MomentumGenerators {
    /// The generator for a named axis, `a` in `{0: x, 1: y, 2: z}`.
    pub fn axis(&self, a: usize) -> &DMatrix<Complex64> {
        match a {
            0 => &self.lx,
            1 => &self.ly,
            2 => &self.lz,
            _ => panic!("axis index must be 0, 1 or 2"),
        }
    }
}

fn check_ell(ell: usize) -> Result<(), Error> {
    if ell > L_CAP {
        return Err(Error::EllCap { ell, cap: L_CAP });
    }
    Ok(())
}

/// Natural log of `n!` via `lgamma`.
fn ln_fact(n: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    statrs_lgamma(n as f64 + 1.0)
}

/// Lanczos approximation of `ln Gamma(x)` for `x >= 1`; accurate to ~1e-13
/// relative, which keeps little-d entries accurate to ~1e-10 for `l <= 128`.
fn statrs_lgamma(x: f64) -> f64 {
    // Godfrey's Lanczos coefficients (g = 7, n = 9).
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    debug_assert!(x >= 1.0);
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + G + 0.5;
    for (i, &c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Little-d matrix `d^l_{m'm}(beta) = exp(-i beta L_y)`, evaluated through
/// the (cached) eigendecomposition of `L_y`. The eigenvalues are snapped to
/// their exact integer values `m`, so the result stays accurate at large
/// `l`, where the textbook factorial-sum formula loses digits to
/// cancellation (see [`little_d_sum`]).
pub fn little_d(ell: usize, beta: f64) -> DMatrix<f64> {
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<usize, DMatrix<Complex64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let u = {
        let mut map = cache.lock().expect("little_d cache");
        map.entry(ell)
            .or_insert_with(|| {
                // Eigenvectors of L_y, columns ordered by ascending
                // eigenvalue (which is exactly m = -l..l).
                let ly = generators(ell).expect("l below cap").ly;
                let eig = nalgebra::linalg::SymmetricEigen::new(ly);
                let mut order: Vec<usize> = (0..2 * ell + 1).collect();
                order.sort_by(|&a, &b| {
                    eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap()
                });
                eig.eigenvectors.select_columns(order.iter())
            })
            .clone()
    };
    let n = 2 * ell + 1;
    let l = ell as i64;
    let phases =
        DVector::from_fn(n, |k, _| Complex64::from_polar(1.0, -beta * (k as i64 - l) as f64));
    let exp = &u * DMatrix::from_diagonal(&phases) * u.adjoint();
    // d^l(beta) is real in this convention; the imaginary residue is
    // eigensolver roundoff.
    exp.map(|z| z.re)
}

/// Textbook factorial-sum evaluation of `d^l_{m'm}(beta)` (reference
/// implementation; suffers cancellation at large `l`).
pub fn little_d_sum(ell: usize, beta: f64) -> DMatrix<f64> {
    let n = 2 * ell + 1;
    let (sb, cb) = (beta / 2.0).sin_cos();
    // Signs handled separately from log-magnitudes so half-angle zeros are exact.
    let mut d = DMatrix::zeros(n, n);
    let l = ell as i64;
    for mp in -l..=l {
        for m in -l..=l {
            let kmin = 0.max(m - mp);
            let kmax = (l + m).min(l - mp);
            let mut acc = 0.0f64;
            for k in kmin..=kmax {
                let ln_num = 0.5
                    * (ln_fact((l + m) as usize)
                        + ln_fact((l - m) as usize)
                        + ln_fact((l + mp) as usize)
                        + ln_fact((l - mp) as usize));
                let ln_den = ln_fact((l + m - k) as usize)
                    + ln_fact(k as usize)
                    + ln_fact((mp - m + k) as usize)
                    + ln_fact((l - mp - k) as usize);
                let pc = 2 * l + m - mp - 2 * k; // power of cos(beta/2)
                let ps = mp - m + 2 * k; // power of sin(beta/2)
                if (pc > 0 && cb == 0.0) || (ps > 0 && sb == 0.0) {
                    continue;
                }
                let ln_mag = ln_num - ln_den
                    + pc as f64 * cb.abs().max(f64::MIN_POSITIVE).ln()
                    + ps as f64 * sb.abs().max(f64::MIN_POSITIVE).ln();
                let mut sign = if (mp - m + k) % 2 != 0 { -1.0 } else { 1.0 };
                if cb < 0.0 && pc % 2 != 0 {
                    sign = -sign;
                }
                if sb < 0.0 && ps % 2 != 0 {
                    sign = -sign;
                }
                acc += sign * ln_mag.exp();
            }
            d[((mp + l) as usize, (m + l) as usize)] = acc;
        }
    }
    d
}

/// Exact-rational little-d oracle: evaluates the factorial-sum formula with
/// exact arithmetic, given exact rational `cos(beta/2)` and `sin(beta/2)`.
///
/// Intended for cross-checking [`little_d`] at Pythagorean angles
/// (`cos^2 + sin^2 = 1`); feasible for `l <= ~10`.
pub fn little_d_exact(
    ell: usize,
    cos_half: &BigRational,
    sin_half: &BigRational,
) -> Vec<Vec<BigRational>> {
    fn fact(n: i64) -> BigInt {
        (1..=n).fold(BigInt::one(), |a, k| a * k)
    }
    fn pow(b: &BigRational, p: i64) -> BigRational {
        (0..p).fold(BigRational::one(), |a, _| a * b)
    }
    let l = ell as i64;
    let mut rows = Vec::new();
    for mp in -l..=l {
        let mut row = Vec::new();
        for m in -l..=l {
            let kmin = 0.max(m - mp);
            let kmax = (l + m).min(l - mp);
            // The entry factors as sqrt(N) * sum_k term_k with N the integer
            // of [`little_d_prefactor_sq`] and every term_k rational; only
            // the rational sum is returned here, so the value stays exact.
            let mut acc = BigRational::zero();
            for k in kmin..=kmax {
                let den = fact(l + m - k) * fact(k) * fact(mp - m + k) * fact(l - mp - k);
                let pc = 2 * l + m - mp - 2 * k;
                let ps = mp - m + 2 * k;
                let mut term = BigRational::new(BigInt::one(), den);
                term *= pow(cos_half, pc) * pow(sin_half, ps);
                if (mp - m + k) % 2 != 0 {
                    term = -term;
                }
                acc += term;
            }
            row.push(acc);
        }
        rows.push(row);
    }
    rows
}

/// The integer under the square root of the little-d prefactor:
/// `(l+m)! (l-m)! (l+m')! (l-m')!`.
pub fn little_d_prefactor_sq(ell: usize, mp: i64, m: i64) -> BigInt {
    fn fact(n: i64) -> BigInt {
        (1..=n).fold(BigInt::one(), |a, k| a * k)
    }
    let l = ell as i64;
    fact(l + m) * fact(l - m) * fact(l + mp) * fact(l - mp)
}

/// The full Wigner block `D^l(g)`.
pub fn wigner_d(ell: usize, g: &Rotation) -> Result<WignerBlock, Error> {
    check_ell(ell)?;
    let (alpha, beta, gamma) = g.to_euler();
    let d = little_d(ell, beta);
    let n = 2 * ell + 1;
    let l = ell as i64;
    let mut matrix = DMatrix::zeros(n, n);
    for mp in -l..=l {
        let pa = Complex64::from_polar(1.0, -(mp as f64) * alpha);
        for m in -l..=l {
            let pg = Complex64::from_polar(1.0, -(m as f64) * gamma);
            matrix[((mp + l) as usize, (m + l) as usize)] =
                pa * pg * d[((mp + l) as usize, (m + l) as usize)];
        }
    }
    Ok(WignerBlock { ell, matrix })
}

/// Entry-wise complex conjugate block `D^{l*}(g)` (the representation that
/// decomposes as a direct sum of group irreps on molecule-based actions).
pub fn wigner_d_conj(ell: usize, g: &Rotation) -> Result<WignerBlock, Error> {
    let mut block = wigner_d(ell, g)?;
    block.matrix = block.matrix.map(|z| z.conj());
    Ok(block)
}

/// Character of `D^l` at rotation angle `theta`:
/// `sin((l + 1/2) theta) / sin(theta / 2)` (Dirichlet kernel).
pub fn character(ell: usize, theta: f64) -> f64 {
    let half = (theta / 2.0).rem_euclid(std::f64::consts::PI);
    if half.sin().abs() < 1e-9 {
        // theta ~ 0 mod 2pi: full dimension (the kernel's removable limit).
        return (2 * ell + 1) as f64;
    }
    (((ell as f64) + 0.5) * theta).sin() / (theta / 2.0).sin()
}

/// Angular-momentum generators at level `l`.
pub fn generators(ell: usize) -> Result<MomentumGenerators, Error> {
    check_ell(ell)?;
    let n = 2 * ell + 1;
    let l = ell as i64;
    let mut lz = DMatrix::zeros(n, n);
    let mut lp = DMatrix::zeros(n, n); // raising operator L+
    for m in -l..=l {
        lz[((m + l) as usize, (m + l) as usize)] = Complex64::new(m as f64, 0.0);
        if m < l {
            let val = ((l * (l + 1) - m * (m + 1)) as f64).sqrt();
            lp[((m + 1 + l) as usize, (m + l) as usize)] = Complex64::new(val, 0.0);
        }
    }
    let lm = lp.adjoint();
    let lx = (&lp + &lm).scale(0.5);
    let ly = (&lp - &lm) * Complex64::new(0.0, -0.5);
    Ok(MomentumGenerators { ell, lx, ly, lz })
}
