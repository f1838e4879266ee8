//! Independent reference computations used by the integration tests.
//!
//! Nothing here goes through the library's Clebsch-Gordan embedding or its
//! eigen-solvers: spin states are expanded into explicit symmetric N-qubit
//! vectors and reduced by brute force.

#![allow(dead_code)]

use kicktop::linalg::{CMatrix, C64};
use kicktop::SpinState;

pub fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub fn binomial(n: u32, k: u32) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Expands a spin-`j` state (amplitudes over m ascending) into the symmetric
/// subspace of `N = 2j` qubits. Bit value 1 is spin up; qubit 0 is the most
/// significant bit.
pub fn symmetric_qubit_vector(state: &SpinState) -> Vec<C64> {
    let n = state.dim() as u32 - 1;
    let mut out = vec![C64::new(0.0, 0.0); 1 << n];
    for (idx, slot) in out.iter_mut().enumerate() {
        let ups = (idx as u32).count_ones();
        // basis index k = j + m = number of up spins
        let dicke_norm = binomial(n, ups).sqrt();
        *slot = state.amplitudes()[ups as usize] / dicke_norm;
    }
    out
}

/// Reduced state of qubit 0 as `[[up,up],[up,down];[down,up],[down,down]]`.
pub fn first_qubit_marginal(psi: &[C64], n_qubits: u32) -> [[C64; 2]; 2] {
    let half = 1usize << (n_qubits - 1);
    let mut rho = [[C64::new(0.0, 0.0); 2]; 2];
    // up = leading bit 1 -> offset `half`
    let offsets = [half, 0];
    for a in 0..2 {
        for b in 0..2 {
            let mut acc = C64::new(0.0, 0.0);
            for r in 0..half {
                acc += psi[offsets[a] + r] * psi[offsets[b] + r].conj();
            }
            rho[a][b] = acc;
        }
    }
    rho
}

/// Eigenvalues of a 2x2 Hermitian matrix (closed form).
pub fn eig2(rho: [[C64; 2]; 2]) -> (f64, f64) {
    let a = rho[0][0].re;
    let d = rho[1][1].re;
    let b = rho[0][1].norm();
    let mid = 0.5 * (a + d);
    let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    (mid + rad, mid - rad)
}

/// Pure-state negativity across qubit 0 versus the rest, `sqrt(l1 l2)`.
pub fn brute_force_negativity(state: &SpinState) -> f64 {
    let n = state.dim() as u32 - 1;
    let psi = symmetric_qubit_vector(state);
    let (l1, l2) = eig2(first_qubit_marginal(&psi, n));
    // sqrt amplifies rounding in an eigenvalue that should vanish
    let floor = |l: f64| if l < 1e-14 { 0.0 } else { l };
    (floor(l1) * floor(l2)).sqrt()
}

/// Linear entropy `1 - Tr(rho_A^2)` of qubit 0.
pub fn brute_force_linear_entropy(state: &SpinState) -> f64 {
    let n = state.dim() as u32 - 1;
    let rho = first_qubit_marginal(&symmetric_qubit_vector(state), n);
    let tr2: f64 = rho.iter().flatten().map(|z| z.norm_sqr()).sum();
    1.0 - tr2
}

/// Wigner small-d `d^j_{m' m}(beta)` from the explicit factorial sum.
pub fn wigner_small_d(twice_j: u32, twice_mp: i32, twice_m: i32, beta: f64) -> f64 {
    let tj = twice_j as i32;
    let jpmp = ((tj + twice_mp) / 2) as u32;
    let jmmp = ((tj - twice_mp) / 2) as u32;
    let jpm = ((tj + twice_m) / 2) as u32;
    let jmm = ((tj - twice_m) / 2) as u32;
    let mp_minus_m = (twice_mp - twice_m) / 2;
    let pref = (factorial(jpmp) * factorial(jmmp) * factorial(jpm) * factorial(jmm)).sqrt();
    let (s, c) = (0.5 * beta).sin_cos();
    let mut total = 0.0;
    for k in 0..=tj {
        let a = jpm as i32 - k;
        let b = mp_minus_m + k;
        let d = jmmp as i32 - k;
        if a < 0 || b < 0 || d < 0 {
            continue;
        }
        let sign = if (mp_minus_m + k) % 2 == 0 { 1.0 } else { -1.0 };
        let denom = factorial(a as u32) * factorial(k as u32) * factorial(b as u32) * factorial(d as u32);
        let cos_pow = tj + (twice_m - twice_mp) / 2 - 2 * k;
        let sin_pow = mp_minus_m + 2 * k;
        total += sign / denom * c.powi(cos_pow) * s.powi(sin_pow);
    }
    pref * total
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
