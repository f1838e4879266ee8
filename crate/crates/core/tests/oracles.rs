//! Operation examples checked against independent reference computations.

mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use kicktop::classical::{classical_step, inverse_step, ClassicalPoint};
use kicktop::entanglement::{
    embed_qubit_rest, linear_entropy, negativity, pure_negativity, reduced_qubit,
    state_linear_entropy,
};
use kicktop::linalg::{c, max_abs_diff, CMatrix, C64};
use kicktop::open_system::{
    lindblad_superoperator, twist_hamiltonian, DecoherenceParams, JumpSet, OpenKickedTop,
};
use kicktop::quantum::{evolve, FloquetSpectrum};
use kicktop::{
    AngularMomentumOps, DensityMatrix, Expectation, FloquetOperator, SphericalCoord, SpinQuantum,
    TopParams,
};

use common::*;

fn spin4() -> (SpinQuantum, AngularMomentumOps) {
    let s = SpinQuantum::from_twice(8);
    (s, AngularMomentumOps::new(s))
}

#[test]
fn rotations_match_wigner_small_d() {
    for twice_j in 1..=4u32 {
        let spin = SpinQuantum::from_twice(twice_j);
        let ops = AngularMomentumOps::new(spin);
        for beta in [0.3, 1.7, 2.9] {
            let r = ops.rotation([0.0, 1.0, 0.0], beta);
            for row in 0..spin.dim() {
                for col in 0..spin.dim() {
                    let tmp = 2 * row as i32 - twice_j as i32;
                    let tm = 2 * col as i32 - twice_j as i32;
                    let d = wigner_small_d(twice_j, tmp, tm, beta);
                    assert!(
                        (r[(row, col)] - c(d)).norm() < 1e-12,
                        "j={} beta={beta} ({row},{col}): {} vs {d}",
                        spin.j(),
                        r[(row, col)]
                    );
                }
            }
        }
    }
}

#[test]
fn coherent_state_mean_spin_closed_form() {
    let (spin, ops) = spin4();
    let psi = ops.coherent_state(SphericalCoord::new(2.25, 2.5).unwrap());
    // 4 sin(2.25) cos(2.5), 4 sin(2.25) sin(2.5), 4 cos(2.25)
    let expected = [-2.4933934964598015, 1.8626205376453366, -2.5126944908909565];
    for (op, e) in [&ops.jx, &ops.jy, &ops.jz].into_iter().zip(expected) {
        assert!((psi.expectation(op).unwrap() - e).abs() < 1e-9);
    }
    let psi = ops.coherent_state(SphericalCoord::new(2.25, 1.1).unwrap());
    assert!((psi.expectation(&ops.jz).unwrap() - 4.0 * 2.25f64.cos()).abs() < 1e-9);
    assert!((psi.expectation(&ops.jz).unwrap() + 2.512).abs() < 1e-3);
    assert_eq!(spin.dim(), 9);
}

#[test]
fn resolution_of_identity() {
    let (spin, ops) = spin4();
    let (nodes, weights) = gauss_legendre(64);
    let n_phi = 128;
    let mut acc = CMatrix::zeros(9, 9);
    for (x, w) in nodes.iter().zip(&weights) {
        for k in 0..n_phi {
            let phi = 2.0 * PI * k as f64 / n_phi as f64;
            let psi = ops.coherent_state(SphericalCoord::new(x.acos(), phi).unwrap());
            acc += psi.projector() * c(w * 2.0 * PI / n_phi as f64);
        }
    }
    acc *= c(spin.dim() as f64 / (4.0 * PI));
    assert!(max_abs_diff(&acc, &CMatrix::identity(9, 9)) < 1e-6);
}

#[test]
fn classical_step_line_by_line() {
    let p = TopParams::new(SpinQuantum::from_twice(8), 3.0, FRAC_PI_3).unwrap();
    let out = classical_step(ClassicalPoint::new(0.0, 0.0, 1.0), &p);
    // independent evaluation of the five-line map
    let expected = ClassicalPoint::new(0.8660254037844386, -0.2585744448672246, -0.4279477263190059);
    assert!(out.distance(&expected) < 1e-14);
    assert!(inverse_step(out, &p).distance(&ClassicalPoint::new(0.0, 0.0, 1.0)) < 1e-14);
}

#[test]
fn floquet_eigenphases_match_trace_power_sums() {
    // sum_n e^{i k w_n} = Tr(U^k) for k = 1..dim pins down the whole spectrum
    let params = TopParams::new(SpinQuantum::from_twice(8), 3.0, FRAC_PI_2).unwrap();
    let f = FloquetOperator::new(params).unwrap();
    let spec = FloquetSpectrum::new(&f).unwrap();
    let mut power = CMatrix::identity(9, 9);
    for k in 1..=9 {
        power = &power * f.matrix();
        let from_spectrum: C64 = spec
            .omegas()
            .iter()
            .map(|&w| C64::from_polar(1.0, k as f64 * w))
            .sum();
        assert!((from_spectrum - power.trace()).norm() < 1e-9, "k = {k}");
    }
    let omegas = spec.omegas();
    assert!(omegas.windows(2).all(|w| w[1] - w[0] > 1e-6), "spectrum should be non-degenerate");
    assert!(omegas.iter().all(|&w| w > -PI && w <= PI));
}

#[test]
fn floquet_spectrum_matches_hermitian_pencil() {
    // second route: diagonalize (U + U^dag)/2 + g (U - U^dag)/(2i) for an
    // irrational g, whose eigenvectors are those of the normal matrix U
    let params = TopParams::new(SpinQuantum::from_twice(8), 3.0, FRAC_PI_2).unwrap();
    let f = FloquetOperator::new(params).unwrap();
    let u = f.matrix();
    let g = std::f64::consts::SQRT_2;
    let h = (u + u.adjoint()) * c(0.5) + (u - u.adjoint()) * C64::new(0.0, -0.5 * g);
    let eig = nalgebra::SymmetricEigen::new(h);
    let mut phases: Vec<f64> = (0..9)
        .map(|k| {
            let v = eig.eigenvectors.column(k);
            v.dotc(&(u * v)).arg()
        })
        .collect();
    phases.sort_by(f64::total_cmp);
    let spec = FloquetSpectrum::new(&f).unwrap();
    for (a, b) in phases.iter().zip(spec.omegas()) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn rotation_spectrum_eigenvectors_live_in_jy_eigenspaces() {
    let params = TopParams::new(SpinQuantum::from_twice(8), 0.0, FRAC_PI_2).unwrap();
    let f = FloquetOperator::new(params).unwrap();
    let spec = FloquetSpectrum::new(&f).unwrap();
    let (jy_vals, jy_vecs) = kicktop::linalg::hermitian_eigen(&f.ops().jy);
    for n in 0..9 {
        let v = spec.vectors().column(n);
        for (k, &m) in jy_vals.iter().enumerate() {
            let weight = jy_vecs.column(k).dotc(&v).norm();
            let phase = kicktop::quantum::principal_phase(-FRAC_PI_2 * m);
            if weight > 1e-8 {
                assert!((phase - spec.omegas()[n]).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn dicke_states_against_qubit_brute_force() {
    let (spin, ops) = spin4();
    for twice_m in (-8..=8).step_by(2) {
        let m = twice_m as f64 / 2.0;
        let psi = spin.dicke(m).unwrap();
        let s = state_linear_entropy(&psi, &ops).unwrap();
        let n = pure_negativity(&psi, spin).unwrap();
        assert!((s - brute_force_linear_entropy(&psi)).abs() < 1e-9);
        assert!((n - brute_force_negativity(&psi)).abs() < 1e-9);
        assert!((s - 0.5 * (1.0 - m * m / 16.0)).abs() < 1e-9);
        assert!((n - (16.0 - m * m).sqrt() / 8.0).abs() < 1e-9);
    }
}

#[test]
fn dicke_m_zero_embeds_with_equal_schmidt_weights() {
    let (spin, _) = spin4();
    let rho = DensityMatrix::pure(&spin.dicke(0.0).unwrap());
    let marginal = embed_qubit_rest(&rho, spin).unwrap().qubit_marginal();
    assert!((marginal[(0, 0)] - c(0.5)).norm() < 1e-12);
    assert!((marginal[(1, 1)] - c(0.5)).norm() < 1e-12);
    assert!(marginal[(0, 1)].norm() < 1e-12);
}

#[test]
fn reduced_qubit_matches_brute_force_marginal() {
    let (spin, ops) = spin4();
    let f = FloquetOperator::new(TopParams::new(spin, 3.0, FRAC_PI_2).unwrap()).unwrap();
    let psi0 = ops.coherent_state(SphericalCoord::new(2.25, 1.1).unwrap());
    for psi in evolve(&psi0, &f, 12).unwrap() {
        let q = reduced_qubit(&psi, &ops).unwrap();
        let brute = first_qubit_marginal(&symmetric_qubit_vector(&psi), 8);
        for (a, row) in brute.iter().enumerate() {
            for (b, z) in row.iter().enumerate() {
                assert!((q.rho2[(a, b)] - z).norm() < 1e-12);
            }
        }
        let s = linear_entropy(
            [
                psi.expectation(&ops.jx).unwrap(),
                psi.expectation(&ops.jy).unwrap(),
                psi.expectation(&ops.jz).unwrap(),
            ],
            spin,
        )
        .unwrap();
        assert!((s - brute_force_linear_entropy(&psi)).abs() < 1e-10);
        let n = negativity(&DensityMatrix::pure(&psi), spin).unwrap();
        assert!((n - brute_force_negativity(&psi)).abs() < 1e-9);
    }
}

#[test]
fn lindblad_channel_is_cptp() {
    let (_, ops) = spin4();
    let h = twist_hamiltonian(&ops, 3.0);
    let jumps = JumpSet::isotropic(3.0 / 65.6, &ops).unwrap();
    let generator = lindblad_superoperator(&h, &jumps).unwrap();
    assert!(generator.trace_defect_generator() < 1e-10);
    let channel = generator.exp(1.0);
    assert!(channel.choi_min_eigenvalue() > -1e-9);
    // trace preservation of the channel itself: vec(1)^dag M = vec(1)^dag
    let id = kicktop::linalg::vectorize(&CMatrix::identity(9, 9));
    let row = id.adjoint() * channel.matrix();
    assert!((row.transpose() - id).norm() < 1e-10);
}

#[test]
fn closed_open_system_matches_unitary_evolution() {
    let (spin, ops) = spin4();
    let params = TopParams::new(spin, 3.0, FRAC_PI_2).unwrap();
    let open = OpenKickedTop::new(params, DecoherenceParams::closed()).unwrap();
    let f = FloquetOperator::new(params).unwrap();
    let psi0 = ops.coherent_state(SphericalCoord::new(2.25, 2.5).unwrap());
    let rhos = open.run(&DensityMatrix::pure(&psi0), 40).unwrap();
    let psis = evolve(&psi0, &f, 40).unwrap();
    for (rho, psi) in rhos.iter().zip(&psis) {
        assert!(max_abs_diff(rho.matrix(), &psi.projector()) < 1e-9);
    }
}

#[test]
fn quantum_classical_one_kick_large_j() {
    let spin = SpinQuantum::new(50.0).unwrap();
    let params = TopParams::new(spin, 1.0, FRAC_PI_2).unwrap();
    let f = FloquetOperator::new(params).unwrap();
    let ops = f.ops();
    let dir = SphericalCoord::new(2.25, 1.1).unwrap();
    let psi1 = f.coherent_state(dir).apply(f.matrix());
    let quantum = [&ops.jx, &ops.jy, &ops.jz].map(|op| psi1.expectation(op).unwrap() / 50.0);
    let classical = classical_step(ClassicalPoint::from_spherical(dir), &params);
    for (q, cl) in quantum.iter().zip(classical.as_array()) {
        assert!((q - cl).abs() < 0.05, "quantum {q} vs classical {cl}");
    }
}
