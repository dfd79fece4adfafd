use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use qcentral_core::centralizer::{
    self, random_parameters, random_unit_vector, LocalFactor, LocalUnitarySpec,
};
use qcentral_core::oracle;
use qcentral_core::pauli::{coeffs_to_dense, dense_to_coeffs, hs_inner, DenseOperator};
use qcentral_core::reduction::{self, bloch_of, decompose, partial_trace_single};
use qcentral_core::states::{self, make_product, purity, random_density_with_rank};
use qcentral_core::{BlochVector, DensityState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_state(n: usize, seed: u64) -> DensityState {
    let mut r = rng(seed);
    let rank = r.gen_range(1..=1usize << n);
    random_density_with_rank(n, rank, &mut r).unwrap()
}

fn random_spec(n: usize, r: &mut ChaCha8Rng) -> LocalUnitarySpec {
    let factors = (0..n)
        .map(|_| LocalFactor::new(random_unit_vector(r), r.gen_range(-4.0..4.0)).unwrap())
        .collect();
    LocalUnitarySpec::new(factors).unwrap()
}

fn random_hermitian(n: usize, r: &mut ChaCha8Rng) -> DenseOperator {
    let dim = 1 << n;
    let g = DMatrix::from_fn(dim, dim, |_, _| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)));
    DenseOperator::new(&g + g.adjoint()).unwrap()
}

fn bloch_in_ball(r: &mut ChaCha8Rng) -> [f64; 3] {
    let v = random_unit_vector(r);
    let len = r.gen_range(0.0f64..1.0).cbrt();
    v.map(|x| x * len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dense_roundtrip(n in 1usize..=6, seed in any::<u64>()) {
        let op = random_hermitian(n, &mut rng(seed));
        let back = coeffs_to_dense(&dense_to_coeffs(&op).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&op) < 1e-10);
    }

    #[test]
    fn fast_coefficients_match_direct_traces(n in 1usize..=4, seed in any::<u64>()) {
        let op = random_hermitian(n, &mut rng(seed));
        let fast = dense_to_coeffs(&op).unwrap();
        let slow = oracle::dense_pauli_coefficients(&op).unwrap();
        for (a, b) in fast.coeffs().iter().zip(&slow) {
            prop_assert!((a - b.re).abs() < 1e-12 && b.im.abs() < 1e-12);
        }
    }

    #[test]
    fn reductions_match_dense_partial_trace(n in 2usize..=6, seed in any::<u64>()) {
        let rho = random_state(n, seed);
        let dense = rho.to_dense().unwrap();
        for q in 1..=n {
            let fast = partial_trace_single(&rho, q).unwrap();
            let slow = oracle::dense_partial_trace(&dense, q).unwrap();
            prop_assert!((fast.reduced_matrix() - slow).iter().all(|z| z.norm() < 1e-10));
            prop_assert!(fast.norm() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn product_reductions_reproduce_inputs(n in 1usize..=6, seed in any::<u64>()) {
        let mut r = rng(seed);
        let list: Vec<[f64; 3]> = (0..n).map(|_| bloch_in_ball(&mut r)).collect();
        let rho = make_product(&list).unwrap();
        for (q, expected) in list.iter().enumerate() {
            let got = partial_trace_single(&rho, q + 1).unwrap();
            for (g, e) in got.r.iter().zip(expected) {
                prop_assert!((g - e).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn purity_bounds_and_idempotency(n in 1usize..=5, seed in any::<u64>()) {
        let rho = random_state(n, seed);
        let p = purity(&rho);
        prop_assert!(p >= 1.0 / (1u64 << n) as f64 - 1e-12 && p <= 1.0 + 1e-9);
        let dense = rho.to_dense().unwrap();
        let sq = dense.matrix() * dense.matrix();
        let idempotent = (sq - dense.matrix()).iter().all(|z| z.norm() < 1e-8);
        prop_assert_eq!((p - 1.0).abs() < 1e-9, idempotent);
        prop_assert!((p - oracle::dense_purity(&dense)).abs() < 1e-12);
    }

    #[test]
    fn projection_and_kernel(n in 2usize..=5, seed in any::<u64>()) {
        let rho = random_state(n, seed);
        let dense = rho.to_dense().unwrap();
        for q in 1..=n {
            let proj = reduction::project_q(&rho, q).unwrap();
            prop_assert_eq!(bloch_of(&proj.state, q).unwrap(), partial_trace_single(&rho, q).unwrap());
            // dense form is 2^{-(n-1)} 1 ⊗ … ⊗ ρ_i ⊗ … ⊗ 1
            let rho_i = oracle::dense_partial_trace(&dense, q).unwrap();
            let mut factors = vec![qcentral_core::Matrix2c::identity(); n];
            factors[q - 1] = rho_i;
            let expected = oracle::kron_all(&factors) / Complex64::new((1u64 << (n - 1)) as f64, 0.0);
            let got = coeffs_to_dense(&proj.state).unwrap();
            prop_assert!((got.matrix() - expected).iter().all(|z| z.norm() < 1e-12));

            let k = reduction::kernel_component(&rho, q).unwrap();
            let traced = oracle::dense_partial_trace(&coeffs_to_dense(&k).unwrap(), q).unwrap();
            prop_assert!(traced.iter().all(|z| z.norm() < 1e-12));
        }
    }

    #[test]
    fn decomposition_orthogonality_and_norms(n in 1usize..=5, seed in any::<u64>()) {
        let rho = random_state(n, seed);
        let d = decompose(&rho);
        prop_assert_eq!(&d.recompose(), rho.state());
        for ti in &d.translated {
            for tj in &d.translated {
                let ip = hs_inner(&ti.state, &tj.state).unwrap();
                let expected = if ti.qubit == tj.qubit { hs_inner(&ti.state, &ti.state).unwrap() } else { 0.0 };
                prop_assert!((ip - expected).abs() < 1e-12);
            }
            prop_assert_eq!(hs_inner(&ti.state, &d.delta).unwrap(), 0.0);
            let (lo, hi) = ti.eigen_pair;
            prop_assert!((ti.norm() - (lo * lo + hi * hi).sqrt()).abs() < 1e-10);
        }
    }

    #[test]
    fn adjoint_action_matches_dense_conjugation(n in 1usize..=5, seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random_state(n, r.gen());
        let spec = random_spec(n, &mut r);
        let fast = centralizer::adjoint_action(&rho, &spec).unwrap();
        let units: Vec<_> = spec.factors().iter().map(|f| oracle::su2_exp(f.axis(), f.angle())).collect();
        let slow = oracle::dense_conjugate(&rho.to_dense().unwrap(), &units).unwrap();
        prop_assert!(fast.to_dense().unwrap().max_abs_diff(&slow) < 1e-10);
        prop_assert!((purity(&fast) - purity(&rho)).abs() < 1e-12);
        prop_assert!((reduction::delta_purity(&fast) - reduction::delta_purity(&rho)).abs() < 1e-12);
        let ev_in = oracle::dense_eigenvalues(&rho.to_dense().unwrap());
        let ev_out = oracle::dense_eigenvalues(&slow);
        prop_assert!(ev_in.iter().zip(&ev_out).all(|(a, b)| (a - b).abs() < 1e-10));
    }

    #[test]
    fn rotation_is_faithful_on_each_pauli(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = LocalFactor::new(random_unit_vector(&mut r), r.gen_range(-7.0..7.0)).unwrap();
        let u = oracle::su2_exp(f.axis(), f.angle());
        prop_assert!((u - f.matrix()).iter().all(|z| z.norm() < 1e-12));
        let rot = f.rotation();
        let sig = [qcentral_core::Pauli::X, qcentral_core::Pauli::Y, qcentral_core::Pauli::Z];
        for k in 0..3 {
            let dense = u * sig[k].matrix() * u.adjoint();
            let mut expected = qcentral_core::Matrix2c::zeros();
            for j in 0..3 {
                expected += sig[j].matrix() * Complex64::new(rot[j][k], 0.0);
            }
            prop_assert!((dense - expected).iter().all(|z| z.norm() < 1e-12));
        }
    }

    #[test]
    fn centralizer_samples_preserve_reductions(n in 1usize..=5, seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random_state(n, r.gen());
        let desc = centralizer::classify_centralizer(&rho, 1e-9);
        let spec = centralizer::sample_centralizer(&desc, &random_parameters(&desc, &mut r)).unwrap();
        prop_assert!(centralizer::is_in_centralizer(&rho, &spec, 1e-12).unwrap());
        let full = centralizer::adjoint_action(&rho, &spec).unwrap();
        prop_assert!(reduction::lm_equivalent(&rho, &full, 1e-10).unwrap());
        let split = centralizer::family_member(&rho, &spec, 1e-9).unwrap();
        prop_assert!(split.state().max_abs_diff(full.state()) < 1e-12);
    }

    #[test]
    fn factors_off_the_bloch_axis_do_not_commute(seed in any::<u64>()) {
        let mut r = rng(seed);
        let dir = random_unit_vector(&mut r);
        let b = BlochVector { qubit: 1, r: dir.map(|x| x * r.gen_range(0.1..1.0)) };
        let axis = loop {
            let a = random_unit_vector(&mut r);
            let cos = (a[0] * dir[0] + a[1] * dir[1] + a[2] * dir[2]).clamp(-1.0, 1.0);
            let angle = cos.acos();
            if angle > 1e-3 && angle < std::f64::consts::PI - 1e-3 {
                break a;
            }
        };
        let omega = r.gen_range(1e-3..std::f64::consts::FRAC_PI_2 - 1e-3);
        let u = LocalFactor::new(axis, omega).unwrap().matrix();
        // [U, ρ] = −sin ω (n̂ × r⃗)·σ⃗, so its largest entry is at least
        // sin ω ‖n̂ × r⃗‖ / √2
        let c = centralizer::reduction_commutator(&u, &b).unwrap();
        let cross = centralizer_cross(axis, b.r);
        let bound = omega.sin() * cross / 2f64.sqrt();
        let max = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(max >= bound * (1.0 - 1e-9));
        prop_assert!(!centralizer::commutes_with_reduction(&u, &b, bound * 0.5).unwrap());
    }

    #[test]
    fn levi_civita_matches_dense_commutator(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s: [f64; 3] = std::array::from_fn(|_| r.gen_range(-1.0..1.0));
        let v: [f64; 3] = std::array::from_fn(|_| r.gen_range(-1.0..1.0));
        let dense = oracle::dense_commutator(
            &qcentral_core::pauli::vector_dot_sigma(s),
            &qcentral_core::pauli::vector_dot_sigma(v),
        );
        let coeffs = centralizer::generator_commutator(s, v);
        let sig = [qcentral_core::Pauli::X, qcentral_core::Pauli::Y, qcentral_core::Pauli::Z];
        let mut rebuilt = qcentral_core::Matrix2c::zeros();
        for u in 0..3 {
            rebuilt += sig[u].matrix() * coeffs[u];
        }
        prop_assert!((dense - rebuilt).iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn centralizer_is_closed_under_composition(n in 1usize..=4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random_state(n, r.gen());
        let desc = centralizer::classify_centralizer(&rho, 1e-9);
        let a = centralizer::sample_centralizer(&desc, &random_parameters(&desc, &mut r)).unwrap();
        let b = centralizer::sample_centralizer(&desc, &random_parameters(&desc, &mut r)).unwrap();
        let ab = a.compose(&b).unwrap();
        prop_assert!(centralizer::is_in_centralizer(&rho, &ab, 1e-12).unwrap());
        // Axis factors on one qubit compose by adding angles
        for (q, class) in desc.classes.iter().enumerate() {
            if let qcentral_core::FactorClass::Axis { .. } = class {
                let (fa, fb) = (a.factor(q + 1), b.factor(q + 1));
                let summed = LocalFactor::new(desc.classes[q].axis().unwrap(), signed_angle(fa, &desc, q) + signed_angle(fb, &desc, q)).unwrap();
                let composed = ab.factor(q + 1).matrix();
                let m = summed.matrix();
                prop_assert!((composed - m).iter().all(|z| z.norm() < 1e-12) || (composed + m).iter().all(|z| z.norm() < 1e-12));
            }
        }
    }

    #[test]
    fn subspaces_are_invariant_under_any_lu(n in 1usize..=5, seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random_state(n, r.gen());
        let spec = random_spec(n, &mut r);
        for q in 1..=n {
            prop_assert!(centralizer::verify_subspace_invariance(&rho, &spec, q, 1e-10).unwrap());
        }
    }

    #[test]
    fn werner_orbit_keeps_reductions_maximally_mixed(n in 2usize..=5, w in -0.03f64..1.0, seed in any::<u64>()) {
        let rho = states::make_werner_like(n, w).unwrap();
        let spec = random_spec(n, &mut rng(seed));
        let out = centralizer::adjoint_action(&rho, &spec).unwrap();
        for b in reduction::bloch_vectors(&out) {
            prop_assert!(b.norm() < 1e-12);
        }
    }
}

fn centralizer_cross(a: [f64; 3], b: [f64; 3]) -> f64 {
    let c = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt()
}

/// Angle of an Axis factor measured about the qubit's Bloch direction.
fn signed_angle(f: &LocalFactor, desc: &qcentral_core::CentralizerDescriptor, q: usize) -> f64 {
    let axis = desc.classes[q].axis().unwrap();
    let dot: f64 = (0..3).map(|k| f.axis()[k] * axis[k]).sum();
    f.angle() * dot.signum()
}

#[test]
fn basis_vectors_trace_to_scaled_paulis() {
    for n in 1..=5usize {
        for q in 1..=n {
            for p in qcentral_core::Pauli::ALL {
                let idx = qcentral_core::PauliIndex::single(n, q, p).unwrap();
                let b = qcentral_core::sigma_dense(&idx);
                let traced = oracle::dense_partial_trace(&b, q).unwrap();
                let expected = p.matrix() * Complex64::new((1u64 << (n - 1)) as f64, 0.0);
                assert_eq!(traced, expected, "n={n} q={q} {p:?}");
            }
        }
    }
}

#[test]
fn ghz_reductions_are_maximally_mixed() {
    for n in 2..=8 {
        let g = states::make_ghz(n).unwrap();
        for q in 1..=n {
            assert!(partial_trace_single(&g, q).unwrap().norm() < 1e-12);
        }
    }
}
