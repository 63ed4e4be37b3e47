use proptest::prelude::*;
use qsl_core::channels::{evolve_nqubit, kraus_operators, ChannelConfig, ChannelKind};
use qsl_core::hermitian::{bures_fidelity, eig_hermitian, norms, superfidelity_bound, ComplexMatrix, DensityMatrix, C64};
use qsl_core::qsl::{qsl, NormKind, QslRequest};
use qsl_core::states::{l1_coherence, linear_entropy, m_cl};

fn matrix(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim * dim)
        .prop_map(move |v| ComplexMatrix::from_row_major(v.into_iter().map(|(a, b)| C64::new(a, b)).collect()).unwrap())
}

fn density(n_qubits: usize) -> impl Strategy<Value = DensityMatrix> {
    matrix(1 << n_qubits).prop_filter_map("nonzero", |g| {
        let m = &g * &g.adjoint();
        let tr = m.trace().re;
        (tr > 1e-6).then(|| DensityMatrix::new(m.scale_real(1.0 / tr)).unwrap())
    })
}

fn channel() -> impl Strategy<Value = ChannelConfig> {
    (0usize..3, 0.2f64..3.0, 0.05f64..4.0).prop_map(|(k, kappa, r)| {
        let kind = [ChannelKind::Oun, ChannelKind::Rtn, ChannelKind::Nmad][k];
        ChannelConfig::new(kind, kappa, r * kappa, r * kappa).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigendecomposition_reconstructs(m in matrix(4)) {
        let h = m.hermitian_part();
        let es = eig_hermitian(&h).unwrap();
        prop_assert!(es.reconstruct().max_abs_diff(&h) < 1e-12);
        let trace: f64 = es.values.iter().sum();
        prop_assert!((trace - h.trace().re).abs() < 1e-12);
    }

    #[test]
    fn norms_are_ordered(m in matrix(4)) {
        let n = norms(&m);
        prop_assert!(n.op <= n.hs * (1.0 + 1e-12));
        prop_assert!(n.hs <= n.tr * (1.0 + 1e-12));
        prop_assert!(n.tr <= 2.0 * n.hs * (1.0 + 1e-12));
    }

    #[test]
    fn qubit_fidelities_coincide(a in density(1), b in density(1)) {
        prop_assert!((bures_fidelity(&a, &b).unwrap() - superfidelity_bound(&a, &b).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn kraus_sets_are_complete(cfg in channel(), t in 0.0f64..30.0) {
        let mut sum = ComplexMatrix::zeros(2);
        for k in kraus_operators(&cfg, t) {
            sum = &sum + &(&k.adjoint() * &k);
        }
        prop_assert!(sum.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn evolution_stays_physical_and_mcl_bounded(rho in density(2), cfg in channel(), t in 0.0f64..30.0) {
        let out = evolve_nqubit(&rho, &cfg, t).unwrap().rho_t;
        prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
        prop_assert!(*eig_hermitian(out.matrix()).unwrap().values.last().unwrap() > -1e-12);
        prop_assert!(m_cl(&out) <= 1.0 + 1e-9);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&linear_entropy(&out)));
    }

    #[test]
    fn dephasing_never_creates_coherence(rho in density(2), cfg in channel(), t in 0.0f64..30.0) {
        prop_assume!(cfg.kind.is_dephasing());
        let out = evolve_nqubit(&rho, &cfg, t).unwrap().rho_t;
        prop_assert!(l1_coherence(&out) <= l1_coherence(&rho) + 1e-12);
    }

    #[test]
    fn bures_operator_bound_is_a_valid_limit(rho in density(1), cfg in channel(), tau in 0.05f64..8.0) {
        let r = qsl(&rho, &cfg, &QslRequest::bures(tau, NormKind::Op)).unwrap();
        prop_assert!(r.tau_qsl >= 0.0);
        prop_assert!(r.tau_qsl <= tau * (1.0 + 1e-9));
    }

    #[test]
    fn relative_purity_bound_is_nonnegative(rho in density(1), cfg in channel(), tau in 0.05f64..8.0) {
        let r = qsl(&rho, &cfg, &QslRequest::relative_purity(tau)).unwrap();
        prop_assert!(r.tau_qsl >= 0.0 && r.tau_qsl.is_finite());
    }
}
