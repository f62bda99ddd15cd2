use std::f64::consts::PI;

use proptest::prelude::*;

use xxz_core::bethe::{bethe_energy, closed_form_energy, solve, telescoped_energy};
use xxz_core::brackets::{enumerate_brackets, hw_dimension, hw_energy, tl_apply, Bracket, HwMethod};
use xxz_core::operators::{build_reduced_kernel, build_sector_hamiltonian, Anisotropy, BoundaryCondition, KernelMatrix};
use xxz_core::sector_basis::{binomial, enumerate_sector, momentum_orbits, orbit_representative, GapDomain, GapVector};
use xxz_core::spectra::{
    dense_spectrum, lanczos_lowest, random_nonnegative_kernel, spectral_radius, wielandt_check, PowerOptions,
};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() }
}

fn bc_strategy() -> impl Strategy<Value = BoundaryCondition<f64>> {
    prop_oneof![
        Just(BoundaryCondition::Open),
        Just(BoundaryCondition::Kink),
        (0.0..3.0f64).prop_map(|delta| BoundaryCondition::Droplet { delta }),
        Just(BoundaryCondition::Cyclic),
    ]
}

fn sector() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=12).prop_flat_map(|len| (Just(len), 0..=len))
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn rank_round_trip((len, n) in sector()) {
        let b = enumerate_sector(len, n).unwrap();
        prop_assert_eq!(b.dim() as u128, binomial(len, n));
        for i in 0..b.dim() {
            prop_assert_eq!(b.rank_config(&b.config(i)).unwrap(), i);
        }
    }

    #[test]
    fn gap_vectors_round_trip(n in 1usize..=4, n_max in 1u32..=8) {
        let d = GapDomain::new(n, n_max).unwrap();
        prop_assert_eq!(d.dim(), (n_max as usize).pow(n as u32 - 1));
        for (i, g) in d.iter().enumerate() {
            let c = g.to_config();
            prop_assert_eq!(c.positions()[0], 0);
            prop_assert_eq!(GapVector::from_config(&c), g.clone());
            prop_assert_eq!(d.rank(g.gaps()), Some(i));
        }
    }

    #[test]
    fn orbits_partition_the_ring((len, n) in sector()) {
        let orbits = momentum_orbits(len, n).unwrap();
        let mut seen = std::collections::HashSet::new();
        for o in &orbits {
            prop_assert_eq!(len % o.size(), 0);
            for s in 0..o.size() {
                let m = o.translate(s);
                prop_assert!(seen.insert(m));
                prop_assert_eq!(orbit_representative(m, len).0, o.representative_mask());
            }
            prop_assert_eq!(o.translate(o.size()), o.representative_mask());
        }
        prop_assert_eq!(seen.len() as u128, binomial(len, n));
    }

    #[test]
    fn sector_operators_are_local_and_symmetric(
        (len, n) in (2usize..=10).prop_flat_map(|len| (Just(len), 0..=len)),
        bc in bc_strategy(),
        q in 0.05..1.0f64,
    ) {
        let a = Anisotropy::new(q).unwrap();
        let h = build_sector_hamiltonian(len, n, bc, &a).unwrap();
        prop_assert_eq!(h.hermiticity_defect(), 0.0);
        for i in 0..h.dim() {
            prop_assert!(h.row_nnz(i) <= 2 * n + 1);
        }
        if !matches!(bc, BoundaryCondition::Droplet { .. }) {
            prop_assert!(h.max_row_sum() <= n as f64 * (1.0 + 1.0 / a.delta()) + 1e-12);
        }
    }

    #[test]
    fn reduced_kernels(n in 1usize..=3, n_max in 2u32..=12, q in 0.05..1.0f64, t in -0.99..0.99f64) {
        let a = Anisotropy::new(q).unwrap();
        let theta = t * PI / n as f64;
        let k = build_reduced_kernel(n, theta, &a, n_max).unwrap();
        prop_assert!(k.matrix.to_complex().hermiticity_defect() < 1e-15);
        prop_assert!(k.matrix.max_row_sum() <= n as f64 * (1.0 + 1.0 / a.delta()) + 1e-12);
        let k0 = build_reduced_kernel(n, 0.0, &a, n_max).unwrap();
        let KernelMatrix::Real(op) = &k0.matrix else { panic!("θ = 0 kernel must be real") };
        for (i, j, v) in op.triplets() {
            if i == j && n == 1 {
                // both hops fold back onto the only class
                prop_assert!((v - (1.0 - 1.0 / a.delta())).abs() < 1e-15);
            } else if i == j {
                let g = k0.domain.gap_vector(i);
                let walls = 1 + g.gaps().iter().filter(|&&x| x >= 2).count();
                prop_assert_eq!(v, walls as f64);
            } else {
                prop_assert!(v <= 0.0);
            }
        }
    }

    #[test]
    fn truncated_infspec_bounds_the_droplet_energy(n in 1usize..=3, q in 0.2..0.9f64, n_max in 2u32..=14) {
        let a = Anisotropy::new(q).unwrap();
        let e = |m| {
            let k = build_reduced_kernel(n, 0.0, &a, m).unwrap();
            dense_spectrum(k.matrix.as_real().unwrap()).unwrap().values[0]
        };
        let (lo, hi) = (e(n_max), e(n_max + 1));
        prop_assert!(hi <= lo + 1e-12);
        prop_assert!(lo >= bethe_energy(q, n, 0.0).unwrap() - 1e-12);
    }

    #[test]
    fn bethe_identities(n in 1usize..=6, q in 0.05..0.95f64, t in -0.98..0.98f64) {
        let theta = t * PI / n as f64;
        let s = solve(q, n, theta).unwrap();
        prop_assert!(s.meeting_residual() < 1e-12 * (1.0 / q).powi(n as i32).max(1.0));
        prop_assert!(s.product_residual() < 1e-12);
        prop_assert!(s.is_normalizable());
        prop_assert!(s.theta_cap.abs() < PI);
        let e = s.energy.unwrap();
        let t = telescoped_energy(q, n, theta).unwrap();
        prop_assert!((t.re - e).abs() < 1e-12 && t.im.abs() < 1e-12);
        prop_assert!((bethe_energy(q, n, -theta).unwrap() - e).abs() < 1e-13);
        prop_assert!(e >= bethe_energy(q, n, 0.0).unwrap() - 1e-14);
    }

    #[test]
    fn zero_momentum_bethe_state(n in 1usize..=6, q in 0.05..0.95f64) {
        let s = solve(q, n, 0.0).unwrap();
        for x in &s.xi {
            prop_assert!(x.im.abs() < 1e-15 && x.re > 0.0);
        }
        prop_assert!(bethe_energy(q, n + 1, 0.0).unwrap() > s.energy.unwrap());
    }

    #[test]
    fn lanczos_matches_dense(
        (len, n) in (2usize..=10).prop_flat_map(|len| (Just(len), 0..=len / 2 + 1)),
        bc in bc_strategy(),
        q in 0.1..1.0f64,
    ) {
        let a = Anisotropy::new(q).unwrap();
        let h = build_sector_hamiltonian(len, n, bc, &a).unwrap();
        let d = dense_spectrum(&h).unwrap().values[0];
        let l = lanczos_lowest(&h, 1, 1e-12).unwrap().values[0];
        prop_assert!((d - l).abs() < 1e-9);
    }

    #[test]
    fn power_radius_dominates(dim in 2usize..=80, density in 0.02..0.5f64, seed in 0u64..1000) {
        let k = random_nonnegative_kernel::<f64>(dim, density, seed);
        let rho = spectral_radius(&k, PowerOptions::default()).unwrap().value;
        for v in dense_spectrum(&k).unwrap().values {
            prop_assert!(rho >= v.abs() - 1e-8);
        }
    }

    #[test]
    fn restriction_never_raises_the_radius(dim in 2usize..=200, seed in 0u64..1000, keep in proptest::collection::vec(any::<bool>(), 200)) {
        let k = random_nonnegative_kernel::<f64>(dim, 0.1, seed);
        let subset: Vec<usize> = (0..dim).filter(|&i| keep[i]).collect();
        prop_assert!(wielandt_check(&k, &subset).unwrap().passed);
    }

    #[test]
    fn brackets_stay_valid(len in 2usize..=10, x_seed in 0usize..100) {
        for n in 0..=len / 2 {
            let basis = enumerate_brackets(len, n).unwrap();
            prop_assert_eq!(basis.dim() as u128, hw_dimension(len, n));
            let x = 1 + x_seed % (len - 1);
            for b in basis.brackets() {
                prop_assert!(Bracket::new(b.arcs().to_vec(), len).is_ok());
                if let Some(m) = tl_apply(x, b, len).unwrap() {
                    prop_assert!(basis.rank(&m.result).is_some());
                    prop_assert!(m.result.arc_at(x) == Some((x, x + 1)));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn highest_weight_energies_are_ordered(len in 4usize..=11, q in 0.15..0.9f64) {
        let a = Anisotropy::new(q).unwrap();
        let e = |len, n| hw_energy(len, n, &a, HwMethod::Gram).unwrap().value;
        let mut prev = -1.0;
        for n in 0..=len / 2 {
            let here = e(len, n);
            prop_assert!(here > prev);
            prop_assert!(here >= closed_form_energy(q, n, 0.0).unwrap_or(0.0) - 1e-12);
            if n >= 1 && 2 * n <= len - 1 {
                prop_assert!(e(len, n) <= e(len - 1, n) + 1e-12);
            }
            let direct = hw_energy(len, n, &a, HwMethod::Direct).unwrap();
            prop_assert!(direct.warnings.is_empty());
            prop_assert!((direct.value - here).abs() < 1e-9);
            prev = here;
        }
        let b = Anisotropy::new(q + 0.05).unwrap();
        for n in 1..=len / 2 {
            prop_assert!(hw_energy(len, n, &b, HwMethod::Gram).unwrap().value <= e(len, n) + 1e-12);
        }
    }
}
