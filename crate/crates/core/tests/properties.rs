use nlsfarf::energy::{
    density_part, energy_e, energy_gl, energy_mgl, eta_support_measure, hamiltonian, metric_de, metric_dgl,
    EnergyReport,
};
use nlsfarf::field::{l2_norm, Field, Grid, SpectralWorkspace};
use nlsfarf::io::{decode_snapshot, encode_snapshot, format_row, parse_row, SeriesRow};
use nlsfarf::nonlinearity::NonlinearitySpec;
use nlsfarf::solver::{step_linear, step_nonlinear};
use num_complex::Complex64;
use proptest::prelude::*;

fn grid8() -> Grid {
    Grid::new(2, &[6.0, 9.0], &[8, 8]).unwrap()
}

fn field_strategy(amp: f64) -> impl Strategy<Value = Field> {
    (prop::collection::vec((-amp..amp, -amp..amp), 64), 0.0..std::f64::consts::TAU).prop_map(|(v, phase)| {
        let v: Vec<Complex64> = v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        Field::from_perturbation(grid8(), Complex64::from_polar(1.0, phase), &v).unwrap()
    })
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn metrics_vanish_on_the_diagonal_and_are_symmetric(f in field_strategy(1.5), g in field_strategy(1.5)) {
        let ws = SpectralWorkspace::new(&grid8());
        for metric in [metric_de, metric_dgl] {
            let d = metric(&f, &g, &ws).unwrap();
            let e = metric(&g, &f, &ws).unwrap();
            prop_assert!(close(d.value, e.value, 1e-12));
            prop_assert!(d.lower_bound <= d.value * (1.0 + 1e-12));
            prop_assert!(d.value >= 0.0);
            prop_assert_eq!(metric(&f, &f, &ws).unwrap().value, 0.0);
        }
    }

    #[test]
    fn energies_are_phase_invariant(f in field_strategy(1.0), theta in 0.0..std::f64::consts::TAU) {
        let ws = SpectralWorkspace::new(&grid8());
        let g = f.rotated(Complex64::from_polar(1.0, theta));
        let spec = NonlinearitySpec::competing(1.0, 1.2, 1.5, 0.5).unwrap();
        prop_assert!(close(energy_e(&f, &ws), energy_e(&g, &ws), 1e-11));
        prop_assert!(close(energy_gl(&f, &ws), energy_gl(&g, &ws), 1e-11));
        prop_assert!(close(hamiltonian(&f, &spec, &ws).unwrap(), hamiltonian(&g, &spec, &ws).unwrap(), 1e-11));
    }

    #[test]
    fn chebyshev_bound_is_exact_on_the_lattice(f in field_strategy(1.5), delta in 0.05f64..1.0) {
        let lhs = eta_support_measure(&f, delta);
        prop_assert!(lhs <= density_part(&f) / (delta * delta) * (1.0 + 1e-12));
    }

    #[test]
    fn eighth_of_modified_gl_is_below_e(f in field_strategy(4.0)) {
        let ws = SpectralWorkspace::new(&grid8());
        prop_assert!(energy_mgl(&f, &ws) / 8.0 <= energy_e(&f, &ws) * (1.0 + 1e-12));
    }

    #[test]
    fn potential_step_keeps_the_modulus(f in field_strategy(1.0), dt in 1e-4f64..0.5) {
        let spec = NonlinearitySpec::cubic_quintic(1.0, 3.0, 2.0).unwrap();
        let mut g = f.clone();
        step_nonlinear(&mut g, &spec, dt).unwrap();
        for (a, b) in f.values().iter().zip(g.values()) {
            prop_assert!((a.norm() - b.norm()).abs() <= 1e-14 * a.norm().max(1.0));
        }
    }

    #[test]
    fn free_step_is_unitary_without_dealiasing(f in field_strategy(1.0), dt in -1.0f64..1.0) {
        let grid = grid8();
        let ws = SpectralWorkspace::new(&grid);
        let before = l2_norm(&grid, &f.perturbation());
        let mut g = f.clone();
        step_linear(&mut g, dt, &ws, false);
        prop_assert!(close(before, l2_norm(&grid, &g.perturbation()), 1e-12));
        let mut h = f.clone();
        step_linear(&mut h, dt, &ws, true);
        prop_assert!(l2_norm(&grid, &h.perturbation()) <= before * (1.0 + 1e-12));
    }

    #[test]
    fn snapshot_roundtrip_is_bitwise(
        dims in prop::sample::select(vec![1usize, 2, 3]),
        extent in 0.5f64..100.0,
        seed in any::<u64>(),
        t in -1e3f64..1e3,
    ) {
        let grid = Grid::cube(dims, extent, 4).unwrap();
        let v: Vec<Complex64> = (0..grid.len())
            .map(|i| {
                let x = seed.wrapping_mul(6364136223846793005).wrapping_add(i as u64);
                Complex64::new(f64::from_bits(x >> 12 | 0x3ff0_0000_0000_0000) - 1.5, (x % 1000) as f64 * 1e-3)
            })
            .collect();
        let f = Field::from_perturbation(grid, Complex64::from_polar(1.0, seed as f64), &v).unwrap();
        let (g, t2) = decode_snapshot(&encode_snapshot(&f, t)).unwrap();
        prop_assert_eq!(t2.to_bits(), t.to_bits());
        for (a, b) in f.values().iter().zip(g.values()) {
            prop_assert_eq!((a.re.to_bits(), a.im.to_bits()), (b.re.to_bits(), b.im.to_bits()));
        }
        prop_assert_eq!(f.farfield(), g.farfield());
    }

    #[test]
    fn csv_rows_roundtrip(vals in prop::array::uniform9(-1e6f64..1e6)) {
        let report = EnergyReport {
            e: vals[1], grad_part: vals[2], density_part: vals[3], e_gl: vals[4],
            e_mgl: vals[5], h: vals[6], m: vals[7], z: vals[8],
        };
        let row = SeriesRow { t: vals[0], report, status: "running".into() };
        let back = parse_row(&format_row(&row)).unwrap();
        prop_assert_eq!(back, row);
    }
}
