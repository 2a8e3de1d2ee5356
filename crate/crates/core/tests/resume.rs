use nlsfarf::field::{init_random_bounded, Grid, SpectralWorkspace};
use nlsfarf::io::{decode_snapshot, encode_snapshot};
use nlsfarf::nonlinearity::NonlinearitySpec;
use nlsfarf::solver::{run, run_from, SolverConfig};
use num_complex::Complex64;

fn bits(values: &[Complex64]) -> Vec<(u64, u64)> {
    values.iter().map(|z| (z.re.to_bits(), z.im.to_bits())).collect()
}

#[test]
fn resumed_run_reproduces_the_uninterrupted_one() {
    let grid = Grid::cube(2, 16.0, 32).unwrap();
    let ws = SpectralWorkspace::new(&grid);
    let spec = NonlinearitySpec::competing(1.0, 1.2, 1.5, 0.5).unwrap();
    let field0 = init_random_bounded(&grid, Complex64::new(1.0, 0.0), 1.0, 3).unwrap();
    let config = SolverConfig { dt: 1e-3, t_end: 0.4, report_every: 50, snapshot_every: Some(100), ..Default::default() };
    let full = run(&field0, &spec, &config, &ws).unwrap();

    let inner = &full.snapshots[1..full.snapshots.len() - 1];
    assert_eq!(inner.len(), 3);
    for (t_snap, snap) in inner {
        let (restored, t) = decode_snapshot(&encode_snapshot(snap, *t_snap)).unwrap();
        let rest = SolverConfig { t_end: config.t_end - t, ..config.clone() };
        let resumed = run_from(&restored, t, &spec, &rest, &ws).unwrap();
        assert_eq!(bits(resumed.final_field.values()), bits(full.final_field.values()), "resume at t = {t}");
        let tail = full.times.iter().position(|&s| s == t).expect("snapshot time is a report time");
        assert_eq!(resumed.times, full.times[tail..]);
        assert_eq!(resumed.reports, full.reports[tail..]);
    }
}

#[test]
fn unaligned_start_still_runs() {
    let grid = Grid::cube(1, 32.0, 64).unwrap();
    let ws = SpectralWorkspace::new(&grid);
    let field0 = init_random_bounded(&grid, Complex64::new(1.0, 0.0), 0.5, 1).unwrap();
    let config = SolverConfig { dt: 1e-2, t_end: 0.1, report_every: 5, ..Default::default() };
    let traj = run_from(&field0, 0.0037, &NonlinearitySpec::gp(), &config, &ws).unwrap();
    assert!((traj.final_time() - 0.1037).abs() < 1e-12);
    assert_eq!(traj.times.len(), 3);
}
