//! Line-oriented run configuration: `section.key = value`, `#` comments.

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{
    init_black_soliton_1d, init_plane_wave_perturbed, init_random_bounded, Field, Grid,
};
use crate::nonlinearity::NonlinearitySpec;
use crate::solver::{Scheme, SolverConfig};

/// Help text listing every key and its default.
pub const CONFIG_HELP: &str = "\
Config format: one `section.key = value` per line, `#` starts a comment.
  grid.dim = 1|2|3                      (required)
  grid.extent = L or L1,L2,..           (required; box [-L/2, L/2) per axis)
  grid.points = N or N1,N2,..           (required; even powers of two >= 4)
  nonlinearity.kind = gp                (power, competing, cubic_quintic, saturated,
                                         exponential, transiting, logarithmic, gp, free)
  nonlinearity.<param> = value          (lambda alpha | a1=1 a2 alpha1 alpha2 |
                                         alpha1 alpha3 alpha5 | gamma | a gamma; alpha_growth)
  initial.kind = constant               (constant, plane_wave_perturbed, black_soliton,
                                         random_bounded, gaussian_bump)
  initial.phase = 0                     far-field constant exp(i*phase)
  initial.eps = 1e-4                    plane wave amplitude
  initial.modes = 1,0,..                plane wave lattice mode per axis
  initial.energy = 1                    random_bounded energy budget
  initial.seed = 0                      random_bounded seed
  initial.amplitude = 1                 gaussian_bump height (psi = c(1 + a exp(-|x|^2)))
  solver.dt = 1e-3
  solver.t_end = 1
  solver.scheme = strang                (strang, picard)
  solver.picard_iters = 50
  solver.picard_quad_nodes = 9
  solver.blowup_e_threshold = 1e6
  solver.report_every = 100
  solver.dealias = true
  solver.c0 = (unset: M = H)
  output.directory = nlsfarf_out
  output.snapshot_stride = 0            steps between snapshot files, 0 = final only
  output.csv_stride = 1                 write every n-th report row";

#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    Constant { phase: f64 },
    PlaneWavePerturbed { phase: f64, eps: f64, modes: Vec<i64> },
    BlackSoliton,
    RandomBounded { phase: f64, energy: f64, seed: u64 },
    GaussianBump { phase: f64, amplitude: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub snapshot_stride: Option<usize>,
    pub csv_stride: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub grid: Grid,
    pub nonlinearity: NonlinearitySpec,
    pub initial: InitialData,
    pub solver: SolverConfig,
    pub output: OutputConfig,
}

const INITIAL_KEYS: [&str; 7] = ["kind", "phase", "eps", "modes", "energy", "seed", "amplitude"];
const SOLVER_KEYS: [&str; 9] =
    ["dt", "t_end", "scheme", "picard_iters", "picard_quad_nodes", "blowup_e_threshold", "report_every", "dealias", "c0"];
const OUTPUT_KEYS: [&str; 3] = ["directory", "snapshot_stride", "csv_stride"];

struct Entries {
    map: BTreeMap<(String, String), (usize, String)>,
}

impl Entries {
    fn get(&self, section: &str, key: &str) -> Option<(usize, &str)> {
        self.map.get(&(section.to_string(), key.to_string())).map(|(l, v)| (*l, v.as_str()))
    }

    fn parse<T: std::str::FromStr>(&self, section: &str, key: &str, default: T) -> Result<T> {
        match self.get(section, key) {
            None => Ok(default),
            Some((line, v)) => v.parse().map_err(|_| Error::Config {
                line,
                msg: format!("{section}.{key}: cannot parse '{v}'"),
            }),
        }
    }

    fn required<T: std::str::FromStr>(&self, section: &str, key: &str) -> Result<(usize, T)> {
        let (line, v) = self
            .get(section, key)
            .ok_or_else(|| Error::Config { line: 0, msg: format!("missing required key {section}.{key}") })?;
        let parsed = v.parse().map_err(|_| Error::Config { line, msg: format!("{section}.{key}: cannot parse '{v}'") })?;
        Ok((line, parsed))
    }

    fn list<T: std::str::FromStr>(&self, section: &str, key: &str) -> Result<Option<(usize, Vec<T>)>> {
        let Some((line, v)) = self.get(section, key) else { return Ok(None) };
        let items = v
            .split(',')
            .map(|s| {
                s.trim().parse().map_err(|_| Error::Config { line, msg: format!("{section}.{key}: cannot parse '{s}'") })
            })
            .collect::<Result<Vec<T>>>()?;
        Ok(Some((line, items)))
    }

    fn line_of(&self, section: &str) -> usize {
        self.map.iter().filter(|((s, _), _)| s == section).map(|(_, (l, _))| *l).min().unwrap_or(0)
    }
}

fn lex(text: &str) -> Result<Entries> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (lhs, rhs) = content
            .split_once('=')
            .ok_or_else(|| Error::Config { line, msg: format!("expected 'section.key = value', got '{content}'") })?;
        let (section, key) = lhs
            .trim()
            .split_once('.')
            .ok_or_else(|| Error::Config { line, msg: format!("key '{}' has no section", lhs.trim()) })?;
        let (section, key) = (section.trim().to_string(), key.trim().to_string());
        let allowed = match section.as_str() {
            "grid" => ["dim", "extent", "points"].contains(&key.as_str()),
            "nonlinearity" => true,
            "initial" => INITIAL_KEYS.contains(&key.as_str()),
            "solver" => SOLVER_KEYS.contains(&key.as_str()),
            "output" => OUTPUT_KEYS.contains(&key.as_str()),
            _ => false,
        };
        if !allowed {
            return Err(Error::Config { line, msg: format!("unknown key '{section}.{key}'") });
        }
        if let Some((first, _)) = map.insert((section.clone(), key.clone()), (line, rhs.trim().to_string())) {
            return Err(Error::Config { line, msg: format!("'{section}.{key}' already set on line {first}") });
        }
    }
    Ok(Entries { map })
}

fn per_axis<T: Copy>(items: Vec<T>, dim: usize, line: usize, what: &str) -> Result<Vec<T>> {
    match items.len() {
        1 => Ok(vec![items[0]; dim]),
        n if n == dim => Ok(items),
        n => Err(Error::Config { line, msg: format!("grid.{what}: {n} values for dimension {dim}") }),
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let e = lex(text)?;

    let (dim_line, dim): (usize, usize) = e.required("grid", "dim")?;
    let (ext_line, extents) =
        e.list::<f64>("grid", "extent")?.ok_or_else(|| Error::Config { line: 0, msg: "missing required key grid.extent".into() })?;
    let (pts_line, points) =
        e.list::<usize>("grid", "points")?.ok_or_else(|| Error::Config { line: 0, msg: "missing required key grid.points".into() })?;
    if !(1..=3).contains(&dim) {
        return Err(Error::Config { line: dim_line, msg: format!("grid.dim = {dim} must be 1, 2 or 3") });
    }
    let extents = per_axis(extents, dim, ext_line, "extent")?;
    let points = per_axis(points, dim, pts_line, "points")?;
    let grid =
        Grid::new(dim, &extents, &points).map_err(|err| Error::Config { line: dim_line, msg: err.to_string() })?;

    let nl_pairs: Vec<(String, String)> = e
        .map
        .iter()
        .filter(|((s, _), _)| s == "nonlinearity")
        .map(|((_, k), (_, v))| (k.clone(), v.clone()))
        .collect();
    let nonlinearity = NonlinearitySpec::from_kv(&nl_pairs)
        .map_err(|err| Error::Config { line: e.line_of("nonlinearity"), msg: err.to_string() })?;

    let kind: String = e.parse("initial", "kind", "constant".to_string())?;
    let phase: f64 = e.parse("initial", "phase", 0.0)?;
    let kind_line = e.get("initial", "kind").map_or(0, |(l, _)| l);
    let used: &[&str] = match kind.as_str() {
        "constant" => &["kind", "phase"],
        "plane_wave_perturbed" => &["kind", "phase", "eps", "modes"],
        "black_soliton" => &["kind"],
        "random_bounded" => &["kind", "phase", "energy", "seed"],
        "gaussian_bump" => &["kind", "phase", "amplitude"],
        other => return Err(Error::Config { line: kind_line, msg: format!("unknown initial.kind '{other}'") }),
    };
    for ((s, k), (line, _)) in &e.map {
        if s == "initial" && !used.contains(&k.as_str()) {
            return Err(Error::Config { line: *line, msg: format!("initial.{k} does not apply to initial.kind = {kind}") });
        }
    }
    let initial = match kind.as_str() {
        "constant" => InitialData::Constant { phase },
        "plane_wave_perturbed" => {
            let modes = match e.list::<i64>("initial", "modes")? {
                Some((line, m)) => {
                    if m.len() != dim {
                        return Err(Error::Config { line, msg: format!("initial.modes needs {dim} entries") });
                    }
                    m
                }
                None => {
                    let mut m = vec![0; dim];
                    m[0] = 1;
                    m
                }
            };
            InitialData::PlaneWavePerturbed { phase, eps: e.parse("initial", "eps", 1e-4)?, modes }
        }
        "black_soliton" => {
            if dim != 1 {
                return Err(Error::Config { line: kind_line, msg: format!("black_soliton needs grid.dim = 1, got {dim}") });
            }
            InitialData::BlackSoliton
        }
        "random_bounded" => InitialData::RandomBounded {
            phase,
            energy: e.parse("initial", "energy", 1.0)?,
            seed: e.parse("initial", "seed", 0)?,
        },
        _ => InitialData::GaussianBump { phase, amplitude: e.parse("initial", "amplitude", 1.0)? },
    };

    let d = SolverConfig::default();
    let scheme: String = e.parse("solver", "scheme", d.scheme.to_string())?;
    let scheme: Scheme = scheme.parse().map_err(|msg| Error::Config {
        line: e.get("solver", "scheme").map_or(0, |(l, _)| l),
        msg,
    })?;
    let c0 = match e.get("solver", "c0") {
        None => None,
        Some(_) => Some(e.parse("solver", "c0", 0.0)?),
    };
    let solver = SolverConfig {
        dt: e.parse("solver", "dt", d.dt)?,
        t_end: e.parse("solver", "t_end", d.t_end)?,
        scheme,
        picard_iters: e.parse("solver", "picard_iters", d.picard_iters)?,
        picard_quad_nodes: e.parse("solver", "picard_quad_nodes", d.picard_quad_nodes)?,
        blowup_e_threshold: e.parse("solver", "blowup_e_threshold", d.blowup_e_threshold)?,
        report_every: e.parse("solver", "report_every", d.report_every)?,
        dealias: e.parse("solver", "dealias", d.dealias)?,
        c0,
        snapshot_every: None,
    };
    let snapshot_stride: usize = e.parse("output", "snapshot_stride", 0)?;
    let solver = SolverConfig { snapshot_every: (snapshot_stride > 0).then_some(snapshot_stride), ..solver };
    solver.validate().map_err(|err| Error::Config { line: e.line_of("solver"), msg: err.to_string() })?;
    let output = OutputConfig {
        directory: PathBuf::from(e.parse("output", "directory", "nlsfarf_out".to_string())?),
        snapshot_stride: solver.snapshot_every,
        csv_stride: e.parse("output", "csv_stride", 1)?,
    };
    if output.csv_stride == 0 {
        return Err(Error::Config { line: e.line_of("output"), msg: "output.csv_stride must be at least 1".into() });
    }
    let config = RunConfig { grid, nonlinearity, initial, solver, output };
    build_initial(&config).map_err(|err| Error::Config { line: kind_line, msg: err.to_string() })?;
    Ok(config)
}

/// Initial field described by the config.
pub fn build_initial(config: &RunConfig) -> Result<Field> {
    let grid = &config.grid;
    match &config.initial {
        InitialData::Constant { phase } => Field::constant(grid.clone(), Complex64::from_polar(1.0, *phase)),
        InitialData::PlaneWavePerturbed { phase, eps, modes } => {
            let k = grid.lattice_wavevector(modes)?;
            init_plane_wave_perturbed(grid, Complex64::from_polar(1.0, *phase), *eps, &k)
        }
        InitialData::BlackSoliton => init_black_soliton_1d(grid),
        InitialData::RandomBounded { phase, energy, seed } => {
            init_random_bounded(grid, Complex64::from_polar(1.0, *phase), *energy, *seed)
        }
        InitialData::GaussianBump { phase, amplitude } => {
            let c = Complex64::from_polar(1.0, *phase);
            let v: Vec<Complex64> = (0..grid.len())
                .map(|i| c * amplitude * (-grid.position(i).iter().map(|x| x * x).sum::<f64>()).exp())
                .collect();
            Field::from_perturbation(grid.clone(), c, &v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "grid.dim = 2\ngrid.extent = 16\ngrid.points = 32\n";

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.grid.points(), &[32, 32]);
        assert_eq!(c.nonlinearity, NonlinearitySpec::gp());
        assert_eq!(c.initial, InitialData::Constant { phase: 0.0 });
        assert_eq!(c.solver, SolverConfig::default());
        assert_eq!(c.output.csv_stride, 1);
        assert_eq!(c.output.directory, PathBuf::from("nlsfarf_out"));
    }

    #[test]
    fn unknown_key_is_named_with_its_line() {
        let err = parse_config(&format!("{MINIMAL}# comment\nsolver.dtt = 0.1\n")).unwrap_err();
        match err {
            Error::Config { line, msg } => {
                assert_eq!(line, 5);
                assert!(msg.contains("solver.dtt"), "{msg}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn soliton_needs_one_dimension() {
        let err = parse_config(&format!("{MINIMAL}initial.kind = black_soliton\n")).unwrap_err();
        assert!(err.to_string().contains("dim = 1"), "{err}");
    }

    #[test]
    fn duplicate_and_malformed_lines() {
        assert!(parse_config(&format!("{MINIMAL}grid.dim = 2\n")).is_err());
        assert!(parse_config(&format!("{MINIMAL}solver.dt 0.1\n")).is_err());
        assert!(parse_config(&format!("{MINIMAL}dt = 0.1\n")).is_err());
    }

    #[test]
    fn full_config() {
        let text = "\
grid.dim = 1
grid.extent = 60
grid.points = 256
nonlinearity.kind = competing
nonlinearity.a2 = 1.2
nonlinearity.alpha1 = 1.5
nonlinearity.alpha2 = 0.5
initial.kind = black_soliton
solver.dt = 0.01
solver.t_end = 0.5
solver.scheme = picard
solver.c0 = 23
output.snapshot_stride = 10
";
        let c = parse_config(text).unwrap();
        assert_eq!(c.nonlinearity, NonlinearitySpec::competing(1.0, 1.2, 1.5, 0.5).unwrap());
        assert_eq!(c.solver.scheme, Scheme::Picard);
        assert_eq!(c.solver.c0, Some(23.0));
        assert_eq!(c.solver.snapshot_every, Some(10));
    }

    #[test]
    fn keys_must_match_the_initial_kind() {
        assert!(parse_config(&format!("{MINIMAL}initial.seed = 3\n")).is_err());
        assert!(parse_config(&format!("{MINIMAL}initial.kind = random_bounded\ninitial.seed = 3\n")).is_ok());
    }
}
