//! Flat `key = value` experiment files. `#` starts a comment; nested
//! settings use dotted keys such as `initial.kind`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use fracblow::{InitialData, Scheme, SolverConfig64};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    Run,
    Figure1,
    Figure2,
    Sweep,
    Levine,
    QuadCheck,
    KernelCheck,
    Dichotomy,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Run => "run",
            Self::Figure1 => "figure1",
            Self::Figure2 => "figure2",
            Self::Sweep => "sweep",
            Self::Levine => "levine",
            Self::QuadCheck => "quadcheck",
            Self::KernelCheck => "kernelcheck",
            Self::Dichotomy => "dichotomy",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "run" => Self::Run,
            "figure1" => Self::Figure1,
            "figure2" => Self::Figure2,
            "sweep" => Self::Sweep,
            "levine" => Self::Levine,
            "quadcheck" => Self::QuadCheck,
            "kernelcheck" => Self::KernelCheck,
            "dichotomy" => Self::Dichotomy,
            _ => return None,
        })
    }

    fn is_alpha_list(self) -> bool {
        matches!(self, Self::Figure1 | Self::Figure2 | Self::Sweep | Self::Levine)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    /// Base configuration; list-valued experiments override `alpha` per row.
    pub config: SolverConfig64,
    pub alphas: Vec<f64>,
    pub amplitudes: Vec<f64>,
    pub kappas: Vec<f64>,
    pub quad_nodes: usize,
    pub output_dir: PathBuf,
}

pub const DEFAULT_KAPPAS: [f64; 5] = [0.1, 1.0, 2.0, 10.0, 100.0];
pub const DEFAULT_QUAD_ALPHAS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
pub const DEFAULT_KERNEL_ALPHAS: [f64; 3] = [0.3, 0.5, 0.7];

const KEYS: &[&str] = &[
    "kind",
    "alpha",
    "alphas",
    "N",
    "p",
    "tau0",
    "c",
    "scheme",
    "u_stop",
    "t_end",
    "max_steps",
    "record_every",
    "snapshot_times",
    "operator",
    "reaction",
    "initial.kind",
    "initial.a",
    "initial.b",
    "initial.modes",
    "amplitudes",
    "kappas",
    "quad.nodes",
    "output_dir",
];

struct Entries {
    map: BTreeMap<&'static str, (usize, String)>,
}

impl Entries {
    fn parse(text: &str) -> CliResult<Self> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (k, v) = body.split_once('=').ok_or_else(|| CliError::Parse {
                line,
                message: format!("expected `key = value`, got `{body}`"),
            })?;
            let k = k.trim();
            let key = KEYS
                .iter()
                .find(|known| known.eq_ignore_ascii_case(k))
                .ok_or_else(|| CliError::Parse {
                    line,
                    message: format!("unknown key `{k}`"),
                })?;
            let v = v.trim();
            if v.is_empty() {
                return Err(CliError::Parse {
                    line,
                    message: format!("`{key}` has no value"),
                });
            }
            if let Some((first, _)) = map.insert(*key, (line, v.to_string())) {
                return Err(CliError::Parse {
                    line,
                    message: format!("`{key}` already set on line {first}"),
                });
            }
        }
        Ok(Self { map })
    }

    fn has(&self, key: &str) -> bool {
        self.map.contains_key(key)
    }

    fn raw(&self, key: &str) -> Option<(usize, &str)> {
        self.map.get(key).map(|(l, v)| (*l, v.as_str()))
    }

    fn value<V: FromStr>(&self, key: &str, what: &str) -> CliResult<Option<V>> {
        let Some((line, v)) = self.raw(key) else {
            return Ok(None);
        };
        v.parse().map(Some).map_err(|_| CliError::Parse {
            line,
            message: format!("`{key}`: expected {what}, got `{v}`"),
        })
    }

    fn number(&self, key: &str) -> CliResult<Option<f64>> {
        self.value(key, "a number")
    }

    fn list(&self, key: &str) -> CliResult<Option<Vec<f64>>> {
        let Some((line, v)) = self.raw(key) else {
            return Ok(None);
        };
        v.split(',')
            .map(|s| {
                s.trim().parse::<f64>().map_err(|_| CliError::Parse {
                    line,
                    message: format!("`{key}`: expected comma-separated numbers, got `{}`", s.trim()),
                })
            })
            .collect::<CliResult<Vec<_>>>()
            .map(Some)
    }

    fn flag(&self, key: &str) -> CliResult<Option<bool>> {
        let Some((line, v)) = self.raw(key) else {
            return Ok(None);
        };
        match v.to_ascii_lowercase().as_str() {
            "on" | "true" | "yes" => Ok(Some(true)),
            "off" | "false" | "no" => Ok(Some(false)),
            _ => Err(CliError::Parse {
                line,
                message: format!("`{key}`: expected on/off, got `{v}`"),
            }),
        }
    }
}

fn increasing(key: &str, xs: &[f64]) -> CliResult<()> {
    if xs.is_empty() {
        return Err(CliError::invalid(key, "needs at least one value"));
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(CliError::invalid(key, "values must be finite"));
    }
    if xs.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(CliError::invalid(key, "values must be strictly increasing"));
    }
    Ok(())
}

fn positive(key: &str, xs: &[f64]) -> CliResult<()> {
    match xs.iter().find(|x| !(**x > 0.0)) {
        Some(x) => Err(CliError::invalid(key, format!("values must be positive, got {x}"))),
        None => Ok(()),
    }
}

fn initial_data(e: &Entries) -> CliResult<InitialData<f64>> {
    let kind = e.raw("initial.kind").map_or("cos_plus_const", |(_, v)| v);
    let unused = |key: &str| -> CliResult<()> {
        if e.has(key) {
            Err(CliError::invalid(key, format!("not used by initial.kind = {kind}")))
        } else {
            Ok(())
        }
    };
    match kind {
        "cos_plus_const" => {
            unused("initial.modes")?;
            Ok(InitialData::CosPlusConst {
                a: e.number("initial.a")?.unwrap_or(1.0),
                b: e.number("initial.b")?.unwrap_or(1.0),
            })
        }
        "constant" => {
            unused("initial.a")?;
            unused("initial.modes")?;
            Ok(InitialData::Constant {
                b: e.number("initial.b")?.unwrap_or(1.0),
            })
        }
        "modes" => {
            unused("initial.a")?;
            unused("initial.b")?;
            let modes = e
                .list("initial.modes")?
                .ok_or_else(|| CliError::invalid("initial.modes", "required for initial.kind = modes"))?;
            Ok(InitialData::Modes(modes))
        }
        other => Err(CliError::invalid(
            "initial.kind",
            format!("expected cos_plus_const, constant or modes, got `{other}`"),
        )),
    }
}

/// Parses and validates an experiment file's contents. `base_dir` anchors a
/// relative `output_dir`.
pub fn parse_spec(text: &str, base_dir: &Path) -> CliResult<ExperimentSpec> {
    let e = Entries::parse(text)?;
    let kind = match e.raw("kind") {
        None => ExperimentKind::Run,
        Some((_, v)) => ExperimentKind::parse(v).ok_or_else(|| {
            CliError::invalid(
                "kind",
                format!("expected one of run, figure1, figure2, sweep, levine, quadcheck, kernelcheck, dichotomy; got `{v}`"),
            )
        })?,
    };

    let alpha = e.number("alpha")?;
    let alphas = e.list("alphas")?;
    let alphas = match kind {
        k if k.is_alpha_list() => match (alphas, alpha) {
            (Some(a), None) => a,
            (None, Some(a)) => vec![a],
            (Some(_), Some(_)) => return Err(CliError::invalid("alpha", "set either `alpha` or `alphas`, not both")),
            (None, None) => return Err(CliError::invalid("alphas", format!("required for kind = {}", kind.name()))),
        },
        ExperimentKind::QuadCheck => alphas.unwrap_or_else(|| DEFAULT_QUAD_ALPHAS.to_vec()),
        ExperimentKind::KernelCheck => alphas.unwrap_or_else(|| DEFAULT_KERNEL_ALPHAS.to_vec()),
        _ => {
            if alphas.is_some() {
                return Err(CliError::invalid("alphas", format!("not used by kind = {}; use `alpha`", kind.name())));
            }
            vec![alpha.ok_or_else(|| CliError::invalid("alpha", format!("required for kind = {}", kind.name())))?]
        }
    };
    let list_key = if e.has("alphas") { "alphas" } else { "alpha" };
    increasing(list_key, &alphas)?;
    positive(list_key, &alphas)?;
    if kind == ExperimentKind::QuadCheck || kind == ExperimentKind::KernelCheck {
        if let Some(a) = alphas.iter().find(|a| **a >= 1.0) {
            return Err(CliError::invalid("alphas", format!("must lie in (0, 1), got {a}")));
        }
    }

    let mut config = SolverConfig64::new(alphas[0], initial_data(&e)?);
    if let Some(n) = e.value::<usize>("N", "a grid size")? {
        config.n = n;
    }
    if let Some(p) = e.value::<u32>("p", "an integer exponent")? {
        config.p = p;
    }
    if let Some(tau0) = e.number("tau0")? {
        config.tau0 = tau0;
        config.c = tau0;
    }
    if let Some(c) = e.number("c")? {
        config.c = c;
    }
    if let Some((line, s)) = e.raw("scheme") {
        config.scheme = match s {
            "explicit" => Scheme::Explicit,
            "implicit" => Scheme::Implicit,
            _ => {
                return Err(CliError::Parse {
                    line,
                    message: format!("`scheme`: expected explicit or implicit, got `{s}`"),
                })
            }
        };
    }
    if let Some(u) = e.number("u_stop")? {
        config.u_stop = u;
    }
    config.t_end = e.number("t_end")?;
    if let Some(m) = e.value::<usize>("max_steps", "a step count")? {
        config.max_steps = m;
    }
    if let Some(r) = e.value::<usize>("record_every", "a step count")? {
        config.record_every = r;
    }
    if let Some(s) = e.list("snapshot_times")? {
        increasing("snapshot_times", &s)?;
        config.snapshot_times = s;
    }
    if let Some(b) = e.flag("operator")? {
        config.operator_enabled = b;
    }
    if let Some(b) = e.flag("reaction")? {
        config.reaction_enabled = b;
    }
    if kind == ExperimentKind::Dichotomy && config.t_end.is_none() {
        return Err(CliError::invalid("t_end", "required for kind = dichotomy"));
    }
    for w in config.validate()? {
        log::warn!("{w}");
    }
    for &a in &alphas[1..] {
        fracblow::SolverConfig { alpha: a, ..config.clone() }
            .validate()
            .map_err(|err| match CliError::from(err) {
                CliError::Invalid { key, message } if key == "alpha" => CliError::invalid("alphas", message),
                other => other,
            })?;
    }

    let amplitudes = match e.list("amplitudes")? {
        Some(a) => {
            increasing("amplitudes", &a)?;
            positive("amplitudes", &a)?;
            a
        }
        None if kind == ExperimentKind::Dichotomy => {
            return Err(CliError::invalid("amplitudes", "required for kind = dichotomy"))
        }
        None => Vec::new(),
    };
    let kappas = e.list("kappas")?.unwrap_or_else(|| DEFAULT_KAPPAS.to_vec());
    increasing("kappas", &kappas)?;
    positive("kappas", &kappas)?;
    let quad_nodes = e.value::<usize>("quad.nodes", "a node count")?.unwrap_or(fracblow::quadrature::DEFAULT_GAUSS_JACOBI_NODES);
    if quad_nodes == 0 {
        return Err(CliError::invalid("quad.nodes", "must be at least 1"));
    }
    let output_dir = base_dir.join(e.raw("output_dir").map_or("out", |(_, v)| v));

    Ok(ExperimentSpec {
        kind,
        config,
        alphas,
        amplitudes,
        kappas,
        quad_nodes,
        output_dir,
    })
}

/// Reads and validates an experiment file.
pub fn load_config(path: &Path) -> CliResult<ExperimentSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_spec(&text, path.parent().unwrap_or(Path::new(".")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> CliResult<ExperimentSpec> {
        parse_spec(text, Path::new("/tmp"))
    }

    fn invalid_key(r: CliResult<ExperimentSpec>) -> String {
        match r {
            Err(CliError::Invalid { key, .. }) => key,
            other => panic!("expected a validation error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_file_gets_defaults() {
        let s = parse("alpha = 0.5\n").unwrap();
        assert_eq!(s.kind, ExperimentKind::Run);
        let c = &s.config;
        assert_eq!((c.alpha, c.n, c.p), (0.5, 100, 2));
        assert_eq!((c.tau0, c.c, c.u_stop), (1e-3, 1e-3, 1e8));
        assert_eq!(c.scheme, Scheme::Explicit);
        assert_eq!(c.initial, InitialData::CosPlusConst { a: 1.0, b: 1.0 });
        assert_eq!(s.output_dir, Path::new("/tmp/out"));
    }

    #[test]
    fn negative_alpha_names_the_key() {
        assert_eq!(invalid_key(parse("alpha = -1")), "alpha");
        assert_eq!(invalid_key(parse("kind = sweep\nalphas = 0.5, -0.1")), "alphas");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse("# header\nalpha = 0.5\nN 100\n") {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match parse("alpha = 0.5\n\nbogus = 1") {
            Err(CliError::Parse { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("bogus"));
            }
            other => panic!("{other:?}"),
        }
        match parse("alpha = 0.5\nalpha = 0.6") {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("alpha = half"), Err(CliError::Parse { line: 1, .. })));
    }

    #[test]
    fn comments_dotted_keys_and_overrides() {
        let s = parse(
            "kind = run  # single\nalpha = 0.7\nN = 64\ntau0 = 0.002\nscheme = implicit\n\
             initial.kind = modes\ninitial.modes = 1, 0.5\nsnapshot_times = 0.1, 0.2\noperator = off\n",
        )
        .unwrap();
        let c = &s.config;
        assert_eq!((c.n, c.tau0, c.c), (64, 0.002, 0.002));
        assert_eq!(c.scheme, Scheme::Implicit);
        assert_eq!(c.initial, InitialData::Modes(vec![1.0, 0.5]));
        assert_eq!(c.snapshot_times, vec![0.1, 0.2]);
        assert!(!c.operator_enabled && c.reaction_enabled);
    }

    #[test]
    fn explicit_c_overrides_tau0_default() {
        let s = parse("alpha = 0.5\nc = 0.01\ntau0 = 0.002").unwrap();
        assert_eq!((s.config.tau0, s.config.c), (0.002, 0.01));
    }

    #[test]
    fn kind_specific_requirements() {
        assert_eq!(invalid_key(parse("kind = sweep")), "alphas");
        assert_eq!(invalid_key(parse("kind = sweep\nalphas = 0.7, 0.5")), "alphas");
        assert_eq!(invalid_key(parse("kind = run\nalphas = 0.5, 0.6")), "alphas");
        assert_eq!(invalid_key(parse("kind = dichotomy\nalpha = 0.5\nt_end = 1")), "amplitudes");
        assert_eq!(invalid_key(parse("kind = dichotomy\nalpha = 0.5\namplitudes = 1")), "t_end");
        assert_eq!(invalid_key(parse("kind = quadcheck\nalphas = 0.5, 1.5")), "alphas");
        assert_eq!(invalid_key(parse("kind = nope")), "kind");
        assert_eq!(invalid_key(parse("alpha = 0.5\ninitial.kind = constant\ninitial.a = 2")), "initial.a");
        assert_eq!(invalid_key(parse("alpha = 0.5\nu_stop = 1")), "u_stop");
        assert_eq!(invalid_key(parse("alpha = 0.5\nN = 1")), "N");
    }

    #[test]
    fn check_kinds_default_their_grids() {
        let s = parse("kind = quadcheck").unwrap();
        assert_eq!(s.alphas, DEFAULT_QUAD_ALPHAS.to_vec());
        assert_eq!(s.kappas, DEFAULT_KAPPAS.to_vec());
        assert_eq!(s.quad_nodes, 64);
        let s = parse("kind = kernelcheck").unwrap();
        assert_eq!(s.alphas, DEFAULT_KERNEL_ALPHAS.to_vec());
    }

    #[test]
    fn shipped_figure1_config() {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/figure1.cfg");
        let s = load_config(&path).unwrap();
        assert_eq!(s.kind, ExperimentKind::Figure1);
        assert_eq!(s.alphas, vec![0.5, 0.6, 0.7]);
        assert_eq!((s.config.n, s.config.tau0), (100, 0.001));
        assert_eq!(s.config.initial, InitialData::CosPlusConst { a: 1.0, b: 1.0 });
        assert_eq!(s.config.snapshot_times, vec![0.6]);
    }

    #[test]
    fn all_shipped_configs_load() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
        let mut n = 0;
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.extension().is_some_and(|e| e == "cfg") {
                load_config(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
                n += 1;
            }
        }
        assert!(n >= 8);
    }
}
