//! Command-line front end: argument parsing, cache handling and table output.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use rug::{Float, Rational};
use serde_json::json;

use crate::contfrac::{calibrate_gamma, cf_energy, cf_eval, cf_from_series, ContinuedFraction, TailSpec};
use crate::error::{Error, Result};
use crate::number::{fmt_real, BigComplex, Precision};
use crate::odm::{error_model, invert_mapping, saddle_constants, MappingSpec, MappingTag, OdmEngine, RhoMode, RhoSchedule};
use crate::pade::pade;
use crate::perturbation::{cache_path, encode_cache, load_or_compute, read_cache, weak_coefficients, write_cache, HamiltonianConvention, WeakSeries};
use crate::strong::{analyze_level_pair, LevelPairAnalysis, MAX_STRONG_ORDER};

const CONVENTION: HamiltonianConvention = HamiltonianConvention::PaperMain;
/// Significant digits printed when `--digits` is larger.
const MAX_PRINTED: u32 = 40;
const MERGE_PLOT_POINTS: usize = 101;
const MAP_IMAGE_POINTS: usize = 121;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CommandKind {
    Coeffs,
    Sum,
    Strong,
    Cf,
    Merge,
    Saddle,
    MapImage,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    A,
    B,
    C,
    Cf,
}

impl Method {
    fn mapping(self) -> Option<MappingSpec> {
        match self {
            Method::A => Some(MappingSpec::a()),
            Method::B => Some(MappingSpec::b()),
            Method::C => Some(MappingSpec::c()),
            Method::Cf => None,
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Method::A => "a",
            Method::B => "b",
            Method::C => "c",
            Method::Cf => "cf",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RhoArg {
    Roots,
    Fitted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Csv,
    Json,
    PlotData,
}

/// A complex argument kept as text until the working precision is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexArg {
    pub re: String,
    pub im: String,
}

fn parse_complex(s: &str) -> std::result::Result<ComplexArg, String> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    for part in [re, im] {
        let ok = part.contains('/') && part.parse::<Rational>().is_ok() || Float::parse(part).is_ok();
        if !ok {
            return Err(format!("`{part}` is not a number"));
        }
    }
    Ok(ComplexArg { re: re.trim().to_string(), im: im.trim().to_string() })
}

#[derive(Clone, Debug, Parser)]
#[command(name = "cubic-resum", version, about = "Resummation of the imaginary cubic oscillator")]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: CommandKind,
    /// Level `N`.
    #[arg(long, default_value_t = 0)]
    pub level: u32,
    /// Order `K` of the weak series or of the mapped sum.
    #[arg(long)]
    pub order: Option<usize>,
    /// Summation method; repeat for several.
    #[arg(long = "method", value_enum)]
    pub methods: Vec<Method>,
    /// ρ_K schedule; defaults to `fitted` for (a) and (b) and `roots` for (c).
    #[arg(long, value_enum)]
    pub rho: Option<RhoArg>,
    /// Working precision in decimal digits; defaults to max(64, 4K).
    #[arg(long)]
    pub digits: Option<u32>,
    /// Coupling `re,im`; repeatable.
    #[arg(long = "g", value_parser = parse_complex, allow_hyphen_values = true)]
    pub g: Vec<ComplexArg>,
    /// Strong variable `re,im`; repeatable.
    #[arg(long = "chi", value_parser = parse_complex, allow_hyphen_values = true)]
    pub chi: Vec<ComplexArg>,
    #[arg(long, value_enum, default_value = "csv")]
    pub out: OutFormat,
    #[arg(long, default_value = "cache")]
    pub cache_dir: PathBuf,
    /// Overwrite cache files whose content disagrees with a fresh computation.
    #[arg(long)]
    pub force: bool,
    /// Aitken acceleration over orders `accel..=K` (methods a, b, c).
    #[arg(long)]
    pub accel: Option<usize>,
    /// Depth of the strong continued fraction.
    #[arg(long, default_value_t = 25)]
    pub pmax: usize,
    /// Highest strong-coupling order.
    #[arg(long, default_value_t = MAX_STRONG_ORDER)]
    pub nmax: usize,
}

impl RunConfig {
    fn order_or(&self, default: usize) -> Result<usize> {
        let k = self.order.unwrap_or(default);
        if k == 0 {
            return Err(Error::Domain("K must be at least 1".into()));
        }
        Ok(k)
    }

    fn precision(&self, k: usize) -> Result<Precision> {
        match self.digits {
            Some(d) => Precision::digits(d),
            None => Ok(Precision::for_order(k)),
        }
    }
}

/// Exit status and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { Outcome { code, stdout: text, stderr: String::new() } } else { Outcome { code, stdout: String::new(), stderr: text } };
        }
    };
    match execute(&config) {
        Ok(table) => Outcome { code: if table.flagged { 2 } else { 0 }, stdout: table.render(config.out), stderr: String::new() },
        Err(e) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

pub fn execute(config: &RunConfig) -> Result<Table> {
    match config.command {
        CommandKind::Coeffs => cmd_coeffs(config),
        CommandKind::Sum => cmd_sum(config),
        CommandKind::Strong => cmd_strong(config),
        CommandKind::Cf => cmd_cf(config),
        CommandKind::Merge => cmd_merge(config),
        CommandKind::Saddle => cmd_saddle(config),
        CommandKind::MapImage => cmd_map_image(config),
    }
}

// ---------------------------------------------------------------------------
// Tables
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

/// Rows of preformatted cells; `flagged` marks a non-convergent row.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub title: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<String>>,
    pub flagged: bool,
}

impl Table {
    fn new(title: impl Into<String>, columns: &[(&str, &str)]) -> Self {
        Table {
            title: title.into(),
            columns: columns.iter().map(|(n, u)| Column { name: n.to_string(), unit: u.to_string() }).collect(),
            rows: Vec::new(),
            flagged: false,
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: OutFormat) -> String {
        match format {
            OutFormat::Csv => {
                let mut out = self.columns.iter().map(|c| c.name.as_str()).collect::<Vec<_>>().join(",");
                out.push('\n');
                for r in &self.rows {
                    out.push_str(&r.join(","));
                    out.push('\n');
                }
                out
            }
            OutFormat::Json => {
                let cols: Vec<_> = self.columns.iter().map(|c| json!({ "name": c.name, "unit": c.unit })).collect();
                let doc = json!({ "title": self.title, "columns": cols, "rows": self.rows, "flagged": self.flagged });
                let mut s = serde_json::to_string_pretty(&doc).expect("tables serialize");
                s.push('\n');
                s
            }
            OutFormat::PlotData => {
                let mut out = format!("# {}\n# columns:", self.title);
                for (i, c) in self.columns.iter().enumerate() {
                    out.push_str(&format!(" {}:{} [{}]", i + 1, c.name, c.unit));
                }
                out.push('\n');
                for r in &self.rows {
                    out.push_str(&r.join(" "));
                    out.push('\n');
                }
                out
            }
        }
    }
}

fn printed(prec: Precision) -> usize {
    prec.decimal_digits().min(MAX_PRINTED) as usize
}

fn num(x: &Float, prec: Precision) -> String {
    fmt_real(x, printed(prec))
}

fn unc(x: &Float) -> String {
    fmt_real(x, 3)
}

fn parse_real(text: &str, prec: Precision) -> Result<Float> {
    if text.contains('/') {
        let q: Rational = text.parse().map_err(|e| Error::Parse(format!("{text}: {e}")))?;
        Ok(prec.rational(&q))
    } else {
        prec.parse(text)
    }
}

fn parse_point(arg: &ComplexArg, prec: Precision) -> Result<BigComplex> {
    Ok(BigComplex::new(parse_real(&arg.re, prec)?, parse_real(&arg.im, prec)?))
}

// ---------------------------------------------------------------------------
// Caches
// ---------------------------------------------------------------------------

fn weak(config: &RunConfig, level: u32, order: usize) -> Result<WeakSeries> {
    load_or_compute(&config.cache_dir, level, order, CONVENTION)
}

/// Writes `text` unless an existing file disagrees and `force` is off.
fn guarded_write(path: &Path, text: &str, force: bool) -> Result<()> {
    if let Ok(existing) = fs::read_to_string(path) {
        if existing == text {
            return Ok(());
        }
        if !force {
            return Err(Error::CacheMismatch(format!("{} differs from the fresh result; rerun with --force to overwrite", path.display())));
        }
    }
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, text)?;
    Ok(())
}

fn level_pair(config: &RunConfig, k: usize, prec: Precision) -> Result<LevelPairAnalysis> {
    let g0 = weak(config, 0, k + 2)?;
    let g1 = weak(config, 1, k + 2)?;
    analyze_level_pair(&g0, &g1, k, config.nmax, prec)
}

struct StrongCf {
    cf: ContinuedFraction,
    tail: TailSpec,
    /// Tail calibrated one level shallower, for the spread estimate.
    shallow: Option<TailSpec>,
}

fn strong_cf(pair: &LevelPairAnalysis, p_max: usize) -> Result<StrongCf> {
    let coeffs = &pair.ground.coeffs;
    let bits = coeffs[0].prec();
    let shifted: Vec<Float> = coeffs.iter().zip(&pair.ground.uncertainty).map(|(c, u)| Float::with_val(bits, c + u)).collect();
    let cf = cf_from_series(coeffs)?.with_uncertainty_from(&cf_from_series(&shifted)?);
    let tail = calibrate_gamma(&cf, p_max)?;
    let shallow = calibrate_gamma(&cf, p_max - 1).ok();
    Ok(StrongCf { cf, tail, shallow })
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_coeffs(config: &RunConfig) -> Result<Table> {
    let k = config.order.ok_or_else(|| Error::Domain("coeffs needs --order".into()))?;
    let path = cache_path(&config.cache_dir, config.level, CONVENTION);
    let fresh = weak_coefficients(config.level, k, CONVENTION);
    let series = match read_cache(&path) {
        Ok(cached) if cached.level == config.level && cached.convention == CONVENTION && cached.order() >= k => {
            if encode_cache(&cached.truncate(k)) != encode_cache(&fresh) {
                if !config.force {
                    return Err(Error::CacheMismatch(format!("{} disagrees with a fresh computation; rerun with --force", path.display())));
                }
                write_cache(&path, &fresh)?;
            }
            fresh
        }
        Ok(_) if !config.force && path.exists() => {
            let cached = read_cache(&path)?;
            if cached.level != config.level || cached.convention != CONVENTION {
                return Err(Error::CacheMismatch(format!("{} holds level {} / {}; rerun with --force", path.display(), cached.level, cached.convention)));
            }
            if encode_cache(&cached) != encode_cache(&fresh.truncate(cached.order())) {
                return Err(Error::CacheMismatch(format!("{} disagrees with a fresh computation; rerun with --force", path.display())));
            }
            write_cache(&path, &fresh)?;
            fresh
        }
        Err(_) if path.exists() && !config.force => {
            return Err(Error::CacheMismatch(format!("{} is unreadable; rerun with --force", path.display())));
        }
        _ => {
            write_cache(&path, &fresh)?;
            fresh
        }
    };
    let prec = config.precision(k)?;
    let mut t = Table::new(
        format!("weak coefficients E_L, level {}, cache {}", config.level, path.display()),
        &[("L", "1"), ("numerator", "1"), ("denominator", "1"), ("value", "energy"), ("uncertainty", "energy")],
    );
    for (l, c) in series.coeffs.iter().enumerate() {
        t.push(vec![l.to_string(), c.numer().to_string(), c.denom().to_string(), num(&prec.rational(c), prec), "0".into()]);
    }
    Ok(t)
}

fn schedule_for(engine: &OdmEngine, mapping: &MappingSpec, rho: Option<RhoArg>, orders: std::ops::RangeInclusive<usize>, prec: Precision) -> Result<RhoSchedule> {
    let mode = match (rho, mapping.tag) {
        (Some(RhoArg::Fitted), MappingTag::C) => return Err(Error::Domain("mapping (c) has no fitted ρ_K; use --rho roots".into())),
        (Some(RhoArg::Fitted), _) | (None, MappingTag::A | MappingTag::B) => RhoMode::Fitted,
        (Some(RhoArg::Roots), _) | (None, MappingTag::C) => RhoMode::RootsOfDerivative,
    };
    RhoSchedule::build(engine.polys(), mapping, mode, orders, prec)
}

fn cmd_sum(config: &RunConfig) -> Result<Table> {
    if config.g.is_empty() {
        return Err(Error::Domain("sum needs at least one --g".into()));
    }
    let k = config.order_or(55)?;
    let prec = config.precision(k)?;
    let methods = if config.methods.is_empty() { vec![Method::A] } else { config.methods.clone() };
    let points = config.g.iter().map(|g| parse_point(g, prec)).collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(
        format!("E(g) at level {} and K = {k}", config.level),
        &[("g_re", "1"), ("g_im", "1"), ("method", "-"), ("rho", "-"), ("K", "1"), ("E_re", "energy"), ("E_im", "energy"), ("uncertainty", "energy"), ("status", "-")],
    );
    for method in methods {
        let rows = match method.mapping() {
            Some(mapping) => sum_rows_mapping(config, &mapping, k, &points, prec)?,
            None => sum_rows_cf(config, k, &points, prec)?,
        };
        for (g, rho, value, err, ok) in rows {
            t.flagged |= !ok;
            let (v_re, v_im, e) = match &value {
                Some(v) => (num(&v.re, prec), num(&v.im, prec), unc(&err)),
                None => ("nan".into(), "nan".into(), "nan".into()),
            };
            t.push(vec![num(&g.re, prec), num(&g.im, prec), method.tag().into(), rho, k.to_string(), v_re, v_im, e, if ok { "ok".into() } else { "no-convergence".into() }]);
        }
    }
    Ok(t)
}

type SumRow = (BigComplex, String, Option<BigComplex>, Float, bool);

fn sum_rows_mapping(config: &RunConfig, mapping: &MappingSpec, k: usize, points: &[BigComplex], prec: Precision) -> Result<Vec<SumRow>> {
    let series = weak(config, config.level, k + 1)?;
    let engine = OdmEngine::new(&series, mapping, k, prec)?;
    let k_min = config.accel.unwrap_or(k.saturating_sub(1)).max(1);
    let schedule = schedule_for(&engine, mapping, config.rho, k_min..=k, prec)?;
    let model = saddle_constants(mapping, prec);
    let mut rows = Vec::new();
    for g in points {
        let predicted_ok = mapping.tag != MappingTag::A || error_model(g, k, mapping, &model).in_domain;
        let result = match config.accel {
            Some(k0) => engine.sum_accelerated(&schedule, k0, k, g).map(|(a, in_sector)| (a.value, a.error, in_sector)),
            None => engine.sum(&schedule, k, g).map(|a| {
                let err = match a.error {
                    Some(e) => e,
                    None => match engine.sum(&schedule, k - 1, g) {
                        Ok(prev) => prev.value.sub(&a.value).abs(),
                        Err(_) => prec.zero(),
                    },
                };
                (a.value, err, a.in_sector)
            }),
        };
        let rho = schedule.mode.tag().to_string();
        match result {
            Ok((value, err, in_sector)) => {
                let ok = predicted_ok && in_sector && value.is_finite();
                rows.push((g.clone(), rho, Some(value), err, ok));
            }
            Err(Error::Inversion { .. }) | Err(Error::Breakdown { .. }) => rows.push((g.clone(), rho, None, prec.zero(), false)),
            Err(e) => return Err(e),
        }
    }
    Ok(rows)
}

fn sum_rows_cf(config: &RunConfig, k: usize, points: &[BigComplex], prec: Precision) -> Result<Vec<SumRow>> {
    if config.level != 0 {
        return Err(Error::Domain("the strong continued fraction is built for the ground state only".into()));
    }
    let pair = level_pair(config, k, prec)?;
    let scf = strong_cf(&pair, config.pmax)?;
    let mut rows = Vec::new();
    for g in points {
        let value = cf_energy(&scf.cf, g, config.pmax, &scf.tail.tail())?;
        let err = match &scf.shallow {
            Some(s) => cf_energy(&scf.cf, g, config.pmax - 1, &s.tail())?.sub(&value).abs(),
            None => prec.zero(),
        };
        let ok = value.is_finite();
        rows.push((g.clone(), format!("gamma={}", fmt_real(&scf.tail.gamma, 12)), Some(value), err, ok));
    }
    Ok(rows)
}

fn cmd_strong(config: &RunConfig) -> Result<Table> {
    let k = config.order_or(150)?;
    let prec = config.precision(k)?;
    if config.level > 1 {
        return Err(Error::Domain("strong series are produced for levels 0 and 1".into()));
    }
    let pair = level_pair(config, k, prec)?;
    let series = if config.level == 0 { &pair.ground } else { &pair.excited };
    guarded_write(&config.cache_dir.join(format!("strong-n{}-K{k}.txt", config.level)), &series.encode(), config.force)?;
    guarded_write(&config.cache_dir.join(format!("merge-K{k}.csv")), &merge_report(&pair, prec).render(OutFormat::Csv), config.force)?;
    if config.level == 0 {
        if let Ok(scf) = strong_cf(&pair, config.pmax) {
            guarded_write(&config.cache_dir.join(format!("cf-K{k}.txt")), &scf.cf.export(Some(&scf.tail), printed(prec)), config.force)?;
        }
    }
    let mut t = Table::new(format!("strong-coupling coefficients E^qqc_n, level {}, K = {k}", config.level), &[("n", "1"), ("coefficient", "energy"), ("uncertainty", "energy")]);
    for (n, (c, u)) in series.coeffs.iter().zip(&series.uncertainty).enumerate() {
        t.push(vec![n.to_string(), num(c, prec), unc(u)]);
    }
    t.flagged = series.truncated;
    Ok(t)
}

fn merge_report(pair: &LevelPairAnalysis, prec: Precision) -> Table {
    let m = &pair.merge;
    let mut t = Table::new(format!("level merging, K = {}", m.delta.order_k), &[("quantity", "-"), ("value", "-"), ("uncertainty", "-")]);
    let z = prec.zero();
    t.push(vec!["chi_c".into(), num(&m.chi_c, prec), unc(&m.chi_c_uncertainty)]);
    t.push(vec!["E_qqc(chi_c)".into(), num(&m.energy_at_chi_c, prec), unc(&m.energy_uncertainty)]);
    t.push(vec!["dDelta01/dchi(chi_c)".into(), num(&m.slope, prec), unc(&z)]);
    t.push(vec!["Delta01(0)".into(), num(&m.delta.coeffs[0], prec), unc(&m.delta.uncertainty[0])]);
    t.push(vec!["S01(0)".into(), num(&m.sum.coeffs[0], prec), unc(&m.sum.uncertainty[0])]);
    t.push(vec!["pade_m".into(), m.pade_orders.0.to_string(), "0".into()]);
    t.push(vec!["pade_n".into(), m.pade_orders.1.to_string(), "0".into()]);
    t
}

fn cmd_merge(config: &RunConfig) -> Result<Table> {
    let k = config.order_or(150)?;
    let prec = config.precision(k)?;
    let pair = level_pair(config, k, prec)?;
    if config.out != OutFormat::PlotData {
        return Ok(merge_report(&pair, prec));
    }
    let m = &pair.merge;
    let (pm, pn) = m.pade_orders;
    let approximants = |c: &[Float]| -> Result<(crate::pade::Pade, crate::pade::Pade)> { Ok((pade(c, pm, pn)?, pade(c, pm.saturating_sub(1), pn.saturating_sub(1))?)) };
    let (d, d_low) = approximants(&m.delta.coeffs)?;
    let (s, s_low) = approximants(&m.sum.coeffs)?;
    let mut t = Table::new(
        format!("Delta01 and S01 on the real chi axis from [{pm}/{pn}] Pade approximants, K = {k}"),
        &[("chi", "g^(-4/5)"), ("Delta01", "energy^2"), ("Delta01_unc", "energy^2"), ("S01", "energy"), ("S01_unc", "energy")],
    );
    for i in 0..MERGE_PLOT_POINTS {
        let x = prec.ratio(-185 * (MERGE_PLOT_POINTS as i64 - 1) + 100 * i as i64, 100 * (MERGE_PLOT_POINTS as i64 - 1));
        let (dv, sv) = (d.eval(&x), s.eval(&x));
        let du = Float::with_val(prec.bits(), &dv - d_low.eval(&x)).abs();
        let su = Float::with_val(prec.bits(), &sv - s_low.eval(&x)).abs();
        t.push(vec![fmt_real(&x, 6), num(&dv, prec), unc(&du), num(&sv, prec), unc(&su)]);
    }
    Ok(t)
}

fn cmd_cf(config: &RunConfig) -> Result<Table> {
    if config.level != 0 {
        return Err(Error::Domain("the strong continued fraction is built for the ground state only".into()));
    }
    let k = config.order_or(150)?;
    let prec = config.precision(k)?;
    let pair = level_pair(config, k, prec)?;
    let scf = strong_cf(&pair, config.pmax)?;
    let gamma = fmt_real(&scf.tail.gamma, 12);
    if config.chi.is_empty() && config.g.is_empty() {
        let mut t = Table::new(format!("strong continued fraction a_p, K = {k}, gamma({}) = {gamma}", config.pmax), &[("p", "1"), ("a_p", "1"), ("uncertainty", "1"), ("gamma_p", "1")]);
        for (i, (a, u)) in scf.cf.coeffs.iter().zip(&scf.cf.uncertainty).enumerate() {
            let p = i + 1;
            let g = calibrate_gamma(&scf.cf, p).map(|s| num(&s.gamma, prec)).unwrap_or_default();
            t.push(vec![p.to_string(), num(a, prec), unc(u), g]);
        }
        t.flagged = scf.cf.breakdown.is_some();
        return Ok(t);
    }
    let mut t = Table::new(
        format!("strong continued fraction values, K = {k}, p_max = {}, gamma = {gamma}", config.pmax),
        &[("variable", "-"), ("re", "1"), ("im", "1"), ("value_re", "energy"), ("value_im", "energy"), ("uncertainty", "energy")],
    );
    let spread = |value: &BigComplex, shallow: Option<BigComplex>| shallow.map_or(prec.zero(), |s| s.sub(value).abs());
    for chi in &config.chi {
        let x = parse_point(chi, prec)?;
        let v = cf_eval(&scf.cf, &x, config.pmax, &scf.tail.tail())?;
        let s = scf.shallow.as_ref().map(|s| cf_eval(&scf.cf, &x, config.pmax - 1, &s.tail())).transpose()?;
        t.push(vec!["chi".into(), num(&x.re, prec), num(&x.im, prec), num(&v.re, prec), num(&v.im, prec), unc(&spread(&v, s))]);
    }
    for g in &config.g {
        let x = parse_point(g, prec)?;
        let v = cf_energy(&scf.cf, &x, config.pmax, &scf.tail.tail())?;
        let s = scf.shallow.as_ref().map(|s| cf_energy(&scf.cf, &x, config.pmax - 1, &s.tail())).transpose()?;
        t.push(vec!["g".into(), num(&x.re, prec), num(&x.im, prec), num(&v.re, prec), num(&v.im, prec), unc(&spread(&v, s))]);
    }
    Ok(t)
}

fn selected_mappings(config: &RunConfig) -> Result<Vec<MappingSpec>> {
    if config.methods.is_empty() {
        return Ok(vec![MappingSpec::a(), MappingSpec::b(), MappingSpec::c()]);
    }
    config.methods.iter().map(|m| m.mapping().ok_or_else(|| Error::Domain("method cf has no mapping".into()))).collect()
}

fn cmd_saddle(config: &RunConfig) -> Result<Table> {
    let prec = config.precision(0)?;
    let mut t = Table::new(
        "saddle-point constants of the mappings",
        &[("mapping", "-"), ("mu_c", "1"), ("lambda_c", "1"), ("C2", "1"), ("R", "1"), ("uncertainty", "1")],
    );
    for m in selected_mappings(config)? {
        let c = saddle_constants(&m, prec);
        t.push(vec![m.tag.tag().into(), num(&c.mu_c, prec), num(&c.lambda_c, prec), num(&c.c2, prec), num(&c.r, prec), unc(&c.residual)]);
    }
    Ok(t)
}

fn cmd_map_image(config: &RunConfig) -> Result<Table> {
    let k = config.order_or(55)?;
    let prec = config.precision(k)?;
    let points: Vec<BigComplex> = if config.g.is_empty() {
        (0..MAP_IMAGE_POINTS)
            .map(|i| {
                let e = Float::with_val(prec.bits(), -2.0 + 5.0 * i as f64 / (MAP_IMAGE_POINTS - 1) as f64);
                BigComplex::from_real(-e.exp10())
            })
            .collect()
    } else {
        config.g.iter().map(|g| parse_point(g, prec)).collect::<Result<_>>()?
    };
    let mut t = Table::new(
        format!("image of g under g = rho_K zeta(lambda), K = {k}"),
        &[("mapping", "-"), ("rho", "1"), ("g_re", "1"), ("g_im", "1"), ("lambda_re", "1"), ("lambda_im", "1"), ("uncertainty", "1")],
    );
    for m in selected_mappings(config)? {
        let rho = match (m.tag, config.rho) {
            (MappingTag::C, _) | (_, Some(RhoArg::Roots)) => {
                let series = weak(config, config.level, k + 1)?;
                let engine = OdmEngine::new(&series, &m, k, prec)?;
                schedule_for(&engine, &m, Some(RhoArg::Roots), k..=k, prec)?.get(k).cloned().expect("schedule holds K")
            }
            _ => RhoSchedule::fitted(&m, [k], prec)?.get(k).cloned().expect("schedule holds K"),
        };
        for g in &points {
            match invert_mapping(g, &rho, &m, prec) {
                Ok(inv) => t.push(vec![m.tag.tag().into(), fmt_real(&rho, 12), fmt_real(&g.re, 12), fmt_real(&g.im, 12), fmt_real(&inv.lambda.re, 16), fmt_real(&inv.lambda.im, 16), "0".into()]),
                Err(Error::Inversion { .. }) => {
                    t.flagged = true;
                    t.push(vec![m.tag.tag().into(), fmt_real(&rho, 12), fmt_real(&g.re, 12), fmt_real(&g.im, 12), "nan".into(), "nan".into(), "nan".into()]);
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp(name: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("cubic-resum-cli-{name}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        dir
    }

    fn call(args: &[&str]) -> Outcome {
        run(std::iter::once("cubic-resum").chain(args.iter().copied()))
    }

    #[test]
    fn coeffs_writes_the_cache_file() {
        let dir = tmp("coeffs");
        let d = dir.to_str().unwrap();
        let out = call(&["coeffs", "--level", "0", "--order", "3", "--cache-dir", d]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let text = fs::read_to_string(cache_path(&dir, 0, CONVENTION)).unwrap();
        assert!(text.lines().any(|l| l == "1 11 288"));
        let again = call(&["coeffs", "--level", "0", "--order", "3", "--cache-dir", d]);
        assert_eq!(again, out);
        assert_eq!(fs::read_to_string(cache_path(&dir, 0, CONVENTION)).unwrap(), text);
        let excited = call(&["coeffs", "--level", "1", "--order", "0", "--cache-dir", d]);
        assert!(fs::read_to_string(cache_path(&dir, 1, CONVENTION)).unwrap().lines().any(|l| l == "0 3 2"), "{}", excited.stderr);
        let _ = fs::remove_dir_all(&dir);
    }

    #[test]
    fn corrupted_cache_needs_force() {
        let dir = tmp("force");
        let d = dir.to_str().unwrap();
        assert_eq!(call(&["coeffs", "--order", "2", "--cache-dir", d]).code, 0);
        let path = cache_path(&dir, 0, CONVENTION);
        fs::write(&path, fs::read_to_string(&path).unwrap().replace("1 11 288", "1 11 289")).unwrap();
        let refused = call(&["coeffs", "--order", "2", "--cache-dir", d]);
        assert_eq!(refused.code, 1);
        assert!(refused.stderr.contains("--force"));
        assert_eq!(call(&["coeffs", "--order", "2", "--cache-dir", d, "--force"]).code, 0);
        assert!(fs::read_to_string(&path).unwrap().contains("1 11 288"));
        let _ = fs::remove_dir_all(&dir);
    }

    #[test]
    fn flagged_rows_exit_with_two() {
        let dir = tmp("flag");
        let d = dir.to_str().unwrap();
        let out = call(&["sum", "--order", "12", "--method", "a", "--g", "-0.5,0", "--g", "1,0", "--cache-dir", d]);
        assert_eq!(out.code, 2, "{}", out.stderr);
        let lines: Vec<&str> = out.stdout.lines().collect();
        assert!(lines[1].ends_with("no-convergence") && lines[2].ends_with(",ok"));
        let _ = fs::remove_dir_all(&dir);
    }

    #[test]
    fn bad_arguments_exit_with_one() {
        assert_eq!(call(&["sum", "--g", "x,1"]).code, 1);
        assert_eq!(call(&["saddle", "--digits", "10"]).code, 1);
    }

    #[test]
    fn formats_are_self_describing() {
        let mut t = Table::new("demo", &[("x", "1"), ("y", "energy")]);
        t.push(vec!["1".into(), "2".into()]);
        assert_eq!(t.render(OutFormat::Csv), "x,y\n1,2\n");
        assert_eq!(t.render(OutFormat::PlotData), "# demo\n# columns: 1:x [1] 2:y [energy]\n1 2\n");
        let v: serde_json::Value = serde_json::from_str(&t.render(OutFormat::Json)).unwrap();
        assert_eq!(v["columns"][1]["unit"], "energy");
        assert_eq!(v["rows"][0][1], "2");
    }

    #[test]
    fn complex_arguments() {
        assert_eq!(parse_complex("-1,0").unwrap(), ComplexArg { re: "-1".into(), im: "0".into() });
        assert_eq!(parse_complex("288/49").unwrap().im, "0");
        assert!(parse_complex("1,i").is_err());
        let p = Precision::digits(40).unwrap();
        let g = parse_point(&parse_complex("288/49").unwrap(), p).unwrap();
        assert!((g.re.to_f64() - 288.0 / 49.0).abs() < 1e-15);
    }
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn output_is_byte_identical(g in 0.05f64..30.0, arg in -3.0f64..3.0, out in prop::sample::select(vec!["csv", "json", "plot-data"])) {
            let dir = std::env::temp_dir().join(format!("cubic-resum-cli-det-{}", std::process::id()));
            let d = dir.to_str().unwrap().to_string();
            let point = format!("{},{}", g * arg.cos(), g * arg.sin());
            let args = ["cubic-resum", "sum", "--order", "14", "--method", "a", "--method", "c", "--g", &point, "--out", out, "--cache-dir", &d];
            let first = run(args);
            let second = run(args);
            prop_assert!(first.code != 1, "{}", first.stderr);
            prop_assert_eq!(first, second);
        }
    }
}
