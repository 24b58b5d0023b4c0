//! Driver behind the `lzeta` binary: argument handling, rendering, exit codes.

use std::fmt::Write as _;

use clap::{Parser, ValueEnum};
use lzeta::oracle::{oracle_alpha, DEFAULT_DEPTH, DEFAULT_TRUNCATION};
use lzeta::{
    assemble_with, candidate_poles, check_khovanskii_nondegeneracy, check_weak_nondegeneracy, conical_partition,
    convergence_band, is_prime, make_simple, truncated_z0, Domain, Error, FanVariant, LatticeVector, LaurentPolynomial,
    NewtonPolytope, NondegeneracyReport, ZetaFunction,
};
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_DEGENERATE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_PRIME: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Table,
    Json,
    Poles,
    Check,
    Oracle,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Fan {
    #[default]
    Partition,
    Simple,
}

impl From<Fan> for FanVariant {
    fn from(f: Fan) -> Self {
        match f {
            Fan::Partition => FanVariant::Partition,
            Fan::Simple => FanVariant::Simple,
        }
    }
}

fn parse_min_val(s: &str) -> Result<(u32, u32), String> {
    let (m, n) = s.split_once(',').ok_or("expected M,N")?;
    let m = m.trim().parse().map_err(|e| format!("bad M: {e}"))?;
    let n = n.trim().parse().map_err(|e| format!("bad N: {e}"))?;
    Ok((m, n))
}

/// Local zeta functions of non-degenerate bivariate Laurent polynomials.
#[derive(Clone, Debug, Parser)]
#[command(name = "lzeta", version)]
pub struct RunConfig {
    /// The Laurent polynomial, e.g. "x^-3 + y^-2 + y^4".
    #[arg(long = "poly")]
    pub polynomial: String,

    /// Residue characteristic p.
    #[arg(long, default_value = "7")]
    pub prime: String,

    #[arg(long, value_enum, default_value_t = Mode::Table)]
    pub mode: Mode,

    /// Real s at which to evaluate (required for oracle mode).
    #[arg(long = "s", allow_negative_numbers = true)]
    pub eval_s: Option<f64>,

    /// Oracle truncation M of the stratum box.
    #[arg(long = "trunc", default_value_t = DEFAULT_TRUNCATION)]
    pub truncation: u32,

    /// Oracle refinement depth D.
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    pub depth: u32,

    /// Oracle domain: valuations of x and y at least M and N.
    #[arg(long = "min-val", value_parser = parse_min_val, default_value = "0,0")]
    pub min_val: (u32, u32),

    #[arg(long = "fan", value_enum, default_value_t = Fan::Partition)]
    pub fan_variant: Fan,

    /// Print (q, t) monomials instead of q^{a+bs}.
    #[arg(long)]
    pub raw: bool,
}

/// Everything a run produces.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl RunOutput {
    fn fail(mut self, code: i32, kind: &str, msg: impl std::fmt::Display) -> Self {
        let _ = writeln!(self.stderr, "error[{kind}]: {msg}");
        self.code = code;
        self
    }
}

fn classify(e: &Error) -> (i32, &'static str) {
    match e {
        Error::Syntax { .. } | Error::ExponentOverflow(_) | Error::ZeroPolynomial => (EXIT_PARSE, "parse"),
        Error::NotPrime(_) | Error::BadPrime { .. } => (EXIT_PRIME, "prime"),
        Error::Degenerate { .. } => (EXIT_DEGENERATE, "degenerate"),
        Error::LowDimension { .. } => (EXIT_OTHER, "dimension"),
        Error::PoleHit { .. } => (EXIT_OTHER, "pole"),
        Error::OracleRange { .. } => (EXIT_OTHER, "range"),
        Error::InvalidParameter(_) => (EXIT_OTHER, "usage"),
        _ => (EXIT_OTHER, "internal"),
    }
}

/// Parses `args` (including the program name) and runs.
pub fn run_args<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(cfg) => run(&cfg),
        Err(e) => {
            let rendered = e.render().to_string();
            match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => RunOutput {
                    code: EXIT_OK,
                    stdout: rendered,
                    stderr: String::new(),
                },
                _ => RunOutput {
                    code: EXIT_OTHER,
                    stdout: String::new(),
                    stderr: format!("error[usage]: {rendered}"),
                },
            }
        }
    }
}

pub fn run(cfg: &RunConfig) -> RunOutput {
    let out = RunOutput::default();
    let p: u64 = match cfg.prime.trim().parse() {
        Ok(p) if is_prime(p) => p,
        _ => return out.fail(EXIT_PRIME, "prime", format!("'{}' is not a prime", cfg.prime)),
    };
    let f: LaurentPolynomial = match cfg.polynomial.parse() {
        Ok(f) => f,
        Err(e) => return out.fail(EXIT_PARSE, "parse", e),
    };
    if f.is_zero() {
        return out.fail(EXIT_PARSE, "parse", "the polynomial is empty (all terms cancel)");
    }
    let polytope = match NewtonPolytope::new(&f) {
        Ok(p) => p,
        Err(e) => {
            let (code, kind) = classify(&e);
            return out.fail(code, kind, e);
        }
    };
    let mut out = out;
    shift_warning(&f, p, &mut out);
    let result = match cfg.mode {
        Mode::Table => table(cfg, &f, &polytope, p, &mut out),
        Mode::Json => json_mode(cfg, &f, &polytope, p, &mut out),
        Mode::Poles => poles(&polytope, &mut out),
        Mode::Check => check(&f, &polytope, p, &mut out),
        Mode::Oracle => oracle(cfg, &f, p, &mut out),
    };
    match result {
        Ok(code) => {
            out.code = code;
            out
        }
        Err(e) => {
            let (code, kind) = classify(&e);
            out.fail(code, kind, e)
        }
    }
}

fn shift_warning(f: &LaurentPolynomial, p: u64, out: &mut RunOutput) {
    if let Ok(c) = f.clear_denominators() {
        let shift = c.shift.i.max(c.shift.j);
        if shift > 0 && p <= shift as u64 {
            let _ = writeln!(
                out.stderr,
                "warning: p = {p} does not exceed the clearing exponent {shift}"
            );
        }
    }
}

/// Axis rays first (e₂ then e₁), then the remaining rays by decreasing angle.
fn report_order(rays: &[LatticeVector]) -> Vec<LatticeVector> {
    let mut out = vec![LatticeVector::E2, LatticeVector::E1];
    let mut rest: Vec<LatticeVector> = rays
        .iter()
        .copied()
        .filter(|r| *r != LatticeVector::E1 && *r != LatticeVector::E2)
        .collect();
    rest.sort_by(|a, b| a.det(b).cmp(&0));
    out.extend(rest);
    out
}

fn pole_line(gens: &[LatticeVector], polytope: &NewtonPolytope) -> String {
    candidate_poles(&report_order(gens), polytope)
        .iter()
        .map(|p| lzeta::fmt_rational(&p.real_part))
        .collect::<Vec<_>>()
        .join(", ")
}

fn fan_rays(polytope: &NewtonPolytope) -> (Vec<LatticeVector>, Vec<LatticeVector>) {
    let part = conical_partition(polytope);
    let simple = make_simple(&part);
    (part.rays, simple.rays)
}

fn render_table(z: &ZetaFunction, raw: bool) -> String {
    let n_text = |n: u64| lzeta::zetafun::render_unit_integral(&n.to_string(), raw);
    let mut rows: Vec<[String; 4]> = vec![[
        "Cone Generators".into(),
        "Corresponding Face".into(),
        "L_Δ(q^{-s})".into(),
        "S_Δ(q^{-s})".into(),
    ]];
    for c in &z.cones {
        let gens = c
            .cone
            .generators
            .iter()
            .map(|g| g.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        let s = if raw {
            c.s_term.render_raw()
        } else {
            c.s_term.render_s()
        };
        rows.push([gens, c.cone.face.to_string(), n_text(c.n_delta), s]);
    }
    rows.push(["L0".into(), "full polytope".into(), n_text(z.n0), "1".into()]);
    let widths: Vec<usize> = (0..4)
        .map(|k| rows.iter().map(|r| r[k].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (i, row) in rows.iter().enumerate() {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:<w$}", w = *w))
            .collect();
        let _ = writeln!(out, "{}", line.join(" | ").trim_end());
        if i == 0 {
            let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
            let _ = writeln!(out, "{}", rule.join("-+-"));
        }
    }
    out
}

fn table(
    cfg: &RunConfig,
    f: &LaurentPolynomial,
    polytope: &NewtonPolytope,
    p: u64,
    out: &mut RunOutput,
) -> lzeta::Result<i32> {
    let z = assemble_with(f, p, cfg.fan_variant.into())?;
    let (part_rays, simple_rays) = fan_rays(polytope);
    let _ = writeln!(
        out.stdout,
        "f = {}    p = {p}    fan = {}",
        z.polynomial,
        cfg.fan_variant.to_possible_value().expect("not skipped").get_name()
    );
    let _ = writeln!(out.stdout);
    out.stdout.push_str(&render_table(&z, cfg.raw));
    let _ = writeln!(out.stdout);
    let counts: Vec<String> = z
        .cones
        .iter()
        .map(|c| format!("N[{}]={}", c.cone.label, c.n_delta))
        .collect();
    let _ = writeln!(out.stdout, "counts: N0={}, {}", z.n0, counts.join(", "));
    let _ = writeln!(out.stdout, "pole real parts: {}", pole_line(&part_rays, polytope));
    let _ = writeln!(out.stdout, "band: {}", convergence_band(&part_rays, polytope));
    if simple_rays != part_rays {
        let _ = writeln!(
            out.stdout,
            "simple fan pole real parts: {}",
            pole_line(&simple_rays, polytope)
        );
        let _ = writeln!(
            out.stdout,
            "simple fan band: {}",
            convergence_band(&simple_rays, polytope)
        );
    }
    if let Some(s) = cfg.eval_s {
        let v = z.evaluate(p as f64, s)?;
        let _ = writeln!(out.stdout, "Z0(s={s}) at q={p}: {v}");
    }
    Ok(0)
}

fn poles(polytope: &NewtonPolytope, out: &mut RunOutput) -> lzeta::Result<i32> {
    let (part_rays, simple_rays) = fan_rays(polytope);
    for (name, rays) in [("partition", &part_rays), ("simple", &simple_rays)] {
        let _ = writeln!(out.stdout, "[{name}]");
        for pd in candidate_poles(&report_order(rays), polytope) {
            let _ = writeln!(
                out.stdout,
                "  {:>8}  d={:<4} from {}",
                lzeta::fmt_rational(&pd.real_part),
                pd.d,
                pd.source
            );
        }
        let _ = writeln!(out.stdout, "  band: {}", convergence_band(rays, polytope));
    }
    let extra: Vec<String> = simple_rays
        .iter()
        .filter(|r| !part_rays.contains(r))
        .map(|r| r.to_string())
        .collect();
    if !extra.is_empty() {
        let _ = writeln!(out.stdout, "rays added by refinement: {}", extra.join(", "));
    }
    Ok(0)
}

fn write_report(title: &str, r: &NondegeneracyReport, out: &mut RunOutput) {
    let _ = writeln!(
        out.stdout,
        "{title} (p = {}): {}",
        r.p,
        if r.overall { "pass" } else { "FAIL" }
    );
    let wf = r
        .entries
        .iter()
        .map(|e| e.face.to_string().chars().count())
        .max()
        .unwrap_or(0);
    let wc = r
        .entries
        .iter()
        .map(|e| e.cleared.to_string().chars().count())
        .max()
        .unwrap_or(0);
    for e in &r.entries {
        let status = match e.witness {
            Some([x, y]) => format!("degenerate, witness ({x},{y})"),
            None => "ok".into(),
        };
        let _ = writeln!(
            out.stdout,
            "  {:<wf$}  {:<wc$}  {}  [{}]",
            e.face.to_string(),
            e.cleared.to_string(),
            status,
            e.label
        );
    }
}

fn check(f: &LaurentPolynomial, polytope: &NewtonPolytope, p: u64, out: &mut RunOutput) -> lzeta::Result<i32> {
    let weak = check_weak_nondegeneracy(f, &conical_partition(polytope), p)?;
    let kh = check_khovanskii_nondegeneracy(f, p)?;
    write_report("weak non-degeneracy", &weak, out);
    write_report("Khovanskii non-degeneracy", &kh, out);
    if weak.overall {
        Ok(EXIT_OK)
    } else {
        let bad = weak.first_degenerate().expect("failing report has an entry");
        let _ = writeln!(
            out.stderr,
            "error[degenerate]: face {} is singular at {:?}",
            bad.face,
            bad.witness.unwrap_or_default()
        );
        Ok(EXIT_DEGENERATE)
    }
}

fn oracle(cfg: &RunConfig, f: &LaurentPolynomial, p: u64, out: &mut RunOutput) -> lzeta::Result<i32> {
    let Some(s) = cfg.eval_s else {
        return Err(Error::InvalidParameter("oracle mode needs --s".into()));
    };
    let est = truncated_z0(f, p, s, cfg.truncation, cfg.depth, cfg.min_val)?;
    let domain = match cfg.min_val {
        (0, 0) => Some(Domain::Full),
        (1, 1) => Some(Domain::Interior),
        _ => None,
    };
    let alpha = oracle_alpha(f).map_or_else(|| "+inf".into(), |a| lzeta::fmt_rational(&a));
    let _ = writeln!(
        out.stdout,
        "p = {p}, s = {s}, M = {}, D = {}, min_val = ({},{}), oracle range (0, {alpha})",
        cfg.truncation, cfg.depth, cfg.min_val.0, cfg.min_val.1
    );
    let _ = writeln!(out.stdout, "oracle:  {:.12} ± {:.3e}", est.value, est.error_bound);
    let Some(domain) = domain else {
        let _ = writeln!(out.stdout, "formula: not available for this domain");
        return Ok(EXIT_OK);
    };
    let z = assemble_with(f, p, cfg.fan_variant.into())?;
    let v = z.evaluate_on(domain, p as f64, s)?;
    let agree = est.brackets(v);
    let _ = writeln!(out.stdout, "formula: {v:.12}");
    let _ = writeln!(
        out.stdout,
        "difference {:.3e} {} bound",
        (v - est.value).abs(),
        if agree { "within" } else { "OUTSIDE" }
    );
    if agree {
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(out.stderr, "error[mismatch]: formula and oracle disagree");
        Ok(EXIT_OTHER)
    }
}

fn json_mode(
    cfg: &RunConfig,
    f: &LaurentPolynomial,
    polytope: &NewtonPolytope,
    p: u64,
    out: &mut RunOutput,
) -> lzeta::Result<i32> {
    let part = conical_partition(polytope);
    let simple = make_simple(&part);
    let weak = check_weak_nondegeneracy(f, &part, p)?;
    let z = assemble_with(f, p, cfg.fan_variant.into())?;
    let mut doc = json!({
        "polynomial": f.to_string(),
        "p": p,
        "polytope": polytope,
        "partition": part,
        "simple_fan": simple,
        "nondegeneracy": weak,
        "zeta": z,
        "poles": {
            "partition": candidate_poles(&part.rays, polytope),
            "simple": candidate_poles(&simple.rays, polytope),
        },
        "band": {
            "partition": convergence_band(&part.rays, polytope),
            "simple": convergence_band(&simple.rays, polytope),
        },
    });
    if let Some(s) = cfg.eval_s {
        doc["evaluation"] = json!({ "s": s, "q": p, "value": z.evaluate(p as f64, s)? });
    }
    out.stdout = canonical_json(&doc);
    out.stdout.push('\n');
    Ok(EXIT_OK)
}

/// Pretty JSON with sorted keys.
pub fn canonical_json(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("values always serialize")
}
