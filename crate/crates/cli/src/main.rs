//! `extquot`: extended quotients and `GL(n)` parameters from the command
//! line. Every command prints one JSON document (keys sorted) or, with
//! `--table`, the same data as aligned text. Errors go to stderr as a single
//! JSON line `{"error": code, "detail": message}` with a nonzero exit status.

mod table;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use extquot_core::abgroup::{cokernel, smith_normal_form, AbGroupError, IntegerMatrix};
use extquot_core::extquot::{ExtQuotError, ExtendedQuotient};
use extquot_core::langlands::g2::g2_ramified_table;
use extquot_core::langlands::{
    all_generic_fixed_pairs, check_base_change_diagram, fiber_count_at, infinitesimal_character_i_s,
    kl_triple, mu_map, parse_segments, springer_type_a, LanglandsError, QMode,
};
use extquot_core::scenario::{embedded_presets, ScenarioError};
use extquot_core::torus::TorusError;
use extquot_core::weyl::{PresetTag, WeylElement};
use extquot_core::{Coordinate, Scenario, ScenarioConfig, TorusPoint};

#[derive(Parser)]
#[command(name = "extquot", version, about = "Extended quotients T//W and their Langlands parameters")]
struct Cli {
    /// Preset name (gl1..gl6, sl2, g2_ramified, g2_full) or path to a preset JSON file.
    #[arg(long, global = true)]
    preset: Option<String>,
    /// Extra value-group generator, `name` (free) or `name:order` (root of unity).
    #[arg(long = "extend", global = true)]
    extend: Vec<String>,
    /// Render as aligned text instead of JSON.
    #[arg(long, global = true)]
    table: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Strata of T//W with dimensions and irreducible components.
    Components,
    /// Fiber of pi_s over a multiset sigma of torus coordinates.
    Fibers {
        /// Comma-separated coordinates, e.g. `qh^2,1,qh^-2`.
        #[arg(long)]
        sigma: String,
        /// `1` or a single generator.
        #[arg(long, default_value = "qh")]
        s: String,
    },
    /// The parameter mu(t, w) of a fixed pair.
    Mu {
        #[arg(long)]
        point: String,
        /// Class index, or a cycle type such as `2,1`.
        #[arg(long)]
        w: String,
    },
    /// The KL triple (sigma, u, rho) of a multisegment, with the check sigma u sigma^-1 = u^q.
    Kl {
        /// Segments `center:length,...`.
        #[arg(long)]
        segments: String,
        /// `symbolic` or a perfect square >= 4.
        #[arg(long, default_value = "symbolic")]
        q: String,
    },
    /// The base change endomorphism (t, w) -> (t^f, w).
    Basechange {
        #[arg(short = 'f', long = "degree", default_value_t = 1)]
        f: u64,
    },
    /// Second-kind labels (t, tau) over a point.
    Labels {
        #[arg(long)]
        point: String,
    },
    /// Smith normal form of an integer matrix.
    Snf {
        /// JSON rows, e.g. `[[2,4],[6,8]]`.
        #[arg(long)]
        matrix: String,
    },
    /// Embedded presets.
    ScenarioList,
}

struct Failure {
    code: &'static str,
    detail: String,
}

impl Failure {
    fn new(code: &'static str, detail: impl Into<String>) -> Self {
        Self {
            code,
            detail: detail.into(),
        }
    }
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        let code = match &e {
            ScenarioError::UnknownPreset(_) => "unknown_preset",
            ScenarioError::Io { .. } => "io",
            ScenarioError::Malformed { .. } => "malformed_preset",
            ScenarioError::Weyl(_) => "bad_group",
            ScenarioError::Torus(_) => "bad_value_group",
        };
        Failure::new(code, e.to_string())
    }
}

impl From<TorusError> for Failure {
    fn from(e: TorusError) -> Self {
        let code = match &e {
            TorusError::Parse { .. } => "parse",
            TorusError::RankMismatch { .. } => "rank_mismatch",
            TorusError::ValueGroup(_) => "bad_value_group",
        };
        Failure::new(code, e.to_string())
    }
}

impl From<LanglandsError> for Failure {
    fn from(e: LanglandsError) -> Self {
        let code = match &e {
            LanglandsError::NotGlN(_) => "unsupported_preset",
            LanglandsError::NotFixed { .. } => "not_fixed",
            LanglandsError::NotPerfectSquare(_) => "not_perfect_square",
            LanglandsError::Parse(_) => "parse",
            LanglandsError::RankMismatch { .. } => "rank_mismatch",
            LanglandsError::ZeroDegree => "invalid_argument",
            LanglandsError::Torus(t) => return t.clone().into(),
            LanglandsError::Weyl(_) => "unsupported_preset",
        };
        Failure::new(code, e.to_string())
    }
}

impl From<ExtQuotError> for Failure {
    fn from(e: ExtQuotError) -> Self {
        let code = match &e {
            ExtQuotError::Torus(t) => return t.clone().into(),
            ExtQuotError::Weyl(_) => "unsupported_preset",
            ExtQuotError::UnsupportedIsotropy(_) => "unsupported_isotropy",
            ExtQuotError::ZeroDegree => "invalid_argument",
        };
        Failure::new(code, e.to_string())
    }
}

impl From<AbGroupError> for Failure {
    fn from(e: AbGroupError) -> Self {
        Failure::new("parse", e.to_string())
    }
}

type Outcome = Result<Value, Failure>;

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn scenario(cli: &Cli) -> Result<Scenario, Failure> {
    let preset = cli
        .preset
        .clone()
        .ok_or_else(|| Failure::new("missing_argument", "this command needs --preset"))?;
    Ok(Scenario::load(&ScenarioConfig {
        preset,
        extensions: cli.extend.clone(),
    })?)
}

fn require_gl(s: &Scenario) -> Result<(), Failure> {
    if s.group.preset_tag != PresetTag::GlN {
        return Err(Failure::new(
            "unsupported_preset",
            format!("{} is not a gl_n preset", s.name),
        ));
    }
    Ok(())
}

fn matrix_json(m: &IntegerMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|i| {
            Value::Array(
                m.row(i)
                    .iter()
                    .map(|x| i64::try_from(x).map_or_else(|_| json!(x.to_string()), |v| json!(v)))
                    .collect(),
            )
        })
        .collect();
    Value::Array(rows)
}

fn cmd_components(cli: &Cli) -> Outcome {
    let s = scenario(cli)?;
    let eq = ExtendedQuotient::build(&s);
    let mut out = json!({
        "preset": s.name,
        "group_order": s.group.order(),
        "classes": eq.classes.len(),
        "total_components": eq.total_components(),
        "strata": to_json(&eq.summary()),
    });
    if s.group.preset_tag == PresetTag::G2Ramified {
        out["parameters"] = to_json(&g2_ramified_table(&eq)?);
    }
    Ok(out)
}

fn cmd_fibers(cli: &Cli, sigma: &str, s_text: &str) -> Outcome {
    let s = scenario(cli)?;
    require_gl(&s)?;
    let vg = &s.torus.value_group;
    let sigma = vg.parse_coordinate_list(sigma)?;
    if sigma.len() != s.torus.rank {
        return Err(Failure::new(
            "rank_mismatch",
            format!("sigma has {} entries, {} needs {}", sigma.len(), s.name, s.torus.rank),
        ));
    }
    let step = vg.parse_coordinate(s_text)?;
    let fc = fiber_count_at(&sigma, &step)?;
    Ok(json!({
        "preset": s.name,
        "s": step.to_string(),
        "sigma": sigma.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "count": fc.count,
        "witnesses": to_json(&fc.witnesses),
    }))
}

/// A `w` in the requested class fixing `t`: `--w 3` names class 3, `--w 2,1`
/// names a cycle type.
fn resolve_w(s: &Scenario, eq: &ExtendedQuotient, t: &TorusPoint, text: &str) -> Result<WeylElement, Failure> {
    let g = &s.group;
    let trimmed = text.trim().trim_start_matches('(').trim_end_matches(')');
    let class = if text.contains(',') || text.trim().starts_with('(') {
        let mut ct: Vec<usize> = trimmed
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| Failure::new("parse", format!("bad cycle type {text:?}")))?;
        ct.sort_unstable_by(|a, b| b.cmp(a));
        (0..eq.classes.len())
            .find(|&k| g.cycle_type(eq.classes.representatives[k]).ok().as_ref() == Some(&ct))
            .ok_or_else(|| Failure::new("invalid_argument", format!("no class with cycle type {text}")))?
    } else {
        let k: usize = trimmed
            .parse()
            .map_err(|_| Failure::new("parse", format!("bad class index {text:?}")))?;
        if k >= eq.classes.len() {
            return Err(Failure::new(
                "invalid_argument",
                format!("class index {k} out of range (0..{})", eq.classes.len()),
            ));
        }
        k
    };
    g.elements()
        .filter(|&w| eq.classes.class_of[w.0] == class)
        .find(|&w| g.isotropy(t).contains(w))
        .ok_or_else(|| Failure::new("not_fixed", format!("no element of class {class} fixes {t}")))
}

fn cmd_mu(cli: &Cli, point: &str, w: &str) -> Outcome {
    let s = scenario(cli)?;
    require_gl(&s)?;
    let t = s.torus.parse_point(point)?;
    let eq = ExtendedQuotient::build(&s);
    let w = resolve_w(&s, &eq, &t, w)?;
    let p = mu_map(&s.group, &t, w)?;
    let ct = s.group.cycle_type(w).map_err(|e| Failure::new("unsupported_preset", e.to_string()))?;
    let strings = |v: Vec<Coordinate>| v.iter().map(ToString::to_string).collect::<Vec<_>>();
    Ok(json!({
        "preset": s.name,
        "point": t.to_string(),
        "w": {
            "class_index": eq.classes.class_of[w.0],
            "cycle_type": ct,
            "matrix": s.group.matrix(w).rows(),
        },
        "parameter": p.label(),
        "segments": p.segments.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "rho": p.rho.to_string(),
        "springer": springer_type_a(&ct).partition,
        "i_1": strings(infinitesimal_character_i_s(&p, &Coordinate::one())),
        "i_qh": strings(infinitesimal_character_i_s(&p, &Coordinate::qh_pow(1))),
    }))
}

fn cmd_kl(cli: &Cli, segments: &str, q: &str) -> Outcome {
    let s = scenario(cli)?;
    require_gl(&s)?;
    let p = parse_segments(&s.torus.value_group, segments)?;
    if p.rank() != s.torus.rank {
        return Err(LanglandsError::RankMismatch {
            expected: s.torus.rank,
            actual: p.rank(),
        }
        .into());
    }
    let mode = if q == "symbolic" {
        QMode::Symbolic
    } else {
        let n: u64 = q
            .parse()
            .map_err(|_| Failure::new("parse", format!("--q must be `symbolic` or an integer, got {q:?}")))?;
        QMode::numeric(n)?
    };
    let mut out = to_json(&kl_triple(&p, mode).report());
    out["preset"] = json!(s.name);
    out["parameter"] = json!(p.label());
    Ok(out)
}

fn cmd_basechange(cli: &Cli, f: u64) -> Outcome {
    let s = scenario(cli)?;
    let eq = ExtendedQuotient::build(&s);
    let report = eq.base_change_endo(f)?;
    let diagram = if s.group.preset_tag == PresetTag::GlN {
        to_json(&check_base_change_diagram(&eq, f, &all_generic_fixed_pairs(&eq))?)
    } else {
        Value::Null
    };
    Ok(json!({
        "preset": s.name,
        "degree": f,
        "identity": report.is_identity(),
        "strata": to_json(&report.strata),
        "diagram": diagram,
    }))
}

fn cmd_labels(cli: &Cli, point: &str) -> Outcome {
    let s = scenario(cli)?;
    let t = s.torus.parse_point(point)?;
    let eq = ExtendedQuotient::build(&s);
    let labels = eq.second_kind_labels(&t)?;
    let isotropy = s.group.isotropy(&t);
    let decomposition = match s.group.isotropy_decomposition(&t) {
        Ok(d) => json!({
            "full": d.full_isotropy.order(),
            "normal": d.normal_part.order(),
            "complement": d.complement_part.order(),
        }),
        Err(_) => Value::Null,
    };
    Ok(json!({
        "preset": s.name,
        "point": t.to_string(),
        "isotropy_order": isotropy.order(),
        "isotropy_classes": s.group.classes_within(&isotropy).len(),
        "decomposition": decomposition,
        "labels": labels.iter().map(|l| l.irrep_label.to_string()).collect::<Vec<_>>(),
    }))
}

fn cmd_snf(matrix: &str) -> Outcome {
    let m = IntegerMatrix::parse(matrix)?;
    let snf = smith_normal_form(&m);
    let coker = cokernel(&m, m.rows())?;
    Ok(json!({
        "matrix": matrix_json(&m),
        "u": matrix_json(&snf.u),
        "d": matrix_json(&snf.d),
        "v": matrix_json(&snf.v),
        "diagonal": snf.diagonal().iter().map(|x| i64::try_from(x).map_or_else(|_| json!(x.to_string()), |v| json!(v))).collect::<Vec<_>>(),
        "rank": snf.rank(),
        "cokernel": coker.to_string(),
    }))
}

fn cmd_scenario_list() -> Outcome {
    let mut rows = Vec::new();
    for name in embedded_presets() {
        let s = Scenario::preset(name)?;
        rows.push(json!({
            "name": name,
            "tag": s.group.preset_tag.to_string(),
            "rank": s.torus.rank,
            "order": s.group.order(),
            "classes": s.group.conjugacy_classes().len(),
            "description": s.description.clone().unwrap_or_default(),
        }));
    }
    Ok(json!({ "presets": rows }))
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Components => cmd_components(cli),
        Command::Fibers { sigma, s } => cmd_fibers(cli, sigma, s),
        Command::Mu { point, w } => cmd_mu(cli, point, w),
        Command::Kl { segments, q } => cmd_kl(cli, segments, q),
        Command::Basechange { f } => cmd_basechange(cli, *f),
        Command::Labels { point } => cmd_labels(cli, point),
        Command::Snf { matrix } => cmd_snf(matrix),
        Command::ScenarioList => cmd_scenario_list(),
    }
}

fn fail(f: Failure) -> ExitCode {
    eprintln!("{}", json!({ "error": f.code, "detail": f.detail }));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let detail = e.to_string();
            let first = detail.lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            return fail(Failure::new("usage", first));
        }
    };
    match run(&cli) {
        Ok(v) => {
            let text = if cli.table {
                table::render(&v)
            } else {
                serde_json::to_string_pretty(&v).expect("json")
            };
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::SUCCESS
        }
        Err(f) => fail(f),
    }
}
