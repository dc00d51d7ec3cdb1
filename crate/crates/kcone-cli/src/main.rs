//! kcone: JSON-in/JSON-out front end for the lattice, Weyl-group, nef-cone
//! and fundamental-domain machinery. Every command is deterministic:
//! identical input bytes produce identical output bytes.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use kcone::arith::{format_rat, parse_rat, Int};
use kcone::cones::{
    cone_member, dual_cone, lemma24_coefficients, lemma24_scan, min_over_sections,
    nef_chamber_polytope, reduce_mod_translations, surface_nef_test, two_d_plus_s, Membership,
    PairingForm, RationalCone, SideMu,
};
use kcone::lattice::DivisorClass;
use kcone::mordell_weil::{
    class_to_coords, manin_class, verify_paper_word, ManinAux,
    SectionCoords, WORD_FIXTURE_JSON,
};
use kcone::threefold::{
    edge_orbit_census, picard_rank, threefold_nef_test, threefold_reduce, ThreefoldClass,
};
use kcone::weyl::{bourbaki_reduce, chamber_position, Permutation, DEFAULT_MAX_STEPS, FULL_BASIS};
use kcone::Error;

#[derive(Parser)]
#[command(
    name = "kcone",
    about = "Exact Picard-lattice, Weyl-group and nef-cone computations",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Input JSON document: a file path, or '-' for standard input.
    #[arg(long, global = true, default_value = "-")]
    input: String,
    /// Step cap for wall-reflection reductions (overrides KCONE_MAX_STEPS
    /// and the config file).
    #[arg(long, global = true)]
    max_steps: Option<u64>,
    /// Output format (only json is supported).
    #[arg(long, global = true, default_value = "json")]
    format: String,
    /// Optional TOML config file with default caps.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Interpret and emit divisor classes in the alternative basis
    /// (h, -e1, ..., -e9): the stored e-entries are negated on the wire.
    #[arg(long, global = true)]
    negated_e_basis: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Intersection number of two divisor classes.
    Pair,
    /// Reflect a class in a root (by index, or any class of square -2).
    Reflect,
    /// Reduce a class into the closed fundamental chamber, reporting the
    /// word and the reduced class.
    Reduce,
    /// Section class from coordinates, or coordinates from a class.
    Manin,
    /// Build a reflection word: from a permutation of the exceptional
    /// classes, or from a translation.
    Word,
    /// Check the recorded word factorization of the basic translation
    /// under both readings of the printed permutation tuples.
    VerifyThm22,
    /// Decomposition coefficients of a section class over the root basis.
    Lemma24,
    /// Nef test for a surface class (with the exact section minimum).
    NefSurface {
        /// Also list the minimizing section coordinates.
        #[arg(long)]
        minimizers: bool,
    },
    /// Nef test for a fiber-product class, with the witness gauge.
    NefThreefold,
    /// Dual cone under the chosen bilinear form.
    Dual,
    /// Cone membership with a combination or separating certificate.
    Member,
    /// Chamber position of a class; --polytope prints the nef-chamber cone.
    Chamber {
        /// Print the nef cone cut by the closed chamber instead.
        #[arg(long)]
        polytope: bool,
    },
    /// Reduce a class into the fundamental domain for the translations.
    ReduceDomain,
    /// Census of nef-cone edge orbits from bounded section data.
    Census {
        /// Sup-norm bound on the section coordinates (default 2, or the
        /// config file's census-bound).
        #[arg(long)]
        bound: Option<u32>,
    },
    /// Write the permutation-data fixture and the golden outputs used by
    /// the regression suite.
    EmitFixtures {
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct ConfigFile {
    max_steps: Option<u64>,
    census_bound: Option<u32>,
    /// Positive weights on the dual chamber generators; prepends a custom
    /// probe point to the translation-word search.
    probe_weights: Option<[i64; 9]>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(value) => {
            println!("{value}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            // exit 1 for domain failures, 2 for malformed input
            let (code, exit) = match &err {
                Error::Malformed(_) => (err.code(), 2u8),
                _ => (err.code(), 1u8),
            };
            let payload = json!({"error": {"code": code, "message": err.to_string()}});
            eprintln!("{payload}");
            ExitCode::from(exit)
        }
    }
}

fn run(cli: Cli) -> Result<Value, Error> {
    if cli.common.format != "json" {
        return Err(Error::Malformed(format!(
            "unsupported format {:?} (only \"json\")",
            cli.common.format
        )));
    }
    let config = load_config(cli.common.config.as_deref())?;
    let max_steps = cli
        .common
        .max_steps
        .or_else(env_max_steps)
        .or(config.max_steps)
        .unwrap_or(DEFAULT_MAX_STEPS);

    let out = match &cli.command {
        Command::Pair => cmd_pair(&cli.common)?,
        Command::Reflect => cmd_reflect(&cli.common)?,
        Command::Reduce => cmd_reduce(&cli.common, max_steps)?,
        Command::Manin => cmd_manin(&cli.common)?,
        Command::Word => cmd_word(&cli.common, max_steps, config.probe_weights.as_ref())?,
        Command::VerifyThm22 => cmd_verify_thm22(),
        Command::Lemma24 => cmd_lemma24(&cli.common)?,
        Command::NefSurface { minimizers } => cmd_nef_surface(&cli.common, *minimizers)?,
        Command::NefThreefold => cmd_nef_threefold(&cli.common)?,
        Command::Dual => cmd_dual(&cli.common)?,
        Command::Member => cmd_member(&cli.common)?,
        Command::Chamber { polytope } => cmd_chamber(&cli.common, *polytope)?,
        Command::ReduceDomain => cmd_reduce_domain(&cli.common, max_steps)?,
        Command::Census { bound } => cmd_census(bound.or(config.census_bound).unwrap_or(2))?,
        Command::EmitFixtures { out } => cmd_emit_fixtures(out)?,
    };
    let out = if cli.common.negated_e_basis { flip_divisor_values(out) } else { out };
    Ok(out)
}

fn env_max_steps() -> Option<u64> {
    std::env::var("KCONE_MAX_STEPS").ok().and_then(|v| v.parse().ok())
}

fn load_config(path: Option<&std::path::Path>) -> Result<ConfigFile, Error> {
    let Some(path) = path else {
        return Ok(ConfigFile::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Malformed(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Error::Malformed(format!("config: {e}")))
}

fn read_input(common: &Common) -> Result<Value, Error> {
    let text = if common.input == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Malformed(format!("stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(&common.input)
            .map_err(|e| Error::Malformed(format!("cannot read {}: {e}", common.input)))?
    };
    let value: Value =
        serde_json::from_str(&text).map_err(|e| Error::Malformed(format!("input is not JSON: {e}")))?;
    Ok(if common.negated_e_basis { flip_divisor_values(value) } else { value })
}

/// Negates the e-entries of every {"h": ..., "e": [...9...]} object in the
/// tree: the conversion between the geometric basis and the alternative
/// (h, -e1, ..., -e9) coordinates.
fn flip_divisor_values(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let is_class = map.len() == 2
                && map.contains_key("h")
                && map.get("e").map(|e| e.is_array()) == Some(true);
            let map: serde_json::Map<String, Value> = map
                .into_iter()
                .map(|(k, val)| {
                    if is_class && k == "e" {
                        let flipped = match val {
                            Value::Array(items) => {
                                Value::Array(items.into_iter().map(negate_number).collect())
                            }
                            other => other,
                        };
                        (k, flipped)
                    } else {
                        (k, flip_divisor_values(val))
                    }
                })
                .collect();
            Value::Object(map)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(flip_divisor_values).collect()),
        other => other,
    }
}

fn negate_number(v: Value) -> Value {
    match v {
        Value::Number(n) => {
            let s = n.to_string();
            let flipped = if let Some(rest) = s.strip_prefix('-') {
                rest.to_string()
            } else if s == "0" {
                s
            } else {
                format!("-{s}")
            };
            Value::Number(flipped.parse().expect("negated integer is a valid number"))
        }
        other => other,
    }
}

fn parse<T: serde::de::DeserializeOwned>(value: Value, what: &str) -> Result<T, Error> {
    serde_json::from_value(value).map_err(|e| Error::Malformed(format!("{what}: {e}")))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("output serializes")
}

fn int_str(v: &Int) -> Value {
    Value::String(v.to_string())
}

fn side_mu_value(mu: &SideMu) -> Value {
    match mu {
        SideMu::Min(v) => json!({"kind": "min", "value": v.to_string()}),
        SideMu::FiberScale(v) => json!({"kind": "fiber-scale", "value": v.to_string()}),
        SideMu::UnboundedBelow => json!({"kind": "unbounded-below"}),
        SideMu::NegativeFiberDegree => json!({"kind": "negative-fiber-degree"}),
    }
}

fn cmd_pair(common: &Common) -> Result<Value, Error> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct In {
        x: DivisorClass,
        y: DivisorClass,
    }
    let input: In = parse(read_input(common)?, "pair input {\"x\", \"y\"}")?;
    Ok(json!({"value": input.x.pair(&input.y).to_string()}))
}

fn cmd_reflect(common: &Common) -> Result<Value, Error> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct In {
        x: DivisorClass,
        #[serde(default)]
        root: Option<usize>,
        #[serde(default)]
        alpha: Option<DivisorClass>,
    }
    let input: In = parse(read_input(common)?, "reflect input {\"x\", \"root\"|\"alpha\"}")?;
    let result = match (input.root, input.alpha) {
        (Some(i), None) => {
            if i > 8 {
                return Err(Error::Malformed(format!("field `root`: index {i} out of 0..=8")));
            }
            kcone::weyl::reflect_simple(&input.x, i)
        }
        (None, Some(alpha)) => kcone::weyl::reflect(&input.x, &alpha)?,
        _ => {
            return Err(Error::Malformed(
                "exactly one of `root` (index) or `alpha` (class) is required".into(),
            ))
        }
    };
    Ok(json!({"result": to_value(&result)}))
}

fn cmd_reduce(common: &Common, max_steps: u64) -> Result<Value, Error> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct In {
        x: DivisorClass,
        #[serde(default)]
        roots: Option<Vec<usize>>,
    }
    let input: In = parse(read_input(common)?, "reduce input {\"x\", \"roots\"?}")?;
    let roots = input.roots.unwrap_or_else(|| FULL_BASIS.to_vec());
    if roots.iter().any(|&i| i > 8) {
        return Err(Error::Malformed("field `roots`: indices must lie in 0..=8".into()));
    }
    let (word, reduced) = bourbaki_reduce(&input.x, &roots, max_steps)?;
    Ok(json!({
        "word": to_value(&word),
        "reduced": to_value(&reduced),
        "steps": word.len(),
    }))
}

fn cmd_manin(common: &Common) -> Result<Value, Error> {
    let value = read_input(common)?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Malformed("manin input must be an object".into()))?;
    if obj.contains_key("class") {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct In {
            class: DivisorClass,
        }
        let input: In = parse(value.clone(), "manin input {\"class\"}")?;
        let coords = class_to_coords(&input.class)?;
        return Ok(json!({"coords": to_value(&coords)}));
    }
    let coords: SectionCoords = parse(value, "manin input {\"a\", \"coset\"}")?;
    let class = manin_class(&coords)?;
    let aux = ManinAux::of(&coords);
    Ok(json!({
        "class": to_value(&class),
        "d": format_rat(&aux.d),
        "s": format_rat(&aux.s),
    }))
}

fn cmd_word(common: &Common, max_steps: u64, probe_weights: Option<&[i64; 9]>) -> Result<Value, Error> {
    let value = read_input(common)?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Malformed("word input must be an object".into()))?;
    if obj.contains_key("perm") {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct In {
            perm: Vec<usize>,
            notation: String,
        }
        let input: In = parse(value, "word input {\"perm\", \"notation\"}")?;
        let perm = match input.notation.as_str() {
            "one-line" => Permutation::from_one_line(&input.perm)?,
            "cycle" => Permutation::from_nine_cycle(&input.perm)?,
            other => {
                return Err(Error::Malformed(format!(
                    "field `notation`: {other:?} is not \"one-line\" or \"cycle\""
                )))
            }
        };
        let word = perm.word();
        return Ok(json!({"word": to_value(&word)}));
    }
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct In {
        translation: SectionCoords,
    }
    let input: In = parse(value, "word input {\"translation\"} or {\"perm\", \"notation\"}")?;
    let probes = match probe_weights {
        Some(w) => vec![kcone::mordell_weil::weighted_probe(w)?],
        None => Vec::new(),
    };
    let word = kcone::mordell_weil::translation_as_weyl_word_with_probes(
        &input.translation,
        max_steps,
        &probes,
    )?;
    Ok(json!({"word": to_value(&word), "length": word.len()}))
}

fn cmd_verify_thm22() -> Value {
    let report = verify_paper_word();
    let interpretation = report.interpretation().map(|i| to_value(&i));
    json!({
        "interpretation": interpretation,
        "identity": report.ok(),
        "one_line_is_identity": report.one_line_is_identity,
        "cycle_is_identity": report.cycle_is_identity,
    })
}

fn cmd_lemma24(common: &Common) -> Result<Value, Error> {
    let coords: SectionCoords = parse(read_input(common)?, "lemma24 input {\"a\", \"coset\"}")?;
    let coeffs = lemma24_coefficients(&coords);
    let tds = two_d_plus_s(&coords);
    Ok(json!({
        "coefficients": coeffs.iter().map(format_rat).collect::<Vec<_>>(),
        "two_d_plus_s": format_rat(&tds),
    }))
}

fn cmd_nef_surface(common: &Common, with_minimizers: bool) -> Result<Value, Error> {
    let x: DivisorClass = parse(read_input(common)?, "nef-surface input: a divisor class")?;
    let nef = surface_nef_test(&x);
    let mu = SideMu::of(&x);
    let mut out = serde_json::Map::new();
    out.insert("nef".into(), Value::Bool(nef));
    let mu_value = match &mu {
        SideMu::Min(v) | SideMu::FiberScale(v) => int_str(v),
        _ => Value::Null,
    };
    out.insert("mu".into(), mu_value);
    if with_minimizers {
        let minimizers = match &mu {
            SideMu::Min(_) => {
                let m = min_over_sections(&x)?;
                to_value(&m.minimizers)
            }
            _ => Value::Array(vec![]),
        };
        out.insert("minimizers".into(), minimizers);
    }
    Ok(Value::Object(out))
}

fn cmd_nef_threefold(common: &Common) -> Result<Value, Error> {
    let a: ThreefoldClass = parse(read_input(common)?, "nef-threefold input {\"A1\", \"A2\"}")?;
    let verdict = threefold_nef_test(&a);
    Ok(json!({
        "nef": verdict.nef,
        "witness_m": verdict.witness_m.as_ref().map(|m| m.to_string()),
        "mu1": side_mu_value(&verdict.mu1),
        "mu2": side_mu_value(&verdict.mu2),
        "picard_rank": picard_rank(),
        "canonical": to_value(&a),
    }))
}

fn cmd_dual(common: &Common) -> Result<Value, Error> {
    #[derive(Deserialize)]
    struct In {
        rays: Vec<Vec<String>>,
        #[serde(default)]
        form: Option<PairingForm>,
    }
    let input: In = parse(read_input(common)?, "dual input {\"rays\", \"form\"?}")?;
    let rays = parse_ray_list(&input.rays)?;
    let cone = RationalCone::from_rays(rays)?;
    let dual = dual_cone(&cone, input.form.unwrap_or_default())?;
    Ok(to_value(&dual))
}

fn cmd_member(common: &Common) -> Result<Value, Error> {
    #[derive(Deserialize)]
    struct ConeIn {
        rays: Vec<Vec<String>>,
    }
    #[derive(Deserialize)]
    struct In {
        x: Vec<String>,
        cone: ConeIn,
        #[serde(default)]
        form: Option<PairingForm>,
    }
    let input: In = parse(read_input(common)?, "member input {\"x\", \"cone\", \"form\"?}")?;
    let x = parse_ray_list(&[input.x.clone()])?.pop().unwrap();
    let rays = parse_ray_list(&input.cone.rays)?;
    let form = input.form.unwrap_or_default();
    match cone_member(&x, &rays, form)? {
        Membership::Inside { coefficients } => Ok(json!({
            "member": true,
            "combination": coefficients.iter().map(format_rat).collect::<Vec<_>>(),
        })),
        Membership::Outside { separator } => Ok(json!({
            "member": false,
            "separator": separator.iter().map(format_rat).collect::<Vec<_>>(),
        })),
    }
}

fn parse_ray_list(raw: &[Vec<String>]) -> Result<Vec<Vec<kcone::arith::Rat>>, Error> {
    raw.iter()
        .map(|row| row.iter().map(|s| parse_rat(s)).collect())
        .collect()
}

fn cmd_chamber(common: &Common, polytope: bool) -> Result<Value, Error> {
    if polytope {
        let cone = nef_chamber_polytope();
        return Ok(to_value(&cone));
    }
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct In {
        x: DivisorClass,
    }
    let input: In = parse(read_input(common)?, "chamber input {\"x\"}")?;
    Ok(json!({"position": to_value(&chamber_position(&input.x))}))
}

fn cmd_reduce_domain(common: &Common, max_steps: u64) -> Result<Value, Error> {
    let value = read_input(common)?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Malformed("reduce-domain input must be an object".into()))?;
    if obj.contains_key("A1") {
        let a: ThreefoldClass = parse(value, "reduce-domain input {\"A1\", \"A2\"}")?;
        let r = threefold_reduce(&a, max_steps)?;
        return Ok(json!({
            "t1": to_value(&r.t1),
            "t2": to_value(&r.t2),
            "reduced": to_value(&r.reduced),
            "gauge_m": r.gauge_m.to_string(),
        }));
    }
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct In {
        x: DivisorClass,
    }
    let input: In = parse(value, "reduce-domain input {\"x\"} or {\"A1\", \"A2\"}")?;
    let r = reduce_mod_translations(&input.x, max_steps)?;
    Ok(json!({
        "t": to_value(&r.translation),
        "word": to_value(&r.finite_word),
        "reduced": to_value(&r.reduced),
    }))
}

fn cmd_census(bound: u32) -> Result<Value, Error> {
    if bound > kcone::threefold::MAX_CENSUS_BOUND {
        return Err(Error::Malformed(format!(
            "census bound {bound} exceeds the supported maximum {}",
            kcone::threefold::MAX_CENSUS_BOUND
        )));
    }
    let report = edge_orbit_census(bound);
    Ok(to_value(&report))
}

fn cmd_emit_fixtures(out: &std::path::Path) -> Result<Value, Error> {
    use std::fs;
    let io_err = |e: std::io::Error| Error::Malformed(format!("emit-fixtures: {e}"));
    fs::create_dir_all(out).map_err(io_err)?;
    let mut written: Vec<String> = Vec::new();
    let mut write = |name: &str, contents: String| -> Result<(), Error> {
        let path = out.join(name);
        fs::write(&path, contents).map_err(io_err)?;
        written.push(name.to_string());
        Ok(())
    };

    // the published permutation data, verbatim
    write("translation_word.json", WORD_FIXTURE_JSON.to_string())?;

    // golden: decomposition coefficients at a2 = -1 (second entry -1)
    let a = SectionCoords::from_integers([-1, 0, 0, 0, 0, 0, 0, 0]);
    let coeffs = lemma24_coefficients(&a);
    write(
        "golden_lemma24_minus_delta2.json",
        serde_json::to_string(&json!({
            "coefficients": coeffs.iter().map(format_rat).collect::<Vec<_>>(),
            "two_d_plus_s": format_rat(&two_d_plus_s(&a)),
        }))
        .unwrap(),
    )?;

    // golden: the fiber inside the root cone, with its certificate
    let rays: Vec<Vec<kcone::arith::Rat>> = kcone::weyl::simple_roots()
        .iter()
        .map(|r| r.class.to_rationals())
        .collect();
    let f = DivisorClass::fiber().to_rationals();
    let member = cone_member(&f, &rays, PairingForm::Picard)?;
    let combination = match member {
        Membership::Inside { coefficients } => {
            coefficients.iter().map(format_rat).collect::<Vec<_>>()
        }
        Membership::Outside { .. } => unreachable!("f lies in the root cone"),
    };
    write(
        "golden_fiber_in_root_cone.json",
        serde_json::to_string(&json!({"member": true, "combination": combination})).unwrap(),
    )?;

    // golden: the word-check verdict
    write("golden_verify_thm22.json", serde_json::to_string(&cmd_verify_thm22()).unwrap())?;

    // golden: the nef chamber polytope
    write(
        "golden_nef_chamber_polytope.json",
        serde_json::to_string(&nef_chamber_polytope()).unwrap(),
    )?;

    // golden: the stable edge census at the default bound
    write("golden_census_bound2.json", serde_json::to_string(&edge_orbit_census(2)).unwrap())?;

    // golden: the full coordinate-box sweep summary at bound 2
    let sweep = lemma24_scan(2);
    write(
        "golden_lemma24_sweep_bound2.json",
        serde_json::to_string(&json!({
            "bound": sweep.bound,
            "points": sweep.points,
            "all_identities_hold": sweep.all_identities_hold(),
            "negatives_are_exactly_exceptional": sweep.negatives_are_exactly_exceptional(),
        }))
        .unwrap(),
    )?;

    written.sort();
    Ok(json!({"written": written, "dir": out.display().to_string()}))
}
