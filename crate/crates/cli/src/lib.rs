//! Command-line front end: reads poset, involution and map files, runs the
//! requested check, and produces a deterministic JSON report.

pub mod sweep;

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use clap::{Parser, ValueEnum};
use incalg_core::involution::involution_defect;
use incalg_core::starmaps::{
    basis_label, decompose_jsd, inner_space_basis, is_inner, is_transposed, jordan_identity_holds,
    jordan_vanishing_space_basis, jordan_witness, jsd_space_basis, span_contains, span_dimension,
    star_derivation_space_basis, star_derivation_witness, transposed_space_basis,
};
use incalg_core::{
    factor_involution, text, Element, Error, Field, InvolutionSpec, LinearMap, MultiplicativeElement, Poset,
    Scalar,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// Random elements drawn per map for the quadratic Jordan cross-check.
pub const QUADRATIC_SAMPLES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    PosetCheck,
    InvCheck,
    InvFactor,
    JdBasis,
    JdVerify,
    JdDecompose,
    SdBasis,
    Sweep,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.to_possible_value().expect("no skipped variants");
        f.write_str(name.get_name())
    }
}

#[derive(Parser, Debug)]
#[command(name = "incalg", version, about = "Jordan *-derivations of incidence algebras")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// `Q` or `Fp:<p>` for an odd prime p.
    #[arg(long, default_value = "Q")]
    pub field: String,
    #[arg(long)]
    pub poset: Option<PathBuf>,
    #[arg(long)]
    pub involution: Option<PathBuf>,
    #[arg(long)]
    pub map: Option<PathBuf>,
    #[arg(long)]
    pub max_size: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub field: String,
    pub poset: Option<PathBuf>,
    pub involution: Option<PathBuf>,
    pub map: Option<PathBuf>,
    pub max_size: Option<usize>,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(command: Command, field: &str) -> Self {
        RunConfig {
            command,
            field: field.to_string(),
            poset: None,
            involution: None,
            map: None,
            max_size: None,
            seed: 0,
        }
    }

    pub fn from_cli(cli: &Cli, seed: u64) -> Self {
        RunConfig {
            command: cli.command,
            field: cli.field.clone(),
            poset: cli.poset.clone(),
            involution: cli.involution.clone(),
            map: cli.map.clone(),
            max_size: cli.max_size,
            seed,
        }
    }
}

/// Reads `INCALG_SEED`, defaulting to 0.
pub fn seed_from_env() -> Result<u64, InputError> {
    match std::env::var("INCALG_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| InputError::Seed(s.clone())),
        Err(_) => Ok(0),
    }
}

#[derive(Debug)]
pub enum InputError {
    Io { path: PathBuf, message: String },
    File { role: &'static str, error: Error },
    Field(Error),
    Missing(&'static str),
    Argument(String),
    Seed(String),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Io { path, message } => write!(f, "cannot read {}: {message}", path.display()),
            InputError::File { role, error } => write!(f, "{role} file: {error}"),
            InputError::Field(e) => write!(f, "--field: {e}"),
            InputError::Missing(flag) => write!(f, "this command needs --{flag}"),
            InputError::Argument(msg) => f.write_str(msg),
            InputError::Seed(s) => write!(f, "INCALG_SEED is not an unsigned integer: `{s}`"),
        }
    }
}

impl std::error::Error for InputError {}

impl InputError {
    pub fn to_json(&self) -> Value {
        let mut out = json!({ "message": self.to_string() });
        match self {
            InputError::Io { path, .. } => {
                out["kind"] = json!("IoError");
                out["path"] = json!(path.display().to_string());
            }
            InputError::File { role, error } => {
                out["file"] = json!(role);
                out["kind"] = json!(if matches!(error, Error::Parse { .. }) {
                    "ParseError"
                } else {
                    "ValidationError"
                });
                out["invariant"] = json!(error.kind());
                if let Error::Parse { line, column, .. } = error {
                    out["line"] = json!(line);
                    out["column"] = json!(column);
                }
            }
            InputError::Field(e) => {
                out["kind"] = json!("ValidationError");
                out["invariant"] = json!(e.kind());
            }
            InputError::Missing(_) => out["kind"] = json!("MissingArgument"),
            InputError::Argument(_) => out["kind"] = json!("InvalidArgument"),
            InputError::Seed(_) => out["kind"] = json!("InvalidSeed"),
        }
        out
    }
}

/// Validated inputs, with the SHA-256 digest of each file read.
#[derive(Clone, Debug)]
pub struct Inputs {
    pub field: Field,
    pub poset: Option<Arc<Poset>>,
    pub involution_text: Option<String>,
    pub involution: Option<InvolutionSpec>,
    pub map: Option<LinearMap>,
    pub digests: BTreeMap<&'static str, String>,
}

fn read(path: &Path) -> Result<(String, String), InputError> {
    let bytes = std::fs::read(path).map_err(|e| InputError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let digest = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes).map_err(|_| InputError::Io {
        path: path.to_path_buf(),
        message: "file is not valid UTF-8".into(),
    })?;
    Ok((text, digest))
}

/// Reads and validates every file named in `config`. A poset-check
/// involution file holds `x <-> y` lines; for other commands it is an
/// involution spec.
pub fn parse_inputs(config: &RunConfig) -> Result<Inputs, InputError> {
    let field = Field::from_str(&config.field).map_err(InputError::Field)?;
    let mut inputs = Inputs {
        field,
        poset: None,
        involution_text: None,
        involution: None,
        map: None,
        digests: BTreeMap::new(),
    };
    if let Some(path) = &config.poset {
        let (text, digest) = read(path)?;
        inputs.digests.insert("poset", digest);
        let poset = text::parse_poset(&text).map_err(|error| InputError::File { role: "poset", error })?;
        inputs.poset = Some(Arc::new(poset));
    }
    if let Some(path) = &config.involution {
        let poset = inputs.poset.clone().ok_or(InputError::Missing("poset"))?;
        let (text, digest) = read(path)?;
        inputs.digests.insert("involution", digest);
        if config.command != Command::PosetCheck {
            let spec = text::parse_involution_spec(&poset, field, &text)
                .map_err(|error| InputError::File { role: "involution", error })?;
            inputs.involution = Some(spec);
        }
        inputs.involution_text = Some(text);
    }
    if let Some(path) = &config.map {
        let poset = inputs.poset.clone().ok_or(InputError::Missing("poset"))?;
        let (text, digest) = read(path)?;
        inputs.digests.insert("map", digest);
        let map = text::parse_linear_map(&poset, field, &text)
            .map_err(|error| InputError::File { role: "map", error })?;
        inputs.map = Some(map);
    }
    Ok(inputs)
}

/// A finished run: the JSON report and the process exit code (0 when every
/// requested verification passed, 1 when one failed, 2 on input errors).
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Value,
    pub exit_code: i32,
}

impl Outcome {
    /// Pretty JSON with a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("JSON values serialize");
        s.push('\n');
        s
    }
}

pub fn run(config: &RunConfig) -> Outcome {
    let header = json!({ "command": config.command.to_string(), "field": config.field, "seed": config.seed });
    let inputs = match parse_inputs(config) {
        Ok(inputs) => inputs,
        Err(e) => return input_error(header, &e),
    };
    let result = match config.command {
        Command::PosetCheck => poset_check(&inputs),
        Command::InvCheck => inv_check(&inputs),
        Command::InvFactor => inv_factor(&inputs),
        Command::JdBasis => jd_basis(&inputs, config.seed),
        Command::JdVerify => jd_verify(&inputs, config.seed),
        Command::JdDecompose => jd_decompose(&inputs),
        Command::SdBasis => sd_basis(&inputs),
        Command::Sweep => run_sweep(&inputs, config.max_size.unwrap_or(4)),
    };
    let (mut body, passed) = match result {
        Ok(r) => r,
        Err(e) => return input_error(header, &e),
    };
    let obj = body.as_object_mut().expect("command bodies are objects");
    for (k, v) in header.as_object().expect("object") {
        obj.insert(k.clone(), v.clone());
    }
    obj.insert("field".into(), json!(inputs.field.to_string()));
    obj.insert("inputs".into(), json!(inputs.digests));
    obj.insert("status".into(), json!(if passed { "ok" } else { "failed" }));
    Outcome {
        report: body,
        exit_code: if passed { 0 } else { 1 },
    }
}

fn input_error(mut header: Value, e: &InputError) -> Outcome {
    header["status"] = json!("input_error");
    header["error"] = e.to_json();
    Outcome {
        report: header,
        exit_code: 2,
    }
}

type CommandResult = Result<(Value, bool), InputError>;

fn internal(role: &'static str) -> impl Fn(Error) -> InputError {
    move |error| InputError::File { role, error }
}

fn need_poset(inputs: &Inputs) -> Result<&Arc<Poset>, InputError> {
    inputs.poset.as_ref().ok_or(InputError::Missing("poset"))
}

fn need_involution(inputs: &Inputs) -> Result<&InvolutionSpec, InputError> {
    need_poset(inputs)?;
    inputs.involution.as_ref().ok_or(InputError::Missing("involution"))
}

fn need_map(inputs: &Inputs) -> Result<&LinearMap, InputError> {
    need_poset(inputs)?;
    inputs.map.as_ref().ok_or(InputError::Missing("map"))
}

pub fn element_json(e: &Element) -> Value {
    json!(e.to_string())
}

pub fn map_json(d: &LinearMap) -> Value {
    json!(d.to_string().lines().collect::<Vec<_>>())
}

fn gamma_json(poset: &Poset, gamma: &BTreeMap<usize, Scalar>) -> Value {
    let m: BTreeMap<&str, String> = gamma.iter().map(|(&y, v)| (poset.name(y), v.to_string())).collect();
    json!(m)
}

fn sigma_json(p: &Poset, sigma: &MultiplicativeElement) -> Value {
    let m: BTreeMap<String, String> = sigma
        .cover_values()
        .iter()
        .map(|(&(x, y), v)| (format!("{} {}", p.name(x), p.name(y)), v.to_string()))
        .collect();
    json!(m)
}

fn lambda_json(spec: &InvolutionSpec) -> Value {
    let pairs: Vec<String> = spec
        .lambda()
        .swaps(spec.poset())
        .into_iter()
        .map(|(x, y)| format!("{x} <-> {y}"))
        .collect();
    json!(pairs)
}

fn spec_json(spec: &InvolutionSpec) -> Value {
    json!({ "lambda": lambda_json(spec), "sigma": sigma_json(spec.poset(), spec.sigma()), "mu": element_json(spec.mu()) })
}

fn poset_check(inputs: &Inputs) -> CommandResult {
    let p = need_poset(inputs)?;
    let covers: Vec<String> = p.covers().iter().map(|&(x, y)| format!("{} < {}", p.name(x), p.name(y))).collect();
    let involutions: Vec<Vec<String>> = p
        .involutions()
        .iter()
        .map(|l| {
            l.swaps(p)
                .into_iter()
                .map(|(x, y)| format!("{x} <-> {y}"))
                .collect()
        })
        .collect();
    let mut body = json!({
        "elements": p.names(),
        "covers": covers,
        "dimension": p.dim(),
        "involution_count": involutions.len(),
        "involutions": involutions,
    });
    let mut passed = true;
    if let Some(text) = &inputs.involution_text {
        match text::parse_poset_involution(p, text) {
            Ok(_) => body["involution_valid"] = json!(true),
            Err(Error::InvalidInvolution(why)) => {
                body["involution_valid"] = json!(false);
                body["involution_defect"] = json!(why);
                passed = false;
            }
            Err(error) => return Err(InputError::File { role: "involution", error }),
        }
    }
    Ok((body, passed))
}

fn inv_check(inputs: &Inputs) -> CommandResult {
    let spec = need_involution(inputs)?;
    let defect = spec.validation_failure();
    let body = json!({
        "valid": defect.is_none(),
        "defect": defect,
        "involution": spec_json(spec),
        "matrix": map_json(&spec.matrix()),
    });
    Ok((body, defect.is_none()))
}

fn inv_factor(inputs: &Inputs) -> CommandResult {
    let t = match (&inputs.map, &inputs.involution) {
        (Some(m), _) => m.clone(),
        (None, Some(spec)) => spec.matrix(),
        (None, None) => return Err(InputError::Missing("map")),
    };
    match factor_involution(&t) {
        Ok(spec) => {
            let recomposed = spec.matrix() == t;
            Ok((json!({ "factorization": spec_json(&spec), "recomposed_equal": recomposed }), recomposed))
        }
        Err(e @ (Error::NotInvolution(_) | Error::FactorizationFailed { .. })) => {
            let mut err = json!({ "kind": e.kind(), "message": e.to_string() });
            if let Error::FactorizationFailed { solution_basis, .. } = &e {
                err["solution_basis"] = json!(solution_basis);
            }
            if let Some(why) = involution_defect(&t) {
                err["defect"] = json!(why);
            }
            Ok((json!({ "factorization": Value::Null, "error": err }), false))
        }
        Err(error) => Err(InputError::File { role: "map", error }),
    }
}

fn random_element(poset: &Arc<Poset>, field: Field, rng: &mut ChaCha8Rng) -> Element {
    let entries: Vec<_> = poset
        .pairs()
        .iter()
        .map(|&pair| (pair, field.from_i64(rng.gen_range(-9..=9))))
        .collect();
    Element::from_entries(poset, field, entries).expect("comparable pairs")
}

/// Checks `D(f²) = D(f)θ(f) + f D(f)` on seeded random `f`.
pub fn quadratic_check(maps: &[LinearMap], theta: &InvolutionSpec, seed: u64) -> Result<bool, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for d in maps {
        for _ in 0..QUADRATIC_SAMPLES {
            let f = random_element(theta.poset(), theta.field(), &mut rng);
            if !jordan_identity_holds(d, theta, &f)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn jd_basis(inputs: &Inputs, seed: u64) -> CommandResult {
    let theta = need_involution(inputs)?;
    let e = internal("involution");
    let basis = jsd_space_basis(theta).map_err(&e)?;
    let inner = inner_space_basis(theta).map_err(&e)?;
    let vanishing = jordan_vanishing_space_basis(theta).map_err(&e)?;
    let formula = transposed_space_basis(theta.sigma(), theta.lambda()).map_err(&e)?;
    let star = star_derivation_space_basis(theta).map_err(&e)?;
    let quadratic = quadratic_check(&basis, theta, seed).map_err(&e)?;
    let formula_jordan = formula.iter().filter(|t| span_contains(&basis, t)).count();
    let mut both = inner.clone();
    both.extend(vanishing.iter().cloned());
    let sum = span_dimension(&both);
    let body = json!({
        "dimension": basis.len(),
        "basis": basis.iter().map(map_json).collect::<Vec<_>>(),
        "inner_dimension": inner.len(),
        "vanishing_dimension": vanishing.len(),
        "inner_plus_vanishing_dimension": sum,
        "direct_sum": sum == inner.len() + vanishing.len(),
        "transposed_formula_dimension": formula.len(),
        "transposed_formula_jordan": formula_jordan,
        "star_dimension": star.len(),
        "quadratic_check": { "samples_per_map": QUADRATIC_SAMPLES, "passed": quadratic },
    });
    Ok((body, quadratic))
}

fn jd_verify(inputs: &Inputs, seed: u64) -> CommandResult {
    let theta = need_involution(inputs)?;
    let d = need_map(inputs)?;
    let e = internal("map");
    let p = theta.poset();
    let label = |(a, b): (usize, usize)| json!([basis_label(p, a), basis_label(p, b)]);
    let jw = jordan_witness(d, theta).map_err(&e)?;
    let sw = star_derivation_witness(d, theta).map_err(&e)?;
    let inner = is_inner(d, theta).map_err(&e)?;
    let phi = theta.phi();
    let transposed = if *theta.mu() == Element::delta(p, theta.field()) {
        is_transposed(d, phi.sigma(), phi.lambda()).map_err(&e)?
    } else {
        None
    };
    let quadratic = quadratic_check(std::slice::from_ref(d), theta, seed).map_err(&e)?;
    let body = json!({
        "jordan": jw.is_none(),
        "jordan_witness": jw.map(label),
        "star": sw.is_none(),
        "witness_pair": sw.map(label),
        "inner_f": inner.as_ref().map(element_json),
        "transposed_gamma": transposed.as_ref().map(|g| gamma_json(p, g)),
        "quadratic_check": { "samples": QUADRATIC_SAMPLES, "passed": quadratic },
    });
    Ok((body, jw.is_none()))
}

fn jd_decompose(inputs: &Inputs) -> CommandResult {
    let theta = need_involution(inputs)?;
    let d = need_map(inputs)?;
    let p = theta.poset();
    match decompose_jsd(d, theta) {
        Ok(dec) => {
            let zero = dec.residual.is_zero();
            let body = json!({
                "inner_f": element_json(&dec.inner_f),
                "phi_inner_f": element_json(&dec.phi_inner_f),
                "gamma": gamma_json(p, &dec.gamma),
                "sigma_zero": sigma_json(p, &dec.sigma_zero),
                "inner_part": map_json(&dec.inner_part),
                "transposed_part": map_json(&dec.transposed_part),
                "residual_zero": zero,
            });
            Ok((body, zero))
        }
        Err(err @ (Error::NotJordan(..) | Error::DecompositionFailed(_))) => {
            let mut body = json!({
                "residual_zero": false,
                "error": { "kind": err.kind(), "message": err.to_string() },
            });
            if let Error::NotJordan(a, b) = &err {
                body["jordan_witness"] = json!([a, b]);
            }
            Ok((body, false))
        }
        Err(error) => Err(InputError::File { role: "map", error }),
    }
}

fn sd_basis(inputs: &Inputs) -> CommandResult {
    let theta = need_involution(inputs)?;
    let e = internal("involution");
    let star = star_derivation_space_basis(theta).map_err(&e)?;
    let jd = jsd_space_basis(theta).map_err(&e)?;
    let contained = star.iter().all(|s| span_contains(&jd, s));
    let body = json!({
        "dimension": star.len(),
        "basis": star.iter().map(map_json).collect::<Vec<_>>(),
        "jd_dimension": jd.len(),
        "contained_in_jd": contained,
        "strict": contained && star.len() < jd.len(),
    });
    Ok((body, contained))
}

fn run_sweep(inputs: &Inputs, max_size: usize) -> CommandResult {
    if max_size > 7 {
        return Err(InputError::Argument(format!("--max-size {max_size} exceeds the limit of 7")));
    }
    sweep::sweep(max_size, inputs.field).map_err(internal("sweep"))
}
