//! Command-line front end. `run` is the whole program minus process exit, so tests can drive it
//! in-process.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::complex::ComplexStructure;
use crate::connection::Connection;
use crate::ddbar::weak_ddbar_check;
use crate::error::{Error, Result};
use crate::exterior::{Form, DIM};
use crate::hermitian::{build_family, Family, FamilyDescriptor, HermitianStructure};
use crate::holonomy::{gamma_text, Holonomy};
use crate::lie::{LieAlgebra, Preset};
use crate::linalg::identity;
use crate::parse::{parse_form, parse_structure_equations, parse_structure_json};
use crate::scalar::{FloatConfig, Real, Scalar, Q};
use crate::strominger::{strominger_report, BaseConnection, InstantonSpec};

#[derive(Parser, Debug)]
#[command(name = "nilgeom", version, about = "Balanced Hermitian geometry of six-dimensional Lie algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true, value_enum, default_value = "exact")]
    pub backend: Backend,
    /// Significant digits of the float backend (50..=96).
    #[arg(long, global = true, default_value_t = 64)]
    pub digits: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    #[default]
    Bismut,
    Chern,
    LeviCivita,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Underlying algebra, complex type and balanced verdict.
    Classify(Input),
    /// Structure equations, J, F, torsion and dT in the adapted frame.
    Build(Input),
    /// Connection forms, curvature endomorphisms and tr Ω∧Ω.
    Connection {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "bismut")]
        kind: Kind,
    },
    /// Holonomy algebra of a connection.
    Holonomy {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "bismut")]
        kind: Kind,
    },
    /// Weak ∂∂̄-lemma in bidegree (2,3).
    Ddbar(Input),
    /// Strominger system with constant dilaton.
    Strominger {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        gauge: Gauge,
    },
    /// One report row per grid value of a parameter.
    Sweep {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        gauge: Gauge,
        /// Parameter to vary: rho, delta, b, b2, s, t, r, u, sign, lambda, tau.
        #[arg(long)]
        param: String,
        /// Grid values separated by commas or spaces; may be empty.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        values: String,
    },
}

/// Input source: family flags, a descriptor, structure equations or a preset.
#[derive(Args, Debug, Clone, Default)]
pub struct Input {
    /// F214 … F218, DEF or SOLV.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<String>,
    /// δ = b² ∈ {0, 1}.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    /// Complex literal such as 3i, 9/5+12/5i, or "re,im".
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
    /// + or -.
    #[arg(long, allow_hyphen_values = true)]
    pub sign: Option<String>,
    /// Deformation parameter of DEF; for other families in `strominger`/`sweep`, the A_λ parameter.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// FamilyDescriptor JSON file.
    #[arg(long, conflicts_with = "family")]
    pub descriptor: Option<PathBuf>,
    /// Inline FamilyDescriptor JSON.
    #[arg(long, conflicts_with_all = ["family", "descriptor"])]
    pub descriptor_json: Option<String>,
    /// Structure equations (tuple, equation list or {"de":…} JSON) in a file.
    #[arg(long, conflicts_with_all = ["family", "descriptor", "descriptor_json"])]
    pub equations: Option<PathBuf>,
    /// Inline structure equations, e.g. "(0,0,0,0,12,34)".
    #[arg(long, conflicts_with_all = ["family", "descriptor", "descriptor_json", "equations"])]
    pub salamon: Option<String>,
    /// Named algebra preset.
    #[arg(long, conflicts_with_all = ["family", "descriptor", "descriptor_json", "equations", "salamon"])]
    pub preset: Option<String>,
    /// With structure equations: "adapted" or a JSON file holding the 6×6 matrix of J on vectors.
    #[arg(long)]
    pub j: Option<String>,
}

/// Gauge connection of the anomaly equation.
#[derive(Args, Debug, Clone, Default)]
pub struct Gauge {
    /// A_λ parameter (needed for DEF, where --lambda is the deformation).
    #[arg(long, allow_hyphen_values = true)]
    pub instanton_lambda: Option<String>,
    /// A_τ with the given τ.
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
    /// A_τ with τ² solved from the anomaly equation.
    #[arg(long)]
    pub solve_tau: bool,
    /// External instanton given by its trace 4-form, e.g. "-2 e1234".
    #[arg(long, allow_hyphen_values = true)]
    pub external_trace: Option<String>,
    #[arg(long, value_enum, default_value = "bismut")]
    pub connection: Kind,
}

/// Exit status and captured output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// 1 for malformed input, 2 for violated preconditions.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Input(_) => 1,
        _ => 2,
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: e.to_string(), stderr: String::new() }
                }
                _ => {
                    let first = e.to_string().lines().next().unwrap_or("error: invalid arguments").to_string();
                    Outcome { code: 1, stdout: String::new(), stderr: format!("{first}\n") }
                }
            };
        }
    };
    let result = match cli.backend {
        Backend::Exact => execute::<Q>(&cli),
        Backend::Float => {
            FloatConfig { digits: cli.digits, ..FloatConfig::default() }.install();
            execute::<Real>(&cli)
        }
    };
    match result {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(e) => Outcome { code: exit_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn num<S: Scalar>(name: &str, text: &str) -> Result<S> {
    S::parse(text).map_err(|m| Error::Input(format!("--{name}: {m}")))
}

/// "3i", "-i", "9/5+12/5i", "5", or "re,im".
pub fn parse_complex<S: Scalar>(name: &str, text: &str) -> Result<(S, S)> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some((a, b)) = t.split_once(',') {
        return Ok((num(name, a)?, num(name, b)?));
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok((num(name, &t)?, S::zero()));
    };
    let split = body.char_indices().filter(|(k, c)| *k > 0 && (*c == '+' || *c == '-')).map(|(k, _)| k).last();
    let (re_part, im_part) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let im = match im_part {
        "" | "+" => S::one(),
        "-" => -S::one(),
        x => num(name, x.trim_start_matches('+'))?,
    };
    let re = if re_part.is_empty() { S::zero() } else { num(name, re_part)? };
    Ok((re, im))
}

fn zero_one<S: Scalar>(name: &str, text: &str) -> Result<u8> {
    let x: S = num(name, text)?;
    if x.is_zero() {
        Ok(0)
    } else if (x - S::one()).is_zero() {
        Ok(1)
    } else {
        Err(Error::Input(format!("--{name} must be 0 or 1")))
    }
}

fn parse_sign(text: &str) -> Result<i8> {
    match text.trim() {
        "+" | "1" | "+1" => Ok(1),
        "-" | "-1" => Ok(-1),
        other => Err(Error::Input(format!("--sign must be + or -, got {other:?}"))),
    }
}

/// Apply one named parameter to a descriptor.
fn set_param<S: Scalar>(d: &mut FamilyDescriptor<S>, name: &str, text: &str) -> Result<()> {
    match name {
        "rho" => d.rho = zero_one::<S>(name, text)?,
        "delta" => d.b2 = S::from_int(zero_one::<S>(name, text)? as i64),
        "b" => {
            let b: S = num(name, text)?;
            d.b2 = b.clone() * b;
        }
        "b2" => d.b2 = num(name, text)?,
        "s" => d.s = num(name, text)?,
        "t" => d.t = num(name, text)?,
        "r" => d.r = num(name, text)?,
        "u" => d.u = parse_complex(name, text)?,
        "sign" => d.sign = parse_sign(text)?,
        "lambda" => d.lambda = num(name, text)?,
        other => return Err(Error::Input(format!("unknown parameter {other:?}"))),
    }
    Ok(())
}

/// What the input flags describe.
#[derive(Clone, Debug)]
enum Subject<S> {
    Family(FamilyDescriptor<S>),
    Structure { algebra: LieAlgebra<S>, j: ComplexStructure<S> },
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("JSON: {e}")))
}

fn lift<S: Scalar>(g: &LieAlgebra<Q>) -> LieAlgebra<S> {
    g.map(|x| S::from_rational(x))
}

impl Input {
    fn family_flags(&self) -> Vec<(&'static str, &String)> {
        let mut v = Vec::new();
        for (name, val) in [
            ("rho", &self.rho),
            ("delta", &self.delta),
            ("b", &self.b),
            ("b2", &self.b2),
            ("s", &self.s),
            ("t", &self.t),
            ("u", &self.u),
            ("r", &self.r),
            ("sign", &self.sign),
            ("lambda", &self.lambda),
        ] {
            if let Some(x) = val {
                v.push((name, x));
            }
        }
        v
    }

    /// Whether --lambda belongs to the family (DEF) rather than to A_λ.
    fn lambda_is_family(&self) -> bool {
        self.family.as_deref().and_then(Family::from_name) == Some(Family::Deformed)
    }

    fn subject<S: Scalar>(&self, gauge_lambda: bool) -> Result<Subject<S>> {
        if let Some(name) = &self.family {
            let family = Family::from_name(name).ok_or_else(|| Error::Input(format!("unknown family {name:?}")))?;
            let mut d = FamilyDescriptor::new(family);
            for (p, x) in self.family_flags() {
                if p == "lambda" && gauge_lambda && family != Family::Deformed {
                    continue;
                }
                set_param(&mut d, p, x)?;
            }
            return Ok(Subject::Family(d));
        }
        let desc = match (&self.descriptor, &self.descriptor_json) {
            (Some(p), _) => Some(read(p)?),
            (None, Some(s)) => Some(s.clone()),
            _ => None,
        };
        if let Some(text) = desc {
            let mut d = FamilyDescriptor::from_json(&parse_json(&text)?)?;
            for (p, x) in self.family_flags() {
                if p == "lambda" && gauge_lambda && d.family != Family::Deformed {
                    continue;
                }
                set_param(&mut d, p, x)?;
            }
            return Ok(Subject::Family(d));
        }
        let algebra: LieAlgebra<S> = if let Some(p) = &self.equations {
            let text = read(p)?;
            let g = if text.trim_start().starts_with('{') {
                parse_structure_json(&parse_json(&text)?)?
            } else {
                parse_structure_equations(&text)?
            };
            lift(&g)
        } else if let Some(s) = &self.salamon {
            lift(&parse_structure_equations(s)?)
        } else if let Some(p) = &self.preset {
            Preset::from_name(p).ok_or_else(|| Error::Input(format!("unknown preset {p:?}")))?.algebra()
        } else {
            return Err(Error::Input("no input: give --family, --descriptor, --equations, --salamon or --preset".into()));
        };
        let algebra = LieAlgebra::checked(algebra.differentials().to_vec())?;
        let j = match self.j.as_deref() {
            None | Some("adapted") => ComplexStructure::adapted(),
            Some(path) => {
                let v = parse_json(&read(&PathBuf::from(path))?)?;
                let rows = v.as_array().filter(|r| r.len() == DIM).ok_or_else(|| Error::Input("J must be a 6×6 array".into()))?;
                let mut m = identity::<S>(DIM);
                for (i, row) in rows.iter().enumerate() {
                    let row = row.as_array().filter(|r| r.len() == DIM).ok_or_else(|| Error::Input("J must be a 6×6 array".into()))?;
                    for (k, x) in row.iter().enumerate() {
                        m[i][k] = match x {
                            Value::String(s) => num("j", s)?,
                            Value::Number(n) if n.is_i64() => S::from_int(n.as_i64().unwrap()),
                            _ => return Err(Error::Input("J entries must be integers or rational strings".into())),
                        };
                    }
                }
                ComplexStructure::from_vector_matrix(crate::complex::to_mat6(&m))?
            }
        };
        Ok(Subject::Structure { algebra, j })
    }
}

impl<S: Scalar> Subject<S> {
    fn label(&self) -> String {
        match self {
            Subject::Family(d) => d.summary(),
            Subject::Structure { algebra, .. } => algebra.to_salamon(),
        }
    }

    /// Hermitian structure in its natural frame.
    fn hermitian(&self) -> Result<HermitianStructure<S>> {
        match self {
            Subject::Family(d) => build_family(d),
            Subject::Structure { algebra, j } => {
                if j.is_adapted() {
                    Ok(HermitianStructure::adapted(algebra.clone()))
                } else {
                    HermitianStructure::new(algebra.clone(), j.clone(), identity(DIM))
                }
            }
        }
    }

    /// Hermitian structure re-expressed in an orthonormal adapted frame.
    fn adapted(&self) -> Result<HermitianStructure<S>> {
        let h = self.hermitian()?;
        if h.is_adapted_frame() {
            Ok(h)
        } else {
            Ok(h.adapted_frame()?.0)
        }
    }

    fn descriptor_json(&self) -> Value {
        match self {
            Subject::Family(d) => d.to_json(),
            Subject::Structure { algebra, .. } => json!({ "equations": algebra.to_salamon() }),
        }
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn connection<S: Scalar>(h: &HermitianStructure<S>, kind: Kind) -> Result<Connection<S>> {
    match kind {
        Kind::Bismut => Ok(Connection::bismut(h)?.0),
        Kind::Chern => Connection::chern(h),
        Kind::LeviCivita => Ok(Connection::levi_civita(h.algebra())),
    }
}

fn base_of(kind: Kind) -> Result<BaseConnection> {
    match kind {
        Kind::Bismut => Ok(BaseConnection::Bismut),
        Kind::Chern => Ok(BaseConnection::Chern),
        Kind::LeviCivita => Err(Error::Precondition("the anomaly equation uses the Bismut or Chern connection".into())),
    }
}

/// `identify` covers the 2-step algebras; families know their 3-step and solvable ones.
fn algebra_name<S: Scalar>(subject: &Subject<S>, g: &LieAlgebra<S>) -> &'static str {
    if let Some(name) = g.identify() {
        return name;
    }
    match subject {
        Subject::Family(d) => d.expected_algebra(),
        Subject::Structure { .. } if g.is_nilpotent() => "nilpotent",
        Subject::Structure { .. } => "non-nilpotent",
    }
}

fn with_schema(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("schema".into(), "1".into());
    }
    v
}

fn render(json_mode: bool, value: Value, text: String) -> String {
    if json_mode {
        format!("{}\n", serde_json::to_string(&with_schema(value)).expect("serializable"))
    } else {
        text
    }
}

fn execute<S: Scalar>(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Classify(input) => classify::<S>(cli.json, input),
        Command::Build(input) => build::<S>(cli.json, input),
        Command::Connection { input, kind } => connection_cmd::<S>(cli.json, input, *kind),
        Command::Holonomy { input, kind } => holonomy_cmd::<S>(cli.json, input, *kind),
        Command::Ddbar(input) => ddbar_cmd::<S>(cli.json, input),
        Command::Strominger { input, gauge } => strominger_cmd::<S>(cli.json, input, gauge),
        Command::Sweep { input, gauge, param, values } => sweep::<S>(cli.json, input, gauge, param, values),
    }
}

fn classify<S: Scalar>(json_mode: bool, input: &Input) -> Result<String> {
    let subject = input.subject::<S>(false)?;
    let h = subject.hermitian()?;
    let g = h.algebra();
    let c = h.complex_structure().classify(g);
    let balanced = if c.integrable { h.balanced_check()?.balanced } else { false };
    let name = algebra_name(&subject, g);
    let text = format!(
        "algebra: {name}, J: {}, balanced: {}\ninput: {}\nintegrable: {}\nnilpotent J: {}\n",
        c.kind.label(),
        yes(balanced),
        subject.label(),
        yes(c.integrable),
        yes(c.nilpotent),
    );
    let value = json!({
        "input": subject.descriptor_json(),
        "algebra": name,
        "complex_type": c.kind.label(),
        "integrable": c.integrable,
        "nilpotent": c.nilpotent,
        "balanced": balanced,
    });
    Ok(render(json_mode, value, text))
}

fn build<S: Scalar>(json_mode: bool, input: &Input) -> Result<String> {
    let subject = input.subject::<S>(false)?;
    let h = subject.hermitian()?;
    let g = h.algebra();
    let torsion = h.torsion();
    let dt = g.d(&torsion);
    let bal = h.balanced_check()?;
    let mut text = String::new();
    writeln!(text, "input: {}", subject.label()).unwrap();
    writeln!(text, "algebra: {} {}", algebra_name(&subject, g), g.to_salamon()).unwrap();
    for k in 1..=DIM {
        writeln!(text, "de{k} = {}", g.de(k)).unwrap();
    }
    writeln!(text, "adapted frame: {}", yes(h.is_adapted_frame())).unwrap();
    writeln!(text, "F = {}", h.fundamental()).unwrap();
    writeln!(text, "T = {torsion}").unwrap();
    writeln!(text, "dT = {dt}").unwrap();
    writeln!(text, "balanced: {}", yes(bal.balanced)).unwrap();
    let value = json!({
        "input": subject.descriptor_json(),
        "algebra": g.to_json(),
        "salamon": g.to_salamon(),
        "hermitian": h.to_json(),
        "torsion": torsion.to_text(),
        "dT": dt.to_text(),
        "balanced": bal.balanced,
        "residual": bal.residual.to_text(),
    });
    Ok(render(json_mode, value, text))
}

fn endo_text<S: Scalar>(f: &Form<S>) -> String {
    gamma_text(f).unwrap_or_else(|| f.to_text())
}

fn connection_cmd<S: Scalar>(json_mode: bool, input: &Input, kind: Kind) -> Result<String> {
    let subject = input.subject::<S>(false)?;
    let h = subject.adapted()?;
    let conn = connection(&h, kind)?;
    let curv = conn.curvature(h.algebra());
    let trace = curv.trace();
    let mut text = String::new();
    writeln!(text, "connection: {}", conn.kind().label()).unwrap();
    for i in 1..=DIM {
        for j in i + 1..=DIM {
            if !conn.form(i, j).is_zero() {
                writeln!(text, "sigma{i}{j} = {}", conn.form(i, j)).unwrap();
            }
        }
    }
    let mut rs = Vec::new();
    for ((p, q), r) in curv.endomorphisms() {
        let t = endo_text(&r);
        if !r.is_zero() {
            writeln!(text, "R(e{p},e{q}) = {t}").unwrap();
        }
        rs.push(json!({ "p": p, "q": q, "R": t }));
    }
    writeln!(text, "tr = {trace}").unwrap();
    let mut value = conn.to_json();
    value["curvature"] = Value::Array(rs);
    value["trace"] = trace.to_text().into();
    value["input"] = subject.descriptor_json();
    Ok(render(json_mode, value, text))
}

fn holonomy_cmd<S: Scalar>(json_mode: bool, input: &Input, kind: Kind) -> Result<String> {
    let subject = input.subject::<S>(false)?;
    let h = subject.adapted()?;
    let conn = connection(&h, kind)?;
    let hol = Holonomy::generate(&conn, h.algebra());
    let mut text = format!("dim: {}\nlabel: {}\nbasis:\n", hol.dim(), hol.label());
    for b in hol.basis_text() {
        writeln!(text, "  {b}").unwrap();
    }
    if !S::EXACT {
        let d = hol.diagnostic();
        writeln!(text, "rank gap: {:e}", d.gap()).unwrap();
    }
    Ok(render(json_mode, hol.to_json(), text))
}

fn ddbar_cmd<S: Scalar>(json_mode: bool, input: &Input) -> Result<String> {
    let subject = input.subject::<S>(false)?;
    let h = subject.hermitian()?;
    let r = weak_ddbar_check(h.algebra(), h.complex_structure())?;
    let b = r.coframe();
    let mut text = format!(
        "weak ddbar-lemma: {}\nstrong sublemma: {}\ndim del(L13) = {}, dim ddbar(L12) = {}, dim V = {}\n",
        r.verdict(),
        yes(r.strong),
        r.dim_del_13,
        r.dim_ddbar_12,
        r.dim_v
    );
    if let Some(w) = &r.witness {
        writeln!(text, "witness phi = {}", b.text(&w.phi)).unwrap();
        writeln!(text, "delbar phi = {}", b.text(&w.delbar_phi)).unwrap();
        writeln!(text, "eta = {}", b.text(&w.eta)).unwrap();
    }
    Ok(render(json_mode, r.to_json(), text))
}

fn instanton_spec<S: Scalar>(input: &Input, gauge: &Gauge) -> Result<Option<InstantonSpec<S>>> {
    let mut specs = Vec::new();
    if let Some(x) = &gauge.instanton_lambda {
        specs.push(InstantonSpec::Lambda(num("instanton-lambda", x)?));
    }
    if let (Some(x), false) = (&input.lambda, input.lambda_is_family()) {
        specs.push(InstantonSpec::Lambda(num("lambda", x)?));
    }
    if let Some(x) = &gauge.tau {
        specs.push(InstantonSpec::Tau(num("tau", x)?));
    }
    if gauge.solve_tau {
        specs.push(InstantonSpec::TauSolve);
    }
    if let Some(x) = &gauge.external_trace {
        let f = parse_form(x)?;
        if f.degree() != 4 {
            return Err(Error::Input("--external-trace must be a 4-form".into()));
        }
        specs.push(InstantonSpec::External(f.map(|q| S::from_rational(q))));
    }
    match specs.len() {
        0 => Ok(None),
        1 => Ok(specs.pop()),
        _ => Err(Error::Input("give exactly one instanton: --lambda, --instanton-lambda, --tau, --solve-tau or --external-trace".into())),
    }
}

fn strominger_cmd<S: Scalar>(json_mode: bool, input: &Input, gauge: &Gauge) -> Result<String> {
    let subject = input.subject::<S>(true)?;
    let spec = instanton_spec::<S>(input, gauge)?
        .ok_or_else(|| Error::Input("no instanton given: use --lambda, --tau, --solve-tau or --external-trace".into()))?;
    let h = subject.adapted()?;
    let r = strominger_report(&h, spec, base_of(gauge.connection)?)?;
    let alpha = r.anomaly.alpha.as_ref().map_or("-".to_string(), |a| a.to_plain_string());
    let mut text = String::new();
    writeln!(text, "input: {}", subject.label()).unwrap();
    writeln!(text, "connection: {}", if r.base == BaseConnection::Bismut { "bismut" } else { "chern" }).unwrap();
    writeln!(text, "gravitino: {} (holonomy {}, dim {})", yes(r.gravitino), r.holonomy.label(), r.holonomy.dim()).unwrap();
    writeln!(text, "dilatino: {}", yes(r.dilatino)).unwrap();
    let verified = if r.instanton_check.is_some() { "" } else { ", unverified external" };
    writeln!(text, "gaugino: {} ({}{verified})", yes(r.gaugino), r.instanton.label()).unwrap();
    if let Some(t) = &r.tau_squared {
        writeln!(text, "tau^2: {}", t.to_plain_string()).unwrap();
    }
    writeln!(text, "anomaly: {}, alpha': {alpha}", r.anomaly.status).unwrap();
    writeln!(text, "heterotic: {}", r.heterotic).unwrap();
    writeln!(text, "solution: {}", yes(r.solves_system())).unwrap();
    let mut value = r.to_json();
    value["input"] = subject.descriptor_json();
    Ok(render(json_mode, value, text))
}

#[derive(Clone, Debug)]
struct Row {
    value: String,
    complex_type: String,
    balanced: bool,
    ddbar: String,
    holonomy: String,
    alpha: Option<String>,
    note: Option<String>,
}

fn sweep_row<S: Scalar>(input: &Input, gauge: &Gauge, param: &str, value: &str) -> Result<Row> {
    let mut input = input.clone();
    let mut gauge = gauge.clone();
    let family_lambda = input.lambda_is_family();
    match param {
        "lambda" if !family_lambda => gauge.instanton_lambda = Some(value.to_string()),
        "tau" => gauge.tau = Some(value.to_string()),
        _ => {}
    }
    let with_gauge = instanton_spec::<S>(&input, &gauge)?.is_some() || param == "tau" || (param == "lambda" && !family_lambda);
    if param == "lambda" && !family_lambda {
        input.lambda = None;
    }
    let mut subject = input.subject::<S>(true)?;
    if !matches!(param, "tau") && !(param == "lambda" && !family_lambda) {
        match &mut subject {
            Subject::Family(d) => set_param(d, param, value)?,
            Subject::Structure { .. } => return Err(Error::Input("sweep needs a family input".into())),
        }
    }
    if let Subject::Family(d) = &subject {
        d.validate()?;
    }
    let h = subject.hermitian()?;
    let c = h.complex_structure().classify(h.algebra());
    let balanced = h.balanced_check()?.balanced;
    let ddbar = weak_ddbar_check(h.algebra(), h.complex_structure())?.verdict().to_string();
    let mut note = None;
    let holonomy = match subject.adapted().and_then(|a| Ok(Holonomy::generate(&Connection::bismut(&a)?.0, a.algebra()))) {
        Ok(hol) => format!("{} {}", hol.dim(), hol.label()),
        Err(e) => {
            note = Some(e.to_string());
            "-".into()
        }
    };
    let alpha = if with_gauge {
        let spec = instanton_spec::<S>(&input, &gauge)?.expect("gauge given");
        let res = subject.adapted().and_then(|a| strominger_report(&a, spec, base_of(gauge.connection)?));
        Some(match res {
            Ok(r) if r.solves_system() => r.anomaly.alpha.as_ref().map_or("-".into(), |a| a.to_plain_string()),
            Ok(r) => r.anomaly.status.label().to_string(),
            Err(e) => {
                note.get_or_insert_with(|| e.to_string());
                "-".into()
            }
        })
    } else {
        None
    };
    Ok(Row { value: value.to_string(), complex_type: c.kind.label().into(), balanced, ddbar, holonomy, alpha, note })
}

fn sweep<S: Scalar>(json_mode: bool, input: &Input, gauge: &Gauge, param: &str, values: &str) -> Result<String> {
    const PARAMS: [&str; 11] = ["rho", "delta", "b", "b2", "s", "t", "r", "u", "sign", "lambda", "tau"];
    if !PARAMS.contains(&param) {
        return Err(Error::Input(format!("unknown sweep parameter {param:?}")));
    }
    let grid: Vec<&str> = values.split([',', ';', ' ']).filter(|v| !v.is_empty()).collect();
    let rows: Vec<Row> = grid.par_iter().map(|v| sweep_row::<S>(input, gauge, param, v)).collect::<Result<_>>()?;
    let mut text = format!("{param}\ttype\tbalanced\tddbar\tholonomy\talpha'\n");
    for r in &rows {
        write!(
            text,
            "{}\t{}\t{}\t{}\t{}\t{}",
            r.value,
            r.complex_type,
            yes(r.balanced),
            r.ddbar,
            r.holonomy,
            r.alpha.as_deref().unwrap_or("-")
        )
        .unwrap();
        if let Some(n) = &r.note {
            write!(text, "\t# {n}").unwrap();
        }
        text.push('\n');
    }
    let value = json!({
        "param": param,
        "rows": rows.iter().map(|r| json!({
            "value": r.value,
            "complex_type": r.complex_type,
            "balanced": r.balanced,
            "ddbar": r.ddbar,
            "holonomy": r.holonomy,
            "alpha_prime": r.alpha,
            "note": r.note,
        })).collect::<Vec<_>>(),
    });
    Ok(render(json_mode, value, text))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        let p = |s| parse_complex::<Q>("u", s).unwrap();
        assert_eq!(p("3i"), (Q::from_int(0), Q::from_int(3)));
        assert_eq!(p("-i"), (Q::from_int(0), Q::from_int(-1)));
        assert_eq!(p("9/5+12/5i"), (Q::frac(9, 5), Q::frac(12, 5)));
        assert_eq!(p("5-7i"), (Q::from_int(5), Q::from_int(-7)));
        assert_eq!(p("13"), (Q::from_int(13), Q::from_int(0)));
        assert_eq!(p("0,3"), (Q::from_int(0), Q::from_int(3)));
        assert!(parse_complex::<Q>("u", "x").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Input("x".into())), 1);
        assert_eq!(exit_code(&Error::Domain("x".into())), 2);
        assert_eq!(exit_code(&Error::NotIntegrable), 2);
    }
}
