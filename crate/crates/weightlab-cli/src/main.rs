use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use weightlab::crosscheck::{ambient, cross_check};
use weightlab::labels::{
    center_orbit, count, defect_valuation, enumerate_ialp, enumerate_iibr, kappa_alp, kappa_ibr, GroupKind,
};
use weightlab::matgroups::{configured_cap, gl_group, gu_group, sl_group, su_group, FiniteMatrixGroup};
use weightlab::radical::{
    det_info, exceptional_weight_case, is_special, splitting_count, substitute_d, xi_case, BasicShape,
    RadicalShape, ShapeKind,
};
use weightlab::roots::GlobalContext;
use weightlab::symplectic::{
    basic_subgroup, build_generators, default_grid, field_for, mat_coeffs, normalizer_generators,
    twisting_element, verify_section3, GridPoint, Tamper,
};
use weightlab::Error;

#[derive(Parser)]
#[command(name = "weightlab", about = "Label counts, radical subgroup data and matrix checks for GL/SL/GU/SU")]
struct Cli {
    #[arg(long, value_enum, default_value = "json-lines", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    JsonLines,
    Tsv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Group {
    Gl,
    Sl,
    Gu,
    Su,
}

impl Group {
    fn eta(self) -> i8 {
        match self {
            Group::Gl | Group::Sl => 1,
            Group::Gu | Group::Su => -1,
        }
    }

    fn det_one(self) -> bool {
        matches!(self, Group::Sl | Group::Su)
    }

    fn name(self) -> &'static str {
        match self {
            Group::Gl => "gl",
            Group::Sl => "sl",
            Group::Gu => "gu",
            Group::Su => "su",
        }
    }
}

#[derive(Args)]
struct GroupArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    q: u64,
    #[arg(long, value_enum)]
    group: Group,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    R,
    S,
    Eplus,
    Eminus,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TamperArg {
    None,
    VandermondeSign,
}

#[derive(Subcommand)]
enum Command {
    /// Brauer-character and weight label counts, optionally against brute force.
    Count {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long)]
        ell: u64,
        /// Fail (exit 1) unless all counts agree with the class-count oracle.
        #[arg(long)]
        check: bool,
    },
    /// Stream every Brauer-character and weight label.
    Labels {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long)]
        ell: u64,
    },
    /// Classification data for one basic radical subgroup shape.
    Radical {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        eta: i8,
        #[arg(long, value_enum, default_value = "r")]
        kind: Kind,
        #[arg(long, default_value_t = 1)]
        m: u64,
        #[arg(long, default_value_t = 0)]
        alpha: u32,
        #[arg(long, default_value_t = 0)]
        gamma: u32,
        /// Wreath parameters, comma separated.
        #[arg(long, value_delimiter = ',')]
        c: Vec<u32>,
    },
    /// Multiply out every generator relation and determinant claim on the standard grid.
    #[command(name = "verify-section3")]
    VerifySection3 {
        /// Print the generator matrices of every grid point instead of the check report.
        #[arg(long)]
        emit_matrices: bool,
        /// Print passing claims as well as failures.
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum, default_value = "none")]
        tamper: TamperArg,
    },
    /// Brute-force tables from explicit matrix groups.
    Bruteforce {
        #[command(subcommand)]
        what: Bruteforce,
    },
}

#[derive(Subcommand)]
enum Bruteforce {
    /// Conjugacy classes.
    Classes {
        #[command(flatten)]
        g: GroupArgs,
    },
    /// Radical subgroup classes, compared with the shape classification.
    Radical {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long)]
        ell: u64,
    },
}

enum Failure {
    Verification(String),
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type Outcome = Result<Vec<Value>, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Count { g, ell, check } => cmd_count(&g, ell, check),
        Command::Labels { g, ell } => cmd_labels(&g, ell),
        Command::Radical { ell, q, eta, kind, m, alpha, gamma, c } => cmd_radical(ell, q, eta, kind, m, alpha, gamma, &c),
        Command::VerifySection3 { emit_matrices, all, tamper } => cmd_verify(emit_matrices, all, tamper),
        Command::Bruteforce { what } => match what {
            Bruteforce::Classes { g } => cmd_classes(&g),
            Bruteforce::Radical { g, ell } => cmd_bf_radical(&g, ell),
        },
    };
    let (rows, code, msg) = match result {
        Ok(rows) => (rows, 0, None),
        Err(Failure::Verification(rows_msg)) => (Vec::new(), 1, Some(rows_msg)),
        Err(Failure::Invalid(msg)) => (Vec::new(), 2, Some(msg)),
    };
    if let Err(e) = emit(&rows, cli.format) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if let Some(m) = msg {
        eprintln!("{}: {m}", if code == 1 { "verification failed" } else { "error" });
    }
    ExitCode::from(code)
}

fn emit(rows: &[Value], format: Format) -> std::io::Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::JsonLines => {
            for r in rows {
                writeln!(out, "{r}")?;
            }
        }
        Format::Tsv => {
            let mut header: Option<Vec<String>> = None;
            for r in rows {
                let Value::Object(map) = r else { continue };
                let keys: Vec<String> = map.keys().cloned().collect();
                if header.as_ref() != Some(&keys) {
                    writeln!(out, "{}", keys.join("\t"))?;
                    header = Some(keys);
                }
                let cells: Vec<String> = map
                    .values()
                    .map(|v| match v {
                        Value::String(s) => s.clone(),
                        Value::Null => String::new(),
                        other => other.to_string(),
                    })
                    .collect();
                writeln!(out, "{}", cells.join("\t"))?;
            }
        }
    }
    Ok(())
}

fn context(q: u64, eta: i8, ell: u64) -> Result<GlobalContext, Failure> {
    Ok(GlobalContext::new(q, eta, ell)?)
}

fn whole_group(g: &GroupArgs) -> Result<FiniteMatrixGroup, Error> {
    let n = g.n as usize;
    match g.group {
        Group::Gl => gl_group(n, g.q),
        Group::Sl => sl_group(n, g.q),
        Group::Gu => gu_group(n, g.q),
        Group::Su => su_group(n, g.q),
    }
}

fn check_n(g: &GroupArgs) -> Result<(), Failure> {
    if g.n == 0 {
        return Err(Failure::Invalid("n must be positive".into()));
    }
    if g.group.det_one() && g.n < 2 {
        return Err(Failure::Invalid("the determinant-one groups need n >= 2".into()));
    }
    Ok(())
}

fn cmd_count(g: &GroupArgs, ell: u64, check: bool) -> Outcome {
    check_n(g)?;
    let ctx = context(g.q, g.group.eta(), ell)?;
    let kind = if g.group.det_one() { GroupKind::Sl } else { GroupKind::Gl };
    let (ibr, alp) = count(&ctx, g.n, kind);
    let oracle = match whole_group(g) {
        Ok(grp) => Some(grp.ell_regular_class_count(ell) as u64),
        Err(Error::CapExceeded(c)) if check => {
            return Err(Failure::Invalid(format!("group exceeds the cap of {c} elements")))
        }
        Err(Error::CapExceeded(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let row = json!({
        "group": g.group.name(), "n": g.n, "q": g.q, "ell": ell,
        "ibr": ibr, "alp": alp, "oracle": oracle,
    });
    if check && (ibr != alp || oracle != Some(ibr)) {
        emit(&[row], Format::JsonLines).ok();
        return Err(Failure::Verification(format!("ibr={ibr} alp={alp} oracle={oracle:?}")));
    }
    Ok(vec![row])
}

fn cmd_labels(g: &GroupArgs, ell: u64) -> Outcome {
    check_n(g)?;
    if g.group.det_one() {
        return Err(Failure::Invalid("labels are listed for gl or gu; use count for sl/su".into()));
    }
    let ctx = context(g.q, g.group.eta(), ell)?;
    let ibr = enumerate_iibr(&ctx, g.n);
    let alp = enumerate_ialp(&ctx, g.n);
    let mut orbit_ids: BTreeMap<String, usize> = BTreeMap::new();
    let mut id_of = |key: String| {
        let next = orbit_ids.len();
        *orbit_ids.entry(key).or_insert(next)
    };
    let mut rows = Vec::new();
    for x in &ibr {
        let rep = center_orbit(&ctx, x).into_iter().min().expect("orbit contains x");
        let (k1, k2) = kappa_ibr(&ctx, x);
        rows.push(json!({
            "kind": "ibr",
            "s": x.s,
            "mu": x.mu,
            "kappa": [k1, k2],
            "defect_valuation": defect_valuation(&ctx, x),
            "zeta_orbit": id_of(format!("i{}", serde_json::to_string(&rep).unwrap_or_default())),
        }));
    }
    for y in &alp {
        let rep = center_orbit(&ctx, y).into_iter().min().expect("orbit contains y");
        let (k1, k2) = kappa_alp(&ctx, y);
        rows.push(json!({
            "kind": "alp",
            "s": y.s,
            "lambda": y.lambda,
            "towers": y.k,
            "kappa": [k1, k2],
            "deg_k": y.deg(),
            "zeta_orbit": id_of(format!("a{}", serde_json::to_string(&rep).unwrap_or_default())),
        }));
    }
    Ok(rows)
}

#[allow(clippy::too_many_arguments)]
fn cmd_radical(ell: u64, q: u64, eta: i8, kind: Kind, m: u64, alpha: u32, gamma: u32, c: &[u32]) -> Outcome {
    let ctx = context(q, eta, ell)?;
    let kind = match kind {
        Kind::R => ShapeKind::R,
        Kind::S => ShapeKind::S,
        Kind::Eplus => ShapeKind::Eplus,
        Kind::Eminus => ShapeKind::Eminus,
    };
    let b = BasicShape { kind, m, alpha, gamma, c: c.to_vec() };
    let r = RadicalShape::basic(b.clone());
    let special = is_special(&ctx, &r)?;
    let d = det_info(&ctx, &r)?;
    let splitting = if special { Some(splitting_count(&ctx, &r)?) } else { None };
    let sub = if ctx.two_unitary() { Some(substitute_d(&ctx, &b)?.to_string()) } else { None };
    let xi = xi_case(&ctx, &r).ok().map(|x| x.to_string());
    Ok(vec![json!({
        "shape": r.to_string(),
        "degree": r.degree(&ctx),
        "special": special,
        "order_det_r": d.order_det_r,
        "order_det_rc": d.order_det_rc,
        "order_det_n": d.order_det_n,
        "splitting": splitting,
        "exceptional_case": exceptional_weight_case(&ctx, &r)?,
        "substitute_d": sub,
        "xi_case": xi,
    })])
}

fn point_matrices(p: &GridPoint) -> Result<Value, Error> {
    let ctx = GlobalContext::new(p.q, p.eta, p.ell)?;
    let alpha = if p.kind == ShapeKind::S { 1 } else { p.alpha };
    let field = field_for(&ctx, alpha)?;
    let g = build_generators(&ctx, &field, p.m, p.alpha, p.gamma, p.kind)?;
    let ns = normalizer_generators(&ctx, &field, p.m, p.alpha, p.gamma, p.kind)?;
    let v = twisting_element(&ctx, &field, p.m, p.alpha, p.gamma, p.kind)?;
    let enc = |a: &weightlab::matrix::Mat| mat_coeffs(&field, a);
    let twisted: Vec<_> = basic_subgroup(&ctx, &field, &BasicShape { kind: p.kind, m: p.m, alpha: p.alpha, gamma: p.gamma, c: vec![] })
        .map(|(gs, _)| gs.iter().map(enc).collect())
        .unwrap_or_default();
    Ok(json!({
        "point": p,
        "field": &*field,
        "z": enc(&g.z),
        "x": g.x.iter().map(enc).collect::<Vec<_>>(),
        "y": g.y.iter().map(enc).collect::<Vec<_>>(),
        "extras": g.extras.iter().map(enc).collect::<Vec<_>>(),
        "normalizer": ns.iter().map(|n| json!({"name": n.name, "matrix": enc(&n.mat)})).collect::<Vec<_>>(),
        "twisting_element": enc(&v),
        "twisted_generators": twisted,
    }))
}

fn cmd_verify(emit_matrices: bool, all: bool, tamper: TamperArg) -> Outcome {
    let grid = default_grid();
    if emit_matrices {
        return grid.iter().map(|p| point_matrices(p).map_err(Failure::from)).collect();
    }
    let tamper = match tamper {
        TamperArg::None => Tamper::None,
        TamperArg::VandermondeSign => Tamper::VandermondeSign,
    };
    let report = verify_section3(&grid, tamper)?;
    let failures = report.failures().len();
    let mut rows: Vec<Value> = report
        .records
        .iter()
        .filter(|r| all || !r.pass)
        .map(|r| serde_json::to_value(r).expect("serializable"))
        .collect();
    rows.push(json!({"claims": report.records.len(), "failures": failures, "pass": failures == 0}));
    if failures > 0 {
        emit(&rows, Format::JsonLines).ok();
        return Err(Failure::Verification(format!("{failures} of {} claims failed", report.records.len())));
    }
    Ok(rows)
}

fn cmd_classes(g: &GroupArgs) -> Outcome {
    check_n(g)?;
    let grp = whole_group(g)?;
    let table = grp.conjugacy_classes();
    let mut rows: Vec<Value> = (0..table.reps.len())
        .map(|i| {
            json!({
                "class": i,
                "size": table.sizes[i],
                "element_order": table.orders[i],
                "representative": mat_coeffs(&grp.field, &grp.elems[table.reps[i] as usize]),
            })
        })
        .collect();
    rows.push(json!({"group": g.group.name(), "n": g.n, "q": g.q, "order": grp.order(), "classes": table.reps.len()}));
    Ok(rows)
}

fn cmd_bf_radical(g: &GroupArgs, ell: u64) -> Outcome {
    check_n(g)?;
    let ctx = context(g.q, g.group.eta(), ell)?;
    let cap = configured_cap();
    if g.group.det_one() {
        let field = field_for(&ctx, 0)?;
        let (grp, sl) = ambient(&ctx, field, g.n as usize)?;
        let classes = grp.radical_subgroups(&sl, ell, cap)?;
        let mut rows: Vec<Value> = classes
            .iter()
            .map(|r| json!({"order": r.order(), "normalizer_order": grp.normalizer(&sl, r).order()}))
            .collect();
        rows.push(json!({"group": g.group.name(), "n": g.n, "q": g.q, "ell": ell, "radical_classes": classes.len()}));
        return Ok(rows);
    }
    let report = cross_check(g.q, g.group.eta(), ell, g.n as usize, cap)?;
    let mut rows: Vec<Value> = report.rows.iter().map(|r| serde_json::to_value(r).expect("serializable")).collect();
    rows.push(json!({
        "group": g.group.name(), "n": g.n, "q": g.q, "ell": ell,
        "radical_classes": report.rows.len(),
        "non_radical_shapes": report.non_radical_shapes,
        "unmatched_shapes": report.unmatched_shapes,
        "sl_radical_classes": report.sl_radical_classes,
        "predicted_sl_classes": report.predicted_sl_classes,
        "pass": report.pass,
    }));
    if !report.pass {
        emit(&rows, Format::JsonLines).ok();
        return Err(Failure::Verification("radical classes disagree with the shape classification".into()));
    }
    Ok(rows)
}
