use serde::Serialize;

use smyth::algebra::{FieldParams, Poly};
use smyth::bounds::{
    construct_extremal_fqt, construct_extremal_int, fqt_solution_pool, int_criteria, int_solution_pool,
    min_balanced_search, SubsetSearch,
};
use smyth::certfile::CertificateFile;
use smyth::engine::{
    balanced_multiset, certificate_from_balanced, check_criteria, fiber_count, fiber_table, CoeffTuple, CriteriaReport,
    EngineError, SearchConfig,
};
use smyth::heuristic::{limit_scan, monte_carlo, p_n_closed_form, FamilyKind, Growth, SampleMode};
use smyth::numfield::{
    construct_certificate, parse_tuple, rou_relation_search, rou_twist, strong_criteria_check, QuadField, QuadInt,
    RouRelation, RouSearch, StrongReport, Verdict, DEFAULT_BRIDGE_BUDGET,
};
use smyth::Jobs;

use crate::args::{Cli, Command, Common, Format, HeuristicCommand, Mode, NumfieldCommand, QuadTuple, Tuple};
use crate::grid;
use crate::output::{self, emit, write_to, Failure, INPUT, NEGATIVE, OK};

pub fn dispatch(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::Check { q, coeffs, integer, common } => check(q, &coeffs, integer, &common),
        Command::Enumerate { tuple, n_box, j, x, common } => enumerate(&tuple, n_box, j.zip(x), &common),
        Command::Certify { tuple, n_box, out, common } => certify(&tuple, n_box, out.as_deref(), &common),
        Command::Minimal { q, coeffs, n_box, integer, bound, max_size, repeat, common } => {
            let opts = SubsetSearch {
                size_bound: max_size,
                max_multiplicity: if repeat { 2 } else { 1 },
                budget: common.budget,
                jobs: Jobs::new(common.jobs),
            };
            if integer {
                minimal_int(&coeffs, bound, &opts, &common)
            } else {
                let tuple = Tuple { q: q.expect("required by clap"), coeffs };
                minimal_fqt(&tuple, n_box.expect("required by clap"), &opts, &common)
            }
        }
        Command::Extremal { q, degree, seed, n_box, integer, out, common } => {
            extremal(if integer { None } else { q }, degree, seed, n_box, out.as_deref(), &common)
        }
        Command::Heuristic { command } => heuristic(command),
        Command::Numfield { command } => numfield(command),
        Command::Verify { file, common } => verify(&file, &common),
        Command::Batch { grid, common } => grid::run(&grid, &common),
    }
}

pub fn search_config(common: &Common) -> SearchConfig {
    SearchConfig::default().with_budget(common.budget).with_jobs(Jobs::new(common.jobs))
}

/// Parses `a_1;...;a_n`, reporting errors at their offset in the whole string.
pub fn parse_fqt(q: u64, text: &str) -> Result<CoeffTuple, Failure> {
    let field = FieldParams::new(q)?;
    let mut coeffs = Vec::new();
    let mut offset = 0;
    for (i, part) in text.split(';').enumerate() {
        let lead = part.len() - part.trim_start().len();
        let p = Poly::parse(field, part.trim()).map_err(|e| {
            Failure::input(format!(
                "coefficient {} of {text:?}: parse error at position {}: {}",
                i + 1,
                offset + lead + e.position,
                e.message
            ))
        })?;
        coeffs.push(p);
        offset += part.len() + 1;
    }
    Ok(CoeffTuple::new(coeffs)?)
}

fn parse_ints(text: &str) -> Result<Vec<i64>, Failure> {
    text.split(';')
        .enumerate()
        .map(|(i, s)| {
            s.trim().parse::<i64>().map_err(|e| Failure::input(format!("coefficient {} ({s:?}): {e}", i + 1)))
        })
        .collect()
}

fn texts<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn rows_text(rows: &[Vec<String>]) -> String {
    rows.iter().map(|r| format!("({})", r.join(", "))).collect::<Vec<_>>().join("\n")
}

#[derive(Serialize)]
struct CheckReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<u64>,
    coeffs: Vec<String>,
    #[serde(flatten)]
    report: CriteriaReport,
}

#[derive(Serialize)]
struct IntCheckReport {
    coeffs: Vec<i64>,
    passes: bool,
}

fn check(q: Option<u64>, coeffs: &str, integer: bool, common: &Common) -> Result<i32, Failure> {
    if integer {
        let a = parse_ints(coeffs)?;
        let passes = int_criteria(&a);
        emit(common.format, &IntCheckReport { coeffs: a, passes }, || format!("criteria: {}", verdict(passes)))?;
        return Ok(if passes { OK } else { NEGATIVE });
    }
    let a = parse_fqt(q.expect("required by clap"), coeffs)?;
    let report = check_criteria(&a);
    let passes = report.passes;
    let r = CheckReport { q: Some(a.field().q()), coeffs: texts(a.coeffs()), report };
    emit(common.format, &r, || {
        let mut s = format!("criteria: {}", verdict(passes));
        if let Some(w) = &r.report.witness {
            s.push_str(&format!("\nwitness: {}", serde_json::to_string(w).expect("serializes")));
        }
        s
    })?;
    Ok(if passes { OK } else { NEGATIVE })
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

/// `q^{N(n-2)-d}`, the fiber size for tuples meeting the criteria.
pub fn fiber_formula(a: &CoeffTuple, n_box: usize) -> Option<u128> {
    let e = (n_box * (a.n() - 2)).checked_sub(a.height())?;
    (a.field().q() as u128).checked_pow(e as u32)
}

#[derive(Serialize)]
struct FiberRange {
    j: usize,
    min: u64,
    max: u64,
}

#[derive(Serialize)]
struct EnumerateReport {
    q: u64,
    n: usize,
    coeffs: Vec<String>,
    #[serde(rename = "N")]
    n_box: usize,
    d: usize,
    applicable: bool,
    solutions: u64,
    formula: Option<u128>,
    fibers: Vec<FiberRange>,
    uniform: bool,
}

#[derive(Serialize)]
struct FiberReport {
    q: u64,
    coeffs: Vec<String>,
    #[serde(rename = "N")]
    n_box: usize,
    j: usize,
    x: String,
    applicable: bool,
    count: u64,
    formula: Option<u128>,
}

fn enumerate(t: &Tuple, n_box: usize, single: Option<(usize, String)>, common: &Common) -> Result<i32, Failure> {
    let a = parse_fqt(t.q, &t.coeffs)?;
    let cfg = search_config(common);
    let applicable = check_criteria(&a).passes;
    let formula = fiber_formula(&a, n_box);
    if let Some((j, x)) = single {
        if j == 0 || j > a.n() {
            return Err(Failure::input(format!("--j must be in 1..={}", a.n())));
        }
        let x = Poly::parse(a.field(), x.trim()).map_err(|e| Failure::input(format!("--x: {e}")))?;
        let count = fiber_count(&a, n_box, j - 1, &x, &cfg)?;
        let ok = !applicable || formula == Some(count as u128);
        let r = FiberReport {
            q: t.q,
            coeffs: texts(a.coeffs()),
            n_box,
            j,
            x: x.to_string(),
            applicable,
            count,
            formula,
        };
        emit(common.format, &r, || format!("fiber x_{j} = {}: {count} (formula {formula:?})", r.x))?;
        return Ok(if ok { OK } else { NEGATIVE });
    }
    let table = fiber_table(&a, n_box, &cfg)?;
    let fibers: Vec<FiberRange> = table
        .iter()
        .enumerate()
        .map(|(j, col)| FiberRange {
            j: j + 1,
            min: *col.iter().min().expect("nonempty box"),
            max: *col.iter().max().expect("nonempty box"),
        })
        .collect();
    let uniform = fibers.iter().all(|f| Some(f.min as u128) == formula && f.max == f.min);
    let r = EnumerateReport {
        q: t.q,
        n: a.n(),
        coeffs: texts(a.coeffs()),
        n_box,
        d: a.height(),
        applicable,
        solutions: table[0].iter().sum(),
        formula,
        fibers,
        uniform,
    };
    emit(common.format, &r, || {
        let mut s = format!("solutions: {}\nformula: {:?}\n", r.solutions, r.formula);
        for f in &r.fibers {
            s.push_str(&format!("x_{}: fibers {}..{}\n", f.j, f.min, f.max));
        }
        s.push_str(&format!("uniform: {}", r.uniform));
        s
    })?;
    Ok(if applicable && !uniform { NEGATIVE } else { OK })
}

fn not_smyth(e: EngineError) -> Failure {
    match e {
        EngineError::NotSmythTuple(reason) => Failure::negative(format!(
            "not a Smyth tuple ({reason}); a balanced multiset forces the absolute value criteria, so none exists"
        )),
        e => e.into(),
    }
}

fn certify(t: &Tuple, n_box: usize, out: Option<&std::path::Path>, common: &Common) -> Result<i32, Failure> {
    let a = parse_fqt(t.q, &t.coeffs)?;
    let b = balanced_multiset(&a, n_box, &search_config(common)).map_err(not_smyth)?;
    let file = CertificateFile::from_balanced(&a, n_box, &b);
    if !file.verify()? {
        return Err(Failure::negative("generated certificate failed verification"));
    }
    match common.format.unwrap_or(Format::Json) {
        Format::Json => write_to(out, &file.to_json())?,
        Format::Text => write_to(
            out,
            &format!("balanced multiset of size {}\n{}", file.m, rows_text(file.balanced.as_deref().unwrap_or(&[]))),
        )?,
        Format::Csv => return Err(Failure::input("csv output is not available for this command")),
    }
    Ok(OK)
}

#[derive(Serialize)]
struct MinimalReport {
    pool_size: usize,
    max_size: usize,
    found: bool,
    size: Option<usize>,
    tuples: Vec<Vec<String>>,
}

fn minimal_report<T: ToString>(pool: usize, opts: &SubsetSearch, found: Option<Vec<Vec<T>>>) -> MinimalReport {
    let tuples: Vec<Vec<String>> = found.iter().flatten().map(|t| texts(t)).collect();
    MinimalReport {
        pool_size: pool,
        max_size: opts.size_bound,
        found: found.is_some(),
        size: found.as_ref().map(Vec::len),
        tuples,
    }
}

fn emit_minimal(r: &MinimalReport, common: &Common) -> Result<i32, Failure> {
    emit(common.format, r, || match r.size {
        Some(k) => format!("minimal size {k}\n{}", rows_text(&r.tuples)),
        None => format!("none up to size {}", r.max_size),
    })?;
    Ok(if r.found { OK } else { NEGATIVE })
}

fn minimal_fqt(t: &Tuple, n_box: usize, opts: &SubsetSearch, common: &Common) -> Result<i32, Failure> {
    let a = parse_fqt(t.q, &t.coeffs)?;
    let pool = fqt_solution_pool(&a, n_box, &search_config(common))?;
    let found = min_balanced_search(a.coeffs(), &pool, opts)?;
    emit_minimal(&minimal_report(pool.len(), opts, found.map(|b| b.tuples().to_vec())), common)
}

fn minimal_int(coeffs: &str, bound: i64, opts: &SubsetSearch, common: &Common) -> Result<i32, Failure> {
    let a = parse_ints(coeffs)?;
    if a.len() < 3 || a.contains(&0) || bound < 1 {
        return Err(Failure::input("need at least 3 nonzero coefficients and --bound >= 1"));
    }
    let pool = int_solution_pool(&a, bound, common.budget)?;
    let found = min_balanced_search(&a, &pool, opts)?;
    emit_minimal(&minimal_report(pool.len(), opts, found.map(|b| b.tuples().to_vec())), common)
}

fn extremal(
    q: Option<u64>,
    degree: usize,
    seed: u64,
    n_box: Option<usize>,
    out: Option<&std::path::Path>,
    common: &Common,
) -> Result<i32, Failure> {
    let file = match q {
        None => CertificateFile::from_extremal_int(&construct_extremal_int(degree)?),
        Some(q) => {
            let inst = construct_extremal_fqt(q, degree, seed)?;
            match n_box {
                Some(n_box) => {
                    let b = balanced_multiset(&inst.coeff_tuple(), n_box, &search_config(common)).map_err(not_smyth)?;
                    CertificateFile::from_extremal_fqt(&inst, Some((n_box, &certificate_from_balanced(&b))))
                }
                None => CertificateFile::from_extremal_fqt(&inst, None),
            }
        }
    };
    if !file.verify()? {
        return Err(Failure::negative("generated certificate failed verification"));
    }
    match common.format.unwrap_or(Format::Json) {
        Format::Json => write_to(out, &file.to_json())?,
        Format::Text => {
            let r = file.order_bound.as_ref().expect("extremal files carry an order bound");
            write_to(
                out,
                &format!("triple ({})\norder {} of {}\nclaimed minimum {}", r.triple.join(", "), r.order, r.group_order, r.claimed_min),
            )?
        }
        Format::Csv => return Err(Failure::input("csv output is not available for this command")),
    }
    Ok(OK)
}

#[derive(Serialize)]
struct PnReport {
    q: u64,
    d: usize,
    n: usize,
    #[serde(rename = "N")]
    n_box: usize,
    log_group_size: f64,
    p: f64,
    log_p: f64,
    log_neg_log_p: f64,
}

fn heuristic(command: HeuristicCommand) -> Result<i32, Failure> {
    match command {
        HeuristicCommand::Mc { tuple, n_box, family, trials, seed, mode, common } => {
            let a = parse_fqt(tuple.q, &tuple.coeffs)?;
            let kind: FamilyKind = family.parse()?;
            let mode = match mode {
                Mode::Auto => SampleMode::Auto,
                Mode::Sample => SampleMode::Sample,
                Mode::Exhaustive => SampleMode::Exhaustive,
            };
            let r = monte_carlo(&a, n_box, kind, trials, seed, mode, Jobs::new(common.jobs))?;
            emit(common.format, &r, || {
                format!(
                    "{} of {} trials hit ({}); rate {:.6}, model {:.6e}",
                    r.hits,
                    r.trials,
                    if r.exhaustive { "exhaustive" } else { "sampled" },
                    r.empirical_rate,
                    r.model_rate
                )
            })?;
            Ok(OK)
        }
        HeuristicCommand::Pn { q, d, n, n_box, group_order, log_group_size, common } => {
            if n < 2 {
                return Err(Failure::input("--n must be at least 2"));
            }
            let lg = match (group_order, log_group_size) {
                (Some(g), _) if g >= 1.0 => g.ln(),
                (Some(g), _) => return Err(Failure::input(format!("--group-order must be at least 1, got {g}"))),
                (None, Some(l)) => l,
                (None, None) => unreachable!("required by clap"),
            };
            let lp = p_n_closed_form(q, d, n, n_box, lg);
            let r = PnReport { q, d, n, n_box, log_group_size: lg, p: lp.p(), log_p: lp.log_p, log_neg_log_p: lp.log_neg_log_p };
            emit(common.format, &r, || format!("p_N = {:e} (log {:e})", r.p, r.log_p))?;
            Ok(OK)
        }
        HeuristicCommand::Scan { q, d, n, growth, from, to, common } => {
            if n < 2 || from == 0 || from > to {
                return Err(Failure::input("need --n >= 2 and 1 <= --from <= --to"));
            }
            let g: Growth = growth.parse()?;
            let scan = limit_scan(q, d, n, g, from..=to);
            match common.format.unwrap_or(Format::Csv) {
                Format::Csv => print!("{}", output::csv(&scan.rows)?),
                Format::Json => println!("{}", output::json(&scan)),
                Format::Text => {
                    for r in &scan.rows {
                        println!("N = {}: log p_N = {:e}", r.n_box, r.log_p);
                    }
                }
            }
            Ok(if scan.check(g) { OK } else { NEGATIVE })
        }
    }
}

#[derive(Serialize)]
struct FieldHeader {
    m: i64,
    omega: &'static str,
}

fn header(k: QuadField) -> FieldHeader {
    FieldHeader { m: k.m(), omega: if k.half_omega() { "half" } else { "sqrt" } }
}

fn quad_tuple(t: &QuadTuple) -> Result<(QuadField, Vec<QuadInt>), Failure> {
    let k = QuadField::new(t.m)?;
    Ok((k, parse_tuple(k, &t.coeffs)?))
}

#[derive(Serialize)]
struct CriteriaOut {
    field: FieldHeader,
    coeffs: Vec<String>,
    #[serde(flatten)]
    report: StrongReport,
}

#[derive(Serialize)]
struct RouOut {
    field: FieldHeader,
    coeffs: Vec<String>,
    max_order: u64,
    found: bool,
    relation: Option<RouRelation>,
}

#[derive(Serialize)]
struct TwistOut {
    coeffs: Vec<String>,
    size: usize,
    balanced: bool,
    tuples: Vec<Vec<String>>,
}

fn numfield(command: NumfieldCommand) -> Result<i32, Failure> {
    match command {
        NumfieldCommand::Criteria { tuple, common } => {
            let (k, a) = quad_tuple(&tuple)?;
            let report = strong_criteria_check(&a)?;
            let v = report.verdict;
            let r = CriteriaOut { field: header(k), coeffs: texts(&a), report };
            emit(common.format, &r, || format!("strong criteria: {}", serde_json::to_string(&v).expect("serializes")))?;
            match v {
                Verdict::Pass => Ok(OK),
                Verdict::Fail => Ok(NEGATIVE),
                Verdict::Unsupported => {
                    eprintln!("finite places are not decided for this field");
                    Ok(INPUT)
                }
            }
        }
        NumfieldCommand::Rou { tuple, max_order, common } => {
            let (k, a) = quad_tuple(&tuple)?;
            let opts = RouSearch { max_order, budget: common.budget.max(smyth::numfield::DEFAULT_ROU_BUDGET), jobs: Jobs::new(common.jobs) };
            let relation = rou_relation_search(&a, &opts)?;
            let found = relation.is_some();
            let r = RouOut { field: header(k), coeffs: texts(&a), max_order, found, relation };
            emit(common.format, &r, || match &r.relation {
                Some(rel) => format!("relation with exponents {:?} mod {}", rel.exponents, rel.common_order),
                None => format!("no relation with common order up to {max_order}"),
            })?;
            Ok(if found { OK } else { NEGATIVE })
        }
        NumfieldCommand::Construct { m, alpha, n, out, common } => {
            let k = QuadField::new(m)?;
            let alpha = QuadInt::parse(k, &alpha)?;
            let c = construct_certificate(&alpha, n, DEFAULT_BRIDGE_BUDGET)?;
            let file = CertificateFile::from_numfield(&c);
            match common.format.unwrap_or(Format::Json) {
                Format::Json => write_to(out.as_deref(), &file.to_json())?,
                Format::Text => write_to(
                    out.as_deref(),
                    &format!("{} permutations of size {} ({:?}), verified: {}", c.permutations.len(), c.matrix.size(), c.strategy, c.verified),
                )?,
                Format::Csv => return Err(Failure::input("csv output is not available for this command")),
            }
            Ok(if c.verified && file.verify()? { OK } else { NEGATIVE })
        }
        NumfieldCommand::Twist { coeffs, tuples, j, order, common } => {
            let a = parse_ints(&coeffs)?;
            let tuples: Vec<Vec<i64>> = tuples.iter().map(|t| parse_ints(t)).collect::<Result<_, _>>()?;
            if j == 0 {
                return Err(Failure::input("--j is 1-based"));
            }
            let tw = rou_twist(&a, &tuples, j - 1, order)?;
            let r = TwistOut {
                coeffs: texts(&tw.coeffs),
                size: tw.multiset.size(),
                balanced: smyth::balanced::is_balanced(&tw.coeffs, tw.multiset.tuples())?,
                tuples: tw.multiset.tuples().iter().map(|t| texts(t)).collect(),
            };
            emit(common.format, &r, || format!("({})\nbalanced multiset of size {}\n{}", r.coeffs.join(", "), r.size, rows_text(&r.tuples)))?;
            Ok(if r.balanced { OK } else { NEGATIVE })
        }
    }
}

#[derive(Serialize)]
struct VerifyOut {
    kind: smyth::certfile::CertKind,
    valid: bool,
}

fn verify(path: &std::path::Path, common: &Common) -> Result<i32, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let file = CertificateFile::from_json(&text)?;
    let valid = file.verify()?;
    emit(common.format, &VerifyOut { kind: file.kind, valid }, || format!("certificate {}", if valid { "valid" } else { "invalid" }))?;
    Ok(if valid { OK } else { NEGATIVE })
}
