use std::fmt::Write as _;
use std::path::Path;

use cylfourier::builtins::{sample_builtin, BuiltinParams};
use cylfourier::conjugation::solve;
use cylfourier::diagnostics::{
    decay_certificate_line, decay_certificate_mixed, decay_certificate_torus, refinement_divergence_probe, seminorm_pn,
    DecayCertificate,
};
use cylfourier::io::{read_file, write_csv, write_file};
use cylfourier::solver::apply_operator;
use cylfourier::scalar::rat_to_f64;
use cylfourier::symbol::{GapKind, brute_force_min_near, brute_force_min_symbol, symbol_of, DeciderRegistry, ScanBox, SghReport, Verdict};
use cylfourier::transforms::TransformRegistry;
use cylfourier::{CylinderGrid, DataKind, DifferentialOperator, GridData, SampledField};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{AnalyzeArgs, DiagnoseArgs, Direction, Global, OperatorArgs, SampleArgs, SolveArgs, Source, TransformArgs, Which};
use crate::error::CliError;
use crate::parser::{parse_operator, ParseOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_NOT_SGH: i32 = 10;

/// Result of a command: the JSON document, a human summary and the exit code.
#[derive(Debug)]
pub struct Report {
    pub json: Value,
    pub text: String,
    pub exit: i32,
}

pub fn parse_grid(text: &str) -> Result<CylinderGrid, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || CliError::Usage(format!("--grid expects `n_t,n_x,X`, got `{text}`"));
    let [nt, nx, x] = parts.as_slice() else { return Err(bad()) };
    let nt = nt.parse().map_err(|_| bad())?;
    let nx = nx.parse().map_err(|_| bad())?;
    let x = x.parse().map_err(|_| bad())?;
    Ok(CylinderGrid::new(nt, nx, x)?)
}

fn operator(args: &OperatorArgs) -> Result<(DifferentialOperator, Vec<String>), CliError> {
    let parsed = parse_operator(&args.spec, ParseOptions { rationalize: args.rationalize })?;
    Ok((parsed.operator, parsed.warnings))
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable report")
}

fn verdict_exit(v: Verdict) -> i32 {
    match v {
        Verdict::Sgh => EXIT_OK,
        Verdict::NotSgh => EXIT_NOT_SGH,
    }
}

fn report_text(report: &SghReport) -> String {
    let mut s = format!("verdict: {}\nmethod: {}\n", if report.is_sgh() { "SGH" } else { "NotSGH" }, report.method.name());
    if let Some(w) = &report.witness {
        let _ = writeln!(s, "zero: k = {}, xi in [{}, {}] (~{})", w.k, w.xi_lo, w.xi_hi, w.xi_approx());
    }
    if let Some(g) = &report.gap {
        let kind = match g.kind {
            GapKind::Exact => "exact",
            GapKind::LowerBound => "rigorous lower bound",
            GapKind::Estimate => "numerical estimate",
        };
        let _ = writeln!(s, "gap: {} ~ {:.6} ({kind})", g.value, rat_to_f64(&g.value));
    }
    if let Some(nf) = &report.normal_form {
        let _ = writeln!(s, "normal form: {nf}");
    }
    for n in &report.notes {
        let _ = writeln!(s, "note: {n}");
    }
    s
}

const ORACLE_AGREEMENT: f64 = 1e-6;

fn oracle(op: &DifferentialOperator, report: &SghReport, scan: &ScanBox) -> Result<Value, CliError> {
    let target = report.normal_form.as_ref().unwrap_or(op);
    let sym = symbol_of(target)?;
    let min = brute_force_min_symbol(&sym, scan);
    let (agrees, near) = match &report.witness {
        Some(w) => {
            let near = brute_force_min_near(&sym, w.k, w.xi_approx(), 1e-3, 2001);
            (near.min < ORACLE_AGREEMENT, Some(near))
        }
        None => (min.min > ORACLE_AGREEMENT, None),
    };
    let out = json!({
        "box": {"K": scan.k_max, "XI": scan.xi_max, "samples": scan.samples},
        "scan_min": min.min, "argmin_k": min.k, "argmin_xi": min.xi,
        "near_witness_min": near.map(|n| n.min),
        "agrees": agrees,
    });
    if !agrees {
        return Err(CliError::Inconsistent(format!("oracle disagrees with the exact verdict: {out}")));
    }
    Ok(out)
}

pub fn analyze(args: &AnalyzeArgs) -> Result<Report, CliError> {
    let (op, warnings) = operator(&args.op)?;
    let reg = DeciderRegistry::standard();
    let report = match &args.method {
        Some(m) => reg.decide_with(m, &op)?,
        None => reg.decide(&op)?,
    };
    report.check_invariants()?;
    let mut json = to_json(&report);
    json["operator"] = json!(op.to_string());
    json["warnings"] = json!(warnings);
    let mut text = format!("operator: {op}\n{}", report_text(&report));
    if args.oracle {
        let scan = match &args.scan_box {
            Some(b) => ScanBox::new(b[0] as i64, b[1], b[2] as usize)?,
            None => ScanBox::new(50, 50.0, 100_001)?,
        };
        let o = oracle(&op, &report, &scan)?;
        let _ = writeln!(text, "oracle: scan min {} (agrees)", o["scan_min"]);
        json["oracle"] = o;
    }
    for w in &warnings {
        let _ = writeln!(text, "warning: {w}");
    }
    Ok(Report { json, text, exit: verdict_exit(report.verdict) })
}

fn params(src: &Source) -> BuiltinParams {
    BuiltinParams { k0: src.k0, xi0: src.xi0 }
}

/// The field named by `--builtin` / `--input`, sampled on `grid` for builtins.
fn field_source(src: &Source, grid: CylinderGrid) -> Result<(SampledField, String), CliError> {
    match (&src.builtin, &src.input) {
        (Some(name), _) => Ok((sample_builtin(name, &params(src), grid)?, name.clone())),
        (None, Some(path)) => Ok((SampledField::try_from_data(read_file(path)?)?, path.display().to_string())),
        (None, None) => Err(CliError::Usage("give --builtin NAME or --input FILE".into())),
    }
}

fn write_outputs(data: &GridData, out: Option<&Path>, csv_dir: Option<&Path>, csv_name: &str) -> Result<Value, CliError> {
    if let Some(p) = out {
        write_file(p, data)?;
    }
    let csv = match csv_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(cylfourier::Error::from)?;
            let p = dir.join(csv_name);
            write_csv(&p, data)?;
            Some(p.display().to_string())
        }
        None => None,
    };
    Ok(json!({"out": out.map(|p| p.display().to_string()), "csv": csv}))
}

pub fn solve_cmd(args: &SolveArgs, global: &Global) -> Result<Report, CliError> {
    let (op, warnings) = operator(&args.op)?;
    let grid = parse_grid(&global.grid)?;
    let (f, truth) = match &args.manufacture {
        Some(name) => {
            let u = sample_builtin(name, &params(&args.source), grid)?;
            (apply_operator(&op, &u), Some(u))
        }
        None => (field_source(&args.source, grid)?.0, None),
    };
    let outcome = match solve(&op, &f) {
        Ok(o) => o,
        Err(cylfourier::Error::NotHypoelliptic { .. }) => {
            let report = DeciderRegistry::standard().decide(&op)?;
            let json = json!({"operator": op.to_string(), "refused": true, "sgh_report": report, "warnings": warnings});
            let text = format!("refused: operator {op} is not SGH\n{}", report_text(&report));
            return Ok(Report { json, text, exit: EXIT_NOT_SGH });
        }
        Err(e) => return Err(e.into()),
    };
    let mut json = to_json(&outcome);
    json["refused"] = json!(false);
    json["operator"] = json!(op.to_string());
    let mut all_warnings = warnings;
    all_warnings.extend(outcome.warnings.iter().cloned());
    json["warnings"] = json!(all_warnings);
    let mut text = format!("operator: {op}\nresidual: {:e}\n", outcome.residual_inf);
    if let Some(u) = &truth {
        let err = outcome.u.max_abs_diff(u);
        json["recovery_error"] = json!(err);
        let _ = writeln!(text, "recovery error: {err:e}");
    }
    if let Some(nf) = &outcome.normal_form {
        let _ = writeln!(text, "normal form: {nf}");
    }
    json["files"] = write_outputs(&outcome.u.clone().into_data(), args.out.as_deref(), global.csv_dir.as_deref(), "solution.csv")?;
    Ok(Report { json, text, exit: EXIT_OK })
}

fn dominant(data: &GridData) -> Value {
    let g = data.grid;
    let nx = g.n_x();
    let (i, m) = data.values.iter().enumerate().fold((0, 0.0f64), |(bi, bm), (i, z)| if z.norm() > bm { (i, z.norm()) } else { (bi, bm) });
    let rows: Vec<i64> = (0..g.n_t())
        .filter(|r| data.values[r * nx..(r + 1) * nx].iter().any(|z| z.norm() > 1e-9 * m.max(f64::MIN_POSITIVE)))
        .map(|r| g.k(r))
        .collect();
    let (r, c) = (i / nx, i % nx);
    match data.kind {
        DataKind::Mixed => json!({"k": g.k(r), "xi_index": g.xi_index(c), "xi": g.xi(c), "magnitude": m, "nonzero_k": rows}),
        DataKind::Torus => json!({"k": g.k(r), "x": g.x(c), "magnitude": m, "nonzero_k": rows}),
        DataKind::Line => json!({"t": g.t(r), "xi_index": g.xi_index(c), "magnitude": m}),
        DataKind::Field => json!({"t": g.t(r), "x": g.x(c), "magnitude": m}),
    }
}

pub fn transform_cmd(args: &TransformArgs, global: &Global) -> Result<Report, CliError> {
    let grid = parse_grid(&global.grid)?;
    let input = match (&args.source.builtin, &args.source.input) {
        (None, Some(path)) => read_file(path)?,
        _ => field_source(&args.source, grid)?.0.into_data(),
    };
    let name = match args.which {
        Which::Torus => "torus",
        Which::Line => "line",
        Which::Mixed => "mixed",
    };
    let reg = TransformRegistry::standard();
    let t = reg.get(name)?;
    let (output, roundtrip) = match args.direction {
        Direction::Forward => (t.forward(&input)?, None),
        Direction::Inverse => (t.inverse(&input)?, None),
        Direction::Roundtrip => {
            let back = t.inverse(&t.forward(&input)?)?;
            let err = back.values.iter().zip(&input.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            (back, Some(err))
        }
    };
    let files = write_outputs(&output, args.out.as_deref(), global.csv_dir.as_deref(), &format!("{name}.csv"))?;
    let max_abs = output.values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let json = json!({
        "transform": name,
        "direction": format!("{:?}", args.direction).to_lowercase(),
        "input_kind": input.kind.name(),
        "output_kind": output.kind.name(),
        "grid": input.grid,
        "max_abs": max_abs,
        "dominant": dominant(&output),
        "roundtrip_error": roundtrip,
        "files": files,
    });
    let mut text = format!("{name} {:?}: {} -> {}, max |value| = {max_abs:e}\n", args.direction, input.kind.name(), output.kind.name());
    if let Some(e) = roundtrip {
        let _ = writeln!(text, "round-trip max abs diff: {e:e}");
    }
    Ok(Report { json, text, exit: EXIT_OK })
}

fn certificates(f: &SampledField, n_max: u32, beta_max: u32) -> Vec<DecayCertificate> {
    let mut out = Vec::new();
    for beta in 0..=beta_max {
        for n in 0..=n_max {
            out.push(decay_certificate_mixed(f, n, beta));
            out.push(decay_certificate_torus(f, n, beta));
            out.push(decay_certificate_line(f, n, 0, beta));
        }
    }
    out
}

/// Relative change above which a refined certificate counts as unstable.
const REFINE_TOLERANCE: f64 = 0.1;

pub fn diagnose(args: &DiagnoseArgs, global: &Global) -> Result<Report, CliError> {
    let grid = parse_grid(&global.grid)?;
    let (f, source) = if args.zero { (SampledField::zeros(grid), "zero".to_string()) } else { field_source(&args.source, grid)? };
    let grid = *f.grid();
    let seminorms: Vec<f64> = (0..=args.n_max).map(|n| seminorm_pn(&f, n)).collect();
    let certs = certificates(&f, args.n_max, args.beta_max);
    let mut text = format!("source: {source}\nseminorms p_0..p_{}: {seminorms:?}\n", args.n_max);
    let mut json = json!({"source": source, "grid": grid, "seminorms": seminorms, "certificates": certs});

    let builtin = args.source.builtin.as_ref().filter(|_| !args.zero);
    if args.refine {
        let Some(name) = builtin else {
            return Err(CliError::Usage("--refine needs a builtin source".into()));
        };
        let fine = CylinderGrid::new(grid.n_t(), 2 * grid.n_x(), 2.0 * grid.half_width())?;
        let refined = certificates(&sample_builtin(name, &params(&args.source), fine)?, args.n_max, args.beta_max);
        let worst = certs
            .iter()
            .zip(&refined)
            .map(|(a, b)| if a.c == 0.0 && b.c == 0.0 { 0.0 } else { (b.c - a.c).abs() / a.c.max(b.c) })
            .fold(0.0, f64::max);
        let stable = worst <= REFINE_TOLERANCE;
        let _ = writeln!(text, "refinement to {},{},{}: max relative change {worst:.3e} ({})", fine.n_t(), fine.n_x(), fine.half_width(), if stable { "stable" } else { "unstable" });
        json["refinement"] = json!({"grid": fine, "certificates": refined, "max_relative_change": worst, "stable": stable});
    }
    if let Some(name) = builtin {
        let ladder: Vec<CylinderGrid> =
            [1, 4, 16].iter().map(|m| CylinderGrid::new(grid.n_t() * m, grid.n_x(), grid.half_width())).collect::<Result<_, _>>()?;
        let p0 = refinement_divergence_probe(name, &params(&args.source), &ladder)?;
        let increasing = p0.windows(2).all(|w| w[1] > w[0]);
        let flagged = increasing && p0[2] > 2.0 * p0[0];
        if flagged {
            let _ = writeln!(text, "p_0 diverges under t-refinement: {p0:?}");
        }
        json["divergence"] = json!({"n_t": ladder.iter().map(|g| g.n_t()).collect::<Vec<_>>(), "p0": p0, "flagged": flagged});
    }
    if let Some(dir) = &global.csv_dir {
        std::fs::create_dir_all(dir).map_err(cylfourier::Error::from)?;
        let mut csv = String::from("type,N,alpha,beta,C,argmax_k,argmax_xi_index\n");
        for c in &certs {
            let opt = |v: Option<i64>| v.map_or(String::new(), |v| v.to_string());
            let _ = writeln!(csv, "{},{},{},{},{:e},{},{}", format!("{:?}", c.family).to_lowercase(), c.n, c.alpha, c.beta, c.c, opt(c.argmax_k()), opt(c.argmax_xi_index()));
        }
        cylfourier::io::write_atomic(&dir.join("certificates.csv"), csv.as_bytes())?;
        let mut sn = String::from("N,p_N\n");
        for (n, v) in json["seminorms"].as_array().unwrap().iter().enumerate() {
            let _ = writeln!(sn, "{n},{v}");
        }
        cylfourier::io::write_atomic(&dir.join("seminorms.csv"), sn.as_bytes())?;
    }
    let _ = writeln!(text, "{} certificates (grid-consistent with their order N)", certs.len());
    Ok(Report { json, text, exit: EXIT_OK })
}

struct GalleryEntry {
    spec: &'static str,
    condition: &'static str,
    sgh: bool,
}

const GALLERY: &[GalleryEntry] = &[
    GalleryEntry { spec: "Dt + Dx", condition: "transport: constants are null solutions", sgh: false },
    GalleryEntry { spec: "Dt + (1+2i) Dx + 1", condition: "b != 0, a Re(q)/b + Im(q) = 1/2 not an integer", sgh: true },
    GalleryEntry { spec: "Dt + 2i Dx + 1", condition: "b != 0, a Re(q)/b + Im(q) = 0 an integer", sgh: false },
    GalleryEntry { spec: "Dt + (2+2i) Dx + 1", condition: "b != 0, a Re(q)/b + Im(q) = 1 although b does not divide Re(q)", sgh: false },
    GalleryEntry { spec: "Dt + 3 Dx + 1", condition: "b = 0, Re(q) != 0", sgh: true },
    GalleryEntry { spec: "Dt + 3 Dx + i", condition: "b = 0, Re(q) = 0, a != 0", sgh: false },
    GalleryEntry { spec: "Dt + 1/2i", condition: "a = b = Re(q) = 0, Im(q) not an integer", sgh: true },
    GalleryEntry { spec: "Dt + i", condition: "a = b = Re(q) = 0, Im(q) an integer", sgh: false },
    GalleryEntry { spec: "(1+2i) Dt + Dx + 1", condition: "time coefficient a+ib: b != 0, Re(q)/b not an integer", sgh: true },
    GalleryEntry { spec: "(1+2i) Dt + Dx + 2", condition: "time coefficient a+ib: b != 0, Re(q)/b an integer", sgh: false },
    GalleryEntry { spec: "3 Dt + Dx + 1", condition: "time coefficient a+ib: b = 0, Re(q) != 0", sgh: true },
    GalleryEntry { spec: "3 Dt + Dx + 5i", condition: "time coefficient a+ib: b = 0, Re(q) = 0", sgh: false },
    GalleryEntry { spec: "Dt + (sin(t)+1) Dx + (1+1/2i)", condition: "variable a: normal form has Re(q0) != 0", sgh: true },
    GalleryEntry { spec: "Dt + (sin(t)+1) Dx + 1/2i", condition: "variable a: normal form has Re(q0) = 0", sgh: false },
    GalleryEntry { spec: "Dt + sin(t) Dx + 1/2i", condition: "variable a with zero mean: Im(q0) not an integer", sgh: true },
    GalleryEntry { spec: "Dt + sin(t) Dx", condition: "variable a with zero mean: Im(q0) = 0", sgh: false },
    GalleryEntry { spec: "p(Dx)=Dx^2+1; q(Dt)=-Dt^2", condition: "separable: xi^2 + 1 = k^2 at k = 1", sgh: false },
    GalleryEntry { spec: "p(Dx)=Dx^2; q(Dt)=Dt^2+1/2", condition: "separable: xi^2 + k^2 + 1/2 >= 1/2", sgh: true },
];

pub fn demo() -> Result<Report, CliError> {
    let reg = DeciderRegistry::standard();
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut all = true;
    for e in GALLERY {
        let op = crate::parser::parse(e.spec)?;
        let report = reg.decide(&op)?;
        let agrees = report.is_sgh() == e.sgh;
        all &= agrees;
        let _ = writeln!(
            text,
            "{:<34} {:<7} {}  [{}]",
            e.spec,
            if report.is_sgh() { "SGH" } else { "NotSGH" },
            if agrees { "ok" } else { "MISMATCH" },
            e.condition
        );
        rows.push(json!({
            "operator": op.to_string(), "input": e.spec, "condition": e.condition,
            "expected": if e.sgh { "SGH" } else { "NotSGH" }, "report": report, "agrees": agrees,
        }));
    }
    Ok(Report { json: json!({"gallery": rows, "all_agree": all}), text, exit: if all { EXIT_OK } else { EXIT_ERROR } })
}

pub fn sample(args: &SampleArgs, global: &Global) -> Result<Report, CliError> {
    let grid = parse_grid(&global.grid)?;
    let (f, source) = if args.random {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(global.seed);
        let values = (0..grid.len()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        (SampledField::new(grid, values)?, format!("random(seed={})", global.seed))
    } else {
        field_source(&args.source, grid)?
    };
    let max_abs = f.max_abs();
    let files = write_outputs(&f.into_data(), Some(&args.out), global.csv_dir.as_deref(), "field.csv")?;
    let text = format!("wrote {} ({source}), max |f| = {max_abs:e}\n", args.out.display());
    Ok(Report { json: json!({"source": source, "grid": grid, "max_abs": max_abs, "files": files}), text, exit: EXIT_OK })
}
