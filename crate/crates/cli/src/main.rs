//! `crtool`: verifications, classifications, Levi-form reports,
//! divisor-condition scans and frequency-space solves.

mod report;
mod schema;

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use cr_core::error::CoreError;
use cr_core::fourier::{self, FourierForm};
use cr_core::liealg::{self, CellClass, ShapeKind};
use cr_core::scalar::Realization;
use cr_core::toruscr::{self, TorusStructure, DEFAULT_RHO_GRID};

use report::Report;

#[derive(Parser)]
#[command(
    name = "crtool",
    about = "Left-invariant CR structures on compact Lie groups: exact table \
             verification, CR0/CR1 classification, Levi-form tests, \
             divisor-condition scans and frequency-space solves",
    version
)]
struct Cli {
    /// Emit the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recompute the su(4) eigenvalue and bracket tables and the sl(2)
    /// identity by exact commutators, classifying every printed entry.
    VerifyTables,
    /// Classify a subalgebra file: subalgebra/CR checks, dimensions, toric
    /// part and CR0/CR1 shape.
    Classify { file: PathBuf },
    /// Levi-flatness of a CR subalgebra, with a witness when it fails.
    Leviflat { file: PathBuf },
    /// Divisor-condition lattice scan of a torus structure.
    Dc {
        file: PathBuf,
        /// Sup-norm scan radius (default chosen per torus dimension).
        #[arg(long)]
        radius: Option<i64>,
        /// Comma-separated candidate exponents, e.g. "0.5,1,1.1".
        #[arg(long, value_name = "LIST")]
        rho_grid: Option<String>,
        /// Force a scalar realization for the scan.
        #[arg(long, value_parser = ["exact", "float", "surd"])]
        scalar: Option<String>,
    },
    /// Solve `dbar_b v = u - u(0)` for a trigonometric-polynomial form.
    Solve {
        file: PathBuf,
        /// Write the solve result as JSON here.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Residual tolerance for float data.
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Extend a closed toric form by zero along an ideal complement and
    /// check closedness of the extension.
    Extend { file: PathBuf },
    /// Embedded fixtures.
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
}

#[derive(Subcommand)]
enum FixturesAction {
    /// Write every embedded fixture as a JSON file.
    Export {
        /// Output directory (created if missing).
        #[arg(long, default_value = "fixtures")]
        dir: PathBuf,
    },
}

fn exit_code_for(err: &CoreError) -> i32 {
    match err {
        CoreError::Resonance(_)
        | CoreError::ContractViolation(_)
        | CoreError::NotIdeal(..)
        | CoreError::NotSubalgebra(..) => 1,
        _ => 2,
    }
}

fn read_json(command: &str, path: &PathBuf) -> Result<Value, Report> {
    let text = fs::read_to_string(path)
        .map_err(|e| Report::input_error(command, format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Report::input_error(command, format!("malformed JSON in {}: {e}", path.display())))
}

fn cmd_verify_tables() -> Report {
    let mut rep = Report::new("verify-tables");
    let tables = match liealg::verify_tables() {
        Ok(t) => t,
        Err(e) => return Report::input_error("verify-tables", e),
    };
    rep.line(format!(
        "lambda relation: [T_j, L_k] = {}i lambda_jk L_k with L_k = X_k - i Y_k \
         (printed relation carries -i lambda_jk)",
        if tables.lambda_global_sign == -1 { "+" } else { "-" }
    ));
    let ok = tables.lambda.iter().filter(|l| l.matches).count();
    rep.line(format!(
        "lambda entries matching up to the global sign: {ok}/{}",
        tables.lambda.len()
    ));
    for l in &tables.lambda {
        rep.line(format!(
            "  lambda[{},{}]: printed {:>2}  computed {:>4}  {}",
            l.j,
            l.k,
            l.printed,
            l.computed,
            if l.matches { "ok" } else { "MISMATCH" }
        ));
    }
    let tally = |cls: CellClass| tables.cells.iter().filter(|c| c.class == cls).count();
    rep.line(format!(
        "bracket table cells: {} (exact {}, sign {}, conj {}, conj+sign {}, mismatch {})",
        tables.cells.len(),
        tally(CellClass::Exact),
        tally(CellClass::Sign),
        tally(CellClass::Conj),
        tally(CellClass::ConjSign),
        tally(CellClass::Mismatch),
    ));
    for c in &tables.cells {
        rep.line(format!(
            "  cell (L{}, conj L{}): printed {} | computed {} | {:?}",
            c.row, c.col, c.printed, c.computed, c.class
        ));
    }
    rep.line(format!(
        "sl2 identity [L, conj L] = 2i(L + conj L): {}",
        if tables.sl2_identity_exact { "exact, zero discrepancy" } else { "FAILED" }
    ));
    for d in tables.discrepancies() {
        rep.discrepancy(d);
    }
    rep.field("tables", serde_json::to_value(&tables).expect("serializable"));
    if !rep.discrepancies.is_empty() {
        rep.exit = 1;
    }
    rep
}

fn cmd_classify(file: &PathBuf) -> Report {
    let mut rep = Report::new(format!("classify {}", file.display()));
    let v = match read_json("classify", file) {
        Ok(v) => v,
        Err(r) => return r,
    };
    let parsed = match schema::parse_subalgebra_file(&v) {
        Ok(p) => p,
        Err(e) => return Report::input_error("classify", e),
    };
    let h = parsed.algebra;
    let shape = match liealg::classify_shape(&h) {
        Ok(s) => s,
        Err(e) => return Report::input_error("classify", e),
    };
    rep.line(format!("ambient: {} (dimension {})", h.ambient, h.ambient.dim()));
    rep.line(format!("label: {}", h.label));
    match shape.subalgebra_witness {
        None => rep.line("subalgebra: yes"),
        Some((i, j)) => rep.line(format!(
            "subalgebra: no (bracket of basis elements {i} and {j} leaves the span)"
        )),
    }
    rep.line(format!("CR (h meets conj h only in 0): {}", shape.is_cr));
    rep.line(format!(
        "dimension: {} (maximal rank [N/2] = {})",
        shape.dim, shape.max_rank
    ));
    rep.line(format!("toric part dimension: {}", shape.toric_dim));
    for (i, desc) in shape.toric_basis.iter().enumerate() {
        rep.line(format!("  toric basis [{i}]: {desc}"));
    }
    match &shape.shape {
        ShapeKind::Cr0 { positive } => rep.line(format!(
            "shape: CR0 (toric part + {} positive root spaces)",
            positive.len()
        )),
        ShapeKind::Cr1 { alpha, positive } => rep.line(format!(
            "shape: CR1 (missing simple root index {alpha} of {} positive roots, \
             replaced by a t + x line)",
            positive.len()
        )),
        ShapeKind::Unrecognized => rep.line("shape: unrecognized"),
    }
    for n in &shape.notes {
        rep.line(format!("note: {n}"));
    }
    for n in &parsed.notes {
        rep.line(format!("note: {n}"));
    }
    rep.field("shape", serde_json::to_value(&shape).expect("serializable"));
    rep.field("notes", json!(parsed.notes));
    rep
}

fn cmd_leviflat(file: &PathBuf) -> Report {
    let mut rep = Report::new(format!("leviflat {}", file.display()));
    let v = match read_json("leviflat", file) {
        Ok(v) => v,
        Err(r) => return r,
    };
    let parsed = match schema::parse_subalgebra_file(&v) {
        Ok(p) => p,
        Err(e) => return Report::input_error("leviflat", e),
    };
    let h = parsed.algebra;
    if !liealg::is_cr(&h) {
        return Report::input_error("leviflat", "input is not a CR algebra (h meets conj h)");
    }
    let levi = match liealg::is_levi_flat(&h) {
        Ok(l) => l,
        Err(e) => return Report::input_error("leviflat", e),
    };
    rep.line(format!("ambient: {}", h.ambient));
    rep.line(format!("Levi-flat: {}", levi.flat));
    if let Some(w) = &levi.witness {
        rep.line(format!(
            "witness: basis pair ({}, {}), Levi value (1/2i) xi([L, conj M]) = {}",
            w.pair.0, w.pair.1, w.value
        ));
        let br = liealg::bracket(&h.basis[w.pair.0], &h.basis[w.pair.1].conjugate())
            .expect("witness pair brackets");
        rep.line(format!("witness bracket [L, conj M] = {}", br.describe()));
        let coords: Vec<String> = w.covector.iter().map(|c| c.to_string()).collect();
        rep.line(format!("witness covector coordinates: [{}]", coords.join(", ")));
    }
    rep.line(
        "note: characteristic covectors annihilate h + conj h (the working form); \
         the literal definition quantifies over the annihilator of h alone",
    );
    rep.field("levi", serde_json::to_value(&levi).expect("serializable"));
    rep
}

fn parse_rho_grid(spec: &str) -> Result<Vec<f64>, String> {
    spec.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| format!("bad rho `{s}`: {e}")))
        .collect()
}

fn cmd_dc(
    file: &PathBuf,
    radius: Option<i64>,
    rho_grid: Option<&str>,
    scalar: Option<&str>,
) -> Report {
    let mut rep = Report::new(format!("dc {}", file.display()));
    let v = match read_json("dc", file) {
        Ok(v) => v,
        Err(r) => return r,
    };
    let mut s: TorusStructure = match serde_json::from_value(v) {
        Ok(s) => s,
        Err(e) => return Report::input_error("dc", format!("bad torus structure: {e}")),
    };
    if let Err(e) = s.validate() {
        return Report::input_error("dc", e);
    }
    match scalar {
        Some("float") => s = s.to_float(),
        Some(kind @ ("exact" | "surd")) => {
            let have = s.realization();
            let want = if kind == "exact" { Realization::Exact } else { Realization::Surd };
            if (want == Realization::Exact && have != Realization::Exact)
                || (want == Realization::Surd && have == Realization::Float)
            {
                return Report::input_error(
                    "dc",
                    format!("file carries {have} scalars; cannot reinterpret as {kind}"),
                );
            }
        }
        _ => {}
    }
    let radius = radius.unwrap_or_else(|| toruscr::default_radius(s.big_n));
    let grid: Vec<f64> = match rho_grid {
        Some(spec) => match parse_rho_grid(spec) {
            Ok(g) if !g.is_empty() => g,
            Ok(_) => return Report::input_error("dc", "empty rho grid"),
            Err(e) => return Report::input_error("dc", e),
        },
        None => DEFAULT_RHO_GRID.to_vec(),
    };
    let scan = match toruscr::dc_scan(&s, radius, &grid) {
        Ok(r) => r,
        Err(e) => return Report::input_error("dc", e),
    };

    rep.line(format!(
        "structure: T^{} with {} field(s), {} realization",
        s.big_n,
        s.n,
        s.realization()
    ));
    rep.line(format!("radius: {radius}  strategy: {:?}", scan.strategy));
    rep.line(format!("verdict: {:?}", scan.verdict));
    if !scan.resonances.is_empty() {
        let shown: Vec<String> = scan
            .resonances
            .iter()
            .take(16)
            .map(|xi| format!("{xi:?}"))
            .collect();
        rep.line(format!(
            "resonances ({} total): {}{}",
            scan.resonances.len(),
            shown.join(" "),
            if scan.resonances.len() > 16 { " ..." } else { "" }
        ));
    }
    if !scan.suspect_resonances.is_empty() {
        rep.line(format!(
            "numerically suspect resonances (float, below 1e-12): {}",
            scan.suspect_resonances.len()
        ));
    }
    rep.line(format!(
        "log-log fit over shell minima: C = {:.6e}, rho = {:.4}",
        scan.fit_c, scan.fit_rho
    ));
    for m in &scan.margins {
        rep.line(format!(
            "rho {:>4}: margin {:.6e}  band-drop {:.4}  trend {:.4}  stable {}",
            m.rho, m.margin, m.min_band_ratio, m.last_band_ratio, m.stable
        ));
    }
    rep.line(format!("evidence holds at: {:?}", scan.holds_at));
    // deterministic sample of the shell-minima table
    rep.line("shell minima (sampled):");
    for rec in scan.shells.iter().filter(|rec| {
        rec.r <= 10 || rec.r == radius || (rec.r & (rec.r - 1)) == 0
    }) {
        rep.line(format!(
            "  r = {:>6}: min {:.6e} at {:?}",
            rec.r, rec.min, rec.witness
        ));
    }
    rep.line(format!("note: {}", scan.note));
    rep.field("scan", serde_json::to_value(&scan).expect("serializable"));
    rep
}

fn cmd_solve(file: &PathBuf, output: Option<&PathBuf>, tolerance: f64) -> Report {
    let mut rep = Report::new(format!("solve {}", file.display()));
    let v = match read_json("solve", file) {
        Ok(v) => v,
        Err(r) => return r,
    };
    let u: FourierForm = match serde_json::from_value(v) {
        Ok(u) => u,
        Err(e) => return Report::input_error("solve", format!("bad Fourier form: {e}")),
    };
    let float_input = u.structure().realization() == Realization::Float;
    let closed = if float_input {
        fourier::is_closed_tol(&u, tolerance)
    } else {
        fourier::is_closed(&u)
    };
    match closed {
        Ok((true, _)) => {}
        Ok((false, witness)) => {
            rep.line(format!(
                "input is not closed: witness frequency {:?}",
                witness.unwrap_or_default()
            ));
            rep.discrepancy("dbar_b u != 0");
            rep.exit = 1;
            return rep;
        }
        Err(e) => return Report::input_error("solve", e),
    }
    let result = match fourier::solve(&u) {
        Ok(r) => r,
        Err(e @ CoreError::Resonance(_)) => {
            rep.line(format!("unsolvable: {e}"));
            rep.discrepancy(e.to_string());
            rep.exit = 1;
            return rep;
        }
        Err(e) => {
            let mut r = Report::input_error("solve", &e);
            r.exit = exit_code_for(&e);
            return r;
        }
    };
    rep.line(format!(
        "degree: {}  support: {} frequencies",
        u.degree(),
        u.support_len()
    ));
    rep.line(format!("invariant part (xi = 0): {}", result.invariant_part));
    rep.line(format!(
        "primitive support: {} frequencies",
        result.primitive.support_len()
    ));
    rep.line(format!("roundtrip residual: {:.3e}", result.residual));
    rep.line(format!(
        "largest amplification |v|/|u| across frequencies: {:.6e}",
        result.max_growth_ratio()
    ));
    if let Some(worst) = result
        .estimates
        .iter()
        .min_by(|a, b| a.max_symbol.total_cmp(&b.max_symbol))
    {
        rep.line(format!(
            "smallest divisor max_j|L_j^(xi)| = {:.6e} at {:?}",
            worst.max_symbol, worst.xi
        ));
    }
    rep.line(
        "note: solvability away from the bi-invariant part is certified only on \
         this finite support; for Liouville-type coefficients no global claim \
         is encoded, since solvability there hinges on the approximation \
         properties of the coefficients",
    );
    let result_json = serde_json::to_value(&result).expect("serializable");
    if let Some(path) = output {
        if let Err(e) = fs::write(path, serde_json::to_string_pretty(&result_json).unwrap()) {
            return Report::input_error("solve", format!("cannot write {}: {e}", path.display()));
        }
        rep.line(format!("solve result written to {}", path.display()));
    }
    rep.field("solve", result_json);
    rep
}

fn cmd_extend(file: &PathBuf) -> Report {
    let mut rep = Report::new(format!("extend {}", file.display()));
    let v = match read_json("extend", file) {
        Ok(v) => v,
        Err(r) => return r,
    };
    let parsed = match schema::parse_extend_file(&v) {
        Ok(p) => p,
        Err(e) => return Report::input_error("extend", e),
    };
    rep.line(format!(
        "decomposition: dim m = {}, dim ideal = {}, dim h = {}",
        parsed.m.dim(),
        parsed.ideal.dim(),
        parsed.h.dim()
    ));
    match liealg::extend_by_zero(&parsed.form, &parsed.h, &parsed.m, &parsed.ideal) {
        Ok(ext) => {
            rep.line(format!("input closed over m: {}", ext.input_closed));
            rep.line(format!("extension closed over h: {}", ext.extension_closed));
            rep.line(format!("extension: {}", ext.extension));
            if ext.input_closed && !ext.extension_closed {
                rep.discrepancy("closed input produced a non-closed extension");
                rep.exit = 1;
            }
            rep.field(
                "extend",
                json!({
                    "input_closed": ext.input_closed,
                    "extension_closed": ext.extension_closed,
                    "extension": serde_json::to_value(&ext.extension).expect("serializable"),
                }),
            );
        }
        Err(e @ CoreError::NotIdeal(..)) => {
            rep.line(format!("ideal check failed: {e}"));
            rep.discrepancy(e.to_string());
            rep.exit = 1;
        }
        Err(e) => return Report::input_error("extend", e),
    }
    for n in &parsed.notes {
        rep.line(format!("note: {n}"));
    }
    rep
}

fn cmd_fixtures_export(dir: &PathBuf) -> Report {
    let mut rep = Report::new(format!("fixtures export --dir {}", dir.display()));
    if let Err(e) = fs::create_dir_all(dir) {
        return Report::input_error("fixtures export", format!("cannot create dir: {e}"));
    }
    let mut written = Vec::new();
    let mut write = |name: &str, value: Value| -> Result<(), std::io::Error> {
        let path = dir.join(name);
        fs::write(&path, serde_json::to_string_pretty(&value).unwrap() + "\n")?;
        written.push(name.to_string());
        Ok(())
    };

    let sub_to_value = |name: &str| -> Value {
        let f = schema::fixture_subalgebra(name).expect("embedded fixture");
        let basis: Vec<Value> = f.algebra.basis.iter().map(schema::element_to_value).collect();
        let mut obj = serde_json::Map::new();
        obj.insert("ambient".into(), ambient_to_value(&f.algebra.ambient));
        obj.insert("label".into(), json!(f.algebra.label));
        obj.insert("basis".into(), Value::Array(basis));
        if !f.notes.is_empty() {
            obj.insert("notes".into(), json!(f.notes));
        }
        Value::Object(obj)
    };

    let basis_to_value = |ambient: &cr_core::liealg::Ambient,
                          label: &str,
                          basis: &[cr_core::liealg::LieElement]| {
        json!({
            "ambient": ambient_to_value(ambient),
            "label": label,
            "basis": basis.iter().map(schema::element_to_value).collect::<Vec<_>>(),
        })
    };

    let io = (|| -> Result<(), std::io::Error> {
        write("su2_cr0.json", sub_to_value("su2-cr0"))?;
        write("su2_cr1.json", sub_to_value("su2-cr1"))?;
        write("sl2_cr1.json", sub_to_value("sl2-cr1"))?;
        write("example3.json", sub_to_value("example3"))?;

        // full fixture bases, loadable by classify/leviflat as whole algebras
        for n in [2usize, 3, 4] {
            let amb = cr_core::liealg::Ambient::su(n);
            let basis = liealg::su_basis(n).expect("fixture");
            write(
                &format!("su{n}_basis.json"),
                basis_to_value(&amb, &format!("su({n}) basis"), &basis),
            )?;
        }
        write(
            "sl2_basis.json",
            basis_to_value(&liealg::sl2_ambient(), "sl(2) basis", &liealg::sl2_basis()),
        )?;

        write(
            "t3_half.json",
            serde_json::to_value(toruscr::t3_half()).unwrap(),
        )?;
        write(
            "t3_golden.json",
            serde_json::to_value(toruscr::t3_golden()).unwrap(),
        )?;
        write(
            "t3_liouville.json",
            serde_json::to_value(toruscr::t3_liouville()).unwrap(),
        )?;

        // a closed form: dbar of a small trig polynomial on the golden torus
        let s = toruscr::t3_golden();
        let mut w = FourierForm::new(s.clone(), 0);
        for (xi, c) in [
            (vec![1i64, 0, 0], cr_core::Scalar::from_complex(1, 2)),
            (vec![0, 1, -1], cr_core::Scalar::from_ratio(3, 2)),
            (vec![2, -1, 1], cr_core::Scalar::from_complex(0, -1)),
        ] {
            let mut f = cr_core::exterior::AltForm::zero(0, 1);
            f.add_tuple(&[], c).unwrap();
            w.add_term(xi, f).unwrap();
        }
        let u = fourier::dbar_b(&w).expect("fixture");
        write("fourier_closed.json", serde_json::to_value(&u).unwrap())?;

        // a resonance-supported form on lambda = 1/2
        let s = toruscr::t3_half();
        let mut bad = FourierForm::new(s, 1);
        let mut f = cr_core::exterior::AltForm::zero(1, 1);
        f.add_tuple(&[1], cr_core::Scalar::one()).unwrap();
        bad.add_term(vec![1, -2, 0], f).unwrap();
        write("fourier_resonant.json", serde_json::to_value(&bad).unwrap())?;

        // extension problems over the T^2 x su(4) fixture
        write(
            "extend_zeta1.json",
            json!({
                "fixture": "example3",
                "form": {"q": 1, "coeffs": [{"J": [1], "re": "1", "im": "0"}]},
            }),
        )?;
        write(
            "extend_zeta12.json",
            json!({
                "fixture": "example3",
                "form": {"q": 2, "coeffs": [{"J": [1, 2], "re": "1", "im": "0"}]},
            }),
        )?;
        // deliberately corrupted ideal: L2 swapped for its conjugate
        let ex = liealg::example3();
        let mut bad_ideal = ex.ideal.basis.clone();
        bad_ideal[1] = bad_ideal[1].conjugate();
        write(
            "extend_corrupted.json",
            json!({
                "ambient": {"type": "product", "torus_dim": 2, "n": 4},
                "m": ex.m.basis.iter().map(schema::element_to_value).collect::<Vec<_>>(),
                "ideal": bad_ideal.iter().map(schema::element_to_value).collect::<Vec<_>>(),
                "form": {"q": 1, "coeffs": [{"J": [1], "re": "1", "im": "0"}]},
            }),
        )?;
        Ok(())
    })();
    if let Err(e) = io {
        return Report::input_error("fixtures export", format!("write failed: {e}"));
    }
    for name in &written {
        rep.line(format!("wrote {}", dir.join(name).display()));
    }
    rep.field("written", json!(written));
    rep
}

fn ambient_to_value(a: &cr_core::liealg::Ambient) -> Value {
    if a.torus_dim > 0 {
        json!({"type": "product", "torus_dim": a.torus_dim, "n": a.matrix_dim})
    } else if a.form == cr_core::liealg::RealForm::Split {
        json!({"type": "sl2"})
    } else {
        json!({"type": "su", "n": a.matrix_dim})
    }
}

fn main() {
    let cli = Cli::parse();
    let report = match &cli.command {
        Command::VerifyTables => cmd_verify_tables(),
        Command::Classify { file } => cmd_classify(file),
        Command::Leviflat { file } => cmd_leviflat(file),
        Command::Dc { file, radius, rho_grid, scalar } => cmd_dc(
            file,
            *radius,
            rho_grid.as_deref(),
            scalar.as_deref(),
        ),
        Command::Solve { file, output, tolerance } => {
            cmd_solve(file, output.as_ref(), *tolerance)
        }
        Command::Extend { file } => cmd_extend(file),
        Command::Fixtures { action: FixturesAction::Export { dir } } => {
            cmd_fixtures_export(dir)
        }
    };
    print!("{}", report.render(cli.json));
    std::process::exit(report.exit);
}
