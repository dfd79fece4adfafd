use std::io::Write;
use std::path::Path;

use qcentral_core::centralizer::{self, random_parameters, FactorClass};
use qcentral_core::reduction::{self, bloch_vectors};
use qcentral_core::states::{self, validation_report, Positivity, VALIDITY_TOL};
use qcentral_core::{DensityState, PauliState, CLASSIFY_TOL, EPS};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{read_state, Cli, Command, Encoding, Failure, FixtureKind, StateFile, UnitarySpecFile};

pub(crate) fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let ctx = Ctx {
        json: cli.json,
        format: cli.format,
        tol: cli.tol,
    };
    match &cli.command {
        Command::Validate { state } => validate(&ctx, state, out),
        Command::Decompose { state, delta_out } => decompose(&ctx, state, delta_out.as_deref(), out),
        Command::Centralizer { state } => centralizer(&ctx, state, out),
        Command::Evolve {
            state,
            spec,
            require_centralizer,
            out: target,
        } => evolve(&ctx, state, spec, *require_centralizer, target.as_deref(), out, err),
        Command::Sample {
            state,
            count,
            seed,
            out_dir,
        } => sample(&ctx, state, *count, *seed, out_dir.as_deref(), out),
        Command::Compare { a, b } => compare(&ctx, a, b, out),
        Command::Fixture { kind, out: target } => fixture(&ctx, kind, target.as_deref(), out),
    }
}

struct Ctx {
    json: bool,
    format: Encoding,
    tol: Option<f64>,
}

impl Ctx {
    fn classify_tol(&self) -> f64 {
        self.tol.unwrap_or(CLASSIFY_TOL)
    }

    fn equality_tol(&self) -> f64 {
        self.tol.unwrap_or(EPS)
    }
}

fn num(x: f64) -> String {
    let s = format!("{x:.10}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn vec3(v: [f64; 3]) -> String {
    format!("({}, {}, {})", num(v[0]), num(v[1]), num(v[2]))
}

fn emit(out: &mut dyn Write, record: Value) -> std::io::Result<()> {
    writeln!(out, "{record}")
}

fn load_density(path: &Path) -> Result<(StateFile, DensityState), Failure> {
    let (file, state) = read_state(path)?;
    let rho = states::validate(state)?;
    Ok((file, rho))
}

fn write_state(
    ctx: &Ctx,
    state: &PauliState,
    label: Option<String>,
    target: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let file = StateFile::from_state(state, label, ctx.format)?;
    match target {
        Some(path) => file.write(path)?,
        None => writeln!(out, "{}", file.to_json())?,
    }
    Ok(())
}

fn validate(ctx: &Ctx, path: &Path, out: &mut dyn Write) -> Result<i32, Failure> {
    let (_, state) = read_state(path)?;
    let report = validation_report(&state);
    let (min_ev, max_ev) = match report.positivity {
        Positivity::Checked { min_eigenvalue, max_eigenvalue } => (Some(min_eigenvalue), Some(max_eigenvalue)),
        Positivity::Unchecked => (None, None),
    };
    if ctx.json {
        emit(
            out,
            json!({
                "command": "validate",
                "n": report.n,
                "valid": report.is_valid(),
                "trace": report.trace,
                "purity": report.purity,
                "positivity_checked": min_ev.is_some(),
                "min_eigenvalue": min_ev,
                "max_eigenvalue": max_ev,
                "violations": report.violations.iter().map(|v| json!({"code": v.code(), "message": v.to_string()})).collect::<Vec<_>>(),
                "tol": EPS,
                "bound_tol": VALIDITY_TOL,
            }),
        )?;
    } else {
        writeln!(out, "state: {} (n = {})", path.display(), report.n)?;
        writeln!(out, "tolerance: {EPS:e} (coefficients), {VALIDITY_TOL:e} (positivity, purity)")?;
        let failed = |code: &str| report.violations.iter().any(|v| v.code() == code);
        let mark = |code: &str| if failed(code) { "FAIL" } else { "pass" };
        writeln!(out, "(a) real coefficients:           {}", mark("a"))?;
        writeln!(out, "(b) identity coefficient 2^-n:   {}", mark("b"))?;
        writeln!(out, "(c) consistent with dense form:  {}", mark("c"))?;
        writeln!(out, "(d) purity <= 1:                 {}", mark("d"))?;
        match (min_ev, max_ev) {
            (Some(lo), Some(hi)) => writeln!(
                out,
                "positivity:                      {} (eigenvalues in [{}, {}])",
                mark("positivity"),
                num(lo),
                num(hi)
            )?,
            _ => writeln!(out, "positivity:                      unchecked (n > {})", qcentral_core::POSITIVITY_CHECK_MAX)?,
        }
        for v in &report.violations {
            writeln!(out, "  {v}")?;
        }
        if report.is_valid() {
            writeln!(out, "valid, purity {}", num(report.purity))?;
        } else {
            writeln!(out, "invalid, purity {}", num(report.purity))?;
        }
    }
    Ok(if report.is_valid() { 0 } else { 1 })
}

fn decompose(ctx: &Ctx, path: &Path, delta_out: Option<&Path>, out: &mut dyn Write) -> Result<i32, Failure> {
    let (file, rho) = load_density(path)?;
    let tol = ctx.equality_tol();
    let parts = reduction::decompose(&rho);
    let blochs = bloch_vectors(&rho);
    let delta_terms: Vec<(String, f64)> = parts
        .delta
        .terms()
        .filter(|(_, v)| v.abs() > tol)
        .map(|(i, v)| (i.to_string(), v))
        .collect();
    if ctx.json {
        emit(
            out,
            json!({
                "command": "decompose",
                "n": rho.n(),
                "identity_coeff": parts.identity_coeff,
                "qubits": blochs.iter().zip(&parts.translated).map(|(b, t)| json!({
                    "qubit": b.qubit,
                    "bloch": b.r,
                    "translated_norm": t.norm(),
                    "eigenvalues": [t.eigen_pair.0, t.eigen_pair.1],
                })).collect::<Vec<_>>(),
                "delta": delta_terms.iter().map(|(k, v)| (k.clone(), json!(v))).collect::<serde_json::Map<String, Value>>(),
                "delta_purity": parts.delta_purity(),
                "tol": tol,
            }),
        )?;
    } else {
        writeln!(out, "state: {} (n = {}), tolerance {tol:e}", path.display(), rho.n())?;
        writeln!(out, "identity coefficient: {}", num(parts.identity_coeff))?;
        for (b, t) in blochs.iter().zip(&parts.translated) {
            writeln!(
                out,
                "qubit {}: bloch {}  |r| = {}  ||rho_bar|| = {}  eigenvalues ({}, {})",
                b.qubit,
                vec3(b.r),
                num(b.norm()),
                num(t.norm()),
                num(t.eigen_pair.0),
                num(t.eigen_pair.1)
            )?;
        }
        writeln!(out, "delta (weight >= 2): {} term(s), Tr delta^2 = {}", delta_terms.len(), num(parts.delta_purity()))?;
        for (label, v) in &delta_terms {
            writeln!(out, "  {label}  {}", num(*v))?;
        }
    }
    if let Some(target) = delta_out {
        let label = Some(format!("delta of {}", file.label.as_deref().unwrap_or("state")));
        StateFile::from_state(&parts.delta, label, Encoding::Pauli)?.write(target)?;
    }
    Ok(0)
}

fn centralizer(ctx: &Ctx, path: &Path, out: &mut dyn Write) -> Result<i32, Failure> {
    let (_, rho) = load_density(path)?;
    let tol = ctx.classify_tol();
    let desc = centralizer::classify_centralizer(&rho, tol);
    let blochs = bloch_vectors(&rho);
    if ctx.json {
        emit(
            out,
            json!({
                "command": "centralizer",
                "n": desc.n(),
                "m": desc.m(),
                "dim": desc.dim(),
                "threshold": desc.threshold,
                "qubits": desc.classes.iter().zip(&blochs).map(|(c, b)| json!({
                    "qubit": b.qubit,
                    "class": match c { FactorClass::Full => "full", FactorClass::Axis { .. } => "axis" },
                    "axis": c.axis(),
                    "bloch": b.r,
                    "bloch_norm": b.norm(),
                })).collect::<Vec<_>>(),
            }),
        )?;
    } else {
        writeln!(out, "state: {} (n = {}), maximally-mixed threshold |r| < {tol:e}", path.display(), desc.n())?;
        for (c, b) in desc.classes.iter().zip(&blochs) {
            match c {
                FactorClass::Full => writeln!(out, "qubit {}: full SU(2)            |r| = {}", b.qubit, num(b.norm()))?,
                FactorClass::Axis { .. } => writeln!(
                    out,
                    "qubit {}: axis {}  |r| = {}",
                    b.qubit,
                    vec3(c.axis().unwrap()),
                    num(b.norm())
                )?,
            }
        }
        writeln!(out, "m = {}, dim = {}", desc.m(), desc.dim())?;
    }
    Ok(0)
}

fn evolve(
    ctx: &Ctx,
    state_path: &Path,
    spec_path: &Path,
    require_centralizer: bool,
    target: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let (file, rho) = load_density(state_path)?;
    let spec = UnitarySpecFile::read(spec_path)?.to_spec(rho.n())?;
    if require_centralizer {
        let tol = ctx.classify_tol();
        let diag = centralizer::centralizer_diagnostics(&rho, &spec, tol)?;
        let bad: Vec<_> = diag.iter().filter(|d| !d.admissible).collect();
        if !bad.is_empty() {
            if ctx.json {
                emit(
                    err,
                    json!({
                        "command": "evolve",
                        "accepted": false,
                        "tol": tol,
                        "qubits": diag.iter().map(|d| json!({
                            "qubit": d.qubit,
                            "commutator": d.commutator,
                            "admissible": d.admissible,
                        })).collect::<Vec<_>>(),
                    }),
                )?;
            } else {
                for d in &bad {
                    writeln!(
                        err,
                        "qubit {}: max |[U, rho_{}]| = {:e} >= {tol:e} (bloch {})",
                        d.qubit,
                        d.qubit,
                        d.commutator,
                        vec3(d.bloch)
                    )?;
                }
            }
            let qubits: Vec<String> = bad.iter().map(|d| d.qubit.to_string()).collect();
            return Err(Failure::Rejected(format!(
                "unitary is not in the centralizer on qubit(s) {}",
                qubits.join(", ")
            )));
        }
    }
    let evolved = centralizer::adjoint_action(&rho, &spec)?;
    write_state(ctx, evolved.state(), file.label.clone(), target, out)?;
    Ok(0)
}

fn sample(
    ctx: &Ctx,
    path: &Path,
    count: usize,
    seed: u64,
    out_dir: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let (file, rho) = load_density(path)?;
    let tol = ctx.classify_tol();
    let desc = centralizer::classify_centralizer(&rho, tol);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
    }
    let base = file.label.as_deref().unwrap_or("state");
    for i in 0..count {
        let params = random_parameters(&desc, &mut rng);
        let spec = centralizer::sample_centralizer(&desc, &params)?;
        let member = centralizer::family_member(&rho, &spec, tol)?;
        let sf = StateFile::from_state(member.state(), Some(format!("{base} sample {i}")), ctx.format)?;
        match out_dir {
            Some(dir) => sf.write(&dir.join(format!("sample-{i:04}.json")))?,
            None => writeln!(out, "{}", sf.to_json_line())?,
        }
    }
    Ok(0)
}

fn compare(ctx: &Ctx, a: &Path, b: &Path, out: &mut dyn Write) -> Result<i32, Failure> {
    let (_, ra) = load_density(a)?;
    let (_, rb) = load_density(b)?;
    let tol = ctx.equality_tol();
    let c = centralizer::compare(&ra, &rb, tol)?;
    if ctx.json {
        emit(
            out,
            json!({
                "command": "compare",
                "n": ra.n(),
                "bloch_deviation": c.bloch_deviation,
                "lm_equivalent": c.lm_equivalent,
                "purity": [c.purity.0, c.purity.1],
                "delta_purity": [c.delta_purity.0, c.delta_purity.1],
                "verdict": c.verdict.as_str(),
                "tol": tol,
            }),
        )?;
    } else {
        writeln!(out, "a: {}\nb: {}\ntolerance {tol:e}", a.display(), b.display())?;
        for (q, d) in c.bloch_deviation.iter().enumerate() {
            let same = if *d <= tol { "same reduction" } else { "different reduction" };
            writeln!(out, "qubit {}: max |r_a - r_b| = {:e}  {same}", q + 1, d)?;
        }
        writeln!(out, "LM-equivalent: {}", if c.lm_equivalent { "yes" } else { "no" })?;
        writeln!(out, "purity:     a = {}  b = {}", num(c.purity.0), num(c.purity.1))?;
        writeln!(out, "Tr delta^2: a = {}  b = {}", num(c.delta_purity.0), num(c.delta_purity.1))?;
        writeln!(out, "verdict: {}", c.verdict.as_str())?;
    }
    Ok(0)
}

fn fixture(ctx: &Ctx, kind: &FixtureKind, target: Option<&Path>, out: &mut dyn Write) -> Result<i32, Failure> {
    let (rho, label) = match kind {
        FixtureKind::Ghz { n } => (states::make_ghz(*n)?, format!("ghz{n}")),
        FixtureKind::Werner { n, weight } => (states::make_werner_like(*n, *weight)?, format!("werner{n} w={weight}")),
        FixtureKind::Mixed { n } => (states::maximally_mixed(*n)?, format!("mixed{n}")),
        FixtureKind::Product { bloch } => (states::make_product(bloch)?, "product".to_string()),
        FixtureKind::Random { n, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (states::random_density(*n, &mut rng)?, format!("random{n} seed={seed}"))
        }
    };
    write_state(ctx, rho.state(), Some(label), target, out)?;
    Ok(0)
}
