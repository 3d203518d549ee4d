use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use plifs_core::gdifs::{esc_diagnostic, punctured_dimension, q_root, recognize_fixed_point_family};
use plifs_core::oracle::{box_dimension, chaos_game, default_scales, lebesgue_upper_bound, measure_evidence};
use plifs_core::report::{affordable_level, associated_alpha};
use plifs_core::{
    check_iosc, check_small, dim_report, fmt_g17, natural_dimension, parse_system, regularity_diagnostic,
    BreakStatus, Budget, Cplifs, ReportConfig,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Spec { path: PathBuf, source: plifs_core::Error },
    #[error(transparent)]
    Core(#[from] plifs_core::Error),
}

impl CliError {
    /// 2 for unreadable or invalid input, 4 for budget refusals, 3 for any
    /// other failed computation.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Spec { .. } => 2,
            CliError::Core(e) if e.is_input() => 2,
            CliError::Core(e) if e.is_budget() => 4,
            CliError::Core(_) => 3,
        }
    }
}

/// `(method, param, value)` rows of the `--csv` export.
pub type Row = (String, String, f64);

pub fn load(path: &Path) -> Result<Cplifs, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_system(&text).map_err(|source| CliError::Spec {
        path: path.to_path_buf(),
        source,
    })
}

pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    let io_err = |source| CliError::Io {
        path: path.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf),
        source,
    };
    match path {
        Some(p) => fs::write(p, text).map_err(io_err),
        None => io::stdout().lock().write_all(text.as_bytes()).map_err(io_err),
    }
}

pub fn write_rows(path: &Path, rows: &[Row]) -> Result<(), CliError> {
    let mut text = String::from("method,param,value\n");
    for (method, param, value) in rows {
        text.push_str(&format!("{method},{param},{}\n", fmt_g17(*value)));
    }
    emit(Some(path), &text)
}

/// Short human-readable form, six decimals at most.
fn short(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

pub fn check(f: &Cplifs, depth: usize, tol: f64, budget: Budget) -> Result<(), CliError> {
    let j = f.invariant_interval();
    let types: Vec<String> = f.type_vector().iter().map(usize::to_string).collect();
    println!("maps: {}", f.len());
    println!("type vector: {}", types.join(","));
    println!("invariant interval: [{}, {}]", fmt_g17(j.lo), fmt_g17(j.hi));
    for (k, g) in f.maps().iter().enumerate() {
        println!(
            "map {}: {}, rho={}",
            k + 1,
            if g.is_injective() { "injective" } else { "not injective" },
            short(g.lipschitz())
        );
    }

    let iosc = check_iosc(f, tol);
    let gap = if iosc.min_gap.is_finite() { short(iosc.min_gap) } else { "inf".into() };
    println!("IOSC: {} (gap {gap})", if iosc.holds { "yes" } else { "no" });

    let small = check_small(f);
    if small.holds {
        println!("small: yes");
    } else {
        let mut clauses: Vec<String> = small
            .failing_maps()
            .map(|(k, m)| format!("map {}: ρ={} ≥ {}", k + 1, short(m.rho), short(m.bound)))
            .collect();
        if !small.sum_holds {
            clauses.push(format!("Σρ={} ≥ 1", short(small.ratio_sum)));
        }
        println!("small: no ({})", clauses.join("; "));
    }

    let depth = depth.min(affordable_level(f.len(), budget.0, depth.max(1)));
    let diagnostics = regularity_diagnostic(f, depth, budget, tol)?;
    if diagnostics.is_empty() {
        println!("regular: trivially (no breaks)");
        return Ok(());
    }
    let mut undecided = 0;
    for d in &diagnostics {
        match &d.status {
            BreakStatus::CertifiedOffAttractor => {
                println!("break {} (map {}): CERTIFIED off the attractor at depth {depth}", short(d.point), d.map + 1)
            }
            BreakStatus::UndecidedAtDepth(words) => {
                undecided += 1;
                let shown: Vec<String> = words.iter().take(4).map(ToString::to_string).collect();
                let more = if words.len() > 4 { ", …" } else { "" };
                println!(
                    "break {} (map {}): UNDECIDED at depth {depth} (in {}{more})",
                    short(d.point),
                    d.map + 1,
                    shown.join(", ")
                );
            }
        }
    }
    if undecided == 0 {
        println!("regular: yes (every break certified at depth {depth})");
    } else {
        println!("regular: undecided ({undecided} of {} breaks)", diagnostics.len());
    }
    Ok(())
}

fn natural_levels(f: &Cplifs, config: &ReportConfig) -> (usize, usize) {
    config.levels.unwrap_or_else(|| {
        let hi = affordable_level(f.len(), config.budget.0.min(1 << 22), 14);
        (hi.saturating_sub(5).max(1), hi)
    })
}

pub fn dim_natural(f: &Cplifs, config: &ReportConfig) -> Result<Vec<Row>, CliError> {
    let (lo, hi) = natural_levels(f, config);
    let est = natural_dimension(f, lo, hi, config.window, config.budget)?;
    let mut rows = Vec::new();
    for &(n, s) in &est.sequence {
        println!("s_{n} = {}", fmt_g17(s));
        rows.push(("natural".into(), format!("n={n}"), s));
    }
    println!("estimate = {} (max over last {}, spread {})", fmt_g17(est.estimate), est.window, short(est.spread));
    rows.push(("natural".into(), format!("estimate n={lo}..{hi}"), est.estimate));
    Ok(rows)
}

pub fn dim_gdifs(f: &Cplifs, config: &ReportConfig) -> Result<Vec<Row>, CliError> {
    let (a, level, warnings) = associated_alpha(f, config)?;
    for w in &warnings {
        println!("warning: {w}");
    }
    println!("alpha = {} (cylinder level {level})", fmt_g17(a));
    Ok(vec![("gdifs".into(), format!("P={level}"), a)])
}

pub fn dim_punctured(f: &Cplifs, config: &ReportConfig) -> Result<Vec<Row>, CliError> {
    let k = config.punctured_level.unwrap_or(8);
    let p = punctured_dimension(f, k, config.budget)?;
    println!("t_{k} = {}", fmt_g17(p.alpha));
    println!("kept {} of {} cylinders, component of {} nodes", p.kept, p.kept + p.dropped, p.component_size);
    if !p.strongly_connected {
        println!("note: graph not strongly connected, largest component used");
    }
    Ok(vec![("punctured".into(), format!("k={k}"), p.alpha)])
}

pub fn dim_determinant(f: &Cplifs, config: &ReportConfig) -> Result<Vec<Row>, CliError> {
    let family = recognize_fixed_point_family(f, config.rel_tol).ok_or_else(|| {
        plifs_core::Error::InvalidInput("system is not a fixed-point-breaking family".into())
    })?;
    let root = q_root(&family.recursion())?;
    println!("determinant root = {} (m={})", fmt_g17(root), family.map_count());
    Ok(vec![("determinant".into(), format!("m={}", family.map_count()), root)])
}

pub fn dim_box(f: &Cplifs, config: &ReportConfig) -> Result<Vec<Row>, CliError> {
    let cloud = chaos_game(f, config.samples.max(1), config.seed)?;
    let fit = box_dimension(&cloud, &default_scales(f.invariant_interval().len()))?;
    println!(
        "box = {} (raw slope {}, 95% CI [{}, {}], {} samples, seed {})",
        fmt_g17(fit.slope),
        short(fit.raw_slope),
        short(fit.confidence.0),
        short(fit.confidence.1),
        config.samples,
        config.seed
    );
    Ok(vec![("box".into(), format!("samples={}", config.samples), fit.slope)])
}

pub fn dim_all(f: &Cplifs, config: &ReportConfig) -> Result<Vec<Row>, CliError> {
    let report = dim_report(f, config);
    let mut rows = Vec::new();
    for e in &report.estimates {
        let note = e.note.as_deref().map(|n| format!(" [{n}]")).unwrap_or_default();
        println!("{:<12} {:<14} {}{note}", e.method.name(), e.param, fmt_g17(e.value));
        rows.push((e.method.name().to_string(), e.param.clone(), e.value));
    }
    for fail in &report.failures {
        println!("{:<12} unavailable: {}", fail.method.name(), fail.error);
    }
    for flag in &report.flags {
        println!("check {}: {} ({})", flag.name, if flag.holds { "ok" } else { "VIOLATED" }, flag.detail);
    }
    println!("consistent: {}", if report.consistent() { "yes" } else { "no" });
    Ok(rows)
}

pub fn measure(f: &Cplifs, n_max: Option<usize>, budget: Budget) -> Result<Vec<Row>, CliError> {
    let n_max = n_max.unwrap_or_else(|| affordable_level(f.len(), budget.0.min(1 << 22), 20));
    let bounds = lebesgue_upper_bound(f, n_max, budget)?;
    let lo = n_max.saturating_sub(5).max(1);
    let s_f = natural_dimension(f, lo, n_max, 3, budget)?.estimate;
    let mut rows = Vec::new();
    for (i, b) in bounds.iter().enumerate() {
        println!("level {}: bound {}", i + 1, fmt_g17(*b));
        rows.push(("bound".into(), format!("n={}", i + 1), *b));
    }
    let ev = measure_evidence(f, &bounds, s_f);
    println!("natural dimension estimate: {}", fmt_g17(s_f));
    println!(
        "verdict: {} (evidence, not proof; trailing spread {}, worst ratio {}, plateau threshold {})",
        ev.verdict,
        short(ev.trailing_spread),
        short(ev.worst_ratio),
        ev.plateau_threshold
    );
    rows.push(("natural".into(), format!("estimate n={lo}..{n_max}"), s_f));
    Ok(rows)
}

pub fn esc(f: &Cplifs, level: usize, budget: Budget) -> Result<(), CliError> {
    let sims: Vec<_> = f.generated_similarities().into_iter().map(|g| g.similarity).collect();
    let r = esc_diagnostic(&sims, level, budget)?;
    println!("generated similarities: {}", sims.len());
    println!("level {}: {} compositions", r.level, r.compositions);
    if r.delta.is_finite() {
        println!("delta = {}", fmt_g17(r.delta));
        println!("delta^(1/n) = {}", fmt_g17(r.delta_root));
    } else {
        println!("delta = inf (no two compositions share a ratio)");
    }
    if let Some((a, b)) = &r.closest {
        println!("closest pair: {a} {b}");
    }
    Ok(())
}
