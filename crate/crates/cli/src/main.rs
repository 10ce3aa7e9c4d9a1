//! multistat: exact steady-state counting for polynomial reaction models.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use multistat_core::cad2d::{self, CellClass};
use multistat_core::depgraph::{build_graph, min_vertex_cover};
use multistat_core::elimination::{gauss_eliminate, ReducedSystem, TieBreak};
use multistat_core::fixtures::builtin_model;
use multistat_core::model::{parse_model, ModelFile};
use multistat_core::pointsolve::{grid_sample, slice_report, solve_at_point, SampleRange};
use multistat_core::rat::{parse_rat, to_decimal, to_frac_string, Rat};
use multistat_core::realroots::isolate_real_roots;
use multistat_core::report;
use multistat_core::stability::{classify_fixed_points, reduced_jacobian, Classification};
use multistat_core::textform::{canonical_text, parse_poly};

#[derive(Parser)]
#[command(name = "multistat", version, about = "Exact multistationarity analysis for polynomial ODE models")]
struct Cli {
    /// Decimal display precision.
    #[arg(long, global = true, default_value_t = 6)]
    digits: usize,
    /// Worker threads for grid sampling and cell classification.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized fuzz harnesses; unused by the deterministic verbs.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a model to its surviving equations via graph-guided elimination.
    Reduce(ReduceArgs),
    /// Count and print the positive steady states at one parameter point.
    Solve(SolveArgs),
    /// Sweep parameter ranges, counting steady states per lattice point.
    Sample(SampleArgs),
    /// Decompose a 2-parameter plane into sign-invariant cells and classify them.
    Region2d(RegionArgs),
    /// Classify the stability of each steady state at a parameter point.
    Stability(StabilityArgs),
    /// Isolate the real roots of a univariate polynomial file.
    Roots(RootsArgs),
}

#[derive(Args)]
struct ReduceArgs {
    /// Bundled model name (model26, model28) or a model file path.
    model: String,
    /// Also write the reduced system as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    model: String,
    /// Parameter values, e.g. --fix k17=100,k18=50,k19=200
    #[arg(long, value_delimiter = ',')]
    fix: Vec<String>,
}

#[derive(Args)]
struct SampleArgs {
    model: String,
    /// Swept range, e.g. --range k19=200:1000:50 (repeat up to three times).
    #[arg(long)]
    range: Vec<String>,
    /// Fixed parameter values, e.g. --fix k18=50
    #[arg(long, value_delimiter = ',')]
    fix: Vec<String>,
    /// CSV output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Scatter SVG output path.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// JSON output path.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct RegionArgs {
    model: String,
    /// Fixed parameter values, e.g. --fix k18=50
    #[arg(long, value_delimiter = ',')]
    fix: Vec<String>,
    /// The two free parameters, base axis first, e.g. --params k17,k19
    #[arg(long, value_delimiter = ',')]
    params: Vec<String>,
    /// JSON output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Region SVG output path.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct StabilityArgs {
    model: String,
    #[arg(long, value_delimiter = ',')]
    fix: Vec<String>,
    /// The remaining parameter value, e.g. --at k19=500
    #[arg(long)]
    at: Option<String>,
}

#[derive(Args)]
struct RootsArgs {
    /// File containing one polynomial expression in one variable.
    poly_file: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let digits = cli.digits;
    let result = match cli.command {
        Command::Reduce(args) => cmd_reduce(args),
        Command::Solve(args) => cmd_solve(args, digits),
        Command::Sample(args) => cmd_sample(args),
        Command::Region2d(args) => cmd_region(args),
        Command::Stability(args) => cmd_stability(args, digits),
        Command::Roots(args) => cmd_roots(args, digits),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn load_model(name: &str) -> Result<ModelFile, String> {
    if let Some(m) = builtin_model(name) {
        return Ok(m);
    }
    let text = std::fs::read_to_string(name).map_err(|e| format!("{name}: {e}"))?;
    parse_model(&text).map_err(|e| format!("{name}: {e}"))
}

fn reduce_model(model: &ModelFile) -> Result<ReducedSystem, String> {
    let system = model.steady_state_system();
    let g = build_graph(&system, &model.vars);
    let cover = min_vertex_cover(&g);
    gauss_eliminate(&system, &model.vars, &model.free_params(), &cover, TieBreak::Normal)
        .map_err(|e| e.to_string())
}

fn parse_fix(items: &[String]) -> Result<BTreeMap<String, Rat>, String> {
    let mut out = BTreeMap::new();
    for item in items {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| format!("bad --fix entry {item:?}, expected name=value"))?;
        let q = parse_rat(v.trim()).ok_or_else(|| format!("bad rational {v:?}"))?;
        out.insert(k.trim().to_string(), q);
    }
    Ok(out)
}

fn parse_range(s: &str) -> Result<SampleRange, String> {
    let (name, spec) = s
        .split_once('=')
        .ok_or_else(|| format!("bad --range {s:?}, expected name=start:stop:step"))?;
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("bad --range {s:?}, expected name=start:stop:step"));
    }
    let nums: Vec<Rat> = parts
        .iter()
        .map(|p| parse_rat(p).ok_or_else(|| format!("bad rational {p:?}")))
        .collect::<Result<_, _>>()?;
    Ok(SampleRange::new(name.trim(), nums[0].clone(), nums[1].clone(), nums[2].clone()))
}

fn cmd_reduce(args: ReduceArgs) -> Result<(), String> {
    let model = load_model(&args.model)?;
    let rs = reduce_model(&model)?;
    println!("model {}", model.name);
    println!("surviving variables: {}", rs.positive_vars.join(", "));
    println!("positive parameters: {}", rs.positive_params.join(", "));
    for (i, eq) in rs.equations.iter().enumerate() {
        println!("eq{}: {} = 0", i + 1, canonical_text(eq));
    }
    for step in &rs.trace {
        println!(
            "{} = ({}) / ({})",
            step.variable,
            canonical_text(&step.numerator),
            canonical_text(&step.denominator)
        );
    }
    if !rs.extra_positivity.is_empty() {
        for p in &rs.extra_positivity {
            println!("require > 0: {}", canonical_text(p));
        }
    }
    if let Some(path) = args.json {
        let value = report_reduced_json(&rs);
        std::fs::write(&path, serde_json::to_string_pretty(&value).unwrap())
            .map_err(|e| e.to_string())?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn report_reduced_json(rs: &ReducedSystem) -> serde_json::Value {
    serde_json::json!({
        "equations": rs.equations.iter().map(canonical_text).collect::<Vec<_>>(),
        "positive_vars": rs.positive_vars,
        "positive_params": rs.positive_params,
        "trace": rs.trace.iter().map(|s| serde_json::json!({
            "variable": s.variable,
            "numerator": canonical_text(&s.numerator),
            "denominator": canonical_text(&s.denominator),
            "pivot_sign": s.pivot_sign,
        })).collect::<Vec<_>>(),
    })
}

fn cmd_solve(args: SolveArgs, digits: usize) -> Result<(), String> {
    let model = load_model(&args.model)?;
    let rs = reduce_model(&model)?;
    let values = parse_fix(&args.fix)?;
    let tol = Rat::new(1.into(), 1_000_000_000i64.into());
    let sol = solve_at_point(&rs, &values, &tol).map_err(|e| e.to_string())?;
    println!("{} positive steady state(s)", sol.count());
    if sol.undetermined > 0 {
        println!("{} candidate(s) undetermined", sol.undetermined);
    }
    for (i, rec) in sol.records.iter().enumerate() {
        println!("solution {}:", i + 1);
        for var in &model.vars {
            if let Some(iv) = rec.enclosures.get(var) {
                println!("  {var} = {}", to_decimal(&iv.mid(), digits));
            }
        }
    }
    Ok(())
}

fn cmd_sample(args: SampleArgs) -> Result<(), String> {
    let model = load_model(&args.model)?;
    let rs = reduce_model(&model)?;
    let ranges: Vec<SampleRange> =
        args.range.iter().map(|r| parse_range(r)).collect::<Result<_, _>>()?;
    if ranges.is_empty() {
        return Err("at least one --range is required".into());
    }
    let fixed = parse_fix(&args.fix)?;
    let tol = Rat::new(1.into(), 1000.into());
    let grid = grid_sample(&rs, &ranges, &fixed, &tol);
    let (csv, json, svg) = slice_report(&grid);
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for p in &grid.points {
        *counts.entry(p.count).or_default() += 1;
    }
    println!("{} lattice points; counts histogram: {:?}", grid.points.len(), counts);
    match args.out {
        Some(path) => {
            std::fs::write(&path, csv).map_err(|e| e.to_string())?;
            println!("wrote {}", path.display());
        }
        None => print!("{csv}"),
    }
    if let Some(path) = args.json {
        std::fs::write(&path, json).map_err(|e| e.to_string())?;
        println!("wrote {}", path.display());
    }
    if let Some(path) = args.svg {
        std::fs::write(&path, svg).map_err(|e| e.to_string())?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_region(args: RegionArgs) -> Result<(), String> {
    let model = load_model(&args.model)?;
    let rs = reduce_model(&model)?;
    let fix = parse_fix(&args.fix)?;
    if args.params.len() != 2 {
        return Err("--params needs exactly two names, base axis first".into());
    }
    let base = args.params[0].clone();
    let analysis = cad2d::analyze_region(&rs, &fix, &base).map_err(|e| e.to_string())?;
    let mut one = 0;
    let mut multi = 0;
    let mut quadrant = 0;
    for cell in analysis.cad.cells() {
        match cell.classification {
            CellClass::OneSolution => {
                one += 1;
                quadrant += 1;
            }
            CellClass::Multistationary => {
                multi += 1;
                quadrant += 1;
            }
            CellClass::Undetermined => quadrant += 1,
            CellClass::NotInQuadrant => {}
        }
    }
    println!(
        "{} cells total, {} in the positive quadrant ({} single, {} multistationary)",
        analysis.cad.cell_count(),
        quadrant,
        one,
        multi
    );
    println!(
        "boundary factor degrees: {} in {}, {} in {}",
        analysis.boundary.degree_in(&base),
        base,
        analysis.boundary.degree_in(&args.params[1]),
        args.params[1]
    );
    let value = region_json(&analysis);
    match args.out {
        Some(path) => {
            std::fs::write(&path, serde_json::to_string_pretty(&value).unwrap())
                .map_err(|e| e.to_string())?;
            println!("wrote {}", path.display());
        }
        None => {}
    }
    if let Some(path) = args.svg {
        let shapes = cad2d::cell_shapes(&analysis, 12);
        let svg = report::region_svg(&shapes, &analysis.cad.base_axis, &analysis.cad.stack_axis);
        std::fs::write(&path, svg).map_err(|e| e.to_string())?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn region_json(analysis: &cad2d::RegionAnalysis) -> serde_json::Value {
    let class_str = |c: CellClass| match c {
        CellClass::OneSolution => "one_solution",
        CellClass::Multistationary => "multistationary",
        CellClass::NotInQuadrant => "not_in_quadrant",
        CellClass::Undetermined => "undetermined",
    };
    serde_json::json!({
        "base_axis": analysis.cad.base_axis,
        "stack_axis": analysis.cad.stack_axis,
        "projection": analysis.projection.polys.iter().map(canonical_text).collect::<Vec<_>>(),
        "boundary": canonical_text(&analysis.boundary),
        "cells": analysis.cad.cells().map(|c| serde_json::json!({
            "base_index": c.base_idx,
            "stack_index": c.stack_idx,
            "sample": [to_frac_string(&c.sample.0), to_frac_string(&c.sample.1)],
            "signs": c.signs,
            "classification": class_str(c.classification),
            "positive_roots": c.positive_roots,
            "certified_solutions": c.certified_solutions,
        })).collect::<Vec<_>>(),
    })
}

fn cmd_stability(args: StabilityArgs, digits: usize) -> Result<(), String> {
    let model = load_model(&args.model)?;
    let rs = reduce_model(&model)?;
    let mut values = parse_fix(&args.fix)?;
    if let Some(at) = &args.at {
        let (k, v) = at
            .split_once('=')
            .ok_or_else(|| format!("bad --at entry {at:?}"))?;
        values.insert(
            k.trim().to_string(),
            parse_rat(v.trim()).ok_or_else(|| format!("bad rational {v:?}"))?,
        );
    }
    let tol = Rat::new(1.into(), 100_000_000i64.into());
    let sol = solve_at_point(&rs, &values, &tol).map_err(|e| e.to_string())?;
    // eliminate one variable per declared law, using the published choice
    // when the law solves for it with a unit coefficient
    let eliminate = default_elimination_set(&model);
    let jac = reduced_jacobian(&model, &eliminate).map_err(|e| e.to_string())?;
    let mut records = sol.records;
    classify_fixed_points(&mut records, &rs, &jac, &values, 16);
    for (i, rec) in records.iter().enumerate() {
        let verdict = rec.stability.as_ref().unwrap();
        let class = match verdict.classification {
            Classification::Stable => "stable",
            Classification::Unstable => "unstable",
            Classification::Undetermined => "undetermined",
        };
        let x1 = rec
            .enclosures
            .values()
            .next()
            .map(|iv| to_decimal(&iv.mid(), digits))
            .unwrap_or_default();
        match verdict.rhp_count {
            Some(n) => println!(
                "solution {} (first coordinate {}): {} ({} eigenvalue(s) with positive real part)",
                i + 1,
                x1,
                class,
                n
            ),
            None => println!("solution {}: {}", i + 1, class),
        }
    }
    Ok(())
}

/// One eliminated variable per law: the first variable that the law solves
/// with a unit coefficient and that no earlier law already claimed.
fn default_elimination_set(model: &ModelFile) -> Vec<String> {
    let mut used: Vec<String> = Vec::new();
    let table = model.table();
    for law in &model.laws {
        let lhs = law.lhs.align_to(&table);
        for var in model.vars.iter().rev() {
            if used.contains(var) || lhs.degree_in(var) != 1 {
                continue;
            }
            let c = lhs.coeffs_in(var).pop().unwrap();
            if let Some(cv) = c.constant_value() {
                if cv == Rat::from_integer(1.into()) || cv == Rat::from_integer((-1).into()) {
                    used.push(var.clone());
                    break;
                }
            }
        }
    }
    used
}

fn cmd_roots(args: RootsArgs, digits: usize) -> Result<(), String> {
    let text = std::fs::read_to_string(&args.poly_file)
        .map_err(|e| format!("{}: {e}", args.poly_file.display()))?;
    let expr: String = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect::<Vec<_>>()
        .join(" ");
    // infer the single variable from the expression
    let mut var = None;
    for token in expr.split(|c: char| !(c.is_alphanumeric() || c == '_')) {
        if !token.is_empty() && token.chars().next().unwrap().is_alphabetic() {
            match &var {
                None => var = Some(token.to_string()),
                Some(v) if v == token => {}
                Some(v) => {
                    return Err(format!("expected one variable, found {v} and {token}"));
                }
            }
        }
    }
    let var = var.ok_or("no variable found in polynomial")?;
    let poly = parse_poly(&expr, &[var.as_str()]).map_err(|e| e.to_string())?;
    let uni = poly.to_uni(&var).ok_or("not univariate")?;
    let roots = isolate_real_roots(&uni).map_err(|e| e.to_string())?;
    println!("{} real root(s)", roots.len());
    for r in &roots {
        let iv = r.interval();
        println!(
            "  ({}, {}) ~ {}",
            to_frac_string(&iv.lo),
            to_frac_string(&iv.hi),
            r.decimal(digits)
        );
    }
    Ok(())
}
