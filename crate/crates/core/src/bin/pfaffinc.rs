use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::Value;

use pfaffinc::chains::{
    extend_with_integral, order_and_degree, verify_chain, ChainLink, FunctionSpec, PfaffianChain, PfaffianFunction,
};
use pfaffinc::curve::CurveKind;
use pfaffinc::cutting::{build_cutting, write_svg, CuttingParams};
use pfaffinc::duality::{family_curves, family_scene, verify_duality_chain, PfaffianFamily, DUAL_TOL};
use pfaffinc::generators::{exp_transform, grid_lines, random_scene, unit_circles, witness_scene};
use pfaffinc::harness::{fit_slope, sweep_grid, verify_bound, BoundCheck, BoundKind, Verdict, C_FIT};
use pfaffinc::incidence::{count_incidences, count_via_cutting, optimal_r, DEFAULT_TOL};
use pfaffinc::intersect::{intersect_curves, pfaffian_bezout_bound, vertical_tangent_points, DEFAULT_TOL as ISECT_TOL};
use pfaffinc::poly::MultiPoly;
use pfaffinc::scene::Scene;
use pfaffinc::{Error, Point, Rect};

#[derive(Parser)]
#[command(name = "pfaffinc", version, about = "Incidence experiments with Pfaffian curves")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "PFAFFINC_SEED", default_value_t = 0)]
    seed: u64,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a scene JSON.
    Generate(GenerateArgs),
    /// Pairwise intersections, vertical tangents and the Bezout-type ceiling.
    Intersect(SceneArg),
    /// Build a certified cutting.
    Cutting(CuttingArgs),
    /// Count incidences, optionally split by a cutting.
    Count(CountArgs),
    /// Check the incidence count against a bound.
    VerifyBound(VerifyArgs),
    /// Compare primal, dual and projected incidence counts.
    Duality(DualityArgs),
    /// Verify a Pfaffian chain numerically.
    Chains(ChainArgs),
    /// Incidence counts over a family of growing grids.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Grid,
    ExpGrid,
    Circles,
    Random,
    Witness,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, default_value_t = 3)]
    a: usize,
    #[arg(long, default_value_t = 3)]
    b: usize,
    #[arg(long, default_value_t = 100)]
    m: usize,
    #[arg(long, default_value_t = 30)]
    n: usize,
    #[arg(long, default_value_t = 0.5)]
    planted: f64,
    /// Comma-separated catalog kinds for `random`.
    #[arg(long, value_delimiter = ',')]
    kinds: Vec<String>,
}

#[derive(Args)]
struct SceneArg {
    #[arg(long)]
    scene: PathBuf,
}

#[derive(Args)]
struct CuttingArgs {
    #[arg(long)]
    scene: PathBuf,
    /// Cutting parameter; defaults to the balancing value.
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, default_value_t = 32)]
    max_retries: usize,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long)]
    scene: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Also split the count by a cutting with this parameter.
    #[arg(long)]
    r: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundArg {
    Kst,
    KstDual,
    PachSharir,
    PfaffianCurves,
    PfaffianFamily,
    Hyperplanes,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    scene: PathBuf,
    #[arg(long, default_value_t = 2)]
    s: u32,
    #[arg(long, default_value_t = 2)]
    t: u32,
    #[arg(long, value_enum, default_value_t = BoundArg::PfaffianCurves)]
    bound: BoundArg,
    /// Constant in front of the bound.
    #[arg(long, default_value_t = C_FIT)]
    c: f64,
    /// Dimension for the family and hyperplane bounds.
    #[arg(long, default_value_t = 3)]
    d: u32,
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyPreset {
    Lines,
    ExpX,
    LinesExp,
    LinesLog,
}

#[derive(Args)]
struct DualityArgs {
    /// JSON with `terms`, `U`, `curves` (coefficient vectors) and `points`.
    #[arg(long, conflicts_with = "preset")]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    preset: Option<FamilyPreset>,
    #[arg(long, default_value_t = 50)]
    m: usize,
    #[arg(long, default_value_t = 40)]
    n: usize,
    #[arg(long, default_value_t = 0.5)]
    planted: f64,
    #[arg(long, default_value_t = DUAL_TOL)]
    tol: f64,
}

#[derive(Deserialize)]
struct DualityInput {
    #[serde(flatten)]
    family: PfaffianFamily,
    curves: Vec<Vec<f64>>,
    #[serde(default)]
    points: Vec<Point>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChainExample {
    Worked,
    Cos,
    ExpIntegral,
}

#[derive(Args)]
struct ChainArgs {
    /// Function JSON with `chain`, `g` and `domain`.
    #[arg(long, conflicts_with = "example")]
    spec: Option<PathBuf>,
    #[arg(long, value_enum)]
    example: Option<ChainExample>,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum, default_value_t = SweepFamily::Grid)]
    family: SweepFamily,
    #[arg(long, value_delimiter = ',', default_values_t = vec![8, 16, 32, 64, 128])]
    sizes: Vec<usize>,
    #[arg(long)]
    fit_exponent: bool,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepFamily {
    Grid,
}

/// Outcome of a subcommand: the text to write and whether every check passed.
struct Output {
    text: String,
    ok: bool,
}

fn header(cmd: &str, seed: u64, params: &str) -> String {
    format!("# pfaffinc {} {cmd} seed={seed} {params}\n", env!("CARGO_PKG_VERSION"))
}

fn with_meta(mut v: Value, cmd: &str, seed: u64, params: &str) -> String {
    if let Value::Object(map) = &mut v {
        map.insert(
            "meta".into(),
            serde_json::json!({
                "tool": "pfaffinc",
                "version": env!("CARGO_PKG_VERSION"),
                "command": cmd,
                "seed": seed,
                "params": params,
            }),
        );
    }
    serde_json::to_string_pretty(&v).expect("json value serializes") + "\n"
}

fn parse_kinds(names: &[String]) -> pfaffinc::Result<Vec<CurveKind>> {
    names
        .iter()
        .map(|s| {
            CurveKind::ALL
                .into_iter()
                .find(|k| k.name() == s.trim())
                .ok_or_else(|| Error::BadParameter(format!("unknown curve kind `{s}`")))
        })
        .collect()
}

fn generate(a: &GenerateArgs, seed: u64) -> pfaffinc::Result<Output> {
    let scene = match a.family {
        Family::Grid => grid_lines(a.a, a.b),
        Family::ExpGrid => exp_transform(&grid_lines(a.a, a.b))?,
        Family::Circles => unit_circles(a.m, a.n, a.planted, seed),
        Family::Random => random_scene(&parse_kinds(&a.kinds)?, a.m, a.n, a.planted, seed)?,
        Family::Witness => witness_scene(),
    };
    let params = format!(
        "family={} a={} b={} m={} n={} planted={}",
        a.family.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default(),
        a.a,
        a.b,
        a.m,
        a.n,
        a.planted
    );
    let v = serde_json::to_value(scene.to_file())?;
    Ok(Output {
        text: with_meta(v, "generate", seed, &params),
        ok: true,
    })
}

fn intersect(a: &SceneArg, seed: u64) -> pfaffinc::Result<Output> {
    let scene = Scene::load(&a.scene)?;
    let traced = scene.trace_default()?;
    let mut text = header("intersect", seed, &format!("scene={}", a.scene.display()));
    text.push_str("i,j,k1,k2,points,ceiling,within\n");
    let mut ok = true;
    for i in 0..traced.len() {
        for j in i + 1..traced.len() {
            let (ci, cj) = (&traced[i], &traced[j]);
            let pts = intersect_curves(&ci.curve, &ci.trace, &cj.curve, &cj.trace, ISECT_TOL)?;
            let (k1, k2) = (ci.curve.pf_degree(), cj.curve.pf_degree());
            let ceiling = pfaffian_bezout_bound(k1, k2);
            let within = pts.len() as u64 <= ceiling;
            ok &= within;
            let _ = writeln!(text, "{i},{j},{k1},{k2},{},{ceiling},{within}", pts.len());
        }
    }
    text.push_str("# vertical tangents\ncurve,x,y\n");
    for c in &traced {
        for p in vertical_tangent_points(&c.curve, &c.trace) {
            let _ = writeln!(text, "{},{},{}", c.id, p.x, p.y);
        }
    }
    Ok(Output { text, ok })
}

fn cutting(a: &CuttingArgs, seed: u64) -> pfaffinc::Result<Output> {
    let scene = Scene::load(&a.scene)?;
    let traced = scene.trace_default()?;
    let r = a.r.unwrap_or_else(|| optimal_r(scene.m(), scene.n().max(2), 2).r.max(1));
    let mut params = CuttingParams::new(r, seed);
    params.max_retries = a.max_retries;
    let cut = build_cutting(&traced, params)?;
    if let Some(svg) = &a.svg {
        write_svg(&cut, svg)?;
    }
    let v = serde_json::to_value(cut.summary())?;
    let p = format!("scene={} r={r} max_retries={}", a.scene.display(), a.max_retries);
    Ok(Output {
        text: with_meta(v, "cutting", seed, &p),
        ok: true,
    })
}

fn count(a: &CountArgs, seed: u64) -> pfaffinc::Result<Output> {
    let scene = Scene::load(&a.scene)?;
    let traced = scene.trace_default()?;
    let g = count_incidences(&scene.points, &traced, a.tol);
    let r = a.r.map_or("none".to_string(), |r| r.to_string());
    let p = format!("scene={} tol={} r={r}", a.scene.display(), a.tol);
    let mut text = header("count", seed, &p);
    let mut ok = true;
    match a.r {
        None => {
            text.push_str("m,n,I\n");
            let _ = writeln!(text, "{},{},{}", scene.m(), scene.n(), g.total());
        }
        Some(r) => {
            let cut = build_cutting(&traced, CuttingParams::new(r, seed))?;
            let b = count_via_cutting(&scene.points, &traced, &cut, a.tol)?;
            ok = b.total == g.total();
            text.push_str("m,n,I,r,cells,per_cell,boundary_nonsample,boundary_sample,split_total\n");
            let _ = writeln!(
                text,
                "{},{},{},{r},{},{},{},{},{}",
                scene.m(),
                scene.n(),
                g.total(),
                cut.cells.len(),
                b.per_cell_total(),
                b.on_boundary_vs_nonsample,
                b.on_boundary_vs_sample,
                b.total
            );
        }
    }
    Ok(Output { text, ok })
}

fn verify(a: &VerifyArgs, seed: u64) -> pfaffinc::Result<Output> {
    let scene = Scene::load(&a.scene)?;
    let kind = match a.bound {
        BoundArg::Kst => BoundKind::Kst,
        BoundArg::KstDual => BoundKind::KstDual,
        BoundArg::PachSharir => BoundKind::PachSharir,
        BoundArg::PfaffianCurves => BoundKind::PfaffianCurves,
        BoundArg::PfaffianFamily => BoundKind::PfaffianFamily { d: a.d, eps: a.eps },
        BoundArg::Hyperplanes => BoundKind::Hyperplanes { d: a.d, eps: a.eps },
    };
    let chk = verify_bound(&scene, kind, a.s, a.t, a.c, a.tol)?;
    let p = format!("scene={} bound={} s={} t={} c={}", a.scene.display(), kind.name(), a.s, a.t, a.c);
    let mut text = header("verify-bound", seed, &p);
    text.push_str(BoundCheck::CSV_HEADER);
    text.push('\n');
    text.push_str(&chk.csv_row());
    text.push('\n');
    let _ = writeln!(text, "{}", chk.verdict.name());
    Ok(Output {
        text,
        ok: chk.verdict != Verdict::Fail,
    })
}

fn duality(a: &DualityArgs, seed: u64) -> pfaffinc::Result<Output> {
    let (family, points, curves, src) = match (&a.input, a.preset) {
        (Some(path), _) => {
            let inp: DualityInput = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            let family = PfaffianFamily::new(inp.family.terms, inp.family.domain)?;
            (family, inp.points, family_curves(inp.curves)?, format!("input={}", path.display()))
        }
        (None, preset) => {
            let family = match preset.unwrap_or(FamilyPreset::Lines) {
                FamilyPreset::Lines => PfaffianFamily::lines(),
                FamilyPreset::ExpX => PfaffianFamily::exp_x(),
                FamilyPreset::LinesExp => PfaffianFamily::lines_exp(),
                FamilyPreset::LinesLog => PfaffianFamily::lines_log(),
            };
            let (p, c) = family_scene(&family, a.m, a.n, a.planted, seed)?;
            (family, p, c, format!("m={} n={} planted={}", a.m, a.n, a.planted))
        }
    };
    let p = format!("{src} d={} tol={}", family.dim(), a.tol);
    let mut text = header("duality", seed, &p);
    text.push_str("d,m,n,primal,dual,projected,transpose,result\n");
    let (line, ok) = match verify_duality_chain(&points, &family, &curves, seed, a.tol) {
        Ok(r) => (
            format!(
                "{},{},{},{},{},{},{},{}",
                r.d,
                r.m,
                r.n,
                r.primal,
                r.dual,
                r.projected,
                r.transpose_ok,
                if r.passed() { "PASS" } else { "FAIL" }
            ),
            r.passed(),
        ),
        Err(e @ Error::ChainMismatch { .. }) => (format!("# {e}\nFAIL"), false),
        Err(e) => return Err(e),
    };
    text.push_str(&line);
    text.push('\n');
    Ok(Output { text, ok })
}

fn chains(a: &ChainArgs, seed: u64) -> pfaffinc::Result<Output> {
    let (pf, src) = match (&a.spec, a.example) {
        (Some(path), _) => {
            let spec: FunctionSpec = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            (PfaffianFunction::from_spec(&spec)?, format!("spec={}", path.display()))
        }
        (None, ex) => match ex.unwrap_or(ChainExample::Worked) {
            ChainExample::Worked => (PfaffianFunction::worked_example(Rect::square(2.0)), "example=worked".into()),
            ChainExample::Cos => {
                let d = std::f64::consts::PI - 0.01;
                (PfaffianFunction::y_minus_cos(-d, d), "example=cos".into())
            }
            ChainExample::ExpIntegral => {
                let dom = Rect::new(-1.0, -1.0, 2.0, 1.0);
                let chain = PfaffianChain::new(vec![ChainLink::exp_of_poly(MultiPoly::var(0, 2), 1)], dom);
                let h = PfaffianFunction::y_minus(chain, MultiPoly::var(2, 3));
                (extend_with_integral(&h, 0.0)?, "example=exp-integral".into())
            }
        },
    };
    let report = verify_chain(&pf.chain, a.samples, a.tol, seed)?;
    let (order, (deg_chain, deg_g)) = order_and_degree(&pf);
    let p = format!("{src} samples={} tol={}", a.samples, a.tol);
    let mut text = header("chains", seed, &p);
    text.push_str("link,kind,max_err_x,max_err_y\n");
    for (i, l) in report.links.iter().enumerate() {
        let _ = writeln!(text, "{i},{},{:.3e},{:.3e}", l.kind, l.max_err_x, l.max_err_y);
    }
    let _ = writeln!(
        text,
        "# order={order} degree=({deg_chain},{deg_g}) max_err={:.3e}\n{}",
        report.max_err(),
        if report.passed { "PASS" } else { "FAIL" }
    );
    Ok(Output {
        text,
        ok: report.passed,
    })
}

fn sweep(a: &SweepArgs, seed: u64) -> pfaffinc::Result<Output> {
    let SweepFamily::Grid = a.family;
    let rows = sweep_grid(&a.sizes, a.tol)?;
    let sizes: Vec<String> = a.sizes.iter().map(|s| s.to_string()).collect();
    let p = format!("family=grid sizes={} tol={}", sizes.join(";"), a.tol);
    let mut text = header("sweep", seed, &p);
    text.push_str("N,a,b,m,n,I\n");
    for r in &rows {
        let _ = writeln!(text, "{},{},{},{},{},{}", r.size, r.a, r.b, r.m, r.n, r.incidences);
    }
    if a.fit_exponent {
        let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.size as f64, r.incidences as f64)).collect();
        let _ = writeln!(text, "# slope={:.4}", fit_slope(&pts)?);
    }
    Ok(Output { text, ok: true })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Generate(a) => generate(a, cli.seed),
        Cmd::Intersect(a) => intersect(a, cli.seed),
        Cmd::Cutting(a) => cutting(a, cli.seed),
        Cmd::Count(a) => count(a, cli.seed),
        Cmd::VerifyBound(a) => verify(a, cli.seed),
        Cmd::Duality(a) => duality(a, cli.seed),
        Cmd::Chains(a) => chains(a, cli.seed),
        Cmd::Sweep(a) => sweep(a, cli.seed),
    };
    match res {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &out.text),
                None => {
                    print!("{}", out.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
