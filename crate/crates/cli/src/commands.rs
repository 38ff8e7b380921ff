use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use ballgap::approx::{
    build_qn_with, c_hat, classify_facets, facet_gaps, greedy_net, hausdorff_gap, improve_inscribed,
    merged_hull, net_hausdorff_bound, lower_bound_audit, upper_bound_audit, AuditReport, Classification,
    Thresholds, C_HAT_LOWER, C_HAT_UPPER,
};
use ballgap::approx::metrics::facet_samples;
use ballgap::ball::{
    ball_volume, ball_volume_upper, mc_orthant_moment, orthant_moment_cross, orthant_moment_power,
    orthant_moment_square, sphere_surface, MomentKind,
};
use ballgap::hull::convex_hull;
use ballgap::mc::derive_seed;
use ballgap::{EffectiveCount, McEstimate, NetConfig, NetTarget, Polytope};
use serde::Serialize;

use crate::output::{write_json, write_rows};
use crate::range::parse_dim_range;
use crate::{BuildArgs, Command, Format, McArgs, OutputArgs, Verdict, MAX_DIM};

pub fn run(cmd: Command) -> Result<Verdict> {
    match cmd {
        Command::Volumes { dim, out } => volumes(&dim, &out),
        Command::Moments { dim, k, mc, out } => moments(dim, k, &mc, &out),
        Command::Net { build, theta, seed, format, out } => net(&build, theta, seed, format, out.as_deref()),
        Command::Audit { polytope, build, improve, effective_n, mc, out } => {
            audit(polytope.as_deref(), &build, improve, effective_n, &mc, &out)
        }
        Command::Sweep { dim, n_list, pool_size, mc, out } => sweep(dim, &n_list, pool_size, &mc, &out),
    }
}

fn check_dim(d: usize, min: usize) -> Result<()> {
    ensure!((min..=MAX_DIM).contains(&d), "dimension must be in [{min}, {MAX_DIM}], got {d}");
    Ok(())
}

#[derive(Serialize)]
struct VolumeRow {
    d: usize,
    ball_volume: f64,
    sphere_surface: f64,
    volume_upper_bound: f64,
    bound_holds: bool,
}

fn volumes(dim: &str, out: &OutputArgs) -> Result<Verdict> {
    let dims = parse_dim_range(dim)?;
    for &d in &dims {
        check_dim(d, 1)?;
    }
    let rows: Vec<VolumeRow> = dims
        .iter()
        .map(|&d| {
            let v = ball_volume(d);
            let upper = ball_volume_upper(d);
            VolumeRow { d, ball_volume: v, sphere_surface: sphere_surface(d), volume_upper_bound: upper, bound_holds: v <= upper }
        })
        .collect();
    write_rows(&rows, out.format, out.out.as_deref())?;
    Ok(if rows.iter().all(|r| r.bound_holds) { Verdict::Pass } else { Verdict::Fail })
}

#[derive(Serialize)]
struct MomentRow {
    d: usize,
    moment: String,
    closed_form: f64,
    mc_value: Option<f64>,
    stderr: Option<f64>,
    z_score: Option<f64>,
}

/// z-score above which a moment row counts as a failed check.
const MOMENT_Z_LIMIT: f64 = 3.0;
const IDENTITY_TOL: f64 = 1e-12;

fn moments(d: usize, k: u32, mc: &McArgs, out: &OutputArgs) -> Result<Verdict> {
    check_dim(d, 1)?;
    ensure!(k <= 32, "k must be at most 32");
    let mut kinds = vec![MomentKind::Power(k)];
    if k == 2 {
        kinds.push(MomentKind::Square);
        if d >= 2 {
            kinds.push(MomentKind::Cross(0, 1));
        }
    }
    let mut rows = Vec::new();
    for (i, kind) in kinds.into_iter().enumerate() {
        let exact = kind.closed_form(d)?;
        let est = mc_orthant_moment(d, kind, mc.samples, derive_seed(mc.seed, i as u64))?;
        let moment = match kind {
            MomentKind::Power(k) => format!("power_{k}"),
            MomentKind::Square => "square".into(),
            MomentKind::Cross(..) => "cross".into(),
        };
        rows.push(MomentRow {
            d,
            moment,
            closed_form: exact,
            mc_value: Some(est.value),
            stderr: Some(est.stderr),
            z_score: Some(est.z_against(exact)),
        });
    }
    if k == 2 {
        let p = orthant_moment_power(d, 2)?;
        let cross = if d >= 2 { (d * d - d) as f64 * orthant_moment_cross(d)? } else { 0.0 };
        let residual = (p - orthant_moment_square(d)? - cross).abs() / p;
        rows.push(MomentRow { d, moment: "identity_residual".into(), closed_form: residual, mc_value: None, stderr: None, z_score: None });
    }
    write_rows(&rows, out.format, out.out.as_deref())?;
    let ok = rows.iter().all(|r| match r.z_score {
        Some(z) => z <= MOMENT_Z_LIMIT,
        None => r.closed_form <= IDENTITY_TOL,
    });
    Ok(if ok { Verdict::Pass } else { Verdict::Fail })
}

#[derive(Serialize)]
struct NetRow {
    d: usize,
    n_actual: usize,
    facets: usize,
    theta: f64,
    covering_radius: f64,
    hausdorff: f64,
    hausdorff_bound: f64,
    half_theta_sq: f64,
    pass: bool,
}

fn net_config(build: &BuildArgs, theta: Option<f64>, seed: u64) -> Result<NetConfig> {
    let d = build.dim.context("--dim is required")?;
    check_dim(d, 2)?;
    let target = match (build.n, theta) {
        (Some(n), None) => NetTarget::Count(n),
        (None, Some(t)) => NetTarget::Separation(t),
        (None, None) => bail!("one of --n or --theta is required"),
        (Some(_), Some(_)) => bail!("--n and --theta are mutually exclusive"),
    };
    Ok(NetConfig { dim: d, target, seed, pool_size: build.pool_size, seed_axes: false })
}

fn net(build: &BuildArgs, theta: Option<f64>, seed: u64, format: Format, out: Option<&Path>) -> Result<Verdict> {
    let cfg = net_config(build, theta, seed)?;
    let net = greedy_net(&cfg)?;
    let p = convex_hull(&net.points)?;
    if let Some(path) = out {
        std::fs::write(path, p.to_json()).with_context(|| format!("cannot write {}", path.display()))?;
    }
    let n = p.num_vertices();
    let h = hausdorff_gap(&p)?;
    let bound = net_hausdorff_bound(cfg.dim, n);
    let row = NetRow {
        d: cfg.dim,
        n_actual: n,
        facets: p.num_facets(),
        theta: net.separation,
        covering_radius: net.covering_radius,
        hausdorff: h,
        hausdorff_bound: bound,
        half_theta_sq: net.separation * net.separation / 2.0,
        pass: h <= bound,
    };
    let pass = row.pass;
    write_rows(&[row], format, None)?;
    Ok(if pass { Verdict::Pass } else { Verdict::Fail })
}

#[derive(Serialize)]
struct ClassSummary {
    thresholds: Thresholds,
    surface: f64,
    facets: usize,
    shallow_facets: usize,
    off_center_facets: usize,
    good_facets: usize,
    shallow_area: f64,
    off_center_area: f64,
    good_area: f64,
}

impl From<&Classification> for ClassSummary {
    fn from(c: &Classification) -> Self {
        let count = |f: fn(&ballgap::FacetClass) -> bool| c.classes.iter().filter(|x| f(x)).count();
        Self {
            thresholds: c.thresholds.clone(),
            surface: c.surface,
            facets: c.classes.len(),
            shallow_facets: count(|x| x.shallow),
            off_center_facets: count(|x| x.off_center),
            good_facets: count(|x| x.good),
            shallow_area: c.shallow_area,
            off_center_area: c.off_center_area,
            good_area: c.good_area,
        }
    }
}

#[derive(Serialize)]
struct AuditOutput {
    samples: u64,
    seed: u64,
    improve_rounds: usize,
    lower_bound: AuditReport,
    upper_bound: AuditReport,
    classification: ClassSummary,
}

#[derive(Serialize)]
struct CheckRow<'a> {
    report: &'a str,
    name: &'a str,
    lhs: f64,
    rhs: f64,
    relation: String,
    margin: f64,
    tolerance: f64,
    holds: bool,
    applicable: bool,
    pass: bool,
}

fn load_polytope(path: &Path) -> Result<Polytope> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Polytope::from_json(&text).with_context(|| format!("cannot parse polytope {}", path.display()))
}

fn audit(
    file: Option<&Path>,
    build: &BuildArgs,
    improve: usize,
    eff: EffectiveCount,
    mc: &McArgs,
    out: &OutputArgs,
) -> Result<Verdict> {
    let (mut p, n) = match file {
        Some(path) => {
            let p = load_polytope(path)?;
            check_dim(p.dim(), 2)?;
            let n = build.n.unwrap_or(p.num_vertices());
            (p, n)
        }
        None => {
            let cfg = net_config(build, None, mc.seed)?;
            let n = build.n.expect("checked by net_config");
            (build_qn_with(&cfg)?, n)
        }
    };
    if improve > 0 {
        let q = improve_inscribed(p.vertices(), improve, 0.1 / (n as f64).sqrt())?;
        p = merged_hull(&q, &p)?;
    }
    let t = lower_bound_audit(&p, n, eff, mc.samples, mc.seed)?;
    let u = upper_bound_audit(&p, n, mc.samples, derive_seed(mc.seed, 1))?;
    let c = classify_facets(&p, n, eff)?;
    if !t.meta.in_regime {
        eprintln!(
            "warning: n = {n} is below the lower-bound regime n >= {:.1}; its failed checks are not counted",
            t.meta.regime_threshold
        );
    }
    let fail = (t.meta.in_regime && !t.pass) || !u.pass;
    for r in [&t, &u] {
        for c in r.failures() {
            eprintln!("{}: {} failed ({} {} {}, margin {:e})", r.kind, c.name, c.lhs, c.relation, c.rhs, c.margin);
        }
    }
    match out.format {
        Format::Json => write_json(
            &AuditOutput {
                samples: mc.samples,
                seed: mc.seed,
                improve_rounds: improve,
                lower_bound: t,
                upper_bound: u,
                classification: ClassSummary::from(&c),
            },
            out.out.as_deref(),
        )?,
        Format::Csv => {
            let rows: Vec<CheckRow> = [&t, &u]
                .iter()
                .flat_map(|r| {
                    r.checks.iter().map(|c| CheckRow {
                        report: &r.kind,
                        name: &c.name,
                        lhs: c.lhs,
                        rhs: c.rhs,
                        relation: c.relation.to_string(),
                        margin: c.margin,
                        tolerance: c.tolerance,
                        holds: c.holds,
                        applicable: c.applicable,
                        pass: c.pass,
                    })
                })
                .collect();
            write_rows(&rows, Format::Csv, out.out.as_deref())?;
        }
    }
    Ok(if fail { Verdict::Fail } else { Verdict::Pass })
}

#[derive(Serialize)]
struct SweepRow {
    d: usize,
    n: usize,
    vertices: usize,
    facets: usize,
    facets_per_vertex: f64,
    gap: f64,
    stderr: f64,
    c_hat: f64,
    lower: f64,
    upper: f64,
    in_sandwich: bool,
    monotone: bool,
    pass: bool,
}

fn sweep(d: usize, ns: &[usize], pool_size: Option<usize>, mc: &McArgs, out: &OutputArgs) -> Result<Verdict> {
    check_dim(d, 2)?;
    ensure!(!ns.is_empty(), "--n-list is empty");
    let mut rows: Vec<SweepRow> = Vec::new();
    let mut prev: Option<(usize, McEstimate)> = None;
    for &n in ns {
        let cfg = NetConfig { dim: d, target: NetTarget::Count(n), seed: mc.seed, pool_size, seed_axes: false };
        let p = build_qn_with(&cfg)?;
        let gaps = facet_gaps(&p, facet_samples(&p, mc.samples), derive_seed(mc.seed, n as u64))?;
        let gap = McEstimate::sum(gaps);
        let ch = c_hat(gap.value, d, n);
        let in_sandwich = (C_HAT_LOWER..=C_HAT_UPPER).contains(&ch);
        let monotone = match prev {
            Some((m, g)) if n > m => gap.value <= g.value + 3.0 * gap.stderr.hypot(g.stderr),
            _ => true,
        };
        rows.push(SweepRow {
            d,
            n,
            vertices: p.num_vertices(),
            facets: p.num_facets(),
            facets_per_vertex: p.num_facets() as f64 / p.num_vertices() as f64,
            gap: gap.value,
            stderr: gap.stderr,
            c_hat: ch,
            lower: C_HAT_LOWER,
            upper: C_HAT_UPPER,
            in_sandwich,
            monotone,
            pass: in_sandwich && monotone,
        });
        prev = Some((n, gap));
    }
    write_rows(&rows, out.format, out.out.as_deref())?;
    Ok(if rows.iter().all(|r| r.pass) { Verdict::Pass } else { Verdict::Fail })
}
