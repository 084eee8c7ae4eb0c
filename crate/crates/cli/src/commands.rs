use std::fmt::{self, Write as _};
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use sphcodes::binary::{spoil1_constant, spoil2_binary, spoil3_binary, BinaryCode};
use sphcodes::bounds::{figure_curves, BoundCurve, CurveKind, Figure};
use sphcodes::emit::{curves_csv, curves_svg, theta_csv, Axis};
use sphcodes::geometry::LineThroughOrigin;
use sphcodes::numfmt::g12;
use sphcodes::packing::{
    cap_area, code_density, density_bounds, kissing_configuration, max_code_density,
    packing_density, shell_code, sphere_area, MEstimate, PeriodicPacking,
};
use sphcodes::spherical::{
    composite_spoil_down, composite_spoil_up, numerical_spoil, spoil2_best, spoil3_balanced,
    PipelineOutcome, ProjectionSign, SpoilTemplate, SphericalCode,
};
use sphcodes::{atlas, embed_binary, random, verify, Lattice};

use crate::{
    AtlasArgs, AxisArg, BoundsArgs, Command, CurveName, DensityArgs, EmbedArgs, FiguresArgs, Format,
    KissingArgs, PackingSource, ShellArgs, SignArg, SpoilArgs, SpoilOp, ThetaArgs, VerifyArgs, Which,
};

/// Invalid combination of otherwise well-formed arguments (exit status 2).
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(UsageError(msg.into()).into())
}

pub fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Bounds(a) => bounds(a),
        Command::Figures(a) => figures(a),
        Command::Embed(a) => embed(a),
        Command::Spoil(a) => spoil(a),
        Command::Atlas(a) => atlas_cmd(a),
        Command::Theta(a) => theta(a),
        Command::Kissing(a) => kissing(a),
        Command::Shell(a) => shell(a),
        Command::Density(a) => density(a),
        Command::Verify(a) => return verify_cmd(a),
    }?;
    Ok(ExitCode::SUCCESS)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(()),
            }
        }
    }
}

fn context(path: &Path) -> impl Fn(sphcodes::Error) -> anyhow::Error + '_ {
    move |e| anyhow::Error::new(e).context(path.display().to_string())
}

/// `a..b` (inclusive), `a,b,c` or a single value.
fn parse_list(spec: &str) -> Result<Vec<usize>> {
    let bad = || UsageError(format!("invalid list {spec:?} (expected a..b, a,b,c or a number)"));
    if let Some((a, b)) = spec.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad().into());
        }
        return Ok((a..=b).collect());
    }
    spec.split(',')
        .map(|t| t.trim().parse().map_err(|_| bad().into()))
        .collect()
}

fn parse_vector(spec: &str) -> Result<Vec<f64>> {
    spec.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| UsageError(format!("invalid vector {spec:?}")).into())
        })
        .collect()
}

fn bounds(a: BoundsArgs) -> Result<()> {
    if a.phi.is_empty() && a.cos_phi.is_empty() {
        return usage("give at least one --phi or --cos");
    }
    let kind = match a.curve {
        CurveName::Kl => CurveKind::Kl,
        CurveName::Rankin => CurveKind::Rankin { n: a.n },
        CurveName::RankinSpoiled => CurveKind::SpoiledRankin { n: a.n, m: a.m },
    };
    let mut phis = a.phi.clone();
    for &c in &a.cos_phi {
        if !(-1.0..=1.0).contains(&c) {
            anyhow::bail!(sphcodes::Error::OutOfRange {
                name: "cos_phi",
                value: c,
                range: "[-1, 1]"
            });
        }
        phis.push(c.acos());
    }
    let curve = BoundCurve::sample(kind, &phis)?;
    emit(&a.out, &curves_csv(&[curve])?)
}

fn figures(a: FiguresArgs) -> Result<()> {
    let which = match a.which {
        Which::Fig1 => Figure::Fig1 {
            ns: parse_list(a.n.as_deref().unwrap_or("1..10"))?,
        },
        Which::Fig2 => Figure::Fig2 { phi_min: a.phi_min },
        Which::Fig3 => {
            let ns = parse_list(a.n.as_deref().unwrap_or("2"))?;
            let [n] = ns[..] else {
                return usage("fig3 takes a single --n");
            };
            Figure::Fig3 {
                n,
                ms: parse_list(a.m.as_deref().unwrap_or("1..5"))?,
            }
        }
    };
    let format = a.format.unwrap_or_else(|| match &a.out {
        Some(p) if p.extension().is_some_and(|e| e.eq_ignore_ascii_case("svg")) => Format::Svg,
        _ => Format::Csv,
    });
    let curves = figure_curves(&which, a.samples)?;
    let text = match format {
        Format::Csv => curves_csv(&curves)?,
        Format::Svg => curves_svg(
            &curves,
            match a.axis {
                AxisArg::Cos => Axis::CosPhi,
                AxisArg::Phi => Axis::Phi,
            },
        )?,
    };
    emit(&a.out, &text)
}

fn embed(a: EmbedArgs) -> Result<()> {
    let code = BinaryCode::parse(&read(&a.input)?).map_err(context(&a.input))?;
    let p = code.parameters();
    let x = embed_binary(&code)?;
    eprintln!(
        "n={} card={} d={} R={} cos_phi={}",
        p.n,
        code.card(),
        p.d,
        g12(x.rate()),
        g12(x.cos_phi()?)
    );
    emit(&a.out, &x.to_text())
}

fn load_code(path: &Path, normalize: bool) -> Result<SphericalCode> {
    Ok(SphericalCode::parse(&read(path)?, normalize).map_err(context(path))?)
}

fn report(out: &PipelineOutcome) {
    for s in &out.steps {
        log::info!("{s}");
    }
    eprintln!("quantity,target,achieved");
    eprintln!("n,{},{}", out.target.n, out.achieved.n);
    eprintln!("k,{},{}", g12(out.target.k), g12(out.achieved.k));
    eprintln!("cos_phi,{},{}", g12(out.target.cos_phi), g12(out.achieved.cos_phi));
    if let Some(l) = out.lambda {
        eprintln!("lambda,{},", g12(l));
    }
    if let Some(u) = out.u {
        eprintln!("u,{},", g12(u));
    }
}

fn spoil(a: SpoilArgs) -> Result<()> {
    let binary_op = matches!(a.op, SpoilOp::Insert | SpoilOp::Delete | SpoilOp::Restrict);
    if binary_op != a.binary {
        return usage("insert/delete/restrict need --binary; the other operations need a spherical code");
    }
    if a.binary {
        let code = BinaryCode::parse(&read(&a.input)?).map_err(context(&a.input))?;
        let Some(pos) = a.pos.filter(|&p| p >= 1) else {
            return usage("--pos (1-based) is required for binary operations");
        };
        let bit = match a.bit {
            None => None,
            Some(0) => Some(false),
            Some(1) => Some(true),
            Some(_) => return usage("--bit must be 0 or 1"),
        };
        let out = match a.op {
            SpoilOp::Insert => {
                let Some(b) = bit else {
                    return usage("insert needs --bit");
                };
                spoil1_constant(&code, pos - 1, b)?
            }
            SpoilOp::Delete => spoil2_binary(&code, pos - 1)?,
            _ => spoil3_binary(&code, pos - 1, bit)?,
        };
        let p = out.parameters();
        eprintln!("n={} k={} d={} R={} delta={}", p.n, g12(p.k), p.d, g12(p.rate), g12(p.delta));
        return emit(&a.out, &out.to_text());
    }
    let code = load_code(&a.input, a.normalize)?;
    let (result, outcome) = match a.op {
        SpoilOp::Lift => {
            let Some(lambda) = a.lambda else {
                return usage("lift needs --lambda");
            };
            let o = numerical_spoil(&code, &SpoilTemplate::Lift { lambda }, a.seed)?;
            (o.code.clone(), Some(o))
        }
        SpoilOp::Project => match &a.line {
            Some(spec) => {
                let line = LineThroughOrigin::from_vector(parse_vector(spec)?)?;
                let sign = match a.sign {
                    SignArg::Opposite => ProjectionSign::Opposite,
                    SignArg::Same => ProjectionSign::SameSide,
                };
                let o = numerical_spoil(&code, &SpoilTemplate::Project { line, sign }, a.seed)?;
                (o.code.clone(), Some(o))
            }
            None => {
                let o = spoil2_best(&code, &mut random::rng(a.seed))?;
                eprintln!("xi={} u={} merged={}", g12(o.xi), g12(o.u), o.merged);
                (o.code, None)
            }
        },
        SpoilOp::Halve => {
            let (c, b) = spoil3_balanced(&code, a.seed)?;
            eprintln!("kept {} of {} points", b.count, code.card());
            (c, None)
        }
        SpoilOp::Reduce => {
            let Some(k) = a.a else {
                return usage("reduce needs --a");
            };
            let o = numerical_spoil(&code, &SpoilTemplate::Reduce { a: k }, a.seed)?;
            (o.code.clone(), Some(o))
        }
        SpoilOp::Down => {
            let o = composite_spoil_down(&code, a.phi_c, a.seed)?;
            (o.code.clone(), Some(o))
        }
        SpoilOp::Up => {
            let o = composite_spoil_up(&code)?;
            (o.code.clone(), Some(o))
        }
        SpoilOp::Insert | SpoilOp::Delete | SpoilOp::Restrict => unreachable!(),
    };
    match outcome {
        Some(o) => report(&o),
        None => {
            if let Ok(c) = result.cos_phi() {
                eprintln!("n={} card={} cos_phi={}", result.dim(), result.card(), g12(c));
            }
        }
    }
    emit(&a.out, &result.to_text())
}

fn atlas_cmd(a: AtlasArgs) -> Result<()> {
    let cfg = atlas::AtlasConfig::new(a.phi_c, a.budget, a.seed)?;
    let seeds = atlas::default_seeds()?;
    let built = atlas::atlas_build(&seeds, cfg)?;
    eprintln!(
        "observed={} admitted={} failed_ops={} a_c={} alpha(phi_c)={}",
        built.observed.len(),
        built.admitted_count(),
        built.failed_ops,
        cfg.cutoff.a_c,
        g12(built.envelope[0])
    );
    if let Some(spec) = &a.report {
        let v = parse_vector(spec)?;
        let [rate, cos] = v[..] else {
            return usage("--report expects R,cos_phi");
        };
        let r = atlas::multiplicity_report(&built, rate, cos, a.tol);
        let members: Vec<String> = r.members.iter().map(|(n, c)| format!("({n},{c})")).collect();
        eprintln!("multiplicity count={} growing={} members={}", r.count, r.growing, members.join(" "));
    }
    emit(&a.out, &built.snapshot())
}

fn load_packing(src: &PackingSource) -> Result<PeriodicPacking> {
    match (&src.lattice, &src.named) {
        (Some(p), None) => Ok(PeriodicPacking::parse(&read(p)?).map_err(context(p))?),
        (None, Some(name)) => {
            let l = Lattice::named(name).map_err(|e| UsageError(e.to_string()))?;
            Ok(PeriodicPacking::from_lattice(l)?)
        }
        _ => usage("give exactly one of --lattice or --named"),
    }
}

fn theta(a: ThetaArgs) -> Result<()> {
    if !(a.m_max >= 0.0) {
        return usage("--m-max must be non-negative");
    }
    let p = load_packing(&a.source)?;
    let t = if p.translates().len() == 1 && p.translates()[0].iter().all(|&x| x == 0.0) {
        p.lattice().theta(a.m_max, a.enum_budget)?
    } else {
        p.theta(a.m_max, a.enum_budget)?
    };
    emit(&a.out, &theta_csv(&t))
}

fn kissing(a: KissingArgs) -> Result<()> {
    let p = load_packing(&a.source)?;
    let k = kissing_configuration(&p, a.center)?;
    eprintln!("n={} card={} phi={}", k.dim(), k.card(), g12(k.phi()?));
    emit(&a.out, &k.to_text())
}

fn shell(a: ShellArgs) -> Result<()> {
    let p = load_packing(&a.source)?;
    let x0 = match &a.x0 {
        Some(s) => parse_vector(s)?,
        None => vec![0.0; p.dim()],
    };
    let s = shell_code(&p, &x0, a.u)?;
    eprintln!(
        "n={} card={} phi={} guaranteed={}",
        s.code.dim(),
        s.code.card(),
        g12(s.min_angle),
        g12(s.guaranteed_angle)
    );
    emit(&a.out, &s.code.to_text())
}

fn density(a: DensityArgs) -> Result<()> {
    let mut t = String::from("quantity,value\n");
    let mut row = |k: &str, v: String| {
        let _ = writeln!(t, "{k},{v}");
    };
    if let Some(path) = &a.code {
        let x = load_code(path, a.normalize)?;
        row("n", x.dim().to_string());
        row("card", x.card().to_string());
        row("phi", g12(x.phi()?));
        row("code_density", g12(code_density(&x)?));
    } else if let Some(n) = a.n {
        let phi = a.phi.expect("clap enforces --phi");
        let pick = |given: Option<f64>, dim: usize| -> (MEstimate, &'static str) {
            match given {
                Some(m) => (MEstimate::Given(m), "given"),
                None => {
                    let e = MEstimate::auto(dim, phi);
                    (e, e.label())
                }
            }
        };
        let (m_same, l_same) = pick(a.m, n);
        let (m_next, l_next) = pick(a.m_next, n + 1);
        let v_same = m_same.value(n, phi)?;
        let v_next = m_next.value(n + 1, phi)?;
        row("n", n.to_string());
        row("phi", g12(phi));
        row("sphere_area", g12(sphere_area(n)?));
        row("cap_area", g12(cap_area(n, phi)?));
        row(&format!("M(n;{l_same})"), g12(v_same));
        row(&format!("M(n+1;{l_next})"), g12(v_next));
        row("max_code_density", g12(max_code_density(n, phi, MEstimate::Given(v_same))?));
        let b = density_bounds(n, phi, v_next, v_same)?;
        row("bound_general", g12(b.general));
        match b.large_angle {
            Some(v) => row("bound_large_angle", g12(v)),
            None => row("bound_large_angle", "n/a (phi < pi/3)".into()),
        }
    } else {
        let p = load_packing(&a.source).map_err(|e| {
            if e.downcast_ref::<UsageError>().is_some() {
                UsageError("give --code, --n/--phi, --lattice or --named".into()).into()
            } else {
                e
            }
        })?;
        row("n", p.dim().to_string());
        row("translates", p.translates().len().to_string());
        row("radius", g12(p.radius()));
        row("packing_density", g12(packing_density(&p)?));
    }
    emit(&None, &t)
}

fn verify_cmd(a: VerifyArgs) -> Result<ExitCode> {
    let suites = match verify::Suite::parse(&a.suite) {
        Ok(s) => s,
        Err(e) => return usage(e.to_string()),
    };
    let mut failed = 0;
    let mut total = 0;
    let mut out = String::new();
    for s in suites {
        for c in verify::run(s, a.seed) {
            total += 1;
            if !c.passed {
                failed += 1;
            }
            writeln!(
                out,
                "{} {}/{}: {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.suite,
                c.name,
                c.detail
            )?;
        }
    }
    writeln!(out, "{} of {total} checks passed", total - failed)?;
    emit(&None, &out)?;
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
