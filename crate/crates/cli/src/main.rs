mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use g2t_core::characterize::{characterize_two_form, distribution_from_ode, fmt_point, growth_vector, recover_distribution, symbol_algebra_check};
use g2t_core::flat_model::build_flat_model_at;
use g2t_core::io::{default_samples, parse_document, parse_samples, Document};
use g2t_core::killing::*;
use g2t_core::lie::three_form_phi;
use g2t_core::suite::{curvature_checks, homology_checks, lie_checks, Check};
use g2t_core::tensor::{multi_indices, Geometry, TensorField, Variance};
use g2t_core::CoreError;
use g2t_exact::{parse_expr_with, AlgScalar, Rat, JET_NAMES};

use report::{Format, Report};

#[derive(Parser)]
#[command(name = "g2t", version, about = "Exact checks for (2,3,5) distributions, their conformal structures and split G2")]
struct Cli {
    /// File of sample points, one per line with five rationals.
    #[arg(long, global = true)]
    samples: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the split g2 and Kostant homology suites.
    VerifyAlgebra {
        #[arg(long)]
        skip_homology: bool,
        /// Perturb the 3-form before checking (negative test).
        #[arg(long, hide = true)]
        corrupt_phi: bool,
    },
    /// Curvature summaries and identity checks for a metric file.
    CheckMetric { metric: PathBuf },
    /// Decomposability, normality and genericity of a 2-form, with the recovered distribution.
    Characterize {
        metric: PathBuf,
        form: PathBuf,
        /// Tensor to use when the form file holds several.
        #[arg(long)]
        name: Option<String>,
    },
    /// Split conformal Killing fields into a symmetry plus an Einstein-scale part.
    Decompose {
        metric: PathBuf,
        form: PathBuf,
        #[arg(long)]
        name: Option<String>,
        /// File of contravariant vector fields to decompose.
        #[arg(long)]
        field: Option<PathBuf>,
        /// Generate and split the polynomial conformal Killing basis.
        #[arg(long)]
        flat_basis: bool,
        /// Degree bound for polynomial solution spaces.
        #[arg(long, default_value_t = 2)]
        degree: u32,
    },
    /// Growth vector of the Monge distribution of z' = F(x, y, p, q, z) with p = y', q = y''.
    Distribution {
        #[arg(long = "rhs", allow_hyphen_values = true)]
        rhs: String,
    },
    /// Build the flat-model bundle, optionally writing or comparing its asset files.
    FlatModel {
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, conflicts_with = "out")]
        compare: Option<PathBuf>,
    },
}

enum Failure {
    Input(String),
    Check(String),
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Check(m) => Failure::Check(m),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Document, Failure> {
    parse_document(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_metric(path: &Path) -> Result<Geometry, Failure> {
    let m = load(path)?.metric.ok_or_else(|| Failure::Input(format!("{}: no [metric] section", path.display())))?;
    Ok(Geometry::new(m))
}

fn load_form(path: &Path, name: Option<&str>) -> Result<TensorField, Failure> {
    let mut doc = load(path)?;
    let t = match name {
        Some(n) => doc.tensors.remove(n).ok_or_else(|| Failure::Input(format!("{}: no tensor `{n}`", path.display())))?,
        None if doc.tensors.len() == 1 => doc.tensors.into_values().next().expect("one tensor"),
        None => return Err(Failure::Input(format!("{}: expected exactly one tensor, use --name", path.display()))),
    };
    if t.variance() != [Variance::Co, Variance::Co] || !t.is_antisymmetric() {
        return Err(Failure::Input(format!("{}: form must be an antisymmetric covariant 2-tensor", path.display())));
    }
    Ok(t)
}

fn load_samples(path: Option<&Path>) -> Result<Vec<Vec<Rat>>, Failure> {
    match path {
        None => Ok(default_samples()),
        Some(p) => parse_samples(&read(p)?).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
    }
}

/// "[i j] = expr" for the first nonzero component, 1-based.
fn first_nonzero(t: &TensorField) -> Option<String> {
    multi_indices(t.rank()).find(|i| !t.get(i).is_zero()).map(|i| {
        let idx: Vec<String> = i.iter().map(|x| (x + 1).to_string()).collect();
        format!("[{}] = {}", idx.join(" "), t.get(&i))
    })
}

fn fmt_vector(t: &TensorField) -> String {
    let parts: Vec<String> = t.comps().iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn list_samples(r: &mut Report, samples: &[Vec<Rat>]) {
    for (i, p) in samples.iter().enumerate() {
        r.value(&format!("sample {}", i + 1), fmt_point(p));
    }
}

fn nonzero_count(t: &TensorField) -> usize {
    t.comps().iter().filter(|c| !c.is_zero()).count()
}

fn verify_algebra(r: &mut Report, skip_homology: bool, corrupt: bool) -> Result<(), Failure> {
    let mut phi = three_form_phi();
    if corrupt {
        phi.add_term(0, 1, 2, &AlgScalar::one());
    }
    r.section("lie algebra");
    r.checks(lie_checks(&phi));
    if !skip_homology {
        r.section("kostant homology");
        r.checks(homology_checks()?);
    }
    Ok(())
}

fn check_metric(r: &mut Report, metric: &Path, samples: &[Vec<Rat>]) -> Result<(), Failure> {
    let geo = load_metric(metric)?;
    let curv = geo.curvature();
    r.section("curvature");
    r.value("J", &curv.j);
    r.value("nonzero components of P", nonzero_count(&curv.schouten));
    r.value("nonzero components of C", nonzero_count(&curv.weyl));
    r.value("nonzero components of A", nonzero_count(&curv.cotton));
    r.section("identities");
    let (checks, ids) = curvature_checks(&geo, &curv);
    r.checks(checks);
    r.value("div C = 3A", ids.div_weyl_3a);
    r.section("samples");
    list_samples(r, samples);
    for (i, p) in samples.iter().enumerate() {
        match geo.metric.signature_at(p) {
            Ok((pos, neg)) => r.value(&format!("signature at sample {}", i + 1), format!("({pos},{neg})")),
            Err(e) => r.check(Check::new(&format!("nondegenerate at sample {}", i + 1), false, e.to_string())),
        }
    }
    Ok(())
}

fn characterize(r: &mut Report, metric: &Path, form: &Path, name: Option<&str>, samples: &[Vec<Rat>]) -> Result<(), Failure> {
    let geo = load_metric(metric)?;
    let phi = load_form(form, name)?;
    let rep = characterize_two_form(&geo, &phi, samples)?;
    r.section("characterization");
    r.check(Check::new("decomposable", rep.decomposable, first_nonzero(&rep.witness).map(|s| format!("phi∧phi {s}")).unwrap_or_default()));
    let excerpt = if rep.normal {
        String::new()
    } else {
        let theta = g2t_core::tractor::bgg_theta0(2, &phi.clone().with_weight(3), &geo, &geo.curvature())?;
        let labelled = [("Theta0", &theta), ("rho", &rep.residuals[0]), ("phi", &rep.residuals[1]), ("mu", &rep.residuals[2])];
        labelled.iter().find_map(|(l, t)| first_nonzero(t).map(|s| format!("{l} residual {s}"))).unwrap_or_default()
    };
    r.check(Check::new("normal", rep.normal, excerpt));
    r.check(Check::new("generic", rep.generic, format!("phi∧mu∧rho = {}", rep.generic_form)));
    r.check(Check::new("consistent at samples", rep.samples_consistent, ""));
    let opt = |x: &Option<AlgScalar>| x.as_ref().map_or_else(|| "none".to_string(), |v| v.to_string());
    r.value("mu over L0 mu slot", opt(&rep.mu_factor));
    r.value("rho over L0 rho slot", opt(&rep.rho_factor));
    r.value("verdict", if rep.verdict { "yes" } else { "no" });
    if !(rep.decomposable && rep.generic) {
        return Ok(());
    }
    r.section("distribution");
    match recover_distribution(&geo, &phi, samples) {
        Ok(d) => {
            for (i, f) in d.frame.iter().enumerate() {
                r.value(&format!("frame{}", i + 1), fmt_vector(f));
            }
            list_samples(r, samples);
            for (i, p) in samples.iter().enumerate() {
                let gv = growth_vector(&d.frame, p)?;
                r.check(Check::new(&format!("growth at sample {}", i + 1), gv == (2, 3, 5), format!("{gv:?}")));
            }
        }
        Err(e) => r.check(Check::new("recover distribution", false, e.to_string())),
    }
    Ok(())
}

fn decompose(
    r: &mut Report,
    metric: &Path,
    form: &Path,
    name: Option<&str>,
    field: Option<&Path>,
    flat_basis: bool,
    degree: u32,
    samples: &[Vec<Rat>],
) -> Result<(), Failure> {
    if field.is_none() && !flat_basis {
        return Err(Failure::Input("give --field FILE or --flat-basis".into()));
    }
    let geo = load_metric(metric)?;
    let curv = geo.curvature();
    let phi = load_form(form, name)?.with_weight(3);
    let fields = match field {
        Some(p) => {
            let doc = load(p)?;
            let fs: Vec<(String, TensorField)> = doc.tensors.into_iter().filter(|(_, t)| t.variance() == [Variance::Contra]).collect();
            if fs.is_empty() {
                return Err(Failure::Input(format!("{}: no vector fields", p.display())));
            }
            fs
        }
        None => Vec::new(),
    };
    r.section("setup");
    let rep = characterize_two_form(&geo, &phi, samples)?;
    r.check(Check::new("characterization verdict", rep.verdict, ""));
    if !rep.verdict {
        return Ok(());
    }
    let frame = recover_distribution(&geo, &phi, samples)?.frame;
    let aes = solve_polynomial_solutions(SolutionKind::AlmostEinstein, &geo, degree)?;
    let scales: Vec<_> = aes.basis.iter().map(|s| s.scalar_value().clone()).collect();
    let c = match calibrate_constant(&geo, &phi, &scales) {
        Ok(c) => c,
        Err(e) => {
            r.check(Check::new("calibration", false, e.to_string()));
            return Ok(());
        }
    };
    r.value("almost Einstein scales", aes.dim());
    r.value("c", &c);
    if flat_basis {
        let ckf = solve_polynomial_solutions(SolutionKind::ConformalKilling, &geo, degree)?;
        let kernel = einstein_part_kernel(&ckf.basis, &phi, &geo)?;
        r.section("flat basis");
        r.value("conformal Killing", ckf.dim());
        r.value("symmetries", kernel.len());
        r.value("scales", aes.dim());
        r.check(Check::new(
            "direct sum",
            kernel.len() + aes.dim() == ckf.dim(),
            format!("{} = {} + {}", ckf.dim(), kernel.len(), aes.dim()),
        ));
        let bad = kernel.iter().filter(|x| !symmetry_residual(x, &frame, samples).is_ok_and(|s| s.is_symmetry())).count();
        r.check(Check::new("kernel fields preserve D", bad == 0, format!("{} of {}", kernel.len() - bad, kernel.len())));
    }
    for (n, xi) in &fields {
        r.section(&format!("field {n}"));
        match decompose_killing(xi, &phi, &geo, &curv, &c) {
            Ok(d) => {
                r.value("symmetry part", fmt_vector(&d.symmetry));
                r.value("scale", &d.scale);
                let sym = symmetry_residual(&d.symmetry, &frame, samples)?;
                r.check(Check::new("symmetry part preserves D", sym.is_symmetry(), ""));
                let e = einstein_residual(&d.scale, &geo, &curv)?;
                r.check(Check::new("scale is almost Einstein", e.is_zero(), first_nonzero(&e).unwrap_or_default()));
            }
            Err(CoreError::Check(m)) => r.check(Check::new("conformal Killing", false, m)),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(())
}

fn distribution(r: &mut Report, rhs: &str, samples: &[Vec<Rat>]) -> Result<(), Failure> {
    let f = parse_expr_with(rhs, &JET_NAMES).map_err(|e| Failure::Input(format!("F: {e}")))?;
    let d = distribution_from_ode(&f);
    r.section("distribution");
    r.value("F", f.render_with(&JET_NAMES));
    r.value("F_qq", f.diff(3).diff(3).render_with(&JET_NAMES));
    list_samples(r, samples);
    for (i, p) in samples.iter().enumerate() {
        let gv = growth_vector(&d.frame, p)?;
        r.check(Check::new(&format!("growth at sample {}", i + 1), gv == (2, 3, 5), format!("{gv:?}")));
        let s = symbol_algebra_check(&d.frame, p)?;
        r.check(Check::new(
            &format!("symbol algebra at sample {}", i + 1),
            s.first_iso && s.second_iso,
            format!("ranks {} {}", s.first_rank, s.second_rank),
        ));
    }
    Ok(())
}

fn flat_model(r: &mut Report, out: Option<&Path>, compare: Option<&Path>, samples: &[Vec<Rat>]) -> Result<(), Failure> {
    let b = build_flat_model_at(samples)?;
    r.section("flat model");
    for line in b.manifest().lines() {
        if let Some((k, v)) = line.split_once(" = ") {
            r.value(k, v);
        }
    }
    if let Some(dir) = out {
        b.write_assets(dir)?;
        r.value("written to", dir.display());
    }
    if let Some(dir) = compare {
        for (name, body) in b.asset_files() {
            let same = std::fs::read_to_string(dir.join(name)).ok().as_deref() == Some(body.as_str());
            r.check(Check::new(&format!("{name} matches"), same, ""));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut r = Report::default();
    let samples = load_samples(cli.samples.as_deref());
    let result = samples.and_then(|s| match &cli.command {
        Command::VerifyAlgebra { skip_homology, corrupt_phi } => verify_algebra(&mut r, *skip_homology, *corrupt_phi),
        Command::CheckMetric { metric } => check_metric(&mut r, metric, &s),
        Command::Characterize { metric, form, name } => characterize(&mut r, metric, form, name.as_deref(), &s),
        Command::Decompose { metric, form, name, field, flat_basis, degree } => {
            decompose(&mut r, metric, form, name.as_deref(), field.as_deref(), *flat_basis, *degree, &s)
        }
        Command::Distribution { rhs } => distribution(&mut r, rhs, &s),
        Command::FlatModel { out, compare } => flat_model(&mut r, out.as_deref(), compare.as_deref(), &s),
    });
    match result {
        Ok(()) => {
            print!("{}", r.render(cli.format));
            if r.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Check(m)) => {
            print!("{}", r.render(cli.format));
            eprintln!("g2t: check failed: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("g2t: {m}");
            ExitCode::from(2)
        }
    }
}
