use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use krein_bem::boundary_ops::{check_jump, DenseOperator, RobinCoupling};
use krein_bem::bvp::{solve_dirichlet, solve_robin, BvpSolution};
use krein_bem::config::{ComplexLiteral, ThetaSpec};
use krein_bem::geometry::{BoundaryMesh, DomainSpec, Point};
use krein_bem::kernels::{kernel_value, SpectralParameter};
use krein_bem::krein::krein_check;
use krein_bem::report::{format_f64, ComplexJson, Report};
use krein_bem::spectra::{
    dirichlet_eigenvalues, disk_oracle, distinct, robin_eigenvalues, spectrum_scan, OracleQuery,
    ScanOperator,
};
use krein_bem::steklov::{
    assemble_dtr, assemble_rtd, check_herglotz, check_inverse, check_symmetry, default_mode_cutoff,
};
use krein_bem::{Error, Result, C64};

use crate::{
    BvpArgs, BvpCommand, CheckCommand, Command, Common, CouplingArgs, HerglotzArgs, InverseArgs,
    JumpArgs, KernelArgs, KernelsCommand, KreinArgs, MapArgs, MapCommand, OracleArgs,
    OracleCommand, OracleKind, Problem, ScanArgs, SpectrumCommand,
};

/// Runs one command, prints its report and returns the pass flag.
pub fn dispatch(command: Command) -> Result<bool> {
    let (report, out) = match command {
        Command::Kernels(KernelsCommand::Eval(a)) => with_common(&a.common, |t| kernels_eval(&a, t))?,
        Command::Bvp(BvpCommand::Solve(a)) => with_common(&a.common, |t| bvp_solve(&a, t))?,
        Command::Map(MapCommand::Rtd(a)) => (map(&a, Direction::Rtd)?, a.report.clone()),
        Command::Map(MapCommand::Dtr(a)) => (map(&a, Direction::Dtr)?, a.report.clone()),
        Command::Check(CheckCommand::Jump(a)) => with_common(&a.common, |t| check_jump_cmd(&a, t))?,
        Command::Check(CheckCommand::Inverse(a)) => with_common(&a.common, |t| check_inverse_cmd(&a, t))?,
        Command::Check(CheckCommand::Symmetry(a)) => with_common(&a.common, |t| check_symmetry_cmd(&a, t))?,
        Command::Check(CheckCommand::Herglotz(a)) => with_common(&a.common, |t| check_herglotz_cmd(&a, t))?,
        Command::Check(CheckCommand::Krein(a)) => with_common(&a.common, |t| check_krein_cmd(&a, t))?,
        Command::Spectrum(SpectrumCommand::Scan(a)) => with_common(&a.common, |t| scan(&a, t))?,
        Command::Oracle(OracleCommand::Disk(a)) => with_common(&a.common, |t| oracle(&a, t))?,
    };
    let json = report.to_json();
    if let Some(path) = out {
        std::fs::write(path, &json)?;
    }
    print!("{json}");
    Ok(report.pass)
}

fn with_common(
    common: &Common,
    f: impl FnOnce(&Tolerances) -> Result<Report>,
) -> Result<(Report, Option<std::path::PathBuf>)> {
    let tol = Tolerances::parse(&common.tol)?;
    let report = f(&tol)?;
    tol.ensure_used(&report)?;
    Ok((report, common.out.clone()))
}

/// `--tol` overrides: `key=value` entries and an optional bare default.
#[derive(Debug, Default)]
pub struct Tolerances {
    all: Option<f64>,
    keyed: BTreeMap<String, f64>,
}

impl Tolerances {
    pub fn parse(entries: &[String]) -> Result<Self> {
        let mut t = Self::default();
        for e in entries {
            let (key, value) = match e.split_once('=') {
                Some((k, v)) => (Some(k), v),
                None => (None, e.as_str()),
            };
            let v: f64 = value
                .parse()
                .map_err(|_| Error::Parse(format!("invalid tolerance '{e}'")))?;
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Parse(format!("tolerance must be finite and nonnegative, got '{e}'")));
            }
            match key {
                Some(k) => {
                    t.keyed.insert(k.to_string(), v);
                }
                None => t.all = Some(v),
            }
        }
        Ok(t)
    }

    pub fn get(&self, key: &str, default: f64) -> f64 {
        self.keyed.get(key).copied().or(self.all).unwrap_or(default)
    }

    /// Rejects keyed overrides that name no check of the command.
    fn ensure_used(&self, report: &Report) -> Result<()> {
        for k in self.keyed.keys() {
            if !report.tolerance.contains_key(k) {
                let known: Vec<&str> = report.tolerance.keys().map(String::as_str).collect();
                return Err(Error::Parse(format!(
                    "unknown tolerance key '{k}' (this command checks: {})",
                    if known.is_empty() { "nothing".to_string() } else { known.join(", ") }
                )));
            }
        }
        Ok(())
    }
}

fn load_domain(path: &Path) -> Result<DomainSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read domain '{}': {e}", path.display())))?;
    DomainSpec::from_json(&text)
}

fn setup(problem: &Problem, report: &mut Report) -> Result<(DomainSpec, BoundaryMesh, SpectralParameter)> {
    let spec = load_domain(&problem.domain)?;
    let mesh = spec.build_mesh()?;
    report.input("domain", &spec).input("z", problem.z.to_string());
    Ok((spec, mesh, SpectralParameter::new(problem.z.0)))
}

fn robin_coupling(theta: &ThetaSpec, mesh: &BoundaryMesh, command: &str) -> Result<RobinCoupling> {
    theta
        .to_coupling(mesh)?
        .ok_or_else(|| Error::Parse(format!("{command} needs a Robin coupling, not 'dirichlet'")))
}

/// `x,y;x,y;...`.
pub fn parse_points(s: &str) -> Result<Vec<Point>> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let c: Vec<&str> = p.split(',').collect();
            let parse = |v: &str| {
                v.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| Error::Parse(format!("invalid point '{p}'")))
            };
            match c.as_slice() {
                [x, y] => Ok([parse(x)?, parse(y)?]),
                _ => Err(Error::Parse(format!("point must be 'x,y', got '{p}'"))),
            }
        })
        .collect()
}

fn complex_list(v: &[C64]) -> Vec<ComplexJson> {
    v.iter().map(|&c| c.into()).collect()
}

fn kernels_eval(a: &KernelArgs, tol: &Tolerances) -> Result<Report> {
    let mut r = Report::new("kernels eval");
    r.input("n", a.n).input("z", a.z.to_string()).input("x", &a.x).input("order", a.order);
    if a.x.len() != a.n {
        return Err(Error::Parse(format!("x has {} coordinates but n = {}", a.x.len(), a.n)));
    }
    if a.order > 2 {
        return Err(Error::Parse(format!("order must be 0, 1 or 2, got {}", a.order)));
    }
    let z = SpectralParameter::new(a.z.0);
    let k = kernel_value(a.n, &z, &a.x, a.order)?;
    r.output("value", ComplexJson::from(k.value));
    if let Some(g) = &k.gradient {
        r.output("gradient", complex_list(g));
    }
    if let Some(h) = &k.hessian {
        let rows: Vec<Vec<ComplexJson>> = h.iter().map(|row| complex_list(row)).collect();
        r.output("hessian", rows);
        // Away from the origin (-Δ - z) E = 0, so tr H = -z E.
        let trace: C64 = (0..a.n).map(|j| h[j][j]).sum();
        let scale = h.iter().flatten().map(|v| v.norm()).fold((z.z * k.value).norm(), f64::max);
        r.check("helmholtz", (trace + z.z * k.value).norm() / scale, Some(tol.get("helmholtz", 1e-8)));
    }
    Ok(r)
}

fn bvp_solve(a: &BvpArgs, tol: &Tolerances) -> Result<Report> {
    let mut r = Report::new("bvp solve");
    let (_, mesh, z) = setup(&a.problem, &mut r)?;
    r.input("theta", a.theta.to_string()).input("data", a.data.to_string());
    let g = a.data.sample(&mesh);
    let sol: BvpSolution = match a.theta.to_coupling(&mesh)? {
        Some(c) => solve_robin(&mesh, &z, &c, &g)?,
        None => solve_dirichlet(&mesh, &z, &g)?,
    };
    r.check("residual", sol.residual, Some(tol.get("residual", 1e-8)));
    r.output("condition", sol.condition);
    if let Some(t) = &a.targets {
        let pts = parse_points(t)?;
        let vals = sol.eval(&mesh, &pts)?;
        r.input("targets", &pts);
        r.output("values", complex_list(&vals.values));
    }
    if let Some(path) = &a.csv {
        let mut csv = String::from("phi,x,y,density_re,density_im,dirichlet_re,dirichlet_im,neumann_re,neumann_im\n");
        for (i, phi) in mesh.node_angles().iter().enumerate() {
            let cols = [
                *phi,
                mesh.nodes[i][0],
                mesh.nodes[i][1],
                sol.density[i].re,
                sol.density[i].im,
                sol.dirichlet_trace[i].re,
                sol.dirichlet_trace[i].im,
                sol.neumann_trace[i].re,
                sol.neumann_trace[i].im,
            ];
            let line: Vec<String> = cols.iter().map(|v| format_f64(*v)).collect();
            let _ = writeln!(csv, "{}", line.join(","));
        }
        std::fs::write(path, csv)?;
    }
    Ok(r)
}

#[derive(Clone, Copy)]
enum Direction {
    Rtd,
    Dtr,
}

fn map(a: &MapArgs, dir: Direction) -> Result<Report> {
    let tol = Tolerances::parse(&a.tol)?;
    let name = match dir {
        Direction::Rtd => "map rtd",
        Direction::Dtr => "map dtr",
    };
    let mut r = Report::new(name);
    let (_, mesh, z) = setup(&a.problem, &mut r)?;
    r.input("theta", a.theta.to_string());
    let c = robin_coupling(&a.theta, &mesh, name)?;
    let m = match dir {
        Direction::Rtd => assemble_rtd(&mesh, &z, &c)?,
        Direction::Dtr => assemble_dtr(&mesh, &z, &c)?,
    };
    let json = m.operator.to_json();
    std::fs::write(&a.out, &json)?;
    // Read the file back: the stored operator must reproduce the matrix exactly.
    let back = DenseOperator::from_json(&std::fs::read_to_string(&a.out)?)?;
    let diff = if back.n() == m.operator.n() && back.weights == m.operator.weights {
        back.matrix.sub(&m.operator.matrix).max_abs()
    } else {
        f64::INFINITY
    };
    r.check("round_trip", diff, Some(tol.get("round_trip", 0.0)));
    r.output("n", m.operator.n()).output("path", a.out.display().to_string());
    let s = m.singular_values();
    r.output("norm_w", s.first().copied().unwrap_or(0.0));
    if let Some(path) = &a.csv {
        std::fs::write(path, m.operator.to_csv())?;
    }
    tol.ensure_used(&r)?;
    Ok(r)
}

fn check_jump_cmd(a: &JumpArgs, tol: &Tolerances) -> Result<Report> {
    let mut r = Report::new("check jump");
    let (_, mesh, z) = setup(&a.problem, &mut r)?;
    r.input("data", a.data.to_string());
    let rep = check_jump(&mesh, &z, &a.data.sample(&mesh))?;
    r.check("continuity", rep.continuity_residual, Some(tol.get("continuity", 1e-3)))
        .check("interior_trace", rep.interior_trace_error, Some(tol.get("interior_trace", 5e-2)))
        .check("exterior_trace", rep.exterior_trace_error, Some(tol.get("exterior_trace", 5e-2)))
        .check("density_jump", rep.density_jump_residual, Some(tol.get("density_jump", 1e-12)));
    r.output("fd_offset", rep.fd_offset);
    Ok(r)
}

fn check_inverse_cmd(a: &InverseArgs, tol: &Tolerances) -> Result<Report> {
    let mut r = Report::new("check inverse");
    let (_, mesh, z) = setup(&a.problem, &mut r)?;
    let cutoff = a.cutoff.unwrap_or_else(|| default_mode_cutoff(mesh.len()));
    r.input("theta", a.theta.to_string()).input("cutoff", cutoff);
    let c = robin_coupling(&a.theta, &mesh, "check inverse")?;
    let rep = check_inverse(&mesh, &z, &c, cutoff)?;
    r.check("dtr_rtd", rep.dtr_rtd, Some(tol.get("dtr_rtd", 1e-3)))
        .check("rtd_dtr", rep.rtd_dtr, Some(tol.get("rtd_dtr", 1e-3)));
    r.output("subspace_dim", rep.subspace_dim);
    Ok(r)
}

fn check_symmetry_cmd(a: &CouplingArgs, tol: &Tolerances) -> Result<Report> {
    let mut r = Report::new("check symmetry");
    let (_, mesh, z) = setup(&a.problem, &mut r)?;
    r.input("theta", a.theta.to_string());
    let c = robin_coupling(&a.theta, &mesh, "check symmetry")?;
    // Real z makes the map W-self-adjoint exactly, so the default is tighter.
    let default = if z.z.im == 0.0 { 1e-8 } else { 1e-3 };
    r.check("symmetry", check_symmetry(&mesh, &z, &c)?, Some(tol.get("symmetry", default)));
    Ok(r)
}

fn check_herglotz_cmd(a: &HerglotzArgs, tol: &Tolerances) -> Result<Report> {
    let mut r = Report::new("check herglotz");
    let (spec, mesh, z) = setup(&a.problem, &mut r)?;
    r.input("theta", a.theta.to_string()).input("data", a.data.to_string()).input("h", a.h);
    let c = robin_coupling(&a.theta, &mesh, "check herglotz")?;
    let grid = spec.interior_grid(a.h, 0.0)?;
    let rep = check_herglotz(&mesh, &grid, &z, &c, &a.data.sample(&mesh))?;
    let negativity = (-rep.imaginary_part_min).max(0.0) / rep.map_norm;
    r.check("gap", rep.relative_gap, Some(tol.get("gap", 2e-2)))
        .check("positivity", negativity, Some(tol.get("positivity", 1e-6)));
    r.output("lhs", rep.lhs)
        .output("rhs", rep.rhs)
        .output("imaginary_part_min", rep.imaginary_part_min)
        .output("map_norm", rep.map_norm);
    Ok(r)
}

/// Twelve points on a spiral of radius `0.1 ..= 0.5` around the origin.
fn default_targets() -> Vec<Point> {
    (0..12)
        .map(|i| {
            let a = 0.7 * i as f64;
            let rr = 0.1 + 0.4 * i as f64 / 11.0;
            [rr * a.cos(), rr * a.sin()]
        })
        .collect()
}

fn check_krein_cmd(a: &KreinArgs, tol: &Tolerances) -> Result<Report> {
    let mut r = Report::new("check krein");
    let (spec, mesh, z) = setup(&a.problem, &mut r)?;
    r.input("theta", a.theta.to_string()).input("source", a.source.to_string()).input("h", a.h);
    let c = robin_coupling(&a.theta, &mesh, "check krein")?;
    let targets = match &a.targets {
        Some(t) => parse_points(t)?,
        None => default_targets(),
    };
    if let Some(p) = targets.iter().find(|&&p| !spec.contains(p)) {
        return Err(Error::Parse(format!("target {p:?} is not inside the domain")));
    }
    r.input("targets", &targets);
    let grid = spec.interior_grid(a.h, 0.0)?;
    let rep = krein_check(&mesh, &grid, &z, &c, &a.source.to_field(), &targets)?;
    r.check("krein", rep.relative_error, Some(tol.get("krein", 1e-2)));
    r.output("robin_resolvent", complex_list(&rep.lhs));
    Ok(r)
}

fn scan(a: &ScanArgs, tol: &Tolerances) -> Result<Report> {
    let mut r = Report::new("spectrum scan");
    let spec = load_domain(&a.domain)?;
    let mesh = spec.build_mesh()?;
    r.input("domain", &spec)
        .input("theta", a.theta.to_string())
        .input("zmin", a.zmin)
        .input("zmax", a.zmax)
        .input("steps", a.steps);
    let op = match a.theta.to_coupling(&mesh)? {
        Some(c) => ScanOperator::Robin(c),
        None => ScanOperator::Dirichlet,
    };
    let s = spectrum_scan(&mesh, &op, a.zmin, a.zmax, a.steps)?;
    let found = s.eigenvalues();
    r.output("minima", &s.minima).output("eigenvalues", &found);
    if let Some(path) = &a.csv {
        std::fs::write(path, s.to_csv())?;
    }

    // Disk oracle, restricted to the part of the interval where a dip can
    // be resolved (one sample away from either end).
    let oracle = match (&spec, &a.theta) {
        (DomainSpec::Disk { radius, .. }, ThetaSpec::Dirichlet) => Some(dirichlet_eigenvalues(*radius, a.zmax)?),
        (DomainSpec::Disk { radius, .. }, ThetaSpec::Const(t)) if *t >= 0.0 => {
            Some(robin_eigenvalues(*radius, *t, a.zmax)?)
        }
        _ => None,
    };
    if let Some(eigs) = oracle {
        let dz = (a.zmax - a.zmin) / a.steps as f64;
        let want: Vec<f64> = distinct(&eigs, 1e-6)
            .into_iter()
            .filter(|&l| l > a.zmin + dz && l < a.zmax - dz)
            .collect();
        let err = if want.len() == found.len() {
            want.iter().zip(&found).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        r.check("oracle", err, Some(tol.get("oracle", 1e-3)));
        r.output("oracle_eigenvalues", &want);
    }
    Ok(r)
}

fn oracle(a: &OracleArgs, _tol: &Tolerances) -> Result<Report> {
    let mut r = Report::new("oracle disk");
    r.input("radius", a.radius);
    let q = match a.query {
        OracleKind::Dirichlet => {
            r.input("query", "dirichlet").input("lambda_max", a.lambda_max);
            OracleQuery::DirichletEigen { lambda_max: a.lambda_max }
        }
        OracleKind::Robin => {
            r.input("query", "robin").input("theta", a.theta).input("lambda_max", a.lambda_max);
            OracleQuery::RobinEigen { theta: a.theta, lambda_max: a.lambda_max }
        }
        OracleKind::Rtd => {
            r.input("query", "rtd")
                .input("m", a.m)
                .input("z", ComplexLiteral(a.z.0).to_string())
                .input("theta", a.theta);
            OracleQuery::RtdEigenvalue { m: a.m, z: a.z.0, theta: a.theta }
        }
    };
    r.output("value", disk_oracle(a.radius, &q)?);
    Ok(r)
}
