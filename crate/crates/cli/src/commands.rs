use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use femwave::assembly::{assemble, global_gram};
use femwave::diagnostics::run_checks;
use femwave::fe::prolongation;
use femwave::mesh::{l_shape, load_mesh, unit_square, MeshHierarchy, Triangulation};
use femwave::ref_element::{ref_report, reference, LocalCollection};
use femwave::spectral::{
    assemble_operator, dense, dual_condition, normalized_dual_gram, wavelet_condition, LanczosOptions, Norm,
    OperatorKind, WaveletOperator,
};
use femwave::wavelets::{build_wavelets, TwoLevelTransform, WaveletKind};
use femwave::{Error, SparseMatrix};

use crate::{BundledArg, Command, MatrixArg, MeshArgs, NormArg, SolverArgs};

/// Error classes with distinct exit statuses.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Io(String),
    Invariant(String),
    NoConvergence(String),
}

impl Failure {
    pub fn code(&self) -> ExitCode {
        ExitCode::from(match self {
            Failure::Usage(_) => 1,
            Failure::Io(_) => 2,
            Failure::Invariant(_) => 3,
            Failure::NoConvergence(_) => 4,
        })
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) | Failure::Invariant(m) | Failure::NoConvergence(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let m = e.to_string();
        match e {
            Error::NoConvergence { .. } => Failure::NoConvergence(m),
            Error::Level { .. } | Error::TooLarge { .. } | Error::LevelCap { .. } | Error::Size { .. } => {
                Failure::Usage(m)
            }
            Error::Mesh(_) => Failure::Io(m),
            _ => Failure::Invariant(m),
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

type Outcome<T = ()> = Result<T, Failure>;

pub fn run(command: Command) -> Outcome {
    match command {
        Command::RefReport { output } => {
            check_output(output.as_deref())?;
            emit(output.as_deref(), &ref_report(reference()))
        }
        Command::Build { mesh, export_mm } => {
            if let Some(dir) = &export_mm {
                check_dir(dir)?;
            }
            let (h, j) = prepare(&mesh, 1)?;
            build(&h, j, export_mm.as_deref())
        }
        Command::Cond { mesh, norm, solver, output, export_mm, dual_cap } => {
            let opts = solver_options(&solver)?;
            check_output(output.as_deref())?;
            check_output(export_mm.as_deref())?;
            let (h, j) = prepare(&mesh, 1)?;
            cond(&h, j, norm, &opts, dual_cap, output.as_deref(), export_mm.as_deref())
        }
        Command::Check { mesh } => {
            let (h, j) = prepare(&mesh, 2)?;
            let outcomes = run_checks(&h, j)?;
            let mut text = String::new();
            for o in &outcomes {
                let _ = writeln!(text, "{o}");
            }
            emit(None, &text)?;
            match outcomes.iter().filter(|o| !o.passed).count() {
                0 => Ok(()),
                n => Err(Failure::Invariant(format!("{n} check(s) failed"))),
            }
        }
        Command::Export { mesh, matrix, output } => {
            check_output(Some(&output))?;
            let (h, j) = prepare(&mesh, 2)?;
            let m = export_matrix(&h, j, matrix)?;
            write_mm(&output, &m)
        }
    }
}

fn solver_options(s: &SolverArgs) -> Outcome<LanczosOptions> {
    if !(s.tol > 0.0 && s.tol < 1.0) {
        return Err(Failure::Usage(format!("--tol must lie in (0, 1), got {}", s.tol)));
    }
    if s.max_iter == 0 {
        return Err(Failure::Usage("--max-iter must be positive".into()));
    }
    Ok(LanczosOptions { tol: s.tol, seed: s.seed, max_iter: s.max_iter, ..Default::default() })
}

fn check_output(path: Option<&Path>) -> Outcome {
    let Some(path) = path else { return Ok(()) };
    if path.is_dir() {
        return Err(Failure::Io(format!("{}: is a directory", path.display())));
    }
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() && !p.is_dir() => {
            Err(Failure::Io(format!("{}: parent directory does not exist", path.display())))
        }
        _ => Ok(()),
    }
}

fn check_dir(path: &Path) -> Outcome {
    if path.is_dir() {
        Ok(())
    } else {
        Err(Failure::Io(format!("{}: not a directory", path.display())))
    }
}

fn load(args: &MeshArgs) -> Outcome<Triangulation> {
    match &args.mesh {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
            load_mesh(&text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
        }
        None => Ok(match args.bundled {
            BundledArg::UnitSquare => unit_square(),
            BundledArg::LShape => l_shape(),
        }),
    }
}

/// Validates the level and refines the mesh to level `J + extra`.
fn prepare(args: &MeshArgs, extra: usize) -> Outcome<(MeshHierarchy, usize)> {
    let j = usize::try_from(args.levels)
        .map_err(|_| Failure::Usage(format!("--levels must be non-negative, got {}", args.levels)))?;
    let mesh = load(args)?;
    Ok((MeshHierarchy::with_levels(&mesh, j + extra), j))
}

fn emit(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_failure(p, e)),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| io_failure(Path::new("<stdout>"), e))
        }
    }
}

fn write_mm(path: &Path, m: &SparseMatrix<f64>) -> Outcome {
    let file = fs::File::create(path).map_err(|e| io_failure(path, e))?;
    let mut w = io::BufWriter::new(file);
    m.write_matrix_market(&mut w).and_then(|_| w.flush()).map_err(|e| io_failure(path, e))
}

fn build(h: &MeshHierarchy, finest: usize, export: Option<&Path>) -> Outcome {
    let mut text = String::from("level,wavelets,scaling,edge,interior,support_sizes\n");
    for l in 0..=finest {
        let w = build_wavelets::<f64>(h, l)?;
        let count = |k| w.kinds.iter().filter(|&&x| x == k).count();
        let hist: Vec<String> = w
            .support_histogram()
            .iter()
            .map(|((k, s), n)| {
                let tag = match k {
                    WaveletKind::Scaling => "s",
                    WaveletKind::Edge => "e",
                    WaveletKind::Interior => "i",
                };
                format!("{tag}{s}:{n}")
            })
            .collect();
        let _ = writeln!(
            text,
            "{l},{},{},{},{},{}",
            w.len(),
            count(WaveletKind::Scaling),
            count(WaveletKind::Edge),
            count(WaveletKind::Interior),
            hist.join(" ")
        );
    }
    if let Some(dir) = export {
        for j in 0..finest {
            let t = TwoLevelTransform::new(h, j)?;
            write_mm(&dir.join(format!("M0_{j}.mtx")), &t.m0)?;
            write_mm(&dir.join(format!("M1_{j}.mtx")), &t.m1)?;
        }
    }
    emit(None, &text)
}

fn cond(
    h: &MeshHierarchy,
    finest: usize,
    norm: NormArg,
    opts: &LanczosOptions,
    cap: usize,
    output: Option<&Path>,
    export: Option<&Path>,
) -> Outcome {
    let norm = match norm {
        NormArg::L2 => Norm::L2,
        NormArg::H1 => Norm::H1,
        NormArg::H1dual => Norm::H1Dual,
    };
    let report = match norm {
        Norm::H1Dual => dual_condition(h, finest, cap, opts)?,
        _ => wavelet_condition(h, finest, norm, opts)?,
    };
    if let Some(path) = export {
        let g = match norm {
            Norm::H1Dual => normalized_dual_gram(h, finest)?.0,
            _ => WaveletOperator::new(h, finest, norm)?.dense()?,
        };
        write_mm(path, &dense::to_sparse(&g))?;
    }
    emit(output, &report.to_csv())
}

fn collection_gram(
    h: &MeshHierarchy,
    j: usize,
    a: &LocalCollection,
    b: &LocalCollection,
) -> Outcome<SparseMatrix<f64>> {
    let ga = assemble::<f64>(h, j, a)?;
    let gb = assemble::<f64>(h, j, b)?;
    Ok(global_gram(h, &ga, &gb)?.scaled())
}

fn export_matrix(h: &MeshHierarchy, j: usize, which: MatrixArg) -> Outcome<SparseMatrix<f64>> {
    let r = reference();
    Ok(match which {
        MatrixArg::Mass => assemble_operator::<f64>(h, j, OperatorKind::Mass).matrix,
        MatrixArg::Stiffness => assemble_operator::<f64>(h, j, OperatorKind::Stiffness).matrix,
        MatrixArg::Prolongation => prolongation::<f64>(h, j),
        MatrixArg::Wavelets => build_wavelets::<f64>(h, j)?.columns,
        MatrixArg::GramNNtilde => collection_gram(h, j, &r.n, &r.n_tilde)?,
        MatrixArg::GramNN => collection_gram(h, j, &r.n, &r.n)?,
        MatrixArg::GramThetaPhitilde => collection_gram(h, j, &r.theta, &r.phi_tilde)?,
        MatrixArg::GramXiPhitilde => collection_gram(h, j, &r.xi, &r.phi_tilde)?,
        MatrixArg::GramThetaXi => collection_gram(h, j, &r.theta, &r.xi)?,
    })
}
