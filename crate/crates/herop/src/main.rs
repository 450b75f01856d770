//! Command-line front end: check / decompose / classify2 / verify-theorem /
//! generate over tuple files.
//!
//! Exit codes: 0 success (all checks passed), 1 check failed or numerical
//! breakdown, 2 usage error, 3 I/O or parse error.

use clap::{Parser, Subcommand, ValueEnum};
use herop::classify::{classify_2_isometric, reconstruct};
use herop::gen::{
    gen_a2_construction, gen_block_example, gen_jordan_isometry, gen_spherical_unitary,
    unit_sphere_point, Seed,
};
use herop::io::{
    matrix_to_data, parse_tuple_file, serialize_tuple_file, CheckDoc, ReportDoc, TupleFile,
};
use herop::linalg::DEFAULT_RESIDUAL_TOL;
use herop::spectral::{default_cluster_tol, split_sn, verify_decomposition_theorem};
use herop::tuples::{
    check_a_m_isometric, check_a_n_nilpotent, check_isosymmetric, check_spherical_a_isometry,
    check_toral, CommutingTuple,
};
use herop::Matrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_FAIL: u8 = 1;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "herop",
    version,
    about = "Check, decompose, classify and generate (A,m)-isometric matrix tuples"
)]
struct Cli {
    /// Render reports as plain-text tables instead of structured output.
    #[arg(long, global = true)]
    human: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    /// (A,m)-isometry via the hereditary calculus.
    MIso,
    /// Spherical A-isometry (order 1).
    Spherical,
    /// (A,n)-nilpotency.
    Nilpotent,
    /// Toral (A,m)-isometry (all order-m coordinate products).
    Toral,
    /// (m,n)-isosymmetry, single operator only.
    Isosym,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    SphericalUnitary,
    Block,
    A2,
    Jordan,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a residual check against a tuple file.
    Check {
        #[arg(long, value_enum)]
        kind: CheckKind,
        /// Isometry / isosymmetry order m.
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Nilpotency order, or the symmetry order for isosym.
        #[arg(long)]
        n: Option<u32>,
        /// Residual tolerance (overrides HEROP_TOL and the default 1e-9).
        #[arg(long, env = "HEROP_TOL")]
        tol: Option<f64>,
        file: PathBuf,
    },
    /// Split T = S + N into semisimple and nilpotent commuting parts.
    Decompose {
        /// Eigenvalue clustering tolerance (default scales with the input).
        #[arg(long)]
        cluster_tol: Option<f64>,
        /// Write S and N tuple files with this path prefix.
        #[arg(long)]
        out_prefix: Option<PathBuf>,
        file: PathBuf,
    },
    /// Classify a 2-isometric tuple into spherical-unitary and block parts.
    Classify2 {
        #[arg(long, env = "HEROP_TOL")]
        tol: Option<f64>,
        /// Write the reconstructed tuple file here (round-trip evidence).
        #[arg(long)]
        out: Option<PathBuf>,
        file: PathBuf,
    },
    /// Full decomposition-theorem pipeline: input must be (A,m)-isometric;
    /// verifies S spherical A-isometric, N nilpotent, commutation.
    VerifyTheorem {
        #[arg(long)]
        m: u32,
        #[arg(long, env = "HEROP_TOL")]
        tol: Option<f64>,
        file: PathBuf,
    },
    /// Emit a seeded example tuple file on standard output.
    Generate {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of operators in the tuple.
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Dimension parameter (total for spherical-unitary/a2, top block
        /// for block).
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Bottom-block dimension for the block family.
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Jordan block sizes (jordan family), comma separated.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
    },
}

fn default_tol(tol: Option<f64>) -> f64 {
    tol.unwrap_or(DEFAULT_RESIDUAL_TOL)
}

fn read_input(path: &PathBuf) -> Result<(TupleFile, CommutingTuple, Matrix), String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let file = parse_tuple_file(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let t = file
        .to_tuple()
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let a = file
        .a_or_identity()
        .map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((file, t, a))
}

fn emit(report: &ReportDoc, human: bool) -> ExitCode {
    if human {
        print!("{}", report.to_human());
    } else {
        print!("{}", report.to_json());
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn fail_io(msg: String) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_IO)
}

fn fail_check(command: &str, msg: String, human: bool) -> ExitCode {
    let report = ReportDoc {
        command: command.to_string(),
        passed: false,
        checks: vec![CheckDoc {
            name: "error".into(),
            passed: false,
            residual: f64::NAN,
            tolerance: f64::NAN,
            detail: msg,
        }],
        artifacts: None,
    };
    emit(&report, human);
    ExitCode::from(EXIT_FAIL)
}

fn tuple_artifact(label: &str, t: &CommutingTuple, meta: &str) -> (String, serde_json::Value) {
    let mut metadata = BTreeMap::new();
    metadata.insert("content".to_string(), meta.to_string());
    let file = TupleFile::from_parts(t, None, metadata);
    (
        label.to_string(),
        serde_json::to_value(file).expect("tuple files always serialize"),
    )
}

fn run_check(
    kind: CheckKind,
    m: u32,
    n: Option<u32>,
    tol: Option<f64>,
    file: PathBuf,
    human: bool,
) -> ExitCode {
    let (_, t, a) = match read_input(&file) {
        Ok(v) => v,
        Err(e) => return fail_io(e),
    };
    let tol = default_tol(tol);
    let result = match kind {
        CheckKind::MIso => check_a_m_isometric(&t, &a, m, tol),
        CheckKind::Spherical => check_spherical_a_isometry(&t, &a, tol),
        CheckKind::Nilpotent => check_a_n_nilpotent(&t, &a, n.unwrap_or(t.dim() as u32), tol),
        CheckKind::Toral => check_toral(&t, &a, m, tol),
        CheckKind::Isosym => check_isosymmetric(&t, m, n.unwrap_or(1), tol),
    };
    let check = match result {
        Ok(c) => c,
        Err(e) => return fail_check("check", e.to_string(), human),
    };
    let name = match kind {
        CheckKind::MIso => format!("(A,{m})-isometry"),
        CheckKind::Spherical => "spherical A-isometry".to_string(),
        CheckKind::Nilpotent => format!("(A,{})-nilpotency", n.unwrap_or(t.dim() as u32)),
        CheckKind::Toral => format!("toral order-{m} isometry"),
        CheckKind::Isosym => format!("({m},{})-isosymmetry", n.unwrap_or(1)),
    };
    let report = ReportDoc {
        command: "check".into(),
        passed: check.passed,
        checks: vec![CheckDoc::from_check(name, &check)],
        artifacts: None,
    };
    emit(&report, human)
}

fn run_decompose(
    cluster_tol: Option<f64>,
    out_prefix: Option<PathBuf>,
    file: PathBuf,
    human: bool,
) -> ExitCode {
    let (_, t, _) = match read_input(&file) {
        Ok(v) => v,
        Err(e) => return fail_io(e),
    };
    let ctol = cluster_tol.unwrap_or_else(|| default_cluster_tol(&t));
    let sn = match split_sn(&t, ctol) {
        Ok(sn) => sn,
        Err(e) => return fail_check("decompose", e.to_string(), human),
    };
    let scale = 1.0 + t.max_op_norm();
    let checks = vec![
        CheckDoc {
            name: "S and N commute".into(),
            passed: sn.diagnostics.commutation_residual <= 1e-8 * scale,
            residual: sn.diagnostics.commutation_residual,
            tolerance: 1e-8 * scale,
            detail: "max_{j,k} ||S_j N_k - N_k S_j||_F".into(),
        },
        CheckDoc {
            name: format!("N nilpotent of order {}", sn.diagnostics.nilpotency_order),
            passed: true,
            residual: 0.0,
            tolerance: 0.0,
            detail: "order bounded by the largest eigenspace block".into(),
        },
        CheckDoc {
            name: "S + N reconstructs T".into(),
            passed: sn.diagnostics.reconstruction_error <= 1e-10 * scale,
            residual: sn.diagnostics.reconstruction_error,
            tolerance: 1e-10 * scale,
            detail: "worst ||S_j + N_j - T_j||_F".into(),
        },
    ];
    if let Some(prefix) = &out_prefix {
        let s_file = TupleFile::from_parts(&sn.s, None, BTreeMap::new());
        let n_file = TupleFile::from_parts(&sn.n, None, BTreeMap::new());
        let base = prefix.display();
        for (suffix, f) in [("S", &s_file), ("N", &n_file)] {
            let path = format!("{base}.{suffix}.json");
            if let Err(e) = std::fs::write(&path, serialize_tuple_file(f)) {
                return fail_io(format!("cannot write {path}: {e}"));
            }
        }
    }
    let (sk, sv) = tuple_artifact("S", &sn.s, "semisimple part");
    let (nk, nv) = tuple_artifact("N", &sn.n, "nilpotent part");
    let artifacts = serde_json::json!({ sk: sv, nk: nv });
    let report = ReportDoc {
        command: "decompose".into(),
        passed: checks.iter().all(|c| c.passed),
        checks,
        artifacts: Some(artifacts),
    };
    emit(&report, human)
}

fn run_classify2(
    tol: Option<f64>,
    out: Option<PathBuf>,
    file: PathBuf,
    human: bool,
) -> ExitCode {
    let (_, t, _) = match read_input(&file) {
        Ok(v) => v,
        Err(e) => return fail_io(e),
    };
    let tol = default_tol(tol).max(1e-9);
    let structure = match classify_2_isometric(&t, tol) {
        Ok(s) => s,
        Err(e) => return fail_check("classify2", e.to_string(), human),
    };
    let rebuilt = match reconstruct(&structure) {
        Ok(r) => r,
        Err(e) => return fail_check("classify2", e.to_string(), human),
    };
    let scale = 1.0 + t.max_op_norm();
    let round_trip = rebuilt
        .ops()
        .iter()
        .zip(t.ops())
        .map(|(r, o)| (r - o).norm_fro())
        .fold(0.0, f64::max);
    let mut checks = vec![CheckDoc {
        name: "reconstruct . classify round trip".into(),
        passed: round_trip <= 1e-7 * scale,
        residual: round_trip,
        tolerance: 1e-7 * scale,
        detail: "worst operator-wise Frobenius error".into(),
    }];
    for (i, b) in structure.blocks.iter().enumerate() {
        checks.push(CheckDoc {
            name: format!("block {i} constraint sum conj(alpha_j) V_j = 0"),
            passed: b.constraint_residual() <= 1e-8 * scale,
            residual: b.constraint_residual(),
            tolerance: 1e-8 * scale,
            detail: format!(
                "alpha = {:?}, dim M = {}, dim Mperp = {}",
                b.alpha,
                b.m_basis.dim(),
                b.mperp_basis.dim()
            ),
        });
    }
    let blocks_json: Vec<serde_json::Value> = structure
        .blocks
        .iter()
        .map(|b| {
            serde_json::json!({
                "alpha": b.alpha.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                "m_basis": matrix_to_data(b.m_basis.as_matrix()),
                "mperp_basis": matrix_to_data(b.mperp_basis.as_matrix()),
                "v": b.v.iter().map(matrix_to_data).collect::<Vec<_>>(),
            })
        })
        .collect();
    let artifacts = serde_json::json!({
        "unitary_dim": structure.unitary_basis.dim(),
        "unitary_basis": matrix_to_data(structure.unitary_basis.as_matrix()),
        "blocks": blocks_json,
        "change_of_basis": matrix_to_data(&structure.change_of_basis),
    });
    if let Some(path) = &out {
        let rebuilt_file = TupleFile::from_parts(&rebuilt, None, BTreeMap::new());
        if let Err(e) = std::fs::write(path, serialize_tuple_file(&rebuilt_file)) {
            return fail_io(format!("cannot write {}: {e}", path.display()));
        }
    }
    let report = ReportDoc {
        command: "classify2".into(),
        passed: checks.iter().all(|c| c.passed),
        checks,
        artifacts: Some(artifacts),
    };
    emit(&report, human)
}

fn run_verify_theorem(m: u32, tol: Option<f64>, file: PathBuf, human: bool) -> ExitCode {
    let (_, t, a) = match read_input(&file) {
        Ok(v) => v,
        Err(e) => return fail_io(e),
    };
    let tol = default_tol(tol);
    let (sn, rep) = match verify_decomposition_theorem(&t, &a, m, tol) {
        Ok(v) => v,
        Err(e) => return fail_check("verify-theorem", e.to_string(), human),
    };
    let checks: Vec<CheckDoc> = rep
        .checks
        .iter()
        .map(|lc| CheckDoc::from_check(&lc.label, &lc.check))
        .collect();
    let (sk, sv) = tuple_artifact("S", &sn.s, "spherical A-isometric part");
    let (nk, nv) = tuple_artifact("N", &sn.n, "nilpotent part");
    let report = ReportDoc {
        command: "verify-theorem".into(),
        passed: rep.passed,
        checks,
        artifacts: Some(serde_json::json!({ sk: sv, nk: nv })),
    };
    emit(&report, human)
}

fn run_generate(
    family: Family,
    seed: u64,
    d: usize,
    n: usize,
    m: usize,
    sizes: Vec<usize>,
) -> ExitCode {
    let mut metadata = BTreeMap::new();
    metadata.insert("seed".to_string(), seed.to_string());
    let result: Result<TupleFile, String> = match family {
        Family::SphericalUnitary => {
            metadata.insert("family".to_string(), "spherical-unitary".to_string());
            gen_spherical_unitary(d, n, Seed(seed))
                .map(|t| TupleFile::from_parts(&t, None, metadata))
                .map_err(|e| e.to_string())
        }
        Family::Block => {
            metadata.insert("family".to_string(), "block".to_string());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let alpha: Vec<Complex64> = unit_sphere_point(d, &mut rng);
            gen_block_example(&alpha, n, m, Seed(seed.wrapping_add(1)))
                .map(|t| TupleFile::from_parts(&t, None, metadata))
                .map_err(|e| e.to_string())
        }
        Family::A2 => {
            metadata.insert("family".to_string(), "a2".to_string());
            gen_a2_construction(d, n, Seed(seed))
                .map(|inst| TupleFile::from_parts(&inst.t, Some(&inst.a), metadata))
                .map_err(|e| e.to_string())
        }
        Family::Jordan => {
            metadata.insert("family".to_string(), "jordan".to_string());
            let sizes = if sizes.is_empty() { vec![n] } else { sizes };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let orders: Vec<(Complex64, usize)> = sizes
                .iter()
                .map(|&k| (unit_sphere_point(1, &mut rng)[0], k))
                .collect();
            gen_jordan_isometry(&orders, Seed(seed.wrapping_add(1)))
                .map(|t| TupleFile::from_parts(&t, None, metadata))
                .map_err(|e| e.to_string())
        }
    };
    match result {
        Ok(file) => {
            print!("{}", serialize_tuple_file(&file));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Check {
            kind,
            m,
            n,
            tol,
            file,
        } => run_check(kind, m, n, tol, file, cli.human),
        Cmd::Decompose {
            cluster_tol,
            out_prefix,
            file,
        } => run_decompose(cluster_tol, out_prefix, file, cli.human),
        Cmd::Classify2 { tol, out, file } => run_classify2(tol, out, file, cli.human),
        Cmd::VerifyTheorem { m, tol, file } => run_verify_theorem(m, tol, file, cli.human),
        Cmd::Generate {
            family,
            seed,
            d,
            n,
            m,
            sizes,
        } => run_generate(family, seed, d, n, m, sizes),
    }
}
