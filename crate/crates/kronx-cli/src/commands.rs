use std::io::Write;

use clap::{ArgGroup, Args, Parser, Subcommand};
use kronx::cg::{build_s, cg_coefficient, cg_table, CgEntries};
use kronx::coupling::{block_gen, product_gen};
use kronx::exactnum::parse_rational;
use kronx::fourier::cooley_tukey;
use kronx::kron::{kron, kron_dense};
use kronx::models::{
    diagonalize, heisenberg_h, hubbard_h, jacobi_sweep, jc_evolution, multiplicities, rational_to_complex,
    two_cavity_evolution, HubbardParams, JcConfig, NLevelHamiltonian, SpinChainParams, HUBBARD_MAX_SITES,
};
use kronx::perm::{antisymmetrizer, commutation_perm, perm_matrix, swap_perm, symmetrizer, DEFAULT_MAX_DIM};
use kronx::su2::{Generator, HalfInt, Irrep};
use kronx::verify::{self, Suite};
use kronx::{ExactRational, KronError, Scalar, XSum};
use num_complex::Complex64;

use crate::error::{CliError, CliResult};
use crate::io::{read_matrix, spectrum_csv, Matrix};

#[derive(Debug, Parser)]
#[command(name = "kronx", version, about = "Sparse Kronecker algebra with Hubbard operators")]
pub struct Cli {
    /// Worker threads for parallel kernels.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Write the artifact here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Kronecker product of two JSON matrices.
    Kron {
        a: String,
        b: String,
        /// Use the dense coefficient formula instead of the sparse term rule.
        #[arg(long)]
        dense: bool,
    },
    /// Permutation matrices.
    #[command(subcommand)]
    Perm(PermCommand),
    /// Cooley–Tukey factorization of the Fourier matrix.
    FftFactor {
        #[arg(long)]
        n: usize,
        /// Fail unless the product reconstructs F_n within 1e-10.
        #[arg(long)]
        verify: bool,
    },
    /// Generator of the irrep with the given 2j.
    Su2 {
        #[arg(long)]
        twoj: usize,
        /// j3, jplus or jminus.
        #[arg(long, default_value = "j3")]
        generator: String,
    },
    /// Coupled generator on the product space, or its block-diagonal target.
    Couple {
        #[arg(long)]
        twoj1: usize,
        #[arg(long)]
        twoj2: usize,
        #[arg(long, default_value = "j3")]
        generator: String,
        #[arg(long)]
        blocks: bool,
    },
    /// Clebsch–Gordan matrix, single coefficients, or the full table.
    Cg(CgArgs),
    /// Spectrum of a Hermitian JSON matrix by Jacobi rotations.
    Diag {
        input: String,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 100)]
        max_sweeps: usize,
        /// One pass of rotations only; prints the diagonal in level order.
        #[arg(long)]
        single_sweep: bool,
    },
    /// Heisenberg chain Hamiltonian.
    Heisenberg {
        #[arg(long)]
        sites: usize,
        #[arg(long, default_value = "1")]
        jx: String,
        #[arg(long, default_value = "1")]
        jy: String,
        #[arg(long, default_value = "1")]
        jz: String,
        #[arg(long)]
        periodic: bool,
        /// Print the spectrum instead of the matrix.
        #[arg(long)]
        diag: bool,
    },
    /// Hubbard chain Hamiltonian.
    Hubbard {
        #[arg(long)]
        sites: usize,
        #[arg(long, default_value = "0")]
        eps: String,
        #[arg(long, default_value = "0")]
        mu: String,
        #[arg(long, default_value = "0")]
        u: String,
        #[arg(long, default_value = "0")]
        t: String,
        #[arg(long)]
        diag: bool,
    },
    /// Jaynes–Cummings evolution operator.
    Jc {
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        cutoff: usize,
        #[arg(long)]
        time: f64,
        #[arg(long)]
        two_cavity: bool,
    },
    /// Run invariant suites and print residuals.
    Verify {
        /// intertwining, su2, kron, perm, hadamard, fft, models or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 4)]
        max_twoj: usize,
    },
}

#[derive(Debug, Subcommand)]
enum PermCommand {
    /// The swap Π on C^n ⊗ C^n.
    Swap {
        #[arg(long)]
        n: usize,
    },
    /// P with Pᵀ(A⊗B)P = B⊗A.
    Commute {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// (Anti)symmetrizer on (C^n)^{⊗p}.
    Sym {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        anti: bool,
    },
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["matrix", "coef", "table"])))]
struct CgArgs {
    #[arg(long)]
    twoj1: usize,
    #[arg(long)]
    twoj2: usize,
    #[arg(long)]
    matrix: bool,
    /// 2m1 2m2 2J 2M.
    #[arg(long, num_args = 4, allow_negative_numbers = true, value_names = ["TWOM1", "TWOM2", "TWOJ", "TWOM"])]
    coef: Option<Vec<i64>>,
    #[arg(long)]
    table: bool,
}

/// Default cap on 2j for the CG commands.
const MAX_TWO_J: usize = 64;

fn max_dim() -> CliResult<usize> {
    match std::env::var("KRONX_MAX_DIM") {
        Ok(s) => s
            .parse()
            .map_err(|_| CliError::Argument(format!("KRONX_MAX_DIM={s:?} is not a positive integer"))),
        Err(_) => Ok(DEFAULT_MAX_DIM),
    }
}

fn guard(order: usize) -> CliResult<()> {
    let limit = max_dim()?;
    if order > limit {
        return Err(KronError::Resource { requested: order, limit }.into());
    }
    Ok(())
}

fn rational(flag: &str, s: &str) -> CliResult<ExactRational> {
    parse_rational(s).map_err(|e| CliError::Argument(format!("--{flag}: {e}")))
}

fn generator(s: &str) -> CliResult<Generator> {
    Ok(s.parse::<Generator>()?)
}

fn emit(out: &Option<String>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{path}: {e}"))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn emit_matrix(out: &Option<String>, m: &Matrix) -> CliResult<()> {
    emit(out, &format!("{}\n", m.to_json()))
}

fn spectrum(h: &XSum<Complex64>, tol: f64, max_sweeps: usize) -> CliResult<String> {
    let h = NLevelHamiltonian::from_xsum(h, 1e-9)?;
    let eig = diagonalize(&h, tol, max_sweeps)?;
    Ok(spectrum_csv(&multiplicities(&eig.values, 1e-9)))
}

pub fn run(cli: Cli) -> CliResult<()> {
    if cli.threads == 0 {
        return Err(CliError::Argument("--threads must be positive".into()));
    }
    // a pool may already exist when embedded; the setting is best effort
    let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    let out = &cli.output;
    match cli.command {
        Command::Kron { a, b, dense } => {
            let (a, b) = (read_matrix(&a)?, read_matrix(&b)?);
            guard(a.order() * b.order())?;
            fn product<S: Scalar>(x: &XSum<S>, y: &XSum<S>, dense: bool) -> XSum<S> {
                if dense {
                    kron_dense(x, y)
                } else {
                    kron(x, y)
                }
            }
            let m = match (&a, &b) {
                (Matrix::Rational(x), Matrix::Rational(y)) => Matrix::Rational(product(x, y, dense)),
                (Matrix::Complex(x), Matrix::Complex(y)) => Matrix::Complex(product(x, y, dense)),
                (Matrix::Sqrt(x), Matrix::Sqrt(y)) => Matrix::Sqrt(product(x, y, dense)),
                _ => {
                    return Err(CliError::Schema(format!(
                        "operand kinds differ ({} vs {})",
                        a.kind(),
                        b.kind()
                    )))
                }
            };
            emit_matrix(out, &m)
        }
        Command::Perm(p) => {
            let m = match p {
                PermCommand::Swap { n } => {
                    guard(n * n)?;
                    perm_matrix(&swap_perm(n))
                }
                PermCommand::Commute { n, m } => {
                    guard(n * m)?;
                    perm_matrix(&commutation_perm(n, m))
                }
                PermCommand::Sym { p, n, anti } => {
                    let cap = max_dim()?;
                    if anti {
                        antisymmetrizer(p, n, cap)?
                    } else {
                        symmetrizer(p, n, cap)?
                    }
                }
            };
            emit_matrix(out, &Matrix::Rational(m))
        }
        Command::FftFactor { n, verify } => {
            guard(n)?;
            let f = cooley_tukey(n)?;
            let err = f.reconstruction_error();
            let mut text = format!("n = {n}\n");
            for (s, z) in f.stage_nnz().iter().enumerate() {
                text.push_str(&format!("stage {s}: {z} nonzeros\n"));
            }
            text.push_str(&format!("bit reversal: {:?}\n", f.bit_reversal.images()));
            text.push_str(&format!("max reconstruction error: {err:.3e}\n"));
            emit(out, &text)?;
            if verify && !(err < 1e-10 && f.stage_nnz().iter().all(|&z| z == 2 * n)) {
                return Err(CliError::Verification(format!("reconstruction error {err:.3e}")));
            }
            Ok(())
        }
        Command::Su2 { twoj, generator: g } => {
            guard(twoj + 1)?;
            emit_matrix(out, &Matrix::Sqrt(Irrep::new(twoj).generator(generator(&g)?)))
        }
        Command::Couple {
            twoj1,
            twoj2,
            generator: g,
            blocks,
        } => {
            guard((twoj1 + 1) * (twoj2 + 1))?;
            let g = generator(&g)?;
            let m = if blocks {
                block_gen(twoj1, twoj2, g).flatten()
            } else {
                product_gen(twoj1, twoj2, g)
            };
            emit_matrix(out, &Matrix::Sqrt(m))
        }
        Command::Cg(args) => cg(out, args),
        Command::Diag {
            input,
            tol,
            max_sweeps,
            single_sweep,
        } => {
            if !(tol > 0.0) {
                return Err(CliError::Argument("--tol must be positive".into()));
            }
            let h = read_matrix(&input)?.to_complex();
            if single_sweep {
                let h = jacobi_sweep(&NLevelHamiltonian::from_xsum(&h, 1e-9)?);
                let mut text = String::from("level,epsilon\n");
                for p in 1..=h.order() {
                    text.push_str(&format!("{p},{:.12}\n", h.eps(p)));
                }
                return emit(out, &text);
            }
            emit(out, &spectrum(&h, tol, max_sweeps)?)
        }
        Command::Heisenberg {
            sites,
            jx,
            jy,
            jz,
            periodic,
            diag,
        } => {
            guard(1usize.checked_shl(sites as u32).unwrap_or(usize::MAX))?;
            let params = SpinChainParams {
                sites,
                jx: rational("jx", &jx)?,
                jy: rational("jy", &jy)?,
                jz: rational("jz", &jz)?,
            };
            let h = heisenberg_h(&params, periodic)?;
            if diag {
                return emit(out, &spectrum(&rational_to_complex(&h), 1e-12, 100)?);
            }
            emit_matrix(out, &Matrix::Rational(h))
        }
        Command::Hubbard {
            sites,
            eps,
            mu,
            u,
            t,
            diag,
        } => {
            let params = HubbardParams::chain(
                sites,
                rational("eps", &eps)?,
                rational("mu", &mu)?,
                rational("u", &u)?,
                rational("t", &t)?,
            );
            let h = hubbard_h(&params, HUBBARD_MAX_SITES)?;
            guard(h.order())?;
            if diag {
                return emit(out, &spectrum(&rational_to_complex(&h), 1e-12, 100)?);
            }
            emit_matrix(out, &Matrix::Rational(h))
        }
        Command::Jc {
            gamma,
            cutoff,
            time,
            two_cavity,
        } => {
            if !gamma.is_finite() || !time.is_finite() {
                return Err(CliError::Argument("--gamma and --time must be finite".into()));
            }
            let cfg = JcConfig { gamma, cutoff };
            let d = cfg.dim();
            guard(if two_cavity { d * d } else { d })?;
            let u = if two_cavity {
                two_cavity_evolution(&cfg, &cfg, time)?
            } else {
                jc_evolution(&cfg, time)?
            };
            emit_matrix(out, &Matrix::Complex(u))
        }
        Command::Verify { suite, max_twoj } => {
            let suite: Suite = suite.parse()?;
            let report = verify::run(suite, max_twoj);
            let mut text = String::new();
            for c in &report.checks {
                text.push_str(&format!("{c}\n"));
            }
            let failed = report.checks.iter().filter(|c| !c.passed).count();
            text.push_str(&format!(
                "{} checks, {failed} failed, max residual {:.3e}\n",
                report.checks.len(),
                report.max_residual()
            ));
            emit(out, &text)?;
            if failed > 0 {
                return Err(CliError::Verification(format!("{failed} checks failed")));
            }
            Ok(())
        }
    }
}

fn cg(out: &Option<String>, args: CgArgs) -> CliResult<()> {
    let (a, b) = (args.twoj1, args.twoj2);
    if a > MAX_TWO_J || b > MAX_TWO_J {
        return Err(KronError::Resource {
            requested: a.max(b),
            limit: MAX_TWO_J,
        }
        .into());
    }
    guard((a + 1) * (b + 1))?;
    if args.matrix {
        let s = build_s(a, b);
        let m = match s.entries {
            CgEntries::Exact(x) => Matrix::Sqrt(x),
            CgEntries::Numeric(x) => Matrix::Complex(x),
        };
        return emit_matrix(out, &m);
    }
    if let Some(c) = args.coef {
        let v = cg_coefficient(a, c[0], b, c[1], usize::try_from(c[2]).map_err(|_| {
            CliError::Argument("2J must be nonnegative".into())
        })?, c[3])?;
        return emit(out, &format!("{v} {:.15}\n", v.to_f64()));
    }
    // one line per (J, M)
    let half = |t: i64| HalfInt { twice: t }.to_string();
    let mut text = String::new();
    let rows = cg_table(a, b);
    let mut i = 0;
    while i < rows.len() {
        let (tj, tm) = (rows[i].two_j, rows[i].two_m);
        let mut line = format!("J={} M={}:", half(tj as i64), half(tm));
        let mut first = true;
        while i < rows.len() && rows[i].two_j == tj && rows[i].two_m == tm {
            let r = &rows[i];
            let sep = if first { " " } else { "; " };
            line.push_str(&format!("{sep}m1={} m2={} {}", half(r.two_m1), half(r.two_m2), r.value));
            first = false;
            i += 1;
        }
        text.push_str(&line);
        text.push('\n');
    }
    emit(out, &text)
}
