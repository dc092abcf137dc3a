//! Command-line front end. Every command is deterministic given its flags
//! (including the thread count), emits CSV with 17-significant-digit floats,
//! and exits with the stable code contract: 0 success, 2 validation failure,
//! 3 resource budget, 4 numeric non-convergence.

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use bpslab::output::{fmt_float, render_svg, write_csv, PolySeries};
use bpslab::{
    delta, dirichlet_convolve, gram_matrix, l2_norm_delta, omega_witness, quadratic_form,
    tau_correlation, tau_summatory, tong_constant, verify_delta_decomposition, ConvolutionCoeffs,
    DeltaEvaluator, Error, MemoryBudget, MultiplicativeSpec, Result, ValueTable,
};

#[derive(Parser)]
#[command(
    name = "bpslab",
    version,
    about = "Periodic multiplicative functions with bounded partial sums and divisor-error-term experiments"
)]
struct Cli {
    /// Zero-test tolerance (default 1e-9; verify-thm4 gates at 1e-6 unless set)
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Worker thread cap (0 or absent: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Memory budget in GiB (default: $BPSLAB_MEM_GIB, then 2)
    #[arg(long, global = true)]
    mem: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

/// One function source: a JSON spec file or a built-in preset.
#[derive(Args)]
struct SpecSource {
    /// Spec JSON file path (falls back to a preset name if no such file)
    #[arg(long)]
    spec: Option<String>,

    /// Preset name: parity, example1, example2, one, qperiodic:<q>
    #[arg(long)]
    preset: Option<String>,
}

/// A pair of function sources; each is a file path or a preset name.
#[derive(Args)]
struct SpecPair {
    /// First function: spec file path or preset name
    #[arg(long)]
    spec1: String,

    /// Second function: spec file path or preset name
    #[arg(long)]
    spec2: String,
}

fn count_arg(s: &str) -> std::result::Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = s.parse().map_err(|_| format!("not a number: {s:?}"))?;
    if !f.is_finite() || f < 0.0 || f > u64::MAX as f64 {
        return Err(format!("out of range: {s:?}"));
    }
    Ok(f.floor() as u64)
}

#[derive(Subcommand)]
enum Command {
    /// Validate a spec: Euler factors, period, period sums, boundedness verdict
    Check {
        #[command(flatten)]
        src: SpecSource,
    },
    /// Evaluate f(n)
    Eval {
        #[command(flatten)]
        src: SpecSource,
        #[arg(long, value_parser = count_arg)]
        n: u64,
    },
    /// Partial sums S(x) for x = 1..=nmax as CSV `x,re,im`
    Sum {
        #[command(flatten)]
        src: SpecSource,
        #[arg(long, value_parser = count_arg)]
        nmax: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Dirichlet convolution table of two functions as CSV `n,re,im`
    Convolve {
        #[command(flatten)]
        pair: SpecPair,
        #[arg(long, value_parser = count_arg)]
        nmax: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check the partial-sum decomposition of f1*f2 against dilated Delta terms
    #[command(name = "verify-thm4")]
    VerifyThm4 {
        #[command(flatten)]
        pair: SpecPair,
        #[arg(long)]
        xmax: f64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// D(x) and Delta(x) = D(x) - x log x - (2 gamma - 1) x
    Delta {
        #[arg(long)]
        x: f64,
    },
    /// The mean-square constant of Delta: series and zeta-identity estimates
    Tong {
        #[arg(long, value_parser = count_arg)]
        nmax: u64,
    },
    /// Exact L2[1,X] norm of Delta(x/n) and its ratio to the predicted value
    L2 {
        #[arg(long, value_parser = count_arg)]
        n: u64,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Correlation Gram matrix of dilated Delta with Jacobi eigenvalues
    Gram {
        /// Comma-separated moduli, e.g. 1,2,4
        #[arg(long, value_delimiter = ',', value_parser = count_arg)]
        moduli: Vec<u64>,
        #[arg(long)]
        x: f64,
        /// Optional spec pair: also evaluates the induced quadratic form
        #[arg(long)]
        spec1: Option<String>,
        #[arg(long)]
        spec2: Option<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Exact integer sum of tau(a n) tau(b n) for n <= x
    #[command(name = "tau-corr")]
    TauCorr {
        #[arg(long, value_parser = count_arg)]
        a: u64,
        #[arg(long, value_parser = count_arg)]
        b: u64,
        #[arg(long)]
        x: f64,
    },
    /// n <= x coprime to m maximizing tau(n)
    Witness {
        #[arg(long, value_parser = count_arg)]
        m: u64,
        #[arg(long, value_parser = count_arg)]
        x: u64,
    },
    /// Partial sums of the parity self-convolution against +-4 x^(1/4)
    Figure1 {
        #[arg(long, value_parser = count_arg)]
        xmax: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t > 0 {
            // a failure here only means a pool already exists, which is fine
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build_global();
        }
    }
    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn budget_from(cli: &Cli) -> Result<MemoryBudget> {
    let gib = match cli.mem {
        Some(g) => g,
        None => match std::env::var("BPSLAB_MEM_GIB") {
            Ok(s) => s
                .parse::<f64>()
                .map_err(|_| Error::input(format!("BPSLAB_MEM_GIB is not a number: {s:?}")))?,
            Err(_) => 2.0,
        },
    };
    if gib.is_nan() || gib <= 0.0 {
        return Err(Error::input(format!(
            "memory budget must be positive, got {gib}"
        )));
    }
    Ok(MemoryBudget::from_gib(gib))
}

fn tolerance_from(cli: &Cli, default: f64) -> Result<f64> {
    let tol = cli.tol.unwrap_or(default);
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::input(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(tol)
}

fn resolve_spec_arg(s: &str) -> Result<MultiplicativeSpec> {
    if Path::new(s).exists() {
        MultiplicativeSpec::from_json_file(s)
    } else {
        MultiplicativeSpec::preset(s).map_err(|_| {
            Error::input(format!(
                "{s:?} is neither an existing spec file nor a preset name"
            ))
        })
    }
}

impl SpecSource {
    fn resolve(&self) -> Result<MultiplicativeSpec> {
        match (&self.spec, &self.preset) {
            (Some(_), Some(_)) => Err(Error::input("give either --spec or --preset, not both")),
            (Some(s), None) => resolve_spec_arg(s),
            (None, Some(p)) => MultiplicativeSpec::preset(p),
            (None, None) => Err(Error::input("missing function source: --spec or --preset")),
        }
    }
}

impl SpecPair {
    fn resolve(&self) -> Result<(MultiplicativeSpec, MultiplicativeSpec)> {
        Ok((
            resolve_spec_arg(&self.spec1)?,
            resolve_spec_arg(&self.spec2)?,
        ))
    }
}

fn csv_sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn fmt_complex(v: Complex64) -> String {
    format!("{} + {} i", fmt_float(v.re), fmt_float(v.im))
}

fn run(cli: &Cli) -> Result<i32> {
    let budget = budget_from(cli)?;
    match &cli.command {
        Command::Check { src } => {
            let spec = src.resolve()?;
            let tol = tolerance_from(cli, 1e-9)?;
            let report = spec.check_conditions(tol);
            println!("period m = {}", report.period);
            println!("stabilized prime-power values and coprime value 1: hold by construction");
            if report.entries.is_empty() {
                println!("no exceptional primes (constant function)");
            }
            for e in &report.entries {
                println!(
                    "euler factor at p = {}: {} (|.| = {}, zero: {})",
                    e.prime,
                    fmt_complex(e.factor),
                    fmt_float(e.factor.norm()),
                    e.is_zero
                );
            }
            println!(
                "period sum (formula) = {}",
                fmt_complex(spec.period_sum_formula())
            );
            if report.period <= 10_000_000 {
                let mut re = bpslab::CompensatedSum::default();
                let mut im = bpslab::CompensatedSum::default();
                for n in 1..=report.period {
                    let v = spec.evaluate(n);
                    re.add(v.re);
                    im.add(v.im);
                }
                println!(
                    "period sum (direct)  = {}",
                    fmt_complex(Complex64::new(re.value(), im.value()))
                );
            } else {
                println!(
                    "period sum (direct)  = skipped (period {} too large)",
                    report.period
                );
            }
            if report.condition_i_holds {
                println!("condition i: holds");
                println!("partial sums: bounded");
                Ok(0)
            } else {
                println!("condition i: fails (no Euler factor vanishes within {tol})");
                println!("partial sums: unbounded");
                Ok(2)
            }
        }

        Command::Eval { src, n } => {
            let spec = src.resolve()?;
            if *n < 1 {
                return Err(Error::input("eval requires n >= 1"));
            }
            println!("f({n}) = {}", fmt_complex(spec.evaluate(*n)));
            Ok(0)
        }

        Command::Sum { src, nmax, csv } => {
            let spec = src.resolve()?;
            let sums = ValueTable::sieve(&spec, *nmax, &budget)?.prefix_sums();
            let mut out = csv_sink(csv)?;
            write_csv(
                &mut out,
                &["x", "re", "im"],
                (1..=*nmax).map(|x| {
                    let v = sums.get(x);
                    vec![x.to_string(), fmt_float(v.re), fmt_float(v.im)]
                }),
            )?;
            out.flush()?;
            Ok(0)
        }

        Command::Convolve { pair, nmax, csv } => {
            let (s1, s2) = pair.resolve()?;
            let t1 = ValueTable::sieve(&s1, *nmax, &budget)?;
            let t2 = ValueTable::sieve(&s2, *nmax, &budget)?;
            let conv = dirichlet_convolve(&t1, &t2, &budget)?;
            let mut out = csv_sink(csv)?;
            write_csv(
                &mut out,
                &["n", "re", "im"],
                (1..=*nmax).map(|n| {
                    let v = conv.get(n);
                    vec![n.to_string(), fmt_float(v.re), fmt_float(v.im)]
                }),
            )?;
            out.flush()?;
            Ok(0)
        }

        Command::VerifyThm4 {
            pair,
            xmax,
            samples,
            seed,
            csv,
        } => {
            let (s1, s2) = pair.resolve()?;
            let tol = tolerance_from(cli, 1e-6)?;
            let coeffs = ConvolutionCoeffs::build(&s1, &s2)?;
            let m1m2 = coeffs.modulus_product as f64;
            if xmax.is_nan() || *xmax <= m1m2 {
                return Err(Error::input(format!(
                    "xmax = {xmax} must exceed m1*m2 = {m1m2}"
                )));
            }
            if *samples == 0 {
                return Err(Error::input("need at least one sample"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let xs: Vec<f64> = (0..*samples)
                .map(|_| m1m2 + (1.0 - rng.gen::<f64>()) * (*xmax - m1m2))
                .collect();
            let report = verify_delta_decomposition(&s1, &s2, &xs, &budget)?;
            let mut out = csv_sink(csv)?;
            write_csv(
                &mut out,
                &[
                    "x", "left_re", "left_im", "right_re", "right_im", "residual",
                ],
                report.samples.iter().map(|s| {
                    vec![
                        fmt_float(s.x),
                        fmt_float(s.left.re),
                        fmt_float(s.left.im),
                        fmt_float(s.right.re),
                        fmt_float(s.right.im),
                        fmt_float(s.residual),
                    ]
                }),
            )?;
            out.flush()?;
            eprintln!(
                "samples: {}  max residual = {}  max residual/(1+|S|) = {}",
                report.samples.len(),
                fmt_float(report.max_residual),
                fmt_float(report.max_scaled_residual)
            );
            if report.max_scaled_residual <= tol {
                eprintln!("identity verified within {tol}");
                Ok(0)
            } else {
                eprintln!("identity FAILED the {tol} gate");
                Ok(2)
            }
        }

        Command::Delta { x } => {
            println!("D({x}) = {}", tau_summatory(*x)?);
            println!("delta({x}) = {}", fmt_float(delta(*x)?));
            Ok(0)
        }

        Command::Tong { nmax } => {
            let t = tong_constant(*nmax, &budget)?;
            println!("n_max = {}", t.n_max);
            println!("A_series = {}", fmt_float(t.a_series));
            println!("A_zeta   = {}", fmt_float(t.a_zeta));
            println!("tail bracket = {}", fmt_float(t.tail_bracket));
            let gap = t.a_zeta - t.a_series;
            println!("gap (A_zeta - A_series) = {}", fmt_float(gap));
            println!(
                "gap within bracket: {}",
                if (0.0..=t.tail_bracket).contains(&gap) {
                    "yes"
                } else {
                    "NO"
                }
            );
            Ok(0)
        }

        Command::L2 { n, x, csv } => {
            let cache = (*x / *n as f64).floor() as u64;
            let ev = if cache >= 2 {
                DeltaEvaluator::with_cache(cache, &budget)?
            } else {
                DeltaEvaluator::new()
            };
            let norm = l2_norm_delta(*n, *x, &ev)?;
            let t = tong_constant(1000, &budget)?;
            let predicted = t.a_zeta * (*n as f64).powf(-0.5) * x.powf(1.5);
            let ratio = norm * norm / predicted;
            let mut out = csv_sink(csv)?;
            write_csv(
                &mut out,
                &["n", "X", "norm", "ratio_to_tong"],
                std::iter::once(vec![
                    n.to_string(),
                    fmt_float(*x),
                    fmt_float(norm),
                    fmt_float(ratio),
                ]),
            )?;
            out.flush()?;
            Ok(0)
        }

        Command::Gram {
            moduli,
            x,
            spec1,
            spec2,
            csv,
        } => {
            if moduli.is_empty() {
                return Err(Error::input("gram requires --moduli"));
            }
            let smallest = *moduli.iter().min().unwrap();
            let cache = (*x / smallest as f64).floor() as u64;
            let ev = if cache >= 2 {
                DeltaEvaluator::with_cache(cache, &budget)?
            } else {
                DeltaEvaluator::new()
            };
            let gram = gram_matrix(moduli, *x, &ev)?;
            let mut out = csv_sink(csv)?;
            write_csv(
                &mut out,
                &["i", "j", "value"],
                (0..gram.moduli.len()).flat_map(|i| {
                    let gram = &gram;
                    (0..gram.moduli.len()).map(move |j| {
                        vec![
                            (i + 1).to_string(),
                            (j + 1).to_string(),
                            fmt_float(gram.entries[i][j]),
                        ]
                    })
                }),
            )?;
            out.flush()?;
            eprintln!(
                "moduli: {}",
                gram.moduli
                    .iter()
                    .map(|m| m.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            );
            eprintln!(
                "eigenvalues: {}",
                gram.eigenvalues
                    .iter()
                    .map(|&v| fmt_float(v))
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            eprintln!(
                "eigenvalue signs: {}",
                gram.eigenvalues
                    .iter()
                    .map(|&v| if v > 0.0 {
                        "+"
                    } else if v < 0.0 {
                        "-"
                    } else {
                        "0"
                    })
                    .collect::<Vec<_>>()
                    .join("")
            );
            if let (Some(a), Some(b)) = (spec1, spec2) {
                let s1 = resolve_spec_arg(a)?;
                let s2 = resolve_spec_arg(b)?;
                let coeffs = ConvolutionCoeffs::build(&s1, &s2)?;
                let q = quadratic_form(&coeffs, &gram)?;
                eprintln!("quadratic form = {}", fmt_float(q));
            }
            Ok(0)
        }

        Command::TauCorr { a, b, x } => {
            println!("{}", tau_correlation(*a, *b, *x, &budget)?);
            Ok(0)
        }

        Command::Witness { m, x } => {
            if *x < 30 {
                return Err(Error::input("witness requires x >= 30"));
            }
            let w = omega_witness(*m, *x)?;
            println!("x = {}", w.x);
            println!("m = {}", w.modulus);
            println!("n = {}", w.n);
            println!("tau(n) = {}", w.tau);
            println!("omega(n) = {}", w.omega);
            println!(
                "ratio to exp(log2 * log x / log log x) = {}",
                fmt_float(w.ratio)
            );
            Ok(0)
        }

        Command::Figure1 { xmax, csv, svg } => {
            if *xmax < 16 {
                return Err(Error::input("figure1 requires xmax >= 16"));
            }
            let parity = MultiplicativeSpec::preset("parity").expect("built-in preset");
            let table = ValueTable::sieve(&parity, *xmax, &budget)?;
            let sums = dirichlet_convolve(&table, &table, &budget)?.prefix_sums();

            let mut first_violation: Option<u64> = None;
            let bound = |x: u64| 4.0 * (x as f64).powf(0.25);
            for x in 1..=*xmax {
                if sums.get(x).norm() > bound(x) {
                    first_violation = Some(x);
                    break;
                }
            }

            let mut out = csv_sink(csv)?;
            write_csv(
                &mut out,
                &["x", "partial_sum", "upper", "lower"],
                (1..=*xmax).map(|x| {
                    let b = bound(x);
                    vec![
                        x.to_string(),
                        fmt_float(sums.get(x).re),
                        fmt_float(b),
                        fmt_float(-b),
                    ]
                }),
            )?;
            out.flush()?;

            if let Some(path) = svg {
                let sum_pts: Vec<(f64, f64)> =
                    (1..=*xmax).map(|x| (x as f64, sums.get(x).re)).collect();
                let upper: Vec<(f64, f64)> = (1..=*xmax).map(|x| (x as f64, bound(x))).collect();
                let lower: Vec<(f64, f64)> = (1..=*xmax).map(|x| (x as f64, -bound(x))).collect();
                let rendered = render_svg(
                    &[
                        PolySeries {
                            points: sum_pts,
                            stroke: "black",
                            dashed: false,
                        },
                        PolySeries {
                            points: upper,
                            stroke: "gray",
                            dashed: true,
                        },
                        PolySeries {
                            points: lower,
                            stroke: "gray",
                            dashed: true,
                        },
                    ],
                    900,
                    500,
                );
                std::fs::write(path, rendered)?;
            }

            match first_violation {
                Some(x) => eprintln!(
                    "finding: |S(x)| first exceeds 4 x^(1/4) at x = {x} (S = {})",
                    fmt_float(sums.get(x).re)
                ),
                None => eprintln!("no bound violation for x <= {xmax}"),
            }
            Ok(0)
        }
    }
}
