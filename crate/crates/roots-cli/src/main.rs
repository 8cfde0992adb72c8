use anyhow::{anyhow, Result};
use clap::{Parser, Subcommand, ValueEnum};

use roots_cli::report::{RunDto, Table4Dto};
use roots_cli::{cap_from_env, table4_parallel, ExitHint};
use roots_core::analysis::{
    a_coeffs_at, base_error_constant, efficiency_index, jabotinsky_b, predicted_error_constant,
};
use roots_core::bench::{policy_for, run, DEFAULT_MAX_ITER};
use roots_core::methods::{all_methods, method_by_name, MethodSpec};
use roots_core::problems::{by_id, catalog, reference_root, Problem};
use roots_core::real::Ctx;

/// Multi-precision root-finding benchmark: base iterations of orders 2-4
/// and their composed variants boosted by an inverse-derivative correction.
#[derive(Parser)]
#[command(name = "roots", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Output {
    Table,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve one problem with one method under the adaptive digit schedule.
    Run {
        /// Method name: psi2_2, psi2_4, psi3_3, psi3_5, psi3_6, psi4_4,
        /// psi4_6, psi4_7, psi4_8
        #[arg(long)]
        method: String,
        /// Problem id: f1..f7
        #[arg(long)]
        problem: String,
        /// Target accuracy exponent: stop once |x_k - root| < 10^-eta
        #[arg(long, default_value_t = 3000)]
        eta: u32,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: u32,
        #[arg(long, value_enum, default_value_t = Output::Table)]
        output: Output,
    },
    /// Run all nine methods over the seven catalog problems and print the
    /// iteration-count matrix with Iter and TNFE totals.
    Table4 {
        #[arg(long, default_value_t = 3000)]
        eta: u32,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: u32,
        #[arg(long, value_enum, default_value_t = Output::Table)]
        output: Output,
    },
    /// Print a problem's scaled derivative coefficients, inverse-series
    /// coefficients, predicted error constants, and method efficiencies.
    Analyze {
        /// Problem id: f1..f7
        #[arg(long)]
        problem: String,
        /// Digits for the coefficient evaluation
        #[arg(long, default_value_t = 60)]
        digits: u32,
        /// Also run this method and report its measured convergence order
        #[arg(long)]
        method: Option<String>,
        /// Accuracy target for the optional run
        #[arg(long, default_value_t = 300)]
        eta: u32,
    },
    /// List methods and problems.
    List,
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(hint) => std::process::exit(hint.code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(ExitHint::Failure.code());
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitHint> {
    match cli.cmd {
        Cmd::Run { method, problem, eta, max_iter, output } => {
            cmd_run(&method, &problem, eta, max_iter, output)
        }
        Cmd::Table4 { eta, max_iter, output } => cmd_table4(eta, max_iter, output),
        Cmd::Analyze { problem, digits, method, eta } => {
            cmd_analyze(&problem, digits, method.as_deref(), eta)
        }
        Cmd::List => cmd_list(),
    }
}

fn lookup_method(name: &str) -> Result<MethodSpec> {
    method_by_name(name).ok_or_else(|| {
        let names: Vec<String> = all_methods().iter().map(|m| m.name()).collect();
        anyhow!("unknown method {name:?}; valid names: {}", names.join(", "))
    })
}

fn lookup_problem(id: &str) -> Result<Problem> {
    by_id(id).ok_or_else(|| anyhow!("unknown problem {id:?}; valid ids: f1..f7"))
}

fn cmd_run(method: &str, problem: &str, eta: u32, max_iter: u32, output: Output) -> Result<ExitHint> {
    let method = lookup_method(method)?;
    let problem = lookup_problem(problem)?;
    let cap = cap_from_env()?;
    let policy = policy_for(&method, eta, cap)?;
    let alpha_digits = policy.reference_digits();
    let alpha = reference_root(&problem, alpha_digits)?;
    let rec = roots_core::bench::run_with_root(
        &method,
        &problem,
        &policy,
        &alpha,
        alpha_digits,
        max_iter,
    )?;
    let dto = RunDto::from_record(&rec);
    match output {
        Output::Json => println!("{}", dto.to_json()),
        Output::Csv => print!("{}", dto.to_csv()),
        Output::Table => {
            print!("{}", dto.to_table());
            if rec.converged {
                if let Some(last) = rec.iterations.last() {
                    let ctx = Ctx::new(64)?;
                    let shown = Ctx::compress(&last.x, 50);
                    if let Ok(s) = ctx.format_full(&shown) {
                        println!("root (first ~50 digits): {s}");
                    }
                }
            }
        }
    }
    Ok(if rec.converged { ExitHint::Success } else { ExitHint::Diverged })
}

fn cmd_table4(eta: u32, max_iter: u32, output: Output) -> Result<ExitHint> {
    let cap = cap_from_env()?;
    let report = table4_parallel(eta, cap, max_iter)?;
    let dto = Table4Dto::from_report(&report);
    match output {
        Output::Json => println!("{}", dto.to_json()),
        Output::Csv => print!("{}", dto.to_csv()),
        Output::Table => print!("{}", dto.to_table()),
    }
    Ok(if report.has_divergence() { ExitHint::Diverged } else { ExitHint::Success })
}

fn cmd_analyze(problem: &str, digits: u32, method: Option<&str>, eta: u32) -> Result<ExitHint> {
    let problem = lookup_problem(problem)?;
    let ctx = Ctx::new(digits)?;
    let alpha = reference_root(&problem, digits)?;
    let coeffs = a_coeffs_at(&problem, &alpha, &ctx)?;

    println!("{}: f(x) = {}, x0 = {}", problem.id(), problem.expr(), problem.x0_literal());
    println!("root: {}", Ctx::compress(&alpha, 30).to_sci_string(25));
    println!("\nscaled derivative coefficients A_k = f^(k)/(k! f'):");
    for k in 2..=coeffs.highest() {
        if let Some(a) = coeffs.a(k) {
            println!("  A_{k} = {}", a.to_sci_string(12));
        }
    }
    println!("\ninverse-series coefficients f'(root)^q B_(q+1):");
    for q in 1..=4u32 {
        if coeffs.highest() > q {
            let b = jabotinsky_b(q, &coeffs, &ctx)?;
            println!("  q = {q}: {}", b.to_sci_string(12));
        } else {
            println!("  q = {q}: needs A_{} (unavailable for this problem)", q + 1);
        }
    }
    println!("\npredicted asymptotic error constants:");
    for m in all_methods() {
        let line = predicted_constant_line(&m, &coeffs, &ctx);
        println!("  {:<7} (order {}): {line}", m.name(), m.order());
    }
    println!("\nefficiency indices order^(1/evals):");
    for m in all_methods() {
        println!(
            "  {:<7} order {} with {} evals/step: {:.3}",
            m.name(),
            m.order(),
            m.evals_per_step(),
            efficiency_index(m.order(), m.evals_per_step())
        );
    }

    if let Some(name) = method {
        let m = lookup_method(name)?;
        let cap = cap_from_env()?;
        let policy = policy_for(&m, eta, cap)?;
        let rec = run(&m, &problem, &policy)?;
        println!("\nrun of {} at eta = {eta}:", m.name());
        println!("  converged: {}, iterations: {}, TNFE: {}", rec.converged, rec.iter_count, rec.tnfe);
        match rec.coc {
            Some(c) => println!("  COC: {c:.4} (theoretical order {})", m.order()),
            None => println!("  COC: n/a"),
        }
        if let Some(c) = rec.empirical_constant {
            println!("  measured |e_n|/|e_(n-1)|^{}: {c:.6}", m.order());
        }
        if !rec.converged {
            return Ok(ExitHint::Diverged);
        }
    }
    Ok(ExitHint::Success)
}

fn predicted_constant_line(
    m: &MethodSpec,
    coeffs: &roots_core::analysis::CoefficientVector,
    ctx: &Ctx,
) -> String {
    let k = match base_error_constant(m.p(), coeffs, ctx) {
        Ok(k) => k,
        Err(_) => return "needs higher derivatives at the root".to_string(),
    };
    if !m.is_composed() {
        return format!("K = {}", k.to_sci_string(10));
    }
    match predicted_error_constant(m.p(), m.q(), &k, coeffs, ctx) {
        Ok(model) => format!("C = {}", model.c.to_sci_string(10)),
        Err(_) => "needs higher derivatives at the root".to_string(),
    }
}

fn cmd_list() -> Result<ExitHint> {
    println!("methods (name: base order p, boost q, evals/step r, order, efficiency):");
    for m in all_methods() {
        println!(
            "  {:<7} p={} q={} r={} order={} EI={:.3}",
            m.name(),
            m.p(),
            m.q(),
            m.evals_per_step(),
            m.order(),
            m.efficiency_index()
        );
    }
    println!("\nproblems (id: f(x), x0, root to 7 digits):");
    for p in catalog() {
        println!(
            "  {}: {}  x0 = {}  root = {}",
            p.id(),
            p.expr(),
            p.x0_literal(),
            p.table_root().unwrap_or("?")
        );
    }
    Ok(ExitHint::Success)
}
