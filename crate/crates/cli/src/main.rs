use std::fs::File;
use std::io::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pw_unify::oracle::{self, Agreement, SimpleTerm};
use pw_unify::{
    families, parse_term, render_trace_line, solve, Outcome, Phase, Rendered, SolveConfig,
    TermAst, TermDag, Variant,
};

// Exit codes: 0 unified; 1 clash; 2 cycle; 3 non-termination guard;
// 4 parse/arity error; 5 oracle disagreement.
const EXIT_UNIFIED: u8 = 0;
const EXIT_CLASH: u8 = 1;
const EXIT_CYCLE: u8 = 2;
const EXIT_NON_TERMINATION: u8 = 3;
const EXIT_INPUT_ERROR: u8 = 4;
const EXIT_ORACLE_DISAGREEMENT: u8 = 5;

#[derive(Parser)]
#[command(name = "pwu", about = "Linear-time unification over shared term DAGs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Unify two terms and print the substitution or a failure diagnosis.
    Unify(UnifyArgs),
    /// Run a generator family at increasing sizes and emit step-count CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
struct UnifyArgs {
    term_a: String,
    term_b: String,
    #[arg(long, value_enum, default_value_t = VariantArg::Fixed)]
    variant: VariantArg,
    /// Print the main-phase trace (to stderr) before the verdict.
    #[arg(long)]
    trace: bool,
    /// Cross-check the verdict against the Robinson oracle.
    #[arg(long)]
    check: bool,
    /// Step budget; defaults to 100 * (node count + 1).
    #[arg(long)]
    budget: Option<u64>,
    /// Largest term, in symbols, printed in full.
    #[arg(long, default_value_t = 4096)]
    size_cap: u128,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Fixed,
    Buggy,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Fixed => Variant::Fixed,
            VariantArg::Buggy => Variant::PublishedBuggy,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Chain,
    Sharing,
}

#[derive(Args)]
struct BenchArgs {
    family: Family,
    /// Comma-separated instance sizes, ascending.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    /// Write the CSV to a file instead of standard output.
    #[arg(long)]
    csv: Option<std::path::PathBuf>,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Unify(args) => cmd_unify(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn parse_input(text: &str, what: &str) -> Result<TermAst, ExitCode> {
    parse_term(text).map_err(|e| {
        eprintln!("{}: {}", what, e);
        ExitCode::from(EXIT_INPUT_ERROR)
    })
}

fn cmd_unify(args: UnifyArgs) -> ExitCode {
    let ast_a = match parse_input(&args.term_a, "term A") {
        Ok(ast) => ast,
        Err(code) => return code,
    };
    let ast_b = match parse_input(&args.term_b, "term B") {
        Ok(ast) => ast,
        Err(code) => return code,
    };

    // Both terms go into one DAG so same-named variables are shared nodes.
    let mut dag = TermDag::new();
    let interned = dag.intern(&ast_a).and_then(|u| {
        let v = dag.intern(&ast_b)?;
        Ok((u, v))
    });
    let (u, v) = match interned {
        Ok(pair) => pair,
        Err(e) => {
            eprintln!("{}", e);
            return ExitCode::from(EXIT_INPUT_ERROR);
        }
    };
    dag.register_root(u);
    dag.register_root(v);

    let mut config = SolveConfig::new(args.variant.into()).with_trace(args.trace);
    if let Some(budget) = args.budget {
        config = config.with_budget(budget.max(1));
    }
    let report = solve(&mut dag, u, v, &config);

    if args.trace {
        for event in &report.trace {
            eprintln!("{}", render_trace_line(&dag, event));
        }
    }

    let mut code = match &report.outcome {
        Outcome::Unified(subst) => {
            for &(var, term) in &subst.bindings {
                let name = &dag.symbol(var).name;
                match dag.print_term(term, args.size_cap.max(1)) {
                    Rendered::Text(text) => println!("{} = {}", name, text),
                    Rendered::SizeExceeded { symbols } => {
                        println!("{} = <dag:{} symbols>", name, symbols)
                    }
                }
            }
            eprintln!("unified ({} bindings)", subst.bindings.len());
            EXIT_UNIFIED
        }
        Outcome::Clash(a, b) => {
            let (sa, sb) = (dag.symbol(*a), dag.symbol(*b));
            eprintln!("clash: {}/{} vs {}/{}", sa.name, sa.arity, sb.name, sb.arity);
            EXIT_CLASH
        }
        Outcome::Cycle(node) => {
            eprintln!("cycle: occurs check at {}", dag.display_node(*node));
            EXIT_CYCLE
        }
        Outcome::NonTermination { phase, steps } => {
            let phase = match phase {
                Phase::Main => "MAIN",
                Phase::BuildSigma => "BUILD-SIGMA",
            };
            eprintln!(
                "non-termination guard tripped after {} steps in {}",
                steps, phase
            );
            EXIT_NON_TERMINATION
        }
    };

    if args.check {
        let a = SimpleTerm::from_ast(&ast_a);
        let b = SimpleTerm::from_ast(&ast_b);
        match oracle::check_against_oracle(&dag, &report.outcome, &a, &b) {
            Agreement::Agree => eprintln!("oracle: agree"),
            Agreement::Disagree(reason) => {
                eprintln!("oracle: DISAGREE ({})", reason);
                code = EXIT_ORACLE_DISAGREEMENT;
            }
        }
    }

    ExitCode::from(code)
}

fn cmd_bench(args: BenchArgs) -> ExitCode {
    let mut out = String::from("n,nodes,links,steps,wall_micros\n");
    for &n in &args.sizes {
        let (ast_a, ast_b) = match args.family {
            Family::Chain => families::chain(n),
            Family::Sharing => families::sharing(n),
        };
        let start = Instant::now();
        let mut dag = TermDag::new();
        let u = dag.intern(&ast_a).expect("family has a fixed signature");
        let v = dag.intern(&ast_b).expect("family has a fixed signature");
        let nodes = dag.node_count();
        let report = solve(&mut dag, u, v, &SolveConfig::new(Variant::Fixed));
        let wall_micros = start.elapsed().as_micros();
        if !matches!(report.outcome, Outcome::Unified(_)) {
            eprintln!("n={}: unexpected outcome {:?}", n, report.outcome);
            return ExitCode::from(EXIT_NON_TERMINATION);
        }
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            n, nodes, report.links_created, report.steps, wall_micros
        ));
    }
    match args.csv {
        Some(path) => {
            let written = File::create(&path).and_then(|mut f| f.write_all(out.as_bytes()));
            if let Err(e) = written {
                eprintln!("cannot write {}: {}", path.display(), e);
                return ExitCode::from(EXIT_INPUT_ERROR);
            }
        }
        None => print!("{}", out),
    }
    ExitCode::from(EXIT_UNIFIED)
}
