//! Command-line surface for the Liouvillian solvability engine.
//!
//! Exit codes: 0 success (or an Integrable verdict), 1 not integrable up to
//! the bound, 2 input error, 3 needs a field extension, 4 empty class (C4).

mod output;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use liouville_core::aim::{self, UNIVERSAL_CAP_DEFAULT};
use liouville_core::kovacic::{
    self, classify, Classification, EquationInput, Sign, Signs,
};
use liouville_core::parser::{parse, ExprSource};
use liouville_core::pipeline::{self, VerdictStatus};
use liouville_core::params::{ParamRing, Symbol};

const EXIT_OK: u8 = 0;
const EXIT_NOT_INTEGRABLE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NEEDS_EXTENSION: u8 = 3;
const EXIT_EMPTY_CLASS: u8 = 4;

#[derive(Parser)]
#[command(
    name = "liouville",
    about = "Decide Liouvillian solvability of y'' = L(x) y for Laurent polynomial L",
    long_about = "Decide whether y'' = L(x) y admits Liouvillian solutions, construct them, \
                  and emit spectral-variety equations for parametric families.\n\n\
                  Expressions use the grammar: expr := [\"-\"] term ((\"+\"|\"-\") term)*; \
                  term := factor ((\"*\"|\"/\") factor)*; factor := base (\"^\" int)?; \
                  base := integer | symbol | \"x\" | \"(\" expr \")\". \
                  No implicit multiplication. Division only by nonzero rationals, powers of x, \
                  or parameters declared invertible."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Emit deterministic machine-readable JSON on stdout
    #[arg(long, global = true)]
    json: bool,
    /// Include wall-clock timings in JSON output (breaks byte-determinism)
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Args)]
struct InputArgs {
    /// Coefficient L(x) as an expression
    #[arg(long, conflicts_with = "cover")]
    expr: Option<String>,
    /// Cover-space input "R;B;A" (three expressions, L = R^2 + B + A^2)
    #[arg(long)]
    cover: Option<String>,
    /// Parameter declarations: comma-separated names, ":inv" marks a symbol
    /// invertible (e.g. "k0,k1,r:inv")
    #[arg(long, default_value = "")]
    params: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a type (r, m) into C1..C4
    Classify {
        /// Pole order at the origin (r >= 1)
        #[arg(long)]
        r: i64,
        /// Degree at infinity (m >= 0)
        #[arg(long)]
        m: i64,
    },
    /// Quadratic-residue decomposition of the coefficient
    Decompose {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Enumerate solution candidates (concrete coefficients only)
    Candidates {
        #[command(flatten)]
        input: InputArgs,
        /// Largest candidate degree to keep
        #[arg(long, default_value_t = 25)]
        dmax: usize,
    },
    /// Obstruction polynomials: universal or evaluated at f, g
    Delta {
        /// Universal mode: the differential polynomial in alpha, beta
        #[arg(long)]
        universal: bool,
        /// Index of the obstruction
        #[arg(long)]
        d: usize,
        /// Cap override for universal mode
        #[arg(long, default_value_t = UNIVERSAL_CAP_DEFAULT)]
        cap: usize,
        /// Coefficient of y' in y'' = f y' + g y
        #[arg(long, requires = "g", conflicts_with = "universal")]
        f: Option<String>,
        /// Coefficient of y in y'' = f y' + g y
        #[arg(long, requires = "f", conflicts_with = "universal")]
        g: Option<String>,
        /// Parameter declarations for f and g
        #[arg(long, default_value = "")]
        params: String,
    },
    /// Decide solvability and construct solutions
    Solve {
        #[command(flatten)]
        input: InputArgs,
        /// Largest candidate degree to examine
        #[arg(long, default_value_t = 25)]
        dmax: usize,
    },
    /// Emit the spectral-variety system of a parametric family
    Variety {
        /// Family coefficient with parameters
        #[arg(long, conflicts_with = "cover")]
        family: Option<String>,
        /// Cover-space family "R;B;A"
        #[arg(long)]
        cover: Option<String>,
        /// Parameter declarations (see --params above)
        #[arg(long)]
        params: String,
        /// Stratum degree
        #[arg(long)]
        d: usize,
        /// Sign pattern: first character s_inf, second s0; "." for absent
        /// (e.g. "+." for s_inf=+1 with no s0, "+-" for s_inf=+1, s0=-1)
        #[arg(long)]
        signs: String,
    },
}

struct Failure {
    message: String,
    code: u8,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { message: message.into(), code: EXIT_INPUT }
    }
}

fn parse_ring(decl: &str) -> Result<ParamRing, Failure> {
    let mut symbols = Vec::new();
    for piece in decl.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, inv) = match piece.strip_suffix(":inv") {
            Some(n) => (n.trim(), true),
            None => (piece, false),
        };
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Failure::input(format!("invalid parameter declaration `{piece}`")));
        }
        symbols.push(if inv { Symbol::invertible(name) } else { Symbol::new(name) });
    }
    ParamRing::new(symbols).map_err(|e| Failure::input(e.to_string()))
}

fn parse_expr(text: &str, ring: &ParamRing) -> Result<liouville_core::LaurentPolynomial, Failure> {
    parse(&ExprSource::new(text, ring.clone())).map_err(|e| Failure::input(e.to_string()))
}

fn parse_input(input: &InputArgs) -> Result<(EquationInput, ParamRing), Failure> {
    let ring = parse_ring(&input.params)?;
    match (&input.expr, &input.cover) {
        (Some(expr), None) => {
            let l = parse_expr(expr, &ring)?;
            let eq = EquationInput::direct(l).map_err(|e| Failure::input(e.to_string()))?;
            Ok((eq, ring))
        }
        (None, Some(cover)) => {
            let parts: Vec<&str> = cover.split(';').collect();
            if parts.len() != 3 {
                return Err(Failure::input(
                    "cover input must be three ';'-separated expressions \"R;B;A\"",
                ));
            }
            let r = parse_expr(parts[0], &ring)?;
            let b = parse_expr(parts[1], &ring)?;
            let a = parse_expr(parts[2], &ring)?;
            let eq = EquationInput::cover(r, b, a).map_err(|e| Failure::input(e.to_string()))?;
            Ok((eq, ring))
        }
        (None, None) => Err(Failure::input("exactly one of --expr or --cover is required")),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    }
}

fn parse_signs(text: &str) -> Result<Signs, Failure> {
    let chars: Vec<char> = text.chars().collect();
    let sign_of = |c: char| match c {
        '+' => Ok(Some(Sign::Plus)),
        '-' => Ok(Some(Sign::Minus)),
        '.' => Ok(None),
        other => Err(Failure::input(format!("invalid sign character `{other}` (use +, -, .)"))),
    };
    match chars.as_slice() {
        [i] => {
            let s_inf = sign_of(*i)?
                .ok_or_else(|| Failure::input("s_inf must be + or -"))?;
            Ok(Signs::inf_only(s_inf))
        }
        [i, z] => {
            let s_inf = sign_of(*i)?
                .ok_or_else(|| Failure::input("s_inf must be + or -"))?;
            Ok(Signs { s_inf, s0: sign_of(*z)? })
        }
        _ => Err(Failure::input("--signs takes one or two characters, e.g. \"+.\" or \"+-\"")),
    }
}

fn run(cli: &Cli) -> Result<(String, u8), Failure> {
    let started = Instant::now();
    match &cli.cmd {
        Cmd::Classify { r, m } => {
            if *r < 1 || *m < 0 {
                return Err(Failure::input("classify requires r >= 1 and m >= 0"));
            }
            let class = classify(*r, *m);
            let code = if class == Classification::C4 { EXIT_EMPTY_CLASS } else { EXIT_OK };
            let text = if cli.json {
                output::json_classify(*r, *m, class, timing(cli, started))
            } else {
                format!("type: ({r}, {m})\nclass: {class}\n")
            };
            Ok((text, code))
        }
        Cmd::Decompose { input } => {
            let (eq, _ring) = parse_input(input)?;
            let dec = kovacic::decompose(&eq).map_err(map_decompose_error)?;
            let text = if cli.json {
                output::json_decompose(&dec, timing(cli, started))
            } else {
                output::text_decompose(&dec)
            };
            Ok((text, EXIT_OK))
        }
        Cmd::Candidates { input, dmax } => {
            let (eq, _ring) = parse_input(input)?;
            let dec = kovacic::decompose(&eq).map_err(map_decompose_error)?;
            let survey = kovacic::sign_survey(&dec, *dmax)
                .map_err(|e| Failure::input(e.to_string()))?;
            let text = if cli.json {
                output::json_candidates(&dec, &survey, timing(cli, started))
            } else {
                output::text_candidates(&dec, &survey)
            };
            Ok((text, EXIT_OK))
        }
        Cmd::Delta { universal, d, cap, f, g, params } => {
            if *universal {
                let poly = aim::delta_universal_with_cap(*d, *cap)
                    .map_err(|e| Failure::input(e.to_string()))?;
                let text = if cli.json {
                    output::json_delta_universal(*d, &poly, timing(cli, started))
                } else {
                    format!("Delta_{d} = {poly}\n")
                };
                return Ok((text, EXIT_OK));
            }
            let (Some(f), Some(g)) = (f, g) else {
                return Err(Failure::input("delta needs --universal or both --f and --g"));
            };
            let ring = parse_ring(params)?;
            let fp = parse_expr(f, &ring)?;
            let gp = parse_expr(g, &ring)?;
            let value = aim::delta(&fp, &gp, *d);
            let text = if cli.json {
                output::json_delta_evaluated(*d, &value, timing(cli, started))
            } else {
                format!("Delta_{d}(f, g) = {value}\n")
            };
            Ok((text, EXIT_OK))
        }
        Cmd::Solve { input, dmax } => {
            let (eq, _ring) = parse_input(input)?;
            let verdict = pipeline::solve(&eq, *dmax).map_err(|e| Failure::input(e.to_string()))?;
            let code = match &verdict.status {
                VerdictStatus::Integrable(_) => EXIT_OK,
                VerdictStatus::NotIntegrableUpTo(_) => EXIT_NOT_INTEGRABLE,
                VerdictStatus::NeedsExtension(_) => EXIT_NEEDS_EXTENSION,
                VerdictStatus::EmptyClass => EXIT_EMPTY_CLASS,
            };
            let text = if cli.json {
                output::json_solve(&eq, &verdict, *dmax, timing(cli, started))
            } else {
                output::text_solve(&eq, &verdict, *dmax)
            };
            Ok((text, code))
        }
        Cmd::Variety { family, cover, params, d, signs } => {
            let input = InputArgs {
                expr: family.clone(),
                cover: cover.clone(),
                params: params.clone(),
            };
            let (eq, _ring) = parse_input(&input)?;
            let signs = parse_signs(signs)?;
            let sys = pipeline::variety_equations(&eq, *d, signs).map_err(map_variety_error)?;
            let text = if cli.json {
                output::json_variety(&sys, timing(cli, started))
            } else {
                output::text_variety(&sys)
            };
            Ok((text, EXIT_OK))
        }
    }
}

fn timing(cli: &Cli, started: Instant) -> Option<f64> {
    cli.timings.then(|| started.elapsed().as_secs_f64())
}

fn map_decompose_error(e: kovacic::DecomposeError) -> Failure {
    use kovacic::DecomposeError::*;
    match e {
        NonSquareLeading(_) | NonSquareAtZero(_) | Division(_) => {
            Failure { message: e.to_string(), code: EXIT_NEEDS_EXTENSION }
        }
        WrongShape(msg) if msg.contains("class C4") => {
            Failure { message: msg, code: EXIT_EMPTY_CLASS }
        }
        WrongShape(msg) => Failure::input(msg),
    }
}

fn map_variety_error(e: pipeline::VarietyError) -> Failure {
    use pipeline::VarietyError::*;
    match e {
        Decompose(inner) => map_decompose_error(inner),
        RequiresExtension(msg) => Failure { message: msg, code: EXIT_NEEDS_EXTENSION },
        InvalidSigns(msg) | NonPolynomialObstruction(msg) => Failure::input(msg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
