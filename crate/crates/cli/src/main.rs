use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use octsum_core::escalator::DEFAULT_BOUND;
use octsum_core::verify::{verify_all_with, verify_theorem_with, CertVerdict};
use octsum_core::{
    classify, escalate, exceptions_up_to, oct_values_up_to, p8, represents, truant, Certificate,
    EscalationNode, OctSum, ResultCache, TheoremId, Verdict,
};

/// Largest bound accepted on the command line.
const MAX_BOUND: i64 = 1 << 34;

#[derive(Parser)]
#[command(
    name = "octsum",
    version,
    about = "Weighted sums of generalized octagonal numbers"
)]
struct Cli {
    /// Persistent result cache used by `verify` and `verify-all`.
    #[arg(long, global = true, env = "OCTSUM_CACHE")]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print P8(x) = 3x^2 - 2x.
    P8 {
        #[arg(allow_hyphen_values = true)]
        x: i64,
    },
    /// List the generalized octagonal numbers up to a bound.
    Values {
        #[arg(long, env = "OCTSUM_MAX", default_value_t = DEFAULT_BOUND)]
        max: i64,
    },
    /// Decide whether a sum represents n.
    Represent {
        #[arg(long, value_parser = parse_sum)]
        coeffs: OctSum,
        #[arg(long)]
        n: i64,
        /// Also print the lexicographically smallest witness.
        #[arg(long)]
        witness: bool,
    },
    /// List the positive integers up to a bound missed by a sum.
    Exceptions {
        #[arg(long, value_parser = parse_sum)]
        coeffs: OctSum,
        #[arg(long, env = "OCTSUM_MAX", default_value_t = DEFAULT_BOUND)]
        max: i64,
    },
    /// Print the least positive integer missed by a sum.
    Truant {
        #[arg(long, value_parser = parse_sum)]
        coeffs: OctSum,
        #[arg(long, env = "OCTSUM_MAX", default_value_t = DEFAULT_BOUND)]
        max: i64,
    },
    /// Build the escalation tree rooted at the empty sum.
    Escalate {
        #[arg(long)]
        depth: usize,
        #[arg(long, env = "OCTSUM_MAX", default_value_t = DEFAULT_BOUND)]
        max: i64,
        /// Write the tree as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Decide universality through the criterion set.
    Classify {
        #[arg(long, value_parser = parse_sum)]
        coeffs: OctSum,
        #[arg(long, env = "OCTSUM_MAX", default_value_t = DEFAULT_BOUND)]
        max: i64,
    },
    /// Run one verification pipeline.
    Verify {
        #[arg(long, value_parser = parse_theorem)]
        theorem: TheoremId,
        #[arg(long, env = "OCTSUM_MAX", default_value_t = DEFAULT_BOUND)]
        max: i64,
        /// Write the certificate here.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Run every pipeline and write one certificate per result.
    VerifyAll {
        #[arg(long, env = "OCTSUM_MAX", default_value_t = DEFAULT_BOUND)]
        max: i64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_sum(s: &str) -> Result<OctSum, String> {
    s.parse().map_err(|e: octsum_core::Error| e.to_string())
}

fn parse_theorem(s: &str) -> Result<TheoremId, String> {
    s.parse().map_err(|e: octsum_core::Error| e.to_string())
}

fn check_bound(max: i64) -> anyhow::Result<i64> {
    if !(1..=MAX_BOUND).contains(&max) {
        bail!("bound {max} outside 1..={MAX_BOUND}");
    }
    Ok(max)
}

fn join(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

fn print_node(node: &EscalationNode, indent: usize) {
    let status = match node.truant {
        Some(t) => format!("truant {t}"),
        None => "universal up to bound".to_string(),
    };
    println!(
        "{:indent$}({}) {status}",
        "",
        join(node.sum.coeffs()),
        indent = indent * 2
    );
    for c in &node.children {
        print_node(c, indent + 1);
    }
}

fn open_cache(path: Option<&Path>) -> anyhow::Result<ResultCache> {
    match path {
        Some(p) => ResultCache::load(p).with_context(|| format!("loading cache {}", p.display())),
        None => Ok(ResultCache::new()),
    }
}

fn close_cache(cache: &ResultCache, path: Option<&Path>) -> anyhow::Result<()> {
    if let Some(p) = path {
        cache
            .save(p)
            .with_context(|| format!("saving cache {}", p.display()))?;
    }
    Ok(())
}

fn summary(c: &Certificate) -> String {
    match &c.verdict {
        CertVerdict::Pass => {
            let mut s = format!("{} pass (max {})", c.theorem_id, c.bound);
            if !c.exceptions.is_empty() {
                s.push_str(&format!(", exceptions {{{}}}", join(&c.exceptions)));
            }
            s
        }
        CertVerdict::Fail { n, claim, detail } => {
            format!("{} FAIL at n = {n}: {claim}: {detail}", c.theorem_id)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let cache_path = cli.cache.as_deref();
    match cli.command {
        Command::P8 { x } => println!("{}", p8(x)?),
        Command::Values { max } => {
            for v in oct_values_up_to(check_bound(max)?) {
                println!("{v}");
            }
        }
        Command::Represent { coeffs, n, witness } => match represents(&coeffs, n)? {
            Some(w) if witness => println!("represented: x = ({})", join(&w.xs)),
            Some(_) => println!("represented"),
            None => {
                println!("not represented");
                return Ok(false);
            }
        },
        Command::Exceptions { coeffs, max } => {
            let ex = exceptions_up_to(&coeffs, check_bound(max)?)?;
            if ex.is_empty() {
                println!("none");
            } else {
                println!("{}", join(&ex));
            }
        }
        Command::Truant { coeffs, max } => match truant(&coeffs, check_bound(max)?)? {
            Some(t) => println!("{t}"),
            None => println!("none"),
        },
        Command::Escalate { depth, max, json } => {
            let tree = escalate(depth, check_bound(max)?)?;
            print_node(&tree.root, 0);
            if let Some(p) = json {
                fs::write(&p, tree.to_json()?)
                    .with_context(|| format!("writing {}", p.display()))?;
            }
        }
        Command::Classify { coeffs, max } => {
            let report = classify(&coeffs, check_bound(max)?)?;
            match report.verdict {
                Verdict::UniversalByCriterion => println!("universal"),
                Verdict::NotUniversal { n } => {
                    println!("not-universal({n})");
                    return Ok(false);
                }
                Verdict::BoundedUniversalUnproven { exceptions } => {
                    println!("bounded-universal-unproven({})", join(&exceptions));
                    return Ok(false);
                }
            }
        }
        Command::Verify { theorem, max, cert } => {
            let cache = open_cache(cache_path)?;
            let c = verify_theorem_with(theorem, check_bound(max)?, &cache)?;
            close_cache(&cache, cache_path)?;
            println!("{}", summary(&c));
            if let Some(p) = cert {
                c.write(&p)
                    .with_context(|| format!("writing {}", p.display()))?;
            }
            return Ok(c.passed());
        }
        Command::VerifyAll { max, out } => {
            let cache = open_cache(cache_path)?;
            let certs = verify_all_with(check_bound(max)?, &cache)?;
            close_cache(&cache, cache_path)?;
            fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            let mut ok = true;
            for c in &certs {
                c.write(&out.join(c.file_name()))?;
                println!("{}", summary(c));
                ok &= c.passed();
            }
            return Ok(ok);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
