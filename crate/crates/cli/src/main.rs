//! `cgd`: run, compose, lift and verify causal graph dynamics.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cgd_core::engine::composed_radius;
use cgd_core::verify::{render_json, render_text, SpaceOptions};
use cgd_core::{
    compose, compose_at_radius, export_dot, generate, io, lift_radius_one, parse_document, serialize_graph,
    Dynamics, Family, Graph, GraphDocument, Property, Rule, RuleSpec, Signature, Suite,
};

#[derive(Parser, Debug)]
#[command(name = "cgd", version, about = "Causal graph dynamics on port graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Iterate a rule and write every step to a directory.
    Run {
        #[arg(long)]
        rule: String,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
        /// Also write step_<k>.dot files.
        #[arg(long)]
        dot: bool,
        /// Accepted for uniform run configurations; evaluation is deterministic.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Apply the composition of two rules, rule1 first.
    Compose {
        #[arg(long)]
        rule1: String,
        #[arg(long)]
        rule2: String,
        #[arg(long)]
        input: PathBuf,
        /// Compare with evaluating the two rules one after the other.
        #[arg(long)]
        check_extensional: bool,
    },
    /// Simulate a rule of radius 2^l with a radius-one rule.
    Lift {
        #[arg(long)]
        rule: String,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        input: PathBuf,
        /// Compare the decoded result with one step of the rule.
        #[arg(long)]
        check: bool,
    },
    /// Check properties of a rule on sampled and enumerated graphs.
    Verify {
        #[arg(long)]
        rule: String,
        #[arg(long, default_value = "all")]
        properties: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        /// Bounds of the enumerated space, as n=3,sigma=2,pi=2.
        #[arg(long)]
        space: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Write a member of a graph family.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        states: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

enum Failure {
    /// A property or comparison did not hold.
    Verification(String),
    Usage(String),
    Engine(String),
}

impl Failure {
    fn usage(e: impl Display) -> Self {
        Failure::Usage(e.to_string())
    }

    fn engine(e: impl Display) -> Self {
        Failure::Engine(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            rule,
            input,
            steps,
            out,
            dot,
            seed: _,
        } => run(&rule, &input, steps, &out, dot),
        Command::Compose {
            rule1,
            rule2,
            input,
            check_extensional,
        } => compose_cmd(&rule1, &rule2, &input, check_extensional),
        Command::Lift { rule, l, input, check } => lift(&rule, l, &input, check),
        Command::Verify {
            rule,
            properties,
            samples,
            seed,
            space,
            format,
        } => verify(&rule, &properties, samples, seed, space.as_deref(), format),
        Command::Gen {
            family,
            n,
            states,
            out,
        } => gen(&family, n, states.as_deref(), &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("cgd: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("cgd: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Engine(msg)) => {
            eprintln!("cgd: {msg}");
            ExitCode::from(3)
        }
    }
}

fn read_input(path: &Path) -> Result<GraphDocument, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn build_rule(text: &str, context: Option<&Signature>) -> Result<Rule, Failure> {
    let spec: RuleSpec = text.parse().map_err(Failure::usage)?;
    spec.build(context).map_err(Failure::usage)
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn run(rule: &str, input: &Path, steps: usize, out: &Path, dot: bool) -> Outcome {
    let doc = read_input(input)?;
    let rule = build_rule(rule, Some(&doc.signature()))?;
    let trajectory = Dynamics::new(rule).run(&doc.graph, steps).map_err(Failure::engine)?;
    fs::create_dir_all(out).map_err(|e| Failure::usage(format!("{}: {e}", out.display())))?;
    for (k, g) in trajectory.iter().enumerate() {
        write(&out.join(format!("step_{k}.cgd")), &serialize_graph(g))?;
        if dot {
            write(&out.join(format!("step_{k}.dot")), &export_dot(g))?;
        }
        println!("step {k}: {} vertices, {} edges", g.len(), g.edge_count());
    }
    Ok(())
}

fn compose_cmd(rule1: &str, rule2: &str, input: &Path, check: bool) -> Outcome {
    let doc = read_input(input)?;
    let sig = doc.signature();
    let (f1, f2) = (build_rule(rule1, Some(&sig))?, build_rule(rule2, Some(&sig))?);
    let radius = composed_radius(f1.radius(), f2.radius());
    let composed = compose(f1.clone(), f2.clone()).map_err(Failure::usage)?;
    let result = Dynamics::new(composed).step(&doc.graph).map_err(Failure::engine)?;
    if !check {
        print!("{}", serialize_graph(&result));
        return Ok(());
    }
    let first = Dynamics::new(f1).step(&doc.graph).map_err(Failure::engine)?;
    let sequential = Dynamics::new(f2).step(&first).map_err(Failure::engine)?;
    if result == sequential {
        println!("extensional: PASS (composed radius {radius})");
        Ok(())
    } else {
        println!("extensional: FAIL (composed radius {radius})");
        print_witness("composed", &result);
        print_witness("sequential", &sequential);
        Err(Failure::Verification("composition differs from sequential evaluation".into()))
    }
}

fn print_witness(label: &str, g: &Graph) {
    println!("  {label}:");
    for line in serialize_graph(g).lines() {
        println!("    {line}");
    }
}

fn lift(rule: &str, l: u32, input: &Path, check: bool) -> Outcome {
    let doc = read_input(input)?;
    let sig = doc.signature();
    let rule = build_rule(rule, Some(&sig))?;
    let r = 1usize
        .checked_shl(l)
        .filter(|&r| r <= 1 << 20)
        .ok_or_else(|| Failure::usage(format!("l={l} is too large")))?;
    if rule.evaluation_radius() > r {
        return Err(Failure::usage(format!(
            "rule {} reads radius {}, more than 2^{l}",
            rule.name(),
            rule.evaluation_radius()
        )));
    }
    let widened = if rule.evaluation_radius() == r {
        rule.clone()
    } else {
        let id = RuleSpec::Identity.build(Some(rule.signature())).map_err(Failure::usage)?;
        compose_at_radius(id, rule.clone(), r).map_err(Failure::usage)?
    };
    let lifted = lift_radius_one(widened).map_err(Failure::usage)?;
    let encoded = lifted.encode(&doc.graph).map_err(Failure::usage)?;
    let trajectory = Dynamics::new(lifted.rule())
        .run(&encoded, lifted.steps())
        .map_err(Failure::engine)?;
    let decoded = lifted
        .decode(trajectory.last().expect("nonempty trajectory"))
        .map_err(Failure::engine)?;
    if !check {
        print!("{}", serialize_graph(&decoded));
        return Ok(());
    }
    let expected = Dynamics::new(rule).step(&doc.graph).map_err(Failure::engine)?;
    let summary = format!("l={l} degree={} steps={}", lifted.degree(), lifted.steps());
    if decoded == expected {
        println!("lift: PASS ({summary})");
        Ok(())
    } else {
        println!("lift: FAIL ({summary})");
        print_witness("decoded", &decoded);
        print_witness("expected", &expected);
        Err(Failure::Verification("lifted run differs from the rule".into()))
    }
}

fn verify(rule: &str, properties: &str, samples: usize, seed: u64, space: Option<&str>, format: Format) -> Outcome {
    let rule = build_rule(rule, None)?;
    let properties = Property::parse_list(properties).map_err(Failure::usage)?;
    let space: SpaceOptions = match space {
        Some(s) => s.parse().map_err(Failure::usage)?,
        None => SpaceOptions::default(),
    };
    let suite = Suite {
        samples,
        seed,
        space,
        ..Suite::default()
    };
    let reports = suite.run(&Dynamics::new(rule), &properties).map_err(Failure::usage)?;
    match format {
        Format::Text => print!("{}", render_text(&reports)),
        Format::Json => print!("{}", render_json(&reports)),
    }
    let failed: Vec<&str> = reports.iter().filter(|r| r.failed()).map(|r| r.property.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("failed: {}", failed.join(", "))))
    }
}

fn gen(family: &str, n: usize, states: Option<&str>, out: &Path) -> Outcome {
    let family: Family = family.parse().map_err(Failure::usage)?;
    let states = match states {
        Some(csv) => io::parse_states(csv).map_err(Failure::usage)?,
        None => Vec::new(),
    };
    let g = generate(family, n, &states).map_err(Failure::usage)?;
    write(out, &serialize_graph(&g))
}
