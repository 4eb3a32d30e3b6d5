use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use exptree_core::analysis::{core_entropy, same_map, tree_equivalent};
use exptree_core::audit::{run_audit, AuditBudget};
use exptree_core::corpus::{generate, CorpusConfig};
use exptree_core::export::{from_json, to_json, to_dot};
use exptree_core::partition::BaseWarning;
use exptree_core::realization::{default_boundary_range, separating_addresses, Slot};
use exptree_core::{
    addresses_of, build_tree_with, AddressTriod, Error, ExtAddress, Itinerary, Partition, SearchConfig, Triod,
    TriodShape,
};

const EXIT_FALSE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_BOUND: u8 = 4;

/// Abstract Hubbard trees of post-singularly finite exponential maps.
///
/// Addresses are written like `0(1)`, `0 (0 1)` or `-2,0(1)`: a preperiod,
/// then the period in parentheses. Itineraries may also be pre-singular,
/// e.g. `*` or `2,*`.
#[derive(Parser)]
#[command(name = "exptree", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(clap::Args, Clone)]
struct SearchArgs {
    /// Largest multiple of the itinerary period to search.
    #[arg(long, default_value_t = 8)]
    m_max: usize,
    /// Give up rather than enumerate more than 2^N candidates.
    #[arg(long, default_value_t = 20)]
    log2_cap: u32,
    /// Search past the first success and require nothing new.
    #[arg(long)]
    paranoid: bool,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            m_max: self.m_max,
            log2_cap: self.log2_cap,
            paranoid: self.paranoid,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the kneading sequence of a base address.
    Kneading {
        #[arg(value_parser = parse_address, allow_hyphen_values = true)]
        base: ExtAddress,
    },
    /// Print the itinerary of an address with respect to a base.
    Itinerary {
        #[arg(long, value_parser = parse_address, allow_hyphen_values = true)]
        base: ExtAddress,
        #[arg(value_parser = parse_address, allow_hyphen_values = true)]
        address: ExtAddress,
    },
    /// Build the Hubbard tree of a base address.
    Tree {
        #[arg(value_parser = parse_address, allow_hyphen_values = true)]
        base: ExtAddress,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Re-read the emitted JSON and re-verify every tree invariant.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Print the core entropy to 9 decimals.
    Entropy {
        #[arg(value_parser = parse_address, allow_hyphen_values = true)]
        base: ExtAddress,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Decide whether two bases describe the same map (exit 0 if so, 1 if not).
    SameMap {
        #[arg(value_parser = parse_address, allow_hyphen_values = true)]
        first: ExtAddress,
        #[arg(value_parser = parse_address, allow_hyphen_values = true)]
        second: ExtAddress,
    },
    /// List the external addresses with a given itinerary.
    AddressesOf {
        #[arg(long, value_parser = parse_address, allow_hyphen_values = true)]
        base: ExtAddress,
        #[arg(value_parser = parse_itinerary, allow_hyphen_values = true)]
        itinerary: Itinerary,
        /// Boundary indices m of the addresses m·s used for pre-singular itineraries.
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
        range: Option<Vec<i64>>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Place the separating addresses of an address triod in its gaps.
    Separate {
        #[arg(long, value_parser = parse_address, allow_hyphen_values = true)]
        base: ExtAddress,
        #[arg(value_parser = parse_address, allow_hyphen_values = true, num_args = 3, required = true)]
        members: Vec<ExtAddress>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Print the middle point and shape of a triod of itineraries.
    Triod {
        #[arg(long, value_parser = parse_address, allow_hyphen_values = true)]
        base: ExtAddress,
        #[arg(value_parser = parse_itinerary, allow_hyphen_values = true, num_args = 3, required = true)]
        members: Vec<Itinerary>,
    },
    /// Run the property suites over a seeded random corpus.
    Verify {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        max_preperiod: u64,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
        max_period: u64,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(i64).range(1..=1000))]
        entry_range: i64,
        #[command(flatten)]
        search: SearchArgs,
    },
}

fn parse_address(text: &str) -> Result<ExtAddress, String> {
    text.parse().map_err(|e: Error| e.to_string())
}

fn parse_itinerary(text: &str) -> Result<Itinerary, String> {
    text.parse().map_err(|e: Error| e.to_string())
}

fn partition(base: &ExtAddress) -> Result<Partition, Error> {
    let p = Partition::new(base.clone())?;
    if let Some(BaseWarning::NonZeroLeadingEntry(k)) = p.warning() {
        eprintln!("warning: base starts with {k}; bases are usually normalized to start with 0");
    }
    Ok(p)
}

fn shape_text(shape: TriodShape) -> String {
    match shape {
        TriodShape::Branched => "branched".into(),
        TriodShape::Linear { middle } => format!("linear, middle member {middle}"),
        TriodShape::PreSingularBranched => "branched, pre-singular middle point".into(),
        TriodShape::PreSingularLinear { middle } => {
            format!("linear, middle member {middle}, pre-singular middle point")
        }
    }
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Kneading { base } => {
            println!("{}", partition(&base)?.kneading());
        }
        Command::Itinerary { base, address } => {
            println!("{}", partition(&base)?.itinerary(&address));
        }
        Command::Tree {
            base,
            format,
            check,
            search,
        } => {
            let tree = build_tree_with(&partition(&base)?, &search.config())?;
            let json = to_json(&tree);
            if check {
                let back = from_json(&json)?;
                if !tree_equivalent(&tree, &back) {
                    return Err(Error::InvariantViolation("JSON round trip changed the tree".into()));
                }
            }
            match format {
                Format::Json => println!("{json}"),
                Format::Dot => print!("{}", to_dot(&tree)),
            }
            for (v, count) in tree.surplus_accesses() {
                eprintln!(
                    "note: {} has {count} landing addresses but degree {}",
                    tree.itinerary(*v),
                    tree.degree(*v)
                );
            }
        }
        Command::Entropy { base, tol, search } => {
            if tol.is_nan() || tol <= 0.0 {
                eprintln!("error: --tol must be positive");
                return Ok(EXIT_USAGE);
            }
            let tree = build_tree_with(&partition(&base)?, &search.config())?;
            println!("{:.9}", core_entropy(&tree, tol)?);
        }
        Command::SameMap { first, second } => {
            let same = same_map(&first, &second)?;
            println!("{same}");
            return Ok(if same { 0 } else { EXIT_FALSE });
        }
        Command::AddressesOf {
            base,
            itinerary,
            range,
            search,
        } => {
            let p = partition(&base)?;
            let range = match range.as_deref() {
                Some(&[lo, hi]) => lo..=hi,
                _ => default_boundary_range(&p),
            };
            let set = addresses_of(&p, &itinerary, &search.config(), Some(range))?;
            for a in set.iter() {
                println!("{a}");
            }
        }
        Command::Separate { base, members, search } => {
            let p = partition(&base)?;
            let members: [ExtAddress; 3] = members.try_into().expect("clap enforces three members");
            let triod = AddressTriod::new(members, &p)?;
            let sep = separating_addresses(&p, &triod, &search.config())?;
            println!("middle: {}", sep.middle);
            println!("shape: {}", shape_text(sep.shape));
            for (slot, a) in &sep.placements {
                match slot {
                    Slot::Gap(i) => println!("gap {i}: {a}"),
                    Slot::Member(j) => println!("member {j}: {a}"),
                }
            }
        }
        Command::Triod { base, members } => {
            let p = partition(&base)?;
            let members: [Itinerary; 3] = members.try_into().expect("clap enforces three members");
            let triod = Triod::new(members, p.kneading())?;
            let resolution = triod.resolve();
            println!("middle: {}", resolution.middle);
            println!("shape: {}", shape_text(triod.classify()));
            if let Some(i0) = resolution.steps_before_stop {
                println!("stop after: {i0}");
            }
        }
        Command::Verify {
            count,
            seed,
            max_preperiod,
            max_period,
            entry_range,
            search,
        } => {
            let bases = generate(&CorpusConfig {
                count,
                seed,
                max_preperiod: max_preperiod as usize,
                max_period: max_period as usize,
                entry_range,
            });
            if bases.is_empty() {
                eprintln!("error: --count must be positive");
                return Ok(EXIT_USAGE);
            }
            let report = run_audit(&bases, &AuditBudget::default(), seed, &search.config());
            println!("{report}");
            return Ok(if report.passed() { 0 } else { EXIT_FALSE });
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(match e {
                Error::RealizationBoundExceeded { .. } => EXIT_BOUND,
                Error::Parse { .. } => EXIT_USAGE,
                _ => EXIT_DOMAIN,
            })
        }
    }
}
