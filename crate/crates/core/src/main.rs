use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use torus3::decomp::{
    decompose, export, import_json, verify_decomposition, DecomposeOptions, ExportFormat,
};
use torus3::kempe::{color_signs, parity_barrier_report, sign_product};
use torus3::m4::m4_assignment;
use torus3::odd::{odd_closed_form, return_map_closed_form};
use torus3::route_e::{
    closed_form_branch, cross_check_r, defect_geometry, first_return, first_return_closed_form,
    route_e_assignment, splice_blocks, Variant,
};
use torus3::torus::{DirectionAssignment, COLORS};

#[derive(Parser)]
#[command(name = "torus3", version, about = "Hamilton decompositions of the directed 3-torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and certify the decomposition for a modulus
    Decompose(DecomposeArgs),
    /// Re-verify a previously exported JSON document
    Verify {
        /// Path to a JSON document produced by `decompose --format json`
        #[arg(long = "in")]
        input: String,
    },
    /// Permutation signs of the three color maps of a named coloring
    Sign {
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value = "canonical")]
        coloring: ColoringTag,
    },
    /// Print the section return map of one color
    ReturnMap {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        color: usize,
        #[arg(long, value_enum)]
        construction: Option<ConstructionTag>,
    },
    /// First-return lane dynamics of one color of the even construction
    FirstReturn {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        color: usize,
        #[arg(long, value_enum, default_value = "actual")]
        variant: VariantTag,
    },
    /// Non-generic points of the bulk-frame return map, as CSV
    Defects {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        color: usize,
        #[arg(long, value_enum, default_value = "csv")]
        emit: EmitTag,
    },
    /// Agreement of closed form, transducer, iteration and lane tables
    CrossCheck {
        #[arg(long)]
        m_min: usize,
        #[arg(long)]
        m_max: usize,
    },
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    m: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatTag,
    /// Write to this path instead of stdout
    #[arg(long)]
    out: Option<String>,
    /// Skip the explicit cycle listings
    #[arg(long)]
    no_cycles: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatTag {
    Json,
    Cycles,
    Arcs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ColoringTag {
    Canonical,
    Odd,
    RouteE,
    M4,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructionTag {
    Odd,
    RouteE,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantTag {
    Actual,
    Primary,
    DeletedRepair,
}

impl VariantTag {
    fn variant(self) -> Variant {
        match self {
            VariantTag::Actual => Variant::Actual,
            VariantTag::Primary => Variant::Primary,
            VariantTag::DeletedRepair => Variant::DeletedRepair,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitTag {
    Csv,
}

const USAGE: u8 = 2;
const FAILURE: u8 = 1;

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(USAGE)
}

fn check_color(color: usize) -> Result<(), ExitCode> {
    if color > 2 {
        Err(usage_error(&format!("color must be 0, 1 or 2, got {color}")))
    } else {
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Decompose(args) => cmd_decompose(args),
        Command::Verify { input } => cmd_verify(&input),
        Command::Sign { m, coloring } => cmd_sign(m, coloring),
        Command::ReturnMap { m, color, construction } => cmd_return_map(m, color, construction),
        Command::FirstReturn { m, color, variant } => cmd_first_return(m, color, variant),
        Command::Defects { m, color, emit } => cmd_defects(m, color, emit),
        Command::CrossCheck { m_min, m_max } => cmd_cross_check(m_min, m_max),
    }
}

fn cmd_decompose(args: DecomposeArgs) -> ExitCode {
    if args.m < 3 {
        return usage_error(&format!("modulus must be at least 3, got {}", args.m));
    }
    let fmt = match args.format {
        FormatTag::Json => ExportFormat::Json,
        FormatTag::Cycles => ExportFormat::CyclesText,
        FormatTag::Arcs => ExportFormat::ArcsEdgelist,
    };
    let opts = DecomposeOptions { with_cycles: !args.no_cycles, ..Default::default() };
    let dec = match decompose(args.m, &opts) {
        Ok(dec) => dec,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(FAILURE);
        }
    };
    let text = export(&dec, fmt);
    match args.out {
        Some(path) => {
            if let Err(e) = fs::write(&path, text) {
                eprintln!("error: cannot write {path}: {e}");
                return ExitCode::from(FAILURE);
            }
            eprintln!(
                "m = {}, case {}, certificate {}: written to {path}",
                dec.m,
                dec.construction.tag(),
                dec.certificate.method
            );
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}

fn cmd_verify(input: &str) -> ExitCode {
    let text = match fs::read_to_string(input) {
        Ok(text) => text,
        Err(e) => return usage_error(&format!("cannot read {input}: {e}")),
    };
    let dec = match import_json(&text) {
        Ok(dec) => dec,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(FAILURE);
        }
    };
    let report = verify_decomposition(&dec);
    println!("{report}");
    if report.ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(FAILURE)
    }
}

fn cmd_sign(m: usize, coloring: ColoringTag) -> ExitCode {
    if m < 3 {
        return usage_error(&format!("modulus must be at least 3, got {m}"));
    }
    let assign: DirectionAssignment = match coloring {
        ColoringTag::Canonical => DirectionAssignment::canonical(m),
        ColoringTag::Odd => odd_closed_form(m),
        ColoringTag::RouteE => match route_e_assignment(m) {
            Ok(a) => a,
            Err(e) => return usage_error(&e.to_string()),
        },
        ColoringTag::M4 => {
            if m != 4 {
                return usage_error("the m4 coloring exists only for m = 4");
            }
            m4_assignment()
        }
    };
    let signs = match color_signs(&assign) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(FAILURE);
        }
    };
    for c in COLORS {
        println!("color {c}: sign {:+}", signs[c]);
    }
    println!("product: {:+}", sign_product(&assign).unwrap());
    if matches!(coloring, ColoringTag::Canonical) && m % 2 == 0 {
        println!("{}", parity_barrier_report(m));
    }
    ExitCode::SUCCESS
}

fn cmd_return_map(m: usize, color: usize, construction: Option<ConstructionTag>) -> ExitCode {
    if let Err(code) = check_color(color) {
        return code;
    }
    let construction = construction.unwrap_or(if m % 2 == 1 {
        ConstructionTag::Odd
    } else {
        ConstructionTag::RouteE
    });
    match construction {
        ConstructionTag::Odd => {
            if m < 3 {
                return usage_error(&format!("modulus must be at least 3, got {m}"));
            }
            let f = return_map_closed_form(color, m);
            println!("return map of color {color} at m = {m} (odd form), (i, k) -> (i', k'):");
            for i in 0..m {
                let row: Vec<String> = (0..m)
                    .map(|k| {
                        let (a, b) = f.apply((i, k));
                        format!("({a},{b})")
                    })
                    .collect();
                println!("i={i}: {}", row.join(" "));
            }
        }
        ConstructionTag::RouteE => {
            println!(
                "return map of color {color} at m = {m} (even construction), branch:(i', k'):"
            );
            for i in 0..m {
                let mut row = Vec::with_capacity(m);
                for k in 0..m {
                    match closed_form_branch(color, m, i, k) {
                        Ok((branch, (a, b))) => row.push(format!("{branch}:({a},{b})")),
                        Err(e) => return usage_error(&e.to_string()),
                    }
                }
                println!("i={i}: {}", row.join(" "));
            }
        }
    }
    ExitCode::SUCCESS
}

fn cmd_first_return(m: usize, color: usize, variant: VariantTag) -> ExitCode {
    if let Err(code) = check_color(color) {
        return code;
    }
    let variant = variant.variant();
    let data = match first_return(color, m, variant) {
        Ok(d) => d,
        Err(e) => return usage_error(&e.to_string()),
    };
    println!("first-return lane map of color {color} at m = {m} ({variant:?}):");
    for x in 0..m {
        println!("T({x}) = {}, rho({x}) = {}", data.targets[x], data.times[x]);
    }
    println!("sum of return times: {} (m^2 = {})", data.rho_sum(), m * m);
    if variant == Variant::Actual {
        let table = first_return_closed_form(color, m).expect("modulus already validated");
        println!(
            "closed-form table agreement: {}",
            data.targets == table.targets && data.times == table.times
        );
        match splice_blocks(color, m) {
            Ok(s) => {
                for (j, b) in s.blocks.iter().enumerate() {
                    println!("block {j}: {:?} -> block {}", b, s.splice[j]);
                }
                println!("single cycle: {}", s.single_cycle);
            }
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(FAILURE);
            }
        }
    } else if let Some(cycles) = data.lane_cycles() {
        println!("lane map is a permutation with {} cycle(s):", cycles.len());
        for cyc in cycles {
            println!("  {cyc:?}");
        }
    } else {
        println!("lane map is NOT a permutation (the variant is not a valid coloring)");
    }
    ExitCode::SUCCESS
}

fn cmd_defects(m: usize, color: usize, _emit: EmitTag) -> ExitCode {
    if let Err(code) = check_color(color) {
        return code;
    }
    let defects = match defect_geometry(color, m) {
        Ok(d) => d,
        Err(e) => return usage_error(&e.to_string()),
    };
    println!("u,t,branch,delta_u,delta_t");
    for d in defects {
        println!(
            "{},{},{},{},{}",
            d.u, d.t, d.branch.label, d.branch.lane_delta, d.branch.clock_delta
        );
    }
    ExitCode::SUCCESS
}

fn cmd_cross_check(m_min: usize, m_max: usize) -> ExitCode {
    if m_min > m_max {
        return usage_error("m-min must not exceed m-max");
    }
    let mut all_ok = true;
    for m in m_min..=m_max {
        if m % 2 != 0 || m < 6 {
            continue;
        }
        let report = match cross_check_r(m) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("error at m = {m}: {e}");
                return ExitCode::from(FAILURE);
            }
        };
        let mut lanes_ok = true;
        for c in COLORS {
            let dynamic = first_return(c, m, Variant::Actual).expect("modulus is valid here");
            let table = first_return_closed_form(c, m).expect("modulus is valid here");
            lanes_ok &= dynamic.targets == table.targets && dynamic.times == table.times;
        }
        let ok = report.ok() && lanes_ok;
        all_ok &= ok;
        println!(
            "m = {m}: return maps {}, lane tables {}",
            if report.ok() { "agree" } else { "MISMATCH" },
            if lanes_ok { "agree" } else { "MISMATCH" }
        );
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(FAILURE)
    }
}
