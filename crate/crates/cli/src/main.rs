//! `k3walls` command-line tool.

mod commands;
mod golden;
mod input;
mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use k3walls::diophantine::{BinaryForm, RepresentMode};
use k3walls::wall::{Orientation, WallLattice};

use commands::{ConeKind, Output};
use input::{InputError, Parsed};

#[derive(Parser)]
#[command(name = "k3walls", version, about = "Wall and cone computations for moduli of sheaves on K3 surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum Format {
    #[default]
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Plus,
    Minus,
}

#[derive(Args)]
struct LatticeArgs {
    /// Lattice as inline JSON or a path to a JSON file.
    #[arg(long)]
    lattice: String,
    /// Mukai vector, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    v: String,
}

#[derive(Args)]
struct ConeArgs {
    #[command(flatten)]
    lat: LatticeArgs,
    /// Rays spanning the search region, `;` between rays, `,` between entries.
    #[arg(long, allow_hyphen_values = true)]
    region: String,
    /// Reference ample class in v⊥; entries may be fractions.
    #[arg(long, allow_hyphen_values = true)]
    ample: String,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Mukai pairing of two vectors.
    Pair {
        /// Lattice as inline JSON or a path to a JSON file.
        #[arg(long)]
        lattice: String,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Classify the wall spanned by v and a.
    Classify {
        #[command(flatten)]
        lat: LatticeArgs,
        /// Second class spanning the wall lattice with v.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Minimal class of v in the wall lattice of (v, a).
    Minimal {
        #[command(flatten)]
        lat: LatticeArgs,
        /// Second class spanning the wall lattice with v.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// Which side of the wall: the chamber containing v⊥ (plus) or the adjacent one.
        #[arg(long, value_enum, default_value_t = Side::Plus)]
        orientation: Side,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Reflection orbit of the minimal class.
    Orbit {
        #[command(flatten)]
        lat: LatticeArgs,
        /// Second class spanning the wall lattice with v.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// Which side of the wall: the chamber containing v⊥ (plus) or the adjacent one.
        #[arg(long, value_enum, default_value_t = Side::Plus)]
        orientation: Side,
        /// Number of orbit elements on each side of the minimal class.
        #[arg(long, default_value_t = 3)]
        count: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Walls of the nef cone inside a search region.
    Nef(ConeArgs),
    /// Walls of the movable cone inside a search region.
    Movable(ConeArgs),
    /// Generators of the Mori cone from walls inside a search region.
    Mori(ConeArgs),
    /// Exceptional generators of the effective cone up to an ample degree.
    Effective {
        #[command(flatten)]
        lat: LatticeArgs,
        /// Reference ample class in v⊥; entries may be fractions.
        #[arg(long, allow_hyphen_values = true)]
        ample: String,
        /// Largest ample degree of a listed generator; may be a fraction.
        #[arg(long)]
        max_degree: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Square-zero classes in v⊥.
    Fibration {
        #[command(flatten)]
        lat: LatticeArgs,
        /// Coordinate bound used when v⊥ has rank above two.
        #[arg(long, default_value = "10")]
        bound: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Reflect a divisor class into the movable chamber.
    Weyl {
        #[command(flatten)]
        lat: LatticeArgs,
        /// Divisor class in v⊥ to move; entries may be fractions.
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        /// Exceptional classes, `;` separated.
        #[arg(long, allow_hyphen_values = true)]
        exceptional: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Closed forms for Hilbert schemes of points on a degree-2d K3.
    Hilb {
        #[arg(value_enum)]
        what: HilbWhat,
        /// Half the degree of the polarization.
        #[arg(long)]
        d: String,
        /// Number of points.
        #[arg(long, default_value = "2")]
        n: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Fundamental solution of x² − D y² = 1.
    Pell {
        /// Positive non-square D.
        d: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Solve a x² + 2b x y + c y² = n.
    Represent {
        /// `a,b,c` of the Gram matrix [[a,b],[b,c]].
        #[arg(long, allow_hyphen_values = true)]
        gram: String,
        /// Value to represent.
        #[arg(long, allow_hyphen_values = true)]
        n: String,
        /// `minimal`: smallest positive solution; `box`: all with |x|, |y| ≤ bound; `orbits`: one per orbit.
        #[arg(long, value_enum, default_value_t = Mode::Minimal)]
        mode: Mode,
        /// Coordinate bound for `box` mode.
        #[arg(long, default_value = "100")]
        bound: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Partitions of v into positive classes and the strata they label.
    Flops {
        /// Lattice as inline JSON or a path to a JSON file.
        #[arg(long, requires = "v", conflicts_with = "form")]
        lattice: Option<String>,
        /// Mukai vector, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        v: Option<String>,
        /// Second class spanning the wall lattice with v.
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        /// Wall lattice given directly as `a,b,c`.
        #[arg(long, allow_hyphen_values = true, requires = "hv")]
        form: Option<String>,
        /// Coordinates of v in the directly given wall lattice.
        #[arg(long, allow_hyphen_values = true)]
        hv: Option<String>,
        /// Reject wall lattices with spherical or isotropic classes.
        #[arg(long)]
        strict: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Regenerate or check the shipped golden files.
    Golden {
        #[arg(value_enum)]
        action: GoldenAction,
        /// Golden names; all of them when omitted.
        names: Vec<String>,
        /// Golden directory; defaults to $K3WALLS_GOLDEN_DIR, then the shipped tests/golden.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum HilbWhat {
    Movable,
    Nef2,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Minimal,
    Box,
    Orbits,
}

#[derive(Clone, Copy, ValueEnum)]
enum GoldenAction {
    Check,
    Write,
}

fn orientation(s: Side) -> Orientation {
    match s {
        Side::Plus => Orientation::PlusSide,
        Side::Minus => Orientation::MinusSide,
    }
}

fn cone(kind: ConeKind, args: &ConeArgs) -> Parsed<(Output, Format)> {
    let l = input::load_lattice(&args.lat.lattice)?;
    let v = input::ivec(&args.lat.v, "--v")?;
    let region = input::qvecs(&args.region, "--region")?;
    let ample = input::qvec(&args.ample, "--ample")?;
    Ok((commands::cone(kind, &l, &v, region, &ample)?, args.format))
}

fn run(cmd: Command) -> Parsed<(Output, Format)> {
    match cmd {
        Command::Pair { lattice, u, w, format } => {
            let l = input::load_lattice(&lattice)?;
            Ok((commands::pair(&l, &input::ivec(&u, "--u")?, &input::ivec(&w, "--w")?)?, format))
        }
        Command::Classify { lat, a, format } => {
            let l = input::load_lattice(&lat.lattice)?;
            let out = commands::classify(&l, &input::ivec(&lat.v, "--v")?, &input::ivec(&a, "--a")?)?;
            Ok((out, format))
        }
        Command::Minimal { lat, a, orientation: o, format } => {
            let l = input::load_lattice(&lat.lattice)?;
            let out = commands::minimal(&l, &input::ivec(&lat.v, "--v")?, &input::ivec(&a, "--a")?, orientation(o))?;
            Ok((out, format))
        }
        Command::Orbit { lat, a, orientation: o, count, format } => {
            let l = input::load_lattice(&lat.lattice)?;
            let v = input::ivec(&lat.v, "--v")?;
            Ok((commands::orbit(&l, &v, &input::ivec(&a, "--a")?, orientation(o), count)?, format))
        }
        Command::Nef(args) => cone(ConeKind::Nef, &args),
        Command::Movable(args) => cone(ConeKind::Movable, &args),
        Command::Mori(args) => cone(ConeKind::Mori, &args),
        Command::Effective { lat, ample, max_degree, format } => {
            let l = input::load_lattice(&lat.lattice)?;
            let v = input::ivec(&lat.v, "--v")?;
            let ample = input::qvec(&ample, "--ample")?;
            let t = input::rational(&max_degree, "--max-degree")?;
            Ok((commands::effective(&l, &v, &ample, &t)?, format))
        }
        Command::Fibration { lat, bound, format } => {
            let l = input::load_lattice(&lat.lattice)?;
            let v = input::ivec(&lat.v, "--v")?;
            Ok((commands::fibration(&l, &v, &input::int(&bound, "--bound")?)?, format))
        }
        Command::Weyl { lat, d, exceptional, format } => {
            let l = input::load_lattice(&lat.lattice)?;
            let v = input::ivec(&lat.v, "--v")?;
            let d = input::qvec(&d, "--d")?;
            let e = input::qvecs(&exceptional, "--exceptional")?;
            Ok((commands::weyl(&l, &v, &d, &e)?, format))
        }
        Command::Hilb { what, d, n, format } => {
            let d = input::int(&d, "--d")?;
            let n = input::int(&n, "--n")?;
            let out = match what {
                HilbWhat::Movable => commands::hilb_movable(&d, &n)?,
                HilbWhat::Nef2 => commands::hilb_nef2(&d)?,
                HilbWhat::Table => commands::hilb_table(&d, &n)?,
            };
            Ok((out, format))
        }
        Command::Pell { d, format } => Ok((commands::pell(&input::int(&d, "D")?)?, format)),
        Command::Represent { gram, n, mode, bound, format } => {
            let g = input::ivec(&gram, "--gram")?;
            if g.len() != 3 {
                return Err(InputError("--gram: expected a,b,c".into()));
            }
            let q = BinaryForm::new(g[0].clone(), g[1].clone(), g[2].clone());
            let mode = match mode {
                Mode::Minimal => RepresentMode::MinimalPositive,
                Mode::Box => RepresentMode::AllInBox(input::int(&bound, "--bound")?),
                Mode::Orbits => RepresentMode::OrbitRepresentatives,
            };
            Ok((commands::represent_cmd(&q, &input::int(&n, "--n")?, &mode)?, format))
        }
        Command::Flops { lattice, v, a, form, hv, strict, format } => {
            let out = match (lattice, form) {
                (Some(lattice), None) => {
                    let l = input::load_lattice(&lattice)?;
                    let v = input::ivec(v.as_deref().unwrap_or_default(), "--v")?;
                    let a = a.ok_or_else(|| InputError("flops: --a is required with --lattice".into()))?;
                    commands::flops_lattice(&l, &v, &input::ivec(&a, "--a")?, strict)?
                }
                (None, Some(form)) => {
                    let g = input::ivec(&form, "--form")?;
                    if g.len() != 3 {
                        return Err(InputError("--form: expected a,b,c".into()));
                    }
                    let q = BinaryForm::new(g[0].clone(), g[1].clone(), g[2].clone());
                    let hv = input::pair(hv.as_deref().unwrap_or_default(), "--hv")?;
                    let h = WallLattice::new(q, hv).map_err(|e| InputError(format!("wall lattice: {e}")))?;
                    commands::flops(&h, strict)?
                }
                _ => return Err(InputError("flops: give either --lattice/--v/--a or --form/--hv".into())),
            };
            Ok((out, format))
        }
        Command::Golden { .. } => unreachable!("handled in main"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Command::Golden { action, names, dir } = cli.command {
        let dir = dir.unwrap_or_else(golden::default_dir);
        return match action {
            GoldenAction::Check => golden::check(&dir, &names),
            GoldenAction::Write => golden::write(&dir, &names),
        };
    }
    match run(cli.command) {
        Ok((out, format)) => {
            if std::env::var("K3WALLS_VERBOSE").is_ok_and(|v| v == "1") {
                if let Some(t) = &out.trace {
                    eprintln!("bound: {t}");
                }
            }
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&out.json).expect("JSON values serialize") + "\n",
                Format::Table => out.table,
            };
            // A closed pipe (for example `| head`) is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
