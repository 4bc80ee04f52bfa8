use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use satmod::group::{find_dehn_twist_candidates, verify_file, RelationFile};
use satmod::seed::FramedMatrix;
use satmod::{assemble_presentation, GroupPresentation, ModularGraph, Mode, MutationClass, MutationWord, WordAction, DEFAULT_CAP};
use serde_json::json;

use crate::{load_quiver, read_text, Failure, EXIT_VERIFICATION_FAILED};

#[derive(Debug, Parser)]
#[command(name = "satmod", version, about = "Quiver mutation, mutation classes and cluster modular group presentations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ClassFormat {
    Summary,
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Cmatrix,
    Full,
    Both,
}

impl ModeArg {
    fn modes(self) -> Vec<Mode> {
        match self {
            ModeArg::Cmatrix => vec![Mode::CMatrix],
            ModeArg::Full => vec![Mode::Full],
            ModeArg::Both => vec![Mode::CMatrix, Mode::Full],
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply a mutation word (written in composition order) and print the
    /// resulting quiver. A word starting with '@' is read from a file.
    Mutate {
        quiver: String,
        word: String,
        /// Label of the first vertex in the word.
        #[arg(long, default_value_t = 0)]
        index: usize,
        /// Also print the C-matrix.
        #[arg(long)]
        c_matrix: bool,
    },
    /// Enumerate the mutation class up to isomorphism.
    Enumerate {
        quiver: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long, value_enum, default_value = "summary")]
        format: ClassFormat,
    },
    /// Presentation of the saturated cluster modular group.
    Present {
        quiver: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long, default_value_t = 0)]
        index: usize,
        /// Drop redundant relators and generators first.
        #[arg(long)]
        simplify: bool,
        #[arg(long)]
        json: bool,
    },
    /// Abelianization of a quiver's group or of a presentation file.
    Abelianize {
        input: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Check every relation in a relation file as a trivial mutation loop.
    Verify {
        quiver: String,
        relations: String,
        #[arg(long, value_enum, default_value = "cmatrix")]
        mode: ModeArg,
        #[arg(long)]
        json: bool,
    },
    /// List cluster Dehn twist candidates in the mutation class.
    Twists {
        quiver: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Run the local HTTP service.
    Serve {
        #[arg(long, default_value_t = 8750)]
        port: u16,
    },
}

fn io(e: std::io::Error) -> Failure {
    Failure::input(format!("write failed: {e}"))
}

fn graph(quiver: &str, cap: usize) -> Result<ModularGraph, Failure> {
    let m = load_quiver(quiver)?;
    Ok(ModularGraph::new(MutationClass::enumerate(&m, cap)?)?)
}

/// Runs one verb; returns the exit status.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    match &cli.command {
        Command::Mutate {
            quiver,
            word,
            index,
            c_matrix,
        } => {
            let m = load_quiver(quiver)?;
            let (text, source) = match word.strip_prefix('@') {
                Some(path) => (read_text(path)?, path.to_string()),
                None => (word.clone(), "word".to_string()),
            };
            let w = MutationWord::parse_with_base(m.n(), text.trim(), *index)
                .map_err(|e| Failure::input(format!("{source}: {e}")))?;
            let fin = FramedMatrix::new(m).apply_word(&w)?;
            if *c_matrix {
                let v = json!({"quiver": fin.matrix.to_json(), "c_matrix": fin.c});
                writeln!(out, "{v}").map_err(io)?;
            } else {
                writeln!(out, "{}", fin.matrix.to_json_string()).map_err(io)?;
            }
        }
        Command::Enumerate { quiver, cap, format } => {
            let g = graph(quiver, *cap)?;
            match format {
                ClassFormat::Json => writeln!(out, "{}", g.to_json()).map_err(io)?,
                ClassFormat::Dot => write!(out, "{}", g.to_dot()).map_err(io)?,
                ClassFormat::Summary => {
                    writeln!(out, "class size: {}", g.class.len()).map_err(io)?;
                    for c in 0..g.class.len() {
                        let path = g.class.path(c);
                        writeln!(
                            out,
                            "class {c}: |Aut| = {}, vertex orbits {:?}, path {}",
                            g.class.automorphisms(c).len(),
                            g.vertex_orbits[c],
                            if path.is_empty() { "(start)".to_string() } else { path.to_string() }
                        )
                        .map_err(io)?;
                    }
                    writeln!(out, "edge orbits: {}", g.edges.len()).map_err(io)?;
                    let faces: Vec<String> = g.face_counts().iter().map(|(len, c)| format!("{c} of length {len}")).collect();
                    writeln!(out, "faces: {}", faces.join(", ")).map_err(io)?;
                }
            }
        }
        Command::Present {
            quiver,
            cap,
            index,
            simplify,
            json,
        } => {
            let a = assemble_presentation(&graph(quiver, *cap)?)?;
            let inv = a.presentation.abelianize();
            if *json {
                let mut v = a.to_json();
                v["abelianization"] = inv.to_json();
                if *simplify {
                    v["simplified"] = a.presentation.simplify().to_json();
                }
                writeln!(out, "{v}").map_err(io)?;
            } else if *simplify {
                write!(out, "{}", a.presentation.simplify().to_text(*index)).map_err(io)?;
                writeln!(out, "# abelianization: {}", inv.primary_string()).map_err(io)?;
            } else {
                write!(out, "{}", a.to_text(*index)).map_err(io)?;
                writeln!(out, "# abelianization: {}", inv.primary_string()).map_err(io)?;
            }
        }
        Command::Abelianize { input, cap, json } => {
            let is_quiver = satmod::catalog::get(input).is_some() || read_text(input)?.trim_start().starts_with('{');
            let inv = if is_quiver {
                assemble_presentation(&graph(input, *cap)?)?.presentation.abelianize()
            } else {
                GroupPresentation::parse(&read_text(input)?)
                    .map_err(|e| Failure::input(format!("{input}: {e}")))?
                    .abelianize()
            };
            if *json {
                writeln!(out, "{}", inv.to_json()).map_err(io)?;
            } else {
                writeln!(out, "{inv}").map_err(io)?;
                writeln!(out, "{}", inv.primary_string()).map_err(io)?;
            }
        }
        Command::Verify {
            quiver,
            relations,
            mode,
            json,
        } => {
            let m = load_quiver(quiver)?;
            let file = RelationFile::parse(m.n(), &read_text(relations)?)
                .map_err(|e| Failure::input(format!("{relations}: {e}")))?;
            let mut reports = Vec::new();
            for md in mode.modes() {
                reports.extend(verify_file(&m, &file, md)?);
            }
            let failed = reports.iter().filter(|r| !r.trivial).count();
            if *json {
                writeln!(out, "{}", serde_json::to_string(&reports).expect("reports serialize")).map_err(io)?;
            } else {
                for r in &reports {
                    let status = if r.trivial { "ok  " } else { "FAIL" };
                    let mode = serde_json::to_value(r.mode).expect("mode serializes");
                    writeln!(out, "{status} {} [{}] {:.1} ms", r.name, mode.as_str().unwrap_or("?"), r.elapsed_ms)
                        .map_err(io)?;
                }
                writeln!(out, "{} of {} checks trivial", reports.len() - failed, reports.len()).map_err(io)?;
            }
            if failed > 0 {
                return Ok(EXIT_VERIFICATION_FAILED);
            }
        }
        Command::Twists { quiver, cap } => {
            let g = graph(quiver, *cap)?;
            for d in find_dehn_twist_candidates(&g.class)? {
                writeln!(out, "{}", d.to_json()).map_err(io)?;
            }
        }
        Command::Serve { port } => {
            let rt = tokio::runtime::Runtime::new().map_err(|e| Failure::input(e.to_string()))?;
            rt.block_on(crate::service::serve(*port)).map_err(|e| Failure::input(e.to_string()))?;
        }
    }
    Ok(0)
}
