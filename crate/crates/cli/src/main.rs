use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use unfold::{run, Mode, RunConfig};
use vunfold::io::SvgStyle;

/// Vertex-unfold a closed triangulated surface into a chain of strips.
#[derive(Debug, Parser)]
#[command(name = "unfold", version)]
struct Args {
    #[arg(long, value_enum)]
    mode: Mode,
    /// Mesh file (OFF or OBJ), or a run JSON in verify mode.
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    out_svg: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    out_json: Option<PathBuf>,
    /// Facet ids in unfolding order, one per line.
    #[arg(long, value_name = "FILE")]
    out_order: Option<PathBuf>,
    /// Number of random hulls in experiment mode.
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// SVG margin as a fraction of the layout's larger side.
    #[arg(long, default_value_t = SvgStyle::default().margin)]
    margin: f64,
    /// SVG stroke width as a fraction of the layout's height.
    #[arg(long, default_value_t = SvgStyle::default().stroke)]
    stroke: f64,
}

fn main() -> ExitCode {
    let a = Args::parse();
    let config = RunConfig {
        mode: a.mode,
        input: a.input,
        out_svg: a.out_svg,
        out_json: a.out_json,
        out_order: a.out_order,
        n: a.n,
        seed: a.seed,
        style: SvgStyle { margin: a.margin, stroke: a.stroke },
    };
    let code = run(&config, &mut std::io::stdout().lock());
    ExitCode::from(code as u8)
}
