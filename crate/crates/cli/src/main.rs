use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ribbonknot::geom::{format_q, parse_q, q};
use ribbonknot::tangle::normalize_fraction;
use ribbonknot::verify::{summary_line, sweep_corpus, verify_layout, Report};
use ribbonknot::{
    build_ribbon_knot, normalize, parse_notation, render_svg, ConwayNotation,
    ExtFraction, GeomParams, RenderOptions, RibbonLayout, Q,
};

#[derive(Parser)]
#[command(name = "ribbonknot", version, about = "Folded ribbon constructions for 2-bridge knots")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Continued-fraction value of a Conway notation.
    Fraction {
        #[arg(allow_hyphen_values = true)]
        notation: String,
    },
    /// Same-sign odd-length form of a notation or of a fraction p/q.
    Normalize {
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
    /// Build a folded ribbon layout and write it as JSON.
    Build {
        #[arg(allow_hyphen_values = true)]
        notation: String,
        #[command(flatten)]
        geom: Geom,
        /// Layout JSON destination (stdout if omitted).
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Build and check a layout; exit status 1 if any check fails.
    Verify {
        #[arg(allow_hyphen_values = true)]
        notation: String,
        #[command(flatten)]
        geom: Geom,
        /// Report JSON destination.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Draw a layout as SVG, from a notation or a layout JSON file.
    Render {
        #[arg(allow_hyphen_values = true, required_unless_present = "layout")]
        notation: Option<String>,
        #[arg(long, conflicts_with = "notation")]
        layout: Option<PathBuf>,
        #[command(flatten)]
        geom: Geom,
        /// SVG destination (stdout if omitted).
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Verify every negative normal form up to a crossing count.
    Sweep {
        #[arg(long)]
        max_crossings: u64,
        #[command(flatten)]
        geom: Geom,
        /// Reports as a JSON array.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Geom {
    /// Ribbon width as p/q.
    #[arg(long, default_value = "1/1")]
    width: String,
    /// End-line margin as p/q; defaults to width/(16(m+1)).
    #[arg(long)]
    epsilon: Option<String>,
}

/// Failures and the exit status they map to.
enum Fail {
    Usage(String),
    Check(String),
}

type Res<T> = Result<T, Fail>;

fn usage<E: ToString>(e: E) -> Fail {
    Fail::Usage(e.to_string())
}

fn rational(s: &str, what: &str) -> Res<Q> {
    parse_q(s).ok_or_else(|| Fail::Usage(format!("{what}: expected p/q, got {s:?}")))
}

impl Geom {
    fn params(&self, m: usize) -> Res<GeomParams> {
        let w = rational(&self.width, "--width")?;
        if w <= q(0) {
            return Err(Fail::Usage("--width must be positive".into()));
        }
        match &self.epsilon {
            None => Ok(GeomParams::for_width(w, m)),
            Some(e) => GeomParams::new(w, rational(e, "--epsilon")?, m).map_err(usage),
        }
    }
}

fn notation(s: &str) -> Res<(ConwayNotation, ConwayNotation)> {
    let n = parse_notation(s).map_err(usage)?;
    let normal = normalize(&n).map_err(usage)?;
    Ok((n, normal))
}

fn build(s: &str, geom: &Geom) -> Res<(ConwayNotation, ConwayNotation, RibbonLayout)> {
    let (n, normal) = notation(s)?;
    let p = geom.params(normal.len())?;
    let l = build_ribbon_knot(&n, &p).map_err(usage)?;
    Ok((n, normal, l))
}

fn write_out(path: Option<&Path>, text: &str) -> Res<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Fail::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_report(r: &Report) {
    let b = &r.bound_report;
    println!("notation        ({})", r.notation);
    println!("normal form     ({})", r.normal_form);
    println!("fraction        {}", r.fraction);
    println!("crossings       {}", r.crossing_number);
    println!("length          {}", format_q(&r.length));
    println!("length/width    {}", format_q(&b.length_over_width));
    println!("bound 2c+2      {}", format_q(&r.bound));
    println!("gap             {} (expected {})", format_q(&r.gap), format_q(&b.expected_gap));
    println!("earlier bounds  6c-2 = {}, 2c^2+6c+4 = {}", b.comparison.linear, b.comparison.quadratic);
    if let Some(note) = &b.note {
        println!("note            {note}");
    }
    println!("determinant     {} (expected {})", r.determinant, r.expected_determinant);
    println!("knot type       {}", verdict(r.knot_type_ok));
    println!("layout          {}", verdict(r.layout_ok));
    for p in &r.validity.problems {
        println!("  - {p}");
    }
    println!("length identity {}", verdict(r.length_ok));
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn run(cmd: Cmd) -> Res<()> {
    match cmd {
        Cmd::Fraction { notation } => {
            let n = parse_notation(&notation).map_err(usage)?;
            println!("{}", ribbonknot::tangle::try_fraction(&n).map_err(usage)?);
        }
        Cmd::Normalize { input } => {
            let normal = if input.contains('/') {
                let f: ExtFraction = input.parse().map_err(usage)?;
                normalize_fraction(f).map_err(usage)?
            } else {
                notation(&input)?.1
            };
            println!("{normal}");
        }
        Cmd::Build { notation, geom, json: out, svg } => {
            let (_, _, l) = build(&notation, &geom)?;
            if let Some(p) = svg {
                write_out(Some(&p), &render_svg(&l, &RenderOptions::default()))?;
            }
            write_out(out.as_deref(), &format!("{}\n", l.to_json()))?;
        }
        Cmd::Verify { notation, geom, json: out } => {
            let (n, normal, l) = build(&notation, &geom)?;
            let r = verify_layout(&l, &n, &normal).map_err(|e| Fail::Check(e.to_string()))?;
            print_report(&r);
            if let Some(p) = out {
                write_out(Some(&p), &json(&r))?;
            }
            if !r.ok() {
                return Err(Fail::Check(format!("({}) failed verification", r.notation)));
            }
        }
        Cmd::Render { notation, layout, geom, svg } => {
            let l = match (notation, layout) {
                (_, Some(p)) => {
                    let text = fs::read_to_string(&p)
                        .map_err(|e| Fail::Usage(format!("{}: {e}", p.display())))?;
                    RibbonLayout::from_json(&text).map_err(usage)?
                }
                (Some(s), None) => build(&s, &geom)?.2,
                (None, None) => return Err(Fail::Usage("notation or --layout required".into())),
            };
            write_out(svg.as_deref(), &render_svg(&l, &RenderOptions::default()))?;
        }
        Cmd::Sweep { max_crossings, geom, json: out } => {
            let corpus = sweep_corpus(max_crossings);
            let mut reports = Vec::with_capacity(corpus.len());
            for n in &corpus {
                let p = geom.params(n.len())?;
                let l = build_ribbon_knot(n, &p).map_err(usage)?;
                let r = verify_layout(&l, n, n).map_err(|e| Fail::Check(e.to_string()))?;
                println!("{}", summary_line(&r));
                reports.push(r);
            }
            let failed: Vec<String> = reports
                .iter()
                .filter(|r| !r.ok())
                .map(|r| format!("({})", r.notation))
                .collect();
            println!("{} notations, {} passed, {} failed", reports.len(), reports.len() - failed.len(), failed.len());
            if let Some(p) = out {
                write_out(Some(&p), &json(&reports))?;
            }
            if !failed.is_empty() {
                return Err(Fail::Check(format!("failed: {}", failed.join(" "))));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Check(m)) => {
            eprintln!("{m}");
            ExitCode::from(1)
        }
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
