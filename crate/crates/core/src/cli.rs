//! Command-line front end.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::distribution::{Distribution, DistributionTable};
use crate::enumerate::{empirical_summary, slope_gaps};
use crate::error::{Error, Result};
use crate::geometry::{build_staircase, normalizing_matrix, veech_generators};
use crate::nondiff;
use crate::section::{Cell, Section, SectionPoint};
use crate::verify;

#[derive(Debug, Parser)]
#[command(name = "staircase-gaps", version, about = "Slope gap distribution of the regular 2n-gon")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Component {
    Omega1,
    Omega2,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Edge lengths, vertices and generators as JSON.
    Geometry {
        #[arg(long)]
        n: usize,
    },
    /// Partition of the section as JSON.
    Section {
        #[arg(long)]
        n: usize,
    },
    /// Return time at a single point.
    RtEval {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "omega1")]
        component: Component,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, allow_negative_numbers = true)]
        y: f64,
    },
    /// Tabulate pdf and cdf on a uniform grid.
    Distribution {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        t_min: f64,
        #[arg(long, default_value_t = 10.0)]
        t_max: f64,
        #[arg(long, default_value_t = 901)]
        samples: usize,
        #[arg(long)]
        refine_stamps: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Integral of the return time against the known covolume.
    Volume {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-11)]
        tol: f64,
    },
    /// Crossing stamps and kink count.
    Nondiff {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 1e-4)]
        deriv_tol: f64,
    },
    /// Gaps of enumerated saddle connection slopes against the analytic CDF.
    Empirical {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: f64,
        #[arg(long, default_value_t = 100_000)]
        depth: usize,
        /// Where to write the gaps CSV.
        #[arg(long, default_value = "-")]
        out: PathBuf,
        #[arg(long)]
        dump_vectors: Option<PathBuf>,
    },
    /// Run the invariant suite and print a pass/fail table.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

/// `%.17g`.
pub fn fmt_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.16e}", x);
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let mant = mant.trim_end_matches('0').trim_end_matches('.');
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mant}e{sign}{:02}", exp.abs());
    }
    let decimals = (16 - exp).max(0) as usize;
    let fixed = format!("{:.*}", decimals, x);
    if fixed.contains('.') {
        fixed.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        fixed
    }
}

fn open_out(path: &PathBuf) -> Result<Box<dyn Write>> {
    if path.as_os_str() == "-" {
        Ok(Box::new(BufWriter::new(io::stdout().lock())))
    } else {
        let f = File::create(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
        Ok(Box::new(BufWriter::new(f)))
    }
}

fn io_err(e: io::Error) -> Error {
    Error::Invalid(format!("write failed: {e}"))
}

pub fn write_csv(table: &DistributionTable, w: &mut dyn Write) -> io::Result<()> {
    w.write_all(b"t,pdf,cdf\n")?;
    for r in &table.rows {
        writeln!(w, "{},{},{}", fmt_g17(r.t), fmt_g17(r.pdf), fmt_g17(r.cdf))?;
    }
    Ok(())
}

fn grid(t_min: f64, t_max: f64, samples: usize) -> Result<Vec<f64>> {
    if !(t_max > t_min) || samples < 2 || !(t_min > 0.0) {
        return Err(Error::Invalid("need 0 < t-min < t-max and at least 2 samples".into()));
    }
    let steps = (samples - 1) as f64;
    Ok((0..samples).map(|k| t_min + (t_max - t_min) * k as f64 / steps).collect())
}

/// Execute one command, writing its report to `out`. Returns whether all checks passed.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<bool> {
    match cli.command {
        Command::Geometry { n } => {
            let g = build_staircase(n)?;
            let doc = json!({
                "n": n,
                "h": g.h,
                "v": g.v,
                "left_vertices": g.left_vertices,
                "right_vertices": g.right_vertices,
                "normalizing_matrix": normalizing_matrix(n)?,
                "generators": veech_generators(n)?,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable")).map_err(io_err)?;
        }
        Command::Section { n } => {
            let s = Section::new(n)?;
            let regions: Vec<_> = s
                .regions
                .iter()
                .map(|r| {
                    json!({
                        "index": r.index,
                        "constraints": r.constraints,
                        "winner": r.winner,
                        "vertices": r.polygon,
                        "area": r.area(),
                    })
                })
                .collect();
            let doc = json!({"n": n, "omega1_slope": crate::section::omega1_slope(n), "regions": regions});
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable")).map_err(io_err)?;
        }
        Command::RtEval { n, component, x, y } => {
            let p = match component {
                Component::Omega1 => SectionPoint::omega1(x, y),
                Component::Omega2 => SectionPoint::omega2(x, y),
            };
            let s = Section::new(n)?;
            let cell = match s.classify(&p)? {
                Cell::Omega2 => "omega2".to_string(),
                Cell::Region(i) => format!("P{i}"),
            };
            writeln!(out, "{}\t{cell}", fmt_g17(s.return_time(&p)?)).map_err(io_err)?;
        }
        Command::Distribution {
            n,
            t_min,
            t_max,
            samples,
            refine_stamps,
            format,
            out: path,
        } => {
            let table = Distribution::new(n)?.sample(&grid(t_min, t_max, samples)?, refine_stamps);
            let mut w = open_out(&path)?;
            match format {
                Format::Csv => write_csv(&table, &mut w),
                Format::Json => writeln!(w, "{}", serde_json::to_string(&table).expect("serializable")),
            }
            .and_then(|_| w.flush())
            .map_err(io_err)?;
        }
        Command::Volume { n, tol } => {
            let v = Distribution::new(n)?.covolume(tol)?;
            let reference = (n as f64 - 1.0) * std::f64::consts::PI.powi(2) / n as f64;
            writeln!(
                out,
                "computed {}\nreference {}\nrelative_error {:e}",
                fmt_g17(v),
                fmt_g17(reference),
                (v - reference).abs() / reference
            )
            .map_err(io_err)?;
        }
        Command::Nondiff { n, json, deriv_tol } => {
            if n < 4 {
                return Err(Error::Invalid("nondiff needs n >= 4".into()));
            }
            let rep = nondiff::analyze(n, deriv_tol)?;
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&rep).expect("serializable")).map_err(io_err)?;
            } else {
                writeln!(out, "region\ttime\tkind\tvalid").map_err(io_err)?;
                for s in &rep.stamps {
                    writeln!(out, "P{}\t{}\t{:?}\t{}", s.region, fmt_g17(s.time), s.kind, s.valid).map_err(io_err)?;
                }
                writeln!(out, "distinct valid times {}", rep.deduped.len()).map_err(io_err)?;
                writeln!(out, "kinks {}", rep.count).map_err(io_err)?;
                writeln!(out, "bounds {} {}", rep.lower, rep.upper).map_err(io_err)?;
            }
        }
        Command::Empirical {
            n,
            k,
            depth,
            out: path,
            dump_vectors,
        } => {
            let sample = slope_gaps(n, k, depth)?;
            if k < 4.0 {
                return Err(Error::Invalid("k must be at least 4".into()));
            }
            let summary = empirical_summary(&sample, &Distribution::new(n)?);
            if let Some(p) = dump_vectors {
                let mut w = open_out(&p)?;
                (|| {
                    w.write_all(b"x,y\n")?;
                    for v in &sample.vectors {
                        writeln!(w, "{},{}", fmt_g17(v.x), fmt_g17(v.y))?;
                    }
                    w.flush()
                })()
                .map_err(io_err)?;
            }
            let to_stdout = path.as_os_str() == "-";
            let mut w = open_out(&path)?;
            (|| {
                w.write_all(b"gap\n")?;
                for g in &sample.gaps {
                    writeln!(w, "{}", fmt_g17(*g))?;
                }
                w.flush()
            })()
            .map_err(io_err)?;
            drop(w);
            let doc = json!({"N": summary.gap_count, "KS": summary.ks, "stable": summary.stable,
                             "min_gap": summary.min_gap, "stabilized_depth": summary.stabilized_depth});
            if to_stdout {
                eprintln!("{doc}");
            } else {
                writeln!(out, "{doc}").map_err(io_err)?;
            }
            return Ok(summary.stable);
        }
        Command::Verify { n, seed } => {
            let checks = verify::run_checks(n, seed)?;
            for c in &checks {
                writeln!(out, "{}  {:<32} {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail).map_err(io_err)?;
            }
            return Ok(checks.iter().all(|c| c.pass));
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_format() {
        assert_eq!(fmt_g17(2.5), "2.5");
        assert_eq!(fmt_g17(1.0), "1");
        assert_eq!(fmt_g17(0.1), "0.10000000000000001");
        assert_eq!(fmt_g17(1e-5), "1.0000000000000001e-05");
        assert_eq!(fmt_g17(123456.0), "123456");
        assert_eq!(fmt_g17(1e20), "1e+20");
        assert_eq!(fmt_g17(-0.25), "-0.25");
        for x in [std::f64::consts::PI, 1.0 / 3.0, 7.850855075327144, 3.2e-7] {
            assert_eq!(fmt_g17(x).parse::<f64>().unwrap(), x);
        }
    }
}
