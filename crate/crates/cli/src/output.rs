//! Text tables and CSV writers.

use std::io::Write;

use epn_core::epnverify::ConfluenceReport;
use epn_core::solve::{ParamValue, ParameterTuple, RealityClass};
use epn_core::spectrum::{EP2Boundary, IntervalReport, SpectrumSample};

use crate::CliError;

/// Row ids: `bh`, then `t1, t2, ...` for real tuples, `c1, c2, ...` for complex ones.
pub fn tuple_ids(tuples: &[ParameterTuple]) -> Vec<String> {
    let (mut real, mut complex) = (0, 0);
    tuples
        .iter()
        .map(|t| {
            if t.is_bh {
                "bh".to_string()
            } else if t.reality == RealityClass::AllReal {
                real += 1;
                format!("t{real}")
            } else {
                complex += 1;
                format!("c{complex}")
            }
        })
        .collect()
}

pub fn format_value(v: &ParamValue, sig: usize) -> String {
    match v {
        ParamValue::Exact(q) => q.to_string(),
        ParamValue::Algebraic(a) => a.approx.to_string_sig(sig),
        ParamValue::Numeric(x) => x.to_string_sig(sig),
        ParamValue::Complex(c) => {
            let im = c.im.to_string_sig(sig.min(12));
            let im = im.strip_prefix('-').map(|m| format!(" - {m}i")).unwrap_or(format!(" + {im}i"));
            format!("{}{im}", c.re.to_string_sig(sig.min(12)))
        }
    }
}

fn value_kind(v: &ParamValue) -> &'static str {
    match v {
        ParamValue::Exact(_) => "exact",
        ParamValue::Algebraic(_) => "algebraic",
        ParamValue::Numeric(_) => "numeric",
        ParamValue::Complex(_) => "complex",
    }
}

/// Tab-separated tuple listing followed by the minimal polynomials of algebraic entries.
pub fn write_tuple_table<W: Write>(out: &mut W, tuples: &[ParameterTuple], sig: usize) -> Result<(), CliError> {
    let Some(first) = tuples.first() else {
        writeln!(out, "no tuples")?;
        return Ok(());
    };
    let ids = tuple_ids(tuples);
    let mut header = vec!["id".to_string()];
    header.extend(first.names.iter().cloned());
    header.extend(["residual".into(), "class".into(), "kind".into()]);
    writeln!(out, "{}", header.join("\t"))?;
    for (id, t) in ids.iter().zip(tuples) {
        let mut row = vec![id.clone()];
        row.extend(t.values.iter().map(|v| format_value(v, sig)));
        row.push(match (&t.residual, t.exact_zero) {
            (_, true) => "0".to_string(),
            (Some(r), false) => r.to_string_sig(3),
            (None, false) => "-".to_string(),
        });
        row.push(match t.reality {
            RealityClass::AllReal => "real".to_string(),
            RealityClass::Complex => "complex".to_string(),
        });
        let kinds: Vec<&str> = t.values.iter().map(value_kind).collect();
        let kind = if kinds.iter().all(|k| *k == kinds[0]) { kinds[0].to_string() } else { kinds.join(",") };
        row.push(kind);
        writeln!(out, "{}", row.join("\t"))?;
    }
    for (id, t) in ids.iter().zip(tuples) {
        for (name, v) in t.names.iter().zip(&t.values) {
            if let ParamValue::Algebraic(a) = v {
                let coeffs: Vec<String> = a.poly.coeffs().iter().map(|c| c.to_string()).collect();
                writeln!(
                    out,
                    "# {id}.{name}: root of [{}] (ascending) in [{}, {}]",
                    coeffs.join(", "),
                    a.interval.lower,
                    a.interval.upper
                )?;
            }
        }
    }
    Ok(())
}

/// `z, re_s1, im_s1, ..., class_1, ..., ambiguous`.
pub fn write_spectrum_csv<W: Write>(out: W, samples: &[SpectrumSample]) -> Result<(), CliError> {
    let j = samples.first().map_or(0, |s| s.roots.len());
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["z".to_string()];
    for k in 1..=j {
        header.push(format!("re_s{k}"));
        header.push(format!("im_s{k}"));
    }
    header.extend((1..=j).map(|k| format!("class_{k}")));
    header.push("ambiguous".into());
    w.write_record(&header)?;
    for s in samples {
        let mut row = vec![s.z.to_f64().to_string()];
        for r in &s.roots {
            row.push(r.re.to_f64().to_string());
            row.push(r.im.to_f64().to_string());
        }
        row.extend(s.classes.iter().map(|c| c.code().to_string()));
        row.push(u8::from(s.ambiguous).to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Config comment lines, then `p, trial, min_rho, max_rho`.
pub fn write_verify_csv<W: Write>(mut out: W, tuple: &str, report: &ConfluenceReport) -> Result<(), CliError> {
    let c = &report.config;
    let ladder: Vec<String> = c.ladder.iter().map(u32::to_string).collect();
    writeln!(
        out,
        "# dimension={} tuple={} ladder={} trials={} seed={} structure={}",
        report.dimension,
        tuple,
        ladder.join(","),
        c.trials,
        c.seed,
        c.structure
    )?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["p", "trial", "min_rho", "max_rho"])?;
    for t in &report.trials {
        w.write_record([
            t.p.to_string(),
            t.trial.to_string(),
            format!("{:.6e}", t.min_rho),
            format!("{:.6e}", t.max_rho),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_rung_summary<W: Write>(out: &mut W, report: &ConfluenceReport) -> Result<(), CliError> {
    writeln!(out, "p\tmin_rho\tmax_rho\tmedian_max_rho\tdropped")?;
    for r in &report.rungs {
        writeln!(
            out,
            "{}\t{:.3e}\t{:.3e}\t{:.3e}\t{}",
            r.p, r.min_rho, r.max_rho, r.median_max_rho, r.dropped
        )?;
    }
    Ok(())
}

pub fn write_boundary_table<W: Write>(out: &mut W, boundaries: &[EP2Boundary], sig: usize) -> Result<(), CliError> {
    writeln!(out, "z\tkind\ts\tmultiplicity\tcertified")?;
    for b in boundaries {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            b.z.to_string_sig(sig),
            b.kind.label(),
            b.s.to_string_sig(sig),
            b.multiplicity,
            if b.certified { "yes" } else { "no" }
        )?;
    }
    Ok(())
}

pub fn write_interval_table<W: Write>(out: &mut W, report: &IntervalReport) -> Result<(), CliError> {
    writeln!(out, "lower\tupper\tcensus(real,imag,complex)\tconsistent")?;
    for iv in &report.intervals {
        writeln!(out, "{}\t{}\t{}\t{}", iv.lower, iv.upper, iv.census, if iv.consistent { "yes" } else { "no" })?;
    }
    Ok(())
}
