//! gnuplot script for a sweep CSV. Rows are split by kind with a
//! `stringcolumn` filter, so one data file feeds every curve.

use crate::sweep::SweepRow;
use ste_core::ProtocolKind;

fn series(csv_name: &str, col: usize, kinds: &[ProtocolKind]) -> String {
    kinds
        .iter()
        .map(|k| {
            format!("'{csv_name}' using 1:(stringcolumn(2) eq \"{k}\" ? ${col} : NaN) with linespoints title \"{k}\"")
        })
        .collect::<Vec<_>>()
        .join(", \\\n     ")
}

pub fn gnuplot_script(csv_name: &str, rows: &[SweepRow]) -> String {
    let mut kinds: Vec<ProtocolKind> = Vec::new();
    for r in rows {
        if !kinds.contains(&r.kind) {
            kinds.push(r.kind);
        }
    }
    let stem = csv_name.strip_suffix(".csv").unwrap_or(csv_name);
    let panel = |file: &str, ylabel: &str, col: usize, extra: &str| {
        format!(
            "set output '{stem}_{file}.png'\nset ylabel '{ylabel}'\n{extra}plot {}\n",
            series(csv_name, col, &kinds)
        )
    };
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set key autotitle columnhead\n");
    s.push_str("set terminal pngcairo size 800,560\n");
    s.push_str("set xlabel 't_f'\n");
    s.push_str("set grid\n\n");
    s.push_str(&panel("accuracy", "A = -log10(1-F)", 5, ""));
    s.push('\n');
    s.push_str(&panel("work", "W", 6, ""));
    s.push_str(&format!("replot '{csv_name}' using 1:7 with lines dashtype 2 title \"W_adi\"\n\n"));
    s.push_str(&panel("entropy", "dS_total", 11, "set logscale y\n"));
    s.push_str("unset logscale y\n");
    s
}
