use std::fmt::Write;

use super::collection::{gram, LocalCollection};
use super::Reference;
use crate::exact::RatMatrix;
use crate::scalar::{format_rational, int};

fn write_matrix(out: &mut String, m: &RatMatrix) {
    let cells: Vec<Vec<String>> = (0..m.nrows()).map(|i| m.row(i).iter().map(format_rational).collect()).collect();
    let width = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(1);
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "  {}", line.join(" "));
    }
}

fn write_collection(out: &mut String, c: &LocalCollection) {
    let _ = writeln!(out, "\n{} over {} ({} functions)", c.id.symbol(), c.basis.symbol(), c.len());
    for (x, f) in c.index.iter().zip(&c.functions) {
        let terms: Vec<String> = c
            .basis
            .nodes()
            .iter()
            .zip(&f.coeffs)
            .filter(|(_, v)| **v != int(0))
            .map(|(n, v)| format!("{}·{}", format_rational(v), n))
            .collect();
        let _ = writeln!(out, "  {x}: {}", terms.join(" + "));
    }
}

/// Plain-text dump of all reference tables as exact rationals.
pub fn ref_report(r: &Reference) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "reference nodes");
    for (k, n) in super::REF_NODES.iter().enumerate() {
        let _ = writeln!(out, "  {k:>2} {n} {:?}", n.class());
    }
    let s = &r.reconstruction.stats;
    let _ = writeln!(
        out,
        "\nordering search: {} candidates, {} vanishing, {} symmetric, {} biorthogonal, {} matching cross products",
        s.candidates, s.vanishing, s.symmetry, s.biorthogonal, s.printed_values
    );
    if let Some(o) = r.reconstruction.accepted.first() {
        let _ = writeln!(out, "  first accepted: {:?} {:?}", o.reading, o.nodes);
    }
    let _ = writeln!(out, "\ndual parameters");
    for (label, v) in &r.reconstruction.phi_parameters {
        let _ = writeln!(out, "  {label} = {}", format_rational(v));
    }
    for c in [&r.theta, &r.xi, &r.phi_tilde] {
        write_collection(&mut out, c);
    }
    let grams = [(&r.n, &r.n_tilde, 480), (&r.theta, &r.phi_tilde, 1), (&r.xi, &r.phi_tilde, 1), (&r.n, &r.n, 1)];
    for (a, b, scale) in grams {
        let g = gram(a, b);
        let _ = writeln!(out, "\n<{}, {}>/vol × {scale}", a.id.symbol(), b.id.symbol());
        write_matrix(&mut out, &g.entries.scale(&int(scale)));
    }
    out
}
