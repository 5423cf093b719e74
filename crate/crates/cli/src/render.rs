//! Plain-text renderings.

use std::fmt::{Display, Write};

use voa_char::characters::{Algorithm, CharacterResult};
use voa_char::exact_arith::format_rational;
use voa_char::padic_limits::{residues, LimitResult};

pub fn join<T: Display>(xs: &[T]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn algorithm_name(a: Algorithm) -> &'static str {
    match a {
        Algorithm::PairPartition => "partition",
        Algorithm::Zhu => "zhu",
        Algorithm::TraceOracle => "trace",
        Algorithm::ClosedForm => "closed-form",
        Algorithm::LatticeClosedForm => "lattice-closed",
        Algorithm::LatticeZhu => "lattice-zhu",
        Algorithm::HeisenbergLimit => "heisenberg-limit",
        Algorithm::LatticeLimit => "lattice-limit",
    }
}

pub fn character_line(r: &CharacterResult) -> String {
    let series = if r.series.is_zero() {
        "0".to_string()
    } else {
        r.series.to_string()
    };
    match r.square_weight {
        Some(w) => format!("{} (weight {w}): {series}\n", algorithm_name(r.provenance)),
        None => format!("{}: {series}\n", algorithm_name(r.provenance)),
    }
}

/// Limit series, its residues mod `p^m`, and the stage table.
pub fn limit(res: &LimitResult, p: u64, m: u32) -> String {
    let c = &res.certificate;
    let mut out = character_line(&res.character);
    let res_mod: Vec<String> = residues(&res.character.series, p, m)
        .iter()
        .map(|r| r.as_ref().map_or("-".to_string(), format_rational))
        .collect();
    let _ = writeln!(out, "residues mod {p}^{m}: [{}]", res_mod.join(", "));
    let _ = writeln!(
        out,
        "G*_{} constant term: {} (stage {})",
        c.star.weight,
        format_rational(&c.star.representative),
        c.star.stage_used
    );
    let _ = writeln!(out, "cofactor valuation offset: {}", c.offset);
    let _ = writeln!(
        out,
        "{:>5} {:>8} {:>10} {:>9} {:>5}",
        "stage", "r", "valuation", "required", "pass"
    );
    for row in &c.stages {
        let _ = writeln!(
            out,
            "{:>5} {:>8} {:>10} {:>9} {:>5}",
            row.stage,
            row.r,
            row.observed_valuation.to_string(),
            row.required,
            if row.pass { "yes" } else { "no" }
        );
    }
    let _ = writeln!(
        out,
        "valuations weakly increasing: {}, strictly: {}",
        c.weakly_increasing, c.strictly_increasing
    );
    out
}
