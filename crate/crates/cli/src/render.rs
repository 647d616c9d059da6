//! Human-readable output.

use std::fmt::Write;

use tropibound::arith::fmt_vector;
use tropibound::io::{BoundDoc, DecoratedDoc, FanReport, Fraction, IntersectionDoc, SubdivisionReport, VerifyReport};
use tropibound::{FlagOfFlats, Flat, OrientedMatroid, Rational, VerticalSystem};

fn vector(v: &[Fraction]) -> String {
    let v: Vec<Rational> = v.iter().map(|f| f.0.clone()).collect();
    fmt_vector(&v)
}

fn set(elements: &[usize]) -> String {
    let items: Vec<String> = elements.iter().map(usize::to_string).collect();
    format!("{{{}}}", items.join(","))
}

fn chain(flag: &[Vec<usize>]) -> String {
    if flag.is_empty() {
        return "∅".into();
    }
    flag.iter().map(|f| set(f)).collect::<Vec<_>>().join(" ⊂ ")
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("{n} {word}")
    } else {
        format!("{n} {word}s")
    }
}

pub fn circuits(om: &OrientedMatroid) -> String {
    let mut out = String::new();
    writeln!(out, "ground set of size {}, rank {}", om.ground_size(), om.rank()).unwrap();
    writeln!(out, "{}", plural(om.circuits().len(), "signed circuit")).unwrap();
    for c in om.circuits() {
        writeln!(out, "  {c}").unwrap();
    }
    out
}

pub fn flats(om: &OrientedMatroid, flats: &[Flat], flags: &[FlagOfFlats]) -> String {
    let mut out = String::new();
    writeln!(out, "rank {}, {}", om.rank(), plural(flats.len(), "flat")).unwrap();
    for rank in 0..=om.rank() {
        let at: Vec<String> = flats.iter().filter(|f| f.rank == rank).map(|f| f.elements.to_string()).collect();
        writeln!(out, "  rank {rank}: {}", at.join(" ")).unwrap();
    }
    writeln!(out, "{}", plural(flags.len(), "maximal flag")).unwrap();
    for flag in flags {
        writeln!(out, "  {flag}").unwrap();
    }
    out
}

pub fn fan(doc: &FanReport) -> String {
    let mut out = String::new();
    let what = if doc.positive { "positive Bergman fan" } else { "Bergman fan" };
    if doc.free_matroid {
        writeln!(out, "{what}: the matroid has no circuits, the fan is all of ℚ^{}", doc.ground_size).unwrap();
        return out;
    }
    writeln!(out, "{what}: {}", plural(doc.cones.len(), "maximal cone")).unwrap();
    for cone in &doc.cones {
        writeln!(out, "  {:<40} sample {}", chain(&cone.flag), vector(&cone.sample)).unwrap();
    }
    out
}

pub fn intersection(doc: &IntersectionDoc) -> String {
    let mut out = String::new();
    let status = if doc.transverse { "transverse" } else { "not certified transverse" };
    writeln!(out, "intersection points: {} ({status})", doc.count).unwrap();
    for p in &doc.points {
        let mut tags = Vec::new();
        if !p.isolated {
            tags.push("not isolated");
        }
        if !p.interior {
            tags.push("boundary");
        }
        let tags = if tags.is_empty() { String::new() } else { format!("  [{}]", tags.join(", ")) };
        writeln!(out, "  v = {:<16} w = {:<24} flag {}{tags}", vector(&p.v), vector(&p.w), chain(&p.supporting_flag)).unwrap();
    }
    for note in &doc.notes {
        writeln!(out, "note: {note}").unwrap();
    }
    out
}

pub fn subdivision(doc: &SubdivisionReport) -> String {
    let mut out = String::new();
    let kind = if doc.triangulation { "triangulation" } else { "subdivision" };
    writeln!(out, "regular {kind} with {}", plural(doc.cells.len(), "full-dimensional cell")).unwrap();
    for cell in &doc.cells {
        let mut normal = cell.witness.clone();
        normal.push(Fraction(Rational::from_integer(1.into())));
        writeln!(out, "  {:<16} inner normal (v,1) = {}", set(&cell.members), vector(&normal)).unwrap();
    }
    out
}

pub fn decorated(doc: &DecoratedDoc) -> String {
    let mut out = String::new();
    let noun = if doc.count == 1 { "simplex" } else { "simplices" };
    writeln!(out, "{} positively decorated {noun}", doc.count).unwrap();
    for s in &doc.simplices {
        write!(out, "  Δ = {:<12} kernel {:<16} v = {}", set(&s.members), vector(&s.kernel_vector), vector(&s.witness)).unwrap();
        if let Some(w) = &s.image {
            write!(out, "  Aᵀv = {}", vector(w)).unwrap();
        }
        writeln!(out).unwrap();
    }
    out
}

pub fn bound(doc: &BoundDoc) -> String {
    let mut out = String::new();
    writeln!(out, "certified_bound {}", doc.certified_bound).unwrap();
    let status = if doc.tropical.transverse { "transverse" } else { "not certified transverse" };
    writeln!(out, "tropical count {} ({status})", doc.tropical.count).unwrap();
    for p in &doc.tropical.points {
        writeln!(out, "  v = {:<16} w = {}", vector(&p.v), vector(&p.w)).unwrap();
    }
    match &doc.decorated {
        Some(d) => {
            writeln!(out, "decorated count {}", d.count).unwrap();
            for s in &d.simplices {
                writeln!(out, "  Δ = {:<12} kernel {}", set(&s.members), vector(&s.kernel_vector)).unwrap();
            }
        }
        None => writeln!(out, "decorated count unavailable").unwrap(),
    }
    for note in doc.tropical.notes.iter().chain(&doc.notes) {
        writeln!(out, "note: {note}").unwrap();
    }
    out
}

pub fn crn(system: &VerticalSystem, doc: &BoundDoc) -> String {
    let mut out = String::new();
    writeln!(out, "assembled system: C is {}x{}, A is {}x{}", system.c.rows(), system.c.cols(), system.a.rows(), system.a.cols()).unwrap();
    out.push_str(&bound(doc));
    out
}

pub fn verify(doc: &VerifyReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "t = {}: {} (certified bound {}); empirical witness, not a certificate",
        doc.t,
        plural(doc.count, "positive root"),
        doc.certified_bound
    )
    .unwrap();
    for w in &doc.witnesses {
        let x: Vec<String> = w.x.iter().map(|v| format!("{v:.6e}")).collect();
        let conditioned = if w.well_conditioned { "" } else { "  [ill-conditioned]" };
        writeln!(out, "  x ≈ ({})  residual {:.1e}  seed {} #{}{conditioned}", x.join(", "), w.residual, w.seed, w.seed_index).unwrap();
    }
    out
}
