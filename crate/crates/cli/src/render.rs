use std::fmt::Write as _;

use plifs_core::{cylinders, fmt_g17, Budget, Cplifs, CylinderSet};

const WIDTH: f64 = 1000.0;
const MARGIN: f64 = 20.0;
const ROW: f64 = 24.0;
const BAR: f64 = 14.0;

/// Level-`depth` cylinders in lexicographic word order.
pub fn csv(f: &Cplifs, depth: usize, budget: Budget) -> plifs_core::Result<String> {
    let set = cylinders(f, depth, budget)?;
    let mut out = String::from("word,left,right\n");
    for (w, j) in set.iter() {
        let _ = writeln!(out, "{w},{},{}", fmt_g17(j.lo), fmt_g17(j.hi));
    }
    Ok(out)
}

/// One row of rectangles per level `0..=depth`.
pub fn svg(f: &Cplifs, depth: usize, budget: Budget) -> plifs_core::Result<String> {
    budget.check(f.len(), depth)?;
    let j = f.invariant_interval();
    let scale = if j.len() > 0.0 { (WIDTH - 2.0 * MARGIN) / j.len() } else { 0.0 };
    let height = 2.0 * MARGIN + ROW * (depth + 1) as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}">"#
    );
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let mut set = CylinderSet::root(f);
    for level in 0..=depth {
        if level > 0 {
            set = set.refine(f);
        }
        let y = MARGIN + ROW * level as f64;
        let _ = writeln!(out, r#"<g id="level-{level}">"#);
        for (w, c) in set.iter() {
            let x = MARGIN + (c.lo - j.lo) * scale;
            // keep point-like cylinders visible
            let width = (c.len() * scale).max(0.5);
            let _ = writeln!(
                out,
                r##"<rect x="{x:.4}" y="{y:.1}" width="{width:.4}" height="{BAR:.1}" fill="#2b5d8a"><title>{}</title></rect>"##,
                if w.is_empty() { "I".to_string() } else { w.to_string() }
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}
