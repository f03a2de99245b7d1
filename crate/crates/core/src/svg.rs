//! Arc diagrams: the word along a baseline, the first machine's arcs above
//! it and the second machine's below.

use std::fmt::Write;

use crate::arcs::{Arc, CrossingPair};

const STEP: f64 = 28.0;
const MARGIN: f64 = 24.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn x(pos: usize) -> f64 {
    MARGIN + STEP * (pos as f64 - 0.5)
}

/// Renders `arcs` over `word`. Arcs that belong to one of `highlight` are
/// drawn thicker.
pub fn arc_diagram(title: &str, word: &str, arcs: &[Arc], highlight: &[CrossingPair]) -> String {
    let chars: Vec<char> = word.chars().collect();
    let span = arcs.iter().map(|a| a.pop_pos - a.push_pos).max().unwrap_or(1) as f64;
    let lift = (span * STEP / 2.0).max(STEP);
    let width = 2.0 * MARGIN + STEP * chars.len().max(1) as f64;
    let base = MARGIN + 16.0 + lift;
    let height = base + lift + MARGIN;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(out, "<title>{}</title>", escape(title));
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="16" font-family="monospace" font-size="12">{}</text>"#,
        escape(title)
    );
    // Inner segments P2 = (i, i'] and P3 = (i', j] behind everything else.
    for p in highlight {
        let (i, i2, j, _) = p.key();
        for (lo, hi, fill) in [(i, i2, "#e8d8a0"), (i2, j, "#c8e0c8")] {
            if hi > lo {
                let _ = writeln!(
                    out,
                    r#"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="20" fill="{fill}" fill-opacity="0.35"/>"#,
                    x(lo + 1) - STEP / 2.0,
                    base - 10.0,
                    STEP * (hi - lo) as f64
                );
            }
        }
    }
    for (i, c) in chars.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-family="monospace" font-size="14">{}</text>"#,
            x(i + 1),
            base + 5.0,
            escape(&c.to_string())
        );
    }
    let marked: Vec<Arc> = highlight.iter().flat_map(|p| [p.left, p.right]).collect();
    let mut sorted = arcs.to_vec();
    sorted.sort();
    for a in &sorted {
        let (x1, x2) = (x(a.push_pos), x(a.pop_pos));
        let h = ((x2 - x1) / 2.0).max(6.0);
        let (y, bend, colour) = if a.owner == 1 {
            (base - 10.0, base - 10.0 - h, "#1f5fbf")
        } else {
            (base + 10.0, base + 10.0 + h, "#bf3f1f")
        };
        let w = if marked.contains(a) { 2.5 } else { 1.2 };
        let _ = writeln!(
            out,
            r#"<path d="M {x1:.1} {y:.1} C {x1:.1} {bend:.1}, {x2:.1} {bend:.1}, {x2:.1} {y:.1}" fill="none" stroke="{colour}" stroke-width="{w}"><title>M{} {}</title></path>"#,
            a.owner, a
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_one_path_per_arc() {
        let arcs = [Arc::new(1, 3, 1), Arc::new(2, 4, 2)];
        let pair = CrossingPair::new(arcs[0], arcs[1]).unwrap();
        let svg = arc_diagram("a<b", "abcd", &arcs, &[pair]);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<path").count(), 2);
        assert!(svg.contains("a&lt;b"));
        assert!(svg.contains("stroke-width=\"2.5\""));
        assert_eq!(svg.matches("<rect").count(), 2);
    }
}
