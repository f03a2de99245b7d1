//! The classification table for a word family: per-size crossing evidence
//! and the row of the inner-segment dichotomy it falls into.

use std::fmt;

use serde::Serialize;

use crate::arcs::{analyze_pair, classify_family, Arc, CrossingPair, FamilySample, Regime, RegimeReport};
use crate::corpus::ExampleBundle;
use crate::error::{Error, Result};
use crate::machine::SearchLimits;
use crate::svg::arc_diagram;

pub const REPORT_VERSION: &str = "report-v1";

/// One row of the dichotomy table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DichotomyRow {
    pub inner_segment_measure: &'static str,
    pub crossing_gap: &'static str,
    pub intersection: &'static str,
    pub construction: &'static str,
}

pub fn dichotomy_row(regime: Regime) -> DichotomyRow {
    let (inner, gap, intersection, construction) = match regime {
        Regime::NoCrossings => ("0 (no crossings)", "--", "CFL", "product construction"),
        Regime::BoundedGap => ("any", "O(1)", "CFL", "displacement product"),
        Regime::BoundedInnerUnboundedGap => ("O(1)", "ω(1)", "CFL", "buffered product"),
        Regime::GrowingInner => ("ω(1)", "ω(1)", "Not CFL (given linkages)", "none"),
    };
    DichotomyRow {
        inner_segment_measure: inner,
        crossing_gap: gap,
        intersection,
        construction,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub version: &'static str,
    pub example: String,
    pub family: RegimeReport,
    pub row: DichotomyRow,
    #[serde(skip)]
    samples: Vec<(FamilySample, Vec<Arc>)>,
}

impl ClassificationReport {
    /// One arc diagram per sampled size, both machines' arcs with crossing
    /// arcs emphasised.
    pub fn diagrams(&self) -> Vec<(usize, String)> {
        self.samples
            .iter()
            .map(|(s, arcs)| {
                let crossing: Vec<CrossingPair> = arcs
                    .iter()
                    .filter(|a| a.owner == 1)
                    .flat_map(|a| arcs.iter().filter(|b| b.owner == 2).map(move |b| (*a, *b)))
                    .filter_map(|(a, b)| CrossingPair::new(a, b).ok())
                    .collect();
                let title = format!("{} n={} ({} crossings)", self.example, s.n, crossing.len());
                (s.n, arc_diagram(&title, &s.word, arcs, &crossing))
            })
            .collect()
    }

    /// All diagrams stacked into one SVG document.
    pub fn combined_svg(&self) -> String {
        let mut y = 0.0;
        let mut body = String::new();
        let mut width: f64 = 0.0;
        for (_, svg) in self.diagrams() {
            let dims = |key: &str| -> f64 {
                svg.split(&format!("{key}=\""))
                    .nth(1)
                    .and_then(|r| r.split('"').next())
                    .and_then(|v| v.parse().ok())
                    .unwrap_or(0.0)
            };
            let (w, h) = (dims("width"), dims("height"));
            width = width.max(w);
            let inner = svg
                .lines()
                .skip(1)
                .filter(|l| *l != "</svg>")
                .collect::<Vec<_>>()
                .join("\n");
            body.push_str(&format!("<g transform=\"translate(0 {y:.0})\">\n{inner}\n</g>\n"));
            y += h;
        }
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{y:.0}\" viewBox=\"0 0 {width:.0} {y:.0}\">\n{body}</svg>\n"
        )
    }
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "example: {}", self.example)?;
        writeln!(f, "{}", self.family)?;
        writeln!(f)?;
        writeln!(
            f,
            "{:<21} | {:<12} | {:<24} | construction",
            "Inner segment measure", "Crossing gap", "Intersection"
        )?;
        write!(
            f,
            "{:<21} | {:<12} | {:<24} | {}",
            self.row.inner_segment_measure, self.row.crossing_gap, self.row.intersection, self.row.construction
        )
    }
}

/// Samples the bundle's family at `sizes` (its own sizes when empty),
/// classifies it and places it in the dichotomy table.
pub fn classification_report(
    bundle: &ExampleBundle,
    sizes: &[usize],
    limits: SearchLimits,
) -> Result<ClassificationReport> {
    let (m1, m2) = bundle
        .machines()
        .ok_or_else(|| Error::PreconditionViolated(format!("{} has no machine pair", bundle.name)))?;
    let sizes = if sizes.is_empty() {
        bundle.sizes.clone()
    } else {
        sizes.to_vec()
    };
    let mut samples = Vec::new();
    for n in sizes {
        let word = bundle
            .family_word(n)
            .ok_or_else(|| Error::PreconditionViolated(format!("{} has no word family", bundle.name)))?;
        let analysis = analyze_pair(m1, m2, &word, 1, limits)?.swap_remove(0);
        let arcs: Vec<Arc> = analysis.m1.arcs.iter().chain(&analysis.m2.arcs).copied().collect();
        samples.push((
            FamilySample {
                n,
                word,
                measures: analysis.crossings.iter().map(|c| c.measures).collect(),
            },
            arcs,
        ));
    }
    let family = classify_family(&samples.iter().map(|(s, _)| s.clone()).collect::<Vec<_>>())?;
    Ok(ClassificationReport {
        version: REPORT_VERSION,
        example: bundle.name.to_string(),
        row: dichotomy_row(family.regime),
        family,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn refutation_row() {
        let b = corpus::get("gap-refutation").unwrap();
        let r = classification_report(&b, &[], SearchLimits::default()).unwrap();
        assert_eq!(r.family.regime, Regime::BoundedInnerUnboundedGap);
        assert_eq!(r.row.inner_segment_measure, "O(1)");
        assert_eq!(r.row.crossing_gap, "ω(1)");
        assert!(r.to_string().contains("Inner segment measure | Crossing gap"));
        let svg = r.combined_svg();
        assert_eq!(svg.matches("<g transform").count(), 5);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["family"]["regime"], "bounded-inner-unbounded-gap");
    }
}
