//! Nexus TAXA and SPLITS blocks for full split systems.

use std::fmt::Write;

use splitclosure::{CyclicOrdering, PartialSplit, TaxonUniverse};

fn quote(label: &str) -> String {
    format!("'{}'", label.replace('\'', "''"))
}

/// Writes the document. Each split is listed by the 1-based indices of the
/// side containing the first taxon, ascending; `splits` must be full.
pub fn write(
    universe: &TaxonUniverse,
    splits: &[PartialSplit],
    cycle: Option<&CyclicOrdering>,
) -> String {
    let n = universe.len();
    let mut out = String::new();
    out.push_str("#NEXUS\n\nBEGIN TAXA;\n");
    let _ = writeln!(out, "DIMENSIONS ntax={n};");
    out.push_str("TAXLABELS\n");
    for (i, name) in universe.names().iter().enumerate() {
        let _ = writeln!(out, "[{}] {}", i + 1, quote(name));
    }
    out.push_str(";\nEND; [TAXA]\n\nBEGIN SPLITS;\n");
    let _ = writeln!(out, "DIMENSIONS ntax={n} nsplits={};", splits.len());
    out.push_str("FORMAT labels=no weights=yes confidences=no intervals=no;\n");
    if let Some(c) = cycle {
        let idx: Vec<String> = c.order().iter().map(|t| (t + 1).to_string()).collect();
        let _ = writeln!(out, "CYCLE {};", idx.join(" "));
    }
    out.push_str("MATRIX\n");
    for (i, s) in splits.iter().enumerate() {
        let side = s.side_of(0).unwrap_or(s.first());
        let size = s.first().len().min(s.second().len());
        let idx: Vec<String> = side.iter().map(|t| (t + 1).to_string()).collect();
        let _ = writeln!(out, "[{}, size={size}]\t1.0\t{},", i + 1, idx.join(" "));
    }
    out.push_str(";\nEND; [SPLITS]\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use splitclosure::parse_split;

    #[test]
    fn document_layout() {
        let u = TaxonUniverse::new(["a", "b", "c", "d'"]).unwrap();
        let splits = [
            parse_split(&u, "a,b|c,d'").unwrap(),
            parse_split(&u, "a|b,c,d'").unwrap(),
        ];
        let c = CyclicOrdering::new(vec![0, 1, 2, 3]).unwrap();
        let doc = write(&u, &splits, Some(&c));
        let want = "#NEXUS\n\nBEGIN TAXA;\nDIMENSIONS ntax=4;\nTAXLABELS\n[1] 'a'\n[2] 'b'\n[3] 'c'\n[4] 'd'''\n;\nEND; [TAXA]\n\n\
                    BEGIN SPLITS;\nDIMENSIONS ntax=4 nsplits=2;\nFORMAT labels=no weights=yes confidences=no intervals=no;\n\
                    CYCLE 1 2 3 4;\nMATRIX\n[1, size=2]\t1.0\t1 2,\n[2, size=1]\t1.0\t1,\n;\nEND; [SPLITS]\n";
        assert_eq!(doc, want);
        assert!(!write(&u, &splits, None).contains("CYCLE"));
    }
}
