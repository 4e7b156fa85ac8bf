//! Plain-text readers and writers for graphs, distributions, game specs,
//! and partitioned instances.
//!
//! Graph blocks are `n m` followed by `m` edge lines `u v` (0-indexed).
//! Distributions are `dist n k` followed by `k` probability lines each
//! carrying a graph block; game specs are `game beta eps o`, an `e_a`
//! block, then `candidates c` and `c` blocks; instances are `kparts k n`
//! followed by `k` graph blocks.

use std::fmt::Write as _;

use crate::dist::GraphDistribution;
use crate::error::{Error, Result};
use crate::game::MvcGameSpec;
use crate::graph::Graph;
use crate::protocol::PartitionedInstance;

/// Line-oriented cursor that tracks 1-based line numbers for errors.
struct Lines<'a> {
    lines: std::str::Lines<'a>,
    current: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Lines<'a> {
        Lines { lines: text.lines(), current: 0 }
    }

    /// Next non-blank line, trimmed.
    fn next(&mut self) -> Result<&'a str> {
        loop {
            self.current += 1;
            match self.lines.next() {
                Some(l) if l.trim().is_empty() => continue,
                Some(l) => return Ok(l.trim()),
                None => {
                    return Err(Error::Parse {
                        line: self.current,
                        msg: "unexpected end of input".into(),
                    })
                }
            }
        }
    }

    fn finish(&mut self) -> Result<()> {
        loop {
            self.current += 1;
            match self.lines.next() {
                Some(l) if l.trim().is_empty() => continue,
                Some(l) => {
                    return Err(Error::Parse {
                        line: self.current,
                        msg: format!("trailing content: {l:?}"),
                    })
                }
                None => return Ok(()),
            }
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.current, msg: msg.into() }
    }

    fn fields<const K: usize>(&mut self, expect: &str) -> Result<[&'a str; K]> {
        let line = self.next()?;
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != K {
            return Err(self.err(format!(
                "expected {expect} ({K} fields), got {:?}",
                line
            )));
        }
        let mut out = [""; K];
        out.copy_from_slice(&parts);
        Ok(out)
    }

    fn usize_field(&self, s: &str, what: &str) -> Result<usize> {
        s.parse()
            .map_err(|_| self.err(format!("{what} is not a count: {s:?}")))
    }

    fn f64_field(&self, s: &str, what: &str) -> Result<f64> {
        s.parse()
            .map_err(|_| self.err(format!("{what} is not a number: {s:?}")))
    }
}

fn parse_graph_block(cur: &mut Lines<'_>) -> Result<Graph> {
    let [n_s, m_s] = cur.fields::<2>("graph header \"n m\"")?;
    let n = cur.usize_field(n_s, "vertex count")?;
    let m = cur.usize_field(m_s, "edge count")?;
    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::new();
    for _ in 0..m {
        let [u_s, v_s] = cur.fields::<2>("edge line \"u v\"")?;
        let u = cur.usize_field(u_s, "endpoint")?;
        let v = cur.usize_field(v_s, "endpoint")?;
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            return Err(cur.err(format!("duplicate edge ({u}, {v})")));
        }
        edges.push((u, v));
    }
    Graph::new(n, &edges).map_err(|e| cur.err(e.to_string()))
}

fn write_graph_block(out: &mut String, g: &Graph) {
    writeln!(out, "{} {}", g.n(), g.edge_count()).unwrap();
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
}

/// Parse a graph document: a single graph block.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut cur = Lines::new(text);
    let g = parse_graph_block(&mut cur)?;
    cur.finish()?;
    Ok(g)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = String::new();
    write_graph_block(&mut out, g);
    out
}

/// Parse a distribution document: `dist n k`, then `k` support entries,
/// each a probability line followed by a graph block.
pub fn parse_distribution(text: &str) -> Result<GraphDistribution> {
    let mut cur = Lines::new(text);
    let [tag, n_s, k_s] = cur.fields::<3>("header \"dist n k\"")?;
    if tag != "dist" {
        return Err(cur.err(format!("expected \"dist\" header, got {tag:?}")));
    }
    let n = cur.usize_field(n_s, "vertex count")?;
    let k = cur.usize_field(k_s, "support size")?;
    let mut support = Vec::with_capacity(k);
    for _ in 0..k {
        let [p_s] = cur.fields::<1>("probability line")?;
        let p = cur.f64_field(p_s, "probability")?;
        let g = parse_graph_block(&mut cur)?;
        if g.n() != n {
            return Err(cur.err(format!(
                "support graph has {} vertices, header says {n}",
                g.n()
            )));
        }
        support.push((g, p));
    }
    cur.finish()?;
    GraphDistribution::new(support)
}

pub fn write_distribution(d: &GraphDistribution) -> String {
    let mut out = String::new();
    writeln!(out, "dist {} {}", d.n(), d.support_len()).unwrap();
    for (g, p) in d.support() {
        writeln!(out, "{p}").unwrap();
        write_graph_block(&mut out, g);
    }
    out
}

/// Parse a game document: `game beta eps o`, the base graph block, then
/// `candidates c` and `c` graph blocks.
pub fn parse_game_spec(text: &str) -> Result<MvcGameSpec> {
    let mut cur = Lines::new(text);
    let [tag, beta_s, eps_s, o_s] = cur.fields::<4>("header \"game beta eps o\"")?;
    if tag != "game" {
        return Err(cur.err(format!("expected \"game\" header, got {tag:?}")));
    }
    let beta = cur.f64_field(beta_s, "beta")?;
    let eps = cur.f64_field(eps_s, "eps")?;
    let o = cur.f64_field(o_s, "guess")?;
    let e_a = parse_graph_block(&mut cur)?;
    let [tag, c_s] = cur.fields::<2>("header \"candidates c\"")?;
    if tag != "candidates" {
        return Err(cur.err(format!("expected \"candidates\" header, got {tag:?}")));
    }
    let c = cur.usize_field(c_s, "candidate count")?;
    let mut candidates = Vec::with_capacity(c);
    for _ in 0..c {
        candidates.push(parse_graph_block(&mut cur)?);
    }
    cur.finish()?;
    MvcGameSpec::new(e_a, beta, eps, o, candidates)
}

pub fn write_game_spec(spec: &MvcGameSpec) -> String {
    let mut out = String::new();
    writeln!(out, "game {} {} {}", spec.beta(), spec.eps(), spec.o()).unwrap();
    write_graph_block(&mut out, spec.e_a());
    writeln!(out, "candidates {}", spec.candidates().len()).unwrap();
    for g in spec.candidates() {
        write_graph_block(&mut out, g);
    }
    out
}

/// Parse an instance document: `kparts k n`, then `k` graph blocks.
pub fn parse_instance(text: &str) -> Result<PartitionedInstance> {
    let mut cur = Lines::new(text);
    let [tag, k_s, n_s] = cur.fields::<3>("header \"kparts k n\"")?;
    if tag != "kparts" {
        return Err(cur.err(format!("expected \"kparts\" header, got {tag:?}")));
    }
    let k = cur.usize_field(k_s, "party count")?;
    let n = cur.usize_field(n_s, "vertex count")?;
    let mut parts = Vec::with_capacity(k);
    for _ in 0..k {
        let g = parse_graph_block(&mut cur)?;
        if g.n() != n {
            return Err(cur.err(format!(
                "part has {} vertices, header says {n}",
                g.n()
            )));
        }
        parts.push(g);
    }
    cur.finish()?;
    PartitionedInstance::new(parts)
}

pub fn write_instance(inst: &PartitionedInstance) -> String {
    let mut out = String::new();
    writeln!(out, "kparts {} {}", inst.k(), inst.n()).unwrap();
    for g in inst.parts() {
        write_graph_block(&mut out, g);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexSet;

    #[test]
    fn graph_round_trip() {
        let g = Graph::new(4, &[(0, 1), (2, 3), (1, 2)]).unwrap();
        let text = write_graph(&g);
        assert_eq!(parse_graph(&text).unwrap(), g);
        assert_eq!(text.lines().next().unwrap(), "4 3");
    }

    #[test]
    fn graph_parse_rejects_malformed_input() {
        assert!(matches!(parse_graph("3"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("3 1\n0 0"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("3 1\n0 5"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_graph("3 2\n0 1\n1 0"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(parse_graph("3 2\n0 1"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_graph("3 1\n0 1\nextra"),
            Err(Error::Parse { .. })
        ));
        // Line numbers point at the offender.
        match parse_graph("3 2\n0 1\n0 1") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn distribution_round_trip_and_validation() {
        let d = GraphDistribution::new(vec![
            (Graph::new(3, &[(0, 1)]).unwrap(), 0.25),
            (Graph::new(3, &[(1, 2)]).unwrap(), 0.75),
        ])
        .unwrap();
        let text = write_distribution(&d);
        let back = parse_distribution(&text).unwrap();
        assert_eq!(back.support().len(), 2);
        assert_eq!(back.support()[0].0, d.support()[0].0);
        // Sum-to-one violations surface from the loader.
        let bad = "dist 2 1\n0.5\n2 1\n0 1\n";
        assert!(parse_distribution(bad).is_err());
        // Mismatched n is a parse error.
        let bad = "dist 3 1\n1.0\n2 1\n0 1\n";
        assert!(matches!(parse_distribution(bad), Err(Error::Parse { .. })));
    }

    #[test]
    fn game_spec_round_trip() {
        let spec = MvcGameSpec::new(
            Graph::new(3, &[(0, 1)]).unwrap(),
            1.0,
            0.1,
            1.0,
            vec![Graph::new(3, &[(1, 2)]).unwrap(), Graph::empty(3)],
        )
        .unwrap();
        let text = write_game_spec(&spec);
        let back = parse_game_spec(&text).unwrap();
        assert_eq!(back.e_a(), spec.e_a());
        assert_eq!(back.beta(), spec.beta());
        assert_eq!(back.candidates().len(), 2);
        // Window violations surface from spec validation.
        let bad = "game 1.0 0.1 1.0\n3 1\n0 1\ncandidates 1\n3 2\n1 2\n0 2\n";
        assert!(parse_game_spec(bad).is_err());
    }

    #[test]
    fn instance_round_trip() {
        let inst = PartitionedInstance::new(vec![
            Graph::new(4, &[(0, 1)]).unwrap(),
            Graph::new(4, &[(1, 2), (2, 3)]).unwrap(),
        ])
        .unwrap();
        let text = write_instance(&inst);
        assert!(text.starts_with("kparts 2 4\n"));
        assert_eq!(parse_instance(&text).unwrap(), inst);
        let _ = VertexSet::EMPTY;
    }

    #[test]
    fn blank_lines_are_tolerated_between_blocks() {
        let text = "kparts 2 3\n\n3 1\n0 1\n\n3 1\n1 2\n\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.k(), 2);
    }
}
