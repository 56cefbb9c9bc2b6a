//! Stable text formats: rationals as "p/q", inequality files, the graph
//! format, and report rendering. Parse and serialize round-trip exactly;
//! no floats appear in any persisted artifact.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;

pub type Rat = BigRational;

/// Parses "p" or "p/q" into a rational (q > 0 after normalization).
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let parse_int = |t: &str| -> Result<num_bigint::BigInt, String> {
        t.parse().map_err(|_| format!("invalid integer '{t}'"))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(format!("zero denominator in '{s}'"));
            }
            Ok(Rat::new(parse_int(p)?, den))
        }
    }
}

use num_traits::Zero;

/// Canonical rendering: reduced, q > 0, integers without a denominator.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A translation-invariant inequality file.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InequalityFile {
    pub m: usize,
    pub r: usize,
    pub alpha: Vec<Rat>,
    pub beta: Option<Rat>,
    pub annotations: BTreeMap<String, String>,
}

impl InequalityFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut lines = text.lines();
        if lines.next() != Some("tibell-ineq v1") {
            return Err("missing header 'tibell-ineq v1'".into());
        }
        let mut m = None;
        let mut r = None;
        let mut alpha = None;
        let mut beta = None;
        let mut annotations = BTreeMap::new();
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
            match key {
                "m" => m = Some(rest.parse::<usize>().map_err(|e| e.to_string())?),
                "r" => r = Some(rest.parse::<usize>().map_err(|e| e.to_string())?),
                "alpha" => {
                    alpha = Some(
                        rest.split_whitespace()
                            .map(parse_rat)
                            .collect::<Result<Vec<_>, _>>()?,
                    )
                }
                "beta" => beta = Some(parse_rat(rest)?),
                "annotation" => {
                    let (k, v) = rest.split_once(' ').ok_or("annotation needs key and value")?;
                    annotations.insert(k.to_string(), v.to_string());
                }
                other => return Err(format!("unknown key '{other}'")),
            }
        }
        let (m, r) = (m.ok_or("missing m")?, r.ok_or("missing r")?);
        let alpha: Vec<Rat> = alpha.ok_or("missing alpha")?;
        if m < 2 || r < 1 {
            return Err("need m >= 2 and r >= 1".into());
        }
        if alpha.len() != m + r * m * m {
            return Err(format!(
                "alpha has {} entries, expected {}",
                alpha.len(),
                m + r * m * m
            ));
        }
        Ok(InequalityFile { m, r, alpha, beta, annotations })
    }

    pub fn serialize(&self) -> String {
        let mut out = String::from("tibell-ineq v1\n");
        out.push_str(&format!("m {}\n", self.m));
        out.push_str(&format!("r {}\n", self.r));
        let coeffs: Vec<String> = self.alpha.iter().map(fmt_rat).collect();
        out.push_str(&format!("alpha {}\n", coeffs.join(" ")));
        if let Some(b) = &self.beta {
            out.push_str(&format!("beta {}\n", fmt_rat(b)));
        }
        for (k, v) in &self.annotations {
            out.push_str(&format!("annotation {k} {v}\n"));
        }
        out
    }
}

/// Graph format: header "n E", then E lines "i j" in sorted order.
pub fn fmt_graph(g: &tibell::graph::DiGraph) -> String {
    let mut out = format!("{} {}\n", g.node_count(), g.edge_count());
    for (i, j) in g.edges() {
        out.push_str(&format!("{i} {j}\n"));
    }
    out
}

/// Parser counterpart of [`fmt_graph`]; the binary only writes graphs today.
#[allow(dead_code)]
pub fn parse_graph(text: &str) -> Result<tibell::graph::DiGraph, String> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or("empty graph")?;
    let mut it = header.split_whitespace();
    let n: usize = it.next().ok_or("bad header")?.parse().map_err(|_| "bad n")?;
    let e: usize = it.next().ok_or("bad header")?.parse().map_err(|_| "bad E")?;
    let mut edges = Vec::with_capacity(e);
    for line in lines {
        let mut it = line.split_whitespace();
        let i: usize = it.next().ok_or("bad edge")?.parse().map_err(|_| "bad i")?;
        let j: usize = it.next().ok_or("bad edge")?.parse().map_err(|_| "bad j")?;
        if i >= n || j >= n {
            return Err(format!("edge ({i},{j}) out of range"));
        }
        edges.push((i, j));
    }
    if edges.len() != e {
        return Err(format!("expected {e} edges, found {}", edges.len()));
    }
    Ok(tibell::graph::DiGraph::new(n, edges))
}

/// Machine-readable report: header, command echo, input hash, payload lines,
/// then a timing line (the only nondeterministic field).
pub struct Report {
    pub command: String,
    pub input_hash: String,
    pub lines: Vec<String>,
    started: std::time::Instant,
}

impl Report {
    pub fn new(command: String, input: &[u8]) -> Self {
        use sha2::Digest;
        let hash = format!("{:x}", sha2::Sha256::digest(input));
        Report { command, input_hash: hash, lines: Vec::new(), started: std::time::Instant::now() }
    }

    pub fn push(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    pub fn render(&self) -> String {
        let mut out = String::from("tibell-report v1\n");
        out.push_str(&format!("command {}\n", self.command));
        out.push_str(&format!("input-hash {}\n", self.input_hash));
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out.push_str(&format!("timing-ms {}\n", self.started.elapsed().as_millis()));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rat_round_trip() {
        for s in ["0", "5", "-7", "3/4", "-9/2"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(fmt_rat(&r), s);
        }
        // Non-canonical inputs normalize.
        assert_eq!(fmt_rat(&parse_rat("4/6").unwrap()), "2/3");
        assert_eq!(fmt_rat(&parse_rat("3/-6").unwrap()), "-1/2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn inequality_round_trip() {
        let f = InequalityFile {
            m: 2,
            r: 1,
            alpha: ["0", "0", "2", "-1", "1", "0"].map(|s| parse_rat(s).unwrap()).to_vec(),
            beta: Some(parse_rat("-2").unwrap()),
            annotations: BTreeMap::from([("note".to_string(), "example".to_string())]),
        };
        let text = f.serialize();
        assert_eq!(InequalityFile::parse(&text).unwrap(), f);
    }

    #[test]
    fn inequality_rejects_bad_input() {
        assert!(InequalityFile::parse("nope").is_err());
        assert!(InequalityFile::parse("tibell-ineq v1\nm 2\nr 1\nalpha 1 2\n").is_err());
        assert!(InequalityFile::parse("tibell-ineq v1\nr 1\nalpha 1 2 3 4 5 6\n").is_err());
    }

    #[test]
    fn graph_round_trip() {
        let g = tibell::graph::DiGraph::complete(3);
        let text = fmt_graph(&g);
        assert_eq!(parse_graph(&text).unwrap(), g);
        assert!(parse_graph("2 1\n0 5\n").is_err());
        assert!(parse_graph("2 2\n0 1\n").is_err());
    }
}
