//! Plain-text formats.
//!
//! Hypergraph:
//!
//! ```text
//! r n m
//! v_1 .. v_r        (m lines, ascending ids)
//! parts             (optional)
//! p_0 .. p_(n-1)
//! ```
//!
//! A reduced graph uses the same layout for its instances followed by a
//! `sources` line and a line of source edge indices. Lines starting with `#`
//! are comments. Writers emit LF line endings and no comments; readers also
//! accept the ids of a trailing section on the keyword line itself.
//!
//! Polynomial dump: a `p nvars d` header line, then every coefficient in
//! canonical monomial order on one line.

use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::field::{FieldWord, PrimeField};
use crate::hypergraph::{Hypergraph, HypergraphError};
use crate::poly::{MonomialBasis, MultiPoly, PolyError};
use crate::reduction::{Instance, ReducedGraph, ReductionError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unexpected end of input: {0}")]
    Truncated(String),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
                .filter(|(_, l)| !l.trim_start().starts_with('#') && !l.trim().is_empty()),
        );
        Self {
            inner: it.peekable(),
        }
    }

    fn next_line(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        self.inner
            .next()
            .ok_or_else(|| ParseError::Truncated(what.to_string()))
    }

    fn peek(&mut self) -> Option<&(usize, &'a str)> {
        self.inner.peek()
    }
}

fn numbers(line: usize, text: &str) -> Result<Vec<u64>, ParseError> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<u64>().map_err(|_| ParseError::Syntax {
                line,
                message: format!("expected a non-negative integer, found {t:?}"),
            })
        })
        .collect()
}

fn fixed(line: usize, text: &str, count: usize, what: &str) -> Result<Vec<u64>, ParseError> {
    let v = numbers(line, text)?;
    if v.len() != count {
        return Err(ParseError::Syntax {
            line,
            message: format!("expected {count} values for {what}, found {}", v.len()),
        });
    }
    Ok(v)
}

fn as_vertex(line: usize, v: u64) -> Result<u32, ParseError> {
    u32::try_from(v).map_err(|_| ParseError::Syntax {
        line,
        message: format!("vertex id {v} too large"),
    })
}

struct Body {
    r: usize,
    n: usize,
    edges: Vec<Vec<u32>>,
    sections: Vec<(String, Vec<u64>)>,
}

/// Header, edge lines, and any keyword sections of `count` ids each.
fn parse_body(
    text: &str,
    section_len: impl Fn(&str, usize, usize) -> Option<usize>,
) -> Result<Body, ParseError> {
    let mut lines = Lines::new(text);
    let (ln, header) = lines.next_line("header `r n m`")?;
    let h = fixed(ln, header, 3, "the header `r n m`")?;
    let (r, n, m) = (h[0] as usize, h[1] as usize, h[2] as usize);
    let mut edges = Vec::with_capacity(m);
    for i in 0..m {
        let (ln, l) = lines.next_line(&format!("edge {i} of {m}"))?;
        let vs = numbers(ln, l)?;
        if vs.len() != r {
            return Err(ParseError::Syntax {
                line: ln,
                message: format!("edge {i} has {} vertices, expected {r}", vs.len()),
            });
        }
        edges.push(
            vs.into_iter()
                .map(|v| as_vertex(ln, v))
                .collect::<Result<_, _>>()?,
        );
    }
    let mut sections = Vec::new();
    while let Ok((ln, l)) = lines.next_line("section") {
        let mut tokens = l.split_whitespace();
        let keyword = tokens.next().unwrap_or_default().to_string();
        let Some(expected) = section_len(&keyword, n, m) else {
            return Err(ParseError::Syntax {
                line: ln,
                message: format!("unexpected content {l:?}"),
            });
        };
        let rest: Vec<&str> = tokens.collect();
        let mut values = numbers(ln, &rest.join(" "))?;
        while values.len() < expected {
            match lines.peek() {
                Some((_, next))
                    if next
                        .split_whitespace()
                        .next()
                        .is_some_and(|t| t.parse::<u64>().is_ok()) =>
                {
                    let (ln, next) = lines.next_line(&keyword)?;
                    values.extend(numbers(ln, next)?);
                }
                _ => break,
            }
        }
        if values.len() != expected {
            return Err(ParseError::Syntax {
                line: ln,
                message: format!(
                    "`{keyword}` needs {expected} values, found {}",
                    values.len()
                ),
            });
        }
        sections.push((keyword, values));
    }
    Ok(Body {
        r,
        n,
        edges,
        sections,
    })
}

fn write_edges(out: &mut String, r: usize, n: usize, edges: &[Vec<u32>]) {
    let _ = writeln!(out, "{r} {n} {}", edges.len());
    for e in edges {
        out.push_str(&join(e.iter()));
        out.push('\n');
    }
}

fn join<T: std::fmt::Display>(items: impl Iterator<Item = T>) -> String {
    items.map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn write_hypergraph(h: &Hypergraph) -> String {
    let mut out = String::new();
    write_edges(&mut out, h.uniformity(), h.vertex_count(), h.edges());
    if let Some(parts) = h.parts() {
        out.push_str("parts\n");
        out.push_str(&join(parts.iter()));
        out.push('\n');
    }
    out
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph, ParseError> {
    let body = parse_body(text, |kw, n, _| (kw == "parts").then_some(n))?;
    let mut h = Hypergraph::new(body.r, body.n, body.edges)?;
    for (_, values) in body.sections {
        let parts = values
            .into_iter()
            .map(|p| u32::try_from(p).unwrap_or(u32::MAX))
            .collect();
        h = h.with_parts(parts)?;
    }
    Ok(h)
}

pub fn write_reduced(g: &ReducedGraph) -> String {
    let mut out = String::new();
    let edges: Vec<Vec<u32>> = g.instances().iter().map(|i| i.m_set.clone()).collect();
    write_edges(&mut out, g.uniformity(), g.vertex_count(), &edges);
    out.push_str("sources\n");
    out.push_str(&join(g.instances().iter().map(|i| i.source_edge)));
    out.push('\n');
    out
}

pub fn parse_reduced(text: &str) -> Result<ReducedGraph, ParseError> {
    let body = parse_body(text, |kw, _, m| (kw == "sources").then_some(m))?;
    // Validates arity and ranges, and sorts each m-set.
    let h = Hypergraph::new(body.r, body.n, body.edges)?;
    let sources = body
        .sections
        .into_iter()
        .next()
        .map(|(_, v)| v)
        .ok_or_else(|| ParseError::Truncated("`sources` section".into()))?;
    let instances = h
        .edges()
        .iter()
        .zip(sources)
        .map(|(e, s)| Instance {
            m_set: e.clone(),
            source_edge: s as usize,
        })
        .collect();
    Ok(ReducedGraph::from_instances(body.r, body.n, instances)?)
}

pub fn write_poly<W: FieldWord>(f: &MultiPoly<W>) -> String {
    format!(
        "{} {} {}\n{}\n",
        f.field().order(),
        f.nvars(),
        f.degree(),
        join(f.coefficients().iter())
    )
}

pub fn parse_poly<W: FieldWord>(text: &str) -> Result<MultiPoly<W>, ParseError> {
    let mut lines = Lines::new(text);
    let (ln, header) = lines.next_line("header `p nvars d`")?;
    let h = fixed(ln, header, 3, "the header `p nvars d`")?;
    let field = PrimeField::<W>::new(h[0]).map_err(PolyError::from)?;
    let degree = u32::try_from(h[2]).map_err(|_| ParseError::Syntax {
        line: ln,
        message: "degree too large".into(),
    })?;
    let basis = Arc::new(MonomialBasis::new(h[1] as usize, degree)?);
    let mut coeffs = Vec::with_capacity(basis.len());
    while let Ok((ln, l)) = lines.next_line("coefficients") {
        coeffs.extend(numbers(ln, l)?);
    }
    Ok(MultiPoly::from_coefficients(field, basis, &coeffs)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::{reduce, ReductionParams};

    #[test]
    fn hypergraph_text_is_exact() {
        let h = Hypergraph::new(2, 4, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]])
            .unwrap()
            .with_parts(vec![0, 1, 0, 1])
            .unwrap();
        let text = write_hypergraph(&h);
        assert_eq!(text, "2 4 4\n0 1\n1 2\n2 3\n0 3\nparts\n0 1 0 1\n");
        assert_eq!(parse_hypergraph(&text).unwrap(), h);
    }

    #[test]
    fn comments_and_inline_sections() {
        let text = "# a triangle\n3 3 1\n# the edge\n0 1 2\nparts 0 1 2\n";
        let h = parse_hypergraph(text).unwrap();
        assert_eq!(h.parts(), Some(&[0, 1, 2][..]));
        assert_eq!(write_hypergraph(&h), "3 3 1\n0 1 2\nparts\n0 1 2\n");
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert!(matches!(
            parse_hypergraph("3 3 1\n0 1\n"),
            Err(ParseError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_hypergraph("3 3 2\n0 1 2\n"),
            Err(ParseError::Truncated(_))
        ));
        assert!(matches!(
            parse_hypergraph("3 3 1\n0 1 1\n"),
            Err(ParseError::Hypergraph(HypergraphError::DuplicateVertex {
                edge: 0,
                vertex: 1
            }))
        ));
        assert!(matches!(
            parse_hypergraph("2 3 1\n0 x\n"),
            Err(ParseError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_hypergraph("2 3 1\n0 1\nextra\n"),
            Err(ParseError::Syntax { line: 3, .. })
        ));
    }

    #[test]
    fn reduced_round_trip() {
        let h = Hypergraph::new(3, 4, vec![vec![0, 1, 2], vec![0, 1, 2], vec![1, 2, 3]]).unwrap();
        let g = reduce(&h, &ReductionParams::new(2)).unwrap();
        let text = write_reduced(&g);
        assert_eq!(text, "2 4 3\n0 1\n0 2\n1 2\nsources\n0 1 2\n");
        assert_eq!(parse_reduced(&text).unwrap(), g);
    }

    #[test]
    fn empty_reduced_graph() {
        let h = Hypergraph::empty(3, 2).unwrap();
        let g = reduce(&h, &ReductionParams::new(2)).unwrap();
        let text = write_reduced(&g);
        assert_eq!(text, "2 2 0\nsources\n\n");
        assert_eq!(parse_reduced(&text).unwrap(), g);
    }

    #[test]
    fn poly_dump_round_trip() {
        let field = PrimeField::<u32>::new(5).unwrap();
        let basis = Arc::new(MonomialBasis::new(2, 1).unwrap());
        let f = MultiPoly::from_coefficients(field, basis, &[3, 0, 4]).unwrap();
        let text = write_poly(&f);
        assert_eq!(text, "5 2 1\n3 0 4\n");
        assert_eq!(parse_poly::<u32>(&text).unwrap(), f);
        assert!(parse_poly::<u32>("4 2 1\n3 0 4\n").is_err());
    }
}
