//! hMETIS `.hgr` text format.
//!
//! Header line `m n [fmt]` (hyperedges first), then one line per hyperedge
//! with 1-based pins, then optionally one vertex weight per line. `fmt` is
//! `1` for hyperedge weights (leading token on each hyperedge line), `10`
//! for vertex weights, `11` for both, absent for fully unit weights. Lines
//! starting with `%` are comments; blank lines are ignored.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

#[derive(Clone, Copy)]
struct Format {
    edge_weights: bool,
    vertex_weights: bool,
}

fn parse_format(token: &str) -> Result<Format> {
    match token {
        "1" => Ok(Format {
            edge_weights: true,
            vertex_weights: false,
        }),
        "10" => Ok(Format {
            edge_weights: false,
            vertex_weights: true,
        }),
        "11" => Ok(Format {
            edge_weights: true,
            vertex_weights: true,
        }),
        other => Err(Error::Header(format!(
            "unknown fmt `{other}` (expected 1, 10 or 11)"
        ))),
    }
}

fn parse_count(token: &str, what: &str) -> Result<usize> {
    token
        .parse()
        .map_err(|_| Error::Header(format!("{what} `{token}` is not a non-negative integer")))
}

fn parse_weight(token: &str, line: usize) -> Result<f64> {
    token.parse().map_err(|_| Error::Malformed {
        line,
        reason: format!("weight `{token}` is not a number"),
    })
}

/// Parse `.hgr` text into a [`Hypergraph`].
pub fn parse_hmetis(text: &str) -> Result<Hypergraph> {
    // (1-based physical line number, content) with comments/blanks dropped.
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));

    let (header_line, header) = lines
        .next()
        .ok_or_else(|| Error::Header("empty input".into()))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    let fmt = match tokens.len() {
        2 => Format {
            edge_weights: false,
            vertex_weights: false,
        },
        3 => parse_format(tokens[2])?,
        _ => {
            return Err(Error::Header(format!(
                "line {header_line}: expected `m n [fmt]`, got {} tokens",
                tokens.len()
            )))
        }
    };
    let m = parse_count(tokens[0], "hyperedge count")?;
    let n = parse_count(tokens[1], "vertex count")?;

    let mut pins = Vec::with_capacity(m);
    let mut edge_weights = Vec::with_capacity(m);
    for e in 0..m {
        let (line, content) = lines.next().ok_or_else(|| Error::Malformed {
            line: header_line,
            reason: format!("expected {m} hyperedge lines, found {e}"),
        })?;
        let mut tokens = content.split_whitespace();
        if fmt.edge_weights {
            let token = tokens.next().ok_or(Error::Malformed {
                line,
                reason: "missing hyperedge weight".into(),
            })?;
            edge_weights.push(parse_weight(token, line)?);
        } else {
            edge_weights.push(1.0);
        }
        let mut edge = Vec::new();
        for token in tokens {
            let pin: usize = token.parse().map_err(|_| Error::Malformed {
                line,
                reason: format!("pin `{token}` is not a positive integer"),
            })?;
            if pin == 0 || pin > n {
                return Err(Error::PinOutOfRange { edge: e, pin, n });
            }
            edge.push((pin - 1) as u32);
        }
        if edge.is_empty() {
            return Err(Error::EmptyHyperedge { edge: e });
        }
        pins.push(edge);
    }

    let mut vertex_weights = vec![1.0; n];
    if fmt.vertex_weights {
        for (v, weight) in vertex_weights.iter_mut().enumerate() {
            let (line, content) = lines.next().ok_or_else(|| Error::Malformed {
                line: header_line,
                reason: format!("expected {n} vertex weight lines, found {v}"),
            })?;
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if tokens.len() != 1 {
                return Err(Error::Malformed {
                    line,
                    reason: "expected exactly one vertex weight".into(),
                });
            }
            *weight = parse_weight(tokens[0], line)?;
        }
    }

    if let Some((line, _)) = lines.next() {
        return Err(Error::Malformed {
            line,
            reason: "trailing content after final expected line".into(),
        });
    }

    Hypergraph::new(n, pins, vertex_weights, edge_weights)
}

fn push_weight(out: &mut String, w: f64) {
    if w.fract() == 0.0 && w.abs() < 1e15 {
        let _ = write!(out, "{}", w as i64);
    } else {
        let _ = write!(out, "{w}");
    }
}

/// Serialize a [`Hypergraph`] as `.hgr` text.
///
/// The fmt field is emitted only when the corresponding weights are
/// non-unit, so unit-weight hypergraphs round-trip to the two-token header.
pub fn write_hmetis(h: &Hypergraph) -> String {
    let edge_weights = (0..h.hyperedge_count() as u32).any(|e| h.hyperedge_weight(e) != 1.0);
    let vertex_weights = (0..h.vertex_count() as u32).any(|v| h.vertex_weight(v) != 1.0);
    let mut out = String::new();
    let _ = write!(out, "{} {}", h.hyperedge_count(), h.vertex_count());
    match (edge_weights, vertex_weights) {
        (true, true) => out.push_str(" 11"),
        (false, true) => out.push_str(" 10"),
        (true, false) => out.push_str(" 1"),
        (false, false) => {}
    }
    out.push('\n');
    for e in 0..h.hyperedge_count() as u32 {
        if edge_weights {
            push_weight(&mut out, h.hyperedge_weight(e));
            out.push(' ');
        }
        let pins: Vec<String> = h.pins(e).iter().map(|&v| (v + 1).to_string()).collect();
        out.push_str(&pins.join(" "));
        out.push('\n');
    }
    if vertex_weights {
        for v in 0..h.vertex_count() as u32 {
            push_weight(&mut out, h.vertex_weight(v));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_unweighted_with_comments() {
        let text = "% two hyperedges\n2 4\n1 2 3\n% second\n3 4\n";
        let h = parse_hmetis(text).unwrap();
        assert_eq!(h.vertex_count(), 4);
        assert_eq!(h.hyperedge_count(), 2);
        assert_eq!(h.pins(0), &[0, 1, 2]);
        assert_eq!(h.pins(1), &[2, 3]);
        assert!(h.has_unit_weights());
    }

    #[test]
    fn parses_edge_weights() {
        let h = parse_hmetis("2 3 1\n5 1 2\n2 2 3\n").unwrap();
        assert_eq!(h.hyperedge_weight(0), 5.0);
        assert_eq!(h.hyperedge_weight(1), 2.0);
        assert_eq!(h.pins(0), &[0, 1]);
    }

    #[test]
    fn parses_both_weight_kinds() {
        let h = parse_hmetis("1 2 11\n3 1 2\n7\n9\n").unwrap();
        assert_eq!(h.hyperedge_weight(0), 3.0);
        assert_eq!(h.vertex_weight(0), 7.0);
        assert_eq!(h.vertex_weight(1), 9.0);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(parse_hmetis(""), Err(Error::Header(_))));
        assert!(matches!(parse_hmetis("2\n"), Err(Error::Header(_))));
        assert!(matches!(
            parse_hmetis("1 2 7\n1 2\n"),
            Err(Error::Header(_))
        ));
        assert!(matches!(
            parse_hmetis("1 2\n1 x\n"),
            Err(Error::Malformed { .. })
        ));
        assert!(matches!(
            parse_hmetis("2 2\n1 2\n"),
            Err(Error::Malformed { .. })
        ));
        assert!(matches!(
            parse_hmetis("1 2\n1 3\n"),
            Err(Error::PinOutOfRange { pin: 3, .. })
        ));
        assert!(matches!(
            parse_hmetis("1 2\n1 0\n"),
            Err(Error::PinOutOfRange { pin: 0, .. })
        ));
        assert!(matches!(
            parse_hmetis("1 2\n1 1\n"),
            Err(Error::DuplicatePin { .. })
        ));
        assert!(matches!(
            parse_hmetis("1 2\n1 2\n1 2\n"),
            Err(Error::Malformed { .. })
        ));
        assert!(matches!(
            parse_hmetis("1 2 10\n1 2\n3\n"),
            Err(Error::Malformed { .. })
        ));
    }

    #[test]
    fn writer_emits_minimal_header() {
        let h = Hypergraph::unit(4, vec![vec![0, 1, 2], vec![2, 3]]).unwrap();
        assert_eq!(write_hmetis(&h), "2 4\n1 2 3\n3 4\n");
    }

    #[test]
    fn round_trip_preserves_structure() {
        let weighted = Hypergraph::new(
            3,
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
            vec![2.0, 1.0, 4.0],
            vec![1.0, 3.0, 1.0],
        )
        .unwrap();
        let unit = Hypergraph::unit(5, vec![vec![0, 4], vec![1, 2, 3]]).unwrap();
        for h in [weighted, unit] {
            let text = write_hmetis(&h);
            let back = parse_hmetis(&text).unwrap();
            assert_eq!(back, h);
        }
    }
}
