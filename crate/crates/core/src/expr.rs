//! Graph expressions accepted on the command line:
//! `path(n)`, `cycle(n)`, `complete(n)`, `wheel(n)`, `fan(n)`,
//! `middle(<expr>)`, `gadget(<expr>)` and `file(<path>)`.

use std::path::Path;

use crate::domination::build_np_gadget;
use crate::error::{Error, Result};
use crate::graph::{build_generator, middle_graph, Family, GeneratorSpec, Graph};

pub fn parse_graph(input: &str) -> Result<Graph> {
    let mut parser = Parser { src: input, pos: 0 };
    let graph = parser.expr()?;
    parser.skip_ws();
    if parser.pos != input.len() {
        return Err(parser.unexpected());
    }
    Ok(graph)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn unexpected(&self) -> Error {
        let token: String = self
            .rest()
            .chars()
            .take_while(|c| !c.is_whitespace())
            .take(16)
            .collect();
        if token.is_empty() {
            Error::Parse(format!("unexpected end of graph expression {:?}", self.src))
        } else {
            Error::Parse(format!("unexpected token {token:?} in {:?}", self.src))
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn ident(&mut self) -> Result<&str> {
        self.skip_ws();
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.unexpected());
        }
        self.pos += len;
        Ok(&self.src[start..start + len])
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.unexpected());
        }
        let digits = &self.src[self.pos..self.pos + len];
        let n = digits
            .parse()
            .map_err(|_| Error::Parse(format!("number {digits:?} out of range")))?;
        self.pos += len;
        Ok(n)
    }

    fn expr(&mut self) -> Result<Graph> {
        let start = self.pos;
        let name = self.ident()?.to_owned();
        let family = match name.as_str() {
            "path" => Some(Family::Path),
            "cycle" => Some(Family::Cycle),
            "complete" => Some(Family::Complete),
            "wheel" => Some(Family::Wheel),
            "fan" => Some(Family::Fan),
            _ => None,
        };
        self.expect('(')?;
        let graph = if let Some(family) = family {
            let n = self.number()?;
            build_generator(GeneratorSpec::new(family, n))?
        } else {
            match name.as_str() {
                "middle" => middle_graph(&self.expr()?)?,
                "gadget" => build_np_gadget(&self.expr()?)?,
                "file" => {
                    self.skip_ws();
                    let close = self
                        .rest()
                        .rfind(')')
                        .ok_or_else(|| Error::Parse("unterminated file(...)".into()))?;
                    let path = self.rest()[..close].trim().to_owned();
                    self.pos += close;
                    read_edge_list(Path::new(&path))?
                }
                _ => {
                    self.pos = start;
                    self.skip_ws();
                    return Err(Error::Parse(format!(
                        "unknown graph constructor {name:?} in {:?}",
                        self.src
                    )));
                }
            }
        };
        self.expect(')')?;
        Ok(graph)
    }
}

/// Reads a whitespace-separated `u v` edge list of 0-based indices. Blank
/// lines and `#` comments are skipped; the vertex count is the largest index
/// plus one.
pub fn read_edge_list(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)?;
    parse_edge_list(&text)
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut vertex_count = 0;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse(format!("line {}: bad vertex index {s:?}", lineno + 1)))
        };
        let [u, v] = fields.as_slice() else {
            return Err(Error::Parse(format!(
                "line {}: expected two vertex indices",
                lineno + 1
            )));
        };
        let (u, v) = (parse(u)?, parse(v)?);
        vertex_count = vertex_count.max(u + 1).max(v + 1);
        edges.push((u, v));
    }
    Graph::unlabeled(vertex_count, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested_expressions() {
        let g = parse_graph("middle(path(4))").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (7, 8));
        let g = parse_graph(" gadget( cycle(5) ) ").unwrap();
        assert_eq!(g.vertex_count(), 7);
        let g = parse_graph("middle(middle(complete(3)))").unwrap();
        assert_eq!(g.vertex_count(), 6 + 9);
    }

    #[test]
    fn names_offending_token() {
        let err = parse_graph("path(4").unwrap_err().to_string();
        assert!(err.contains("end"), "{err}");
        let err = parse_graph("middle(star(3))").unwrap_err().to_string();
        assert!(err.contains("star"), "{err}");
        let err = parse_graph("path(x)").unwrap_err().to_string();
        assert!(err.contains("\"x)\""), "{err}");
        let err = parse_graph("path(3) junk").unwrap_err().to_string();
        assert!(err.contains("junk"), "{err}");
        assert!(parse_graph("wheel(3)").is_err());
    }

    #[test]
    fn edge_list_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        std::fs::write(&path, "0 1\n1 2\n# comment\n\n2 4\n").unwrap();
        let g = parse_graph(&format!("file({})", path.display())).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (5, 3));
        assert!(!g.is_connected());
        assert!(parse_edge_list("0 1 2\n").is_err());
        assert!(parse_edge_list("3 3\n").is_err());
    }
}
