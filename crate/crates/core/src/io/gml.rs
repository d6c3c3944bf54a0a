//! The GML subset used by the classic network corpora: a `graph` block of
//! `node [ id label value ]` and `edge [ source target weight|value ]` blocks.
//! Unknown keys are skipped.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use super::ground_truth::GroundTruth;
use crate::error::{Error, Result};
use crate::graph::{EdgeRecord, Graph, GraphBuilder};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Key(String),
    Num(String),
    Str(String),
    Open,
    Close,
}

fn tokenize(text: &str, origin: &Path) -> Result<Vec<(Token, usize)>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1;
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                line += 1;
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
            }
            '[' => {
                chars.next();
                out.push((Token::Open, line));
            }
            ']' => {
                chars.next();
                out.push((Token::Close, line));
            }
            '"' => {
                let start = line;
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some(ch) => {
                            if ch == '\n' {
                                line += 1;
                            }
                            s.push(ch);
                        }
                        None => return Err(Error::parse(origin, start, "unterminated string")),
                    }
                }
                out.push((Token::Str(s), start));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&ch) = chars.peek() {
                    if ch.is_ascii_alphanumeric() || ch == '_' {
                        s.push(ch);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((Token::Key(s), line));
            }
            c if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' => {
                let mut s = String::new();
                while let Some(&ch) = chars.peek() {
                    if ch.is_ascii_alphanumeric() || matches!(ch, '-' | '+' | '.') {
                        s.push(ch);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((Token::Num(s), line));
            }
            other => return Err(Error::parse(origin, line, format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Value {
    Num(String),
    Str(String),
    List(Vec<Entry>),
}

#[derive(Debug, Clone)]
struct Entry {
    key: String,
    value: Value,
    line: usize,
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    origin: &'a Path,
}

impl Parser<'_> {
    /// Entries up to a closing bracket (`nested`) or end of input.
    fn list(&mut self, nested: Option<usize>) -> Result<Vec<Entry>> {
        let mut entries = Vec::new();
        loop {
            let Some((tok, line)) = self.tokens.get(self.pos).cloned() else {
                return match nested {
                    Some(open) => Err(Error::parse(self.origin, open, "unbalanced brackets: `[` never closed")),
                    None => Ok(entries),
                };
            };
            self.pos += 1;
            let key = match tok {
                Token::Close if nested.is_some() => return Ok(entries),
                Token::Close => return Err(Error::parse(self.origin, line, "unbalanced brackets: unexpected `]`")),
                Token::Key(k) => k,
                other => {
                    return Err(Error::parse(
                        self.origin,
                        line,
                        format!("expected a key, found {other:?}"),
                    ))
                }
            };
            let Some((tok, vline)) = self.tokens.get(self.pos).cloned() else {
                return Err(Error::parse(self.origin, line, format!("key `{key}` has no value")));
            };
            self.pos += 1;
            let value = match tok {
                Token::Num(n) => Value::Num(n),
                Token::Str(s) => Value::Str(s),
                Token::Open => Value::List(self.list(Some(vline))?),
                other => {
                    return Err(Error::parse(
                        self.origin,
                        vline,
                        format!("bad value for `{key}`: {other:?}"),
                    ))
                }
            };
            entries.push(Entry { key, value, line });
        }
    }
}

fn scalar<'e>(entries: &'e [Entry], key: &str) -> Option<&'e Entry> {
    entries
        .iter()
        .find(|e| e.key == key && !matches!(e.value, Value::List(_)))
}

fn text_of(v: &Value) -> &str {
    match v {
        Value::Num(s) | Value::Str(s) => s,
        Value::List(_) => "",
    }
}

fn integer(entry: &Entry, origin: &Path) -> Result<i64> {
    text_of(&entry.value)
        .parse()
        .map_err(|_| Error::parse(origin, entry.line, format!("`{}` must be an integer", entry.key)))
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || c.is_control())
}

/// Parse GML text into a graph and, when any node carries a `value`, the
/// ground truth those values define.
///
/// Nodes are named by their labels when every node has a distinct
/// whitespace-free label, otherwise by their numeric ids. Edge weight is read
/// from `weight`, falling back to `value`, then 1.
pub fn parse_gml(text: &str, origin: &Path) -> Result<(Graph, Option<GroundTruth>)> {
    let tokens = tokenize(text, origin)?;
    let mut parser = Parser { tokens, pos: 0, origin };
    let top = parser.list(None)?;
    let graph = top
        .iter()
        .find_map(|e| match (&e.key[..], &e.value) {
            ("graph", Value::List(body)) => Some(body),
            _ => None,
        })
        .ok_or_else(|| Error::parse(origin, 0, "no `graph [ ... ]` block"))?;

    struct Node {
        id: i64,
        label: Option<String>,
        value: Option<String>,
    }
    let mut nodes: Vec<Node> = Vec::new();
    let mut by_id: HashMap<i64, usize> = HashMap::new();
    let mut edges: Vec<(i64, i64, f64, usize)> = Vec::new();

    for entry in graph {
        let Value::List(body) = &entry.value else { continue };
        match entry.key.as_str() {
            "node" => {
                let id_entry = scalar(body, "id").ok_or_else(|| Error::parse(origin, entry.line, "node without id"))?;
                let id = integer(id_entry, origin)?;
                if by_id.insert(id, nodes.len()).is_some() {
                    return Err(Error::parse(origin, id_entry.line, format!("duplicate node id {id}")));
                }
                nodes.push(Node {
                    id,
                    label: scalar(body, "label").map(|e| text_of(&e.value).to_string()),
                    value: scalar(body, "value").map(|e| text_of(&e.value).to_string()),
                });
            }
            "edge" => {
                let end = |k: &str| -> Result<i64> {
                    let e =
                        scalar(body, k).ok_or_else(|| Error::parse(origin, entry.line, format!("edge without {k}")))?;
                    integer(e, origin)
                };
                let (s, t) = (end("source")?, end("target")?);
                let w = match scalar(body, "weight").or_else(|| scalar(body, "value")) {
                    Some(e) => text_of(&e.value)
                        .parse::<f64>()
                        .map_err(|_| Error::parse(origin, e.line, format!("non-numeric edge {}", e.key)))?,
                    None => 1.0,
                };
                edges.push((s, t, w, entry.line));
            }
            _ => {}
        }
    }

    let labels: Vec<&str> = nodes.iter().filter_map(|n| n.label.as_deref()).collect();
    let use_labels = labels.len() == nodes.len() && labels.iter().all(|l| valid_name(l)) && {
        let mut sorted = labels.clone();
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0] != w[1])
    };
    let names: Vec<String> = nodes
        .iter()
        .map(|n| match (&n.label, use_labels) {
            (Some(l), true) => l.clone(),
            _ => n.id.to_string(),
        })
        .collect();

    let mut builder = GraphBuilder::new();
    for name in &names {
        builder.add_node(name)?;
    }
    for &(s, t, w, line) in &edges {
        let lookup = |id: i64| {
            by_id
                .get(&id)
                .map(|&i| names[i].as_str())
                .ok_or_else(|| Error::parse(origin, line, format!("edge references unknown node id {id}")))
        };
        let record = EdgeRecord::new(lookup(s)?, lookup(t)?, w);
        builder
            .add_record(&record)
            .map_err(|e| Error::parse(origin, line, e.to_string()))?;
    }
    let g = builder.build();

    let mut truth = None;
    if nodes.iter().any(|n| n.value.is_some()) {
        let mut gt = GroundTruth::new();
        for (n, name) in nodes.iter().zip(&names) {
            if let Some(v) = &n.value {
                gt.insert(name, v)?;
            }
        }
        truth = Some(gt);
    }
    Ok((g, truth))
}

pub fn load_gml(path: impl AsRef<Path>) -> Result<(Graph, Option<GroundTruth>)> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_gml(&text, path)
}
