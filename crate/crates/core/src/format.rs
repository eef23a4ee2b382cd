//! Plain-text game format.
//!
//! ```text
//! paritygame <max-vertex-id> <index-lo> <index-hi> <initial-vertex-id>;
//! <id> <E|A>: <dst>@<priority>,<dst>@<priority>;
//! ```
//!
//! `#` starts a comment that runs to the end of the line.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::game::{Edge, ParityGame, VertexId};
use crate::index::{Player, Priority, PriorityIndex};

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.trim()
        .parse()
        .map_err(|_| syntax(line, format!("expected {what}, found `{}`", tok.trim())))
}

/// Parses a game file. Edge order is preserved from the file.
pub fn parse_game(text: &str) -> Result<ParityGame> {
    let mut header: Option<(usize, PriorityIndex, VertexId)> = None;
    let mut owners: Vec<Option<Player>> = Vec::new();
    let mut edges: Vec<Edge> = Vec::new();

    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let stmt = content
            .strip_suffix(';')
            .ok_or_else(|| syntax(line, "statement must end with `;`"))?
            .trim();

        let Some((max_id, index, _)) = header else {
            let toks: Vec<&str> = stmt.split_whitespace().collect();
            if toks.len() != 5 || toks[0] != "paritygame" {
                return Err(syntax(
                    line,
                    "expected `paritygame <max-vertex-id> <index-lo> <index-hi> <initial>;`",
                ));
            }
            let max_id: usize = parse_num(toks[1], line, "max vertex id")?;
            let lo: Priority = parse_num(toks[2], line, "index low")?;
            let hi: Priority = parse_num(toks[3], line, "index high")?;
            let initial: VertexId = parse_num(toks[4], line, "initial vertex")?;
            let index = PriorityIndex::new(lo, hi).map_err(|e| syntax(line, e.to_string()))?;
            if initial > max_id {
                return Err(Error::DanglingVertex(initial));
            }
            owners = vec![None; max_id + 1];
            header = Some((max_id, index, initial));
            continue;
        };

        let (head, succs) = stmt
            .split_once(':')
            .ok_or_else(|| syntax(line, "expected `<id> <owner>: <successors>`"))?;
        let mut head_toks = head.split_whitespace();
        let (Some(id_tok), Some(owner_tok), None) =
            (head_toks.next(), head_toks.next(), head_toks.next())
        else {
            return Err(syntax(line, "expected `<id> <owner>` before `:`"));
        };
        let id: VertexId = parse_num(id_tok, line, "vertex id")?;
        if id > max_id {
            return Err(Error::DanglingVertex(id));
        }
        let owner = match owner_tok {
            "E" => Player::Eve,
            "A" => Player::Adam,
            other => return Err(syntax(line, format!("owner must be `E` or `A`, found `{other}`"))),
        };
        if owners[id].is_some() {
            return Err(syntax(line, format!("vertex {id} declared twice")));
        }
        owners[id] = Some(owner);

        let succs = succs.trim();
        if succs.is_empty() {
            continue;
        }
        for item in succs.split(',') {
            let (dst, prio) = item
                .split_once('@')
                .ok_or_else(|| syntax(line, format!("expected `<dst>@<priority>`, found `{}`", item.trim())))?;
            let dst: VertexId = parse_num(dst, line, "successor id")?;
            let priority: Priority = parse_num(prio, line, "priority")?;
            if dst > max_id {
                return Err(Error::DanglingVertex(dst));
            }
            if !index.contains(priority) {
                return Err(Error::PriorityOutOfIndex {
                    src: id,
                    dst,
                    priority,
                    index: index.to_string(),
                });
            }
            edges.push(Edge {
                src: id,
                dst,
                priority,
            });
        }
    }

    let (_, index, initial) = header.ok_or_else(|| syntax(1, "missing `paritygame` header"))?;
    let mut resolved = Vec::with_capacity(owners.len());
    for (v, o) in owners.into_iter().enumerate() {
        resolved.push(o.ok_or(Error::DeadEnd(v))?);
    }
    ParityGame::new(resolved, edges, index, initial)
}

/// Serializes a game; vertices ascending, edges in each vertex's outgoing order.
pub fn write_game(game: &ParityGame) -> String {
    let mut s = String::new();
    let index = game.index();
    writeln!(
        s,
        "paritygame {} {} {} {};",
        game.vertex_count().saturating_sub(1),
        index.lo(),
        index.hi(),
        game.initial()
    )
    .unwrap();
    for v in 0..game.vertex_count() {
        let owner = match game.owner(v) {
            Player::Eve => 'E',
            Player::Adam => 'A',
        };
        let succ: Vec<String> = game
            .out(v)
            .iter()
            .map(|&e| {
                let edge = game.edge(e);
                format!("{}@{}", edge.dst, edge.priority)
            })
            .collect();
        writeln!(s, "{v} {owner}: {};", succ.join(",")).unwrap();
    }
    s
}

/// Sidecar map for expanded games: one `<vertex-id> -> <label>` line per vertex.
pub fn write_sidecar<L: std::fmt::Display>(labels: impl IntoIterator<Item = L>) -> String {
    let mut s = String::new();
    for (v, l) in labels.into_iter().enumerate() {
        writeln!(s, "{v} -> {l}").unwrap();
    }
    s
}
