//! Text syntax for tables `[α -> β, …]` and cylinder sets `{μ, …}`.

use crate::error::{Error, Result};
use crate::graph::KGraph;
use crate::path::Path;
use crate::table::{Pair, PisTable, UTable};

fn strip<'a>(text: &'a str, open: char, close: char, what: &str) -> Result<&'a str> {
    let t = text.trim();
    t.strip_prefix(open)
        .and_then(|x| x.strip_suffix(close))
        .ok_or_else(|| Error::parse(0, format!("{what} must be written {open}…{close}: `{t}`")))
}

fn items(inner: &str) -> impl Iterator<Item = &str> {
    inner.split(',').map(str::trim).filter(|s| !s.is_empty())
}

/// Parses `[a -> b, c -> d]` into pairs (left = range word, right = source word).
pub fn parse_pairs(graph: &KGraph, text: &str) -> Result<Vec<Pair>> {
    items(strip(text, '[', ']', "a table")?)
        .map(|item| {
            let (a, b) = item
                .split_once("->")
                .ok_or_else(|| Error::parse(0, format!("table entry `{item}` needs `->`")))?;
            Ok((graph.parse_path(a)?, graph.parse_path(b)?))
        })
        .collect()
}

pub fn format_pairs(graph: &KGraph, pairs: &[Pair]) -> String {
    let body: Vec<String> = pairs
        .iter()
        .map(|(a, b)| format!("{} -> {}", graph.format_path(a), graph.format_path(b)))
        .collect();
    format!("[{}]", body.join(", "))
}

/// Parses `{p, q}`.
pub fn parse_paths(graph: &KGraph, text: &str) -> Result<Vec<Path>> {
    items(strip(text, '{', '}', "a cylinder set")?)
        .map(|p| graph.parse_path(p))
        .collect()
}

pub fn format_paths(graph: &KGraph, paths: &[Path]) -> String {
    let body: Vec<String> = paths.iter().map(|p| graph.format_path(p)).collect();
    format!("{{{}}}", body.join(", "))
}

impl PisTable {
    pub fn to_literal(&self) -> String {
        format_pairs(self.graph(), self.pairs())
    }
}

impl UTable {
    pub fn to_literal(&self) -> String {
        format_pairs(self.graph(), self.pairs())
    }
}

impl crate::cylinder::CylinderSet {
    pub fn to_literal(&self) -> String {
        format_paths(self.graph(), self.paths())
    }
}
