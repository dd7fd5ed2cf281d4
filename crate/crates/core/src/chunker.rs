//! Function-aligned chunking of C/C++ source trees.
//!
//! Files are parsed with tree-sitter; every function or method definition
//! becomes one chunk spanning its full definition. Files the grammar rejects
//! go through a brace-balance scanner instead. Runs of more than
//! `top_level_min_lines` lines outside any function become `top_level` chunks.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use tree_sitter::{Language, Node, Parser};
use walkdir::WalkDir;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChunkKind {
    Function,
    Method,
    TopLevel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chunk {
    pub index: usize,
    pub file_path: String,
    pub chunk_kind: ChunkKind,
    pub symbol: String,
    pub start_line: u32,
    pub end_line: u32,
    pub source: String,
    pub ast_type: String,
    pub imports: Vec<String>,
    #[serde(default)]
    pub diff: bool,
    #[serde(default)]
    pub diff_hit_lines: Vec<u32>,
}

impl Chunk {
    pub fn contains(&self, line: u32) -> bool {
        self.start_line <= line && line <= self.end_line
    }

    pub fn is_function(&self) -> bool {
        self.chunk_kind != ChunkKind::TopLevel
    }

    /// Matches `Foo::bar` against either `Foo::bar` or `bar`.
    pub fn symbol_matches(&self, symbol: &str) -> bool {
        if !self.is_function() {
            return false;
        }
        let symbol = symbol.trim().trim_end_matches("()");
        self.symbol == symbol
            || self.symbol.rsplit("::").next() == Some(symbol)
            || symbol.rsplit("::").next() == Some(self.symbol.as_str())
    }
}

/// Chunks ordered by `(file_path, start_line)` with dense indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChunkSet(Vec<Chunk>);

impl ChunkSet {
    /// Sorts and re-indexes.
    pub fn from_chunks(mut chunks: Vec<Chunk>) -> Self {
        chunks.sort_by(|a, b| {
            (a.file_path.as_str(), a.start_line, a.end_line).cmp(&(
                b.file_path.as_str(),
                b.start_line,
                b.end_line,
            ))
        });
        for (i, c) in chunks.iter_mut().enumerate() {
            c.index = i;
        }
        ChunkSet(chunks)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Chunk> {
        self.0.iter()
    }

    pub(crate) fn iter_mut(&mut self) -> std::slice::IterMut<'_, Chunk> {
        self.0.iter_mut()
    }

    pub fn as_slice(&self) -> &[Chunk] {
        &self.0
    }

    pub fn get(&self, index: usize) -> Option<&Chunk> {
        self.0.get(index)
    }

    pub fn files(&self) -> BTreeSet<&str> {
        self.0.iter().map(|c| c.file_path.as_str()).collect()
    }

    pub fn diff_chunks(&self) -> impl Iterator<Item = &Chunk> {
        self.0.iter().filter(|c| c.diff)
    }

    fn file_range(&self, file: &str) -> &[Chunk] {
        let lo = self.0.partition_point(|c| c.file_path.as_str() < file);
        let hi = self.0.partition_point(|c| c.file_path.as_str() <= file);
        &self.0[lo..hi]
    }

    pub fn in_file(&self, file: &str) -> &[Chunk] {
        self.file_range(file)
    }

    /// The chunk containing `(file, line)`: a function/method chunk when one
    /// contains the line, else a containing top-level chunk.
    pub fn lookup(&self, file: &str, line: u32) -> Option<&Chunk> {
        let chunks = self.file_range(file);
        // chunks within a file never overlap, so the last one starting at or
        // before `line` is the only candidate
        let pos = chunks.partition_point(|c| c.start_line <= line);
        let candidate = chunks[..pos].last()?;
        candidate.contains(line).then_some(candidate)
    }
}

impl<'a> IntoIterator for &'a ChunkSet {
    type Item = &'a Chunk;
    type IntoIter = std::slice::Iter<'a, Chunk>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

pub fn chunk_lookup<'a>(chunks: &'a ChunkSet, file: &str, line: u32) -> Option<&'a Chunk> {
    chunks.lookup(file, line)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChunkerConfig {
    pub extensions: BTreeSet<String>,
    /// Directory names skipped anywhere in the tree.
    pub deny_dirs: Vec<String>,
    /// Uncovered runs longer than this many lines become top-level chunks.
    pub top_level_min_lines: u32,
}

impl Default for ChunkerConfig {
    fn default() -> Self {
        Self {
            extensions: [".c", ".cc", ".cpp", ".cxx", ".h", ".hpp"]
                .into_iter()
                .map(String::from)
                .collect(),
            deny_dirs: vec!["third_party".into(), "build".into(), ".git".into()],
            top_level_min_lines: 30,
        }
    }
}

/// Chunks every matching file under `root` with the default configuration.
pub fn chunk_source_tree(root: &Path) -> Result<ChunkSet> {
    chunk_source_tree_with(root, &ChunkerConfig::default())
}

pub fn chunk_source_tree_with(root: &Path, config: &ChunkerConfig) -> Result<ChunkSet> {
    let meta = std::fs::metadata(root).map_err(|e| Error::io(root, e))?;
    if !meta.is_dir() {
        return Err(Error::io(
            root,
            std::io::Error::new(std::io::ErrorKind::NotADirectory, "not a directory"),
        ));
    }
    let files = source_files(root, config)?;
    let per_file: Vec<Result<Vec<Chunk>>> = files
        .par_iter()
        .map(|(abs, rel)| {
            let bytes = std::fs::read(abs).map_err(|e| Error::io(abs, e))?;
            let text = normalize_newlines(&String::from_utf8_lossy(&bytes));
            Ok(chunk_file(rel, &text, config))
        })
        .collect();
    let mut chunks = Vec::new();
    for r in per_file {
        chunks.extend(r?);
    }
    Ok(ChunkSet::from_chunks(chunks))
}

fn source_files(root: &Path, config: &ChunkerConfig) -> Result<Vec<(PathBuf, String)>> {
    let mut out = Vec::new();
    let walker = WalkDir::new(root)
        .sort_by_file_name()
        .into_iter()
        .filter_entry(|e| {
            e.depth() == 0
                || !(e.file_type().is_dir()
                    && config
                        .deny_dirs
                        .iter()
                        .any(|d| e.file_name().to_str() == Some(d.as_str())))
        });
    for entry in walker {
        let entry = entry.map_err(|e| {
            let path = e.path().map(Path::to_path_buf).unwrap_or_default();
            Error::io(path, e.into())
        })?;
        if !entry.file_type().is_file() {
            continue;
        }
        let name = entry.file_name().to_string_lossy();
        let Some(dot) = name.rfind('.') else { continue };
        if !config.extensions.contains(&name[dot..].to_ascii_lowercase()) {
            continue;
        }
        let rel = entry
            .path()
            .strip_prefix(root)
            .unwrap_or(entry.path())
            .components()
            .map(|c| c.as_os_str().to_string_lossy())
            .collect::<Vec<_>>()
            .join("/");
        out.push((entry.path().to_path_buf(), rel));
    }
    Ok(out)
}

/// Converts CRLF and lone CR terminators to LF.
pub fn normalize_newlines(text: &str) -> String {
    if !text.contains('\r') {
        return text.to_string();
    }
    text.replace("\r\n", "\n").replace('\r', "\n")
}

/// Byte offsets of each line start plus a final sentinel at `text.len()`.
fn line_starts(text: &str) -> Vec<usize> {
    let mut starts = vec![0];
    starts.extend(text.match_indices('\n').map(|(i, _)| i + 1));
    if *starts.last().unwrap() == text.len() && starts.len() > 1 {
        // trailing newline: no extra empty line
    } else {
        starts.push(text.len());
    }
    starts
}

#[derive(Debug, Clone)]
struct FnSpan {
    start: u32,
    end: u32,
    symbol: String,
    kind: ChunkKind,
    ast_type: String,
}

#[derive(Clone, Copy)]
enum Grammar {
    C,
    Cpp,
}

impl Grammar {
    fn language(self) -> Language {
        match self {
            Grammar::C => tree_sitter_c::LANGUAGE.into(),
            Grammar::Cpp => tree_sitter_cpp::LANGUAGE.into(),
        }
    }
}

fn grammars_for(path: &str) -> &'static [Grammar] {
    let ext = path.rsplit('.').next().unwrap_or("").to_ascii_lowercase();
    match ext.as_str() {
        "c" => &[Grammar::C],
        "h" => &[Grammar::C, Grammar::Cpp],
        _ => &[Grammar::Cpp],
    }
}

/// Chunks one file's (newline-normalized) text.
pub fn chunk_file(rel_path: &str, text: &str, config: &ChunkerConfig) -> Vec<Chunk> {
    let starts = line_starts(text);
    let line_count = (starts.len() - 1) as u32;
    if line_count == 0 {
        return Vec::new();
    }
    let spans = grammars_for(rel_path)
        .iter()
        .find_map(|g| grammar_spans(text, *g))
        .unwrap_or_else(|| fallback_spans(text));
    let spans = merge_same_line(spans);
    let imports = include_directives(text);

    let slice = |s: u32, e: u32| text[starts[s as usize - 1]..starts[e as usize]].to_string();
    let mut chunks: Vec<Chunk> = spans
        .iter()
        .map(|f| Chunk {
            index: 0,
            file_path: rel_path.to_string(),
            chunk_kind: f.kind,
            symbol: f.symbol.clone(),
            start_line: f.start,
            end_line: f.end,
            source: slice(f.start, f.end),
            ast_type: f.ast_type.clone(),
            imports: imports.clone(),
            diff: false,
            diff_hit_lines: Vec::new(),
        })
        .collect();

    let mut next = 1u32;
    let mut gaps = Vec::new();
    for f in &spans {
        if f.start > next {
            gaps.push((next, f.start - 1));
        }
        next = next.max(f.end + 1);
    }
    if next <= line_count {
        gaps.push((next, line_count));
    }
    for (s, e) in gaps {
        if e - s + 1 > config.top_level_min_lines {
            chunks.push(Chunk {
                index: 0,
                file_path: rel_path.to_string(),
                chunk_kind: ChunkKind::TopLevel,
                symbol: format!("{rel_path}:{s}-{e}"),
                start_line: s,
                end_line: e,
                source: slice(s, e),
                ast_type: "translation_unit".into(),
                imports: imports.clone(),
                diff: false,
                diff_hit_lines: Vec::new(),
            });
        }
    }
    chunks.sort_by_key(|c| c.start_line);
    chunks
}

/// Two definitions sharing a line would overlap; fold the later one into the
/// earlier chunk.
fn merge_same_line(mut spans: Vec<FnSpan>) -> Vec<FnSpan> {
    spans.sort_by_key(|s| (s.start, s.end));
    let mut out: Vec<FnSpan> = Vec::with_capacity(spans.len());
    for s in spans {
        match out.last_mut() {
            Some(prev) if s.start <= prev.end => prev.end = prev.end.max(s.end),
            _ => out.push(s),
        }
    }
    out
}

fn include_directives(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| {
            l.strip_prefix('#')
                .is_some_and(|rest| rest.trim_start().starts_with("include"))
        })
        .map(String::from)
        .collect()
}

fn grammar_spans(text: &str, grammar: Grammar) -> Option<Vec<FnSpan>> {
    let mut parser = Parser::new();
    parser.set_language(&grammar.language()).ok()?;
    let tree = parser.parse(text, None)?;
    let root = tree.root_node();
    if root.has_error() {
        return None;
    }
    let mut out = Vec::new();
    collect_definitions(root, text.as_bytes(), false, &mut out);
    Some(out)
}

fn collect_definitions(node: Node<'_>, src: &[u8], in_class: bool, out: &mut Vec<FnSpan>) {
    match node.kind() {
        "function_definition" => out.push(definition_span(node, node, src, in_class)),
        "template_declaration" => {
            let mut cursor = node.walk();
            let inner = node
                .named_children(&mut cursor)
                .find(|c| c.kind() == "function_definition");
            match inner {
                Some(def) => out.push(definition_span(node, def, src, in_class)),
                None => recurse(node, src, in_class, out),
            }
        }
        "class_specifier" | "struct_specifier" | "union_specifier" => recurse(node, src, true, out),
        "compound_statement" => {}
        _ => recurse(node, src, in_class, out),
    }
}

fn recurse(node: Node<'_>, src: &[u8], in_class: bool, out: &mut Vec<FnSpan>) {
    let mut cursor = node.walk();
    for child in node.named_children(&mut cursor) {
        collect_definitions(child, src, in_class, out);
    }
}

fn definition_span(outer: Node<'_>, def: Node<'_>, src: &[u8], in_class: bool) -> FnSpan {
    let symbol = def
        .child_by_field_name("declarator")
        .and_then(|d| declarator_name(d, src))
        .unwrap_or_else(|| "<anonymous>".to_string());
    let kind = if in_class || symbol.contains("::") {
        ChunkKind::Method
    } else {
        ChunkKind::Function
    };
    FnSpan {
        start: outer.start_position().row as u32 + 1,
        end: outer.end_position().row as u32 + 1,
        symbol,
        kind,
        ast_type: outer.kind().to_string(),
    }
}

fn declarator_name(mut node: Node<'_>, src: &[u8]) -> Option<String> {
    loop {
        match node.kind() {
            "identifier" | "field_identifier" | "qualified_identifier" | "destructor_name"
            | "operator_name" | "template_function" | "operator_cast" => {
                return node.utf8_text(src).ok().map(|s| s.split_whitespace().collect());
            }
            _ => {
                node = match node.child_by_field_name("declarator") {
                    Some(d) => d,
                    None => {
                        let mut cursor = node.walk();
                        let child = node.named_children(&mut cursor).next()?;
                        child
                    }
                };
            }
        }
    }
}

const NOT_FUNCTIONS: &[&str] = &[
    "if", "while", "for", "switch", "return", "sizeof", "do", "else", "case", "catch",
    "__attribute__", "alignas", "decltype",
];

/// Brace-balance chunker for files the grammar rejects.
///
/// A definition starts at the first significant line after the previous
/// top-level `;`/`}`, when the text up to an opening `{` at depth 0 ends in
/// `name(...)` (optionally followed by qualifiers), and ends at the matching
/// close brace. `extern "C" {` and `namespace x {` blocks are transparent.
fn fallback_spans(text: &str) -> Vec<FnSpan> {
    #[derive(PartialEq)]
    enum Brace {
        Transparent,
        Function,
        Other,
    }

    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut stack: Vec<Brace> = Vec::new();
    let mut line: u32 = 1;
    let mut header = String::new();
    let mut header_line: Option<u32> = None;
    let mut open_fn: Option<(u32, String)> = None;
    let mut at_line_start = true;
    let mut i = 0;

    let depth = |stack: &Vec<Brace>| stack.iter().filter(|b| **b != Brace::Transparent).count();

    while i < bytes.len() {
        let c = bytes[i];
        if c == b'\n' {
            line += 1;
            at_line_start = true;
            header.push(' ');
            i += 1;
            continue;
        }
        if at_line_start && c == b'#' {
            // preprocessor directive, honouring backslash continuations
            while i < bytes.len() && bytes[i] != b'\n' {
                if bytes[i] == b'\\' && bytes.get(i + 1) == Some(&b'\n') {
                    line += 1;
                    i += 1;
                }
                i += 1;
            }
            continue;
        }
        if !c.is_ascii_whitespace() {
            at_line_start = false;
        }
        if c == b'/' && bytes.get(i + 1) == Some(&b'/') {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        if c == b'/' && bytes.get(i + 1) == Some(&b'*') {
            i += 2;
            while i < bytes.len() && !(bytes[i] == b'*' && bytes.get(i + 1) == Some(&b'/')) {
                if bytes[i] == b'\n' {
                    line += 1;
                }
                i += 1;
            }
            i += 2;
            header.push(' ');
            continue;
        }
        if c == b'"' || c == b'\'' {
            i += 1;
            while i < bytes.len() && bytes[i] != c {
                if bytes[i] == b'\\' {
                    i += 1;
                }
                if bytes.get(i) == Some(&b'\n') {
                    line += 1;
                }
                i += 1;
            }
            i += 1;
            header.push_str("\"\"");
            continue;
        }

        let top = depth(&stack) == 0;
        match c {
            b'{' => {
                if top {
                    let kind = if let Some(name) = function_header_name(&header) {
                        open_fn = Some((header_line.unwrap_or(line), name));
                        Brace::Function
                    } else if is_transparent_block(&header) {
                        Brace::Transparent
                    } else {
                        Brace::Other
                    };
                    stack.push(kind);
                    header.clear();
                    header_line = None;
                } else {
                    stack.push(Brace::Other);
                }
            }
            b'}' => {
                let closed = stack.pop();
                if closed == Some(Brace::Function) {
                    if let Some((start, symbol)) = open_fn.take() {
                        out.push(FnSpan {
                            start,
                            end: line,
                            kind: if symbol.contains("::") {
                                ChunkKind::Method
                            } else {
                                ChunkKind::Function
                            },
                            symbol,
                            ast_type: "function_definition".into(),
                        });
                    }
                }
                if depth(&stack) == 0 {
                    header.clear();
                    header_line = None;
                }
            }
            b';' if top => {
                header.clear();
                header_line = None;
            }
            _ if top => {
                if !c.is_ascii_whitespace() && header_line.is_none() {
                    header_line = Some(line);
                }
                header.push(c as char);
            }
            _ => {}
        }
        i += 1;
    }
    out
}

fn is_transparent_block(header: &str) -> bool {
    let h = header.trim();
    h.starts_with("extern \"\"") || h.starts_with("namespace") && !h.contains('(')
}

/// Name of the function whose signature `header` ends with, if any.
fn function_header_name(header: &str) -> Option<String> {
    let h = header.trim_end();
    // strip trailing qualifiers such as `const`, `noexcept`, `override`
    let mut end = h.len();
    loop {
        let t = h[..end].trim_end();
        let word_start = t
            .rfind(|c: char| !(c.is_alphanumeric() || c == '_'))
            .map_or(0, |p| p + 1);
        let word = &t[word_start..];
        if matches!(word, "const" | "noexcept" | "override" | "final" | "volatile") {
            end = word_start;
        } else {
            end = t.len();
            break;
        }
    }
    let h = &h[..end];
    if !h.ends_with(')') {
        return None;
    }
    let bytes = h.as_bytes();
    let mut depth = 0i32;
    let mut open = None;
    for (pos, &b) in bytes.iter().enumerate().rev() {
        match b {
            b')' => depth += 1,
            b'(' => {
                depth -= 1;
                if depth == 0 {
                    open = Some(pos);
                    break;
                }
            }
            _ => {}
        }
    }
    let before = h[..open?].trim_end();
    if before.ends_with('=') || before.contains('=') && !before.contains("operator") {
        return None;
    }
    let name_start = before
        .rfind(|c: char| !(c.is_alphanumeric() || c == '_' || c == ':' || c == '~'))
        .map_or(0, |p| p + 1);
    let name = &before[name_start..];
    let first = name.chars().next()?;
    if !(first.is_alphabetic() || first == '_' || first == '~') || NOT_FUNCTIONS.contains(&name) {
        return None;
    }
    Some(name.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumberedSnapshot {
    pub file_path: String,
    pub lines: Vec<(u32, String)>,
}

impl NumberedSnapshot {
    pub fn from_text(file_path: &str, text: &str) -> Self {
        let text = normalize_newlines(text);
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i as u32 + 1, l.to_string()))
            .collect();
        NumberedSnapshot {
            file_path: file_path.to_string(),
            lines,
        }
    }

    pub fn line_count(&self) -> u32 {
        self.lines.len() as u32
    }

    pub fn line(&self, n: u32) -> Option<&str> {
        n.checked_sub(1)
            .and_then(|i| self.lines.get(i as usize))
            .map(|(_, t)| t.as_str())
    }

    /// Lines `start..=end`, clipped to the file.
    pub fn slice(&self, start: u32, end: u32) -> SourceSlice {
        let start = start.max(1);
        let end = end.min(self.line_count());
        let lines = if start > end {
            Vec::new()
        } else {
            self.lines[(start - 1) as usize..end as usize].to_vec()
        };
        SourceSlice {
            file_path: self.file_path.clone(),
            lines,
        }
    }
}

/// A contiguous excerpt of a numbered snapshot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceSlice {
    pub file_path: String,
    pub lines: Vec<(u32, String)>,
}

impl SourceSlice {
    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn span(&self) -> Option<(u32, u32)> {
        Some((self.lines.first()?.0, self.lines.last()?.0))
    }

    /// `  42 | text` rendering used in prompts.
    pub fn render(&self) -> String {
        let width = self
            .lines
            .last()
            .map_or(1, |(n, _)| n.to_string().len());
        let mut out = String::new();
        for (n, text) in &self.lines {
            out.push_str(&format!("{n:>width$} | {text}\n"));
        }
        out
    }
}

/// Reads `root/file` as a numbered snapshot.
pub fn numbered_snapshot(root: &Path, file: &str) -> Result<NumberedSnapshot> {
    let path = root.join(file);
    let bytes = std::fs::read(&path).map_err(|e| Error::io(&path, e))?;
    Ok(NumberedSnapshot::from_text(
        file,
        &String::from_utf8_lossy(&bytes),
    ))
}
