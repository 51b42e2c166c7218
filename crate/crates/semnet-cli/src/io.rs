//! File plumbing shared by the commands: gzip-sniffing dump reader, graph
//! and part-of-speech table persistence, and deterministic JSON/TSV writing.

use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use flate2::read::GzDecoder;
use serde::Serialize;

use semnet::graph::Graph;
use semnet::ingest::{PosTable, PosTag, Relation};

use crate::CliError;

/// Opens a dump, transparently decoding gzip detected by magic bytes rather
/// than file extension.
pub fn open_dump(path: &Path) -> io::Result<Box<dyn BufRead + Send>> {
    let mut reader = BufReader::new(File::open(path)?);
    let magic = reader.fill_buf()?;
    if magic.starts_with(&[0x1f, 0x8b]) {
        Ok(Box::new(BufReader::new(GzDecoder::new(reader))))
    } else {
        Ok(Box::new(reader))
    }
}

fn ensure_parent(path: &Path) -> io::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    Ok(())
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    ensure_parent(path).map_err(|e| write_err(path, e))?;
    fs::write(path, text).map_err(|e| write_err(path, e))
}

/// Pretty JSON with a trailing newline; field order comes from the struct,
/// so reruns are byte-identical.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("output serializes");
    text.push('\n');
    write_text(path, &text)
}

fn write_err(path: &Path, e: io::Error) -> CliError {
    CliError::Usage(format!("cannot write {}: {e}", path.display()))
}

pub fn graph_path(out: &Path, language: &str, relation: Relation) -> PathBuf {
    out.join(language).join(format!("{relation}.tsv"))
}

pub fn pos_path(out: &Path, language: &str) -> PathBuf {
    out.join(language).join("pos.tsv")
}

pub fn write_graph(path: &Path, g: &Graph) -> Result<(), CliError> {
    ensure_parent(path).map_err(|e| write_err(path, e))?;
    let file = File::create(path).map_err(|e| write_err(path, e))?;
    let mut w = BufWriter::new(file);
    g.write_edge_list(&mut w).map_err(|e| write_err(path, e))?;
    w.flush().map_err(|e| write_err(path, e))
}

pub fn load_graph(path: &Path) -> Result<Graph, String> {
    let file = File::open(path).map_err(|e| format!("cannot open {}: {e}", path.display()))?;
    Graph::read_edge_list(BufReader::new(file))
        .map_err(|e| format!("bad edge list {}: {e}", path.display()))
}

/// `label<TAB>tag-name` lines, sorted by label.
pub fn write_pos_table(path: &Path, table: &PosTable) -> Result<(), CliError> {
    let mut text = String::new();
    for (label, tag) in table.sorted_entries() {
        text.push_str(label);
        text.push('\t');
        text.push_str(tag.name());
        text.push('\n');
    }
    write_text(path, &text)
}

pub fn load_pos_table(path: &Path) -> Result<PosTable, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut entries = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let mut it = line.split('\t');
        match (it.next(), it.next(), it.next()) {
            (Some(label), Some(name), None) => match PosTag::from_name(name) {
                Some(tag) => entries.push((label.to_owned(), tag)),
                None => {
                    return Err(format!("{} line {}: unknown tag `{name}`", path.display(), idx + 1))
                }
            },
            _ => return Err(format!("{} line {}: expected label<TAB>tag", path.display(), idx + 1)),
        }
    }
    Ok(PosTable::from_entries(entries))
}
