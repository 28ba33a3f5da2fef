use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use clap::ValueEnum;
use streamscope::graph::{load_edge_list, EdgeLines};
use streamscope::stream::{derive_seed, shuffle_stream};
use streamscope::{Graph, GraphError, LoadOptions, TimedEdge};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StreamOrder {
    /// Load the edge list and replay it in a seeded uniform order.
    Shuffle,
    /// Stream the file as written, one line at a time.
    Given,
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// `--n` if given, otherwise the file's `n=` header.
pub fn resolve_n(path: &Path, flag: Option<usize>) -> Result<usize, CliError> {
    let n = match flag {
        Some(n) => n,
        None => EdgeLines::new(open(path)?, None, None).peek_header()?.ok_or_else(|| {
            CliError::Config(format!(
                "missing --n: {} has no `n=` header, so the vertex count must be given",
                path.display()
            ))
        })?,
    };
    if n == 0 {
        return Err(CliError::Config("--n must be at least 1".into()));
    }
    Ok(n)
}

pub fn load_graph(path: &Path, n: usize, max_weight: Option<u32>) -> Result<Graph, CliError> {
    Ok(load_edge_list(open(path)?, &LoadOptions { n: Some(n), max_weight })?)
}

/// Edges read straight from the file, timestamped in file order. The first
/// parse error ends the stream and is kept for the caller.
pub struct FileEdges<R> {
    lines: EdgeLines<R>,
    time: u64,
    error: Option<GraphError>,
}

impl<R: BufRead> FileEdges<R> {
    pub fn finish(self) -> Result<(), CliError> {
        match self.error {
            Some(e) => Err(e.into()),
            None => Ok(()),
        }
    }
}

impl<R: BufRead> Iterator for FileEdges<R> {
    type Item = TimedEdge;

    fn next(&mut self) -> Option<TimedEdge> {
        if self.error.is_some() {
            return None;
        }
        match self.lines.next()? {
            Ok((_, edge)) => {
                self.time += 1;
                Some(TimedEdge { edge, time: self.time })
            }
            Err(e) => {
                self.error = Some(e);
                None
            }
        }
    }
}

/// Runs `f` over the input stream in the requested order.
pub fn with_stream<T, E>(
    path: &Path,
    n: usize,
    max_weight: Option<u32>,
    order: StreamOrder,
    seed: u64,
    f: impl FnOnce(&mut dyn Iterator<Item = TimedEdge>) -> Result<T, E>,
) -> Result<T, CliError>
where
    CliError: From<E>,
{
    match order {
        StreamOrder::Shuffle => {
            let g = load_graph(path, n, max_weight)?;
            let stream = shuffle_stream(&g, derive_seed(seed, "stream"));
            let out = f(&mut stream.iter())?;
            Ok(out)
        }
        StreamOrder::Given => {
            let mut edges = FileEdges {
                lines: EdgeLines::new(open(path)?, Some(n), max_weight),
                time: 0,
                error: None,
            };
            let out = f(&mut edges);
            // A parse error truncates the stream, so it outranks the result.
            edges.finish()?;
            Ok(out?)
        }
    }
}
