//! Binary edge lists and repeatable streaming passes.
//!
//! A graph on disk is a packed sequence of `(first, second)` pairs of
//! little-endian `u32` vertex ids, 8 bytes per edge, no header. An
//! [`EdgeStream`] can be replayed any number of times; every pass delivers
//! the same edge sequence in file order. Vertex ids are used directly as
//! dense array indices, so a stream also knows (or learns) its largest id.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::partitioning::PartitionAssignment;

pub type VertexId = u32;
pub type Degree = u64;

pub const EDGE_RECORD_BYTES: u64 = 8;
pub const ASSIGNMENT_RECORD_BYTES: u64 = 12;

/// One directed edge record as stored in the file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub first: VertexId,
    pub second: VertexId,
}

impl Edge {
    pub fn new(first: VertexId, second: VertexId) -> Self {
        Edge { first, second }
    }

    fn from_le_bytes(buf: &[u8; 8]) -> Self {
        Edge {
            first: u32::from_le_bytes([buf[0], buf[1], buf[2], buf[3]]),
            second: u32::from_le_bytes([buf[4], buf[5], buf[6], buf[7]]),
        }
    }

    fn to_le_bytes(self) -> [u8; 8] {
        let mut buf = [0u8; 8];
        buf[..4].copy_from_slice(&self.first.to_le_bytes());
        buf[4..].copy_from_slice(&self.second.to_le_bytes());
        buf
    }
}

impl From<(VertexId, VertexId)> for Edge {
    fn from((first, second): (VertexId, VertexId)) -> Self {
        Edge { first, second }
    }
}

#[derive(Debug)]
enum Source {
    File(PathBuf),
    Memory(Vec<Edge>),
}

/// Re-openable sequential source of edges supporting multiple full passes.
#[derive(Debug)]
pub struct EdgeStream {
    source: Source,
    edge_count: u64,
    /// Largest vertex id declared up front or observed during a pass.
    max_vertex_id: Option<VertexId>,
    /// Set when the caller declared the maximum; ids above it are rejected
    /// by [`compute_degrees`].
    declared_max: Option<VertexId>,
}

impl EdgeStream {
    /// Opens a binary edge-list file. The byte length must be a whole
    /// number of 8-byte records.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let meta = std::fs::metadata(path).map_err(|e| Error::io(path, e))?;
        let len = meta.len();
        if len % EDGE_RECORD_BYTES != 0 {
            return Err(Error::TruncatedRecord {
                path: path.to_path_buf(),
                offset: len - len % EDGE_RECORD_BYTES,
                len,
            });
        }
        Ok(EdgeStream {
            source: Source::File(path.to_path_buf()),
            edge_count: len / EDGE_RECORD_BYTES,
            max_vertex_id: None,
            declared_max: None,
        })
    }

    /// In-memory stream, mainly for tests and small pipelines.
    pub fn from_edges(edges: Vec<Edge>) -> Self {
        let edge_count = edges.len() as u64;
        EdgeStream {
            source: Source::Memory(edges),
            edge_count,
            max_vertex_id: None,
            declared_max: None,
        }
    }

    /// Declares the largest admissible vertex id; [`compute_degrees`] fails
    /// on any id above it instead of growing the table.
    pub fn with_declared_max(mut self, max: VertexId) -> Self {
        self.declared_max = Some(max);
        self.max_vertex_id = Some(max);
        self
    }

    pub fn edge_count(&self) -> u64 {
        self.edge_count
    }

    /// Largest id declared or observed so far; `None` until a pass has run
    /// on an undeclared stream (or the stream is empty).
    pub fn max_vertex_id(&self) -> Option<VertexId> {
        self.max_vertex_id
    }

    pub fn path(&self) -> Option<&Path> {
        match &self.source {
            Source::File(p) => Some(p),
            Source::Memory(_) => None,
        }
    }

    /// One full pass: the visitor sees every edge in file order. The stream
    /// is ready for another pass afterwards.
    pub fn for_each_edge(&mut self, mut visitor: impl FnMut(Edge)) -> Result<()> {
        self.try_for_each_edge(|e| {
            visitor(e);
            Ok(())
        })
    }

    /// Fallible variant of [`for_each_edge`](Self::for_each_edge); an `Err`
    /// from the visitor aborts the pass.
    pub fn try_for_each_edge(&mut self, mut visitor: impl FnMut(Edge) -> Result<()>) -> Result<()> {
        let mut observed = self.max_vertex_id;
        let result = match &self.source {
            Source::File(path) => {
                let file = File::open(path).map_err(|e| Error::io(path, e))?;
                let mut reader = BufReader::with_capacity(1 << 20, file);
                let mut buf = [0u8; 8];
                let mut visit = |i: u64| -> Result<()> {
                    reader.read_exact(&mut buf).map_err(|e| Error::IoAt {
                        path: path.clone(),
                        offset: i * EDGE_RECORD_BYTES,
                        source: e,
                    })?;
                    let e = Edge::from_le_bytes(&buf);
                    track_max(&mut observed, e);
                    visitor(e)
                };
                (0..self.edge_count).try_for_each(&mut visit)
            }
            Source::Memory(edges) => edges.iter().try_for_each(|&e| {
                track_max(&mut observed, e);
                visitor(e)
            }),
        };
        self.max_vertex_id = observed;
        result
    }
}

fn track_max(observed: &mut Option<VertexId>, e: Edge) {
    let hi = e.first.max(e.second);
    *observed = Some(observed.map_or(hi, |m| m.max(hi)));
}

/// Exact per-vertex endpoint counts, indexed by vertex id.
#[derive(Debug, Clone, Default)]
pub struct DegreeTable {
    d: Vec<Degree>,
}

impl DegreeTable {
    pub fn from_counts(d: Vec<Degree>) -> Self {
        DegreeTable { d }
    }

    /// Table length, i.e. `max_vertex_id + 1` (0 for an empty stream).
    pub fn vertex_slots(&self) -> usize {
        self.d.len()
    }

    /// Degree of `v`; 0 for ids beyond the table.
    pub fn degree(&self, v: VertexId) -> Degree {
        self.d.get(v as usize).copied().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[Degree] {
        &self.d
    }

    /// Sum of all degrees (2·|E| including self-loops).
    pub fn total(&self) -> u64 {
        self.d.iter().sum()
    }

    /// Number of vertices that appear in at least one edge. This is the |V|
    /// used for replication factors; unused ids in a sparse id space do not
    /// count.
    pub fn vertex_universe(&self) -> u64 {
        self.d.iter().filter(|&&d| d > 0).count() as u64
    }
}

/// One pass over the stream counting both endpoints of every edge.
/// A self-loop contributes 2 to its single endpoint.
pub fn compute_degrees(stream: &mut EdgeStream) -> Result<DegreeTable> {
    let declared = stream.declared_max;
    let mut d: Vec<Degree> = match declared {
        Some(max) => vec![0; max as usize + 1],
        None => Vec::new(),
    };
    stream.try_for_each_edge(|e| {
        for v in [e.first, e.second] {
            let idx = v as usize;
            if idx >= d.len() {
                match declared {
                    Some(max) => return Err(Error::VertexOutOfRange { id: v, max }),
                    None => d.resize(idx + 1, 0),
                }
            }
            d[idx] += 1;
        }
        Ok(())
    })?;
    Ok(DegreeTable { d })
}

/// Writes `(first, second, partition)` triples of little-endian `u32`s,
/// 12 bytes per edge, in stream order. The assignment must hold exactly one
/// partition id per streamed edge, each `< k`.
pub fn write_assignment(
    stream: &mut EdgeStream,
    assignment: &PartitionAssignment,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    assert_eq!(
        assignment.len() as u64,
        stream.edge_count(),
        "assignment must cover every streamed edge"
    );
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = BufWriter::with_capacity(1 << 20, file);
    let mut i = 0usize;
    stream.try_for_each_edge(|e| {
        let p = assignment.partition_of(i);
        if p >= assignment.k() {
            return Err(Error::PartitionOutOfRange {
                partition: p,
                k: assignment.k(),
            });
        }
        i += 1;
        write_triple(&mut writer, e, p).map_err(|err| Error::io(path, err))
    })?;
    writer.flush().map_err(|e| Error::io(path, e))
}

pub(crate) fn write_triple(w: &mut impl Write, e: Edge, p: u32) -> std::io::Result<()> {
    let mut buf = [0u8; 12];
    buf[..8].copy_from_slice(&e.to_le_bytes());
    buf[8..].copy_from_slice(&p.to_le_bytes());
    w.write_all(&buf)
}

/// Sequential reader for assignment triple files.
pub struct AssignmentReader {
    path: PathBuf,
    reader: BufReader<File>,
    record_count: u64,
    next: u64,
}

impl AssignmentReader {
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let meta = std::fs::metadata(path).map_err(|e| Error::io(path, e))?;
        let len = meta.len();
        if len % ASSIGNMENT_RECORD_BYTES != 0 {
            return Err(Error::TruncatedRecord {
                path: path.to_path_buf(),
                offset: len - len % ASSIGNMENT_RECORD_BYTES,
                len,
            });
        }
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Ok(AssignmentReader {
            path: path.to_path_buf(),
            reader: BufReader::with_capacity(1 << 20, file),
            record_count: len / ASSIGNMENT_RECORD_BYTES,
            next: 0,
        })
    }

    pub fn record_count(&self) -> u64 {
        self.record_count
    }
}

impl Iterator for AssignmentReader {
    type Item = Result<(Edge, u32)>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.record_count {
            return None;
        }
        let mut buf = [0u8; 12];
        let offset = self.next * ASSIGNMENT_RECORD_BYTES;
        self.next += 1;
        match self.reader.read_exact(&mut buf) {
            Ok(()) => {
                let edge = Edge::from_le_bytes(buf[..8].try_into().expect("8-byte prefix"));
                let p = u32::from_le_bytes([buf[8], buf[9], buf[10], buf[11]]);
                Some(Ok((edge, p)))
            }
            Err(e) => Some(Err(Error::IoAt {
                path: self.path.clone(),
                offset,
                source: e,
            })),
        }
    }
}

/// Writes a binary edge list; used by generators and the ascii converter.
pub fn write_edges(path: impl AsRef<Path>, edges: &[Edge]) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = BufWriter::with_capacity(1 << 20, file);
    for e in edges {
        writer
            .write_all(&e.to_le_bytes())
            .map_err(|err| Error::io(path, err))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

/// Converts an ascii edge list ("u v" per line; `#` or `%` comment lines and
/// blank lines are skipped) into the binary format. Returns the edge count.
pub fn import_ascii(input: impl AsRef<Path>, output: impl AsRef<Path>) -> Result<u64> {
    let in_path = input.as_ref();
    let out_path = output.as_ref();
    let file = File::open(in_path).map_err(|e| Error::io(in_path, e))?;
    let reader = BufReader::with_capacity(1 << 20, file);
    let out = File::create(out_path).map_err(|e| Error::io(out_path, e))?;
    let mut writer = BufWriter::with_capacity(1 << 20, out);

    let mut count = 0u64;
    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno as u64 + 1;
        let line = line.map_err(|e| Error::io(in_path, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let parse = |field: Option<&str>, lineno: u64| -> Result<VertexId> {
            let text = field.ok_or_else(|| Error::AsciiParse {
                path: in_path.to_path_buf(),
                line: lineno,
                reason: "expected two vertex ids".into(),
            })?;
            text.parse::<VertexId>().map_err(|_| Error::AsciiParse {
                path: in_path.to_path_buf(),
                line: lineno,
                reason: format!("not a 32-bit vertex id: {text:?}"),
            })
        };
        let first = parse(fields.next(), lineno)?;
        let second = parse(fields.next(), lineno)?;
        writer
            .write_all(&Edge::new(first, second).to_le_bytes())
            .map_err(|e| Error::io(out_path, e))?;
        count += 1;
    }
    writer.flush().map_err(|e| Error::io(out_path, e))?;
    Ok(count)
}
