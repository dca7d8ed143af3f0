//! Assignment sinks: where per-edge partition decisions go.
//!
//! The two-phase pipeline decides edges across two passes, so decisions
//! arrive as sorted-by-ordinal runs rather than one contiguous sequence.
//! [`VecSink`] collects them in memory; [`FileSink`] spills each run to a
//! temporary file and merges the runs into the final triple file on
//! `finish`, keeping memory independent of the edge count.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use crate::edge_stream::{write_triple, Edge};
use crate::error::{Error, Result};
use crate::partitioning::{PartitionAssignment, PartitionId};

pub trait AssignmentSink {
    /// Records that the edge at stream position `ordinal` goes to
    /// `partition`. Each ordinal is assigned exactly once.
    fn assign(&mut self, ordinal: u64, edge: Edge, partition: PartitionId) -> Result<()>;

    /// Called once after the last pass; materializes the output.
    fn finish(&mut self) -> Result<()> {
        Ok(())
    }
}

/// Collects the assignment in memory, for tests and small graphs.
pub struct VecSink {
    slots: Vec<Option<PartitionId>>,
}

impl VecSink {
    pub fn new(edge_count: u64) -> Self {
        VecSink {
            slots: vec![None; edge_count as usize],
        }
    }

    pub fn slots(&self) -> &[Option<PartitionId>] {
        &self.slots
    }

    /// Finalizes into a [`PartitionAssignment`]; every slot must be filled.
    pub fn into_assignment(self, k: u32, alpha: f64) -> Result<PartitionAssignment> {
        let mut partitions = Vec::with_capacity(self.slots.len());
        for (i, slot) in self.slots.into_iter().enumerate() {
            match slot {
                Some(p) => partitions.push(p),
                None => {
                    return Err(Error::IncompleteAssignment {
                        detail: format!("edge {i} was never assigned"),
                    })
                }
            }
        }
        Ok(PartitionAssignment::new(partitions, k, alpha))
    }
}

impl AssignmentSink for VecSink {
    fn assign(&mut self, ordinal: u64, _edge: Edge, partition: PartitionId) -> Result<()> {
        let slot = &mut self.slots[ordinal as usize];
        if slot.is_some() {
            return Err(Error::IncompleteAssignment {
                detail: format!("edge {ordinal} assigned twice"),
            });
        }
        *slot = Some(partition);
        Ok(())
    }
}

/// Counts assignments and drops them; for timing runs.
#[derive(Default)]
pub struct NullSink {
    pub assigned: u64,
}

impl AssignmentSink for NullSink {
    fn assign(&mut self, _ordinal: u64, _edge: Edge, _partition: PartitionId) -> Result<()> {
        self.assigned += 1;
        Ok(())
    }
}

const SPILL_RECORD_BYTES: u64 = 20;

/// Streams decisions to disk and produces the final stream-ordered triple
/// file without any per-edge memory. Decisions are appended to a spill file
/// as 20-byte `(ordinal, first, second, partition)` records; each pass
/// emits ascending ordinals, so an ordinal decrease starts a new sorted
/// run. `finish` merges the runs into 12-byte output triples.
pub struct FileSink {
    out_path: PathBuf,
    // The named handle owns the file's lifetime (auto-deleted on drop);
    // the writer and the merge readers use independent reopened handles
    // so every reader keeps its own cursor.
    spill: Option<(tempfile::NamedTempFile, BufWriter<File>)>,
    expected: u64,
    records: u64,
    closed_runs: Vec<(u64, u64)>, // (first record index, record count)
    run_start: u64,
    last_ordinal: Option<u64>,
}

impl FileSink {
    pub fn create(out_path: impl AsRef<Path>, expected_edges: u64) -> Result<Self> {
        let out_path = out_path.as_ref().to_path_buf();
        let spill_dir = out_path.parent().filter(|p| !p.as_os_str().is_empty());
        let spill_file = match spill_dir {
            Some(dir) => tempfile::NamedTempFile::new_in(dir),
            None => tempfile::NamedTempFile::new(),
        }
        .map_err(|e| Error::io(&out_path, e))?;
        let writer = spill_file.reopen().map_err(|e| Error::io(&out_path, e))?;
        Ok(FileSink {
            out_path,
            spill: Some((spill_file, BufWriter::with_capacity(1 << 20, writer))),
            expected: expected_edges,
            records: 0,
            closed_runs: Vec::new(),
            run_start: 0,
            last_ordinal: None,
        })
    }
}

impl AssignmentSink for FileSink {
    fn assign(&mut self, ordinal: u64, edge: Edge, partition: PartitionId) -> Result<()> {
        if self.last_ordinal.is_some_and(|last| ordinal <= last) {
            self.closed_runs
                .push((self.run_start, self.records - self.run_start));
            self.run_start = self.records;
        }
        self.last_ordinal = Some(ordinal);
        let mut buf = [0u8; 20];
        buf[..8].copy_from_slice(&ordinal.to_le_bytes());
        buf[8..12].copy_from_slice(&edge.first.to_le_bytes());
        buf[12..16].copy_from_slice(&edge.second.to_le_bytes());
        buf[16..].copy_from_slice(&partition.to_le_bytes());
        let (_, writer) = self.spill.as_mut().expect("sink already finished");
        writer
            .write_all(&buf)
            .map_err(|e| Error::io(&self.out_path, e))?;
        self.records += 1;
        Ok(())
    }

    fn finish(&mut self) -> Result<()> {
        let (spill_file, mut writer) = self.spill.take().expect("sink already finished");
        if self.records > self.run_start {
            self.closed_runs
                .push((self.run_start, self.records - self.run_start));
        }
        if self.records != self.expected {
            return Err(Error::IncompleteAssignment {
                detail: format!("{} of {} edges assigned", self.records, self.expected),
            });
        }

        writer.flush().map_err(|e| Error::io(&self.out_path, e))?;
        drop(writer);
        let mut runs = Vec::with_capacity(self.closed_runs.len());
        for &(start, len) in &self.closed_runs {
            let mut file = spill_file
                .reopen()
                .map_err(|e| Error::io(&self.out_path, e))?;
            file.seek(SeekFrom::Start(start * SPILL_RECORD_BYTES))
                .map_err(|e| Error::io(&self.out_path, e))?;
            let mut run = RunReader {
                reader: BufReader::with_capacity(1 << 20, file),
                remaining: len,
                head: None,
            };
            run.advance().map_err(|e| Error::io(&self.out_path, e))?;
            runs.push(run);
        }

        let out = File::create(&self.out_path).map_err(|e| Error::io(&self.out_path, e))?;
        let mut out = BufWriter::with_capacity(1 << 20, out);
        for expected_ordinal in 0..self.expected {
            let next = runs
                .iter_mut()
                .filter(|r| r.head.is_some())
                .min_by_key(|r| r.head.as_ref().expect("filtered").0);
            let Some(run) = next else {
                return Err(Error::IncompleteAssignment {
                    detail: format!("spill exhausted at edge {expected_ordinal}"),
                });
            };
            let (ordinal, edge, partition) = run.head.take().expect("filtered");
            run.advance().map_err(|e| Error::io(&self.out_path, e))?;
            if ordinal != expected_ordinal {
                return Err(Error::IncompleteAssignment {
                    detail: format!(
                        "edge {expected_ordinal} missing (next decision is for edge {ordinal})"
                    ),
                });
            }
            write_triple(&mut out, edge, partition).map_err(|e| Error::io(&self.out_path, e))?;
        }
        out.flush().map_err(|e| Error::io(&self.out_path, e))
    }
}

struct RunReader {
    reader: BufReader<File>,
    remaining: u64,
    head: Option<(u64, Edge, PartitionId)>,
}

impl RunReader {
    fn advance(&mut self) -> std::io::Result<()> {
        if self.remaining == 0 {
            self.head = None;
            return Ok(());
        }
        self.remaining -= 1;
        let mut buf = [0u8; 20];
        self.reader.read_exact(&mut buf)?;
        let ordinal = u64::from_le_bytes(buf[..8].try_into().expect("8 bytes"));
        let first = u32::from_le_bytes(buf[8..12].try_into().expect("4 bytes"));
        let second = u32::from_le_bytes(buf[12..16].try_into().expect("4 bytes"));
        let partition = u32::from_le_bytes(buf[16..].try_into().expect("4 bytes"));
        self.head = Some((ordinal, Edge::new(first, second), partition));
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edge_stream::AssignmentReader;

    #[test]
    fn vec_sink_collects_and_validates() {
        let mut sink = VecSink::new(3);
        sink.assign(1, Edge::new(0, 1), 1).unwrap();
        sink.assign(0, Edge::new(2, 3), 0).unwrap();
        assert!(sink.assign(0, Edge::new(2, 3), 0).is_err(), "double assign");
        sink.assign(2, Edge::new(4, 5), 0).unwrap();
        let a = sink.into_assignment(2, 1.0).unwrap();
        assert_eq!(a.partitions(), &[0, 1, 0]);
        assert_eq!(a.sizes(), &[2, 1]);
    }

    #[test]
    fn vec_sink_rejects_holes() {
        let mut sink = VecSink::new(2);
        sink.assign(0, Edge::new(0, 1), 0).unwrap();
        assert!(sink.into_assignment(2, 1.0).is_err());
    }

    #[test]
    fn file_sink_merges_interleaved_runs() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.bin");
        let mut sink = FileSink::create(&path, 6).unwrap();
        // Run 1: even ordinals; run 2: odd ordinals.
        for i in [0u64, 2, 4] {
            sink.assign(i, Edge::new(i as u32, i as u32 + 1), 0)
                .unwrap();
        }
        for i in [1u64, 3, 5] {
            sink.assign(i, Edge::new(i as u32, i as u32 + 1), 1)
                .unwrap();
        }
        sink.finish().unwrap();

        let records: Vec<(Edge, u32)> = AssignmentReader::open(&path)
            .unwrap()
            .map(|r| r.unwrap())
            .collect();
        assert_eq!(records.len(), 6);
        for (i, (e, p)) in records.iter().enumerate() {
            assert_eq!(e.first as usize, i);
            assert_eq!(e.second as usize, i + 1);
            assert_eq!(*p, (i % 2) as u32);
        }
    }

    #[test]
    fn file_sink_single_sequential_run() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.bin");
        let mut sink = FileSink::create(&path, 3).unwrap();
        for i in 0..3u64 {
            sink.assign(i, Edge::new(i as u32, 9), (i % 2) as u32)
                .unwrap();
        }
        sink.finish().unwrap();
        assert_eq!(std::fs::metadata(&path).unwrap().len(), 36);
    }

    #[test]
    fn file_sink_empty() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.bin");
        let mut sink = FileSink::create(&path, 0).unwrap();
        sink.finish().unwrap();
        assert_eq!(std::fs::metadata(&path).unwrap().len(), 0);
    }

    #[test]
    fn file_sink_detects_missing_edges() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.bin");
        let mut sink = FileSink::create(&path, 2).unwrap();
        sink.assign(0, Edge::new(0, 1), 0).unwrap();
        assert!(matches!(
            sink.finish(),
            Err(Error::IncompleteAssignment { .. })
        ));
    }
}
