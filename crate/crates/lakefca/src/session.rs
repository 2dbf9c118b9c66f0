//! Versioned editing sessions over a base context.
//!
//! A session's current state is always the replay of its history over the
//! base context. Readers take an `Arc` of the latest snapshot and never block
//! on a mutation in progress; mutations on one session are serialized and
//! guarded by the version token.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use chrono::{SecondsFormat, Utc};
use lakefca_core::{
    apply_op, labels, preview, replay, ConceptLattice, ContextStats, FormalContext, LabelAssignment, LatticeError,
    OpOutcome, Preview, ScriptMetadata, TransformError, TransformOp, TransformOptions, TransformReport,
    TransformScript,
};
use serde::{Deserialize, Serialize};

use crate::export::ContextDocument;

#[derive(Debug, thiserror::Error)]
pub enum SessionError {
    #[error("unknown session {0:?}")]
    NotFound(String),
    #[error("session {0:?} already exists")]
    AlreadyExists(String),
    #[error("stale version token {given}, current is {current}")]
    StaleVersion { given: u64, current: u64 },
    #[error("nothing to undo")]
    EmptyHistory,
    #[error("op rejected: {0}")]
    Rejected(TransformError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("journal {path}: {reason}")]
    Journal { path: PathBuf, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Everything a reader needs about one version of a session.
#[derive(Debug)]
pub struct Snapshot {
    pub version: u64,
    pub context: FormalContext,
    pub lattice: ConceptLattice,
    pub labels: LabelAssignment,
    pub stats: ContextStats,
    pub history: Vec<TransformOp>,
    pub updated_at: String,
}

impl Snapshot {
    fn build(
        version: u64,
        context: FormalContext,
        history: Vec<TransformOp>,
        cap: usize,
    ) -> Result<Self, LatticeError> {
        let lattice = ConceptLattice::compute(&context, cap)?;
        let labels = labels(&context, &lattice);
        let stats = ContextStats::of(&context, &lattice);
        Ok(Snapshot {
            version,
            context,
            lattice,
            labels,
            stats,
            history,
            updated_at: now(),
        })
    }
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum JournalEntry {
    Create {
        id: String,
        created_at: String,
        base: ContextDocument,
    },
    Apply {
        op: TransformOp,
    },
    Undo,
}

pub struct Session {
    id: String,
    base: FormalContext,
    created_at: String,
    options: TransformOptions,
    journal: Option<PathBuf>,
    state: RwLock<Arc<Snapshot>>,
    mutation: Mutex<()>,
}

impl std::fmt::Debug for Session {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Session")
            .field("id", &self.id)
            .field("version", &self.snapshot().version)
            .finish_non_exhaustive()
    }
}

impl Session {
    pub fn new(id: impl Into<String>, base: FormalContext, options: TransformOptions) -> Result<Self, SessionError> {
        Self::with_history(id, base, Vec::new(), options)
    }

    /// A session whose history is `ops`, all of which must apply. The version
    /// counts the ops as mutations, as if they had been posted one by one.
    pub fn with_history(
        id: impl Into<String>,
        base: FormalContext,
        ops: Vec<TransformOp>,
        options: TransformOptions,
    ) -> Result<Self, SessionError> {
        let strict = TransformOptions {
            skip_on_error: false,
            ..options
        };
        let (current, outcomes, _, _) = replay(&base, &ops, &strict);
        if let Some(OpOutcome::Rejected(e)) = outcomes.into_iter().find(|o| !matches!(o, OpOutcome::Applied)) {
            return Err(SessionError::Rejected(e));
        }
        let version = 1 + ops.len() as u64;
        let snapshot = Snapshot::build(version, current, ops, options.concept_cap)?;
        Ok(Session {
            id: id.into(),
            base,
            created_at: now(),
            options,
            journal: None,
            state: RwLock::new(Arc::new(snapshot)),
            mutation: Mutex::new(()),
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn base(&self) -> &FormalContext {
        &self.base
    }

    pub fn created_at(&self) -> &str {
        &self.created_at
    }

    pub fn snapshot(&self) -> Arc<Snapshot> {
        Arc::clone(&self.state.read().unwrap_or_else(|e| e.into_inner()))
    }

    pub fn version(&self) -> u64 {
        self.snapshot().version
    }

    pub fn history(&self) -> TransformScript {
        TransformScript {
            ops: self.snapshot().history.clone(),
            metadata: ScriptMetadata {
                author: None,
                created_at: Some(self.created_at.clone()),
            },
        }
    }

    fn check(&self, given: u64) -> Result<Arc<Snapshot>, SessionError> {
        let snap = self.snapshot();
        if snap.version != given {
            return Err(SessionError::StaleVersion {
                given,
                current: snap.version,
            });
        }
        Ok(snap)
    }

    fn publish(&self, snapshot: Snapshot, entry: &JournalEntry) -> Result<Arc<Snapshot>, SessionError> {
        if let Some(path) = &self.journal {
            append(path, entry)?;
        }
        let snapshot = Arc::new(snapshot);
        *self.state.write().unwrap_or_else(|e| e.into_inner()) = Arc::clone(&snapshot);
        Ok(snapshot)
    }

    /// Applies `op` on top of version `given`.
    pub fn apply(&self, given: u64, op: TransformOp) -> Result<(Arc<Snapshot>, TransformReport), SessionError> {
        let _guard = self.mutation.lock().unwrap_or_else(|e| e.into_inner());
        let prev = self.check(given)?;
        let (next, warnings) = apply_op(&prev.context, &op, &self.options).map_err(SessionError::Rejected)?;
        let mut history = prev.history.clone();
        history.push(op.clone());
        let snapshot = Snapshot::build(prev.version + 1, next, history, self.options.concept_cap)?;
        let report = TransformReport {
            outcomes: vec![OpOutcome::Applied],
            warnings: warnings.into_iter().map(|w| (0, w)).collect(),
            stats_before: prev.stats,
            stats_after: snapshot.stats,
            aborted_at: None,
        };
        let snapshot = self.publish(snapshot, &JournalEntry::Apply { op })?;
        Ok((snapshot, report))
    }

    /// Drops the last op by replaying the rest from the base context.
    pub fn undo(&self, given: u64) -> Result<Arc<Snapshot>, SessionError> {
        let _guard = self.mutation.lock().unwrap_or_else(|e| e.into_inner());
        let prev = self.check(given)?;
        if prev.history.is_empty() {
            return Err(SessionError::EmptyHistory);
        }
        let history = prev.history[..prev.history.len() - 1].to_vec();
        let (context, ..) = replay(&self.base, &history, &self.options);
        let snapshot = Snapshot::build(prev.version + 1, context, history, self.options.concept_cap)?;
        self.publish(snapshot, &JournalEntry::Undo)
    }

    pub fn preview(&self, op: &TransformOp) -> Result<Preview, SessionError> {
        Ok(preview(&self.snapshot().context, op, &self.options)?)
    }

    /// Starts journaling to `path`, writing the base context and current
    /// history so the file alone reproduces the session.
    pub fn attach_journal(&mut self, path: PathBuf) -> Result<(), SessionError> {
        let mut file = File::create(&path)?;
        let mut entries = vec![JournalEntry::Create {
            id: self.id.clone(),
            created_at: self.created_at.clone(),
            base: ContextDocument::new(&self.base),
        }];
        entries.extend(
            self.snapshot()
                .history
                .iter()
                .cloned()
                .map(|op| JournalEntry::Apply { op }),
        );
        for e in &entries {
            writeln!(file, "{}", serde_json::to_string(e).expect("journal entries serialize"))?;
        }
        file.sync_data()?;
        self.journal = Some(path);
        Ok(())
    }

    /// Rebuilds a session from its journal and keeps appending to it.
    pub fn recover(path: &Path, options: TransformOptions) -> Result<Self, SessionError> {
        let bad = |reason: String| SessionError::Journal {
            path: path.to_owned(),
            reason,
        };
        let reader = BufReader::new(File::open(path)?);
        let mut lines = reader.lines();
        let first = lines.next().ok_or_else(|| bad("empty journal".into()))??;
        let JournalEntry::Create { id, created_at, base } =
            serde_json::from_str(&first).map_err(|e| bad(e.to_string()))?
        else {
            return Err(bad("first entry is not a create".into()));
        };
        let base = base.into_context().map_err(|e| bad(e.to_string()))?;
        let mut history = Vec::new();
        let mut mutations = 0u64;
        let rest: Vec<String> = lines.collect::<Result<_, _>>()?;
        for (n, line) in rest.iter().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let entry = match serde_json::from_str::<JournalEntry>(line) {
                Ok(e) => e,
                // a torn final line from a crash mid-write is dropped
                Err(_) if n + 1 == rest.len() => break,
                Err(e) => return Err(bad(format!("entry {}: {e}", n + 2))),
            };
            match entry {
                JournalEntry::Apply { op } => history.push(op),
                JournalEntry::Undo => {
                    history
                        .pop()
                        .ok_or_else(|| bad(format!("entry {}: undo on empty history", n + 2)))?;
                }
                JournalEntry::Create { .. } => return Err(bad(format!("entry {}: second create", n + 2))),
            }
            mutations += 1;
        }
        let (context, outcomes, ..) = replay(&base, &history, &options);
        if let Some(OpOutcome::Rejected(e)) = outcomes.into_iter().find(|o| !matches!(o, OpOutcome::Applied)) {
            return Err(bad(format!("replay failed: {e}")));
        }
        let snapshot = Snapshot::build(1 + mutations, context, history, options.concept_cap)?;
        Ok(Session {
            id,
            base,
            created_at,
            options,
            journal: Some(path.to_owned()),
            state: RwLock::new(Arc::new(snapshot)),
            mutation: Mutex::new(()),
        })
    }
}

fn append(path: &Path, entry: &JournalEntry) -> Result<(), SessionError> {
    let mut file = OpenOptions::new().append(true).open(path)?;
    writeln!(
        file,
        "{}",
        serde_json::to_string(entry).expect("journal entries serialize")
    )?;
    file.sync_data()?;
    Ok(())
}

/// All live sessions, optionally journaled into one directory.
#[derive(Debug, Default)]
pub struct SessionStore {
    sessions: RwLock<BTreeMap<String, Arc<Session>>>,
    next_id: AtomicU64,
    journal_dir: Option<PathBuf>,
    options: TransformOptions,
}

impl SessionStore {
    pub fn new(options: TransformOptions) -> Self {
        SessionStore {
            options,
            ..Default::default()
        }
    }

    /// A store journaling into `dir`, first recovering every `*.jsonl` there.
    pub fn with_journal_dir(dir: PathBuf, options: TransformOptions) -> Result<Self, SessionError> {
        std::fs::create_dir_all(&dir)?;
        let store = SessionStore {
            journal_dir: Some(dir.clone()),
            options,
            ..Default::default()
        };
        let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)?
            .map(|e| e.map(|e| e.path()))
            .collect::<Result<_, _>>()?;
        paths.retain(|p| p.extension().is_some_and(|e| e == "jsonl"));
        paths.sort();
        for path in paths {
            let session = Session::recover(&path, options)?;
            if let Some(n) = session.id.strip_prefix('s').and_then(|n| n.parse::<u64>().ok()) {
                store.next_id.fetch_max(n, Ordering::SeqCst);
            }
            store.write().insert(session.id.clone(), Arc::new(session));
        }
        Ok(store)
    }

    pub fn options(&self) -> &TransformOptions {
        &self.options
    }

    fn write(&self) -> std::sync::RwLockWriteGuard<'_, BTreeMap<String, Arc<Session>>> {
        self.sessions.write().unwrap_or_else(|e| e.into_inner())
    }

    pub fn get(&self, id: &str) -> Result<Arc<Session>, SessionError> {
        self.sessions
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .get(id)
            .cloned()
            .ok_or_else(|| SessionError::NotFound(id.into()))
    }

    pub fn len(&self) -> usize {
        self.sessions.read().unwrap_or_else(|e| e.into_inner()).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Registers a session under a fresh id.
    pub fn create(&self, base: FormalContext) -> Result<Arc<Session>, SessionError> {
        let id = format!("s{}", self.next_id.fetch_add(1, Ordering::SeqCst) + 1);
        self.insert(Session::new(id, base, self.options)?)
    }

    /// Registers a prepared session under its own id.
    pub fn insert(&self, mut session: Session) -> Result<Arc<Session>, SessionError> {
        if self.get(&session.id).is_ok() {
            return Err(SessionError::AlreadyExists(session.id));
        }
        if let Some(dir) = &self.journal_dir {
            session.attach_journal(dir.join(format!("{}.jsonl", session.id)))?;
        }
        let session = Arc::new(session);
        self.write().insert(session.id.clone(), Arc::clone(&session));
        Ok(session)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lakefca_core::fixtures::{toy, toy_unification};

    fn ops() -> Vec<TransformOp> {
        toy_unification().ops
    }

    #[test]
    fn versions_and_undo() {
        let s = Session::new("t", toy(), Default::default()).unwrap();
        assert_eq!(s.version(), 1);
        let before = s.snapshot().stats;
        let (snap, report) = s.apply(1, ops()[0].clone()).unwrap();
        assert_eq!(snap.version, 2);
        assert_eq!(report.stats_before, before);
        let (snap, _) = s.apply(2, ops()[1].clone()).unwrap();
        assert_eq!(snap.lattice.len(), 4);
        let snap = s.undo(3).unwrap();
        assert_eq!(snap.version, 4);
        assert_eq!(snap.history.len(), 1);
        assert_eq!(snap.stats, report.stats_after);
        s.undo(4).unwrap();
        assert_eq!(s.snapshot().stats, before);
        assert!(matches!(s.undo(5), Err(SessionError::EmptyHistory)));
    }

    #[test]
    fn stale_token_and_rejection_leave_state() {
        let s = Session::new("t", toy(), Default::default()).unwrap();
        assert!(matches!(
            s.apply(7, ops()[0].clone()),
            Err(SessionError::StaleVersion { given: 7, current: 1 })
        ));
        let bad = TransformOp::rename_attribute("nope", "x");
        assert!(matches!(s.apply(1, bad), Err(SessionError::Rejected(_))));
        assert_eq!(s.version(), 1);
        assert_eq!(s.snapshot().context, toy());
    }

    #[test]
    fn preview_does_not_mutate() {
        let s = Session::new("t", toy(), Default::default()).unwrap();
        let p = s.preview(&ops()[1]).unwrap();
        assert_eq!(p.attribute_delta, -2);
        assert_eq!(s.version(), 1);
    }

    #[test]
    fn preloaded_history() {
        let s = Session::with_history("t", toy(), ops(), Default::default()).unwrap();
        assert_eq!(s.version(), 3);
        assert_eq!(s.snapshot().lattice.len(), 4);
        assert_eq!(s.history().ops, ops());
        let bad = vec![TransformOp::rename_attribute("nope", "x")];
        assert!(matches!(
            Session::with_history("t", toy(), bad, Default::default()),
            Err(SessionError::Rejected(_))
        ));
    }

    #[test]
    fn journal_recovery() {
        let dir = tempfile::tempdir().unwrap();
        let store = SessionStore::with_journal_dir(dir.path().into(), Default::default()).unwrap();
        let s = store.create(toy()).unwrap();
        assert_eq!(s.id(), "s1");
        s.apply(1, ops()[0].clone()).unwrap();
        s.apply(2, ops()[1].clone()).unwrap();
        s.undo(3).unwrap();
        let expected = s.snapshot();
        drop(store);

        let store = SessionStore::with_journal_dir(dir.path().into(), Default::default()).unwrap();
        let r = store.get("s1").unwrap();
        let got = r.snapshot();
        assert_eq!(got.version, expected.version);
        assert_eq!(got.context, expected.context);
        assert_eq!(got.history, expected.history);
        assert_eq!(store.create(toy()).unwrap().id(), "s2");
        // the recovered session keeps journaling
        r.apply(4, ops()[1].clone()).unwrap();
        let path = dir.path().join("s1.jsonl");
        OpenOptions::new()
            .append(true)
            .open(&path)
            .unwrap()
            .write_all(b"{\"kind\":\"app")
            .unwrap();
        let again = Session::recover(&path, Default::default()).unwrap();
        assert_eq!(again.version(), 5);
        assert_eq!(again.snapshot().lattice.len(), 4);
    }

    #[test]
    fn unknown_and_duplicate_ids() {
        let store = SessionStore::default();
        assert!(matches!(store.get("x"), Err(SessionError::NotFound(_))));
        store
            .insert(Session::new("default", toy(), Default::default()).unwrap())
            .unwrap();
        assert!(matches!(
            store.insert(Session::new("default", toy(), Default::default()).unwrap()),
            Err(SessionError::AlreadyExists(_))
        ));
    }
}
