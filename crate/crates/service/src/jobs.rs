//! Job bookkeeping: state machine, progress, per-job workspaces and expiry.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU8, Ordering};
use std::sync::{Arc, Mutex, RwLock};
use std::time::{Duration, SystemTime};

use rand::distr::{Alphanumeric, SampleString};
use segstudio::pipeline::{encode_mask, mask_from_sources};
use segstudio::RasterOptions;
use serde::Serialize;
use tokio::sync::Semaphore;

pub const ID_LEN: usize = 22;
pub const CONTOURS_FILE: &str = "contours.vtk";
pub const META_FILE: &str = "meta.json";
pub const MASK_FILE: &str = "mask.nrrd";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
#[repr(u8)]
pub enum JobState {
    Created = 0,
    Running = 1,
    Done = 2,
    Failed = 3,
}

impl JobState {
    fn from_u8(v: u8) -> Self {
        match v {
            0 => JobState::Created,
            1 => JobState::Running,
            2 => JobState::Done,
            _ => JobState::Failed,
        }
    }
}

/// What a progress poll sees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JobStatus {
    pub state: JobState,
    pub progress: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug)]
pub struct Job {
    id: String,
    state: AtomicU8,
    progress: AtomicU8,
    error: Mutex<Option<String>>,
    workspace: PathBuf,
    pub created_at: SystemTime,
    pub expires_at: SystemTime,
}

impl Job {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn workspace(&self) -> &Path {
        &self.workspace
    }

    pub fn state(&self) -> JobState {
        JobState::from_u8(self.state.load(Ordering::SeqCst))
    }

    pub fn status(&self) -> JobStatus {
        // state first: progress is raised to 100 before `done` is published
        let state = self.state();
        JobStatus {
            state,
            progress: self.progress.load(Ordering::SeqCst),
            error: self.error.lock().unwrap().clone(),
        }
    }

    /// created -> running; false if the job already left `created`.
    pub fn try_start(&self) -> bool {
        self.transition(JobState::Created, JobState::Running)
    }

    pub fn report(&self, percent: u8) {
        self.progress.fetch_max(percent.min(100), Ordering::SeqCst);
    }

    fn finish(&self) {
        self.report(100);
        self.transition(JobState::Running, JobState::Done);
    }

    fn fail(&self, code: &str) {
        *self.error.lock().unwrap() = Some(code.to_string());
        self.transition(JobState::Running, JobState::Failed);
    }

    fn transition(&self, from: JobState, to: JobState) -> bool {
        self.state
            .compare_exchange(from as u8, to as u8, Ordering::SeqCst, Ordering::SeqCst)
            .is_ok()
    }

    pub fn mask_path(&self) -> PathBuf {
        self.workspace.join(MASK_FILE)
    }

    fn expired(&self, now: SystemTime) -> bool {
        now >= self.expires_at
    }
}

/// All live jobs plus the worker limit for mask generation.
#[derive(Debug)]
pub struct JobStore {
    root: PathBuf,
    ttl: Duration,
    jobs: RwLock<HashMap<String, Arc<Job>>>,
    workers: Arc<Semaphore>,
}

impl JobStore {
    pub fn new(root: impl Into<PathBuf>, ttl: Duration, workers: usize) -> std::io::Result<Self> {
        let root = root.into();
        std::fs::create_dir_all(&root)?;
        Ok(Self {
            root,
            ttl,
            jobs: RwLock::new(HashMap::new()),
            workers: Arc::new(Semaphore::new(workers.max(1))),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Store the validated uploads in a fresh workspace.
    pub fn create(&self, contours: &[u8], meta: &[u8]) -> std::io::Result<Arc<Job>> {
        let id = Alphanumeric.sample_string(&mut rand::rng(), ID_LEN);
        let workspace = self.root.join(&id);
        std::fs::create_dir_all(&workspace)?;
        let written = std::fs::write(workspace.join(CONTOURS_FILE), contours)
            .and_then(|_| std::fs::write(workspace.join(META_FILE), meta));
        if let Err(e) = written {
            let _ = std::fs::remove_dir_all(&workspace);
            return Err(e);
        }
        let now = SystemTime::now();
        let job = Arc::new(Job {
            id: id.clone(),
            state: AtomicU8::new(JobState::Created as u8),
            progress: AtomicU8::new(0),
            error: Mutex::new(None),
            workspace,
            created_at: now,
            expires_at: now + self.ttl,
        });
        self.jobs.write().unwrap().insert(id, job.clone());
        Ok(job)
    }

    /// Look up a live job; expired ones are dropped on sight.
    pub fn get(&self, id: &str) -> Option<Arc<Job>> {
        let job = self.jobs.read().unwrap().get(id).cloned()?;
        if job.expired(SystemTime::now()) {
            self.remove(id);
            return None;
        }
        Some(job)
    }

    pub fn len(&self) -> usize {
        self.jobs.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn remove(&self, id: &str) {
        if let Some(job) = self.jobs.write().unwrap().remove(id) {
            let _ = std::fs::remove_dir_all(&job.workspace);
        }
    }

    /// Remove every expired job and its workspace. Returns how many went.
    pub fn sweep_expired(&self) -> usize {
        let now = SystemTime::now();
        let stale: Vec<String> = self
            .jobs
            .read()
            .unwrap()
            .values()
            .filter(|j| j.expired(now))
            .map(|j| j.id.clone())
            .collect();
        for id in &stale {
            self.remove(id);
        }
        stale.len()
    }

    /// Run mask generation in the background. The caller must have moved
    /// the job to `running` with [`Job::try_start`].
    pub fn spawn_mask(&self, job: Arc<Job>, options: RasterOptions) -> tokio::task::JoinHandle<()> {
        let workers = self.workers.clone();
        tokio::spawn(async move {
            let Ok(_permit) = workers.acquire_owned().await else {
                job.fail("INTERNAL");
                return;
            };
            let worker = job.clone();
            let outcome = tokio::task::spawn_blocking(move || generate(&worker, &options)).await;
            match outcome {
                Ok(Ok(())) => job.finish(),
                Ok(Err(code)) => job.fail(code),
                Err(_) => job.fail("INTERNAL"),
            }
        })
    }
}

fn generate(job: &Job, options: &RasterOptions) -> Result<(), &'static str> {
    let read = |name: &str| std::fs::read_to_string(job.workspace.join(name)).map_err(|_| "IO");
    let vtk = read(CONTOURS_FILE)?;
    let meta = read(META_FILE)?;
    let sink = |p: u8| job.report(p);
    let mask = mask_from_sources(&vtk, &meta, &sink, options).map_err(|e| e.code())?;
    std::fs::write(job.mask_path(), encode_mask(&mask)).map_err(|_| "IO")
}
