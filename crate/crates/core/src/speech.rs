//! Announcement ordering for a speech backend.
//!
//! Earcons bypass the speech line entirely. Interrupting speech cancels the
//! utterance in flight and drops pending speech of equal or lower priority.
//! Speech duration is not modelled: the backend reports completion.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::controller::{Announcement, Priority};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Utterance {
    pub seq: u64,
    pub payload: Announcement,
    pub enqueued_at_ms: u64,
}

impl Utterance {
    fn priority(&self) -> Option<Priority> {
        match self.payload {
            Announcement::Speak { priority, .. } => Some(priority),
            Announcement::Earcon { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SpeechQueue {
    next_seq: u64,
    earcons: VecDeque<Utterance>,
    pending: VecDeque<Utterance>,
    current: Option<Utterance>,
    cancelled: Vec<Utterance>,
}

impl SpeechQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn enqueue(&mut self, a: Announcement, now_ms: u64) {
        let utterance = Utterance {
            seq: self.next_seq,
            payload: a,
            enqueued_at_ms: now_ms,
        };
        self.next_seq += 1;
        match &utterance.payload {
            Announcement::Earcon { .. } => self.earcons.push_back(utterance),
            Announcement::Speak { interrupt: false, .. } => self.pending.push_back(utterance),
            Announcement::Speak {
                interrupt: true,
                priority,
                ..
            } => {
                let priority = *priority;
                if let Some(current) = self.current.take() {
                    self.cancelled.push(current);
                }
                let (dropped, kept): (Vec<_>, Vec<_>) = self
                    .pending
                    .drain(..)
                    .partition(|u| u.priority().is_some_and(|p| p <= priority));
                self.cancelled.extend(dropped);
                self.pending = kept.into();
                self.pending.push_front(utterance);
            }
        }
    }

    /// Next utterance to vocalize. Earcons are returned whenever present;
    /// speech only when nothing is in flight.
    pub fn poll(&mut self, _now_ms: u64) -> Option<Utterance> {
        if let Some(earcon) = self.earcons.pop_front() {
            return Some(earcon);
        }
        if self.current.is_some() {
            return None;
        }
        let next = self.pending.pop_front()?;
        self.current = Some(next.clone());
        Some(next)
    }

    /// Backend signal that the in-flight utterance finished. Returns false if
    /// `seq` is not the one in flight.
    pub fn complete(&mut self, seq: u64) -> bool {
        match &self.current {
            Some(u) if u.seq == seq => {
                self.current = None;
                true
            }
            _ => false,
        }
    }

    pub fn in_flight(&self) -> Option<&Utterance> {
        self.current.as_ref()
    }

    pub fn pending_len(&self) -> usize {
        self.pending.len() + self.earcons.len()
    }

    pub fn is_idle(&self) -> bool {
        self.current.is_none() && self.pending.is_empty() && self.earcons.is_empty()
    }

    /// Utterances cancelled since the last call, in cancellation order.
    pub fn take_cancelled(&mut self) -> Vec<Utterance> {
        core::mem::take(&mut self.cancelled)
    }
}

/// Vocalizing side of the queue.
pub trait SpeechBackend {
    fn start(&mut self, utterance: &Utterance, now_ms: u64);
    fn cancel(&mut self, utterance: &Utterance, now_ms: u64);
}

/// Test backend recording `t_ms TAB kind TAB text` lines.
#[derive(Debug, Clone, Default)]
pub struct CaptureSink {
    lines: Vec<String>,
}

impl CaptureSink {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn lines(&self) -> &[String] {
        &self.lines
    }

    pub fn transcript(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            out.push_str(line);
            out.push('\n');
        }
        out
    }
}

fn describe(payload: &Announcement) -> (&'static str, &str) {
    match payload {
        Announcement::Speak { text, .. } => ("speak", text),
        Announcement::Earcon { kind } => ("earcon", kind.as_str()),
    }
}

impl SpeechBackend for CaptureSink {
    fn start(&mut self, utterance: &Utterance, now_ms: u64) {
        let (kind, text) = describe(&utterance.payload);
        self.lines.push(format!("{now_ms}\t{kind}\t{text}"));
    }

    fn cancel(&mut self, utterance: &Utterance, now_ms: u64) {
        let (_, text) = describe(&utterance.payload);
        self.lines.push(format!("{now_ms}\tcancel\t{text}"));
    }
}

/// Drains the queue into `backend` with zero-duration speech: every started
/// speech utterance is completed immediately. Returns what was started.
pub fn pump<B: SpeechBackend + ?Sized>(queue: &mut SpeechQueue, backend: &mut B, now_ms: u64) -> Vec<Utterance> {
    let mut started = Vec::new();
    for u in queue.take_cancelled() {
        backend.cancel(&u, now_ms);
    }
    while let Some(u) = queue.poll(now_ms) {
        backend.start(&u, now_ms);
        if u.priority().is_some() {
            queue.complete(u.seq);
        }
        started.push(u);
    }
    started
}
