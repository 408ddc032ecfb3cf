//! In-process SPMD executor and its blocking collectives.
//!
//! Each rank runs on its own thread. Collectives are matched by a per-rank
//! call counter: the `i`-th collective of every rank belongs to round `i`.
//! Mail is stored in `[receiver][sender]` slots, so what a rank receives
//! depends only on who sent it and in which round, never on thread timing.

use std::any::Any;
use std::collections::HashMap;
use std::panic::{self, AssertUnwindSafe};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use parking_lot::{Condvar, Mutex};

use crate::error::{Error, Result};

type Message = Box<dyn Any + Send>;

struct Round {
    kind: &'static str,
    mismatch: Option<String>,
    mail: Vec<Vec<Option<Message>>>,
    arrived: usize,
    taken: usize,
}

impl Round {
    fn new(kind: &'static str, size: usize) -> Self {
        Self {
            kind,
            mismatch: None,
            mail: (0..size)
                .map(|_| (0..size).map(|_| None).collect())
                .collect(),
            arrived: 0,
            taken: 0,
        }
    }
}

#[derive(Default)]
struct HubState {
    rounds: HashMap<u64, Round>,
    finished: usize,
}

struct Hub {
    size: usize,
    state: Mutex<HubState>,
    cv: Condvar,
}

/// A rank's endpoint into the executor.
#[derive(Clone)]
pub struct RankContext {
    rank: usize,
    size: usize,
    hub: Arc<Hub>,
    calls: Arc<AtomicU64>,
}

impl std::fmt::Debug for RankContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RankContext")
            .field("rank", &self.rank)
            .field("size", &self.size)
            .finish()
    }
}

impl RankContext {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_root(&self) -> bool {
        self.rank == 0
    }

    fn collective(&self, kind: &'static str, sends: Vec<Message>) -> Result<Vec<Message>> {
        debug_assert_eq!(sends.len(), self.size);
        let idx = self.calls.fetch_add(1, Ordering::Relaxed);
        let size = self.size;
        let hub = &*self.hub;
        let mut st = hub.state.lock();
        {
            let round = st
                .rounds
                .entry(idx)
                .or_insert_with(|| Round::new(kind, size));
            if round.kind != kind && round.mismatch.is_none() {
                round.mismatch = Some(format!(
                    "collective #{idx}: rank {} called `{kind}` while another rank called `{}`",
                    self.rank, round.kind
                ));
            }
            for (dest, msg) in sends.into_iter().enumerate() {
                round.mail[dest][self.rank] = Some(msg);
            }
            round.arrived += 1;
        }
        hub.cv.notify_all();
        loop {
            let finished = st.finished;
            let round = st.rounds.get_mut(&idx).expect("round exists until drained");
            if round.arrived == size {
                round.taken += 1;
                let outcome = match &round.mismatch {
                    Some(msg) => Err(Error::DeadlockDetected(msg.clone())),
                    None => Ok(round.mail[self.rank]
                        .iter_mut()
                        .map(|m| m.take().expect("every sender deposited"))
                        .collect()),
                };
                if round.taken == size {
                    st.rounds.remove(&idx);
                }
                return outcome;
            }
            if round.arrived + finished >= size {
                return Err(Error::DeadlockDetected(format!(
                    "collective #{idx} `{kind}`: {} of {size} ranks arrived, {finished} exited",
                    round.arrived
                )));
            }
            hub.cv.wait(&mut st);
        }
    }

    /// `send[j]` goes to rank `j`; the result's entry `i` came from rank `i`.
    pub fn all_to_all_variable<T: Send + 'static>(&self, send: Vec<Vec<T>>) -> Result<Vec<Vec<T>>> {
        if send.len() != self.size {
            return Err(Error::LayoutMismatch(format!(
                "all_to_all with {} destinations on {} ranks",
                send.len(),
                self.size
            )));
        }
        let msgs = send.into_iter().map(|v| Box::new(v) as Message).collect();
        self.collective("all_to_all", msgs)?
            .into_iter()
            .map(downcast::<Vec<T>>)
            .collect()
    }

    /// Root receives every rank's payload in rank order; others get `None`.
    pub fn gather_to_root<T: Send + 'static>(&self, data: Vec<T>) -> Result<Option<Vec<Vec<T>>>> {
        let mut data = Some(data);
        let msgs = (0..self.size)
            .map(|dest| {
                if dest == 0 {
                    Box::new(data.take().unwrap()) as Message
                } else {
                    Box::new(Vec::<T>::new()) as Message
                }
            })
            .collect();
        let recv = self.collective("gather", msgs)?;
        if !self.is_root() {
            return Ok(None);
        }
        recv.into_iter()
            .map(downcast::<Vec<T>>)
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    /// Root supplies one part per rank; every rank receives its part.
    pub fn scatter_from_root<T: Send + 'static>(
        &self,
        parts: Option<Vec<Vec<T>>>,
    ) -> Result<Vec<T>> {
        let msgs: Vec<Message> = match (self.is_root(), parts) {
            (true, Some(parts)) if parts.len() == self.size => {
                parts.into_iter().map(|p| Box::new(p) as Message).collect()
            }
            (true, _) => {
                return Err(Error::LayoutMismatch(
                    "scatter root must supply one part per rank".into(),
                ))
            }
            (false, _) => (0..self.size)
                .map(|_| Box::new(Vec::<T>::new()) as Message)
                .collect(),
        };
        let mut recv = self.collective("scatter", msgs)?;
        downcast::<Vec<T>>(recv.swap_remove(0))
    }

    pub fn all_gather<T: Clone + Send + 'static>(&self, data: Vec<T>) -> Result<Vec<Vec<T>>> {
        let msgs = (0..self.size)
            .map(|_| Box::new(data.clone()) as Message)
            .collect();
        self.collective("all_gather", msgs)?
            .into_iter()
            .map(downcast::<Vec<T>>)
            .collect()
    }

    pub fn all_reduce_max(&self, value: f64) -> Result<f64> {
        Ok(self
            .all_gather(vec![value])?
            .into_iter()
            .flatten()
            .fold(f64::NEG_INFINITY, f64::max))
    }

    pub fn all_reduce_sum(&self, value: f64) -> Result<f64> {
        Ok(self.all_gather(vec![value])?.into_iter().flatten().sum())
    }

    pub fn barrier(&self) -> Result<()> {
        let msgs = (0..self.size).map(|_| Box::new(()) as Message).collect();
        self.collective("barrier", msgs).map(drop)
    }
}

fn downcast<T: 'static>(msg: Message) -> Result<T> {
    msg.downcast::<T>()
        .map(|b| *b)
        .map_err(|_| Error::LayoutMismatch("payload type differs between ranks".into()))
}

/// Marks a rank as exited even when its program panics.
struct ExitGuard<'a>(&'a Hub);

impl Drop for ExitGuard<'_> {
    fn drop(&mut self) {
        self.0.state.lock().finished += 1;
        self.0.cv.notify_all();
    }
}

/// Runs `program` once per rank and returns the results in rank order.
///
/// If any rank fails, the error of the lowest failing rank is returned,
/// preferring original failures over the deadlocks they cause in peers.
pub fn run_spmd<T, F>(size: usize, program: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&RankContext) -> Result<T> + Sync,
{
    if size == 0 {
        return Err(Error::BadParameters(
            "run_spmd needs at least one rank".into(),
        ));
    }
    let hub = Arc::new(Hub {
        size,
        state: Mutex::new(HubState::default()),
        cv: Condvar::new(),
    });
    let outcomes: Vec<Result<T>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..size)
            .map(|rank| {
                let ctx = RankContext {
                    rank,
                    size,
                    hub: hub.clone(),
                    calls: Arc::new(AtomicU64::new(0)),
                };
                let program = &program;
                scope.spawn(move || {
                    let _guard = ExitGuard(&ctx.hub);
                    match panic::catch_unwind(AssertUnwindSafe(|| program(&ctx))) {
                        Ok(r) => r,
                        Err(payload) => Err(Error::RankPanicked {
                            rank,
                            message: panic_message(&payload),
                        }),
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("rank panics are caught"))
            .collect()
    });
    debug_assert_eq!(hub.size, size);

    let mut results = Vec::with_capacity(size);
    let mut first_err: Option<(usize, Error)> = None;
    for (rank, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(v) => results.push(v),
            Err(e) => {
                let replace = match &first_err {
                    None => true,
                    Some((_, prev)) => {
                        is_deadlock(prev.root_cause()) && !is_deadlock(e.root_cause())
                    }
                };
                if replace {
                    first_err = Some((rank, e));
                }
            }
        }
    }
    match first_err {
        None => Ok(results),
        Some((_, e @ Error::RankPanicked { .. })) => Err(e),
        Some((rank, e)) => Err(Error::RankFailed {
            rank,
            source: Box::new(e),
        }),
    }
}

fn is_deadlock(e: &Error) -> bool {
    matches!(e, Error::DeadlockDetected(_))
}

fn panic_message(payload: &Box<dyn Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        s.to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "non-string panic payload".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn returns_in_rank_order() {
        assert_eq!(run_spmd(1, |c| Ok(c.rank())).unwrap(), vec![0]);
        assert_eq!(
            run_spmd(4, |c| Ok(c.rank() * c.rank())).unwrap(),
            vec![0, 1, 4, 9]
        );
        assert!(run_spmd(0, |_| Ok(())).is_err());
    }

    #[test]
    fn two_rank_exchange() {
        let out = run_spmd(2, |c| {
            let payload = if c.rank() == 0 { "a" } else { "b" };
            let mut send = vec![Vec::new(), Vec::new()];
            send[1 - c.rank()].push(payload.to_string());
            let recv = c.all_to_all_variable(send)?;
            Ok(recv[1 - c.rank()].clone())
        })
        .unwrap();
        assert_eq!(out, vec![vec!["b".to_string()], vec!["a".to_string()]]);
    }

    #[test]
    fn gather_scatter_and_reductions() {
        let out = run_spmd(3, |c| {
            let g = c.gather_to_root(vec![c.rank() as i32; c.rank() + 1])?;
            let parts = g.map(|g| g.into_iter().rev().collect::<Vec<_>>());
            let mine = c.scatter_from_root(parts)?;
            let max = c.all_reduce_max(c.rank() as f64)?;
            let sum = c.all_reduce_sum(1.0)?;
            c.barrier()?;
            Ok((mine, max, sum))
        })
        .unwrap();
        assert_eq!(out[0].0, vec![2, 2, 2]);
        assert_eq!(out[1].0, vec![1, 1]);
        assert_eq!(out[2].0, vec![0]);
        assert!(out.iter().all(|o| o.1 == 2.0 && o.2 == 3.0));
    }

    #[test]
    fn mismatched_collectives_deadlock() {
        let err = run_spmd(2, |c| {
            if c.rank() == 0 {
                c.all_to_all_variable(vec![vec![1u8], vec![2u8]]).map(drop)
            } else {
                c.gather_to_root(vec![1u8]).map(drop)
            }
        })
        .unwrap_err();
        assert!(
            matches!(err.root_cause(), Error::DeadlockDetected(_)),
            "{err}"
        );
    }

    #[test]
    fn missing_participant_deadlocks() {
        let err = run_spmd(3, |c| if c.rank() == 2 { Ok(()) } else { c.barrier() }).unwrap_err();
        assert!(matches!(err.root_cause(), Error::DeadlockDetected(_)));
    }

    #[test]
    fn rank_error_surfaces_with_rank() {
        let err = run_spmd(3, |c| {
            if c.rank() == 1 {
                return Err(Error::InvalidGrid("boom".into()));
            }
            c.barrier()
        })
        .unwrap_err();
        match err {
            Error::RankFailed { rank, source } => {
                assert_eq!(rank, 1);
                assert!(matches!(*source, Error::InvalidGrid(_)));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn rank_panic_does_not_hang() {
        let err = run_spmd(2, |c| {
            if c.rank() == 0 {
                panic!("rank zero exploded");
            }
            c.barrier()
        })
        .unwrap_err();
        assert!(matches!(err, Error::RankPanicked { rank: 0, .. }));
    }
}
