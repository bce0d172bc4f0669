//! Counting semaphores and bounded FIFO channels.
//!
//! [`Semaphore`] is bounded: its counter lives in `[0, max]`, [`Semaphore::acquire`]
//! blocks while the counter is zero and [`Semaphore::release`] fails instead of
//! pushing the counter past `max`.
//!
//! [`BoundedChannel`] is a ring buffer with two counting semaphores (`empty` free
//! slots, `full` filled slots) and one access lock around the cursors. A sender
//! waits on `empty` before taking the access lock and signals `full` after
//! dropping it; a receiver does the mirror image. Nothing blocks while the
//! access lock is held.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Condvar, Mutex, MutexGuard, PoisonError};
use std::thread;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyncError {
    #[error("semaphore maximum must be at least 1")]
    ZeroMax,
    #[error("initial count {initial} exceeds maximum {max}")]
    InitialAboveMax { initial: usize, max: usize },
    #[error("release would raise the semaphore count above its maximum {max}")]
    Overflow { max: usize },
    #[error("channel capacity must be at least 1")]
    ZeroCapacity,
    #[error("at least one worker is required")]
    NoWorkers,
}

fn lock<T>(mutex: &Mutex<T>) -> MutexGuard<'_, T> {
    // Critical sections here never run user code, so a poisoned lock still
    // guards consistent state.
    mutex.lock().unwrap_or_else(PoisonError::into_inner)
}

/// A bounded counting semaphore.
#[derive(Debug)]
pub struct Semaphore {
    count: Mutex<usize>,
    available: Condvar,
    max: usize,
}

impl Semaphore {
    pub fn new(initial: usize, max: usize) -> Result<Self, SyncError> {
        if max == 0 {
            return Err(SyncError::ZeroMax);
        }
        if initial > max {
            return Err(SyncError::InitialAboveMax { initial, max });
        }
        Ok(Self {
            count: Mutex::new(initial),
            available: Condvar::new(),
            max,
        })
    }

    /// Blocks until the counter is positive, then decrements it (P).
    pub fn acquire(&self) {
        let mut count = lock(&self.count);
        while *count == 0 {
            count = self
                .available
                .wait(count)
                .unwrap_or_else(PoisonError::into_inner);
        }
        *count -= 1;
    }

    /// Increments the counter and wakes one waiter (V).
    pub fn release(&self) -> Result<(), SyncError> {
        let mut count = lock(&self.count);
        if *count == self.max {
            return Err(SyncError::Overflow { max: self.max });
        }
        *count += 1;
        drop(count);
        self.available.notify_one();
        Ok(())
    }

    /// Snapshot of the counter. Stale as soon as it is returned under contention.
    pub fn count(&self) -> usize {
        *lock(&self.count)
    }

    pub fn max(&self) -> usize {
        self.max
    }
}

#[derive(Debug)]
struct Ring<T> {
    slots: Box<[Option<T>]>,
    read: usize,
    write: usize,
}

/// Fixed-capacity FIFO queue with blocking [`send`](Self::send) and
/// [`recv`](Self::recv).
#[derive(Debug)]
pub struct BoundedChannel<T> {
    ring: Mutex<Ring<T>>,
    empty: Semaphore,
    full: Semaphore,
    capacity: usize,
}

impl<T> BoundedChannel<T> {
    pub fn new(capacity: usize) -> Result<Self, SyncError> {
        if capacity == 0 {
            return Err(SyncError::ZeroCapacity);
        }
        Ok(Self {
            ring: Mutex::new(Ring {
                slots: (0..capacity).map(|_| None).collect(),
                read: 0,
                write: 0,
            }),
            empty: Semaphore::new(capacity, capacity)?,
            full: Semaphore::new(0, capacity)?,
            capacity,
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Number of items sent but not yet received.
    pub fn len(&self) -> usize {
        self.full.count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Appends `item`, blocking while the channel is full.
    pub fn send(&self, item: T) {
        self.empty.acquire();
        {
            let mut ring = lock(&self.ring);
            let at = ring.write;
            debug_assert!(ring.slots[at].is_none());
            ring.slots[at] = Some(item);
            ring.write = (at + 1) % self.capacity;
        }
        self.full
            .release()
            .expect("filled-slot count cannot exceed capacity");
    }

    /// Removes the oldest item, blocking while the channel is empty.
    pub fn recv(&self) -> T {
        self.full.acquire();
        let item = {
            let mut ring = lock(&self.ring);
            let at = ring.read;
            ring.read = (at + 1) % self.capacity;
            ring.slots[at]
                .take()
                .expect("a filled slot always holds an item")
        };
        self.empty
            .release()
            .expect("free-slot count cannot exceed capacity");
        item
    }
}

/// Shared `f64` whose update is a separate load and store, i.e. not atomic as a
/// whole. Concurrent unguarded adds lose updates.
#[derive(Debug, Default)]
struct Accumulator(AtomicU64);

impl Accumulator {
    fn add(&self, y: f64) {
        let current = f64::from_bits(self.0.load(Ordering::Relaxed));
        // Widens the read-modify-write window so unguarded races show up even
        // on a single core.
        #[cfg(test)]
        thread::yield_now();
        self.0.store((current + y).to_bits(), Ordering::Relaxed);
    }

    fn get(&self) -> f64 {
        f64::from_bits(self.0.load(Ordering::Relaxed))
    }
}

fn accumulate_squares(values: &[f64], workers: usize, guard: Option<&Semaphore>) -> f64 {
    let total = Accumulator::default();
    let chunk = values.len().div_ceil(workers).max(1);
    thread::scope(|scope| {
        for part in values.chunks(chunk) {
            let total = &total;
            scope.spawn(move || {
                for &x in part {
                    let y = x * x;
                    if let Some(sem) = guard {
                        sem.acquire();
                    }
                    total.add(y);
                    if let Some(sem) = guard {
                        sem.release()
                            .expect("binary semaphore released once per acquire");
                    }
                }
            });
        }
    });
    total.get()
}

/// Sum of squares where each worker squares its values privately and adds
/// them to one shared accumulator inside a binary-semaphore critical section.
///
/// Values are split into `workers` contiguous chunks; `workers >= values.len()`
/// gives one worker per element. Returns after every worker has been joined.
pub fn serialized_sum_squares(values: &[f64], workers: usize) -> Result<f64, SyncError> {
    if workers == 0 {
        return Err(SyncError::NoWorkers);
    }
    let mutex = Semaphore::new(1, 1)?;
    Ok(accumulate_squares(values, workers, Some(&mutex)))
}
