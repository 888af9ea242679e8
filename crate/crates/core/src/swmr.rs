//! Single-writer / multi-reader growable slot buffer.
//!
//! This is the growth protocol shared by the inverted lists, the forward
//! index and the searcher's vector working set: slots below a published
//! watermark are immutable; the single writer fills slots above it and then
//! publishes a new watermark with a release store. When a buffer fills up, a
//! buffer of double the capacity is allocated, the published contents are
//! copied into it, and it is installed atomically as the current buffer.
//! Readers that still hold the old buffer finish their reads against it; the
//! old allocation is reclaimed only once no reader can reach it (epoch-based
//! reclamation).
//!
//! Slots are atomic cells so that the writer's tail writes and concurrent
//! reads of the published region are race-free. Readers must clamp any
//! externally published length to `len()` of the snapshot they loaded, since
//! a watermark published against a newer buffer may exceed an older buffer's
//! capacity.

use std::sync::atomic::{AtomicU8, AtomicU32, AtomicU64, Ordering};

use crossbeam_epoch::{self as epoch, Atomic, Guard, Owned};

/// A slot that can be read and written atomically and copied between buffers
/// during an expansion.
pub(crate) trait Slot: Default + Send + Sync {
    fn copy_from(&self, src: &Self);
}

macro_rules! atomic_slot {
    ($ty:ty) => {
        impl Slot for $ty {
            fn copy_from(&self, src: &Self) {
                self.store(src.load(Ordering::Relaxed), Ordering::Relaxed);
            }
        }
    };
}

atomic_slot!(AtomicU8);
atomic_slot!(AtomicU32);
atomic_slot!(AtomicU64);

struct Buf<T> {
    slots: Box<[T]>,
}

impl<T: Default> Buf<T> {
    fn new(capacity: usize) -> Self {
        Buf {
            slots: (0..capacity).map(|_| T::default()).collect(),
        }
    }
}

pub(crate) struct GrowBuf<T: Slot> {
    current: Atomic<Buf<T>>,
}

impl<T: Slot> GrowBuf<T> {
    pub(crate) fn with_capacity(capacity: usize) -> Self {
        assert!(capacity > 0);
        GrowBuf {
            current: Atomic::new(Buf::new(capacity)),
        }
    }

    /// Snapshot of the current buffer's slots, valid for the guard's
    /// lifetime. Elements past the caller's published watermark (clamped to
    /// `len()`) are unspecified.
    pub(crate) fn load<'g>(&self, guard: &'g Guard) -> &'g [T] {
        let shared = self.current.load(Ordering::Acquire, guard);
        // SAFETY: the buffer is only retired through `grow`, which defers
        // destruction until all pinned readers are done; `shared` was loaded
        // under `guard`, so it stays alive at least that long.
        let buf = unsafe { shared.deref() };
        &buf.slots
    }

    /// Current capacity as seen by the writer.
    pub(crate) fn capacity(&self, guard: &Guard) -> usize {
        self.load(guard).len()
    }

    /// Doubles capacity until it is at least `min_capacity`, copying the
    /// first `published` slots into the new buffer and installing it.
    /// Writer-only: exactly one thread may call this, and only while no
    /// other thread writes slots.
    pub(crate) fn grow(&self, published: usize, min_capacity: usize, guard: &Guard) {
        let old_shared = self.current.load(Ordering::Acquire, guard);
        // SAFETY: same lifetime argument as `load`.
        let old = unsafe { old_shared.deref() };
        let mut capacity = old.slots.len();
        while capacity < min_capacity {
            capacity *= 2;
        }
        if capacity == old.slots.len() {
            return;
        }
        let new = Buf::new(capacity);
        for i in 0..published.min(old.slots.len()) {
            new.slots[i].copy_from(&old.slots[i]);
        }
        let retired = self.current.swap(Owned::new(new), Ordering::AcqRel, guard);
        // SAFETY: `retired` has been unlinked from `current`; no new reader
        // can reach it, and epoch reclamation waits for in-flight ones.
        unsafe { guard.defer_destroy(retired) };
    }
}

impl<T: Slot> Drop for GrowBuf<T> {
    fn drop(&mut self) {
        // SAFETY: &mut self means no concurrent readers; the unprotected
        // guard is fine for tearing down the last buffer.
        unsafe {
            let shared = self.current.load(Ordering::Relaxed, epoch::unprotected());
            drop(shared.into_owned());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;
    use std::sync::atomic::AtomicUsize;

    #[test]
    fn grow_preserves_published_prefix() {
        let buf: GrowBuf<AtomicU64> = GrowBuf::with_capacity(4);
        let guard = epoch::pin();
        for i in 0..4 {
            buf.load(&guard)[i].store(i as u64 + 10, Ordering::Relaxed);
        }
        buf.grow(4, 5, &guard);
        assert_eq!(buf.capacity(&guard), 8);
        let slots = buf.load(&guard);
        for i in 0..4 {
            assert_eq!(slots[i].load(Ordering::Relaxed), i as u64 + 10);
        }
    }

    #[test]
    fn grow_doubles_until_min_capacity() {
        let buf: GrowBuf<AtomicU32> = GrowBuf::with_capacity(4);
        let guard = epoch::pin();
        buf.grow(0, 100, &guard);
        assert_eq!(buf.capacity(&guard), 128);
    }

    #[test]
    fn readers_survive_concurrent_growth() {
        let buf: Arc<GrowBuf<AtomicU64>> = Arc::new(GrowBuf::with_capacity(4));
        let published = Arc::new(AtomicUsize::new(0));
        let done = Arc::new(AtomicUsize::new(0));

        let mut readers = Vec::new();
        for _ in 0..4 {
            let buf = Arc::clone(&buf);
            let published = Arc::clone(&published);
            let done = Arc::clone(&done);
            readers.push(std::thread::spawn(move || {
                while done.load(Ordering::Acquire) == 0 {
                    let guard = epoch::pin();
                    let len = published.load(Ordering::Acquire);
                    let slots = buf.load(&guard);
                    let len = len.min(slots.len());
                    for (i, slot) in slots.iter().take(len).enumerate() {
                        assert_eq!(slot.load(Ordering::Relaxed), i as u64);
                    }
                }
            }));
        }

        for i in 0..10_000u64 {
            let guard = epoch::pin();
            let len = published.load(Ordering::Relaxed);
            if buf.capacity(&guard) == len {
                buf.grow(len, len + 1, &guard);
            }
            buf.load(&guard)[len].store(i, Ordering::Relaxed);
            published.store(len + 1, Ordering::Release);
        }
        done.store(1, Ordering::Release);
        for r in readers {
            r.join().unwrap();
        }
    }
}
