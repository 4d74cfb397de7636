//! Per-mode fan-out with a deterministic merge: worker threads pull mode
//! indices from a shared counter and write results into a preallocated slot
//! table, so output order never depends on scheduling.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use spectra_core::spectrum::SpectrumError;
use spectra_core::{compute_slice, EquationSystem64, SliceOptions64, SpectrumSlice64};

fn thread_count(jobs: usize) -> usize {
    let avail = std::thread::available_parallelism().map_or(1, |n| n.get());
    let cap = std::env::var("SPECTRA_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(avail);
    cap.min(jobs).max(1)
}

pub fn compute_all(
    sys: &EquationSystem64,
    modes: &[u32],
    opts: &SliceOptions64,
) -> Vec<Result<SpectrumSlice64, SpectrumError<f64>>> {
    let threads = thread_count(modes.len());
    let slots: Mutex<Vec<Option<Result<SpectrumSlice64, SpectrumError<f64>>>>> =
        Mutex::new(vec![None; modes.len()]);
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= modes.len() {
                    break;
                }
                let result = compute_slice(sys, modes[i], opts);
                slots.lock().unwrap()[i] = Some(result);
            });
        }
    });
    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|slot| slot.expect("every mode computed"))
        .collect()
}
