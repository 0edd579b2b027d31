//! Auxiliary-space meter.
//!
//! Algorithms charge the meter one *cell* per vertex-id-sized working slot:
//! distance-table entries, visited flags, recursion bookkeeping, and any
//! subgraph they materialize. The read-only input graph is never charged.
//! Counting abstract cells instead of bytes keeps measurements deterministic
//! across platforms.

use std::cell::Cell;

use crate::graph::PlanarGraph;

#[derive(Debug, Default)]
pub struct SpaceMeter {
    live: Cell<u64>,
    peak: Cell<u64>,
}

impl SpaceMeter {
    pub fn new() -> SpaceMeter {
        SpaceMeter::default()
    }

    /// Cells currently held. Returns to its entry value when every guard
    /// taken inside an operation has been dropped.
    pub fn live_cells(&self) -> u64 {
        self.live.get()
    }

    pub fn peak_cells(&self) -> u64 {
        self.peak.get()
    }

    /// Charges `cells` until the returned guard is dropped.
    #[must_use]
    pub fn alloc(&self, cells: u64) -> MeterGuard<'_> {
        let live = self.live.get() + cells;
        self.live.set(live);
        if live > self.peak.get() {
            self.peak.set(live);
        }
        MeterGuard { meter: self, cells }
    }

    fn release(&self, cells: u64) {
        self.live.set(self.live.get() - cells);
    }
}

/// RAII charge on a [`SpaceMeter`]; releases on drop, so alloc/release pairs
/// balance by construction.
#[derive(Debug)]
pub struct MeterGuard<'m> {
    meter: &'m SpaceMeter,
    cells: u64,
}

impl Drop for MeterGuard<'_> {
    fn drop(&mut self) {
        self.meter.release(self.cells);
    }
}

/// Charge for materializing a graph: one cell per vertex plus five per arc
/// (endpoints, weight/color, and the two rotation slots).
pub fn graph_cells(g: &PlanarGraph) -> u64 {
    g.vertex_count() as u64 + 5 * g.arc_count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_tracks_nesting_and_balances() {
        let m = SpaceMeter::new();
        {
            let _a = m.alloc(10);
            {
                let _b = m.alloc(5);
                assert_eq!(m.live_cells(), 15);
            }
            assert_eq!(m.live_cells(), 10);
        }
        assert_eq!(m.live_cells(), 0);
        assert_eq!(m.peak_cells(), 15);
    }
}
