//! Learning-rate schedules: reduce-on-plateau (per epoch) and triangular
//! cyclic (per iteration).

/// Reduce-on-plateau: start at `init`, multiply by `factor` whenever
/// `patience` consecutive epochs fail to improve the best seen validation
/// loss by more than `min_delta`. The stall counter resets on improvement
/// and on each reduction.
///
/// `min_delta` is what makes "stops reducing" operative under streamed
/// training data: with fresh examples every batch the validation loss keeps
/// creeping down by ever-smaller amounts, and a strict comparison would
/// postpone the reduction indefinitely.
#[derive(Debug, Clone)]
pub struct PlateauSchedule {
    lr: f64,
    factor: f64,
    patience: u32,
    min_delta: f64,
    best: f64,
    stalled: u32,
}

impl PlateauSchedule {
    /// Plateau schedule with a strict improvement test (`min_delta = 0`).
    pub fn new(init: f64, factor: f64, patience: u32) -> Self {
        assert!(init > 0.0 && factor > 0.0 && factor < 1.0 && patience >= 1);
        Self {
            lr: init,
            factor,
            patience,
            min_delta: 0.0,
            best: f64::INFINITY,
            stalled: 0,
        }
    }

    /// Require improvements to beat the best loss by at least `min_delta`
    /// to count; smaller gains are treated as stalls.
    pub fn with_min_delta(mut self, min_delta: f64) -> Self {
        assert!(min_delta >= 0.0);
        self.min_delta = min_delta;
        self
    }

    /// The stock settings: initial 1e-3, factor 0.1, patience 5 epochs,
    /// minimum counted improvement 1e-4.
    pub fn standard() -> Self {
        Self::new(1e-3, 0.1, 5).with_min_delta(1e-4)
    }

    /// Learning rate to use for the upcoming epoch.
    pub fn lr(&self) -> f64 {
        self.lr
    }

    /// Record an epoch's validation loss; returns the learning rate for the
    /// next epoch.
    pub fn observe(&mut self, val_loss: f64) -> f64 {
        if val_loss < self.best - self.min_delta {
            self.best = val_loss;
            self.stalled = 0;
        } else {
            self.stalled += 1;
            if self.stalled >= self.patience {
                self.lr *= self.factor;
                self.stalled = 0;
            }
        }
        self.lr
    }
}

/// Triangular cyclic schedule: piecewise-linear between `min_lr` and
/// `max_lr`, starting at the minimum, peaking after `half_cycle` iterations,
/// back to the minimum after a full period of `2·half_cycle`.
#[derive(Debug, Clone)]
pub struct TriangularSchedule {
    min_lr: f64,
    max_lr: f64,
    half_cycle: u64,
}

impl TriangularSchedule {
    pub fn new(min_lr: f64, max_lr: f64, half_cycle: u64) -> Self {
        assert!(min_lr > 0.0 && min_lr < max_lr && half_cycle >= 1);
        Self {
            min_lr,
            max_lr,
            half_cycle,
        }
    }

    /// The stock settings: 1e-5 to 1e-3 with a half-cycle of 64 iterations.
    pub fn standard() -> Self {
        Self::new(1e-5, 1e-3, 64)
    }

    /// Learning rate at a given (0-based) iteration index.
    pub fn lr_at(&self, iteration: u64) -> f64 {
        let period = 2 * self.half_cycle;
        let pos = iteration % period;
        let frac = if pos <= self.half_cycle {
            pos as f64 / self.half_cycle as f64
        } else {
            (period - pos) as f64 / self.half_cycle as f64
        };
        self.min_lr + frac * (self.max_lr - self.min_lr)
    }
}

/// Which schedule drives a training run.
#[derive(Debug, Clone)]
pub enum LrSchedule {
    Plateau(PlateauSchedule),
    Triangular(TriangularSchedule),
}
