//! A self-contained feed-forward network engine.
//!
//! Layers (dense, batch normalization, ReLU/sigmoid, skip concatenation),
//! Glorot initialization, binary cross-entropy, Adam, two learning-rate
//! schedules, a deterministic training loop, and a checksummed binary model
//! format. Gradient correctness is guarded by finite-difference checks; see
//! [`mlp::gradient_check`].

pub mod arch;
pub mod io;
pub mod layer;
pub mod loss;
pub mod mlp;
pub mod optim;
pub mod schedule;
pub mod tensor;
pub mod train;

pub use arch::{build_architecture, ArchVariant};
pub use io::{load_model, save_model, write_history};
pub use layer::{Activation, LayerSpec};
pub use loss::bce_loss;
pub use mlp::{gradient_check, ForwardCache, Mlp};
pub use optim::AdamState;
pub use schedule::{LrSchedule, PlateauSchedule, TriangularSchedule};
pub use tensor::Tensor2;
pub use train::{train, DataSource, EpochRecord, TrainConfig, TrainOutcome};
