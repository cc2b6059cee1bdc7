//! LSTM regression from audio segments to gesture segments, trained with
//! full backpropagation through time and Adam.

mod adam;
mod checkpoint;
mod lstm;
mod train;

pub use adam::{scalar_adam, AdamConfig, AdamState};
pub use checkpoint::{
    load_checkpoint, read_checkpoint, save_checkpoint, write_checkpoint, CHECKPOINT_MAGIC,
    CHECKPOINT_VERSION,
};
pub use lstm::{ForwardCache, LayerCache, LstmLayer, LstmStack, FORGET_BIAS, GATES};
pub use train::{
    batch_gradient, mse_loss, segment_input, segment_target, sequence_gradient, split_mse, train,
    train_with, write_log, EpochLog, TrainConfig, TrainOutcome, LOG_HEADER,
};

/// Glorot-initialized stack with the forget-gate bias at 1.
pub fn init_params(layers: usize, units: usize, seed: u64) -> LstmStack {
    LstmStack::init(layers, units, seed)
}
