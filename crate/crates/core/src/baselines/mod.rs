//! DeepWalk and node2vec: random-walk corpora fed to a skip-gram trainer.

mod skipgram;
mod walks;

pub use skipgram::{
    sgns_gradients, sgns_loss, train_skipgram, train_skipgram_with_history, DenseEmbedding, SgnsGradients,
    SkipGramConfig,
};
pub use walks::{biased_walks, node2vec_transition, uniform_walks, BiasParams, WalkCorpus};
