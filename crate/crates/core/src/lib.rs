//! Topic ranking for blog corpora: collapsed-Gibbs LDA, cosine and Pearson
//! topic networks, weighted PageRank, and the precomputed navigator index.
//!
//! The numeric modules are generic over [`scalar::Real`]; the aliases below
//! fix the scalar to `f64`, which is what the file formats and the index use.

pub mod centrality;
pub mod corpus;
pub mod error;
pub mod features;
pub mod index;
pub mod io;
pub mod layout;
pub mod lda;
pub mod network;
pub mod ranking;
pub mod scalar;
pub mod similarity;
pub mod stoplist;

pub use corpus::{AuthorDocument, Corpus, RawBlogFile, Vocabulary};
pub use error::{Error, Result};
pub use index::NavigatorIndex;
pub use lda::{GibbsState, LdaConfig};
pub use centrality::PagerankConfig;
pub use ranking::{LabelSet, RankedTopic};
pub use scalar::Real;
pub use similarity::SimilarityMetric;

pub type LdaModel = lda::LdaModel<f64>;
pub type FeatureMatrix = features::FeatureMatrix<f64>;
pub type TopicNetwork = network::TopicNetwork<f64>;
pub type CentralityScores = centrality::CentralityScores<f64>;
pub type ScoresFile = centrality::ScoresFile<f64>;

pub type LdaModel32 = lda::LdaModel<f32>;
pub type FeatureMatrix32 = features::FeatureMatrix<f32>;
pub type TopicNetwork32 = network::TopicNetwork<f32>;
pub type CentralityScores32 = centrality::CentralityScores<f32>;
