//! Temporal and causal relation extraction over TimeML documents.

pub mod allen;
pub mod annotation;
pub mod causal;
pub mod corpus;
pub mod eval;
pub mod features;
pub mod labels;
pub mod lexicon;
pub mod linear;
pub mod pairs;
pub mod pipeline;
pub mod rules;
pub mod synth;
pub mod timeml;
pub mod timex;

pub use allen::{Answer, BaseRelation, MappingProfile, RelationSet, TemporalGraph};
pub use annotation::{AnnotatedDocument, AnnotationLayer};
pub use eval::ScoreReport;
pub use labels::{CausalLabel, TLinkLabel};
pub use lexicon::Lexicons;
pub use linear::{Classifier, Hyperparameters};
pub use pairs::{EntityPair, PairKind};
pub use pipeline::{annotate, ModelBundle, PipelineConfig};
pub use timeml::{parse_timeml, serialize_timeml, CLink, Document, Provenance, TLink};
