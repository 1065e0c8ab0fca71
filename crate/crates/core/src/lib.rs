//! Stylometric analysis of hyperpartisan, fake, and satirical news.
//!
//! The crate is organised along the analysis pipeline:
//!
//! - [`corpus`]: loading, validating and summarising annotated article corpora,
//!   veracity labels, publisher-disjoint folds and oversampling.
//! - [`textproc`]: tokenization, sentence splitting, part-of-speech tagging,
//!   syllable counting and quote detection.
//! - [`features`]: the style feature model (character, stop-word and POS n-grams,
//!   readability, General Inquirer dictionaries, news-domain scalars), the
//!   bag-of-words topic baseline, vocabulary selection and vectorization.
//! - [`learn`]: linear hinge-loss classifier, random forest, metrics and
//!   cross-validation.
//! - [`unmasking`]: category-level Unmasking curves and their slope statistic.
//! - [`harness`]: end-to-end experiments producing tables, curves and manifests.

pub mod corpus;
pub mod features;
pub mod harness;
pub mod learn;
pub mod textproc;
pub mod unmasking;

pub(crate) mod seed;
