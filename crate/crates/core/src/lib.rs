//! Character-level length-control decoding for CTC-trained
//! non-autoregressive summarizers.
//!
//! A model supplies one distribution over the vocabulary per prediction slot
//! ([`LogProbMatrix`]). Decoders choose one token per slot; the chosen path
//! reduces to a summary by the CTC rules in [`reduce`]. The length-control
//! decoder in [`decode`] maximizes the path's log-probability subject to a
//! character budget on the reduced summary.

pub mod bench;
pub mod ctc;
pub mod decode;
pub mod enumerate;
pub mod error;
pub mod length;
pub mod matrix_file;
pub mod oracle;
pub mod reduce;
pub mod rouge;
pub mod synth;
pub mod tokens;

pub use ctc::{brute_marginal, ctc_forward, MarginalScore};
pub use decode::{
    decode_exact, decode_greedy, decode_length_control, truncate, DecodeResult, DecoderConfig, DpCell, DpTable,
    Selection, TruncateMode,
};
pub use error::{Error, Result};
pub use length::{reduced_length, LengthWeights};
pub use matrix_file::{Encoding, MatrixFile};
pub use oracle::{brute_decode, gap_report, BruteForce, GapReport, LengthConstraint, OracleResult};
pub use reduce::{reduce_merge, reduce_nomerge, Reduction};
pub use rouge::{corpus_rouge, rouge, RougeMode, RougeScore};
pub use tokens::{LogProbMatrix, TokenId, TokenPath, Vocabulary, WordSequence};
