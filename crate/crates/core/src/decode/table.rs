use crate::error::Result;
use crate::length::LengthWeights;
use crate::reduce::Reduction;
use crate::tokens::{LogProbMatrix, TokenId, TokenPath, Vocabulary};

/// Best partial hypothesis for one `(prefix length, bucket)` pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DpCell {
    /// Sum of slot log-probabilities over the prefix, blanks included.
    pub score: f64,
    /// Exact length of the reduced prefix under the table's weights.
    pub exact_len: usize,
    /// Token emitted at the last slot of the prefix; may be the blank.
    pub last_token: TokenId,
    /// Bucket of the predecessor cell one slot earlier. `None` for the first
    /// slot.
    pub prev_bucket: Option<usize>,
}

/// Filled DP table: `slots x (buckets + 1)` cells, row 0 being the empty
/// summary.
#[derive(Clone, Debug)]
pub struct DpTable {
    slots: usize,
    buckets: usize,
    bucket_size: usize,
    weights: LengthWeights,
    reduction: Reduction,
    cells: Vec<Option<DpCell>>,
}

/// Non-blank candidates per slot: the `top_k` most probable reachable words,
/// returned in ascending id order. Ties on probability keep the smaller id.
pub(crate) fn top_k_words(matrix: &LogProbMatrix, vocab: &Vocabulary, slot: usize, top_k: usize) -> Vec<TokenId> {
    let mut ids: Vec<TokenId> = vocab
        .word_ids()
        .filter(|&w| matrix.get(slot, w) > f64::NEG_INFINITY)
        .collect();
    if top_k < ids.len() {
        ids.sort_by(|&a, &b| matrix.get(slot, b).total_cmp(&matrix.get(slot, a)).then(a.cmp(&b)));
        ids.truncate(top_k);
        ids.sort_unstable();
    }
    ids
}

impl DpTable {
    /// Runs the recursion. `buckets` is the highest bucket index tracked;
    /// lengths above `buckets * bucket_size` are discarded.
    pub(crate) fn fill(
        matrix: &LogProbMatrix,
        vocab: &Vocabulary,
        buckets: usize,
        bucket_size: usize,
        top_k: usize,
        reduction: Reduction,
        weights: LengthWeights,
    ) -> Result<Self> {
        matrix.check_vocab(vocab)?;
        assert!(bucket_size >= 1, "bucket size must be positive");
        let slots = matrix.slots();
        let width = buckets + 1;
        let blank = vocab.blank_id();
        let max_len = buckets * bucket_size;
        let mut table = DpTable {
            slots,
            buckets,
            bucket_size,
            weights,
            reduction,
            cells: vec![None; slots * width],
        };

        // Column for the empty prefix; the first slot extends it exactly like
        // every later slot does, which reproduces the first-slot argmax.
        let start = [Some(DpCell {
            score: 0.0,
            exact_len: 0,
            last_token: blank,
            prev_bucket: None,
        })];

        for s in 0..slots {
            let (done, rest) = table.cells.split_at_mut(s * width);
            let prev: &[Option<DpCell>] = if s == 0 { &start } else { &done[(s - 1) * width..] };
            let cur = &mut rest[..width];
            let words = top_k_words(matrix, vocab, s, top_k);
            let blank_lp = matrix.get(s, blank);

            // Candidates arrive in tie-break order (blank, repeat, new word),
            // so only a strictly better score displaces the incumbent.
            let offer = |cur: &mut [Option<DpCell>], l: usize, cand: DpCell| {
                if cand.score == f64::NEG_INFINITY {
                    return;
                }
                let better = match cur[l] {
                    None => true,
                    Some(c) => cand.score > c.score,
                };
                if better {
                    cur[l] = Some(cand);
                }
            };

            // Case 1: blank keeps the bucket.
            for (l, cell) in prev.iter().enumerate() {
                if let Some(c) = cell {
                    offer(
                        cur,
                        l,
                        DpCell {
                            score: c.score + blank_lp,
                            exact_len: c.exact_len,
                            last_token: blank,
                            prev_bucket: (s > 0).then_some(l),
                        },
                    );
                }
            }

            // Case 2: repeating the last word merges into it.
            if reduction == Reduction::Merge {
                for (l, cell) in prev.iter().enumerate() {
                    if let Some(c) = cell {
                        if c.last_token != blank {
                            offer(
                                cur,
                                l,
                                DpCell {
                                    score: c.score + matrix.get(s, c.last_token),
                                    exact_len: c.exact_len,
                                    last_token: c.last_token,
                                    prev_bucket: Some(l),
                                },
                            );
                        }
                    }
                }
            }

            // Case 3: a new word moves from bucket l' to the bucket of the
            // exact new length. Visiting l' then token id in ascending order
            // with strict improvement gives the documented tie-break.
            for (lp, cell) in prev.iter().enumerate() {
                let Some(c) = cell else { continue };
                for &w in &words {
                    if reduction == Reduction::Merge && w == c.last_token {
                        continue;
                    }
                    let len = c.exact_len + weights.increment_after(vocab.width(w), c.exact_len);
                    if len > max_len {
                        continue;
                    }
                    let l = len.div_ceil(bucket_size);
                    offer(
                        cur,
                        l,
                        DpCell {
                            score: c.score + matrix.get(s, w),
                            exact_len: len,
                            last_token: w,
                            prev_bucket: (s > 0).then_some(lp),
                        },
                    );
                }
            }
        }
        Ok(table)
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    /// Highest bucket index; the table has `buckets() + 1` rows.
    pub fn buckets(&self) -> usize {
        self.buckets
    }

    pub fn bucket_size(&self) -> usize {
        self.bucket_size
    }

    pub fn weights(&self) -> LengthWeights {
        self.weights
    }

    pub fn reduction(&self) -> Reduction {
        self.reduction
    }

    /// Inclusive length range covered by bucket `l`.
    pub fn bucket_range(&self, l: usize) -> (usize, usize) {
        bucket_range(l, self.bucket_size)
    }

    /// Cell for the first `prefix` slots (1-based) in bucket `l`; `None` when
    /// unreachable or out of range.
    pub fn cell(&self, prefix: usize, l: usize) -> Option<&DpCell> {
        if prefix == 0 || prefix > self.slots || l > self.buckets {
            return None;
        }
        self.cells[(prefix - 1) * (self.buckets + 1) + l].as_ref()
    }

    /// Final-column cell for bucket `l`.
    pub fn last(&self, l: usize) -> Option<&DpCell> {
        self.cell(self.slots, l)
    }

    /// Follows backpointers from `(prefix, l)` to recover the token path.
    pub fn reconstruct(&self, prefix: usize, l: usize) -> Option<TokenPath> {
        self.cell(prefix, l)?;
        let mut path = vec![0; prefix];
        let mut bucket = l;
        for s in (1..=prefix).rev() {
            let c = self.cell(s, bucket).expect("backpointer leads to a reachable cell");
            path[s - 1] = c.last_token;
            match c.prev_bucket {
                Some(b) => bucket = b,
                None => debug_assert_eq!(s, 1),
            }
        }
        Some(TokenPath(path))
    }
}

pub fn bucket_range(l: usize, bucket_size: usize) -> (usize, usize) {
    if l == 0 {
        (0, 0)
    } else {
        (bucket_size * (l - 1) + 1, bucket_size * l)
    }
}
