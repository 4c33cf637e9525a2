//! Elastic text matching.
//!
//! A text is a sequence of tokens whose timestamps are simply the 0-based
//! word positions. The matching kernel runs the same dynamic program as the
//! series inner product with a token-equality source term: matching token
//! pairs contribute their weight (1, or the first token's inverse document
//! frequency) decayed by `exp(-nu * |i - j|)` in the position gap. At
//! `nu = 0` the kernel collapses to the bag-of-words product, so ranking by
//! elastic cosine generalizes the classical vector-model cosine while being
//! sensitive to word order for `nu > 0`.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::tep::{run_dp, DpWeights};

/// A tokenized document; position of token `i` is `i` itself.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TokenSeries {
    tokens: Vec<String>,
}

impl TokenSeries {
    pub fn new(tokens: Vec<String>) -> Self {
        TokenSeries { tokens }
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Term frequencies of this document.
    pub fn term_frequencies(&self) -> HashMap<&str, usize> {
        let mut tf: HashMap<&str, usize> = HashMap::new();
        for t in &self.tokens {
            *tf.entry(t.as_str()).or_default() += 1;
        }
        tf
    }
}

/// Lowercases and splits on anything that is not alphanumeric; empty tokens
/// are dropped. Deterministic.
pub fn tokenize(text: &str) -> TokenSeries {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in text.chars() {
        if ch.is_alphanumeric() {
            current.extend(ch.to_lowercase());
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    TokenSeries::new(tokens)
}

/// Inverse document frequencies of a corpus: `idf(t) = ln(N / df(t))`.
#[derive(Clone, Debug, Default)]
pub struct IdfTable {
    weights: HashMap<String, f64>,
    doc_count: usize,
}

impl IdfTable {
    pub fn doc_count(&self) -> usize {
        self.doc_count
    }

    /// Weight of a token; unseen tokens get the document-frequency floor of
    /// 1, i.e. `ln(N)`. An empty corpus weighs everything 0.
    pub fn weight(&self, token: &str) -> f64 {
        if self.doc_count == 0 {
            return 0.0;
        }
        match self.weights.get(token) {
            Some(&w) => w,
            None => (self.doc_count as f64).ln(),
        }
    }
}

/// Builds the IDF table of a corpus.
pub fn idf(corpus: &[TokenSeries]) -> IdfTable {
    let n = corpus.len();
    let mut df: HashMap<String, usize> = HashMap::new();
    for doc in corpus {
        let distinct: HashSet<&str> = doc.tokens().iter().map(String::as_str).collect();
        for token in distinct {
            *df.entry(token.to_owned()).or_default() += 1;
        }
    }
    let weights = df
        .into_iter()
        .map(|(token, df)| (token, (n as f64 / df as f64).ln()))
        .collect();
    IdfTable {
        weights,
        doc_count: n,
    }
}

/// Token-pair weighting for [`teip_tm`] and [`rank`].
#[derive(Clone, Copy, Debug)]
pub enum Weighting<'a> {
    /// Every matching pair counts 1.
    Binary,
    /// A matching pair counts the token's inverse document frequency.
    Idf(&'a IdfTable),
}

impl Weighting<'_> {
    fn weight(&self, token: &str) -> f64 {
        match self {
            Weighting::Binary => 1.0,
            Weighting::Idf(table) => table.weight(token),
        }
    }
}

/// The elastic text-matching kernel.
///
/// Empty inputs are allowed and score 0. At `nu = 0` with binary weights the
/// value is the exact integer `sum_t tf_A(t) * tf_B(t)`.
pub fn teip_tm(a: &TokenSeries, b: &TokenSeries, nu: f64, weighting: &Weighting) -> f64 {
    let weights = DpWeights {
        scale: 1.0,
        side: 1.0,
        diag: -1.0,
        xi: 0.0,
    };
    // roll over the shorter side, as for series
    let (rows, cols) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let (rt, ct) = (rows.tokens(), cols.tokens());
    run_dp(rt.len(), ct.len(), &weights, |i, j| {
        if rt[i] == ct[j] {
            let gap = i.abs_diff(j) as f64;
            let g = if nu == 0.0 { 1.0 } else { (-nu * gap).exp() };
            weighting.weight(&rt[i]) * g
        } else {
            0.0
        }
    })
}

/// Ranks a corpus against a query by elastic cosine.
///
/// Returns `(document index, score)` pairs, best first, ties broken by
/// ascending index. Documents with a non-positive self-kernel (empty ones,
/// or all-zero weights) score 0. Scores lie in `[0, 1]` for non-negative
/// weights.
pub fn rank(
    query: &TokenSeries,
    corpus: &[TokenSeries],
    nu: f64,
    weighting: &Weighting,
) -> Result<Vec<(usize, f64)>> {
    if query.is_empty() {
        return Err(Error::EmptySeries);
    }
    let query_self = teip_tm(query, query, nu, weighting);
    let scores: Vec<f64> = corpus
        .par_iter()
        .map(|doc| {
            let doc_self = teip_tm(doc, doc, nu, weighting);
            if query_self <= 0.0 || doc_self <= 0.0 {
                0.0
            } else {
                teip_tm(query, doc, nu, weighting) / (query_self.sqrt() * doc_self.sqrt())
            }
        })
        .collect();
    let mut ranking: Vec<(usize, f64)> = scores.into_iter().enumerate().collect();
    ranking.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    Ok(ranking)
}
