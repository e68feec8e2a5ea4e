use std::hash::Hasher;

use fnv::FnvHasher;

use super::Vector;

pub const DEFAULT_DIM: usize = 256;
pub const DEFAULT_NGRAM: usize = 3;

/// Lowercase, every non-alphanumeric run becomes one space, then trimmed.
fn normalize(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut pending_space = false;
    for c in text.chars() {
        if c.is_alphanumeric() {
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            out.extend(c.to_lowercase());
        } else {
            pending_space = true;
        }
    }
    out
}

/// Character n-grams of the normalized text padded with one space on each
/// side, so short words still produce grams and word edges are marked.
pub(crate) fn char_ngrams(text: &str, n: usize) -> Vec<String> {
    let norm = normalize(text);
    if norm.is_empty() {
        return Vec::new();
    }
    let padded: Vec<char> = format!(" {norm} ").chars().collect();
    if padded.len() <= n {
        return vec![padded.iter().collect()];
    }
    padded.windows(n).map(|w| w.iter().collect()).collect()
}

/// Feature-hashed character n-gram embedding, L2-normalized. The low bits of
/// the FNV-1a hash pick the bucket and the top bit picks the sign. Texts with
/// no alphanumeric characters map to the zero vector.
pub fn embed_hashed(text: &str, dim: usize, n: usize) -> Vector {
    let dim = dim.max(1);
    let mut v = vec![0.0f64; dim];
    for gram in char_ngrams(text, n.max(1)) {
        let mut h = FnvHasher::default();
        h.write(gram.as_bytes());
        let h = h.finish();
        let sign = if h >> 63 == 1 { -1.0 } else { 1.0 };
        v[(h % dim as u64) as usize] += sign;
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    Vector(v)
}

#[cfg(test)]
mod tests {
    use super::super::cosine;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn unit_norm_and_deterministic() {
        let a = embed_hashed("Landing gear collapsed", 256, 3);
        assert!((a.norm() - 1.0).abs() < 1e-9);
        assert_eq!(a, embed_hashed("Landing gear collapsed", 256, 3));
    }

    #[test]
    fn empty_text_is_zero_vector() {
        let z = embed_hashed(" -- ", 64, 3);
        assert_eq!(z.dim(), 64);
        assert_eq!(z.norm(), 0.0);
    }

    #[test]
    fn short_words_still_embed() {
        assert!((embed_hashed("A1", 64, 3).norm() - 1.0).abs() < 1e-9);
        assert!((embed_hashed("x", 64, 3).norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn normalization_ignores_case_and_punctuation() {
        assert_eq!(embed_hashed("Dragged wing/rotor", 128, 3), embed_hashed("dragged  WING rotor", 128, 3));
    }

    #[test]
    fn related_phrase_scores_higher() {
        let base = embed_hashed("landing gear", 256, 3);
        let near = cosine(&base, &embed_hashed("landing gear collapsed", 256, 3)).unwrap();
        let far = cosine(&base, &embed_hashed("fuel exhaustion", 256, 3)).unwrap();
        assert!(near > far, "{near} vs {far}");
        // cross-checked against an independent FNV-1a script
        assert!((near - 0.710_046_946_804_693).abs() < 1e-12, "near = {near}");
        assert!(far.abs() < 1e-12, "far = {far}");
    }

    proptest! {
        #[test]
        fn depends_only_on_ngram_multiset(words in proptest::collection::vec("[a-z]{1,6}", 1..5)) {
            // summing the grams in reverse order must give the same vector
            let text = words.join(" ");
            let mut grams = char_ngrams(&text, 3);
            grams.reverse();
            let mut v = vec![0.0f64; 64];
            for g in &grams {
                let mut h = FnvHasher::default();
                h.write(g.as_bytes());
                let h = h.finish();
                v[(h % 64) as usize] += if h >> 63 == 1 { -1.0 } else { 1.0 };
            }
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let direct = embed_hashed(&text, 64, 3);
            for (a, b) in v.iter().zip(direct.as_slice()) {
                let expected = if n > 0.0 { a / n } else { 0.0 };
                prop_assert!((expected - b).abs() < 1e-12);
            }
        }
    }
}
