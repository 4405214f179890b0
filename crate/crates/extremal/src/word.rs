//! Left-normed bracket words over the vertex set. The word x.y.z denotes
//! [x,[y,z]]; letters are stored outermost first.

use crate::graph::{SimpleGraph, WeightVec};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonomialWord(pub Vec<usize>);

impl MonomialWord {
    pub fn letter(v: usize) -> Self {
        MonomialWord(vec![v])
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self, n: usize) -> WeightVec {
        let mut w = WeightVec::zero(n);
        for &l in &self.0 {
            w.0[l] += 1;
        }
        w
    }

    /// The outermost letter; words are nonempty by construction.
    pub fn head(&self) -> usize {
        self.0[0]
    }

    pub fn tail(&self) -> MonomialWord {
        MonomialWord(self.0[1..].to_vec())
    }

    /// The word z.w for a letter z bracketed onto this word.
    pub fn prepend(&self, z: usize) -> MonomialWord {
        let mut letters = Vec::with_capacity(self.0.len() + 1);
        letters.push(z);
        letters.extend_from_slice(&self.0);
        MonomialWord(letters)
    }

    pub fn display(&self, g: &SimpleGraph) -> String {
        self.0
            .iter()
            .map(|&l| g.label(l).to_string())
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Inverse of `display`: "x.y.z" with labels from the graph.
    pub fn parse(g: &SimpleGraph, text: &str) -> Option<MonomialWord> {
        let letters: Option<Vec<usize>> = text.split('.').map(|l| g.index_of(l.trim())).collect();
        let letters = letters?;
        if letters.is_empty() {
            None
        } else {
            Some(MonomialWord(letters))
        }
    }
}
