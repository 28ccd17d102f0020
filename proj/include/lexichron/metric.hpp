#pragma once

#include "lexichron/wordlist.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace lexichron {

enum class ScorerMode { Nld, BinaryCognacy };

struct SimilarityScorer {
    ScorerMode mode = ScorerMode::Nld;
};

// Edit distance over Unicode scalar values (insert / delete / substitute,
// unit costs). Symmetric, satisfies the triangle inequality.
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

// levenshtein(a, b) / max(|a|, |b|), in [0, 1]; 0 iff a == b. Both inputs
// empty raises ErrKind::UndefinedDistance.
double nld(std::u32string_view a, std::u32string_view b);

// Similarity of two slots in [0, 1]. NLD mode: max over the synonym cross
// product of 1 - nld. Binary mode: 1 iff some cross pair shares a
// cognate_class (every compared form must carry one).
double word_similarity(const std::vector<WordForm>& a,
                       const std::vector<WordForm>& b,
                       const SimilarityScorer& scorer);

struct PairOverlap {
    double overlap;      // mean similarity over mutually attested items
    std::size_t support; // number of items compared
};

// Raises ErrKind::NoComparableItems when no item is attested in both.
PairOverlap language_overlap(const LexicalDatabase& db, std::size_t a,
                             std::size_t b, const SimilarityScorer& scorer);

class OverlapMatrix {
  public:
    OverlapMatrix(std::vector<std::string> labels);

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }

    double value(std::size_t i, std::size_t j) const { return values_[i * size() + j]; }
    std::size_t support(std::size_t i, std::size_t j) const {
        return support_[i * size() + j];
    }
    bool defined(std::size_t i, std::size_t j) const { return support(i, j) > 0; }

    void set(std::size_t i, std::size_t j, double value, std::size_t support);

    const std::vector<double>& values() const { return values_; }
    const std::vector<std::size_t>& supports() const { return support_; }

  private:
    std::vector<std::string> labels_;
    std::vector<double> values_;        // NaN where support == 0
    std::vector<std::size_t> support_;
};

// All pairwise overlaps. Pairs may be evaluated concurrently; each pair
// accumulates its item sum in ascending item order, so the result is
// bitwise identical for every thread count. Pairs with no comparable
// items are recorded as support 0 / NaN rather than raised.
OverlapMatrix overlap_matrix(const LexicalDatabase& db,
                             const SimilarityScorer& scorer,
                             std::size_t threads = 1);

std::string overlap_values_csv(const OverlapMatrix& m);
std::string overlap_support_csv(const OverlapMatrix& m);

} // namespace lexichron
