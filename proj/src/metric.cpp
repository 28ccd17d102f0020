#include "lexichron/metric.hpp"

#include "lexichron/csv.hpp"
#include "lexichron/error.hpp"
#include "lexichron/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lexichron {

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
    if (a.size() < b.size())
        std::swap(a, b);
    // b is the shorter string; one rolling row of |b|+1 entries.
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j)
        row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t saved = row[j];
            if (a[i - 1] == b[j - 1])
                row[j] = diag;
            else
                row[j] = 1 + std::min({row[j], row[j - 1], diag});
            diag = saved;
        }
    }
    return row[b.size()];
}

double nld(std::u32string_view a, std::u32string_view b) {
    const std::size_t longer = std::max(a.size(), b.size());
    if (longer == 0)
        raise(ErrKind::UndefinedDistance, "NLD of two empty sequences");
    return static_cast<double>(levenshtein(a, b)) / static_cast<double>(longer);
}

double word_similarity(const std::vector<WordForm>& a,
                       const std::vector<WordForm>& b,
                       const SimilarityScorer& scorer) {
    if (a.empty() || b.empty())
        raise(ErrKind::MissingSlot, "word_similarity on an empty slot");

    if (scorer.mode == ScorerMode::BinaryCognacy) {
        for (const auto& fa : a)
            if (!fa.cognate_class)
                raise(ErrKind::ScorerError,
                      "binary scorer: form '" + fa.raw + "' has no cognate_class");
        for (const auto& fb : b)
            if (!fb.cognate_class)
                raise(ErrKind::ScorerError,
                      "binary scorer: form '" + fb.raw + "' has no cognate_class");
        for (const auto& fa : a)
            for (const auto& fb : b)
                if (*fa.cognate_class == *fb.cognate_class)
                    return 1.0;
        return 0.0;
    }

    // Synonyms: the most charitable pairing wins.
    double best = 0.0;
    for (const auto& fa : a)
        for (const auto& fb : b)
            best = std::max(best, 1.0 - nld(fa.normalized, fb.normalized));
    return best;
}

PairOverlap language_overlap(const LexicalDatabase& db, std::size_t a,
                             std::size_t b, const SimilarityScorer& scorer) {
    double sum = 0.0;
    std::size_t support = 0;
    for (std::size_t i = 0; i < db.item_count(); ++i) {
        const auto& slot_a = db.slot(a, i);
        const auto& slot_b = db.slot(b, i);
        if (slot_a.empty() || slot_b.empty())
            continue;
        sum += word_similarity(slot_a, slot_b, scorer);
        ++support;
    }
    if (support == 0)
        raise(ErrKind::NoComparableItems,
              "languages '" + db.language(a).label + "' and '" +
                  db.language(b).label + "' share no attested items");
    return {sum / static_cast<double>(support), support};
}

OverlapMatrix::OverlapMatrix(std::vector<std::string> labels)
    : labels_(std::move(labels)),
      values_(labels_.size() * labels_.size(),
              std::numeric_limits<double>::quiet_NaN()),
      support_(labels_.size() * labels_.size(), 0) {}

void OverlapMatrix::set(std::size_t i, std::size_t j, double value,
                        std::size_t support) {
    values_[i * size() + j] = value;
    values_[j * size() + i] = value;
    support_[i * size() + j] = support;
    support_[j * size() + i] = support;
}

OverlapMatrix overlap_matrix(const LexicalDatabase& db,
                             const SimilarityScorer& scorer,
                             std::size_t threads) {
    const std::size_t n = db.language_count();
    if (n < 2)
        raise(ErrKind::ConfigError, "overlap matrix needs at least 2 languages");

    std::vector<std::string> labels;
    labels.reserve(n);
    for (const auto& lang : db.languages())
        labels.push_back(lang.label);
    OverlapMatrix matrix(std::move(labels));

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(n * (n + 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            pairs.emplace_back(i, j);

    parallel_for(pairs.size(), threads, [&](std::size_t k) {
        auto [i, j] = pairs[k];
        try {
            PairOverlap p = language_overlap(db, i, j, scorer);
            matrix.set(i, j, p.overlap, p.support);
        } catch (const Error& e) {
            if (e.kind() != ErrKind::NoComparableItems)
                throw;
            // flagged undefined: support stays 0, value stays NaN
        }
    });
    return matrix;
}

std::string overlap_values_csv(const OverlapMatrix& m) {
    return matrix_csv("overlap-matrix-v1 language,<one column per language>; "
                      "values in [0,1]; NA=no comparable items",
                      m.labels(), m.values());
}

std::string overlap_support_csv(const OverlapMatrix& m) {
    return matrix_csv("overlap-support-v1 language,<one column per language>; "
                      "items compared per pair",
                      m.labels(), m.supports());
}

} // namespace lexichron
