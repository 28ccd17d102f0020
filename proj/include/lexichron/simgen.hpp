#pragma once

#include "lexichron/wordlist.hpp"

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace lexichron {

// Rooted tree with branch lengths in millennia. Node 0 is the root;
// every other node's parent precedes it, so traversal order is parent
// first. The leaf-to-leaf path length realizes the pair's time distance.
class FamilyTree {
  public:
    struct Node {
        std::string label;
        std::ptrdiff_t parent = -1; // -1 only for the root
        double branch_length = 0.0; // edge to the parent
        std::set<std::string> tags;
    };

    std::size_t add_root(std::string label);
    std::size_t add_child(std::size_t parent, std::string label,
                          double branch_length, std::set<std::string> tags = {});

    std::size_t size() const { return nodes_.size(); }
    const Node& node(std::size_t i) const { return nodes_[i]; }
    const std::vector<Node>& nodes() const { return nodes_; }

    std::vector<std::size_t> leaves() const;
    double depth(std::size_t i) const;               // root -> node
    double path_length(std::size_t a, std::size_t b) const;

    void validate() const;

    // N leaves hanging directly off the root at the given depth.
    static FamilyTree star(std::size_t leaf_count, double depth,
                           const std::string& leaf_prefix = "L");

    // Two sub-families: the root splits at `split_depth`, leaves sit at
    // `total_depth`. Leaves carry their clade label as a tag.
    static FamilyTree two_clades(std::size_t leaves_per_clade, double split_depth,
                                 double total_depth,
                                 const std::string& tag_a = "cladeA",
                                 const std::string& tag_b = "cladeB");

  private:
    std::vector<Node> nodes_;
};

struct SimConfig {
    std::size_t item_count = 110;
    // Explicit per-item rates win over the Gamma draw when non-empty.
    std::vector<double> explicit_rates;
    double gamma_shape = 7.0;
    double gamma_scale = 0.076;
    std::size_t alphabet_size = 26;
    std::size_t min_word_length = 5;
    std::size_t max_word_length = 8;
    double mutation_rate = 0.0; // per-scalar per-millennium substitutions
    std::uint64_t seed = 0;
    bool emit_proto = true;
    std::string proto_label = "proto";
    std::string family_name = "simulated";

    void validate() const;
};

// M random words, lengths uniform in [min, max]; deterministic per seed.
std::vector<std::u32string> random_proto(const SimConfig& config);

// The per-item rates the simulation will use: the explicit list, or a
// Gamma(shape, scale) draw from per-item streams.
std::vector<double> draw_rates(const SimConfig& config);

// Evolves the proto lexicon down the tree. Along a branch of length t,
// item i's word is replaced with probability 1 - exp(-rate_i * t); a
// replacement is a fresh random word. Every (branch, item) pair owns a
// derived random stream, so the result is independent of the traversal
// or thread order. Leaves become modern languages; the root is emitted
// as a proto-role language when configured.
LexicalDatabase simulate_family(const std::vector<std::u32string>& proto,
                                const FamilyTree& tree, std::span<const double> rates,
                                const SimConfig& config);

// The simulator's true forward model: mean of
// exp(-r_i t) + (1 - exp(-r_i t)) * residual, where `residual` is the
// chance similarity of two unrelated random words.
double expected_overlap(std::span<const double> rates, double t, double residual);

std::string item_id_for(std::size_t index, std::size_t item_count);

std::string truth_rates_csv(std::span<const double> rates);
std::string truth_times_csv(const FamilyTree& tree);

} // namespace lexichron
