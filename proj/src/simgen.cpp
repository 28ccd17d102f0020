#include "lexichron/simgen.hpp"

#include "lexichron/csv.hpp"
#include "lexichron/error.hpp"
#include "lexichron/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lexichron {

namespace {

constexpr std::uint64_t kProtoDomain = 0x70726F74;  // proto lexicon streams
constexpr std::uint64_t kRateDomain = 0x72617465;   // rate draw streams
constexpr std::uint64_t kEvolveDomain = 0x65766F6C; // per-(branch, item) streams

// Letter alphabet: 'a'..'z', then Cyrillic а.. for larger alphabets.
// Both ranges are lowercase and NFC-stable, so normalization is identity.
char32_t letter(std::size_t index) {
    if (index < 26)
        return U'a' + static_cast<char32_t>(index);
    return static_cast<char32_t>(0x0430 + (index - 26));
}

std::u32string random_word(SplitMix64& rng, const SimConfig& config) {
    std::size_t span = config.max_word_length - config.min_word_length + 1;
    std::size_t length = config.min_word_length + rng.next_below(span);
    std::u32string word;
    word.reserve(length);
    for (std::size_t i = 0; i < length; ++i)
        word.push_back(letter(rng.next_below(config.alphabet_size)));
    return word;
}

double standard_normal(SplitMix64& rng) {
    double u = 1.0 - rng.next_double(); // (0, 1]
    double v = rng.next_double();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
}

// Marsaglia-Tsang; shapes below 1 via the boost: gamma(a+1) * U^(1/a).
double gamma_draw(SplitMix64& rng, double shape, double scale) {
    if (shape < 1.0) {
        double u = 1.0 - rng.next_double();
        return gamma_draw(rng, shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        double x = standard_normal(rng);
        double t = 1.0 + c * x;
        if (t <= 0.0)
            continue;
        double v = t * t * t;
        double u = 1.0 - rng.next_double();
        if (u < 1.0 - 0.0331 * x * x * x * x)
            return d * v * scale;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
            return d * v * scale;
    }
}

} // namespace

std::size_t FamilyTree::add_root(std::string label) {
    if (!nodes_.empty())
        raise(ErrKind::ConfigError, "tree already has a root");
    nodes_.push_back({std::move(label), -1, 0.0, {}});
    return 0;
}

std::size_t FamilyTree::add_child(std::size_t parent, std::string label,
                                  double branch_length, std::set<std::string> tags) {
    if (parent >= nodes_.size())
        raise(ErrKind::ConfigError, "tree parent index out of range");
    if (!(branch_length >= 0.0) || !std::isfinite(branch_length))
        raise(ErrKind::ConfigError, "branch length must be finite and >= 0");
    nodes_.push_back({std::move(label), static_cast<std::ptrdiff_t>(parent),
                      branch_length, std::move(tags)});
    return nodes_.size() - 1;
}

std::vector<std::size_t> FamilyTree::leaves() const {
    std::vector<char> has_child(nodes_.size(), 0);
    for (const auto& node : nodes_)
        if (node.parent >= 0)
            has_child[static_cast<std::size_t>(node.parent)] = 1;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (!has_child[i])
            out.push_back(i);
    return out;
}

double FamilyTree::depth(std::size_t i) const {
    double d = 0.0;
    while (nodes_[i].parent >= 0) {
        d += nodes_[i].branch_length;
        i = static_cast<std::size_t>(nodes_[i].parent);
    }
    return d;
}

double FamilyTree::path_length(std::size_t a, std::size_t b) const {
    // Walk both to the root, then strip the shared tail.
    auto chain = [&](std::size_t n) {
        std::vector<std::size_t> path{n};
        while (nodes_[n].parent >= 0) {
            n = static_cast<std::size_t>(nodes_[n].parent);
            path.push_back(n);
        }
        return path;
    };
    auto pa = chain(a);
    auto pb = chain(b);
    while (pa.size() > 1 && pb.size() > 1 &&
           pa[pa.size() - 2] == pb[pb.size() - 2]) {
        pa.pop_back();
        pb.pop_back();
    }
    double d = 0.0;
    for (std::size_t i = 0; i + 1 < pa.size(); ++i)
        d += nodes_[pa[i]].branch_length;
    for (std::size_t i = 0; i + 1 < pb.size(); ++i)
        d += nodes_[pb[i]].branch_length;
    return d;
}

void FamilyTree::validate() const {
    if (nodes_.empty())
        raise(ErrKind::ConfigError, "tree is empty");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& node = nodes_[i];
        if (i == 0) {
            if (node.parent != -1)
                raise(ErrKind::ConfigError, "node 0 must be the root");
            continue;
        }
        if (node.parent < 0)
            raise(ErrKind::ConfigError, "tree has more than one root");
        if (static_cast<std::size_t>(node.parent) >= i)
            raise(ErrKind::ConfigError, "tree nodes must follow their parent");
        if (!(node.branch_length >= 0.0) || !std::isfinite(node.branch_length))
            raise(ErrKind::ConfigError, "branch length must be finite and >= 0");
    }
}

namespace {

std::string padded(std::size_t value, std::size_t width) {
    std::string s = std::to_string(value);
    while (s.size() < width)
        s.insert(s.begin(), '0');
    return s;
}

} // namespace

FamilyTree FamilyTree::star(std::size_t leaf_count, double depth,
                            const std::string& leaf_prefix) {
    FamilyTree tree;
    tree.add_root("root");
    std::size_t width = std::max<std::size_t>(2, std::to_string(leaf_count).size());
    for (std::size_t i = 0; i < leaf_count; ++i)
        tree.add_child(0, leaf_prefix + padded(i + 1, width), depth);
    return tree;
}

FamilyTree FamilyTree::two_clades(std::size_t leaves_per_clade, double split_depth,
                                  double total_depth, const std::string& tag_a,
                                  const std::string& tag_b) {
    if (split_depth < 0.0 || split_depth > total_depth)
        raise(ErrKind::ConfigError, "split depth must lie in [0, total depth]");
    FamilyTree tree;
    tree.add_root("root");
    std::size_t a = tree.add_child(0, "anc-" + tag_a, split_depth);
    std::size_t b = tree.add_child(0, "anc-" + tag_b, split_depth);
    double leaf_len = total_depth - split_depth;
    std::size_t width = std::max<std::size_t>(2, std::to_string(leaves_per_clade).size());
    for (std::size_t i = 0; i < leaves_per_clade; ++i)
        tree.add_child(a, tag_a + "-" + padded(i + 1, width), leaf_len, {tag_a});
    for (std::size_t i = 0; i < leaves_per_clade; ++i)
        tree.add_child(b, tag_b + "-" + padded(i + 1, width), leaf_len, {tag_b});
    return tree;
}

void SimConfig::validate() const {
    if (alphabet_size < 2)
        raise(ErrKind::ConfigError, "alphabet size must be >= 2");
    if (alphabet_size > 58)
        raise(ErrKind::ConfigError, "alphabet size above 58 is not supported");
    if (min_word_length == 0 || min_word_length > max_word_length)
        raise(ErrKind::ConfigError, "need 0 < min word length <= max word length");
    if (!explicit_rates.empty() && explicit_rates.size() != item_count)
        raise(ErrKind::ConfigError,
              "explicit rates count " + std::to_string(explicit_rates.size()) +
                  " does not match item count " + std::to_string(item_count));
    for (double r : explicit_rates)
        if (!(r >= 0.0) || !std::isfinite(r))
            raise(ErrKind::ConfigError, "rates must be finite and >= 0");
    if (explicit_rates.empty() && (!(gamma_shape > 0.0) || !(gamma_scale > 0.0)))
        raise(ErrKind::ConfigError, "gamma shape and scale must be positive");
    if (!(mutation_rate >= 0.0))
        raise(ErrKind::ConfigError, "mutation rate must be >= 0");
}

std::vector<std::u32string> random_proto(const SimConfig& config) {
    config.validate();
    std::vector<std::u32string> lexicon;
    lexicon.reserve(config.item_count);
    for (std::size_t i = 0; i < config.item_count; ++i) {
        SplitMix64 rng = derive_stream(config.seed, kProtoDomain, i);
        lexicon.push_back(random_word(rng, config));
    }
    return lexicon;
}

std::vector<double> draw_rates(const SimConfig& config) {
    config.validate();
    if (!config.explicit_rates.empty())
        return config.explicit_rates;
    std::vector<double> rates;
    rates.reserve(config.item_count);
    for (std::size_t i = 0; i < config.item_count; ++i) {
        SplitMix64 rng = derive_stream(config.seed, kRateDomain, i);
        rates.push_back(gamma_draw(rng, config.gamma_shape, config.gamma_scale));
    }
    return rates;
}

std::string item_id_for(std::size_t index, std::size_t item_count) {
    std::size_t width = std::max<std::size_t>(3, std::to_string(item_count).size());
    return "i" + padded(index + 1, width);
}

LexicalDatabase simulate_family(const std::vector<std::u32string>& proto,
                                const FamilyTree& tree, std::span<const double> rates,
                                const SimConfig& config) {
    config.validate();
    tree.validate();
    const std::size_t m = config.item_count;
    if (proto.size() != m)
        raise(ErrKind::ConfigError, "proto lexicon size does not match item count");
    if (rates.size() != m)
        raise(ErrKind::ConfigError, "rates size does not match item count");

    std::vector<std::vector<std::u32string>> lexicon(tree.size());
    lexicon[0] = proto;
    for (std::size_t n = 1; n < tree.size(); ++n) {
        const auto& node = tree.node(n);
        const auto& parent = lexicon[static_cast<std::size_t>(node.parent)];
        lexicon[n].resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            SplitMix64 rng = derive_stream(config.seed, kEvolveDomain, n, i);
            double p_replace = -std::expm1(-rates[i] * node.branch_length);
            if (rng.next_double() < p_replace) {
                lexicon[n][i] = random_word(rng, config);
                continue;
            }
            std::u32string word = parent[i];
            if (config.mutation_rate > 0.0) {
                double p_edit = -std::expm1(-config.mutation_rate * node.branch_length);
                for (auto& cp : word)
                    if (rng.next_double() < p_edit)
                        cp = letter(rng.next_below(config.alphabet_size));
            }
            lexicon[n][i] = std::move(word);
        }
    }

    LexicalDatabase db;
    db.set_family_name(config.family_name);
    for (std::size_t i = 0; i < m; ++i)
        db.add_item({item_id_for(i, m), item_id_for(i, m)});

    const auto add_lexicon = [&](std::size_t lang_idx,
                                 const std::vector<std::u32string>& words) {
        for (std::size_t i = 0; i < m; ++i)
            db.add_form(lang_idx, i, WordForm::from_raw(encode_utf8(words[i])));
    };

    if (config.emit_proto) {
        std::size_t idx =
            db.add_language({config.proto_label, LanguageRole::Proto, {}});
        add_lexicon(idx, lexicon[0]);
    }
    for (std::size_t leaf : tree.leaves()) {
        if (leaf == 0)
            continue; // a single-node tree has no modern languages
        const auto& node = tree.node(leaf);
        std::size_t idx =
            db.add_language({node.label, LanguageRole::Modern, node.tags});
        add_lexicon(idx, lexicon[leaf]);
    }
    return db;
}

double expected_overlap(std::span<const double> rates, double t, double residual) {
    if (!(residual >= 0.0) || residual >= 1.0)
        raise(ErrKind::ParameterError, "residual must lie in [0, 1)");
    if (t < 0.0)
        raise(ErrKind::ParameterError, "time must be non-negative");
    if (rates.empty())
        raise(ErrKind::ParameterError, "rates must be non-empty");
    double sum = 0.0;
    for (double r : rates) {
        double survive = std::exp(-r * t);
        sum += survive + (1.0 - survive) * residual;
    }
    return sum / static_cast<double>(rates.size());
}

std::string truth_rates_csv(std::span<const double> rates) {
    std::ostringstream out;
    out << "# schema: truth-rates-v1 item_id,true_rate; "
           "replacements/millennium\n";
    out << "item_id,true_rate\n";
    for (std::size_t i = 0; i < rates.size(); ++i)
        out << item_id_for(i, rates.size()) << ',' << fmt_double(rates[i]) << '\n';
    return out.str();
}

std::string truth_times_csv(const FamilyTree& tree) {
    std::ostringstream out;
    out << "# schema: truth-times-v1 leaf_a,leaf_b,true_t; millennia\n";
    out << "leaf_a,leaf_b,true_t\n";
    auto leaves = tree.leaves();
    for (std::size_t i = 0; i < leaves.size(); ++i)
        for (std::size_t j = i + 1; j < leaves.size(); ++j)
            out << tree.node(leaves[i]).label << ',' << tree.node(leaves[j]).label
                << ',' << fmt_double(tree.path_length(leaves[i], leaves[j])) << '\n';
    return out.str();
}

} // namespace lexichron
