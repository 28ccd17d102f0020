// lexichron: lexicostatistics from Swadesh-style wordlists.
//
// Pipeline pieces are exposed as subcommands; `report` chains them and
// emits plot-ready CSV files. All outputs are written atomically and are
// byte identical across reruns and thread counts.

#include "lexichron/chrono.hpp"
#include "lexichron/csv.hpp"
#include "lexichron/error.hpp"
#include "lexichron/metric.hpp"
#include "lexichron/ranking.hpp"
#include "lexichron/simgen.hpp"
#include "lexichron/stability.hpp"
#include "lexichron/wordlist.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

using namespace lexichron;

namespace {

constexpr const char* kExitCodeHelp =
    "Exit codes:\n"
    "  0  success\n"
    "  1  usage error (bad flags, missing arguments, conflicting flags)\n"
    "  2  parse error (malformed input file or text encoding)\n"
    "  3  configuration error (bad parameters, filters, roles)\n"
    "  4  data-domain error (missing slots, no comparable items)\n"
    "  5  numeric error (divergence, degenerate fit, failed calibration)\n"
    "  6  I/O error\n"
    "  7  internal error\n";

struct CommonOpts {
    std::size_t threads = 1;
    std::string scorer = "nld";
    double tolerance = kDefaultTimeTolerance;

    SimilarityScorer make_scorer() const {
        if (scorer == "nld")
            return {ScorerMode::Nld};
        if (scorer == "binary")
            return {ScorerMode::BinaryCognacy};
        raise(ErrKind::UsageError, "unknown scorer '" + scorer + "'");
    }
};

LexicalDatabase load_with_sidecar(const std::string& path, const std::string& meta) {
    std::vector<std::string> warnings;
    std::optional<std::string> meta_path;
    if (!meta.empty())
        meta_path = meta;
    LexicalDatabase db = load_database(path, meta_path, &warnings);
    for (const auto& w : warnings)
        std::cerr << "warning: " << w << '\n';
    return db;
}

StabilityKind parse_kind(const std::string& kind) {
    if (kind == "actual")
        return StabilityKind::Actual;
    if (kind == "estimated")
        return StabilityKind::Estimated;
    raise(ErrKind::UsageError, "kind must be 'actual' or 'estimated'");
}

struct Anchor {
    std::string lang_a;
    std::string lang_b;
    double known_t = 0.0;
};

Anchor parse_anchor(const std::string& text) {
    auto eq = text.rfind('=');
    auto colon = text.find(':');
    if (eq == std::string::npos || colon == std::string::npos || colon > eq)
        raise(ErrKind::UsageError,
              "anchor must look like LANG1:LANG2=T, got '" + text + "'");
    Anchor anchor;
    anchor.lang_a = text.substr(0, colon);
    anchor.lang_b = text.substr(colon + 1, eq - colon - 1);
    try {
        anchor.known_t = std::stod(text.substr(eq + 1));
    } catch (const std::exception&) {
        raise(ErrKind::UsageError, "anchor time is not a number in '" + text + "'");
    }
    if (anchor.lang_a.empty() || anchor.lang_b.empty())
        raise(ErrKind::UsageError, "anchor languages must be non-empty");
    return anchor;
}

TimeMethod parse_method(const std::string& method) {
    if (method == "classic")
        return TimeMethod::Classic;
    if (method == "generalized")
        return TimeMethod::Generalized;
    if (method == "gamma")
        return TimeMethod::GammaClosedForm;
    raise(ErrKind::UsageError, "method must be classic, generalized or gamma");
}

std::string support_path_for(const std::string& out) {
    const std::string suffix = ".csv";
    if (out.size() > suffix.size() &&
        out.compare(out.size() - suffix.size(), suffix.size(), suffix) == 0)
        return out.substr(0, out.size() - suffix.size()) + ".support.csv";
    return out + ".support.csv";
}

void ensure_distinct_paths(std::initializer_list<std::string> inputs,
                           std::initializer_list<std::string> outputs) {
    namespace fs = std::filesystem;
    for (const auto& in : inputs) {
        if (in.empty())
            continue;
        for (const auto& out : outputs) {
            if (out.empty())
                continue;
            std::error_code ec;
            bool same = fs::weakly_canonical(in, ec) == fs::weakly_canonical(out, ec);
            if (same || in == out)
                raise(ErrKind::UsageError,
                      "input and output paths must differ: '" + in + "'");
        }
    }
}

// The rate profile restricted to items with defined rates, plus the
// matching database restriction so overlaps and the forward model stay on
// the same item set.
struct DefinedRates {
    LexicalDatabase db;
    RateProfile profile;
    std::size_t dropped = 0;
};

DefinedRates rates_on_defined_items(const LexicalDatabase& db,
                                    const StabilityTable& table,
                                    double time_constant) {
    RateProfile full = rates_from_stability(table, time_constant);
    std::set<std::string> keep;
    for (std::size_t i = 0; i < full.rates.size(); ++i)
        if (full.rates[i])
            keep.insert(full.item_ids[i]);
    if (keep.empty())
        raise(ErrKind::ProfileIncomplete, "no item has a defined replacement rate");

    DefinedRates out;
    out.dropped = full.rates.size() - keep.size();
    out.db = subset(db, all_languages(), keep);

    RateProfile restricted;
    restricted.kind = full.kind;
    restricted.time_constant = full.time_constant;
    for (std::size_t i = 0; i < full.rates.size(); ++i) {
        if (!full.rates[i])
            continue;
        restricted.item_ids.push_back(full.item_ids[i]);
        restricted.glosses.push_back(full.glosses[i]);
        restricted.rates.push_back(full.rates[i]);
        restricted.at_boundary.push_back(full.at_boundary[i]);
    }
    out.profile = std::move(restricted);
    return out;
}

std::vector<double> read_rates_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        raise(ErrKind::IoError, "cannot open rates file '" + path + "'");
    std::vector<double> rates;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        // one value per line, or the last field of a CSV row
        std::string field = line;
        if (auto comma = line.rfind(','); comma != std::string::npos)
            field = line.substr(comma + 1);
        try {
            rates.push_back(std::stod(field));
        } catch (const std::exception&) {
            if (rates.empty())
                continue; // header line
            raise(ErrKind::ParseError, "rates file line " + std::to_string(line_no) +
                                           ": '" + field + "' is not a number");
        }
    }
    if (rates.empty())
        raise(ErrKind::ParseError, "rates file '" + path + "' holds no values");
    return rates;
}

// ---------------------------------------------------------------------
// subcommand bodies

struct ValidateArgs {
    std::string db_path, meta_path;
};

int cmd_validate(const ValidateArgs& args) {
    LexicalDatabase db = load_with_sidecar(args.db_path, args.meta_path);
    std::size_t filled = 0, forms = 0;
    for (std::size_t l = 0; l < db.language_count(); ++l) {
        for (std::size_t i = 0; i < db.item_count(); ++i) {
            const auto& slot = db.slot(l, i);
            filled += !slot.empty();
            forms += slot.size();
        }
    }
    std::cout << "family: " << db.family_name() << '\n'
              << "languages: " << db.language_count() << " (modern "
              << db.modern_languages().size() << ", proto "
              << (db.proto_language() ? 1 : 0) << ")\n"
              << "items: " << db.item_count() << '\n'
              << "filled slots: " << filled << " of "
              << db.language_count() * db.item_count() << '\n'
              << "word forms: " << forms << '\n';
    return 0;
}

struct OverlapArgs {
    std::string db_path, meta_path, out;
    CommonOpts common;
};

int cmd_overlap(const OverlapArgs& args) {
    LexicalDatabase db = load_with_sidecar(args.db_path, args.meta_path);
    OverlapMatrix m =
        overlap_matrix(db, args.common.make_scorer(), args.common.threads);
    write_file_atomic(args.out, overlap_values_csv(m));
    write_file_atomic(support_path_for(args.out), overlap_support_csv(m));
    return 0;
}

struct StabilityArgs {
    std::string db_path, meta_path, out, kind = "estimated";
    CommonOpts common;
};

int cmd_stability(const StabilityArgs& args) {
    LexicalDatabase db = load_with_sidecar(args.db_path, args.meta_path);
    SimilarityScorer scorer = args.common.make_scorer();
    StabilityTable table = parse_kind(args.kind) == StabilityKind::Actual
                               ? actual_stability(db, scorer)
                               : estimated_stability(db, scorer, args.common.threads);
    write_file_atomic(args.out, stability_csv(table));
    return 0;
}

struct RatesArgs {
    std::string db_path, meta_path, out, kind = "estimated";
    double time_constant = 0.0;
    CommonOpts common;
};

int cmd_rates(const RatesArgs& args) {
    LexicalDatabase db = load_with_sidecar(args.db_path, args.meta_path);
    SimilarityScorer scorer = args.common.make_scorer();
    StabilityTable table = parse_kind(args.kind) == StabilityKind::Actual
                               ? actual_stability(db, scorer)
                               : estimated_stability(db, scorer, args.common.threads);
    write_file_atomic(args.out,
                      rates_csv(rates_from_stability(table, args.time_constant)));
    return 0;
}

struct FitLambdaArgs {
    std::string db_path, meta_path, out;
    double time_constant = kVulgarLatinDepth;
    double ts = -1.0; // defaults to time_constant
    CommonOpts common;
};

int cmd_fit_lambda(const FitLambdaArgs& args) {
    LexicalDatabase db = load_with_sidecar(args.db_path, args.meta_path);
    SimilarityScorer scorer = args.common.make_scorer();
    double ts = args.ts > 0.0 ? args.ts : args.time_constant;

    RateProfile actual =
        rates_from_stability(actual_stability(db, scorer), args.time_constant);
    RateProfile estimated = rates_from_stability(
        estimated_stability(db, scorer, args.common.threads), ts);
    LambdaFit fit = fit_lambda(actual, estimated);

    std::ostringstream csv;
    csv << "# schema: lambda-fit-v1 lambda,method,residual,items_used,"
           "items_dropped\n";
    csv << "lambda,method,residual,items_used,items_dropped\n";
    csv << fmt_double(fit.lambda) << ",regression-through-origin,"
        << fmt_double(fit.residual) << ',' << fit.items_used << ','
        << fit.items_dropped << '\n';
    write_file_atomic(args.out, csv.str());
    return 0;
}

struct ChronoArgs {
    std::string db_path, meta_path, out, kind = "estimated", method;
    double time_constant = -1.0; // kind-dependent default
    double lambda = -1.0;
    std::string anchor;
    CommonOpts common;
};

int cmd_chrono(const ChronoArgs& args) {
    LexicalDatabase db = load_with_sidecar(args.db_path, args.meta_path);
    SimilarityScorer scorer = args.common.make_scorer();
    TimeMethod method = parse_method(args.method);
    StabilityKind kind = parse_kind(args.kind);

    double time_constant = args.time_constant;
    if (time_constant <= 0.0) {
        if (kind == StabilityKind::Actual)
            raise(ErrKind::UsageError,
                  "--time-constant is required when --kind is 'actual'");
        time_constant = kVulgarLatinDepth; // nominal T_s; the scale is absorbed by lambda
    }

    StabilityTable table = kind == StabilityKind::Actual
                               ? actual_stability(db, scorer)
                               : estimated_stability(db, scorer, args.common.threads);
    DefinedRates defined = rates_on_defined_items(db, table, time_constant);
    if (defined.dropped > 0)
        std::cerr << "note: dropped " << defined.dropped
                  << " item(s) with undefined rates\n";

    double lambda = 1.0;
    if (!args.anchor.empty()) {
        Anchor anchor = parse_anchor(args.anchor);
        lambda = calibrate_lambda(defined.db, defined.profile,
                                  {anchor.lang_a, anchor.lang_b}, anchor.known_t,
                                  scorer);
        std::cerr << "note: calibrated lambda = " << fmt_double(lambda) << '\n';
    } else if (args.lambda > 0.0) {
        lambda = args.lambda;
    } else if (kind == StabilityKind::Estimated) {
        std::cerr << "note: no --lambda or --anchor given; times use lambda=1 "
                     "and are meaningful up to a global scale\n";
    }

    TimeDistanceMatrix m =
        time_matrix(defined.db, defined.profile, lambda, scorer, method,
                    args.common.threads, args.common.tolerance);
    for (auto [i, j] : m.clamped)
        std::cerr << "note: overlap above 1 clamped to time 0 for pair "
                  << m.labels()[i] << ":" << m.labels()[j] << '\n';
    write_file_atomic(args.out, time_matrix_csv(m));
    return 0;
}

struct RankingArgs {
    std::string db_path, meta_path, out, kind = "estimated";
    CommonOpts common;
};

int cmd_ranking(const RankingArgs& args) {
    LexicalDatabase db = load_with_sidecar(args.db_path, args.meta_path);
    SimilarityScorer scorer = args.common.make_scorer();
    StabilityTable table = parse_kind(args.kind) == StabilityKind::Actual
                               ? actual_stability(db, scorer)
                               : estimated_stability(db, scorer, args.common.threads);
    std::size_t dropped = 0;
    StabilityTable defined = drop_undefined(table, &dropped);
    if (dropped > 0)
        std::cerr << "note: dropped " << dropped
                  << " item(s) with undefined stability\n";
    write_file_atomic(args.out, ranking_csv(rank_items(defined)));
    return 0;
}

struct CompareArgs {
    std::string db_a, db_b, meta_a, meta_b, out;
    std::size_t band_trials = 0;
    std::uint64_t seed = 0;
    CommonOpts common;
};

int cmd_compare(const CompareArgs& args) {
    LexicalDatabase a = load_with_sidecar(args.db_a, args.meta_a);
    LexicalDatabase b = load_with_sidecar(args.db_b, args.meta_b);
    SimilarityScorer scorer = args.common.make_scorer();

    std::size_t dropped = 0;
    CommonCountCurve curve =
        compare_families(a, b, scorer, args.common.threads, &dropped);
    if (dropped > 0)
        std::cerr << "note: dropped " << dropped
                  << " common item(s) with undefined stability\n";
    if (args.band_trials > 0)
        curve.band = random_baseline_band(curve.item_count, args.band_trials,
                                          args.seed, args.common.threads);
    write_file_atomic(args.out, curve_csv(curve));
    return 0;
}

struct SimulateArgs {
    std::string out;
    std::size_t leaves = 60;
    double depth = 1.5;
    std::size_t items = 110;
    std::size_t alphabet = 26;
    std::size_t min_len = 5;
    std::size_t max_len = 8;
    std::uint64_t seed = 0;
    std::string gamma = "7.0:0.076";
    std::string rates_file;
    std::string topology = "star";
    double split_depth = -1.0;
    double mutation_rate = 0.0;
    bool no_proto = false;
    std::string family = "simulated";
};

int cmd_simulate(const SimulateArgs& args) {
    SimConfig config;
    config.item_count = args.items;
    config.alphabet_size = args.alphabet;
    config.min_word_length = args.min_len;
    config.max_word_length = args.max_len;
    config.seed = args.seed;
    config.mutation_rate = args.mutation_rate;
    config.emit_proto = !args.no_proto;
    config.family_name = args.family;

    if (!args.rates_file.empty()) {
        config.explicit_rates = read_rates_file(args.rates_file);
    } else {
        auto colon = args.gamma.find(':');
        if (colon == std::string::npos)
            raise(ErrKind::UsageError, "--gamma must look like SHAPE:SCALE");
        try {
            config.gamma_shape = std::stod(args.gamma.substr(0, colon));
            config.gamma_scale = std::stod(args.gamma.substr(colon + 1));
        } catch (const std::exception&) {
            raise(ErrKind::UsageError, "--gamma must hold two numbers");
        }
    }

    FamilyTree tree;
    if (args.topology == "star") {
        tree = FamilyTree::star(args.leaves, args.depth);
    } else if (args.topology == "two-clade") {
        double split = args.split_depth >= 0.0 ? args.split_depth : args.depth / 2.0;
        tree = FamilyTree::two_clades(args.leaves / 2, split, args.depth);
    } else {
        raise(ErrKind::UsageError, "topology must be 'star' or 'two-clade'");
    }

    auto proto = random_proto(config);
    auto rates = draw_rates(config);
    LexicalDatabase db = simulate_family(proto, tree, rates, config);

    std::ostringstream tsv, meta;
    serialize_database(db, tsv);
    serialize_metadata(db, meta);
    write_file_atomic(args.out, tsv.str());
    write_file_atomic(args.out + ".meta", meta.str());
    write_file_atomic(args.out + ".truth-rates.csv", truth_rates_csv(rates));
    write_file_atomic(args.out + ".truth-times.csv", truth_times_csv(tree));
    return 0;
}

struct ReportArgs {
    std::string db_path, meta_path, out_dir;
    double time_constant = kVulgarLatinDepth;
    double ts = -1.0;
    std::string method = "generalized";
    double lambda = -1.0;
    std::string anchor;
    std::string truth_prefix;
    std::string split;
    std::size_t band_trials = 1000;
    std::uint64_t seed = 0;
    CommonOpts common;
};

int cmd_report(const ReportArgs& args) {
    namespace fs = std::filesystem;
    LexicalDatabase db = load_with_sidecar(args.db_path, args.meta_path);
    if (!db.proto_language())
        raise(ErrKind::ConfigError,
              "report needs a proto-role language; use the stability/chrono "
              "subcommands for proto-less databases");
    SimilarityScorer scorer = args.common.make_scorer();
    double ts = args.ts > 0.0 ? args.ts : args.time_constant;

    std::error_code ec;
    fs::create_directories(args.out_dir, ec);
    if (ec)
        raise(ErrKind::IoError, "cannot create '" + args.out_dir + "'");
    const auto out = [&](const std::string& name) {
        return (fs::path(args.out_dir) / name).string();
    };

    OverlapMatrix overlaps = overlap_matrix(db, scorer, args.common.threads);
    write_file_atomic(out("overlap.csv"), overlap_values_csv(overlaps));
    write_file_atomic(out("overlap.support.csv"), overlap_support_csv(overlaps));

    StabilityTable r_table = actual_stability(db, scorer);
    StabilityTable s_table = estimated_stability(db, scorer, args.common.threads);
    write_file_atomic(out("stability_actual.csv"), stability_csv(r_table));
    write_file_atomic(out("stability_estimated.csv"), stability_csv(s_table));
    write_file_atomic(
        out("fig1_stability_scatter.csv"),
        scatter_csv("stability-scatter-v1 item_id,gloss,actual,estimated",
                    "actual", "estimated", r_table.item_ids, r_table.glosses,
                    r_table.values, s_table.values));

    RateProfile r_rates = rates_from_stability(r_table, args.time_constant);
    RateProfile s_rates = rates_from_stability(s_table, ts);
    write_file_atomic(out("rates_actual.csv"), rates_csv(r_rates));
    write_file_atomic(out("rates_estimated.csv"), rates_csv(s_rates));
    write_file_atomic(
        out("fig3_rate_scatter.csv"),
        scatter_csv("rate-scatter-v1 item_id,gloss,actual_rate,estimated_rate",
                    "actual_rate", "estimated_rate", r_rates.item_ids,
                    r_rates.glosses, r_rates.rates, s_rates.rates));
    write_file_atomic(out("fig4_rate_histogram.csv"),
                      rates_histogram_csv(r_rates, s_rates));

    LambdaFit fit = fit_lambda(r_rates, s_rates);
    double lambda = fit.lambda;
    std::string lambda_method = "regression-through-origin";
    DefinedRates defined = rates_on_defined_items(db, s_table, ts);
    if (!args.anchor.empty()) {
        Anchor anchor = parse_anchor(args.anchor);
        lambda = calibrate_lambda(defined.db, defined.profile,
                                  {anchor.lang_a, anchor.lang_b}, anchor.known_t,
                                  scorer);
        lambda_method = "single-pair-calibration";
    } else if (args.lambda > 0.0) {
        lambda = args.lambda;
        lambda_method = "given";
    }
    {
        std::ostringstream csv;
        csv << "# schema: lambda-fit-v1 lambda,method,residual,items_used,"
               "items_dropped; residual from the regression fit\n";
        csv << "lambda,method,residual,items_used,items_dropped\n";
        csv << fmt_double(lambda) << ',' << lambda_method << ','
            << fmt_double(fit.residual) << ',' << fit.items_used << ','
            << fit.items_dropped << '\n';
        write_file_atomic(out("lambda.csv"), csv.str());
    }

    TimeDistanceMatrix times =
        time_matrix(defined.db, defined.profile, lambda, scorer,
                    parse_method(args.method), args.common.threads,
                    args.common.tolerance);
    write_file_atomic(out("times.csv"), time_matrix_csv(times));

    // fig2: agreement between the actual and estimated stability rankings
    std::set<std::string> both_defined;
    for (std::size_t i = 0; i < r_table.values.size(); ++i)
        if (r_table.values[i] && s_table.values[i])
            both_defined.insert(r_table.item_ids[i]);
    const auto filter_to = [&](const StabilityTable& t) {
        StabilityTable out_t;
        out_t.kind = t.kind;
        out_t.languages_used = t.languages_used;
        for (std::size_t i = 0; i < t.item_ids.size(); ++i) {
            if (!both_defined.count(t.item_ids[i]))
                continue;
            out_t.item_ids.push_back(t.item_ids[i]);
            out_t.glosses.push_back(t.glosses[i]);
            out_t.values.push_back(t.values[i]);
        }
        return out_t;
    };
    CommonCountCurve fig2 = common_count_curve(rank_items(filter_to(r_table)),
                                               rank_items(filter_to(s_table)));
    if (args.band_trials > 0)
        fig2.band = random_baseline_band(fig2.item_count, args.band_trials,
                                         args.seed, args.common.threads);
    write_file_atomic(out("fig2_ranking_curve.csv"), curve_csv(fig2));

    // fig5: sub-family ranking comparison
    if (!args.split.empty()) {
        auto colon = args.split.find(':');
        if (colon == std::string::npos)
            raise(ErrKind::UsageError, "--split must look like TAGA:TAGB");
        LexicalDatabase clade_a = subset(db, with_tag(args.split.substr(0, colon)));
        LexicalDatabase clade_b = subset(db, with_tag(args.split.substr(colon + 1)));
        std::size_t dropped = 0;
        CommonCountCurve fig5 =
            compare_families(clade_a, clade_b, scorer, args.common.threads, &dropped);
        if (args.band_trials > 0)
            fig5.band = random_baseline_band(fig5.item_count, args.band_trials,
                                             args.seed, args.common.threads);
        write_file_atomic(out("fig5_family_curve.csv"), curve_csv(fig5));
    }

    PairedSample stab_pairs = paired_defined(r_table.values, s_table.values);
    PairedSample rate_pairs = paired_defined(r_rates.rates, s_rates.rates);
    std::ostringstream summary;
    summary << "# schema: report-summary-v1 key,value\n";
    summary << "key,value\n";
    summary << "languages," << db.language_count() << '\n';
    summary << "modern_languages," << db.modern_languages().size() << '\n';
    summary << "items," << db.item_count() << '\n';
    summary << "time_constant_actual," << fmt_double(args.time_constant) << '\n';
    summary << "time_constant_estimated," << fmt_double(ts) << '\n';
    summary << "lambda," << fmt_double(lambda) << '\n';
    summary << "lambda_method," << lambda_method << '\n';
    summary << "lambda_residual," << fmt_double(fit.residual) << '\n';
    summary << "stability_pearson," << fmt_double(pearson(stab_pairs.x, stab_pairs.y))
            << '\n';
    summary << "stability_spearman,"
            << fmt_double(spearman(stab_pairs.x, stab_pairs.y)) << '\n';
    summary << "rate_pearson," << fmt_double(pearson(rate_pairs.x, rate_pairs.y))
            << '\n';
    summary << "rate_spearman," << fmt_double(spearman(rate_pairs.x, rate_pairs.y))
            << '\n';
    summary << "items_dropped_pairwise," << rate_pairs.dropped << '\n';

    if (!args.truth_prefix.empty()) {
        std::string truth_path = args.truth_prefix + ".truth-rates.csv";
        std::ifstream in(truth_path);
        if (!in)
            raise(ErrKind::IoError, "cannot open '" + truth_path + "'");
        std::map<std::string, double> truth;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#' || line.rfind("item_id", 0) == 0)
                continue;
            auto comma = line.find(',');
            if (comma == std::string::npos)
                continue;
            truth[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
        }

        std::ostringstream csv;
        csv << "# schema: truth-comparison-v1 item_id,true_rate,actual_rate,"
               "estimated_rate; NA=undefined\n";
        csv << "item_id,true_rate,actual_rate,estimated_rate\n";
        std::vector<double> tr_a, ar, tr_e, er;
        for (std::size_t i = 0; i < r_rates.item_ids.size(); ++i) {
            auto it = truth.find(r_rates.item_ids[i]);
            if (it == truth.end())
                continue;
            csv << r_rates.item_ids[i] << ',' << fmt_double(it->second) << ','
                << fmt_optional(r_rates.rates[i]) << ','
                << fmt_optional(s_rates.rates[i]) << '\n';
            if (r_rates.rates[i]) {
                tr_a.push_back(it->second);
                ar.push_back(*r_rates.rates[i]);
            }
            if (s_rates.rates[i]) {
                tr_e.push_back(it->second);
                er.push_back(*s_rates.rates[i]);
            }
        }
        write_file_atomic(out("truth_comparison.csv"), csv.str());
        if (ar.size() >= 2)
            summary << "truth_pearson_actual," << fmt_double(pearson(ar, tr_a))
                    << '\n';
        if (er.size() >= 2)
            summary << "truth_pearson_estimated," << fmt_double(pearson(er, tr_e))
                    << '\n';
    }
    write_file_atomic(out("summary.csv"), summary.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lexichron: word-level and language-level similarity, "
                 "replacement rates and divergence times from Swadesh-style "
                 "wordlists"};
    app.require_subcommand(1);
    app.footer(kExitCodeHelp);

    std::size_t threads = 1;
    app.add_option("--threads", threads,
                   "worker threads (outputs are identical at every thread count)")
        ->envname("LEXICHRON_THREADS")
        ->capture_default_str()
        ->check(CLI::Range(std::size_t{1}, std::size_t{256}));

    ValidateArgs validate_args;
    auto* validate =
        app.add_subcommand("validate", "parse a database and print a summary");
    validate->add_option("--db", validate_args.db_path, "tsv-long-v1 wordlist")
        ->required();
    validate->add_option("--meta", validate_args.meta_path,
                         "metadata sidecar (default <db>.meta)");

    OverlapArgs overlap_args;
    auto* overlap = app.add_subcommand("overlap", "pairwise language overlap matrix");
    overlap->add_option("--db", overlap_args.db_path)->required();
    overlap->add_option("--meta", overlap_args.meta_path);
    overlap
        ->add_option("--out", overlap_args.out,
                     "overlap CSV (the support matrix lands next to it)")
        ->required();
    overlap->add_option("--scorer", overlap_args.common.scorer, "nld | binary")
        ->capture_default_str();

    StabilityArgs stability_args;
    auto* stability = app.add_subcommand("stability", "per-item stability table");
    stability->add_option("--db", stability_args.db_path)->required();
    stability->add_option("--meta", stability_args.meta_path);
    stability->add_option("--kind", stability_args.kind, "actual | estimated")
        ->capture_default_str();
    stability->add_option("--out", stability_args.out)->required();
    stability->add_option("--scorer", stability_args.common.scorer)
        ->capture_default_str();

    RatesArgs rates_args;
    auto* rates = app.add_subcommand("rates", "per-item replacement rates");
    rates->add_option("--db", rates_args.db_path)->required();
    rates->add_option("--meta", rates_args.meta_path);
    rates->add_option("--kind", rates_args.kind, "actual | estimated")
        ->capture_default_str();
    rates
        ->add_option("-T,--time-constant", rates_args.time_constant,
                     "time depth in millennia (T for actual, T_s for estimated)")
        ->required();
    rates->add_option("--out", rates_args.out)->required();
    rates->add_option("--scorer", rates_args.common.scorer)->capture_default_str();

    FitLambdaArgs fit_args;
    auto* fit =
        app.add_subcommand("fit-lambda", "regress actual rates on estimated rates");
    fit->add_option("--db", fit_args.db_path)->required();
    fit->add_option("--meta", fit_args.meta_path);
    fit->add_option("-T,--time-constant", fit_args.time_constant,
                    "proto time depth (millennia)")
        ->capture_default_str();
    fit->add_option("--ts", fit_args.ts,
                    "nominal estimated-rate time constant (default: same as -T)");
    fit->add_option("--out", fit_args.out)->required();
    fit->add_option("--scorer", fit_args.common.scorer)->capture_default_str();

    ChronoArgs chrono_args;
    auto* chrono = app.add_subcommand("chrono", "pairwise divergence-time matrix");
    chrono->add_option("--db", chrono_args.db_path)->required();
    chrono->add_option("--meta", chrono_args.meta_path);
    chrono->add_option("--method", chrono_args.method,
                       "classic | generalized | gamma")
        ->required();
    chrono->add_option("--kind", chrono_args.kind, "rate source: actual | estimated")
        ->capture_default_str();
    chrono->add_option("-T,--time-constant", chrono_args.time_constant,
                       "time depth for the rate derivation (required for "
                       "--kind actual)");
    auto* chrono_lambda =
        chrono->add_option("--lambda", chrono_args.lambda, "proportionality constant");
    auto* chrono_anchor = chrono->add_option(
        "--anchor", chrono_args.anchor, "LANG1:LANG2=T known-separation calibration");
    chrono_lambda->excludes(chrono_anchor);
    chrono_anchor->excludes(chrono_lambda);
    chrono
        ->add_option("--tolerance", chrono_args.common.tolerance,
                     "inversion tolerance (millennia)")
        ->capture_default_str();
    chrono->add_option("--out", chrono_args.out)->required();
    chrono->add_option("--scorer", chrono_args.common.scorer)->capture_default_str();

    RankingArgs ranking_args;
    auto* ranking =
        app.add_subcommand("ranking", "items ranked by decreasing stability");
    ranking->add_option("--db", ranking_args.db_path)->required();
    ranking->add_option("--meta", ranking_args.meta_path);
    ranking->add_option("--kind", ranking_args.kind)->capture_default_str();
    ranking->add_option("--out", ranking_args.out)->required();
    ranking->add_option("--scorer", ranking_args.common.scorer)->capture_default_str();

    CompareArgs compare_args;
    auto* compare =
        app.add_subcommand("compare", "cross-family ranking comparison curve");
    compare->add_option("--db-a", compare_args.db_a)->required();
    compare->add_option("--db-b", compare_args.db_b)->required();
    compare->add_option("--meta-a", compare_args.meta_a);
    compare->add_option("--meta-b", compare_args.meta_b);
    compare->add_option("--out", compare_args.out)->required();
    compare
        ->add_option("--band-trials", compare_args.band_trials,
                     "Monte Carlo trials for the random baseline band (0 = off)")
        ->capture_default_str();
    compare->add_option("--seed", compare_args.seed)->capture_default_str();
    compare->add_option("--scorer", compare_args.common.scorer)->capture_default_str();

    SimulateArgs sim_args;
    auto* simulate =
        app.add_subcommand("simulate", "generate a synthetic family with known truth");
    simulate
        ->add_option("--out", sim_args.out,
                     "output wordlist; .meta and truth sidecars land next to it")
        ->required();
    simulate->add_option("--leaves", sim_args.leaves)->capture_default_str();
    simulate->add_option("--depth", sim_args.depth, "root-to-leaf depth (millennia)")
        ->capture_default_str();
    simulate->add_option("--items", sim_args.items)->capture_default_str();
    simulate->add_option("--alphabet", sim_args.alphabet)->capture_default_str();
    simulate->add_option("--min-len", sim_args.min_len)->capture_default_str();
    simulate->add_option("--max-len", sim_args.max_len)->capture_default_str();
    simulate->add_option("--seed", sim_args.seed)->capture_default_str();
    auto* sim_gamma =
        simulate->add_option("--gamma", sim_args.gamma, "rate density SHAPE:SCALE")
            ->capture_default_str();
    auto* sim_rates = simulate->add_option("--rates-file", sim_args.rates_file,
                                           "explicit per-item rates");
    sim_rates->excludes(sim_gamma);
    simulate->add_option("--topology", sim_args.topology, "star | two-clade")
        ->capture_default_str();
    simulate->add_option("--split-depth", sim_args.split_depth,
                         "two-clade split point (default depth/2)");
    simulate
        ->add_option("--mutation-rate", sim_args.mutation_rate,
                     "per-scalar per-millennium substitution rate on survivors")
        ->capture_default_str();
    simulate->add_flag("--no-proto", sim_args.no_proto,
                       "do not emit the root lexicon");
    simulate->add_option("--family", sim_args.family)->capture_default_str();

    ReportArgs report_args;
    auto* report =
        app.add_subcommand("report", "full pipeline; one CSV per figure");
    report->add_option("--db", report_args.db_path)->required();
    report->add_option("--meta", report_args.meta_path);
    report->add_option("-T,--time-constant", report_args.time_constant,
                       "proto time depth (millennia)")
        ->capture_default_str();
    report->add_option("--ts", report_args.ts,
                       "estimated-rate time constant (default: same as -T)");
    report->add_option("--method", report_args.method, "time method for times.csv")
        ->capture_default_str();
    auto* rep_lambda =
        report->add_option("--lambda", report_args.lambda, "override the fitted lambda");
    auto* rep_anchor =
        report->add_option("--anchor", report_args.anchor, "LANG1:LANG2=T calibration");
    rep_lambda->excludes(rep_anchor);
    rep_anchor->excludes(rep_lambda);
    report->add_option("--out-dir", report_args.out_dir)->required();
    report->add_option("--truth", report_args.truth_prefix,
                       "simulator output prefix; adds truth_comparison.csv");
    report->add_option("--split", report_args.split,
                       "TAGA:TAGB sub-family curve (fig5)");
    report->add_option("--band-trials", report_args.band_trials)->capture_default_str();
    report->add_option("--seed", report_args.seed)->capture_default_str();
    report->add_option("--tolerance", report_args.common.tolerance)
        ->capture_default_str();
    report->add_option("--scorer", report_args.common.scorer)->capture_default_str();

    for (auto* sub : app.get_subcommands({}))
        sub->fallthrough(); // lets --threads appear after the subcommand

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help and friends
        std::cerr << "error: kind=usage-error exit=1 msg=\"" << e.what() << "\"\n";
        return err_exit_code(ErrKind::UsageError);
    }

    try {
        if (*validate)
            return cmd_validate(validate_args);
        if (*overlap) {
            overlap_args.common.threads = threads;
            return cmd_overlap(overlap_args);
        }
        if (*stability) {
            stability_args.common.threads = threads;
            return cmd_stability(stability_args);
        }
        if (*rates) {
            rates_args.common.threads = threads;
            return cmd_rates(rates_args);
        }
        if (*fit) {
            fit_args.common.threads = threads;
            return cmd_fit_lambda(fit_args);
        }
        if (*chrono) {
            chrono_args.common.threads = threads;
            return cmd_chrono(chrono_args);
        }
        if (*ranking) {
            ranking_args.common.threads = threads;
            return cmd_ranking(ranking_args);
        }
        if (*compare) {
            compare_args.common.threads = threads;
            return cmd_compare(compare_args);
        }
        if (*simulate)
            return cmd_simulate(sim_args);
        if (*report) {
            report_args.common.threads = threads;
            return cmd_report(report_args);
        }
        std::cerr << "error: kind=usage-error exit=1 msg=\"no subcommand\"\n";
        return err_exit_code(ErrKind::UsageError);
    } catch (const Error& e) {
        std::cerr << "error: kind=" << e.kind_name() << " exit=" << e.exit_code()
                  << " msg=\"" << e.what() << "\"\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: kind=internal-error exit=7 msg=\"" << e.what()
                  << "\"\n";
        return err_exit_code(ErrKind::InternalError);
    }
}
