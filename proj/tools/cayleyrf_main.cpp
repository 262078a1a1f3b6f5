#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cayleyrf/errors.hpp"
#include "cayleyrf/exact.hpp"
#include "cayleyrf/io.hpp"
#include "cayleyrf/montecarlo.hpp"
#include "cayleyrf/prufer.hpp"
#include "cayleyrf/report.hpp"
#include "cayleyrf/rng.hpp"
#include "cayleyrf/splits.hpp"
#include "cayleyrf/tree.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitMismatch = 3;
constexpr int kExitOverCap = 4;
constexpr int kExitIo = 5;

struct IoFailure {
    std::string message;
};

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoFailure{"cannot open '" + path + "' for writing"};
    os << text;
    os.flush();
    if (!os) throw IoFailure{"write to '" + path + "' failed"};
}

// Report text goes to the given path or stdout; histograms become CSV files
// next to the report, which needs a real path.
std::string sibling_csv_path(const std::string& out, const std::string& name) {
    std::string stem = out;
    const std::string suffix = ".json";
    if (stem.size() > suffix.size() &&
        stem.compare(stem.size() - suffix.size(), suffix.size(), suffix) == 0)
        stem.resize(stem.size() - suffix.size());
    return stem + "-" + name + ".csv";
}

cayleyrf::CayleyTree load_first_tree(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoFailure{"cannot open '" + path + "'"};
    auto file = cayleyrf::read_trees(is);
    if (file.trees.empty())
        throw cayleyrf::InputError("'" + path + "' contains no trees");
    return file.trees.front();
}

cayleyrf::CayleyTree shaped_tree(int n, const std::string& shape) {
    std::vector<cayleyrf::Edge> edges;
    if (shape == "star") {
        for (int v = 2; v <= n; ++v) edges.push_back({1, v});
    } else if (shape == "path") {
        for (int v = 1; v < n; ++v) edges.push_back({v, v + 1});
    } else {
        throw cayleyrf::InputError("unknown tree shape '" + shape + "'");
    }
    return cayleyrf::CayleyTree(n, edges);
}

std::string utc_timestamp() {
    char buf[32];
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void emit(const std::string& out, const std::string& text) {
    if (out.empty())
        std::cout << text;
    else
        write_text_file(out, text);
}

int run_gen(int n, int count, std::uint64_t seed, const std::string& out) {
    auto rng = cayleyrf::Xoshiro256StarStar(seed);
    std::vector<cayleyrf::CayleyTree> trees;
    trees.reserve(count);
    for (int i = 0; i < count; ++i) trees.push_back(cayleyrf::sample_tree(n, rng));
    std::ostringstream os;
    cayleyrf::write_trees(os, n, trees);
    emit(out, os.str());
    return 0;
}

int run_dist(const std::string& file_a, const std::string& file_b, int k) {
    const auto a = load_first_tree(file_a);
    const auto b = load_first_tree(file_b);
    if (a.n() != b.n()) {
        std::cerr << "error: vertex counts differ (" << a.n() << " vs " << b.n()
                  << ")\n";
        return kExitMismatch;
    }
    const int radius = k < 0 ? a.n() - 2 : k;
    std::cout << cayleyrf::rf_distance(a, b, radius) << '\n';
    return 0;
}

int run_exact(const std::string& stat, const cayleyrf::RunConfig& cfg, int l, int s,
              const std::string& forest_text, const std::string& format) {
    using namespace cayleyrf;
    Json j;
    std::optional<Histogram> law;
    if (stat == "shared-edges" || stat == "shared-splits" || stat == "shared-leaves" ||
        stat == "leaf-count") {
        LawStatistic which = LawStatistic::SharedSplits;
        int k = cfg.k;
        if (stat == "shared-edges") {
            k = 0;
        } else if (stat == "shared-leaves") {
            which = LawStatistic::SharedLeaves;
            k = 0;
        } else if (stat == "leaf-count") {
            which = LawStatistic::LeafCount;
            k = 0;
        } else if (k < 0) {
            k = cfg.n - 2;
        }
        law = exact_statistic_law(cfg.n, which, k, cfg.cap);
        j = law_json(stat, cfg.n, k, *law);
    } else if (stat == "moon") {
        if (forest_text.empty()) throw InputError("--forest is required for moon");
        const auto spec = parse_forest(cfg.n, forest_text);
        Json params;
        params["forest"] = forest_text;
        j = count_json(stat, cfg.n, params, count_trees_containing_forest(spec));
    } else if (stat == "type1-count") {
        if (cfg.k < 0) throw InputError("--k is required for type1-count");
        Json params;
        params["k"] = cfg.k;
        j = count_json(stat, cfg.n, params, count_trees_with_type1_split(cfg.n, cfg.k));
    } else if (stat == "type2-count") {
        if (cfg.k < 0 || l < 0) throw InputError("type2-count needs --l and --k");
        Json params;
        params["l"] = l;
        params["k"] = cfg.k;
        j = count_json(stat, cfg.n, params,
                       count_trees_with_type2_split(cfg.n, l, cfg.k));
    } else if (stat == "ordered-forests") {
        if (s < 1) throw InputError("--s is required for ordered-forests");
        Json params;
        params["s"] = s;
        j = count_json(stat, cfg.n, params, count_ordered_forests(cfg.n, s));
    } else if (stat == "shared-edge-mean") {
        j = rational_json(stat, cfg.n, Json::object(), shared_edge_mean(cfg.n));
    } else if (stat == "stein-chen") {
        j["statistic"] = stat;
        j["n"] = cfg.n;
        j["value"] = stein_chen_bound(cfg.n);
    } else {
        throw InputError("unknown statistic '" + stat + "'");
    }
    if (format == "csv") {
        if (!law) throw InputError("--format csv needs a law statistic");
        std::ostringstream os;
        write_histogram_csv(os, *law);
        emit(cfg.out, os.str());
    } else {
        emit(cfg.out, j.dump(2) + "\n");
    }
    return 0;
}

int run_experiment(const std::string& name, cayleyrf::RunConfig cfg,
                   const std::string& mode, const std::string& shape,
                   const std::string& tree_path, bool with_timestamp,
                   const std::string& format) {
    using namespace cayleyrf;
    ExperimentReport report;
    if (name == "poisson-0rf") {
        report = experiment_poisson_0rf(cfg.n, cfg.trials, cfg.seed, cfg.workers);
    } else if (name == "clt-n2rf") {
        report = experiment_clt_n2rf(cfg.n, cfg.trials, cfg.seed, cfg.workers);
    } else if (name == "n3rf") {
        report = experiment_n3rf(cfg.n, cfg.trials, cfg.seed, cfg.workers);
    } else if (name == "one-rf") {
        report = experiment_1rf(cfg.n, cfg.trials, cfg.seed, cfg.workers);
    } else if (name == "fixed-tree") {
        OpponentMode opponent = OpponentMode::RandomTree;
        if (mode == "random-pair-set")
            opponent = OpponentMode::RandomPairSet;
        else if (mode != "random-tree")
            throw InputError("unknown opponent mode '" + mode + "'");
        const CayleyTree fixed =
            tree_path.empty() ? shaped_tree(cfg.n, shape) : load_first_tree(tree_path);
        if (fixed.n() != cfg.n)
            throw InputError("--tree has n = " + std::to_string(fixed.n()) +
                             ", flag says " + std::to_string(cfg.n));
        report = experiment_fixed_tree(fixed, opponent, cfg.trials, cfg.seed,
                                       cfg.workers);
    } else {
        std::cerr << "error: unknown experiment '" << name << "'\n";
        return kExitUsage;
    }

    cfg.command = "experiment " + name;
    if (format == "csv") {
        std::ostringstream os;
        write_histogram_csv(os, report.histograms.at("statistic"));
        emit(cfg.out, os.str());
    } else {
        const Json j =
            report_json(report, &cfg, with_timestamp ? utc_timestamp() : "");
        emit(cfg.out, j.dump(2) + "\n");
        if (!cfg.out.empty()) {
            for (const auto& [hist_name, hist] : report.histograms) {
                std::ostringstream os;
                write_histogram_csv(os, hist);
                write_text_file(sibling_csv_path(cfg.out, hist_name), os.str());
            }
        }
    }
    for (const auto& c : report.checks)
        std::cerr << (c.passed ? "[pass] " : "[FAIL] ") << c.name << ": observed "
                  << c.observed << ", target " << c.target << " +- " << c.tolerance
                  << '\n';
    return report.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cayley tree statistics: generation, k-local split distances, "
                 "exact laws, Monte Carlo experiments"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    cayleyrf::RunConfig cfg;
    int count = 1;
    int l = -1;
    int s = -1;
    std::string stat, forest_text, file_a, file_b, experiment_name;
    std::string mode = "random-tree";
    std::string shape = "star";
    std::string tree_path;
    bool with_timestamp = false;
    cfg.k = -1;

    auto add_common = [&](CLI::App* cmd, bool needs_n) {
        auto* n_opt = cmd->add_option("--n", cfg.n, "number of vertices")
                          ->envname("CAYLEYRF_N");
        if (needs_n) n_opt->required();
        cmd->add_option("--out", cfg.out, "output path (default stdout)")
            ->envname("CAYLEYRF_OUT");
        cmd->add_option("--format", cfg.format, "output format: json|csv")
            ->check(CLI::IsMember({"json", "csv"}))
            ->envname("CAYLEYRF_FORMAT");
        return cmd;
    };

    auto* gen = add_common(app.add_subcommand("gen", "sample uniform trees"), true);
    gen->add_option("--count", count, "number of trees")->check(CLI::PositiveNumber);
    gen->add_option("--seed", cfg.seed, "rng seed")->envname("CAYLEYRF_SEED");

    auto* dist = app.add_subcommand("dist", "k-local split distance of two trees");
    dist->add_option("fileA", file_a, "first tree file")->required();
    dist->add_option("fileB", file_b, "second tree file")->required();
    dist->add_option("--k", cfg.k, "split radius (default n-2, clamped)")
        ->envname("CAYLEYRF_K");

    auto* exact = add_common(app.add_subcommand("exact", "exact laws and counts"), true);
    exact->add_option("--stat", stat,
                      "shared-edges|shared-splits|shared-leaves|leaf-count|moon|"
                      "type1-count|type2-count|ordered-forests|shared-edge-mean|"
                      "stein-chen")
        ->required();
    exact->add_option("--k", cfg.k, "split radius / leaf-set size")
        ->envname("CAYLEYRF_K");
    exact->add_option("--l", l, "first side size for type2-count");
    exact->add_option("--s", s, "component count for ordered-forests");
    exact->add_option("--forest", forest_text, "forest, e.g. \"1-2;3;4\"");
    exact->add_option("--cap", cfg.cap, "enumeration cap override")
        ->envname("CAYLEYRF_CAP");

    auto* experiment =
        add_common(app.add_subcommand("experiment", "seeded Monte Carlo suites"), true);
    experiment
        ->add_option("name", experiment_name,
                     "poisson-0rf|clt-n2rf|n3rf|one-rf|fixed-tree")
        ->required();
    experiment->add_option("--trials", cfg.trials, "number of trials")
        ->required()
        ->envname("CAYLEYRF_TRIALS");
    experiment->add_option("--seed", cfg.seed, "rng seed")->envname("CAYLEYRF_SEED");
    experiment->add_option("--workers", cfg.workers, "worker threads (0 = hardware)")
        ->envname("CAYLEYRF_WORKERS");
    experiment->add_option("--mode", mode, "fixed-tree: random-tree|random-pair-set");
    experiment->add_option("--shape", shape, "fixed-tree: star|path");
    experiment->add_option("--tree", tree_path, "fixed-tree: tree file");
    experiment->add_flag("--timestamp", with_timestamp, "include a timestamp field");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen->parsed()) {
            cfg.command = "gen";
            return run_gen(cfg.n, count, cfg.seed, cfg.out);
        }
        if (dist->parsed()) return run_dist(file_a, file_b, cfg.k);
        if (exact->parsed()) {
            cfg.command = "exact " + stat;
            return run_exact(stat, cfg, l, s, forest_text, cfg.format);
        }
        return run_experiment(experiment_name, cfg, mode, shape, tree_path,
                              with_timestamp, cfg.format);
    } catch (const cayleyrf::ResourceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return experiment->parsed() ? kExitIo : kExitOverCap;
    } catch (const IoFailure& e) {
        std::cerr << "error: " << e.message << '\n';
        return kExitIo;
    } catch (const cayleyrf::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const cayleyrf::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
}
