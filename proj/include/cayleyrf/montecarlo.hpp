#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <map>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "cayleyrf/exact.hpp"
#include "cayleyrf/histogram.hpp"
#include "cayleyrf/prufer.hpp"
#include "cayleyrf/rng.hpp"
#include "cayleyrf/splits.hpp"
#include "cayleyrf/tree.hpp"

namespace cayleyrf {

inline int resolve_workers(int workers) {
    if (workers < 0) throw InputError("worker count must be nonnegative");
    if (workers > 0) return workers;
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Splits [0, trials) into one contiguous block per worker and merges the
// per-worker aggregates in worker order. Each trial must derive all of its
// randomness from its own index, which makes the merged result independent
// of the worker count.
template <typename Agg, typename WorkerFn>
Agg run_partitioned(std::uint64_t trials, int workers, WorkerFn work) {
    const int w = resolve_workers(workers);
    const std::uint64_t chunk = (trials + w - 1) / static_cast<std::uint64_t>(w);
    std::vector<Agg> parts(static_cast<std::size_t>(w));
    if (w == 1) {
        parts[0] = work(std::uint64_t{0}, trials);
    } else {
        std::vector<std::thread> threads;
        std::vector<std::exception_ptr> failures(static_cast<std::size_t>(w));
        for (int i = 0; i < w; ++i) {
            const std::uint64_t begin = std::min(trials, chunk * i);
            const std::uint64_t end = std::min(trials, begin + chunk);
            if (begin >= end) continue;
            threads.emplace_back([&, i, begin, end] {
                try {
                    parts[static_cast<std::size_t>(i)] = work(begin, end);
                } catch (...) {
                    failures[static_cast<std::size_t>(i)] = std::current_exception();
                }
            });
        }
        for (auto& t : threads) t.join();
        for (auto& f : failures)
            if (f) std::rethrow_exception(f);
    }
    Agg out = std::move(parts[0]);
    for (std::size_t i = 1; i < parts.size(); ++i) out.merge(parts[i]);
    return out;
}

struct StatSpec {
    enum class Kind { SharedSplits, SharedLeaves, RfDistance, LeafCount };
    Kind kind;
    int k = 0;  // split radius, SharedSplits and RfDistance only

    static StatSpec shared_splits(int k) { return {Kind::SharedSplits, k}; }
    static StatSpec shared_leaves() { return {Kind::SharedLeaves, 0}; }
    static StatSpec rf_distance(int k) { return {Kind::RfDistance, k}; }
    static StatSpec leaf_count() { return {Kind::LeafCount, 0}; }
};

// Empirical law of a statistic over independently sampled ordered tree
// pairs (or single trees for the leaf count). Bit-identical for a given
// seed whatever the worker count.
inline Histogram simulate_statistic(int n, const StatSpec& stat, std::uint64_t trials,
                                    std::uint64_t seed, int workers = 0) {
    if (n < 2) throw DomainError("sampling needs n >= 2");
    if (trials < 1) throw InputError("need at least one trial");
    if (stat.k < 0) throw InputError("split radius must be nonnegative");
    return run_partitioned<Histogram>(
        trials, workers, [&](std::uint64_t begin, std::uint64_t end) {
            Histogram h;
            SplitWorkspace ws;
            for (std::uint64_t i = begin; i < end; ++i) {
                auto rng = make_trial_rng(seed, i);
                CayleyTree a = sample_tree(n, rng);
                if (stat.kind == StatSpec::Kind::LeafCount) {
                    int leaves = 0;
                    for (int v = 1; v <= n; ++v)
                        if (a.degree(v) == 1) ++leaves;
                    h.add(leaves);
                    continue;
                }
                CayleyTree b = sample_tree(n, rng);
                if (stat.kind == StatSpec::Kind::SharedLeaves) {
                    h.add(shared_leaf_count(a, b));
                    continue;
                }
                const int s = shared_count(split_set(a, stat.k, ws),
                                           split_set(b, stat.k, ws));
                h.add(stat.kind == StatSpec::Kind::SharedSplits ? s
                                                                : rf_from_shared(n, s));
            }
            return h;
        });
}

struct SummaryStats {
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double se_mean = 0.0;
    double se_variance = 0.0;
};

inline SummaryStats summary(const Histogram& h) {
    if (h.total < 2) throw InputError("summary needs at least two samples");
    const double n = static_cast<double>(h.total);
    double m1 = 0.0;
    for (const auto& [value, count] : h.counts)
        m1 += static_cast<double>(value) * (static_cast<double>(count) / n);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (const auto& [value, count] : h.counts) {
        const double d = static_cast<double>(value) - m1;
        const double w = static_cast<double>(count) / n;
        m2 += w * d * d;
        m3 += w * d * d * d;
        m4 += w * d * d * d * d;
    }
    SummaryStats s;
    s.mean = m1;
    s.variance = m2 * n / (n - 1.0);
    if (m2 > 0.0) {
        s.skewness = m3 / std::pow(m2, 1.5);
        s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    }
    s.se_mean = std::sqrt(s.variance / n);
    s.se_variance = std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
    return s;
}

inline double tv_distance(const Histogram& a, const Histogram& b) {
    if (a.total == 0 || b.total == 0) throw InputError("empty law");
    double sum = 0.0;
    auto ia = a.counts.begin();
    auto ib = b.counts.begin();
    while (ia != a.counts.end() || ib != b.counts.end()) {
        if (ib == b.counts.end() || (ia != a.counts.end() && ia->first < ib->first)) {
            sum += a.probability(ia->first);
            ++ia;
        } else if (ia == a.counts.end() || ib->first < ia->first) {
            sum += b.probability(ib->first);
            ++ib;
        } else {
            sum += std::abs(a.probability(ia->first) - b.probability(ib->first));
            ++ia;
            ++ib;
        }
    }
    return 0.5 * sum;
}

inline double tv_distance(const Histogram& a, const ReferencePmf& b) {
    if (a.total == 0) throw InputError("empty law");
    double sum = b.tail;
    for (const auto& [value, count] : a.counts)
        sum += std::abs(a.probability(value) - b.at(value));
    for (long long v = b.lo; v < b.lo + static_cast<long long>(b.probs.size()); ++v)
        if (!a.counts.count(v)) sum += b.at(v);
    return 0.5 * sum;
}

inline double tv_distance(const ReferencePmf& a, const Histogram& b) {
    return tv_distance(b, a);
}

// Monte Carlo uncertainty of a TV estimate: half the summed binomial
// standard errors of the empirical cell probabilities.
inline double tv_mc_error(const Histogram& h) {
    if (h.total == 0) throw InputError("empty law");
    const double n = static_cast<double>(h.total);
    double sum = 0.0;
    for (const auto& [value, count] : h.counts) {
        const double p = static_cast<double>(count) / n;
        sum += std::sqrt(p * (1.0 - p) / n);
    }
    return 0.5 * sum;
}

struct ExperimentCheck {
    std::string name;
    bool passed;
    double observed;
    double target;
    double tolerance;
};

struct ExperimentReport {
    std::string experiment;
    int n = 0;
    int k = -1;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    int workers = 1;
    std::map<std::string, double> observed;
    std::map<std::string, double> targets;
    std::map<std::string, double> tv;
    std::vector<ExperimentCheck> checks;
    std::map<std::string, Histogram> histograms;

    bool pass() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }

    void add_check(const std::string& name, double observed_value, double target_value,
                   double tolerance) {
        checks.push_back({name, std::abs(observed_value - target_value) <= tolerance,
                          observed_value, target_value, tolerance});
    }
};

inline Histogram affine_image(const Histogram& h, long long offset, long long scale) {
    Histogram out;
    for (const auto& [value, count] : h.counts) out.add(offset + scale * value, count);
    return out;
}

namespace detail {

// Mean and variance checks carry the stated relative slack for the O(1/n)
// asymptotic bias plus three standard errors of sampling noise; the
// standardized shape moments get flat windows.
inline void add_moment_battery(ExperimentReport& r, const std::string& prefix,
                               const Histogram& h, double target_mean,
                               double target_variance) {
    const auto s = summary(h);
    r.observed[prefix + "_mean"] = s.mean;
    r.observed[prefix + "_variance"] = s.variance;
    r.observed[prefix + "_skewness"] = s.skewness;
    r.observed[prefix + "_excess_kurtosis"] = s.excess_kurtosis;
    r.targets[prefix + "_mean"] = target_mean;
    r.targets[prefix + "_variance"] = target_variance;
    r.add_check(prefix + "_mean", s.mean, target_mean,
                0.02 * std::abs(target_mean) + 3.0 * s.se_mean);
    r.add_check(prefix + "_variance", s.variance, target_variance,
                0.10 * target_variance + 3.0 * s.se_variance);
    r.add_check(prefix + "_skewness", s.skewness, 0.0, 0.1);
    r.add_check(prefix + "_excess_kurtosis", s.excess_kurtosis, 0.0, 0.2);
}

struct PairAgg {
    Histogram hist;
    std::uint64_t violations = 0;

    void merge(const PairAgg& o) {
        hist.merge(o.hist);
        violations += o.violations;
    }
};

}  // namespace detail

// Shared edges of a random pair next to the Poisson reference laws, with the
// distance identity d = 2(n-1) - 2s re-derived per sample from the
// symmetric difference.
inline ExperimentReport experiment_poisson_0rf(int n, std::uint64_t trials,
                                               std::uint64_t seed, int workers = 0) {
    if (n < 3) throw DomainError("experiment needs n >= 3");
    if (trials < 2) throw InputError("need at least two trials");
    auto agg = run_partitioned<detail::PairAgg>(
        trials, workers, [&](std::uint64_t begin, std::uint64_t end) {
            detail::PairAgg a;
            SplitWorkspace ws;
            for (std::uint64_t i = begin; i < end; ++i) {
                auto rng = make_trial_rng(seed, i);
                CayleyTree t = sample_tree(n, rng);
                CayleyTree u = sample_tree(n, rng);
                auto st = split_set(t, 0, ws);
                auto su = split_set(u, 0, ws);
                const int s = shared_count(st, su);
                const int d = symmetric_difference_count(st, su);
                if (d != 2 * (n - 1) - 2 * s) ++a.violations;
                a.hist.add(s);
            }
            return a;
        });

    ExperimentReport r;
    r.experiment = "poisson-0rf";
    r.n = n;
    r.k = 0;
    r.trials = trials;
    r.seed = seed;
    r.workers = resolve_workers(workers);
    r.histograms["statistic"] = agg.hist;

    const double lambda = shared_edge_mean(n).convert_to<double>();
    const double bound = stein_chen_bound(n);
    const double mc_err = tv_mc_error(agg.hist);
    const auto s = summary(agg.hist);
    r.observed["mean"] = s.mean;
    r.observed["mass_at_zero"] = agg.hist.probability(0);
    r.targets["lambda"] = lambda;
    r.targets["stein_chen_bound"] = bound;
    r.targets["mass_at_zero"] = std::exp(-2.0);
    r.tv["poisson_lambda"] = tv_distance(agg.hist, poisson_law(lambda));
    r.tv["poisson_2"] = tv_distance(agg.hist, poisson_law(2.0));

    r.add_check("tv_poisson_lambda", r.tv["poisson_lambda"], 0.0, 0.02);
    r.add_check("tv_within_bound", r.tv["poisson_lambda"], 0.0, bound + 3.0 * mc_err);
    r.add_check("mass_at_zero", agg.hist.probability(0), std::exp(-2.0), 0.01);
    r.add_check("distance_identity", static_cast<double>(agg.violations), 0.0, 0.0);
    return r;
}

namespace detail {

struct CltAgg {
    Histogram hist;
    Histogram gap_hist;  // shared bipartitions minus shared leaves
    std::uint64_t subset_violations = 0;

    void merge(const CltAgg& o) {
        hist.merge(o.hist);
        gap_hist.merge(o.gap_hist);
        subset_violations += o.subset_violations;
    }
};

}  // namespace detail

// Shared bipartitions against the normal-limit moment targets, plus the
// shared-leaf approximation gap.
inline ExperimentReport experiment_clt_n2rf(int n, std::uint64_t trials,
                                            std::uint64_t seed, int workers = 0) {
    if (n < 3) throw DomainError("experiment needs n >= 3");
    if (trials < 2) throw InputError("need at least two trials");
    auto agg = run_partitioned<detail::CltAgg>(
        trials, workers, [&](std::uint64_t begin, std::uint64_t end) {
            detail::CltAgg a;
            SplitWorkspace ws;
            for (std::uint64_t i = begin; i < end; ++i) {
                auto rng = make_trial_rng(seed, i);
                CayleyTree t = sample_tree(n, rng);
                CayleyTree u = sample_tree(n, rng);
                const int s = shared_count(split_set(t, n - 2, ws), split_set(u, n - 2, ws));
                const int leaves = shared_leaf_count(t, u);
                if (leaves > s) ++a.subset_violations;
                a.hist.add(s);
                a.gap_hist.add(s - leaves);
            }
            return a;
        });

    ExperimentReport r;
    r.experiment = "clt-n2rf";
    r.n = n;
    r.k = n - 2;
    r.trials = trials;
    r.seed = seed;
    r.workers = resolve_workers(workers);
    r.histograms["statistic"] = agg.hist;
    r.histograms["leaf_gap"] = agg.gap_hist;

    const auto asym = asymptotic_shared_leaf_moments(n);
    detail::add_moment_battery(r, "shared", agg.hist, asym.mean, asym.variance);
    const double e2 = std::exp(-2.0);
    detail::add_moment_battery(r, "distance", affine_image(agg.hist, 2 * (n - 1), -2),
                               2.0 * n * (1.0 - e2), 4.0 * asym.variance);
    r.add_check("leaves_within_shared", static_cast<double>(agg.subset_violations), 0.0,
                0.0);
    const double gap_zero = agg.gap_hist.probability(0);
    r.observed["gap_fraction"] = 1.0 - gap_zero;
    r.observed["mean_gap"] = agg.gap_hist.mean();
    return r;
}

namespace detail {

struct NearAgg {
    Histogram hist;       // shared (n-3)-local splits
    Histogram bip_hist;   // shared bipartitions
    std::uint64_t diff_count = 0;
    std::uint64_t abs_diff_sum = 0;
    std::uint64_t range_violations = 0;

    void merge(const NearAgg& o) {
        hist.merge(o.hist);
        bip_hist.merge(o.bip_hist);
        diff_count += o.diff_count;
        abs_diff_sum += o.abs_diff_sum;
        range_violations += o.range_violations;
    }
};

}  // namespace detail

// Shared (n-3)-local splits: tracks how rarely they differ from shared
// bipartitions and runs the same moment battery on them. A tree whose
// diameter is at most n-3 has identical split sets at both radii, so the
// bipartition set is reused unless the tree is path-like.
inline ExperimentReport experiment_n3rf(int n, std::uint64_t trials, std::uint64_t seed,
                                        int workers = 0) {
    if (n < 4) throw DomainError("experiment needs n >= 4");
    if (trials < 2) throw InputError("need at least two trials");
    auto agg = run_partitioned<detail::NearAgg>(
        trials, workers, [&](std::uint64_t begin, std::uint64_t end) {
            detail::NearAgg a;
            SplitWorkspace ws;
            SplitSet near_t, near_u;
            for (std::uint64_t i = begin; i < end; ++i) {
                auto rng = make_trial_rng(seed, i);
                CayleyTree t = sample_tree(n, rng);
                CayleyTree u = sample_tree(n, rng);
                auto bip_t = split_set(t, n - 2, ws);
                auto bip_u = split_set(u, n - 2, ws);
                const int s = shared_count(bip_t, bip_u);
                const SplitSet* pt = &bip_t;
                const SplitSet* pu = &bip_u;
                if (tree_diameter(t) > n - 3) {
                    near_t = split_set(t, n - 3, ws);
                    pt = &near_t;
                }
                if (tree_diameter(u) > n - 3) {
                    near_u = split_set(u, n - 3, ws);
                    pu = &near_u;
                }
                const int nearly = shared_count(*pt, *pu);
                const int gap = std::abs(s - nearly);
                if (gap != 0) ++a.diff_count;
                a.abs_diff_sum += static_cast<std::uint64_t>(gap);
                if (gap > n) ++a.range_violations;
                a.hist.add(nearly);
                a.bip_hist.add(s);
            }
            return a;
        });

    ExperimentReport r;
    r.experiment = "n3rf";
    r.n = n;
    r.k = n - 3;
    r.trials = trials;
    r.seed = seed;
    r.workers = resolve_workers(workers);
    r.histograms["statistic"] = agg.hist;
    r.histograms["bipartition_shared"] = agg.bip_hist;

    const auto asym = asymptotic_shared_leaf_moments(n);
    detail::add_moment_battery(r, "near", agg.hist, asym.mean, asym.variance);
    const double frac = static_cast<double>(agg.diff_count) / static_cast<double>(trials);
    r.observed["diff_fraction"] = frac;
    r.observed["mean_abs_diff"] =
        static_cast<double>(agg.abs_diff_sum) / static_cast<double>(trials);
    r.add_check("tracks_bipartitions", frac, 0.0, 1e-3);
    r.add_check("diff_bounded", static_cast<double>(agg.range_violations), 0.0, 0.0);
    return r;
}

// Shared 1-local splits: degenerate limit. Mean stays tiny, the mass sits
// at zero, and the distance pins to 2n-2 whenever nothing is shared.
inline ExperimentReport experiment_1rf(int n, std::uint64_t trials, std::uint64_t seed,
                                       int workers = 0) {
    if (n < 3) throw DomainError("experiment needs n >= 3");
    if (trials < 2) throw InputError("need at least two trials");
    auto agg = run_partitioned<detail::PairAgg>(
        trials, workers, [&](std::uint64_t begin, std::uint64_t end) {
            detail::PairAgg a;
            SplitWorkspace ws;
            for (std::uint64_t i = begin; i < end; ++i) {
                auto rng = make_trial_rng(seed, i);
                CayleyTree t = sample_tree(n, rng);
                CayleyTree u = sample_tree(n, rng);
                auto st = split_set(t, 1, ws);
                auto su = split_set(u, 1, ws);
                const int s = shared_count(st, su);
                const int d = symmetric_difference_count(st, su);
                if (d != 2 * (n - 1) - 2 * s) ++a.violations;
                a.hist.add(s);
            }
            return a;
        });

    ExperimentReport r;
    r.experiment = "one-rf";
    r.n = n;
    r.k = 1;
    r.trials = trials;
    r.seed = seed;
    r.workers = resolve_workers(workers);
    r.histograms["statistic"] = agg.hist;

    const auto s = summary(agg.hist);
    r.observed["mean"] = s.mean;
    r.observed["mass_at_zero"] = agg.hist.probability(0);
    r.targets["distance_if_disjoint"] = 2.0 * n - 2.0;
    r.add_check("mean_small", s.mean, 0.0, 0.01);
    r.add_check("mass_at_zero", agg.hist.probability(0), 1.0, 0.01);
    r.add_check("distance_identity", static_cast<double>(agg.violations), 0.0, 0.0);
    return r;
}

enum class OpponentMode { RandomTree, RandomPairSet };

// Fixed tree against a random opponent. random-tree mode counts shared
// edges with a uniform tree (exact mean 2(n-1)/n); random-pair-set mode
// counts overlap with n-1 pairs drawn without replacement, which follows
// the hypergeometric law exactly and tends to Po(2).
inline ExperimentReport experiment_fixed_tree(const CayleyTree& tree, OpponentMode mode,
                                              std::uint64_t trials, std::uint64_t seed,
                                              int workers = 0) {
    if (trials < 2) throw InputError("need at least two trials");
    const int n = tree.n();
    Histogram hist;
    if (mode == OpponentMode::RandomTree) {
        const SplitSet fixed_edges = split_set(tree, 0);
        hist = run_partitioned<Histogram>(
            trials, workers, [&](std::uint64_t begin, std::uint64_t end) {
                Histogram h;
                SplitWorkspace ws;
                for (std::uint64_t i = begin; i < end; ++i) {
                    auto rng = make_trial_rng(seed, i);
                    CayleyTree u = sample_tree(n, rng);
                    h.add(shared_count(fixed_edges, split_set(u, 0, ws)));
                }
                return h;
            });
    } else {
        std::vector<char> is_edge;
        is_edge.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
        for (int u = 1; u <= n; ++u)
            for (int v = u + 1; v <= n; ++v)
                is_edge.push_back(tree.contains_edge(u, v) ? 1 : 0);
        const std::uint64_t pool = is_edge.size();
        hist = run_partitioned<Histogram>(
            trials, workers, [&](std::uint64_t begin, std::uint64_t end) {
                Histogram h;
                std::vector<std::uint32_t> perm(pool);
                for (std::uint64_t i = 0; i < pool; ++i)
                    perm[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(i);
                std::vector<std::pair<std::uint32_t, std::uint32_t>> swaps;
                swaps.reserve(static_cast<std::size_t>(n));
                for (std::uint64_t i = begin; i < end; ++i) {
                    auto rng = make_trial_rng(seed, i);
                    swaps.clear();
                    int overlap = 0;
                    for (std::uint32_t j = 0; j + 1 < static_cast<std::uint32_t>(n); ++j) {
                        std::uint32_t pick =
                            j + static_cast<std::uint32_t>(rng.bounded(pool - j));
                        if (pick != j) {
                            std::swap(perm[j], perm[pick]);
                            swaps.push_back({j, pick});
                        }
                        overlap += is_edge[perm[j]];
                    }
                    h.add(overlap);
                    for (auto it = swaps.rbegin(); it != swaps.rend(); ++it)
                        std::swap(perm[it->first], perm[it->second]);
                }
                return h;
            });
    }

    ExperimentReport r;
    r.experiment = "fixed-tree";
    r.n = n;
    r.k = 0;
    r.trials = trials;
    r.seed = seed;
    r.workers = resolve_workers(workers);
    r.histograms["statistic"] = hist;

    const double exact_mean = shared_edge_mean(n).convert_to<double>();
    const auto s = summary(hist);
    r.observed["mean"] = s.mean;
    r.targets["mean"] = exact_mean;
    if (mode == OpponentMode::RandomTree) {
        r.add_check("mean_exact", s.mean, exact_mean, 4.0 * s.se_mean);
        int max_degree = 0;
        for (int v = 1; v <= n; ++v) max_degree = std::max(max_degree, tree.degree(v));
        if (max_degree == n - 1)
            r.add_check("always_intersects", hist.probability(0), 0.0, 0.0);
    } else {
        const long long r_class = n - 1;
        const long long s_class = static_cast<long long>(n) * (n - 1) / 2 - r_class;
        const auto hyper = hypergeometric_law(r_class, s_class, r_class);
        r.tv["hypergeometric"] = tv_distance(hist, hyper);
        r.tv["poisson_2"] = tv_distance(hist, poisson_law(2.0));
        r.add_check("tv_hypergeometric", r.tv["hypergeometric"], 0.0, 0.02);
        r.add_check("tv_poisson_2", r.tv["poisson_2"], 0.0, 0.03);
        const double nt = static_cast<double>(trials);
        std::uint64_t bad_bins = 0;
        for (long long v = hyper.lo;
             v < hyper.lo + static_cast<long long>(hyper.probs.size()); ++v) {
            const double p = hyper.at(v);
            if (p * nt < 10.0) continue;
            if (std::abs(hist.probability(v) - p) > 3.0 * std::sqrt(p * (1.0 - p) / nt))
                ++bad_bins;
        }
        r.add_check("bin_probabilities", static_cast<double>(bad_bins), 0.0, 0.0);
    }
    return r;
}

}  // namespace cayleyrf
