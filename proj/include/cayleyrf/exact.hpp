#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cayleyrf/enumerate.hpp"
#include "cayleyrf/errors.hpp"
#include "cayleyrf/histogram.hpp"
#include "cayleyrf/splits.hpp"
#include "cayleyrf/tree.hpp"

namespace cayleyrf {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt ipow(const BigInt& base, long long exp) {
    if (exp < 0) throw InputError("ipow: negative exponent");
    return boost::multiprecision::pow(base, static_cast<unsigned>(exp));
}

inline BigInt binomial(long long n, long long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (long long i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

// Spanning forest of [n]: components partition the label set, each carrying
// a tree on its own vertices. Singleton components have no edges.
struct ForestComponent {
    std::vector<int> vertices;
    std::vector<Edge> edges;
};

class ForestSpec {
  public:
    ForestSpec(int n, std::vector<ForestComponent> components)
        : n_(n), components_(std::move(components)) {
        if (n_ < 1) throw InputError("forest needs at least one vertex");
        if (components_.empty()) throw InputError("forest needs at least one component");
        std::vector<char> seen(n_ + 1, 0);
        int covered = 0;
        for (auto& comp : components_) {
            if (comp.vertices.empty()) throw InputError("empty forest component");
            std::sort(comp.vertices.begin(), comp.vertices.end());
            for (int v : comp.vertices) {
                if (v < 1 || v > n_) throw InputError("forest vertex label out of range");
                if (seen[v]) throw InputError("forest components overlap");
                seen[v] = 1;
                ++covered;
            }
            validate_component(comp);
        }
        if (covered != n_) throw InputError("forest components do not cover all labels");
    }

    int n() const { return n_; }
    const std::vector<ForestComponent>& components() const { return components_; }
    std::size_t component_count() const { return components_.size(); }

  private:
    static void validate_component(ForestComponent& comp) {
        const auto& vs = comp.vertices;
        if (comp.edges.size() + 1 != vs.size())
            throw InputError("forest component has wrong edge count for a tree");
        for (auto& e : comp.edges) e = make_edge(e.first, e.second);
        std::sort(comp.edges.begin(), comp.edges.end());
        if (std::adjacent_find(comp.edges.begin(), comp.edges.end()) != comp.edges.end())
            throw InputError("duplicate edge in forest component");
        // union-find over positions within the component
        std::vector<int> parent(vs.size());
        std::iota(parent.begin(), parent.end(), 0);
        auto index_of = [&](int v) {
            auto it = std::lower_bound(vs.begin(), vs.end(), v);
            if (it == vs.end() || *it != v)
                throw InputError("forest edge endpoint outside its component");
            return static_cast<int>(it - vs.begin());
        };
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const auto& [u, v] : comp.edges) {
            int a = find(index_of(u));
            int b = find(index_of(v));
            if (a == b) throw InputError("cycle in forest component");
            parent[a] = b;
        }
    }

    int n_;
    std::vector<ForestComponent> components_;
};

// Trees on [n] containing every edge of the forest: q_1...q_m * n^(m-2).
inline BigInt count_trees_containing_forest(const ForestSpec& spec) {
    const auto m = spec.component_count();
    if (m == 1) return 1;
    BigInt r = 1;
    for (const auto& comp : spec.components()) r *= static_cast<long long>(comp.vertices.size());
    return r * ipow(spec.n(), static_cast<long long>(m) - 2);
}

inline BigRat shared_edge_mean(int n) {
    if (n < 2) throw DomainError("shared edge mean needs n >= 2");
    return BigRat(2 * (n - 1), n);
}

// k-th falling factorial moment of the shared-leaf count of two independent
// uniform trees: k! C(n,k) ((n-k)/n)^(2n-4).
inline BigRat factorial_moment_shared_leaves(int n, int k) {
    if (n < 2) throw DomainError("shared leaves need n >= 2");
    if (k < 0 || k > n) throw InputError("factorial moment order must lie in [0, n]");
    if (k == 0) return 1;
    BigInt falling = 1;
    for (int i = 0; i < k; ++i) falling *= n - i;
    if (k == n) return n == 2 ? BigRat(2) : BigRat(0);
    return BigRat(falling * ipow(n - k, 2 * n - 4), ipow(n, 2 * n - 4));
}

inline double factorial_moment_shared_leaves_dbl(int n, int k) {
    if (n < 2) throw DomainError("shared leaves need n >= 2");
    if (k < 0 || k > n) throw InputError("factorial moment order must lie in [0, n]");
    if (k == 0) return 1.0;
    if (k == n) return n == 2 ? 2.0 : 0.0;
    if (n <= 64) return factorial_moment_shared_leaves(n, k).convert_to<double>();
    double log_falling = std::lgamma(n + 1.0) - std::lgamma(n - k + 1.0);
    return std::exp(log_falling +
                    (2.0 * n - 4.0) * (std::log(double(n - k)) - std::log(double(n))));
}

struct AsymptoticMoments {
    double mean;
    double variance;
};

inline AsymptoticMoments asymptotic_shared_leaf_moments(int n) {
    if (n < 2) throw DomainError("shared leaves need n >= 2");
    const double e2 = std::exp(-2.0);
    const double e4 = std::exp(-4.0);
    return {n * e2, n * (e2 - 3.0 * e4)};
}

// Expected shared bipartitions with side sizes (k, n-k):
// C(n,k) (k^(k-1) (n-k)^(n-k-1) / n^(n-2))^2.
// Counts ordered side choices, so the k = n/2 term is twice the unordered mean.
inline BigRat expected_shared_bipartitions_of_size(int n, int k) {
    if (n < 2) throw DomainError("bipartitions need n >= 2");
    if (k < 1 || 2 * k > n) throw InputError("side size must lie in [1, n/2]");
    if (n > 64)
        throw ResourceError(
            "exact bipartition mean capped at n = 64; use the floating-point variant");
    BigInt trees_with_split = ipow(k, k - 1) * ipow(n - k, n - k - 1);
    return BigRat(binomial(n, k) * trees_with_split * trees_with_split,
                  ipow(n, 2 * n - 4));
}

inline double expected_shared_bipartitions_of_size_dbl(int n, int k) {
    if (n < 2) throw DomainError("bipartitions need n >= 2");
    if (k < 1 || 2 * k > n) throw InputError("side size must lie in [1, n/2]");
    if (n <= 64) return expected_shared_bipartitions_of_size(n, k).convert_to<double>();
    double log_choose = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    double log_p = (k - 1.0) * std::log(double(k)) +
                   (n - k - 1.0) * std::log(double(n - k)) -
                   (n - 2.0) * std::log(double(n));
    return std::exp(log_choose + 2.0 * log_p);
}

// Forests on [n] with s trees in which labels 1..s land in distinct trees:
// s * n^(n-s-1).
inline BigInt count_ordered_forests(int n, int s) {
    if (n < 1) throw DomainError("forest count needs n >= 1");
    if (s < 1 || s > n) throw InputError("tree count must lie in [1, n]");
    if (s == n) return 1;
    return BigInt(s) * ipow(n, n - s - 1);
}

// Trees where a fixed alpha is a leaf hanging off beta and beta's other
// neighbors are exactly the fixed set {x_1..x_k}: k (n-2)^(n-k-3).
inline BigInt count_trees_with_type1_split(int n, int k) {
    if (k < 1) throw InputError("type-1 attachment count must be >= 1");
    if (n < k + 3) throw InputError("type-1 count needs n >= k + 3");
    return BigInt(k) * ipow(n - 2, n - k - 3);
}

// Trees where fixed alpha, beta are adjacent, alpha's other neighbors are
// exactly {y_1..y_l} and beta's exactly {x_1..x_k}: (l+k) (n-2)^(n-l-k-3).
inline BigInt count_trees_with_type2_split(int n, int l, int k) {
    if (l < 1 || k < 1) throw InputError("type-2 attachment counts must be >= 1");
    if (n < l + k + 3) throw InputError("type-2 count needs n >= l + k + 3");
    return BigInt(l + k) * ipow(n - 2, n - l - k - 3);
}

struct SplitShape {
    enum class Kind { Type1, Type2 };
    Kind kind;
    int l = 0;  // first-side attachment count, type-2 only
    int k = 0;

    static SplitShape type1(int k) { return {Kind::Type1, 0, k}; }
    static SplitShape type2(int l, int k) { return {Kind::Type2, l, k}; }
};

// Candidate split counts N1(k) = n(n-1) C(n-2,k) and
// N2(l,k) = 1/2 C(n,2) C(n-2,l) C(n-2-l,k). N2 sums over ordered (l,k) and
// can be half-integral, hence the rational return.
inline BigRat count_split_shapes(int n, const SplitShape& shape) {
    if (shape.kind == SplitShape::Kind::Type1) {
        if (shape.k < 1 || shape.k > n - 2) throw InputError("infeasible type-1 shape");
        return BigRat(BigInt(n) * (n - 1) * binomial(n - 2, shape.k));
    }
    if (shape.l < 1 || shape.k < 1 || shape.l + shape.k > n - 2)
        throw InputError("infeasible type-2 shape");
    return BigRat(binomial(n, 2) * binomial(n - 2, shape.l) *
                      binomial(n - 2 - shape.l, shape.k),
                  2);
}

// Reference law over a contiguous integer support [lo, lo + probs.size()),
// with any truncated mass recorded in tail.
struct ReferencePmf {
    long long lo = 0;
    std::vector<double> probs;
    double tail = 0.0;

    double at(long long value) const {
        if (value < lo || value >= lo + static_cast<long long>(probs.size())) return 0.0;
        return probs[static_cast<std::size_t>(value - lo)];
    }
};

inline double poisson_pmf(double lambda, long long r) {
    if (!(lambda > 0.0)) throw InputError("poisson rate must be positive");
    if (r < 0) throw InputError("poisson support is nonnegative");
    return std::exp(-lambda + double(r) * std::log(lambda) - std::lgamma(double(r) + 1.0));
}

inline ReferencePmf poisson_law(double lambda, long long cutoff = -1) {
    if (!(lambda > 0.0)) throw InputError("poisson rate must be positive");
    if (cutoff < 0)
        cutoff = static_cast<long long>(std::ceil(lambda + 20.0 * std::sqrt(lambda)));
    ReferencePmf pmf;
    pmf.lo = 0;
    pmf.probs.resize(static_cast<std::size_t>(cutoff) + 1);
    double sum = 0.0;
    for (long long r = 0; r <= cutoff; ++r) {
        pmf.probs[static_cast<std::size_t>(r)] = poisson_pmf(lambda, r);
        sum += pmf.probs[static_cast<std::size_t>(r)];
    }
    pmf.tail = std::max(0.0, 1.0 - sum);
    return pmf;
}

inline double hypergeometric_pmf(long long r, long long s, long long t, long long k) {
    if (r < 0 || s < 0) throw InputError("hypergeometric class sizes must be nonnegative");
    if (t < 0 || t > r + s) throw InputError("hypergeometric draw size out of range");
    if (k < 0 || k > std::min(r, t)) throw InputError("hypergeometric count out of range");
    if (t - k > s) return 0.0;
    return BigRat(binomial(r, k) * binomial(s, t - k), binomial(r + s, t))
        .convert_to<double>();
}

inline ReferencePmf hypergeometric_law(long long r, long long s, long long t) {
    if (r < 0 || s < 0) throw InputError("hypergeometric class sizes must be nonnegative");
    if (t < 0 || t > r + s) throw InputError("hypergeometric draw size out of range");
    ReferencePmf pmf;
    pmf.lo = std::max(0LL, t - s);
    const long long hi = std::min(r, t);
    pmf.probs.reserve(static_cast<std::size_t>(hi - pmf.lo + 1));
    for (long long k = pmf.lo; k <= hi; ++k) pmf.probs.push_back(hypergeometric_pmf(r, s, t, k));
    pmf.tail = 0.0;
    return pmf;
}

// Explicit TV-distance bound between the shared-edge count and Po(2(1-1/n)):
// min(1, 1/lambda) C(n,2) [p^2 + (2n-3)(p^2 + q)], p = (2/n)^2, q = (3/n^2)^2.
inline double stein_chen_bound(int n) {
    if (n < 3) throw DomainError("bound needs n >= 3");
    const double nd = n;
    const double lambda = 2.0 * (nd - 1.0) / nd;
    const double p = 4.0 / (nd * nd);
    const double q = 9.0 / (nd * nd * nd * nd);
    const double pairs = nd * (nd - 1.0) / 2.0;
    return std::min(1.0, 1.0 / lambda) * pairs * (p * p + (2.0 * nd - 3.0) * (p * p + q));
}

enum class LawStatistic {
    SharedSplits,  // shared k-local splits of an ordered tree pair
    SharedLeaves,  // labels that are leaves in both trees of a pair
    LeafCount,     // leaves of a single tree
};

namespace detail {

constexpr int kPairLawCap = 6;
constexpr int kSingleLawCap = 9;

inline int leaf_count(const CayleyTree& t) {
    int c = 0;
    for (int v = 1; v <= t.n(); ++v)
        if (t.degree(v) == 1) ++c;
    return c;
}

inline std::uint32_t leaf_mask(const CayleyTree& t) {
    std::uint32_t m = 0;
    for (int v = 1; v <= t.n(); ++v)
        if (t.degree(v) == 1) m |= 1u << v;
    return m;
}

}  // namespace detail

// Exact law by exhausting all trees (single-tree statistics) or all ordered
// tree pairs. Counts are raw occurrence counts; divide by total for the law.
// cap <= 0 keeps the built-in enumeration limits.
inline Histogram exact_statistic_law(int n, LawStatistic statistic, int k = 0,
                                     int cap = 0) {
    Histogram law;
    if (statistic == LawStatistic::LeafCount) {
        const int limit = cap > 0 ? cap : detail::kSingleLawCap;
        if (n > limit)
            throw ResourceError("single-tree law enumeration capped at n = " +
                                std::to_string(limit));
        for_each_tree(n, [&](const CayleyTree& t) { law.add(detail::leaf_count(t)); });
        return law;
    }
    const int limit = cap > 0 ? cap : detail::kPairLawCap;
    if (n > limit)
        throw ResourceError("pair law enumeration capped at n = " +
                            std::to_string(limit));
    if (statistic == LawStatistic::SharedLeaves) {
        std::vector<std::uint32_t> masks;
        for_each_tree(n, [&](const CayleyTree& t) { masks.push_back(detail::leaf_mask(t)); });
        for (std::uint32_t a : masks)
            for (std::uint32_t b : masks) law.add(std::popcount(a & b));
        return law;
    }
    if (k < 0) throw InputError("split radius must be nonnegative");
    std::vector<SplitSet> sets;
    SplitWorkspace ws;
    for_each_tree(n, [&](const CayleyTree& t) { sets.push_back(split_set(t, k, ws)); });
    for (const auto& a : sets)
        for (const auto& b : sets) law.add(shared_count(a, b));
    return law;
}

inline BigRat law_mean(const Histogram& law) {
    if (law.total == 0) throw InputError("empty law has no mean");
    BigInt acc = 0;
    for (const auto& [value, count] : law.counts) acc += BigInt(value) * count;
    return BigRat(acc, BigInt(law.total));
}

// Probability that two independent uniform trees both contain the fixed
// split {x} | [n] minus x at the given radius (n-2 or n-3). The two closed
// forms disagree; both are reported, plus the enumerated truth for n <= 6.
struct SingletonSplitReport {
    double edge_based;
    double leaf_based;
    std::optional<BigRat> enumerated;
};

inline SingletonSplitReport singleton_split_probability(int n, int radius,
                                                        bool enumerate = false) {
    if (n < 3) throw DomainError("singleton split probability needs n >= 3");
    if (radius != n - 2 && radius != n - 3)
        throw InputError("singleton split radius must be n-2 or n-3");
    SingletonSplitReport report{0.0, 0.0, std::nullopt};
    const double nd = n;
    if (radius == n - 2) {
        report.edge_based = 4.0 / (nd * nd);
        report.leaf_based = std::pow(1.0 - 1.0 / nd, 2.0 * nd - 4.0);
    } else {
        const double path_term = std::exp(std::lgamma(nd + 1.0) - (nd - 1.0) * std::log(nd));
        report.edge_based = std::pow(2.0 / nd - path_term, 2.0);
        const double leafy = std::pow((nd - 1.0) / nd, nd - 2.0);
        const double pathy = std::exp(std::lgamma(nd) - (nd - 2.0) * std::log(nd));
        report.leaf_based = std::pow(leafy - pathy, 2.0);
    }
    if (enumerate) {
        if (n > detail::kPairLawCap)
            throw ResourceError("singleton split enumeration capped at n = 6");
        std::vector<int> rest(n - 1);
        std::iota(rest.begin(), rest.end(), 2);
        const Split target = make_split({1}, rest);
        BigInt containing = 0;
        SplitWorkspace ws;
        for_each_tree(n, [&](const CayleyTree& t) {
            if (split_set(t, radius, ws).contains(target)) ++containing;
        });
        report.enumerated = BigRat(containing * containing, ipow(n, 2 * n - 4));
    }
    return report;
}

}  // namespace cayleyrf
