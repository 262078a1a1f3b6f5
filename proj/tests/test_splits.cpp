#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "cayleyrf/enumerate.hpp"
#include "cayleyrf/prufer.hpp"
#include "cayleyrf/rng.hpp"
#include "cayleyrf/splits.hpp"
#include "cayleyrf/tree.hpp"

using cayleyrf::CayleyTree;
using cayleyrf::Split;
using cayleyrf::SplitSet;
using cayleyrf::Xoshiro256StarStar;

namespace {

CayleyTree path4() { return CayleyTree(4, {{1, 2}, {2, 3}, {3, 4}}); }
CayleyTree star4() { return CayleyTree(4, {{1, 2}, {2, 3}, {2, 4}}); }

// Reference split computation, kept deliberately naive: delete the edge,
// run an unbounded BFS per side over freshly built adjacency sets, and keep
// vertices at distance <= k.
std::vector<int> naive_side(const CayleyTree& t, std::pair<int, int> gone, int from,
                            int k) {
    const int n = t.n();
    std::vector<std::set<int>> adj(n + 1);
    for (auto [u, v] : t.edges()) {
        if (std::minmax(u, v) == std::minmax(gone.first, gone.second)) continue;
        adj[u].insert(v);
        adj[v].insert(u);
    }
    std::vector<int> dist(n + 1, -1);
    dist[from] = 0;
    std::vector<int> queue{from};
    for (std::size_t h = 0; h < queue.size(); ++h)
        for (int w : adj[queue[h]])
            if (dist[w] < 0) {
                dist[w] = dist[queue[h]] + 1;
                queue.push_back(w);
            }
    std::vector<int> side;
    for (int v = 1; v <= n; ++v)
        if (dist[v] >= 0 && dist[v] <= k) side.push_back(v);
    return side;
}

Split naive_split(const CayleyTree& t, int u, int v, int k) {
    k = std::min(k, t.n() - 2);
    auto a = naive_side(t, {u, v}, u, k);
    auto b = naive_side(t, {u, v}, v, k);
    if (a.front() > b.front()) a.swap(b);
    return Split{a, b};
}

std::set<Split> naive_split_set(const CayleyTree& t, int k) {
    std::set<Split> out;
    for (auto [u, v] : t.edges()) out.insert(naive_split(t, u, v, k));
    return out;
}

int naive_diameter(const CayleyTree& t) {
    int best = 0;
    for (int s = 1; s <= t.n(); ++s) {
        std::vector<int> dist(t.n() + 1, -1);
        dist[s] = 0;
        std::vector<int> queue{s};
        for (std::size_t h = 0; h < queue.size(); ++h)
            for (int w : t.neighbors(queue[h]))
                if (dist[w] < 0) {
                    dist[w] = dist[queue[h]] + 1;
                    queue.push_back(w);
                    best = std::max(best, dist[w]);
                }
    }
    return best;
}

}  // namespace

TEST_CASE("k_local_split on worked examples") {
    auto p = path4();
    CHECK(cayleyrf::k_local_split(p, 2, 3, 0) == Split{{2}, {3}});
    CHECK(cayleyrf::k_local_split(p, 3, 2, 0) == Split{{2}, {3}});
    CHECK(cayleyrf::k_local_split(p, 2, 3, 1) == Split{{1, 2}, {3, 4}});
    CHECK(cayleyrf::k_local_split(p, 1, 2, 2) == Split{{1}, {2, 3, 4}});
    CHECK(cayleyrf::k_local_split(star4(), 2, 4, 0) == Split{{2}, {4}});
    CHECK_THROWS_AS(cayleyrf::k_local_split(p, 1, 3, 1), cayleyrf::InputError);
    CHECK_THROWS_AS(cayleyrf::k_local_split(p, 1, 2, -1), cayleyrf::InputError);
}

TEST_CASE("make_split canonicalizes and validates") {
    auto s = cayleyrf::make_split({4, 3}, {1, 2});
    CHECK(s == Split{{1, 2}, {3, 4}});
    CHECK_THROWS_AS(cayleyrf::make_split({}, {1}), cayleyrf::InputError);
    CHECK_THROWS_AS(cayleyrf::make_split({1, 2}, {2, 3}), cayleyrf::InputError);
}

TEST_CASE("split_set on worked examples") {
    auto star_splits = cayleyrf::split_set(star4(), 0).splits();
    CHECK(star_splits == std::vector<Split>{{{1}, {2}}, {{2}, {3}}, {{2}, {4}}});

    auto path_splits = cayleyrf::split_set(path4(), 2).splits();
    CHECK(path_splits ==
          std::vector<Split>{{{1}, {2, 3, 4}}, {{1, 2}, {3, 4}}, {{1, 2, 3}, {4}}});

    auto two = cayleyrf::split_set(CayleyTree(2, {{1, 2}}), 5);
    CHECK(two.size() == 1);
    CHECK(two.splits() == std::vector<Split>{{{1}, {2}}});
}

TEST_CASE("split_set matches the naive reference for all trees, n <= 6") {
    for (int n = 3; n <= 6; ++n) {
        cayleyrf::for_each_tree(n, [&](const CayleyTree& t) {
            for (int k = 0; k <= n - 2; ++k) {
                auto got = cayleyrf::split_set(t, k);
                REQUIRE(got.size() == static_cast<std::size_t>(n - 1));
                auto list = got.splits();
                std::set<Split> as_set(list.begin(), list.end());
                REQUIRE(as_set.size() == list.size());
                REQUIRE(as_set == naive_split_set(t, k));
                for (const auto& s : list) {
                    CHECK(got.contains(s));
                    CHECK(s.first.front() < s.second.front());
                }
            }
        });
    }
}

TEST_CASE("k beyond n-2 is clamped") {
    Xoshiro256StarStar rng(31);
    for (int i = 0; i < 20; ++i) {
        auto t = cayleyrf::sample_tree(9, rng);
        CHECK(cayleyrf::split_set(t, 7) == cayleyrf::split_set(t, 100));
        CHECK(cayleyrf::k_local_split(t, t.edges()[0].first, t.edges()[0].second, 50) ==
              cayleyrf::k_local_split(t, t.edges()[0].first, t.edges()[0].second, 7));
    }
}

TEST_CASE("bipartition splits cover [n]") {
    cayleyrf::for_each_tree(5, [&](const CayleyTree& t) {
        for (const auto& s : cayleyrf::split_set(t, 3).splits())
            CHECK(s.first.size() + s.second.size() == 5);
    });
}

TEST_CASE("shared_count basics") {
    CHECK(cayleyrf::shared_count(star4(), path4(), 0) == 2);  // edges {1,2},{2,3}
    for (int k = 0; k <= 2; ++k) CHECK(cayleyrf::shared_count(path4(), path4(), k) == 3);
    CHECK_THROWS_AS(cayleyrf::shared_count(path4(), CayleyTree(3, {{1, 2}, {2, 3}}), 0),
                    cayleyrf::InputError);

    auto t2 = CayleyTree(2, {{1, 2}});
    CHECK(cayleyrf::shared_count(t2, t2, 0) == 1);
}

TEST_CASE("rf_distance and rf_from_shared") {
    CHECK(cayleyrf::rf_from_shared(6, 3) == 4);
    CHECK(cayleyrf::rf_from_shared(6, 1) == 8);
    CHECK(cayleyrf::rf_from_shared(9, 8) == 0);
    CHECK_THROWS_AS(cayleyrf::rf_from_shared(6, 6), cayleyrf::InputError);
    CHECK_THROWS_AS(cayleyrf::rf_from_shared(6, -1), cayleyrf::InputError);

    CHECK(cayleyrf::rf_distance(star4(), path4(), 0) == 2);
    CHECK(cayleyrf::rf_distance(path4(), path4(), 1) == 0);
    CHECK(cayleyrf::rf_distance(path4(), star4(), 0) ==
          cayleyrf::rf_distance(star4(), path4(), 0));
}

TEST_CASE("shared equals intersection of naive split sets, exhaustive n = 4") {
    const int n = 4;
    std::vector<CayleyTree> trees;
    cayleyrf::for_each_tree(n, [&](const CayleyTree& t) { trees.push_back(t); });
    for (const auto& a : trees)
        for (const auto& b : trees)
            for (int k = 0; k <= n - 2; ++k) {
                auto sa = naive_split_set(a, k);
                auto sb = naive_split_set(b, k);
                std::vector<Split> both;
                std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                                      std::back_inserter(both));
                int want = static_cast<int>(both.size());
                CHECK(cayleyrf::shared_count(a, b, k) == want);
                auto pa = cayleyrf::split_set(a, k);
                auto pb = cayleyrf::split_set(b, k);
                CHECK(cayleyrf::symmetric_difference_count(pa, pb) ==
                      2 * (n - 1) - 2 * want);
            }
}

TEST_CASE("distance zero iff equal trees, exhaustive n = 4") {
    std::vector<CayleyTree> trees;
    cayleyrf::for_each_tree(4, [&](const CayleyTree& t) { trees.push_back(t); });
    for (const auto& a : trees)
        for (const auto& b : trees)
            for (int k = 0; k <= 2; ++k)
                CHECK((cayleyrf::rf_distance(a, b, k) == 0) == (a == b));
}

TEST_CASE("shared_leaf_count") {
    CHECK(cayleyrf::shared_leaf_count(path4(), star4()) == 2);   // {1,4} vs {1,3,4}
    CHECK(cayleyrf::shared_leaf_count(path4(), path4()) == 2);
    CHECK(cayleyrf::shared_leaf_count(CayleyTree(4, {{1, 4}, {1, 2}, {2, 3}}), path4()) == 1);
    CHECK_THROWS_AS(cayleyrf::shared_leaf_count(path4(), CayleyTree(3, {{1, 2}, {2, 3}})),
                    cayleyrf::InputError);
}

TEST_CASE("shared leaves equal singleton-side shared bipartitions, n = 4, 5") {
    for (int n = 4; n <= 5; ++n) {
        std::vector<CayleyTree> trees;
        std::vector<std::set<Split>> sets;
        cayleyrf::for_each_tree(n, [&](const CayleyTree& t) {
            trees.push_back(t);
            auto list = cayleyrf::split_set(t, n - 2).splits();
            sets.emplace_back(list.begin(), list.end());
        });
        for (std::size_t i = 0; i < trees.size(); ++i)
            for (std::size_t j = 0; j < trees.size(); ++j) {
                int singles = 0;
                for (const auto& s : sets[i])
                    if (sets[j].count(s) && (s.first.size() == 1 || s.second.size() == 1))
                        ++singles;
                CHECK(singles == cayleyrf::shared_leaf_count(trees[i], trees[j]));
            }
    }
}

TEST_CASE("tree_diameter matches all-pairs BFS, exhaustive n = 5, 6") {
    for (int n = 5; n <= 6; ++n)
        cayleyrf::for_each_tree(n, [&](const CayleyTree& t) {
            CHECK(cayleyrf::tree_diameter(t) == naive_diameter(t));
        });
}

TEST_CASE("small diameter collapses near-bipartition splits") {
    const int n = 6;
    cayleyrf::for_each_tree(n, [&](const CayleyTree& t) {
        if (cayleyrf::tree_diameter(t) <= n - 3)
            CHECK(cayleyrf::split_set(t, n - 3) == cayleyrf::split_set(t, n - 2));
    });
    // A path has diameter n-1; its end-edge (n-3)-split misses the far vertex.
    CayleyTree path6(6, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}});
    CHECK(!(cayleyrf::split_set(path6, 3) == cayleyrf::split_set(path6, 4)));
}

TEST_CASE("metric symmetry and triangle inequality on random triples") {
    Xoshiro256StarStar rng(77);
    for (int n : {6, 10}) {
        for (int rep = 0; rep < 200; ++rep) {
            auto a = cayleyrf::sample_tree(n, rng);
            auto b = cayleyrf::sample_tree(n, rng);
            auto c = cayleyrf::sample_tree(n, rng);
            for (int k : {0, 1, n - 3, n - 2}) {
                int ab = cayleyrf::rf_distance(a, b, k);
                int bc = cayleyrf::rf_distance(b, c, k);
                int ac = cayleyrf::rf_distance(a, c, k);
                CHECK(ab == cayleyrf::rf_distance(b, a, k));
                CHECK(ac <= ab + bc);
                CHECK(ab <= ac + bc);
                CHECK(bc <= ab + ac);
                CHECK(ab % 2 == 0);
                CHECK(ab >= 0);
                CHECK(ab <= 2 * (n - 1));
            }
        }
    }
}
