#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cayleyrf/errors.hpp"

namespace cayleyrf {

// Unordered edge stored as (min, max).
using Edge = std::pair<int, int>;

inline Edge make_edge(int u, int v) {
    return u < v ? Edge{u, v} : Edge{v, u};
}

// A labeled tree on vertices 1..n. Immutable after construction; the
// constructor validates the full invariant (n-1 edges, labels in range,
// no duplicates, connected), so every instance is a genuine tree.
class CayleyTree {
  public:
    CayleyTree(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
        if (n_ < 2) throw DomainError("CayleyTree: n must be >= 2, got " + std::to_string(n_));
        if (edges_.size() != static_cast<std::size_t>(n_ - 1))
            throw InputError("CayleyTree: expected " + std::to_string(n_ - 1) + " edges, got " +
                             std::to_string(edges_.size()));
        for (auto& e : edges_) {
            if (e.first < 1 || e.first > n_ || e.second < 1 || e.second > n_)
                throw InputError("CayleyTree: vertex label out of range 1.." + std::to_string(n_));
            if (e.first == e.second)
                throw InputError("CayleyTree: self-loop at vertex " + std::to_string(e.first));
            e = make_edge(e.first, e.second);
        }
        std::sort(edges_.begin(), edges_.end());
        if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
            throw InputError("CayleyTree: duplicate edge");

        // n-1 distinct edges + connectivity implies acyclicity.
        std::vector<int> root(n_ + 1);
        std::iota(root.begin(), root.end(), 0);
        auto find = [&](int v) {
            while (root[v] != v) v = root[v] = root[root[v]];
            return v;
        };
        int components = n_;
        for (const auto& [u, v] : edges_) {
            int ru = find(u), rv = find(v);
            if (ru != rv) {
                root[ru] = rv;
                --components;
            }
        }
        if (components != 1) throw InputError("CayleyTree: edge set is not connected");

        build_adjacency();
    }

    int n() const { return n_; }

    // Canonical (min, max) pairs in lexicographic order.
    const std::vector<Edge>& edges() const { return edges_; }

    std::span<const int> neighbors(int v) const {
        return {adj_.data() + adj_off_[v], adj_.data() + adj_off_[v + 1]};
    }

    int degree(int v) const { return adj_off_[v + 1] - adj_off_[v]; }

    bool contains_edge(int u, int v) const {
        return std::binary_search(edges_.begin(), edges_.end(), make_edge(u, v));
    }

    // Vertices of degree 1, ascending.
    std::vector<int> leaf_set() const {
        std::vector<int> leaves;
        for (int v = 1; v <= n_; ++v)
            if (degree(v) == 1) leaves.push_back(v);
        return leaves;
    }

    bool operator==(const CayleyTree& other) const {
        return n_ == other.n_ && edges_ == other.edges_;
    }

  private:
    void build_adjacency() {
        adj_off_.assign(n_ + 2, 0);
        for (const auto& [u, v] : edges_) {
            ++adj_off_[u + 1];
            ++adj_off_[v + 1];
        }
        for (int v = 1; v <= n_; ++v) adj_off_[v + 1] += adj_off_[v];
        adj_.resize(2 * (n_ - 1));
        std::vector<int> cursor(adj_off_.begin(), adj_off_.end() - 1);
        for (const auto& [u, v] : edges_) {
            adj_[cursor[u]++] = v;
            adj_[cursor[v]++] = u;
        }
    }

    int n_;
    std::vector<Edge> edges_;
    std::vector<int> adj_;      // flattened neighbor lists
    std::vector<int> adj_off_;  // per-vertex offsets into adj_, 1-based
};

inline std::vector<int> leaf_set(const CayleyTree& tree) { return tree.leaf_set(); }

}  // namespace cayleyrf
