#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cayleyrf/errors.hpp"
#include "cayleyrf/rng.hpp"
#include "cayleyrf/tree.hpp"

namespace cayleyrf {

// Length n-2 code over 1..n, in bijection with labeled trees on [n].
class PruferSequence {
  public:
    PruferSequence(int n, std::vector<int> symbols)
        : n_(n), symbols_(std::move(symbols)) {
        if (n_ < 2) throw DomainError("PruferSequence: n must be >= 2, got " + std::to_string(n_));
        if (symbols_.size() != static_cast<std::size_t>(n_ - 2))
            throw InputError("PruferSequence: expected " + std::to_string(n_ - 2) +
                             " symbols, got " + std::to_string(symbols_.size()));
        for (int s : symbols_)
            if (s < 1 || s > n_)
                throw InputError("PruferSequence: symbol " + std::to_string(s) +
                                 " out of range 1.." + std::to_string(n_));
    }

    int n() const { return n_; }
    const std::vector<int>& symbols() const { return symbols_; }

    bool operator==(const PruferSequence& other) const {
        return n_ == other.n_ && symbols_ == other.symbols_;
    }

  private:
    int n_;
    std::vector<int> symbols_;
};

// Linear-time decode using the moving-pointer variant of the classic
// algorithm: repeatedly join the smallest remaining leaf to the next symbol.
inline CayleyTree prufer_decode(const PruferSequence& seq) {
    const int n = seq.n();
    const auto& code = seq.symbols();
    std::vector<int> deg(n + 1, 1);
    for (int s : code) ++deg[s];

    std::vector<Edge> edges;
    edges.reserve(n - 1);
    int ptr = 1;
    while (deg[ptr] != 1) ++ptr;
    int leaf = ptr;
    for (int s : code) {
        edges.push_back(make_edge(leaf, s));
        if (--deg[s] == 1 && s < ptr) {
            leaf = s;
        } else {
            ++ptr;
            while (deg[ptr] != 1) ++ptr;
            leaf = ptr;
        }
    }
    edges.push_back(make_edge(leaf, n));
    return CayleyTree(n, std::move(edges));
}

// Inverse of prufer_decode.
inline PruferSequence prufer_encode(const CayleyTree& tree) {
    const int n = tree.n();
    if (n == 2) return PruferSequence(2, {});

    // Parents toward root n; a leaf's remaining neighbor is always its parent
    // because its children are removed first.
    std::vector<int> parent(n + 1, 0);
    std::vector<int> stack{n};
    parent[n] = n;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : tree.neighbors(v)) {
            if (parent[w] == 0) {
                parent[w] = v;
                stack.push_back(w);
            }
        }
    }

    std::vector<int> deg(n + 1);
    for (int v = 1; v <= n; ++v) deg[v] = tree.degree(v);

    std::vector<int> code;
    code.reserve(n - 2);
    int ptr = 1;
    while (deg[ptr] != 1) ++ptr;
    int leaf = ptr;
    for (int i = 0; i < n - 2; ++i) {
        int p = parent[leaf];
        code.push_back(p);
        if (--deg[p] == 1 && p < ptr) {
            leaf = p;
        } else {
            ++ptr;
            while (deg[ptr] != 1) ++ptr;
            leaf = ptr;
        }
    }
    return PruferSequence(n, std::move(code));
}

// Uniform tree on [n]: n-2 independent uniform symbols, then decode.
inline CayleyTree sample_tree(int n, Xoshiro256StarStar& rng) {
    if (n < 2) throw DomainError("sample_tree: n must be >= 2, got " + std::to_string(n));
    std::vector<int> symbols(n - 2);
    for (auto& s : symbols) s = 1 + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n)));
    return prufer_decode(PruferSequence(n, std::move(symbols)));
}

}  // namespace cayleyrf
