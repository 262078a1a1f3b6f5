#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "cayleyrf/errors.hpp"
#include "cayleyrf/tree.hpp"

namespace cayleyrf {

// One k-local split: for tree edge {u,v}, the vertices within distance k of u
// and of v in their components of T minus the edge. Sides are kept sorted and
// the side with the smaller minimum label comes first, so equal splits compare
// equal as unordered pairs.
struct Split {
    std::vector<int> first;
    std::vector<int> second;

    bool operator==(const Split&) const = default;
    bool operator<(const Split& o) const {
        return first != o.first ? first < o.first : second < o.second;
    }
};

inline Split make_split(std::vector<int> a, std::vector<int> b) {
    if (a.empty() || b.empty()) throw InputError("Split: sides must be nonempty");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
        if (a[i] == b[j]) throw InputError("Split: sides must be disjoint");
        a[i] < b[j] ? ++i : ++j;
    }
    if (a.front() > b.front()) a.swap(b);
    return Split{std::move(a), std::move(b)};
}

// Scratch buffers reused across split_set calls; one instance per thread.
struct SplitWorkspace {
    std::vector<int> parent, preorder, down, best1, best2, out, stamp, queue;
    std::vector<std::uint64_t> sub;  // per-vertex subtree bitsets
    std::vector<std::uint64_t> rows, row_hash;
    std::vector<std::uint32_t> order;
    int epoch = 0;
};

// The n-1 k-local splits of one tree, stored as packed bit vectors sorted by
// (hash, contents) so that two sets can be intersected by a linear merge.
class SplitSet {
  public:
    int n() const { return n_; }
    int k() const { return k_; }
    std::size_t size() const { return hash_.size(); }

    // All splits, lexicographically sorted by label lists.
    std::vector<Split> splits() const {
        std::vector<Split> out;
        out.reserve(size());
        for (std::size_t i = 0; i < size(); ++i)
            out.push_back(Split{unpack(row(i)), unpack(row(i) + words_)});
        std::sort(out.begin(), out.end());
        return out;
    }

    bool contains(const Split& s) const {
        if (size() == 0) return false;
        std::vector<std::uint64_t> key(2 * words_, 0);
        const std::vector<int>* sides[2] = {&s.first, &s.second};
        for (int side = 0; side < 2; ++side)
            for (int v : *sides[side]) {
                if (v < 1 || v > n_) return false;
                key[side * words_ + (v - 1) / 64] |= std::uint64_t{1} << ((v - 1) % 64);
            }
        const std::uint64_t h = hash_row(key.data(), 2 * words_);
        std::size_t lo = 0, hi = size();
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (row_less(hash_[mid], row(mid), h, key.data()))
                lo = mid + 1;
            else
                hi = mid;
        }
        return lo < size() && hash_[lo] == h &&
               std::equal(key.begin(), key.end(), row(lo));
    }

    bool operator==(const SplitSet& o) const {
        return n_ == o.n_ && data_ == o.data_;
    }

    friend int shared_count(const SplitSet& a, const SplitSet& b);
    friend int symmetric_difference_count(const SplitSet& a, const SplitSet& b);
    friend SplitSet split_set(const CayleyTree& tree, int k, SplitWorkspace& ws);

  private:
    static std::uint64_t hash_row(const std::uint64_t* p, int words) {
        std::uint64_t h = 1469598103934665603ULL;
        for (int i = 0; i < words; ++i) {
            h ^= p[i];
            h *= 1099511628211ULL;
        }
        return h;
    }

    bool row_less(std::uint64_t ha, const std::uint64_t* a, std::uint64_t hb,
                  const std::uint64_t* b) const {
        if (ha != hb) return ha < hb;
        return std::lexicographical_compare(a, a + 2 * words_, b, b + 2 * words_);
    }

    const std::uint64_t* row(std::size_t i) const {
        return data_.data() + i * 2 * words_;
    }

    std::vector<int> unpack(const std::uint64_t* side) const {
        std::vector<int> labels;
        for (int w = 0; w < words_; ++w) {
            std::uint64_t bits = side[w];
            while (bits) {
                labels.push_back(w * 64 + std::countr_zero(bits) + 1);
                bits &= bits - 1;
            }
        }
        return labels;
    }

    int n_ = 0, k_ = 0, words_ = 0;
    std::vector<std::uint64_t> data_;
    std::vector<std::uint64_t> hash_;
};

namespace detail {

// Fills `row` (W words, already zeroed) with the vertices within distance k of
// `start` in the component of T minus the edge {start, blocked}.
inline void ball_bits(const CayleyTree& tree, int start, int blocked, int k,
                      std::uint64_t* row, SplitWorkspace& ws) {
    const int epoch = ++ws.epoch;
    ws.queue.clear();
    ws.queue.push_back(start);
    ws.stamp[start] = epoch;
    ws.stamp[blocked] = epoch;
    std::size_t begin = 0;
    for (int d = 0; d < k; ++d) {
        const std::size_t end = ws.queue.size();
        if (begin == end) break;
        for (; begin < end; ++begin)
            for (int w : tree.neighbors(ws.queue[begin]))
                if (ws.stamp[w] != epoch) {
                    ws.stamp[w] = epoch;
                    ws.queue.push_back(w);
                }
    }
    for (int v : ws.queue)
        row[(v - 1) / 64] |= std::uint64_t{1} << ((v - 1) % 64);
}

}  // namespace detail

inline SplitSet split_set(const CayleyTree& tree, int k, SplitWorkspace& ws) {
    if (k < 0) throw InputError("split_set: k must be >= 0, got " + std::to_string(k));
    const int n = tree.n();
    if (k > n - 2) k = n - 2;  // larger radii always exhaust both components
    const int W = (n + 63) / 64;
    const std::size_t m = static_cast<std::size_t>(n - 1);
    const std::size_t stride = 2 * static_cast<std::size_t>(W);

    SplitSet result;
    result.n_ = n;
    result.k_ = k;
    result.words_ = W;

    ws.rows.assign(m * stride, 0);
    ws.row_hash.resize(m);
    auto set_bit = [](std::uint64_t* side, int v) {
        side[(v - 1) / 64] |= std::uint64_t{1} << ((v - 1) % 64);
    };

    if (k == 0) {
        // The 0-local split of edge {u,v} is {u}|{v}; edges() is canonical.
        const auto& edges = tree.edges();
        for (std::size_t e = 0; e < m; ++e) {
            std::uint64_t* row = ws.rows.data() + e * stride;
            set_bit(row, edges[e].first);
            set_bit(row + W, edges[e].second);
        }
    } else {
        // Root at 1; each non-root vertex v contributes the edge {v, parent}.
        ws.parent.assign(n + 1, 0);
        ws.preorder.clear();
        ws.preorder.reserve(n);
        ws.queue.clear();
        ws.queue.push_back(1);
        ws.parent[1] = 1;
        while (!ws.queue.empty()) {
            int v = ws.queue.back();
            ws.queue.pop_back();
            ws.preorder.push_back(v);
            for (int w : tree.neighbors(v))
                if (ws.parent[w] == 0) {
                    ws.parent[w] = v;
                    ws.queue.push_back(w);
                }
        }

        // Subtree heights and bitsets, accumulated child-into-parent.
        ws.down.assign(n + 1, 0);
        ws.best1.assign(n + 1, 0);
        ws.best2.assign(n + 1, 0);
        ws.sub.assign(static_cast<std::size_t>(n + 1) * W, 0);
        for (std::size_t i = ws.preorder.size(); i-- > 0;) {
            const int v = ws.preorder[i];
            std::uint64_t* sv = ws.sub.data() + static_cast<std::size_t>(v) * W;
            set_bit(sv, v);
            if (v == 1) continue;
            const int p = ws.parent[v];
            std::uint64_t* sp = ws.sub.data() + static_cast<std::size_t>(p) * W;
            for (int w = 0; w < W; ++w) sp[w] |= sv[w];
            const int cand = ws.down[v] + 1;
            if (cand > ws.best1[p]) {
                ws.best2[p] = ws.best1[p];
                ws.best1[p] = cand;
            } else if (cand > ws.best2[p]) {
                ws.best2[p] = cand;
            }
            ws.down[p] = ws.best1[p];
        }

        // out[v]: max distance from parent(v) to any vertex outside the
        // subtree of v. The eccentricity of parent(v) in the complement
        // component of edge {v, parent(v)} is out[v] - 1.
        ws.out.assign(n + 1, 0);
        for (const int v : ws.preorder) {
            if (v == 1) continue;
            const int p = ws.parent[v];
            const int sib = (ws.down[v] + 1 == ws.best1[p]) ? ws.best2[p] : ws.best1[p];
            int m3 = sib;
            if (p != 1 && ws.out[p] > m3) m3 = ws.out[p];
            if (m3 < 0) m3 = 0;
            ws.out[v] = 1 + m3;
        }

        ws.stamp.assign(n + 1, 0);
        ws.epoch = 0;

        std::vector<std::uint64_t> full(W, ~std::uint64_t{0});
        if (n % 64) full[W - 1] = (std::uint64_t{1} << (n % 64)) - 1;

        std::size_t e = 0;
        for (const int v : ws.preorder) {
            if (v == 1) continue;
            const int p = ws.parent[v];
            std::uint64_t* side_v = ws.rows.data() + e * stride;
            std::uint64_t* side_p = side_v + W;
            const std::uint64_t* sv = ws.sub.data() + static_cast<std::size_t>(v) * W;

            if (ws.down[v] <= k)
                std::copy(sv, sv + W, side_v);
            else
                detail::ball_bits(tree, v, p, k, side_v, ws);

            if (ws.out[v] - 1 <= k)
                for (int w = 0; w < W; ++w) side_p[w] = full[w] & ~sv[w];
            else
                detail::ball_bits(tree, p, v, k, side_p, ws);

            // Canonical order: smaller minimum label first.
            int min_v = 0, min_p = 0;
            for (int w = 0; w < W; ++w)
                if (side_v[w]) {
                    min_v = w * 64 + std::countr_zero(side_v[w]);
                    break;
                }
            for (int w = 0; w < W; ++w)
                if (side_p[w]) {
                    min_p = w * 64 + std::countr_zero(side_p[w]);
                    break;
                }
            if (min_p < min_v)
                for (int w = 0; w < W; ++w) std::swap(side_v[w], side_p[w]);
            ++e;
        }
    }

    for (std::size_t i = 0; i < m; ++i)
        ws.row_hash[i] = SplitSet::hash_row(ws.rows.data() + i * stride,
                                            static_cast<int>(stride));

    ws.order.resize(m);
    std::iota(ws.order.begin(), ws.order.end(), 0u);
    std::sort(ws.order.begin(), ws.order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (ws.row_hash[a] != ws.row_hash[b]) return ws.row_hash[a] < ws.row_hash[b];
        const std::uint64_t* ra = ws.rows.data() + a * stride;
        const std::uint64_t* rb = ws.rows.data() + b * stride;
        return std::lexicographical_compare(ra, ra + stride, rb, rb + stride);
    });

    result.data_.resize(m * stride);
    result.hash_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::uint32_t src = ws.order[i];
        result.hash_[i] = ws.row_hash[src];
        std::copy(ws.rows.data() + src * stride, ws.rows.data() + (src + 1) * stride,
                  result.data_.data() + i * stride);
    }
    return result;
}

inline SplitSet split_set(const CayleyTree& tree, int k) {
    SplitWorkspace ws;
    return split_set(tree, k, ws);
}

// Single split for one edge, by two bounded traversals. Independent of the
// batched split_set machinery.
inline Split k_local_split(const CayleyTree& tree, int u, int v, int k) {
    if (k < 0) throw InputError("k_local_split: k must be >= 0, got " + std::to_string(k));
    if (!tree.contains_edge(u, v))
        throw InputError("k_local_split: edge {" + std::to_string(u) + "," +
                         std::to_string(v) + "} is not in the tree");
    const int n = tree.n();
    if (k > n - 2) k = n - 2;

    auto ball = [&](int start, int blocked) {
        std::vector<int> dist(n + 1, -1);
        std::vector<int> queue{start};
        dist[start] = 0;
        dist[blocked] = 0;  // barrier; not collected
        std::size_t head = 0;
        while (head < queue.size()) {
            int x = queue[head++];
            if (dist[x] == k) continue;
            for (int w : tree.neighbors(x))
                if (dist[w] < 0) {
                    dist[w] = dist[x] + 1;
                    queue.push_back(w);
                }
        }
        std::sort(queue.begin(), queue.end());
        return queue;
    };

    return make_split(ball(u, v), ball(v, u));
}

inline int shared_count(const SplitSet& a, const SplitSet& b) {
    if (a.n_ != b.n_)
        throw InputError("shared_count: vertex counts differ (" + std::to_string(a.n_) +
                         " vs " + std::to_string(b.n_) + ")");
    std::size_t i = 0, j = 0;
    int shared = 0;
    while (i < a.size() && j < b.size()) {
        if (a.row_less(a.hash_[i], a.row(i), b.hash_[j], b.row(j))) {
            ++i;
        } else if (a.row_less(b.hash_[j], b.row(j), a.hash_[i], a.row(i))) {
            ++j;
        } else {
            ++shared;
            ++i;
            ++j;
        }
    }
    return shared;
}

// Size of the symmetric difference of the two split sets, by the same merge.
inline int symmetric_difference_count(const SplitSet& a, const SplitSet& b) {
    if (a.n_ != b.n_)
        throw InputError("symmetric_difference_count: vertex counts differ (" +
                         std::to_string(a.n_) + " vs " + std::to_string(b.n_) + ")");
    std::size_t i = 0, j = 0;
    int diff = 0;
    while (i < a.size() && j < b.size()) {
        if (a.row_less(a.hash_[i], a.row(i), b.hash_[j], b.row(j))) {
            ++diff;
            ++i;
        } else if (a.row_less(b.hash_[j], b.row(j), a.hash_[i], a.row(i))) {
            ++diff;
            ++j;
        } else {
            ++i;
            ++j;
        }
    }
    diff += static_cast<int>((a.size() - i) + (b.size() - j));
    return diff;
}

inline int shared_count(const CayleyTree& t1, const CayleyTree& t2, int k) {
    if (t1.n() != t2.n())
        throw InputError("shared_count: vertex counts differ (" + std::to_string(t1.n()) +
                         " vs " + std::to_string(t2.n()) + ")");
    SplitWorkspace ws;
    SplitSet a = split_set(t1, k, ws);
    SplitSet b = split_set(t2, k, ws);
    return shared_count(a, b);
}

inline int rf_from_shared(int n, int shared) {
    if (shared < 0 || shared > n - 1)
        throw InputError("rf_from_shared: shared count " + std::to_string(shared) +
                         " out of range 0.." + std::to_string(n - 1));
    return 2 * (n - 1) - 2 * shared;
}

inline int rf_distance(const CayleyTree& t1, const CayleyTree& t2, int k) {
    return rf_from_shared(t1.n(), shared_count(t1, t2, k));
}

inline int shared_leaf_count(const CayleyTree& t1, const CayleyTree& t2) {
    if (t1.n() != t2.n())
        throw InputError("shared_leaf_count: vertex counts differ (" +
                         std::to_string(t1.n()) + " vs " + std::to_string(t2.n()) + ")");
    int count = 0;
    for (int v = 1; v <= t1.n(); ++v)
        if (t1.degree(v) == 1 && t2.degree(v) == 1) ++count;
    return count;
}

inline int tree_diameter(const CayleyTree& tree) {
    const int n = tree.n();
    std::vector<int> dist(n + 1);
    std::vector<int> queue;
    auto farthest = [&](int start) {
        std::fill(dist.begin(), dist.end(), -1);
        queue.assign(1, start);
        dist[start] = 0;
        std::size_t head = 0;
        int last = start;
        while (head < queue.size()) {
            last = queue[head++];
            for (int w : tree.neighbors(last))
                if (dist[w] < 0) {
                    dist[w] = dist[last] + 1;
                    queue.push_back(w);
                }
        }
        return last;
    };
    int a = farthest(1);
    int b = farthest(a);
    return dist[b];
}

}  // namespace cayleyrf
