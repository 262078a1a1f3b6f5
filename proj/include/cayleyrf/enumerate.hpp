#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cayleyrf/errors.hpp"
#include "cayleyrf/prufer.hpp"
#include "cayleyrf/tree.hpp"

namespace cayleyrf {

// Default ceiling for exhaustive enumeration (9^7 ~ 4.8M trees).
inline constexpr int kDefaultEnumerationCap = 9;

// n^(n-2); overflows above n = 17.
inline std::uint64_t tree_count(int n) {
    if (n < 2) throw DomainError("tree_count: n must be >= 2, got " + std::to_string(n));
    if (n > 17) throw ResourceError("tree_count: n^(n-2) overflows 64 bits for n > 17");
    std::uint64_t c = 1;
    for (int i = 0; i < n - 2; ++i) c *= static_cast<std::uint64_t>(n);
    return c;
}

// Streams every labeled tree on [n] exactly once by running an odometer over
// all n^(n-2) Prufer codes.
class TreeEnumerator {
  public:
    explicit TreeEnumerator(int n, int cap = kDefaultEnumerationCap) : n_(n) {
        if (n_ < 2) throw DomainError("TreeEnumerator: n must be >= 2, got " + std::to_string(n_));
        if (n_ > cap)
            throw ResourceError("TreeEnumerator: n = " + std::to_string(n_) +
                                " exceeds the enumeration cap " + std::to_string(cap) +
                                "; raise the cap explicitly to proceed");
        symbols_.assign(n_ - 2, 1);
    }

    std::optional<CayleyTree> next() {
        if (done_) return std::nullopt;
        CayleyTree tree = prufer_decode(PruferSequence(n_, symbols_));
        // Advance the odometer.
        int i = static_cast<int>(symbols_.size()) - 1;
        while (i >= 0 && symbols_[i] == n_) symbols_[i--] = 1;
        if (i < 0)
            done_ = true;
        else
            ++symbols_[i];
        return tree;
    }

  private:
    int n_;
    std::vector<int> symbols_;
    bool done_ = false;
};

inline TreeEnumerator enumerate_trees(int n, int cap = kDefaultEnumerationCap) {
    return TreeEnumerator(n, cap);
}

template <class F>
void for_each_tree(int n, F&& f, int cap = kDefaultEnumerationCap) {
    TreeEnumerator en(n, cap);
    while (auto t = en.next()) f(*t);
}

}  // namespace cayleyrf
