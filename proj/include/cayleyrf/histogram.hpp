#pragma once

#include <cstdint>
#include <map>

namespace cayleyrf {

// Integer-valued distribution as value -> occurrence count. Used both for
// Monte Carlo samples and for exact enumeration laws (counts then sum to
// n^(n-2) or its square, which fits in 64 bits for every enumerable n).
struct Histogram {
    std::map<long long, std::uint64_t> counts;
    std::uint64_t total = 0;

    void add(long long value, std::uint64_t weight = 1) {
        counts[value] += weight;
        total += weight;
    }

    void merge(const Histogram& other) {
        for (const auto& [value, count] : other.counts) counts[value] += count;
        total += other.total;
    }

    double probability(long long value) const {
        auto it = counts.find(value);
        if (it == counts.end() || total == 0) return 0.0;
        return static_cast<double>(it->second) / static_cast<double>(total);
    }

    double mean() const {
        if (total == 0) return 0.0;
        double acc = 0.0;
        for (const auto& [value, count] : counts)
            acc += static_cast<double>(value) * static_cast<double>(count);
        return acc / static_cast<double>(total);
    }

    bool operator==(const Histogram& other) const = default;
};

}  // namespace cayleyrf
