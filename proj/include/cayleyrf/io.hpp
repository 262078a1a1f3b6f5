#pragma once

#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cayleyrf/errors.hpp"
#include "cayleyrf/exact.hpp"
#include "cayleyrf/histogram.hpp"
#include "cayleyrf/prufer.hpp"
#include "cayleyrf/splits.hpp"
#include "cayleyrf/tree.hpp"

namespace cayleyrf {

// Tree text format: a header line "n=<int>" followed by one line per tree,
// "edges=u1-v1,u2-v2,..." with u<v and pairs in lexicographic order.
// Blank lines and lines starting with '#' are ignored.

inline std::string format_edges(const CayleyTree& tree) {
    std::string out = "edges=";
    bool first = true;
    for (const auto& [u, v] : tree.edges()) {
        if (!first) out += ',';
        first = false;
        out += std::to_string(u);
        out += '-';
        out += std::to_string(v);
    }
    return out;
}

inline void write_trees(std::ostream& os, int n, const std::vector<CayleyTree>& trees) {
    os << "n=" << n << '\n';
    for (const auto& t : trees) os << format_edges(t) << '\n';
}

namespace detail {

inline int parse_int(const std::string& text, const std::string& context) {
    std::size_t pos = 0;
    int value = 0;
    try {
        value = std::stoi(text, &pos);
    } catch (const std::exception&) {
        throw InputError(context + ": expected integer, got '" + text + "'");
    }
    if (pos != text.size())
        throw InputError(context + ": trailing characters in '" + text + "'");
    return value;
}

inline std::vector<std::string> split_on(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

}  // namespace detail

struct TreeFile {
    int n = 0;
    std::vector<CayleyTree> trees;
};

inline TreeFile read_trees(std::istream& is) {
    TreeFile file;
    bool have_n = false;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::string where = "line " + std::to_string(lineno);
        if (line.rfind("n=", 0) == 0) {
            if (have_n) throw InputError(where + ": duplicate n= header");
            file.n = detail::parse_int(line.substr(2), where);
            have_n = true;
        } else if (line.rfind("edges=", 0) == 0) {
            if (!have_n) throw InputError(where + ": edges= before n= header");
            std::vector<Edge> edges;
            for (const auto& tok : detail::split_on(line.substr(6), ',')) {
                auto ends = detail::split_on(tok, '-');
                if (ends.size() != 2)
                    throw InputError(where + ": bad edge token '" + tok + "'");
                edges.emplace_back(detail::parse_int(ends[0], where),
                                   detail::parse_int(ends[1], where));
            }
            file.trees.emplace_back(file.n, std::move(edges));
        } else {
            throw InputError(where + ": unrecognized line '" + line + "'");
        }
    }
    if (!have_n) throw InputError("tree file: missing n= header");
    return file;
}

// Split text format: the two sides as comma-separated labels joined by '|',
// e.g. "1,2|3,4". A split set is one split per line in lexicographic order.

inline std::string format_split(const Split& split) {
    std::string out;
    const std::vector<int>* sides[2] = {&split.first, &split.second};
    for (int s = 0; s < 2; ++s) {
        if (s) out += '|';
        for (std::size_t i = 0; i < sides[s]->size(); ++i) {
            if (i) out += ',';
            out += std::to_string((*sides[s])[i]);
        }
    }
    return out;
}

inline void write_split_set(std::ostream& os, const SplitSet& set) {
    for (const auto& split : set.splits()) os << format_split(split) << '\n';
}

// Histogram CSV: header "value,count", rows with ascending values.

inline void write_histogram_csv(std::ostream& os, const Histogram& h) {
    os << "value,count\n";
    for (const auto& [value, count] : h.counts)
        os << value << ',' << count << '\n';
}

inline Histogram read_histogram_csv(std::istream& is) {
    Histogram h;
    std::string line;
    if (!std::getline(is, line)) throw InputError("histogram csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "value,count")
        throw InputError("histogram csv: bad header '" + line + "'");
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = "histogram csv line " + std::to_string(lineno);
        auto cells = detail::split_on(line, ',');
        if (cells.size() != 2) throw InputError(where + ": expected two cells");
        long long value = 0;
        unsigned long long count = 0;
        try {
            std::size_t pos = 0;
            value = std::stoll(cells[0], &pos);
            if (pos != cells[0].size()) throw std::invalid_argument("");
            // stoull would wrap a negative count instead of rejecting it.
            if (cells[1].empty() || !std::isdigit(static_cast<unsigned char>(cells[1][0])))
                throw std::invalid_argument("");
            pos = 0;
            count = std::stoull(cells[1], &pos);
            if (pos != cells[1].size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw InputError(where + ": bad row '" + line + "'");
        }
        h.add(value, count);
    }
    return h;
}

// Forest text format: components separated by ';'. A component is either a
// bare label (singleton) or a comma-separated edge list "u-v,v-w"; the
// component's vertex set is the union of the edge endpoints.
inline ForestSpec parse_forest(int n, const std::string& text) {
    std::vector<ForestComponent> components;
    for (const auto& part : detail::split_on(text, ';')) {
        if (part.empty()) throw InputError("forest: empty component in '" + text + "'");
        ForestComponent comp;
        if (part.find('-') == std::string::npos) {
            comp.vertices.push_back(detail::parse_int(part, "forest"));
        } else {
            std::vector<char> seen(n + 1, 0);
            for (const auto& tok : detail::split_on(part, ',')) {
                auto ends = detail::split_on(tok, '-');
                if (ends.size() != 2)
                    throw InputError("forest: bad edge token '" + tok + "'");
                const int u = detail::parse_int(ends[0], "forest");
                const int v = detail::parse_int(ends[1], "forest");
                comp.edges.push_back({u, v});
                for (int x : {u, v}) {
                    if (x < 1 || x > n)
                        throw InputError("forest: label " + std::to_string(x) +
                                         " outside 1.." + std::to_string(n));
                    if (!seen[x]) {
                        seen[x] = 1;
                        comp.vertices.push_back(x);
                    }
                }
            }
        }
        components.push_back(std::move(comp));
    }
    return ForestSpec(n, std::move(components));
}

// Prufer format: comma-separated symbols, "-" for the empty code (n = 2).
inline std::string format_prufer(const PruferSequence& seq) {
    if (seq.symbols().empty()) return "-";
    std::string out;
    for (std::size_t i = 0; i < seq.symbols().size(); ++i) {
        if (i) out += ',';
        out += std::to_string(seq.symbols()[i]);
    }
    return out;
}

inline PruferSequence parse_prufer(int n, const std::string& text) {
    if (text == "-") return PruferSequence(n, {});
    std::vector<int> symbols;
    for (const auto& tok : detail::split_on(text, ','))
        symbols.push_back(detail::parse_int(tok, "prufer"));
    return PruferSequence(n, std::move(symbols));
}

}  // namespace cayleyrf
