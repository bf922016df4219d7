#pragma once

// Test-only oracles, kept independent of the library's fast paths: the naive
// satisfaction checker recounts every frequency from scratch, the matching
// oracle enumerates all matchings, the Hall oracle enumerates all subsets.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "cfc/coloring.hpp"
#include "cfc/graph.hpp"
#include "cfc/matching.hpp"
#include "cfc/rng.hpp"

namespace testutil {

inline bool naive_satisfied(const cfc::Graph& g, const cfc::EdgeColoring& c, int e,
                            cfc::Mode mode) {
    cfc::Edge ed = g.edge(e);
    std::set<int> nb;
    for (const auto& inc : g.incident(ed.u))
        nb.insert(inc.edge);
    for (const auto& inc : g.incident(ed.v))
        nb.insert(inc.edge);
    if (mode == cfc::Mode::Open)
        nb.erase(e);
    std::map<int, int> freq;
    for (int f : nb)
        if (c.is_assigned(f))
            ++freq[c.color(f)];
    for (auto& [color, count] : freq)
        if (count == 1)
            return true;
    return false;
}

inline std::vector<char> naive_flags(const cfc::Graph& g, const cfc::EdgeColoring& c,
                                     cfc::Mode mode) {
    std::vector<char> out(static_cast<std::size_t>(g.edge_count()));
    for (int e = 0; e < g.edge_count(); ++e)
        out[static_cast<std::size_t>(e)] = naive_satisfied(g, c, e, mode);
    return out;
}

// Random graph without isolated vertices (re-rolls until the condition holds).
inline cfc::Graph random_graph_no_isolated(cfc::rng::Stream& rng, int max_n = 40) {
    while (true) {
        int n = 2 + static_cast<int>(rng.below(static_cast<std::uint32_t>(max_n - 1)));
        double p = 0.15 + 0.7 * rng.unit();
        cfc::Graph g = cfc::gnp_random(n, p, rng.next());
        bool ok = g.edge_count() > 0;
        for (int v = 0; v < n && ok; ++v)
            ok = g.degree(v) > 0;
        if (ok)
            return g;
    }
}

inline bool has_isolated_edge(const cfc::Graph& g) {
    for (int e = 0; e < g.edge_count(); ++e) {
        cfc::Edge ed = g.edge(e);
        if (g.degree(ed.u) == 1 && g.degree(ed.v) == 1)
            return true;
    }
    return false;
}

// Maximum matching size by exhaustive search over the edge list.
inline int brute_max_matching(const cfc::BipartiteGraph& h) {
    std::vector<std::pair<int, int>> edges;
    for (int l = 0; l < h.left_size(); ++l)
        for (const auto& arc : h.arcs(l))
            edges.emplace_back(l, arc.to);
    int best = 0;
    std::vector<char> used_l(static_cast<std::size_t>(h.left_size()), 0);
    std::vector<char> used_r(static_cast<std::size_t>(h.right_size()), 0);
    auto dfs = [&](auto&& self, std::size_t idx, int size) -> void {
        best = std::max(best, size);
        if (idx == edges.size())
            return;
        auto [l, r] = edges[idx];
        if (!used_l[static_cast<std::size_t>(l)] && !used_r[static_cast<std::size_t>(r)]) {
            used_l[static_cast<std::size_t>(l)] = used_r[static_cast<std::size_t>(r)] = 1;
            self(self, idx + 1, size + 1);
            used_l[static_cast<std::size_t>(l)] = used_r[static_cast<std::size_t>(r)] = 0;
        }
        self(self, idx + 1, size);
    };
    dfs(dfs, 0, 0);
    return best;
}

// Smallest Hall-violating subset of the left side, by subset enumeration.
inline std::optional<std::vector<int>> brute_hall_violator(const cfc::BipartiteGraph& h) {
    const int nl = h.left_size();
    for (std::uint32_t mask = 1; mask < (1u << nl); ++mask) {
        std::set<int> nbh;
        int size = 0;
        for (int l = 0; l < nl; ++l)
            if (mask & (1u << l)) {
                ++size;
                for (const auto& arc : h.arcs(l))
                    nbh.insert(arc.to);
            }
        if (static_cast<int>(nbh.size()) < size) {
            std::vector<int> out;
            for (int l = 0; l < nl; ++l)
                if (mask & (1u << l))
                    out.push_back(l);
            return out;
        }
    }
    return std::nullopt;
}

inline cfc::BipartiteGraph random_bipartite(cfc::rng::Stream& rng, int max_side,
                                            double p = -1.0) {
    int nl = 1 + static_cast<int>(rng.below(static_cast<std::uint32_t>(max_side)));
    int nr = 1 + static_cast<int>(rng.below(static_cast<std::uint32_t>(max_side)));
    if (p < 0)
        p = 0.1 + 0.8 * rng.unit();
    cfc::BipartiteGraph h(nl, nr);
    for (int l = 0; l < nl; ++l)
        for (int r = 0; r < nr; ++r)
            if (rng.unit() < p)
                h.add_edge(l, r);
    return h;
}

inline bool is_proper(const cfc::Graph& g, const cfc::EdgeColoring& c) {
    for (int v = 0; v < g.vertex_count(); ++v) {
        std::set<int> seen;
        for (const auto& inc : g.incident(v)) {
            if (!c.is_assigned(inc.edge))
                return false;
            if (!seen.insert(c.color(inc.edge)).second)
                return false;
        }
    }
    return true;
}

} // namespace testutil
