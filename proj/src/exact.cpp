#include "cfc/exact.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "cfc/common.hpp"

namespace cfc {

namespace {

struct Searcher {
    const Graph& g;
    Mode mode;
    int q;
    long long node_limit;
    bool symmetry;

    int m;
    std::vector<std::vector<int>> neighborhood; // per edge, ids whose colors count
    std::vector<std::vector<int>> completes_at; // edges whose neighborhood closes at id
    std::vector<int> color;
    std::vector<int> freq;
    long long nodes = 0;
    bool limit_hit = false;

    explicit Searcher(const Graph& graph, Mode md, int colors, const SearchConfig& cfg)
        : g(graph), mode(md), q(colors), node_limit(cfg.node_limit),
          symmetry(cfg.symmetry_breaking), m(graph.edge_count()) {
        neighborhood.resize(static_cast<std::size_t>(m));
        completes_at.resize(static_cast<std::size_t>(m));
        color.assign(static_cast<std::size_t>(m), kUncolored);
        freq.assign(static_cast<std::size_t>(q), 0);
        for (int e = 0; e < m; ++e) {
            std::vector<int> nb = closed_neighborhood(g, e);
            if (mode == Mode::Open)
                nb.erase(std::remove(nb.begin(), nb.end(), e), nb.end());
            internal_check(!nb.empty(), "search: empty neighborhood");
            int last = *std::max_element(nb.begin(), nb.end());
            completes_at[static_cast<std::size_t>(last)].push_back(e);
            neighborhood[static_cast<std::size_t>(e)] = std::move(nb);
        }
    }

    bool satisfied(int e) {
        for (int f : neighborhood[static_cast<std::size_t>(e)])
            ++freq[static_cast<std::size_t>(color[static_cast<std::size_t>(f)])];
        bool ok = false;
        for (int f : neighborhood[static_cast<std::size_t>(e)]) {
            int c = color[static_cast<std::size_t>(f)];
            ok = ok || freq[static_cast<std::size_t>(c)] == 1;
            // reset lazily below
        }
        for (int f : neighborhood[static_cast<std::size_t>(e)])
            freq[static_cast<std::size_t>(color[static_cast<std::size_t>(f)])] = 0;
        return ok;
    }

    bool dfs(int idx, int used) {
        if (idx == m)
            return true;
        int limit = symmetry ? std::min(q - 1, used) : q - 1;
        for (int c = 0; c <= limit; ++c) {
            if (++nodes > node_limit) {
                limit_hit = true;
                return false;
            }
            color[static_cast<std::size_t>(idx)] = c;
            bool ok = true;
            for (int e : completes_at[static_cast<std::size_t>(idx)])
                if (!satisfied(e)) {
                    ok = false;
                    break;
                }
            if (ok && dfs(idx + 1, std::max(used, c + 1)))
                return true;
            if (limit_hit)
                break;
        }
        color[static_cast<std::size_t>(idx)] = kUncolored;
        return false;
    }
};

void check_preconditions(const Graph& g, Mode mode, const SearchConfig& cfg) {
    if (g.edge_count() > cfg.edge_cap)
        throw edge_cap_error("exact search: graph has " + std::to_string(g.edge_count()) +
                             " edges, above the configured cap of " +
                             std::to_string(cfg.edge_cap));
    for (int v = 0; v < g.vertex_count(); ++v)
        require(g.degree(v) > 0, "exact search: graph has an isolated vertex");
    if (mode == Mode::Open)
        for (int e = 0; e < g.edge_count(); ++e) {
            Edge ed = g.edge(e);
            require(g.degree(ed.u) > 1 || g.degree(ed.v) > 1,
                    "exact search: open mode forbids isolated edges");
        }
}

} // namespace

SearchResult is_cf_colorable(const Graph& g, int q, Mode mode, const SearchConfig& cfg) {
    require(q >= 1, "is_cf_colorable: need at least one color");
    check_preconditions(g, mode, cfg);
    SearchResult result;
    if (g.edge_count() == 0) {
        result.outcome = SearchOutcome::Found;
        result.coloring = EdgeColoring(0);
        return result;
    }
    Searcher searcher(g, mode, q, cfg);
    bool found = searcher.dfs(0, 0);
    result.nodes = searcher.nodes;
    if (searcher.limit_hit) {
        result.outcome = SearchOutcome::NodeLimit;
        return result;
    }
    if (found) {
        EdgeColoring c(g.edge_count());
        for (int e = 0; e < g.edge_count(); ++e)
            c.set(e, searcher.color[static_cast<std::size_t>(e)]);
        result.outcome = SearchOutcome::Found;
        result.coloring = std::move(c);
    }
    return result;
}

ExactResult exact_cf_index(const Graph& g, Mode mode, const SearchConfig& cfg) {
    check_preconditions(g, mode, cfg);
    ExactResult out;
    if (g.edge_count() == 0) {
        out.witness = EdgeColoring(0);
        return out;
    }
    // All-distinct colors are always conflict-free, so q = m terminates.
    require(cfg.max_colors >= 0, "exact_cf_index: negative color budget");
    const int q_max = cfg.max_colors > 0 ? std::min(cfg.max_colors, g.edge_count())
                                         : g.edge_count();
    for (int q = 1; q <= q_max; ++q) {
        SearchResult r = is_cf_colorable(g, q, mode, cfg);
        out.nodes += r.nodes;
        if (r.outcome == SearchOutcome::NodeLimit)
            throw node_limit_error("exact_cf_index: node limit reached at q = " +
                                   std::to_string(q) + " before existence was decided");
        if (r.outcome == SearchOutcome::Found) {
            out.index = q;
            out.witness = std::move(*r.coloring);
            return out;
        }
    }
    throw std::runtime_error("exact_cf_index: no conflict-free coloring within the "
                             "max_colors budget of " +
                             std::to_string(cfg.max_colors));
}

} // namespace cfc
