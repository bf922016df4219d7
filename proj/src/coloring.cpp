#include "cfc/coloring.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cfc/common.hpp"

namespace cfc {

std::string to_string(Mode mode) {
    return mode == Mode::Closed ? "closed" : "open";
}

void EdgeColoring::set(int e, int color) {
    require(color >= 0, "coloring: color ids must be nonnegative");
    int& slot = colors_[static_cast<std::size_t>(e)];
    if (slot == color)
        return;
    if (slot != kUncolored) {
        auto it = use_count_.find(slot);
        if (--it->second == 0)
            use_count_.erase(it);
    } else {
        ++assigned_;
    }
    slot = color;
    ++use_count_[color];
}

void EdgeColoring::clear(int e) {
    int& slot = colors_[static_cast<std::size_t>(e)];
    if (slot == kUncolored)
        return;
    auto it = use_count_.find(slot);
    if (--it->second == 0)
        use_count_.erase(it);
    slot = kUncolored;
    --assigned_;
}

std::vector<int> EdgeColoring::palette() const {
    std::vector<int> out;
    out.reserve(use_count_.size());
    for (const auto& [color, count] : use_count_)
        out.push_back(color);
    return out;
}

std::vector<int> closed_neighborhood(const Graph& g, int e) {
    require(e >= 0 && e < g.edge_count(), "closed_neighborhood: invalid edge id");
    Edge ed = g.edge(e);
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(g.degree(ed.u) + g.degree(ed.v)));
    for (const auto& inc : g.incident(ed.u))
        out.push_back(inc.edge);
    for (const auto& inc : g.incident(ed.v))
        out.push_back(inc.edge);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

EdgeStatus is_satisfied(const Graph& g, const EdgeColoring& c, int e, Mode mode) {
    require(e >= 0 && e < g.edge_count(), "is_satisfied: invalid edge id");
    require(c.size() == g.edge_count(), "is_satisfied: coloring size mismatch");
    Edge ed = g.edge(e);
    if (mode == Mode::Open && g.degree(ed.u) == 1 && g.degree(ed.v) == 1)
        throw std::domain_error("is_satisfied: open mode is undefined for isolated edges");

    std::map<int, int> freq;
    for (int f : closed_neighborhood(g, e)) {
        if (mode == Mode::Open && f == e)
            continue;
        if (c.is_assigned(f))
            ++freq[c.color(f)];
    }
    for (const auto& [color, count] : freq)
        if (count == 1)
            return {true, color};
    return {false, -1};
}

namespace {

// Per-edge satisfaction for every edge at once. Counts per-vertex color
// frequencies so each edge costs O(palette) instead of O(deg u + deg v);
// falls back to local recounting when the dense table would be too large.
std::vector<EdgeStatus> satisfied_flags(const Graph& g, const EdgeColoring& c, Mode mode) {
    require(c.size() == g.edge_count(), "verify: coloring size mismatch");
    const int n = g.vertex_count();
    const int m = g.edge_count();
    std::vector<EdgeStatus> status(static_cast<std::size_t>(m));
    if (m == 0)
        return status;

    if (mode == Mode::Open) {
        for (int e = 0; e < m; ++e) {
            Edge ed = g.edge(e);
            if (g.degree(ed.u) == 1 && g.degree(ed.v) == 1)
                throw std::domain_error("open mode is undefined for isolated edges");
        }
    }

    const std::vector<int> palette = c.palette();
    const int pal = static_cast<int>(palette.size());
    if (pal == 0)
        return status; // nothing colored, nothing satisfied

    const long long cells = static_cast<long long>(n) * pal;
    if (cells <= (1LL << 27)) {
        std::vector<int> color_index(static_cast<std::size_t>(m), -1);
        for (int e = 0; e < m; ++e)
            if (c.is_assigned(e)) {
                auto it = std::lower_bound(palette.begin(), palette.end(), c.color(e));
                color_index[static_cast<std::size_t>(e)] =
                    static_cast<int>(it - palette.begin());
            }
        std::vector<int> count(static_cast<std::size_t>(cells), 0);
        for (int e = 0; e < m; ++e) {
            int k = color_index[static_cast<std::size_t>(e)];
            if (k < 0)
                continue;
            Edge ed = g.edge(e);
            ++count[static_cast<std::size_t>(ed.u) * pal + static_cast<std::size_t>(k)];
            ++count[static_cast<std::size_t>(ed.v) * pal + static_cast<std::size_t>(k)];
        }
        for (int e = 0; e < m; ++e) {
            Edge ed = g.edge(e);
            const int* cu = count.data() + static_cast<std::size_t>(ed.u) * pal;
            const int* cv = count.data() + static_cast<std::size_t>(ed.v) * pal;
            const int own = color_index[static_cast<std::size_t>(e)];
            const int own_adjust = (own >= 0) ? (mode == Mode::Closed ? 1 : 2) : 0;
            for (int k = 0; k < pal; ++k) {
                int tot = cu[k] + cv[k] - (k == own ? own_adjust : 0);
                if (tot == 1) {
                    status[static_cast<std::size_t>(e)] = {true, palette[static_cast<std::size_t>(k)]};
                    break;
                }
            }
        }
    } else {
        for (int e = 0; e < m; ++e)
            status[static_cast<std::size_t>(e)] = is_satisfied(g, c, e, mode);
    }
    return status;
}

} // namespace

SatisfactionReport verify(const Graph& g, const EdgeColoring& c, Mode mode) {
    for (int v = 0; v < g.vertex_count(); ++v)
        require(g.degree(v) > 0,
                "verify: graph has an isolated vertex (" + std::to_string(v) + ")");
    SatisfactionReport report;
    report.mode = mode;
    report.per_edge = satisfied_flags(g, c, mode);
    for (int e = 0; e < g.edge_count(); ++e)
        if (!report.per_edge[static_cast<std::size_t>(e)].satisfied)
            report.unsatisfied.push_back(e);
    report.colors_used = c.color_count();
    return report;
}

ResidualGraph unsatisfied_subgraph(const Graph& g, const EdgeColoring& c, Mode mode) {
    std::vector<EdgeStatus> status = satisfied_flags(g, c, mode);
    ResidualGraph out;
    std::vector<Edge> edges;
    for (int e = 0; e < g.edge_count(); ++e)
        if (!status[static_cast<std::size_t>(e)].satisfied) {
            edges.push_back(g.edge(e));
            out.parent_edge.push_back(e);
        }
    out.graph = Graph(g.vertex_count(), std::move(edges));
    return out;
}

EdgeColoring read_coloring(const Graph& g, std::istream& in) {
    EdgeColoring c(g.edge_count());
    std::string line;
    long long line_no = 0;
    std::vector<bool> seen(static_cast<std::size_t>(g.edge_count()), false);
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == 'c')
            continue;
        std::istringstream ls(line);
        int u, v, color;
        if (!(ls >> u >> v >> color))
            throw std::runtime_error("coloring file: malformed line " + std::to_string(line_no));
        if (color < 0)
            throw std::runtime_error("coloring file: negative color at line " +
                                     std::to_string(line_no));
        auto e = g.find_edge(u, v);
        if (!e)
            throw std::runtime_error("coloring file: (" + std::to_string(u) + "," +
                                     std::to_string(v) + ") is not an edge, line " +
                                     std::to_string(line_no));
        if (seen[static_cast<std::size_t>(*e)])
            throw std::runtime_error("coloring file: duplicate assignment at line " +
                                     std::to_string(line_no));
        seen[static_cast<std::size_t>(*e)] = true;
        c.set(*e, color);
    }
    return c;
}

EdgeColoring read_coloring(const Graph& g, const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open coloring file: " + path);
    return read_coloring(g, in);
}

void write_coloring(const Graph& g, const EdgeColoring& c, std::ostream& out) {
    require(c.size() == g.edge_count(), "write_coloring: coloring size mismatch");
    for (int e = 0; e < g.edge_count(); ++e)
        if (c.is_assigned(e)) {
            Edge ed = g.edge(e);
            out << ed.u << ' ' << ed.v << ' ' << c.color(e) << '\n';
        }
}

void write_coloring(const Graph& g, const EdgeColoring& c, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open coloring file for writing: " + path);
    write_coloring(g, c, out);
    out.flush();
    if (!out)
        throw std::runtime_error("failed writing coloring file: " + path);
}

} // namespace cfc
