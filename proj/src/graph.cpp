#include "cfc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "cfc/common.hpp"
#include "cfc/rng.hpp"

namespace cfc {

namespace {

constexpr std::uint64_t kTagGnp = 0x67'6e'70;     // "gnp"
constexpr std::uint64_t kTagRegular = 0x72'65'67; // "reg"

long long pair_count(int n) {
    return static_cast<long long>(n) * (n - 1) / 2;
}

} // namespace

Graph::Graph(int vertex_count, std::vector<Edge> edges) : n_(vertex_count) {
    require(vertex_count >= 0, "graph: vertex count must be nonnegative");
    for (auto& e : edges) {
        if (e.u > e.v)
            std::swap(e.u, e.v);
        require(e.u >= 0 && e.v < n_, "graph: vertex id out of range");
        require(e.u != e.v, "graph: self-loops are not allowed");
    }
    if (!std::is_sorted(edges.begin(), edges.end(),
                        [](const Edge& a, const Edge& b) {
                            return std::pair(a.u, a.v) < std::pair(b.u, b.v);
                        })) {
        std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
            return std::pair(a.u, a.v) < std::pair(b.u, b.v);
        });
    }
    for (std::size_t i = 1; i < edges.size(); ++i)
        require(!(edges[i] == edges[i - 1]), "graph: duplicate edge");
    edges_ = std::move(edges);

    // Edges arrive in lexicographic order, so each adjacency bucket comes out
    // sorted by neighbor without a per-bucket sort.
    adj_offset_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (const Edge& e : edges_) {
        ++adj_offset_[static_cast<std::size_t>(e.u) + 1];
        ++adj_offset_[static_cast<std::size_t>(e.v) + 1];
    }
    for (std::size_t v = 0; v < static_cast<std::size_t>(n_); ++v)
        adj_offset_[v + 1] += adj_offset_[v];
    adj_.resize(edges_.size() * 2);
    std::vector<int> cursor(adj_offset_.begin(), adj_offset_.end() - 1);
    for (int e = 0; e < edge_count(); ++e) {
        const Edge& ed = edges_[static_cast<std::size_t>(e)];
        adj_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(ed.u)]++)] = {ed.v, e};
        adj_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(ed.v)]++)] = {ed.u, e};
    }
}

std::optional<int> Graph::find_edge(int u, int v) const {
    if (u == v || u < 0 || v < 0 || u >= n_ || v >= n_)
        return std::nullopt;
    auto inc = incident(u);
    auto it = std::lower_bound(inc.begin(), inc.end(), v,
                               [](const Incidence& a, int b) { return a.neighbor < b; });
    if (it != inc.end() && it->neighbor == v)
        return it->edge;
    return std::nullopt;
}

Graph complete_graph(int n) {
    require(n >= 1, "complete_graph: n must be positive");
    require(pair_count(n) <= std::numeric_limits<int>::max(),
            "complete_graph: edge count overflows");
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(pair_count(n)));
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            edges.push_back({u, v});
    return Graph(n, std::move(edges));
}

Graph gnp_random(int n, double p, std::uint64_t seed) {
    require(n >= 1, "gnp_random: n must be positive");
    require(p >= 0.0 && p <= 1.0, "gnp_random: p must be in [0,1]");
    if (p <= 0.0)
        return Graph(n, {});
    if (p >= 1.0)
        return complete_graph(n);

    const long long total = pair_count(n);
    rng::Stream stream(rng::key(seed, kTagGnp));
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(static_cast<double>(total) * p * 1.05) + 16);

    // Geometric skipping: each included pair index is reached by jumping
    // Geom(p) positions ahead, giving exactly Binomial(total, p) edges.
    const double log_q = std::log1p(-p);
    long long k = -1;
    while (true) {
        double skip = std::floor(std::log1p(-stream.unit()) / log_q);
        if (!(skip < static_cast<double>(total)))
            break;
        k += 1 + static_cast<long long>(skip);
        if (k >= total)
            break;
        // Decode pair index k into (u,v) with u < v, lexicographic order.
        double nd = static_cast<double>(n);
        auto row_start = [n](long long r) {
            return r * (2 * static_cast<long long>(n) - r - 1) / 2;
        };
        long long u = static_cast<long long>(
            std::floor(((2.0 * nd - 1.0) - std::sqrt((2.0 * nd - 1.0) * (2.0 * nd - 1.0) -
                                                     8.0 * static_cast<double>(k))) /
                       2.0));
        if (u < 0)
            u = 0;
        while (u > 0 && row_start(u) > k)
            --u;
        while (row_start(u + 1) <= k)
            ++u;
        long long v = u + 1 + (k - row_start(u));
        edges.push_back({static_cast<int>(u), static_cast<int>(v)});
    }
    return Graph(n, std::move(edges));
}

namespace {

// Repairs loops and duplicate edges in a stub pairing by random switches.
// Every accepted switch removes at least one defect and never creates one.
bool repair_pairing(std::vector<std::pair<int, int>>& pairs, int n,
                    rng::Stream& stream, long long budget) {
    auto edge_key = [n](int a, int b) {
        if (a > b)
            std::swap(a, b);
        return static_cast<long long>(a) * n + b;
    };
    std::unordered_map<long long, int> count;
    count.reserve(pairs.size() * 2);
    for (auto& [a, b] : pairs)
        ++count[edge_key(a, b)];

    std::vector<std::size_t> worklist;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [a, b] = pairs[i];
        if (a == b || count[edge_key(a, b)] > 1)
            worklist.push_back(i);
    }

    while (!worklist.empty()) {
        std::size_t i = worklist.back();
        auto [a, b] = pairs[i];
        if (a != b && count[edge_key(a, b)] == 1) { // fixed by an earlier switch
            worklist.pop_back();
            continue;
        }
        if (--budget <= 0)
            return false;
        std::size_t j = stream.below(static_cast<std::uint32_t>(pairs.size()));
        if (j == i)
            continue;
        auto [c, d] = pairs[j];
        if (stream.next() & 1)
            std::swap(c, d);
        if (a == c || b == d)
            continue;
        long long old1 = edge_key(a, b), old2 = edge_key(pairs[j].first, pairs[j].second);
        long long new1 = edge_key(a, c), new2 = edge_key(b, d);
        --count[old1];
        --count[old2];
        if (new1 != new2 && count[new1] == 0 && count[new2] == 0) {
            ++count[new1];
            ++count[new2];
            pairs[i] = {std::min(a, c), std::max(a, c)};
            pairs[j] = {std::min(b, d), std::max(b, d)};
        } else {
            ++count[old1];
            ++count[old2];
        }
    }
    return true;
}

} // namespace

Graph random_regular(int n, int d, std::uint64_t seed) {
    require(n >= 1, "random_regular: n must be positive");
    require(d >= 0 && d < n, "random_regular: need 0 <= d < n");
    require((static_cast<long long>(n) * d) % 2 == 0, "random_regular: n*d must be even");
    if (d == 0)
        return Graph(n, {});
    const long long m = static_cast<long long>(n) * d / 2;
    require(m <= std::numeric_limits<int>::max(), "random_regular: edge count overflows");

    rng::Stream stream(rng::key(seed, kTagRegular));
    constexpr int kAttempts = 50;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        std::vector<int> stubs;
        stubs.reserve(static_cast<std::size_t>(m) * 2);
        for (int v = 0; v < n; ++v)
            for (int k = 0; k < d; ++k)
                stubs.push_back(v);
        stream.shuffle(stubs);
        std::vector<std::pair<int, int>> pairs;
        pairs.reserve(static_cast<std::size_t>(m));
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2)
            pairs.emplace_back(std::min(stubs[i], stubs[i + 1]),
                               std::max(stubs[i], stubs[i + 1]));
        if (!repair_pairing(pairs, n, stream, 400 * m + 10000))
            continue;
        std::vector<Edge> edges;
        edges.reserve(pairs.size());
        for (auto& [a, b] : pairs)
            edges.push_back({a, b});
        return Graph(n, std::move(edges));
    }
    throw std::runtime_error("random_regular: retry budget exhausted (parameters may be "
                             "infeasible or extremely unlucky)");
}

DegreeStats degree_stats(const Graph& g) {
    DegreeStats s;
    const int n = g.vertex_count();
    if (n == 0)
        return s;
    s.min_degree = g.degree(0);
    for (int v = 0; v < n; ++v) {
        int d = g.degree(v);
        s.max_degree = std::max(s.max_degree, d);
        s.min_degree = std::min(s.min_degree, d);
    }
    s.histogram.assign(static_cast<std::size_t>(s.max_degree) + 1, 0);
    for (int v = 0; v < n; ++v)
        ++s.histogram[static_cast<std::size_t>(g.degree(v))];
    return s;
}

int near_regularity_gap(const Graph& g) {
    DegreeStats s = degree_stats(g);
    if (s.max_degree < 2)
        throw std::domain_error("near_regularity_gap: requires max degree >= 2");
    double delta = static_cast<double>(s.max_degree);
    double threshold = delta - 2.0 * std::sqrt(delta) * std::pow(std::log(delta), 0.75);
    return static_cast<int>(std::trunc(static_cast<double>(s.min_degree) - threshold));
}

Graph read_graph(std::istream& in) {
    std::string line;
    int n = -1;
    long long m = -1;
    std::vector<Edge> edges;
    long long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == 'c')
            continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "p") {
            std::string fmt;
            if (!(ls >> fmt >> n >> m) || fmt != "cf" || n < 0 || m < 0)
                throw std::runtime_error("graph file: malformed header at line " +
                                         std::to_string(line_no));
            edges.reserve(static_cast<std::size_t>(m));
        } else if (tag == "e") {
            if (n < 0)
                throw std::runtime_error("graph file: edge before header at line " +
                                         std::to_string(line_no));
            int u, v;
            if (!(ls >> u >> v))
                throw std::runtime_error("graph file: malformed edge at line " +
                                         std::to_string(line_no));
            if (u == v)
                throw std::runtime_error("graph file: self-loop at line " +
                                         std::to_string(line_no));
            if (u > v || u < 0 || v >= n)
                throw std::runtime_error("graph file: bad edge endpoints at line " +
                                         std::to_string(line_no));
            edges.push_back({u, v});
        } else {
            throw std::runtime_error("graph file: unknown line type at line " +
                                     std::to_string(line_no));
        }
    }
    if (n < 0)
        throw std::runtime_error("graph file: missing header");
    if (static_cast<long long>(edges.size()) != m)
        throw std::runtime_error("graph file: header declares " + std::to_string(m) +
                                 " edges, found " + std::to_string(edges.size()));
    try {
        return Graph(n, std::move(edges));
    } catch (const std::invalid_argument& ex) {
        throw std::runtime_error(std::string("graph file: ") + ex.what());
    }
}

Graph read_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open graph file: " + path);
    return read_graph(in);
}

void write_graph(const Graph& g, std::ostream& out) {
    out << "p cf " << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (const Edge& e : g.edges())
        out << "e " << e.u << ' ' << e.v << '\n';
}

void write_graph(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open graph file for writing: " + path);
    write_graph(g, out);
    out.flush();
    if (!out)
        throw std::runtime_error("failed writing graph file: " + path);
}

} // namespace cfc
