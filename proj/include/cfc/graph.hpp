#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cfc {

struct Edge {
    int u = -1;
    int v = -1;
    friend bool operator==(const Edge&, const Edge&) = default;
};

// Immutable simple undirected graph. Vertices are 0..n-1; edge ids are
// 0..m-1 assigned lexicographically by (min endpoint, max endpoint), which
// every downstream module relies on for reproducibility.
class Graph {
public:
    struct Incidence {
        int neighbor;
        int edge;
    };

    Graph() = default;
    Graph(int vertex_count, std::vector<Edge> edges);

    int vertex_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    Edge edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
    const std::vector<Edge>& edges() const { return edges_; }

    int degree(int v) const {
        return adj_offset_[static_cast<std::size_t>(v) + 1] - adj_offset_[static_cast<std::size_t>(v)];
    }

    // Incidences sorted by neighbor id.
    std::span<const Incidence> incident(int v) const {
        auto lo = static_cast<std::size_t>(adj_offset_[static_cast<std::size_t>(v)]);
        auto hi = static_cast<std::size_t>(adj_offset_[static_cast<std::size_t>(v) + 1]);
        return {adj_.data() + lo, hi - lo};
    }

    std::optional<int> find_edge(int u, int v) const;

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<int> adj_offset_;
    std::vector<Incidence> adj_;
};

struct DegreeStats {
    int max_degree = 0;
    int min_degree = 0;
    std::vector<int> histogram; // histogram[d] = #vertices of degree d; sums to n
};

Graph complete_graph(int n);
Graph gnp_random(int n, double p, std::uint64_t seed);

// Simple d-regular graph from the pairing model; defective pairs (loops,
// duplicates) are repaired by random switches, with a retry budget.
Graph random_regular(int n, int d, std::uint64_t seed);

DegreeStats degree_stats(const Graph& g);

// delta - (Delta - 2*sqrt(Delta)*(ln Delta)^(3/4)), truncated toward zero.
// Nonnegative iff the graph is nearly regular. Requires Delta >= 2.
int near_regularity_gap(const Graph& g);

// Text format: "p cf <n> <m>" header, then "e <u> <v>" lines with 0-based
// ids and u < v. Lines starting with 'c' are comments.
Graph read_graph(std::istream& in);
Graph read_graph(const std::string& path);
void write_graph(const Graph& g, std::ostream& out);
void write_graph(const Graph& g, const std::string& path);

} // namespace cfc
