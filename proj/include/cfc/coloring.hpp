#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "cfc/graph.hpp"

namespace cfc {

inline constexpr int kUncolored = -1;

enum class Mode { Closed, Open };

std::string to_string(Mode mode);

// Partial or total assignment of colors to edge ids, with palette accounting.
class EdgeColoring {
public:
    EdgeColoring() = default;
    explicit EdgeColoring(int edge_count)
        : colors_(static_cast<std::size_t>(edge_count), kUncolored) {}

    int size() const { return static_cast<int>(colors_.size()); }
    int color(int e) const { return colors_[static_cast<std::size_t>(e)]; }
    bool is_assigned(int e) const { return color(e) != kUncolored; }
    void set(int e, int color);
    void clear(int e);
    bool total() const { return assigned_ == size(); }
    int assigned_count() const { return assigned_; }
    // Sorted distinct colors in use.
    std::vector<int> palette() const;
    int color_count() const { return static_cast<int>(use_count_.size()); }

    friend bool operator==(const EdgeColoring& a, const EdgeColoring& b) {
        return a.colors_ == b.colors_;
    }

private:
    std::vector<int> colors_;
    std::map<int, int> use_count_;
    int assigned_ = 0;
};

inline int color_count(const EdgeColoring& c) { return c.color_count(); }

struct EdgeStatus {
    bool satisfied = false;
    int witness = -1; // smallest uniquely occurring color; -1 iff unsatisfied
};

struct SatisfactionReport {
    Mode mode = Mode::Closed;
    std::vector<EdgeStatus> per_edge;
    std::vector<int> unsatisfied; // edge ids, ascending
    int colors_used = 0;
    bool conflict_free() const { return unsatisfied.empty(); }
};

// All edges incident to an endpoint of e, including e itself. Sorted ids.
std::vector<int> closed_neighborhood(const Graph& g, int e);

// Closed mode counts colors over the closed neighborhood; open mode over the
// same set minus e itself. Uncolored edges are transparent. Open mode on an
// isolated edge is a domain error.
EdgeStatus is_satisfied(const Graph& g, const EdgeColoring& c, int e, Mode mode);

// Structural preconditions (no isolated vertices; additionally no isolated
// edges in open mode) are reported by throwing, never as unsatisfied edges.
SatisfactionReport verify(const Graph& g, const EdgeColoring& c, Mode mode);

struct ResidualGraph {
    Graph graph;                  // same vertex set, unsatisfied edges only
    std::vector<int> parent_edge; // residual edge id -> original edge id
};

ResidualGraph unsatisfied_subgraph(const Graph& g, const EdgeColoring& c, Mode mode);

// Text format: one "<u> <v> <color>" line per assigned edge; absent edges are
// uncolored. 'c' lines are comments.
EdgeColoring read_coloring(const Graph& g, std::istream& in);
EdgeColoring read_coloring(const Graph& g, const std::string& path);
void write_coloring(const Graph& g, const EdgeColoring& c, std::ostream& out);
void write_coloring(const Graph& g, const EdgeColoring& c, const std::string& path);

} // namespace cfc
