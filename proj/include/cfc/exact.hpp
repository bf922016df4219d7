#pragma once

#include <optional>
#include <stdexcept>

#include "cfc/coloring.hpp"
#include "cfc/graph.hpp"

namespace cfc {

struct SearchConfig {
    int max_colors = 0; // exact_cf_index stops past this budget; 0 = up to m
    long long node_limit = 500'000'000;
    bool symmetry_breaking = true;
    int edge_cap = 21; // refuse larger instances unless raised
};

enum class SearchOutcome {
    Found,     // witness coloring attached
    Exhausted, // no conflict-free coloring with q colors exists
    NodeLimit, // search abandoned; existence undecided
};

struct SearchResult {
    SearchOutcome outcome = SearchOutcome::Exhausted;
    std::optional<EdgeColoring> coloring;
    long long nodes = 0;
};

struct node_limit_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct edge_cap_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Depth-first search over edges in id order, colors canonicalized (a fresh
// color is tried only after all smaller ones). Backtracks as soon as some
// fully assigned neighborhood has no unique color.
SearchResult is_cf_colorable(const Graph& g, int q, Mode mode, const SearchConfig& cfg = {});

struct ExactResult {
    int index = 0;
    EdgeColoring witness;
    long long nodes = 0;
};

// Least q admitting a conflict-free coloring. Throws node_limit_error when
// the budget runs out before the answer is decided.
ExactResult exact_cf_index(const Graph& g, Mode mode, const SearchConfig& cfg = {});

} // namespace cfc
