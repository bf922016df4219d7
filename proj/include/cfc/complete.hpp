#pragma once

#include <span>
#include <vector>

#include "cfc/coloring.hpp"
#include "cfc/graph.hpp"

namespace cfc {

struct VertexPair {
    int a = -1;
    int b = -1;
    friend bool operator==(const VertexPair&, const VertexPair&) = default;
};

// Pairwise disjoint vertex pairs whose edges must stay uncolored.
using BlockedMatching = std::vector<VertexPair>;

// Even value closest to n/2 from above: 2*ceil(floor(n/2)/2).
int even_half(int n);
// max(even_half(n), n - even_half(n)); the larger recursion side.
int larger_half(int n);

// Grows a blocked matching to exactly floor(n/2) disjoint pairs, pairing the
// unmatched vertices greedily in id order. Pairs are normalized (a < b) and
// listed input-first.
BlockedMatching extend_matching(int n, const BlockedMatching& blocked);

struct PartitionChoice {
    std::vector<int> side_even; // V1: even size, gets the spanning matching
    std::vector<int> side_rest; // V2
    int case_tag = 0;           // n mod 4 branch
};

// Splits [0,n) so that the first element of every extended pair except the
// first lands in side_even, the second elements in side_rest, with
// {|V1|,|V2|} = {even_half(n), n-even_half(n)} and |V1| even. Requires n >= 7
// and exactly floor(n/2) pairs.
PartitionChoice choose_partition(int n, const BlockedMatching& extended);

// Partial coloring of K_n that satisfies every edge (closed mode), colors no
// blocked edge, and uses at most ceil(log2(n-1)) palette colors, taken from
// the front of `palette`. Edge ids follow complete_graph(n).
EdgeColoring color_complete_partial(int n, const BlockedMatching& blocked,
                                    std::span<const int> palette);

// Total conflict-free coloring of K_n with at most ceil(log2(n-1)) + 1 colors
// (one color for n = 2).
EdgeColoring cf_color_complete(int n);

} // namespace cfc
