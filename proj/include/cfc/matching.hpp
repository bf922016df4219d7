#pragma once

#include <variant>
#include <vector>

namespace cfc {

// Bipartite graph over local left/right indices. Edges may carry an integer
// tag (callers use it to remember originating edge ids).
class BipartiteGraph {
public:
    struct Arc {
        int to;
        int tag;
    };

    BipartiteGraph(int left_size, int right_size);
    void add_edge(int left, int right, int tag = -1);

    int left_size() const { return static_cast<int>(adj_.size()); }
    int right_size() const { return right_; }
    int edge_count() const { return edge_count_; }
    // Arcs of a left vertex, sorted by right endpoint.
    const std::vector<Arc>& arcs(int left) const;
    int tag(int left, int right) const; // -1 if no such edge
    BipartiteGraph transposed() const;

private:
    void ensure_sorted() const;

    int right_ = 0;
    int edge_count_ = 0;
    mutable std::vector<std::vector<Arc>> adj_;
    mutable bool sorted_ = true;
};

struct Matching {
    std::vector<int> mate_left;  // per left vertex, matched right or -1
    std::vector<int> mate_right; // per right vertex, matched left or -1

    int size() const;
    bool saturates_left() const;
    bool saturates_right() const;
    std::vector<std::pair<int, int>> pairs() const; // (left, right), sorted by left
};

// Certificate that no matching saturates the requested side: a witness set S
// on that side with |N(S)| < |S|.
struct HallViolator {
    std::vector<int> witness_set;  // sorted vertices of the saturated-side request
    std::vector<int> neighborhood; // sorted N(S) on the opposite side
};

enum class Side { Left, Right };

// Maximum-cardinality matching (Hopcroft-Karp). Deterministic: neighbors are
// scanned in sorted order.
Matching maximum_matching(const BipartiteGraph& h);

// Either a matching saturating the requested side, or a Hall violator
// extracted from the alternating-reachability set of an unmatched vertex.
std::variant<Matching, HallViolator> saturating_matching(const BipartiteGraph& h, Side side);

// Grows m to a maximum matching one augmenting path at a time; every vertex
// saturated by m stays saturated.
Matching augment_preserving(const BipartiteGraph& h, Matching m);

// Berge certificate: true iff an alternating search finds an augmenting path.
bool has_augmenting_path(const BipartiteGraph& h, const Matching& m);

} // namespace cfc
