#include "cfc/matching.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "cfc/common.hpp"

namespace cfc {

BipartiteGraph::BipartiteGraph(int left_size, int right_size) : right_(right_size) {
    require(left_size >= 0 && right_size >= 0, "bipartite: sizes must be nonnegative");
    adj_.resize(static_cast<std::size_t>(left_size));
}

void BipartiteGraph::add_edge(int left, int right, int tag) {
    require(left >= 0 && left < left_size(), "bipartite: left vertex out of range");
    require(right >= 0 && right < right_, "bipartite: right vertex out of range");
    adj_[static_cast<std::size_t>(left)].push_back({right, tag});
    ++edge_count_;
    sorted_ = false;
}

void BipartiteGraph::ensure_sorted() const {
    if (sorted_)
        return;
    for (auto& arcs : adj_)
        std::sort(arcs.begin(), arcs.end(),
                  [](const Arc& a, const Arc& b) { return a.to < b.to; });
    sorted_ = true;
}

const std::vector<BipartiteGraph::Arc>& BipartiteGraph::arcs(int left) const {
    ensure_sorted();
    return adj_[static_cast<std::size_t>(left)];
}

int BipartiteGraph::tag(int left, int right) const {
    for (const Arc& a : arcs(left))
        if (a.to == right)
            return a.tag;
    return -1;
}

BipartiteGraph BipartiteGraph::transposed() const {
    BipartiteGraph t(right_, left_size());
    for (int l = 0; l < left_size(); ++l)
        for (const Arc& a : arcs(l))
            t.add_edge(a.to, l, a.tag);
    return t;
}

int Matching::size() const {
    int s = 0;
    for (int r : mate_left)
        if (r >= 0)
            ++s;
    return s;
}

bool Matching::saturates_left() const {
    return std::all_of(mate_left.begin(), mate_left.end(), [](int r) { return r >= 0; });
}

bool Matching::saturates_right() const {
    return std::all_of(mate_right.begin(), mate_right.end(), [](int l) { return l >= 0; });
}

std::vector<std::pair<int, int>> Matching::pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int l = 0; l < static_cast<int>(mate_left.size()); ++l)
        if (mate_left[static_cast<std::size_t>(l)] >= 0)
            out.emplace_back(l, mate_left[static_cast<std::size_t>(l)]);
    return out;
}

namespace {

constexpr int kInf = std::numeric_limits<int>::max();

struct HopcroftKarp {
    const BipartiteGraph& h;
    std::vector<int>& mate_l;
    std::vector<int>& mate_r;
    std::vector<int> dist;

    bool bfs() {
        std::queue<int> q;
        dist.assign(mate_l.size(), kInf);
        for (int l = 0; l < static_cast<int>(mate_l.size()); ++l)
            if (mate_l[static_cast<std::size_t>(l)] < 0) {
                dist[static_cast<std::size_t>(l)] = 0;
                q.push(l);
            }
        bool reachable_free_right = false;
        while (!q.empty()) {
            int l = q.front();
            q.pop();
            for (const auto& arc : h.arcs(l)) {
                int l2 = mate_r[static_cast<std::size_t>(arc.to)];
                if (l2 < 0) {
                    reachable_free_right = true;
                } else if (dist[static_cast<std::size_t>(l2)] == kInf) {
                    dist[static_cast<std::size_t>(l2)] = dist[static_cast<std::size_t>(l)] + 1;
                    q.push(l2);
                }
            }
        }
        return reachable_free_right;
    }

    bool dfs(int l) {
        for (const auto& arc : h.arcs(l)) {
            int l2 = mate_r[static_cast<std::size_t>(arc.to)];
            if (l2 < 0 || (dist[static_cast<std::size_t>(l2)] ==
                               dist[static_cast<std::size_t>(l)] + 1 &&
                           dfs(l2))) {
                mate_l[static_cast<std::size_t>(l)] = arc.to;
                mate_r[static_cast<std::size_t>(arc.to)] = l;
                return true;
            }
        }
        dist[static_cast<std::size_t>(l)] = kInf;
        return false;
    }
};

bool validate_matching(const BipartiteGraph& h, const Matching& m) {
    if (static_cast<int>(m.mate_left.size()) != h.left_size() ||
        static_cast<int>(m.mate_right.size()) != h.right_size())
        return false;
    for (int l = 0; l < h.left_size(); ++l) {
        int r = m.mate_left[static_cast<std::size_t>(l)];
        if (r < 0)
            continue;
        if (r >= h.right_size() || m.mate_right[static_cast<std::size_t>(r)] != l)
            return false;
        bool edge_exists = false;
        for (const auto& arc : h.arcs(l))
            if (arc.to == r) {
                edge_exists = true;
                break;
            }
        if (!edge_exists)
            return false;
    }
    for (int r = 0; r < h.right_size(); ++r) {
        int l = m.mate_right[static_cast<std::size_t>(r)];
        if (l >= 0 && (l >= h.left_size() || m.mate_left[static_cast<std::size_t>(l)] != r))
            return false;
    }
    return true;
}

// One augmenting-path attempt from a free left vertex (Kuhn).
bool try_augment(const BipartiteGraph& h, int l, std::vector<char>& visited_right,
                 std::vector<int>& mate_l, std::vector<int>& mate_r) {
    for (const auto& arc : h.arcs(l)) {
        if (visited_right[static_cast<std::size_t>(arc.to)])
            continue;
        visited_right[static_cast<std::size_t>(arc.to)] = 1;
        int l2 = mate_r[static_cast<std::size_t>(arc.to)];
        if (l2 < 0 || try_augment(h, l2, visited_right, mate_l, mate_r)) {
            mate_l[static_cast<std::size_t>(l)] = arc.to;
            mate_r[static_cast<std::size_t>(arc.to)] = l;
            return true;
        }
    }
    return false;
}

} // namespace

Matching maximum_matching(const BipartiteGraph& h) {
    Matching m;
    m.mate_left.assign(static_cast<std::size_t>(h.left_size()), -1);
    m.mate_right.assign(static_cast<std::size_t>(h.right_size()), -1);
    HopcroftKarp hk{h, m.mate_left, m.mate_right, {}};
    while (hk.bfs())
        for (int l = 0; l < h.left_size(); ++l)
            if (m.mate_left[static_cast<std::size_t>(l)] < 0)
                hk.dfs(l);
    return m;
}

std::variant<Matching, HallViolator> saturating_matching(const BipartiteGraph& h, Side side) {
    if (side == Side::Right) {
        auto result = saturating_matching(h.transposed(), Side::Left);
        if (auto* m = std::get_if<Matching>(&result)) {
            Matching swapped;
            swapped.mate_left = std::move(m->mate_right);
            swapped.mate_right = std::move(m->mate_left);
            return swapped;
        }
        return std::get<HallViolator>(result);
    }

    Matching m = maximum_matching(h);
    if (m.saturates_left())
        return m;

    // Alternating reachability from one unmatched left vertex. Every right
    // vertex reached must be matched (otherwise the matching was not maximum),
    // so |N(S)| = |S| - 1.
    int start = -1;
    for (int l = 0; l < h.left_size(); ++l)
        if (m.mate_left[static_cast<std::size_t>(l)] < 0) {
            start = l;
            break;
        }
    std::vector<char> in_s(static_cast<std::size_t>(h.left_size()), 0);
    std::vector<char> in_n(static_cast<std::size_t>(h.right_size()), 0);
    std::queue<int> q;
    q.push(start);
    in_s[static_cast<std::size_t>(start)] = 1;
    while (!q.empty()) {
        int l = q.front();
        q.pop();
        for (const auto& arc : h.arcs(l)) {
            if (in_n[static_cast<std::size_t>(arc.to)])
                continue;
            in_n[static_cast<std::size_t>(arc.to)] = 1;
            int l2 = m.mate_right[static_cast<std::size_t>(arc.to)];
            internal_check(l2 >= 0, "saturating_matching: augmenting path missed");
            if (!in_s[static_cast<std::size_t>(l2)]) {
                in_s[static_cast<std::size_t>(l2)] = 1;
                q.push(l2);
            }
        }
    }
    HallViolator violator;
    for (int l = 0; l < h.left_size(); ++l)
        if (in_s[static_cast<std::size_t>(l)])
            violator.witness_set.push_back(l);
    for (int r = 0; r < h.right_size(); ++r)
        if (in_n[static_cast<std::size_t>(r)])
            violator.neighborhood.push_back(r);
    internal_check(violator.neighborhood.size() + 1 == violator.witness_set.size(),
                   "saturating_matching: violator cardinality");
    return violator;
}

Matching augment_preserving(const BipartiteGraph& h, Matching m) {
    require(validate_matching(h, m), "augment_preserving: input is not a matching of H");
    std::vector<char> visited(static_cast<std::size_t>(h.right_size()));
    for (int l = 0; l < h.left_size(); ++l) {
        if (m.mate_left[static_cast<std::size_t>(l)] >= 0)
            continue;
        std::fill(visited.begin(), visited.end(), 0);
        try_augment(h, l, visited, m.mate_left, m.mate_right);
    }
    return m;
}

bool has_augmenting_path(const BipartiteGraph& h, const Matching& m) {
    // BFS over alternating levels from all free left vertices.
    std::vector<char> seen_l(static_cast<std::size_t>(h.left_size()), 0);
    std::vector<char> seen_r(static_cast<std::size_t>(h.right_size()), 0);
    std::queue<int> q;
    for (int l = 0; l < h.left_size(); ++l)
        if (m.mate_left[static_cast<std::size_t>(l)] < 0) {
            q.push(l);
            seen_l[static_cast<std::size_t>(l)] = 1;
        }
    while (!q.empty()) {
        int l = q.front();
        q.pop();
        for (const auto& arc : h.arcs(l)) {
            if (seen_r[static_cast<std::size_t>(arc.to)])
                continue;
            seen_r[static_cast<std::size_t>(arc.to)] = 1;
            int l2 = m.mate_right[static_cast<std::size_t>(arc.to)];
            if (l2 < 0)
                return true;
            if (!seen_l[static_cast<std::size_t>(l2)]) {
                seen_l[static_cast<std::size_t>(l2)] = 1;
                q.push(l2);
            }
        }
    }
    return false;
}

} // namespace cfc
