#include "cfc/complete.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <utility>

#include "cfc/common.hpp"

namespace cfc {

namespace {

// Edge id of (u,v), u < v, under complete_graph(n)'s lexicographic indexing.
int complete_edge_id(int n, int u, int v) {
    if (u > v)
        std::swap(u, v);
    long long base = static_cast<long long>(u) * (2LL * n - u - 1) / 2;
    return static_cast<int>(base + (v - u - 1));
}

using PairSet = std::set<std::pair<int, int>>;

std::pair<int, int> norm(int a, int b) {
    return {std::min(a, b), std::max(a, b)};
}

void validate_matching_on(const BlockedMatching& m, const std::vector<int>& verts) {
    std::set<int> allowed(verts.begin(), verts.end());
    std::set<int> used;
    for (const VertexPair& p : m) {
        require(p.a != p.b, "blocked matching: degenerate pair");
        require(allowed.count(p.a) && allowed.count(p.b),
                "blocked matching: vertex out of range");
        require(used.insert(p.a).second && used.insert(p.b).second,
                "blocked matching: pairs must be disjoint");
    }
}

// Maximum matching of K[verts] minus the blocked pairs, by exhaustive search
// over the at most 15 candidate edges (|verts| <= 6). Take-first DFS order
// makes the result deterministic. A maximum matching here leaves at most one
// vertex uncovered, so every edge of K[verts] touches it.
std::vector<std::pair<int, int>> base_matching(const std::vector<int>& verts,
                                               const PairSet& blocked) {
    std::vector<std::pair<int, int>> candidates;
    for (std::size_t i = 0; i < verts.size(); ++i)
        for (std::size_t j = i + 1; j < verts.size(); ++j)
            if (!blocked.count(norm(verts[i], verts[j])))
                candidates.emplace_back(verts[i], verts[j]);

    std::vector<std::pair<int, int>> best, current;
    std::set<int> used;
    auto dfs = [&](auto&& self, std::size_t idx) -> void {
        if (current.size() > best.size())
            best = current;
        if (idx == candidates.size())
            return;
        auto [a, b] = candidates[idx];
        if (!used.count(a) && !used.count(b)) {
            used.insert(a);
            used.insert(b);
            current.push_back(candidates[idx]);
            self(self, idx + 1);
            current.pop_back();
            used.erase(a);
            used.erase(b);
        }
        self(self, idx + 1);
    };
    dfs(dfs, 0);
    return best;
}

struct Builder {
    int n;
    EdgeColoring coloring;
    PairSet originally_blocked;

    void paint(int u, int v, int color) {
        internal_check(!originally_blocked.count(norm(u, v)),
                       "complete construction tried to color a blocked edge");
        coloring.set(complete_edge_id(n, u, v), color);
    }

    void recurse(const std::vector<int>& verts, const BlockedMatching& blocked,
                 std::span<const int> palette) {
        const int nv = static_cast<int>(verts.size());
        internal_check(nv >= 3, "complete construction recursed below order 3");
        internal_check(static_cast<int>(palette.size()) >= ceil_log2(nv - 1),
                       "complete construction ran out of palette");

        if (nv <= 6) {
            PairSet blocked_set;
            for (const VertexPair& p : blocked)
                blocked_set.insert(norm(p.a, p.b));
            auto matching = base_matching(verts, blocked_set);
            std::set<int> covered;
            for (auto& [a, b] : matching) {
                covered.insert(a);
                covered.insert(b);
            }
            internal_check(static_cast<int>(covered.size()) >= nv - 1,
                           "base matching left two vertices uncovered");
            internal_check(static_cast<int>(matching.size()) <=
                               static_cast<int>(palette.size()),
                           "base matching exceeds palette");
            int next = 0;
            for (auto& [a, b] : matching)
                paint(a, b, palette[static_cast<std::size_t>(next++)]);
            return;
        }

        BlockedMatching extended = extend_matching_on(verts, blocked);
        PartitionChoice part = choose_partition_on(verts, extended);

        // Perfect matching inside V1 over consecutive sorted vertices; V1 is a
        // transversal of the extended pairs, so none of these can be blocked.
        PairSet extended_set;
        for (const VertexPair& p : extended)
            extended_set.insert(norm(p.a, p.b));
        BlockedMatching inner;
        for (std::size_t i = 0; i + 1 < part.side_even.size(); i += 2) {
            int a = part.side_even[i], b = part.side_even[i + 1];
            internal_check(!extended_set.count(norm(a, b)),
                           "spanning matching hit a blocked edge");
            paint(a, b, palette[0]);
            inner.push_back({a, b});
        }

        recurse(part.side_even, inner, palette.subspan(1));

        BlockedMatching rest_blocked;
        const VertexPair first = extended.front();
        bool a_in_rest = std::binary_search(part.side_rest.begin(), part.side_rest.end(), first.a);
        bool b_in_rest = std::binary_search(part.side_rest.begin(), part.side_rest.end(), first.b);
        if (a_in_rest && b_in_rest)
            rest_blocked.push_back(first);
        recurse(part.side_rest, rest_blocked, palette.subspan(1));
    }

    static BlockedMatching extend_matching_on(const std::vector<int>& verts,
                                              const BlockedMatching& blocked) {
        validate_matching_on(blocked, verts);
        BlockedMatching out;
        std::set<int> used;
        for (const VertexPair& p : blocked) {
            out.push_back({std::min(p.a, p.b), std::max(p.a, p.b)});
            used.insert(p.a);
            used.insert(p.b);
        }
        std::vector<int> free;
        for (int v : verts)
            if (!used.count(v))
                free.push_back(v);
        const std::size_t target = verts.size() / 2;
        for (std::size_t i = 0; i + 1 < free.size() && out.size() < target; i += 2)
            out.push_back({free[i], free[i + 1]});
        internal_check(out.size() == target, "matching extension fell short");
        return out;
    }

    // Proof branches: for n % 4 == 2 drop the first pair's a-vertex from the
    // transversal; otherwise take the whole transversal, padding with the
    // leftover vertex when floor(n/2) is odd.
    static PartitionChoice choose_partition_on(const std::vector<int>& verts,
                                               const BlockedMatching& extended) {
        const int nv = static_cast<int>(verts.size());
        require(nv >= 7, "choose_partition: needs order at least 7");
        require(static_cast<int>(extended.size()) == nv / 2,
                "choose_partition: matching must have floor(n/2) pairs");
        validate_matching_on(extended, verts);

        std::set<int> matched;
        std::vector<int> transversal;
        for (const VertexPair& p : extended) {
            transversal.push_back(p.a);
            matched.insert(p.a);
            matched.insert(p.b);
        }
        std::vector<int> leftover;
        for (int v : verts)
            if (!matched.count(v))
                leftover.push_back(v);
        internal_check(static_cast<int>(leftover.size()) == nv % 2,
                       "choose_partition: unexpected leftover count");

        PartitionChoice out;
        out.case_tag = nv % 4;
        std::vector<int> v1;
        if (nv % 4 == 2) {
            v1.assign(transversal.begin() + 1, transversal.end());
        } else {
            v1 = transversal;
            if ((nv / 2) % 2 == 1) {
                internal_check(!leftover.empty(), "choose_partition: no pad vertex");
                v1.push_back(leftover.front());
            }
        }
        std::sort(v1.begin(), v1.end());
        out.side_even = v1;
        std::set<int> in_v1(v1.begin(), v1.end());
        for (int v : verts)
            if (!in_v1.count(v))
                out.side_rest.push_back(v);

        const int n1 = static_cast<int>(out.side_even.size());
        const int n2 = static_cast<int>(out.side_rest.size());
        internal_check(n1 % 2 == 0, "partition: |V1| must be even");
        internal_check(n1 >= 3 && n2 >= 3, "partition: sides too small");
        internal_check(std::minmax(n1, n2) ==
                           std::minmax(even_half(nv), nv - even_half(nv)),
                       "partition: sizes disagree with the half function");
        for (std::size_t i = 1; i < extended.size(); ++i)
            internal_check(in_v1.count(extended[i].a) && !in_v1.count(extended[i].b),
                           "partition: pair placement broken");
        internal_check(!in_v1.count(extended.front().b), "partition: b1 left V2");
        return out;
    }
};

} // namespace

int even_half(int n) {
    require(n >= 1, "even_half: n must be positive");
    int half = n / 2;
    return 2 * ((half + 1) / 2);
}

int larger_half(int n) {
    return std::max(even_half(n), n - even_half(n));
}

BlockedMatching extend_matching(int n, const BlockedMatching& blocked) {
    std::vector<int> verts(static_cast<std::size_t>(n));
    std::iota(verts.begin(), verts.end(), 0);
    return Builder::extend_matching_on(verts, blocked);
}

PartitionChoice choose_partition(int n, const BlockedMatching& extended) {
    std::vector<int> verts(static_cast<std::size_t>(n));
    std::iota(verts.begin(), verts.end(), 0);
    return Builder::choose_partition_on(verts, extended);
}

EdgeColoring color_complete_partial(int n, const BlockedMatching& blocked,
                                    std::span<const int> palette) {
    require(n >= 3, "color_complete_partial: n must be at least 3");
    require(static_cast<int>(palette.size()) >= ceil_log2(n - 1),
            "color_complete_partial: palette too small");
    for (int c : palette)
        require(c >= 0, "color_complete_partial: colors must be nonnegative");

    std::vector<int> verts(static_cast<std::size_t>(n));
    std::iota(verts.begin(), verts.end(), 0);
    validate_matching_on(blocked, verts);

    Builder builder{n, EdgeColoring(static_cast<int>(static_cast<long long>(n) * (n - 1) / 2)), {}};
    for (const VertexPair& p : blocked)
        builder.originally_blocked.insert(norm(p.a, p.b));
    builder.recurse(verts, blocked, palette);
    return std::move(builder.coloring);
}

EdgeColoring cf_color_complete(int n) {
    require(n >= 2, "cf_color_complete: n must be at least 2");
    if (n == 2) {
        EdgeColoring c(1);
        c.set(0, 0);
        return c;
    }
    const int partial_colors = ceil_log2(n - 1);
    std::vector<int> palette(static_cast<std::size_t>(partial_colors));
    std::iota(palette.begin(), palette.end(), 0);
    EdgeColoring c = color_complete_partial(n, {}, palette);
    for (int e = 0; e < c.size(); ++e)
        if (!c.is_assigned(e))
            c.set(e, partial_colors);
    return c;
}

} // namespace cfc
