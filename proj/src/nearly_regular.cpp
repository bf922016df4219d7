#include "cfc/nearly_regular.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "cfc/common.hpp"
#include "cfc/matching.hpp"
#include "cfc/rng.hpp"

namespace cfc {

namespace {

constexpr std::uint64_t kStageDecompose = 0xdec0;
constexpr std::uint64_t kStageLabels = 0x1abe1;
constexpr std::uint64_t kStageMatchOrder = 0x04d3;

int draw_class(std::uint64_t seed, int edge, std::uint32_t counter, int s) {
    return static_cast<int>(
        rng::to_below(rng::key(seed, kStageDecompose, edge, counter), static_cast<std::uint32_t>(s)));
}

std::uint8_t label_from_unit(double u, double eps, double delta) {
    const double p1 = 0.25 - 3.0 * eps / delta;
    const double p2 = 0.25;
    const double p3 = 6.0 * eps / delta;
    if (u < p1)
        return 1;
    if (u < p1 + p2)
        return 2;
    if (u < p1 + p2 + p3)
        return 3;
    return 4;
}

std::uint8_t draw_label(std::uint64_t seed, int layer, int vertex, std::uint32_t counter,
                        double eps, double delta) {
    double u = rng::to_unit(rng::key(seed, kStageLabels, layer, vertex, counter));
    return label_from_unit(u, eps, delta);
}

} // namespace

EpsilonInfo layer_epsilon(int layer_max_degree, PipelineConfig::Profile profile) {
    if (layer_max_degree <= 0)
        return {0.0, false};
    const double delta = static_cast<double>(layer_max_degree);
    const double paper = std::sqrt(delta) * std::log(delta);
    const double cap = delta / 12.0;
    if (paper <= cap)
        return {paper, false};
    if (profile == PipelineConfig::Profile::Paper)
        throw std::domain_error(
            "paper epsilon profile infeasible at layer max degree " +
            std::to_string(layer_max_degree) + " (needs sqrt(D)ln(D) <= D/12)");
    return {cap, true};
}

VertexLabels sample_partition(int layer, const Graph& layer_graph, const PipelineConfig& cfg) {
    const int n = layer_graph.vertex_count();
    VertexLabels labels(static_cast<std::size_t>(n), 4);
    const int delta_i = degree_stats(layer_graph).max_degree;
    if (delta_i == 0)
        return labels; // degenerate layer, every vertex idle
    EpsilonInfo eps = layer_epsilon(delta_i, cfg.profile);
    for (int v = 0; v < n; ++v)
        labels[static_cast<std::size_t>(v)] =
            draw_label(cfg.seed, layer, v, 0, eps.value, static_cast<double>(delta_i));
    return labels;
}

std::vector<PartitionViolation> check_partition_events(const Graph& layer_graph,
                                                       const VertexLabels& labels,
                                                       double epsilon) {
    require(static_cast<int>(labels.size()) == layer_graph.vertex_count(),
            "check_partition_events: label count mismatch");
    std::vector<PartitionViolation> out;
    if (layer_graph.edge_count() == 0)
        return out;
    const double delta_i = static_cast<double>(degree_stats(layer_graph).max_degree);
    const double t_low = delta_i / 4.0 - 2.0 * epsilon;
    const double t_high = delta_i / 4.0 + epsilon;
    const int n = layer_graph.vertex_count();
    for (int v = 0; v < n; ++v) {
        int to1 = 0, to2 = 0, to13 = 0;
        for (const auto& inc : layer_graph.incident(v)) {
            int lab = labels[static_cast<std::size_t>(inc.neighbor)];
            to1 += lab == 1;
            to2 += lab == 2;
            to13 += lab == 1 || lab == 3;
        }
        if (!(to1 < t_low))
            out.push_back({v, PartitionViolation::Kind::Side1TooLarge});
        if (!(to2 > t_low))
            out.push_back({v, PartitionViolation::Kind::Side2TooSmall});
        if (!(to13 > t_high))
            out.push_back({v, PartitionViolation::Kind::Side13TooSmall});
        if (!(to2 < t_high))
            out.push_back({v, PartitionViolation::Kind::Side2TooLarge});
    }
    return out;
}

LayerMatching build_layer_matching(const Graph& layer_graph, const VertexLabels& labels,
                                   std::optional<std::uint64_t> shuffle_seed) {
    require(static_cast<int>(labels.size()) == layer_graph.vertex_count(),
            "build_layer_matching: label count mismatch");
    const int n = layer_graph.vertex_count();
    LayerMatching out;
    out.saturated.assign(static_cast<std::size_t>(n), 0);

    std::vector<int> ones, threes;
    std::vector<int> left_index(static_cast<std::size_t>(n), -1);  // V1 then V3
    std::vector<int> right_index(static_cast<std::size_t>(n), -1); // V2
    std::vector<int> left_vertex, right_vertex;
    for (int v = 0; v < n; ++v) {
        if (labels[static_cast<std::size_t>(v)] == 1)
            ones.push_back(v);
        else if (labels[static_cast<std::size_t>(v)] == 3)
            threes.push_back(v);
        else if (labels[static_cast<std::size_t>(v)] == 2) {
            right_index[static_cast<std::size_t>(v)] = static_cast<int>(right_vertex.size());
            right_vertex.push_back(v);
        }
    }
    if (shuffle_seed) {
        rng::Stream order(*shuffle_seed);
        order.shuffle(ones);
        order.shuffle(threes);
    }
    const int side1 = static_cast<int>(ones.size());
    for (int v : ones) {
        left_index[static_cast<std::size_t>(v)] = static_cast<int>(left_vertex.size());
        left_vertex.push_back(v);
    }
    for (int v : threes) {
        left_index[static_cast<std::size_t>(v)] = static_cast<int>(left_vertex.size());
        left_vertex.push_back(v);
    }

    BipartiteGraph narrow(side1, static_cast<int>(right_vertex.size()));
    BipartiteGraph wide(static_cast<int>(left_vertex.size()), static_cast<int>(right_vertex.size()));
    for (int e = 0; e < layer_graph.edge_count(); ++e) {
        Edge ed = layer_graph.edge(e);
        int lu = labels[static_cast<std::size_t>(ed.u)];
        int lv = labels[static_cast<std::size_t>(ed.v)];
        int a = ed.u, b = ed.v;
        if (lv == 1 || lv == 3) {
            std::swap(a, b);
            std::swap(lu, lv);
        }
        if ((lu == 1 || lu == 3) && lv == 2) {
            int l = left_index[static_cast<std::size_t>(a)];
            int r = right_index[static_cast<std::size_t>(b)];
            wide.add_edge(l, r, e);
            if (lu == 1)
                narrow.add_edge(l, r, e);
        }
    }

    Matching m1;
    auto attempt = saturating_matching(narrow, Side::Left);
    if (auto* sat = std::get_if<Matching>(&attempt)) {
        m1 = std::move(*sat);
    } else {
        m1 = maximum_matching(narrow);
        out.side1_saturated = false;
    }
    m1.mate_left.resize(left_vertex.size(), -1);

    Matching m = augment_preserving(wide, std::move(m1));
    for (int l = 0; l < side1; ++l)
        internal_check(m.mate_left[static_cast<std::size_t>(l)] >= 0 || !out.side1_saturated,
                       "layer matching: augmentation unmatched a V1 vertex");
    out.side2_saturated = m.saturates_right();

    for (auto [l, r] : m.pairs()) {
        int e = wide.tag(l, r);
        internal_check(e >= 0, "layer matching: matched pair without an edge tag");
        out.edges.push_back(e);
        out.saturated[static_cast<std::size_t>(left_vertex[static_cast<std::size_t>(l)])] = 1;
        out.saturated[static_cast<std::size_t>(right_vertex[static_cast<std::size_t>(r)])] = 1;
    }
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

std::vector<char> satisfaction_from_layers(const Graph& g,
                                           const std::vector<std::vector<int>>& layer_matchings) {
    require(layer_matchings.size() <= 63, "satisfaction_from_layers: too many layers");
    const int n = g.vertex_count();
    const int m = g.edge_count();
    std::vector<std::uint64_t> mask(static_cast<std::size_t>(n), 0);
    std::vector<char> in_matching(static_cast<std::size_t>(m), 0);
    for (std::size_t i = 0; i < layer_matchings.size(); ++i)
        for (int e : layer_matchings[i]) {
            require(e >= 0 && e < m, "satisfaction_from_layers: bad edge id");
            Edge ed = g.edge(e);
            mask[static_cast<std::size_t>(ed.u)] |= 1ULL << i;
            mask[static_cast<std::size_t>(ed.v)] |= 1ULL << i;
            in_matching[static_cast<std::size_t>(e)] = 1;
        }
    std::vector<char> satisfied(static_cast<std::size_t>(m), 0);
    for (int e = 0; e < m; ++e) {
        Edge ed = g.edge(e);
        satisfied[static_cast<std::size_t>(e)] =
            in_matching[static_cast<std::size_t>(e)] ||
            (mask[static_cast<std::size_t>(ed.u)] ^ mask[static_cast<std::size_t>(ed.v)]) != 0;
    }
    return satisfied;
}

namespace {

bool color_free_at(const Graph& g, const std::vector<int>& col, int v, int color) {
    if (color < 0)
        return false;
    for (const auto& inc : g.incident(v))
        if (col[static_cast<std::size_t>(inc.edge)] == color)
            return false;
    return true;
}

int smallest_free_color(const Graph& g, const std::vector<int>& col, int v) {
    std::vector<char> used(static_cast<std::size_t>(g.degree(v)) + 2, 0);
    for (const auto& inc : g.incident(v)) {
        int c = col[static_cast<std::size_t>(inc.edge)];
        if (c >= 0 && c < static_cast<int>(used.size()))
            used[static_cast<std::size_t>(c)] = 1;
    }
    int c = 0;
    while (used[static_cast<std::size_t>(c)])
        ++c;
    return c;
}

// Misra-Gries: fan construction, cd-path inversion, fan rotation.
void vizing_color_edge(const Graph& g, std::vector<int>& col, int e) {
    const int x = g.edge(e).u;
    std::vector<int> fan{g.edge(e).v};
    bool extended = true;
    while (extended) {
        extended = false;
        for (const auto& inc : g.incident(x)) {
            int c = col[static_cast<std::size_t>(inc.edge)];
            if (c < 0 || !color_free_at(g, col, fan.back(), c))
                continue;
            if (std::find(fan.begin(), fan.end(), inc.neighbor) != fan.end())
                continue;
            fan.push_back(inc.neighbor);
            extended = true;
        }
    }
    const int c = smallest_free_color(g, col, x);
    const int d = smallest_free_color(g, col, fan.back());

    if (c != d) {
        // Flip the maximal path of alternating d/c edges starting at x.
        int cur = x, prev_edge = -1, want = d;
        while (true) {
            int next_edge = -1, next_vertex = -1;
            for (const auto& inc : g.incident(cur))
                if (inc.edge != prev_edge && col[static_cast<std::size_t>(inc.edge)] == want) {
                    next_edge = inc.edge;
                    next_vertex = inc.neighbor;
                    break;
                }
            if (next_edge < 0)
                break;
            col[static_cast<std::size_t>(next_edge)] = (want == d) ? c : d;
            cur = next_vertex;
            prev_edge = next_edge;
            want = (want == d) ? c : d;
        }
    }

    std::size_t w = 0;
    while (w < fan.size() && !color_free_at(g, col, fan[w], d))
        ++w;
    internal_check(w < fan.size(), "vizing: no rotatable fan prefix");
    for (std::size_t i = 0; i < w; ++i) {
        auto cur_edge = g.find_edge(x, fan[i]);
        auto next_edge = g.find_edge(x, fan[i + 1]);
        internal_check(cur_edge && next_edge, "vizing: fan edge missing");
        col[static_cast<std::size_t>(*cur_edge)] = col[static_cast<std::size_t>(*next_edge)];
    }
    auto last = g.find_edge(x, fan[w]);
    internal_check(last.has_value(), "vizing: fan edge missing");
    col[static_cast<std::size_t>(*last)] = d;
}

void check_proper(const Graph& g, const std::vector<int>& col) {
    for (int v = 0; v < g.vertex_count(); ++v) {
        std::vector<int> seen;
        for (const auto& inc : g.incident(v)) {
            int c = col[static_cast<std::size_t>(inc.edge)];
            internal_check(c >= 0, "fallback: uncolored edge");
            seen.push_back(c);
        }
        std::sort(seen.begin(), seen.end());
        internal_check(std::adjacent_find(seen.begin(), seen.end()) == seen.end(),
                       "fallback: coloring is not proper");
    }
}

} // namespace

EdgeColoring fallback_satisfy(const Graph& residual, int first_color,
                              PipelineConfig::Fallback kind) {
    require(first_color >= 0, "fallback_satisfy: first color must be nonnegative");
    const int m = residual.edge_count();
    std::vector<int> col(static_cast<std::size_t>(m), -1);
    if (m > 0) {
        if (kind == PipelineConfig::Fallback::ProperGreedy) {
            for (int e = 0; e < m; ++e) {
                Edge ed = residual.edge(e);
                std::vector<char> used(
                    static_cast<std::size_t>(residual.degree(ed.u) + residual.degree(ed.v)) + 2, 0);
                for (const auto& inc : residual.incident(ed.u)) {
                    int c = col[static_cast<std::size_t>(inc.edge)];
                    if (c >= 0)
                        used[static_cast<std::size_t>(c)] = 1;
                }
                for (const auto& inc : residual.incident(ed.v)) {
                    int c = col[static_cast<std::size_t>(inc.edge)];
                    if (c >= 0)
                        used[static_cast<std::size_t>(c)] = 1;
                }
                int c = 0;
                while (used[static_cast<std::size_t>(c)])
                    ++c;
                col[static_cast<std::size_t>(e)] = c;
            }
        } else {
            for (int e = 0; e < m; ++e)
                vizing_color_edge(residual, col, e);
            const int delta = degree_stats(residual).max_degree;
            for (int c : col)
                internal_check(c <= delta, "vizing: exceeded Delta+1 colors");
        }
        check_proper(residual, col);
    }

    // Dense remap so the fresh palette is exactly an interval.
    std::vector<int> distinct(col);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    EdgeColoring out(m);
    for (int e = 0; e < m; ++e) {
        auto it = std::lower_bound(distinct.begin(), distinct.end(),
                                   col[static_cast<std::size_t>(e)]);
        out.set(e, first_color + static_cast<int>(it - distinct.begin()));
    }
    return out;
}

Decomposition decompose_edges(const Graph& g, const PipelineConfig& cfg) {
    const DegreeStats stats = degree_stats(g);
    require(stats.max_degree >= 2, "decompose_edges: requires max degree >= 2");
    const int n = g.vertex_count();
    const int m = g.edge_count();
    const int s = cfg.class_count_override > 0 ? cfg.class_count_override
                                               : ceil_log2(stats.max_degree);
    require(s >= 1 && s <= 63, "decompose_edges: class count out of range");

    Decomposition d;
    d.class_count = s;
    d.edge_class.assign(static_cast<std::size_t>(m), 0);
    d.class_degree.assign(static_cast<std::size_t>(s),
                          std::vector<int>(static_cast<std::size_t>(n), 0));
    if (s == 1) {
        for (int v = 0; v < n; ++v)
            d.class_degree[0][static_cast<std::size_t>(v)] = g.degree(v);
        d.strict = true;
        return d;
    }

    std::vector<std::uint32_t> counter(static_cast<std::size_t>(m), 0);
    for (int e = 0; e < m; ++e) {
        int k = draw_class(cfg.seed, e, 0, s);
        d.edge_class[static_cast<std::size_t>(e)] = k;
        Edge ed = g.edge(e);
        ++d.class_degree[static_cast<std::size_t>(k)][static_cast<std::size_t>(ed.u)];
        ++d.class_degree[static_cast<std::size_t>(k)][static_cast<std::size_t>(ed.v)];
    }

    const double mean = static_cast<double>(stats.max_degree) / s;
    const double slack = 3.0 * std::sqrt(static_cast<double>(stats.max_degree));
    const double lo = mean - slack;
    const double hi = mean + slack;
    const long long budget =
        static_cast<long long>(cfg.resample_budget_factor * static_cast<double>(n));

    auto vertex_violates = [&](int v) {
        for (int i = 0; i < s; ++i) {
            int deg = d.class_degree[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)];
            if (deg > hi || deg < lo)
                return true;
        }
        return false;
    };

    for (int round = 0; round < cfg.max_rounds; ++round) {
        std::vector<char> redraw(static_cast<std::size_t>(m), 0);
        bool any = false;
        for (int v = 0; v < n; ++v)
            if (vertex_violates(v)) {
                any = true;
                for (const auto& inc : g.incident(v))
                    redraw[static_cast<std::size_t>(inc.edge)] = 1;
            }
        if (!any) {
            d.strict = true;
            break;
        }
        if (d.resamples >= budget)
            break;
        for (int e = 0; e < m; ++e) {
            if (!redraw[static_cast<std::size_t>(e)])
                continue;
            Edge ed = g.edge(e);
            int old = d.edge_class[static_cast<std::size_t>(e)];
            --d.class_degree[static_cast<std::size_t>(old)][static_cast<std::size_t>(ed.u)];
            --d.class_degree[static_cast<std::size_t>(old)][static_cast<std::size_t>(ed.v)];
            int k = draw_class(cfg.seed, e, ++counter[static_cast<std::size_t>(e)], s);
            d.edge_class[static_cast<std::size_t>(e)] = k;
            ++d.class_degree[static_cast<std::size_t>(k)][static_cast<std::size_t>(ed.u)];
            ++d.class_degree[static_cast<std::size_t>(k)][static_cast<std::size_t>(ed.v)];
            ++d.resamples;
        }
    }
    if (!d.strict) {
        bool clean = true;
        for (int v = 0; v < n && clean; ++v)
            clean = !vertex_violates(v);
        d.strict = clean;
    }
    for (int i = 0; i < s; ++i)
        for (int v = 0; v < n; ++v) {
            double deg = d.class_degree[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)];
            d.max_over = std::max(d.max_over, deg - hi);
            d.max_under = std::max(d.max_under, lo - deg);
        }
    return d;
}

namespace {

struct LayerContext {
    Graph graph;
    std::vector<int> parent_edge;
    int max_degree = 0;
    EpsilonInfo eps;
    bool band_feasible = true; // an integer degree can satisfy both Y2 events
    VertexLabels labels;
    std::vector<std::uint32_t> counter;
    std::vector<PartitionViolation> violations;
    LayerMatching matching;
    std::vector<int> matching_global;
};

std::optional<int> all_t_max_count(const Graph& g, const std::vector<LayerContext>& layers) {
    const int s = static_cast<int>(layers.size());
    const int n = g.vertex_count();
    if (s > 16)
        return std::nullopt;
    const double cost = static_cast<double>(n) * (1ULL << s) *
                        std::max(1, degree_stats(g).max_degree);
    if (cost > 2e8)
        return std::nullopt;
    std::vector<std::uint32_t> must0(static_cast<std::size_t>(n), 0);
    std::vector<std::uint32_t> must1(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < s; ++i)
        for (int v = 0; v < n; ++v) {
            int lab = layers[static_cast<std::size_t>(i)].labels[static_cast<std::size_t>(v)];
            if (lab == 4)
                must0[static_cast<std::size_t>(v)] |= 1u << i;
            else if (lab == 1 || lab == 2)
                must1[static_cast<std::size_t>(v)] |= 1u << i;
            // label 3 is compatible with both branches
        }
    int worst = 0;
    for (int v = 0; v < n; ++v) {
        for (std::uint32_t t = 0; t < (1u << s); ++t) {
            int cnt = 0;
            for (const auto& inc : g.incident(v)) {
                std::uint32_t u = static_cast<std::uint32_t>(inc.neighbor);
                if ((t & must1[u]) == must1[u] && (t & must0[u]) == 0)
                    ++cnt;
            }
            worst = std::max(worst, cnt);
        }
    }
    return worst;
}

} // namespace

RunResult color_nearly_regular(const Graph& g, const PipelineConfig& cfg) {
    const int n = g.vertex_count();
    const int m = g.edge_count();
    require(m > 0, "color_nearly_regular: graph has no edges");
    for (int v = 0; v < n; ++v)
        require(g.degree(v) > 0, "color_nearly_regular: graph has an isolated vertex");

    const DegreeStats stats = degree_stats(g);
    RunReport report;
    report.seed = cfg.seed;
    report.max_degree = stats.max_degree;
    report.profile = cfg.profile == PipelineConfig::Profile::Paper ? "paper" : "scaled";

    EdgeColoring coloring(m);

    // Below any meaningful layer regime the fallback alone is the plan.
    if (stats.max_degree <= 4) {
        report.residual_max_degree = stats.max_degree;
        EdgeColoring fb = fallback_satisfy(g, 0, cfg.fallback);
        for (int e = 0; e < m; ++e)
            coloring.set(e, fb.color(e));
        report.colors_fallback = fb.color_count();
        report.colors_total = coloring.color_count();
        SatisfactionReport check = verify(g, coloring, Mode::Closed);
        internal_check(check.conflict_free(), "pipeline output failed verification");
        report.verified = true;
        return {std::move(coloring), report};
    }

    Decomposition decomp = decompose_edges(g, cfg);
    const int s = decomp.class_count;
    report.s = s;
    report.decomposition_strict = decomp.strict;
    report.edge_resamples = decomp.resamples;

    std::vector<LayerContext> layers(static_cast<std::size_t>(s));
    {
        std::vector<std::vector<Edge>> class_edges(static_cast<std::size_t>(s));
        std::vector<std::vector<int>> class_parent(static_cast<std::size_t>(s));
        for (int e = 0; e < m; ++e) {
            int k = decomp.edge_class[static_cast<std::size_t>(e)];
            class_edges[static_cast<std::size_t>(k)].push_back(g.edge(e));
            class_parent[static_cast<std::size_t>(k)].push_back(e);
        }
        for (int i = 0; i < s; ++i) {
            auto& layer = layers[static_cast<std::size_t>(i)];
            layer.graph = Graph(n, std::move(class_edges[static_cast<std::size_t>(i)]));
            layer.parent_edge = std::move(class_parent[static_cast<std::size_t>(i)]);
            layer.max_degree = degree_stats(layer.graph).max_degree;
            layer.eps = layer_epsilon(layer.max_degree, cfg.profile);
            report.epsilon_clamped = report.epsilon_clamped || layer.eps.clamped;
            layer.counter.assign(static_cast<std::size_t>(n), 0);
            layer.labels.assign(static_cast<std::size_t>(n), 4);
            if (layer.max_degree > 0) {
                const double t_low = layer.max_degree / 4.0 - 2.0 * layer.eps.value;
                const double t_high = layer.max_degree / 4.0 + layer.eps.value;
                // Both Y2 events demand an integer strictly inside (t_low, t_high);
                // when none exists the layer can never come out clean and
                // resampling it would only burn budget.
                double k_min = std::max(0.0, std::floor(t_low) + 1.0);
                layer.band_feasible = k_min < t_high;
                for (int v = 0; v < n; ++v)
                    layer.labels[static_cast<std::size_t>(v)] = draw_label(
                        cfg.seed, i, v, 0, layer.eps.value,
                        static_cast<double>(layer.max_degree));
            }
        }
    }

    const long long label_budget =
        static_cast<long long>(cfg.resample_budget_factor * static_cast<double>(n));

    auto refresh_violations = [&]() {
        for (auto& layer : layers)
            layer.violations =
                check_partition_events(layer.graph, layer.labels, layer.eps.value);
    };

    // Local resampling of the partition variables: a violated event at v is a
    // function of the labels of v's layer neighbors, so those get redrawn.
    auto fix_partition_events = [&](long long budget) {
        for (int round = 0; round < cfg.max_rounds; ++round) {
            refresh_violations();
            bool any = false;
            std::vector<std::vector<char>> redraw(
                static_cast<std::size_t>(s),
                std::vector<char>(static_cast<std::size_t>(n), 0));
            for (int i = 0; i < s; ++i) {
                auto& layer = layers[static_cast<std::size_t>(i)];
                if (!layer.band_feasible || layer.violations.empty())
                    continue;
                for (const auto& viol : layer.violations)
                    for (const auto& inc : layer.graph.incident(viol.vertex)) {
                        if (!redraw[static_cast<std::size_t>(i)]
                                   [static_cast<std::size_t>(inc.neighbor)]) {
                            redraw[static_cast<std::size_t>(i)]
                                  [static_cast<std::size_t>(inc.neighbor)] = 1;
                            any = true;
                        }
                    }
            }
            if (!any || report.label_resamples >= budget)
                return;
            for (int i = 0; i < s; ++i) {
                auto& layer = layers[static_cast<std::size_t>(i)];
                for (int v = 0; v < n; ++v)
                    if (redraw[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)]) {
                        layer.labels[static_cast<std::size_t>(v)] = draw_label(
                            cfg.seed, i, v, ++layer.counter[static_cast<std::size_t>(v)],
                            layer.eps.value, static_cast<double>(layer.max_degree));
                        ++report.label_resamples;
                    }
            }
        }
        refresh_violations();
    };

    auto rebuild_matchings = [&]() {
        for (int i = 0; i < s; ++i) {
            auto& layer = layers[static_cast<std::size_t>(i)];
            layer.matching = build_layer_matching(layer.graph, layer.labels,
                                                  rng::key(cfg.seed, kStageMatchOrder, i));
            layer.matching_global.clear();
            for (int e : layer.matching.edges)
                layer.matching_global.push_back(
                    layer.parent_edge[static_cast<std::size_t>(e)]);
            if (decomp.strict && layer.violations.empty() && layer.max_degree > 0 &&
                layer.max_degree / 4.0 - 2.0 * layer.eps.value > 0.0)
                internal_check(layer.matching.saturating(),
                               "clean layer must saturate V1 and V2 (Hall/Berge)");
        }
    };

    fix_partition_events(label_budget);

    const double residual_threshold =
        cfg.residual_multiplier * static_cast<double>(ceil_log2(stats.max_degree));
    std::vector<std::vector<int>> global_matchings;
    std::vector<char> satisfied;

    const long long gate_budget = label_budget;
    long long gate_resamples = 0;
    for (int round = 0;; ++round) {
        rebuild_matchings();
        global_matchings.clear();
        for (auto& layer : layers)
            global_matchings.push_back(layer.matching_global);
        satisfied = satisfaction_from_layers(g, global_matchings);

        std::vector<int> residual_degree(static_cast<std::size_t>(n), 0);
        for (int e = 0; e < m; ++e)
            if (!satisfied[static_cast<std::size_t>(e)]) {
                ++residual_degree[static_cast<std::size_t>(g.edge(e).u)];
                ++residual_degree[static_cast<std::size_t>(g.edge(e).v)];
            }
        std::vector<int> bad;
        for (int v = 0; v < n; ++v)
            if (residual_degree[static_cast<std::size_t>(v)] > residual_threshold)
                bad.push_back(v);
        if (bad.empty() || round >= cfg.max_rounds || gate_resamples >= gate_budget)
            break;
        // The per-vertex residual event depends on the labels of all of v's
        // neighbors across every layer; redraw exactly those.
        std::vector<char> mark(static_cast<std::size_t>(n), 0);
        for (int v : bad)
            for (const auto& inc : g.incident(v))
                mark[static_cast<std::size_t>(inc.neighbor)] = 1;
        for (int i = 0; i < s; ++i) {
            auto& layer = layers[static_cast<std::size_t>(i)];
            if (layer.max_degree == 0)
                continue;
            for (int v = 0; v < n; ++v)
                if (mark[static_cast<std::size_t>(v)]) {
                    layer.labels[static_cast<std::size_t>(v)] = draw_label(
                        cfg.seed, i, v, ++layer.counter[static_cast<std::size_t>(v)],
                        layer.eps.value, static_cast<double>(layer.max_degree));
                    ++gate_resamples;
                }
        }
        fix_partition_events(label_budget);
    }
    report.label_resamples += gate_resamples;

    for (auto& layer : layers) {
        report.clean_layers += layer.violations.empty();
        report.saturating_layers += layer.matching.saturating();
    }

    // Partial coloring: matching i gets color i.
    for (int i = 0; i < s; ++i)
        for (int e : layers[static_cast<std::size_t>(i)].matching_global)
            coloring.set(e, i);
    internal_check(coloring.color_count() <= s, "layer palette overflow");
    const int layer_colors = coloring.color_count();

    ResidualGraph residual = unsatisfied_subgraph(g, coloring, Mode::Closed);
    {
        std::size_t idx = 0;
        for (int e = 0; e < m; ++e) {
            bool in_residual =
                idx < residual.parent_edge.size() && residual.parent_edge[idx] == e;
            if (in_residual)
                ++idx;
            internal_check(in_residual == !satisfied[static_cast<std::size_t>(e)],
                           "satisfaction map disagrees with the verifier");
        }
    }
    report.residual_max_degree =
        residual.graph.edge_count() == 0 ? 0 : degree_stats(residual.graph).max_degree;

    EdgeColoring fb = fallback_satisfy(residual.graph, s, cfg.fallback);
    report.colors_fallback = fb.color_count();
    for (int e = 0; e < residual.graph.edge_count(); ++e)
        coloring.set(residual.parent_edge[static_cast<std::size_t>(e)], fb.color(e));

    const int final_color = s + report.colors_fallback;
    for (int e = 0; e < m; ++e)
        if (!coloring.is_assigned(e)) {
            coloring.set(e, final_color);
            report.colors_final = 1;
        }

    report.colors_layers = layer_colors;
    report.colors_total = coloring.color_count();
    internal_check(report.colors_total ==
                       report.colors_layers + report.colors_fallback + report.colors_final,
                   "color accounting mismatch");

    if (cfg.diagnostic_all_t)
        report.all_t_max_count = all_t_max_count(g, layers);

    SatisfactionReport check = verify(g, coloring, Mode::Closed);
    internal_check(check.conflict_free(), "pipeline output failed verification");
    report.verified = true;
    return {std::move(coloring), report};
}

} // namespace cfc
