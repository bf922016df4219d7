#include <doctest.h>

#include <cmath>

#include "cfc/common.hpp"
#include "cfc/nearly_regular.hpp"
#include "cfc/rng.hpp"
#include "helpers.hpp"

using namespace cfc;

namespace {

PipelineConfig seeded(std::uint64_t seed) {
    PipelineConfig cfg;
    cfg.seed = seed;
    return cfg;
}

struct LayerState {
    Graph graph;
    VertexLabels labels;
    double eps = 0.0;
};

std::vector<LayerState> build_layers(const Graph& g, const PipelineConfig& cfg) {
    Decomposition d = decompose_edges(g, cfg);
    std::vector<std::vector<Edge>> class_edges(static_cast<std::size_t>(d.class_count));
    for (int e = 0; e < g.edge_count(); ++e)
        class_edges[static_cast<std::size_t>(d.edge_class[static_cast<std::size_t>(e)])]
            .push_back(g.edge(e));
    std::vector<LayerState> out;
    for (int i = 0; i < d.class_count; ++i) {
        LayerState ls;
        ls.graph = Graph(g.vertex_count(), std::move(class_edges[static_cast<std::size_t>(i)]));
        ls.labels = sample_partition(i, ls.graph, cfg);
        int delta_i = degree_stats(ls.graph).max_degree;
        ls.eps = delta_i > 0 ? layer_epsilon(delta_i, cfg.profile).value : 0.0;
        out.push_back(std::move(ls));
    }
    return out;
}

} // namespace

TEST_CASE("epsilon profiles") {
    // sqrt(40000)*ln(40000) ~ 2119 < 40000/12: paper formula applies as-is.
    EpsilonInfo big = layer_epsilon(40000, PipelineConfig::Profile::Paper);
    CHECK(big.value == doctest::Approx(std::sqrt(40000.0) * std::log(40000.0)));
    CHECK_FALSE(big.clamped);

    // sqrt(100)*ln(100) ~ 46 > 100/12: scaled profile clamps, paper refuses.
    EpsilonInfo small = layer_epsilon(100, PipelineConfig::Profile::Scaled);
    CHECK(small.value == doctest::Approx(100.0 / 12.0));
    CHECK(small.clamped);
    CHECK_THROWS_AS(layer_epsilon(100, PipelineConfig::Profile::Paper), std::domain_error);
}

TEST_CASE("label distribution is valid for every layer degree") {
    for (int delta = 1; delta <= 5000; ++delta) {
        EpsilonInfo eps = layer_epsilon(delta, PipelineConfig::Profile::Scaled);
        double p1 = 0.25 - 3.0 * eps.value / delta;
        double p3 = 6.0 * eps.value / delta;
        double p4 = 0.5 - 3.0 * eps.value / delta;
        CHECK(p1 >= -1e-12);
        CHECK(p3 >= 0.0);
        CHECK(p4 >= 0.0);
        CHECK(p1 + 0.25 + p3 + p4 == doctest::Approx(1.0));
    }
}

TEST_CASE("decomposition partitions the edges") {
    Graph k9 = complete_graph(9);
    PipelineConfig cfg = seeded(3);
    cfg.class_count_override = 3;
    Decomposition d = decompose_edges(k9, cfg);
    REQUIRE(d.class_count == 3);
    std::vector<int> per_class(3, 0);
    for (int e = 0; e < k9.edge_count(); ++e)
        ++per_class[static_cast<std::size_t>(d.edge_class[static_cast<std::size_t>(e)])];
    CHECK(per_class[0] + per_class[1] + per_class[2] == 36);
    for (int i = 0; i < 3; ++i)
        for (int v = 0; v < 9; ++v) {
            int count = 0;
            for (const auto& inc : k9.incident(v))
                count += d.edge_class[static_cast<std::size_t>(inc.edge)] == i;
            CHECK(count == d.class_degree[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)]);
        }
}

TEST_CASE("degree-2 graphs collapse to a single strict class") {
    Graph cycle = random_regular(8, 2, 5);
    Decomposition d = decompose_edges(cycle, seeded(1));
    CHECK(d.class_count == 1);
    CHECK(d.strict);
    for (int k : d.edge_class)
        CHECK(k == 0);
}

TEST_CASE("decomposition of a large regular graph is strict") {
    // Bands Delta/s +- 3*sqrt(Delta) are ~10 standard deviations wide here.
    Graph g = random_regular(2048, 1024, 7);
    PipelineConfig cfg = seeded(7);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        cfg.seed = seed;
        Decomposition d = decompose_edges(g, cfg);
        CHECK(d.class_count == 10);
        CHECK(d.strict);
    }
}

TEST_CASE("all-label-4 layers violate exactly the lower-bound events") {
    Graph k9 = complete_graph(9);
    VertexLabels labels(9, 4);
    auto violations = check_partition_events(k9, labels, layer_epsilon(8, PipelineConfig::Profile::Scaled).value);
    int side2_small = 0, side13_small = 0, other = 0;
    for (const auto& v : violations) {
        if (v.kind == PartitionViolation::Kind::Side2TooSmall)
            ++side2_small;
        else if (v.kind == PartitionViolation::Kind::Side13TooSmall)
            ++side13_small;
        else
            ++other;
    }
    CHECK(side2_small == 9);
    CHECK(side13_small == 9);
    CHECK(other == 0);

    Graph lonely(1, {});
    CHECK(check_partition_events(lonely, VertexLabels(1, 4), 0.0).empty());
}

TEST_CASE("sample_partition is reproducible and degenerate layers idle") {
    Graph g = gnp_random(64, 0.4, 12);
    PipelineConfig cfg = seeded(9);
    VertexLabels a = sample_partition(2, g, cfg);
    VertexLabels b = sample_partition(2, g, cfg);
    CHECK(a == b);
    VertexLabels other_layer = sample_partition(3, g, cfg);
    CHECK(a != other_layer);
    for (std::uint8_t lab : a)
        CHECK((lab >= 1 && lab <= 4));

    Graph edgeless(5, {});
    VertexLabels idle = sample_partition(0, edgeless, cfg);
    CHECK(idle == VertexLabels(5, 4));
}

TEST_CASE("event-clean layers yield saturating matchings") {
    // A clean event check certifies the degree gaps, and those force the
    // matching to saturate V1 and V2; exercised on sampled pipeline layers.
    rng::Stream rs(404);
    int checked = 0;
    for (int trial = 0; trial < 12; ++trial) {
        Graph g = gnp_random(192, 0.55, rs.next());
        PipelineConfig cfg = seeded(rs.next());
        for (auto& layer : build_layers(g, cfg)) {
            if (layer.graph.edge_count() == 0)
                continue;
            LayerMatching m = build_layer_matching(layer.graph, layer.labels);
            int delta_i = degree_stats(layer.graph).max_degree;
            bool clean = check_partition_events(layer.graph, layer.labels, layer.eps).empty();
            if (clean && delta_i / 4.0 - 2.0 * layer.eps > 0.0) {
                CHECK(m.saturating());
                ++checked;
            }
            // every matching must stay inside V1 u V3 x V2
            for (int e : m.edges) {
                Edge ed = layer.graph.edge(e);
                int lu = layer.labels[static_cast<std::size_t>(ed.u)];
                int lv = layer.labels[static_cast<std::size_t>(ed.v)];
                if (lu > lv)
                    std::swap(lu, lv);
                bool crossing = (lu == 1 && lv == 2) || (lu == 2 && lv == 3);
                CHECK(crossing);
            }
        }
    }
    INFO("clean layers observed: " << checked);
}

TEST_CASE("layer matchings on labeled toy graphs") {
    // V1 = {0}, V2 = {1}, V3 = {2}; edges 0-1 and 2-1.
    Graph g(3, {{0, 1}, {1, 2}});
    VertexLabels labels{1, 2, 3};
    LayerMatching m = build_layer_matching(g, labels);
    CHECK(m.side1_saturated);
    CHECK(m.side2_saturated);
    CHECK(m.edges.size() == 1);
    CHECK(m.saturated[0]);
    CHECK(m.saturated[1]);

    VertexLabels idle{4, 4, 4};
    LayerMatching none = build_layer_matching(g, idle);
    CHECK(none.edges.empty());
    CHECK(none.saturating()); // vacuous
}

TEST_CASE("shuffled matching order keeps contracts and is seed-deterministic") {
    Graph g = gnp_random(160, 0.5, 31);
    PipelineConfig cfg = seeded(31);
    auto layers = build_layers(g, cfg);
    for (auto& layer : layers) {
        if (layer.graph.edge_count() == 0)
            continue;
        LayerMatching plain = build_layer_matching(layer.graph, layer.labels);
        LayerMatching a = build_layer_matching(layer.graph, layer.labels, 7);
        LayerMatching b = build_layer_matching(layer.graph, layer.labels, 7);
        CHECK(a.edges == b.edges);
        CHECK(a.side1_saturated == plain.side1_saturated);
        CHECK(a.side2_saturated == plain.side2_saturated);
        CHECK(a.edges.size() == plain.edges.size()); // same maximum cardinality
    }
}

TEST_CASE("satisfaction map agrees with the verifier") {
    rng::Stream rs(606);
    for (int trial = 0; trial < 200; ++trial) {
        Graph g = testutil::random_graph_no_isolated(rs, 28);
        PipelineConfig cfg = seeded(rs.next());
        cfg.class_count_override =
            1 + static_cast<int>(rs.below(4)); // force a few layers
        if (degree_stats(g).max_degree < 2)
            continue;
        Decomposition d = decompose_edges(g, cfg);
        std::vector<std::vector<Edge>> class_edges(static_cast<std::size_t>(d.class_count));
        std::vector<std::vector<int>> class_parent(static_cast<std::size_t>(d.class_count));
        for (int e = 0; e < g.edge_count(); ++e) {
            int k = d.edge_class[static_cast<std::size_t>(e)];
            class_edges[static_cast<std::size_t>(k)].push_back(g.edge(e));
            class_parent[static_cast<std::size_t>(k)].push_back(e);
        }
        std::vector<std::vector<int>> matchings;
        for (int i = 0; i < d.class_count; ++i) {
            Graph gi(g.vertex_count(), std::move(class_edges[static_cast<std::size_t>(i)]));
            VertexLabels labels = sample_partition(i, gi, cfg);
            LayerMatching lm = build_layer_matching(gi, labels);
            std::vector<int> global;
            for (int e : lm.edges)
                global.push_back(class_parent[static_cast<std::size_t>(i)][static_cast<std::size_t>(e)]);
            matchings.push_back(std::move(global));
        }
        std::vector<char> quick = satisfaction_from_layers(g, matchings);
        EdgeColoring partial(g.edge_count());
        for (std::size_t i = 0; i < matchings.size(); ++i)
            for (int e : matchings[i])
                partial.set(e, static_cast<int>(i));
        SatisfactionReport rep = verify(g, partial, Mode::Closed);
        for (int e = 0; e < g.edge_count(); ++e)
            REQUIRE(static_cast<bool>(quick[static_cast<std::size_t>(e)]) ==
                    rep.per_edge[static_cast<std::size_t>(e)].satisfied);
    }
}

TEST_CASE("fallback proper colorings") {
    Graph empty(4, {});
    CHECK(fallback_satisfy(empty, 0, PipelineConfig::Fallback::ProperVizing).color_count() == 0);

    Graph lone(2, {{0, 1}});
    EdgeColoring one = fallback_satisfy(lone, 5, PipelineConfig::Fallback::ProperVizing);
    CHECK(one.color_count() == 1);
    CHECK(one.color(0) == 5);

    rng::Stream rs(13);
    for (int trial = 0; trial < 60; ++trial) {
        Graph g = testutil::random_graph_no_isolated(rs, 30);
        int delta = degree_stats(g).max_degree;
        EdgeColoring viz = fallback_satisfy(g, 0, PipelineConfig::Fallback::ProperVizing);
        CHECK(testutil::is_proper(g, viz));
        CHECK(viz.color_count() <= delta + 1);
        EdgeColoring greedy = fallback_satisfy(g, 0, PipelineConfig::Fallback::ProperGreedy);
        CHECK(testutil::is_proper(g, greedy));
        CHECK(greedy.color_count() <= std::max(1, 2 * delta - 1));
    }
}

TEST_CASE("fallback on a graph with residual-scale degrees") {
    Graph g = random_regular(40, 10, 21);
    EdgeColoring c = fallback_satisfy(g, 3, PipelineConfig::Fallback::ProperVizing);
    CHECK(c.color_count() <= 11);
    CHECK(verify(g, c, Mode::Closed).conflict_free());
}

TEST_CASE("pipeline on degenerate graphs") {
    Graph k2 = complete_graph(2);
    RunResult r = color_nearly_regular(k2, seeded(1));
    CHECK(r.report.verified);
    CHECK(r.report.colors_total <= 2); // Delta'+1 budget
    CHECK(r.coloring.total());

    Graph square = random_regular(8, 2, 2);
    RunResult r2 = color_nearly_regular(square, seeded(2));
    CHECK(r2.report.verified);
    CHECK(r2.report.s == 0); // fallback-only path

    CHECK_THROWS_AS(color_nearly_regular(Graph(3, {{0, 1}}), seeded(1)),
                    std::invalid_argument);
}

TEST_CASE("pipeline output is conflict-free and accounted") {
    rng::Stream rs(909);
    for (int trial = 0; trial < 6; ++trial) {
        Graph g = gnp_random(128 + static_cast<int>(rs.below(128)), 0.3 + 0.3 * rs.unit(),
                             rs.next());
        DegreeStats stats = degree_stats(g);
        if (stats.min_degree == 0)
            continue;
        RunResult r = color_nearly_regular(g, seeded(rs.next()));
        CHECK(r.report.verified);
        CHECK(r.coloring.total());
        CHECK(r.report.colors_total ==
              r.report.colors_layers + r.report.colors_fallback + r.report.colors_final);
        CHECK(r.report.colors_layers <= r.report.s);
        CHECK(r.report.colors_fallback <= r.report.residual_max_degree + 1);
        CHECK(r.report.colors_total == r.coloring.color_count());
        // residual bookkeeping: recompute delta' from the layer-only coloring
        EdgeColoring partial(g.edge_count());
        // (cannot reconstruct matchings here; rely on report consistency)
        CHECK(r.report.residual_max_degree >= 0);
    }
}

TEST_CASE("pipeline determinism") {
    Graph g = gnp_random(200, 0.4, 77);
    for (int spot = 0; spot < 3; ++spot) {
        PipelineConfig cfg = seeded(1000 + static_cast<std::uint64_t>(spot));
        RunResult a = color_nearly_regular(g, cfg);
        RunResult b = color_nearly_regular(g, cfg);
        CHECK(a.coloring == b.coloring);
        CHECK(a.report.colors_total == b.report.colors_total);
        CHECK(a.report.label_resamples == b.report.label_resamples);
    }
}

TEST_CASE("layer palettes, fallback palette and final color are disjoint") {
    Graph g = gnp_random(256, 0.5, 3);
    REQUIRE(degree_stats(g).min_degree > 0);
    RunResult r = color_nearly_regular(g, seeded(5));
    const int s = r.report.s;
    const int fb = r.report.colors_fallback;
    for (int c : r.coloring.palette()) {
        bool layer_range = c >= 0 && c < s;
        bool fallback_range = c >= s && c < s + fb;
        bool final_range = c == s + fb;
        CHECK((layer_range || fallback_range || final_range));
    }
}

TEST_CASE("all-t diagnostic stays under the residual threshold on small runs") {
    Graph g = gnp_random(48, 0.5, 8);
    REQUIRE(degree_stats(g).min_degree > 0);
    PipelineConfig cfg = seeded(4);
    cfg.diagnostic_all_t = true;
    RunResult r = color_nearly_regular(g, cfg);
    REQUIRE(r.report.all_t_max_count.has_value());
    CHECK(*r.report.all_t_max_count >= 0);
    CHECK(*r.report.all_t_max_count <= degree_stats(g).max_degree);
}
