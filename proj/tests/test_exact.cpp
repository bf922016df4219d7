#include <doctest.h>

#include "cfc/exact.hpp"
#include "cfc/rng.hpp"
#include "helpers.hpp"

using namespace cfc;

namespace {

// Unpruned enumeration oracle: try every q-coloring, check with the naive
// satisfaction test. Only viable for tiny graphs.
bool brute_colorable(const Graph& g, int q, Mode mode) {
    const int m = g.edge_count();
    EdgeColoring c(m);
    std::vector<int> digits(static_cast<std::size_t>(m), 0);
    while (true) {
        for (int e = 0; e < m; ++e)
            c.set(e, digits[static_cast<std::size_t>(e)]);
        bool all = true;
        for (int e = 0; e < m && all; ++e)
            all = testutil::naive_satisfied(g, c, e, mode);
        if (all)
            return true;
        int pos = 0;
        while (pos < m && ++digits[static_cast<std::size_t>(pos)] == q)
            digits[static_cast<std::size_t>(pos++)] = 0;
        if (pos == m)
            return false;
    }
}

} // namespace

TEST_CASE("exact index on the smallest complete graphs") {
    CHECK(exact_cf_index(complete_graph(2), Mode::Closed).index == 1);

    Graph k3 = complete_graph(3);
    CHECK(is_cf_colorable(k3, 1, Mode::Closed).outcome == SearchOutcome::Exhausted);
    SearchResult two = is_cf_colorable(k3, 2, Mode::Closed);
    REQUIRE(two.outcome == SearchOutcome::Found);
    CHECK(verify(k3, *two.coloring, Mode::Closed).conflict_free());
    CHECK(exact_cf_index(k3, Mode::Closed).index == 2);
}

TEST_CASE("witnesses always verify and values match brute enumeration") {
    rng::Stream rs(4242);
    int done = 0;
    while (done < 25) {
        Graph g = testutil::random_graph_no_isolated(rs, 7);
        if (g.edge_count() > 9)
            continue;
        Mode mode = (rs.next() & 1) ? Mode::Closed : Mode::Open;
        if (mode == Mode::Open && testutil::has_isolated_edge(g))
            mode = Mode::Closed;
        ExactResult res = exact_cf_index(g, mode);
        CHECK(verify(g, res.witness, mode).conflict_free());
        CHECK(res.witness.color_count() <= res.index);
        CHECK(brute_colorable(g, res.index, mode));
        if (res.index > 1)
            CHECK_FALSE(brute_colorable(g, res.index - 1, mode));
        ++done;
    }
}

TEST_CASE("colorability is monotone in the palette size") {
    rng::Stream rs(7);
    int done = 0;
    while (done < 20) {
        Graph g = testutil::random_graph_no_isolated(rs, 7);
        if (g.edge_count() > 10)
            continue;
        int q = 1 + static_cast<int>(rs.below(3));
        if (is_cf_colorable(g, q, Mode::Closed).outcome == SearchOutcome::Found)
            CHECK(is_cf_colorable(g, q + 1, Mode::Closed).outcome == SearchOutcome::Found);
        ++done;
    }
}

TEST_CASE("node limit is reported distinctly") {
    SearchConfig tiny;
    tiny.node_limit = 3;
    SearchResult r = is_cf_colorable(complete_graph(5), 2, Mode::Closed, tiny);
    CHECK(r.outcome == SearchOutcome::NodeLimit);
    CHECK_THROWS_AS(exact_cf_index(complete_graph(5), Mode::Closed, tiny), node_limit_error);
}

TEST_CASE("max_colors budget caps the search") {
    SearchConfig capped;
    capped.max_colors = 2;
    CHECK_THROWS_WITH_AS(exact_cf_index(complete_graph(4), Mode::Closed, capped),
                         doctest::Contains("max_colors"), std::runtime_error);
    capped.max_colors = 3;
    CHECK(exact_cf_index(complete_graph(4), Mode::Closed, capped).index == 3);
}

TEST_CASE("edge cap refusal and structural errors") {
    CHECK_THROWS_AS(exact_cf_index(complete_graph(8), Mode::Closed), edge_cap_error);
    SearchConfig raised;
    raised.edge_cap = 50;
    CHECK_NOTHROW(is_cf_colorable(complete_graph(4), 3, Mode::Closed, raised));

    Graph iso(3, {{0, 1}});
    CHECK_THROWS_AS(is_cf_colorable(iso, 2, Mode::Closed), std::invalid_argument);
    Graph lone(2, {{0, 1}});
    CHECK_THROWS_AS(is_cf_colorable(lone, 2, Mode::Open), std::invalid_argument);
    CHECK(is_cf_colorable(lone, 1, Mode::Closed).outcome == SearchOutcome::Found);
}
