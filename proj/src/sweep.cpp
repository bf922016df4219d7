#include "cfc/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

#include "cfc/common.hpp"
#include "cfc/complete.hpp"
#include "cfc/rng.hpp"

namespace cfc {

namespace {

struct TrialParams {
    int n = 0;
    std::optional<double> p;
    std::optional<int> d;
    int seed_index = 0;
};

std::vector<TrialParams> enumerate_trials(const SweepSpec& spec) {
    std::vector<TrialParams> trials;
    for (int n : spec.ns) {
        switch (spec.kind) {
        case InstanceKind::Complete:
            for (int si = 0; si < spec.seeds_per_cell; ++si)
                trials.push_back({n, std::nullopt, std::nullopt, si});
            break;
        case InstanceKind::Gnp:
            for (double p : spec.ps)
                for (int si = 0; si < spec.seeds_per_cell; ++si)
                    trials.push_back({n, p, std::nullopt, si});
            break;
        case InstanceKind::Regular:
            for (int d : spec.ds)
                for (int si = 0; si < spec.seeds_per_cell; ++si)
                    trials.push_back({n, std::nullopt, d, si});
            break;
        }
    }
    return trials;
}

ExperimentRecord run_trial(const SweepSpec& spec, const TrialParams& t,
                           std::uint64_t trial_seed) {
    ExperimentRecord rec;
    rec.kind = spec.kind;
    rec.method = spec.method;
    rec.n = t.n;
    rec.p = t.p;
    rec.d = t.d;
    rec.seed = trial_seed;

    const auto start = std::chrono::steady_clock::now();

    Graph g;
    switch (spec.kind) {
    case InstanceKind::Complete:
        g = complete_graph(t.n);
        break;
    case InstanceKind::Gnp:
        g = gnp_random(t.n, *t.p, trial_seed);
        break;
    case InstanceKind::Regular:
        g = random_regular(t.n, *t.d, trial_seed);
        break;
    }

    DegreeStats stats = degree_stats(g);
    rec.max_degree = stats.max_degree;
    rec.min_degree = stats.min_degree;
    if (stats.max_degree >= 2)
        rec.near_regularity_gap = near_regularity_gap(g);
    double rhs = asymptotic_color_bound(stats.max_degree);
    if (std::isfinite(rhs))
        rec.bound_rhs = rhs;

    switch (spec.method) {
    case MethodKind::Complete: {
        require(g.edge_count() ==
                    static_cast<int>(static_cast<long long>(t.n) * (t.n - 1) / 2),
                "sweep: complete method requires a complete graph");
        EdgeColoring c = cf_color_complete(t.n);
        rec.colors_total = c.color_count();
        rec.verified = verify(g, c, Mode::Closed).conflict_free();
        break;
    }
    case MethodKind::NearlyRegular: {
        PipelineConfig cfg = spec.pipeline;
        std::optional<RunResult> best;
        for (int r = 0; r < std::max(1, spec.restarts); ++r) {
            cfg.seed = rng::key(trial_seed, 0x7e57, r);
            RunResult run = color_nearly_regular(g, cfg);
            if (!best || run.report.colors_total < best->report.colors_total)
                best = std::move(run);
        }
        rec.colors_total = best->report.colors_total;
        rec.s = best->report.s;
        rec.residual_max_degree = best->report.residual_max_degree;
        rec.verified = best->report.verified;
        break;
    }
    case MethodKind::Fallback: {
        for (int v = 0; v < g.vertex_count(); ++v)
            require(g.degree(v) > 0, "sweep: fallback method forbids isolated vertices");
        EdgeColoring c = fallback_satisfy(g, 0, spec.pipeline.fallback);
        rec.colors_total = c.color_count();
        rec.verified = verify(g, c, Mode::Closed).conflict_free();
        break;
    }
    }
    require(rec.verified, "sweep: trial produced an unverified coloring");

    rec.runtime_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return rec;
}

std::string kind_name(InstanceKind k) {
    switch (k) {
    case InstanceKind::Complete:
        return "complete";
    case InstanceKind::Gnp:
        return "gnp";
    case InstanceKind::Regular:
        return "regular";
    }
    return "?";
}

std::string method_name(MethodKind m) {
    switch (m) {
    case MethodKind::Complete:
        return "complete";
    case MethodKind::NearlyRegular:
        return "nearly-regular";
    case MethodKind::Fallback:
        return "fallback";
    }
    return "?";
}

} // namespace

std::uint64_t derive_trial_seed(std::uint64_t master_seed, int trial_index) {
    return rng::key(master_seed, 0x5eed, trial_index);
}

std::vector<ExperimentRecord> run_sweep(const SweepSpec& spec) {
    require(spec.seeds_per_cell >= 0, "sweep: seed count must be nonnegative");
    const std::vector<TrialParams> trials = enumerate_trials(spec);
    std::vector<ExperimentRecord> records(trials.size());
    if (trials.empty())
        return records;

    const int workers =
        std::max(1, std::min(spec.workers, static_cast<int>(trials.size())));
    std::atomic<std::size_t> next{0};
    std::vector<std::string> errors(trials.size());
    std::atomic<bool> failed{false};

    auto work = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= trials.size() || failed.load())
                return;
            try {
                records[i] = run_trial(spec, trials[i],
                                       derive_trial_seed(spec.master_seed,
                                                         static_cast<int>(i)));
            } catch (const std::exception& ex) {
                std::ostringstream ctx;
                ctx << "trial " << i << " (n=" << trials[i].n;
                if (trials[i].p)
                    ctx << ", p=" << *trials[i].p;
                if (trials[i].d)
                    ctx << ", d=" << *trials[i].d;
                ctx << ", seed index " << trials[i].seed_index << "): " << ex.what();
                errors[i] = ctx.str();
                failed.store(true);
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto& th : pool)
            th.join();
    }

    if (failed.load())
        for (const std::string& err : errors)
            if (!err.empty())
                throw std::runtime_error("sweep aborted: " + err);
    return records;
}

void write_records_csv(std::span<const ExperimentRecord> records, std::ostream& out) {
    out << "kind,method,n,p,d,seed,delta,delta_min,near_regularity_gap,s,"
           "colors_total,bound_rhs,delta_prime,runtime_ms,verified\n";
    for (const ExperimentRecord& r : records) {
        out << kind_name(r.kind) << ',' << method_name(r.method) << ',' << r.n << ',';
        if (r.p)
            out << *r.p;
        out << ',';
        if (r.d)
            out << *r.d;
        out << ',' << r.seed << ',' << r.max_degree << ',' << r.min_degree << ',';
        if (r.near_regularity_gap)
            out << *r.near_regularity_gap;
        out << ',';
        if (r.s)
            out << *r.s;
        out << ',' << r.colors_total << ',';
        if (r.bound_rhs) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.4f", *r.bound_rhs);
            out << buf;
        }
        out << ',';
        if (r.residual_max_degree)
            out << *r.residual_max_degree;
        char ms[32];
        std::snprintf(ms, sizeof ms, "%.3f", r.runtime_ms);
        out << ',' << ms << ',' << (r.verified ? 1 : 0) << '\n';
    }
}

} // namespace cfc
