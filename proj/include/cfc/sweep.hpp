#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "cfc/nearly_regular.hpp"

namespace cfc {

enum class MethodKind { Complete, NearlyRegular, Fallback };

enum class InstanceKind { Complete, Gnp, Regular };

struct SweepSpec {
    InstanceKind kind = InstanceKind::Gnp;
    MethodKind method = MethodKind::NearlyRegular;
    std::vector<int> ns;
    std::vector<double> ps; // gnp only
    std::vector<int> ds;    // regular only
    int seeds_per_cell = 1;
    std::uint64_t master_seed = 0;
    PipelineConfig pipeline; // seed replaced per trial
    int restarts = 1;        // nearly-regular: keep the fewest-colors run
    int workers = 1;
};

struct ExperimentRecord {
    InstanceKind kind{};
    MethodKind method{};
    int n = 0;
    std::optional<double> p;
    std::optional<int> d;
    std::uint64_t seed = 0; // derived per-trial seed, recorded for replay
    int max_degree = 0;
    int min_degree = 0;
    std::optional<int> near_regularity_gap;
    std::optional<int> s;
    int colors_total = 0;
    std::optional<double> bound_rhs; // log2 D + 3 log2 log2 D + 9
    std::optional<int> residual_max_degree;
    double runtime_ms = 0.0;
    bool verified = false; // always true in emitted records; failures throw
};

// One record per (instance, seed), in canonical trial order regardless of
// scheduling. A failing trial aborts the sweep with context.
std::vector<ExperimentRecord> run_sweep(const SweepSpec& spec);

void write_records_csv(std::span<const ExperimentRecord> records, std::ostream& out);

std::uint64_t derive_trial_seed(std::uint64_t master_seed, int trial_index);

} // namespace cfc
