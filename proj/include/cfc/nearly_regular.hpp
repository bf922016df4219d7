#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfc/coloring.hpp"
#include "cfc/graph.hpp"

namespace cfc {

// Partition of E into near-regular classes.
struct Decomposition {
    int class_count = 0;                        // s
    std::vector<int> edge_class;                // per edge, in [0, s)
    std::vector<std::vector<int>> class_degree; // [class][vertex]
    bool strict = false;      // every class degree inside the target band
    double max_over = 0.0;    // worst overshoot above Delta/s + 3*sqrt(Delta)
    double max_under = 0.0;   // worst undershoot below Delta/s - 3*sqrt(Delta)
    long long resamples = 0;  // edge class redraws spent
};

struct PipelineConfig {
    std::uint64_t seed = 0;
    int class_count_override = 0; // 0: use ceil(log2 Delta)

    // Paper profile: epsilon_i = sqrt(Delta_i) * ln(Delta_i), refused when that
    // exceeds Delta_i / 12 (the label distribution would go negative).
    // Scaled profile: clamp at Delta_i / 12 and record the clamp.
    enum class Profile { Paper, Scaled } profile = Profile::Scaled;

    int max_rounds = 16;                  // resampling rounds per stage
    double resample_budget_factor = 100;  // budget = factor * n variables per stage
    double residual_multiplier = 3.0;     // accept when Delta' <= mult * ceil(log2 Delta)

    enum class Fallback { ProperVizing, ProperGreedy } fallback = Fallback::ProperVizing;

    bool diagnostic_all_t = false; // exhaustive scenario check, small instances only
};

struct EpsilonInfo {
    double value = 0.0;
    bool clamped = false;
};

// Throws std::domain_error under the paper profile when the distribution
// would need negative probabilities.
EpsilonInfo layer_epsilon(int layer_max_degree, PipelineConfig::Profile profile);

// Vertex labels 1..4; label 4 plays no part in the layer matching.
using VertexLabels = std::vector<std::uint8_t>;

// Independent per-vertex labels from the 4-point distribution
// (1/4 - 3e/D, 1/4, 6e/D, 1/2 - 3e/D); reproducible per (seed, layer, vertex).
VertexLabels sample_partition(int layer, const Graph& layer_graph, const PipelineConfig& cfg);

struct PartitionViolation {
    enum class Kind {
        Side1TooLarge,  // label-1 neighbor count not below Delta_i/4 - 2e
        Side2TooSmall,  // label-2 neighbor count not above Delta_i/4 - 2e
        Side13TooSmall, // label-1/3 neighbor count not above Delta_i/4 + e
        Side2TooLarge,  // label-2 neighbor count not below Delta_i/4 + e
    };
    int vertex = -1;
    Kind kind{};
};

// Empty result certifies the degree gaps behind both Hall arguments.
std::vector<PartitionViolation> check_partition_events(const Graph& layer_graph,
                                                       const VertexLabels& labels,
                                                       double epsilon);

struct LayerMatching {
    std::vector<int> edges;       // layer-graph edge ids, ascending
    std::vector<char> saturated;  // per vertex: incident to the matching
    bool side1_saturated = true;  // all label-1 vertices matched
    bool side2_saturated = true;  // all label-2 vertices matched
    bool saturating() const { return side1_saturated && side2_saturated; }
};

// Saturating matching on G_i[V1,V2] extended augmenting-path-wise inside
// G_i[V1 u V3, V2]. Partial saturation is returned as-is, not an error.
// With a shuffle seed the augmentation scans left vertices in a seeded random
// order instead of by id; which V3 vertices end up matched is then an
// unbiased sample per layer rather than the same low-id prefix every time,
// which is what makes the layers' leftovers nearly independent.
LayerMatching build_layer_matching(const Graph& layer_graph, const VertexLabels& labels,
                                   std::optional<std::uint64_t> shuffle_seed = std::nullopt);

// Edge uv is satisfied iff it lies in some layer matching or exactly one of
// u, v is incident to one. Agrees with verify() on the partial coloring that
// paints matching i with color i.
std::vector<char> satisfaction_from_layers(const Graph& g,
                                           const std::vector<std::vector<int>>& layer_matchings);

// Proper edge coloring of the residual graph with fresh colors starting at
// first_color: Misra-Gries (<= Delta'+1 colors) or greedy (<= 2*Delta'-1).
EdgeColoring fallback_satisfy(const Graph& residual, int first_color,
                              PipelineConfig::Fallback kind);

struct RunReport {
    int s = 0;
    std::string profile;
    bool epsilon_clamped = false;
    bool decomposition_strict = false;
    long long edge_resamples = 0;
    long long label_resamples = 0;
    int clean_layers = 0;      // layers with no partition-event violations
    int saturating_layers = 0; // layers whose matching saturates V1 u V2
    int max_degree = 0;
    int residual_max_degree = 0; // Delta'
    int colors_layers = 0;
    int colors_fallback = 0;
    int colors_final = 0;
    int colors_total = 0;
    bool verified = false;
    std::uint64_t seed = 0;
    std::optional<int> all_t_max_count; // diagnostic, when enabled
};

struct RunResult {
    EdgeColoring coloring;
    RunReport report;
};

Decomposition decompose_edges(const Graph& g, const PipelineConfig& cfg);

// Full pipeline: decompose, label, match, resample, fall back, finish with
// one extra color. Output always verifies conflict-free in closed mode; a
// verification failure is a bug and throws.
RunResult color_nearly_regular(const Graph& g, const PipelineConfig& cfg);

} // namespace cfc
