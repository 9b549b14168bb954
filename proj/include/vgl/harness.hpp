#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "vgl/critic.hpp"
#include "vgl/env.hpp"
#include "vgl/learners.hpp"
#include "vgl/matrix2.hpp"
#include "vgl/policy.hpp"
#include "vgl/stability.hpp"

namespace vgl {

/// Starting reparametrised weights shared by every preset.
inline constexpr Vec2 kPresetStart{5.23e-5, 8.53e-5};

struct ExperimentConfig {
    LearnerConfig learner;
    ProblemConstants consts;
    Matrix2 F = Matrix2::identity();
    Vec2 p0 = kPresetStart;
    /// Initial bias weights (w3, w4).
    Vec2 w34_0{};
    std::int64_t iterations = 10'000'000;
    std::uint64_t seed = 1;
    double noise_variance = 0.0;
    std::int64_t record_every = 1000;
    /// 0 selects the default 1e4 * |p0|.
    double divergence_threshold = 0.0;
    double convergence_threshold = 1e-10;
    /// When false the run continues past the divergence threshold; the outcome still records
    /// the first crossing.
    bool stop_on_divergence = true;

    [[nodiscard]] double resolved_divergence_threshold() const;
    /// Throws std::invalid_argument on an inconsistent configuration.
    void validate() const;
    /// Policy the learner runs under: noisy greedy when noise is configured, else closed-form greedy.
    [[nodiscard]] PolicyKind policy() const;
};

/// Builds a learner config whose lambda and gamma agree with the problem constants.
[[nodiscard]] LearnerConfig make_learner_config(Algorithm algorithm, const ProblemConstants& consts, double alpha,
                                                double gdhp_mix = 0.5);

enum class OutcomeKind { Diverged, Converged, Completed };

[[nodiscard]] std::string_view to_string(OutcomeKind kind);
[[nodiscard]] OutcomeKind parse_outcome(std::string_view name);

struct Outcome {
    OutcomeKind kind = OutcomeKind::Completed;
    std::int64_t at = 0;
    friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct TraceRow {
    std::int64_t iteration = 0;
    double p1 = 0.0;
    double p2 = 0.0;
    double p_norm = 0.0;
    friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct RunTrace {
    std::vector<TraceRow> rows;
    Outcome outcome;
    /// Largest and smallest |p| over every iteration, recorded or not (iteration 0 included).
    double peak_norm = 0.0;
    double floor_norm = 0.0;
};

[[nodiscard]] RunTrace run_experiment(const ExperimentConfig& config);

/// Runs independent experiments on up to `jobs` worker threads; results keep the input order.
[[nodiscard]] std::vector<RunTrace> run_many(const std::vector<ExperimentConfig>& configs, unsigned jobs);

struct Preset {
    std::string name;
    std::string description;
    ExperimentConfig config;
    /// Outcome the preset is meant to reproduce.
    OutcomeKind expected = OutcomeKind::Diverged;
};

[[nodiscard]] const std::vector<std::string>& preset_names();
[[nodiscard]] Preset make_preset(std::string_view name);
[[nodiscard]] RunTrace run_preset(std::string_view name);

/// Analytic stability report for a value-gradient configuration; refuses TD, Sarsa, HDP and GDHP.
[[nodiscard]] StabilityReport report_stability(const ExperimentConfig& config);

/// Header `iteration,p1,p2,p_norm`, one row per record, then `# outcome=<kind> at=<n>`.
void write_csv(const RunTrace& trace, std::ostream& out);
void emit_csv(const RunTrace& trace, const std::filesystem::path& path);
[[nodiscard]] RunTrace parse_csv(std::istream& in);
[[nodiscard]] RunTrace read_csv(const std::filesystem::path& path);

/// Shortest decimal text with 17 significant digits; round-trips exactly through from_chars.
[[nodiscard]] std::string format_real(double value);

}  // namespace vgl
