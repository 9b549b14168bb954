#include "vgl/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace vgl {

namespace {

bool needs_policy_derivative(Algorithm algorithm) {
    return is_value_gradient(algorithm) || algorithm == Algorithm::GDHP;
}

TraceRow make_row(std::int64_t iteration, Vec2 p) { return {iteration, p.v1, p.v2, p.norm()}; }

}  // namespace

LearnerConfig make_learner_config(Algorithm algorithm, const ProblemConstants& consts, double alpha,
                                  double gdhp_mix) {
    return {algorithm, consts.lambda, alpha, consts.gamma, gdhp_mix};
}

double ExperimentConfig::resolved_divergence_threshold() const {
    return divergence_threshold > 0.0 ? divergence_threshold : 1e4 * p0.norm();
}

void ExperimentConfig::validate() const {
    consts.validate();
    learner.validate();
    if (learner.lambda != consts.lambda || learner.gamma != consts.gamma) {
        throw std::invalid_argument("learner lambda/gamma must match the problem constants");
    }
    if (iterations < 1) throw std::invalid_argument("iterations must be at least 1");
    if (record_every < 1) throw std::invalid_argument("record_every must be at least 1");
    if (!(noise_variance >= 0.0)) throw std::invalid_argument("noise variance must be nonnegative");
    if (!(divergence_threshold >= 0.0)) throw std::invalid_argument("divergence threshold must be positive");
    if (!(convergence_threshold > 0.0)) throw std::invalid_argument("convergence threshold must be positive");
    if (!F.is_finite()) throw std::invalid_argument("F must have finite entries");
    if (needs_policy_derivative(learner.algorithm) && noise_variance != 0.0) {
        throw std::invalid_argument(std::string(to_string(learner.algorithm)) +
                                    " needs the noise-free greedy policy; set the noise variance to 0");
    }
    const double start = p0.norm();
    if (!(resolved_divergence_threshold() > start)) {
        throw std::invalid_argument("divergence threshold must exceed the starting |p|");
    }
    if (!(convergence_threshold < start)) {
        throw std::invalid_argument("convergence threshold must be below the starting |p|");
    }
}

PolicyKind ExperimentConfig::policy() const {
    if (noise_variance > 0.0) return NoisyGreedy{noise_variance, seed};
    return GreedyAnalytic{};
}

std::string_view to_string(OutcomeKind kind) {
    switch (kind) {
        case OutcomeKind::Diverged: return "Diverged";
        case OutcomeKind::Converged: return "Converged";
        case OutcomeKind::Completed: return "Completed";
    }
    return "Unknown";
}

OutcomeKind parse_outcome(std::string_view name) {
    for (OutcomeKind k : {OutcomeKind::Diverged, OutcomeKind::Converged, OutcomeKind::Completed}) {
        if (name == to_string(k)) return k;
    }
    throw std::invalid_argument("unknown outcome '" + std::string(name) + "'");
}

RunTrace run_experiment(const ExperimentConfig& config) {
    config.validate();
    if (std::abs(config.F.determinant()) < 1e-12) {
        std::clog << "warning: reparametrisation matrix F is numerically singular\n";
    }

    const ProblemConstants& consts = config.consts;
    const ThreeStepProblem env(consts.k);
    const Matrix2 Ft = config.F.transposed();
    const double diverge_at = config.resolved_divergence_threshold();
    Policy policy(config.policy());

    Vec2 p = config.p0;
    Vec2 bias = config.w34_0;
    RunTrace trace;
    trace.rows.push_back(make_row(0, p));
    trace.peak_norm = trace.floor_norm = p.norm();

    std::int64_t first_crossing = 0;
    std::int64_t n = 1;
    for (; n <= config.iterations; ++n) {
        const Vec2 w12 = config.F * p;
        const CriticWeights w{w12.v1, w12.v2, bias.v1, bias.v2};
        const Trajectory traj = unroll(env, 0.0, policy, w, consts);
        const Vec4 dw = weight_update(traj, w, consts, config.learner);
        p += Ft * Vec2{dw[0], dw[1]};
        bias += Vec2{dw[2], dw[3]};

        const double norm = p.norm();
        if (!std::isfinite(norm)) {
            trace.rows.push_back(make_row(n, p));
            trace.outcome = {OutcomeKind::Diverged, n};
            trace.peak_norm = std::numeric_limits<double>::infinity();
            return trace;
        }
        trace.peak_norm = std::max(trace.peak_norm, norm);
        trace.floor_norm = std::min(trace.floor_norm, norm);

        if (first_crossing == 0 && norm > diverge_at) {
            first_crossing = n;
            if (config.stop_on_divergence) {
                trace.rows.push_back(make_row(n, p));
                trace.outcome = {OutcomeKind::Diverged, n};
                return trace;
            }
        }
        if (norm < config.convergence_threshold) {
            trace.rows.push_back(make_row(n, p));
            trace.outcome = {OutcomeKind::Converged, n};
            return trace;
        }
        if (n % config.record_every == 0) trace.rows.push_back(make_row(n, p));
    }

    const std::int64_t last = config.iterations;
    if (trace.rows.back().iteration != last) trace.rows.push_back(make_row(last, p));
    trace.outcome = first_crossing != 0 ? Outcome{OutcomeKind::Diverged, first_crossing}
                                        : Outcome{OutcomeKind::Completed, last};
    return trace;
}

std::vector<RunTrace> run_many(const std::vector<ExperimentConfig>& configs, unsigned jobs) {
    std::vector<RunTrace> results(configs.size());
    const std::size_t width = std::max(1u, jobs);
    for (std::size_t begin = 0; begin < configs.size(); begin += width) {
        const std::size_t end = std::min(configs.size(), begin + width);
        std::vector<std::future<RunTrace>> batch;
        for (std::size_t i = begin; i < end; ++i) {
            batch.push_back(std::async(std::launch::async, [&configs, i] { return run_experiment(configs[i]); }));
        }
        for (std::size_t i = begin; i < end; ++i) results[i] = batch[i - begin].get();
    }
    return results;
}

// ---------------------------------------------------------------------------------------
// Presets

namespace {

constexpr Matrix2 kFLambda0{10.0, 1.0, -1.0, -1.0};
constexpr Matrix2 kFLambda1{-1.0, -1.0, 0.2, 0.02};

ProblemConstants lambda0_constants() { return {0.01, 0.01, 0.01, 1.0, 0.0}; }
ProblemConstants lambda1_constants() { return {0.99, 0.01, 0.01, 1.0, 1.0}; }

constexpr double kExplorationVariance = 1e-4;

// The noisy-greedy drift is O(alpha) per iteration, so alpha * iterations sets how far a run
// gets. 1e7 iterations at 3e-3 cover the same alpha * n = 3e4 as 3e10 iterations at 1e-6.
constexpr double kExplorationAlpha = 3e-3;

Preset value_gradient_preset(std::string name, std::string description, Algorithm algorithm,
                             ProblemConstants consts, Matrix2 F, double alpha, OutcomeKind expected) {
    Preset preset{std::move(name), std::move(description), {}, expected};
    preset.config.consts = consts;
    preset.config.learner = make_learner_config(algorithm, consts, alpha);
    preset.config.F = F;
    return preset;
}

// Some runs settle into a bounded cycle or a sub-optimal point away from p = 0 rather than
// blowing up, so they record the first escape from the 10 |p0| ball and keep running.
void record_escape_and_continue(ExperimentConfig& config) {
    config.divergence_threshold = 10.0 * kPresetStart.norm();
    config.stop_on_divergence = false;
}

Preset exploration_preset(std::string name, std::string description, Algorithm algorithm,
                          ProblemConstants consts, Matrix2 F) {
    Preset preset{std::move(name), std::move(description), {}, OutcomeKind::Diverged};
    preset.config.consts = consts;
    preset.config.learner = make_learner_config(algorithm, consts, kExplorationAlpha);
    preset.config.F = F;
    preset.config.noise_variance = kExplorationVariance;
    record_escape_and_continue(preset.config);
    return preset;
}

std::vector<Preset> build_presets() {
    const auto l0 = lambda0_constants();
    const auto l1 = lambda1_constants();
    std::vector<Preset> presets;
    presets.push_back(value_gradient_preset("vgl0-div", "VGL(0) / DHP diverges", Algorithm::VGL, l0, kFLambda0,
                                            1e-6, OutcomeKind::Diverged));
    presets.push_back(value_gradient_preset("vgl1-div", "VGL(1) diverges", Algorithm::VGL, l1, kFLambda1, 1e-6,
                                            OutcomeKind::Diverged));
    presets.push_back(value_gradient_preset("vglomega1-conv", "VGL-Omega(1) converges", Algorithm::VGLOmega, l1,
                                            kFLambda1, 1e-3, OutcomeKind::Converged));
    presets.push_back(value_gradient_preset("vglomega0-div", "VGL-Omega(0) diverges", Algorithm::VGLOmega, l0,
                                            kFLambda0, 1e-6, OutcomeKind::Diverged));
    presets.push_back(exploration_preset("td0-div", "noisy-greedy TD(0) diverges to a limit cycle", Algorithm::TD,
                                         l0, kFLambda0));
    presets.push_back(exploration_preset("td1-div", "noisy-greedy TD(1) diverges", Algorithm::TD, l1, kFLambda1));
    presets.push_back(exploration_preset("sarsa0-div", "noisy-greedy Sarsa(0) diverges", Algorithm::Sarsa, l0,
                                         kFLambda0));
    presets.push_back(exploration_preset("sarsa1-div", "noisy-greedy Sarsa(1) diverges", Algorithm::Sarsa, l1,
                                         kFLambda1));
    presets.push_back(exploration_preset("hdp-div", "noisy-greedy HDP (= TD(0)) diverges", Algorithm::HDP, l0,
                                         kFLambda0));
    Preset gdhp = value_gradient_preset("gdhp-div", "GDHP (equal VGL(0) + TD(0) mix) leaves the optimum",
                                        Algorithm::GDHP, l0, kFLambda0, 1e-6, OutcomeKind::Diverged);
    record_escape_and_continue(gdhp.config);
    presets.push_back(std::move(gdhp));
    return presets;
}

const std::vector<Preset>& all_presets() {
    static const std::vector<Preset> presets = build_presets();
    return presets;
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& p : all_presets()) out.push_back(p.name);
        return out;
    }();
    return names;
}

Preset make_preset(std::string_view name) {
    for (const auto& p : all_presets()) {
        if (p.name == name) return p;
    }
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown preset '" + std::string(name) + "' (known: " + known + ")");
}

RunTrace run_preset(std::string_view name) { return run_experiment(make_preset(name).config); }

StabilityReport report_stability(const ExperimentConfig& config) {
    const Algorithm algorithm = config.learner.algorithm;
    if (!is_value_gradient(algorithm)) {
        throw std::invalid_argument("no closed-form update matrix for " + std::string(to_string(algorithm)) +
                                    "; stability reports cover vgl, vglomega and dhp only");
    }
    ProblemConstants consts = config.consts;
    consts.lambda = config.learner.effective_lambda();
    return classify(consts, config.F, config.learner.omega_mode());
}

// ---------------------------------------------------------------------------------------
// CSV

std::string format_real(double value) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    if (ec != std::errc{}) throw std::runtime_error("failed to format value");
    return {buf, end};
}

void write_csv(const RunTrace& trace, std::ostream& out) {
    if (trace.rows.empty()) throw std::invalid_argument("cannot write an empty trace");
    out << "iteration,p1,p2,p_norm\n";
    for (const TraceRow& r : trace.rows) {
        out << r.iteration << ',' << format_real(r.p1) << ',' << format_real(r.p2) << ',' << format_real(r.p_norm)
            << '\n';
    }
    out << "# outcome=" << to_string(trace.outcome.kind) << " at=" << trace.outcome.at << '\n';
}

void emit_csv(const RunTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    write_csv(trace, out);
    out.flush();
    if (!out) throw std::runtime_error("failed writing trace to '" + path.string() + "'");
}

namespace {

template <class T>
T parse_field(std::string_view text, std::size_t line_no) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::runtime_error("bad CSV field '" + std::string(text) + "' on line " + std::to_string(line_no));
    }
    return value;
}

}  // namespace

RunTrace parse_csv(std::istream& in) {
    RunTrace trace;
    std::string line;
    std::size_t line_no = 0;
    bool have_outcome = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1) {
            if (line != "iteration,p1,p2,p_norm") throw std::runtime_error("unexpected CSV header '" + line + "'");
            continue;
        }
        if (line.rfind("# outcome=", 0) == 0) {
            std::istringstream tail(line.substr(2));
            std::string kind, at;
            tail >> kind >> at;
            if (kind.rfind("outcome=", 0) != 0 || at.rfind("at=", 0) != 0) {
                throw std::runtime_error("malformed outcome trailer '" + line + "'");
            }
            trace.outcome = {parse_outcome(kind.substr(8)), parse_field<std::int64_t>(at.substr(3), line_no)};
            have_outcome = true;
            continue;
        }
        std::string_view view(line);
        std::array<std::string_view, 4> fields;
        for (std::size_t i = 0; i < 4; ++i) {
            const auto comma = view.find(',');
            if ((comma == std::string_view::npos) != (i == 3)) {
                throw std::runtime_error("expected 4 CSV fields on line " + std::to_string(line_no));
            }
            fields[i] = view.substr(0, comma);
            view = comma == std::string_view::npos ? std::string_view{} : view.substr(comma + 1);
        }
        trace.rows.push_back({parse_field<std::int64_t>(fields[0], line_no), parse_field<double>(fields[1], line_no),
                              parse_field<double>(fields[2], line_no), parse_field<double>(fields[3], line_no)});
    }
    if (!have_outcome) throw std::runtime_error("CSV trace has no outcome trailer");
    if (trace.rows.empty()) throw std::runtime_error("CSV trace has no rows");
    trace.peak_norm = trace.floor_norm = trace.rows.front().p_norm;
    for (const auto& r : trace.rows) {
        trace.peak_norm = std::max(trace.peak_norm, r.p_norm);
        trace.floor_norm = std::min(trace.floor_norm, r.p_norm);
    }
    return trace;
}

RunTrace read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
    return parse_csv(in);
}

}  // namespace vgl
