// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "vgl/harness.hpp"

using namespace vgl;

namespace {

struct Result {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail = what;
        pass = pass && ok;
    }
};

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string csv_text(const RunTrace& trace) {
    std::ostringstream out;
    write_csv(trace, out);
    return out.str();
}

const Matrix2 kF0{10, 1, -1, -1};
const Matrix2 kF1{-1, -1, 0.2, 0.02};
const ProblemConstants kConsts0{0.01, 0.01, 0.01, 1.0, 0.0};
const ProblemConstants kConsts1{0.99, 0.01, 0.01, 1.0, 1.0};

bool within(const Matrix2& m, const Matrix2& expected, double tol) {
    return std::abs(m.m11 - expected.m11) <= tol && std::abs(m.m12 - expected.m12) <= tol &&
           std::abs(m.m21 - expected.m21) <= tol && std::abs(m.m22 - expected.m22) <= tol;
}

Result update_matrix_values() {
    Result r;
    r.require(within(assemble_A(kConsts0), {-0.75, 0.5, -24.75, -50.5}, 1e-12), "A at lambda=0");
    r.require(within(assemble_A(kConsts1), {-0.2625, -24.75, -0.495, -50.5}, 1e-12), "A at lambda=1");
    if (r.pass) r.detail = "both reference matrices within 1e-12";
    return r;
}

Result transformed_spectra() {
    Result r;
    const Matrix2 m0 = transform(kF0, assemble_A(kConsts0));
    r.require(within(m0, {117, -38.25, 189, -27}, 1e-9), "F^T A F at lambda=0");
    const EigenPair e0 = eigenvalues_2x2(m0);
    r.require(std::abs(e0[0].real() - 45.0) <= 1e-9 && std::abs(e0[1].real() - 45.0) <= 1e-9,
              "real part at lambda=0");
    r.require(std::abs(e0[0].imag() - 45.22) <= 0.01 && std::abs(e0[1].imag() + 45.22) <= 0.01,
              "imaginary part at lambda=0");

    const Matrix2 m1 = transform(kF1, assemble_A(kConsts1));
    r.require(within(m1, {2.7665, 0.1295, 4.4954, 0.2222}, 5e-5), "F^T A F at lambda=1");
    const EigenPair e1 = eigenvalues_2x2(m1);
    r.require(e1[0].imag() == 0.0 && e1[1].imag() == 0.0 && e1[0].real() > 0.0 && e1[1].real() > 0.0,
              "lambda=1 eigenvalues real and positive");
    if (r.pass) {
        r.detail = "lambda=0: 45 +/- " + fmt("%.7f", e0[0].imag()) + "i; lambda=1: " + fmt("%.6g", e1[0].real()) +
                   ", " + fmt("%.6g", e1[1].real());
    }
    return r;
}

Result update_matrix_matches_rollout() {
    Result r;
    oracle::Sampler rng(2024);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double lambda = rng.uniform(0, 1);
        const ProblemConstants consts{rng.log_uniform(1e-3, 1), rng.log_uniform(1e-3, 1), rng.log_uniform(1e-3, 1),
                                      1.0, lambda};
        const CriticWeights w{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        LearnerConfig config;
        config.algorithm = Algorithm::VGL;
        config.lambda = lambda;
        config.alpha = 1.0;
        Policy greedy(GreedyAnalytic{});
        const Trajectory traj = unroll(0.0, greedy, w, consts);
        const Vec4 dw = vgl_update(traj, w, consts, config, OmegaMode::Identity);
        const Vec2 expected = assemble_A(consts) * Vec2{w.w1, w.w2};
        const double err = (Vec2{dw[0], dw[1]} - expected).norm() / std::max(expected.norm(), 1e-300);
        worst = std::max(worst, err);
    }
    r.require(worst <= 1e-9, "worst relative error " + fmt("%.3g", worst));
    if (r.pass) r.detail = "1000 draws, worst relative error " + fmt("%.3g", worst);
    return r;
}

Result value_gradient_runs_diverge() {
    Result r;
    std::string summary;
    for (const char* name : {"vgl0-div", "vgl1-div", "vglomega0-div"}) {
        const Preset preset = make_preset(name);
        const auto start = std::chrono::steady_clock::now();
        const RunTrace trace = run_experiment(preset.config);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const double threshold = 1e4 * preset.config.p0.norm();
        const bool ok = trace.outcome.kind == OutcomeKind::Diverged && trace.outcome.at <= 10'000'000 &&
                        trace.peak_norm > threshold && seconds < 30.0;
        r.require(ok, std::string(name) + " did not exceed 1e4|p0| within 1e7 iterations and 30 s");
        summary += std::string(summary.empty() ? "" : ", ") + name + " at " + std::to_string(trace.outcome.at) +
                   " (" + fmt("%.2f", seconds) + " s)";
    }
    if (r.pass) r.detail = summary;
    return r;
}

Result weighted_run_converges() {
    Result r;
    ExperimentConfig config = make_preset("vglomega1-conv").config;
    config.convergence_threshold = 1e-10;
    config.record_every = 1000;
    const RunTrace trace = run_experiment(config);
    r.require(trace.outcome.kind == OutcomeKind::Converged, "did not converge");
    r.require(trace.rows.back().p_norm < 1e-9, "final |p| not below 1e-9");
    // After the fast mode has decayed (its time constant is ~1/(alpha 45.8) ~ 22 iterations), |p| decays monotonically.
    const std::int64_t transient = 1000;
    bool monotone = true;
    for (std::size_t i = 1; i < trace.rows.size(); ++i) {
        if (trace.rows[i - 1].iteration >= transient && trace.rows[i].p_norm > trace.rows[i - 1].p_norm) {
            monotone = false;
        }
    }
    r.require(monotone, "|p| not monotone after the transient");
    if (r.pass) {
        r.detail = "|p| < 1e-10 at iteration " + std::to_string(trace.outcome.at) + ", monotone after iteration " +
                   std::to_string(transient);
    }
    return r;
}

Result exploration_runs() {
    Result r;
    const std::vector<std::string> names{"td0-div", "sarsa0-div", "td1-div", "sarsa1-div"};
    std::vector<ExperimentConfig> configs;
    std::vector<std::string> labels;
    for (const auto& name : names) {
        for (std::uint64_t seed : {1, 2, 3}) {
            ExperimentConfig config = make_preset(name).config;
            config.seed = seed;
            configs.push_back(config);
            labels.push_back(name + "/seed" + std::to_string(seed));
        }
    }
    const auto traces = run_many(configs, worker_count());
    double lo0 = 1e300, hi0 = 0.0, lo1 = 1e300;
    for (std::size_t i = 0; i < traces.size(); ++i) {
        const double start = configs[i].p0.norm();
        const double peak = traces[i].peak_norm;
        if (configs[i].consts.lambda == 0.0) {
            r.require(peak > 10.0 * start && peak < 0.1, labels[i] + " peak " + fmt("%.3g", peak));
            lo0 = std::min(lo0, peak);
            hi0 = std::max(hi0, peak);
        } else {
            r.require(peak > 100.0 * start, labels[i] + " peak " + fmt("%.3g", peak));
            lo1 = std::min(lo1, peak);
        }
    }
    if (r.pass) {
        r.detail = "lambda=0 peaks in [" + fmt("%.3g", lo0) + ", " + fmt("%.3g", hi0) + "], lambda=1 peaks >= " +
                   fmt("%.3g", lo1) + ", seeds 1-3";
    }
    return r;
}

Result sarsa_matches_td() {
    Result r;
    oracle::Sampler rng(77);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double lambda = rng.uniform(0, 1);
        const ProblemConstants consts{rng.log_uniform(1e-3, 1), rng.log_uniform(1e-3, 1), rng.log_uniform(1e-3, 1),
                                      1.0, lambda};
        const CriticWeights w{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        Policy noisy(NoisyGreedy{0.01, static_cast<std::uint64_t>(i + 1)});
        const Trajectory traj = unroll(0.0, noisy, w, consts);
        LearnerConfig config;
        config.lambda = lambda;
        config.alpha = 1.0;
        const Vec4 td = td_update(traj, w, consts, config);
        const Vec4 sarsa = sarsa_update(traj, w, consts, config);
        for (std::size_t s = 0; s < 4; ++s) {
            worst = std::max(worst, std::abs(td[s] - sarsa[s]) / std::max({1.0, std::abs(td[s])}));
        }
    }
    r.require(worst <= 1e-12, "per-update difference " + fmt("%.3g", worst));

    std::vector<ExperimentConfig> configs;
    for (const char* name : {"td0-div", "sarsa0-div", "td1-div", "sarsa1-div"}) {
        ExperimentConfig config = make_preset(name).config;
        config.iterations = 1'000'000;
        configs.push_back(config);
    }
    const auto traces = run_many(configs, worker_count());
    double trace_gap = 0.0;
    for (std::size_t pair = 0; pair < 2; ++pair) {
        const auto& a = traces[2 * pair].rows;
        const auto& b = traces[2 * pair + 1].rows;
        r.require(a.size() == b.size(), "trace lengths differ");
        for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
            trace_gap = std::max(trace_gap, std::abs(a[i].p_norm - b[i].p_norm) / a[i].p_norm);
        }
    }
    r.require(trace_gap <= 1e-8, "trace gap " + fmt("%.3g", trace_gap));
    if (r.pass) {
        r.detail = "1000 updates agree to " + fmt("%.2g", worst) + "; 1e6-iteration traces agree to " +
                   fmt("%.2g", trace_gap);
    }
    return r;
}

Result weighted_factorisation() {
    Result r;
    oracle::Sampler rng(99);
    for (int i = 0; i < 100; ++i) {
        const ProblemConstants consts{rng.log_uniform(1e-3, 1), rng.log_uniform(1e-3, 1), rng.log_uniform(1e-3, 1),
                                      1.0, 1.0};
        Matrix2 F;
        do {
            F = {rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)};
        } while (std::abs(F.determinant()) < 1e-2);

        const OmegaFactors f = assemble_omega_appendix(consts);
        const Matrix2 A = assemble_A(consts);
        const Matrix2 product = 2.0 * (f.E * f.B * f.E * f.D);
        const double a_scale = std::max({std::abs(A.m11), std::abs(A.m12), std::abs(A.m21), std::abs(A.m22)});
        r.require(within(product, A, 1e-12 * a_scale), "A != 2EBED");
        const double k = consts.k, c2 = consts.c2;
        r.require(oracle::relative_error(f.B.determinant(), k * (k + 2) * (k + c2) * (k + c2)) <= 1e-12, "det B");
        r.require(f.B.trace() < 0.0 && f.B.m12 == f.B.m21, "B not symmetric with negative trace");

        const Matrix2 M = transform(F, A, f.D);
        const double m_scale = std::max({std::abs(M.m11), std::abs(M.m12), std::abs(M.m22)});
        r.require(std::abs(M.m12 - M.m21) <= 1e-10 * m_scale, "F^T D A F not symmetric");
        r.require(M.m11 < 0.0 && M.determinant() > 0.0, "F^T D A F not negative definite");
    }
    if (r.pass) r.detail = "100 random (c1, c2, k, F) draws";
    return r;
}

Result gradient_checks() {
    Result r;
    oracle::Sampler rng(5);
    int checks = 0;
    auto check = [&](double analytic, double numeric, const char* what) {
        ++checks;
        r.require(oracle::close(analytic, numeric, 1e-6), what);
    };
    for (int i = 0; i < 200; ++i) {
        const ProblemConstants consts{rng.log_uniform(1e-3, 1), rng.log_uniform(1e-3, 1), rng.log_uniform(1e-3, 1),
                                      1.0, 1.0};
        const CriticWeights w{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const double x = rng.uniform(-2, 2);
        const double a = rng.uniform(-2, 2);
        const TimeIndex t = i % 3;
        const auto j = model_jacobians(x, t, a, consts.k);
        check(j.df_dx, oracle::central_difference([&](double v) { return model_step(v, t, a); }, x), "df/dx");
        check(j.df_da, oracle::central_difference([&](double v) { return model_step(x, t, v); }, a), "df/da");
        check(j.dr_dx, oracle::central_difference([&](double v) { return reward_step(v, t, a, consts.k); }, x), "dr/dx");
        check(j.dr_da, oracle::central_difference([&](double v) { return reward_step(x, t, v, consts.k); }, a), "dr/da");
        check(critic_gradient(x, t, w, consts),
              oracle::central_difference([&](double v) { return critic_value(v, t, w, consts); }, x), "critic G");
        check(greedy_action_state_derivative(t, consts),
              oracle::central_difference([&](double v) { return greedy_action(v, t, w, consts); }, x), "dpi/dx");

        // lambda=1 target gradients equal the derivative of the greedy tail return.
        Policy greedy(GreedyAnalytic{});
        const Trajectory traj = unroll(0.0, greedy, w, consts);
        LearnerConfig config;
        config.lambda = 1.0;
        const StepValues g = value_gradient_targets(traj, w, consts, config);
        auto tail_return = [&](double xs) {
            double total = 0.0;
            for (TimeIndex s = t; s < kHorizon; ++s) {
                const double act = greedy_action(xs, s, w, consts);
                total += reward_step(xs, s, act, consts.k);
                xs = model_step(xs, s, act);
            }
            return total;
        };
        check(g[static_cast<std::size_t>(t)], oracle::central_difference(tail_return, traj.state(t)), "G'(lambda=1)");
    }
    if (r.pass) r.detail = std::to_string(checks) + " derivative checks at 1e-6";
    return r;
}

Result reruns_are_identical() {
    Result r;
    std::vector<ExperimentConfig> configs;
    for (const char* name : {"td0-div", "sarsa1-div", "vgl0-div", "vglomega1-conv"}) {
        ExperimentConfig config = make_preset(name).config;
        config.iterations = std::min<std::int64_t>(config.iterations, 500'000);
        configs.push_back(config);
    }
    const auto first = run_many(configs, worker_count());
    const auto second = run_many(configs, 1);
    for (std::size_t i = 0; i < configs.size(); ++i) {
        r.require(csv_text(first[i]) == csv_text(second[i]), "CSV differs between runs");
    }
    if (r.pass) r.detail = "4 presets, parallel and serial reruns byte-identical";
    return r;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
        {"update matrix A at the reference constants", update_matrix_values},
        {"transformed matrices and eigenvalues", transformed_spectra},
        {"update matrix reproduces the rollout update", update_matrix_matches_rollout},
        {"unstable value-gradient runs diverge", value_gradient_runs_diverge},
        {"weighted lambda=1 run converges", weighted_run_converges},
        {"noisy TD and Sarsa runs leave the start", exploration_runs},
        {"Sarsa and TD coincide", sarsa_matches_td},
        {"weighted lambda=1 factorisation", weighted_factorisation},
        {"derivatives agree with finite differences", gradient_checks},
        {"CSV traces are reproducible", reruns_are_identical},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Result result;
        try {
            result = criteria[i].second();
        } catch (const std::exception& e) {
            result.pass = false;
            result.detail = std::string("exception: ") + e.what();
        }
        if (!result.pass) ++failures;
        std::printf("%s  [%zu] %s: %s\n", result.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    result.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
