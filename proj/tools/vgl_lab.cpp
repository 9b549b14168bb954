// Command-line experiment runner for the critic-learning divergence benchmark.
//
//   vgl-lab presets
//   vgl-lab run --preset vgl0-div --out vgl0.csv
//   vgl-lab run --algorithm td --lambda 0 --alpha 1e-6 --F 10,1,-1,-1 --noise-var 1e-4 --out td.csv
//   vgl-lab stability --preset vglomega1-conv --json
//   vgl-lab sweep --jobs 4 --out-dir traces

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "vgl/harness.hpp"

namespace {

struct Flags {
    std::string preset;
    std::string algorithm = "vgl";
    double lambda = 0.0;
    double alpha = 1e-6;
    double c1 = 0.01;
    double c2 = 0.01;
    double k = 0.01;
    double gamma = 1.0;
    double mix = 0.5;
    std::vector<double> F{1.0, 0.0, 0.0, 1.0};
    std::vector<double> p0{vgl::kPresetStart.v1, vgl::kPresetStart.v2};
    std::vector<double> w34{0.0, 0.0};
    std::int64_t iterations = 10'000'000;
    std::uint64_t seed = 1;
    double noise_var = 0.0;
    std::int64_t record_every = 1000;
    double diverge_threshold = 0.0;
    double converge_threshold = 1e-10;
    bool keep_running = false;
};

struct Options {
    CLI::Option* preset = nullptr;
    CLI::Option* algorithm = nullptr;
    CLI::Option* lambda = nullptr;
    CLI::Option* alpha = nullptr;
    CLI::Option* c1 = nullptr;
    CLI::Option* c2 = nullptr;
    CLI::Option* k = nullptr;
    CLI::Option* gamma = nullptr;
    CLI::Option* mix = nullptr;
    CLI::Option* F = nullptr;
    CLI::Option* p0 = nullptr;
    CLI::Option* w34 = nullptr;
    CLI::Option* iterations = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* noise_var = nullptr;
    CLI::Option* record_every = nullptr;
    CLI::Option* diverge_threshold = nullptr;
    CLI::Option* converge_threshold = nullptr;
    CLI::Option* keep_running = nullptr;
};

Options add_experiment_flags(CLI::App& cmd, Flags& f) {
    Options o;
    o.preset = cmd.add_option("--preset", f.preset, "Named preset; other flags override its fields");
    o.algorithm = cmd.add_option("--algorithm", f.algorithm, "td, sarsa, vgl, vglomega, hdp, dhp or gdhp");
    o.lambda = cmd.add_option("--lambda", f.lambda, "Return-mixing factor lambda")->check(CLI::Range(0.0, 1.0));
    o.alpha = cmd.add_option("--alpha", f.alpha, "Learning rate");
    o.c1 = cmd.add_option("--c1", f.c1, "Critic curvature at t=1");
    o.c2 = cmd.add_option("--c2", f.c2, "Critic curvature at t=2");
    o.k = cmd.add_option("--k", f.k, "Action cost coefficient");
    o.gamma = cmd.add_option("--gamma", f.gamma, "Discount factor")->check(CLI::Range(0.0, 1.0));
    o.mix = cmd.add_option("--mix", f.mix, "GDHP weight on the VGL(0) update")->check(CLI::Range(0.0, 1.0));
    o.F = cmd.add_option("--F", f.F, "Reparametrisation matrix, row-major a,b,c,d")->delimiter(',')->expected(4);
    o.p0 = cmd.add_option("--p0", f.p0, "Starting p as x,y")->delimiter(',')->expected(2);
    o.w34 = cmd.add_option("--w34", f.w34, "Starting bias weights w3,w4")->delimiter(',')->expected(2);
    o.iterations = cmd.add_option("--iterations", f.iterations, "Iteration budget");
    o.seed = cmd.add_option("--seed", f.seed, "Exploration noise seed");
    o.noise_var = cmd.add_option("--noise-var", f.noise_var, "Exploration noise variance");
    o.record_every = cmd.add_option("--record-every", f.record_every, "Record one CSV row every N iterations");
    o.diverge_threshold =
        cmd.add_option("--diverge-threshold", f.diverge_threshold, "|p| above which a run counts as diverged (0 = 1e4 |p0|)");
    o.converge_threshold =
        cmd.add_option("--converge-threshold", f.converge_threshold, "|p| below which a run counts as converged");
    o.keep_running = cmd.add_flag("--keep-running", f.keep_running, "Do not stop at the divergence threshold");
    return o;
}

struct Resolved {
    vgl::ExperimentConfig config;
    std::optional<vgl::OutcomeKind> expected;
};

Resolved resolve(const Flags& f, const Options& o) {
    Resolved out;
    vgl::ExperimentConfig& c = out.config;
    vgl::Algorithm algorithm = vgl::parse_algorithm(f.algorithm);
    double alpha = f.alpha;
    double mix = f.mix;
    if (o.preset->count() > 0) {
        const vgl::Preset preset = vgl::make_preset(f.preset);
        c = preset.config;
        out.expected = preset.expected;
        if (o.algorithm->count() == 0) algorithm = c.learner.algorithm;
        if (o.alpha->count() == 0) alpha = c.learner.alpha;
        if (o.mix->count() == 0) mix = c.learner.gdhp_mix;
    } else {
        c.consts = {f.c1, f.c2, f.k, f.gamma, f.lambda};
        c.F = {f.F[0], f.F[1], f.F[2], f.F[3]};
        c.p0 = {f.p0[0], f.p0[1]};
        c.w34_0 = {f.w34[0], f.w34[1]};
        c.iterations = f.iterations;
        c.seed = f.seed;
        c.noise_variance = f.noise_var;
        c.record_every = f.record_every;
        c.divergence_threshold = f.diverge_threshold;
        c.convergence_threshold = f.converge_threshold;
        c.stop_on_divergence = !f.keep_running;
    }
    // Explicit flags win over preset values.
    if (o.c1->count()) c.consts.c1 = f.c1;
    if (o.c2->count()) c.consts.c2 = f.c2;
    if (o.k->count()) c.consts.k = f.k;
    if (o.gamma->count()) c.consts.gamma = f.gamma;
    if (o.lambda->count()) c.consts.lambda = f.lambda;
    if (o.F->count()) c.F = {f.F[0], f.F[1], f.F[2], f.F[3]};
    if (o.p0->count()) c.p0 = {f.p0[0], f.p0[1]};
    if (o.w34->count()) c.w34_0 = {f.w34[0], f.w34[1]};
    if (o.iterations->count()) c.iterations = f.iterations;
    if (o.seed->count()) c.seed = f.seed;
    if (o.noise_var->count()) c.noise_variance = f.noise_var;
    if (o.record_every->count()) c.record_every = f.record_every;
    if (o.diverge_threshold->count()) c.divergence_threshold = f.diverge_threshold;
    if (o.converge_threshold->count()) c.convergence_threshold = f.converge_threshold;
    if (o.keep_running->count()) c.stop_on_divergence = false;
    c.learner = vgl::make_learner_config(algorithm, c.consts, alpha, mix);
    c.validate();
    return out;
}

void print_summary(const std::string& label, const vgl::RunTrace& trace, double seconds) {
    const auto& last = trace.rows.back();
    std::cout << label << ": outcome=" << vgl::to_string(trace.outcome.kind) << " at=" << trace.outcome.at
              << " final|p|=" << vgl::format_real(last.p_norm) << " peak|p|=" << vgl::format_real(trace.peak_norm)
              << " (" << seconds << " s)\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Critic-learning divergence laboratory"};
    app.set_config("--config", "", "key=value file mirroring the command-line flags");
    app.require_subcommand(1);

    app.add_subcommand("presets", "List the built-in presets");

    Flags run_flags;
    std::string out_path;
    auto* run = app.add_subcommand("run", "Run one learning experiment and write its |p| trace as CSV");
    const Options run_opts = add_experiment_flags(*run, run_flags);
    run->add_option("--out", out_path, "CSV output path");

    Flags stab_flags;
    bool as_json = false;
    auto* stability = app.add_subcommand("stability", "Print the analytic stability report");
    const Options stab_opts = add_experiment_flags(*stability, stab_flags);
    stability->add_flag("--json", as_json, "Emit a JSON record instead of text");

    unsigned jobs = 1;
    std::string out_dir = ".";
    std::optional<std::uint64_t> sweep_seed;
    auto* sweep = app.add_subcommand("sweep", "Run every preset and write one CSV per preset");
    sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    sweep->add_option("--out-dir", out_dir, "Output directory");
    sweep->add_option("--seed", sweep_seed, "Seed for the noisy presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (app.got_subcommand("presets")) {
            for (const auto& name : vgl::preset_names()) {
                const auto preset = vgl::make_preset(name);
                std::cout << name << "\t" << preset.description << "\n";
            }
            return 0;
        }
        if (app.got_subcommand("stability")) {
            const Resolved r = resolve(stab_flags, stab_opts);
            const auto report = vgl::report_stability(r.config);
            if (as_json) {
                std::cout << vgl::to_json(report).dump(2) << "\n";
            } else {
                std::cout << vgl::to_text(report);
            }
            return 0;
        }
        if (app.got_subcommand("run")) {
            const Resolved r = resolve(run_flags, run_opts);
            const auto start = std::chrono::steady_clock::now();
            const vgl::RunTrace trace = vgl::run_experiment(r.config);
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
            print_summary(run_flags.preset.empty() ? "run" : run_flags.preset, trace, elapsed.count());
            if (!out_path.empty()) vgl::emit_csv(trace, out_path);
            if (r.expected && trace.outcome.kind != *r.expected) {
                std::cerr << "outcome differs from the preset's expected "
                          << vgl::to_string(*r.expected) << "\n";
                return 1;
            }
            return 0;
        }
        if (app.got_subcommand("sweep")) {
            std::vector<vgl::ExperimentConfig> configs;
            for (const auto& name : vgl::preset_names()) {
                auto cfg = vgl::make_preset(name).config;
                if (sweep_seed) cfg.seed = *sweep_seed;
                configs.push_back(cfg);
            }
            std::filesystem::create_directories(out_dir);
            const auto traces = vgl::run_many(configs, jobs);
            int status = 0;
            for (std::size_t i = 0; i < traces.size(); ++i) {
                const auto& name = vgl::preset_names()[i];
                vgl::emit_csv(traces[i], std::filesystem::path(out_dir) / (name + ".csv"));
                print_summary(name, traces[i], 0.0);
                if (traces[i].outcome.kind != vgl::make_preset(name).expected) status = 1;
            }
            return status;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
