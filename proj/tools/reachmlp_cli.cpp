// Command-line front end: eval, sensitivity, reach, verify, sample,
// gen-arm-data. Configuration comes from a JSON file plus flag overrides
// (flags win). Exit codes: 0 success/SAFE, 10 UNSAFE, 11 UNCERTAIN,
// 64 usage error, 66 missing input file, 70 internal error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "reachmlp/reachmlp.hpp"

namespace {

constexpr int kExitSafe = 0;
constexpr int kExitUnsafe = 10;
constexpr int kExitUncertain = 11;
constexpr int kExitUsage = 64;
constexpr int kExitNoInput = 66;
constexpr int kExitInternal = 70;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string network_path;
    std::vector<reachmlp::InputBox> input_set;
    std::optional<double> delta;
    std::optional<reachmlp::SafetySpec> spec;
    std::size_t samples = 10000;
    std::uint64_t seed = 2024;
    std::size_t workers = 0;  // 0 = all available
    std::string out;
};

nlohmann::json read_json_file(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) {
        throw std::system_error(errno, std::generic_category(),
                                std::string("cannot open ") + what + " \"" + path + "\"");
    }
    try {
        nlohmann::json doc;
        in >> doc;
        return doc;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string(what) + " \"" + path + "\": " + e.what());
    }
}

reachmlp::InputBox parse_box(const nlohmann::json& jbox) {
    if (!jbox.is_array() || jbox.empty()) {
        throw UsageError("input_set: each box must be a nonempty array of [lower, upper] pairs");
    }
    reachmlp::InputBox box;
    for (const auto& pair : jbox) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
            throw UsageError("input_set: each dimension must be a [lower, upper] pair");
        }
        box.lower.push_back(pair[0].get<double>());
        box.upper.push_back(pair[1].get<double>());
    }
    box.validate();
    return box;
}

reachmlp::SafetySpec parse_spec(const nlohmann::json& jspec) {
    if (!jspec.is_array()) {
        throw UsageError("spec: must be an array of per-output {min, max} objects");
    }
    reachmlp::SafetySpec spec;
    for (const auto& jiv : jspec) {
        if (!jiv.is_object()) {
            throw UsageError("spec: each entry must be an object with optional min/max");
        }
        reachmlp::OutputInterval iv;
        if (jiv.contains("min")) iv.lower = jiv["min"].get<double>();
        if (jiv.contains("max")) iv.upper = jiv["max"].get<double>();
        spec.safe_box.push_back(iv);
    }
    return spec;
}

RunConfig load_config(const std::string& path) {
    const nlohmann::json doc = read_json_file(path, "config file");
    if (!doc.is_object()) throw UsageError("config file: top level must be an object");
    RunConfig cfg;
    if (doc.contains("network")) cfg.network_path = doc["network"].get<std::string>();
    if (doc.contains("delta")) cfg.delta = doc["delta"].get<double>();
    if (doc.contains("input_set")) {
        for (const auto& jbox : doc["input_set"]) cfg.input_set.push_back(parse_box(jbox));
    }
    if (doc.contains("spec")) cfg.spec = parse_spec(doc["spec"]);
    if (doc.contains("samples")) cfg.samples = doc["samples"].get<std::size_t>();
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("workers")) cfg.workers = doc["workers"].get<std::size_t>();
    if (doc.contains("out")) cfg.out = doc["out"].get<std::string>();
    return cfg;
}

std::string fp(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

reachmlp::Mlp require_network(const RunConfig& cfg) {
    if (cfg.network_path.empty()) {
        throw UsageError("a network file is required (--network or config \"network\")");
    }
    std::ifstream in(cfg.network_path);
    if (!in) {
        throw std::system_error(errno, std::generic_category(),
                                "cannot open network file \"" + cfg.network_path + "\"");
    }
    return reachmlp::load_network(in);
}

double require_positive_delta(const RunConfig& cfg) {
    if (!cfg.delta.has_value()) throw UsageError("delta is required (--delta or config \"delta\")");
    if (!(*cfg.delta > 0.0)) throw UsageError("delta must be > 0, got " + fp(*cfg.delta));
    return *cfg.delta;
}

/// Writes through `fn` to the --out file, or to stdout when none is set.
template <typename Fn>
void with_sink(const std::string& out, Fn&& fn) {
    if (out.empty() || out == "-") {
        fn(std::cout);
        return;
    }
    std::ofstream file(out);
    if (!file) {
        throw std::system_error(errno, std::generic_category(),
                                "cannot open output file \"" + out + "\"");
    }
    fn(file);
}

int cmd_eval(const RunConfig& cfg, const std::vector<double>& x) {
    const reachmlp::Mlp net = require_network(cfg);
    if (x.size() != net.input_dim()) {
        throw UsageError("--x has " + std::to_string(x.size()) + " components, network expects " +
                         std::to_string(net.input_dim()));
    }
    const reachmlp::Vec y = reachmlp::forward(net, x);
    for (std::size_t j = 0; j < y.size(); ++j) std::cout << (j == 0 ? "" : " ") << fp(y[j]);
    std::cout << "\n";
    return kExitSafe;
}

int cmd_sensitivity(const RunConfig& cfg, const std::vector<double>& x) {
    const reachmlp::Mlp net = require_network(cfg);
    if (!cfg.delta.has_value() || !(*cfg.delta >= 0.0)) {
        throw UsageError("sensitivity requires --delta >= 0");
    }
    if (x.size() != net.input_dim()) {
        throw UsageError("--x has " + std::to_string(x.size()) + " components, network expects " +
                         std::to_string(net.input_dim()));
    }
    const reachmlp::SensitivityResult r = reachmlp::max_sensitivity(net, x, *cfg.delta);
    std::cout << "epsilon: " << fp(r.epsilon) << "\n";
    for (std::size_t l = 0; l < r.layer_trace.size(); ++l) {
        const auto& entry = r.layer_trace[l];
        std::cout << "layer " << (l + 1) << ": in_radius=" << fp(entry.in_radius)
                  << " epsilon=" << fp(entry.epsilon) << "\n";
    }
    return kExitSafe;
}

int cmd_reach(const RunConfig& cfg) {
    const reachmlp::Mlp net = require_network(cfg);
    const double delta = require_positive_delta(cfg);
    const reachmlp::ReachEstimate est =
        reachmlp::output_reach(net, cfg.input_set, delta, cfg.workers);
    std::cout << "delta: " << fp(delta) << "\n";
    std::cout << "cells: " << est.cell_count << "\n";
    std::cout << "tubes: " << est.tubes.size() << "\n";
    if (!cfg.out.empty()) {
        with_sink(cfg.out, [&](std::ostream& sink) { reachmlp::export_tubes(est, sink); });
        std::cout << "exported: " << cfg.out << "\n";
    } else {
        reachmlp::export_tubes(est, std::cout);
    }
    return kExitSafe;
}

int cmd_verify(const RunConfig& cfg) {
    const reachmlp::Mlp net = require_network(cfg);
    const double delta = require_positive_delta(cfg);
    if (!cfg.spec.has_value()) {
        throw UsageError("verify requires a safety spec in the config file");
    }
    if (cfg.input_set.empty()) {
        throw UsageError("verify requires a nonempty input_set in the config file");
    }
    const reachmlp::Verdict v =
        reachmlp::safety_verify(net, cfg.input_set, *cfg.spec, delta, cfg.workers);
    std::cout << "verdict: " << reachmlp::to_string(v.kind) << "\n";
    std::cout << "cells: " << v.cell_count << "\n";
    switch (v.kind) {
        case reachmlp::Safety::safe:
            return kExitSafe;
        case reachmlp::Safety::unsafe: {
            std::cout << "witness_input:";
            for (double c : v.witness_input) std::cout << " " << fp(c);
            std::cout << "\nwitness_output:";
            for (double c : v.witness_output) std::cout << " " << fp(c);
            std::cout << "\n";
            return kExitUnsafe;
        }
        case reachmlp::Safety::uncertain: {
            std::cout << "offending_tubes:";
            for (std::size_t t : v.offending_tubes) std::cout << " " << t;
            std::cout << "\n";
            return kExitUncertain;
        }
    }
    return kExitInternal;
}

int cmd_sample(const RunConfig& cfg, const std::string& tubes_path) {
    const reachmlp::Mlp net = require_network(cfg);
    reachmlp::ReachEstimate est;
    if (!tubes_path.empty()) {
        std::ifstream in(tubes_path);
        if (!in) {
            throw std::system_error(errno, std::generic_category(),
                                    "cannot open tube file \"" + tubes_path + "\"");
        }
        est = reachmlp::import_tubes(in);
    } else {
        est = reachmlp::output_reach(net, cfg.input_set, require_positive_delta(cfg), cfg.workers);
    }
    const reachmlp::SampleReport report =
        reachmlp::sample_containment(net, cfg.input_set, est, cfg.samples, cfg.seed);
    with_sink(cfg.out, [&](std::ostream& sink) {
        reachmlp::write_sample_report(report, cfg.seed, sink);
    });
    return kExitSafe;
}

int cmd_gen_arm_data(const reachmlp::ArmConfig& arm, std::size_t grid, const std::string& out) {
    with_sink(out, [&](std::ostream& sink) { reachmlp::gen_arm_data(arm, grid, sink); });
    return kExitSafe;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reachable-set estimation and safety verification for MLPs"};
    app.require_subcommand(1);

    std::string config_path;
    std::string network_flag;
    std::vector<double> x_flag;
    double delta_flag = -1.0;
    bool delta_set = false;
    std::uint64_t seed_flag = 0;
    bool seed_set = false;
    std::size_t samples_flag = 0;
    bool samples_set = false;
    std::size_t workers_flag = 0;
    bool workers_set = false;
    std::string out_flag;
    std::string tubes_path;

    const auto add_common = [&](CLI::App* cmd, bool wants_x) {
        cmd->add_option("--config", config_path, "JSON run configuration");
        cmd->add_option("--network", network_flag, "network document (overrides config)");
        cmd->add_option("--delta", delta_flag, "lattice radius (overrides config)")
            ->each([&](const std::string&) { delta_set = true; });
        cmd->add_option("--seed", seed_flag, "random seed (overrides config)")
            ->each([&](const std::string&) { seed_set = true; });
        cmd->add_option("--samples", samples_flag, "sample count (overrides config)")
            ->each([&](const std::string&) { samples_set = true; });
        cmd->add_option("--workers", workers_flag, "worker threads, 0 = all (overrides config)")
            ->each([&](const std::string&) { workers_set = true; });
        cmd->add_option("--out", out_flag, "output path (overrides config; default stdout)");
        if (wants_x) {
            cmd->add_option("--x", x_flag, "input point, comma separated")->delimiter(',');
        }
    };

    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate the network at a point");
    add_common(eval_cmd, true);
    CLI::App* sens_cmd = app.add_subcommand("sensitivity", "maximum sensitivity at a point");
    add_common(sens_cmd, true);
    CLI::App* reach_cmd = app.add_subcommand("reach", "output reachable set estimation");
    add_common(reach_cmd, false);
    CLI::App* verify_cmd = app.add_subcommand("verify", "safety verification");
    add_common(verify_cmd, false);
    CLI::App* sample_cmd = app.add_subcommand("sample", "randomized containment audit");
    add_common(sample_cmd, false);
    sample_cmd->add_option("--tubes", tubes_path, "audit a previously exported tube file");

    reachmlp::ArmConfig arm;
    std::size_t arm_grid = 41;
    CLI::App* arm_cmd = app.add_subcommand("gen-arm-data", "two-link arm kinematics dataset");
    arm_cmd->add_option("--l1", arm.l1, "first link length");
    arm_cmd->add_option("--l2", arm.l2, "second link length");
    arm_cmd->add_option("--grid", arm_grid, "grid points per joint");
    std::vector<double> zone;
    arm_cmd->add_option("--zone", zone, "theta1_min,theta1_max,theta2_min,theta2_max")
        ->delimiter(',')
        ->expected(4);
    arm_cmd->add_option("--out", out_flag, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (!network_flag.empty()) cfg.network_path = network_flag;
        if (delta_set) cfg.delta = delta_flag;
        if (seed_set) cfg.seed = seed_flag;
        if (samples_set) cfg.samples = samples_flag;
        if (workers_set) cfg.workers = workers_flag;
        if (!out_flag.empty()) cfg.out = out_flag;

        if (eval_cmd->parsed()) return cmd_eval(cfg, x_flag);
        if (sens_cmd->parsed()) return cmd_sensitivity(cfg, x_flag);
        if (reach_cmd->parsed()) return cmd_reach(cfg);
        if (verify_cmd->parsed()) return cmd_verify(cfg);
        if (sample_cmd->parsed()) return cmd_sample(cfg, tubes_path);
        if (arm_cmd->parsed()) {
            if (zone.size() == 4) {
                arm.theta1_min = zone[0];
                arm.theta1_max = zone[1];
                arm.theta2_min = zone[2];
                arm.theta2_max = zone[3];
            }
            return cmd_gen_arm_data(arm, arm_grid, cfg.out);
        }
        return kExitUsage;
    } catch (const std::system_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoInput;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const reachmlp::NetworkFormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
