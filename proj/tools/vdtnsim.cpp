#include "vdtn/experiment.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>

namespace {

struct FlagBag {
    std::vector<std::pair<std::string, std::string>> kvs;  // applied in flag order
    std::string config_file;
};

void add_common_options(CLI::App* cmd, FlagBag& bag) {
    cmd->add_option("--config", bag.config_file, "flat key=value config file");
    auto opt = [cmd, &bag](const std::string& flag, const std::string& key,
                           const std::string& desc) {
        cmd->add_option_function<std::string>(
            flag, [&bag, key](const std::string& v) { bag.kvs.emplace_back(key, v); }, desc);
    };
    opt("--algorithm", "algorithm", "scheduling policy: priority, rr, throttled (comma list)");
    opt("--runs", "runs", "number of seeded runs");
    opt("--seed", "seed", "base seed; run i uses seed+i");
    opt("--vehicles", "vehicles", "total vehicle count (multiple of clusters)");
    opt("--clusters", "clusters", "number of clusters / base stations");
    opt("--per-cluster", "per_cluster", "twins per cluster");
    opt("--k", "k", "inter-twin updates per round");
    opt("--alpha", "alpha", "vehicle-class weight");
    opt("--beta", "beta", "application-class weight");
    opt("--aging", "aging", "enable aging (true/false)");
    opt("--aging-interval", "aging_interval", "ticks between aging steps");
    opt("--aging-step", "aging_step", "priority decrement per aging step (0 = beta)");
    opt("--aging-floor", "aging_floor", "best effective priority (0 = alpha+beta)");
    opt("--trace", "trace", "mobility trace CSV path");
    opt("--out", "out", "output directory");
    opt("--sweep", "sweep", "comma-separated vehicle counts for sweeps");
    opt("--horizon", "horizon", "simulation horizon in ticks");
    opt("--inject-window", "inject_window", "injection window in ticks");
    opt("--injection-factor", "injection_factor", "injection rate vs service capacity");
    opt("--max-resources", "max_resources", "max partner resources per task");
    opt("--churn-time", "churn_time", "churn tick (0 = horizon/2)");
    opt("--failure-stall", "failure_stall", "ticks before a dead twin's holdings free (-1 = never)");
    opt("--mix-high", "mix_high", "high-class share of the fleet");
    opt("--mix-medium", "mix_medium", "medium-class share of the fleet");
    opt("--mix-normal", "mix_normal", "normal-class share of the fleet");
    cmd->add_flag_function(
        "--churn",
        [&bag](int64_t) { bag.kvs.emplace_back("churn", "true"); },
        "pair every run with a topology-churn run (feeds adc)");
    cmd->add_option("--fail-twin")
        ->description("inject a twin failure, id@tick (repeatable)")
        ->each([&bag](const std::string& v) { bag.kvs.emplace_back("fail_twin", v); });
}

vdtn::ExperimentConfig build_config(const FlagBag& bag) {
    vdtn::ExperimentConfig cfg = vdtn::default_config();
    if (const char* env_out = std::getenv("VDTNSIM_OUT"); env_out && *env_out) {
        cfg.out = env_out;  // replaces the built-in default only
    }
    if (!bag.config_file.empty()) {
        vdtn::ExperimentConfig from_file = vdtn::load_config_file(bag.config_file);
        std::string out_default = cfg.out;
        cfg = from_file;
        vdtn::ExperimentConfig untouched = vdtn::default_config();
        if (cfg.out == untouched.out) cfg.out = out_default;
    }
    for (const auto& [key, value] : bag.kvs) {
        vdtn::apply_config_kv(cfg, key, value);
    }
    vdtn::validate_config(cfg);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vdtnsim: priority-based inter-twin scheduling simulator"};
    app.require_subcommand(1);

    FlagBag run_bag, compare_bag, sweep_bag, print_bag;
    auto* run_cmd = app.add_subcommand("run", "run one experiment and write reports");
    add_common_options(run_cmd, run_bag);
    auto* compare_cmd =
        app.add_subcommand("compare", "run all three policies on the same seeds");
    add_common_options(compare_cmd, compare_bag);
    auto* sweep_cmd = app.add_subcommand("sweep", "scalability sweep over vehicle counts");
    add_common_options(sweep_cmd, sweep_bag);
    auto* print_cmd = app.add_subcommand("print-config", "print the fully resolved config");
    add_common_options(print_cmd, print_bag);

    std::string replay_path;
    auto* replay_cmd = app.add_subcommand("replay", "recompute metrics from a stored run log");
    replay_cmd->add_option("runlog", replay_path, "path to runs/<i>.log")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return vdtn::cmd_run(build_config(run_bag));
        if (compare_cmd->parsed()) return vdtn::cmd_compare(build_config(compare_bag));
        if (sweep_cmd->parsed()) return vdtn::cmd_sweep(build_config(sweep_bag));
        if (print_cmd->parsed()) {
            std::cout << vdtn::emit_config(build_config(print_bag));
            return 0;
        }
        if (replay_cmd->parsed()) return vdtn::cmd_replay(replay_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
