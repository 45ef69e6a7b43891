#include "vdtn/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace vdtn {

namespace fs = std::filesystem;

WorkloadSpec workload_spec_from(const ExperimentConfig& cfg, int vehicles_override) {
    WorkloadSpec spec;
    int total = vehicles_override > 0 ? vehicles_override : cfg.total_vehicles();
    // scaling keeps the cluster size and grows the number of clusters, so a
    // 10-vehicle world is one cluster of ten rather than ten singletons
    if (total <= cfg.per_cluster) {
        spec.num_clusters = 1;
        spec.per_cluster = total;
    } else {
        if (total % cfg.per_cluster != 0) {
            throw std::invalid_argument(
                "vehicles: must be a multiple of per_cluster (or at most one cluster)");
        }
        spec.num_clusters = total / cfg.per_cluster;
        spec.per_cluster = cfg.per_cluster;
    }
    spec.mix = cfg.mix();
    spec.weights = cfg.weights();
    spec.samples_per_twin = cfg.samples_per_twin;
    spec.trace_path = cfg.trace;
    spec.inject_window = cfg.inject_window;
    spec.injection_factor = cfg.injection_factor;
    spec.off_peak_factor = cfg.off_peak_factor;
    spec.off_peak_window = cfg.off_peak_window;
    spec.k = cfg.k;
    spec.max_resources_per_task = cfg.max_resources;
    spec.hub_bias = cfg.hub_bias;
    spec.datacenter.num_datacenters = cfg.datacenters;
    spec.datacenter.vms_per_datacenter = cfg.vms_per_datacenter;
    spec.datacenter.vm_memory = cfg.vm_memory;
    spec.datacenter.vm_bandwidth = cfg.vm_bandwidth;
    spec.datacenter.host_mips = cfg.host_mips;
    spec.channel.transit_rate = cfg.vm_bandwidth;  // base-station rate mirrors VM bandwidth
    spec.channel.capacity_window = cfg.capacity_window;
    return spec;
}

SimConfig sim_config_from(const ExperimentConfig& cfg) {
    SimConfig sc;
    sc.horizon = cfg.horizon;
    sc.intra.k = cfg.k;
    sc.intra.exchange_overhead = cfg.exchange_overhead;
    sc.intra.mips_per_unit = cfg.mips_per_unit;
    sc.weights = cfg.weights();
    sc.aging = cfg.aging_policy();
    sc.failures = cfg.failures;
    sc.failure_stall = cfg.failure_stall;
    sc.churn = cfg.churn;
    // churn must land while traffic is in flight to measure anything
    sc.churn_time = cfg.churn_time > 0 ? cfg.churn_time : cfg.inject_window / 2;
    sc.hub_bias = cfg.hub_bias;
    return sc;
}

SingleRun run_single(const ExperimentConfig& cfg, PolicyKind kind, uint64_t seed,
                     const BuiltWorld* prebuilt) {
    BuiltWorld local;
    const BuiltWorld* bw = prebuilt;
    if (bw == nullptr) {
        local = build_world(workload_spec_from(cfg), seed);
        bw = &local;
    }
    auto violations = validate_world(bw->world);
    if (!violations.empty() && !(bw->world.twins.size() == 1)) {
        throw std::runtime_error("world validation failed: " + violations.front().detail);
    }

    SimConfig sc = sim_config_from(cfg);
    SingleRun out;
    {
        SimConfig base = sc;
        base.churn = false;
        auto policy = make_policy(kind, cfg.weights(), cfg.aging_policy());
        out.log = run_simulation(bw->world, bw->plan, *policy, base, seed);
    }
    if (cfg.churn) {
        SimConfig churned = sc;
        churned.churn = true;
        auto policy = make_policy(kind, cfg.weights(), cfg.aging_policy());
        out.churn_log = run_simulation(bw->world, bw->plan, *policy, churned, seed);
    }
    out.metrics = compute_metrics(out.log, out.churn_log ? &*out.churn_log : nullptr);
    return out;
}

std::string per_run_metrics_row(int run_index, const MetricsReport& m) {
    std::ostringstream os;
    os << run_index;
    for (int f = 0; f < MetricsReport::kFieldCount; ++f) {
        os << ',' << format_metric(m.field(f));
    }
    return os.str();
}

namespace {

void write_per_run_csv(const std::string& path, const std::vector<MetricsReport>& rows) {
    std::ofstream ofs(path, std::ios::binary);
    if (!ofs) throw std::runtime_error("cannot write " + path);
    ofs << "run";
    for (const char* name : MetricsReport::field_names()) ofs << ',' << name;
    ofs << '\n';
    for (size_t i = 0; i < rows.size(); ++i) {
        ofs << per_run_metrics_row(static_cast<int>(i), rows[i]) << '\n';
    }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_outputs) {
    validate_config(cfg);
    ExperimentResult result;
    const bool single_policy = cfg.policies.size() == 1;

    fs::path out_dir(cfg.out);
    if (write_outputs) {
        fs::create_directories(out_dir / "runs");
        std::ofstream cfg_out(out_dir / "config.txt", std::ios::binary);
        cfg_out << emit_config(cfg);
    }

    for (size_t pi = 0; pi < cfg.policies.size(); ++pi) {
        result.per_run.emplace_back();
    }

    for (int i = 0; i < cfg.runs; ++i) {
        uint64_t seed = cfg.seed + static_cast<uint64_t>(i);
        BuiltWorld bw = build_world(workload_spec_from(cfg), seed);
        for (size_t pi = 0; pi < cfg.policies.size(); ++pi) {
            PolicyKind kind = cfg.policies[pi];
            SingleRun run = run_single(cfg, kind, seed, &bw);
            result.per_run[pi].push_back(run.metrics);
            if (write_outputs) {
                fs::path run_dir = out_dir / "runs";
                if (!single_policy) {
                    run_dir /= to_string(kind);
                    fs::create_directories(run_dir);
                }
                run.log.save((run_dir / (std::to_string(i) + ".log")).string());
                if (run.churn_log) {
                    run.churn_log->save(
                        (run_dir / (std::to_string(i) + ".churn.log")).string());
                }
            }
        }
    }

    for (size_t pi = 0; pi < cfg.policies.size(); ++pi) {
        PolicyReport pr;
        pr.policy = to_string(cfg.policies[pi]);
        pr.agg = aggregate(result.per_run[pi]);
        result.reports.push_back(std::move(pr));
    }

    if (write_outputs) {
        for (size_t pi = 0; pi < cfg.policies.size(); ++pi) {
            const auto& pr = result.reports[pi];
            write_report_csv((out_dir / ("report." + pr.policy + ".csv")).string(), {pr});
            write_per_run_csv((out_dir / ("per_run." + pr.policy + ".csv")).string(),
                              result.per_run[pi]);
        }
        write_report_json((out_dir / "report.json").string(), result.reports);
        write_long_csv((out_dir / "report_long.csv").string(), result.reports);
    }
    return result;
}

std::vector<SweepRow> scalability_sweep(const ExperimentConfig& cfg,
                                        const std::vector<int>& sizes) {
    validate_config(cfg);
    if (sizes.empty()) throw std::invalid_argument("sweep: sizes must be non-empty");
    std::vector<SweepRow> rows;
    for (PolicyKind kind : cfg.policies) {
        for (int size : sizes) {
            std::vector<MetricsReport> per_run;
            for (int i = 0; i < cfg.runs; ++i) {
                uint64_t seed = cfg.seed + static_cast<uint64_t>(i);
                BuiltWorld bw = build_world(workload_spec_from(cfg, size), seed);
                ExperimentConfig cell = cfg;
                cell.vehicles = size;
                per_run.push_back(run_single(cell, kind, seed, &bw).metrics);
            }
            SweepRow row;
            row.policy = to_string(kind);
            row.size = size;
            row.mean = aggregate(per_run).mean;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

int cmd_run(const ExperimentConfig& cfg) {
    try {
        ExperimentResult result = run_experiment(cfg, true);
        for (const auto& pr : result.reports) {
            std::cout << pr.policy << ":";
            for (int f = 0; f < MetricsReport::kFieldCount; ++f) {
                std::cout << ' ' << MetricsReport::field_names()[static_cast<size_t>(f)]
                          << '=' << format_metric(pr.agg.mean.field(f));
            }
            std::cout << '\n';
        }
        std::cout << "report written to " << cfg.out << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

int cmd_compare(const ExperimentConfig& cfg) {
    ExperimentConfig all = cfg;
    all.policies = {PolicyKind::RoundRobin, PolicyKind::Throttled, PolicyKind::PriorityVdtn};
    return cmd_run(all);
}

int cmd_sweep(const ExperimentConfig& cfg) {
    try {
        ExperimentConfig all = cfg;
        if (all.policies.size() == 1 && all.policies[0] == PolicyKind::PriorityVdtn) {
            all.policies = {PolicyKind::RoundRobin, PolicyKind::Throttled,
                            PolicyKind::PriorityVdtn};
        }
        auto rows = scalability_sweep(all, all.sweep_sizes);
        fs::create_directories(all.out);
        write_sweep_csv((fs::path(all.out) / "sweep.csv").string(), rows);
        for (const auto& r : rows) {
            std::cout << r.policy << " size=" << r.size
                      << " mdr=" << format_metric(r.mean.mdr)
                      << " lat=" << format_metric(r.mean.lat)
                      << " ac=" << format_metric(r.mean.ac) << '\n';
        }
        std::cout << "sweep written to " << all.out << "/sweep.csv\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

int cmd_replay(const std::string& runlog_path) {
    try {
        RunLog log = RunLog::load(runlog_path);
        std::optional<RunLog> churn;
        fs::path p(runlog_path);
        if (p.extension() == ".log" && p.stem().extension() != ".churn") {
            fs::path churn_path = p.parent_path() / (p.stem().string() + ".churn.log");
            if (fs::exists(churn_path)) churn = RunLog::load(churn_path.string());
        }
        MetricsReport m = compute_metrics(log, churn ? &*churn : nullptr);
        std::cout << "policy=" << log.policy << " seed=" << log.seed << '\n';
        for (int f = 0; f < MetricsReport::kFieldCount; ++f) {
            std::cout << MetricsReport::field_names()[static_cast<size_t>(f)] << '='
                      << format_metric(m.field(f)) << '\n';
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace vdtn
