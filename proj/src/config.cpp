#include "vdtn/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vdtn {

AgingPolicy ExperimentConfig::aging_policy() const {
    if (!aging) return AgingPolicy::disabled();
    AgingPolicy a;
    a.interval = aging_interval;
    a.step = aging_step > 0.0 ? aging_step : beta;
    a.floor = aging_floor > 0.0 ? aging_floor : alpha + beta;
    return a;
}

ExperimentConfig default_config() { return ExperimentConfig{}; }

FailureInjection parse_failure_spec(const std::string& s) {
    auto at = s.find('@');
    if (at == std::string::npos) {
        throw std::invalid_argument("fail_twin: expected id@tick, got '" + s + "'");
    }
    FailureInjection f;
    try {
        f.twin = std::stoi(s.substr(0, at));
        f.time = std::stoll(s.substr(at + 1));
    } catch (...) {
        throw std::invalid_argument("fail_twin: expected id@tick, got '" + s + "'");
    }
    return f;
}

namespace {

int64_t to_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        int64_t out = std::stoll(v, &pos);
        if (pos != v.size()) throw std::exception();
        return out;
    } catch (...) {
        throw std::invalid_argument(key + ": not an integer: '" + v + "'");
    }
}

double to_real(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double out = std::stod(v, &pos);
        if (pos != v.size()) throw std::exception();
        return out;
    } catch (...) {
        throw std::invalid_argument(key + ": not a number: '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "off" || v == "no") return false;
    throw std::invalid_argument(key + ": not a boolean: '" + v + "'");
}

std::vector<int> to_int_list(const std::string& key, const std::string& v) {
    std::vector<int> out;
    std::istringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(static_cast<int>(to_int(key, item)));
    }
    if (out.empty()) throw std::invalid_argument(key + ": empty list");
    return out;
}

}  // namespace

void apply_config_kv(ExperimentConfig& cfg, const std::string& key,
                     const std::string& value) {
    if (key == "algorithm") {
        cfg.policies.clear();
        std::istringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) cfg.policies.push_back(policy_from_string(item));
        }
        if (cfg.policies.empty()) throw std::invalid_argument("algorithm: empty");
    } else if (key == "seed") {
        cfg.seed = static_cast<uint64_t>(to_int(key, value));
    } else if (key == "runs") {
        cfg.runs = static_cast<int>(to_int(key, value));
    } else if (key == "clusters") {
        cfg.clusters = static_cast<int>(to_int(key, value));
    } else if (key == "per_cluster") {
        cfg.per_cluster = static_cast<int>(to_int(key, value));
    } else if (key == "vehicles") {
        cfg.vehicles = static_cast<int>(to_int(key, value));
    } else if (key == "k") {
        cfg.k = static_cast<int>(to_int(key, value));
    } else if (key == "alpha") {
        cfg.alpha = to_real(key, value);
    } else if (key == "beta") {
        cfg.beta = to_real(key, value);
    } else if (key == "aging") {
        cfg.aging = to_bool(key, value);
    } else if (key == "aging_interval") {
        cfg.aging_interval = to_int(key, value);
    } else if (key == "aging_step") {
        cfg.aging_step = to_real(key, value);
    } else if (key == "aging_floor") {
        cfg.aging_floor = to_real(key, value);
    } else if (key == "mix_high") {
        cfg.mix_high = to_real(key, value);
    } else if (key == "mix_medium") {
        cfg.mix_medium = to_real(key, value);
    } else if (key == "mix_normal") {
        cfg.mix_normal = to_real(key, value);
    } else if (key == "datacenters") {
        cfg.datacenters = static_cast<int>(to_int(key, value));
    } else if (key == "vms_per_datacenter") {
        cfg.vms_per_datacenter = static_cast<int>(to_int(key, value));
    } else if (key == "vm_memory") {
        cfg.vm_memory = to_int(key, value);
    } else if (key == "vm_bandwidth") {
        cfg.vm_bandwidth = to_int(key, value);
    } else if (key == "host_mips") {
        cfg.host_mips = to_int(key, value);
    } else if (key == "horizon") {
        cfg.horizon = to_int(key, value);
    } else if (key == "inject_window") {
        cfg.inject_window = to_int(key, value);
    } else if (key == "injection_factor") {
        cfg.injection_factor = to_real(key, value);
    } else if (key == "off_peak_factor") {
        cfg.off_peak_factor = to_real(key, value);
    } else if (key == "off_peak_window") {
        cfg.off_peak_window = to_int(key, value);
    } else if (key == "max_resources") {
        cfg.max_resources = static_cast<int>(to_int(key, value));
    } else if (key == "hub_bias") {
        cfg.hub_bias = to_real(key, value);
    } else if (key == "samples_per_twin") {
        cfg.samples_per_twin = static_cast<int>(to_int(key, value));
    } else if (key == "capacity_window") {
        cfg.capacity_window = to_int(key, value);
    } else if (key == "exchange_overhead") {
        cfg.exchange_overhead = to_int(key, value);
    } else if (key == "mips_per_unit") {
        cfg.mips_per_unit = to_int(key, value);
    } else if (key == "churn") {
        cfg.churn = to_bool(key, value);
    } else if (key == "churn_time") {
        cfg.churn_time = to_int(key, value);
    } else if (key == "fail_twin") {
        cfg.failures.push_back(parse_failure_spec(value));
    } else if (key == "failure_stall") {
        cfg.failure_stall = to_int(key, value);
    } else if (key == "trace") {
        cfg.trace = value;
    } else if (key == "out") {
        cfg.out = value;
    } else if (key == "sweep") {
        cfg.sweep_sizes = to_int_list(key, value);
    } else {
        throw std::invalid_argument("unknown config key: " + key);
    }
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg = default_config();
    std::istringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value");
        }
        auto strip = [](std::string s) {
            auto a = s.find_first_not_of(" \t");
            auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        apply_config_kv(cfg, strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
    }
    return cfg;
}

std::string emit_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "algorithm=";
    for (size_t i = 0; i < cfg.policies.size(); ++i) {
        if (i) os << ',';
        os << to_string(cfg.policies[i]);
    }
    os << '\n';
    os << "seed=" << cfg.seed << '\n';
    os << "runs=" << cfg.runs << '\n';
    os << "clusters=" << cfg.clusters << '\n';
    os << "per_cluster=" << cfg.per_cluster << '\n';
    os << "vehicles=" << cfg.vehicles << '\n';
    os << "k=" << cfg.k << '\n';
    os << "alpha=" << cfg.alpha << '\n';
    os << "beta=" << cfg.beta << '\n';
    os << "aging=" << (cfg.aging ? "true" : "false") << '\n';
    os << "aging_interval=" << cfg.aging_interval << '\n';
    os << "aging_step=" << cfg.aging_step << '\n';
    os << "aging_floor=" << cfg.aging_floor << '\n';
    os << "mix_high=" << cfg.mix_high << '\n';
    os << "mix_medium=" << cfg.mix_medium << '\n';
    os << "mix_normal=" << cfg.mix_normal << '\n';
    os << "datacenters=" << cfg.datacenters << '\n';
    os << "vms_per_datacenter=" << cfg.vms_per_datacenter << '\n';
    os << "vm_memory=" << cfg.vm_memory << '\n';
    os << "vm_bandwidth=" << cfg.vm_bandwidth << '\n';
    os << "host_mips=" << cfg.host_mips << '\n';
    os << "horizon=" << cfg.horizon << '\n';
    os << "inject_window=" << cfg.inject_window << '\n';
    os << "injection_factor=" << cfg.injection_factor << '\n';
    os << "off_peak_factor=" << cfg.off_peak_factor << '\n';
    os << "off_peak_window=" << cfg.off_peak_window << '\n';
    os << "max_resources=" << cfg.max_resources << '\n';
    os << "hub_bias=" << cfg.hub_bias << '\n';
    os << "samples_per_twin=" << cfg.samples_per_twin << '\n';
    os << "capacity_window=" << cfg.capacity_window << '\n';
    os << "exchange_overhead=" << cfg.exchange_overhead << '\n';
    os << "mips_per_unit=" << cfg.mips_per_unit << '\n';
    os << "churn=" << (cfg.churn ? "true" : "false") << '\n';
    os << "churn_time=" << cfg.churn_time << '\n';
    for (const auto& f : cfg.failures) {
        os << "fail_twin=" << f.twin << '@' << f.time << '\n';
    }
    os << "failure_stall=" << cfg.failure_stall << '\n';
    if (!cfg.trace.empty()) os << "trace=" << cfg.trace << '\n';
    os << "out=" << cfg.out << '\n';
    os << "sweep=";
    for (size_t i = 0; i < cfg.sweep_sizes.size(); ++i) {
        if (i) os << ',';
        os << cfg.sweep_sizes[i];
    }
    os << '\n';
    return os.str();
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream ifs(path);
    if (!ifs) throw std::runtime_error("FileNotFound: " + path);
    std::ostringstream ss;
    ss << ifs.rdbuf();
    return parse_config_text(ss.str());
}

void validate_config(const ExperimentConfig& cfg) {
    auto need = [](bool ok, const std::string& msg) {
        if (!ok) throw std::invalid_argument(msg);
    };
    need(cfg.runs >= 1, "runs: must be >= 1");
    need(cfg.clusters >= 1, "clusters: must be >= 1");
    need(cfg.per_cluster >= 1, "per_cluster: must be >= 1");
    need(cfg.vehicles >= 0, "vehicles: must be >= 0");
    if (cfg.vehicles > 0) {
        need(cfg.vehicles <= cfg.per_cluster || cfg.vehicles % cfg.per_cluster == 0,
             "vehicles: must be a multiple of per_cluster (or at most one cluster)");
    }
    need(cfg.k >= 0, "k: must be >= 0");
    need(cfg.alpha > 0, "alpha: must be > 0");
    need(cfg.beta > 0, "beta: must be > 0");
    need(cfg.alpha > 5.0 * cfg.beta,
         "alpha: DominanceViolation, alpha must exceed 5*beta so vehicle class "
         "dominates application class");
    need(cfg.aging_interval >= 1, "aging_interval: must be >= 1");
    need(cfg.aging_step >= 0, "aging_step: must be >= 0");
    need(cfg.aging_floor >= 0, "aging_floor: must be >= 0");
    need(cfg.mix_high >= 0 && cfg.mix_medium >= 0 && cfg.mix_normal >= 0,
         "mix: proportions must be non-negative");
    double sum = cfg.mix_high + cfg.mix_medium + cfg.mix_normal;
    need(sum > 0.999999 && sum < 1.000001, "mix: proportions must sum to 1");
    need(cfg.datacenters >= 1, "datacenters: must be >= 1");
    need(cfg.vms_per_datacenter >= 1, "vms_per_datacenter: must be >= 1");
    need(cfg.vm_memory >= 1, "vm_memory: must be >= 1");
    need(cfg.vm_bandwidth >= 1, "vm_bandwidth: must be >= 1");
    need(cfg.host_mips >= 1, "host_mips: must be >= 1");
    need(cfg.horizon >= 1, "horizon: must be >= 1");
    need(cfg.inject_window >= 1 && cfg.inject_window <= cfg.horizon,
         "inject_window: must be in [1, horizon]");
    need(cfg.injection_factor > 0, "injection_factor: must be > 0");
    need(cfg.off_peak_factor >= 0, "off_peak_factor: must be >= 0");
    need(cfg.off_peak_window >= 0, "off_peak_window: must be >= 0");
    need(cfg.inject_window + cfg.off_peak_window <= cfg.horizon,
         "off_peak_window: rush plus off-peak must fit in the horizon");
    need(cfg.max_resources >= 1, "max_resources: must be >= 1");
    need(cfg.hub_bias >= 0.0 && cfg.hub_bias <= 1.0, "hub_bias: must be in [0,1]");
    need(cfg.samples_per_twin >= 1, "samples_per_twin: must be >= 1");
    need(cfg.capacity_window >= 1, "capacity_window: must be >= 1");
    need(cfg.exchange_overhead >= 0, "exchange_overhead: must be >= 0");
    need(cfg.mips_per_unit >= 1, "mips_per_unit: must be >= 1");
    need(!cfg.sweep_sizes.empty(), "sweep: must name at least one size");
    for (int s : cfg.sweep_sizes) need(s >= 1, "sweep: sizes must be >= 1");
    for (const auto& f : cfg.failures) {
        need(f.time >= 0 && f.time <= cfg.horizon, "fail_twin: tick outside horizon");
        need(f.twin >= 0, "fail_twin: negative twin id");
    }
}

}  // namespace vdtn
