#include "vdtn/workload.hpp"

#include "vdtn/sim_engine.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace vdtn {

TwinAdjacency wire_clusters(const std::vector<std::vector<TwinId>>& clusters,
                            double extra_edge_prob, int num_twins, Rng& rng) {
    TwinAdjacency adj(static_cast<size_t>(num_twins));
    auto connect = [&](TwinId a, TwinId b) {
        auto& na = adj[static_cast<size_t>(a)];
        auto& nb = adj[static_cast<size_t>(b)];
        if (std::find(na.begin(), na.end(), b) != na.end()) return;
        na.push_back(b);
        nb.push_back(a);
    };
    for (const auto& cluster : clusters) {
        // spanning tree first, so every cluster is connected; attachment is
        // biased toward the first twin, the cluster's data hub
        for (size_t i = 1; i < cluster.size(); ++i) {
            TwinId parent = cluster[0];
            if (rng.uniform_real() >= 0.7) {
                parent = cluster[static_cast<size_t>(
                    rng.uniform(0, static_cast<int64_t>(i) - 1))];
            }
            connect(cluster[i], parent);
        }
        for (size_t i = 0; i < cluster.size(); ++i) {
            for (size_t j = i + 1; j < cluster.size(); ++j) {
                if (rng.uniform_real() < extra_edge_prob) connect(cluster[i], cluster[j]);
            }
        }
    }
    for (auto& n : adj) std::sort(n.begin(), n.end());
    return adj;
}

Topology generate_cluster_topology(int num_clusters, int per_cluster, uint64_t seed) {
    if (num_clusters < 1 || per_cluster < 1) {
        throw std::invalid_argument("topology needs at least one cluster of one twin");
    }
    Topology topo;
    topo.seed = seed;
    int n = num_clusters * per_cluster;
    TwinId next = 0;
    for (int c = 0; c < num_clusters; ++c) {
        std::vector<TwinId> cluster;
        for (int i = 0; i < per_cluster; ++i) cluster.push_back(next++);
        topo.clusters.push_back(std::move(cluster));
    }
    topo.degenerate_singleton = (n == 1);
    Rng rng(seed);
    TwinAdjacency adj = wire_clusters(topo.clusters, 0.3, n, rng);
    for (TwinId a = 0; a < n; ++a) {
        for (TwinId b : adj[static_cast<size_t>(a)]) {
            if (a < b) topo.edges.emplace_back(a, b);
        }
    }
    return topo;
}

TwinAdjacency adjacency_from(const Topology& topo, int num_twins) {
    TwinAdjacency adj(static_cast<size_t>(num_twins));
    for (const auto& [a, b] : topo.edges) {
        adj[static_cast<size_t>(a)].push_back(b);
        adj[static_cast<size_t>(b)].push_back(a);
    }
    for (auto& n : adj) std::sort(n.begin(), n.end());
    return adj;
}

std::vector<ResourceId> sample_required_resources(const TwinAdjacency& adj, TwinId twin,
                                                  int max_count, Rng& rng,
                                                  double hub_bias) {
    const auto& neighbors = adj[static_cast<size_t>(twin)];
    if (neighbors.empty()) return {};
    int count = static_cast<int>(
        rng.uniform(1, std::min<int64_t>(max_count, static_cast<int64_t>(neighbors.size()))));
    std::vector<TwinId> pool = neighbors;  // sorted, so pool[0] is the likely hub
    std::vector<ResourceId> out;
    if (rng.uniform_real() < hub_bias) {
        out.push_back(pool[0]);
        pool.erase(pool.begin());
    }
    rng.shuffle(pool);
    for (TwinId n : pool) {
        if (static_cast<int>(out.size()) >= count) break;
        out.push_back(n);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Trace ingestion

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(trim(cur));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    try {
        size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size() && std::isfinite(out);
    } catch (...) {
        return false;
    }
}

bool parse_int(const std::string& s, int64_t& out) {
    if (s.empty()) return false;
    try {
        size_t pos = 0;
        out = std::stoll(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

}  // namespace

TraceLoadResult load_mobility_trace(const std::string& path) {
    std::ifstream ifs(path);
    if (!ifs) throw std::runtime_error("FileNotFound: " + path);
    std::string line;
    if (!std::getline(ifs, line)) throw std::runtime_error("EmptyAfterCleaning: " + path);

    auto headers = split_csv(line);
    for (auto& h : headers) h = lower(h);
    auto col = [&](const std::string& name) -> int {
        auto it = std::find(headers.begin(), headers.end(), name);
        return it == headers.end() ? -1 : static_cast<int>(it - headers.begin());
    };
    int c_id = col("vehicle_id");
    int c_angle = col("angle");
    int c_x = col("x");
    int c_y = col("y");
    int c_type = col("type");
    if (c_type < 0) c_type = col("vehicle_type");
    int c_speed = col("speed");
    if (c_id < 0 || c_angle < 0 || c_x < 0 || c_y < 0 || c_type < 0 || c_speed < 0) {
        throw std::runtime_error("trace header missing required columns in " + path);
    }

    TraceLoadResult result;
    while (std::getline(ifs, line)) {
        if (trim(line).empty()) continue;
        auto cells = split_csv(line);
        auto cell = [&](int idx) -> std::string {
            return (idx >= 0 && static_cast<size_t>(idx) < cells.size())
                       ? cells[static_cast<size_t>(idx)]
                       : "";
        };
        TraceRecord rec;
        bool ok = parse_int(cell(c_id), rec.vehicle_id) &&
                  parse_double(cell(c_angle), rec.angle) &&
                  parse_double(cell(c_x), rec.x) && parse_double(cell(c_y), rec.y) &&
                  parse_double(cell(c_speed), rec.speed);
        rec.vehicle_type = cell(c_type);
        ok = ok && !rec.vehicle_type.empty() && rec.speed >= 0.0;
        if (!ok) {
            result.dropped++;
            continue;
        }
        for (size_t i = 0; i < cells.size(); ++i) {
            int idx = static_cast<int>(i);
            if (idx == c_id || idx == c_angle || idx == c_x || idx == c_y ||
                idx == c_type || idx == c_speed)
                continue;
            std::string name = i < headers.size() ? headers[i] : ("col" + std::to_string(i));
            rec.extras.emplace_back(name, cells[i]);
        }
        result.records.push_back(std::move(rec));
    }
    if (result.records.empty()) throw std::runtime_error("EmptyAfterCleaning: " + path);
    return result;
}

std::vector<TraceRecord> standardize(const std::vector<TraceRecord>& records) {
    std::vector<TraceRecord> out = records;
    if (out.empty()) return out;
    const size_t n = out.size();

    auto scale = [&](auto getter, auto setter) {
        double mean = 0.0;
        for (const auto& r : out) mean += getter(r);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (const auto& r : out) {
            double d = getter(r) - mean;
            var += d * d;
        }
        var /= static_cast<double>(n);  // population convention
        double sd = std::sqrt(var);
        for (auto& r : out) {
            setter(r, sd > 0.0 ? (getter(r) - mean) / sd : 0.0);
        }
    };
    scale([](const TraceRecord& r) { return r.angle; },
          [](TraceRecord& r, double v) { r.angle = v; });
    scale([](const TraceRecord& r) { return r.x; },
          [](TraceRecord& r, double v) { r.x = v; });
    scale([](const TraceRecord& r) { return r.y; },
          [](TraceRecord& r, double v) { r.y = v; });
    scale([](const TraceRecord& r) { return r.speed; },
          [](TraceRecord& r, double v) { r.speed = v; });
    return out;
}

// ---------------------------------------------------------------------------
// Priority assignment

void assign_priorities(std::vector<Vehicle>& vehicles, uint64_t seed, const ClassMix& mix) {
    double sum = mix.high + mix.medium + mix.normal;
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("class mix proportions must sum to 1");
    }
    const size_t n = vehicles.size();
    const double want[3] = {mix.high * static_cast<double>(n),
                            mix.medium * static_cast<double>(n),
                            mix.normal * static_cast<double>(n)};
    size_t count[3];
    double frac[3];
    size_t used = 0;
    for (int i = 0; i < 3; ++i) {
        count[i] = static_cast<size_t>(std::floor(want[i]));
        frac[i] = want[i] - std::floor(want[i]);
        used += count[i];
    }
    // largest remainder, ties broken toward the more important class
    while (used < n) {
        int best = 0;
        for (int i = 1; i < 3; ++i) {
            if (frac[i] > frac[best] + 1e-12) best = i;
        }
        count[best]++;
        frac[best] = -1.0;
        used++;
    }
    std::vector<VehicleClass> labels;
    labels.reserve(n);
    for (size_t i = 0; i < count[0]; ++i) labels.push_back(VehicleClass::High);
    for (size_t i = 0; i < count[1]; ++i) labels.push_back(VehicleClass::Medium);
    for (size_t i = 0; i < count[2]; ++i) labels.push_back(VehicleClass::Normal);
    Rng rng(seed ^ 0x5eedf00dULL);
    rng.shuffle(labels);
    for (size_t i = 0; i < n; ++i) vehicles[i].cls = labels[i];
}

// ---------------------------------------------------------------------------
// World construction

int64_t payload_for_app(AppClass app) { return 2 * rank(app); }

BuiltWorld build_world(const WorkloadSpec& spec, uint64_t seed) {
    BuiltWorld built;
    World& w = built.world;
    w.datacenter = spec.datacenter;
    w.channel = spec.channel;
    w.num_base_stations = spec.num_clusters;

    Topology topo = generate_cluster_topology(spec.num_clusters, spec.per_cluster, seed);
    const int n = spec.num_clusters * spec.per_cluster;
    w.clusters = topo.clusters;
    w.adjacency = adjacency_from(topo, n);

    std::vector<TraceRecord> trace;
    if (!spec.trace_path.empty()) {
        trace = load_mobility_trace(spec.trace_path).records;
    }

    Rng rng(seed);
    Rng veh_rng = rng.fork(1);
    for (int i = 0; i < n; ++i) {
        Vehicle v;
        v.id = i;
        if (!trace.empty()) {
            const TraceRecord& r = trace[static_cast<size_t>(i) % trace.size()];
            v.angle = r.angle;
            v.x = r.x;
            v.y = r.y;
            v.speed = r.speed;
            v.vehicle_type = r.vehicle_type;
        } else {
            v.angle = static_cast<double>(veh_rng.uniform(0, 359));
            v.x = static_cast<double>(veh_rng.uniform(0, 10000));
            v.y = static_cast<double>(veh_rng.uniform(0, 10000));
            v.speed = static_cast<double>(veh_rng.uniform(0, 30));
            v.vehicle_type = "private car";
        }
        // one base station per cluster
        v.base_station = i / spec.per_cluster;
        w.vehicles.push_back(std::move(v));
    }
    assign_priorities(w.vehicles, seed, spec.mix);

    SampleId next_sample = 0;
    for (int i = 0; i < n; ++i) {
        DigitalTwin t;
        t.id = i;
        t.vehicle_id = i;
        t.cls = w.vehicles[static_cast<size_t>(i)].cls;
        t.class_priority = compute_dt_priority(t.cls, spec.weights);
        for (int s = 0; s < spec.samples_per_twin; ++s) {
            t.dataset.push_back({next_sample++, i, 1});
        }
        w.twins.push_back(std::move(t));
        w.resources.push_back({i, std::nullopt, std::nullopt, std::nullopt});
    }

    // task plan: per-vehicle arrival streams scaled against the capacity of
    // the contended stage. Hub-directed exchanges serialize per class lane,
    // so each cluster hub serves about one exchange per mean service time.
    IntraTwinConfig intra;
    intra.k = spec.k;
    double mean_payload = 0.0;
    for (int a = 1; a <= 5; ++a) {
        mean_payload += static_cast<double>(payload_for_app(static_cast<AppClass>(a)));
    }
    mean_payload /= 5.0;
    double mean_service = static_cast<double>(exchange_service_time(
        static_cast<int64_t>(std::llround(mean_payload)), spec.datacenter.host_mips, intra));
    double hub_demand_per_task =
        std::max(0.05, spec.hub_bias) * static_cast<double>(std::max(1, spec.k)) * mean_service;
    double hub_capacity =
        static_cast<double>(spec.num_clusters) / hub_demand_per_task;  // tasks per tick
    double vm_capacity = static_cast<double>(spec.datacenter.total_vms()) /
                         std::max(1.0, static_cast<double>(spec.k) * mean_service);
    double capacity = std::min(hub_capacity, vm_capacity);
    double rate = spec.injection_factor * capacity;   // tasks per tick, fleet-wide
    double period = static_cast<double>(n) / std::max(1e-9, rate);

    Rng plan_rng = rng.fork(2);
    std::vector<Task> plan;
    auto emit = [&](int v, Tick at) {
        Task task;
        task.twin_id = v;
        task.app = static_cast<AppClass>(plan_rng.uniform(1, 5));
        task.payload_size = payload_for_app(task.app);
        task.enqueue_time = at;
        task.required_resources = sample_required_resources(
            w.adjacency, v, spec.max_resources_per_task, plan_rng, spec.hub_bias);
        task.base_priority = total_priority(
            compute_dt_priority(w.twins[static_cast<size_t>(v)].cls, spec.weights),
            compute_app_priority(task.app, spec.weights));
        plan.push_back(std::move(task));
    };
    for (int v = 0; v < n; ++v) {
        double t = period * plan_rng.uniform_real();
        while (t < static_cast<double>(spec.inject_window)) {
            emit(v, static_cast<Tick>(std::floor(t)));
            t += period;
        }
    }
    // off-peak: the fleet keeps a sparse background stream after the rush
    if (spec.off_peak_factor > 0.0 && spec.off_peak_window > 0) {
        double off_rate = spec.off_peak_factor * capacity;
        double off_period = static_cast<double>(n) / std::max(1e-9, off_rate);
        Tick off_end = spec.inject_window + spec.off_peak_window;
        for (int v = 0; v < n; ++v) {
            double t = static_cast<double>(spec.inject_window) +
                       off_period * plan_rng.uniform_real();
            while (t < static_cast<double>(off_end)) {
                emit(v, static_cast<Tick>(std::floor(t)));
                t += off_period;
            }
        }
    }
    std::stable_sort(plan.begin(), plan.end(), [](const Task& a, const Task& b) {
        if (a.enqueue_time != b.enqueue_time) return a.enqueue_time < b.enqueue_time;
        return a.twin_id < b.twin_id;
    });
    for (size_t i = 0; i < plan.size(); ++i) plan[i].id = static_cast<TaskId>(i);
    built.plan = std::move(plan);
    return built;
}

}  // namespace vdtn
