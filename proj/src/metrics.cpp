#include "vdtn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace vdtn {

const std::array<const char*, MetricsReport::kFieldCount>& MetricsReport::field_names() {
    static const std::array<const char*, kFieldCount> names = {
        "mdr", "lat", "bu", "tp", "rt", "ru", "fair", "co", "adc", "ft", "ac"};
    return names;
}

double MetricsReport::field(int i) const {
    return const_cast<MetricsReport*>(this)->field(i);
}

double& MetricsReport::field(int i) {
    switch (i) {
        case 0: return mdr;
        case 1: return lat;
        case 2: return bu;
        case 3: return tp;
        case 4: return rt;
        case 5: return ru;
        case 6: return fair;
        case 7: return co;
        case 8: return adc;
        case 9: return ft;
        case 10: return ac;
    }
    throw std::out_of_range("metric field index");
}

namespace {

double clipped_busy(const std::vector<BusyInterval>& ivs, Tick horizon) {
    double total = 0.0;
    for (const auto& iv : ivs) {
        Tick s = std::min(iv.start, horizon);
        Tick e = std::min(iv.end, horizon);
        if (e > s) total += static_cast<double>(e - s);
    }
    return total;
}

}  // namespace

MetricsReport compute_metrics(const RunLog& log, const RunLog* churn_log) {
    if (log.tasks.empty()) throw std::runtime_error("EmptyLog: no task records");
    MetricsReport m;
    const double horizon = static_cast<double>(log.horizon);

    m.mdr = static_cast<double>(log.delivered) / horizon;
    m.tp = m.mdr;  // every delivery is a success under this accounting

    double lat_sum = 0.0, rt_sum = 0.0;
    int64_t lat_n = 0, rt_n = 0;
    for (const auto& t : log.tasks) {
        if (t.done >= 0) {
            lat_sum += static_cast<double>(t.done - t.arrival);
            ++lat_n;
        }
        if (t.first_response >= 0) {
            rt_sum += static_cast<double>(t.first_response - t.arrival);
            ++rt_n;
        }
    }
    m.lat = lat_n > 0 ? lat_sum / static_cast<double>(lat_n) : 0.0;
    m.rt = rt_n > 0 ? rt_sum / static_cast<double>(rt_n) : 0.0;

    double ch_busy = 0.0;
    for (const auto& ch : log.channel_busy) ch_busy += clipped_busy(ch, log.horizon);
    m.bu = log.num_channels > 0
               ? 100.0 * ch_busy / (horizon * static_cast<double>(log.num_channels))
               : 0.0;

    double vm_total = 0.0, vm_max = 0.0;
    for (const auto& vm : log.vm_busy) {
        double b = clipped_busy(vm, log.horizon);
        vm_total += b;
        vm_max = std::max(vm_max, b);
    }
    m.ru = log.num_vms > 0 ? 100.0 * vm_total / (horizon * static_cast<double>(log.num_vms))
                           : 0.0;
    double vm_mean = log.num_vms > 0 ? vm_total / static_cast<double>(log.num_vms) : 0.0;
    m.fair = vm_mean > 0.0 ? vm_max / vm_mean : 1.0;

    m.co = static_cast<double>(log.data_messages + log.control_messages) / horizon;

    if (churn_log != nullptr) {
        double tp_churn = static_cast<double>(churn_log->delivered) /
                          static_cast<double>(churn_log->horizon);
        m.adc = m.tp > 0.0 ? std::min(1.0, tp_churn / m.tp) : 1.0;
    } else {
        m.adc = 1.0;
    }

    m.ft = log.failure_injected_tasks > 0
               ? static_cast<double>(log.recovered_tasks) /
                     static_cast<double>(log.failure_injected_tasks)
               : 0.0;

    int64_t total_ops = log.sched_comparisons + log.sched_queue_ops + log.sched_table_ops;
    m.ac = log.sched_decisions > 0
               ? static_cast<double>(total_ops) / static_cast<double>(log.sched_decisions)
               : 0.0;
    return m;
}

AggregateReport aggregate(const std::vector<MetricsReport>& reports) {
    if (reports.empty()) throw std::invalid_argument("aggregate needs at least one report");
    AggregateReport out;
    out.runs = static_cast<int>(reports.size());
    const double n = static_cast<double>(reports.size());
    for (int f = 0; f < MetricsReport::kFieldCount; ++f) {
        std::vector<double> vals;
        vals.reserve(reports.size());
        for (const auto& r : reports) vals.push_back(r.field(f));
        std::sort(vals.begin(), vals.end());
        double sum = 0.0;
        for (double v : vals) sum += v;
        double mean = sum / n;
        double var = 0.0;
        for (double v : vals) var += (v - mean) * (v - mean);
        var /= n;
        out.mean.field(f) = mean;
        out.stddev.field(f) = std::sqrt(var);
    }
    return out;
}

std::string format_metric(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void write_report_csv(const std::string& path, const std::vector<PolicyReport>& rows) {
    std::ofstream ofs(path, std::ios::binary);
    if (!ofs) throw std::runtime_error("cannot write " + path);
    ofs << "policy,runs";
    for (const char* name : MetricsReport::field_names()) ofs << ',' << name;
    for (const char* name : MetricsReport::field_names()) ofs << ",sd_" << name;
    ofs << '\n';
    for (const auto& row : rows) {
        ofs << row.policy << ',' << row.agg.runs;
        for (int f = 0; f < MetricsReport::kFieldCount; ++f) {
            ofs << ',' << format_metric(row.agg.mean.field(f));
        }
        for (int f = 0; f < MetricsReport::kFieldCount; ++f) {
            ofs << ',' << format_metric(row.agg.stddev.field(f));
        }
        ofs << '\n';
    }
}

void write_report_json(const std::string& path, const std::vector<PolicyReport>& rows) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json obj;
        obj["policy"] = row.policy;
        obj["runs"] = row.agg.runs;
        for (int f = 0; f < MetricsReport::kFieldCount; ++f) {
            obj[MetricsReport::field_names()[static_cast<size_t>(f)]] = row.agg.mean.field(f);
        }
        nlohmann::ordered_json sd;
        for (int f = 0; f < MetricsReport::kFieldCount; ++f) {
            sd[MetricsReport::field_names()[static_cast<size_t>(f)]] = row.agg.stddev.field(f);
        }
        obj["stddev"] = sd;
        doc.push_back(obj);
    }
    std::ofstream ofs(path, std::ios::binary);
    if (!ofs) throw std::runtime_error("cannot write " + path);
    ofs << doc.dump(2) << '\n';
}

void write_long_csv(const std::string& path, const std::vector<PolicyReport>& rows) {
    std::ofstream ofs(path, std::ios::binary);
    if (!ofs) throw std::runtime_error("cannot write " + path);
    ofs << "policy,metric,value\n";
    for (const auto& row : rows) {
        for (int f = 0; f < MetricsReport::kFieldCount; ++f) {
            ofs << row.policy << ',' << MetricsReport::field_names()[static_cast<size_t>(f)]
                << ',' << format_metric(row.agg.mean.field(f)) << '\n';
        }
    }
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    std::ofstream ofs(path, std::ios::binary);
    if (!ofs) throw std::runtime_error("cannot write " + path);
    ofs << "policy,size";
    for (const char* name : MetricsReport::field_names()) ofs << ',' << name;
    ofs << '\n';
    for (const auto& row : rows) {
        ofs << row.policy << ',' << row.size;
        for (int f = 0; f < MetricsReport::kFieldCount; ++f) {
            ofs << ',' << format_metric(row.mean.field(f));
        }
        ofs << '\n';
    }
}

}  // namespace vdtn
