#pragma once

#include "vdtn/runlog.hpp"

#include <array>
#include <string>
#include <vector>

namespace vdtn {

// The 11-metric record for one run or an aggregate. Ticks render as ms.
struct MetricsReport {
    double mdr = 0.0;   // messages delivered per tick
    double lat = 0.0;   // mean delivery delay
    double bu = 0.0;    // channel busy %
    double tp = 0.0;    // successful deliveries per tick
    double rt = 0.0;    // mean first-response time
    double ru = 0.0;    // VM busy %
    double fair = 0.0;  // max VM load / mean VM load, >= 1
    double co = 0.0;    // data + control messages per tick
    double adc = 0.0;   // throughput retention under churn, [0,1]
    double ft = 0.0;    // recovered fraction of failure-injected tasks
    double ac = 0.0;    // abstract scheduler operations per decision

    static constexpr int kFieldCount = 11;
    static const std::array<const char*, kFieldCount>& field_names();
    double field(int i) const;
    double& field(int i);
};

// Per-run metrics from a finished log; the optional churn log feeds adc.
// Throws EmptyLog when the log carries no tasks.
MetricsReport compute_metrics(const RunLog& log, const RunLog* churn_log = nullptr);

struct AggregateReport {
    MetricsReport mean;
    MetricsReport stddev;  // population convention
    int runs = 0;
};

// Field-wise mean and stddev. Values are sorted before summation so the
// result is exactly permutation-invariant.
AggregateReport aggregate(const std::vector<MetricsReport>& reports);

struct PolicyReport {
    std::string policy;
    AggregateReport agg;
};

struct SweepRow {
    std::string policy;
    int size = 0;          // vehicle count
    MetricsReport mean;
};

void write_report_csv(const std::string& path, const std::vector<PolicyReport>& rows);
void write_report_json(const std::string& path, const std::vector<PolicyReport>& rows);
void write_long_csv(const std::string& path, const std::vector<PolicyReport>& rows);
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

std::string format_metric(double v);

}  // namespace vdtn
