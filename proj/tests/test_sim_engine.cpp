#include "doctest.h"

#include "vdtn/metrics.hpp"
#include "vdtn/sim_engine.hpp"
#include "vdtn/workload.hpp"

#include <map>
#include <sstream>

using namespace vdtn;

namespace {

// tiny fully-meshed single-cluster world
World micro_world(int n, int64_t transit_rate = 5, int vms = 6) {
    World w;
    w.num_base_stations = 1;
    w.channel.transit_rate = transit_rate;
    w.channel.capacity_window = 100;
    w.datacenter.num_datacenters = 1;
    w.datacenter.vms_per_datacenter = vms;
    std::vector<TwinId> cluster;
    for (int i = 0; i < n; ++i) {
        Vehicle v;
        v.id = i;
        v.base_station = 0;
        w.vehicles.push_back(v);
        DigitalTwin t;
        t.id = i;
        t.vehicle_id = i;
        t.dataset = {{i, i, 1}};
        w.twins.push_back(t);
        w.resources.push_back({i, std::nullopt, std::nullopt, std::nullopt});
        cluster.push_back(i);
    }
    w.clusters = {cluster};
    w.adjacency.assign(static_cast<size_t>(n), {});
    for (TwinId a = 0; a < n; ++a) {
        for (TwinId b = 0; b < n; ++b) {
            if (a != b) w.adjacency[static_cast<size_t>(a)].push_back(b);
        }
    }
    return w;
}

Task mk_task(TaskId id, TwinId twin, AppClass app, Tick arrival,
             std::vector<ResourceId> required, int64_t payload = 4) {
    Task t;
    t.id = id;
    t.twin_id = twin;
    t.app = app;
    t.required_resources = std::move(required);
    t.enqueue_time = arrival;
    t.payload_size = payload;
    t.base_priority = total_priority(compute_dt_priority(VehicleClass::Normal, {}),
                                     compute_app_priority(app, {}));
    return t;
}

SimConfig basic_config(int k = 1, Tick horizon = 2000) {
    SimConfig c;
    c.horizon = horizon;
    c.intra.k = k;
    c.aging = AgingPolicy::derive({});
    return c;
}

std::string serialize(const RunLog& log) {
    std::ostringstream os;
    log.write(os);
    return os.str();
}

}  // namespace

TEST_CASE("a zero-update round passes straight through") {
    World w = micro_world(2);
    w.twins[0].cls = VehicleClass::High;
    auto policy = make_policy(PolicyKind::PriorityVdtn, {}, AgingPolicy::derive({}));
    SimConfig cfg = basic_config(0);
    Task t = mk_task(0, 0, AppClass::Safety, 0, {1}, 10);
    ProcessedInfo info = intra_twin_round(w, t, *policy, cfg, 1);
    CHECK(info.content_version == 0);
    CHECK(info.final_info);
}

TEST_CASE("k updates produce k content versions") {
    World w = micro_world(2);
    auto policy = make_policy(PolicyKind::PriorityVdtn, {}, AgingPolicy::derive({}));
    SimConfig cfg = basic_config(2);
    ProcessedInfo info =
        intra_twin_round(w, mk_task(0, 0, AppClass::Safety, 0, {1}, 4), *policy, cfg, 1);
    CHECK(info.content_version == 2);
    CHECK(info.final_info);
}

TEST_CASE("upload latency is payload over transit rate") {
    World w = micro_world(2, 5);
    auto policy = make_policy(PolicyKind::PriorityVdtn, {}, AgingPolicy::derive({}));
    SimConfig cfg = basic_config(0);
    std::vector<Task> plan{mk_task(0, 0, AppClass::Safety, 0, {1}, 10)};
    RunLog log = run_simulation(w, plan, *policy, cfg, 1);
    REQUIRE(log.tasks.size() == 1);
    CHECK(log.tasks[0].twin_receive - log.tasks[0].arrival == 2);  // 10 units at 5/tick
}

TEST_CASE("a high task finishes its exchange before a contending normal is granted") {
    World w = micro_world(3);
    w.twins[0].cls = VehicleClass::High;
    w.twins[1].cls = VehicleClass::Normal;
    auto policy = make_policy(PolicyKind::PriorityVdtn, {}, AgingPolicy::derive({}));
    SimConfig cfg = basic_config(1);
    Task high = mk_task(0, 0, AppClass::Safety, 0, {2}, 4);
    high.base_priority = total_priority(compute_dt_priority(VehicleClass::High, {}),
                                        compute_app_priority(AppClass::Safety, {}));
    Task normal = mk_task(1, 1, AppClass::Safety, 0, {2}, 4);
    RunLog log = run_simulation(w, {high, normal}, *policy, cfg, 1);

    int xd_high = -1, grant_normal = -1;
    for (size_t i = 0; i < log.events.size(); ++i) {
        const auto& e = log.events[i];
        if (e.kind == EventKind::ExchangeDone && e.a == 0 && xd_high < 0)
            xd_high = static_cast<int>(i);
        if (e.kind == EventKind::ResourceGranted && e.a == 1 && grant_normal < 0)
            grant_normal = static_cast<int>(i);
    }
    REQUIRE(xd_high >= 0);
    REQUIRE(grant_normal >= 0);
    CHECK(xd_high < grant_normal);
}

TEST_CASE("identical seeds give byte-identical run logs") {
    WorkloadSpec spec;
    spec.num_clusters = 3;
    spec.per_cluster = 4;
    spec.inject_window = 300;
    BuiltWorld bw = build_world(spec, 42);
    SimConfig cfg = basic_config(2, 4000);
    for (PolicyKind kind :
         {PolicyKind::PriorityVdtn, PolicyKind::RoundRobin, PolicyKind::Throttled}) {
        auto p1 = make_policy(kind, {}, AgingPolicy::derive({}));
        auto p2 = make_policy(kind, {}, AgingPolicy::derive({}));
        RunLog a = run_simulation(bw.world, bw.plan, *p1, cfg, 42);
        RunLog b = run_simulation(bw.world, bw.plan, *p2, cfg, 42);
        CHECK(serialize(a) == serialize(b));
    }
}

TEST_CASE("run log round-trips through its file format") {
    WorkloadSpec spec;
    spec.num_clusters = 2;
    spec.per_cluster = 3;
    spec.inject_window = 200;
    BuiltWorld bw = build_world(spec, 7);
    auto policy = make_policy(PolicyKind::Throttled, {}, AgingPolicy::derive({}));
    RunLog log = run_simulation(bw.world, bw.plan, *policy, basic_config(1, 3000), 7);
    std::string text = serialize(log);
    std::istringstream in(text);
    RunLog parsed = RunLog::read(in);
    CHECK(serialize(parsed) == text);
}

TEST_CASE("truncated logs fail with a line number") {
    WorkloadSpec spec;
    spec.num_clusters = 2;
    spec.per_cluster = 2;
    spec.inject_window = 100;
    BuiltWorld bw = build_world(spec, 3);
    auto policy = make_policy(PolicyKind::RoundRobin, {}, AgingPolicy::derive({}));
    RunLog log = run_simulation(bw.world, bw.plan, *policy, basic_config(1, 2000), 3);
    std::string text = serialize(log);
    std::string cut = text.substr(0, text.size() / 2);
    cut = cut.substr(0, cut.rfind('\n') + 1);
    std::istringstream in(cut);
    CHECK_THROWS_WITH_AS(RunLog::read(in), doctest::Contains("line"), std::runtime_error);
}

TEST_CASE("failing a twin fails its queued tasks and only those") {
    World w = micro_world(4, 5, 2);
    auto policy = make_policy(PolicyKind::PriorityVdtn, {}, AgingPolicy::derive({}));
    SimConfig cfg = basic_config(1);
    cfg.failures = {{0, 50}};
    std::vector<Task> plan;
    // twin 0 keeps submitting past the failure tick; twin 1 is unaffected
    for (int i = 0; i < 6; ++i) {
        plan.push_back(mk_task(i, 0, AppClass::Safety, i * 20, {1}, 4));
    }
    plan.push_back(mk_task(6, 1, AppClass::Safety, 10, {2}, 4));
    RunLog log = run_simulation(w, plan, *policy, cfg, 1);
    std::map<TaskId, TaskState> state;
    std::map<TaskId, FailCode> code;
    for (const auto& t : log.tasks) {
        state[t.id] = t.final_state;
        code[t.id] = t.fail_code;
    }
    CHECK(state[6] == TaskState::Done);
    int failed = 0;
    for (int i = 0; i < 6; ++i) {
        if (state[i] == TaskState::Failed) {
            ++failed;
            CHECK(code[i] == FailCode::TwinFailure);
        }
    }
    CHECK(failed == 3);  // exactly the arrivals after the failure tick die
    CHECK(log.failure_injected_tasks == failed);
    CHECK(log.recovered_tasks == 0);
}

TEST_CASE("failing an idle twin leaves other traffic untouched") {
    World w = micro_world(3);
    auto policy = make_policy(PolicyKind::Throttled, {}, AgingPolicy::derive({}));
    SimConfig cfg = basic_config(1);
    cfg.failures = {{2, 10}};
    // twin 2 owns resource 2 but nobody needs it and it submits nothing
    std::vector<Task> plan{mk_task(0, 0, AppClass::Safety, 0, {1}, 4)};
    RunLog log = run_simulation(w, plan, *policy, cfg, 1);
    CHECK(log.delivered == 1);
    CHECK(log.failed == 0);
}

TEST_CASE("an infinitely stalled holding starves tasks that need the resource") {
    World w = micro_world(3, 5, 2);
    auto policy = make_policy(PolicyKind::PriorityVdtn, {}, AgingPolicy::derive({}));
    SimConfig cfg = basic_config(1, 1500);
    cfg.failure_stall = -1;
    cfg.failures = {{0, 10}};  // dies mid-exchange while holding resource 1
    std::vector<Task> plan{
        mk_task(0, 0, AppClass::Safety, 0, {1}, 20),   // long exchange, killed at t=10
        mk_task(1, 2, AppClass::Safety, 5, {1}, 4),    // needs the stalled resource
    };
    RunLog log = run_simulation(w, plan, *policy, cfg, 1);
    std::map<TaskId, TaskRecord> rec;
    for (const auto& t : log.tasks) rec[t.id] = t;
    CHECK(rec[0].final_state == TaskState::Failed);
    CHECK(rec[0].fail_code == FailCode::TwinFailure);
    CHECK(rec[1].final_state == TaskState::Failed);
    CHECK(rec[1].fail_code == FailCode::StalledAtHorizon);
}

TEST_CASE("a finite stall releases the holdings and lets waiters through") {
    World w = micro_world(3, 5, 2);
    auto policy = make_policy(PolicyKind::PriorityVdtn, {}, AgingPolicy::derive({}));
    SimConfig cfg = basic_config(1, 1500);
    cfg.failure_stall = 100;
    cfg.failures = {{0, 10}};
    std::vector<Task> plan{
        mk_task(0, 0, AppClass::Safety, 0, {1}, 20),
        mk_task(1, 2, AppClass::Safety, 5, {1}, 4),
    };
    RunLog log = run_simulation(w, plan, *policy, cfg, 1);
    std::map<TaskId, TaskRecord> rec;
    for (const auto& t : log.tasks) rec[t.id] = t;
    CHECK(rec[1].final_state == TaskState::Done);
}

TEST_CASE("conservation, causality, capacity and VM exclusivity hold on real runs") {
    WorkloadSpec spec;
    spec.num_clusters = 4;
    spec.per_cluster = 5;
    spec.inject_window = 400;
    spec.injection_factor = 1.6;
    SimConfig cfg = basic_config(2, 6000);
    for (uint64_t seed : {11ULL, 23ULL}) {
        BuiltWorld bw = build_world(spec, seed);
        for (PolicyKind kind :
             {PolicyKind::PriorityVdtn, PolicyKind::RoundRobin, PolicyKind::Throttled}) {
            auto policy = make_policy(kind, {}, AgingPolicy::derive({}));
            RunLog log = run_simulation(bw.world, bw.plan, *policy, cfg, seed);

            CHECK(log.injected == log.delivered + log.failed + log.in_flight);

            // causality per delivered task
            std::map<TaskId, std::vector<Tick>> exchange_times;
            for (const auto& e : log.events) {
                if (e.kind == EventKind::ExchangeDone) {
                    exchange_times[static_cast<TaskId>(e.a)].push_back(e.time);
                }
            }
            for (const auto& t : log.tasks) {
                if (t.final_state != TaskState::Done) continue;
                CHECK(t.arrival < t.first_response);
                const auto& xs = exchange_times[t.id];
                REQUIRE(!xs.empty());
                CHECK(t.first_response <= xs.front());
                CHECK(xs.back() < t.done);
            }

            // per-channel capacity: no window of length T serves more than rate*T
            for (const auto& ch : log.channel_busy) {
                std::vector<double> per_tick(static_cast<size_t>(log.end_time) + 2, 0.0);
                for (const auto& iv : ch) {
                    double rate = static_cast<double>(iv.units) /
                                  static_cast<double>(iv.end - iv.start);
                    for (Tick t = iv.start; t < iv.end && t <= log.end_time; ++t) {
                        per_tick[static_cast<size_t>(t)] += rate;
                    }
                }
                double window_sum = 0.0;
                Tick T = log.capacity_window;
                double bound = static_cast<double>(log.transit_rate) *
                               static_cast<double>(T) * (1.0 + 1e-9);
                for (Tick t = 0; t < static_cast<Tick>(per_tick.size()); ++t) {
                    window_sum += per_tick[static_cast<size_t>(t)];
                    if (t >= T) window_sum -= per_tick[static_cast<size_t>(t - T)];
                    CHECK(window_sum <= bound);
                }
            }

            // VM busy intervals never overlap
            for (const auto& vm : log.vm_busy) {
                for (size_t i = 1; i < vm.size(); ++i) {
                    CHECK(vm[i].start >= vm[i - 1].end);
                }
            }
        }
    }
}

TEST_CASE("liveness with aging on: every task in a finite workload completes") {
    WorkloadSpec spec;
    spec.num_clusters = 2;
    spec.per_cluster = 5;
    spec.inject_window = 300;
    spec.injection_factor = 1.8;
    BuiltWorld bw = build_world(spec, 5);
    SimConfig cfg = basic_config(2, 60000);
    auto policy = make_policy(PolicyKind::PriorityVdtn, {}, AgingPolicy::derive({}));
    RunLog log = run_simulation(bw.world, bw.plan, *policy, cfg, 5);
    CHECK(log.delivered == log.injected);
    CHECK(log.failed == 0);
    CHECK(log.in_flight == 0);
}

TEST_CASE("instrumentation never alters behavior") {
    WorkloadSpec spec;
    spec.num_clusters = 3;
    spec.per_cluster = 4;
    spec.inject_window = 300;
    BuiltWorld bw = build_world(spec, 77);
    SimConfig cfg = basic_config(2, 5000);
    SimConfig uncounted = cfg;
    uncounted.count_ops = false;
    for (PolicyKind kind :
         {PolicyKind::PriorityVdtn, PolicyKind::RoundRobin, PolicyKind::Throttled}) {
        auto p1 = make_policy(kind, {}, AgingPolicy::derive({}));
        auto p2 = make_policy(kind, {}, AgingPolicy::derive({}));
        RunLog a = run_simulation(bw.world, bw.plan, *p1, cfg, 77);
        RunLog b = run_simulation(bw.world, bw.plan, *p2, uncounted, 77);
        CHECK(a.sched_decisions > 0);
        CHECK(b.sched_comparisons + b.sched_queue_ops + b.sched_table_ops == 0);
        // zero the counters and the logs must match byte for byte
        b.sched_decisions = a.sched_decisions;
        a.sched_comparisons = a.sched_queue_ops = a.sched_table_ops = 0;
        CHECK(serialize(a) == serialize(b));
    }
}

TEST_CASE("engine rejects broken configs") {
    World w = micro_world(2);
    auto policy = make_policy(PolicyKind::PriorityVdtn, {}, AgingPolicy::derive({}));
    SimConfig bad = basic_config(1);
    bad.horizon = 0;
    std::vector<Task> plan{mk_task(0, 0, AppClass::Safety, 0, {1}, 4)};
    CHECK_THROWS_AS(run_simulation(w, plan, *policy, bad, 1), std::invalid_argument);

    World no_vms = micro_world(2);
    no_vms.datacenter.vms_per_datacenter = 0;
    CHECK_THROWS_AS(run_simulation(no_vms, plan, *policy, basic_config(1), 1),
                    std::invalid_argument);

    SimConfig bad_twin = basic_config(1);
    bad_twin.failures = {{99, 5}};
    CHECK_THROWS_AS(run_simulation(w, plan, *policy, bad_twin, 1), std::out_of_range);
}
