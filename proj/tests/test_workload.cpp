#include "doctest.h"

#include "vdtn/workload.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

using namespace vdtn;

namespace {

std::string temp_csv(const std::string& name, const std::string& content) {
    std::string path = "wl_" + name + ".csv";
    std::ofstream ofs(path);
    ofs << content;
    return path;
}

}  // namespace

TEST_CASE("cluster topology has the requested shape") {
    Topology t = generate_cluster_topology(10, 10, 123);
    CHECK(t.clusters.size() == 10);
    std::set<TwinId> seen;
    for (const auto& c : t.clusters) {
        CHECK(c.size() == 10);
        for (TwinId id : c) seen.insert(id);
    }
    CHECK(seen.size() == 100);
    CHECK_FALSE(t.degenerate_singleton);

    TwinAdjacency adj = adjacency_from(t, 100);
    for (const auto& n : adj) CHECK(n.size() >= 1);
}

TEST_CASE("single-twin topology is emitted but flagged") {
    Topology t = generate_cluster_topology(1, 1, 5);
    CHECK(t.clusters.size() == 1);
    CHECK(t.edges.empty());
    CHECK(t.degenerate_singleton);
}

TEST_CASE("same seed, same edges") {
    Topology a = generate_cluster_topology(2, 3, 77);
    Topology b = generate_cluster_topology(2, 3, 77);
    CHECK(a.edges == b.edges);
    Topology c = generate_cluster_topology(2, 3, 78);
    CHECK(a.edges != c.edges);  // overwhelmingly likely
}

TEST_CASE("trace loading drops dirty rows and counts them") {
    std::string path = temp_csv("dirty",
                                "vehicle_id,angle,x,y,type,speed\n"
                                "1,10.0,1.0,2.0,van,3.0\n"
                                "2,20.0,2.0,3.0,car,\n"       // missing speed
                                "3,30.0,3.0,4.0,bus,4.0\n"
                                "4,40.0,4.0,5.0,car,5.0\n"
                                "5,50.0,5.0,6.0,truck,6.0\n");
    auto result = load_mobility_trace(path);
    CHECK(result.records.size() == 4);
    CHECK(result.dropped == 1);
    std::remove(path.c_str());
}

TEST_CASE("negative speed rows are invalid and dropped") {
    std::string path = temp_csv("negspeed",
                                "vehicle_id,angle,x,y,type,speed\n"
                                "1,10.0,1.0,2.0,van,-3\n"
                                "2,20.0,2.0,3.0,car,1.0\n");
    auto result = load_mobility_trace(path);
    CHECK(result.records.size() == 1);
    CHECK(result.dropped == 1);
    std::remove(path.c_str());
}

TEST_CASE("header-only files are empty after cleaning") {
    std::string path = temp_csv("empty", "vehicle_id,angle,x,y,type,speed\n");
    CHECK_THROWS_WITH_AS(load_mobility_trace(path), doctest::Contains("EmptyAfterCleaning"),
                         std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("missing files raise FileNotFound") {
    CHECK_THROWS_WITH_AS(load_mobility_trace("no_such_file_anywhere.csv"),
                         doctest::Contains("FileNotFound"), std::runtime_error);
}

TEST_CASE("columns are matched by header name, not position") {
    std::string path = temp_csv("shuffled",
                                "speed,TYPE,y,x,Angle,Vehicle_ID,extra\n"
                                "7.5,van,2.0,1.0,45.0,11,keepme\n");
    auto result = load_mobility_trace(path);
    REQUIRE(result.records.size() == 1);
    const auto& r = result.records[0];
    CHECK(r.vehicle_id == 11);
    CHECK(r.speed == doctest::Approx(7.5));
    CHECK(r.angle == doctest::Approx(45.0));
    CHECK(r.x == doctest::Approx(1.0));
    CHECK(r.vehicle_type == "van");
    REQUIRE(r.extras.size() == 1);
    CHECK(r.extras[0].first == "extra");
    CHECK(r.extras[0].second == "keepme");
    std::remove(path.c_str());
}

TEST_CASE("standardize hits the two-point and constant cases") {
    std::vector<TraceRecord> recs(2);
    recs[0].speed = 2.0;
    recs[1].speed = 4.0;
    recs[0].angle = recs[1].angle = 7.0;
    auto out = standardize(recs);
    CHECK(out[0].speed == doctest::Approx(-1.0));
    CHECK(out[1].speed == doctest::Approx(1.0));
    CHECK(out[0].angle == doctest::Approx(0.0));
    CHECK(out[1].angle == doctest::Approx(0.0));
}

TEST_CASE("standardized features have zero mean and unit deviation") {
    Rng rng(31337);
    std::vector<TraceRecord> recs(257);
    for (auto& r : recs) {
        r.angle = static_cast<double>(rng.uniform(0, 35999)) / 100.0;
        r.x = static_cast<double>(rng.uniform(-100000, 100000)) / 7.0;
        r.y = static_cast<double>(rng.uniform(0, 999999)) / 13.0;
        r.speed = static_cast<double>(rng.uniform(0, 3300)) / 100.0;
    }
    auto out = standardize(recs);
    auto moments = [&](auto getter) {
        double mean = 0.0;
        for (const auto& r : out) mean += getter(r);
        mean /= static_cast<double>(out.size());
        double var = 0.0;
        for (const auto& r : out) var += (getter(r) - mean) * (getter(r) - mean);
        var /= static_cast<double>(out.size());
        return std::pair(mean, std::sqrt(var));
    };
    auto [m1, s1] = moments([](const TraceRecord& r) { return r.angle; });
    auto [m2, s2] = moments([](const TraceRecord& r) { return r.x; });
    auto [m3, s3] = moments([](const TraceRecord& r) { return r.speed; });
    CHECK(std::abs(m1) < 1e-9);
    CHECK(std::abs(s1 - 1.0) < 1e-9);
    CHECK(std::abs(m2) < 1e-9);
    CHECK(std::abs(s2 - 1.0) < 1e-9);
    CHECK(std::abs(m3) < 1e-9);
    CHECK(std::abs(s3 - 1.0) < 1e-9);

    // idempotent within tolerance
    auto twice = standardize(out);
    for (size_t i = 0; i < out.size(); ++i) {
        CHECK(std::abs(twice[i].speed - out[i].speed) < 1e-9);
        CHECK(std::abs(twice[i].x - out[i].x) < 1e-9);
    }
}

TEST_CASE("cleaning never invents rows") {
    std::string path = temp_csv("invent",
                                "vehicle_id,angle,x,y,type,speed\n"
                                "1,10.5,1.25,2.5,van,3.75\n"
                                "bad,row,entirely,,,\n"
                                "2,20.25,2.125,3.5,car,4.5\n");
    auto result = load_mobility_trace(path);
    CHECK(result.records.size() + static_cast<size_t>(result.dropped) == 3);
    // surviving rows match the input field-for-field
    CHECK(result.records[0].vehicle_id == 1);
    CHECK(result.records[0].angle == doctest::Approx(10.5));
    CHECK(result.records[0].speed == doctest::Approx(3.75));
    CHECK(result.records[1].vehicle_id == 2);
    CHECK(result.records[1].x == doctest::Approx(2.125));
    std::remove(path.c_str());
}

TEST_CASE("priority assignment matches the mix exactly via largest remainder") {
    std::vector<Vehicle> v10(10);
    assign_priorities(v10, 9, {0.2, 0.3, 0.5});
    int counts[4] = {0, 0, 0, 0};
    for (const auto& v : v10) counts[rank(v.cls)]++;
    CHECK(counts[1] == 2);
    CHECK(counts[2] == 3);
    CHECK(counts[3] == 5);

    std::vector<Vehicle> v3(3);
    assign_priorities(v3, 4, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    int c3[4] = {0, 0, 0, 0};
    for (const auto& v : v3) c3[rank(v.cls)]++;
    CHECK(c3[1] == 1);
    CHECK(c3[2] == 1);
    CHECK(c3[3] == 1);
}

TEST_CASE("priority assignment is deterministic per seed") {
    std::vector<Vehicle> a(40), b(40);
    assign_priorities(a, 1234, {});
    assign_priorities(b, 1234, {});
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].cls == b[i].cls);
}

TEST_CASE("bad mixes are rejected") {
    std::vector<Vehicle> v(5);
    CHECK_THROWS_AS(assign_priorities(v, 1, {0.5, 0.2, 0.2}), std::invalid_argument);
}

TEST_CASE("built worlds honor the trace when given one") {
    std::string path = temp_csv("world",
                                "vehicle_id,angle,x,y,type,speed\n"
                                "1,10.0,1.0,2.0,ambulance,3.0\n"
                                "2,20.0,2.0,3.0,van,4.0\n"
                                "3,30.0,3.0,4.0,police,5.0\n"
                                "4,40.0,4.0,5.0,car,6.0\n");
    WorkloadSpec spec;
    spec.num_clusters = 2;
    spec.per_cluster = 2;
    spec.trace_path = path;
    spec.inject_window = 50;
    BuiltWorld bw = build_world(spec, 9);
    REQUIRE(bw.world.vehicles.size() == 4);
    CHECK(bw.world.vehicles[0].vehicle_type == "ambulance");
    CHECK(bw.world.vehicles[1].speed == doctest::Approx(4.0));
    CHECK(validate_world(bw.world).empty());
    std::remove(path.c_str());
}

TEST_CASE("task plans are dense, ordered, and resource-sorted") {
    WorkloadSpec spec;
    spec.num_clusters = 3;
    spec.per_cluster = 4;
    spec.inject_window = 500;
    BuiltWorld bw = build_world(spec, 21);
    REQUIRE(!bw.plan.empty());
    for (size_t i = 0; i < bw.plan.size(); ++i) {
        const Task& t = bw.plan[i];
        CHECK(t.id == static_cast<TaskId>(i));
        if (i > 0) CHECK(t.enqueue_time >= bw.plan[i - 1].enqueue_time);
        CHECK(!t.required_resources.empty());
        CHECK(std::is_sorted(t.required_resources.begin(), t.required_resources.end()));
        for (ResourceId r : t.required_resources) CHECK(r != t.twin_id);
        CHECK(t.payload_size == payload_for_app(t.app));
    }
}
