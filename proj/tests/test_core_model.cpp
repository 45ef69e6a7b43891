#include "doctest.h"

#include "vdtn/core_model.hpp"
#include "vdtn/workload.hpp"

#include <set>

using namespace vdtn;

namespace {

World two_twin_world() {
    World w;
    for (int i = 0; i < 2; ++i) {
        Vehicle v;
        v.id = i;
        v.base_station = 0;
        w.vehicles.push_back(v);
        DigitalTwin t;
        t.id = i;
        t.vehicle_id = i;
        w.twins.push_back(t);
        w.resources.push_back({i, std::nullopt, std::nullopt, std::nullopt});
    }
    w.adjacency = {{1}, {0}};
    w.num_base_stations = 1;
    return w;
}

}  // namespace

TEST_CASE("disjoint datasets validate clean") {
    World w = two_twin_world();
    w.twins[0].dataset = {{1, 0, 1}, {2, 0, 1}};
    w.twins[1].dataset = {{3, 1, 1}};
    CHECK(validate_world(w).empty());
}

TEST_CASE("a shared sample id is a disjointness violation") {
    World w = two_twin_world();
    w.twins[0].dataset = {{1, 0, 1}, {2, 0, 1}};
    w.twins[1].dataset = {{2, 1, 1}};
    auto v = validate_world(w);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == ViolationKind::DisjointnessViolation);
    CHECK(v[0].subject_id == 2);   // the sample
    CHECK(v[0].other_id == 0);     // first owner
}

TEST_CASE("a vehicle mirrored by two twins is a bijection violation") {
    World w = two_twin_world();
    w.twins[1].vehicle_id = 0;  // both twins mirror vehicle 0
    auto v = validate_world(w);
    bool found = false;
    for (const auto& violation : v) {
        if (violation.kind == ViolationKind::BijectionViolation && violation.subject_id == 0)
            found = true;
    }
    CHECK(found);
}

TEST_CASE("a twin with no inter-twin link is flagged") {
    World w = two_twin_world();
    w.adjacency = {{1}, {}};
    w.adjacency[0].clear();
    auto v = validate_world(w);
    CHECK(v.size() == 2);
    CHECK(v[0].kind == ViolationKind::NoResourceLink);
}

TEST_CASE("an out-of-range base station is flagged") {
    World w = two_twin_world();
    w.vehicles[1].base_station = 7;
    auto v = validate_world(w);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == ViolationKind::BaseStationViolation);
    CHECK(v[0].subject_id == 1);
}

TEST_CASE("vehicle type labels map onto the three classes") {
    CHECK(classify_vehicle_type("Ambulance") == VehicleClass::High);
    CHECK(classify_vehicle_type("fire truck") == VehicleClass::High);
    CHECK(classify_vehicle_type("Cash transportation") == VehicleClass::Medium);
    CHECK(classify_vehicle_type("blood products") == VehicleClass::Medium);
    CHECK(classify_vehicle_type("private car") == VehicleClass::Normal);
    CHECK(classify_vehicle_type("goods transport") == VehicleClass::Normal);
    CHECK(classify_vehicle_type("hovercraft") == VehicleClass::Normal);
}

TEST_CASE("every generated world validates clean and covers its samples") {
    for (uint64_t seed : {1ULL, 7ULL, 99ULL, 12345ULL}) {
        WorkloadSpec spec;
        spec.num_clusters = 4;
        spec.per_cluster = 5;
        BuiltWorld bw = build_world(spec, seed);
        CHECK(validate_world(bw.world).empty());

        std::set<SampleId> all;
        size_t total = 0;
        for (const auto& t : bw.world.twins) {
            total += t.dataset.size();
            for (const auto& s : t.dataset) all.insert(s.sample_id);
        }
        CHECK(all.size() == total);  // disjoint cover
        CHECK(total == bw.world.twins.size() * static_cast<size_t>(spec.samples_per_twin));
    }
}
