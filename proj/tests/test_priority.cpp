#include "doctest.h"

#include "vdtn/priority.hpp"
#include "vdtn/rng.hpp"

#include <vector>

using namespace vdtn;

TEST_CASE("class priority follows the weight times rank rule") {
    PriorityWeights w;  // alpha=10, beta=1
    CHECK(compute_dt_priority(VehicleClass::High, w) == doctest::Approx(10.0));
    CHECK(compute_dt_priority(VehicleClass::Normal, w) == doctest::Approx(30.0));
    PriorityWeights w7{7.0, 1.0};
    CHECK(compute_dt_priority(VehicleClass::Medium, w7) == doctest::Approx(14.0));
}

TEST_CASE("app priority follows the weight times rank rule") {
    PriorityWeights w;
    CHECK(compute_app_priority(AppClass::Safety, w) == doctest::Approx(1.0));
    CHECK(compute_app_priority(AppClass::Social, w) == doctest::Approx(5.0));
    PriorityWeights w2{10.0, 2.0};
    CHECK(compute_app_priority(AppClass::TrafficManagement, w2) == doctest::Approx(4.0));
}

TEST_CASE("total priority is the sum and spans the expected band") {
    CHECK(total_priority(10.0, 1.0) == doctest::Approx(11.0));
    CHECK(total_priority(30.0, 5.0) == doctest::Approx(35.0));
}

TEST_CASE("class bands never interleave across all 15 class/app pairs") {
    PriorityWeights w;
    double worst_high = 0.0, best_medium = 1e9, worst_medium = 0.0, best_normal = 1e9;
    for (int a = 1; a <= 5; ++a) {
        AppClass app = static_cast<AppClass>(a);
        double ph = total_priority(compute_dt_priority(VehicleClass::High, w),
                                   compute_app_priority(app, w));
        double pm = total_priority(compute_dt_priority(VehicleClass::Medium, w),
                                   compute_app_priority(app, w));
        double pn = total_priority(compute_dt_priority(VehicleClass::Normal, w),
                                   compute_app_priority(app, w));
        worst_high = std::max(worst_high, ph);
        best_medium = std::min(best_medium, pm);
        worst_medium = std::max(worst_medium, pm);
        best_normal = std::min(best_normal, pn);
    }
    CHECK(worst_high < best_medium);
    CHECK(worst_medium < best_normal);
}

TEST_CASE("dominance invariant detects weak alpha") {
    CHECK(PriorityWeights{10.0, 1.0}.dominance_holds());
    CHECK_FALSE(PriorityWeights{4.0, 1.0}.dominance_holds());
    CHECK_FALSE(PriorityWeights{5.0, 1.0}.dominance_holds());
}

TEST_CASE("effective priority ages toward the floor") {
    AgingPolicy aging;  // interval=100, step=1, floor=11
    TaskRef t{1, 35.0, 0, 3};
    CHECK(effective_priority(t, 0, aging) == doctest::Approx(35.0));
    CHECK(effective_priority(t, 250, aging) == doctest::Approx(33.0));
    TaskRef low{2, 12.0, 0, 3};
    CHECK(effective_priority(low, 10000, aging) == doctest::Approx(11.0));
}

TEST_CASE("effective priority rejects clock violations") {
    AgingPolicy aging;
    TaskRef t{1, 20.0, 100, 2};
    CHECK_THROWS_AS(effective_priority(t, 99, aging), std::invalid_argument);
}

TEST_CASE("compare orders by priority, then arrival, then id") {
    AgingPolicy aging = AgingPolicy::disabled();
    TaskRef a{3, 11.0, 5, 1}, b{7, 21.0, 5, 2};
    CHECK(compare(a, b, 10, aging) == std::strong_ordering::less);
    TaskRef c{3, 15.0, 5, 1}, d{7, 15.0, 9, 1};
    CHECK(compare(c, d, 10, aging) == std::strong_ordering::less);
    TaskRef e{3, 15.0, 5, 1}, f{7, 15.0, 5, 1};
    CHECK(compare(e, f, 10, aging) == std::strong_ordering::less);
    CHECK(compare(f, e, 10, aging) == std::strong_ordering::greater);
    CHECK(compare(e, e, 10, aging) == std::strong_ordering::equal);
}

TEST_CASE("aging monotonicity: waiting never worsens effective priority") {
    Rng rng(77);
    AgingPolicy aging;
    for (int trial = 0; trial < 500; ++trial) {
        TaskRef t{0, static_cast<double>(rng.uniform(11, 35)), rng.uniform(0, 1000), 2};
        Tick now = t.enqueue_time + rng.uniform(0, 5000);
        Tick later = now + rng.uniform(0, 5000);
        CHECK(effective_priority(t, later, aging) <= effective_priority(t, now, aging));
        // equal within one aging interval
        CHECK(effective_priority(t, t.enqueue_time + aging.interval - 1, aging) ==
              doctest::Approx(t.base_priority));
    }
}

TEST_CASE("bounded starvation: the worst base reaches the floor exactly on schedule") {
    AgingPolicy aging;
    TaskRef worst{0, 35.0, 0, 3};
    Tick bound = static_cast<Tick>((35.0 - 11.0)) * aging.interval;
    CHECK(effective_priority(worst, bound, aging) == doctest::Approx(aging.floor));
    CHECK(effective_priority(worst, bound - 1, aging) > aging.floor);
}

TEST_CASE("scaling both weights preserves every pairwise order") {
    Rng rng(123);
    for (double lambda : {0.5, 3.0, 10.0}) {
        PriorityWeights base;
        PriorityWeights scaled{base.alpha * lambda, base.beta * lambda};
        AgingPolicy aging_base = AgingPolicy::derive(base);
        AgingPolicy aging_scaled = AgingPolicy::derive(scaled);
        for (int trial = 0; trial < 2000; ++trial) {
            int cls_a = static_cast<int>(rng.uniform(1, 3));
            int app_a = static_cast<int>(rng.uniform(1, 5));
            int cls_b = static_cast<int>(rng.uniform(1, 3));
            int app_b = static_cast<int>(rng.uniform(1, 5));
            Tick enq_a = rng.uniform(0, 300);
            Tick enq_b = rng.uniform(0, 300);
            Tick now = 300 + rng.uniform(0, 3000);
            auto pr = [](const PriorityWeights& w, int cls, int app) {
                return total_priority(
                    compute_dt_priority(static_cast<VehicleClass>(cls), w),
                    compute_app_priority(static_cast<AppClass>(app), w));
            };
            TaskRef a1{1, pr(base, cls_a, app_a), enq_a, cls_a};
            TaskRef b1{2, pr(base, cls_b, app_b), enq_b, cls_b};
            TaskRef a2{1, pr(scaled, cls_a, app_a), enq_a, cls_a};
            TaskRef b2{2, pr(scaled, cls_b, app_b), enq_b, cls_b};
            CHECK(compare(a1, b1, now, aging_base) == compare(a2, b2, now, aging_scaled));
        }
    }
}
