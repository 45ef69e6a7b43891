#pragma once

#include "vdtn/core_model.hpp"

#include <compare>
#include <stdexcept>

namespace vdtn {

// Weights turning category ranks into numeric priorities. Lower value =
// more important. alpha must exceed 5*beta so that vehicle class strictly
// dominates application class: the worst high-class total stays below the
// best medium-class total.
struct PriorityWeights {
    double alpha = 10.0;
    double beta = 1.0;

    bool dominance_holds() const { return alpha > 0 && beta > 0 && alpha > 5.0 * beta; }
};

// Anti-starvation schedule: a waiting task's effective priority improves by
// `step` every `interval` ticks, clamped at `floor`.
struct AgingPolicy {
    Tick interval = 100;
    double step = 1.0;
    double floor = 11.0;
    bool enabled = true;

    // Defaults derived from the weights: step is one app-rank worth, floor is
    // the best attainable total. Keeps orderings invariant under uniform
    // weight scaling.
    static AgingPolicy derive(const PriorityWeights& w, Tick interval = 100) {
        AgingPolicy a;
        a.interval = interval;
        a.step = w.beta;
        a.floor = w.alpha + w.beta;
        return a;
    }

    static AgingPolicy disabled() {
        AgingPolicy a;
        a.enabled = false;
        return a;
    }
};

inline double compute_dt_priority(VehicleClass cls, const PriorityWeights& w) {
    return w.alpha * rank(cls);
}

inline double compute_app_priority(AppClass app, const PriorityWeights& w) {
    return w.beta * rank(app);
}

inline double total_priority(double class_priority, double app_priority) {
    return class_priority + app_priority;
}

// The scheduler compares tasks through this slim view so queue entries do
// not need the whole Task. cls_rank rides along for class-gate checks and
// plays no part in the ordering itself.
struct TaskRef {
    TaskId id = 0;
    double base_priority = 0.0;
    Tick enqueue_time = 0;
    int cls_rank = 0;
};

inline TaskRef ref_of(const Task& t) { return {t.id, t.base_priority, t.enqueue_time, 0}; }

inline double effective_priority(const TaskRef& t, Tick now, const AgingPolicy& aging) {
    if (now < t.enqueue_time) {
        throw std::invalid_argument("effective_priority: now precedes enqueue time");
    }
    if (!aging.enabled) return t.base_priority;
    Tick steps = (now - t.enqueue_time) / aging.interval;
    double eff = t.base_priority - aging.step * static_cast<double>(steps);
    return eff < aging.floor ? aging.floor : eff;
}

inline double effective_priority(const Task& t, Tick now, const AgingPolicy& aging) {
    return effective_priority(ref_of(t), now, aging);
}

// Total order: effective priority ascending, then arrival (FCFS), then id.
inline std::strong_ordering compare(const TaskRef& a, const TaskRef& b, Tick now,
                                    const AgingPolicy& aging) {
    double ea = effective_priority(a, now, aging);
    double eb = effective_priority(b, now, aging);
    if (ea < eb) return std::strong_ordering::less;
    if (ea > eb) return std::strong_ordering::greater;
    if (a.enqueue_time != b.enqueue_time) {
        return a.enqueue_time < b.enqueue_time ? std::strong_ordering::less
                                               : std::strong_ordering::greater;
    }
    if (a.id != b.id) {
        return a.id < b.id ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

inline std::strong_ordering compare(const Task& a, const Task& b, Tick now,
                                    const AgingPolicy& aging) {
    return compare(ref_of(a), ref_of(b), now, aging);
}

}  // namespace vdtn
