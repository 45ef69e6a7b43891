#include "vdtn/core_model.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace vdtn {

const char* to_string(VehicleClass c) {
    switch (c) {
        case VehicleClass::High: return "high";
        case VehicleClass::Medium: return "medium";
        case VehicleClass::Normal: return "normal";
    }
    return "?";
}

const char* to_string(AppClass a) {
    switch (a) {
        case AppClass::Safety: return "safety";
        case AppClass::TrafficManagement: return "traffic";
        case AppClass::Efficiency: return "efficiency";
        case AppClass::Infotainment: return "infotainment";
        case AppClass::Social: return "social";
    }
    return "?";
}

const char* to_string(TaskState s) {
    switch (s) {
        case TaskState::Queued: return "queued";
        case TaskState::Granted: return "granted";
        case TaskState::Exchanging: return "exchanging";
        case TaskState::Done: return "done";
        case TaskState::Failed: return "failed";
    }
    return "?";
}

const char* to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::BijectionViolation: return "bijection";
        case ViolationKind::DisjointnessViolation: return "disjointness";
        case ViolationKind::NoResourceLink: return "no_resource_link";
        case ViolationKind::BaseStationViolation: return "base_station";
    }
    return "?";
}

static std::string lower(const std::string& s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

VehicleClass classify_vehicle_type(const std::string& label) {
    static const struct {
        const char* token;
        VehicleClass cls;
    } table[] = {
        // emergency / enforcement
        {"police", VehicleClass::High},
        {"army", VehicleClass::High},
        {"customs", VehicleClass::High},
        {"ambulance", VehicleClass::High},
        {"law", VehicleClass::High},
        {"fire", VehicleClass::High},
        {"medical_unit", VehicleClass::High},
        {"mobile_medical", VehicleClass::High},
        {"detainee", VehicleClass::High},
        // limited-delay services
        {"medical_association", VehicleClass::Medium},
        {"cash", VehicleClass::Medium},
        {"blood", VehicleClass::Medium},
        {"organ", VehicleClass::Medium},
        {"sanitary", VehicleClass::Medium},
        // everything else is normal traffic
        {"private", VehicleClass::Normal},
        {"van", VehicleClass::Normal},
        {"goods", VehicleClass::Normal},
        {"passenger", VehicleClass::Normal},
    };
    const std::string l = lower(label);
    for (const auto& row : table) {
        if (l.find(row.token) != std::string::npos) return row.cls;
    }
    return VehicleClass::Normal;
}

std::vector<Violation> validate_world(const World& world) {
    std::vector<Violation> out;

    // vehicle <-> twin bijection
    std::map<VehicleId, int> twin_count;
    for (const auto& t : world.twins) twin_count[t.vehicle_id]++;
    for (const auto& v : world.vehicles) {
        auto it = twin_count.find(v.id);
        int n = (it == twin_count.end()) ? 0 : it->second;
        if (n != 1) {
            out.push_back({ViolationKind::BijectionViolation, v.id, n,
                           "vehicle has " + std::to_string(n) + " twins"});
        }
    }
    std::set<VehicleId> vehicle_ids;
    for (const auto& v : world.vehicles) vehicle_ids.insert(v.id);
    for (const auto& t : world.twins) {
        if (!vehicle_ids.count(t.vehicle_id)) {
            out.push_back({ViolationKind::BijectionViolation, t.vehicle_id, t.id,
                           "twin mirrors unknown vehicle"});
        }
    }

    // pairwise disjoint datasets, by sample id
    std::map<SampleId, TwinId> owner;
    for (const auto& t : world.twins) {
        for (const auto& s : t.dataset) {
            auto [it, inserted] = owner.emplace(s.sample_id, t.id);
            if (!inserted && it->second != t.id) {
                out.push_back({ViolationKind::DisjointnessViolation, s.sample_id,
                               it->second,
                               "sample also held by twin " + std::to_string(t.id)});
            }
        }
    }

    // every twin links to at least one other twin
    for (const auto& t : world.twins) {
        size_t idx = static_cast<size_t>(t.id);
        bool linked = idx < world.adjacency.size() && !world.adjacency[idx].empty();
        if (!linked) {
            out.push_back({ViolationKind::NoResourceLink, t.id, -1,
                           "twin has no inter-twin link"});
        }
    }

    // single, valid base station per vehicle
    for (const auto& v : world.vehicles) {
        if (v.base_station < 0 || v.base_station >= world.num_base_stations) {
            out.push_back({ViolationKind::BaseStationViolation, v.id, v.base_station,
                           "base station out of range"});
        }
    }

    return out;
}

}  // namespace vdtn
