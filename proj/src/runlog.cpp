#include "vdtn/runlog.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace vdtn {

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::Upload: return "UP";
        case EventKind::TwinReceive: return "TR";
        case EventKind::ResourceGranted: return "RG";
        case EventKind::ExchangeDone: return "XD";
        case EventKind::ResultDownload: return "RD";
        case EventKind::VmComplete: return "VC";
        case EventKind::TwinFail: return "TF";
        case EventKind::AgingTick: return "AT";
    }
    return "??";
}

static EventKind event_from(const std::string& s) {
    if (s == "UP") return EventKind::Upload;
    if (s == "TR") return EventKind::TwinReceive;
    if (s == "RG") return EventKind::ResourceGranted;
    if (s == "XD") return EventKind::ExchangeDone;
    if (s == "RD") return EventKind::ResultDownload;
    if (s == "VC") return EventKind::VmComplete;
    if (s == "TF") return EventKind::TwinFail;
    if (s == "AT") return EventKind::AgingTick;
    throw std::runtime_error("unknown event kind '" + s + "'");
}

static TaskState state_from(int v) {
    switch (v) {
        case 0: return TaskState::Queued;
        case 1: return TaskState::Granted;
        case 2: return TaskState::Exchanging;
        case 3: return TaskState::Done;
        case 4: return TaskState::Failed;
    }
    throw std::runtime_error("bad task state " + std::to_string(v));
}

static int state_code(TaskState s) {
    switch (s) {
        case TaskState::Queued: return 0;
        case TaskState::Granted: return 1;
        case TaskState::Exchanging: return 2;
        case TaskState::Done: return 3;
        case TaskState::Failed: return 4;
    }
    return 0;
}

void RunLog::write(std::ostream& os) const {
    os << "vdtnsim-runlog 1\n";
    os << "meta " << policy << ' ' << seed << ' ' << horizon << ' ' << end_time << ' '
       << num_vms << ' ' << num_channels << ' ' << transit_rate << ' ' << capacity_window
       << ' ' << k_updates << '\n';
    os << "counters " << data_messages << ' ' << control_messages << ' ' << injected << ' '
       << delivered << ' ' << failed << ' ' << in_flight << ' ' << failure_injected_tasks
       << ' ' << recovered_tasks << '\n';
    os << "ops " << sched_comparisons << ' ' << sched_queue_ops << ' ' << sched_table_ops
       << ' ' << sched_decisions << '\n';
    for (const auto& e : events) {
        os << "E " << e.time << ' ' << e.seq << ' ' << to_string(e.kind) << ' ' << e.a << ' '
           << e.b << ' ' << e.c << '\n';
    }
    for (const auto& t : tasks) {
        os << "T " << t.id << ' ' << t.cls_rank << ' ' << t.app_rank << ' ' << t.payload
           << ' ' << t.arrival << ' ' << t.twin_receive << ' ' << t.first_response << ' '
           << t.done << ' ' << state_code(t.final_state) << ' ' << t.content_version << ' '
           << (t.final_info ? 1 : 0) << ' ' << static_cast<int>(t.fail_code) << '\n';
    }
    for (size_t vm = 0; vm < vm_busy.size(); ++vm) {
        for (const auto& iv : vm_busy[vm]) {
            os << "VB " << vm << ' ' << iv.start << ' ' << iv.end << '\n';
        }
    }
    for (size_t ch = 0; ch < channel_busy.size(); ++ch) {
        for (const auto& iv : channel_busy[ch]) {
            os << "CB " << ch << ' ' << iv.start << ' ' << iv.end << ' ' << iv.units << '\n';
        }
    }
    os << "end\n";
}

void RunLog::save(const std::string& path) const {
    std::ofstream ofs(path, std::ios::binary);
    if (!ofs) throw std::runtime_error("cannot open " + path + " for writing");
    write(ofs);
}

RunLog RunLog::read(std::istream& is) {
    RunLog log;
    std::string line;
    int lineno = 0;
    bool saw_end = false;
    auto fail = [&](const std::string& why) {
        throw std::runtime_error("runlog parse error at line " + std::to_string(lineno) +
                                 ": " + why);
    };
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (lineno == 1) {
            std::string ver;
            if (tag != "vdtnsim-runlog" || !(ss >> ver) || ver != "1") {
                fail("bad header");
            }
            continue;
        }
        if (tag == "meta") {
            if (!(ss >> log.policy >> log.seed >> log.horizon >> log.end_time >>
                  log.num_vms >> log.num_channels >> log.transit_rate >>
                  log.capacity_window >> log.k_updates)) {
                fail("bad meta");
            }
            log.vm_busy.assign(static_cast<size_t>(log.num_vms), {});
            log.channel_busy.assign(static_cast<size_t>(log.num_channels), {});
        } else if (tag == "counters") {
            if (!(ss >> log.data_messages >> log.control_messages >> log.injected >>
                  log.delivered >> log.failed >> log.in_flight >>
                  log.failure_injected_tasks >> log.recovered_tasks)) {
                fail("bad counters");
            }
        } else if (tag == "ops") {
            if (!(ss >> log.sched_comparisons >> log.sched_queue_ops >>
                  log.sched_table_ops >> log.sched_decisions)) {
                fail("bad ops");
            }
        } else if (tag == "E") {
            SimEvent e;
            std::string kind;
            if (!(ss >> e.time >> e.seq >> kind >> e.a >> e.b >> e.c)) fail("bad event");
            try {
                e.kind = event_from(kind);
            } catch (const std::exception& ex) {
                fail(ex.what());
            }
            log.events.push_back(e);
        } else if (tag == "T") {
            TaskRecord t;
            int state = 0, final_flag = 0, failc = 0;
            if (!(ss >> t.id >> t.cls_rank >> t.app_rank >> t.payload >> t.arrival >>
                  t.twin_receive >> t.first_response >> t.done >> state >>
                  t.content_version >> final_flag >> failc)) {
                fail("bad task record");
            }
            try {
                t.final_state = state_from(state);
            } catch (const std::exception& ex) {
                fail(ex.what());
            }
            t.final_info = final_flag != 0;
            t.fail_code = static_cast<FailCode>(failc);
            log.tasks.push_back(t);
        } else if (tag == "VB") {
            size_t vm = 0;
            BusyInterval iv;
            if (!(ss >> vm >> iv.start >> iv.end) || vm >= log.vm_busy.size()) {
                fail("bad vm interval");
            }
            log.vm_busy[vm].push_back(iv);
        } else if (tag == "CB") {
            size_t ch = 0;
            BusyInterval iv;
            if (!(ss >> ch >> iv.start >> iv.end >> iv.units) ||
                ch >= log.channel_busy.size()) {
                fail("bad channel interval");
            }
            log.channel_busy[ch].push_back(iv);
        } else if (tag == "end") {
            saw_end = true;
            break;
        } else {
            fail("unknown record '" + tag + "'");
        }
    }
    ++lineno;
    if (!saw_end) fail("truncated log, missing end marker");
    return log;
}

RunLog RunLog::load(const std::string& path) {
    std::ifstream ifs(path, std::ios::binary);
    if (!ifs) throw std::runtime_error("cannot open runlog " + path);
    return read(ifs);
}

}  // namespace vdtn
