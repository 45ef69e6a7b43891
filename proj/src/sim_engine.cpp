#include "vdtn/sim_engine.hpp"

#include "vdtn/rng.hpp"
#include "vdtn/workload.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <unordered_map>

namespace vdtn {

Tick exchange_service_time(int64_t payload, int64_t host_mips, const IntraTwinConfig& c) {
    int64_t rate = std::max<int64_t>(1, host_mips / std::max<int64_t>(1, c.mips_per_unit));
    return (payload + rate - 1) / rate + c.exchange_overhead;
}

Tick channel_latency(int64_t payload, int64_t transit_rate) {
    int64_t rate = std::max<int64_t>(1, transit_rate);
    return std::max<Tick>(1, (payload + rate - 1) / rate);
}

namespace {

enum class EvKind {
    Upload,
    TwinReceive,
    ExchangeDone,
    ResultDownload,
    TwinFail,
    AgingTick,
    Churn,
    StallRelease
};

struct Ev {
    Tick time;
    int64_t seq;
    EvKind kind;
    int64_t a = -1;
    int64_t b = -1;

    bool operator>(const Ev& o) const {
        if (time != o.time) return time > o.time;
        return seq > o.seq;
    }
};

struct TaskRt {
    Task task;
    TaskRecord rec;
    int updates_done = 0;
    bool uploaded = false;
    bool in_policy = false;   // between on_task_ready and exchange completion
    VmId on_vm = -1;
};

class Engine {
public:
    Engine(const World& world, const std::vector<Task>& plan, SchedulerPolicy& policy,
           const SimConfig& cfg, uint64_t seed)
        : world_(world), policy_(policy), cfg_(cfg), rng_(seed ^ 0xc0ffee) {
        if (cfg.horizon <= 0) throw std::invalid_argument("ConfigError: horizon must be > 0");
        if (world.datacenter.total_vms() <= 0) {
            throw std::invalid_argument("ConfigError: empty VM set");
        }
        for (const auto& f : cfg.failures) {
            if (f.twin < 0 || static_cast<size_t>(f.twin) >= world.twins.size()) {
                throw std::out_of_range("UnknownTwin: " + std::to_string(f.twin));
            }
        }
        adjacency_ = world.adjacency;
        tasks_.reserve(plan.size());
        for (const auto& t : plan) {
            index_[t.id] = tasks_.size();
            TaskRt rt;
            rt.task = t;
            rt.rec.id = t.id;
            rt.rec.cls_rank = rank(world.twins[static_cast<size_t>(t.twin_id)].cls);
            rt.rec.app_rank = rank(t.app);
            rt.rec.payload = t.payload_size;
            rt.rec.arrival = t.enqueue_time;
            tasks_.push_back(std::move(rt));
        }
        log_.policy = to_string(policy.kind());
        log_.seed = seed;
        log_.horizon = cfg.horizon;
        log_.num_vms = world.datacenter.total_vms();
        log_.num_channels = world.num_base_stations;
        log_.transit_rate = world.channel.transit_rate;
        log_.capacity_window = world.channel.capacity_window;
        log_.k_updates = cfg.intra.k;
        log_.vm_busy.assign(static_cast<size_t>(log_.num_vms), {});
        log_.channel_busy.assign(static_cast<size_t>(log_.num_channels), {});
        channel_free_at_.assign(static_cast<size_t>(log_.num_channels), 0);
        vm_open_.assign(static_cast<size_t>(log_.num_vms), -1);
        for (VmId v = 0; v < log_.num_vms; ++v) {
            VirtualMachine vm;
            vm.id = v;
            vm.datacenter_id = v / std::max(1, world.datacenter.vms_per_datacenter);
            vm.mips = world.datacenter.host_mips;
            vm.memory = world.datacenter.vm_memory;
            vm.busy_until = -1;
            vms_.push_back(vm);
        }
        twin_dead_.assign(world.twins.size(), false);
    }

    RunLog run() {
        policy_.reset(log_.num_vms, static_cast<int>(world_.resources.size()));
        policy_.ops = OpCounter{};
        policy_.ops.enabled = cfg_.count_ops;

        for (auto& rt : tasks_) push(rt.task.enqueue_time, EvKind::Upload, rt.task.id);
        for (const auto& f : cfg_.failures) push(f.time, EvKind::TwinFail, f.twin);
        if (cfg_.churn) {
            Tick t = cfg_.churn_time > 0 ? cfg_.churn_time : cfg_.horizon / 2;
            push(t, EvKind::Churn, 0);
        }
        if (policy_.kind() == PolicyKind::PriorityVdtn && cfg_.aging.enabled) {
            push(cfg_.aging.interval, EvKind::AgingTick, 1);
        }

        Tick last = 0;
        while (!pq_.empty()) {
            Ev ev = pq_.top();
            pq_.pop();
            if (ev.time > cfg_.horizon) {
                censored_ = true;
                break;
            }
            now_ = ev.time;
            last = ev.time;
            dispatch_event(ev);
        }
        log_.end_time = censored_ ? cfg_.horizon : last;
        finish();
        return std::move(log_);
    }

private:
    void push(Tick t, EvKind k, int64_t a, int64_t b = -1) {
        pq_.push(Ev{t, seq_alloc_++, k, a, b});
    }

    void log_event(EventKind k, int64_t a, int64_t b = -1, int64_t c = -1) {
        log_.events.push_back(SimEvent{now_, log_seq_++, k, a, b, c});
    }

    void dispatch_event(const Ev& ev) {
        switch (ev.kind) {
            case EvKind::Upload: on_upload(static_cast<TaskId>(ev.a)); break;
            case EvKind::TwinReceive: on_twin_receive(static_cast<TaskId>(ev.a)); break;
            case EvKind::ExchangeDone:
                on_exchange_done(static_cast<TaskId>(ev.a), static_cast<VmId>(ev.b));
                break;
            case EvKind::ResultDownload: on_result_download(static_cast<TaskId>(ev.a)); break;
            case EvKind::TwinFail: on_twin_fail(static_cast<TwinId>(ev.a)); break;
            case EvKind::AgingTick: on_aging_tick(ev.a); break;
            case EvKind::Churn: on_churn(); break;
            case EvKind::StallRelease: on_stall_release(static_cast<TwinId>(ev.a)); break;
        }
    }

    TaskRt& rt_of(TaskId id) { return tasks_[index_.at(id)]; }

    int channel_of(const TaskRt& rt) const {
        const auto& twin = world_.twins[static_cast<size_t>(rt.task.twin_id)];
        return world_.vehicles[static_cast<size_t>(twin.vehicle_id)].base_station;
    }

    // FIFO channel: serves jobs back to back at the transit rate.
    Tick channel_serve(int ch, int64_t units) {
        Tick start = std::max(now_, channel_free_at_[static_cast<size_t>(ch)]);
        Tick dur = channel_latency(units, world_.channel.transit_rate);
        Tick end = start + dur;
        channel_free_at_[static_cast<size_t>(ch)] = end;
        log_.channel_busy[static_cast<size_t>(ch)].push_back({start, end, units});
        return end;
    }

    void on_upload(TaskId id) {
        TaskRt& rt = rt_of(id);
        rt.uploaded = true;
        log_.injected++;
        log_event(EventKind::Upload, id, channel_of(rt));
        log_.data_messages++;  // the private-data message itself
        Tick arrive = channel_serve(channel_of(rt), rt.task.payload_size);
        push(arrive, EvKind::TwinReceive, id);
    }

    void on_twin_receive(TaskId id) {
        TaskRt& rt = rt_of(id);
        log_event(EventKind::TwinReceive, id, rt.task.twin_id);
        if (twin_dead_[static_cast<size_t>(rt.task.twin_id)]) {
            fail_task(rt, FailCode::TwinFailure);
            return;
        }
        rt.rec.twin_receive = now_;
        rt.task.enqueue_time = now_;  // scheduling seniority starts at the twin
        if (cfg_.intra.k == 0 || rt.task.required_resources.empty()) {
            // zero-update rounds (and isolated twins) pass straight through
            rt.rec.first_response = now_;
            finalize(rt);
            return;
        }
        request_round(rt);
    }

    SchedTask sched_view(const TaskRt& rt) const {
        SchedTask st;
        st.id = rt.task.id;
        st.cls = world_.twins[static_cast<size_t>(rt.task.twin_id)].cls;
        st.app = rt.task.app;
        st.base_priority = rt.task.base_priority;
        st.enqueue_time = rt.task.enqueue_time;
        st.required = rt.task.required_resources;
        return st;
    }

    void request_round(TaskRt& rt) {
        rt.in_policy = true;
        rt.task.state = TaskState::Queued;
        process_actions(policy_.on_task_ready(sched_view(rt), now_));
    }

    void process_actions(PolicyActions&& acts) {
        for (const auto& d : acts.decisions) {
            if (d.resource_id >= 0) {
                // inter-twin coordination travels the network, so it counts
                if (d.action == GrantAction::Wait) {
                    log_.control_messages++;
                } else {
                    log_event(EventKind::ResourceGranted, d.task_id, d.resource_id);
                    if (d.action == GrantAction::Grant) log_.control_messages++;
                    TaskRt& rt = rt_of(d.task_id);
                    if (rt.rec.first_response < 0) rt.rec.first_response = now_;
                    rt.task.state = TaskState::Granted;
                }
            }
            // VM-stage decisions are datacenter-local scheduling, not messages
        }
        log_.control_messages += acts.extra_control_messages;
        for (TaskId c : acts.cancelled) {
            fail_task(rt_of(c), FailCode::Churn);
        }
        for (const auto& disp : acts.dispatches) {
            start_exchange(rt_of(disp.task), disp.vm);
        }
    }

    void start_exchange(TaskRt& rt, VmId vm) {
        rt.task.state = TaskState::Exchanging;
        rt.on_vm = vm;
        vm_open_[static_cast<size_t>(vm)] = now_;
        if (rt.rec.first_response < 0) rt.rec.first_response = now_;
        Tick dur = exchange_service_time(rt.task.payload_size,
                                         vms_[static_cast<size_t>(vm)].mips, cfg_.intra);
        vms_[static_cast<size_t>(vm)].busy_until = now_ + dur;
        push(now_ + dur, EvKind::ExchangeDone, rt.task.id, vm);
    }

    void close_vm(VmId vm) {
        size_t v = static_cast<size_t>(vm);
        if (vm_open_[v] >= 0) {
            log_.vm_busy[v].push_back({vm_open_[v], now_, 0});
            vm_open_[v] = -1;
            vms_[v].busy_until = -1;
        }
    }

    void on_exchange_done(TaskId id, VmId vm) {
        TaskRt& rt = rt_of(id);
        if (rt.on_vm != vm) return;  // aborted by a twin failure
        close_vm(vm);
        rt.on_vm = -1;
        rt.in_policy = false;
        rt.updates_done++;
        rt.rec.content_version = rt.updates_done;
        log_event(EventKind::ExchangeDone, id, vm, rt.updates_done);
        log_event(EventKind::VmComplete, vm, id);
        log_.data_messages += 2;  // PD out, PD back
        process_actions(policy_.on_exchange_done(id, vm, now_));
        if (twin_dead_[static_cast<size_t>(rt.task.twin_id)]) {
            fail_task(rt, FailCode::TwinFailure);
            return;
        }
        if (rt.updates_done < cfg_.intra.k) {
            request_round(rt);
        } else {
            finalize(rt);
        }
    }

    void finalize(TaskRt& rt) {
        rt.rec.final_info = true;
        log_.data_messages++;  // processed information back to the vehicle
        Tick arrive = channel_serve(channel_of(rt), rt.task.payload_size);
        push(arrive, EvKind::ResultDownload, rt.task.id);
    }

    void on_result_download(TaskId id) {
        TaskRt& rt = rt_of(id);
        log_event(EventKind::ResultDownload, id, channel_of(rt));
        rt.task.state = TaskState::Done;
        rt.rec.final_state = TaskState::Done;
        rt.rec.done = now_;
        log_.delivered++;
    }

    void fail_task(TaskRt& rt, FailCode code) {
        if (rt.rec.final_state == TaskState::Done || rt.rec.final_state == TaskState::Failed)
            return;
        rt.task.state = TaskState::Failed;
        rt.rec.final_state = TaskState::Failed;
        rt.rec.fail_code = code;
        log_.failed++;
        log_.control_messages++;  // failure notice to the vehicle
        if (code == FailCode::TwinFailure) log_.failure_injected_tasks++;
    }

    void on_twin_fail(TwinId twin) {
        if (twin_dead_[static_cast<size_t>(twin)]) return;
        log_event(EventKind::TwinFail, twin);
        twin_dead_[static_cast<size_t>(twin)] = true;
        policy_.mark_resource_dead(static_cast<ResourceId>(twin));
        for (auto& rt : tasks_) {
            if (rt.task.twin_id != twin || !rt.uploaded) continue;
            if (rt.rec.final_state == TaskState::Done ||
                rt.rec.final_state == TaskState::Failed)
                continue;
            if (rt.on_vm >= 0) {
                VmId vm = rt.on_vm;
                close_vm(vm);
                rt.on_vm = -1;
                process_actions(policy_.on_vm_abort(vm, now_));
                process_actions(policy_.on_cancel(rt.task.id, true, now_));
                ghosts_.push_back(rt.task.id);
            } else if (rt.in_policy) {
                process_actions(policy_.on_cancel(rt.task.id, true, now_));
                ghosts_.push_back(rt.task.id);
            }
            rt.in_policy = false;
            fail_task(rt, FailCode::TwinFailure);
        }
        if (cfg_.failure_stall >= 0) {
            push(now_ + cfg_.failure_stall, EvKind::StallRelease, twin);
        }
    }

    void on_stall_release(TwinId twin) {
        for (TaskId g : ghosts_) {
            if (rt_of(g).task.twin_id == twin) {
                process_actions(policy_.on_release_holdings(g, now_));
            }
        }
    }

    void on_aging_tick(int64_t index) {
        log_event(EventKind::AgingTick, index);
        policy_.on_aging_tick(now_);
        if (log_.delivered + log_.failed <
            static_cast<int64_t>(tasks_.size())) {
            Tick next = now_ + cfg_.aging.interval;
            if (next <= cfg_.horizon) push(next, EvKind::AgingTick, index + 1);
        }
    }

    void on_churn() {
        Rng churn_rng = rng_.fork(0x11);
        adjacency_ = wire_clusters(world_.clusters, cfg_.churn_edge_prob,
                                   static_cast<int>(world_.twins.size()), churn_rng);
        // tasks that have not yet reached their twin sample fresh partners
        for (auto& rt : tasks_) {
            if (rt.rec.twin_receive >= 0 || rt.rec.final_state == TaskState::Failed) continue;
            rt.task.required_resources = sample_required_resources(
                adjacency_, rt.task.twin_id, static_cast<int>(rt.task.required_resources.size()),
                churn_rng, cfg_.hub_bias);
        }
        process_actions(policy_.on_churn(now_));
    }

    void finish() {
        // a waiter parked when the event queue drains can never be granted;
        // at a horizon cut it is merely in flight
        std::vector<TaskId> parked =
            censored_ ? std::vector<TaskId>{} : policy_.parked_tasks();
        for (TaskId id : parked) {
            TaskRt& rt = rt_of(id);
            if (rt.rec.final_state == TaskState::Done ||
                rt.rec.final_state == TaskState::Failed)
                continue;
            rt.rec.final_state = TaskState::Failed;
            rt.rec.fail_code = FailCode::StalledAtHorizon;
            log_.failed++;
        }
        for (auto& rt : tasks_) {
            if (!rt.uploaded) continue;
            if (rt.rec.final_state == TaskState::Done ||
                rt.rec.final_state == TaskState::Failed)
                continue;
            rt.rec.final_state = rt.task.state;
            log_.in_flight++;
        }
        // close any VM still running at the cut
        now_ = log_.end_time;
        for (size_t v = 0; v < vm_open_.size(); ++v) {
            if (vm_open_[v] >= 0) {
                log_.vm_busy[v].push_back({vm_open_[v], log_.end_time, 0});
                vm_open_[v] = -1;
            }
        }
        for (const auto& rt : tasks_) {
            if (rt.uploaded) log_.tasks.push_back(rt.rec);
        }
        log_.sched_comparisons = policy_.ops.comparisons;
        log_.sched_queue_ops = policy_.ops.queue_ops;
        log_.sched_table_ops = policy_.ops.table_ops;
        log_.sched_decisions = policy_.ops.decisions;
        log_.recovered_tasks = 0;  // no recovery mechanism in any policy
    }

    const World& world_;
    SchedulerPolicy& policy_;
    const SimConfig& cfg_;
    Rng rng_;

    std::priority_queue<Ev, std::vector<Ev>, std::greater<Ev>> pq_;
    int64_t seq_alloc_ = 0;
    int64_t log_seq_ = 0;
    Tick now_ = 0;

    std::vector<TaskRt> tasks_;
    std::vector<VirtualMachine> vms_;
    std::unordered_map<TaskId, size_t> index_;
    std::vector<Tick> channel_free_at_;
    std::vector<Tick> vm_open_;
    std::vector<bool> twin_dead_;
    std::vector<TaskId> ghosts_;
    bool censored_ = false;
    TwinAdjacency adjacency_;
    RunLog log_;
};

}  // namespace

RunLog run_simulation(const World& world, const std::vector<Task>& task_plan,
                      SchedulerPolicy& policy, const SimConfig& config, uint64_t seed) {
    Engine engine(world, task_plan, policy, config, seed);
    return engine.run();
}

ProcessedInfo intra_twin_round(const World& world, const Task& task,
                               SchedulerPolicy& policy, const SimConfig& config,
                               uint64_t seed) {
    std::vector<Task> plan{task};
    RunLog log = run_simulation(world, plan, policy, config, seed);
    ProcessedInfo info;
    info.task_id = task.id;
    for (const auto& rec : log.tasks) {
        if (rec.id == task.id) {
            info.content_version = rec.content_version;
            info.final_info = rec.final_info && rec.final_state == TaskState::Done;
        }
    }
    return info;
}

}  // namespace vdtn
