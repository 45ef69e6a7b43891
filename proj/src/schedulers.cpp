#include "vdtn/schedulers.hpp"

#include <algorithm>
#include <stdexcept>

namespace vdtn {

const char* to_string(PolicyKind k) {
    switch (k) {
        case PolicyKind::PriorityVdtn: return "priority";
        case PolicyKind::RoundRobin: return "rr";
        case PolicyKind::Throttled: return "throttled";
    }
    return "?";
}

PolicyKind policy_from_string(const std::string& s) {
    if (s == "priority" || s == "vdtn") return PolicyKind::PriorityVdtn;
    if (s == "rr" || s == "roundrobin" || s == "round-robin") return PolicyKind::RoundRobin;
    if (s == "throttled") return PolicyKind::Throttled;
    throw std::invalid_argument("unknown algorithm: " + s);
}

void PolicyActions::append(PolicyActions&& other) {
    decisions.insert(decisions.end(), other.decisions.begin(), other.decisions.end());
    dispatches.insert(dispatches.end(), other.dispatches.begin(), other.dispatches.end());
    cancelled.insert(cancelled.end(), other.cancelled.begin(), other.cancelled.end());
    extra_control_messages += other.extra_control_messages;
}

// ---------------------------------------------------------------------------
// ContentionQueue

bool ContentionQueue::before(const Entry& a, const Entry& b) {
    if (a.cached_eff != b.cached_eff) return a.cached_eff < b.cached_eff;
    if (a.ref.enqueue_time != b.ref.enqueue_time) {
        return a.ref.enqueue_time < b.ref.enqueue_time;
    }
    return a.ref.id < b.ref.id;
}

void ContentionQueue::push(const TaskRef& t, Tick now, const AgingPolicy& aging,
                           OpCounter& ops) {
    Entry e{t, effective_priority(t, now, aging)};
    auto it = std::lower_bound(sorted_.begin(), sorted_.end(), e, before);
    // binary-search insertion: count the comparisons it performs
    size_t n = sorted_.size();
    int cmps = 0;
    while (n > 0) {
        ++cmps;
        n >>= 1;
    }
    ops.cmp(cmps);
    sorted_.insert(it, e);
    ops.queue_op();
}

void ContentionQueue::push_back(const TaskRef& t, OpCounter& ops) {
    sorted_.push_back(Entry{t, t.base_priority});
    ops.queue_op();
}

bool ContentionQueue::remove(TaskId id, OpCounter& ops) {
    for (size_t i = 0; i < sorted_.size(); ++i) {
        if (sorted_[i].ref.id == id) {
            sorted_.erase(sorted_.begin() + static_cast<std::ptrdiff_t>(i));
            ops.queue_op();
            return true;
        }
    }
    return false;
}

std::optional<TaskRef> ContentionQueue::pop_front(OpCounter& ops) {
    if (sorted_.empty()) return std::nullopt;
    TaskRef out = sorted_.front().ref;
    sorted_.erase(sorted_.begin());
    ops.queue_op();
    return out;
}

void ContentionQueue::refresh(Tick now, const AgingPolicy& aging, OpCounter& ops) {
    bool changed = false;
    for (auto& e : sorted_) {
        double eff = effective_priority(e.ref, now, aging);
        if (eff != e.cached_eff) {
            e.cached_eff = eff;
            changed = true;
        }
    }
    if (changed) {
        std::stable_sort(sorted_.begin(), sorted_.end(), before);
        ops.cmp(static_cast<int64_t>(sorted_.size()));
        ops.queue_op();
    }
}

const std::vector<TaskRef>& ContentionQueue::rebuild_view() const {
    view_.clear();
    for (const auto& e : sorted_) view_.push_back(e.ref);
    return view_;
}

std::vector<TaskId> pop_order_oracle(const std::vector<TaskRef>& queue, Tick now,
                                     const AgingPolicy& aging) {
    std::vector<TaskRef> sorted = queue;
    std::sort(sorted.begin(), sorted.end(), [&](const TaskRef& a, const TaskRef& b) {
        return compare(a, b, now, aging) == std::strong_ordering::less;
    });
    std::vector<TaskId> ids;
    ids.reserve(sorted.size());
    for (const auto& t : sorted) ids.push_back(t.id);
    return ids;
}

// ---------------------------------------------------------------------------
// ResourceStage

void ResourceStage::Entry::refresh_strongest() {
    strongest = 0;
    for (int r = 0; r < 3; ++r) {
        if (lane[static_cast<size_t>(r)] >= 0) {
            strongest = r + 1;
            break;
        }
    }
}

void ResourceStage::reset(int num_resources, Mode mode, PriorityWeights weights,
                          AgingPolicy aging) {
    mode_ = mode;
    weights_ = weights;
    aging_ = aging;
    entries_.assign(static_cast<size_t>(num_resources), Entry{});
    pending_.clear();
}

bool ResourceStage::gate_passes(const Entry& e, VehicleClass cls, OpCounter& ops) const {
    ops.table_op();  // holder lookup
    ops.cmp();
    if (e.dead) return false;
    if (mode_ == Mode::Exclusive) return e.strongest == 0;
    return e.strongest == 0 || rank(cls) < e.strongest;
}

bool ResourceStage::acquire_from(Pending& p, Tick now, std::vector<GrantDecision>& out,
                                 OpCounter& ops) {
    const SchedTask& t = p.task;
    while (p.next < t.required.size()) {
        ResourceId rid = t.required[p.next];
        if (rid < 0 || static_cast<size_t>(rid) >= entries_.size()) {
            throw std::out_of_range("UnknownResource: id " + std::to_string(rid));
        }
        Entry& e = entries_[static_cast<size_t>(rid)];
        if (gate_passes(e, t.cls, ops)) {
            e.lane[static_cast<size_t>(rank(t.cls) - 1)] = t.id;
            e.refresh_strongest();
            ops.table_op();  // lane write
            out.push_back({t.id, rid, -1, GrantAction::ExchangeDirect, GrantReason::Free});
            ops.decision();
            ++p.next;
            continue;
        }
        // parked: same-class holder queues on app priority, stronger-class
        // holder queues FCFS behind it
        GrantReason reason = GrantReason::Queued;
        if (mode_ == Mode::ClassLanes) {
            bool same_class_holder = e.lane[static_cast<size_t>(rank(t.cls) - 1)] >= 0;
            reason = same_class_holder ? GrantReason::AppPriorityWin : GrantReason::FCFSWin;
            e.queue.push(t.ref(), now, aging_, ops);
        } else {
            e.queue.push_back(t.ref(), ops);
        }
        p.parked = true;
        out.push_back({t.id, rid, -1, GrantAction::Wait, reason});
        ops.decision();
        return false;
    }
    p.parked = false;
    return true;
}

bool ResourceStage::request(const SchedTask& t, Tick now, std::vector<GrantDecision>& out,
                            OpCounter& ops) {
    (void)now;
    if (t.required.empty()) {
        throw std::invalid_argument("task " + std::to_string(t.id) + " requires no resources");
    }
    auto [it, inserted] = pending_.emplace(t.id, Pending{t, 0, false});
    if (!inserted) throw std::logic_error("duplicate resource request for task");
    if (acquire_from(it->second, now, out, ops)) {
        pending_.erase(it);
        return true;
    }
    return false;
}

void ResourceStage::pop_waiters(ResourceId r, Tick now, std::vector<GrantDecision>& out,
                                std::vector<TaskId>& completed, OpCounter& ops) {
    Entry& e = entries_[static_cast<size_t>(r)];
    for (;;) {
        if (e.queue.empty()) return;
        std::optional<TaskRef> winner;
        if (mode_ == Mode::Exclusive) {
            ops.table_op();
            ops.cmp();
            if (e.dead || e.strongest != 0) return;  // head-of-line blocks
            winner = e.queue.pop_front(ops);
        } else {
            // a single gate verdict covers all classes: eligible iff the
            // waiter outranks the strongest current holder
            ops.table_op();
            ops.cmp();
            if (e.dead) return;
            int limit = e.strongest == 0 ? 4 : e.strongest;
            winner = e.queue.pop_best_if(
                now, aging_,
                [&](const TaskRef& ref) { return ref.cls_rank < limit; }, ops);
        }
        if (!winner) return;

        GrantReason reason = GrantReason::FCFSWin;
        if (!e.queue.empty()) {
            ops.cmp();
            double w = effective_priority(*winner, now, aging_);
            double o = effective_priority(e.queue.entries().front(), now, aging_);
            if (w != o) reason = GrantReason::AppPriorityWin;
        }

        Pending& p = pending_.at(winner->id);
        e.lane[static_cast<size_t>(rank(p.task.cls) - 1)] = p.task.id;
        e.refresh_strongest();
        ops.table_op();
        out.push_back({p.task.id, r, -1, GrantAction::Grant, reason});
        ops.decision();
        ++p.next;

        if (acquire_from(p, now, out, ops)) {
            completed.push_back(p.task.id);
            pending_.erase(winner->id);
        }
    }
}

void ResourceStage::release(TaskId t, Tick now, std::vector<GrantDecision>& out,
                            std::vector<TaskId>& completed, OpCounter& ops) {
    // releasing unheld resources is a no-op, so just scan the lane slots
    for (size_t rid = 0; rid < entries_.size(); ++rid) {
        Entry& e = entries_[rid];
        bool held = false;
        for (auto& lane : e.lane) {
            if (lane == t) {
                lane = -1;
                held = true;
            }
        }
        if (held) {
            e.refresh_strongest();
            ops.table_op();
            pop_waiters(static_cast<ResourceId>(rid), now, out, completed, ops);
        }
    }
}

void ResourceStage::cancel(TaskId t, bool keep_holdings, Tick now,
                           std::vector<GrantDecision>& out, std::vector<TaskId>& completed,
                           OpCounter& ops) {
    auto it = pending_.find(t);
    if (it != pending_.end() && it->second.parked) {
        for (auto& e : entries_) {
            if (e.queue.remove(t, ops)) break;
        }
    }
    pending_.erase(t);
    if (!keep_holdings) release(t, now, out, completed, ops);
}

void ResourceStage::mark_dead(ResourceId r) {
    if (r >= 0 && static_cast<size_t>(r) < entries_.size()) {
        entries_[static_cast<size_t>(r)].dead = true;
    }
}

std::vector<TaskId> ResourceStage::churn_cancel_all(OpCounter& ops) {
    std::vector<TaskId> cancelled;
    for (auto& e : entries_) {
        while (auto ref = e.queue.pop_front(ops)) cancelled.push_back(ref->id);
    }
    // queues are empty now, so freeing partial holdings grants nobody
    for (TaskId id : cancelled) {
        auto it = pending_.find(id);
        if (it == pending_.end()) continue;
        const auto& req = it->second.task.required;
        for (size_t i = 0; i < it->second.next; ++i) {
            Entry& e = entries_[static_cast<size_t>(req[i])];
            e.lane[static_cast<size_t>(rank(it->second.task.cls) - 1)] = -1;
            e.refresh_strongest();
            ops.table_op();
        }
        pending_.erase(it);
    }
    return cancelled;
}

void ResourceStage::refresh_queues(Tick now, OpCounter& ops) {
    for (auto& e : entries_) {
        if (!e.queue.empty()) e.queue.refresh(now, aging_, ops);
    }
}

std::vector<TaskId> ResourceStage::waiting_tasks() const {
    std::vector<TaskId> out;
    for (const auto& e : entries_) {
        for (const auto& ref : e.queue.entries()) out.push_back(ref.id);
    }
    return out;
}

bool ResourceStage::is_waiting(TaskId t) const {
    auto it = pending_.find(t);
    return it != pending_.end() && it->second.parked;
}

int ResourceStage::strongest_holder_rank(ResourceId r) const {
    return entries_.at(static_cast<size_t>(r)).strongest;
}

// ---------------------------------------------------------------------------
// PriorityVdtnPolicy

PriorityVdtnPolicy::PriorityVdtnPolicy(PriorityWeights weights, AgingPolicy aging)
    : weights_(weights), aging_(aging) {}

void PriorityVdtnPolicy::reset(int num_vms, int num_resources) {
    resources_.reset(num_resources, ResourceStage::Mode::ClassLanes, weights_, aging_);
    tasks_.clear();
    ready_ = ContentionQueue{};
    free_vms_.clear();
    num_vms_ = num_vms;
    working_set_ = 1;
    pressure_ = 0;
    for (VmId v = num_vms - 1; v >= 0; --v) free_vms_.push_back(v);
}

void PriorityVdtnPolicy::dispatch_or_park(const SchedTask& t, Tick now,
                                          PolicyActions& acts) {
    (void)now;
    ops.table_op();  // free-list peek
    if (!free_vms_.empty() && free_vms_.back() >= working_set_) {
        // in-set VMs are all busy: widen immediately while a backlog is
        // standing, otherwise only after sustained pressure so quiet-phase
        // blips stay consolidated
        if (!ready_.empty() || ++pressure_ >= 2) {
            working_set_ = std::min(num_vms_, working_set_ + 1);
            pressure_ = 0;
            ops.table_op();
        }
    } else {
        pressure_ = 0;
    }
    if (!free_vms_.empty() && free_vms_.back() < working_set_) {
        VmId vm = free_vms_.back();
        free_vms_.pop_back();
        ops.queue_op();
        acts.dispatches.push_back({t.id, vm});
        acts.decisions.push_back({t.id, -1, vm, GrantAction::Grant, GrantReason::Free});
        ops.decision();
    } else {
        ready_.push(t.ref(), now, aging_, ops);
        acts.decisions.push_back({t.id, -1, -1, GrantAction::Wait, GrantReason::Queued});
        ops.decision();
    }
}

void PriorityVdtnPolicy::on_aging_tick(Tick now) {
    resources_.refresh_queues(now, ops);
    ready_.refresh(now, aging_, ops);
}

void PriorityVdtnPolicy::vm_freed(VmId vm, Tick now, PolicyActions& acts) {
    auto next = ready_.pop_best_if(now, aging_, [](const TaskRef&) { return true; }, ops);
    if (next) {
        acts.dispatches.push_back({next->id, vm});
        acts.decisions.push_back({next->id, -1, vm, GrantAction::Grant, GrantReason::FCFSWin});
        ops.decision();
    } else {
        auto it = std::lower_bound(free_vms_.begin(), free_vms_.end(), vm,
                                   [](VmId a, VmId b) { return a > b; });
        free_vms_.insert(it, vm);
        ops.queue_op();
        // an idle hand-back with nothing queued means demand is falling
        working_set_ = std::max(1, working_set_ - 1);
    }
}

void PriorityVdtnPolicy::after_acquisition(const std::vector<TaskId>& completed, Tick now,
                                           PolicyActions& acts) {
    for (TaskId id : completed) {
        dispatch_or_park(tasks_.at(id), now, acts);
    }
}

PolicyActions PriorityVdtnPolicy::on_task_ready(const SchedTask& t, Tick now) {
    PolicyActions acts;
    tasks_[t.id] = t;
    std::vector<TaskId> completed;
    if (resources_.request(t, now, acts.decisions, ops)) {
        dispatch_or_park(t, now, acts);
    }
    return acts;
}

PolicyActions PriorityVdtnPolicy::on_exchange_done(TaskId t, VmId vm, Tick now) {
    PolicyActions acts;
    vm_freed(vm, now, acts);
    std::vector<TaskId> completed;
    resources_.release(t, now, acts.decisions, completed, ops);
    after_acquisition(completed, now, acts);
    tasks_.erase(t);
    return acts;
}

PolicyActions PriorityVdtnPolicy::on_cancel(TaskId t, bool keep_holdings, Tick now) {
    PolicyActions acts;
    ready_.remove(t, ops);
    std::vector<TaskId> completed;
    resources_.cancel(t, keep_holdings, now, acts.decisions, completed, ops);
    after_acquisition(completed, now, acts);
    if (!keep_holdings) tasks_.erase(t);
    return acts;
}

PolicyActions PriorityVdtnPolicy::on_release_holdings(TaskId t, Tick now) {
    PolicyActions acts;
    std::vector<TaskId> completed;
    resources_.release(t, now, acts.decisions, completed, ops);
    after_acquisition(completed, now, acts);
    tasks_.erase(t);
    return acts;
}

PolicyActions PriorityVdtnPolicy::on_churn(Tick now) {
    (void)now;
    PolicyActions acts;
    acts.cancelled = resources_.churn_cancel_all(ops);
    for (TaskId id : acts.cancelled) tasks_.erase(id);
    return acts;
}

PolicyActions PriorityVdtnPolicy::on_vm_abort(VmId vm, Tick now) {
    PolicyActions acts;
    vm_freed(vm, now, acts);
    return acts;
}

std::vector<GrantDecision> PriorityVdtnPolicy::request_resources(const SchedTask& t,
                                                                 Tick now) {
    tasks_[t.id] = t;
    std::vector<GrantDecision> out;
    resources_.request(t, now, out, ops);
    return out;
}

std::vector<GrantDecision> PriorityVdtnPolicy::release_resources(
    TaskId t, Tick now, std::vector<TaskId>& completed) {
    std::vector<GrantDecision> out;
    resources_.release(t, now, out, completed, ops);
    return out;
}

// ---------------------------------------------------------------------------
// RoundRobinPolicy

RoundRobinPolicy::RoundRobinPolicy(PriorityWeights weights, AgingPolicy aging) {
    resources_.reset(0, ResourceStage::Mode::Exclusive, weights, aging);
}

void RoundRobinPolicy::reset(int num_vms, int num_resources) {
    resources_.reset(num_resources, ResourceStage::Mode::Exclusive, PriorityWeights{},
                     AgingPolicy::disabled());
    cursor_ = 0;
    num_vms_ = num_vms;
    busy_.assign(static_cast<size_t>(num_vms), false);
    vm_fifo_.assign(static_cast<size_t>(num_vms), {});
    tasks_.clear();
}

GrantDecision RoundRobinPolicy::assign(const SchedTask& t, Tick now, PolicyActions& acts) {
    (void)now;
    tasks_[t.id] = t;
    acts.extra_control_messages += 1;  // routing notice to the assigned VM's queue
    VmId vm = cursor_;
    cursor_ = (cursor_ + 1) % num_vms_;
    ops.table_op();  // cursor advance
    ops.table_op();  // busy lookup
    GrantDecision d;
    if (!busy_[static_cast<size_t>(vm)]) {
        busy_[static_cast<size_t>(vm)] = true;
        ops.table_op();
        acts.dispatches.push_back({t.id, vm});
        d = {t.id, -1, vm, GrantAction::Grant, GrantReason::Free};
    } else {
        vm_fifo_[static_cast<size_t>(vm)].push_back(t.id);
        ops.queue_op();
        d = {t.id, -1, vm, GrantAction::Wait, GrantReason::Queued};
    }
    acts.decisions.push_back(d);
    ops.decision();
    return d;
}

void RoundRobinPolicy::after_acquisition(const std::vector<TaskId>& completed, Tick now,
                                         PolicyActions& acts) {
    (void)now;
    for (TaskId id : completed) assign(tasks_.at(id), now, acts);
}

PolicyActions RoundRobinPolicy::on_task_ready(const SchedTask& t, Tick now) {
    PolicyActions acts;
    tasks_[t.id] = t;
    if (resources_.request(t, now, acts.decisions, ops)) {
        assign(t, now, acts);
    }
    return acts;
}

PolicyActions RoundRobinPolicy::on_exchange_done(TaskId t, VmId vm, Tick now) {
    PolicyActions acts;
    auto& fifo = vm_fifo_[static_cast<size_t>(vm)];
    ops.table_op();  // fifo peek
    if (!fifo.empty()) {
        TaskId next = fifo.front();
        fifo.pop_front();
        ops.queue_op();
        acts.dispatches.push_back({next, vm});
        acts.decisions.push_back({next, -1, vm, GrantAction::Grant, GrantReason::FCFSWin});
        ops.decision();
    } else {
        busy_[static_cast<size_t>(vm)] = false;
        ops.table_op();
    }
    std::vector<TaskId> completed;
    resources_.release(t, now, acts.decisions, completed, ops);
    after_acquisition(completed, now, acts);
    tasks_.erase(t);
    return acts;
}

PolicyActions RoundRobinPolicy::on_cancel(TaskId t, bool keep_holdings, Tick now) {
    PolicyActions acts;
    for (auto& fifo : vm_fifo_) {
        auto it = std::find(fifo.begin(), fifo.end(), t);
        if (it != fifo.end()) {
            fifo.erase(it);
            ops.queue_op();
            break;
        }
    }
    std::vector<TaskId> completed;
    resources_.cancel(t, keep_holdings, now, acts.decisions, completed, ops);
    after_acquisition(completed, now, acts);
    if (!keep_holdings) tasks_.erase(t);
    return acts;
}

PolicyActions RoundRobinPolicy::on_release_holdings(TaskId t, Tick now) {
    PolicyActions acts;
    std::vector<TaskId> completed;
    resources_.release(t, now, acts.decisions, completed, ops);
    after_acquisition(completed, now, acts);
    tasks_.erase(t);
    return acts;
}

PolicyActions RoundRobinPolicy::on_churn(Tick now) {
    (void)now;
    PolicyActions acts;
    acts.cancelled = resources_.churn_cancel_all(ops);
    for (TaskId id : acts.cancelled) tasks_.erase(id);
    return acts;
}

PolicyActions RoundRobinPolicy::on_vm_abort(VmId vm, Tick now) {
    (void)now;
    PolicyActions acts;
    auto& fifo = vm_fifo_[static_cast<size_t>(vm)];
    ops.table_op();
    if (!fifo.empty()) {
        TaskId next = fifo.front();
        fifo.pop_front();
        ops.queue_op();
        acts.dispatches.push_back({next, vm});
        acts.decisions.push_back({next, -1, vm, GrantAction::Grant, GrantReason::FCFSWin});
        ops.decision();
    } else {
        busy_[static_cast<size_t>(vm)] = false;
        ops.table_op();
    }
    return acts;
}

// ---------------------------------------------------------------------------
// ThrottledPolicy

ThrottledPolicy::ThrottledPolicy(PriorityWeights weights, AgingPolicy aging) {
    resources_.reset(0, ResourceStage::Mode::Exclusive, weights, aging);
}

void ThrottledPolicy::reset(int num_vms, int num_resources) {
    resources_.reset(num_resources, ResourceStage::Mode::Exclusive, PriorityWeights{},
                     AgingPolicy::disabled());
    available_.assign(static_cast<size_t>(num_vms), true);
    wait_fifo_.clear();
    tasks_.clear();
}

GrantDecision ThrottledPolicy::assign(const SchedTask& t, Tick now, PolicyActions& acts) {
    (void)now;
    tasks_[t.id] = t;
    GrantDecision d;
    for (size_t vm = 0; vm < available_.size(); ++vm) {
        ops.table_op();  // index table scan
        if (available_[vm]) {
            available_[vm] = false;
            ops.table_op();
            acts.dispatches.push_back({t.id, static_cast<VmId>(vm)});
            d = {t.id, -1, static_cast<VmId>(vm), GrantAction::Grant, GrantReason::Free};
            acts.decisions.push_back(d);
            ops.decision();
            return d;
        }
    }
    wait_fifo_.push_back(t.id);
    ops.queue_op();
    d = {t.id, -1, -1, GrantAction::Wait, GrantReason::Queued};
    acts.decisions.push_back(d);
    ops.decision();
    return d;
}

void ThrottledPolicy::after_acquisition(const std::vector<TaskId>& completed, Tick now,
                                        PolicyActions& acts) {
    for (TaskId id : completed) assign(tasks_.at(id), now, acts);
}

PolicyActions ThrottledPolicy::on_task_ready(const SchedTask& t, Tick now) {
    PolicyActions acts;
    tasks_[t.id] = t;
    if (resources_.request(t, now, acts.decisions, ops)) {
        assign(t, now, acts);
    }
    return acts;
}

PolicyActions ThrottledPolicy::on_exchange_done(TaskId t, VmId vm, Tick now) {
    PolicyActions acts;
    available_[static_cast<size_t>(vm)] = true;
    ops.table_op();
    if (!wait_fifo_.empty()) {
        TaskId next = wait_fifo_.front();
        wait_fifo_.pop_front();
        ops.queue_op();
        acts.extra_control_messages += 1;  // retry probe
        assign(tasks_.at(next), now, acts);
    }
    std::vector<TaskId> completed;
    resources_.release(t, now, acts.decisions, completed, ops);
    after_acquisition(completed, now, acts);
    tasks_.erase(t);
    return acts;
}

PolicyActions ThrottledPolicy::on_cancel(TaskId t, bool keep_holdings, Tick now) {
    PolicyActions acts;
    auto it = std::find(wait_fifo_.begin(), wait_fifo_.end(), t);
    if (it != wait_fifo_.end()) {
        wait_fifo_.erase(it);
        ops.queue_op();
    }
    std::vector<TaskId> completed;
    resources_.cancel(t, keep_holdings, now, acts.decisions, completed, ops);
    after_acquisition(completed, now, acts);
    if (!keep_holdings) tasks_.erase(t);
    return acts;
}

PolicyActions ThrottledPolicy::on_release_holdings(TaskId t, Tick now) {
    PolicyActions acts;
    std::vector<TaskId> completed;
    resources_.release(t, now, acts.decisions, completed, ops);
    after_acquisition(completed, now, acts);
    tasks_.erase(t);
    return acts;
}

PolicyActions ThrottledPolicy::on_churn(Tick now) {
    (void)now;
    PolicyActions acts;
    acts.cancelled = resources_.churn_cancel_all(ops);
    for (TaskId id : acts.cancelled) tasks_.erase(id);
    return acts;
}

PolicyActions ThrottledPolicy::on_vm_abort(VmId vm, Tick now) {
    PolicyActions acts;
    available_[static_cast<size_t>(vm)] = true;
    ops.table_op();
    if (!wait_fifo_.empty()) {
        TaskId next = wait_fifo_.front();
        wait_fifo_.pop_front();
        ops.queue_op();
        acts.extra_control_messages += 1;
        assign(tasks_.at(next), now, acts);
    }
    return acts;
}

// ---------------------------------------------------------------------------

std::unique_ptr<SchedulerPolicy> make_policy(PolicyKind kind, PriorityWeights weights,
                                             AgingPolicy aging) {
    switch (kind) {
        case PolicyKind::PriorityVdtn:
            return std::make_unique<PriorityVdtnPolicy>(weights, aging);
        case PolicyKind::RoundRobin:
            return std::make_unique<RoundRobinPolicy>(weights, aging);
        case PolicyKind::Throttled:
            return std::make_unique<ThrottledPolicy>(weights, aging);
    }
    throw std::logic_error("unreachable policy kind");
}

}  // namespace vdtn
