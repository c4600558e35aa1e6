#include "bprobe/session.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "bprobe/error.hpp"

#include "json.hpp"

namespace bprobe::session {

const char* rotation_name(Rotation r) {
    switch (r) {
        case Rotation::RoundRobin: return "round-robin";
        case Rotation::OnBlock: return "on-block";
        case Rotation::PerProbe: return "per-probe";
    }
    return "round-robin";
}

Rotation rotation_from_name(const std::string& name) {
    if (name == "round-robin") return Rotation::RoundRobin;
    if (name == "on-block") return Rotation::OnBlock;
    if (name == "per-probe") return Rotation::PerProbe;
    throw Error(ErrorCode::ConfigSemantic, "unknown rotation policy: " + name);
}

IdentityPool::IdentityPool(std::vector<Identity> identities, Rotation rotation)
    : identities_(std::move(identities)), rotation_(rotation) {
    if (identities_.empty())
        throw Error(ErrorCode::ConfigSemantic, "identity pool must not be empty");
}

bool IdentityPool::exhausted() const {
    return std::none_of(identities_.begin(), identities_.end(),
                        [](const Identity& i) { return i.active(); });
}

std::size_t IdentityPool::advance_cursor() {
    for (std::size_t hops = 0; hops < identities_.size(); ++hops) {
        cursor_ = (cursor_ + 1) % identities_.size();
        if (identities_[cursor_].active()) return cursor_;
    }
    throw Error(ErrorCode::PoolExhausted, "all identities are blocked");
}

std::size_t IdentityPool::select_next() {
    if (exhausted())
        throw Error(ErrorCode::PoolExhausted, "all identities are blocked");

    switch (rotation_) {
        case Rotation::PerProbe:
            if (first_use_) {
                first_use_ = false;
                if (identities_[cursor_].active()) return cursor_;
            }
            return advance_cursor();
        case Rotation::RoundRobin:
        case Rotation::OnBlock:
            // Stick with the current identity while it stays usable.
            if (identities_[cursor_].active()) {
                first_use_ = false;
                return cursor_;
            }
            return advance_cursor();
    }
    return cursor_;
}

std::size_t IdentityPool::rotate_from(std::size_t idx) {
    cursor_ = idx;
    return advance_cursor();
}

IdentityPool mint_identities(std::size_t n, std::uint64_t seed,
                             Rotation rotation) {
    if (n < 1)
        throw Error(ErrorCode::ConfigSemantic, "identity pool size must be >= 1");
    std::vector<Identity> out;
    out.reserve(n);
    Rng rng(splitmix64(seed ^ fnv1a("identity-pool")));
    for (std::size_t i = 0; i < n; ++i) {
        char reg[32];
        char user[32];
        // The index keeps pairs distinct even on colliding draws.
        std::snprintf(reg, sizeof reg, "reg-%04zu-%08llx", i,
                      static_cast<unsigned long long>(rng.next_u64() >> 32));
        std::snprintf(user, sizeof user, "user-%04zu-%08llx", i,
                      static_cast<unsigned long long>(rng.next_u64() >> 32));
        Identity id;
        id.registration_id = reg;
        id.user_id = user;
        out.push_back(std::move(id));
    }
    return IdentityPool(std::move(out), rotation);
}

std::string SessionLog::to_jsonl() const {
    std::ostringstream out;
    for (const ProbeRecord& r : records_) {
        nlohmann::ordered_json j;
        j["t_virtual"] = r.t_virtual;
        j["identity"] = r.identity;
        j["value"] = r.value;
        j["status"] = outcome_status_name(r.outcome.status);
        if (!r.outcome.detail.empty()) j["detail"] = r.outcome.detail;
        out << j.dump() << "\n";
    }
    return out.str();
}

Scheduler::Scheduler(IdentityPool& pool, std::vector<RateLimitPolicy> policies,
                     Clock& clock, Rng jitter_rng)
    : pool_(pool), policies_(std::move(policies)), clock_(clock),
      rng_(jitter_rng) {
    windows_.resize(policies_.size());
    for (std::size_t p = 0; p < policies_.size(); ++p) {
        std::size_t slots =
            policies_[p].scope == RateLimitPolicy::Scope::PerIdentity
                ? pool_.size()
                : 1;
        windows_[p].resize(slots);
    }
}

Scheduler::WindowState& Scheduler::window(std::size_t policy,
                                          std::size_t identity) {
    std::size_t slot =
        policies_[policy].scope == RateLimitPolicy::Scope::PerIdentity
            ? identity
            : 0;
    WindowState& w = windows_[policy][slot];
    std::int64_t index = clock_.now_ms() / policies_[policy].window_ms;
    if (w.index != index) {
        w.index = index;
        w.requests = 0;
        w.rejections = 0;
    }
    return w;
}

bool Scheduler::budget_ok(std::size_t idx) {
    for (std::size_t p = 0; p < policies_.size(); ++p) {
        if (policies_[p].max_requests <= 0) continue;
        if (window(p, idx).requests >= policies_[p].max_requests) return false;
    }
    return true;
}

void Scheduler::apply_gap() {
    std::int64_t gap = 0;
    for (const RateLimitPolicy& p : policies_) {
        std::int64_t g = p.min_gap_ms;
        if (p.has_jitter()) g += rng_.between(p.jitter_lo_ms, p.jitter_hi_ms);
        gap = std::max(gap, g);
    }
    if (gap > 0 && last_issue_ms_ >= 0) {
        std::int64_t due = last_issue_ms_ + gap;
        std::int64_t now = clock_.now_ms();
        if (due > now) clock_.sleep_ms(due - now);
    }
}

void Scheduler::wait_for_budget(std::size_t idx) {
    while (!budget_ok(idx)) {
        // Defer to the earliest window boundary that frees some budget.
        std::int64_t wake = -1;
        for (std::size_t p = 0; p < policies_.size(); ++p) {
            if (policies_[p].max_requests <= 0) continue;
            if (window(p, idx).requests < policies_[p].max_requests) continue;
            std::int64_t boundary =
                (clock_.now_ms() / policies_[p].window_ms + 1) *
                policies_[p].window_ms;
            if (wake < 0 || boundary < wake) wake = boundary;
        }
        if (wake < 0) return;
        clock_.sleep_ms(wake - clock_.now_ms());
    }
}

void Scheduler::record(std::size_t idx, const ProbeOutcome& out) {
    bool rejected = out.status == ProbeOutcome::Status::Rejected;
    for (std::size_t p = 0; p < policies_.size(); ++p) {
        WindowState& w = window(p, idx);
        w.requests += 1;
        if (rejected) w.rejections += 1;
    }

    Identity& id = pool_.at(idx);
    id.total_requests += 1;
    if (rejected) id.total_rejections += 1;
    // Mirror the first per-identity policy's window on the identity.
    for (std::size_t p = 0; p < policies_.size(); ++p) {
        if (policies_[p].scope != RateLimitPolicy::Scope::PerIdentity) continue;
        const WindowState& w = window(p, idx);
        id.window_index = w.index;
        id.requests_in_window = w.requests;
        id.rejections_in_window = w.rejections;
        break;
    }

    // Client-side rejection budget: drain the identity once its window's
    // rejections are spent so rotation moves on before the service starts
    // silently ignoring it.
    for (std::size_t p = 0; p < policies_.size(); ++p) {
        if (policies_[p].scope != RateLimitPolicy::Scope::PerIdentity) continue;
        if (policies_[p].max_rejections > 0 &&
            window(p, idx).rejections >= policies_[p].max_rejections) {
            pool_.mark_blocked(idx);
            break;
        }
    }
}

ProbeOutcome Scheduler::schedule_probe(const ProbeFn& probe_fn,
                                       const std::string& value_display,
                                       SessionLog* log) {
    apply_gap();

    std::size_t idx = pool_.select_next();
    wait_for_budget(idx);

    std::int64_t t = clock_.now_ms();
    ProbeOutcome out = probe_fn(pool_.at(idx));
    last_issue_ms_ = t;
    if (log)
        log->add(ProbeRecord{t, pool_.at(idx).user_id, value_display, out});
    record(idx, out);

    if (out.status == ProbeOutcome::Status::Blocked) {
        pool_.mark_blocked(idx);
        if (pool_.exhausted())
            throw Error(ErrorCode::PoolExhausted, "all identities are blocked");
        // One retry under the next identity.
        std::size_t next = pool_.rotate_from(idx);
        wait_for_budget(next);
        std::int64_t t2 = clock_.now_ms();
        ProbeOutcome retry = probe_fn(pool_.at(next));
        last_issue_ms_ = t2;
        if (log)
            log->add(ProbeRecord{t2, pool_.at(next).user_id, value_display,
                                 retry});
        record(next, retry);
        return retry;
    }
    return out;
}

ProbeOutcome resolve_feedback(
    const FeedbackOracle& oracle,
    const std::function<std::optional<ProbeOutcome>()>& poll_fn,
    Clock& clock) {
    std::int64_t deadline = clock.now_ms() + oracle.pending_window_ms;
    while (true) {
        std::optional<ProbeOutcome> decision;
        try {
            decision = poll_fn();
        } catch (const Error&) {
            throw;
        } catch (const std::exception& e) {
            throw Error(ErrorCode::OracleUnavailable, e.what());
        }
        if (decision) return *decision;
        if (clock.now_ms() >= deadline) {
            // Window elapsed without the submission appearing.
            return ProbeOutcome::make(ProbeOutcome::Status::Rejected, 0,
                                      "silent-ignore");
        }
        std::int64_t wait =
            std::min(oracle.poll_interval_ms, deadline - clock.now_ms());
        clock.sleep_ms(std::max<std::int64_t>(wait, 1));
    }
}

} // namespace bprobe::session
