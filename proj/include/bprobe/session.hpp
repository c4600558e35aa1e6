#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bprobe/clock.hpp"
#include "bprobe/rng.hpp"
#include "bprobe/value.hpp"

namespace bprobe::session {

struct Identity {
    std::string registration_id;
    std::string user_id;

    enum class State { Active, Blocked };
    State state = State::Active;

    // Counters for the scheduler's primary per-identity window, plus
    // lifetime totals (mirrors what the target sees for this identity).
    std::int64_t window_index = -1;
    std::int64_t requests_in_window = 0;
    std::int64_t rejections_in_window = 0;
    std::int64_t total_requests = 0;
    std::int64_t total_rejections = 0;

    bool active() const { return state == State::Active; }
};

enum class Rotation { RoundRobin, OnBlock, PerProbe };

const char* rotation_name(Rotation r);
Rotation rotation_from_name(const std::string& name);

/// Fabricated participant identities; owns per-identity counters and the
/// rotation cursor. Never yields a Blocked identity.
class IdentityPool {
public:
    IdentityPool(std::vector<Identity> identities, Rotation rotation);

    std::size_t size() const { return identities_.size(); }
    Rotation rotation() const { return rotation_; }

    Identity& at(std::size_t i) { return identities_[i]; }
    const Identity& at(std::size_t i) const { return identities_[i]; }

    /// Index of the identity the next probe should use.
    /// Throws Error{PoolExhausted} when every identity is Blocked.
    std::size_t select_next();

    /// Rotate away from `idx` (used after a Blocked outcome).
    std::size_t rotate_from(std::size_t idx);

    void mark_blocked(std::size_t idx) {
        identities_[idx].state = Identity::State::Blocked;
    }

    bool exhausted() const;

private:
    std::size_t advance_cursor();

    std::vector<Identity> identities_;
    Rotation rotation_;
    std::size_t cursor_ = 0;
    bool first_use_ = true;
};

/// Deterministically derives n distinct (registration_id, user_id) pairs.
IdentityPool mint_identities(std::size_t n, std::uint64_t seed,
                             Rotation rotation = Rotation::RoundRobin);

struct RateLimitPolicy {
    enum class Scope { PerIdentity, Global };

    Scope scope = Scope::PerIdentity;
    std::int64_t window_ms = 86'400'000; // virtual day
    std::int64_t max_requests = 0;       // 0 = unlimited
    std::int64_t max_rejections = 0;     // 0 = no rejection budget
    std::int64_t min_gap_ms = 0;
    std::int64_t jitter_lo_ms = 0;
    std::int64_t jitter_hi_ms = 0;

    bool has_jitter() const { return jitter_hi_ms > jitter_lo_ms || jitter_lo_ms > 0; }
};

struct ProbeRecord {
    std::int64_t t_virtual = 0;
    std::string identity;
    std::string value;
    ProbeOutcome outcome;
};

/// JSON-lines session log, one record per issued probe.
class SessionLog {
public:
    void add(ProbeRecord rec) { records_.push_back(std::move(rec)); }
    const std::vector<ProbeRecord>& records() const { return records_; }
    std::string to_jsonl() const;

private:
    std::vector<ProbeRecord> records_;
};

/// Issues one probe under rate-limit constraints: waits (on the virtual
/// clock) until min_gap + jitter and the window budget allow, fires
/// probe_fn under the selected identity, updates counters, and on a
/// Blocked outcome rotates and retries once.
class Scheduler {
public:
    Scheduler(IdentityPool& pool, std::vector<RateLimitPolicy> policies,
              Clock& clock, Rng jitter_rng);

    using ProbeFn =
        std::function<ProbeOutcome(const Identity& identity)>;

    ProbeOutcome schedule_probe(const ProbeFn& probe_fn,
                                const std::string& value_display,
                                SessionLog* log = nullptr);

    IdentityPool& pool() { return pool_; }
    Clock& clock() { return clock_; }

private:
    struct WindowState {
        std::int64_t index = -1;
        std::int64_t requests = 0;
        std::int64_t rejections = 0;
    };

    WindowState& window(std::size_t policy, std::size_t identity);
    bool budget_ok(std::size_t idx);
    void wait_for_budget(std::size_t idx);
    void record(std::size_t idx, const ProbeOutcome& out);
    void apply_gap();

    IdentityPool& pool_;
    std::vector<RateLimitPolicy> policies_;
    Clock& clock_;
    Rng rng_;
    std::int64_t last_issue_ms_ = -1;

    // windows_[policy][identity]; global policies use a single slot.
    std::vector<std::vector<WindowState>> windows_;
};

struct FeedbackOracle {
    enum class Kind { ResponseBased, SecondaryQuery, Observer };

    Kind kind = Kind::ResponseBased;
    std::int64_t pending_window_ms = 480'000; // 8 virtual minutes
    std::int64_t poll_interval_ms = 10'000;
};

/// Resolves a Pending submission by polling a read-only secondary query
/// until a decision appears or the pending window elapses (-> Rejected).
/// poll_fn returns empty while undecided. Throws Error{OracleUnavailable}
/// if poll_fn itself fails.
ProbeOutcome resolve_feedback(
    const FeedbackOracle& oracle,
    const std::function<std::optional<ProbeOutcome>()>& poll_fn,
    Clock& clock);

} // namespace bprobe::session
