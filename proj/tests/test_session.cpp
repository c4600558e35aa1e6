#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>

#include "bprobe/error.hpp"
#include "bprobe/session.hpp"

using namespace bprobe;
using namespace bprobe::session;

namespace {

ProbeOutcome accept_all(const Identity&) {
    return ProbeOutcome::make(ProbeOutcome::Status::Accepted);
}

RateLimitPolicy daily(std::int64_t max_requests) {
    RateLimitPolicy p;
    p.window_ms = 86'400'000;
    p.max_requests = max_requests;
    return p;
}

} // namespace

TEST_CASE("mint_identities: n distinct pairs, deterministic in the seed") {
    IdentityPool a = mint_identities(86, 7);
    IdentityPool b = mint_identities(86, 7);
    IdentityPool c = mint_identities(86, 8);

    std::set<std::string> seen;
    for (std::size_t i = 0; i < a.size(); ++i) {
        seen.insert(a.at(i).registration_id + "|" + a.at(i).user_id);
        CHECK(a.at(i).user_id == b.at(i).user_id);
        CHECK(a.at(i).registration_id == b.at(i).registration_id);
    }
    CHECK(seen.size() == 86);
    CHECK(a.at(0).user_id != c.at(0).user_id);

    IdentityPool single = mint_identities(1, 9);
    CHECK(single.size() == 1);
    CHECK_THROWS_AS(mint_identities(0, 1), Error);
}

TEST_CASE("rotation policies never yield a blocked identity") {
    IdentityPool pool = mint_identities(5, 1, Rotation::PerProbe);
    pool.mark_blocked(1);
    pool.mark_blocked(3);
    for (int i = 0; i < 50; ++i) {
        std::size_t idx = pool.select_next();
        CHECK(pool.at(idx).active());
    }

    IdentityPool sticky = mint_identities(3, 1, Rotation::OnBlock);
    std::size_t first = sticky.select_next();
    CHECK(sticky.select_next() == first); // sticks while active
    sticky.mark_blocked(first);
    std::size_t second = sticky.select_next();
    CHECK(second != first);

    IdentityPool one = mint_identities(1, 1);
    one.mark_blocked(0);
    CHECK_THROWS_AS(one.select_next(), Error);
}

TEST_CASE("scheduler spreads 120 daily-capped probes over 3 virtual days") {
    IdentityPool pool = mint_identities(1, 42);
    SimulatedClock clock;
    Scheduler sched(pool, {daily(50)}, clock, Rng(1));
    SessionLog log;

    int rate_limited = 0;
    for (int i = 0; i < 120; ++i) {
        ProbeOutcome out = sched.schedule_probe(accept_all, "v", &log);
        if (out.status == ProbeOutcome::Status::RateLimited) ++rate_limited;
    }
    CHECK(rate_limited == 0);

    std::set<std::int64_t> days;
    std::map<std::int64_t, int> per_day;
    for (const ProbeRecord& r : log.records()) {
        days.insert(r.t_virtual / 86'400'000);
        per_day[r.t_virtual / 86'400'000] += 1;
    }
    CHECK(days.size() == 3);
    for (const auto& [day, count] : per_day) CHECK(count <= 50);
    CHECK(log.records().size() == 120);
}

TEST_CASE("jittered gaps stay within the configured envelope") {
    IdentityPool pool = mint_identities(1, 42);
    SimulatedClock clock;
    RateLimitPolicy p;
    p.window_ms = 3'600'000;
    p.max_requests = 3;
    p.min_gap_ms = 1'200'000;  // 20 min
    p.jitter_lo_ms = 0;
    p.jitter_hi_ms = 900'000;  // +15 min
    Scheduler sched(pool, {p}, clock, Rng(7));
    SessionLog log;

    for (int i = 0; i < 30; ++i) sched.schedule_probe(accept_all, "v", &log);

    const auto& recs = log.records();
    for (std::size_t i = 1; i < recs.size(); ++i) {
        std::int64_t gap = recs[i].t_virtual - recs[i - 1].t_virtual;
        CHECK(gap >= 1'200'000);
        // Gaps beyond 35 min happen only when the hourly budget forced a
        // wait to a window boundary.
        if (gap > 2'100'000) {
            std::int64_t window = recs[i].t_virtual / p.window_ms;
            CHECK(recs[i].t_virtual == window * p.window_ms);
        }
    }
}

TEST_CASE("virtual time equals the analytic schedule with fixed gaps") {
    IdentityPool pool = mint_identities(1, 42);
    SimulatedClock clock;
    RateLimitPolicy p;
    p.min_gap_ms = 5'000;
    Scheduler sched(pool, {p}, clock, Rng(1));
    for (int i = 0; i < 10; ++i) sched.schedule_probe(accept_all, "v", nullptr);
    // First probe at t=0, nine gaps of exactly 5 s.
    CHECK(clock.now_ms() == 9 * 5'000);
}

TEST_CASE("client rejection budget drains identities and rotation moves on") {
    IdentityPool pool = mint_identities(3, 42, Rotation::OnBlock);
    SimulatedClock clock;
    RateLimitPolicy p;
    p.window_ms = 86'400'000;
    p.max_rejections = 8;
    Scheduler sched(pool, {p}, clock, Rng(1));

    auto reject_all = [](const Identity&) {
        return ProbeOutcome::make(ProbeOutcome::Status::Rejected);
    };
    std::set<std::string> users;
    SessionLog log;
    for (int i = 0; i < 20; ++i) sched.schedule_probe(reject_all, "v", &log);
    for (const ProbeRecord& r : log.records()) users.insert(r.identity);
    CHECK(users.size() == 3); // 8 + 8 + 4
    CHECK(!pool.at(0).active());
    CHECK(!pool.at(1).active());
    CHECK(pool.at(2).active());
    CHECK(pool.at(2).total_rejections == 4);
}

TEST_CASE("blocked outcome rotates and retries once") {
    IdentityPool pool = mint_identities(2, 42, Rotation::OnBlock);
    SimulatedClock clock;
    Scheduler sched(pool, {}, clock, Rng(1));

    int calls = 0;
    auto first_blocked = [&](const Identity&) {
        ++calls;
        return calls == 1 ? ProbeOutcome::make(ProbeOutcome::Status::Blocked)
                          : ProbeOutcome::make(ProbeOutcome::Status::Accepted);
    };
    ProbeOutcome out = sched.schedule_probe(first_blocked, "v", nullptr);
    CHECK(out.status == ProbeOutcome::Status::Accepted);
    CHECK(calls == 2);
    CHECK(!pool.at(0).active());

    // Single-identity pool: a block exhausts it.
    IdentityPool one = mint_identities(1, 42);
    Scheduler solo(one, {}, clock, Rng(1));
    auto blocked = [](const Identity&) {
        return ProbeOutcome::make(ProbeOutcome::Status::Blocked);
    };
    CHECK_THROWS_AS(solo.schedule_probe(blocked, "v", nullptr), Error);
}

TEST_CASE("resolve_feedback polls until the decision lands") {
    SimulatedClock clock;
    FeedbackOracle oracle;
    oracle.pending_window_ms = 480'000;
    oracle.poll_interval_ms = 10'000;

    std::int64_t decide_at = 230'000; // fixture latency under 8 minutes
    auto poll = [&]() -> std::optional<ProbeOutcome> {
        if (clock.now_ms() < decide_at) return std::nullopt;
        return ProbeOutcome::make(ProbeOutcome::Status::Accepted,
                                  clock.now_ms());
    };
    ProbeOutcome out = resolve_feedback(oracle, poll, clock);
    CHECK(out.status == ProbeOutcome::Status::Accepted);
    CHECK(clock.now_ms() >= decide_at);
    CHECK(clock.now_ms() < decide_at + 10'000);

    // Window expiry without appearance reads as a silent ignore.
    SimulatedClock clock2;
    auto never = []() -> std::optional<ProbeOutcome> { return std::nullopt; };
    ProbeOutcome ignored = resolve_feedback(oracle, never, clock2);
    CHECK(ignored.status == ProbeOutcome::Status::Rejected);
    CHECK(ignored.detail == "silent-ignore");
    CHECK(clock2.now_ms() == 480'000);

    // Zero window with an instant decision resolves immediately.
    SimulatedClock clock3;
    FeedbackOracle instant;
    instant.pending_window_ms = 0;
    auto ready = []() -> std::optional<ProbeOutcome> {
        return ProbeOutcome::make(ProbeOutcome::Status::Accepted);
    };
    CHECK(resolve_feedback(instant, ready, clock3).accepted());
    CHECK(clock3.now_ms() == 0);

    auto broken = []() -> std::optional<ProbeOutcome> {
        throw std::runtime_error("socket down");
    };
    SimulatedClock clock4;
    CHECK_THROWS_AS(resolve_feedback(oracle, broken, clock4), Error);
}
