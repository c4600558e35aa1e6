#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>
#include <vector>

#include "bprobe/error.hpp"
#include "bprobe/nve.hpp"
#include "bprobe/rng.hpp"

using namespace bprobe;
using namespace bprobe::nve;

namespace {

/// Monotone oracle: accept iff x <= boundary. Counts probes.
struct MonotoneOracle {
    std::int64_t boundary;
    int probes = 0;
    std::vector<std::int64_t> values;

    Probe fn() {
        return [this](std::int64_t v) {
            ++probes;
            values.push_back(v);
            return v <= boundary
                       ? ProbeOutcome::make(ProbeOutcome::Status::Accepted)
                       : ProbeOutcome::make(ProbeOutcome::Status::Rejected);
        };
    }
};

/// Accept iff x >= boundary (downward exploration).
struct MonotoneDownOracle {
    std::int64_t boundary;
    int probes = 0;

    Probe fn() {
        return [this](std::int64_t v) {
            ++probes;
            return v >= boundary
                       ? ProbeOutcome::make(ProbeOutcome::Status::Accepted)
                       : ProbeOutcome::make(ProbeOutcome::Status::Rejected);
        };
    }
};

NumericDomain upward(std::int64_t x0, std::int64_t step = 1) {
    NumericDomain d;
    d.x0 = x0;
    d.step = step;
    d.direction = +1;
    return d;
}

// Reference oracle for the doubling phase: enumerate powers of two and
// find the bracketing pair around the boundary.
std::pair<std::int64_t, std::int64_t> doubling_bracket(std::int64_t boundary) {
    std::int64_t v = 1;
    while (v * 2 <= boundary) v *= 2;
    return {v, v * 2};
}

} // namespace

TEST_CASE("geometric phase brackets boundary 140 in 8 doubling probes") {
    MonotoneOracle oracle{140};
    std::vector<TraceEntry> trace;
    GeometricResult g = geometric_phase(upward(1), oracle.fn(),
                                        ConfirmPolicy::none(), trace);
    CHECK(g.last_success == 128);
    CHECK(g.first_fail == 256);
    CHECK(g.probes == 8);
    CHECK(oracle.probes == 8); // x0 itself is vouched, not probed
}

TEST_CASE("geometric phase: immediate failure on the first doubling") {
    MonotoneOracle oracle{1};
    std::vector<TraceEntry> trace;
    GeometricResult g = geometric_phase(upward(1), oracle.fn(),
                                        ConfirmPolicy::none(), trace);
    CHECK(g.last_success == 1);
    CHECK(g.first_fail == 2);
}

TEST_CASE("geometric phase: fitness-scale boundary in 25 probes") {
    // Independent enumeration of the doubling schedule.
    const std::int64_t boundary = 31'622'400;
    auto [expect_last, expect_first] = doubling_bracket(boundary);
    CHECK(expect_last == 16'777'216);
    CHECK(expect_first == 33'554'432);

    MonotoneOracle oracle{boundary};
    std::vector<TraceEntry> trace;
    GeometricResult g = geometric_phase(upward(1), oracle.fn(),
                                        ConfirmPolicy::none(), trace);
    CHECK(g.last_success == expect_last);
    CHECK(g.first_fail == expect_first);
    CHECK(g.probes == 25);
}

TEST_CASE("geometric phase: initial rejection is detected lazily") {
    Probe reject_all = [](std::int64_t) {
        return ProbeOutcome::make(ProbeOutcome::Status::Rejected);
    };
    std::vector<TraceEntry> trace;
    CHECK_THROWS_AS(
        geometric_phase(upward(5), reject_all, ConfirmPolicy::none(), trace),
        Error);
}

TEST_CASE("geometric phase: hard cap accepted is reported, not fatal") {
    MonotoneOracle oracle{1'000'000};
    NumericDomain d = upward(1);
    d.hard_cap = 1000;
    std::vector<TraceEntry> trace;
    GeometricResult g =
        geometric_phase(d, oracle.fn(), ConfirmPolicy::none(), trace);
    CHECK(g.cap_accepted);
    CHECK(g.last_success == 1000);
}

TEST_CASE("linear refine walks 129..141 for boundary 140") {
    MonotoneOracle oracle{140};
    BoundaryReport r = linear_refine(128, 256, 1, +1, oracle.fn());
    CHECK(r.last_accepted == 140);
    CHECK(r.first_rejected == 141);
    CHECK(r.probes_used == 13);
    CHECK(oracle.probes == 13);
}

TEST_CASE("linear refine: zero new probes when the gap is one step") {
    MonotoneOracle oracle{1};
    BoundaryReport r = linear_refine(1, 2, 1, +1, oracle.fn());
    CHECK(r.last_accepted == 1);
    CHECK(r.first_rejected == 2);
    CHECK(r.probes_used == 0);
}

TEST_CASE("bisect refine finds 140 within 8 midpoints") {
    MonotoneOracle oracle{140};
    BoundaryReport r =
        bisect_refine(128, 256, 1, +1, oracle.fn(), ConfirmPolicy::none());
    CHECK(r.last_accepted == 140);
    CHECK(r.first_rejected == 141);
    CHECK(r.probes_used <= 8);
    CHECK(r.probes_used < 13); // beats the linear walk
}

TEST_CASE("bisect refine returns immediately on a one-step interval") {
    MonotoneOracle oracle{100};
    BoundaryReport r =
        bisect_refine(100, 101, 1, +1, oracle.fn(), ConfirmPolicy::none());
    CHECK(r.last_accepted == 100);
    CHECK(r.probes_used == 0);
}

TEST_CASE("explore reproduces the 20-probe hybrid campaign at boundary 140") {
    MonotoneOracle oracle{140};
    BoundaryReport r = explore(upward(1), oracle.fn(), RefineMode::Linear,
                               ConfirmPolicy::none());
    CHECK(r.last_accepted == 140);
    CHECK(r.first_rejected == 141);
    CHECK(r.probes_used == 20);
    CHECK(r.trace.size() == 21); // every issued probe stays on the trace
    CHECK(r.phase_split == 8);
}

TEST_CASE("explore: auto picks bisect for wide gaps, linear for narrow") {
    MonotoneOracle wide{31'622'400};
    BoundaryReport r1 =
        explore(upward(1), wide.fn(), RefineMode::Auto, ConfirmPolicy::none());
    CHECK(r1.last_accepted == 31'622'400);
    CHECK(r1.refine_mode == "bisect");

    MonotoneOracle narrow{140};
    BoundaryReport r2 = explore(upward(1), narrow.fn(), RefineMode::Auto,
                                ConfirmPolicy::none());
    CHECK(r2.refine_mode == "linear");
}

TEST_CASE("explore: downward direction finds a minimum envelope") {
    // Price-style oracle: accept iff 35 <= x <= 800, starting from 349.
    Probe oracle = [](std::int64_t v) {
        return (v >= 35 && v <= 800)
                   ? ProbeOutcome::make(ProbeOutcome::Status::Accepted)
                   : ProbeOutcome::make(ProbeOutcome::Status::Rejected);
    };
    NumericDomain down;
    down.x0 = 349;
    down.step = 1;
    down.direction = -1;
    down.hard_cap = 0;
    BoundaryReport r =
        explore(down, oracle, RefineMode::Auto, ConfirmPolicy::none());
    CHECK(r.last_accepted == 35);
    CHECK(r.first_rejected == 34);

    NumericDomain up;
    up.x0 = 349;
    up.step = 1;
    up.direction = +1;
    BoundaryReport r2 =
        explore(up, oracle, RefineMode::Auto, ConfirmPolicy::none());
    CHECK(r2.last_accepted == 800);
    CHECK(r2.first_rejected == 801);
}

TEST_CASE("explore recovers every boundary exactly (property sweep)") {
    for (std::int64_t b = 1; b <= 10'000; ++b) {
        MonotoneOracle oracle{b};
        BoundaryReport r = explore(upward(1), oracle.fn(), RefineMode::Linear,
                                   ConfirmPolicy::none());
        REQUIRE(r.last_accepted == b);
    }
    // Bisect agrees on a sparser sweep.
    for (std::int64_t b = 1; b <= 10'000; b += 37) {
        MonotoneOracle oracle{b};
        BoundaryReport r = explore(upward(1), oracle.fn(), RefineMode::Bisect,
                                   ConfirmPolicy::none());
        REQUIRE(r.last_accepted == b);
    }
}

TEST_CASE("probe-count ledger matches the closed form for linear mode") {
    // probes_used = floor(log2 B) + (B - 2^floor(log2 B)) + 1 for B >= 2,
    // which reproduces the canonical 20 at B = 140. The full trace is one
    // longer whenever the walk tightened first_rejected.
    for (std::int64_t b = 2; b <= 4'096; ++b) {
        MonotoneOracle oracle{b};
        BoundaryReport r = explore(upward(1), oracle.fn(), RefineMode::Linear,
                                   ConfirmPolicy::none());
        int floor_log2 = static_cast<int>(std::floor(std::log2((double)b)));
        std::int64_t pow2 = std::int64_t{1} << floor_log2;
        int expected = floor_log2 + static_cast<int>(b - pow2) + 1;
        REQUIRE(r.probes_used == expected);
        REQUIRE(static_cast<int>(oracle.probes) ==
                r.probes_used + (r.first_rejected != 2 * pow2 ? 1 : 0));
    }
}

TEST_CASE("no probe ever leaves [x0, hard_cap]") {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        std::int64_t boundary = rng.between(1, 5'000);
        std::int64_t cap = rng.between(boundary + 1, 20'000);
        MonotoneOracle oracle{boundary};
        NumericDomain d = upward(1);
        d.hard_cap = cap;
        ConfirmPolicy confirm{2, 10, 3};
        BoundaryReport r = explore(d, oracle.fn(),
                                   trial % 2 ? RefineMode::Bisect
                                             : RefineMode::Linear,
                                   trial % 2 ? confirm : ConfirmPolicy::none());
        REQUIRE(r.last_accepted == boundary);
        for (std::int64_t v : oracle.values) {
            REQUIRE(v >= 1);
            REQUIRE(v <= cap);
        }
    }
}

TEST_CASE("flaky oracle: confirmed bisect recovers the boundary >= 99%") {
    // False rejections with p = 0.3; re-probe confirmation (step 0) with
    // the 4-extra / 5-failure policy.
    const std::int64_t boundary = 140;
    int exact = 0;
    const int runs = 1000;
    for (int run = 0; run < runs; ++run) {
        Rng noise(splitmix64(0xF1A4 + run));
        Probe flaky = [&](std::int64_t v) {
            bool truth = v <= boundary;
            if (truth && noise.unit() < 0.3) truth = false;
            return truth ? ProbeOutcome::make(ProbeOutcome::Status::Accepted)
                         : ProbeOutcome::make(ProbeOutcome::Status::Rejected);
        };
        ConfirmPolicy confirm{4, 0, 5};
        BoundaryReport r = bisect_refine(128, 256, 1, +1, flaky, confirm);
        if (r.last_accepted == boundary) ++exact;
    }
    CHECK(exact >= 990);
}

TEST_CASE("acceptance beyond the settled rejection flags the oracle") {
    // Accept {x <= 5} plus an island at 10; a lenient 4-of-5 confirmation
    // upholds the rejection at 8 even though 10 answered accepted.
    Probe oracle = [](std::int64_t v) {
        bool ok = v <= 5 || v == 10;
        return ok ? ProbeOutcome::make(ProbeOutcome::Status::Accepted)
                  : ProbeOutcome::make(ProbeOutcome::Status::Rejected);
    };
    ConfirmPolicy lenient{4, 1, 4};
    BoundaryReport r =
        explore(upward(1), oracle, RefineMode::Linear, lenient);
    CHECK(r.last_accepted == 5);
    CHECK(r.inconsistent_oracle);
}

TEST_CASE("domain validation rejects bad parameters") {
    NumericDomain d;
    d.x0 = 1;
    d.step = 0;
    CHECK_THROWS_AS(d.validate(), Error);

    NumericDomain d2 = upward(10);
    d2.hard_cap = 5; // cap behind the start
    CHECK_THROWS_AS(d2.validate(), Error);

    ConfirmPolicy c{2, 10, 4}; // threshold > trials
    CHECK_THROWS_AS(c.validate(), Error);
}
