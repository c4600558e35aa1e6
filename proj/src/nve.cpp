#include "bprobe/nve.hpp"

#include <algorithm>
#include <cstdlib>

#include "bprobe/error.hpp"

namespace bprobe::nve {

namespace {

constexpr std::int64_t kInt64Half = (1LL << 62);

struct Tracer {
    const Probe& probe;
    std::vector<TraceEntry>& trace;
    const NowFn& now;

    ProbeOutcome::Status operator()(std::int64_t value) {
        ProbeOutcome out = probe(value);
        std::int64_t t =
            now ? now() : static_cast<std::int64_t>(trace.size());
        trace.push_back(TraceEntry{value, out.status, t});
        return out.status;
    }
};

bool is_accept(ProbeOutcome::Status s) {
    return s == ProbeOutcome::Status::Accepted;
}

/// Candidate + n_extra probes stepping further out (step 0 re-probes the
/// candidate itself); the rejection stands when at least fail_threshold of
/// the candidate+extras failed. Returns the furthest accepted extra (if
/// any) through accepted_beyond. Extras past the hard cap are not issued
/// and count as failures.
bool confirm_rejection(std::int64_t candidate, int direction,
                       const ConfirmPolicy& confirm, Tracer& probe,
                       std::optional<std::int64_t> cap,
                       std::optional<std::int64_t>& accepted_beyond) {
    accepted_beyond.reset();
    if (!confirm.active()) return true;
    int failures = 1; // the candidate itself
    for (int i = 1; i <= confirm.n_extra; ++i) {
        std::int64_t v = candidate + direction * confirm.step * i;
        bool outside_cap =
            cap && (direction > 0 ? v > *cap : v < *cap);
        if (!outside_cap && is_accept(probe(v))) {
            if (!accepted_beyond || std::llabs(v - candidate) >
                                        std::llabs(*accepted_beyond - candidate))
                accepted_beyond = v;
        } else {
            ++failures;
        }
    }
    return failures >= confirm.fail_threshold;
}

} // namespace

void NumericDomain::validate() const {
    if (step <= 0)
        throw Error(ErrorCode::ConfigSemantic, "step must be positive");
    if (direction != 1 && direction != -1)
        throw Error(ErrorCode::ConfigSemantic, "direction must be +1 or -1");
    if (hard_cap) {
        if (direction > 0 && *hard_cap <= x0)
            throw Error(ErrorCode::ConfigSemantic,
                        "hard_cap must lie beyond x0 in the exploration direction");
        if (direction < 0 && *hard_cap >= x0)
            throw Error(ErrorCode::ConfigSemantic,
                        "hard_cap must lie beyond x0 in the exploration direction");
    }
}

void ConfirmPolicy::validate() const {
    if (n_extra < 0)
        throw Error(ErrorCode::ConfigSemantic, "confirm extras must be >= 0");
    if (fail_threshold > n_extra + 1)
        throw Error(ErrorCode::ConfigSemantic,
                    "confirm fail threshold exceeds trial count");
}

const char* refine_mode_name(RefineMode m) {
    switch (m) {
        case RefineMode::Linear: return "linear";
        case RefineMode::Bisect: return "bisect";
        case RefineMode::Auto: return "auto";
    }
    return "auto";
}

RefineMode refine_mode_from_name(const std::string& name) {
    if (name == "linear") return RefineMode::Linear;
    if (name == "bisect") return RefineMode::Bisect;
    if (name == "auto") return RefineMode::Auto;
    throw Error(ErrorCode::ConfigSemantic, "unknown refine mode: " + name);
}

namespace {

/// Next value on the doubling schedule. Magnitude doubles moving away
/// from zero and halves moving toward it; from zero the schedule seeds at
/// one grid step (zero is a doubling fixed point).
std::optional<std::int64_t> grow(std::int64_t v, const NumericDomain& d) {
    std::int64_t next;
    if (v == 0) {
        next = d.direction * d.step;
    } else if ((v > 0) == (d.direction > 0)) {
        if (std::llabs(v) >= kInt64Half) return std::nullopt; // overflow guard
        next = v * 2;
    } else {
        next = v / 2; // toward zero, truncating on the grid
        if (next == v) return std::nullopt;
    }
    return next;
}

} // namespace

GeometricResult geometric_phase(const NumericDomain& d, const Probe& probe,
                                const ConfirmPolicy& confirm,
                                std::vector<TraceEntry>& trace,
                                const NowFn& now) {
    d.validate();
    confirm.validate();
    Tracer tracer{probe, trace, now};

    GeometricResult result;
    std::int64_t last_success = d.x0;
    bool initial_verified = d.trust_initial;
    std::size_t before = trace.size();

    std::int64_t current = d.x0;
    while (true) {
        std::optional<std::int64_t> next = grow(current, d);
        bool capped = false;
        if (!next) {
            next = d.hard_cap ? *d.hard_cap : kInt64Half * d.direction;
            capped = true;
        } else if (d.hard_cap &&
                   ((d.direction > 0 && *next >= *d.hard_cap) ||
                    (d.direction < 0 && *next <= *d.hard_cap))) {
            next = *d.hard_cap;
            capped = true;
        }

        ProbeOutcome::Status s = tracer(*next);
        if (is_accept(s)) {
            last_success = *next;
            initial_verified = true;
            if (capped) {
                result.last_success = last_success;
                result.first_fail = last_success;
                result.cap_accepted = true;
                result.probes = static_cast<int>(trace.size() - before);
                return result;
            }
            current = *next;
            continue;
        }

        // Rejection. Confirm it if the policy is active; a flaky rejection
        // resumes growth from the furthest accepted confirmation probe.
        std::optional<std::int64_t> beyond;
        if (!confirm_rejection(*next, d.direction, confirm, tracer, d.hard_cap,
                               beyond)) {
            last_success = *beyond;
            initial_verified = true;
            current = *beyond;
            continue;
        }

        if (!initial_verified) {
            // First grown value rejected and x0 was never vouched by a
            // probe: check x0 itself before bracketing.
            if (!is_accept(tracer(d.x0)))
                throw Error(ErrorCode::InitialRejected,
                            "initial value " + std::to_string(d.x0) +
                                " rejected by the oracle");
        }
        result.last_success = last_success;
        result.first_fail = *next;
        result.probes = static_cast<int>(trace.size() - before);
        return result;
    }
}

BoundaryReport linear_refine(std::int64_t last_success, std::int64_t first_fail,
                             std::int64_t step, int direction,
                             const Probe& probe, const NowFn& now) {
    BoundaryReport report;
    report.refine_mode = "linear";
    report.step = step;
    report.direction = direction;

    Tracer tracer{probe, report.trace, now};

    std::int64_t last_accepted = last_success;
    std::int64_t first_rejected = first_fail;

    // Walk until the next unsuccessful injection; acceptance observed
    // beyond that stop (by confirmation probes in other phases) is flagged
    // by explore() as an oracle inconsistency.
    std::int64_t v = last_success + direction * step;
    while (direction > 0 ? v < first_fail : v > first_fail) {
        ProbeOutcome::Status s = tracer(v);
        if (is_accept(s)) {
            last_accepted = v;
        } else {
            first_rejected = v;
            break;
        }
        v += direction * step;
    }

    report.last_accepted = last_accepted;
    report.first_rejected = first_rejected;
    report.probes_used = static_cast<int>(report.trace.size());
    return report;
}

BoundaryReport bisect_refine(std::int64_t last_success, std::int64_t first_fail,
                             std::int64_t step, int direction,
                             const Probe& probe, const ConfirmPolicy& confirm,
                             int probe_budget, const NowFn& now,
                             std::optional<std::int64_t> hard_cap) {
    confirm.validate();
    BoundaryReport report;
    report.refine_mode = "bisect";
    report.step = step;
    report.direction = direction;

    Tracer tracer{probe, report.trace, now};

    // Work in grid steps from last_success toward first_fail.
    std::int64_t k_lo = 0;
    std::int64_t k_hi = (first_fail - last_success) / (direction * step);
    auto value_at = [&](std::int64_t k) {
        return last_success + direction * step * k;
    };

    while (k_hi - k_lo > 1) {
        if (static_cast<int>(report.trace.size()) >= probe_budget)
            throw Error(ErrorCode::OracleExhausted,
                        "probe budget exhausted before bisection converged");
        std::int64_t mid = k_lo + (k_hi - k_lo) / 2;
        ProbeOutcome::Status s = tracer(value_at(mid));
        if (is_accept(s)) {
            k_lo = mid;
            continue;
        }
        std::optional<std::int64_t> beyond;
        if (confirm_rejection(value_at(mid), direction, confirm, tracer,
                              hard_cap, beyond)) {
            k_hi = mid;
        } else {
            // Flaky rejection: an accepted confirmation probe proves
            // acceptance at or beyond the midpoint.
            std::int64_t k_beyond = (*beyond - last_success) / (direction * step);
            k_lo = std::min(std::max(mid, k_beyond), k_hi - 1);
        }
    }

    report.last_accepted = value_at(k_lo);
    report.first_rejected = value_at(k_hi);
    report.probes_used = static_cast<int>(report.trace.size());
    return report;
}

BoundaryReport explore(const NumericDomain& d, const Probe& probe,
                       RefineMode mode, const ConfirmPolicy& confirm,
                       const NowFn& now) {
    d.validate();

    std::vector<TraceEntry> trace;
    GeometricResult g = geometric_phase(d, probe, confirm, trace, now);

    if (g.cap_accepted) {
        BoundaryReport report;
        report.last_accepted = g.last_success;
        report.first_rejected = g.last_success;
        report.open_boundary = true;
        report.refine_mode = "none";
        report.step = d.step;
        report.direction = d.direction;
        report.phase_split = static_cast<int>(trace.size());
        report.trace = std::move(trace);
        report.probes_used = static_cast<int>(report.trace.size());
        report.notes.push_back("hard cap accepted; boundary at or beyond cap");
        return report;
    }

    std::int64_t gap_steps =
        (g.first_fail - g.last_success) / (d.direction * d.step);

    RefineMode chosen = mode;
    if (mode == RefineMode::Auto)
        chosen = gap_steps > 1000 ? RefineMode::Bisect : RefineMode::Linear;

    BoundaryReport refined =
        chosen == RefineMode::Linear
            ? linear_refine(g.last_success, g.first_fail, d.step, d.direction,
                            probe, now)
            : bisect_refine(g.last_success, g.first_fail, d.step, d.direction,
                            probe, confirm, 100'000, now, d.hard_cap);

    BoundaryReport report = refined;
    report.phase_split = static_cast<int>(trace.size());
    if (mode == RefineMode::Auto)
        report.notes.insert(report.notes.begin(),
                            std::string("auto refinement chose ") +
                                refine_mode_name(chosen));
    trace.insert(trace.end(), refined.trace.begin(), refined.trace.end());
    report.trace = std::move(trace);

    // Paper-style probe ledger: when refinement tightened the bracket, the
    // geometric phase's coarse terminal rejection is superseded by the
    // refined first_rejected and drops off the count. The full trace keeps
    // every probe.
    int total = static_cast<int>(report.trace.size());
    if (refined.probes_used > 0 && report.first_rejected != g.first_fail)
        total -= 1;
    report.probes_used = total;

    // A recorded acceptance beyond the reported first rejection means the
    // oracle contradicted the boundary the procedure settled on.
    for (const TraceEntry& e : report.trace) {
        bool beyond = d.direction > 0 ? e.value > report.first_rejected
                                      : e.value < report.first_rejected;
        if (beyond && e.status == ProbeOutcome::Status::Accepted) {
            report.inconsistent_oracle = true;
            report.notes.push_back("acceptance observed beyond " +
                                   std::to_string(report.first_rejected) +
                                   " at " + std::to_string(e.value));
            break;
        }
    }
    return report;
}

} // namespace bprobe::nve
