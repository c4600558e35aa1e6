#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bprobe/value.hpp"

namespace bprobe::nve {

/// Oracle for one scalar probe. Statuses other than Accepted count as
/// failures for boundary purposes; rate-limit handling lives inside the
/// callback (see session::Scheduler).
using Probe = std::function<ProbeOutcome(std::int64_t)>;

/// Optional time source for trace stamps; defaults to the probe sequence
/// number when absent.
using NowFn = std::function<std::int64_t()>;

struct NumericDomain {
    std::int64_t x0 = 0;
    std::int64_t step = 1; // > 0, same unit as x0
    int direction = +1;    // +1 or -1
    std::optional<std::int64_t> hard_cap;

    /// Skip lazy verification of x0 when the caller knows it is accepted
    /// (e.g. a coordinate boundary that is in range by construction).
    bool trust_initial = false;

    void validate() const; // throws Error{ConfigSemantic}
};

struct ConfirmPolicy {
    int n_extra = 4;
    std::int64_t step = 10;
    int fail_threshold = 5; // failures among {candidate + extras} to confirm

    static ConfirmPolicy none() { return ConfirmPolicy{0, 0, 1}; }
    static ConfirmPolicy standard() { return ConfirmPolicy{4, 10, 5}; }

    bool active() const { return n_extra > 0; }
    void validate() const;
};

struct TraceEntry {
    std::int64_t value = 0;
    ProbeOutcome::Status status = ProbeOutcome::Status::Rejected;
    std::int64_t t_virtual = 0;
};

enum class RefineMode { Linear, Bisect, Auto };

const char* refine_mode_name(RefineMode m);
RefineMode refine_mode_from_name(const std::string& name);

struct BoundaryReport {
    std::int64_t last_accepted = 0;
    std::int64_t first_rejected = 0;

    /// True when the hard cap was probed and still accepted: the boundary
    /// lies at or beyond the cap and first_rejected is meaningless.
    bool open_boundary = false;

    /// True when the linear walk saw an acceptance beyond a rejection;
    /// the walk stops at the first rejection and flags the report.
    bool inconsistent_oracle = false;

    int probes_used = 0;
    int phase_split = 0; // trace index where the geometric phase ended
    std::vector<TraceEntry> trace;

    std::string refine_mode; // "linear" | "bisect" | "none"
    std::int64_t step = 1;
    int direction = +1;
    std::vector<std::string> notes;
};

struct GeometricResult {
    std::int64_t last_success = 0;
    std::int64_t first_fail = 0;
    bool cap_accepted = false;
    int probes = 0; // probes this phase issued
};

/// Doubling phase: grows the magnitude away from zero (or shrinks it
/// toward zero for inward exploration) until a confirmed rejection or the
/// hard cap. x0 itself is vouched by the precondition and only probed
/// lazily when the first grown value rejects. Throws
/// Error{InitialRejected} when that lazy check fails.
GeometricResult geometric_phase(const NumericDomain& d, const Probe& probe,
                                const ConfirmPolicy& confirm,
                                std::vector<TraceEntry>& trace,
                                const NowFn& now = nullptr);

/// Step walk from last_success toward first_fail; stops at the first
/// rejection. probes_used counts only the probes this call issues.
BoundaryReport linear_refine(std::int64_t last_success, std::int64_t first_fail,
                             std::int64_t step, int direction,
                             const Probe& probe, const NowFn& now = nullptr);

/// Repeated halving of [last_success, first_fail]; a rejected midpoint is
/// discarded only after the confirmation policy upholds it. Terminates
/// when the interval width is <= step. Throws Error{OracleExhausted} when
/// probe_budget runs out first.
BoundaryReport bisect_refine(std::int64_t last_success, std::int64_t first_fail,
                             std::int64_t step, int direction,
                             const Probe& probe, const ConfirmPolicy& confirm,
                             int probe_budget = 100'000,
                             const NowFn& now = nullptr,
                             std::optional<std::int64_t> hard_cap = {});

/// Full search: geometric phase plus the chosen refinement. Auto picks
/// Bisect when the bracketed gap exceeds 1000 grid steps, else Linear.
BoundaryReport explore(const NumericDomain& d, const Probe& probe,
                       RefineMode mode = RefineMode::Auto,
                       const ConfirmPolicy& confirm = ConfirmPolicy::none(),
                       const NowFn& now = nullptr);

} // namespace bprobe::nve
