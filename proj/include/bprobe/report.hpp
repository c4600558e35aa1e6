#pragma once

#include <string>
#include <vector>

#include "bprobe/config.hpp"
#include "bprobe/defense.hpp"
#include "bprobe/geoexp.hpp"
#include "bprobe/nve.hpp"
#include "bprobe/session.hpp"

namespace bprobe {

/// Per-category acceptance tallies for a text-strategy run.
struct PostRunResult {
    std::string strategy;
    struct Row {
        PostCategory category;
        int accepted = 0;
        int submitted = 0;
    };
    std::vector<Row> rows;
    int blocked_identities = 0;
};

struct TransitSweepResult {
    std::vector<std::int64_t> speeds_tenths;
    std::vector<bool> self_accepted;
    std::vector<bool> observer_affected;
    int accepted_count = 0;
};

/// Everything one campaign produced; serializes deterministically
/// (ordered keys, fixed formatting) so identical configs re-produce
/// byte-identical files.
struct ReportBundle {
    CampaignConfig config;

    std::vector<std::pair<std::string, nve::BoundaryReport>> boundaries;
    std::vector<geo::GeoCampaignResult> geo_results;
    std::vector<geo::PrecisionReport> precision_reports;
    std::vector<PostRunResult> post_results;
    std::vector<TransitSweepResult> transit_results;
    std::vector<defense::ReductionReport> reductions;

    session::SessionLog log;

    std::string to_json() const;

    /// Writes <prefix>.json, <prefix>.session.jsonl and, for geo
    /// campaigns, <prefix>.<strategy>.csv. Returns written paths.
    std::vector<std::string> write(const std::string& prefix) const;
};

std::string boundary_report_to_json(const nve::BoundaryReport& r);

} // namespace bprobe
