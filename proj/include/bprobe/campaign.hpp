#pragma once

#include <memory>
#include <string>

#include "bprobe/config.hpp"
#include "bprobe/harness/target.hpp"
#include "bprobe/report.hpp"

namespace bprobe {

struct CampaignRun {
    ReportBundle bundle;
    bool oracle_inconsistent = false;
};

/// Runs one campaign against an externally supplied target (shared by the
/// CLI and the acceptance tests).
CampaignRun run_campaign(const CampaignConfig& cfg, harness::TargetApi& target);

/// Convenience: builds the in-process harness named by the config's
/// target spec, runs, returns the bundle. Http-mode configs connect to
/// the configured URL instead.
CampaignRun run_campaign(const CampaignConfig& cfg);

/// In-process harness construction from a campaign target spec.
std::unique_ptr<harness::InProcessTarget> make_inprocess_target(
    const TargetSpec& spec);

} // namespace bprobe
