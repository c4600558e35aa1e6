#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bprobe/harness/rules.hpp"
#include "bprobe/nve.hpp"
#include "bprobe/session.hpp"
#include "bprobe/value.hpp"

namespace bprobe {

enum class TargetMode { InProcess, Http };

struct TargetSpec {
    ServiceKind kind = ServiceKind::Fitness;
    std::string variant;             // strava|fitbit|mapmyrun / toifi|police
    TargetMode mode = TargetMode::InProcess;
    std::string url;                 // when mode == Http
    std::uint64_t harness_seed = 1;
    bool location_validation = true; // harness toggle for misbehaving mode
};

enum class StrategyKind {
    Nve,
    CeO,
    CeLong,
    CeLat,
    Ce2d,
    CePrec,
    Rsg,
    Template,
    Plugin,
    TransitSweep,
    TransitMax,
};

const char* strategy_kind_name(StrategyKind k);
StrategyKind strategy_kind_from_name(const std::string& name);

struct StrategySpec {
    StrategyKind kind = StrategyKind::Nve;

    // nve
    std::string input = "duration"; // duration | distance | price | speed
    std::int64_t x0 = 0;
    std::int64_t step = 1;
    int direction = +1;
    std::optional<std::int64_t> hard_cap;
    nve::RefineMode mode = nve::RefineMode::Auto;
    nve::ConfirmPolicy confirm = nve::ConfirmPolicy::none();

    // pricing
    std::string store;
    std::string item;

    // geo
    std::int64_t fixed_deg = 1;
    int grid_step_deg = 5;
    bool interleave = true;
    std::string origin_lon = "1.0";
    std::string origin_lat = "1.0";
    int start_places = 9;
    bool cleanup = true;       // delete accepted PoIs after recording
    bool warmup_search = false; // no-op search before each injection

    // text
    int count = 100;
    std::string corpus_path;
    std::string wordlist_path;
    std::vector<std::string> plugin_cmd; // external post generator argv

    // transit sweep
    std::int64_t sweep_lo_tenths = 100;
    std::int64_t sweep_hi_tenths = 10'000;
    std::int64_t sweep_step_tenths = 100;

    std::int64_t probe_delay_ms = 0;
};

struct IdentitySpec {
    std::size_t pool_size = 1;
    session::Rotation rotation = session::Rotation::RoundRobin;
};

struct CampaignConfig {
    TargetSpec target;
    StrategySpec strategy;
    IdentitySpec identity;
    std::vector<session::RateLimitPolicy> rate_limits;
    std::uint64_t seed = 0;
    std::string report_path = "report";
    bool wall_clock = false;
};

/// Parses and validates a campaign config document. Syntax errors carry
/// line:col positions; semantic errors name the offending key.
CampaignConfig parse_config(const std::string& text);
CampaignConfig load_config(const std::string& path);

} // namespace bprobe
