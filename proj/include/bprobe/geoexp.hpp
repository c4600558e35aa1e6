#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bprobe/geopoint.hpp"
#include "bprobe/value.hpp"

namespace bprobe::geo {

using GeoProbe = std::function<ProbeOutcome(const GeoPoint&)>;

struct GeoCampaignResult {
    std::string strategy;
    std::vector<std::pair<GeoPoint, ProbeOutcome>> probes;
    int accepted_count = 0;
    int rejected_count = 0;
    int rate_limited_count = 0;
    std::vector<std::string> notes;

    void record(const GeoPoint& p, const ProbeOutcome& o);

    /// lon,lat,status rows, scatter-plot ready.
    std::string to_csv() const;
};

enum class Axis { Long, Lat };

struct AxisSweepOptions {
    /// 0, +1, -1, +2, -2, ... when true; 0..max then -1..-max otherwise.
    bool interleave = true;
};

/// Out-of-range exploration: doubling outward from each of the four
/// coordinate boundaries (s=1, integer degrees), capped at 8x the boundary
/// so a non-validating target cannot cause runaway growth.
GeoCampaignResult ce_o(const GeoProbe& probe);

/// Full integer sweep of one axis with the other held fixed
/// (361 probes for longitude, 181 for latitude).
GeoCampaignResult ce_axis(Axis axis, std::int64_t fixed_deg,
                          const GeoProbe& probe,
                          const AxisSweepOptions& opts = {});

/// Whole-grid sweep: lon in {-180..180 step}, lat in {-90..90 step}.
/// step must divide 360 and 180. Identity rotation and inter-probe delay
/// live in the probe callback (session wiring).
GeoCampaignResult ce_2d(int step_deg, const GeoProbe& probe);

struct PrecisionReport {
    int max_places = 0;
    /// Smallest accepted gap between co-existing PoIs per axis,
    /// nano-degrees; 0 when not determined.
    std::int64_t min_separation_lon_nano = 0;
    std::int64_t min_separation_lat_nano = 0;
    GeoCampaignResult trace;

    std::int64_t min_separation_nano() const;
};

/// Hooks ce_prec needs beyond plain probing: the precision stage removes
/// each accepted PoI before the next probe (so the separation rule cannot
/// shadow the precision rule), the separation stage keeps an anchor.
struct PoiProbe {
    GeoProbe add;
    std::function<void()> delete_last_accepted;
};

/// Decimal-precision exploration: at each precision level probes the 100
/// last-digit combinations, descending a level whenever a failure follows
/// a success; then measures the smallest co-existing gap on the final
/// grid by doubling+bisection per axis.
PrecisionReport ce_prec(const GeoPoint& origin, int start_places,
                        const PoiProbe& probe);

struct GpsSample {
    std::int64_t t_ms = 0;
    GeoPoint point;
};

struct Route {
    std::vector<GeoPoint> waypoints;

    /// Equirectangular length in meters. Throws Error{EmptyRoute} for
    /// routes with fewer than two points.
    double length_m() const;
};

/// Positions along the polyline at constant speed, one sample per
/// interval, final sample exactly at the route end.
std::vector<GpsSample> gen_gps_timeseries(const Route& route,
                                          double speed_kmh,
                                          std::int64_t interval_ms);

} // namespace bprobe::geo
