#include "bprobe/geoexp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bprobe/error.hpp"
#include "bprobe/nve.hpp"

namespace bprobe::geo {

void GeoCampaignResult::record(const GeoPoint& p, const ProbeOutcome& o) {
    probes.emplace_back(p, o);
    switch (o.status) {
        case ProbeOutcome::Status::Accepted: ++accepted_count; break;
        case ProbeOutcome::Status::RateLimited: ++rate_limited_count; break;
        default: ++rejected_count; break;
    }
}

std::string GeoCampaignResult::to_csv() const {
    std::ostringstream out;
    out << "lon,lat,status\n";
    for (const auto& [p, o] : probes)
        out << p.lon_text() << "," << p.lat_text() << ","
            << outcome_status_name(o.status) << "\n";
    return out.str();
}

GeoCampaignResult ce_o(const GeoProbe& probe) {
    GeoCampaignResult result;
    result.strategy = "ce-o";

    struct Edge {
        bool lon_axis;
        std::int64_t boundary;
        int direction;
        std::int64_t fixed;
    };
    const Edge edges[] = {
        {true, 180, +1, 1},
        {true, -180, -1, 1},
        {false, 90, +1, 1},
        {false, -90, -1, 1},
    };

    for (const Edge& e : edges) {
        auto scalar_probe = [&](std::int64_t v) {
            GeoPoint p = e.lon_axis ? GeoPoint::from_degrees(v, e.fixed)
                                    : GeoPoint::from_degrees(e.fixed, v);
            ProbeOutcome o = probe(p);
            result.record(p, o);
            return o;
        };
        nve::NumericDomain d;
        d.x0 = e.boundary;
        d.step = 1;
        d.direction = e.direction;
        d.hard_cap = e.boundary * 8; // stop runaway growth on lax targets
        d.trust_initial = true;      // the boundary itself is in range
        nve::BoundaryReport r = nve::explore(d, scalar_probe,
                                             nve::RefineMode::Linear,
                                             nve::ConfirmPolicy::none());
        if (r.open_boundary)
            result.notes.push_back(
                std::string(e.lon_axis ? "lon" : "lat") +
                " out-of-range values accepted up to the exploration cap");
    }
    return result;
}

GeoCampaignResult ce_axis(Axis axis, std::int64_t fixed_deg,
                          const GeoProbe& probe,
                          const AxisSweepOptions& opts) {
    const std::int64_t limit = axis == Axis::Long ? 180 : 90;
    const std::int64_t fixed_limit = axis == Axis::Long ? 90 : 180;
    if (fixed_deg < -fixed_limit || fixed_deg > fixed_limit)
        throw Error(ErrorCode::ConfigSemantic,
                    "fixed coordinate out of range");

    GeoCampaignResult result;
    result.strategy = axis == Axis::Long ? "ce-long" : "ce-lat";

    auto run = [&](std::int64_t v) {
        GeoPoint p = axis == Axis::Long
                         ? GeoPoint::from_degrees(v, fixed_deg)
                         : GeoPoint::from_degrees(fixed_deg, v);
        result.record(p, probe(p));
    };

    if (opts.interleave) {
        run(0);
        for (std::int64_t v = 1; v <= limit; ++v) {
            run(v);
            run(-v);
        }
    } else {
        for (std::int64_t v = 0; v <= limit; ++v) run(v);
        for (std::int64_t v = -1; v >= -limit; --v) run(v);
    }
    return result;
}

GeoCampaignResult ce_2d(int step_deg, const GeoProbe& probe) {
    if (step_deg <= 0 || 360 % step_deg != 0 || 180 % step_deg != 0)
        throw Error(ErrorCode::ConfigSemantic,
                    "grid step must divide 360 and 180");

    GeoCampaignResult result;
    result.strategy = "ce-2d";
    for (std::int64_t lat = -90; lat <= 90; lat += step_deg)
        for (std::int64_t lon = -180; lon <= 180; lon += step_deg) {
            GeoPoint p = GeoPoint::from_degrees(lon, lat);
            result.record(p, probe(p));
        }
    return result;
}

std::int64_t PrecisionReport::min_separation_nano() const {
    if (min_separation_lon_nano == 0) return min_separation_lat_nano;
    if (min_separation_lat_nano == 0) return min_separation_lon_nano;
    return std::min(min_separation_lon_nano, min_separation_lat_nano);
}

namespace {

constexpr std::int64_t kNanoPow[10] = {
    1000000000, 100000000, 10000000, 1000000, 100000,
    10000,      1000,      100,      10,      1};

/// Smallest k >= 1 with an accepted probe at origin + k grid units along
/// one axis, by doubling then bisection; the anchor POI stays in place so
/// proximity rules see a co-existing neighbour.
std::int64_t min_gap_units(const GeoPoint& origin, bool lon_axis, int places,
                           const PoiProbe& probe,
                           GeoCampaignResult& trace) {
    GeoPoint base = origin.at_places(places);
    auto try_gap = [&](std::int64_t k) {
        GeoPoint p = lon_axis ? base.offset(k, 0) : base.offset(0, k);
        ProbeOutcome o = probe.add(p);
        trace.record(p, o);
        if (o.accepted()) probe.delete_last_accepted();
        return o.accepted();
    };

    if (try_gap(1)) return 1;

    std::int64_t lo = 1; // rejected
    std::int64_t hi = 2;
    while (!try_gap(hi)) {
        lo = hi;
        if (hi > (1LL << 40))
            return 0; // nothing accepted; separation undetermined
        hi *= 2;
    }
    while (hi - lo > 1) {
        std::int64_t mid = lo + (hi - lo) / 2;
        if (try_gap(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

} // namespace

PrecisionReport ce_prec(const GeoPoint& origin, int start_places,
                        const PoiProbe& probe) {
    if (!origin.in_range())
        throw Error(ErrorCode::ConfigSemantic, "origin out of range");
    if (start_places < 1 || start_places > GeoPoint::kMaxPlaces)
        throw Error(ErrorCode::ConfigSemantic, "start_places must be in 1..9");

    PrecisionReport report;
    report.trace.strategy = "ce-prec";

    // Precision stage: at each level probe the 100 last-digit combinations,
    // removing each accepted PoI so proximity rules cannot mask precision
    // rules. Descend whenever a failure follows a success.
    int places = start_places;
    while (places >= 1) {
        GeoPoint base = origin.at_places(places);
        bool saw_success = false;
        bool failure_after_success = false;
        int accepted = 0;
        for (int i = 0; i < 10 && !failure_after_success; ++i) {
            for (int j = 0; j < 10 && !failure_after_success; ++j) {
                GeoPoint p = base.offset(i, j);
                ProbeOutcome o = probe.add(p);
                report.trace.record(p, o);
                if (o.accepted()) {
                    probe.delete_last_accepted();
                    saw_success = true;
                    ++accepted;
                } else if (saw_success) {
                    failure_after_success = true;
                }
            }
        }
        if (!failure_after_success && accepted == 100) {
            report.max_places = places;
            break;
        }
        --places;
    }
    if (places < 1) {
        report.max_places = 0;
        return report;
    }

    // Separation stage: anchor a PoI at the origin and measure the
    // smallest accepted gap per axis on the max_places grid.
    GeoPoint anchor = origin.at_places(report.max_places);
    ProbeOutcome anchored = probe.add(anchor);
    report.trace.record(anchor, anchored);
    if (anchored.accepted()) {
        std::int64_t unit = kNanoPow[report.max_places];
        std::int64_t lon_units =
            min_gap_units(origin, true, report.max_places, probe, report.trace);
        std::int64_t lat_units =
            min_gap_units(origin, false, report.max_places, probe, report.trace);
        report.min_separation_lon_nano = lon_units * unit;
        report.min_separation_lat_nano = lat_units * unit;
        probe.delete_last_accepted(); // remove the anchor
    }
    return report;
}

double Route::length_m() const {
    if (waypoints.size() < 2)
        throw Error(ErrorCode::EmptyRoute, "route needs at least two points");
    double total = 0.0;
    for (std::size_t i = 1; i < waypoints.size(); ++i)
        total += planar_distance_m(waypoints[i - 1], waypoints[i]);
    return total;
}

std::vector<GpsSample> gen_gps_timeseries(const Route& route, double speed_kmh,
                                          std::int64_t interval_ms) {
    if (speed_kmh <= 0.0)
        throw Error(ErrorCode::ConfigSemantic, "speed must be positive");
    if (interval_ms <= 0)
        throw Error(ErrorCode::ConfigSemantic, "interval must be positive");
    double total_m = route.length_m(); // throws EmptyRoute

    // Cumulative segment lengths for interpolation.
    std::vector<double> cum{0.0};
    for (std::size_t i = 1; i < route.waypoints.size(); ++i)
        cum.push_back(cum.back() + planar_distance_m(route.waypoints[i - 1],
                                                     route.waypoints[i]));

    const double speed_m_per_ms = speed_kmh * 1000.0 / 3'600'000.0;
    const double total_ms = total_m / speed_m_per_ms;

    auto position_at = [&](double dist_m) {
        if (dist_m >= total_m) return route.waypoints.back().at_places(9);
        std::size_t seg = 1;
        while (seg < cum.size() && cum[seg] < dist_m) ++seg;
        const GeoPoint& a = route.waypoints[seg - 1];
        const GeoPoint& b = route.waypoints[seg];
        double seg_len = cum[seg] - cum[seg - 1];
        double t = seg_len <= 0.0 ? 0.0 : (dist_m - cum[seg - 1]) / seg_len;
        std::int64_t lon =
            a.lon_nano() +
            static_cast<std::int64_t>(std::llround(
                t * static_cast<double>(b.lon_nano() - a.lon_nano())));
        std::int64_t lat =
            a.lat_nano() +
            static_cast<std::int64_t>(std::llround(
                t * static_cast<double>(b.lat_nano() - a.lat_nano())));
        return GeoPoint::from_scaled(lon, lat, 9);
    };

    std::vector<GpsSample> samples;
    for (std::int64_t t = 0;; t += interval_ms) {
        double dist = speed_m_per_ms * static_cast<double>(t);
        if (dist >= total_m) break;
        samples.push_back(GpsSample{t, position_at(dist)});
    }
    // Final sample exactly at the route end.
    std::int64_t t_end = static_cast<std::int64_t>(std::ceil(total_ms));
    if (!samples.empty() && samples.back().t_ms >= t_end)
        t_end = samples.back().t_ms + 1;
    samples.push_back(GpsSample{t_end, route.waypoints.back().at_places(9)});
    return samples;
}

} // namespace bprobe::geo
