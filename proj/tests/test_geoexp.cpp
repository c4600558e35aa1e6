#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "bprobe/error.hpp"
#include "bprobe/geoexp.hpp"
#include "bprobe/harness/services.hpp"

using namespace bprobe;
using namespace bprobe::geo;

namespace {

GeoProbe range_checking_probe() {
    return [](const GeoPoint& p) {
        return p.in_range()
                   ? ProbeOutcome::make(ProbeOutcome::Status::Accepted)
                   : ProbeOutcome::make(ProbeOutcome::Status::Rejected);
    };
}

GeoProbe accept_everything() {
    return [](const GeoPoint&) {
        return ProbeOutcome::make(ProbeOutcome::Status::Accepted);
    };
}

/// ce_prec hooks bound to a live location service. Identities rotate
/// every 40 adds so per-identity request caps stay out of the way (the
/// campaign wiring does the same through the session scheduler).
struct PoiBackend {
    harness::LocationService service;
    std::int64_t adds = 0;
    harness::CallerId owner;
    std::int64_t last_id = 0;

    explicit PoiBackend(harness::LocationRules rules) : service(rules) {}

    harness::CallerId current() {
        std::string tag = std::to_string(adds / 40);
        return harness::CallerId{"reg-" + tag, "user-" + tag};
    }

    PoiProbe hooks() {
        PoiProbe p;
        p.add = [this](const GeoPoint& point) {
            harness::CallerId who = current();
            ++adds;
            harness::AddPoiResult res = service.add(who, point);
            if (res.outcome.accepted()) {
                last_id = res.poi_id;
                owner = who;
            }
            return res.outcome;
        };
        p.delete_last_accepted = [this] {
            if (last_id) service.remove(owner, last_id);
            last_id = 0;
        };
        return p;
    }
};

} // namespace

TEST_CASE("ce_o: conforming targets reject every out-of-range probe") {
    GeoCampaignResult r = ce_o(range_checking_probe());
    CHECK(r.accepted_count == 0);
    CHECK(r.rejected_count == static_cast<int>(r.probes.size()));
    // Every probe it issues lies outside the valid range by construction.
    for (const auto& [p, o] : r.probes) CHECK_FALSE(p.in_range());
    // Both immediate out-of-range neighbours get probed.
    bool saw_181 = false;
    for (const auto& [p, o] : r.probes)
        if (p.lon_scaled() == 181 && p.places() == 0) saw_181 = true;
    CHECK(saw_181);
}

TEST_CASE("ce_o: a non-validating target is reported, growth is capped") {
    GeoCampaignResult r = ce_o(accept_everything());
    CHECK(r.accepted_count > 0);
    CHECK_FALSE(r.notes.empty());
    for (const auto& [p, o] : r.probes) {
        CHECK(std::llabs(p.lon_scaled()) <= 1440);
        CHECK(std::llabs(p.lat_scaled()) <= 720);
    }
}

TEST_CASE("ce_axis: full integer sweeps with both orderings") {
    GeoCampaignResult lon = ce_axis(Axis::Long, 1, range_checking_probe());
    CHECK(lon.probes.size() == 361);
    CHECK(lon.accepted_count == 361);
    CHECK(lon.probes[0].first.lon_scaled() == 0);
    CHECK(lon.probes[1].first.lon_scaled() == 1);
    CHECK(lon.probes[2].first.lon_scaled() == -1);

    AxisSweepOptions sequential;
    sequential.interleave = false;
    GeoCampaignResult lat =
        ce_axis(Axis::Lat, 1, range_checking_probe(), sequential);
    CHECK(lat.probes.size() == 181);
    std::set<std::int64_t> values;
    for (const auto& [p, o] : lat.probes) values.insert(p.lat_scaled());
    CHECK(values.size() == 181);
    CHECK(*values.begin() == -90);
    CHECK(*values.rbegin() == 90);

    CHECK_THROWS_AS(ce_axis(Axis::Long, 91, range_checking_probe()), Error);
}

TEST_CASE("ce_2d: probe counts follow the grid arithmetic for every step") {
    GeoCampaignResult r5 = ce_2d(5, accept_everything());
    CHECK(r5.probes.size() == 2701);

    GeoCampaignResult r90 = ce_2d(90, accept_everything());
    CHECK(r90.probes.size() == 15);

    for (int step : {1, 2, 3, 4, 5, 6, 9, 10, 12, 15, 18, 20, 30, 36, 45, 60,
                     90, 180}) {
        GeoCampaignResult r = ce_2d(step, accept_everything());
        std::size_t expected = static_cast<std::size_t>(360 / step + 1) *
                               static_cast<std::size_t>(180 / step + 1);
        REQUIRE(r.probes.size() == expected);
        REQUIRE(r.accepted_count + r.rejected_count + r.rate_limited_count ==
                static_cast<int>(r.probes.size()));
    }

    CHECK_THROWS_AS(ce_2d(7, accept_everything()), Error);
    CHECK_THROWS_AS(ce_2d(0, accept_everything()), Error);
}

TEST_CASE("ce_prec: toifi-style rules give seven places, free separation") {
    PoiBackend backend(harness::LocationRules::toifi());
    PrecisionReport r = ce_prec(GeoPoint::parse("1.0", "1.0"), 9,
                                backend.hooks());
    CHECK(r.max_places == 7);
    CHECK(r.min_separation_lon_nano == 100); // one grid unit at 7 places
    CHECK(r.min_separation_lat_nano == 100);
}

TEST_CASE("ce_prec: police-style rules give five places and 0.002 degrees") {
    PoiBackend backend(harness::LocationRules::police());
    PrecisionReport r = ce_prec(GeoPoint::parse("1.0", "1.0"), 7,
                                backend.hooks());
    CHECK(r.max_places == 5);
    CHECK(r.min_separation_lon_nano == 2'000'000); // exactly 0.002 degrees
    CHECK(r.min_separation_lat_nano == 2'000'000);
    CHECK(r.min_separation_nano() == 2'000'000);
}

TEST_CASE("ce_prec: unconstrained target accepts the whole starting level") {
    PoiBackend backend(harness::LocationRules::toifi());
    backend.service.disable_validation();
    PrecisionReport r = ce_prec(GeoPoint::parse("1.0", "1.0"), 6,
                                backend.hooks());
    CHECK(r.max_places == 6);
    // 100 combinations at the starting level, all accepted.
    CHECK(r.trace.accepted_count >= 100);
}

TEST_CASE("ce_prec: probes stay inside the origin's unit cell") {
    PoiBackend backend(harness::LocationRules::police());
    PrecisionReport r = ce_prec(GeoPoint::parse("1.0", "1.0"), 7,
                                backend.hooks());
    for (const auto& [p, o] : r.trace.probes) {
        CHECK(p.lon_nano() >= 1'000'000'000);
        CHECK(p.lon_nano() < 2'000'000'000);
        CHECK(p.lat_nano() >= 1'000'000'000);
        CHECK(p.lat_nano() < 2'000'000'000);
    }
}

TEST_CASE("gps timeseries: 18 km at 12 km/h gives 90 virtual minutes") {
    // Meridian leg sized to 18 km on the planar approximation.
    Route route;
    route.waypoints.push_back(GeoPoint::parse("0.0", "0.0"));
    route.waypoints.push_back(GeoPoint::parse("0.0", "0.161696011"));
    double length = route.length_m();
    CHECK(length == doctest::Approx(18'000.0).epsilon(1e-6));

    std::vector<GpsSample> samples = gen_gps_timeseries(route, 12.0, 1'000);
    CHECK(samples.size() == 5'401);
    CHECK(samples.back().t_ms == 5'400'000); // 90 virtual minutes
    CHECK(samples.front().t_ms == 0);

    // Constant speed between regular samples, within 0.1%.
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
        double d = planar_distance_m(samples[i - 1].point, samples[i].point);
        double dt_h = (samples[i].t_ms - samples[i - 1].t_ms) / 3'600'000.0;
        CHECK(d / dt_h / 1000.0 == doctest::Approx(12.0).epsilon(0.001));
    }

    // Samples sit on the polyline (fixed longitude here) and cover it.
    double cumulative = 0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        CHECK(samples[i].point.lon_nano() == 0);
        CHECK(samples[i].t_ms > samples[i - 1].t_ms);
        cumulative += planar_distance_m(samples[i - 1].point, samples[i].point);
    }
    CHECK(cumulative == doctest::Approx(length).epsilon(1e-4));
    CHECK(samples.back().point.lat_nano() ==
          route.waypoints.back().lat_nano());
}

TEST_CASE("gps timeseries: a jet-speed ride covers the route in ~70 s") {
    Route route;
    route.waypoints.push_back(GeoPoint::parse("0.0", "0.0"));
    route.waypoints.push_back(GeoPoint::parse("0.0", "0.161696011"));
    std::vector<GpsSample> samples = gen_gps_timeseries(route, 925.4, 1'000);
    CHECK(samples.back().t_ms == doctest::Approx(70'000).epsilon(0.01));
}

TEST_CASE("gps timeseries: degenerate inputs raise errors") {
    Route dot;
    dot.waypoints.push_back(GeoPoint::parse("1.0", "1.0"));
    CHECK_THROWS_AS(gen_gps_timeseries(dot, 12.0, 1'000), Error);

    Route good;
    good.waypoints.push_back(GeoPoint::parse("0.0", "0.0"));
    good.waypoints.push_back(GeoPoint::parse("0.0", "0.1"));
    CHECK_THROWS_AS(gen_gps_timeseries(good, 0.0, 1'000), Error);
    CHECK_THROWS_AS(gen_gps_timeseries(good, 12.0, 0), Error);
}

TEST_CASE("geo campaigns are pure given the backend state and seed") {
    auto run = [] {
        PoiBackend backend(harness::LocationRules::police());
        return ce_prec(GeoPoint::parse("1.0", "1.0"), 7, backend.hooks());
    };
    PrecisionReport a = run();
    PrecisionReport b = run();
    CHECK(a.max_places == b.max_places);
    CHECK(a.min_separation_lon_nano == b.min_separation_lon_nano);
    REQUIRE(a.trace.probes.size() == b.trace.probes.size());
    for (std::size_t i = 0; i < a.trace.probes.size(); ++i) {
        CHECK(a.trace.probes[i].first == b.trace.probes[i].first);
        CHECK(a.trace.probes[i].second.status ==
              b.trace.probes[i].second.status);
    }
}
