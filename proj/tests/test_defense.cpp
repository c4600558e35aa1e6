#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bprobe/defense.hpp"
#include "bprobe/error.hpp"
#include "bprobe/rng.hpp"

using namespace bprobe;
using namespace bprobe::defense;

namespace {

const std::string kRoadsPath = std::string(BPROBE_DATA_DIR) +
                               "/roads_synthetic.csv";

DefenseRule distance_rule() {
    DefenseRule r;
    r.kind = DefenseKind::RangeCap;
    r.cap = 350;
    r.unit = QuantityUnit::Miles;
    r.tolerance_fraction = 0.2;
    return r;
}

DefenseRule speed_rule() {
    DefenseRule r;
    r.kind = DefenseKind::SpeedCap;
    r.cap = 70;
    r.unit = QuantityUnit::Mph;
    r.tolerance_fraction = 0.2;
    return r;
}

std::vector<GeoPoint> whole_grid(int step) {
    std::vector<GeoPoint> grid;
    for (int lat = -90; lat <= 90; lat += step)
        for (int lon = -180; lon <= 180; lon += step)
            grid.push_back(GeoPoint::from_degrees(lon, lat));
    return grid;
}

// Dense-sampling reference for the point-to-segment distance.
double sampled_distance_deg(const GeoPoint& p, const RoadSegment& seg) {
    double best = 1e300;
    for (double t = 0.0; t <= 1.0; t += 1e-4 / 2.0) {
        double x = seg.a.lon_deg() + t * (seg.b.lon_deg() - seg.a.lon_deg());
        double y = seg.a.lat_deg() + t * (seg.b.lat_deg() - seg.a.lat_deg());
        best = std::min(best, std::hypot(p.lon_deg() - x, p.lat_deg() - y));
    }
    return best;
}

} // namespace

TEST_CASE("apply_rule: world-record distance cap with 20% headroom") {
    CHECK(apply_rule(distance_rule(), {420.0, QuantityUnit::Miles}));
    CHECK_FALSE(apply_rule(distance_rule(), {421.0, QuantityUnit::Miles}));
    CHECK(apply_rule(speed_rule(), {84.0, QuantityUnit::Mph}));
    CHECK_FALSE(apply_rule(speed_rule(), {85.0, QuantityUnit::Mph}));

    // Unit conversion happens before the check.
    CHECK(apply_rule(distance_rule(), {420 * 1609.344, QuantityUnit::Meters}));
    CHECK(apply_rule(speed_rule(), {84 * 1.609344, QuantityUnit::Kmh}));

    // Zero and negatives are never acceptable.
    CHECK_FALSE(apply_rule(distance_rule(), {0.0, QuantityUnit::Miles}));
    CHECK_FALSE(apply_rule(distance_rule(), {-5.0, QuantityUnit::Miles}));

    CHECK_THROWS_AS(apply_rule(distance_rule(), {10.0, QuantityUnit::Mph}),
                    Error);
}

TEST_CASE("apply_rule is monotone in the value") {
    Rng rng(31);
    for (int i = 0; i < 500; ++i) {
        double v = rng.unit() * 500.0;
        if (apply_rule(distance_rule(), {v, QuantityUnit::Miles})) {
            double smaller = v * rng.unit();
            if (smaller > 0.0)
                REQUIRE(apply_rule(distance_rule(),
                                   {smaller, QuantityUnit::Miles}));
        }
    }
}

TEST_CASE("reduction reproduces the published percentages") {
    CHECK(reduction(31068.56, 420.0).reduction_percent ==
          doctest::Approx(98.65).epsilon(1e-9));
    CHECK(reduction(100051.4, 420.0).reduction_percent ==
          doctest::Approx(99.58).epsilon(1e-9));
    CHECK(reduction(1460.0, 84.0).reduction_percent ==
          doctest::Approx(94.25).epsilon(1e-9));

    // The discovered 50,000,000 m extent converts to the same 98.65%.
    double miles = convert_unit(50'000'000.0, QuantityUnit::Meters,
                                QuantityUnit::Miles);
    CHECK(miles == doctest::Approx(31068.56).epsilon(1e-6));
    CHECK(reduction(miles, 420.0).reduction_percent ==
          doctest::Approx(98.65).epsilon(1e-9));

    // The capped-band counterexample: a 10,000-mile ceiling computes to
    // 95.80%, not the published 99.58%.
    CHECK(reduction(10'000.0, 420.0).reduction_percent ==
          doctest::Approx(95.80).epsilon(1e-9));

    CHECK_THROWS_AS(reduction(0.0, 10.0), Error);
}

TEST_CASE("point_to_segment distance: exact cases") {
    RoadSegment seg{GeoPoint::parse("0.0", "0.0"), GeoPoint::parse("10.0", "0.0"),
                    "flat"};
    CHECK(point_to_segment_distance_deg(GeoPoint::parse("5.0", "0.0"), seg) ==
          doctest::Approx(0.0));
    CHECK(point_to_segment_distance_deg(GeoPoint::parse("5.0", "0.001"), seg) ==
          doctest::Approx(0.001));
    // Beyond an endpoint the distance is to the endpoint itself.
    CHECK(point_to_segment_distance_deg(GeoPoint::parse("11.0", "0.0"), seg) ==
          doctest::Approx(1.0));
}

TEST_CASE("point_to_segment distance matches dense sampling") {
    Rng rng(17);
    for (int i = 0; i < 40; ++i) {
        RoadSegment seg{
            GeoPoint::from_scaled(rng.between(-40'000, 40'000),
                                  rng.between(-40'000, 40'000), 3),
            GeoPoint::from_scaled(rng.between(-40'000, 40'000),
                                  rng.between(-40'000, 40'000), 3),
            "rnd"};
        if (seg.a == seg.b) continue;
        GeoPoint p = GeoPoint::from_scaled(rng.between(-40'000, 40'000),
                                           rng.between(-40'000, 40'000), 3);
        double exact = point_to_segment_distance_deg(p, seg);
        if (exact < 0.01) continue; // keep the sampling error bound valid
        double sampled = sampled_distance_deg(p, seg);
        REQUIRE(std::abs(exact - sampled) < 1e-6);
    }
}

TEST_CASE("road network csv round trip and validation") {
    RoadNetwork net = RoadNetwork::load_csv(kRoadsPath);
    REQUIRE(net.segments.size() == 2);
    CHECK(net.segments[0].id == "ridge-road");
    CHECK(net.segments[1].id == "mill-lane");

    CHECK_THROWS_AS(RoadNetwork::parse_csv("1.0,1.0,1.0,1.0,dot\n"), Error);
    CHECK_THROWS_AS(RoadNetwork::parse_csv("1.0,1.0,2.0\n"), Error);
}

TEST_CASE("geofence: synthetic fixture admits 3 points at 10 m, 4 at 100 m") {
    RoadNetwork net = RoadNetwork::load_csv(kRoadsPath);
    std::vector<GeoPoint> grid = whole_grid(5);
    REQUIRE(grid.size() == 2701);

    // Brute-force reference count.
    auto count_within = [&](double threshold) {
        int n = 0;
        for (const GeoPoint& p : grid) {
            double best = 1e300;
            for (const RoadSegment& seg : net.segments)
                best = std::min(best, point_to_segment_distance_m(p, seg));
            if (best <= threshold) ++n;
        }
        return n;
    };
    REQUIRE(count_within(10.0) == 3);
    REQUIRE(count_within(100.0) == 4);

    int accepted = 0;
    ReductionReport at10 = geofence_reduction(grid, net, 10.0, &accepted);
    CHECK(accepted == 3);
    CHECK(at10.reduction_percent == doctest::Approx(99.89).epsilon(1e-9));

    ReductionReport at100 = geofence_reduction(grid, net, 100.0, &accepted);
    CHECK(accepted == 4); // looser fence admits strictly more
    CHECK(at100.reduction_percent < at10.reduction_percent);

    // Monotonicity: acceptance never drops as the threshold grows.
    int prev = -1;
    for (double threshold : {0.0, 5.0, 10.0, 50.0, 100.0, 1'000.0, 1e6}) {
        geofence_reduction(grid, net, threshold, &accepted);
        CHECK(accepted >= prev);
        prev = accepted;
    }

    CHECK_THROWS_AS(geofence_reduction(grid, RoadNetwork{}, 10.0, nullptr),
                    Error);
}

TEST_CASE("geofence: an empty-road network is an error, not a zero") {
    std::vector<GeoPoint> grid = whole_grid(90);
    RoadNetwork empty;
    try {
        geofence_reduction(grid, empty, 10.0, nullptr);
        FAIL("expected empty-road-network");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyRoadNetwork);
    }
}
