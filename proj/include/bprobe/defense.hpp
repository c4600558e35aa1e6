#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bprobe/geopoint.hpp"

namespace bprobe::defense {

enum class QuantityUnit { Meters, Miles, Kmh, Mph, Cents, Degrees };

const char* quantity_unit_name(QuantityUnit u);
QuantityUnit quantity_unit_from_name(const std::string& name);

constexpr double kMetersPerMile = 1609.344;

/// Converts between compatible units; throws Error{UnitMismatch} for
/// incompatible ones (length vs speed vs money).
double convert_unit(double value, QuantityUnit from, QuantityUnit to);

struct Quantity {
    double value = 0.0;
    QuantityUnit unit = QuantityUnit::Meters;
};

enum class DefenseKind {
    RangeCap,
    SpeedCap,
    PriceEnvelope,
    Geofence,
    ReputationThreshold,
};

const char* defense_kind_name(DefenseKind k);
DefenseKind defense_kind_from_name(const std::string& name);

struct DefenseRule {
    DefenseKind kind = DefenseKind::RangeCap;
    double cap = 0.0;
    QuantityUnit unit = QuantityUnit::Miles;
    double tolerance_fraction = 0.0; // in [0, 1)
    std::string label;

    double allowed_max() const { return cap * (1.0 + tolerance_fraction); }
};

/// Accept iff 0 < value <= cap * (1 + tolerance). Monotone by
/// construction. Converts the value into the rule's unit first.
bool apply_rule(const DefenseRule& rule, const Quantity& value);

struct ReductionReport {
    double original_extent = 0.0;
    double allowed_extent = 0.0;
    double reduction_percent = 0.0; // rounded to 2 decimals
    std::string note;
};

ReductionReport reduction(double original_max, double allowed_max,
                          std::string note = {});

struct RoadSegment {
    GeoPoint a;
    GeoPoint b;
    std::string id;
};

struct RoadNetwork {
    std::vector<RoadSegment> segments;

    /// CSV rows: lon1,lat1,lon2,lat2,id
    static RoadNetwork load_csv(const std::string& path);
    static RoadNetwork parse_csv(const std::string& text);
};

/// Planar point-to-segment distance in degrees (no lon/lat scaling; the
/// geofence path converts to meters separately).
double point_to_segment_distance_deg(const GeoPoint& p, const RoadSegment& seg);

/// Equirectangular point-to-segment distance in meters (longitude scaled
/// by cos(latitude) of the query point).
double point_to_segment_distance_m(const GeoPoint& p, const RoadSegment& seg);

/// Counts grid points within threshold meters of the nearest segment;
/// reduction = share of the grid removed. Throws Error{EmptyRoadNetwork}.
ReductionReport geofence_reduction(const std::vector<GeoPoint>& grid,
                                   const RoadNetwork& roads,
                                   double threshold_m,
                                   int* accepted_out = nullptr);

} // namespace bprobe::defense
