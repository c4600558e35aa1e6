#include "bprobe/defense.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "bprobe/error.hpp"

namespace bprobe::defense {

const char* quantity_unit_name(QuantityUnit u) {
    switch (u) {
        case QuantityUnit::Meters: return "m";
        case QuantityUnit::Miles: return "miles";
        case QuantityUnit::Kmh: return "km/h";
        case QuantityUnit::Mph: return "mph";
        case QuantityUnit::Cents: return "cents";
        case QuantityUnit::Degrees: return "deg";
    }
    return "m";
}

QuantityUnit quantity_unit_from_name(const std::string& name) {
    if (name == "m" || name == "meters") return QuantityUnit::Meters;
    if (name == "miles" || name == "mi") return QuantityUnit::Miles;
    if (name == "km/h" || name == "kmh") return QuantityUnit::Kmh;
    if (name == "mph") return QuantityUnit::Mph;
    if (name == "cents") return QuantityUnit::Cents;
    if (name == "deg" || name == "degrees") return QuantityUnit::Degrees;
    throw Error(ErrorCode::ConfigSemantic, "unknown unit: " + name);
}

namespace {

enum class Dimension { Length, Speed, Money, Angle };

Dimension dimension_of(QuantityUnit u) {
    switch (u) {
        case QuantityUnit::Meters:
        case QuantityUnit::Miles: return Dimension::Length;
        case QuantityUnit::Kmh:
        case QuantityUnit::Mph: return Dimension::Speed;
        case QuantityUnit::Cents: return Dimension::Money;
        case QuantityUnit::Degrees: return Dimension::Angle;
    }
    return Dimension::Length;
}

double to_base(double value, QuantityUnit u) {
    switch (u) {
        case QuantityUnit::Meters: return value;
        case QuantityUnit::Miles: return value * kMetersPerMile;
        case QuantityUnit::Kmh: return value;
        case QuantityUnit::Mph: return value * kMetersPerMile / 1000.0;
        case QuantityUnit::Cents: return value;
        case QuantityUnit::Degrees: return value;
    }
    return value;
}

double from_base(double value, QuantityUnit u) {
    switch (u) {
        case QuantityUnit::Meters: return value;
        case QuantityUnit::Miles: return value / kMetersPerMile;
        case QuantityUnit::Kmh: return value;
        case QuantityUnit::Mph: return value * 1000.0 / kMetersPerMile;
        case QuantityUnit::Cents: return value;
        case QuantityUnit::Degrees: return value;
    }
    return value;
}

} // namespace

double convert_unit(double value, QuantityUnit from, QuantityUnit to) {
    if (dimension_of(from) != dimension_of(to))
        throw Error(ErrorCode::UnitMismatch,
                    std::string("cannot convert ") + quantity_unit_name(from) +
                        " to " + quantity_unit_name(to));
    return from_base(to_base(value, from), to);
}

const char* defense_kind_name(DefenseKind k) {
    switch (k) {
        case DefenseKind::RangeCap: return "range-cap";
        case DefenseKind::SpeedCap: return "speed-cap";
        case DefenseKind::PriceEnvelope: return "price-envelope";
        case DefenseKind::Geofence: return "geofence";
        case DefenseKind::ReputationThreshold: return "reputation-threshold";
    }
    return "range-cap";
}

DefenseKind defense_kind_from_name(const std::string& name) {
    if (name == "range-cap") return DefenseKind::RangeCap;
    if (name == "speed-cap") return DefenseKind::SpeedCap;
    if (name == "price-envelope") return DefenseKind::PriceEnvelope;
    if (name == "geofence") return DefenseKind::Geofence;
    if (name == "reputation-threshold") return DefenseKind::ReputationThreshold;
    throw Error(ErrorCode::ConfigSemantic, "unknown defense kind: " + name);
}

bool apply_rule(const DefenseRule& rule, const Quantity& value) {
    double v = convert_unit(value.value, value.unit, rule.unit);
    return v > 0.0 && v <= rule.allowed_max() + 1e-9;
}

ReductionReport reduction(double original_max, double allowed_max,
                          std::string note) {
    if (original_max <= 0.0 || allowed_max <= 0.0)
        throw Error(ErrorCode::ConfigSemantic,
                    "reduction extents must be positive");
    ReductionReport r;
    r.original_extent = original_max;
    r.allowed_extent = allowed_max;
    double pct = 100.0 * (1.0 - allowed_max / original_max);
    r.reduction_percent = std::round(pct * 100.0) / 100.0;
    r.note = std::move(note);
    return r;
}

double point_to_segment_distance_deg(const GeoPoint& p, const RoadSegment& seg) {
    double px = p.lon_deg(), py = p.lat_deg();
    double ax = seg.a.lon_deg(), ay = seg.a.lat_deg();
    double bx = seg.b.lon_deg(), by = seg.b.lat_deg();

    double dx = bx - ax, dy = by - ay;
    double len2 = dx * dx + dy * dy;
    double t = len2 <= 0.0
                   ? 0.0
                   : std::clamp(((px - ax) * dx + (py - ay) * dy) / len2, 0.0,
                                1.0);
    double cx = ax + t * dx, cy = ay + t * dy;
    return std::hypot(px - cx, py - cy);
}

double point_to_segment_distance_m(const GeoPoint& p, const RoadSegment& seg) {
    // Equirectangular: scale longitudes by cos(lat) of the query point,
    // then solve the planar projection in meters.
    double k = std::cos(p.lat_deg() * M_PI / 180.0);
    double px = p.lon_deg() * k, py = p.lat_deg();
    double ax = seg.a.lon_deg() * k, ay = seg.a.lat_deg();
    double bx = seg.b.lon_deg() * k, by = seg.b.lat_deg();

    double dx = bx - ax, dy = by - ay;
    double len2 = dx * dx + dy * dy;
    double t = len2 <= 0.0
                   ? 0.0
                   : std::clamp(((px - ax) * dx + (py - ay) * dy) / len2, 0.0,
                                1.0);
    double cx = ax + t * dx, cy = ay + t * dy;
    return std::hypot(px - cx, py - cy) * kMetersPerDegree;
}

RoadNetwork RoadNetwork::parse_csv(const std::string& text) {
    RoadNetwork net;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (line_no == 1 && line.rfind("lon1", 0) == 0) continue; // header
        std::istringstream row(line);
        std::string lon1, lat1, lon2, lat2, id;
        if (!std::getline(row, lon1, ',') || !std::getline(row, lat1, ',') ||
            !std::getline(row, lon2, ',') || !std::getline(row, lat2, ',') ||
            !std::getline(row, id))
            throw Error(ErrorCode::ConfigSemantic,
                        "bad road row at line " + std::to_string(line_no));
        RoadSegment seg;
        seg.a = GeoPoint::parse(lon1, lat1);
        seg.b = GeoPoint::parse(lon2, lat2);
        seg.id = id;
        if (seg.a == seg.b)
            throw Error(ErrorCode::ConfigSemantic,
                        "zero-length road segment at line " +
                            std::to_string(line_no));
        net.segments.push_back(std::move(seg));
    }
    return net;
}

RoadNetwork RoadNetwork::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str());
}

ReductionReport geofence_reduction(const std::vector<GeoPoint>& grid,
                                   const RoadNetwork& roads,
                                   double threshold_m, int* accepted_out) {
    if (grid.empty())
        throw Error(ErrorCode::ConfigSemantic, "empty grid");
    if (roads.segments.empty())
        throw Error(ErrorCode::EmptyRoadNetwork, "road network has no segments");

    int accepted = 0;
    for (const GeoPoint& p : grid) {
        double best = std::numeric_limits<double>::infinity();
        for (const RoadSegment& seg : roads.segments)
            best = std::min(best, point_to_segment_distance_m(p, seg));
        if (best <= threshold_m) ++accepted;
    }
    if (accepted_out) *accepted_out = accepted;

    ReductionReport r;
    r.original_extent = static_cast<double>(grid.size());
    r.allowed_extent = static_cast<double>(accepted);
    double pct =
        100.0 * (1.0 - static_cast<double>(accepted) /
                           static_cast<double>(grid.size()));
    r.reduction_percent = std::round(pct * 100.0) / 100.0;
    std::ostringstream note;
    note << accepted << "/" << grid.size() << " grid points within "
         << threshold_m << " m of a road segment";
    r.note = note.str();
    return r;
}

} // namespace bprobe::defense
