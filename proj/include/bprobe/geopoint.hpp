#pragma once

#include <cstdint>
#include <string>

namespace bprobe {

/// Longitude/latitude pair held as scaled integers at 10^places resolution
/// (places 0..9), so boundary comparisons and text round-trips are exact.
class GeoPoint {
public:
    static constexpr int kMaxPlaces = 9;

    GeoPoint() = default;

    /// Integer degrees, places = 0.
    static GeoPoint from_degrees(std::int64_t lon_deg, std::int64_t lat_deg);

    /// Scaled values: degree value = scaled / 10^places.
    static GeoPoint from_scaled(std::int64_t lon_scaled, std::int64_t lat_scaled,
                                int places);

    /// Parses decimal text like "12.3456789"; exact, rejects >9 places.
    static GeoPoint parse(const std::string& lon_text,
                          const std::string& lat_text);

    std::int64_t lon_scaled() const { return lon_; }
    std::int64_t lat_scaled() const { return lat_; }
    int places() const { return places_; }

    /// Nano-degree view (10^9 scale), common grid for comparisons.
    std::int64_t lon_nano() const;
    std::int64_t lat_nano() const;

    double lon_deg() const;
    double lat_deg() const;

    /// Decimal digits actually needed (declared places minus trailing zeros).
    int lon_effective_places() const;
    int lat_effective_places() const;

    bool in_range() const; // |lon| <= 180, |lat| <= 90

    std::string lon_text() const;
    std::string lat_text() const;

    /// New point offset by whole steps of 10^-places degrees.
    GeoPoint offset(std::int64_t lon_steps, std::int64_t lat_steps) const;

    /// Same point re-expressed at a finer scale (places can only grow).
    GeoPoint at_places(int places) const;

    bool operator==(const GeoPoint& o) const {
        return lon_nano() == o.lon_nano() && lat_nano() == o.lat_nano();
    }

private:
    std::int64_t lon_ = 0;
    std::int64_t lat_ = 0;
    int places_ = 0;
};

/// Chebyshev (max-axis) distance in nano-degrees.
std::int64_t chebyshev_nano(const GeoPoint& a, const GeoPoint& b);

/// Meters per degree of latitude on the equirectangular approximation used
/// throughout (error bound documented in the README; fine at PoI scale).
constexpr double kMetersPerDegree = 111320.0;

/// Planar equirectangular distance in meters, longitudes scaled by
/// cos(latitude) of the reference point.
double planar_distance_m(const GeoPoint& a, const GeoPoint& b);

} // namespace bprobe
