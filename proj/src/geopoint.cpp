#include "bprobe/geopoint.hpp"

#include <cmath>
#include <cstdlib>

#include "bprobe/error.hpp"

namespace bprobe {

namespace {

constexpr std::int64_t kPow10[10] = {
    1,      10,      100,      1000,      10000,
    100000, 1000000, 10000000, 100000000, 1000000000};

int trailing_zero_places(std::int64_t scaled, int places) {
    int effective = places;
    while (effective > 0 && scaled % 10 == 0) {
        scaled /= 10;
        --effective;
    }
    return effective;
}

std::string scaled_to_text(std::int64_t scaled, int places) {
    std::string sign = scaled < 0 ? "-" : "";
    std::uint64_t mag = scaled < 0 ? static_cast<std::uint64_t>(-scaled)
                                   : static_cast<std::uint64_t>(scaled);
    std::uint64_t scale = static_cast<std::uint64_t>(kPow10[places]);
    std::string whole = std::to_string(mag / scale);
    if (places == 0) return sign + whole;
    std::string frac = std::to_string(mag % scale);
    frac.insert(frac.begin(), places - frac.size(), '0');
    return sign + whole + "." + frac;
}

std::int64_t parse_scaled(const std::string& text, int places) {
    const char* p = text.c_str();
    bool neg = false;
    if (*p == '-' || *p == '+') {
        neg = *p == '-';
        ++p;
    }
    if (*p == '\0') throw Error(ErrorCode::ConfigSemantic, "empty coordinate");
    std::int64_t whole = 0;
    bool any = false;
    while (*p >= '0' && *p <= '9') {
        whole = whole * 10 + (*p - '0');
        ++p;
        any = true;
    }
    if (!any) throw Error(ErrorCode::ConfigSemantic, "bad coordinate: " + text);
    std::int64_t frac = 0;
    int frac_digits = 0;
    if (*p == '.') {
        ++p;
        while (*p >= '0' && *p <= '9') {
            if (frac_digits >= places)
                throw Error(ErrorCode::ConfigSemantic,
                            "coordinate exceeds " + std::to_string(places) +
                                " decimal places: " + text);
            frac = frac * 10 + (*p - '0');
            ++frac_digits;
            ++p;
        }
    }
    if (*p != '\0')
        throw Error(ErrorCode::ConfigSemantic, "bad coordinate: " + text);
    std::int64_t scaled =
        whole * kPow10[places] + frac * kPow10[places - frac_digits];
    return neg ? -scaled : scaled;
}

int decimal_places_in_text(const std::string& text) {
    auto dot = text.find('.');
    if (dot == std::string::npos) return 0;
    return static_cast<int>(text.size() - dot - 1);
}

} // namespace

GeoPoint GeoPoint::from_degrees(std::int64_t lon_deg, std::int64_t lat_deg) {
    GeoPoint p;
    p.lon_ = lon_deg;
    p.lat_ = lat_deg;
    p.places_ = 0;
    return p;
}

GeoPoint GeoPoint::from_scaled(std::int64_t lon_scaled, std::int64_t lat_scaled,
                               int places) {
    if (places < 0 || places > kMaxPlaces)
        throw Error(ErrorCode::ConfigSemantic,
                    "places must be in 0..9, got " + std::to_string(places));
    GeoPoint p;
    p.lon_ = lon_scaled;
    p.lat_ = lat_scaled;
    p.places_ = places;
    return p;
}

GeoPoint GeoPoint::parse(const std::string& lon_text,
                         const std::string& lat_text) {
    int places = decimal_places_in_text(lon_text);
    int lat_places = decimal_places_in_text(lat_text);
    if (lat_places > places) places = lat_places;
    if (places > kMaxPlaces)
        throw Error(ErrorCode::ConfigSemantic,
                    "coordinate exceeds 9 decimal places");
    GeoPoint p;
    p.places_ = places;
    p.lon_ = parse_scaled(lon_text, places);
    p.lat_ = parse_scaled(lat_text, places);
    return p;
}

std::int64_t GeoPoint::lon_nano() const {
    return lon_ * kPow10[kMaxPlaces - places_];
}

std::int64_t GeoPoint::lat_nano() const {
    return lat_ * kPow10[kMaxPlaces - places_];
}

double GeoPoint::lon_deg() const {
    return static_cast<double>(lon_) / static_cast<double>(kPow10[places_]);
}

double GeoPoint::lat_deg() const {
    return static_cast<double>(lat_) / static_cast<double>(kPow10[places_]);
}

int GeoPoint::lon_effective_places() const {
    return trailing_zero_places(lon_, places_);
}

int GeoPoint::lat_effective_places() const {
    return trailing_zero_places(lat_, places_);
}

bool GeoPoint::in_range() const {
    const std::int64_t lon_limit = 180 * kPow10[kMaxPlaces];
    const std::int64_t lat_limit = 90 * kPow10[kMaxPlaces];
    return lon_nano() >= -lon_limit && lon_nano() <= lon_limit &&
           lat_nano() >= -lat_limit && lat_nano() <= lat_limit;
}

std::string GeoPoint::lon_text() const { return scaled_to_text(lon_, places_); }
std::string GeoPoint::lat_text() const { return scaled_to_text(lat_, places_); }

GeoPoint GeoPoint::offset(std::int64_t lon_steps, std::int64_t lat_steps) const {
    GeoPoint p = *this;
    p.lon_ += lon_steps;
    p.lat_ += lat_steps;
    return p;
}

GeoPoint GeoPoint::at_places(int places) const {
    if (places < places_ || places > kMaxPlaces)
        throw Error(ErrorCode::ConfigSemantic, "cannot coarsen a GeoPoint");
    GeoPoint p;
    p.places_ = places;
    p.lon_ = lon_ * kPow10[places - places_];
    p.lat_ = lat_ * kPow10[places - places_];
    return p;
}

std::int64_t chebyshev_nano(const GeoPoint& a, const GeoPoint& b) {
    std::int64_t dlon = std::llabs(a.lon_nano() - b.lon_nano());
    std::int64_t dlat = std::llabs(a.lat_nano() - b.lat_nano());
    return dlon > dlat ? dlon : dlat;
}

double planar_distance_m(const GeoPoint& a, const GeoPoint& b) {
    double lat_ref = 0.5 * (a.lat_deg() + b.lat_deg()) * M_PI / 180.0;
    double dx = (a.lon_deg() - b.lon_deg()) * std::cos(lat_ref) * kMetersPerDegree;
    double dy = (a.lat_deg() - b.lat_deg()) * kMetersPerDegree;
    return std::sqrt(dx * dx + dy * dy);
}

} // namespace bprobe
