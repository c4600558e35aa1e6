#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "bprobe/geopoint.hpp"
#include "bprobe/post.hpp"

namespace bprobe {

/// What a target service consumes.
enum class ServiceKind { Fitness, Pricing, Location, Safety, Transit };

const char* service_kind_name(ServiceKind k);
ServiceKind service_kind_from_name(const std::string& name);

enum class ValueKind { Integer, PriceCents, Geo, Post, Speed };

enum class IntUnit { None, Seconds, Meters };

const char* int_unit_name(IntUnit u);

/// One injectable value. Prices are integer cents, speeds are tenths of
/// km/h, coordinates are scaled-integer degrees; no float carries a value
/// that boundary detection compares for equality.
class ProbeValue {
public:
    static ProbeValue integer(std::int64_t v, IntUnit unit = IntUnit::None);
    static ProbeValue price_cents(std::int64_t cents);
    static ProbeValue geo(const GeoPoint& p);
    static ProbeValue post(PostDraft draft);
    static ProbeValue speed_tenths_kmh(std::int64_t tenths);

    ValueKind kind() const { return kind_; }
    IntUnit unit() const { return unit_; }

    std::int64_t as_int() const { return scalar_; }
    std::int64_t cents() const { return scalar_; }
    std::int64_t speed_tenths() const { return scalar_; }
    const GeoPoint& geo_point() const { return geo_; }
    const PostDraft& post_draft() const { return *post_; }

    std::string display() const;

private:
    ValueKind kind_ = ValueKind::Integer;
    IntUnit unit_ = IntUnit::None;
    std::int64_t scalar_ = 0;
    GeoPoint geo_;
    std::shared_ptr<const PostDraft> post_;
};

struct ProbeOutcome {
    enum class Status { Accepted, Rejected, RateLimited, Blocked, Pending };

    Status status = Status::Rejected;
    std::int64_t latency_ms = 0;
    std::string detail;

    bool accepted() const { return status == Status::Accepted; }

    static ProbeOutcome make(Status s, std::int64_t latency_ms = 0,
                             std::string detail = {}) {
        return ProbeOutcome{s, latency_ms, std::move(detail)};
    }
};

const char* outcome_status_name(ProbeOutcome::Status s);

/// Client-side sanity check: ok iff the value's unit matches what the
/// target kind consumes. Throws Error{UnitMismatch} otherwise.
void validate_probe(const ProbeValue& v, ServiceKind target);

} // namespace bprobe
