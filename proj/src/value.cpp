#include "bprobe/value.hpp"

#include "bprobe/document.hpp"
#include "bprobe/error.hpp"

namespace bprobe {

const char* service_kind_name(ServiceKind k) {
    switch (k) {
        case ServiceKind::Fitness: return "fitness";
        case ServiceKind::Pricing: return "pricing";
        case ServiceKind::Location: return "location";
        case ServiceKind::Safety: return "safety";
        case ServiceKind::Transit: return "transit";
    }
    return "fitness";
}

ServiceKind service_kind_from_name(const std::string& name) {
    if (name == "fitness") return ServiceKind::Fitness;
    if (name == "pricing") return ServiceKind::Pricing;
    if (name == "location") return ServiceKind::Location;
    if (name == "safety") return ServiceKind::Safety;
    if (name == "transit") return ServiceKind::Transit;
    throw Error(ErrorCode::ConfigSemantic, "unknown target kind: " + name);
}

const char* int_unit_name(IntUnit u) {
    switch (u) {
        case IntUnit::None: return "";
        case IntUnit::Seconds: return "s";
        case IntUnit::Meters: return "m";
    }
    return "";
}

ProbeValue ProbeValue::integer(std::int64_t v, IntUnit unit) {
    ProbeValue p;
    p.kind_ = ValueKind::Integer;
    p.unit_ = unit;
    p.scalar_ = v;
    return p;
}

ProbeValue ProbeValue::price_cents(std::int64_t cents) {
    ProbeValue p;
    p.kind_ = ValueKind::PriceCents;
    p.scalar_ = cents;
    return p;
}

ProbeValue ProbeValue::geo(const GeoPoint& point) {
    ProbeValue p;
    p.kind_ = ValueKind::Geo;
    p.geo_ = point;
    return p;
}

ProbeValue ProbeValue::post(PostDraft draft) {
    ProbeValue p;
    p.kind_ = ValueKind::Post;
    p.post_ = std::make_shared<PostDraft>(std::move(draft));
    return p;
}

ProbeValue ProbeValue::speed_tenths_kmh(std::int64_t tenths) {
    ProbeValue p;
    p.kind_ = ValueKind::Speed;
    p.scalar_ = tenths;
    return p;
}

std::string ProbeValue::display() const {
    switch (kind_) {
        case ValueKind::Integer:
            return std::to_string(scalar_) + int_unit_name(unit_);
        case ValueKind::PriceCents:
            return format_cents(scalar_);
        case ValueKind::Geo:
            return geo_.lon_text() + "," + geo_.lat_text();
        case ValueKind::Post:
            return "post:" + post_->title;
        case ValueKind::Speed: {
            std::int64_t whole = scalar_ / 10;
            std::int64_t tenth = scalar_ % 10;
            if (tenth < 0) tenth = -tenth;
            return std::to_string(whole) + "." + std::to_string(tenth) + "km/h";
        }
    }
    return "";
}

const char* outcome_status_name(ProbeOutcome::Status s) {
    switch (s) {
        case ProbeOutcome::Status::Accepted: return "accepted";
        case ProbeOutcome::Status::Rejected: return "rejected";
        case ProbeOutcome::Status::RateLimited: return "rate-limited";
        case ProbeOutcome::Status::Blocked: return "blocked";
        case ProbeOutcome::Status::Pending: return "pending";
    }
    return "rejected";
}

void validate_probe(const ProbeValue& v, ServiceKind target) {
    bool ok = false;
    switch (target) {
        case ServiceKind::Fitness:
            ok = v.kind() == ValueKind::Integer &&
                 (v.unit() == IntUnit::Seconds || v.unit() == IntUnit::Meters);
            break;
        case ServiceKind::Pricing:
            ok = v.kind() == ValueKind::PriceCents;
            break;
        case ServiceKind::Location:
            ok = v.kind() == ValueKind::Geo;
            break;
        case ServiceKind::Safety:
            ok = v.kind() == ValueKind::Post;
            break;
        case ServiceKind::Transit:
            ok = v.kind() == ValueKind::Speed;
            break;
    }
    if (!ok)
        throw Error(ErrorCode::UnitMismatch,
                    std::string("value ") + v.display() +
                        " does not match target kind " +
                        service_kind_name(target));
}

} // namespace bprobe
