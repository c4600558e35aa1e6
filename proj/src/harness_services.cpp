#include "bprobe/harness/services.hpp"

#include <algorithm>

#include "bprobe/error.hpp"
#include "bprobe/rng.hpp"

namespace bprobe::harness {

namespace {

constexpr std::int64_t kDayMs = 86'400'000;

constexpr std::uint64_t kSaltTransitSelf = 0x7472616e73697401ULL;
constexpr std::uint64_t kSaltTransitObserver = 0x7472616e73697402ULL;
constexpr std::uint64_t kSaltSafetyLatency = 0x73616665747901ULL;

using Status = ProbeOutcome::Status;

} // namespace

FitnessService::FitnessService(FitnessRules rules, NowMs now)
    : rules_(rules), now_(std::move(now)) {}

ProbeOutcome FitnessService::submit(const CallerId& who, const Activity& a) {
    std::lock_guard<std::mutex> lock(mu_);
    Account& acc = accounts_[who.key()];

    std::int64_t day = now_() / kDayMs;
    if (acc.day_index != day) {
        acc.day_index = day;
        acc.posts_today = 0;
    }
    if (acc.posts_today >= rules_.posts_per_day)
        return ProbeOutcome::make(Status::RateLimited, 0, "daily-post-quota");
    acc.posts_today += 1;

    auto in_range = [&](std::int64_t v, std::int64_t lo, std::int64_t hi,
                        bool unbounded) {
        if (v < lo) return false;
        if (v == 0 && !rules_.zero_accepted) return false;
        if (unbounded) return v >= 0;
        return v <= hi;
    };

    bool duration_ok = in_range(a.duration_s, rules_.min_duration_s,
                                rules_.max_duration_s,
                                rules_.unbounded_duration);
    bool distance_ok = in_range(a.distance_m, rules_.min_distance_m,
                                rules_.max_distance_m,
                                rules_.variant == FitnessVariant::MapMyRun);
    if (a.duration_s < 0 || a.distance_m < 0) duration_ok = distance_ok = false;
    if (!duration_ok || !distance_ok)
        return ProbeOutcome::make(Status::Rejected, 0,
                                  duration_ok ? "distance-out-of-range"
                                              : "duration-out-of-range");

    acc.stats.activity_count += 1;
    acc.stats.total_duration_s += a.duration_s;
    std::uint64_t next = acc.stats.total_distance_m +
                         static_cast<std::uint64_t>(a.distance_m);
    if (next < acc.stats.total_distance_m ||
        next > rules_.accumulated_distance_cap)
        next = rules_.accumulated_distance_cap;
    acc.stats.total_distance_m = next;
    acc.durations.push_back(a.duration_s);
    return ProbeOutcome::make(Status::Accepted);
}

FitnessStats FitnessService::stats(const CallerId& who) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = accounts_.find(who.key());
    return it == accounts_.end() ? FitnessStats{} : it->second.stats;
}

std::vector<std::int64_t> FitnessService::render(const CallerId& who) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = accounts_.find(who.key());
    if (it == accounts_.end()) return {};
    std::vector<std::int64_t> out;
    out.reserve(it->second.durations.size());
    for (std::int64_t d : it->second.durations)
        out.push_back(d % rules_.render_modulus_s);
    return out;
}

PricingService::PricingService(PricingRules rules) : rules_(std::move(rules)) {}

ProbeOutcome PricingService::submit(const CallerId&, const std::string& store,
                                    const std::string& item,
                                    std::int64_t price_cents) {
    const PricingItem* it = rules_.find(store, item);
    if (!it)
        throw Error(ErrorCode::UnknownItem,
                    "unknown item " + store + "/" + item);
    if (price_cents < it->min_cents() || price_cents > it->max_cents())
        return ProbeOutcome::make(Status::Rejected, 0, "price-out-of-envelope");

    std::lock_guard<std::mutex> lock(mu_);
    accepted_[store + "|" + item] = price_cents;
    return ProbeOutcome::make(Status::Accepted);
}

PricingService::Range PricingService::range(const std::string& store,
                                            const std::string& item) const {
    const PricingItem* it = rules_.find(store, item);
    if (!it)
        throw Error(ErrorCode::UnknownItem,
                    "unknown item " + store + "/" + item);
    return Range{it->min_cents(), it->max_cents()};
}

std::optional<std::int64_t> PricingService::current(
    const std::string& store, const std::string& item) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = accepted_.find(store + "|" + item);
    if (it == accepted_.end()) return std::nullopt;
    return it->second;
}

LocationService::LocationService(LocationRules rules) : rules_(rules) {}

AddPoiResult LocationService::add(const CallerId& who, const GeoPoint& p) {
    std::lock_guard<std::mutex> lock(mu_);

    if (validation_enabled_ && rules_.per_identity_cap > 0) {
        std::int64_t& count = requests_[who.user_id];
        count += 1;
        if (count > rules_.per_identity_cap)
            return {ProbeOutcome::make(Status::RateLimited, 0,
                                       "identity-request-cap"),
                    0};
    }

    if (validation_enabled_) {
        if (rules_.range_check && !p.in_range())
            return {ProbeOutcome::make(Status::Rejected, 0, "out-of-range"), 0};

        if (p.lon_effective_places() > rules_.precision_places ||
            p.lat_effective_places() > rules_.precision_places)
            return {ProbeOutcome::make(Status::Rejected, 0,
                                       "precision-exceeded"),
                    0};

        if (rules_.reject_axes_and_poles) {
            const std::int64_t pole = 90'000'000'000LL; // 90 deg in nano
            if (p.lon_nano() == 0 || p.lat_nano() == 0 ||
                p.lat_nano() == pole || p.lat_nano() == -pole)
                return {ProbeOutcome::make(Status::Rejected, 0,
                                           "axis-or-pole"),
                        0};
        }

        if (rules_.min_separation_nano > 0) {
            for (const Poi& other : pois_)
                if (chebyshev_nano(p, other.point) < rules_.min_separation_nano)
                    return {ProbeOutcome::make(Status::Rejected, 0,
                                               "too-close"),
                            0};
        }
    }

    Poi poi{next_id_++, who.user_id, p};
    pois_.push_back(poi);
    return {ProbeOutcome::make(Status::Accepted), poi.id};
}

std::vector<Poi> LocationService::search(double lon_min, double lat_min,
                                         double lon_max, double lat_max) const {
    std::lock_guard<std::mutex> lock(mu_);
    std::vector<Poi> out;
    for (const Poi& poi : pois_) {
        double lon = poi.point.lon_deg();
        double lat = poi.point.lat_deg();
        if (lon >= lon_min && lon <= lon_max && lat >= lat_min &&
            lat <= lat_max)
            out.push_back(poi);
    }
    return out;
}

DeleteResult LocationService::remove(const CallerId& who, std::int64_t poi_id) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = std::find_if(pois_.begin(), pois_.end(),
                           [&](const Poi& p) { return p.id == poi_id; });
    if (it == pois_.end()) return DeleteResult::NotFound;
    if (it->owner_user_id != who.user_id) return DeleteResult::NotOwner;
    pois_.erase(it);
    return DeleteResult::Ok;
}

SafetyService::SafetyService(SafetyRules rules, NowMs now, std::uint64_t seed)
    : rules_(std::move(rules)), now_(std::move(now)), seed_(seed) {}

void SafetyService::settle(std::int64_t now_ms) const {
    // Decisions land in submission order; latencies are short relative to
    // the service's own posting gaps, so this order matches decide_ms.
    while (settled_ < submissions_.size()) {
        Submission& s = submissions_[settled_];
        if (s.ignored) {
            ++settled_;
            continue;
        }
        if (s.decide_ms > now_ms) break;
        if (!s.verdict_accept) {
            Account& acc = accounts_[s.user_key];
            std::int64_t day = s.decide_ms / kDayMs;
            if (acc.day_index != day) {
                acc.day_index = day;
                acc.rejections_today = 0;
            }
            acc.rejections_today += 1;
            if (acc.rejections_today >= rules_.max_rejections_per_day)
                acc.blocked = true;
        }
        ++settled_;
    }
}

SubmitPostResult SafetyService::submit(const CallerId& who,
                                       const PostDraft& post) {
    std::lock_guard<std::mutex> lock(mu_);
    std::int64_t now = now_();
    settle(now);

    Submission s;
    s.id = next_id_++;
    s.user_key = who.key();
    s.submitted_ms = now;

    Account& acc = accounts_[s.user_key];
    if (acc.blocked) {
        s.ignored = true;
        submissions_.push_back(s);
        return {ProbeOutcome::make(Status::Pending, 0, "submitted"), s.id};
    }

    std::int64_t span =
        rules_.decision_latency_hi_ms - rules_.decision_latency_lo_ms;
    std::int64_t latency =
        rules_.decision_latency_lo_ms +
        static_cast<std::int64_t>(
            hash_draw(seed_, kSaltSafetyLatency,
                      static_cast<std::uint64_t>(s.id)) %
            static_cast<std::uint64_t>(span + 1));
    s.decide_ms = now + latency;
    s.verdict_accept = rules_.post_acceptable(post);
    submissions_.push_back(s);
    return {ProbeOutcome::make(Status::Pending, 0, "submitted"), s.id};
}

std::vector<std::int64_t> SafetyService::list(const CallerId& who) const {
    std::lock_guard<std::mutex> lock(mu_);
    std::int64_t now = now_();
    settle(now);
    std::vector<std::int64_t> out;
    for (const Submission& s : submissions_)
        if (!s.ignored && s.user_key == who.key() && s.verdict_accept &&
            s.decide_ms <= now)
            out.push_back(s.id);
    return out;
}

std::optional<ProbeOutcome> SafetyService::decision(
    std::int64_t submission_id) const {
    std::lock_guard<std::mutex> lock(mu_);
    std::int64_t now = now_();
    settle(now);
    for (const Submission& s : submissions_) {
        if (s.id != submission_id) continue;
        if (s.ignored) return std::nullopt; // never decides
        if (s.decide_ms > now) return std::nullopt;
        std::int64_t latency = s.decide_ms - s.submitted_ms;
        return s.verdict_accept
                   ? ProbeOutcome::make(Status::Accepted, latency)
                   : ProbeOutcome::make(Status::Rejected, latency,
                                        "semantic-validation");
    }
    return std::nullopt;
}

bool SafetyService::identity_blocked(const CallerId& who) const {
    std::lock_guard<std::mutex> lock(mu_);
    settle(now_());
    auto it = accounts_.find(who.key());
    return it != accounts_.end() && it->second.blocked;
}

TransitService::TransitService(TransitRules rules, std::uint64_t seed)
    : rules_(rules), seed_(seed) {}

RideResult TransitService::ride(const CallerId&, std::int64_t speed_tenths) {
    std::lock_guard<std::mutex> lock(mu_);
    std::uint64_t idx = static_cast<std::uint64_t>(call_index_++);

    RideResult r;
    if (speed_tenths < 0) {
        r.outcome = ProbeOutcome::make(Status::Rejected, 0, "negative-speed");
        return r;
    }
    if (speed_tenths > rules_.accept_threshold_tenths) {
        r.outcome = ProbeOutcome::make(Status::Rejected, 0, "speed-threshold");
        return r;
    }

    double u_self = to_unit(hash_draw(seed_, kSaltTransitSelf, idx));
    r.self_accepted = u_self >= rules_.sub_threshold_fail_p;
    if (!r.self_accepted) {
        r.outcome = ProbeOutcome::make(Status::Rejected, 0, "flaky");
        return r;
    }

    double u_obs = to_unit(hash_draw(seed_, kSaltTransitObserver, idx));
    r.observer_affected = u_obs < rules_.observer_p(speed_tenths);
    r.outcome = ProbeOutcome::make(Status::Accepted);
    return r;
}

} // namespace bprobe::harness
