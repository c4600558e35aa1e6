#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "bprobe/geopoint.hpp"
#include "bprobe/harness/rules.hpp"
#include "bprobe/post.hpp"
#include "bprobe/value.hpp"

namespace bprobe::harness {

/// Identity as seen by a service: the (registration_id, user_id) pair
/// carried on every request.
struct CallerId {
    std::string registration_id;
    std::string user_id;

    std::string key() const { return registration_id + ":" + user_id; }
};

using NowMs = std::function<std::int64_t()>;

struct Activity {
    std::string type; // run | ride | swim (not validated, mirrors the API)
    std::int64_t duration_s = 0;
    std::int64_t distance_m = 0;
};

struct FitnessStats {
    std::int64_t activity_count = 0;
    std::int64_t total_duration_s = 0;
    std::uint64_t total_distance_m = 0; // saturates at the accumulated cap
};

class FitnessService {
public:
    FitnessService(FitnessRules rules, NowMs now);

    ProbeOutcome submit(const CallerId& who, const Activity& a);
    FitnessStats stats(const CallerId& who) const;

    /// Client-side rendering of stored durations (MapMyRun-style wrap).
    std::vector<std::int64_t> render(const CallerId& who) const;

    const FitnessRules& rules() const { return rules_; }

private:
    struct Account {
        FitnessStats stats;
        std::vector<std::int64_t> durations;
        std::int64_t day_index = -1;
        int posts_today = 0;
    };

    FitnessRules rules_;
    NowMs now_;
    mutable std::mutex mu_;
    std::map<std::string, Account> accounts_;
};

class PricingService {
public:
    explicit PricingService(PricingRules rules);

    /// Accepted iff min <= price <= max for the item's envelope.
    /// Throws Error{UnknownItem} for items outside the fixture.
    ProbeOutcome submit(const CallerId& who, const std::string& store,
                        const std::string& item, std::int64_t price_cents);

    struct Range {
        std::int64_t min_cents = 0;
        std::int64_t max_cents = 0;
    };
    Range range(const std::string& store, const std::string& item) const;

    /// Last accepted price, for secondary-query feedback.
    std::optional<std::int64_t> current(const std::string& store,
                                        const std::string& item) const;

    const PricingRules& rules() const { return rules_; }

private:
    PricingRules rules_;
    mutable std::mutex mu_;
    std::map<std::string, std::int64_t> accepted_; // store|item -> cents
};

struct Poi {
    std::int64_t id = 0;
    std::string owner_user_id;
    GeoPoint point;
};

struct AddPoiResult {
    ProbeOutcome outcome;
    std::int64_t poi_id = 0; // valid when accepted
};

enum class DeleteResult { Ok, NotFound, NotOwner };

class LocationService {
public:
    explicit LocationService(LocationRules rules);

    AddPoiResult add(const CallerId& who, const GeoPoint& p);

    std::vector<Poi> search(double lon_min, double lat_min, double lon_max,
                            double lat_max) const;

    DeleteResult remove(const CallerId& who, std::int64_t poi_id);

    /// Disables every validation rule (misbehaving-service mode for tests).
    void disable_validation() { validation_enabled_ = false; }

    const LocationRules& rules() const { return rules_; }

private:
    LocationRules rules_;
    bool validation_enabled_ = true;
    mutable std::mutex mu_;
    std::vector<Poi> pois_;
    std::int64_t next_id_ = 1;
    std::map<std::string, std::int64_t> requests_; // user -> add calls
};

struct SubmitPostResult {
    ProbeOutcome outcome; // Pending for live identities
    std::int64_t submission_id = 0;
};

class SafetyService {
public:
    SafetyService(SafetyRules rules, NowMs now, std::uint64_t seed);

    SubmitPostResult submit(const CallerId& who, const PostDraft& post);

    /// Posts visible to the submitter (accepted and past their decision
    /// latency). Read-only.
    std::vector<std::int64_t> list(const CallerId& who) const;

    /// Decision for one submission once its latency has elapsed; empty
    /// while still pending. Silently-ignored submissions never decide.
    std::optional<ProbeOutcome> decision(std::int64_t submission_id) const;

    bool identity_blocked(const CallerId& who) const;

    const SafetyRules& rules() const { return rules_; }

private:
    struct Submission {
        std::int64_t id = 0;
        std::string user_key;
        bool verdict_accept = false;
        bool ignored = false; // blocked identity: no decision ever
        std::int64_t submitted_ms = 0;
        std::int64_t decide_ms = 0;
    };

    struct Account {
        std::int64_t day_index = -1;
        int rejections_today = 0;
        bool blocked = false;
    };

    // Applies any decisions whose time has come (rejection counters and
    // blocking depend on decision order).
    void settle(std::int64_t now_ms) const;

    SafetyRules rules_;
    NowMs now_;
    std::uint64_t seed_;
    mutable std::mutex mu_;
    mutable std::vector<Submission> submissions_;
    mutable std::map<std::string, Account> accounts_;
    mutable std::size_t settled_ = 0;
    std::int64_t next_id_ = 1;
};

struct RideResult {
    bool self_accepted = false;
    bool observer_affected = false;
    ProbeOutcome outcome;
};

class TransitService {
public:
    TransitService(TransitRules rules, std::uint64_t seed);

    /// Deterministic given (rules, seed, call index).
    RideResult ride(const CallerId& who, std::int64_t speed_tenths_kmh);

    const TransitRules& rules() const { return rules_; }
    std::int64_t calls() const { return call_index_; }

private:
    TransitRules rules_;
    std::uint64_t seed_;
    mutable std::mutex mu_;
    std::int64_t call_index_ = 0;
};

} // namespace bprobe::harness
