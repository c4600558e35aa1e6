#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bprobe/clock.hpp"
#include "bprobe/harness/services.hpp"

namespace bprobe::harness {

/// The "submit value, learn accept/reject" surface every explorer speaks,
/// uniform across the in-process harness and its HTTP facade so campaigns
/// and differential tests can swap one for the other.
class TargetApi {
public:
    virtual ~TargetApi() = default;

    virtual ProbeOutcome fitness_submit(const CallerId& who,
                                        const Activity& a) = 0;
    virtual FitnessStats fitness_stats(const CallerId& who) = 0;
    virtual std::vector<std::int64_t> fitness_render(const CallerId& who) = 0;

    virtual ProbeOutcome pricing_submit(const CallerId& who,
                                        const std::string& store,
                                        const std::string& item,
                                        std::int64_t price_cents) = 0;
    virtual PricingService::Range pricing_range(const std::string& store,
                                                const std::string& item) = 0;

    virtual AddPoiResult poi_add(const CallerId& who, const GeoPoint& p) = 0;
    virtual std::vector<Poi> poi_search(double lon_min, double lat_min,
                                        double lon_max, double lat_max) = 0;
    virtual DeleteResult poi_delete(const CallerId& who,
                                    std::int64_t poi_id) = 0;

    virtual SubmitPostResult safety_submit(const CallerId& who,
                                           const PostDraft& post) = 0;
    virtual std::vector<std::int64_t> safety_list(const CallerId& who) = 0;
    virtual std::optional<ProbeOutcome> safety_decision(
        std::int64_t submission_id) = 0;

    virtual RideResult transit_ride(const CallerId& who,
                                    std::int64_t speed_tenths_kmh) = 0;

    // Harness clock, so virtual-time campaigns drive HTTP targets too.
    virtual std::int64_t clock_now_ms() = 0;
    virtual void clock_advance_ms(std::int64_t ms) = 0;
};

struct HarnessConfig {
    FitnessRules fitness = FitnessRules::strava();
    PricingRules pricing = PricingRules::grocery_fixture();
    LocationRules location = LocationRules::toifi();
    SafetyRules safety = SafetyRules::standard();
    TransitRules transit;
    std::uint64_t seed = 1;
    bool location_validation = true;

    static HarnessConfig from_document(const std::string& path);
};

/// All five simulated services sharing one virtual clock.
class InProcessTarget final : public TargetApi {
public:
    explicit InProcessTarget(const HarnessConfig& cfg);

    ProbeOutcome fitness_submit(const CallerId& who, const Activity& a) override;
    FitnessStats fitness_stats(const CallerId& who) override;
    std::vector<std::int64_t> fitness_render(const CallerId& who) override;
    ProbeOutcome pricing_submit(const CallerId& who, const std::string& store,
                                const std::string& item,
                                std::int64_t price_cents) override;
    PricingService::Range pricing_range(const std::string& store,
                                        const std::string& item) override;
    AddPoiResult poi_add(const CallerId& who, const GeoPoint& p) override;
    std::vector<Poi> poi_search(double lon_min, double lat_min, double lon_max,
                                double lat_max) override;
    DeleteResult poi_delete(const CallerId& who, std::int64_t poi_id) override;
    SubmitPostResult safety_submit(const CallerId& who,
                                   const PostDraft& post) override;
    std::vector<std::int64_t> safety_list(const CallerId& who) override;
    std::optional<ProbeOutcome> safety_decision(std::int64_t submission_id) override;
    RideResult transit_ride(const CallerId& who,
                            std::int64_t speed_tenths_kmh) override;
    std::int64_t clock_now_ms() override;
    void clock_advance_ms(std::int64_t ms) override;

    FitnessService& fitness() { return *fitness_; }
    PricingService& pricing() { return *pricing_; }
    LocationService& location() { return *location_; }
    SafetyService& safety() { return *safety_; }
    TransitService& transit() { return *transit_; }
    SimulatedClock& clock() { return clock_; }

private:
    SimulatedClock clock_;
    std::unique_ptr<FitnessService> fitness_;
    std::unique_ptr<PricingService> pricing_;
    std::unique_ptr<LocationService> location_;
    std::unique_ptr<SafetyService> safety_;
    std::unique_ptr<TransitService> transit_;
};

/// Clock view that drives a target's clock (the campaign side of the
/// shared virtual timeline).
class TargetClock final : public Clock {
public:
    explicit TargetClock(TargetApi& target) : target_(target) {}

    std::int64_t now_ms() const override { return target_.clock_now_ms(); }
    void sleep_ms(std::int64_t ms) override {
        if (ms > 0) target_.clock_advance_ms(ms);
    }

private:
    TargetApi& target_;
};

} // namespace bprobe::harness
