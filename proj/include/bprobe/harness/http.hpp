#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <thread>

#include "bprobe/harness/target.hpp"

namespace bprobe::harness {

/// HTTP facade over an in-process harness. JSON bodies mirror the
/// in-process types; every endpoint reads the caller from the X-Identity
/// header ("registration_id:user_id").
class HttpFacade {
public:
    explicit HttpFacade(InProcessTarget& target);
    ~HttpFacade();

    /// Binds and serves on a background thread. port 0 picks a free port.
    /// Returns the bound port, or -1 when the port is unavailable.
    int start(const std::string& host, int port);
    void stop();

    int port() const { return port_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    int port_ = -1;
};

/// TargetApi speaking to a served harness over HTTP.
class HttpTarget final : public TargetApi {
public:
    explicit HttpTarget(const std::string& base_url);
    ~HttpTarget();

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

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace bprobe::harness
