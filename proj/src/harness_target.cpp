#include "bprobe/harness/target.hpp"

#include "bprobe/document.hpp"
#include "bprobe/error.hpp"

namespace bprobe::harness {

HarnessConfig HarnessConfig::from_document(const std::string& path) {
    Document doc = Document::load(path);
    HarnessConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(doc.root().get_int("seed", 1));

    if (const DocTable* t = doc.section("fitness")) {
        cfg.fitness = FitnessRules{};
        std::string variant = t->get_str("variant", "strava");
        if (variant == "strava") cfg.fitness = FitnessRules::strava();
        else if (variant == "fitbit") cfg.fitness = FitnessRules::fitbit();
        else if (variant == "mapmyrun") cfg.fitness = FitnessRules::mapmyrun();
        else throw Error(ErrorCode::ConfigSemantic,
                         "unknown fitness variant: " + variant);
        cfg.fitness.zero_accepted =
            t->get_bool("zero_accepted", cfg.fitness.zero_accepted);
        cfg.fitness.posts_per_day = static_cast<int>(
            t->get_int("posts_per_day", cfg.fitness.posts_per_day));
    }
    if (const DocTable* t = doc.section("location")) {
        std::string variant = t->get_str("variant", "toifi");
        cfg.location = variant == "police" ? LocationRules::police()
                                           : LocationRules::toifi();
        cfg.location.precision_places = static_cast<int>(
            t->get_int("precision_places", cfg.location.precision_places));
        cfg.location.per_identity_cap =
            t->get_int("per_identity_cap", cfg.location.per_identity_cap);
        cfg.location_validation = t->get_bool("validation", true);
    }
    if (const DocTable* t = doc.section("safety")) {
        cfg.safety.max_rejections_per_day = static_cast<int>(t->get_int(
            "max_rejections_per_day", cfg.safety.max_rejections_per_day));
    }
    if (const DocTable* t = doc.section("transit")) {
        cfg.transit.accept_threshold_tenths =
            t->get_int("accept_threshold_tenths",
                       cfg.transit.accept_threshold_tenths);
        cfg.transit.sub_threshold_fail_p = t->get_float(
            "sub_threshold_fail_p", cfg.transit.sub_threshold_fail_p);
    }
    return cfg;
}

InProcessTarget::InProcessTarget(const HarnessConfig& cfg) {
    NowMs now = [this] { return clock_.now_ms(); };
    fitness_ = std::make_unique<FitnessService>(cfg.fitness, now);
    pricing_ = std::make_unique<PricingService>(cfg.pricing);
    location_ = std::make_unique<LocationService>(cfg.location);
    if (!cfg.location_validation) location_->disable_validation();
    safety_ = std::make_unique<SafetyService>(cfg.safety, now, cfg.seed);
    transit_ = std::make_unique<TransitService>(cfg.transit, cfg.seed);
}

ProbeOutcome InProcessTarget::fitness_submit(const CallerId& who,
                                             const Activity& a) {
    return fitness_->submit(who, a);
}

FitnessStats InProcessTarget::fitness_stats(const CallerId& who) {
    return fitness_->stats(who);
}

std::vector<std::int64_t> InProcessTarget::fitness_render(const CallerId& who) {
    return fitness_->render(who);
}

ProbeOutcome InProcessTarget::pricing_submit(const CallerId& who,
                                             const std::string& store,
                                             const std::string& item,
                                             std::int64_t price_cents) {
    return pricing_->submit(who, store, item, price_cents);
}

PricingService::Range InProcessTarget::pricing_range(const std::string& store,
                                                     const std::string& item) {
    return pricing_->range(store, item);
}

AddPoiResult InProcessTarget::poi_add(const CallerId& who, const GeoPoint& p) {
    return location_->add(who, p);
}

std::vector<Poi> InProcessTarget::poi_search(double lon_min, double lat_min,
                                             double lon_max, double lat_max) {
    return location_->search(lon_min, lat_min, lon_max, lat_max);
}

DeleteResult InProcessTarget::poi_delete(const CallerId& who,
                                         std::int64_t poi_id) {
    return location_->remove(who, poi_id);
}

SubmitPostResult InProcessTarget::safety_submit(const CallerId& who,
                                                const PostDraft& post) {
    return safety_->submit(who, post);
}

std::vector<std::int64_t> InProcessTarget::safety_list(const CallerId& who) {
    return safety_->list(who);
}

std::optional<ProbeOutcome> InProcessTarget::safety_decision(
    std::int64_t submission_id) {
    return safety_->decision(submission_id);
}

RideResult InProcessTarget::transit_ride(const CallerId& who,
                                         std::int64_t speed_tenths_kmh) {
    return transit_->ride(who, speed_tenths_kmh);
}

std::int64_t InProcessTarget::clock_now_ms() { return clock_.now_ms(); }

void InProcessTarget::clock_advance_ms(std::int64_t ms) {
    clock_.sleep_ms(ms);
}

} // namespace bprobe::harness
