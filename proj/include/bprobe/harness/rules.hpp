#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bprobe/post.hpp"

namespace bprobe::harness {

enum class FitnessVariant { Strava, Fitbit, MapMyRun };

const char* fitness_variant_name(FitnessVariant v);
FitnessVariant fitness_variant_from_name(const std::string& name);

struct FitnessRules {
    FitnessVariant variant = FitnessVariant::Strava;

    std::int64_t min_duration_s = 0;
    std::int64_t max_duration_s = 31'622'400;
    std::int64_t min_distance_m = 0;
    std::int64_t max_distance_m = 50'000'000;

    /// When false the minimum is exclusive (zero rejected).
    bool zero_accepted = true;

    /// Duration unbounded server-side; client render wraps mod one day.
    bool unbounded_duration = false;
    std::int64_t render_modulus_s = 86'400;

    std::uint64_t accumulated_distance_cap = 4'294'967'295ULL;
    int posts_per_day = 50;

    static FitnessRules strava();
    static FitnessRules fitbit();
    static FitnessRules mapmyrun();
};

struct PricingItem {
    std::string store;
    std::string item;
    std::int64_t value_cents = 0;
    std::optional<std::int64_t> min_override_cents;
    std::optional<std::int64_t> max_override_cents;
    bool milk_tier = false; // 30% minimum when value > $5

    std::int64_t min_cents() const;
    std::int64_t max_cents() const;
};

struct PricingRules {
    std::vector<PricingItem> items;

    const PricingItem* find(const std::string& store,
                            const std::string& item) const;

    /// The grocery fixture the rest of the project explores against.
    static PricingRules grocery_fixture();
};

enum class LocationVariant { ToiFi, Police };

const char* location_variant_name(LocationVariant v);
LocationVariant location_variant_from_name(const std::string& name);

struct LocationRules {
    LocationVariant variant = LocationVariant::ToiFi;

    bool range_check = true;
    int precision_places = 7;

    /// Chebyshev gap below which a new PoI is rejected, nano-degrees.
    /// 0 disables the separation rule.
    std::int64_t min_separation_nano = 0;

    /// Reject lon==0, lat==0 and lat==+/-90 (applied after range check).
    bool reject_axes_and_poles = false;

    /// Requests an identity may make before being drained; 0 = unlimited.
    std::int64_t per_identity_cap = 0;

    static LocationRules toifi();
    static LocationRules police();
};

struct SafetyRules {
    std::map<PostCategory, std::vector<std::string>> category_keywords;
    std::vector<std::string> concrete_nouns;

    int min_words = 12;
    int min_words_with_relevant_image = 8;

    std::int64_t decision_latency_lo_ms = 60'000;  // 1 virtual minute
    std::int64_t decision_latency_hi_ms = 420'000; // 7 virtual minutes

    int max_rejections_per_day = 8;

    static SafetyRules standard();

    bool post_acceptable(const PostDraft& post) const;
};

struct TransitRules {
    std::int64_t accept_threshold_tenths = 23'500; // 2350.0 km/h
    double sub_threshold_fail_p = 0.03;

    // Observer propagation probability anchors, linear in between.
    std::int64_t observer_lo_speed_tenths = 10'000; // 1000.0 km/h
    double observer_lo_p = 0.85;
    double observer_hi_p = 0.30; // at the acceptance threshold

    double observer_p(std::int64_t speed_tenths) const;
};

} // namespace bprobe::harness
