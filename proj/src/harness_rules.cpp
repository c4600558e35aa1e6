#include "bprobe/harness/rules.hpp"

#include <algorithm>
#include <cmath>

#include "bprobe/error.hpp"

namespace bprobe::harness {

const char* fitness_variant_name(FitnessVariant v) {
    switch (v) {
        case FitnessVariant::Strava: return "strava";
        case FitnessVariant::Fitbit: return "fitbit";
        case FitnessVariant::MapMyRun: return "mapmyrun";
    }
    return "strava";
}

FitnessVariant fitness_variant_from_name(const std::string& name) {
    if (name == "strava") return FitnessVariant::Strava;
    if (name == "fitbit") return FitnessVariant::Fitbit;
    if (name == "mapmyrun") return FitnessVariant::MapMyRun;
    throw Error(ErrorCode::ConfigSemantic, "unknown fitness variant: " + name);
}

FitnessRules FitnessRules::strava() {
    FitnessRules r;
    r.variant = FitnessVariant::Strava;
    r.min_duration_s = 0;
    r.max_duration_s = 31'622'400;
    r.min_distance_m = 0;
    r.max_distance_m = 50'000'000;
    r.zero_accepted = true;
    return r;
}

FitnessRules FitnessRules::fitbit() {
    FitnessRules r;
    r.variant = FitnessVariant::Fitbit;
    r.min_duration_s = 1;
    r.max_duration_s = 2'147'483'647;
    r.min_distance_m = 1'000;        // 1 km
    r.max_distance_m = 1'609'344;    // 10,000 miles
    r.zero_accepted = false;
    return r;
}

FitnessRules FitnessRules::mapmyrun() {
    FitnessRules r;
    r.variant = FitnessVariant::MapMyRun;
    r.min_duration_s = 0;
    r.min_distance_m = 0;
    r.unbounded_duration = true;
    r.max_distance_m = 0; // unbounded; stores whatever arrives
    return r;
}

std::int64_t PricingItem::min_cents() const {
    if (min_override_cents) return *min_override_cents;
    double fraction = milk_tier && value_cents > 500 ? 0.30 : 0.10;
    // Round half-up to the cent.
    return static_cast<std::int64_t>(
        std::floor(fraction * static_cast<double>(value_cents) + 0.5));
}

std::int64_t PricingItem::max_cents() const {
    if (max_override_cents) return *max_override_cents;
    std::int64_t whole_dollars = (value_cents + 99) / 100; // ceil to dollars
    return 200 * whole_dollars;
}

const PricingItem* PricingRules::find(const std::string& store,
                                      const std::string& item) const {
    for (const PricingItem& it : items)
        if (it.store == store && it.item == item) return &it;
    return nullptr;
}

PricingRules PricingRules::grocery_fixture() {
    PricingRules r;
    auto add = [&](const std::string& store, const std::string& item,
                   std::int64_t value, std::optional<std::int64_t> min_ov = {},
                   std::optional<std::int64_t> max_ov = {}, bool milk = false) {
        r.items.push_back(PricingItem{store, item, value, min_ov, max_ov, milk});
    };

    // trader-joes basket
    add("trader-joes", "apples", 49);
    add("trader-joes", "bananas", 19, 9);
    add("trader-joes", "strawberries", 99, 9);
    add("trader-joes", "eggs", 199);
    add("trader-joes", "chicken-breasts", 269);
    add("trader-joes", "organic-whole-milk", 349);

    // amazon-prime basket
    add("amazon-prime", "apples", 158);
    add("amazon-prime", "bananas", 55);
    add("amazon-prime", "strawberries", 500, 221, 830);
    add("amazon-prime", "eggs", 212);
    add("amazon-prime", "chicken-breasts", 325);
    add("amazon-prime", "organic-whole-milk", 376);

    // trader-joes milk shelf (half-gallon and gallon variants)
    add("trader-joes", "whole-milk-1", 129, {}, {}, true);
    add("trader-joes", "whole-milk-2", 229, {}, {}, true);
    add("trader-joes", "organic-whole-milk-1", 299, {}, {}, true);
    add("trader-joes", "organic-whole-milk-2", 569, {}, 1058, true);
    add("trader-joes", "homogenized-whole-milk", 599, {}, 659, true);
    return r;
}

const char* location_variant_name(LocationVariant v) {
    switch (v) {
        case LocationVariant::ToiFi: return "toifi";
        case LocationVariant::Police: return "police";
    }
    return "toifi";
}

LocationVariant location_variant_from_name(const std::string& name) {
    if (name == "toifi") return LocationVariant::ToiFi;
    if (name == "police") return LocationVariant::Police;
    throw Error(ErrorCode::ConfigSemantic, "unknown location variant: " + name);
}

LocationRules LocationRules::toifi() {
    LocationRules r;
    r.variant = LocationVariant::ToiFi;
    r.precision_places = 7;
    r.min_separation_nano = 0; // no proximity rule
    r.reject_axes_and_poles = false;
    r.per_identity_cap = 0;
    return r;
}

LocationRules LocationRules::police() {
    LocationRules r;
    r.variant = LocationVariant::Police;
    r.precision_places = 5;
    r.min_separation_nano = 2'000'000; // 0.002 degrees
    r.reject_axes_and_poles = true;
    r.per_identity_cap = 50;
    return r;
}

SafetyRules SafetyRules::standard() {
    SafetyRules r;
    r.category_keywords = {
        {PostCategory::Crime, {"stolen", "packages", "porch"}},
        {PostCategory::Safety, {"fire", "smoke", "alarm"}},
        {PostCategory::LostPet, {"dog", "missing", "collar"}},
        {PostCategory::UnexpectedActivity, {"stranger", "yard", "camera"}},
    };
    r.concrete_nouns = {"packages", "porch", "alarm",  "collar", "dog",
                        "yard",     "camera", "door",  "street", "car",
                        "fence",    "smoke"};
    return r;
}

bool SafetyRules::post_acceptable(const PostDraft& post) const {
    auto it = category_keywords.find(post.category);
    if (it == category_keywords.end()) return false;

    std::vector<std::string> words = tokenize_words(post.description);
    int threshold = post.image == PostImage::Relevant
                        ? min_words_with_relevant_image
                        : min_words;
    if (static_cast<int>(words.size()) < threshold) return false;

    auto contains_any = [&](const std::vector<std::string>& vocab) {
        for (const std::string& w : words)
            if (std::find(vocab.begin(), vocab.end(), w) != vocab.end())
                return true;
        return false;
    };
    return contains_any(it->second) && contains_any(concrete_nouns);
}

double TransitRules::observer_p(std::int64_t speed_tenths) const {
    if (speed_tenths <= observer_lo_speed_tenths) return observer_lo_p;
    if (speed_tenths >= accept_threshold_tenths) return observer_hi_p;
    double t = static_cast<double>(speed_tenths - observer_lo_speed_tenths) /
               static_cast<double>(accept_threshold_tenths -
                                   observer_lo_speed_tenths);
    return observer_lo_p + t * (observer_hi_p - observer_lo_p);
}

} // namespace bprobe::harness
