#include "bprobe/campaign.hpp"

#include <algorithm>
#include <sstream>

#include "bprobe/error.hpp"
#include "bprobe/geoexp.hpp"
#include "bprobe/harness/http.hpp"
#include "bprobe/textgen.hpp"

namespace bprobe {

namespace {

using harness::Activity;
using harness::CallerId;
using harness::TargetApi;
using session::Scheduler;
using session::SessionLog;

CallerId caller_from(const session::Identity& id) {
    return CallerId{id.registration_id, id.user_id};
}

struct CampaignContext {
    const CampaignConfig& cfg;
    TargetApi& target;
    Clock& clock;
    Scheduler& scheduler;
    SessionLog& log;
    Rng rng;
};

nve::NowFn now_fn(CampaignContext& ctx) {
    return [&ctx] { return ctx.clock.now_ms(); };
}

// ---- fitness ----

void run_fitness_nve(CampaignContext& ctx, ReportBundle& bundle) {
    const StrategySpec& s = ctx.cfg.strategy;

    auto explore_input = [&](const std::string& input) {
        const bool duration = input == "duration";
        nve::NumericDomain d;
        d.x0 = s.x0;
        d.step = s.step;
        d.direction = s.direction;
        d.hard_cap = s.hard_cap;
        if (!d.hard_cap && s.direction > 0)
            d.hard_cap = std::int64_t{1} << 40; // stop unbounded variants

        // Nominal partner value accepted by every variant.
        const std::int64_t nominal_duration = 3'600;
        const std::int64_t nominal_distance = 1'000;

        nve::Probe probe = [&](std::int64_t v) {
            Activity a;
            a.type = "run";
            a.duration_s = duration ? v : nominal_duration;
            a.distance_m = duration ? nominal_distance : v;
            ProbeValue value = ProbeValue::integer(
                v, duration ? IntUnit::Seconds : IntUnit::Meters);
            validate_probe(value, ServiceKind::Fitness);
            ProbeOutcome out = ctx.scheduler.schedule_probe(
                [&](const session::Identity& id) {
                    return ctx.target.fitness_submit(caller_from(id), a);
                },
                value.display(), &ctx.log);
            return out;
        };
        nve::BoundaryReport r =
            nve::explore(d, probe, s.mode, s.confirm, now_fn(ctx));
        bundle.boundaries.emplace_back(input, std::move(r));
    };

    if (s.input == "both") {
        explore_input("duration");
        explore_input("distance");
    } else if (s.input == "duration" || s.input == "distance") {
        explore_input(s.input);
    } else {
        throw Error(ErrorCode::ConfigSemantic,
                    "fitness nve input must be duration, distance or both");
    }
}

// ---- pricing ----

void run_pricing_nve(CampaignContext& ctx, ReportBundle& bundle) {
    const StrategySpec& s = ctx.cfg.strategy;
    if (s.store.empty() || s.item.empty())
        throw Error(ErrorCode::ConfigSemantic,
                    "pricing strategy needs store and item");

    nve::NumericDomain d;
    d.x0 = s.x0;
    d.step = s.step;
    d.direction = s.direction;
    d.hard_cap = s.hard_cap;
    if (!d.hard_cap) d.hard_cap = s.direction > 0 ? s.x0 * 1000 : 0;

    nve::Probe probe = [&](std::int64_t cents) {
        ProbeValue value = ProbeValue::price_cents(cents);
        validate_probe(value, ServiceKind::Pricing);
        return ctx.scheduler.schedule_probe(
            [&](const session::Identity& id) {
                return ctx.target.pricing_submit(caller_from(id), s.store,
                                                 s.item, cents);
            },
            value.display(), &ctx.log);
    };
    nve::BoundaryReport r =
        nve::explore(d, probe, s.mode, s.confirm, now_fn(ctx));
    std::string label = std::string("price-") +
                        (s.direction > 0 ? "max" : "min") + ":" + s.store +
                        "/" + s.item;
    bundle.boundaries.emplace_back(label, std::move(r));
}

// ---- location ----

struct PoiSession {
    CampaignContext& ctx;
    bool cleanup;
    bool warmup;

    // Last accepted PoI, so precision exploration can delete on demand.
    std::optional<CallerId> last_owner;
    std::int64_t last_poi_id = 0;

    ProbeOutcome add(const GeoPoint& p) {
        ProbeValue value = ProbeValue::geo(p);
        validate_probe(value, ServiceKind::Location);
        if (warmup) // app-launch request sequence modeled as a no-op read
            ctx.target.poi_search(p.lon_deg() - 1e-6, p.lat_deg() - 1e-6,
                                  p.lon_deg() + 1e-6, p.lat_deg() + 1e-6);
        ProbeOutcome out = ctx.scheduler.schedule_probe(
            [&](const session::Identity& id) {
                harness::AddPoiResult res =
                    ctx.target.poi_add(caller_from(id), p);
                if (res.outcome.accepted()) {
                    last_owner = caller_from(id);
                    last_poi_id = res.poi_id;
                }
                return res.outcome;
            },
            value.display(), &ctx.log);
        return out;
    }

    void delete_last() {
        if (!last_owner) return;
        ctx.target.poi_delete(*last_owner, last_poi_id);
        last_owner.reset();
    }

    geo::GeoProbe probe_with_cleanup() {
        return [this](const GeoPoint& p) {
            ProbeOutcome out = add(p);
            if (cleanup && out.accepted()) delete_last();
            return out;
        };
    }
};

void run_location(CampaignContext& ctx, ReportBundle& bundle) {
    const StrategySpec& s = ctx.cfg.strategy;
    PoiSession poi{ctx, s.cleanup, s.warmup_search};

    switch (s.kind) {
        case StrategyKind::CeO:
            bundle.geo_results.push_back(geo::ce_o(poi.probe_with_cleanup()));
            break;
        case StrategyKind::CeLong:
        case StrategyKind::CeLat: {
            geo::AxisSweepOptions opts;
            opts.interleave = s.interleave;
            bundle.geo_results.push_back(geo::ce_axis(
                s.kind == StrategyKind::CeLong ? geo::Axis::Long
                                               : geo::Axis::Lat,
                s.fixed_deg, poi.probe_with_cleanup(), opts));
            break;
        }
        case StrategyKind::Ce2d:
            bundle.geo_results.push_back(
                geo::ce_2d(s.grid_step_deg, poi.probe_with_cleanup()));
            break;
        case StrategyKind::CePrec: {
            geo::PoiProbe hooks;
            hooks.add = [&poi](const GeoPoint& p) { return poi.add(p); };
            hooks.delete_last_accepted = [&poi] { poi.delete_last(); };
            GeoPoint origin = GeoPoint::parse(s.origin_lon, s.origin_lat);
            bundle.precision_reports.push_back(
                geo::ce_prec(origin, s.start_places, hooks));
            break;
        }
        default:
            throw Error(ErrorCode::ConfigSemantic,
                        "strategy does not apply to a location target");
    }
}

// ---- safety ----

ProbeOutcome submit_and_resolve(CampaignContext& ctx, const PostDraft& post) {
    ProbeValue value = ProbeValue::post(post);
    validate_probe(value, ServiceKind::Safety);
    return ctx.scheduler.schedule_probe(
        [&](const session::Identity& id) {
            harness::SubmitPostResult res =
                ctx.target.safety_submit(caller_from(id), post);
            if (res.outcome.status != ProbeOutcome::Status::Pending)
                return res.outcome;
            session::FeedbackOracle oracle;
            oracle.kind = session::FeedbackOracle::Kind::SecondaryQuery;
            return session::resolve_feedback(
                oracle,
                [&]() { return ctx.target.safety_decision(res.submission_id); },
                ctx.clock);
        },
        value.display(), &ctx.log);
}

const PostCategory kAllCategories[] = {
    PostCategory::Crime, PostCategory::Safety, PostCategory::LostPet,
    PostCategory::UnexpectedActivity};

void run_safety(CampaignContext& ctx, ReportBundle& bundle) {
    const StrategySpec& s = ctx.cfg.strategy;

    PostRunResult result;
    std::map<PostCategory, PostRunResult::Row> rows;
    for (PostCategory c : kAllCategories)
        rows[c] = PostRunResult::Row{c, 0, 0};

    if (s.kind == StrategyKind::Rsg) {
        result.strategy = "rsg";
        if (s.wordlist_path.empty())
            throw Error(ErrorCode::ConfigSemantic, "rsg needs a wordlist");
        std::vector<std::string> words =
            text::load_wordlist(s.wordlist_path);

        int avg_len = 30;
        if (!s.corpus_path.empty()) {
            text::CorpusStats stats =
                text::corpus_stats(text::load_corpus_jsonl(s.corpus_path));
            avg_len = stats.avg_sentence_len;
        }
        Rng rng = ctx.rng.fork("rsg");
        for (int i = 0; i < s.count; ++i) {
            PostCategory c = kAllCategories[i % 4];
            PostDraft post = text::rsg_generate(words, c, avg_len, rng);
            ProbeOutcome out = submit_and_resolve(ctx, post);
            rows[c].submitted += 1;
            if (out.accepted()) rows[c].accepted += 1;
        }
    } else if (s.kind == StrategyKind::Template) {
        result.strategy = "template";
        if (s.corpus_path.empty())
            throw Error(ErrorCode::ConfigSemantic, "template needs a corpus");
        text::CorpusStats stats =
            text::corpus_stats(text::load_corpus_jsonl(s.corpus_path));
        Rng rng = ctx.rng.fork("template");
        for (PostCategory c : kAllCategories) {
            for (int i = 0; i < s.count; ++i) {
                PostDraft post = text::template_generate(c, stats, rng);
                ProbeOutcome out = submit_and_resolve(ctx, post);
                rows[c].submitted += 1;
                if (out.accepted()) rows[c].accepted += 1;
            }
        }
    } else if (s.kind == StrategyKind::Plugin) {
        result.strategy = "plugin";
        text::GeneratorPlugin plugin(s.plugin_cmd);
        for (PostCategory c : kAllCategories) {
            for (int i = 0; i < s.count; ++i) {
                PostDraft post = plugin.next(c);
                ProbeOutcome out = submit_and_resolve(ctx, post);
                rows[c].submitted += 1;
                if (out.accepted()) rows[c].accepted += 1;
            }
        }
    } else {
        throw Error(ErrorCode::ConfigSemantic,
                    "strategy does not apply to a safety target");
    }

    for (PostCategory c : kAllCategories) result.rows.push_back(rows[c]);
    for (std::size_t i = 0; i < ctx.scheduler.pool().size(); ++i)
        if (!ctx.scheduler.pool().at(i).active()) result.blocked_identities++;
    bundle.post_results.push_back(std::move(result));
}

// ---- transit ----

void run_transit_sweep(CampaignContext& ctx, ReportBundle& bundle) {
    const StrategySpec& s = ctx.cfg.strategy;
    TransitSweepResult result;
    for (std::int64_t v = s.sweep_lo_tenths; v <= s.sweep_hi_tenths;
         v += s.sweep_step_tenths) {
        ProbeValue value = ProbeValue::speed_tenths_kmh(v);
        validate_probe(value, ServiceKind::Transit);
        harness::RideResult ride{};
        ctx.scheduler.schedule_probe(
            [&](const session::Identity& id) {
                ride = ctx.target.transit_ride(caller_from(id), v);
                return ride.outcome;
            },
            value.display(), &ctx.log);
        result.speeds_tenths.push_back(v);
        result.self_accepted.push_back(ride.self_accepted);
        result.observer_affected.push_back(ride.observer_affected);
        if (ride.self_accepted) result.accepted_count++;
    }
    bundle.transit_results.push_back(std::move(result));
}

void run_transit_max(CampaignContext& ctx, ReportBundle& bundle) {
    const StrategySpec& s = ctx.cfg.strategy;
    nve::NumericDomain d;
    d.x0 = s.x0 > 0 ? s.x0 : 100; // 10 km/h in tenths
    d.step = s.step;
    d.direction = +1;
    d.hard_cap = s.hard_cap;
    d.trust_initial = true; // walking pace is plainly ridable

    nve::Probe probe = [&](std::int64_t v) {
        ProbeOutcome out = ctx.scheduler.schedule_probe(
            [&](const session::Identity& id) {
                harness::RideResult ride =
                    ctx.target.transit_ride(caller_from(id), v);
                return ride.self_accepted
                           ? ProbeOutcome::make(ProbeOutcome::Status::Accepted)
                           : ProbeOutcome::make(ProbeOutcome::Status::Rejected,
                                                0, ride.outcome.detail);
            },
            ProbeValue::speed_tenths_kmh(v).display(), &ctx.log);
        return out;
    };
    nve::BoundaryReport r =
        nve::explore(d, probe, nve::RefineMode::Bisect, s.confirm, now_fn(ctx));
    bundle.boundaries.emplace_back("speed", std::move(r));
}

} // namespace

std::unique_ptr<harness::InProcessTarget> make_inprocess_target(
    const TargetSpec& spec) {
    harness::HarnessConfig cfg;
    cfg.seed = spec.harness_seed;
    cfg.location_validation = spec.location_validation;
    if (spec.kind == ServiceKind::Fitness && !spec.variant.empty()) {
        switch (harness::fitness_variant_from_name(spec.variant)) {
            case harness::FitnessVariant::Strava:
                cfg.fitness = harness::FitnessRules::strava();
                break;
            case harness::FitnessVariant::Fitbit:
                cfg.fitness = harness::FitnessRules::fitbit();
                break;
            case harness::FitnessVariant::MapMyRun:
                cfg.fitness = harness::FitnessRules::mapmyrun();
                break;
        }
    }
    if (spec.kind == ServiceKind::Location && !spec.variant.empty()) {
        cfg.location = harness::location_variant_from_name(spec.variant) ==
                               harness::LocationVariant::Police
                           ? harness::LocationRules::police()
                           : harness::LocationRules::toifi();
    }
    return std::make_unique<harness::InProcessTarget>(cfg);
}

CampaignRun run_campaign(const CampaignConfig& cfg, harness::TargetApi& target) {
    Rng campaign_rng(splitmix64(cfg.seed ^ fnv1a("campaign")));

    session::IdentityPool pool = session::mint_identities(
        cfg.identity.pool_size, cfg.seed, cfg.identity.rotation);

    std::unique_ptr<Clock> wall;
    std::unique_ptr<harness::TargetClock> target_clock;
    Clock* clock;
    if (cfg.wall_clock) {
        wall = std::make_unique<WallClock>();
        clock = wall.get();
    } else {
        target_clock = std::make_unique<harness::TargetClock>(target);
        clock = target_clock.get();
    }

    Scheduler scheduler(pool, cfg.rate_limits, *clock,
                        campaign_rng.fork("jitter"));

    ReportBundle bundle;
    bundle.config = cfg;

    CampaignContext ctx{cfg, target, *clock, scheduler, bundle.log,
                        campaign_rng.fork("strategy")};

    switch (cfg.target.kind) {
        case ServiceKind::Fitness:
            if (cfg.strategy.kind != StrategyKind::Nve)
                throw Error(ErrorCode::ConfigSemantic,
                            "fitness targets use the nve strategy");
            run_fitness_nve(ctx, bundle);
            break;
        case ServiceKind::Pricing:
            if (cfg.strategy.kind != StrategyKind::Nve)
                throw Error(ErrorCode::ConfigSemantic,
                            "pricing targets use the nve strategy");
            run_pricing_nve(ctx, bundle);
            break;
        case ServiceKind::Location:
            run_location(ctx, bundle);
            break;
        case ServiceKind::Safety:
            run_safety(ctx, bundle);
            break;
        case ServiceKind::Transit:
            if (cfg.strategy.kind == StrategyKind::TransitSweep)
                run_transit_sweep(ctx, bundle);
            else if (cfg.strategy.kind == StrategyKind::TransitMax)
                run_transit_max(ctx, bundle);
            else
                throw Error(ErrorCode::ConfigSemantic,
                            "transit targets use transit-sweep or transit-max");
            break;
    }

    CampaignRun run;
    run.oracle_inconsistent =
        std::any_of(bundle.boundaries.begin(), bundle.boundaries.end(),
                    [](const auto& b) { return b.second.inconsistent_oracle; });
    run.bundle = std::move(bundle);
    return run;
}

CampaignRun run_campaign(const CampaignConfig& cfg) {
    if (cfg.target.mode == TargetMode::Http) {
        harness::HttpTarget target(cfg.target.url);
        return run_campaign(cfg, target);
    }
    std::unique_ptr<harness::InProcessTarget> target =
        make_inprocess_target(cfg.target);
    return run_campaign(cfg, *target);
}

} // namespace bprobe
