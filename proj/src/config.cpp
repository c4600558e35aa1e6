#include "bprobe/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "bprobe/document.hpp"
#include "bprobe/error.hpp"

namespace bprobe {

const char* strategy_kind_name(StrategyKind k) {
    switch (k) {
        case StrategyKind::Nve: return "nve";
        case StrategyKind::CeO: return "ce-o";
        case StrategyKind::CeLong: return "ce-long";
        case StrategyKind::CeLat: return "ce-lat";
        case StrategyKind::Ce2d: return "ce-2d";
        case StrategyKind::CePrec: return "ce-prec";
        case StrategyKind::Rsg: return "rsg";
        case StrategyKind::Template: return "template";
        case StrategyKind::Plugin: return "plugin";
        case StrategyKind::TransitSweep: return "transit-sweep";
        case StrategyKind::TransitMax: return "transit-max";
    }
    return "nve";
}

StrategyKind strategy_kind_from_name(const std::string& name) {
    if (name == "nve") return StrategyKind::Nve;
    if (name == "ce-o") return StrategyKind::CeO;
    if (name == "ce-long") return StrategyKind::CeLong;
    if (name == "ce-lat") return StrategyKind::CeLat;
    if (name == "ce-2d") return StrategyKind::Ce2d;
    if (name == "ce-prec") return StrategyKind::CePrec;
    if (name == "rsg") return StrategyKind::Rsg;
    if (name == "template") return StrategyKind::Template;
    if (name == "plugin") return StrategyKind::Plugin;
    if (name == "transit-sweep") return StrategyKind::TransitSweep;
    if (name == "transit-max") return StrategyKind::TransitMax;
    throw Error(ErrorCode::ConfigSemantic, "unknown strategy: " + name);
}

namespace {

std::int64_t speed_tenths_from(const DocTable& t, const std::string& key,
                               std::int64_t dflt_tenths) {
    if (!t.has(key)) return dflt_tenths;
    // Speeds are km/h with at most one decimal place; cents parsing gives
    // exact hundredths, so tenths = cents / 10.
    std::int64_t cents = t.get_cents(key);
    if (cents % 10 != 0)
        throw Error(ErrorCode::ConfigSemantic,
                    "key " + key + " allows one decimal place");
    return cents / 10;
}

TargetSpec parse_target(const Document& doc) {
    TargetSpec spec;
    const DocTable* t = doc.section("target");
    if (!t) throw Error(ErrorCode::ConfigSemantic, "missing [target] section");

    spec.kind = service_kind_from_name(t->get_str("kind"));
    spec.variant = t->get_str("variant", "");
    std::string mode = t->get_str("mode", "inprocess");
    if (mode == "inprocess") spec.mode = TargetMode::InProcess;
    else if (mode == "http") spec.mode = TargetMode::Http;
    else throw Error(ErrorCode::ConfigSemantic, "unknown target mode: " + mode);
    spec.url = t->get_str("url", "");
    if (spec.mode == TargetMode::Http && spec.url.empty())
        throw Error(ErrorCode::ConfigSemantic, "http target needs a url");
    spec.harness_seed =
        static_cast<std::uint64_t>(t->get_int("harness_seed", 1));
    spec.location_validation = t->get_bool("validation", true);

    if (spec.kind == ServiceKind::Fitness && spec.variant.empty())
        spec.variant = "strava";
    if (spec.kind == ServiceKind::Location && spec.variant.empty())
        spec.variant = "toifi";
    return spec;
}

StrategySpec parse_strategy(const Document& doc) {
    StrategySpec s;
    const DocTable* t = doc.section("strategy");
    if (!t) throw Error(ErrorCode::ConfigSemantic, "missing [strategy] section");

    s.kind = strategy_kind_from_name(t->get_str("kind"));
    s.input = t->get_str("input", s.input);
    s.x0 = t->get_int("x0", s.x0);
    s.step = t->get_int("step", s.step);
    s.direction = static_cast<int>(t->get_int("direction", s.direction));
    if (t->has("hard_cap")) s.hard_cap = t->get_int("hard_cap");
    s.mode = nve::refine_mode_from_name(t->get_str("mode", "auto"));

    s.confirm.n_extra =
        static_cast<int>(t->get_int("confirm_extra", 0));
    s.confirm.step = t->get_int("confirm_step", 10);
    s.confirm.fail_threshold = static_cast<int>(
        t->get_int("confirm_fail_threshold", s.confirm.n_extra + 1));

    s.store = t->get_str("store", "");
    s.item = t->get_str("item", "");

    s.fixed_deg = t->get_int("fixed", 1);
    s.grid_step_deg = static_cast<int>(t->get_int("grid_step", 5));
    s.interleave = t->get_bool("interleave", true);
    s.origin_lon = t->get_str("origin_lon", "1.0");
    s.origin_lat = t->get_str("origin_lat", "1.0");
    s.start_places = static_cast<int>(t->get_int("start_places", 9));
    s.cleanup = t->get_bool("cleanup", true);
    s.warmup_search = t->get_bool("warmup_search", false);

    s.count = static_cast<int>(t->get_int("count", 100));
    s.corpus_path = t->get_str("corpus", "");
    s.wordlist_path = t->get_str("wordlist", "");
    if (t->has("plugin_cmd")) {
        std::istringstream cmd(t->get_str("plugin_cmd"));
        std::string word;
        while (cmd >> word) s.plugin_cmd.push_back(word);
    }
    if (s.kind == StrategyKind::Plugin && s.plugin_cmd.empty())
        throw Error(ErrorCode::ConfigSemantic,
                    "plugin strategy needs plugin_cmd");

    s.sweep_lo_tenths = speed_tenths_from(*t, "sweep_lo_kmh", 100);
    s.sweep_hi_tenths = speed_tenths_from(*t, "sweep_hi_kmh", 10'000);
    s.sweep_step_tenths = speed_tenths_from(*t, "sweep_step_kmh", 100);

    s.probe_delay_ms = t->get_int("probe_delay_ms", 0);

    // Transit scalar searches run in tenths of km/h.
    if (s.kind == StrategyKind::TransitMax) {
        s.x0 = speed_tenths_from(*t, "x0_kmh", s.x0 * 10);
        s.step = speed_tenths_from(*t, "step_kmh", s.step * 10);
        s.confirm.step = speed_tenths_from(*t, "confirm_step_kmh",
                                           s.confirm.step * 10);
    }

    // Validation.
    if (s.step <= 0)
        throw Error(ErrorCode::ConfigSemantic, "step must be positive");
    if (s.direction != 1 && s.direction != -1)
        throw Error(ErrorCode::ConfigSemantic, "direction must be 1 or -1");
    if (s.count < 1)
        throw Error(ErrorCode::ConfigSemantic, "count must be >= 1");
    if (s.grid_step_deg <= 0 || 360 % s.grid_step_deg != 0 ||
        180 % s.grid_step_deg != 0)
        throw Error(ErrorCode::ConfigSemantic,
                    "grid_step must divide 360 and 180");
    if (s.start_places < 1 || s.start_places > 9)
        throw Error(ErrorCode::ConfigSemantic, "start_places must be in 1..9");
    s.confirm.validate();
    return s;
}

IdentitySpec parse_identity(const Document& doc) {
    IdentitySpec spec;
    if (const DocTable* t = doc.section("identity")) {
        std::int64_t size = t->get_int("pool_size", 1);
        if (size < 1)
            throw Error(ErrorCode::ConfigSemantic,
                        "identity pool size must be >= 1");
        spec.pool_size = static_cast<std::size_t>(size);
        spec.rotation =
            session::rotation_from_name(t->get_str("rotation", "round-robin"));
    }
    return spec;
}

std::vector<session::RateLimitPolicy> parse_limits(const Document& doc) {
    std::vector<session::RateLimitPolicy> out;
    for (const DocTable* t : doc.sections("rate_limit")) {
        session::RateLimitPolicy p;
        std::string scope = t->get_str("scope", "per-identity");
        if (scope == "per-identity")
            p.scope = session::RateLimitPolicy::Scope::PerIdentity;
        else if (scope == "global")
            p.scope = session::RateLimitPolicy::Scope::Global;
        else
            throw Error(ErrorCode::ConfigSemantic, "unknown scope: " + scope);
        p.window_ms = t->get_int("window_ms", p.window_ms);
        p.max_requests = t->get_int("max_requests", 0);
        p.max_rejections = t->get_int("max_rejections", 0);
        p.min_gap_ms = t->get_int("min_gap_ms", 0);
        p.jitter_lo_ms = t->get_int("jitter_lo_ms", 0);
        p.jitter_hi_ms = t->get_int("jitter_hi_ms", 0);
        if (p.window_ms <= 0)
            throw Error(ErrorCode::ConfigSemantic, "window must be positive");
        if (p.min_gap_ms < 0 || p.jitter_lo_ms < 0 ||
            p.jitter_hi_ms < p.jitter_lo_ms)
            throw Error(ErrorCode::ConfigSemantic, "bad gap/jitter bounds");
        out.push_back(p);
    }
    return out;
}

} // namespace

CampaignConfig parse_config(const std::string& text) {
    Document doc = Document::parse(text);

    CampaignConfig cfg;
    cfg.target = parse_target(doc);
    cfg.strategy = parse_strategy(doc);
    cfg.identity = parse_identity(doc);
    cfg.rate_limits = parse_limits(doc);

    // Seed precedence: config value, then BOUNDARY_PROBE_SEED, then 0.
    if (doc.root().has("seed")) {
        cfg.seed = static_cast<std::uint64_t>(doc.root().get_int("seed"));
    } else if (const char* env = std::getenv("BOUNDARY_PROBE_SEED")) {
        cfg.seed = static_cast<std::uint64_t>(std::strtoull(env, nullptr, 10));
    }
    cfg.report_path = doc.root().get_str("report", "report");
    cfg.wall_clock = doc.root().get_bool("wall_clock", false);
    return cfg;
}

CampaignConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace bprobe
