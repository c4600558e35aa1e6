// boundary-probe: campaign runner, harness server and report tooling.

#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "bprobe/campaign.hpp"
#include "bprobe/defense.hpp"
#include "bprobe/document.hpp"
#include "bprobe/error.hpp"
#include "bprobe/harness/http.hpp"

namespace {

using namespace bprobe;

volatile std::sig_atomic_t g_stop = 0;

void handle_signal(int) { g_stop = 1; }

int cmd_explore(const std::string& config_path,
                const std::optional<std::uint64_t>& seed_override,
                bool wall_clock) {
    CampaignConfig cfg = load_config(config_path);
    if (seed_override) cfg.seed = *seed_override;
    if (wall_clock) cfg.wall_clock = true;

    CampaignRun run = run_campaign(cfg);
    std::vector<std::string> written = run.bundle.write(cfg.report_path);
    for (const std::string& path : written)
        std::cout << "wrote " << path << "\n";
    if (run.oracle_inconsistent) {
        std::cerr << "oracle inconsistency detected; see report notes\n";
        return 2;
    }
    return 0;
}

int cmd_serve(const std::string& fixture_path, const std::string& host,
              int port) {
    harness::HarnessConfig cfg;
    if (!fixture_path.empty())
        cfg = harness::HarnessConfig::from_document(fixture_path);

    harness::InProcessTarget target(cfg);
    harness::HttpFacade facade(target);
    int bound = facade.start(host, port);
    if (bound < 0) {
        std::cerr << "cannot bind " << host << ":" << port << "\n";
        return 1;
    }
    std::cout << "listening on http://" << host << ":" << bound << "\n";
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    while (!g_stop) {
        WallClock().sleep_ms(100);
    }
    facade.stop();
    return 0;
}

struct DefendRule {
    std::string service;
    std::string applies_to;
    defense::DefenseRule rule;
    defense::QuantityUnit value_unit = defense::QuantityUnit::Meters;
    double value_scale = 1.0; // report value -> value_unit multiplier
    std::optional<double> extent_override; // fixed extent, in value_unit
    std::optional<double> table_percent;
};

std::vector<DefendRule> load_defense_rules(const std::string& path) {
    Document doc = Document::load(path);
    std::vector<DefendRule> out;
    for (const DocTable* t : doc.sections("rule")) {
        DefendRule r;
        r.service = t->get_str("service");
        r.applies_to = t->get_str("applies_to");
        r.rule.kind = defense::defense_kind_from_name(t->get_str("kind"));
        r.rule.cap = t->get_float("cap");
        r.rule.unit = defense::quantity_unit_from_name(t->get_str("unit"));
        r.rule.tolerance_fraction = t->get_float("tolerance", 0.0);
        r.rule.label = r.service;
        r.value_unit = defense::quantity_unit_from_name(
            t->get_str("value_unit", t->get_str("unit")));
        r.value_scale = t->get_float("value_scale", 1.0);
        if (t->has("extent_override"))
            r.extent_override = t->get_float("extent_override");
        if (t->has("table_percent"))
            r.table_percent = t->get_float("table_percent");
        out.push_back(std::move(r));
    }
    return out;
}

int cmd_defend(const std::string& report_path, const std::string& rules_path,
               const std::string& out_path) {
    nlohmann::json report;
    {
        std::ifstream in(report_path);
        if (!in) {
            std::cerr << "cannot open report " << report_path << "\n";
            return 1;
        }
        in >> report;
    }
    std::vector<DefendRule> rules = load_defense_rules(rules_path);

    std::ostringstream csv;
    csv << std::fixed << std::setprecision(2);
    csv << "service,applies_to,kind,cap,unit,allowed_max,original,"
           "reduction_percent,note\n";
    int rows = 0;
    for (const DefendRule& r : rules) {
        std::optional<double> extent = r.extent_override;
        if (!extent && report.contains("boundaries")) {
            for (const auto& b : report["boundaries"]) {
                if (b.at("input").get<std::string>() != r.applies_to) continue;
                extent = static_cast<double>(
                    b.at("boundary").at("last_accepted").get<std::int64_t>());
            }
        }
        if (!extent) {
            std::cerr << "warning: report has no extent for '" << r.applies_to
                      << "' (rule " << r.service << ")\n";
            continue;
        }
        double scale = r.extent_override ? 1.0 : r.value_scale;
        double original = defense::convert_unit(*extent * scale, r.value_unit,
                                                r.rule.unit);
        defense::ReductionReport red =
            defense::reduction(original, r.rule.allowed_max());
        std::string note;
        if (r.table_percent &&
            std::abs(*r.table_percent - red.reduction_percent) > 0.005) {
            std::ostringstream n;
            n << std::fixed << std::setprecision(2) << "published table says "
              << *r.table_percent << "% but the discovered extent computes to "
              << red.reduction_percent << "%";
            note = n.str();
        }
        csv << r.service << "," << r.applies_to << ","
            << defense::defense_kind_name(r.rule.kind) << "," << r.rule.cap
            << "," << defense::quantity_unit_name(r.rule.unit) << ","
            << r.rule.allowed_max() << "," << original << ","
            << red.reduction_percent << ",\"" << note << "\"\n";
        ++rows;
    }

    if (out_path.empty() || out_path == "-") {
        std::cout << csv.str();
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write " << out_path << "\n";
            return 1;
        }
        out << csv.str();
        std::cout << "wrote " << out_path << " (" << rows << " rows)\n";
    }
    if (rows == 0) std::cerr << "warning: no reduction rows produced\n";
    return 0;
}

int cmd_report(const std::string& report_path) {
    std::ifstream in(report_path);
    if (!in) {
        std::cerr << "cannot open report " << report_path << "\n";
        return 1;
    }
    nlohmann::json report;
    in >> report;

    const auto& campaign = report.at("campaign");
    std::cout << "campaign: " << campaign.at("strategy").get<std::string>()
              << " against " << campaign.at("target_kind").get<std::string>();
    std::string variant = campaign.value("target_variant", "");
    if (!variant.empty()) std::cout << " (" << variant << ")";
    std::cout << ", seed " << campaign.at("seed") << "\n";

    if (report.contains("boundaries")) {
        for (const auto& b : report["boundaries"]) {
            const auto& r = b.at("boundary");
            std::cout << "  " << b.at("input").get<std::string>()
                      << ": last_accepted=" << r.at("last_accepted")
                      << " first_rejected=" << r.at("first_rejected")
                      << " probes=" << r.at("probes_used")
                      << " refine=" << r.at("refine_mode").get<std::string>();
            if (r.value("open_boundary", false)) std::cout << " (open)";
            std::cout << "\n";
        }
    }
    if (report.contains("geo")) {
        for (const auto& g : report["geo"])
            std::cout << "  " << g.at("strategy").get<std::string>() << ": "
                      << g.at("probes") << " probes, " << g.at("accepted")
                      << " accepted, " << g.at("rejected") << " rejected, "
                      << g.at("rate_limited") << " rate-limited\n";
    }
    if (report.contains("precision")) {
        for (const auto& p : report["precision"])
            std::cout << "  precision: max_places=" << p.at("max_places")
                      << " min_separation_nano="
                      << std::min(
                             p.at("min_separation_lon_nano").get<std::int64_t>(),
                             p.at("min_separation_lat_nano").get<std::int64_t>())
                      << "\n";
    }
    if (report.contains("posts")) {
        for (const auto& pr : report["posts"]) {
            std::cout << "  posts (" << pr.at("strategy").get<std::string>()
                      << "):";
            for (const auto& row : pr.at("rows"))
                std::cout << " " << row.at("category").get<std::string>() << "="
                          << row.at("accepted") << "/" << row.at("submitted");
            std::cout << "\n";
        }
    }
    if (report.contains("transit")) {
        for (const auto& t : report["transit"])
            std::cout << "  transit sweep: " << t.at("self_accepted") << "/"
                      << t.at("values") << " self-accepted\n";
    }
    std::cout << "  probes logged: " << report.at("probes_logged") << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"black-box input-boundary discovery toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed_override;
    bool wall_clock = false;
    CLI::App* explore = app.add_subcommand(
        "explore", "run a campaign from a config file");
    explore->add_option("config", config_path, "campaign config")->required();
    explore->add_option("--seed", seed_override, "override the config seed");
    explore->add_flag("--wall-clock", wall_clock,
                      "use real time instead of the virtual clock");

    std::string fixture_path;
    std::string host = "127.0.0.1";
    int port = 8080;
    CLI::App* serve =
        app.add_subcommand("serve", "serve the simulated services over HTTP");
    serve->add_option("--fixture", fixture_path, "harness rules fixture");
    serve->add_option("--host", host, "bind host");
    serve->add_option("--port", port, "bind port (0 picks a free port)");

    std::string report_path, rules_path, out_path;
    CLI::App* defend = app.add_subcommand(
        "defend", "compute countermeasure reductions for a report");
    defend->add_option("report", report_path, "report json")->required();
    defend->add_option("rules", rules_path, "defense rules file")->required();
    defend->add_option("-o,--out", out_path, "output csv ('-' for stdout)");

    std::string pretty_path;
    CLI::App* report_cmd =
        app.add_subcommand("report", "pretty-print an existing report");
    report_cmd->add_option("report", pretty_path, "report json")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (explore->parsed())
            return cmd_explore(config_path, seed_override, wall_clock);
        if (serve->parsed()) return cmd_serve(fixture_path, host, port);
        if (defend->parsed())
            return cmd_defend(report_path, rules_path, out_path);
        if (report_cmd->parsed()) return cmd_report(pretty_path);
    } catch (const Error& e) {
        std::cerr << "error (" << error_code_name(e.code()) << "): " << e.what()
                  << "\n";
        return e.code() == ErrorCode::InconsistentOracle ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
