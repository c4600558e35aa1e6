#include "bprobe/report.hpp"

#include <filesystem>
#include <fstream>

#include "bprobe/document.hpp"
#include "bprobe/error.hpp"

#include "json.hpp"

namespace bprobe {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json boundary_json(const nve::BoundaryReport& r) {
    ordered_json j;
    j["last_accepted"] = r.last_accepted;
    j["first_rejected"] = r.first_rejected;
    j["probes_used"] = r.probes_used;
    j["phase_split"] = r.phase_split;
    j["refine_mode"] = r.refine_mode;
    j["step"] = r.step;
    j["direction"] = r.direction;
    if (r.open_boundary) j["open_boundary"] = true;
    if (r.inconsistent_oracle) j["inconsistent_oracle"] = true;
    if (!r.notes.empty()) j["notes"] = r.notes;
    ordered_json trace = ordered_json::array();
    for (const nve::TraceEntry& e : r.trace) {
        ordered_json row;
        row["value"] = e.value;
        row["status"] = outcome_status_name(e.status);
        row["t_virtual"] = e.t_virtual;
        trace.push_back(std::move(row));
    }
    j["trace"] = std::move(trace);
    return j;
}

ordered_json geo_json(const geo::GeoCampaignResult& g) {
    ordered_json j;
    j["strategy"] = g.strategy;
    j["probes"] = g.probes.size();
    j["accepted"] = g.accepted_count;
    j["rejected"] = g.rejected_count;
    j["rate_limited"] = g.rate_limited_count;
    if (!g.notes.empty()) j["notes"] = g.notes;
    return j;
}

ordered_json precision_json(const geo::PrecisionReport& p) {
    ordered_json j;
    j["max_places"] = p.max_places;
    j["min_separation_lon_nano"] = p.min_separation_lon_nano;
    j["min_separation_lat_nano"] = p.min_separation_lat_nano;
    j["probes"] = p.trace.probes.size();
    return j;
}

ordered_json posts_json(const PostRunResult& r) {
    ordered_json j;
    j["strategy"] = r.strategy;
    ordered_json rows = ordered_json::array();
    for (const PostRunResult::Row& row : r.rows) {
        ordered_json o;
        o["category"] = post_category_name(row.category);
        o["accepted"] = row.accepted;
        o["submitted"] = row.submitted;
        rows.push_back(std::move(o));
    }
    j["rows"] = std::move(rows);
    j["blocked_identities"] = r.blocked_identities;
    return j;
}

ordered_json transit_json(const TransitSweepResult& t) {
    ordered_json j;
    j["values"] = t.speeds_tenths.size();
    j["self_accepted"] = t.accepted_count;
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < t.speeds_tenths.size(); ++i) {
        ordered_json o;
        o["speed_tenths_kmh"] = t.speeds_tenths[i];
        o["self_accepted"] = static_cast<bool>(t.self_accepted[i]);
        o["observer_affected"] = static_cast<bool>(t.observer_affected[i]);
        rows.push_back(std::move(o));
    }
    j["rides"] = std::move(rows);
    return j;
}

ordered_json reduction_json(const defense::ReductionReport& r) {
    ordered_json j;
    j["original_extent"] = r.original_extent;
    j["allowed_extent"] = r.allowed_extent;
    j["reduction_percent"] = r.reduction_percent;
    j["note"] = r.note;
    return j;
}

} // namespace

std::string boundary_report_to_json(const nve::BoundaryReport& r) {
    return boundary_json(r).dump(2) + "\n";
}

std::string ReportBundle::to_json() const {
    ordered_json j;

    ordered_json campaign;
    campaign["seed"] = config.seed;
    campaign["target_kind"] = service_kind_name(config.target.kind);
    campaign["target_variant"] = config.target.variant;
    campaign["harness_seed"] = config.target.harness_seed;
    campaign["strategy"] = strategy_kind_name(config.strategy.kind);
    campaign["identity_pool"] = config.identity.pool_size;
    campaign["rotation"] = session::rotation_name(config.identity.rotation);
    j["campaign"] = std::move(campaign);

    if (!boundaries.empty()) {
        ordered_json arr = ordered_json::array();
        for (const auto& [label, report] : boundaries) {
            ordered_json o;
            o["input"] = label;
            o["boundary"] = boundary_json(report);
            arr.push_back(std::move(o));
        }
        j["boundaries"] = std::move(arr);
    }
    if (!geo_results.empty()) {
        ordered_json arr = ordered_json::array();
        for (const auto& g : geo_results) arr.push_back(geo_json(g));
        j["geo"] = std::move(arr);
    }
    if (!precision_reports.empty()) {
        ordered_json arr = ordered_json::array();
        for (const auto& p : precision_reports) arr.push_back(precision_json(p));
        j["precision"] = std::move(arr);
    }
    if (!post_results.empty()) {
        ordered_json arr = ordered_json::array();
        for (const auto& p : post_results) arr.push_back(posts_json(p));
        j["posts"] = std::move(arr);
    }
    if (!transit_results.empty()) {
        ordered_json arr = ordered_json::array();
        for (const auto& t : transit_results) arr.push_back(transit_json(t));
        j["transit"] = std::move(arr);
    }
    if (!reductions.empty()) {
        ordered_json arr = ordered_json::array();
        for (const auto& r : reductions) arr.push_back(reduction_json(r));
        j["reductions"] = std::move(arr);
    }
    j["probes_logged"] = log.records().size();
    return j.dump(2) + "\n";
}

std::vector<std::string> ReportBundle::write(const std::string& prefix) const {
    std::vector<std::string> written;

    std::filesystem::path parent =
        std::filesystem::path(prefix).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);

    auto emit = [&](const std::string& path, const std::string& content) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
        out << content;
        written.push_back(path);
    };

    emit(prefix + ".json", to_json());
    emit(prefix + ".session.jsonl", log.to_jsonl());
    for (const auto& g : geo_results)
        emit(prefix + "." + g.strategy + ".csv", g.to_csv());
    for (const auto& p : precision_reports)
        emit(prefix + "." + p.trace.strategy + ".csv", p.trace.to_csv());
    return written;
}

} // namespace bprobe
