#include "bprobe/harness/http.hpp"

#include <atomic>

#include "bprobe/error.hpp"

#include "httplib.h"
#include "json.hpp"

namespace bprobe::harness {

namespace {

using nlohmann::json;

CallerId caller_from_request(const httplib::Request& req) {
    std::string header = req.get_header_value("X-Identity");
    CallerId who;
    std::size_t sep = header.find(':');
    if (sep == std::string::npos) {
        who.registration_id = header;
        who.user_id = header;
    } else {
        who.registration_id = header.substr(0, sep);
        who.user_id = header.substr(sep + 1);
    }
    return who;
}

json outcome_to_json(const ProbeOutcome& o) {
    json j;
    j["status"] = outcome_status_name(o.status);
    j["latency_ms"] = o.latency_ms;
    j["detail"] = o.detail;
    return j;
}

ProbeOutcome outcome_from_json(const json& j) {
    ProbeOutcome o;
    std::string status = j.at("status").get<std::string>();
    if (status == "accepted") o.status = ProbeOutcome::Status::Accepted;
    else if (status == "rejected") o.status = ProbeOutcome::Status::Rejected;
    else if (status == "rate-limited") o.status = ProbeOutcome::Status::RateLimited;
    else if (status == "blocked") o.status = ProbeOutcome::Status::Blocked;
    else if (status == "pending") o.status = ProbeOutcome::Status::Pending;
    o.latency_ms = j.value("latency_ms", 0);
    o.detail = j.value("detail", "");
    return o;
}

json geo_to_json(const GeoPoint& p) {
    json j;
    j["lon"] = p.lon_text();
    j["lat"] = p.lat_text();
    return j;
}

const char* delete_result_name(DeleteResult r) {
    switch (r) {
        case DeleteResult::Ok: return "ok";
        case DeleteResult::NotFound: return "not-found";
        case DeleteResult::NotOwner: return "not-owner";
    }
    return "not-found";
}

} // namespace

struct HttpFacade::Impl {
    InProcessTarget& target;
    httplib::Server server;
    std::thread thread;

    explicit Impl(InProcessTarget& t) : target(t) { install_routes(); }

    void install_routes() {
        server.Post("/fitness/activity", [this](const httplib::Request& req,
                                                httplib::Response& res) {
            json body = json::parse(req.body);
            Activity a;
            a.type = body.value("type", "run");
            a.duration_s = body.at("duration_s").get<std::int64_t>();
            a.distance_m = body.at("distance_m").get<std::int64_t>();
            ProbeOutcome out =
                target.fitness_submit(caller_from_request(req), a);
            res.set_content(outcome_to_json(out).dump(), "application/json");
        });

        server.Get(R"(/fitness/stats/(.+))", [this](const httplib::Request& req,
                                                    httplib::Response& res) {
            CallerId who;
            who.user_id = req.matches[1];
            who.registration_id = req.get_header_value("X-Identity");
            std::size_t sep = who.registration_id.find(':');
            if (sep != std::string::npos)
                who.registration_id = who.registration_id.substr(0, sep);
            FitnessStats s = target.fitness_stats(who);
            json j;
            j["activity_count"] = s.activity_count;
            j["total_duration_s"] = s.total_duration_s;
            j["total_distance_m"] = s.total_distance_m;
            res.set_content(j.dump(), "application/json");
        });

        server.Get(R"(/fitness/render/(.+))",
                   [this](const httplib::Request& req, httplib::Response& res) {
                       CallerId who;
                       who.user_id = req.matches[1];
                       who.registration_id =
                           caller_from_request(req).registration_id;
                       json j = target.fitness_render(who);
                       res.set_content(j.dump(), "application/json");
                   });

        server.Post("/pricing/price", [this](const httplib::Request& req,
                                             httplib::Response& res) {
            json body = json::parse(req.body);
            try {
                ProbeOutcome out = target.pricing_submit(
                    caller_from_request(req),
                    body.at("store").get<std::string>(),
                    body.at("item").get<std::string>(),
                    body.at("price_cents").get<std::int64_t>());
                res.set_content(outcome_to_json(out).dump(),
                                "application/json");
            } catch (const Error& e) {
                res.status = 404;
                json j;
                j["error"] = e.what();
                res.set_content(j.dump(), "application/json");
            }
        });

        server.Get("/pricing/range", [this](const httplib::Request& req,
                                            httplib::Response& res) {
            try {
                PricingService::Range r = target.pricing_range(
                    req.get_param_value("store"), req.get_param_value("item"));
                json j;
                j["min_cents"] = r.min_cents;
                j["max_cents"] = r.max_cents;
                res.set_content(j.dump(), "application/json");
            } catch (const Error& e) {
                res.status = 404;
                json j;
                j["error"] = e.what();
                res.set_content(j.dump(), "application/json");
            }
        });

        server.Post("/poi", [this](const httplib::Request& req,
                                   httplib::Response& res) {
            json body = json::parse(req.body);
            GeoPoint p = GeoPoint::parse(body.at("lon").get<std::string>(),
                                         body.at("lat").get<std::string>());
            AddPoiResult r = target.poi_add(caller_from_request(req), p);
            json j = outcome_to_json(r.outcome);
            j["poi_id"] = r.poi_id;
            res.set_content(j.dump(), "application/json");
        });

        server.Get("/poi/search", [this](const httplib::Request& req,
                                         httplib::Response& res) {
            auto param = [&](const char* name) {
                return std::stod(req.get_param_value(name));
            };
            std::vector<Poi> pois = target.poi_search(
                param("lon_min"), param("lat_min"), param("lon_max"),
                param("lat_max"));
            json arr = json::array();
            for (const Poi& poi : pois) {
                json j = geo_to_json(poi.point);
                j["id"] = poi.id;
                arr.push_back(std::move(j));
            }
            res.set_content(arr.dump(), "application/json");
        });

        server.Delete(R"(/poi/(\d+))", [this](const httplib::Request& req,
                                              httplib::Response& res) {
            std::int64_t id = std::stoll(req.matches[1]);
            DeleteResult r = target.poi_delete(caller_from_request(req), id);
            json j;
            j["result"] = delete_result_name(r);
            if (r == DeleteResult::NotOwner) res.status = 403;
            if (r == DeleteResult::NotFound) res.status = 404;
            res.set_content(j.dump(), "application/json");
        });

        server.Post("/safety/post", [this](const httplib::Request& req,
                                           httplib::Response& res) {
            json body = json::parse(req.body);
            PostDraft p;
            p.category =
                post_category_from_name(body.at("category").get<std::string>());
            p.title = body.at("title").get<std::string>();
            p.description = body.at("description").get<std::string>();
            std::string image = body.value("image", "none");
            p.image = image == "relevant" ? PostImage::Relevant
                      : image == "irrelevant" ? PostImage::Irrelevant
                                              : PostImage::None;
            SubmitPostResult r =
                target.safety_submit(caller_from_request(req), p);
            json j = outcome_to_json(r.outcome);
            j["submission_id"] = r.submission_id;
            res.set_content(j.dump(), "application/json");
        });

        server.Get(R"(/safety/list/(.+))", [this](const httplib::Request& req,
                                                  httplib::Response& res) {
            CallerId who;
            who.user_id = req.matches[1];
            who.registration_id = caller_from_request(req).registration_id;
            json j = target.safety_list(who);
            res.set_content(j.dump(), "application/json");
        });

        server.Get(R"(/safety/decision/(\d+))",
                   [this](const httplib::Request& req, httplib::Response& res) {
                       std::int64_t id = std::stoll(req.matches[1]);
                       std::optional<ProbeOutcome> d = target.safety_decision(id);
                       json j;
                       j["decided"] = d.has_value();
                       if (d) j["outcome"] = outcome_to_json(*d);
                       res.set_content(j.dump(), "application/json");
                   });

        server.Post("/transit/ride", [this](const httplib::Request& req,
                                            httplib::Response& res) {
            json body = json::parse(req.body);
            RideResult r = target.transit_ride(
                caller_from_request(req),
                body.at("speed_tenths_kmh").get<std::int64_t>());
            json j = outcome_to_json(r.outcome);
            j["self_accepted"] = r.self_accepted;
            j["observer_affected"] = r.observer_affected;
            res.set_content(j.dump(), "application/json");
        });

        server.Get("/admin/clock/now", [this](const httplib::Request&,
                                              httplib::Response& res) {
            json j;
            j["now_ms"] = target.clock_now_ms();
            res.set_content(j.dump(), "application/json");
        });

        server.Post("/admin/clock/advance", [this](const httplib::Request& req,
                                                   httplib::Response& res) {
            json body = json::parse(req.body);
            target.clock_advance_ms(body.at("ms").get<std::int64_t>());
            json j;
            j["now_ms"] = target.clock_now_ms();
            res.set_content(j.dump(), "application/json");
        });
    }
};

HttpFacade::HttpFacade(InProcessTarget& target)
    : impl_(std::make_unique<Impl>(target)) {}

HttpFacade::~HttpFacade() { stop(); }

int HttpFacade::start(const std::string& host, int port) {
    if (port == 0) {
        port_ = impl_->server.bind_to_any_port(host);
        if (port_ < 0) return -1;
    } else {
        if (!impl_->server.bind_to_port(host, port)) return -1;
        port_ = port;
    }
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return port_;
}

void HttpFacade::stop() {
    if (!impl_) return;
    if (impl_->thread.joinable()) {
        impl_->server.stop();
        impl_->thread.join();
    }
}

struct HttpTarget::Impl {
    httplib::Client client;
    explicit Impl(const std::string& url) : client(url) {
        client.set_connection_timeout(10);
        client.set_read_timeout(60);
    }

    json post(const std::string& path, const json& body, const CallerId* who) {
        httplib::Headers headers;
        if (who)
            headers.emplace("X-Identity",
                            who->registration_id + ":" + who->user_id);
        auto res = client.Post(path, headers, body.dump(), "application/json");
        if (!res)
            throw Error(ErrorCode::OracleUnavailable,
                        "http target unreachable: " + path);
        return json::parse(res->body);
    }

    json get(const std::string& path, const CallerId* who) {
        httplib::Headers headers;
        if (who)
            headers.emplace("X-Identity",
                            who->registration_id + ":" + who->user_id);
        auto res = client.Get(path, headers);
        if (!res)
            throw Error(ErrorCode::OracleUnavailable,
                        "http target unreachable: " + path);
        return json::parse(res->body);
    }
};

HttpTarget::HttpTarget(const std::string& base_url)
    : impl_(std::make_unique<Impl>(base_url)) {}

HttpTarget::~HttpTarget() = default;

ProbeOutcome HttpTarget::fitness_submit(const CallerId& who, const Activity& a) {
    json body;
    body["type"] = a.type;
    body["duration_s"] = a.duration_s;
    body["distance_m"] = a.distance_m;
    return outcome_from_json(impl_->post("/fitness/activity", body, &who));
}

FitnessStats HttpTarget::fitness_stats(const CallerId& who) {
    json j = impl_->get("/fitness/stats/" + who.user_id, &who);
    FitnessStats s;
    s.activity_count = j.at("activity_count").get<std::int64_t>();
    s.total_duration_s = j.at("total_duration_s").get<std::int64_t>();
    s.total_distance_m = j.at("total_distance_m").get<std::uint64_t>();
    return s;
}

std::vector<std::int64_t> HttpTarget::fitness_render(const CallerId& who) {
    json j = impl_->get("/fitness/render/" + who.user_id, &who);
    return j.get<std::vector<std::int64_t>>();
}

ProbeOutcome HttpTarget::pricing_submit(const CallerId& who,
                                        const std::string& store,
                                        const std::string& item,
                                        std::int64_t price_cents) {
    json body;
    body["store"] = store;
    body["item"] = item;
    body["price_cents"] = price_cents;
    json j = impl_->post("/pricing/price", body, &who);
    if (j.contains("error"))
        throw Error(ErrorCode::UnknownItem, j["error"].get<std::string>());
    return outcome_from_json(j);
}

PricingService::Range HttpTarget::pricing_range(const std::string& store,
                                                const std::string& item) {
    json j = impl_->get("/pricing/range?store=" + store + "&item=" + item,
                        nullptr);
    if (j.contains("error"))
        throw Error(ErrorCode::UnknownItem, j["error"].get<std::string>());
    return PricingService::Range{j.at("min_cents").get<std::int64_t>(),
                                 j.at("max_cents").get<std::int64_t>()};
}

AddPoiResult HttpTarget::poi_add(const CallerId& who, const GeoPoint& p) {
    json body;
    body["lon"] = p.lon_text();
    body["lat"] = p.lat_text();
    json j = impl_->post("/poi", body, &who);
    AddPoiResult r;
    r.outcome = outcome_from_json(j);
    r.poi_id = j.value("poi_id", 0);
    return r;
}

std::vector<Poi> HttpTarget::poi_search(double lon_min, double lat_min,
                                        double lon_max, double lat_max) {
    std::string path = "/poi/search?lon_min=" + std::to_string(lon_min) +
                       "&lat_min=" + std::to_string(lat_min) +
                       "&lon_max=" + std::to_string(lon_max) +
                       "&lat_max=" + std::to_string(lat_max);
    json arr = impl_->get(path, nullptr);
    std::vector<Poi> out;
    for (const json& j : arr) {
        Poi poi;
        poi.id = j.at("id").get<std::int64_t>();
        poi.point = GeoPoint::parse(j.at("lon").get<std::string>(),
                                    j.at("lat").get<std::string>());
        out.push_back(std::move(poi));
    }
    return out;
}

DeleteResult HttpTarget::poi_delete(const CallerId& who, std::int64_t poi_id) {
    httplib::Headers headers{
        {"X-Identity", who.registration_id + ":" + who.user_id}};
    auto res = impl_->client.Delete("/poi/" + std::to_string(poi_id), headers);
    if (!res)
        throw Error(ErrorCode::OracleUnavailable, "http target unreachable");
    json j = json::parse(res->body);
    std::string name = j.at("result").get<std::string>();
    if (name == "ok") return DeleteResult::Ok;
    if (name == "not-owner") return DeleteResult::NotOwner;
    return DeleteResult::NotFound;
}

SubmitPostResult HttpTarget::safety_submit(const CallerId& who,
                                           const PostDraft& post) {
    json body;
    body["category"] = post_category_name(post.category);
    body["title"] = post.title;
    body["description"] = post.description;
    body["image"] = post.image == PostImage::Relevant    ? "relevant"
                    : post.image == PostImage::Irrelevant ? "irrelevant"
                                                          : "none";
    json j = impl_->post("/safety/post", body, &who);
    SubmitPostResult r;
    r.outcome = outcome_from_json(j);
    r.submission_id = j.value("submission_id", 0);
    return r;
}

std::vector<std::int64_t> HttpTarget::safety_list(const CallerId& who) {
    json j = impl_->get("/safety/list/" + who.user_id, &who);
    return j.get<std::vector<std::int64_t>>();
}

std::optional<ProbeOutcome> HttpTarget::safety_decision(
    std::int64_t submission_id) {
    json j = impl_->get("/safety/decision/" + std::to_string(submission_id),
                        nullptr);
    if (!j.at("decided").get<bool>()) return std::nullopt;
    return outcome_from_json(j.at("outcome"));
}

RideResult HttpTarget::transit_ride(const CallerId& who,
                                    std::int64_t speed_tenths_kmh) {
    json body;
    body["speed_tenths_kmh"] = speed_tenths_kmh;
    json j = impl_->post("/transit/ride", body, &who);
    RideResult r;
    r.outcome = outcome_from_json(j);
    r.self_accepted = j.at("self_accepted").get<bool>();
    r.observer_affected = j.at("observer_affected").get<bool>();
    return r;
}

std::int64_t HttpTarget::clock_now_ms() {
    return impl_->get("/admin/clock/now", nullptr).at("now_ms").get<std::int64_t>();
}

void HttpTarget::clock_advance_ms(std::int64_t ms) {
    json body;
    body["ms"] = ms;
    impl_->post("/admin/clock/advance", body, nullptr);
}

} // namespace bprobe::harness
