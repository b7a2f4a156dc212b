#include "ndpolar/service.hpp"

#include <httplib.h>

#include <json.hpp>

#include "ndpolar/aggregation.hpp"
#include "ndpolar/document.hpp"
#include "ndpolar/error.hpp"
#include "ndpolar/geometry.hpp"
#include "ndpolar/io.hpp"
#include "ndpolar/render.hpp"

namespace ndpolar {

using nlohmann::json;

ModelStore::ModelStore(RiskModel model)
    : snapshot_{std::make_shared<const RiskModel>(std::move(model)), 1}
{
}

Snapshot ModelStore::current() const
{
    std::lock_guard lock(mutex_);
    return snapshot_;
}

std::uint64_t ModelStore::replace(RiskModel model)
{
    auto next = std::make_shared<const RiskModel>(std::move(model));
    std::lock_guard lock(mutex_);
    snapshot_ = Snapshot{std::move(next), snapshot_.revision + 1};
    return snapshot_.revision;
}

namespace {

HttpResponse json_response(int status, json body, std::uint64_t revision)
{
    body["revision"] = revision;
    return {status, "application/json", body.dump(), revision};
}

HttpResponse error_response(int status, std::string_view code, const std::string& message, std::uint64_t revision)
{
    return json_response(status, {{"error", {{"code", code}, {"message", message}}}}, revision);
}

int status_for(ErrorCode code)
{
    switch (code) {
    case ErrorCode::unknown_axis:
    case ErrorCode::unknown_level:
    case ErrorCode::out_of_range:
    case ErrorCode::unknown_grade:
        return 404;
    default:
        return 400;
    }
}

/// Splits query parameters into the context selector and the named controls.
struct ParsedQuery {
    SliceSelector sigma;
    std::optional<std::string> risk;
    std::optional<std::string> state;
    std::optional<std::string> vary;
    bool inline_grids = false;
};

ParsedQuery parse_query(const RiskModel& model, const QueryParams& query, bool allow_vary)
{
    ParsedQuery out;
    std::vector<std::string> assignments;
    std::set<std::string> seen;
    for (const auto& [key, value] : query) {
        if (!seen.insert(key).second) {
            throw Error(ErrorCode::invalid, "query parameter '" + key + "' given more than once");
        }
        if (key == "risk") {
            out.risk = value;
        } else if (key == "state") {
            out.state = value;
        } else if (key == "vary" && allow_vary) {
            out.vary = value;
        } else if (key == "inline" && allow_vary) {
            out.inline_grids = value == "1" || value == "true";
        } else {
            assignments.push_back(key + "=" + value);
        }
    }
    out.sigma = parse_slice_assignments(model.space(), assignments);
    return out;
}

RiskPosition risk_of(const RiskModel& model, const ParsedQuery& q)
{
    if (q.risk) {
        return parse_risk(model.space(), *q.risk);
    }
    if (model.risk()) {
        return *model.risk();
    }
    throw Error(ErrorCode::invalid, "missing 'risk' parameter and the model has no risk position");
}

}  // namespace

struct Service::Http {
    httplib::Server server;
};

Service::Service(RiskModel model, ServiceOptions options)
    : store_(std::move(model)), options_(std::move(options)), http_(std::make_unique<Http>())
{
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
        QueryParams query(req.params.begin(), req.params.end());
        HttpResponse r = handle(req.method, req.path, query, req.body);
        res.status = r.status;
        res.set_header("X-Model-Revision", std::to_string(r.revision));
        res.set_content(r.body, r.content_type);
    };
    http_->server.Get(R"(/api/.*)", forward);
    http_->server.Put(R"(/api/.*)", forward);
    if (!options_.ui_dir.empty()) {
        http_->server.set_mount_point("/", options_.ui_dir.string());
    }
}

Service::~Service()
{
    stop();
}

HttpResponse Service::handle(std::string_view method, std::string_view path, const QueryParams& query,
                             std::string_view body)
{
    const Snapshot snap = store_.current();
    const RiskModel& model = *snap.model;
    const std::uint64_t rev = snap.revision;

    if (path == "/api/model" && method == "PUT") {
        try {
            json doc = json::parse(body);
            std::uint64_t next = store_.replace(model_from_json(doc));
            return json_response(200, {{"status", "replaced"}}, next);
        } catch (const json::parse_error& e) {
            return error_response(422, code_name(ErrorCode::schema), std::string("malformed JSON: ") + e.what(), rev);
        } catch (const Error& e) {
            return error_response(422, code_name(e.code()), e.what(), rev);
        }
    }
    if (method != "GET") {
        return error_response(405, "E_METHOD", "method not allowed", rev);
    }

    try {
        if (path == "/api/model") {
            return json_response(200, {{"model", model_to_json(model)}}, rev);
        }
        if (path == "/api/slice") {
            ParsedQuery q = parse_query(model, query, false);
            SliceSelector sigma = complete_slice(model, q.sigma);
            return json_response(200, slice_to_json(model, sigma, slice(model, sigma)), rev);
        }
        if (path == "/api/aggregate") {
            ParsedQuery q = parse_query(model, query, false);
            SliceSelector sigma = complete_slice(model, q.sigma);
            RiskPosition risk = risk_of(model, q);
            MatrixSlice grid = slice(model, sigma);
            return json_response(
                200, aggregates_to_json(model, aggregate_slice(grid, model.scale(), risk), risk,
                                        grid.at(risk.likelihood, risk.impact)),
                rev);
        }
        if (path == "/api/walk") {
            ParsedQuery q = parse_query(model, query, true);
            if (!q.vary) {
                throw Error(ErrorCode::invalid, "missing 'vary' parameter");
            }
            WalkResult result = walk(model, *q.vary, q.sigma, risk_of(model, q), WalkOptions{q.inline_grids});
            return json_response(200, walk_to_json(model, result), rev);
        }
        if (path == "/api/violations") {
            ParsedQuery q = parse_query(model, query, false);
            if (!q.state) {
                throw Error(ErrorCode::invalid, "missing 'state' parameter");
            }
            if (!q.sigma.levels.empty()) {
                throw Error(ErrorCode::invalid, "violations takes only 'state'");
            }
            return json_response(200, violations_to_json(violations(model, parse_state(model.space(), *q.state))),
                                 rev);
        }
        if (path == "/api/layout") {
            return json_response(200, layout_to_json(model, layout(model.space(), model.polar().theta0)), rev);
        }
        if (path == "/api/render/polar.svg" || path == "/api/render/matrix.svg") {
            ParsedQuery q = parse_query(model, query, false);
            SliceSelector sigma = complete_slice(model, q.sigma);
            RenderSpec spec;
            spec.view = path == "/api/render/polar.svg" ? View::polar : View::matrix;
            return {200, "image/svg+xml", render(model, sigma, risk_of(model, q), spec), rev};
        }
    } catch (const Error& e) {
        return error_response(status_for(e.code()), code_name(e.code()), e.what(), rev);
    }
    return error_response(404, "E_NOT_FOUND", "no such endpoint: " + std::string(path), rev);
}

int Service::bind(const std::string& host, int port)
{
    if (port == 0) {
        return http_->server.bind_to_any_port(host);
    }
    return http_->server.bind_to_port(host, port) ? port : -1;
}

bool Service::listen()
{
    return http_->server.listen_after_bind();
}

void Service::stop()
{
    if (http_) {
        http_->server.stop();
    }
}

void Service::wait_until_ready() const
{
    http_->server.wait_until_ready();
}

}  // namespace ndpolar
