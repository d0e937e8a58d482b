#include "kgbb/service.hpp"

#include "kgbb/backends.hpp"
#include "kgbb/error.hpp"
#include "kgbb/import.hpp"
#include "kgbb/json.hpp"
#include "kgbb/query.hpp"
#include "kgbb/templates.hpp"

#include <httplib.h>

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace kgbb {

namespace {

struct Target {
    std::vector<std::string> segments;
    std::map<std::string, std::string> query;

    std::string param(const std::string& k) const {
        auto it = query.find(k);
        return it == query.end() ? std::string() : it->second;
    }
};

Target parse_target(const std::string& raw) {
    Target t;
    const auto q = raw.find('?');
    const std::string path = raw.substr(0, q);
    std::size_t i = 0;
    while (i <= path.size()) {
        auto j = path.find('/', i);
        if (j == std::string::npos) j = path.size();
        if (j > i) t.segments.push_back(httplib::detail::decode_url(path.substr(i, j - i), false));
        i = j + 1;
    }
    if (q != std::string::npos) {
        std::istringstream in(raw.substr(q + 1));
        for (std::string kv; std::getline(in, kv, '&');) {
            const auto eq = kv.find('=');
            const auto k = httplib::detail::decode_url(kv.substr(0, eq), true);
            t.query[k] = eq == std::string::npos ? std::string() : httplib::detail::decode_url(kv.substr(eq + 1), true);
        }
    }
    return t;
}

HttpResponse json_response(int status, const json& j) { return {status, "application/json", j.dump(2) + "\n"}; }

HttpResponse error_response(int status, std::string_view code, const std::string& message, const std::string& detail = {}) {
    return json_response(status, {{"error", std::string(code)}, {"message", message}, {"detail", detail}});
}

json parse_body(const HttpRequest& req) {
    auto j = json::parse(req.body, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::parse_error, "request body is not valid JSON");
    return j;
}

std::optional<std::string> header(const HttpRequest& req, const std::string& name) {
    auto it = req.headers.find(name);
    if (it == req.headers.end() || it->second.empty()) return std::nullopt;
    return it->second;
}

std::set<std::string> roles_of(const HttpRequest& req) {
    std::set<std::string> out;
    std::istringstream in(header(req, "x-kgbb-roles").value_or(""));
    for (std::string r; std::getline(in, r, ',');) {
        r.erase(0, r.find_first_not_of(' '));
        r.erase(r.find_last_not_of(' ') + 1);
        if (!r.empty()) out.insert(r);
    }
    return out;
}

bool readable(const SemanticUnit& u, const std::set<std::string>& roles) {
    const auto* s = std::get_if<StatementUnit>(&u);
    return !s || !s->access_restricted_to || roles.count(s->access_restricted_to->value);
}

json triples_to_json(const std::vector<Triple>& ts) {
    json a = json::array();
    for (const auto& t : ts) a.push_back({{"s", t.subject.value}, {"p", t.predicate.value}, {"o", object_to_json(t.object)}});
    return a;
}

} // namespace

int status_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::not_found:
    case ErrorCode::unknown_instance:
    case ErrorCode::unknown_version:
    case ErrorCode::unknown_target: return 404;
    case ErrorCode::unit_locked:
    case ErrorCode::already_deleted: return 409;
    case ErrorCode::parse_error:
    case ErrorCode::invalid_argument: return 400;
    default: return 422;
    }
}

ServiceConfig config_from_env() {
    ServiceConfig c;
    if (const char* s = std::getenv("KGBB_SPEC")) c.spec = s;
    if (const char* s = std::getenv("KGBB_STORE")) c.store = std::filesystem::path(s);
    if (const char* s = std::getenv("KGBB_PORT")) c.port = std::atoi(s);
    return c;
}

Service::Service(std::shared_ptr<const Specification> spec, std::optional<std::filesystem::path> store_dir,
                 EngineOptions options)
    : store_dir_(std::move(store_dir)),
      engine_(spec,
              store_dir_ && std::filesystem::exists(*store_dir_ / "manifest.json") ? load_store(ExportFormat::tables, *store_dir_)
                                                                                   : Store{},
              std::move(options)) {}

void Service::persist() {
    if (!store_dir_) return;
    std::lock_guard lock(persist_mutex_);
    save_store(*engine_.snapshot(), ExportFormat::tables, *store_dir_);
}

HttpResponse Service::handle(const HttpRequest& req) {
    const auto t = parse_target(req.target);
    const auto& seg = t.segments;
    const auto& m = req.method;
    const Specification& spec = engine_.spec();

    auto user = [&]() -> Upri {
        auto u = header(req, "x-kgbb-user");
        if (!u) throw Error(ErrorCode::invalid_argument, "missing X-KGBB-User header", "x-kgbb-user");
        return Upri(*u);
    };
    auto require_user = [&]() -> std::optional<HttpResponse> {
        if (!header(req, "x-kgbb-user")) return error_response(401, "unauthenticated", "mutations require an X-KGBB-User header");
        return std::nullopt;
    };

    try {
        if (m == "GET" && seg.size() == 1 && seg[0] == "spec") return json_response(200, spec_summary(spec));

        if (m == "GET" && seg.size() == 3 && seg[0] == "kgbbs" && seg[2] == "form")
            return json_response(200, form_descriptor(spec, Upri(seg[1])));

        if (m == "POST" && seg.size() == 1 && seg[0] == "units") {
            if (auto r = require_user()) return *r;
            const auto body = parse_body(req);
            auto creq = create_request_from_json(body, user());
            Upri id;
            if (body.contains("compound")) id = engine_.add_associated_unit(Upri(body["compound"].get<std::string>()), creq);
            else if (body.contains("linkedFrom")) id = engine_.create_linked_unit(Upri(body["linkedFrom"].get<std::string>()), creq);
            else id = engine_.create_unit(creq);
            persist();
            auto snap = engine_.snapshot();
            return json_response(201, {{"id", id.value}, {"label", meta_of(snap->units.at(id)).label}});
        }

        if (seg.size() >= 2 && seg[0] == "units") {
            const Upri id(seg[1]);
            if (m == "GET" && seg.size() == 2) {
                auto snap = engine_.snapshot();
                const auto* found = snap->find(id);
                if (!found) throw Error(ErrorCode::not_found, "no such unit", id.value);
                if (!readable(*found, roles_of(req)))
                    return error_response(403, "forbidden", "unit access is restricted", id.value);
                std::optional<Upri> version;
                if (!t.param("version").empty()) version = Upri(t.param("version"));
                const auto view_name = t.param("view");
                const auto view = read_unit(spec, *snap, id, version, t.param("includeDeleted") == "true");
                if (view_name.empty()) {
                    json j = unit_to_json(view.unit);
                    j["dataGraph"] = triples_to_json(view.data_graph);
                    if (view.version) j["version"] = view.version->value;
                    return json_response(200, j);
                }
                if (view_name == "label") return json_response(200, {{"id", id.value}, {"label", meta_of(view.unit).label}});
                if (view_name == "mindmap") return json_response(200, mind_map_to_json(render_mind_map(spec, *snap, id)));
                if (view_name == "display") {
                    std::optional<Upri> tmpl;
                    if (!t.param("template").empty()) tmpl = Upri(t.param("template"));
                    return json_response(200, display_to_json(render_compound_display(spec, *snap, id, tmpl)));
                }
                if (view_name.rfind("access:", 0) == 0) {
                    const auto* s = std::get_if<StatementUnit>(&view.unit);
                    if (!s) throw Error(ErrorCode::invalid_argument, "access templates apply to statement units", id.value);
                    const auto* cls = spec.statement_class_of_instance(s->meta.kgbb_uri);
                    if (!cls) throw Error(ErrorCode::unknown_instance, "unit has no statement KGBB", s->meta.kgbb_uri.value);
                    const Upri which(view_name.substr(7));
                    std::optional<AccessTemplate> derived;
                    const AccessTemplate* tmpl = find_access_template(*cls, which);
                    if (!tmpl && which.value == "owl") tmpl = &derived.emplace(derive_owl_access_template(*cls));
                    if (!tmpl) throw Error(ErrorCode::unknown_target, "no such access template", which.value);
                    std::size_t n = 0;
                    auto mint = [&] { return Upri(id.value + "#node" + std::to_string(++n)); };
                    return json_response(200, access_output_to_json(apply_access_template(spec, *snap, *s, *tmpl, mint)));
                }
                return error_response(400, "invalid_argument", "unknown view", view_name);
            }
            if (m == "GET" && seg.size() == 3 && seg[2] == "history") {
                auto snap = engine_.snapshot();
                if (!snap->find(id)) throw Error(ErrorCode::not_found, "no such unit", id.value);
                return json_response(200, history_to_json(history(*snap, id)));
            }
            if (m == "PATCH" && seg.size() == 4 && seg[2] == "positions") {
                if (auto r = require_user()) return *r;
                auto body = parse_body(req);
                const auto input = input_from_json(body.contains("input") ? body["input"] : body);
                Provenance prov;
                prov.creator = user();
                const auto pos = engine_.update_object_position(id, Upri(seg[3]), input, prov);
                persist();
                auto snap = engine_.snapshot();
                return json_response(200, {{"id", id.value}, {"position", pos.value}, {"label", meta_of(snap->units.at(id)).label}});
            }
            if (m == "DELETE" && seg.size() == 2) {
                if (auto r = require_user()) return *r;
                engine_.soft_delete(id, user(), t.param("cascade") == "true");
                persist();
                return json_response(200, {{"id", id.value}, {"deleted", true}});
            }
            if (m == "POST" && seg.size() == 3 && seg[2] == "versions") {
                if (auto r = require_user()) return *r;
                const auto v = engine_.create_version(id, user());
                persist();
                return json_response(201, {{"id", id.value}, {"version", v.value}});
            }
        }

        if (m == "POST" && seg.size() == 1 && seg[0] == "questions") {
            if (auto r = require_user()) return *r;
            const auto body = parse_body(req);
            Provenance prov;
            prov.creator = user();
            Upri id;
            if (body.contains("expression")) {
                CompoundQuestionUnit cq;
                cq.expression = parse_question_expr(body["expression"].get<std::string>());
                id = engine_.add_compound_question(cq, prov);
                persist();
                auto snap = engine_.snapshot();
                return json_response(201, {{"id", id.value}, {"label", meta_of(snap->units.at(id)).label}, {"mode", "list"}});
            }
            auto q = question_from_json(body);
            id = engine_.add_question(q, prov);
            persist();
            auto snap = engine_.snapshot();
            return json_response(201, {{"id", id.value},
                                       {"label", meta_of(snap->units.at(id)).label},
                                       {"mode", std::string(to_string(answer_mode(q)))}});
        }

        if (m == "POST" && seg.size() == 3 && seg[0] == "questions" && seg[2] == "execute") {
            auto snap = engine_.snapshot();
            const Upri id(seg[1]);
            const auto* u = snap->find(id);
            if (!u) throw Error(ErrorCode::not_found, "no such question", id.value);
            const auto roles = roles_of(req);
            auto visible = [&](const std::vector<Upri>& xs) {
                json a = json::array();
                for (const auto& x : xs)
                    if (readable(snap->units.at(x), roles)) a.push_back(x.value);
                return a;
            };
            if (const auto* q = std::get_if<QuestionUnit>(u)) {
                const auto r = execute_question(spec, *snap, *q);
                auto units = visible(r.units);
                json j{{"mode", std::string(to_string(r.mode))}, {"units", units}};
                if (r.mode == AnswerMode::boolean) j["answer"] = !units.empty();
                return json_response(200, j);
            }
            if (const auto* cq = std::get_if<CompoundQuestionUnit>(u)) {
                const auto r = execute_compound(spec, *snap, *cq);
                return json_response(200, {{"mode", "list"}, {"units", visible({r.begin(), r.end()})}});
            }
            throw Error(ErrorCode::invalid_argument, "not a question unit", id.value);
        }

        if (m == "GET" && seg.size() == 1 && seg[0] == "export") {
            const auto fmt = export_format_from_string(t.param("format").empty() ? "trig" : t.param("format"));
            if (!fmt) return error_response(400, "invalid_argument", "unknown export format", t.param("format"));
            auto snap = engine_.snapshot();
            switch (*fmt) {
            case ExportFormat::trig: return {200, "application/trig", export_trig(*snap)};
            case ExportFormat::pg_json: return {200, "application/json", export_pg_json(*snap)};
            case ExportFormat::tables: {
                const auto b = export_tables(*snap);
                json tables = json::object();
                for (const auto& [name, tbl] : b.tables) {
                    std::vector<std::vector<std::string>> rows{tbl.columns};
                    rows.insert(rows.end(), tbl.rows.begin(), tbl.rows.end());
                    tables[name] = write_csv(rows);
                }
                return json_response(200, {{"manifest", b.manifest}, {"tables", tables}});
            }
            }
        }
    } catch (const Error& e) {
        return error_response(status_for(e.code()), to_string(e.code()), e.what(), e.detail());
    } catch (const json::exception& e) {
        return error_response(400, "invalid_argument", "malformed request", e.what());
    }
    return error_response(404, "not_found", "no such endpoint", m + " " + req.target);
}

int serve(const ServiceConfig& config, std::ostream& log) {
    std::shared_ptr<const Specification> spec;
    try {
        spec = std::make_shared<const Specification>(load_spec_file(config.spec));
    } catch (const Error& e) {
        log << "spec failed to load: " << to_string(e.code()) << ": " << e.what() << " " << e.detail() << "\n";
        return 1;
    }
    if (auto diags = validate_spec(*spec); !diags.empty()) {
        for (const auto& d : diags) log << d.code << ": " << d.message << " [" << d.subject << "]\n";
        return 1;
    }
    Service service(spec, config.store);
    httplib::Server server;
    auto bridge = [&service](const httplib::Request& req, httplib::Response& res) {
        HttpRequest r{req.method, req.target, {}, req.body};
        for (const auto& [k, v] : req.headers) {
            std::string key = k;
            std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
            r.headers[key] = v;
        }
        auto out = service.handle(r);
        res.status = out.status;
        res.set_content(out.body, out.content_type);
    };
    server.Get(".*", bridge);
    server.Post(".*", bridge);
    server.Patch(".*", bridge);
    server.Delete(".*", bridge);
    log << "listening on " << config.host << ":" << config.port << "\n";
    return server.listen(config.host, config.port) ? 0 : 1;
}

} // namespace kgbb
