#include "ndpolar/document.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "ndpolar/error.hpp"

namespace ndpolar {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& what)
{
    throw Error(ErrorCode::schema, what);
}

const json& require(const json& obj, const char* key, const std::string& where)
{
    auto it = obj.find(key);
    if (it == obj.end()) {
        schema(where + " is missing '" + key + "'");
    }
    return *it;
}

std::string require_string(const json& v, const std::string& where)
{
    if (!v.is_string()) {
        schema(where + " must be a string");
    }
    return v.get<std::string>();
}

void allow_keys(const json& obj, std::initializer_list<std::string_view> keys, const std::string& where)
{
    for (const auto& [k, _] : obj.items()) {
        bool known = false;
        for (auto allowed : keys) {
            known = known || k == allowed;
        }
        if (!known) {
            schema(where + " has unknown key '" + k + "'");
        }
    }
}

/// Integer index or label/numeric string.
std::size_t level_value(const json& v, const Axis& axis, const std::string& where)
{
    if (v.is_number_integer()) {
        auto i = v.get<long long>();
        if (i < 0 || static_cast<std::size_t>(i) >= axis.size()) {
            throw Error(ErrorCode::out_of_range, where + ": level " + std::to_string(i) + " out of range for axis '" +
                                                     axis.id + "' (0.." + std::to_string(axis.size() - 1) + ")");
        }
        return static_cast<std::size_t>(i);
    }
    if (v.is_string()) {
        const std::string token = v.get<std::string>();
        if (auto l = axis.find_label(token)) {
            return *l;
        }
        throw Error(ErrorCode::unknown_level, where + ": unknown level '" + token + "' on axis '" + axis.id + "'");
    }
    schema(where + " must be a level index or label");
}

Axis parse_axis(const json& a, std::size_t i, const GradeScale& scale)
{
    const std::string where = "axes[" + std::to_string(i) + "]";
    if (!a.is_object()) {
        schema(where + " must be an object");
    }
    allow_keys(a, {"id", "role", "labels", "threshold", "profile", "title"}, where);
    Axis axis;
    axis.id = require_string(require(a, "id", where), where + ".id");
    const std::string role = require_string(require(a, "role", where), where + ".role");
    auto r = parse_role(role);
    if (!r) {
        schema(where + ".role must be likelihood, impact or context, got '" + role + "'");
    }
    axis.role = *r;
    const json& labels = require(a, "labels", where);
    if (!labels.is_array()) {
        schema(where + ".labels must be an array");
    }
    for (const auto& l : labels) {
        axis.labels.push_back(require_string(l, where + ".labels[]"));
    }
    if (auto t = a.find("title"); t != a.end()) {
        axis.title = require_string(*t, where + ".title");
    }
    if (auto t = a.find("threshold"); t != a.end() && !t->is_null()) {
        axis.threshold = level_value(*t, axis, where + ".threshold");
    }
    if (auto p = a.find("profile"); p != a.end() && !p->is_null()) {
        if (!p->is_array()) {
            schema(where + ".profile must be an array of grade ids");
        }
        std::vector<Grade> profile;
        for (const auto& g : *p) {
            profile.push_back(scale.at(require_string(g, where + ".profile[]")));
        }
        axis.profile = std::move(profile);
    }
    return axis;
}

Rule parse_structured_rule(const json& r, std::size_t k)
{
    const std::string where = "assignment.rules[" + std::to_string(k) + "]";
    if (!r.is_object()) {
        schema(where + " must be an object");
    }
    allow_keys(r, {"when", "then"}, where);
    Rule rule;
    rule.grade = require_string(require(r, "then", where), where + ".then");
    const json& when = require(r, "when", where);
    if (!when.is_array() || when.empty()) {
        schema(where + ".when must be a non-empty array of clauses");
    }
    std::set<std::string> axes;
    for (const auto& c : when) {
        if (!c.is_object()) {
            schema(where + ".when[] must be an object");
        }
        allow_keys(c, {"axis", "op", "level"}, where + ".when[]");
        Clause clause;
        clause.axis = require_string(require(c, "axis", where), where + ".when[].axis");
        if (!axes.insert(clause.axis).second) {
            throw Error(ErrorCode::parse, where + ": axis '" + clause.axis + "' appears in more than one clause");
        }
        const std::string op = require_string(require(c, "op", where), where + ".when[].op");
        auto cmp = parse_comparator(op);
        if (!cmp) {
            schema(where + ".when[].op: unknown comparator '" + op + "'");
        }
        clause.op = *cmp;
        const json& level = require(c, "level", where);
        if (level.is_number_integer() && level.get<long long>() >= 0) {
            clause.level = level.get<std::size_t>();
        } else if (level.is_string()) {
            clause.level = level.get<std::string>();
        } else {
            schema(where + ".when[].level must be a level index or label");
        }
        rule.clauses.push_back(std::move(clause));
    }
    return rule;
}

Assignment parse_assignment(const json& a, const StateSpace& space)
{
    if (!a.is_object()) {
        schema("assignment must be an object");
    }
    allow_keys(a, {"entries", "rules", "default"}, "assignment");
    Assignment out;
    if (auto e = a.find("entries"); e != a.end() && !e->is_null()) {
        if (!e->is_array()) {
            schema("assignment.entries must be an array");
        }
        for (std::size_t i = 0; i < e->size(); ++i) {
            const json& entry = (*e)[i];
            const std::string where = "assignment.entries[" + std::to_string(i) + "]";
            if (!entry.is_object()) {
                schema(where + " must be an object");
            }
            allow_keys(entry, {"state", "grade"}, where);
            const json& state = require(entry, "state", where);
            if (!state.is_array()) {
                schema(where + ".state must be an array");
            }
            if (state.size() != space.dims()) {
                throw Error(ErrorCode::out_of_range, where + ".state has " + std::to_string(state.size()) +
                                                         " levels, expected " + std::to_string(space.dims()));
            }
            CellEntry cell;
            for (std::size_t k = 0; k < state.size(); ++k) {
                cell.state.levels.push_back(level_value(state[k], space.axis(k), where + ".state"));
            }
            cell.grade = require_string(require(entry, "grade", where), where + ".grade");
            out.entries.push_back(std::move(cell));
        }
    }
    if (auto r = a.find("rules"); r != a.end() && !r->is_null()) {
        if (r->is_string()) {
            out.rules = parse_rules(r->get<std::string>());
        } else if (r->is_array()) {
            for (std::size_t k = 0; k < r->size(); ++k) {
                out.rules.push_back(parse_structured_rule((*r)[k], k));
            }
        } else {
            schema("assignment.rules must be DSL text or an array of rules");
        }
    }
    if (auto d = a.find("default"); d != a.end() && !d->is_null()) {
        out.default_grade = require_string(*d, "assignment.default");
    }
    return out;
}

}  // namespace

RiskModel model_from_json(const json& doc, std::uint64_t enumeration_cap)
{
    if (!doc.is_object()) {
        schema("model document must be a JSON object");
    }
    allow_keys(doc, {"format", "name", "grades", "axes", "assignment", "risk", "default_slice", "polar"}, "document");
    const std::string format = require_string(require(doc, "format", "document"), "format");
    if (format != kDocumentFormat) {
        schema("unsupported format '" + format + "', expected '" + std::string(kDocumentFormat) + "'");
    }
    std::string name = require_string(require(doc, "name", "document"), "name");

    const json& grades = require(doc, "grades", "document");
    if (!grades.is_array()) {
        schema("grades must be an array");
    }
    std::vector<RankedGrade> ranked;
    for (std::size_t i = 0; i < grades.size(); ++i) {
        const json& g = grades[i];
        const std::string where = "grades[" + std::to_string(i) + "]";
        if (!g.is_object()) {
            schema(where + " must be an object");
        }
        allow_keys(g, {"id", "rank", "color"}, where);
        const json& rank = require(g, "rank", where);
        if (!rank.is_number_integer() || rank.get<long long>() < 0) {
            schema(where + ".rank must be a non-negative integer");
        }
        ranked.push_back({require_string(require(g, "id", where), where + ".id"), rank.get<std::size_t>(),
                          require_string(require(g, "color", where), where + ".color")});
    }
    GradeScale scale(std::move(ranked));

    const json& axes = require(doc, "axes", "document");
    if (!axes.is_array()) {
        schema("axes must be an array");
    }
    std::vector<Axis> axis_list;
    for (std::size_t i = 0; i < axes.size(); ++i) {
        axis_list.push_back(parse_axis(axes[i], i, scale));
    }
    StateSpace space(std::move(axis_list));

    Assignment assignment = parse_assignment(require(doc, "assignment", "document"), space);

    std::optional<RiskPosition> risk;
    if (auto r = doc.find("risk"); r != doc.end() && !r->is_null()) {
        if (!r->is_object()) {
            schema("risk must be an object");
        }
        allow_keys(*r, {"likelihood", "impact"}, "risk");
        risk = RiskPosition{level_value(require(*r, "likelihood", "risk"), space.axis(0), "risk.likelihood"),
                            level_value(require(*r, "impact", "risk"), space.axis(1), "risk.impact")};
    }

    std::optional<SliceSelector> default_slice;
    if (auto s = doc.find("default_slice"); s != doc.end() && !s->is_null()) {
        if (!s->is_object()) {
            schema("default_slice must be an object");
        }
        SliceSelector sigma;
        for (const auto& [id, level] : s->items()) {
            const std::size_t axis = space.axis_index(id);
            if (axis < 2) {
                throw Error(ErrorCode::unknown_axis, "default_slice: axis '" + id + "' is not a context axis");
            }
            sigma.levels[id] = level_value(level, space.axis(axis), "default_slice");
        }
        default_slice = std::move(sigma);
    }

    PolarFrame polar;
    if (auto p = doc.find("polar"); p != doc.end() && !p->is_null()) {
        if (!p->is_object()) {
            schema("polar must be an object");
        }
        allow_keys(*p, {"theta0", "direction"}, "polar");
        if (auto t = p->find("theta0"); t != p->end()) {
            if (!t->is_number()) {
                schema("polar.theta0 must be a number (radians)");
            }
            polar.theta0 = t->get<double>();
        }
        if (auto dir = p->find("direction"); dir != p->end()) {
            const std::string d = require_string(*dir, "polar.direction");
            if (d == "clockwise") {
                polar.clockwise = true;
            } else if (d != "counterclockwise") {
                schema("polar.direction must be counterclockwise or clockwise");
            }
        }
    }

    return RiskModel(std::move(name), std::move(scale), std::move(space), std::move(assignment), risk,
                     std::move(default_slice), polar, enumeration_cap);
}

RiskModel load_model_text(std::string_view text, std::uint64_t enumeration_cap)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::schema, std::string("malformed JSON: ") + e.what());
    }
    return model_from_json(doc, enumeration_cap);
}

RiskModel load_model(const std::filesystem::path& path, std::uint64_t enumeration_cap)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::io, "cannot read '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_model_text(buf.str(), enumeration_cap);
}

json model_to_json(const RiskModel& model)
{
    const StateSpace& space = model.space();
    const GradeScale& scale = model.scale();
    json doc;
    doc["format"] = kDocumentFormat;
    doc["name"] = model.name();

    json grades = json::array();
    for (const auto& g : scale.grades()) {
        grades.push_back({{"id", g.id}, {"rank", g.rank}, {"color", g.color}});
    }
    doc["grades"] = std::move(grades);

    json axes = json::array();
    for (const Axis& a : space.axes()) {
        json axis = {{"id", a.id}, {"role", role_name(a.role)}, {"labels", a.labels}};
        if (!a.title.empty()) axis["title"] = a.title;
        if (a.threshold) axis["threshold"] = *a.threshold;
        if (a.profile) {
            json profile = json::array();
            for (Grade g : *a.profile) profile.push_back(scale.id(g));
            axis["profile"] = std::move(profile);
        }
        axes.push_back(std::move(axis));
    }
    doc["axes"] = std::move(axes);

    const Assignment& source = model.assignment();
    json assignment = json::object();
    if (!source.entries.empty()) {
        json entries = json::array();
        for (const CellEntry& e : source.entries) {
            entries.push_back({{"state", e.state.levels}, {"grade", e.grade}});
        }
        assignment["entries"] = std::move(entries);
    }
    if (!source.rules.empty()) {
        std::vector<Rule> rules = source.rules;
        for (Rule& r : rules) {
            for (Clause& c : r.clauses) {
                if (const auto* label = std::get_if<std::string>(&c.level)) {
                    c.level = *space.axis(space.axis_index(c.axis)).find_label(*label);
                }
            }
        }
        assignment["rules"] = "dsl-version: 1\n" + print_rules(rules);
    }
    if (source.default_grade) {
        assignment["default"] = *source.default_grade;
    }
    doc["assignment"] = std::move(assignment);

    if (model.risk()) {
        doc["risk"] = {{"likelihood", model.risk()->likelihood}, {"impact", model.risk()->impact}};
    }
    if (model.default_slice()) {
        json sigma = json::object();
        for (const auto& [id, level] : model.default_slice()->levels) {
            sigma[id] = level;
        }
        doc["default_slice"] = std::move(sigma);
    }
    doc["polar"] = {{"theta0", model.polar().theta0},
                    {"direction", model.polar().clockwise ? "clockwise" : "counterclockwise"}};
    return doc;
}

std::string save_model_text(const RiskModel& model)
{
    return model_to_json(model).dump(2) + "\n";
}

bool semantically_equal(const RiskModel& a, const RiskModel& b)
{
    if (a.name() != b.name() || !(a.scale() == b.scale()) || !(a.space() == b.space()) || a.risk() != b.risk() ||
        a.default_slice() != b.default_slice() || !(a.polar() == b.polar())) {
        return false;
    }
    const StateSpace& space = a.space();
    if (space.size() > kDefaultEnumerationCap) {
        return false;
    }
    for (const ContextState& s : enumerate_states(space)) {
        if (a.compiled().grade(s) != b.compiled().grade(s)) {
            return false;
        }
    }
    return true;
}

}  // namespace ndpolar
