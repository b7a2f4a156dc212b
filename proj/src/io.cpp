#include "ndpolar/io.hpp"

#include "ndpolar/error.hpp"

namespace ndpolar {

using nlohmann::json;

namespace {

std::vector<std::string_view> split(std::string_view text, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t pos = text.find(sep, start);
        out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

std::string csv_field(std::string_view s)
{
    if (s.find_first_of(",\"\n") == std::string_view::npos) {
        return std::string(s);
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

json grade_ids(const GradeScale& scale, std::span<const Grade> grades)
{
    json out = json::array();
    for (Grade g : grades) {
        out.push_back(scale.id(g));
    }
    return out;
}

json grid_rows(const RiskModel& model, const MatrixSlice& grid)
{
    json rows = json::array();
    for (std::size_t l2 = grid.impact_levels(); l2-- > 0;) {
        rows.push_back(grade_ids(model.scale(), grid.row(l2)));
    }
    return rows;
}

}  // namespace

SliceSelector parse_slice_assignments(const StateSpace& space, std::span<const std::string> assignments)
{
    SliceSelector sigma;
    for (const std::string& a : assignments) {
        auto eq = a.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw Error(ErrorCode::invalid, "expected axis=level, got '" + a + "'");
        }
        const std::string id = a.substr(0, eq);
        const std::size_t axis = space.axis_index(id);
        if (axis < 2) {
            throw Error(ErrorCode::unknown_axis, "axis '" + id + "' is not a context axis");
        }
        if (sigma.levels.count(id)) {
            throw Error(ErrorCode::invalid, "axis '" + id + "' given more than once");
        }
        sigma.levels[id] = space.resolve_level(axis, std::string_view(a).substr(eq + 1));
    }
    return sigma;
}

RiskPosition parse_risk(const StateSpace& space, std::string_view text)
{
    auto parts = split(text, ',');
    if (parts.size() != 2) {
        throw Error(ErrorCode::invalid, "risk must be 'likelihood,impact', got '" + std::string(text) + "'");
    }
    return {space.resolve_level(0, parts[0]), space.resolve_level(1, parts[1])};
}

ContextState parse_state(const StateSpace& space, std::string_view text)
{
    auto parts = split(text, ',');
    if (parts.size() != space.dims()) {
        throw Error(ErrorCode::invalid, "state needs " + std::to_string(space.dims()) + " comma-separated levels, got " +
                                            std::to_string(parts.size()));
    }
    ContextState s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        s.levels.push_back(space.resolve_level(i, parts[i]));
    }
    return s;
}

std::string slice_to_csv(const RiskModel& model, const SliceSelector& sigma, const MatrixSlice& grid)
{
    (void)sigma;
    const StateSpace& space = model.space();
    std::string out = csv_field(space.axis(1).id + "\\" + space.axis(0).id);
    for (const auto& label : space.axis(0).labels) {
        out += "," + csv_field(label);
    }
    out += "\n";
    for (std::size_t l2 = grid.impact_levels(); l2-- > 0;) {
        out += csv_field(space.axis(1).labels[l2]);
        for (std::size_t l1 = 0; l1 < grid.likelihood_levels(); ++l1) {
            out += "," + csv_field(model.scale().id(grid.at(l1, l2)));
        }
        out += "\n";
    }
    return out;
}

json slice_to_json(const RiskModel& model, const SliceSelector& sigma, const MatrixSlice& grid)
{
    const StateSpace& space = model.space();
    json selector = json::object();
    for (const auto& [id, level] : sigma.levels) {
        selector[id] = level;
    }
    std::vector<std::string> impact_desc(space.axis(1).labels.rbegin(), space.axis(1).labels.rend());
    return {{"likelihood_axis", space.axis(0).id},
            {"impact_axis", space.axis(1).id},
            {"slice", std::move(selector)},
            {"columns", space.axis(0).labels},
            {"rows_order", "impact_descending"},
            {"row_labels", impact_desc},
            {"rows", grid_rows(model, grid)}};
}

json aggregates_to_json(const RiskModel& model, const AxisAggregates& agg, RiskPosition risk, Grade risk_grade)
{
    const StateSpace& space = model.space();
    return {{"likelihood", {{"axis", space.axis(0).id}, {"per_level", grade_ids(model.scale(), agg.likelihood.per_level)}}},
            {"impact", {{"axis", space.axis(1).id}, {"per_level", grade_ids(model.scale(), agg.impact.per_level)}}},
            {"risk", {{"likelihood", risk.likelihood}, {"impact", risk.impact}}},
            {"risk_grade", model.scale().id(risk_grade)}};
}

json walk_to_json(const RiskModel& model, const WalkResult& result)
{
    const Axis& axis = model.space().axis(result.axis);
    json steps = json::array();
    for (const WalkStep& s : result.steps) {
        json step = {{"level", s.level},
                     {"label", axis.labels[s.level]},
                     {"digest", s.digest},
                     {"risk_grade", model.scale().id(s.risk_grade)},
                     {"likelihood", grade_ids(model.scale(), s.aggregates.likelihood.per_level)},
                     {"impact", grade_ids(model.scale(), s.aggregates.impact.per_level)},
                     {"V", s.violations}};
        if (s.grid) {
            step["rows"] = grid_rows(model, *s.grid);
        }
        steps.push_back(std::move(step));
    }
    return {{"axis", axis.id}, {"steps", std::move(steps)}};
}

json violations_to_json(const Violations& v)
{
    return {{"v", v.per_axis}, {"V", v.total}};
}

std::string violations_to_text(const Violations& v)
{
    std::string out = "v=[";
    for (std::size_t i = 0; i < v.per_axis.size(); ++i) {
        out += (i ? "," : "") + std::to_string(v.per_axis[i]);
    }
    return out + "] V=" + std::to_string(v.total);
}

json layout_to_json(const RiskModel& model, const PolarLayout& layout)
{
    json axes = json::array();
    for (std::size_t i = 0; i < layout.d; ++i) {
        const Sector& s = layout.sectors[i];
        json rings = json::array();
        for (const Ring& r : layout.rings[i]) {
            rings.push_back({{"inner", r.inner}, {"outer", r.outer}, {"center", r.center}});
        }
        json axis = {{"id", model.space().axis(i).id},
                     {"start", s.start},
                     {"end", s.end},
                     {"center", s.center},
                     {"rings", std::move(rings)},
                     {"threshold", nullptr}};
        for (const ThresholdArc& arc : layout.threshold_arcs) {
            if (arc.axis == i) {
                axis["threshold"] = {{"radius", arc.radius}, {"start", arc.start}, {"end", arc.end}};
            }
        }
        axes.push_back(std::move(axis));
    }
    return {{"d", layout.d},
            {"theta0", layout.theta0},
            {"sector_width", layout.sector_width},
            {"clockwise", model.polar().clockwise},
            {"axes", std::move(axes)}};
}

}  // namespace ndpolar
