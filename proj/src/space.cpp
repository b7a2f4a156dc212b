#include "ndpolar/space.hpp"

#include <charconv>
#include <limits>
#include <set>

#include "ndpolar/error.hpp"

namespace ndpolar {

namespace {

bool is_hex_color(std::string_view s)
{
    if (s.size() != 7 || s[0] != '#') {
        return false;
    }
    for (char c : s.substr(1)) {
        bool hex = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
        if (!hex) {
            return false;
        }
    }
    return true;
}

std::optional<std::size_t> parse_index(std::string_view token)
{
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty()) {
        return std::nullopt;
    }
    return value;
}

}  // namespace

GradeScale::GradeScale(std::vector<RankedGrade> grades) : grades_(std::move(grades))
{
    if (grades_.size() < 2) {
        throw Error(ErrorCode::schema, "grade scale needs at least 2 grades");
    }
    std::set<std::string_view> seen;
    for (std::size_t i = 0; i < grades_.size(); ++i) {
        const auto& g = grades_[i];
        if (g.id.empty()) {
            throw Error(ErrorCode::schema, "grade id must be non-empty");
        }
        if (!seen.insert(g.id).second) {
            throw Error(ErrorCode::schema, "duplicate grade id '" + g.id + "'");
        }
        if (g.rank != i) {
            throw Error(ErrorCode::schema, "grade '" + g.id + "' has rank " + std::to_string(g.rank) +
                                               ", expected " + std::to_string(i) + " (ranks must be 0..n-1 in order)");
        }
        if (!is_hex_color(g.color)) {
            throw Error(ErrorCode::schema, "grade '" + g.id + "' has invalid color '" + g.color + "' (expected #RRGGBB)");
        }
    }
}

const std::string& GradeScale::id(Grade g) const
{
    if (!contains(g)) {
        throw Error(ErrorCode::out_of_range, "grade rank " + std::to_string(g.rank) + " outside scale");
    }
    return grades_[g.rank].id;
}

const std::string& GradeScale::color(Grade g) const
{
    if (!contains(g)) {
        throw Error(ErrorCode::out_of_range, "grade rank " + std::to_string(g.rank) + " outside scale");
    }
    return grades_[g.rank].color;
}

std::optional<Grade> GradeScale::find(std::string_view id) const
{
    for (const auto& g : grades_) {
        if (g.id == id) {
            return Grade{g.rank};
        }
    }
    return std::nullopt;
}

Grade GradeScale::at(std::string_view id) const
{
    if (auto g = find(id)) {
        return *g;
    }
    throw Error(ErrorCode::unknown_grade, "unknown grade '" + std::string(id) + "'");
}

bool operator==(const RankedGrade& a, const RankedGrade& b)
{
    return a.id == b.id && a.rank == b.rank && a.color == b.color;
}

bool operator==(const GradeScale& a, const GradeScale& b)
{
    return a.grades_ == b.grades_;
}

std::string_view role_name(AxisRole role) noexcept
{
    switch (role) {
    case AxisRole::likelihood: return "likelihood";
    case AxisRole::impact: return "impact";
    case AxisRole::context: return "context";
    }
    return "context";
}

std::optional<AxisRole> parse_role(std::string_view name) noexcept
{
    if (name == "likelihood") return AxisRole::likelihood;
    if (name == "impact") return AxisRole::impact;
    if (name == "context") return AxisRole::context;
    return std::nullopt;
}

std::optional<std::size_t> Axis::find_label(std::string_view label) const
{
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == label) {
            return i;
        }
    }
    return std::nullopt;
}

StateSpace::StateSpace(std::vector<Axis> axes) : axes_(std::move(axes))
{
    if (axes_.size() < 2) {
        throw Error(ErrorCode::schema, "state space needs at least 2 axes");
    }
    std::set<std::string_view> ids;
    std::uint64_t product = 1;
    for (std::size_t i = 0; i < axes_.size(); ++i) {
        const Axis& a = axes_[i];
        AxisRole expected = i == 0 ? AxisRole::likelihood : i == 1 ? AxisRole::impact : AxisRole::context;
        if (a.id.empty()) {
            throw Error(ErrorCode::schema, "axis " + std::to_string(i) + " has an empty id");
        }
        if (!ids.insert(a.id).second) {
            throw Error(ErrorCode::schema, "duplicate axis id '" + a.id + "'");
        }
        if (a.role != expected) {
            throw Error(ErrorCode::schema, "axis '" + a.id + "' at position " + std::to_string(i) + " must have role " +
                                               std::string(role_name(expected)));
        }
        if (a.labels.size() < 2) {
            throw Error(ErrorCode::schema, "axis '" + a.id + "' needs at least 2 levels");
        }
        std::set<std::string_view> labels;
        for (const auto& l : a.labels) {
            if (!labels.insert(l).second) {
                throw Error(ErrorCode::schema, "axis '" + a.id + "' has duplicate label '" + l + "'");
            }
        }
        if (a.threshold && *a.threshold >= a.labels.size()) {
            throw Error(ErrorCode::out_of_range, "axis '" + a.id + "' threshold " + std::to_string(*a.threshold) +
                                                     " is not a level index");
        }
        if (a.profile && a.profile->size() != a.labels.size()) {
            throw Error(ErrorCode::schema, "axis '" + a.id + "' profile has " + std::to_string(a.profile->size()) +
                                               " entries, expected " + std::to_string(a.labels.size()));
        }
        if (product > std::numeric_limits<std::uint64_t>::max() / a.labels.size()) {
            throw Error(ErrorCode::invalid, "state space too large to index");
        }
        product *= a.labels.size();
    }
    size_ = product;
}

std::optional<std::size_t> StateSpace::find_axis(std::string_view id) const
{
    for (std::size_t i = 0; i < axes_.size(); ++i) {
        if (axes_[i].id == id) {
            return i;
        }
    }
    return std::nullopt;
}

std::size_t StateSpace::axis_index(std::string_view id) const
{
    if (auto i = find_axis(id)) {
        return *i;
    }
    throw Error(ErrorCode::unknown_axis, "unknown axis '" + std::string(id) + "'");
}

std::size_t StateSpace::resolve_level(std::size_t axis, std::string_view token) const
{
    const Axis& a = axes_.at(axis);
    if (auto l = a.find_label(token)) {
        return *l;
    }
    if (auto idx = parse_index(token)) {
        if (*idx < a.size()) {
            return *idx;
        }
        throw Error(ErrorCode::out_of_range, "level " + std::string(token) + " out of range for axis '" + a.id +
                                                 "' (0.." + std::to_string(a.size() - 1) + ")");
    }
    throw Error(ErrorCode::unknown_level, "unknown level '" + std::string(token) + "' on axis '" + a.id + "'");
}

void StateSpace::check(const ContextState& state) const
{
    if (state.levels.size() != axes_.size()) {
        throw Error(ErrorCode::out_of_range, "state has " + std::to_string(state.levels.size()) + " levels, expected " +
                                                 std::to_string(axes_.size()));
    }
    for (std::size_t i = 0; i < axes_.size(); ++i) {
        if (state.levels[i] >= axes_[i].size()) {
            throw Error(ErrorCode::out_of_range, "level " + std::to_string(state.levels[i]) + " out of range for axis '" +
                                                     axes_[i].id + "' (0.." + std::to_string(axes_[i].size() - 1) + ")");
        }
    }
}

void StateSpace::check(RiskPosition risk) const
{
    if (risk.likelihood >= axes_[0].size()) {
        throw Error(ErrorCode::out_of_range, "risk level " + std::to_string(risk.likelihood) + " out of range for axis '" +
                                                 axes_[0].id + "'");
    }
    if (risk.impact >= axes_[1].size()) {
        throw Error(ErrorCode::out_of_range, "risk level " + std::to_string(risk.impact) + " out of range for axis '" +
                                                 axes_[1].id + "'");
    }
}

std::vector<std::size_t> StateSpace::context_levels(const SliceSelector& sigma) const
{
    std::vector<std::size_t> out(context_count());
    std::vector<bool> seen(context_count(), false);
    for (const auto& [id, level] : sigma.levels) {
        auto i = find_axis(id);
        if (!i) {
            throw Error(ErrorCode::unknown_axis, "unknown axis '" + id + "' in slice");
        }
        if (*i < 2) {
            throw Error(ErrorCode::unknown_axis, "axis '" + id + "' is not a context axis");
        }
        if (level >= axes_[*i].size()) {
            throw Error(ErrorCode::out_of_range, "level " + std::to_string(level) + " out of range for axis '" + id +
                                                     "' (0.." + std::to_string(axes_[*i].size() - 1) + ")");
        }
        out[*i - 2] = level;
        seen[*i - 2] = true;
    }
    for (std::size_t k = 0; k < seen.size(); ++k) {
        if (!seen[k]) {
            throw Error(ErrorCode::invalid, "slice is missing context axis '" + axes_[k + 2].id + "'");
        }
    }
    return out;
}

SliceSelector StateSpace::selector(std::span<const std::size_t> context_levels) const
{
    if (context_levels.size() != context_count()) {
        throw Error(ErrorCode::invalid, "expected " + std::to_string(context_count()) + " context levels");
    }
    SliceSelector sigma;
    for (std::size_t k = 0; k < context_levels.size(); ++k) {
        sigma.levels[axes_[k + 2].id] = context_levels[k];
    }
    (void)this->context_levels(sigma);
    return sigma;
}

std::uint64_t StateSpace::linear_index(const ContextState& state) const
{
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < axes_.size(); ++i) {
        index = index * axes_[i].size() + state.levels[i];
    }
    return index;
}

ContextState StateSpace::state_at(std::uint64_t index) const
{
    ContextState s;
    s.levels.resize(axes_.size());
    for (std::size_t i = axes_.size(); i-- > 0;) {
        s.levels[i] = index % axes_[i].size();
        index /= axes_[i].size();
    }
    return s;
}

std::string StateSpace::describe(const ContextState& state) const
{
    std::string out = "(";
    for (std::size_t i = 0; i < axes_.size() && i < state.levels.size(); ++i) {
        if (i) out += ", ";
        out += axes_[i].id + "=";
        std::size_t l = state.levels[i];
        out += l < axes_[i].size() ? axes_[i].labels[l] : std::to_string(l);
    }
    return out + ")";
}

StateRange::iterator::iterator(const StateSpace* space, bool end) : space_(space), done_(end)
{
    if (!end) {
        state_.levels.assign(space->dims(), 0);
    }
}

StateRange::iterator& StateRange::iterator::operator++()
{
    for (std::size_t i = state_.levels.size(); i-- > 0;) {
        if (++state_.levels[i] < space_->axis(i).size()) {
            return *this;
        }
        state_.levels[i] = 0;
    }
    done_ = true;
    state_.levels.clear();
    return *this;
}

StateRange enumerate_states(const StateSpace& space, std::uint64_t cap)
{
    if (space.size() > cap) {
        throw Error(ErrorCode::enumeration_cap,
                    "state space has " + std::to_string(space.size()) + " states, above the enumeration cap of " +
                        std::to_string(cap) + "; validate with a default grade instead of full enumeration");
    }
    return StateRange(space);
}

}  // namespace ndpolar
