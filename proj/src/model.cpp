#include "ndpolar/model.hpp"

#include "ndpolar/error.hpp"

namespace ndpolar {

RiskModel::RiskModel(std::string name, GradeScale scale, StateSpace space, Assignment assignment,
                     std::optional<RiskPosition> risk, std::optional<SliceSelector> default_slice, PolarFrame polar,
                     std::uint64_t enumeration_cap)
    : name_(std::move(name)),
      scale_(std::move(scale)),
      space_(std::move(space)),
      assignment_(std::move(assignment)),
      compiled_(compile_assignment(space_, scale_, assignment_, enumeration_cap)),
      risk_(risk),
      default_slice_(std::move(default_slice)),
      polar_(polar)
{
    for (const Axis& a : space_.axes()) {
        if (!a.profile) continue;
        for (Grade g : *a.profile) {
            if (!scale_.contains(g)) {
                throw Error(ErrorCode::unknown_grade, "axis '" + a.id + "' profile references grade rank " +
                                                          std::to_string(g.rank) + " outside the scale");
            }
        }
    }
    if (risk_) {
        space_.check(*risk_);
    }
    if (default_slice_) {
        (void)space_.context_levels(*default_slice_);
    }
}

std::vector<Grade> MatrixSlice::column(std::size_t l1) const
{
    std::vector<Grade> out;
    out.reserve(n2_);
    for (std::size_t l2 = 0; l2 < n2_; ++l2) {
        out.push_back(at(l1, l2));
    }
    return out;
}

std::vector<Grade> MatrixSlice::row(std::size_t l2) const
{
    std::vector<Grade> out;
    out.reserve(n1_);
    for (std::size_t l1 = 0; l1 < n1_; ++l1) {
        out.push_back(at(l1, l2));
    }
    return out;
}

Grade grade_of(const RiskModel& model, const ContextState& state)
{
    model.space().check(state);
    return model.compiled().grade(state);
}

MatrixSlice slice(const RiskModel& model, std::span<const std::size_t> context_levels)
{
    const StateSpace& space = model.space();
    if (context_levels.size() != space.context_count()) {
        throw Error(ErrorCode::invalid, "expected " + std::to_string(space.context_count()) + " context levels, got " +
                                            std::to_string(context_levels.size()));
    }
    ContextState s;
    s.levels.assign(space.dims(), 0);
    for (std::size_t k = 0; k < context_levels.size(); ++k) {
        s.levels[k + 2] = context_levels[k];
    }
    MatrixSlice out(space.axis(0).size(), space.axis(1).size());
    for (std::size_t l1 = 0; l1 < out.likelihood_levels(); ++l1) {
        for (std::size_t l2 = 0; l2 < out.impact_levels(); ++l2) {
            s.levels[0] = l1;
            s.levels[1] = l2;
            out.at(l1, l2) = grade_of(model, s);
        }
    }
    return out;
}

MatrixSlice slice(const RiskModel& model, const SliceSelector& sigma)
{
    auto levels = model.space().context_levels(sigma);
    return slice(model, std::span<const std::size_t>(levels));
}

Violations violations(const StateSpace& space, const ContextState& state)
{
    space.check(state);
    Violations out;
    out.per_axis.resize(space.dims(), 0);
    for (std::size_t i = 0; i < space.dims(); ++i) {
        const auto& a = space.axis(i).threshold;
        if (a && state.levels[i] > *a) {
            out.per_axis[i] = 1;
            ++out.total;
        }
    }
    return out;
}

Violations violations(const RiskModel& model, const ContextState& state)
{
    return violations(model.space(), state);
}

SliceSelector complete_slice(const RiskModel& model, const SliceSelector& partial)
{
    SliceSelector out = partial;
    const StateSpace& space = model.space();
    for (std::size_t i = 2; i < space.dims(); ++i) {
        const std::string& id = space.axis(i).id;
        if (out.levels.count(id)) continue;
        if (model.default_slice()) {
            auto it = model.default_slice()->levels.find(id);
            if (it != model.default_slice()->levels.end()) {
                out.levels[id] = it->second;
                continue;
            }
        }
        throw Error(ErrorCode::invalid, "no level given for context axis '" + id + "' and the model has no default");
    }
    return out;
}

ContextState risk_state(const RiskModel& model, const SliceSelector& sigma, RiskPosition risk)
{
    const StateSpace& space = model.space();
    space.check(risk);
    auto ctx = space.context_levels(sigma);
    ContextState s;
    s.levels.reserve(space.dims());
    s.levels.push_back(risk.likelihood);
    s.levels.push_back(risk.impact);
    s.levels.insert(s.levels.end(), ctx.begin(), ctx.end());
    return s;
}

}  // namespace ndpolar
