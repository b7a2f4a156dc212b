#include "ndpolar/aggregation.hpp"

#include <cstdint>
#include <cstdio>

#include "ndpolar/error.hpp"

namespace ndpolar {

Grade mode_with_tiebreak(const GradeScale& scale, std::span<const Grade> values)
{
    if (values.empty()) {
        throw Error(ErrorCode::invalid, "mode of an empty multiset");
    }
    std::vector<std::size_t> counts(scale.size(), 0);
    for (Grade g : values) {
        if (!scale.contains(g)) {
            throw Error(ErrorCode::out_of_range, "grade rank " + std::to_string(g.rank) + " outside scale");
        }
        ++counts[g.rank];
    }
    // Scan from the top so the first maximum found is the highest-ranked one.
    std::size_t best = scale.size() - 1;
    for (std::size_t r = scale.size(); r-- > 0;) {
        if (counts[r] > counts[best]) {
            best = r;
        }
    }
    return Grade{best};
}

AxisAggregates aggregate_slice(const MatrixSlice& grid, const GradeScale& scale, RiskPosition risk)
{
    if (risk.likelihood >= grid.likelihood_levels() || risk.impact >= grid.impact_levels()) {
        throw Error(ErrorCode::out_of_range, "risk position outside the slice");
    }
    const Grade risk_grade = grid.at(risk.likelihood, risk.impact);
    AxisAggregates out;
    out.likelihood.axis = 0;
    out.impact.axis = 1;
    for (std::size_t l1 = 0; l1 < grid.likelihood_levels(); ++l1) {
        out.likelihood.per_level.push_back(l1 == risk.likelihood ? risk_grade
                                                                 : mode_with_tiebreak(scale, grid.column(l1)));
    }
    for (std::size_t l2 = 0; l2 < grid.impact_levels(); ++l2) {
        out.impact.per_level.push_back(l2 == risk.impact ? risk_grade : mode_with_tiebreak(scale, grid.row(l2)));
    }
    return out;
}

AxisAggregates aggregate_axes(const RiskModel& model, const SliceSelector& sigma, RiskPosition risk)
{
    model.space().check(risk);
    return aggregate_slice(slice(model, sigma), model.scale(), risk);
}

std::string grid_digest(const MatrixSlice& grid, const GradeScale& scale)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::string_view bytes) {
        for (unsigned char c : bytes) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
    };
    mix(std::to_string(grid.likelihood_levels()) + "x" + std::to_string(grid.impact_levels()));
    for (std::size_t l1 = 0; l1 < grid.likelihood_levels(); ++l1) {
        for (std::size_t l2 = 0; l2 < grid.impact_levels(); ++l2) {
            mix("|");
            mix(scale.id(grid.at(l1, l2)));
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

WalkResult walk(const RiskModel& model, std::string_view vary, const SliceSelector& fixed, RiskPosition risk,
                const WalkOptions& options)
{
    const StateSpace& space = model.space();
    const std::size_t axis = space.axis_index(vary);
    if (axis < 2) {
        throw Error(ErrorCode::invalid, "walk axis '" + std::string(vary) + "' is not a context axis");
    }
    if (fixed.levels.count(vary)) {
        throw Error(ErrorCode::invalid, "walk axis '" + std::string(vary) + "' is also fixed");
    }
    space.check(risk);

    SliceSelector base = fixed;
    base.levels[std::string(vary)] = 0;
    base = complete_slice(model, base);

    WalkResult out;
    out.axis = axis;
    for (std::size_t v = 0; v < space.axis(axis).size(); ++v) {
        base.levels[std::string(vary)] = v;
        MatrixSlice grid = slice(model, base);
        WalkStep step;
        step.level = v;
        step.digest = grid_digest(grid, model.scale());
        step.risk_grade = grid.at(risk.likelihood, risk.impact);
        step.aggregates = aggregate_slice(grid, model.scale(), risk);
        step.violations = violations(model, risk_state(model, base, risk)).total;
        if (options.inline_grids) {
            step.grid = std::move(grid);
        }
        out.steps.push_back(std::move(step));
    }
    return out;
}

}  // namespace ndpolar
