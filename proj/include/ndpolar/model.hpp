#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ndpolar/rules.hpp"
#include "ndpolar/space.hpp"

namespace ndpolar {

/// Screen orientation of the polar view. Angles stay mathematical; `clockwise`
/// only flips how increasing angles are drawn.
struct PolarFrame {
    double theta0 = 0.0;
    bool clockwise = false;

    friend bool operator==(const PolarFrame&, const PolarFrame&) = default;
};

/// Immutable ND heatmap H: L -> G with its presentation metadata.
class RiskModel {
public:
    RiskModel(std::string name, GradeScale scale, StateSpace space, Assignment assignment,
              std::optional<RiskPosition> risk = std::nullopt, std::optional<SliceSelector> default_slice = std::nullopt,
              PolarFrame polar = {}, std::uint64_t enumeration_cap = kDefaultEnumerationCap);

    const std::string& name() const noexcept { return name_; }
    const GradeScale& scale() const noexcept { return scale_; }
    const StateSpace& space() const noexcept { return space_; }
    const Assignment& assignment() const noexcept { return assignment_; }
    const CompiledAssignment& compiled() const noexcept { return compiled_; }
    const std::optional<RiskPosition>& risk() const noexcept { return risk_; }
    const std::optional<SliceSelector>& default_slice() const noexcept { return default_slice_; }
    const PolarFrame& polar() const noexcept { return polar_; }

private:
    std::string name_;
    GradeScale scale_;
    StateSpace space_;
    Assignment assignment_;
    CompiledAssignment compiled_;
    std::optional<RiskPosition> risk_;
    std::optional<SliceSelector> default_slice_;
    PolarFrame polar_;
};

/// n1 x n2 grid of grades; cell (l1, l2) is likelihood l1, impact l2.
class MatrixSlice {
public:
    MatrixSlice(std::size_t likelihood_levels, std::size_t impact_levels)
        : n1_(likelihood_levels), n2_(impact_levels), cells_(likelihood_levels * impact_levels)
    {
    }

    std::size_t likelihood_levels() const noexcept { return n1_; }
    std::size_t impact_levels() const noexcept { return n2_; }

    Grade at(std::size_t l1, std::size_t l2) const { return cells_.at(l1 * n2_ + l2); }
    Grade& at(std::size_t l1, std::size_t l2) { return cells_.at(l1 * n2_ + l2); }

    /// C(l1): the grades of column l1 over all impact levels.
    std::vector<Grade> column(std::size_t l1) const;
    /// R(l2): the grades of row l2 over all likelihood levels.
    std::vector<Grade> row(std::size_t l2) const;

    friend bool operator==(const MatrixSlice&, const MatrixSlice&) = default;

private:
    std::size_t n1_;
    std::size_t n2_;
    std::vector<Grade> cells_;
};

Grade grade_of(const RiskModel& model, const ContextState& state);

/// H restricted to a fixing of every context axis.
MatrixSlice slice(const RiskModel& model, const SliceSelector& sigma);
MatrixSlice slice(const RiskModel& model, std::span<const std::size_t> context_levels);

struct Violations {
    std::vector<int> per_axis;
    int total = 0;

    friend bool operator==(const Violations&, const Violations&) = default;
};

/// v_i = [l_i > a_i]; axes without a threshold contribute 0.
Violations violations(const StateSpace& space, const ContextState& state);
Violations violations(const RiskModel& model, const ContextState& state);

/// Fills context axes missing from `partial` from the model's default slice.
SliceSelector complete_slice(const RiskModel& model, const SliceSelector& partial);

/// The state (r1, r2, sigma).
ContextState risk_state(const RiskModel& model, const SliceSelector& sigma, RiskPosition risk);

}  // namespace ndpolar
