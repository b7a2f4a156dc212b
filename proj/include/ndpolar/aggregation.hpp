#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ndpolar/model.hpp"

namespace ndpolar {

/// Most frequent grade; ties go to the highest rank. Throws on an empty multiset.
Grade mode_with_tiebreak(const GradeScale& scale, std::span<const Grade> values);

struct AxisAggregate {
    std::size_t axis = 0;
    std::vector<Grade> per_level;

    friend bool operator==(const AxisAggregate&, const AxisAggregate&) = default;
};

struct AxisAggregates {
    AxisAggregate likelihood;
    AxisAggregate impact;

    friend bool operator==(const AxisAggregates&, const AxisAggregates&) = default;
};

/// Column/row modes of the grid, with the risk cell's grade on the risk's own
/// column and row.
AxisAggregates aggregate_slice(const MatrixSlice& grid, const GradeScale& scale, RiskPosition risk);

AxisAggregates aggregate_axes(const RiskModel& model, const SliceSelector& sigma, RiskPosition risk);

/// Stable FNV-1a digest of a grid's dimensions and grade ids, as 16 hex digits.
std::string grid_digest(const MatrixSlice& grid, const GradeScale& scale);

struct WalkStep {
    std::size_t level = 0;
    std::string digest;
    std::optional<MatrixSlice> grid;
    Grade risk_grade;
    AxisAggregates aggregates;
    int violations = 0;

    friend bool operator==(const WalkStep&, const WalkStep&) = default;
};

struct WalkResult {
    std::size_t axis = 0;
    std::vector<WalkStep> steps;

    friend bool operator==(const WalkResult&, const WalkResult&) = default;
};

struct WalkOptions {
    bool inline_grids = false;
};

/// Steps one context axis through all its levels with the others held at `fixed`.
/// `fixed` must not mention `vary`; missing axes fall back to the model's default slice.
WalkResult walk(const RiskModel& model, std::string_view vary, const SliceSelector& fixed, RiskPosition risk,
                const WalkOptions& options = {});

}  // namespace ndpolar
