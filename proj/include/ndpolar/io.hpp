#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ndpolar/aggregation.hpp"
#include "ndpolar/geometry.hpp"
#include "ndpolar/model.hpp"

namespace ndpolar {

// Textual inputs shared by the CLI flags and HTTP query parameters. Every level
// token may be a label or an index.

/// "axis=level" pairs into a (possibly partial) selector.
SliceSelector parse_slice_assignments(const StateSpace& space, std::span<const std::string> assignments);
/// "L,I" into a risk position.
RiskPosition parse_risk(const StateSpace& space, std::string_view text);
/// "l1,l2,...,ld" into a full state.
ContextState parse_state(const StateSpace& space, std::string_view text);

// Result views.

/// Header row of likelihood labels, then one row per impact level, highest first.
std::string slice_to_csv(const RiskModel& model, const SliceSelector& sigma, const MatrixSlice& grid);
nlohmann::json slice_to_json(const RiskModel& model, const SliceSelector& sigma, const MatrixSlice& grid);

nlohmann::json aggregates_to_json(const RiskModel& model, const AxisAggregates& agg, RiskPosition risk,
                                  Grade risk_grade);
nlohmann::json walk_to_json(const RiskModel& model, const WalkResult& result);
nlohmann::json violations_to_json(const Violations& v);
/// "v=[0,0,0,1] V=1"
std::string violations_to_text(const Violations& v);
nlohmann::json layout_to_json(const RiskModel& model, const PolarLayout& layout);

}  // namespace ndpolar
