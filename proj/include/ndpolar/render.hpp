#pragma once

#include <map>
#include <string>

#include "ndpolar/model.hpp"

namespace ndpolar {

enum class View { matrix, polar };

struct RenderSpec {
    View view = View::matrix;
    /// Zero means the view's default size.
    double width = 0.0;
    double height = 0.0;
    /// grade id -> "#RRGGBB" overrides of the model palette.
    std::map<std::string, std::string, std::less<>> theme;
    bool show_labels = true;
    bool show_thresholds = true;
};

/// 2D slice: one rect per cell (class "cell"), a context header, and a framed
/// risk cell (class "risk-frame"). Rows run from the highest impact down.
std::string render_matrix(const RiskModel& model, const SliceSelector& sigma, RiskPosition risk,
                          const RenderSpec& spec = {});

/// Polar heatmap: one path per annular segment (class "segment"), threshold arcs
/// (class "threshold"), two crosses and one dot per context axis. Primary axes are
/// coloured by axis aggregation, context axes by their profile.
std::string render_polar(const RiskModel& model, const SliceSelector& sigma, RiskPosition risk,
                         const RenderSpec& spec = {});

std::string render(const RiskModel& model, const SliceSelector& sigma, RiskPosition risk, const RenderSpec& spec);

}  // namespace ndpolar
