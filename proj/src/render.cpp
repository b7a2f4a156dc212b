#include "ndpolar/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "ndpolar/aggregation.hpp"
#include "ndpolar/error.hpp"
#include "ndpolar/geometry.hpp"

namespace ndpolar {

namespace {

constexpr double kMatrixWidth = 720.0;
constexpr double kMatrixHeight = 480.0;
constexpr double kPolarSize = 640.0;

std::string num(double v)
{
    if (std::fabs(v) < 5e-7) {
        v = 0.0;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string escape(std::string_view s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

bool is_hex_color(std::string_view s)
{
    return s.size() == 7 && s[0] == '#' && std::all_of(s.begin() + 1, s.end(), [](char c) {
               return std::isxdigit(static_cast<unsigned char>(c));
           });
}

class Palette {
public:
    Palette(const GradeScale& scale, const RenderSpec& spec) : scale_(&scale), theme_(&spec.theme)
    {
        for (const auto& [id, color] : spec.theme) {
            if (!scale.find(id)) {
                throw Error(ErrorCode::unknown_grade, "theme references unknown grade '" + id + "'");
            }
            if (!is_hex_color(color)) {
                throw Error(ErrorCode::invalid, "theme color for '" + id + "' must be #RRGGBB, got '" + color + "'");
            }
        }
    }

    const std::string& operator()(Grade g) const
    {
        const std::string& id = scale_->id(g);
        if (auto it = theme_->find(id); it != theme_->end()) {
            return it->second;
        }
        return scale_->color(g);
    }

private:
    const GradeScale* scale_;
    const std::map<std::string, std::string, std::less<>>* theme_;
};

void open_svg(std::string& out, double w, double h, const std::string& title, std::string_view style)
{
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(w) + "\" height=\"" + num(h) +
           "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n";
    out += "<title>" + escape(title) + "</title>\n";
    out += "<style>";
    out += style;
    out += "</style>\n";
}

void check_size(double w, double h)
{
    if (!(w > 0.0) || !(h > 0.0)) {
        throw Error(ErrorCode::invalid, "render size must be positive");
    }
}

}  // namespace

std::string render_matrix(const RiskModel& model, const SliceSelector& sigma, RiskPosition risk, const RenderSpec& spec)
{
    const StateSpace& space = model.space();
    const double w = spec.width > 0.0 ? spec.width : kMatrixWidth;
    const double h = spec.height > 0.0 ? spec.height : kMatrixHeight;
    check_size(w, h);
    space.check(risk);
    const MatrixSlice grid = slice(model, sigma);
    const auto ctx = space.context_levels(sigma);
    const Palette palette(model.scale(), spec);

    const double s = w / kMatrixWidth;
    const double header_h = 30.0 * s + 18.0 * s * static_cast<double>(std::max<std::size_t>(ctx.size(), 1));
    const double left = 170.0 * s;
    const double top = 8.0 * s + header_h + 34.0 * s;
    const double right = 20.0 * s;
    const double bottom = 60.0 * s;
    const std::size_t n1 = grid.likelihood_levels();
    const std::size_t n2 = grid.impact_levels();
    const double cw = (w - left - right) / static_cast<double>(n1);
    const double ch = (h - top - bottom) / static_cast<double>(n2);
    if (!(cw > 0.0) || !(ch > 0.0)) {
        throw Error(ErrorCode::invalid, "render size too small for the matrix");
    }
    const double font = 12.0 * s;

    std::string out;
    open_svg(out, w, h, model.name(),
             "text{font-family:sans-serif;font-size:" + num(font) +
                 "px}.cell{stroke:#000000;stroke-width:" + num(0.5 * s) +
                 "}.risk-frame{fill:none;stroke:#000000;stroke-width:" + num(1.2 * s) +
                 "}.context-header rect{fill:none;stroke:#000000;stroke-width:" + num(0.5 * s) + "}");

    out += "<g class=\"context-header\">\n";
    out += "<rect x=\"" + num(8.0 * s) + "\" y=\"" + num(8.0 * s) + "\" width=\"" + num(w - 16.0 * s) +
           "\" height=\"" + num(header_h) + "\"/>\n";
    out += "<text x=\"" + num(16.0 * s) + "\" y=\"" + num(8.0 * s + 20.0 * s) +
           "\" font-weight=\"bold\">Context layer (slice)</text>\n";
    for (std::size_t k = 0; k < ctx.size(); ++k) {
        const Axis& a = space.axis(k + 2);
        const double y = 8.0 * s + 20.0 * s + 18.0 * s * static_cast<double>(k + 1);
        out += "<text class=\"context-axis\" x=\"" + num(16.0 * s) + "\" y=\"" + num(y) + "\">" +
               escape(a.display_title()) + ":</text>\n";
        out += "<text class=\"context-value\" data-axis=\"" + escape(a.id) + "\" x=\"" + num(w / 2.0) + "\" y=\"" +
               num(y) + "\">" + std::to_string(ctx[k]) + ": " + escape(a.labels[ctx[k]]) + "</text>\n";
    }
    out += "</g>\n";

    out += "<g class=\"matrix\">\n";
    for (std::size_t l2 = n2; l2-- > 0;) {
        const double y = top + static_cast<double>(n2 - 1 - l2) * ch;
        for (std::size_t l1 = 0; l1 < n1; ++l1) {
            const double x = left + static_cast<double>(l1) * cw;
            out += "<rect class=\"cell\" data-l1=\"" + std::to_string(l1) + "\" data-l2=\"" + std::to_string(l2) +
                   "\" x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(cw) + "\" height=\"" + num(ch) +
                   "\" fill=\"" + palette(grid.at(l1, l2)) + "\"/>\n";
        }
    }
    out += "<rect class=\"risk-frame\" x=\"" + num(left + static_cast<double>(risk.likelihood) * cw) + "\" y=\"" +
           num(top + static_cast<double>(n2 - 1 - risk.impact) * ch) + "\" width=\"" + num(cw) + "\" height=\"" +
           num(ch) + "\"/>\n";
    out += "</g>\n";

    if (spec.show_labels) {
        const Axis& lik = space.axis(0);
        const Axis& imp = space.axis(1);
        out += "<g class=\"labels\">\n";
        for (std::size_t l2 = 0; l2 < n2; ++l2) {
            const double y = top + (static_cast<double>(n2 - 1 - l2) + 0.5) * ch + font * 0.35;
            out += "<text class=\"row-label\" x=\"" + num(left - 8.0 * s) + "\" y=\"" + num(y) +
                   "\" text-anchor=\"end\">" + escape(imp.labels[l2]) + "</text>\n";
        }
        for (std::size_t l1 = 0; l1 < n1; ++l1) {
            const double x = left + (static_cast<double>(l1) + 0.5) * cw;
            out += "<text class=\"column-label\" x=\"" + num(x) + "\" y=\"" + num(top + static_cast<double>(n2) * ch + 16.0 * s) +
                   "\" text-anchor=\"middle\">" + escape(lik.labels[l1]) + "</text>\n";
        }
        out += "<text class=\"axis-title\" x=\"" + num(left + static_cast<double>(n1) * cw / 2.0) + "\" y=\"" +
               num(top + static_cast<double>(n2) * ch + 40.0 * s) + "\" text-anchor=\"middle\">" +
               escape(lik.display_title()) + "</text>\n";
        const double ty = top + static_cast<double>(n2) * ch / 2.0;
        out += "<text class=\"axis-title\" x=\"" + num(24.0 * s) + "\" y=\"" + num(ty) +
               "\" text-anchor=\"middle\" transform=\"rotate(-90 " + num(24.0 * s) + " " + num(ty) + ")\">" +
               escape(imp.display_title()) + "</text>\n";
        out += "</g>\n";
    }
    out += "</svg>\n";
    return out;
}

namespace {

class PolarCanvas {
public:
    PolarCanvas(double cx, double cy, double radius, bool clockwise)
        : cx_(cx), cy_(cy), r_(radius), clockwise_(clockwise)
    {
    }

    std::string point(double rho, double theta) const
    {
        const double x = cx_ + r_ * rho * std::cos(theta);
        const double dy = r_ * rho * std::sin(theta);
        const double y = clockwise_ ? cy_ + dy : cy_ - dy;
        return num(x) + " " + num(y);
    }

    std::pair<double, double> xy(double rho, double theta) const
    {
        const double dy = r_ * rho * std::sin(theta);
        return {cx_ + r_ * rho * std::cos(theta), clockwise_ ? cy_ + dy : cy_ - dy};
    }

    /// Arc from a0 to a1 (a1 > a0) at radius rho; `forward` false draws it back.
    std::string arc(double rho, double a0, double a1, bool forward) const
    {
        const bool large = (a1 - a0) > std::numbers::pi;
        // SVG sweep 1 is the screen's clockwise direction; increasing angles are
        // clockwise on screen exactly when the frame is clockwise.
        const bool sweep = forward == clockwise_;
        return "A " + num(r_ * rho) + " " + num(r_ * rho) + " 0 " + (large ? "1" : "0") + " " + (sweep ? "1" : "0") +
               " " + point(rho, forward ? a1 : a0);
    }

    std::string segment(double inner, double outer, double a0, double a1) const
    {
        if (inner <= 0.0) {
            return "M " + num(cx_) + " " + num(cy_) + " L " + point(outer, a0) + " " + arc(outer, a0, a1, true) + " Z";
        }
        return "M " + point(outer, a0) + " " + arc(outer, a0, a1, true) + " L " + point(inner, a1) + " " +
               arc(inner, a0, a1, false) + " Z";
    }

    double cx() const { return cx_; }
    double cy() const { return cy_; }
    double radius() const { return r_; }

private:
    double cx_, cy_, r_;
    bool clockwise_;
};

}  // namespace

std::string render_polar(const RiskModel& model, const SliceSelector& sigma, RiskPosition risk, const RenderSpec& spec)
{
    const StateSpace& space = model.space();
    const double w = spec.width > 0.0 ? spec.width : kPolarSize;
    const double h = spec.height > 0.0 ? spec.height : kPolarSize;
    check_size(w, h);
    space.check(risk);
    for (std::size_t i = 2; i < space.dims(); ++i) {
        if (!space.axis(i).profile) {
            throw Error(ErrorCode::invalid, "context axis '" + space.axis(i).id +
                                                "' has no profile; add a \"profile\" listing one grade per level");
        }
    }
    const auto ctx = space.context_levels(sigma);
    const AxisAggregates agg = aggregate_axes(model, sigma, risk);
    const Palette palette(model.scale(), spec);
    const PolarLayout geo = layout(space, model.polar().theta0);

    const double s = std::min(w, h) / kPolarSize;
    const PolarCanvas canvas(w / 2.0, h / 2.0, 0.34 * std::min(w, h), model.polar().clockwise);
    const double font = 12.0 * s;

    auto level_color = [&](std::size_t axis, std::size_t level) -> const std::string& {
        if (axis == 0) return palette(agg.likelihood.per_level[level]);
        if (axis == 1) return palette(agg.impact.per_level[level]);
        return palette((*space.axis(axis).profile)[level]);
    };

    std::string out;
    open_svg(out, w, h, model.name(),
             "text{font-family:sans-serif;font-size:" + num(font) + "px}.segment{stroke:#000000;stroke-opacity:0.18;stroke-width:" +
                 num(0.75 * s) + "}.spoke,.rim{fill:none;stroke:#000000;stroke-opacity:0.3;stroke-width:" + num(s) +
                 "}.threshold{fill:none;stroke:#000000;stroke-width:" + num(2.4 * s) +
                 "}.cross{fill:none;stroke:#000000;stroke-width:" + num(2.0 * s) + "}.dot,.center{fill:#000000}");

    out += "<g class=\"segments\">\n";
    for (std::size_t i = 0; i < geo.d; ++i) {
        const Sector& sec = geo.sectors[i];
        for (std::size_t l = 0; l < geo.rings[i].size(); ++l) {
            const Ring& ring = geo.rings[i][l];
            out += "<path class=\"segment\" data-axis=\"" + std::to_string(i) + "\" data-level=\"" + std::to_string(l) +
                   "\" d=\"" + canvas.segment(ring.inner, ring.outer, sec.start, sec.end) + "\" fill=\"" +
                   level_color(i, l) + "\"/>\n";
        }
    }
    out += "</g>\n";

    out += "<g class=\"grid\">\n";
    for (const Sector& sec : geo.sectors) {
        out += "<path class=\"spoke\" d=\"M " + num(canvas.cx()) + " " + num(canvas.cy()) + " L " +
               canvas.point(1.0, sec.start) + "\"/>\n";
    }
    out += "<circle class=\"rim\" cx=\"" + num(canvas.cx()) + "\" cy=\"" + num(canvas.cy()) + "\" r=\"" +
           num(canvas.radius()) + "\"/>\n";
    out += "</g>\n";

    if (spec.show_thresholds) {
        out += "<g class=\"thresholds\">\n";
        for (const ThresholdArc& arc : geo.threshold_arcs) {
            out += "<path class=\"threshold\" data-axis=\"" + std::to_string(arc.axis) + "\" d=\"M " +
                   canvas.point(arc.radius, arc.start) + " " + canvas.arc(arc.radius, arc.start, arc.end, true) +
                   "\"/>\n";
        }
        out += "</g>\n";
    }

    out += "<g class=\"markers\">\n";
    const double cross = 7.0 * s;
    const std::size_t risk_levels[2] = {risk.likelihood, risk.impact};
    for (std::size_t i = 0; i < 2; ++i) {
        auto [x, y] = canvas.xy(locate(geo, i, risk_levels[i]).radius, locate(geo, i, risk_levels[i]).angle);
        out += "<path class=\"cross\" data-axis=\"" + std::to_string(i) + "\" d=\"M " + num(x - cross) + " " +
               num(y - cross) + " L " + num(x + cross) + " " + num(y + cross) + " M " + num(x - cross) + " " +
               num(y + cross) + " L " + num(x + cross) + " " + num(y - cross) + "\"/>\n";
    }
    for (std::size_t k = 0; k < ctx.size(); ++k) {
        const PolarPoint p = locate(geo, k + 2, ctx[k]);
        auto [x, y] = canvas.xy(p.radius, p.angle);
        out += "<circle class=\"dot\" data-axis=\"" + std::to_string(k + 2) + "\" cx=\"" + num(x) + "\" cy=\"" +
               num(y) + "\" r=\"" + num(4.5 * s) + "\"/>\n";
    }
    out += "<circle class=\"center\" cx=\"" + num(canvas.cx()) + "\" cy=\"" + num(canvas.cy()) + "\" r=\"" +
           num(2.5 * s) + "\"/>\n";
    out += "</g>\n";

    if (spec.show_labels) {
        out += "<g class=\"labels\">\n";
        for (std::size_t i = 0; i < geo.d; ++i) {
            const double theta = geo.sectors[i].center;
            auto [x, y] = canvas.xy(1.0 + 40.0 * s / canvas.radius(), theta);
            const double dx = x - canvas.cx();
            const char* anchor = std::fabs(dx) < 1e-6 * w ? "middle" : dx > 0 ? "start" : "end";
            out += "<text class=\"axis-label\" x=\"" + num(x) + "\" y=\"" + num(y + font * 0.35) +
                   "\" text-anchor=\"" + anchor + "\">" + escape(space.axis(i).display_title()) + "</text>\n";
            const std::size_t level = i == 0 ? risk.likelihood : i == 1 ? risk.impact : ctx[i - 2];
            const PolarPoint p = locate(geo, i, level);
            auto [mx, my] = canvas.xy(p.radius, p.angle);
            out += "<text class=\"marker-label\" x=\"" + num(mx + 10.0 * s) + "\" y=\"" + num(my - 10.0 * s) +
                   "\">" + escape(space.axis(i).labels[level]) + "</text>\n";
        }
        out += "</g>\n";
    }
    out += "</svg>\n";
    return out;
}

std::string render(const RiskModel& model, const SliceSelector& sigma, RiskPosition risk, const RenderSpec& spec)
{
    return spec.view == View::matrix ? render_matrix(model, sigma, risk, spec) : render_polar(model, sigma, risk, spec);
}

}  // namespace ndpolar
