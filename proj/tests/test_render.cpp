#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "ndpolar/aggregation.hpp"
#include "ndpolar/error.hpp"
#include "ndpolar/render.hpp"
#include "support/fixtures.hpp"
#include "support/svg_scan.hpp"

using namespace ndpolar;
using namespace ndpolar::testing;

namespace {

SliceSelector sigma_of(std::size_t cooling, std::size_t maintenance)
{
    SliceSelector s;
    s.levels = {{"cooling", cooling}, {"maintenance", maintenance}};
    return s;
}

RiskModel with_frame(const RiskModel& m, PolarFrame frame)
{
    return RiskModel(m.name(), m.scale(), m.space(), m.assignment(), m.risk(), m.default_slice(), frame);
}

struct PathCmd {
    char op;
    std::vector<double> args;
};

std::vector<PathCmd> parse_path(const std::string& d)
{
    std::istringstream in(d);
    std::vector<PathCmd> out;
    std::string tok;
    while (in >> tok) {
        if (std::isalpha(static_cast<unsigned char>(tok[0]))) {
            out.push_back({tok[0], {}});
        } else {
            out.back().args.push_back(std::stod(tok));
        }
    }
    return out;
}

std::vector<std::vector<PathCmd>> segment_paths(const std::string& svg)
{
    std::vector<std::vector<PathCmd>> out;
    for (const auto& t : tags_with_class(svg, "segment")) out.push_back(parse_path(t.attrs.at("d")));
    return out;
}

// Applies `map` to every endpoint of `a` and compares against `b`; arcs must agree on
// radii and large-arc flag, and on the sweep flag up to `flip_sweep`.
template <class Map>
void check_mapped(const std::vector<std::vector<PathCmd>>& a, const std::vector<std::vector<PathCmd>>& b, Map map,
                  bool flip_sweep)
{
    REQUIRE(a.size() == b.size());
    for (std::size_t p = 0; p < a.size(); ++p) {
        REQUIRE(a[p].size() == b[p].size());
        for (std::size_t c = 0; c < a[p].size(); ++c) {
            const auto& x = a[p][c];
            const auto& y = b[p][c];
            REQUIRE(x.op == y.op);
            REQUIRE(x.args.size() == y.args.size());
            if (x.op == 'Z') continue;
            const std::size_t n = x.args.size();
            auto [mx, my] = map(x.args[n - 2], x.args[n - 1]);
            CHECK(std::abs(mx - y.args[n - 2]) < 1e-5);
            CHECK(std::abs(my - y.args[n - 1]) < 1e-5);
            if (x.op == 'A') {
                CHECK(std::abs(x.args[0] - y.args[0]) < 1e-5);
                CHECK(x.args[3] == y.args[3]);
                CHECK((x.args[4] != y.args[4]) == flip_sweep);
            }
        }
    }
}

}  // namespace

TEST_CASE("polar structure for the cooling model")
{
    auto m = load_fixture("cooling");
    for (std::size_t k = 0; k < 3; ++k) {
        auto svg = render_polar(m, sigma_of(1, k), RiskPosition{2, 2});
        CHECK(count_tags(svg, "path", "segment") == 17);
        CHECK(count_tags(svg, "path", "threshold") == 4);
        CHECK(count_tags(svg, "path", "cross") == 2);
        CHECK(count_tags(svg, "circle", "dot") == 2);
        CHECK(count_tags(svg, "circle", "center") == 1);
    }
    RenderSpec bare;
    bare.view = View::polar;
    bare.show_thresholds = false;
    bare.show_labels = false;
    auto svg = render_polar(m, sigma_of(1, 0), RiskPosition{2, 2}, bare);
    CHECK(count_tags(svg, "path", "threshold") == 0);
    CHECK(svg.find("<text") == std::string::npos);
}

TEST_CASE("matrix structure")
{
    for (const auto& name : fixture_names()) {
        auto m = load_fixture(name);
        auto sigma = complete_slice(m, {});
        RiskPosition risk = m.risk().value_or(RiskPosition{0, 0});
        auto svg = render_matrix(m, sigma, risk);
        const std::size_t n1 = m.space().axis(0).size();
        const std::size_t n2 = m.space().axis(1).size();
        CHECK(count_tags(svg, "rect", "cell") == n1 * n2);
        CHECK(count_tags(svg, "rect", "risk-frame") == 1);
        CHECK(count_tags(svg, "text", "context-value") == m.space().context_count());
    }
}

TEST_CASE("colour fidelity")
{
    auto m = load_fixture("cooling");
    auto sigma = sigma_of(1, 2);
    RiskPosition risk{2, 2};
    auto grid = slice(m, sigma);

    SUBCASE("matrix cells carry their grade colour")
    {
        auto svg = render_matrix(m, sigma, risk);
        for (const auto& t : tags_with_class(svg, "cell")) {
            auto l1 = std::stoul(t.attrs.at("data-l1"));
            auto l2 = std::stoul(t.attrs.at("data-l2"));
            CHECK(t.attrs.at("fill") == m.scale().color(grid.at(l1, l2)));
        }
    }
    SUBCASE("polar segments follow aggregation and profiles")
    {
        auto svg = render_polar(m, sigma, risk);
        auto agg = aggregate_slice(grid, m.scale(), risk);
        for (const auto& t : tags_with_class(svg, "segment")) {
            auto axis = std::stoul(t.attrs.at("data-axis"));
            auto level = std::stoul(t.attrs.at("data-level"));
            Grade g = axis == 0   ? agg.likelihood.per_level[level]
                      : axis == 1 ? agg.impact.per_level[level]
                                  : (*m.space().axis(axis).profile)[level];
            CHECK(t.attrs.at("fill") == m.scale().color(g));
        }
    }
    SUBCASE("only grade colours are used as fills")
    {
        std::set<std::string> palette;
        for (const auto& g : m.scale().grades()) palette.insert(g.color);
        for (auto view : {View::matrix, View::polar}) {
            RenderSpec spec;
            spec.view = view;
            for (const auto& c : fill_colors(render(m, sigma, risk, spec))) CHECK(palette.count(c) == 1);
        }
    }
    SUBCASE("theme overrides")
    {
        RenderSpec spec;
        spec.theme["red"] = "#123456";
        auto svg = render_matrix(m, sigma, risk, spec);
        auto fills = fill_colors(svg);
        CHECK(fills.count("#123456") == 1);
        CHECK(fills.count("#EB0000") == 0);
        spec.theme["pink"] = "#000000";
        CHECK_THROWS_AS(render_matrix(m, sigma, risk, spec), Error);
        spec.theme.erase("pink");
        spec.theme["red"] = "crimson";
        CHECK_THROWS_AS(render_matrix(m, sigma, risk, spec), Error);
    }
}

TEST_CASE("rendering is deterministic")
{
    auto m = load_fixture("cooling");
    auto again = load_fixture("cooling");
    for (auto view : {View::matrix, View::polar}) {
        RenderSpec spec;
        spec.view = view;
        auto a = render(m, sigma_of(1, 1), RiskPosition{2, 2}, spec);
        CHECK(a == render(again, sigma_of(1, 1), RiskPosition{2, 2}, spec));
        CHECK(a != render(m, sigma_of(1, 2), RiskPosition{2, 2}, spec));
    }
}

TEST_CASE("size")
{
    auto m = load_fixture("toy3d");
    RenderSpec spec;
    spec.width = 900;
    spec.height = 300;
    auto svg = render_matrix(m, complete_slice(m, {}), RiskPosition{0, 0}, spec);
    auto tags = scan_tags(svg);
    auto root = std::find_if(tags.begin(), tags.end(), [](const Tag& t) { return t.name == "svg"; });
    REQUIRE(root != tags.end());
    CHECK(root->attrs.at("width") == "900.000000");
    CHECK(root->attrs.at("height") == "300.000000");
}

TEST_CASE("context axes without a profile cannot be drawn in polar")
{
    auto m = load_fixture("cooling");
    auto axes = m.space().axes();
    axes[3].profile.reset();
    RiskModel bare(m.name(), m.scale(), StateSpace(axes), m.assignment(), m.risk(), m.default_slice(), m.polar());
    CHECK_THROWS_AS(render_polar(bare, sigma_of(1, 0), RiskPosition{2, 2}), Error);
    CHECK_NOTHROW(render_matrix(bare, sigma_of(1, 0), RiskPosition{2, 2}));
}

TEST_CASE("property: flipping direction reflects the drawing")
{
    auto m = load_fixture("cooling");
    const double t0 = 0.4;
    auto cw = segment_paths(render_polar(with_frame(m, {t0, true}), sigma_of(1, 0), RiskPosition{2, 2}));
    auto ccw = segment_paths(render_polar(with_frame(m, {t0, false}), sigma_of(1, 0), RiskPosition{2, 2}));
    check_mapped(cw, ccw, [](double x, double y) { return std::pair{x, 640.0 - y}; }, true);
}

TEST_CASE("property: shifting theta0 rotates the drawing")
{
    auto m = load_fixture("toy3d");
    auto sigma = complete_slice(m, {});
    RiskPosition risk = m.risk().value_or(RiskPosition{1, 1});
    auto base = segment_paths(render_polar(with_frame(m, {0.0, false}), sigma, risk));
    const double deltas[] = {0.1, -0.7, 1.3, 2.9, -3.1, 0.5 * std::numbers::pi, 4.0, -5.5, 6.2, 0.01};
    for (double delta : deltas) {
        auto rot = segment_paths(render_polar(with_frame(m, {delta, false}), sigma, risk));
        const double c = std::cos(delta), s = std::sin(delta);
        check_mapped(
            base, rot,
            [&](double x, double y) {
                const double dx = x - 320.0, dy = y - 320.0;
                return std::pair{320.0 + dx * c + dy * s, 320.0 + dy * c - dx * s};
            },
            false);
    }
}
