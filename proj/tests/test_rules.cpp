#include <doctest.h>

#include <algorithm>
#include <random>

#include "ndpolar/error.hpp"
#include "ndpolar/rules.hpp"
#include "support/fixtures.hpp"

using namespace ndpolar;

namespace {

StateSpace space_2x2x3()
{
    Axis p{"p", AxisRole::likelihood, {"lo", "hi"}};
    Axis i{"i", AxisRole::impact, {"lo", "hi"}};
    Axis c{"c", AxisRole::context, {"a", "b", "c"}};
    return StateSpace({p, i, c});
}

GradeScale three_grades()
{
    return GradeScale({{"low", 0, "#00FF00"}, {"mid", 1, "#FFFF00"}, {"top", 2, "#FF0000"}});
}

ErrorCode code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an ndpolar::Error");
    return ErrorCode::invalid;
}

std::string message_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

bool has_code(const std::vector<Diagnostic>& diags, std::string_view code)
{
    return std::any_of(diags.begin(), diags.end(), [&](const Diagnostic& d) { return d.code == code; });
}

}  // namespace

TEST_CASE("comparators")
{
    for (auto op : {Comparator::eq, Comparator::ne, Comparator::lt, Comparator::le, Comparator::gt, Comparator::ge}) {
        CHECK(parse_comparator(comparator_symbol(op)) == op);
    }
    CHECK_FALSE(parse_comparator("=<"));
    CHECK(compare_levels(2, Comparator::ge, 2));
    CHECK_FALSE(compare_levels(2, Comparator::gt, 2));
    CHECK(compare_levels(1, Comparator::lt, 2));
    CHECK(compare_levels(1, Comparator::ne, 2));
}

TEST_CASE("parsing the rule language")
{
    auto rules = parse_rules(R"(dsl-version: 1
# comment line
when probability >= "High" and impact.v2 == 3 then red;   # trailing
when cooling != 0 then light-green;
)");
    REQUIRE(rules.size() == 2);
    CHECK(rules[0].clauses.size() == 2);
    CHECK(rules[0].clauses[0].axis == "probability");
    CHECK(rules[0].clauses[0].op == Comparator::ge);
    CHECK(rules[0].clauses[0].level == LevelRef{std::string("High")});
    CHECK(rules[0].clauses[1].axis == "impact.v2");
    CHECK(rules[0].clauses[1].level == LevelRef{std::size_t{3}});
    CHECK(rules[0].grade == "red");
    CHECK(rules[0].span.line == 3);
    CHECK(rules[1].grade == "light-green");

    CHECK(parse_rules("").empty());
    CHECK(parse_rules("  # only a comment\n").empty());
}

TEST_CASE("parse errors carry a position")
{
    auto msg = message_of([] { parse_rules("when p == 1 then red;\nwhen p === 1 then red;"); });
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(code_of([] { parse_rules("when p == 1 then red"); }) == ErrorCode::parse);
    CHECK(code_of([] { parse_rules("when then red;"); }) == ErrorCode::parse);
    CHECK(code_of([] { parse_rules("when p == \"unterminated then red;"); }) == ErrorCode::parse);
    CHECK(code_of([] { parse_rules("when p == 1 and p == 2 then red;"); }) == ErrorCode::parse);
    CHECK(code_of([] { parse_rules("dsl-version: 2\nwhen p == 1 then red;"); }) == ErrorCode::parse);
    CHECK(code_of([] { parse_rules("when p ~ 1 then red;"); }) == ErrorCode::parse);
}

TEST_CASE("printing round-trips")
{
    const std::string text = R"(when p >= "hi" and c != 2 then top;
when i < 1 then low;
when c == "b" then mid;
)";
    auto rules = parse_rules(text);
    auto printed = print_rules(rules);
    CHECK(parse_rules(printed) == rules);
    CHECK(print_rules(parse_rules(printed)) == printed);

    SUBCASE("labels needing escapes")
    {
        Rule r{{Clause{"p", Comparator::eq, std::string("say \"hi\"\\now")}}, "g", {}};
        std::vector<Rule> one{r};
        CHECK(parse_rules(print_rules(one)) == one);
    }
}

TEST_CASE("resolution names the offending token")
{
    auto space = space_2x2x3();
    auto scale = three_grades();
    CHECK(code_of([&] { parse_rules("when bogus == 0 then low;", space, scale); }) == ErrorCode::unknown_axis);
    CHECK(message_of([&] { parse_rules("when bogus == 0 then low;", space, scale); }).find("bogus") !=
          std::string::npos);
    CHECK(code_of([&] { parse_rules("when p == \"mid\" then low;", space, scale); }) == ErrorCode::unknown_level);
    CHECK(code_of([&] { parse_rules("when p == 5 then low;", space, scale); }) == ErrorCode::out_of_range);
    CHECK(code_of([&] { parse_rules("when p == 0 then pink;", space, scale); }) == ErrorCode::unknown_grade);
    CHECK(message_of([&] { parse_rules("when p == 0 then pink;", space, scale); }).find("pink") !=
          std::string::npos);

    auto resolved = parse_rules("when p == \"hi\" and c >= \"b\" then top;", space, scale);
    REQUIRE(resolved.size() == 1);
    CHECK(resolved[0].matches(ContextState{{1, 0, 1}}));
    CHECK(resolved[0].matches(ContextState{{1, 1, 2}}));
    CHECK_FALSE(resolved[0].matches(ContextState{{0, 0, 2}}));
    CHECK_FALSE(resolved[0].matches(ContextState{{1, 0, 0}}));
}

TEST_CASE("assignment precedence: entry, then first rule, then default")
{
    auto space = space_2x2x3();
    auto scale = three_grades();
    Assignment a;
    a.entries = {{ContextState{{0, 0, 0}}, "top"}};
    a.rules = parse_rules("when c == 0 then mid;\nwhen c <= 1 then low;");
    a.default_grade = "top";
    auto h = compile_assignment(space, scale, a);
    CHECK(h.tabulated());
    CHECK(h.grade(ContextState{{0, 0, 0}}) == Grade{2});
    CHECK(h.source(ContextState{{0, 0, 0}}) == Coverage{SourceKind::entry, 0});
    CHECK(h.grade(ContextState{{1, 0, 0}}) == Grade{1});
    CHECK(h.source(ContextState{{1, 0, 0}}) == Coverage{SourceKind::rule, 0});
    CHECK(h.grade(ContextState{{1, 1, 1}}) == Grade{0});
    CHECK(h.source(ContextState{{1, 1, 1}}) == Coverage{SourceKind::rule, 1});
    CHECK(h.grade(ContextState{{1, 1, 2}}) == Grade{2});
    CHECK(h.source(ContextState{{1, 1, 2}}).kind == SourceKind::fallback);
}

TEST_CASE("totality")
{
    Axis p{"p", AxisRole::likelihood, {"lo", "hi"}};
    Axis i{"i", AxisRole::impact, {"lo", "hi"}};
    StateSpace space({p, i});
    auto scale = three_grades();

    Assignment a;
    a.rules = parse_rules("when p == 0 then low;\nwhen i == 0 then mid;");
    auto msg = message_of([&] { compile_assignment(space, scale, a); });
    CHECK(code_of([&] { compile_assignment(space, scale, a); }) == ErrorCode::non_total);
    CHECK(msg.find("(p=hi, i=hi)") != std::string::npos);
    CHECK(msg.find("1 uncovered") != std::string::npos);

    a.rules.push_back(parse_rules("when p == 1 then top;")[0]);
    CHECK_NOTHROW(compile_assignment(space, scale, a));

    SUBCASE("an explicit entry can close the gap")
    {
        Assignment b;
        b.rules = parse_rules("when p == 0 then low;\nwhen i == 0 then mid;");
        b.entries = {{ContextState{{1, 1}}, "top"}};
        CHECK(compile_assignment(space, scale, b).grade(ContextState{{1, 1}}) == Grade{2});
    }
    SUBCASE("conflicting explicit entries")
    {
        Assignment b;
        b.default_grade = "low";
        b.entries = {{ContextState{{1, 1}}, "top"}, {ContextState{{1, 1}}, "mid"}};
        CHECK(code_of([&] { compile_assignment(space, scale, b); }) == ErrorCode::conflict);
        b.entries[1].grade = "top";
        CHECK_NOTHROW(compile_assignment(space, scale, b));
    }
    SUBCASE("large spaces need a default")
    {
        Axis big_p{"p", AxisRole::likelihood, std::vector<std::string>(10)};
        Axis big_i{"i", AxisRole::impact, std::vector<std::string>(10)};
        for (std::size_t k = 0; k < 10; ++k) {
            big_p.labels[k] = big_i.labels[k] = "l" + std::to_string(k);
        }
        StateSpace big({big_p, big_i});
        Assignment c;
        c.rules = parse_rules("when p >= 0 then low;");
        CHECK(code_of([&] { compile_assignment(big, scale, c, 50); }) == ErrorCode::non_total);
        c.default_grade = "mid";
        auto h = compile_assignment(big, scale, c, 50);
        CHECK_FALSE(h.tabulated());
        CHECK(h.grade(ContextState{{9, 9}}) == Grade{0});
    }
}

TEST_CASE("lint")
{
    auto space = space_2x2x3();
    auto scale = three_grades();

    SUBCASE("zero-match rule")
    {
        Assignment a;
        a.default_grade = "low";
        a.rules = parse_rules("when p > \"hi\" then top;");
        auto d = lint_rules(a, space, scale);
        CHECK(has_code(d, "W_ZERO_MATCH"));
    }
    SUBCASE("identical rules: the second is unreachable")
    {
        Assignment a;
        a.default_grade = "low";
        a.rules = parse_rules("when c == 1 then top;\nwhen c == 1 then mid;");
        auto d = lint_rules(a, space, scale);
        REQUIRE(has_code(d, "W_UNREACHABLE"));
        auto it = std::find_if(d.begin(), d.end(), [](const Diagnostic& x) { return x.code == "W_UNREACHABLE"; });
        CHECK(it->rule == std::size_t{1});
        CHECK(it->severity == Severity::warning);
    }
    SUBCASE("covered by a union of earlier rules")
    {
        Assignment a;
        a.default_grade = "low";
        a.rules = parse_rules("when p == 0 then top;\nwhen p == 1 then mid;\nwhen c == 2 then low;");
        CHECK(has_code(lint_rules(a, space, scale), "W_UNREACHABLE"));
    }
    SUBCASE("partially shadowed rules are fine")
    {
        Assignment a;
        a.default_grade = "low";
        a.rules = parse_rules("when p == 0 then top;\nwhen c == 2 then low;");
        CHECK(lint_rules(a, space, scale).empty());
    }
    SUBCASE("conflicting entries are an error")
    {
        Assignment a;
        a.default_grade = "low";
        a.entries = {{ContextState{{0, 0, 0}}, "top"}, {ContextState{{0, 0, 0}}, "low"}};
        auto d = lint_rules(a, space, scale);
        REQUIRE(has_code(d, "E_CONFLICT"));
        CHECK(std::find_if(d.begin(), d.end(), [](const Diagnostic& x) { return x.code == "E_CONFLICT"; })->severity ==
              Severity::error);
    }
    SUBCASE("monotonicity is opt-in")
    {
        Assignment a;
        a.default_grade = "low";
        a.rules = parse_rules("when p == 0 then top;");
        CHECK_FALSE(has_code(lint_rules(a, space, scale), "W_NON_MONOTONE"));
        LintOptions opts;
        opts.monotonicity = true;
        CHECK(has_code(lint_rules(a, space, scale, opts), "W_NON_MONOTONE"));
    }
    SUBCASE("fixtures lint clean")
    {
        for (const auto& name : testing::fixture_names()) {
            auto m = testing::load_fixture(name);
            auto d = lint_rules(m.assignment(), m.space(), m.scale());
            INFO(name);
            CHECK_FALSE(std::any_of(d.begin(), d.end(), [](const Diagnostic& x) { return x.severity != Severity::info; }));
        }
    }
}

TEST_CASE("property: printing random rule sets preserves H")
{
    auto space = space_2x2x3();
    auto scale = three_grades();
    std::mt19937 rng(7);
    const Comparator ops[] = {Comparator::eq, Comparator::ne, Comparator::lt,
                              Comparator::le, Comparator::gt, Comparator::ge};
    for (int trial = 0; trial < 100; ++trial) {
        Assignment a;
        a.default_grade = scale.id(Grade{rng() % 3});
        const int n = 1 + static_cast<int>(rng() % 6);
        for (int k = 0; k < n; ++k) {
            Rule r;
            for (std::size_t axis = 0; axis < space.dims(); ++axis) {
                if (rng() % 2) continue;
                const auto& labels = space.axis(axis).labels;
                std::size_t lvl = rng() % labels.size();
                LevelRef ref = (rng() % 2) ? LevelRef{lvl} : LevelRef{labels[lvl]};
                r.clauses.push_back(Clause{space.axis(axis).id, ops[rng() % 6], ref, {}});
            }
            if (r.clauses.empty()) r.clauses.push_back(Clause{"c", Comparator::ge, std::size_t{0}, {}});
            r.grade = scale.id(Grade{rng() % 3});
            a.rules.push_back(r);
        }
        Assignment b = a;
        b.rules = parse_rules(print_rules(a.rules));
        CHECK(b.rules == a.rules);
        auto ha = compile_assignment(space, scale, a);
        auto hb = compile_assignment(space, scale, b);
        for (const auto& s : enumerate_states(space)) {
            CHECK(ha.grade(s) == hb.grade(s));
        }
    }
}
