#include "ndpolar/rules.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <set>

#include "ndpolar/error.hpp"

namespace ndpolar {

std::string_view comparator_symbol(Comparator op) noexcept
{
    switch (op) {
    case Comparator::eq: return "==";
    case Comparator::ne: return "!=";
    case Comparator::lt: return "<";
    case Comparator::le: return "<=";
    case Comparator::gt: return ">";
    case Comparator::ge: return ">=";
    }
    return "==";
}

std::optional<Comparator> parse_comparator(std::string_view symbol) noexcept
{
    if (symbol == "==") return Comparator::eq;
    if (symbol == "!=") return Comparator::ne;
    if (symbol == "<") return Comparator::lt;
    if (symbol == "<=") return Comparator::le;
    if (symbol == ">") return Comparator::gt;
    if (symbol == ">=") return Comparator::ge;
    return std::nullopt;
}

bool compare_levels(std::size_t level, Comparator op, std::size_t reference) noexcept
{
    switch (op) {
    case Comparator::eq: return level == reference;
    case Comparator::ne: return level != reference;
    case Comparator::lt: return level < reference;
    case Comparator::le: return level <= reference;
    case Comparator::gt: return level > reference;
    case Comparator::ge: return level >= reference;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok { ident, integer, string, cmp, semicolon, colon, end };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    SourceSpan span;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'; }

[[noreturn]] void fail_at(SourceSpan at, const std::string& what)
{
    throw Error(ErrorCode::parse,
                "line " + std::to_string(at.line) + ", column " + std::to_string(at.column) + ": " + what);
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> run()
    {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            SourceSpan at{line_, col_};
            if (pos_ >= text_.size()) {
                out.push_back({Tok::end, "", at});
                return out;
            }
            char c = text_[pos_];
            if (ident_start(c)) {
                std::size_t b = pos_;
                while (pos_ < text_.size() && ident_char(text_[pos_])) advance();
                out.push_back({Tok::ident, std::string(text_.substr(b, pos_ - b)), at});
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t b = pos_;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
                if (pos_ < text_.size() && ident_char(text_[pos_])) {
                    fail_at(at, "malformed number");
                }
                out.push_back({Tok::integer, std::string(text_.substr(b, pos_ - b)), at});
            } else if (c == '"') {
                out.push_back({Tok::string, read_string(at), at});
            } else if (c == ';') {
                advance();
                out.push_back({Tok::semicolon, ";", at});
            } else if (c == ':') {
                advance();
                out.push_back({Tok::colon, ":", at});
            } else if (c == '=' || c == '!' || c == '<' || c == '>') {
                advance();
                std::string op(1, c);
                if (pos_ < text_.size() && text_[pos_] == '=') {
                    advance();
                    op += '=';
                }
                if (!parse_comparator(op)) {
                    fail_at(at, "unexpected '" + op + "'");
                }
                out.push_back({Tok::cmp, op, at});
            } else {
                fail_at(at, std::string("unexpected character '") + c + "'");
            }
        }
    }

private:
    void advance()
    {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space()
    {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string read_string(SourceSpan at)
    {
        advance();  // opening quote
        std::string out;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '"') {
                advance();
                return out;
            }
            if (c == '\n') {
                break;
            }
            if (c == '\\') {
                advance();
                if (pos_ >= text_.size()) break;
                char e = text_[pos_];
                if (e != '"' && e != '\\') {
                    fail_at({line_, col_}, std::string("unknown escape '\\") + e + "'");
                }
                out += e;
                advance();
                continue;
            }
            out += c;
            advance();
        }
        fail_at(at, "unterminated string");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    std::vector<Rule> run()
    {
        std::vector<Rule> rules;
        header();
        while (peek().kind != Tok::end) {
            rules.push_back(rule());
        }
        return rules;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& take() { return toks_[pos_++]; }

    static std::string describe(const Token& t)
    {
        switch (t.kind) {
        case Tok::end: return "end of input";
        case Tok::string: return "\"" + t.text + "\"";
        default: return "'" + t.text + "'";
        }
    }

    const Token& expect(Tok kind, const char* what)
    {
        if (peek().kind != kind) {
            fail_at(peek().span, std::string("expected ") + what + ", found " + describe(peek()));
        }
        return take();
    }

    void keyword(std::string_view kw)
    {
        if (peek().kind != Tok::ident || peek().text != kw) {
            fail_at(peek().span, "expected '" + std::string(kw) + "', found " + describe(peek()));
        }
        take();
    }

    static bool is_keyword(std::string_view s) { return s == "when" || s == "and" || s == "then"; }

    void header()
    {
        if (peek().kind == Tok::ident && peek().text == "dsl-version") {
            take();
            expect(Tok::colon, "':'");
            const Token& v = expect(Tok::integer, "version number");
            if (v.text != "1") {
                fail_at(v.span, "unsupported dsl-version " + v.text);
            }
        }
    }

    Rule rule()
    {
        Rule r;
        r.span = peek().span;
        keyword("when");
        std::set<std::string> axes;
        for (;;) {
            Clause c = clause();
            if (!axes.insert(c.axis).second) {
                fail_at(c.span, "axis '" + c.axis + "' appears in more than one clause of this rule");
            }
            r.clauses.push_back(std::move(c));
            if (peek().kind == Tok::ident && peek().text == "and") {
                take();
                continue;
            }
            break;
        }
        keyword("then");
        const Token& g = expect(Tok::ident, "grade");
        if (is_keyword(g.text)) {
            fail_at(g.span, "expected grade, found keyword '" + g.text + "'");
        }
        r.grade = g.text;
        expect(Tok::semicolon, "';'");
        return r;
    }

    Clause clause()
    {
        Clause c;
        const Token& axis = expect(Tok::ident, "axis name");
        if (is_keyword(axis.text)) {
            fail_at(axis.span, "expected axis name, found keyword '" + axis.text + "'");
        }
        c.axis = axis.text;
        c.span = axis.span;
        c.op = *parse_comparator(expect(Tok::cmp, "comparator").text);
        const Token& lv = peek();
        if (lv.kind == Tok::integer) {
            std::size_t value = 0;
            auto [ptr, ec] = std::from_chars(lv.text.data(), lv.text.data() + lv.text.size(), value);
            if (ec != std::errc{}) {
                fail_at(lv.span, "level index too large");
            }
            c.level = value;
        } else if (lv.kind == Tok::string) {
            c.level = lv.text;
        } else {
            fail_at(lv.span, "expected level index or label, found " + describe(lv));
        }
        take();
        return c;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

std::string quote(std::string_view s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::vector<Rule> parse_rules(std::string_view text)
{
    return Parser(Lexer(text).run()).run();
}

std::string print_rules(std::span<const Rule> rules)
{
    std::string out;
    for (const Rule& r : rules) {
        out += "when ";
        for (std::size_t i = 0; i < r.clauses.size(); ++i) {
            const Clause& c = r.clauses[i];
            if (i) out += " and ";
            out += c.axis;
            out += ' ';
            out += comparator_symbol(c.op);
            out += ' ';
            if (const auto* idx = std::get_if<std::size_t>(&c.level)) {
                out += std::to_string(*idx);
            } else {
                out += quote(std::get<std::string>(c.level));
            }
        }
        out += " then " + r.grade + ";\n";
    }
    return out;
}

bool ResolvedRule::matches(const ContextState& state) const noexcept
{
    for (const auto& c : clauses) {
        if (!c.matches(state.levels[c.axis])) {
            return false;
        }
    }
    return true;
}

namespace {

std::string where(SourceSpan s)
{
    return s.line ? " (line " + std::to_string(s.line) + ", column " + std::to_string(s.column) + ")" : "";
}

}  // namespace

ResolvedRule resolve_rule(const Rule& rule, const StateSpace& space, const GradeScale& scale)
{
    ResolvedRule out;
    out.span = rule.span;
    std::set<std::size_t> seen;
    for (const Clause& c : rule.clauses) {
        auto axis = space.find_axis(c.axis);
        if (!axis) {
            throw Error(ErrorCode::unknown_axis, "unknown axis '" + c.axis + "'" + where(c.span));
        }
        if (!seen.insert(*axis).second) {
            throw Error(ErrorCode::parse, "axis '" + c.axis + "' appears in more than one clause" + where(c.span));
        }
        const Axis& a = space.axis(*axis);
        std::size_t level = 0;
        if (const auto* idx = std::get_if<std::size_t>(&c.level)) {
            if (*idx >= a.size()) {
                throw Error(ErrorCode::out_of_range, "level " + std::to_string(*idx) + " out of range for axis '" +
                                                         a.id + "'" + where(c.span));
            }
            level = *idx;
        } else {
            const auto& label = std::get<std::string>(c.level);
            auto l = a.find_label(label);
            if (!l) {
                throw Error(ErrorCode::unknown_level,
                            "unknown label \"" + label + "\" on axis '" + a.id + "'" + where(c.span));
            }
            level = *l;
        }
        out.clauses.push_back({*axis, c.op, level});
    }
    auto g = scale.find(rule.grade);
    if (!g) {
        throw Error(ErrorCode::unknown_grade, "unknown grade '" + rule.grade + "'" + where(rule.span));
    }
    out.grade = *g;
    return out;
}

std::vector<ResolvedRule> parse_rules(std::string_view text, const StateSpace& space, const GradeScale& scale)
{
    std::vector<ResolvedRule> out;
    for (const Rule& r : parse_rules(text)) {
        out.push_back(resolve_rule(r, space, scale));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Compilation

namespace {

struct ResolvedEntries {
    std::unordered_map<std::uint64_t, std::pair<Grade, std::size_t>> map;
    std::vector<Diagnostic> diagnostics;  // conflicts (error) and duplicates (warning)
};

ResolvedEntries resolve_entries(const Assignment& assignment, const StateSpace& space, const GradeScale& scale)
{
    ResolvedEntries out;
    for (std::size_t i = 0; i < assignment.entries.size(); ++i) {
        const CellEntry& e = assignment.entries[i];
        space.check(e.state);
        Grade g = scale.at(e.grade);
        std::uint64_t key = space.linear_index(e.state);
        auto [it, inserted] = out.map.emplace(key, std::pair{g, i});
        if (inserted) {
            continue;
        }
        if (it->second.first != g) {
            out.diagnostics.push_back({Severity::error, "E_CONFLICT",
                                       "entries " + std::to_string(it->second.second) + " and " + std::to_string(i) +
                                           " assign " + space.describe(e.state) + " to different grades ('" +
                                           scale.id(it->second.first) + "' vs '" + e.grade + "')",
                                       std::nullopt, std::nullopt});
        } else {
            out.diagnostics.push_back({Severity::warning, "W_DUPLICATE_ENTRY",
                                       "entry " + std::to_string(i) + " repeats " + space.describe(e.state),
                                       std::nullopt, std::nullopt});
        }
    }
    return out;
}

}  // namespace

std::optional<std::pair<Grade, Coverage>> CompiledAssignment::resolve(const ContextState& state) const
{
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < radix_.size(); ++i) {
        key = key * radix_[i] + state.levels[i];
    }
    if (auto it = entries_.find(key); it != entries_.end()) {
        return std::pair{it->second.first, Coverage{SourceKind::entry, it->second.second}};
    }
    for (std::size_t k = 0; k < rules_.size(); ++k) {
        if (rules_[k].matches(state)) {
            return std::pair{rules_[k].grade, Coverage{SourceKind::rule, k}};
        }
    }
    if (default_) {
        return std::pair{*default_, Coverage{SourceKind::fallback, 0}};
    }
    return std::nullopt;
}

Grade CompiledAssignment::grade(const ContextState& state) const
{
    if (!table_.empty()) {
        std::uint64_t key = 0;
        for (std::size_t i = 0; i < radix_.size(); ++i) {
            key = key * radix_[i] + state.levels[i];
        }
        return Grade{table_[key]};
    }
    auto r = resolve(state);
    if (!r) {
        throw Error(ErrorCode::non_total, "state not covered by the assignment");
    }
    return r->first;
}

Coverage CompiledAssignment::source(const ContextState& state) const
{
    auto r = resolve(state);
    if (!r) {
        throw Error(ErrorCode::non_total, "state not covered by the assignment");
    }
    return r->second;
}

CompiledAssignment compile_assignment(const StateSpace& space, const GradeScale& scale, const Assignment& assignment,
                                      std::uint64_t cap)
{
    CompiledAssignment out;
    for (const Axis& a : space.axes()) {
        out.radix_.push_back(a.size());
    }
    auto entries = resolve_entries(assignment, space, scale);
    for (const auto& d : entries.diagnostics) {
        if (d.severity == Severity::error) {
            throw Error(ErrorCode::conflict, d.message);
        }
    }
    out.entries_ = std::move(entries.map);
    for (const Rule& r : assignment.rules) {
        out.rules_.push_back(resolve_rule(r, space, scale));
    }
    if (assignment.default_grade) {
        out.default_ = scale.at(*assignment.default_grade);
    }
    if (scale.size() > std::numeric_limits<std::uint16_t>::max()) {
        throw Error(ErrorCode::invalid, "grade scale too large");
    }

    if (space.size() > cap) {
        if (!out.default_) {
            throw Error(ErrorCode::non_total, "state space has " + std::to_string(space.size()) +
                                                  " states, above the enumeration cap of " + std::to_string(cap) +
                                                  "; totality cannot be checked, add a default grade");
        }
        return out;
    }

    std::vector<std::uint16_t> table;
    table.reserve(space.size());
    std::vector<std::string> uncovered;
    std::uint64_t missing = 0;
    for (const ContextState& s : enumerate_states(space, cap)) {
        auto r = out.resolve(s);
        if (!r) {
            ++missing;
            if (uncovered.size() < 10) {
                uncovered.push_back(space.describe(s));
            }
            table.push_back(0);
            continue;
        }
        table.push_back(static_cast<std::uint16_t>(r->first.rank));
    }
    if (missing) {
        std::string msg = "assignment is not total: " + std::to_string(missing) + " uncovered state" +
                          (missing == 1 ? "" : "s") + ": ";
        for (std::size_t i = 0; i < uncovered.size(); ++i) {
            msg += (i ? "; " : "") + uncovered[i];
        }
        if (missing > uncovered.size()) {
            msg += "; ...";
        }
        throw Error(ErrorCode::non_total, msg);
    }
    out.table_ = std::move(table);
    return out;
}

// ---------------------------------------------------------------------------
// Lint

std::string_view severity_name(Severity s) noexcept
{
    switch (s) {
    case Severity::info: return "info";
    case Severity::warning: return "warning";
    case Severity::error: return "error";
    }
    return "info";
}

namespace {

/// Allowed levels per axis for a rule (its match set is the product).
std::vector<std::vector<std::size_t>> match_box(const ResolvedRule& rule, const StateSpace& space)
{
    std::vector<std::vector<std::size_t>> box(space.dims());
    for (std::size_t i = 0; i < space.dims(); ++i) {
        for (std::size_t l = 0; l < space.axis(i).size(); ++l) {
            bool ok = true;
            for (const auto& c : rule.clauses) {
                if (c.axis == i && !c.matches(l)) {
                    ok = false;
                }
            }
            if (ok) {
                box[i].push_back(l);
            }
        }
    }
    return box;
}

std::string rule_label(std::size_t k, const ResolvedRule& r)
{
    return "rule #" + std::to_string(k + 1) + where(r.span);
}

}  // namespace

std::vector<Diagnostic> lint_rules(const Assignment& assignment, const StateSpace& space, const GradeScale& scale,
                                   const LintOptions& options)
{
    std::vector<Diagnostic> out = resolve_entries(assignment, space, scale).diagnostics;

    std::vector<ResolvedRule> rules;
    for (const Rule& r : assignment.rules) {
        rules.push_back(resolve_rule(r, space, scale));
    }

    for (std::size_t k = 0; k < rules.size(); ++k) {
        auto box = match_box(rules[k], space);
        std::uint64_t count = 1;
        for (const auto& levels : box) {
            count = levels.empty() ? 0 : (count > options.cap ? count : count * levels.size());
        }
        if (count == 0) {
            out.push_back({Severity::warning, "W_ZERO_MATCH", rule_label(k, rules[k]) + " matches no state", k,
                           rules[k].span});
            continue;
        }
        if (k == 0) {
            continue;
        }
        if (count > options.cap) {
            out.push_back({Severity::info, "I_LINT_SKIPPED",
                           rule_label(k, rules[k]) + " match set exceeds the enumeration cap; shadowing not checked", k,
                           rules[k].span});
            continue;
        }
        // Walk the rule's match set; it is unreachable if every state hits an earlier rule.
        std::vector<std::size_t> pos(box.size(), 0);
        ContextState s;
        s.levels.resize(box.size());
        bool shadowed = true;
        for (bool more = true; more && shadowed;) {
            for (std::size_t i = 0; i < box.size(); ++i) {
                s.levels[i] = box[i][pos[i]];
            }
            bool hit = false;
            for (std::size_t j = 0; j < k && !hit; ++j) {
                hit = rules[j].matches(s);
            }
            shadowed = hit;
            more = false;
            for (std::size_t i = box.size(); i-- > 0;) {
                if (++pos[i] < box[i].size()) {
                    more = true;
                    break;
                }
                pos[i] = 0;
            }
        }
        if (shadowed) {
            out.push_back({Severity::warning, "W_UNREACHABLE",
                           rule_label(k, rules[k]) + " is shadowed by earlier rules over its full match set", k,
                           rules[k].span});
        }
    }

    if (options.monotonicity) {
        bool has_conflict = std::any_of(out.begin(), out.end(), [](const Diagnostic& d) {
            return d.severity == Severity::error;
        });
        if (!has_conflict && space.size() <= options.cap) {
            try {
                CompiledAssignment h = compile_assignment(space, scale, assignment, options.cap);
                const std::size_t n1 = space.axis(0).size();
                const std::size_t n2 = space.axis(1).size();
                std::size_t reported = 0;
                for (const ContextState& s : enumerate_states(space, options.cap)) {
                    if (reported >= 10) break;
                    Grade here = h.grade(s);
                    if (s.levels[0] + 1 < n1) {
                        ContextState next = s;
                        ++next.levels[0];
                        if (h.grade(next) < here) {
                            out.push_back({Severity::info, "W_NON_MONOTONE",
                                           "grade decreases along '" + space.axis(0).id + "' after " + space.describe(s),
                                           std::nullopt, std::nullopt});
                            ++reported;
                        }
                    }
                    if (s.levels[1] + 1 < n2) {
                        ContextState next = s;
                        ++next.levels[1];
                        if (h.grade(next) < here) {
                            out.push_back({Severity::info, "W_NON_MONOTONE",
                                           "grade decreases along '" + space.axis(1).id + "' after " + space.describe(s),
                                           std::nullopt, std::nullopt});
                            ++reported;
                        }
                    }
                }
            } catch (const Error&) {
                // non-total assignments are reported by compile, not lint
            }
        }
    }
    return out;
}

}  // namespace ndpolar
