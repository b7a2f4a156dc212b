#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "ndpolar/space.hpp"

namespace ndpolar {

enum class Comparator { eq, ne, lt, le, gt, ge };

std::string_view comparator_symbol(Comparator op) noexcept;
std::optional<Comparator> parse_comparator(std::string_view symbol) noexcept;
bool compare_levels(std::size_t level, Comparator op, std::size_t reference) noexcept;

/// Level reference as written: an index or a label.
using LevelRef = std::variant<std::size_t, std::string>;

struct SourceSpan {
    std::size_t line = 0;
    std::size_t column = 0;
};

struct Clause {
    std::string axis;
    Comparator op = Comparator::eq;
    LevelRef level;
    SourceSpan span;

    /// Structural equality; spans are ignored.
    friend bool operator==(const Clause& a, const Clause& b)
    {
        return a.axis == b.axis && a.op == b.op && a.level == b.level;
    }
};

struct Rule {
    std::vector<Clause> clauses;
    std::string grade;
    SourceSpan span;

    friend bool operator==(const Rule& a, const Rule& b) { return a.clauses == b.clauses && a.grade == b.grade; }
};

/// Parses rule-DSL text:
///
///     ruleset  := rule* ;
///     rule     := "when" clause ("and" clause)* "then" IDENT ";" ;
///     clause   := IDENT CMP levelref ;
///     CMP      := "==" | "!=" | "<=" | ">=" | "<" | ">" ;
///     levelref := INTEGER | STRING ;
///
/// `#` starts a comment. An optional `dsl-version: 1` header may precede the rules.
/// Throws E_PARSE with line and column on lexical or syntax errors.
std::vector<Rule> parse_rules(std::string_view text);

/// Pretty-prints rules, one per line, in a form parse_rules accepts.
std::string print_rules(std::span<const Rule> rules);

struct ResolvedClause {
    std::size_t axis = 0;
    Comparator op = Comparator::eq;
    std::size_t level = 0;

    bool matches(std::size_t value) const noexcept { return compare_levels(value, op, level); }
};

struct ResolvedRule {
    std::vector<ResolvedClause> clauses;
    Grade grade;
    SourceSpan span;

    bool matches(const ContextState& state) const noexcept;
};

/// Resolves axis ids, labels and the grade. Throws E_UNKNOWN_AXIS, E_UNKNOWN_LEVEL,
/// E_OUT_OF_RANGE or E_UNKNOWN_GRADE naming the offending token.
ResolvedRule resolve_rule(const Rule& rule, const StateSpace& space, const GradeScale& scale);

/// Parse then resolve.
std::vector<ResolvedRule> parse_rules(std::string_view text, const StateSpace& space, const GradeScale& scale);

struct CellEntry {
    ContextState state;
    std::string grade;

    friend bool operator==(const CellEntry&, const CellEntry&) = default;
};

/// Source form of H. Resolution order: explicit entry, then first matching rule, then default.
struct Assignment {
    std::vector<CellEntry> entries;
    std::vector<Rule> rules;
    std::optional<std::string> default_grade;
};

enum class SourceKind { entry, rule, fallback };

struct Coverage {
    SourceKind kind = SourceKind::fallback;
    /// Entry or rule index; unused for the default.
    std::size_t index = 0;

    friend bool operator==(Coverage, Coverage) = default;
};

/// Total, immutable evaluator for H. Holds a dense table when |L| is within the
/// enumeration cap, otherwise resolves lazily.
class CompiledAssignment {
public:
    Grade grade(const ContextState& state) const;
    Coverage source(const ContextState& state) const;

    const std::vector<ResolvedRule>& rules() const noexcept { return rules_; }
    std::optional<Grade> default_grade() const noexcept { return default_; }
    bool tabulated() const noexcept { return !table_.empty(); }

private:
    friend CompiledAssignment compile_assignment(const StateSpace&, const GradeScale&, const Assignment&,
                                                 std::uint64_t);

    std::optional<std::pair<Grade, Coverage>> resolve(const ContextState& state) const;

    std::vector<std::size_t> radix_;
    std::unordered_map<std::uint64_t, std::pair<Grade, std::size_t>> entries_;
    std::vector<ResolvedRule> rules_;
    std::optional<Grade> default_;
    std::vector<std::uint16_t> table_;
};

/// Resolves and checks totality. Throws E_NON_TOTAL listing up to 10 uncovered
/// states, or E_CONFLICT for an explicit state assigned two different grades.
CompiledAssignment compile_assignment(const StateSpace& space, const GradeScale& scale, const Assignment& assignment,
                                      std::uint64_t cap = kDefaultEnumerationCap);

enum class Severity { info, warning, error };

struct Diagnostic {
    Severity severity = Severity::warning;
    std::string code;
    std::string message;
    std::optional<std::size_t> rule;
    std::optional<SourceSpan> span;
};

std::string_view severity_name(Severity s) noexcept;

struct LintOptions {
    /// Flag slices whose grades decrease along a primary axis.
    bool monotonicity = false;
    std::uint64_t cap = kDefaultEnumerationCap;
};

/// Reports unreachable rules, conflicting duplicate entries (error), zero-match rules,
/// and optionally non-monotone rows/columns.
std::vector<Diagnostic> lint_rules(const Assignment& assignment, const StateSpace& space, const GradeScale& scale,
                                   const LintOptions& options = {});

}  // namespace ndpolar
