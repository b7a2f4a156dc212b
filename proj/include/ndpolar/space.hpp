#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ndpolar {

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

/// A risk grade, identified by its rank in the owning GradeScale.
struct Grade {
    std::size_t rank = 0;

    friend auto operator<=>(Grade, Grade) = default;
};

struct RankedGrade {
    std::string id;
    std::size_t rank = 0;
    std::string color;  // "#RRGGBB"
};

/// Finite, totally ordered set of grades. Order is rank order.
class GradeScale {
public:
    /// Grades must be listed with ranks 0..n-1 in order, ids unique, n >= 2.
    explicit GradeScale(std::vector<RankedGrade> grades);

    std::size_t size() const noexcept { return grades_.size(); }
    const std::vector<RankedGrade>& grades() const noexcept { return grades_; }

    const std::string& id(Grade g) const;
    const std::string& color(Grade g) const;

    std::optional<Grade> find(std::string_view id) const;
    /// Throws E_UNKNOWN_GRADE naming the id.
    Grade at(std::string_view id) const;

    bool contains(Grade g) const noexcept { return g.rank < grades_.size(); }

    friend bool operator==(const GradeScale&, const GradeScale&);

private:
    std::vector<RankedGrade> grades_;
};

bool operator==(const RankedGrade& a, const RankedGrade& b);

enum class AxisRole { likelihood, impact, context };

std::string_view role_name(AxisRole role) noexcept;
std::optional<AxisRole> parse_role(std::string_view name) noexcept;

struct Axis {
    std::string id;
    AxisRole role = AxisRole::context;
    std::vector<std::string> labels;
    std::optional<std::size_t> threshold;
    std::optional<std::vector<Grade>> profile;
    /// Display name for renders; empty means use `id`.
    std::string title;

    std::size_t size() const noexcept { return labels.size(); }
    const std::string& display_title() const noexcept { return title.empty() ? id : title; }

    std::optional<std::size_t> find_label(std::string_view label) const;

    friend bool operator==(const Axis&, const Axis&) = default;
};

/// A full state: one level per axis, in axis order.
struct ContextState {
    std::vector<std::size_t> levels;

    friend bool operator==(const ContextState&, const ContextState&) = default;
    friend auto operator<=>(const ContextState&, const ContextState&) = default;
};

/// Fixing of context axes, keyed by axis id.
struct SliceSelector {
    std::map<std::string, std::size_t, std::less<>> levels;

    friend bool operator==(const SliceSelector&, const SliceSelector&) = default;
};

struct RiskPosition {
    std::size_t likelihood = 0;
    std::size_t impact = 0;

    friend bool operator==(RiskPosition, RiskPosition) = default;
};

/// Ordered axes: likelihood first, impact second, then context axes.
class StateSpace {
public:
    explicit StateSpace(std::vector<Axis> axes);

    std::size_t dims() const noexcept { return axes_.size(); }
    const std::vector<Axis>& axes() const noexcept { return axes_; }
    const Axis& axis(std::size_t i) const { return axes_.at(i); }
    std::size_t context_count() const noexcept { return axes_.size() - 2; }

    /// |L| = prod n_i.
    std::uint64_t size() const noexcept { return size_; }

    std::optional<std::size_t> find_axis(std::string_view id) const;
    /// Throws E_UNKNOWN_AXIS naming the id.
    std::size_t axis_index(std::string_view id) const;

    /// Resolves a level token on an axis: exact label first, then a decimal index.
    /// Throws E_UNKNOWN_LEVEL naming the token.
    std::size_t resolve_level(std::size_t axis, std::string_view token) const;

    /// Throws E_OUT_OF_RANGE naming the axis and index.
    void check(const ContextState& state) const;
    void check(RiskPosition risk) const;

    /// Context levels in axis order (axes 3..d). Throws on missing or unknown axes.
    std::vector<std::size_t> context_levels(const SliceSelector& sigma) const;
    SliceSelector selector(std::span<const std::size_t> context_levels) const;

    /// Mixed-radix index, first axis most significant.
    std::uint64_t linear_index(const ContextState& state) const;
    ContextState state_at(std::uint64_t index) const;

    std::string describe(const ContextState& state) const;

    friend bool operator==(const StateSpace& a, const StateSpace& b) { return a.axes_ == b.axes_; }

private:
    std::vector<Axis> axes_;
    std::uint64_t size_ = 0;
};

/// Lexicographic enumeration of every state of a space.
class StateRange {
public:
    class iterator {
    public:
        using iterator_category = std::input_iterator_tag;
        using value_type = ContextState;
        using difference_type = std::ptrdiff_t;
        using pointer = const ContextState*;
        using reference = const ContextState&;

        iterator() = default;
        iterator(const StateSpace* space, bool end);

        reference operator*() const { return state_; }
        pointer operator->() const { return &state_; }
        iterator& operator++();
        iterator operator++(int)
        {
            auto copy = *this;
            ++*this;
            return copy;
        }
        friend bool operator==(const iterator& a, const iterator& b) { return a.done_ == b.done_ && (a.done_ || a.state_ == b.state_); }

    private:
        const StateSpace* space_ = nullptr;
        ContextState state_;
        bool done_ = true;
    };

    explicit StateRange(const StateSpace& space) : space_(&space) {}

    iterator begin() const { return iterator(space_, false); }
    iterator end() const { return iterator(space_, true); }
    std::uint64_t size() const noexcept { return space_->size(); }

private:
    const StateSpace* space_;
};

/// Throws E_ENUMERATION_CAP when |L| exceeds `cap`.
StateRange enumerate_states(const StateSpace& space, std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace ndpolar
