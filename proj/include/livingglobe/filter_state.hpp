#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace livingglobe {

/// The three visual variables a data variable can be mapped onto.
enum class Channel
{
    Height,
    BarColor,
    CountryColor,
};

inline constexpr std::array<Channel, 3> kChannels = {Channel::Height, Channel::BarColor, Channel::CountryColor};

constexpr std::size_t index_of(Channel c) noexcept
{
    return static_cast<std::size_t>(c);
}

/// JSON / query-string name: "height", "bar_color", "country_color".
std::string_view channel_name(Channel c) noexcept;
std::optional<Channel> parse_channel(std::string_view name) noexcept;

/// Inclusive [lo, hi] in raw data units. Throws ContractViolation if lo > hi
/// or either bound is NaN.
class Interval
{
public:
    Interval(double lo, double hi);

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }

    bool contains(double v) const noexcept { return v >= lo_ && v <= hi_; }
    bool contains(const Interval& other) const noexcept { return other.lo_ >= lo_ && other.hi_ <= hi_; }

    bool operator==(const Interval&) const = default;

private:
    double lo_;
    double hi_;
};

/// Per-channel filter intervals. Sticky limits survive year changes.
struct FilterState
{
    std::array<std::optional<Interval>, 3> intervals;
    bool sticky = true;

    const std::optional<Interval>& interval(Channel c) const noexcept { return intervals[index_of(c)]; }
    void set(Channel c, std::optional<Interval> interval) { intervals[index_of(c)] = interval; }

    bool any_active() const noexcept
    {
        for (const auto& i : intervals)
            if (i)
                return true;
        return false;
    }

    bool operator==(const FilterState&) const = default;
};

} // namespace livingglobe
