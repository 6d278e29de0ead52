#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace ecosim {

enum class Action { Keep, Demolish, Renovate, Replace, NewConstruction };

inline constexpr std::array<Action, 5> kActions{Action::Keep, Action::Demolish, Action::Renovate,
                                                Action::Replace, Action::NewConstruction};

// snake_case names used in CSV headers and JSON keys.
std::string_view to_string(Action action);
std::optional<Action> parse_action(std::string_view text);

// Values indexed by Action.
template <typename T>
struct PerAction {
    std::array<T, kActions.size()> values{};

    T& operator[](Action a) { return values[static_cast<std::size_t>(a)]; }
    const T& operator[](Action a) const { return values[static_cast<std::size_t>(a)]; }

    bool operator==(const PerAction&) const = default;
};

}  // namespace ecosim
