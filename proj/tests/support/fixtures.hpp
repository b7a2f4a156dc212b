#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "ndpolar/document.hpp"

namespace ndpolar::testing {

inline std::filesystem::path fixture_path(const std::string& name)
{
    return std::filesystem::path(NDPOLAR_FIXTURES) / (name + ".ndpolar.json");
}

inline RiskModel load_fixture(const std::string& name)
{
    return load_model(fixture_path(name));
}

inline const std::vector<std::string>& fixture_names()
{
    static const std::vector<std::string> names{"cooling", "toy3d", "classic2d"};
    return names;
}

// Reference cell colours of the three published 5x5 cooling slices at cooling = N+1,
// transcribed independently of the fixture. Index [impact][probability], impact 0 = Insignificant.
using PrintedGrid = std::array<std::array<const char*, 5>, 5>;

inline const PrintedGrid& printed_grid(std::size_t maintenance)
{
    static constexpr const char* g = "green";
    static constexpr const char* lg = "light-green";
    static constexpr const char* o = "orange";
    static constexpr const char* r = "red";
    static const std::array<PrintedGrid, 3> grids{{
        // recently serviced
        {{{g, g, lg, lg, lg}, {g, lg, lg, lg, o}, {lg, lg, lg, o, o}, {lg, lg, o, o, o}, {lg, o, o, o, o}}},
        // due
        {{{g, lg, lg, lg, o}, {lg, lg, lg, o, o}, {lg, lg, o, o, o}, {lg, o, o, o, o}, {o, o, o, o, r}}},
        // overdue
        {{{g, g, lg, lg, o}, {g, lg, lg, o, o}, {lg, lg, o, o, o}, {lg, o, o, o, r}, {o, o, o, r, r}}},
    }};
    return grids.at(maintenance);
}

}  // namespace ndpolar::testing
