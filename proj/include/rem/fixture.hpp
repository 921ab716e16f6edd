#ifndef REM_FIXTURE_HPP
#define REM_FIXTURE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rem/config.hpp"

namespace rem {

// Synthetic ride data, schema-identical to a bike-share trip export, with a
// known bimodal time-of-day effect planted in the generating intensity. The
// planted curve (centered on its own grid) is written alongside so a fitted
// cyclic smooth can be validated against it.
struct FixturePaths {
    std::string rides;
    std::string temperature;
    std::string precipitation;
    std::string distances;
    std::string planted_tod;
    std::vector<double> tod_grid;     // hours in [0, 24)
    std::vector<double> tod_planted;  // centered planted values on the grid
};

FixturePaths generate_bike_fixture(const std::string& dir, int rows, std::uint64_t seed);

// run configuration pointing at a generated fixture
RunConfig bike_fixture_config(const FixturePaths& paths, std::uint64_t seed);

}  // namespace rem

#endif
