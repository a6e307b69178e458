#pragma once

#include <string>

#include "hpomdp/gridworld.hpp"

namespace hpomdp {

// Discrete 3x3 observation kernel: weights proportional to
// exp(-(dx^2+dy^2)/(2 sigma^2)), normalized over the nine bins. Bins falling
// outside the grid fold into the center, so rows stay normalized everywhere.
struct ObsKernel {
    double orth = 0.0;  // weight of an in-grid orthogonal neighbor bin
    double diag = 0.0;  // weight of an in-grid diagonal neighbor bin
    // Center weight with the given sides out of grid.
    double center(bool n, bool s, bool w, bool e) const;
};
ObsKernel make_kernel(double sigma);

struct GeneratedEnv {
    GridWorld world;
    std::string general_text;
    std::string specific_text;
};

// Emits the knowledge documents for the world: actions up/down/left/right
// with 0.1 stay / 0.9 move, execution exclusions at walls, the kernel above
// conditioned on the arrival cell, and hierarchy pairs for the four levels
// (cell, section, room, building).
GeneratedEnv generate_environment(const EnvConfig& cfg);

std::string cell_name(int c);
std::string section_name(int s);
std::string room_name(int r);
std::string building_name(int b);

}  // namespace hpomdp
