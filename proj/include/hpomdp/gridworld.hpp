#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hpomdp {

struct GridError : std::runtime_error {
    explicit GridError(const std::string& m) : std::runtime_error(m) {}
};

enum class BeliefMode { known_start, uniform };

// One benchmark world family: num_buildings square buildings in a row, each
// building_dim x building_dim rooms of room_dim x room_dim sections of
// section_dim x section_dim cells.
struct EnvConfig {
    int section_dim = 2;   // cells per section side
    int room_dim = 2;      // sections per room side
    int building_dim = 2;  // rooms per building side
    int num_buildings = 2;
    double kernel_sigma = 0.2;
    BeliefMode initial_belief_mode = BeliefMode::known_start;
    std::uint64_t seed = 0;
};

// Cells are indexed row major over the whole strip of buildings; y grows
// downward, so action "up" decreases y. Walls are unordered cell pairs whose
// shared edge is closed; every other grid edge is open.
struct GridWorld {
    int width = 0;   // cells across all buildings
    int height = 0;  // cells, equals one building side
    int section_dim = 0;
    int room_dim = 0;
    int building_dim = 0;
    int num_buildings = 0;

    std::set<std::pair<int, int>> walls;  // pairs with first < second
    std::set<std::pair<int, int>> doors;  // opened wall positions, same keying

    int num_cells() const { return width * height; }
    int cell_at(int x, int y) const { return y * width + x; }
    int x_of(int c) const { return c % width; }
    int y_of(int c) const { return c / width; }

    int sections_across() const { return width / section_dim; }
    int rooms_across() const { return width / (section_dim * room_dim); }

    int section_of(int c) const;
    int room_of(int c) const;
    int building_of(int c) const;
    int num_sections() const { return sections_across() * (height / section_dim); }
    int num_rooms() const { return rooms_across() * (height / (section_dim * room_dim)); }

    bool edge_open(int a, int b) const;  // requires grid-adjacent cells
    std::vector<int> open_neighbors(int c) const;
    std::vector<int> cells_of_building(int b) const;
};

// Lays out the buildings, walls every room and building frame, then opens one
// seeded door per adjacent same-building room pair and one per adjacent
// building pair. The result is connected by construction; violations throw.
GridWorld make_grid(const EnvConfig& cfg);

// BFS hop count over open edges; throws GridError if b is unreachable.
int shortest_path(const GridWorld& w, int a, int b);

bool grid_connected(const GridWorld& w);

}  // namespace hpomdp
