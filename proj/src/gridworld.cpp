#include "hpomdp/gridworld.hpp"

#include <algorithm>
#include <deque>

#include "hpomdp/rng.hpp"

namespace hpomdp {

namespace {

std::pair<int, int> edge_key(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

// Picks one edge of a shared frame segment. Seeding by the region pair keeps
// the choice independent of enumeration order.
std::pair<int, int> pick_door(const std::vector<std::pair<int, int>>& edges, std::uint64_t seed,
                              const char* tag, int ra, int rb) {
    Rng rng(derive_seed(seed, tag, static_cast<std::uint64_t>(ra), static_cast<std::uint64_t>(rb)));
    auto idx = static_cast<std::size_t>(draw_unit(rng) * static_cast<double>(edges.size()));
    if (idx >= edges.size()) idx = edges.size() - 1;
    return edges[idx];
}

}  // namespace

int GridWorld::section_of(int c) const {
    return (y_of(c) / section_dim) * sections_across() + x_of(c) / section_dim;
}

int GridWorld::room_of(int c) const {
    const int side = section_dim * room_dim;
    return (y_of(c) / side) * rooms_across() + x_of(c) / side;
}

int GridWorld::building_of(int c) const { return x_of(c) / height; }

bool GridWorld::edge_open(int a, int b) const {
    const int d = b > a ? b - a : a - b;
    if (d != 1 && d != width) throw GridError("edge_open on non-adjacent cells");
    if (d == 1 && y_of(a) != y_of(b)) return false;  // row wrap is not an edge
    return walls.find(edge_key(a, b)) == walls.end();
}

std::vector<int> GridWorld::open_neighbors(int c) const {
    std::vector<int> out;
    const int x = x_of(c), y = y_of(c);
    if (y > 0 && edge_open(c, c - width)) out.push_back(c - width);
    if (y + 1 < height && edge_open(c, c + width)) out.push_back(c + width);
    if (x > 0 && edge_open(c, c - 1)) out.push_back(c - 1);
    if (x + 1 < width && edge_open(c, c + 1)) out.push_back(c + 1);
    return out;
}

std::vector<int> GridWorld::cells_of_building(int b) const {
    std::vector<int> out;
    for (int c = 0; c < num_cells(); ++c)
        if (building_of(c) == b) out.push_back(c);
    return out;
}

GridWorld make_grid(const EnvConfig& cfg) {
    if (cfg.section_dim < 1 || cfg.room_dim < 1 || cfg.building_dim < 1 || cfg.num_buildings < 1)
        throw GridError("environment dimensions must be at least 1");
    if (!(cfg.kernel_sigma > 0.0)) throw GridError("kernel sigma must be positive");

    GridWorld w;
    w.section_dim = cfg.section_dim;
    w.room_dim = cfg.room_dim;
    w.building_dim = cfg.building_dim;
    w.num_buildings = cfg.num_buildings;
    w.height = cfg.section_dim * cfg.room_dim * cfg.building_dim;
    w.width = w.height * cfg.num_buildings;

    // Walls close every edge that crosses a room frame; building frames are a
    // subset because rooms never straddle buildings.
    for (int y = 0; y < w.height; ++y)
        for (int x = 0; x < w.width; ++x) {
            const int c = w.cell_at(x, y);
            if (x + 1 < w.width && w.room_of(c) != w.room_of(c + 1)) w.walls.insert(edge_key(c, c + 1));
            if (y + 1 < w.height && w.room_of(c) != w.room_of(c + w.width))
                w.walls.insert(edge_key(c, c + w.width));
        }

    const int room_side = cfg.section_dim * cfg.room_dim;
    const int rooms_across = w.width / room_side;
    const int rooms_down = w.height / room_side;
    auto building_of_room = [&](int rcol) { return rcol / cfg.building_dim; };

    // One door per adjacent same-building room pair. Cross-building edges are
    // left to the building pass so the single building door stays single.
    for (int rr = 0; rr < rooms_down; ++rr)
        for (int rc = 0; rc < rooms_across; ++rc) {
            const int room = rr * rooms_across + rc;
            if (rc + 1 < rooms_across && building_of_room(rc) == building_of_room(rc + 1)) {
                std::vector<std::pair<int, int>> edges;
                const int xl = (rc + 1) * room_side - 1;
                for (int y = rr * room_side; y < (rr + 1) * room_side; ++y)
                    edges.push_back(edge_key(w.cell_at(xl, y), w.cell_at(xl + 1, y)));
                w.doors.insert(pick_door(edges, cfg.seed, "room-door", room, room + 1));
            }
            if (rr + 1 < rooms_down) {
                std::vector<std::pair<int, int>> edges;
                const int yl = (rr + 1) * room_side - 1;
                for (int x = rc * room_side; x < (rc + 1) * room_side; ++x)
                    edges.push_back(edge_key(w.cell_at(x, yl), w.cell_at(x, yl + 1)));
                w.doors.insert(pick_door(edges, cfg.seed, "room-door", room, room + rooms_across));
            }
        }

    for (int b = 0; b + 1 < cfg.num_buildings; ++b) {
        std::vector<std::pair<int, int>> edges;
        const int xl = (b + 1) * w.height - 1;
        for (int y = 0; y < w.height; ++y)
            edges.push_back(edge_key(w.cell_at(xl, y), w.cell_at(xl + 1, y)));
        w.doors.insert(pick_door(edges, cfg.seed, "building-door", b, b + 1));
    }

    for (const auto& d : w.doors) w.walls.erase(d);

    if (!grid_connected(w)) throw GridError("generated world is not connected");
    return w;
}

int shortest_path(const GridWorld& w, int a, int b) {
    if (a < 0 || a >= w.num_cells() || b < 0 || b >= w.num_cells())
        throw GridError("shortest_path cell out of range");
    if (a == b) return 0;
    std::vector<int> dist(static_cast<std::size_t>(w.num_cells()), -1);
    std::deque<int> queue{a};
    dist[static_cast<std::size_t>(a)] = 0;
    while (!queue.empty()) {
        const int c = queue.front();
        queue.pop_front();
        for (int n : w.open_neighbors(c))
            if (dist[static_cast<std::size_t>(n)] < 0) {
                dist[static_cast<std::size_t>(n)] = dist[static_cast<std::size_t>(c)] + 1;
                if (n == b) return dist[static_cast<std::size_t>(n)];
                queue.push_back(n);
            }
    }
    throw GridError("shortest_path: cells are not connected");
}

bool grid_connected(const GridWorld& w) {
    if (w.num_cells() == 0) return true;
    std::vector<char> seen(static_cast<std::size_t>(w.num_cells()), 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    int count = 1;
    while (!queue.empty()) {
        const int c = queue.front();
        queue.pop_front();
        for (int n : w.open_neighbors(c))
            if (!seen[static_cast<std::size_t>(n)]) {
                seen[static_cast<std::size_t>(n)] = 1;
                ++count;
                queue.push_back(n);
            }
    }
    return count == w.num_cells();
}

}  // namespace hpomdp
