#include "hpomdp/envgen.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "hpomdp/textio.hpp"

namespace hpomdp {

namespace {

struct Offset {
    int dx, dy;
    double d2;
};

const Offset kOffsets[8] = {{-1, -1, 2}, {0, -1, 1}, {1, -1, 2}, {-1, 0, 1},
                            {1, 0, 1},   {-1, 1, 2}, {0, 1, 1},  {1, 1, 2}};

double raw_weight(double d2, double sigma) { return std::exp(-d2 / (2.0 * sigma * sigma)); }

// Mask bit order: n, s, w, e. The pattern name doubles as the rel name.
std::string pattern_suffix(unsigned mask) {
    static const char* bits = "nswe";
    std::string out;
    for (int i = 0; i < 4; ++i)
        if (mask & (1u << i)) out += bits[i];
    return out.empty() ? "int" : out;
}

bool offset_out(const Offset& o, unsigned mask) {
    if ((mask & 1u) && o.dy < 0) return true;
    if ((mask & 2u) && o.dy > 0) return true;
    if ((mask & 4u) && o.dx < 0) return true;
    if ((mask & 8u) && o.dx > 0) return true;
    return false;
}

double center_for_mask(double sigma, unsigned mask) {
    double z = 1.0, folded = 0.0;
    for (const auto& o : kOffsets) {
        const double w = raw_weight(o.d2, sigma);
        z += w;
        if (offset_out(o, mask)) folded += w;
    }
    return (1.0 + folded) / z;
}

unsigned cell_mask(const GridWorld& w, int c) {
    unsigned mask = 0;
    if (w.y_of(c) == 0) mask |= 1u;
    if (w.y_of(c) == w.height - 1) mask |= 2u;
    if (w.x_of(c) == 0) mask |= 4u;
    if (w.x_of(c) == w.width - 1) mask |= 8u;
    return mask;
}

}  // namespace

double ObsKernel::center(bool n, bool s, bool w, bool e) const {
    double out = 1.0 - 4.0 * orth - 4.0 * diag;
    if (n) out += orth + 2.0 * diag;
    if (s) out += orth + 2.0 * diag;
    if (w) out += orth + 2.0 * diag;
    if (e) out += orth + 2.0 * diag;
    // Corners shared by two folded sides were added twice.
    if (n && w) out -= diag;
    if (n && e) out -= diag;
    if (s && w) out -= diag;
    if (s && e) out -= diag;
    return out;
}

ObsKernel make_kernel(double sigma) {
    if (!(sigma > 0.0)) throw GridError("kernel sigma must be positive");
    double z = 1.0;
    for (const auto& o : kOffsets) z += raw_weight(o.d2, sigma);
    ObsKernel k;
    k.orth = raw_weight(1.0, sigma) / z;
    k.diag = raw_weight(2.0, sigma) / z;
    return k;
}

std::string cell_name(int c) { return "c" + std::to_string(c + 1); }
std::string section_name(int s) { return "s" + std::to_string(s + 1); }
std::string room_name(int r) { return "r" + std::to_string(r + 1); }
std::string building_name(int b) { return "b" + std::to_string(b + 1); }

GeneratedEnv generate_environment(const EnvConfig& cfg) {
    GeneratedEnv env;
    env.world = make_grid(cfg);
    const GridWorld& w = env.world;
    const double sigma = cfg.kernel_sigma;

    // Which boundary patterns actually occur decides the center rels emitted.
    std::vector<char> mask_used(16, 0);
    for (int c = 0; c < w.num_cells(); ++c) mask_used[cell_mask(w, c)] = 1;

    struct Dir {
        const char* action;
        const char* rel;
        const char* blocked;
        int dx, dy;
    };
    const Dir dirs[4] = {{"up", "north", "blocked_up", 0, -1},
                         {"down", "south", "blocked_down", 0, 1},
                         {"left", "west", "blocked_left", -1, 0},
                         {"right", "east", "blocked_right", 1, 0}};

    std::ostringstream g;
    g << "var pos\n";
    g << "rel stay vv over pos\n";
    for (const auto& d : dirs) {
        g << "rel " << d.rel << " vv over pos\n";
        g << "rel " << d.blocked << " vv over pos\n";
    }
    g << "rel kobs_orth vo over pos\n";
    g << "rel kobs_diag vo over pos\n";
    for (unsigned m = 0; m < 16; ++m)
        if (mask_used[m]) g << "rel kobs_c_" << pattern_suffix(m) << " vo over pos\n";
    g << "module navgrid\n";
    for (const auto& d : dirs) g << "action " << d.action << " modifies pos\n";
    for (const auto& d : dirs) {
        g << "trans " << d.action << " rel stay " << fmt_double(0.1) << "\n";
        g << "trans " << d.action << " rel " << d.rel << " " << fmt_double(0.9) << "\n";
    }
    const ObsKernel kern = make_kernel(sigma);
    for (const auto& d : dirs) {
        g << "obs " << d.action << " rel kobs_orth " << fmt_double(kern.orth) << "\n";
        g << "obs " << d.action << " rel kobs_diag " << fmt_double(kern.diag) << "\n";
        for (unsigned m = 0; m < 16; ++m)
            if (mask_used[m])
                g << "obs " << d.action << " rel kobs_c_" << pattern_suffix(m) << " "
                  << fmt_double(center_for_mask(sigma, m)) << "\n";
    }
    g << "hier over pos\n";
    for (const auto& d : dirs) g << "exec-forbid " << d.action << " when rel " << d.blocked << "\n";
    env.general_text = g.str();

    std::ostringstream s;
    s << "values pos";
    for (int c = 0; c < w.num_cells(); ++c) s << " " << cell_name(c);
    s << "\nobservations pos";
    for (int c = 0; c < w.num_cells(); ++c) s << " " << cell_name(c);
    s << "\nabstract";
    for (int i = 0; i < w.num_sections(); ++i) s << " " << section_name(i);
    for (int i = 0; i < w.num_rooms(); ++i) s << " " << room_name(i);
    for (int i = 0; i < w.num_buildings; ++i) s << " " << building_name(i);
    s << "\n";

    for (int c = 0; c < w.num_cells(); ++c) {
        s << "pair stay " << cell_name(c) << " " << cell_name(c) << "\n";
        for (const auto& d : dirs) {
            const int nx = w.x_of(c) + d.dx, ny = w.y_of(c) + d.dy;
            const bool in = nx >= 0 && nx < w.width && ny >= 0 && ny < w.height;
            const int nb = in ? w.cell_at(nx, ny) : -1;
            if (in && w.edge_open(c, nb))
                s << "pair " << d.rel << " " << cell_name(c) << " " << cell_name(nb) << "\n";
            else
                s << "pair " << d.blocked << " " << cell_name(c) << " " << cell_name(c) << "\n";
        }
    }
    // Sensing ignores walls: the kernel covers grid neighbors of the arrival
    // cell, with off-grid bins folded into the center.
    for (int c = 0; c < w.num_cells(); ++c) {
        s << "pair kobs_c_" << pattern_suffix(cell_mask(w, c)) << " " << cell_name(c) << " "
          << cell_name(c) << "\n";
        for (const auto& o : kOffsets) {
            const int nx = w.x_of(c) + o.dx, ny = w.y_of(c) + o.dy;
            if (nx < 0 || nx >= w.width || ny < 0 || ny >= w.height) continue;
            s << "pair " << (o.d2 == 1 ? "kobs_orth" : "kobs_diag") << " " << cell_name(c) << " "
              << cell_name(w.cell_at(nx, ny)) << "\n";
        }
    }
    for (int c = 0; c < w.num_cells(); ++c)
        s << "hpair " << cell_name(c) << " " << section_name(w.section_of(c)) << "\n";
    const int sec_side = w.section_dim;
    for (int i = 0; i < w.num_sections(); ++i) {
        const int sx = i % w.sections_across(), sy = i / w.sections_across();
        const int c0 = w.cell_at(sx * sec_side, sy * sec_side);
        s << "hpair " << section_name(i) << " " << room_name(w.room_of(c0)) << "\n";
    }
    const int room_side = w.section_dim * w.room_dim;
    for (int i = 0; i < w.num_rooms(); ++i) {
        const int rx = i % w.rooms_across(), ry = i / w.rooms_across();
        const int c0 = w.cell_at(rx * room_side, ry * room_side);
        s << "hpair " << room_name(i) << " " << building_name(w.building_of(c0)) << "\n";
    }
    for (int i = 0; i < w.num_buildings; ++i)
        s << "hpair " << building_name(i) << " root\n";
    env.specific_text = s.str();
    return env;
}

}  // namespace hpomdp
