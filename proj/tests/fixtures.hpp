#pragma once

// Shared 12-cell test world: 3 columns x 4 rows, row-major cells c1..c12,
//
//   c1  c2  c3
//   c4  c5  c6
//   c7  c8  c9
//   c10 c11 c12
//
// abstracted into six two-cell sections, three rooms and two buildings:
// s1={c1,c2} s2={c3,c4} s3={c5,c6} s4={c7,c8} s5={c9,c10} s6={c11,c12},
// r1={s1,s2} r2={s3,s4} r3={s5,s6}, b1={r1,r2} b2={r3}.
// Movement: 0.8 move / 0.2 stay. Observation: 3x3 kernel, 0.6 center and
// 0.05 per ring cell, off-grid ring mass folded into the center.

#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fixture {

inline constexpr int W = 3, H = 4;

inline std::string cell(int x, int y) { return "c" + std::to_string(y * W + x + 1); }
inline bool in_grid(int x, int y) { return x >= 0 && x < W && y >= 0 && y < H; }

struct Off {
    const char* name;
    int dx, dy;
};
inline const std::vector<Off>& ring() {
    static const std::vector<Off> r = {{"ko_nw", -1, -1}, {"ko_n", 0, -1}, {"ko_ne", 1, -1},
                                       {"ko_w", -1, 0},   {"ko_e", 1, 0},  {"ko_sw", -1, 1},
                                       {"ko_s", 0, 1},    {"ko_se", 1, 1}};
    return r;
}

// Boundary pattern of a cell: which ring offsets fall off the grid.
inline std::string pattern(int x, int y) {
    bool n = y == 0, s = y == H - 1, w = x == 0, e = x == W - 1;
    if (n && w) return "kc_nw";
    if (n && e) return "kc_ne";
    if (s && w) return "kc_sw";
    if (s && e) return "kc_se";
    if (n) return "kc_n";
    if (s) return "kc_s";
    if (w) return "kc_w";
    if (e) return "kc_e";
    return "kc_int";
}

inline int offgrid_count(int x, int y) {
    int c = 0;
    for (const auto& o : ring())
        if (!in_grid(x + o.dx, y + o.dy)) ++c;
    return c;
}

inline std::string general_doc() {
    std::ostringstream g;
    g << "var robot_loc\n";
    g << "rel stay vv over robot_loc\n";
    for (const char* d : {"north", "south", "west", "east"})
        g << "rel " << d << " vv over robot_loc\n";
    for (const char* d : {"north", "south", "west", "east"})
        g << "rel blocked_" << d << " vv over robot_loc\n";
    for (const auto& o : ring()) g << "rel " << o.name << " vo over robot_loc\n";
    for (const char* p : {"kc_int", "kc_n", "kc_s", "kc_w", "kc_e", "kc_nw", "kc_ne", "kc_sw",
                          "kc_se"})
        g << "rel " << p << " vo over robot_loc\n";
    g << "module navigation\n";
    const char* acts[4] = {"up", "down", "left", "right"};
    const char* dirs[4] = {"north", "south", "west", "east"};
    for (int i = 0; i < 4; ++i) g << "action " << acts[i] << " modifies robot_loc\n";
    for (int i = 0; i < 4; ++i) {
        g << "trans " << acts[i] << " rel stay 0.2\n";
        g << "trans " << acts[i] << " rel " << dirs[i] << " 0.8\n";
    }
    // Center mass per boundary class: 0.6 plus 0.05 per folded ring cell.
    std::map<std::string, int> folds = {{"kc_int", 0}, {"kc_n", 3},  {"kc_s", 3},
                                        {"kc_w", 3},   {"kc_e", 3},  {"kc_nw", 5},
                                        {"kc_ne", 5},  {"kc_sw", 5}, {"kc_se", 5}};
    for (int i = 0; i < 4; ++i) {
        for (const auto& [p, k] : folds) {
            std::ostringstream pv;
            pv << 0.6 + 0.05 * k;
            g << "obs " << acts[i] << " rel " << p << " " << pv.str() << "\n";
        }
        for (const auto& o : ring()) g << "obs " << acts[i] << " rel " << o.name << " 0.05\n";
    }
    g << "hier over robot_loc\n";
    for (int i = 0; i < 4; ++i)
        g << "exec-forbid " << acts[i] << " when rel blocked_" << dirs[i] << "\n";
    return g.str();
}

inline std::string specific_doc() {
    std::ostringstream s;
    s << "values robot_loc";
    for (int i = 1; i <= 12; ++i) s << " c" << i;
    s << "\nobservations robot_loc";
    for (int i = 1; i <= 12; ++i) s << " c" << i;
    s << "\nabstract s1 s2 s3 s4 s5 s6 r1 r2 r3 b1 b2\n";
    const int dx4[4] = {0, 0, -1, 1}, dy4[4] = {-1, 1, 0, 0};
    const char* dirs[4] = {"north", "south", "west", "east"};
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
            s << "pair stay " << cell(x, y) << " " << cell(x, y) << "\n";
            for (int d = 0; d < 4; ++d) {
                int nx = x + dx4[d], ny = y + dy4[d];
                if (in_grid(nx, ny))
                    s << "pair " << dirs[d] << " " << cell(x, y) << " " << cell(nx, ny) << "\n";
                else
                    s << "pair blocked_" << dirs[d] << " " << cell(x, y) << " " << cell(x, y)
                      << "\n";
            }
            s << "pair " << pattern(x, y) << " " << cell(x, y) << " " << cell(x, y) << "\n";
            for (const auto& o : ring()) {
                int nx = x + o.dx, ny = y + o.dy;
                if (in_grid(nx, ny))
                    s << "pair " << o.name << " " << cell(x, y) << " " << cell(nx, ny) << "\n";
            }
        }
    for (int i = 1; i <= 12; ++i) s << "hpair c" << i << " s" << (i + 1) / 2 << "\n";
    for (int i = 1; i <= 6; ++i) s << "hpair s" << i << " r" << (i + 1) / 2 << "\n";
    s << "hpair r1 b1\nhpair r2 b1\nhpair r3 b2\n";
    s << "hpair b1 root\nhpair b2 root\n";
    return s.str();
}

}  // namespace fixture
