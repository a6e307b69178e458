#include "hpomdp/pomdp_io.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "hpomdp/textio.hpp"

namespace hpomdp {

namespace {

// Token lines from a stream, skipping blanks and '#' comments.
struct LineReader {
    std::istream& in;
    std::vector<std::string> toks;

    bool next() {
        std::string line;
        while (std::getline(in, line)) {
            if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
            std::istringstream ls(line);
            toks.clear();
            std::string t;
            while (ls >> t) toks.push_back(t);
            if (!toks.empty()) return true;
        }
        return false;
    }
    void expect(const char* kw) {
        if (!next() || toks[0] != kw)
            throw TextError(std::string("expected '") + kw + "' line");
    }
};

void write_rows(std::ostream& out, const Pomdp& p, const std::vector<SparseRow>& rows,
                const char* kw) {
    for (int s = 0; s < p.num_states(); ++s)
        for (int a = 0; a < p.num_actions(); ++a) {
            const SparseRow& r = rows[std::size_t(s) * p.actions.size() + a];
            out << kw << " " << s << " " << a << " " << r.size();
            for (const auto& [i, q] : r) out << " " << i << " " << fmt_double(q);
            out << "\n";
        }
}

}  // namespace

void write_pomdp(std::ostream& out, const Pomdp& p) {
    out << "pomdp\n";
    out << "discount " << fmt_double(p.discount) << "\n";
    out << "states " << p.num_states() << "\n";
    for (const auto& s : p.states) out << "s " << s << "\n";
    out << "actions " << p.num_actions() << "\n";
    for (const auto& a : p.actions) out << "a " << a << "\n";
    out << "observations " << p.num_observations() << "\n";
    for (const auto& o : p.observations) out << "o " << o << "\n";
    write_rows(out, p, p.trans, "trans");
    write_rows(out, p, p.obs, "obsrow");
    std::vector<std::uint64_t> keys;
    keys.reserve(p.reward.size());
    for (const auto& [k, v] : p.reward) {
        (void)v;
        keys.push_back(k);
    }
    std::sort(keys.begin(), keys.end());
    out << "rewards " << keys.size() << "\n";
    const std::uint64_t nA = p.actions.size(), nS = p.states.size();
    for (auto k : keys) {
        std::uint64_t s2 = k % nS, rest = k / nS;
        std::uint64_t a = rest % nA, s = rest / nA;
        out << "r " << s << " " << a << " " << s2 << " " << fmt_double(p.reward.at(k)) << "\n";
    }
    out << "end pomdp\n";
}

Pomdp read_pomdp(std::istream& in) {
    LineReader lr{in, {}};
    lr.expect("pomdp");
    Pomdp p;
    lr.expect("discount");
    p.discount = parse_double(lr.toks.at(1), "discount");
    auto read_labels = [&lr](const char* count_kw, const char* item_kw,
                             std::vector<std::string>& dst) {
        lr.expect(count_kw);
        long n = parse_long(lr.toks.at(1), count_kw);
        dst.reserve(n);
        for (long i = 0; i < n; ++i) {
            lr.expect(item_kw);
            dst.push_back(lr.toks.at(1));
        }
    };
    read_labels("states", "s", p.states);
    read_labels("actions", "a", p.actions);
    read_labels("observations", "o", p.observations);
    p.alloc_rows();
    auto read_row = [&lr](const char* kw, std::vector<SparseRow>& rows, std::size_t nA) {
        long s = parse_long(lr.toks.at(1), kw);
        long a = parse_long(lr.toks.at(2), kw);
        long k = parse_long(lr.toks.at(3), kw);
        SparseRow& r = rows[std::size_t(s) * nA + a];
        r.reserve(k);
        for (long i = 0; i < k; ++i) {
            int idx = static_cast<int>(parse_long(lr.toks.at(4 + 2 * i), kw));
            double q = parse_double(lr.toks.at(5 + 2 * i), kw);
            r.emplace_back(idx, q);
        }
    };
    const long n_rows = static_cast<long>(p.states.size()) * p.num_actions();
    for (long i = 0; i < n_rows; ++i) {
        lr.expect("trans");
        read_row("trans", p.trans, p.actions.size());
    }
    for (long i = 0; i < n_rows; ++i) {
        lr.expect("obsrow");
        read_row("obsrow", p.obs, p.actions.size());
    }
    lr.expect("rewards");
    long m = parse_long(lr.toks.at(1), "rewards");
    for (long i = 0; i < m; ++i) {
        lr.expect("r");
        int s = static_cast<int>(parse_long(lr.toks.at(1), "r"));
        int a = static_cast<int>(parse_long(lr.toks.at(2), "r"));
        int s2 = static_cast<int>(parse_long(lr.toks.at(3), "r"));
        p.set_reward(s, a, s2, parse_double(lr.toks.at(4), "r"));
    }
    lr.expect("end");
    return p;
}

void write_policy(std::ostream& out, const Policy& pol) {
    std::size_t dim = pol.alphas.empty() ? 0 : pol.alphas[0].v.size();
    out << "policy " << dim << " " << pol.alphas.size() << "\n";
    for (const auto& al : pol.alphas) {
        out << "alpha " << al.action;
        for (double v : al.v) out << " " << fmt_double(v);
        out << "\n";
    }
    out << "end policy\n";
}

Policy read_policy(std::istream& in) {
    LineReader lr{in, {}};
    lr.expect("policy");
    long dim = parse_long(lr.toks.at(1), "policy");
    long n = parse_long(lr.toks.at(2), "policy");
    Policy pol;
    pol.alphas.reserve(n);
    for (long i = 0; i < n; ++i) {
        lr.expect("alpha");
        if (static_cast<long>(lr.toks.size()) != 2 + dim)
            throw TextError("alpha line has wrong arity");
        AlphaVector al;
        al.action = static_cast<int>(parse_long(lr.toks.at(1), "alpha"));
        al.v.reserve(dim);
        for (long j = 0; j < dim; ++j) al.v.push_back(parse_double(lr.toks.at(2 + j), "alpha"));
        pol.alphas.push_back(std::move(al));
    }
    lr.expect("end");
    return pol;
}

}  // namespace hpomdp
