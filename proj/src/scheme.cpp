#include "ccwb/scheme.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ccwb {

Frac Frac::of(long long n, long long d) {
    if (d == 0) throw std::invalid_argument("zero denominator");
    if (d < 0) { n = -n; d = -d; }
    const long long g = std::gcd(n < 0 ? -n : n, d);
    return Frac{g ? n / g : 0, g ? d / g : 1};
}

std::string Frac::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

namespace {

int scaled_int(const Frac& f, int t, const char* what) {
    const long long v = f.num * t;
    if (v % f.den != 0)
        throw std::invalid_argument(std::string(what) + " times subfile count is not an integer");
    return static_cast<int>(v / f.den);
}

} // namespace

int ProblemConfig::cache_rows() const { return scaled_int(memory, subfiles, "memory"); }
int ProblemConfig::delivery_rows() const { return scaled_int(rate, subfiles, "rate"); }

bool ProblemConfig::is_fixed(int subfile) const {
    return std::find(g_fixed.begin(), g_fixed.end(), subfile) != g_fixed.end();
}

int ProblemConfig::g_image(int subfile) const {
    if (is_fixed(subfile)) return subfile;
    const int c = subfiles - static_cast<int>(g_fixed.size());
    return (subfile - 1 + g_shift) % c + 1;
}

void ProblemConfig::validate() const {
    if (n_files != 3 || n_users != 3)
        throw std::invalid_argument("only the (3,3) problem is supported");
    if (subfiles <= 0) throw std::invalid_argument("subfiles must be positive");
    if (width() > 64) throw std::invalid_argument("width exceeds 64 columns");
    const int c = subfiles - static_cast<int>(g_fixed.size());
    for (int i : g_fixed)
        if (i <= c || i > subfiles)
            throw std::invalid_argument("g_fixed indices must be the trailing subfiles");
    if (c > 0 && (3 * g_shift) % c != 0)
        throw std::invalid_argument("g applied three times must be the identity");
    cache_rows();
    delivery_rows();
}

Demand Demand::from_letters(const std::string& s) {
    if (s.size() != 3) throw std::invalid_argument("demand must have three letters");
    Demand d;
    for (int k = 0; k < 3; ++k) {
        const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(s[static_cast<std::size_t>(k)])));
        if (c < 'A' || c > 'C') throw std::invalid_argument("demand letters must be A, B or C");
        d.d[static_cast<std::size_t>(k)] = c - 'A' + 1;
    }
    return d;
}

std::string Demand::letters() const {
    std::string s;
    for (int v : d) s += static_cast<char>('A' + v - 1);
    return s;
}

std::vector<Demand> all_demands() {
    std::vector<Demand> out;
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b)
            for (int c = 1; c <= 3; ++c) out.push_back(Demand{{a, b, c}});
    return out;
}

std::string TransformWord::str() const {
    const int a = ((f_count % 3) + 3) % 3;
    const int b = ((g_count % 3) + 3) % 3;
    if (a == 0 && b == 0) return "id";
    std::string s;
    for (int i = 0; i < a; ++i) s += s.empty() ? "f" : ".f";
    for (int i = 0; i < b; ++i) s += s.empty() ? "g" : ".g";
    return s;
}

gf2::BitMatrix op_f(const gf2::BitMatrix& m, const ProblemConfig& cfg) {
    if (m.width() != cfg.width()) throw std::invalid_argument("op_f: width mismatch");
    const int t = cfg.subfiles;
    std::vector<int> perm(static_cast<std::size_t>(cfg.width()));
    for (int file = 0; file < 3; ++file)
        for (int i = 0; i < t; ++i)
            perm[static_cast<std::size_t>(file * t + i)] = ((file + 1) % 3) * t + i;
    return permute_columns(m, perm);
}

gf2::BitMatrix op_g(const gf2::BitMatrix& m, const ProblemConfig& cfg) {
    if (m.width() != cfg.width()) throw std::invalid_argument("op_g: width mismatch");
    const int t = cfg.subfiles;
    std::vector<int> perm(static_cast<std::size_t>(cfg.width()));
    for (int file = 0; file < 3; ++file)
        for (int i = 1; i <= t; ++i)
            perm[static_cast<std::size_t>(file * t + i - 1)] = file * t + cfg.g_image(i) - 1;
    return permute_columns(m, perm);
}

gf2::BitMatrix apply_word(const gf2::BitMatrix& m, const ProblemConfig& cfg,
                          const TransformWord& w) {
    gf2::BitMatrix out = m;
    const int a = ((w.f_count % 3) + 3) % 3;
    const int b = ((w.g_count % 3) + 3) % 3;
    for (int i = 0; i < a; ++i) out = op_f(out, cfg);
    for (int i = 0; i < b; ++i) out = op_g(out, cfg);
    return out;
}

Demand apply_word(const Demand& d, const TransformWord& w) {
    Demand e = d;
    const int a = ((w.f_count % 3) + 3) % 3;
    const int b = ((w.g_count % 3) + 3) % 3;
    for (int& v : e.d) v = (v - 1 + a) % 3 + 1;
    for (int i = 0; i < b; ++i) e.d = {e.d[2], e.d[0], e.d[1]};
    return e;
}

std::array<gf2::BitMatrix, 3> expand_cache_seed(const gf2::BitMatrix& seed,
                                                const ProblemConfig& cfg) {
    if (3 * seed.row_count() != cfg.cache_rows())
        throw std::invalid_argument("cache seed must have M*t/3 rows");
    const gf2::BitMatrix z1 =
        gf2::stack({seed, op_f(seed, cfg), op_f(op_f(seed, cfg), cfg)});
    const gf2::BitMatrix z2 = op_g(z1, cfg);
    const gf2::BitMatrix z3 = op_g(z2, cfg);
    return {z1, z2, z3};
}

gf2::BitMatrix expand_delivery_seed(const gf2::BitMatrix& seed, const ProblemConfig& cfg,
                                    const TransformWord& op) {
    if (3 * seed.row_count() != cfg.delivery_rows())
        throw std::invalid_argument("delivery seed must have R*t/3 rows");
    const gf2::BitMatrix second = apply_word(seed, cfg, op);
    const gf2::BitMatrix third = apply_word(second, cfg, op);
    return gf2::stack({seed, second, third});
}

std::optional<TransformWord> demand_fixing_word(const Demand& d) {
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            if (a == 0 && b == 0) continue;
            const TransformWord w{a, b};
            if (apply_word(d, w) == d) return w;
        }
    return std::nullopt;
}

const std::vector<Demand>& orbit_representatives() {
    static const std::vector<Demand> reps = {
        Demand::from_letters("AAA"), Demand::from_letters("ABC"),
        Demand::from_letters("ACB"), Demand::from_letters("ABB"),
        Demand::from_letters("ACC")};
    return reps;
}

namespace {

// Orbit words follow the transform diagrams: part 1 steps by g.f from
// AAA, part 2 by f from ABC, part 3 by f^2 from ACB, parts 4 and 5 are
// 3x3 grids over (f or f^2) and g from ABB and ACC.
std::map<Demand, DemandOrbit> build_orbit_table() {
    std::map<Demand, DemandOrbit> table;
    auto add = [&table](const Demand& rep, const TransformWord& w) {
        const Demand target = apply_word(rep, w);
        if (!table.emplace(target, DemandOrbit{rep, w}).second)
            throw std::logic_error("orbit tables overlap on demand " + target.letters());
    };
    const Demand aaa = Demand::from_letters("AAA");
    const Demand abc = Demand::from_letters("ABC");
    const Demand acb = Demand::from_letters("ACB");
    const Demand abb = Demand::from_letters("ABB");
    const Demand acc = Demand::from_letters("ACC");
    for (int k = 0; k < 3; ++k) {
        add(aaa, TransformWord{k, k});      // (g.f)^k
        add(abc, TransformWord{k, 0});      // f^k
        add(acb, TransformWord{2 * k, 0});  // (f^2)^k
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            add(abb, TransformWord{i, j});      // f^i then g^j
            add(acc, TransformWord{2 * i, j});  // (f^2)^i then g^j
        }
    if (table.size() != 27) throw std::logic_error("orbit table does not cover all demands");
    return table;
}

} // namespace

DemandOrbit resolve_orbit(const Demand& d) {
    static const std::map<Demand, DemandOrbit> table = build_orbit_table();
    return table.at(d);
}

Scheme expand_all_deliveries(const Scheme& sch) {
    Scheme out = sch;
    for (const Demand& d : all_demands()) {
        const DemandOrbit orbit = resolve_orbit(d);
        const auto it = sch.deliveries.find(orbit.representative);
        if (it == sch.deliveries.end())
            throw std::invalid_argument("missing representative delivery " +
                                        orbit.representative.letters());
        out.deliveries[d] = apply_word(it->second, sch.config, orbit.transform);
    }
    return out;
}

gf2::BitMatrix file_generator(int file, const ProblemConfig& cfg) {
    gf2::BitMatrix m(cfg.width());
    for (int i = 1; i <= cfg.subfiles; ++i)
        m.append_row(std::uint64_t{1} << cfg.bit_of(file, i));
    return m;
}

std::uint64_t row_from_string(const std::string& text, const ProblemConfig& cfg) {
    if (text == "0") return 0;
    std::uint64_t row = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t next = text.find('+', pos);
        const std::string tok = text.substr(pos, next == std::string::npos ? next : next - pos);
        if (tok.size() < 2 || tok[0] < 'A' || tok[0] > 'C')
            throw std::invalid_argument("bad subfile token '" + tok + "'");
        int idx = 0;
        for (std::size_t i = 1; i < tok.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(tok[i])))
                throw std::invalid_argument("bad subfile token '" + tok + "'");
            idx = idx * 10 + (tok[i] - '0');
        }
        if (idx < 1 || idx > cfg.subfiles)
            throw std::invalid_argument("subfile index out of range in '" + tok + "'");
        row |= std::uint64_t{1} << cfg.bit_of(tok[0] - 'A' + 1, idx);
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return row;
}

std::string row_to_string(std::uint64_t row, const ProblemConfig& cfg) {
    if (row == 0) return "0";
    std::string out;
    for (int file = 1; file <= 3; ++file)
        for (int i = 1; i <= cfg.subfiles; ++i)
            if (row & (std::uint64_t{1} << cfg.bit_of(file, i))) {
                if (!out.empty()) out += '+';
                out += static_cast<char>('A' + file - 1);
                out += std::to_string(i);
            }
    return out;
}

namespace {

std::string strip(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

Frac parse_frac(const std::string& s) {
    const std::size_t slash = s.find('/');
    if (slash == std::string::npos) return Frac::of(std::stoll(s), 1);
    return Frac::of(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw std::invalid_argument("scheme line " + std::to_string(line) + ": " + msg);
}

} // namespace

Scheme parse_scheme(const std::string& text) {
    Scheme sch;
    sch.config = ProblemConfig{};
    sch.config.g_fixed.clear();

    enum class Section { None, Config, Cache, Delivery };
    Section section = Section::None;
    int cache_index = -1;
    Demand delivery_demand;
    bool have_config = false;
    std::array<bool, 3> cache_seen{false, false, false};
    std::array<std::vector<std::uint64_t>, 3> cache_rows;
    std::map<Demand, std::vector<std::uint64_t>> delivery_rows;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = strip(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(lineno, "unterminated section header");
            const std::string name = strip(line.substr(1, line.size() - 2));
            if (name == "config") {
                section = Section::Config;
            } else if (name.starts_with("cache ")) {
                const std::string z = strip(name.substr(6));
                if (z.size() != 2 || z[0] != 'Z' || z[1] < '1' || z[1] > '3')
                    fail(lineno, "cache section must be Z1, Z2 or Z3");
                cache_index = z[1] - '1';
                if (cache_seen[static_cast<std::size_t>(cache_index)])
                    fail(lineno, "duplicate cache section " + z);
                cache_seen[static_cast<std::size_t>(cache_index)] = true;
                section = Section::Cache;
            } else if (name.starts_with("delivery ")) {
                try {
                    delivery_demand = Demand::from_letters(strip(name.substr(9)));
                } catch (const std::exception& e) {
                    fail(lineno, e.what());
                }
                if (delivery_rows.count(delivery_demand))
                    fail(lineno, "duplicate delivery section " + delivery_demand.letters());
                delivery_rows[delivery_demand] = {};
                section = Section::Delivery;
            } else {
                fail(lineno, "unknown section [" + name + "]");
            }
            continue;
        }

        try {
            switch (section) {
            case Section::None:
                fail(lineno, "content outside a section");
            case Section::Config: {
                const std::size_t eq = line.find('=');
                if (eq == std::string::npos) fail(lineno, "expected key=value");
                const std::string key = strip(line.substr(0, eq));
                const std::string val = strip(line.substr(eq + 1));
                if (key == "files") sch.config.n_files = std::stoi(val);
                else if (key == "users") sch.config.n_users = std::stoi(val);
                else if (key == "subfiles") sch.config.subfiles = std::stoi(val);
                else if (key == "memory") sch.config.memory = parse_frac(val);
                else if (key == "rate") sch.config.rate = parse_frac(val);
                else if (key == "gshift") sch.config.g_shift = std::stoi(val);
                else if (key == "gfixed") {
                    sch.config.g_fixed.clear();
                    if (!val.empty()) {
                        std::istringstream vs(val);
                        std::string item;
                        while (std::getline(vs, item, ',')) sch.config.g_fixed.push_back(std::stoi(strip(item)));
                    }
                } else fail(lineno, "unknown config key '" + key + "'");
                have_config = true;
                break;
            }
            case Section::Cache:
                cache_rows[static_cast<std::size_t>(cache_index)].push_back(
                    row_from_string(line, sch.config));
                break;
            case Section::Delivery:
                delivery_rows[delivery_demand].push_back(row_from_string(line, sch.config));
                break;
            }
        } catch (const std::invalid_argument& e) {
            std::string what = e.what();
            if (what.starts_with("scheme line")) throw;
            fail(lineno, what);
        }
    }

    if (!have_config) throw std::invalid_argument("scheme has no [config] section");
    sch.config.validate();

    const int zrows = sch.config.cache_rows();
    for (int i = 0; i < 3; ++i) {
        if (!cache_seen[static_cast<std::size_t>(i)])
            throw std::invalid_argument("missing cache section Z" + std::to_string(i + 1));
        auto& rows = cache_rows[static_cast<std::size_t>(i)];
        if (static_cast<int>(rows.size()) != zrows)
            throw std::invalid_argument("cache Z" + std::to_string(i + 1) + " has " +
                                        std::to_string(rows.size()) + " rows, expected " +
                                        std::to_string(zrows));
        sch.caches[static_cast<std::size_t>(i)] = gf2::BitMatrix(sch.config.width(), rows);
    }
    const int xrows = sch.config.delivery_rows();
    for (auto& [d, rows] : delivery_rows) {
        if (static_cast<int>(rows.size()) > xrows)
            throw std::invalid_argument("delivery " + d.letters() + " has " +
                                        std::to_string(rows.size()) + " rows, more than R*t = " +
                                        std::to_string(xrows));
        sch.deliveries[d] = gf2::BitMatrix(sch.config.width(), rows);
    }
    return sch;
}

Scheme load_scheme(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open scheme file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scheme(buf.str());
}

std::string serialize_scheme(const Scheme& sch) {
    std::ostringstream out;
    const ProblemConfig& cfg = sch.config;
    out << "[config]\n";
    out << "files=" << cfg.n_files << "\n";
    out << "users=" << cfg.n_users << "\n";
    out << "subfiles=" << cfg.subfiles << "\n";
    out << "memory=" << cfg.memory.str() << "\n";
    out << "rate=" << cfg.rate.str() << "\n";
    out << "gshift=" << cfg.g_shift << "\n";
    out << "gfixed=";
    for (std::size_t i = 0; i < cfg.g_fixed.size(); ++i)
        out << (i ? "," : "") << cfg.g_fixed[i];
    out << "\n";
    for (int i = 0; i < 3; ++i) {
        out << "[cache Z" << (i + 1) << "]\n";
        for (auto r : sch.caches[static_cast<std::size_t>(i)].rows())
            out << row_to_string(r, cfg) << "\n";
    }
    for (const auto& [d, m] : sch.deliveries) {
        out << "[delivery " << d.letters() << "]\n";
        for (auto r : m.rows()) out << row_to_string(r, cfg) << "\n";
    }
    return out.str();
}

} // namespace ccwb
