#include "ccwb/converse.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ccwb::conv {

bool is_perm(const Perm& p) {
    std::array<bool, 3> seen{};
    for (int v : p) {
        if (v < 1 || v > 3 || seen[static_cast<std::size_t>(v - 1)]) return false;
        seen[static_cast<std::size_t>(v - 1)] = true;
    }
    return true;
}

Perm inverse(const Perm& p) {
    Perm q{};
    for (int i = 0; i < 3; ++i) q[static_cast<std::size_t>(p[static_cast<std::size_t>(i)] - 1)] = i + 1;
    return q;
}

const std::array<Perm, 6>& all_perms() {
    static const std::array<Perm, 6> perms = {
        Perm{1, 2, 3}, Perm{1, 3, 2}, Perm{2, 1, 3},
        Perm{2, 3, 1}, Perm{3, 1, 2}, Perm{3, 2, 1},
    };
    return perms;
}

namespace {

Variable make_variable(const std::string& name) {
    Variable v;
    v.name = name;
    if (name.size() == 2 && (name[0] == 'W' || name[0] == 'Z' || name[0] == 'K') &&
        name[1] >= '1' && name[1] <= '3') {
        v.index = name[1] - '0';
        if (name[0] == 'W') {
            v.kind = Variable::Kind::File;
        } else if (name[0] == 'Z') {
            v.kind = Variable::Kind::Cache;
        } else {
            if (v.index > 2) throw std::runtime_error("unknown variable " + name);
            v.kind = Variable::Kind::CommonInfo;
        }
        return v;
    }
    if (name.size() == 4 && name[0] == 'X') {
        Demand d{};
        for (int k = 0; k < 3; ++k) {
            char c = name[static_cast<std::size_t>(1 + k)];
            if (c < '1' || c > '3') throw std::runtime_error("bad delivery variable " + name);
            d.d[static_cast<std::size_t>(k)] = c - '0';
        }
        v.kind = Variable::Kind::Delivery;
        v.demand = d;
        return v;
    }
    if (name == "G") {
        v.kind = Variable::Kind::Aux;
        return v;
    }
    throw std::runtime_error("unknown variable " + name);
}

} // namespace

Universe Universe::from_names(const std::vector<std::string>& names) {
    Universe u;
    if (names.empty()) throw std::runtime_error("empty universe");
    if (names.size() > 20) throw std::runtime_error("universe too large");
    for (const auto& name : names) {
        if (u.by_name_.count(name)) throw std::runtime_error("duplicate variable " + name);
        u.by_name_[name] = static_cast<int>(u.vars_.size());
        u.vars_.push_back(make_variable(name));
    }
    for (int i = 0; i < u.size(); ++i)
        if (u.vars_[static_cast<std::size_t>(i)].kind == Variable::Kind::File)
            u.w_mask_ |= Mask{1} << i;
    return u;
}

Universe Universe::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::string> names;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) {
            if (tok == "[variables]") continue;
            names.push_back(tok);
        }
    }
    return from_names(names);
}

int Universe::index_of(const std::string& name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? -1 : it->second;
}

Mask Universe::bit(const std::string& name) const {
    int i = index_of(name);
    if (i < 0) throw std::runtime_error("variable " + name + " not in universe");
    return Mask{1} << i;
}

Mask Universe::closure(Mask s) const {
    const int k1 = index_of("K1"), k2 = index_of("K2"), g = index_of("G");
    const int w1 = index_of("W1"), w2 = index_of("W2");
    const int x123 = index_of("X123"), x213 = index_of("X213");
    const int z1 = index_of("Z1");
    auto in = [&](int i) { return i >= 0 && (s >> i & 1u); };
    for (;;) {
        Mask before = s;
        if (w_mask_ && (s & w_mask_) == w_mask_) return full_mask();
        for (int i = 0; i < size(); ++i) {
            const auto& v = vars_[static_cast<std::size_t>(i)];
            if (v.kind != Variable::Kind::Delivery || !(s >> i & 1u)) continue;
            for (int k = 1; k <= 3; ++k) {
                int zk = index_of("Z" + std::to_string(k));
                if (!in(zk)) continue;
                int wd = index_of("W" + std::to_string(v.demand.d[static_cast<std::size_t>(k - 1)]));
                if (wd >= 0) s |= Mask{1} << wd;
            }
        }
        if (k1 >= 0 && (in(w1) || (in(z1) && in(x213)))) s |= Mask{1} << k1;
        if (k2 >= 0 && (in(w2) || (in(w1) && in(x123)))) s |= Mask{1} << k2;
        if (g >= 0 && in(w1) && in(x123)) s |= Mask{1} << g;
        if (s == before) return s;
    }
}

std::optional<Mask> Universe::apply_pair(Mask s, const Perm& pibar, const Perm& pihat) const {
    if (!is_perm(pibar) || !is_perm(pihat)) throw std::runtime_error("bad permutation");
    Perm pibar_inv = inverse(pibar);
    Mask out = 0;
    for (int i = 0; i < size(); ++i) {
        if (!(s >> i & 1u)) continue;
        const auto& v = vars_[static_cast<std::size_t>(i)];
        switch (v.kind) {
        case Variable::Kind::File:
            out |= bit("W" + std::to_string(pihat[static_cast<std::size_t>(v.index - 1)]));
            break;
        case Variable::Kind::Cache:
            out |= bit("Z" + std::to_string(pibar[static_cast<std::size_t>(v.index - 1)]));
            break;
        case Variable::Kind::Delivery: {
            Demand e{};
            for (int k = 1; k <= 3; ++k) {
                int src = pibar_inv[static_cast<std::size_t>(k - 1)];
                e.d[static_cast<std::size_t>(k - 1)] =
                    pihat[static_cast<std::size_t>(v.demand.d[static_cast<std::size_t>(src - 1)] - 1)];
            }
            std::string label = "X";
            for (int dk : e.d) label += static_cast<char>('0' + dk);
            int j = index_of(label);
            if (j < 0) return std::nullopt;
            out |= Mask{1} << j;
            break;
        }
        case Variable::Kind::CommonInfo:
        case Variable::Kind::Aux:
            return std::nullopt;
        }
    }
    return out;
}

void Universe::build_tables() const {
    const std::size_t n = std::size_t{1} << size();
    canon_.assign(n, 0);
    Mask aux = 0;
    for (int i = 0; i < size(); ++i) {
        auto k = vars_[static_cast<std::size_t>(i)].kind;
        if (k == Variable::Kind::CommonInfo || k == Variable::Kind::Aux) aux |= Mask{1} << i;
    }
    for (Mask s = 0; s < n; ++s) {
        Mask cl = closure(s);
        Mask strip = cl & ~aux;
        if (closure(strip) != cl) {
            canon_[s] = cl;
            continue;
        }
        Mask best = cl;
        for (const auto& pibar : all_perms()) {
            for (const auto& pihat : all_perms()) {
                auto img = apply_pair(strip, pibar, pihat);
                if (!img) continue;
                Mask c = closure(*img);
                if (c < best) best = c;
            }
        }
        canon_[s] = best;
    }
    class_sizes_.assign(n, 0);
    for (Mask s = 0; s < n; ++s) ++class_sizes_[canon_[s]];
}

Mask Universe::canonical(Mask s) const {
    if (canon_.empty()) build_tables();
    return canon_[s];
}

int Universe::class_size(Mask s) const {
    if (canon_.empty()) build_tables();
    return class_sizes_[canon_[s]];
}

std::optional<int> Universe::pinned_value(Mask closed) const {
    Mask w = closed & w_mask_;
    if (!w) return std::nullopt;
    if (closure(w) != closed) return std::nullopt;
    return std::popcount(w);
}

std::string Universe::set_name(Mask s) const {
    std::string out;
    for (int i = 0; i < size(); ++i) {
        if (!(s >> i & 1u)) continue;
        if (!out.empty()) out += ',';
        out += vars_[static_cast<std::size_t>(i)].name;
    }
    return out.empty() ? "~" : out;
}

Mask Universe::parse_set(const std::string& csv) const {
    Mask s = 0;
    std::string tok;
    std::istringstream in(csv);
    while (std::getline(in, tok, ',')) {
        auto b = tok.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        auto e = tok.find_last_not_of(" \t");
        s |= bit(tok.substr(b, e - b + 1));
    }
    return s;
}

std::string Universe::describe() const {
    std::string out = "universe:";
    for (const auto& v : vars_) out += " " + v.name;
    return out;
}

void LinearForm::add(const Rat& coeff, Mask set) {
    if (coeff == 0 || set == 0) return;
    terms.emplace_back(coeff, set);
}

LinearForm LinearForm::canonicalized(const Universe& u) const {
    std::map<Mask, Rat> acc;
    for (const auto& [c, s] : terms) acc[u.canonical(s)] += c;
    LinearForm out;
    for (const auto& [s, c] : acc)
        if (c != 0) out.terms.emplace_back(c, s);
    return out;
}

bool LinearForm::empty_zero() const {
    for (const auto& [c, s] : terms)
        if (c != 0) return false;
    return true;
}

std::string LinearBound::str() const {
    std::ostringstream os;
    os << a << "*M + " << b << "*R >= " << c;
    return os.str();
}

} // namespace ccwb::conv
