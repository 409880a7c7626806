#include "ccwb/verify.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ccwb {

std::string varset_name(const VarSet& s) {
    std::string out;
    for (const char* prefix : {"Z", "W"})
        for (int i = 1; i <= 3; ++i) {
            const std::string v = prefix + std::to_string(i);
            if (s.count(v)) out += v;
        }
    return out;
}

VarSet varset_from_name(const std::string& s) {
    if (s.size() % 2 != 0) throw std::invalid_argument("bad variable-set name '" + s + "'");
    VarSet out;
    for (std::size_t i = 0; i < s.size(); i += 2) {
        const char kind = s[i];
        const char idx = s[i + 1];
        if ((kind != 'Z' && kind != 'W') || idx < '1' || idx > '3')
            throw std::invalid_argument("bad variable name in '" + s + "'");
        out.insert(std::string(1, kind) + idx);
    }
    return out;
}

TypeVector type_of(const VarSet& s) {
    TypeVector t;
    for (const auto& v : s)
        (v[0] == 'W' ? t.num_files : t.num_caches)++;
    return t;
}

namespace {

gf2::BitMatrix generator_of(const Scheme& sch, const std::string& var) {
    if (var.size() == 2 && var[0] == 'Z' && var[1] >= '1' && var[1] <= '3')
        return sch.caches[static_cast<std::size_t>(var[1] - '1')];
    if (var.size() == 2 && var[0] == 'W' && var[1] >= '1' && var[1] <= '3')
        return file_generator(var[1] - '0', sch.config);
    throw std::invalid_argument("unknown variable '" + var + "'");
}

gf2::BitMatrix stack_set(const Scheme& sch, const VarSet& s) {
    gf2::BitMatrix out(sch.config.width());
    for (const auto& v : s) {
        const gf2::BitMatrix g = generator_of(sch, v);
        for (auto r : g.rows()) out.append_row(r);
    }
    return out;
}

} // namespace

VerifyReport check_decodability(const Scheme& sch, bool all_demands_required) {
    VerifyReport rep;
    const ProblemConfig& cfg = sch.config;
    const int t = cfg.subfiles;

    int max_cache_rank = 0;
    for (int k = 0; k < 3; ++k) {
        rep.cache_ranks[static_cast<std::size_t>(k)] =
            gf2::rank(sch.caches[static_cast<std::size_t>(k)]);
        max_cache_rank = std::max(max_cache_rank, rep.cache_ranks[static_cast<std::size_t>(k)]);
    }
    rep.achieved_memory = Frac::of(max_cache_rank, t);

    std::vector<Demand> demands;
    if (all_demands_required) {
        demands = all_demands();
        for (const Demand& d : demands)
            if (!sch.deliveries.count(d))
                throw std::invalid_argument("missing delivery matrix for demand " + d.letters());
    } else {
        for (const auto& [d, m] : sch.deliveries) demands.push_back(d);
    }

    int max_delivery_rank = 0;
    for (const Demand& d : demands) {
        const gf2::BitMatrix& x = sch.deliveries.at(d);
        rep.delivery_ranks[d] = gf2::rank(x);
        rep.delivery_rows[d] = x.row_count();
        max_delivery_rank = std::max(max_delivery_rank, rep.delivery_ranks[d]);
        for (int k = 1; k <= 3; ++k) {
            const gf2::BitMatrix avail =
                gf2::stack({sch.caches[static_cast<std::size_t>(k - 1)], x});
            const gf2::BitMatrix wanted = file_generator(d.d[static_cast<std::size_t>(k - 1)], cfg);
            bool pass = true;
            for (auto r : wanted.rows())
                if (!gf2::in_rowspace(r, avail)) { pass = false; break; }
            rep.checks.push_back(DecodeCheck{d, k, pass});
            if (!pass)
                rep.violations.push_back("user " + std::to_string(k) + " cannot decode W" +
                                         std::to_string(d.d[static_cast<std::size_t>(k - 1)]) +
                                         " under demand " + d.letters());
        }
    }
    rep.achieved_rate = Frac::of(max_delivery_rank, t);

    const int zrows = cfg.cache_rows();
    for (int k = 0; k < 3; ++k)
        if (rep.cache_ranks[static_cast<std::size_t>(k)] > zrows)
            rep.violations.push_back("cache Z" + std::to_string(k + 1) + " rank exceeds M*t");
    const int xrows = cfg.delivery_rows();
    for (const auto& [d, r] : rep.delivery_ranks)
        if (r > xrows)
            rep.violations.push_back("delivery " + d.letters() + " rank exceeds R*t");
    return rep;
}

std::string VerifyReport::text() const {
    std::ostringstream out;
    out << "caches: rank(Z1)=" << cache_ranks[0] << " rank(Z2)=" << cache_ranks[1]
        << " rank(Z3)=" << cache_ranks[2] << "\n";
    for (const auto& [d, r] : delivery_ranks)
        out << "delivery " << d.letters() << ": rows=" << delivery_rows.at(d)
            << " rank=" << r << "\n";
    for (const auto& c : checks)
        out << c.demand.letters() << " user " << c.user << ": "
            << (c.pass ? "pass" : "FAIL") << "\n";
    out << "achieved M=" << achieved_memory.str() << " R=" << achieved_rate.str() << "\n";
    out << (accepted() ? "accepted" : "rejected") << "\n";
    for (const auto& v : violations) out << "violation: " << v << "\n";
    return out.str();
}

std::string VerifyReport::json() const {
    nlohmann::json j;
    j["cache_ranks"] = cache_ranks;
    j["achieved_memory"] = achieved_memory.str();
    j["achieved_rate"] = achieved_rate.str();
    j["accepted"] = accepted();
    j["violations"] = violations;
    nlohmann::json checks_json = nlohmann::json::object();
    for (const auto& c : checks)
        checks_json[c.demand.letters()]["user" + std::to_string(c.user)] = c.pass;
    j["checks"] = checks_json;
    nlohmann::json deliveries_json = nlohmann::json::object();
    for (const auto& [d, r] : delivery_ranks) {
        deliveries_json[d.letters()]["rank"] = r;
        deliveries_json[d.letters()]["rows"] = delivery_rows.at(d);
    }
    j["deliveries"] = deliveries_json;
    return j.dump(2);
}

EntropyProfile entropy_profile(const Scheme& sch, const std::vector<VarSet>& sets) {
    EntropyProfile out;
    for (const VarSet& s : sets) out[s] = gf2::rank(stack_set(sch, s));
    return out;
}

std::vector<VarSet> standard_profile_sets() {
    std::vector<VarSet> sets;
    for (const char* name : {"Z1", "Z1Z2", "Z1Z2Z3", "Z1W1", "Z1W1W2", "Z1Z2W1",
                             "Z1Z2W1W2", "Z1Z2Z3W1", "W1W2W3", "Z1Z2Z3W1W2W3"})
        sets.push_back(varset_from_name(name));
    return sets;
}

TypeSymmetryResult check_type_symmetry(const Scheme& sch) {
    std::vector<std::string> vars = {"W1", "W2", "W3", "Z1", "Z2", "Z3"};
    std::map<TypeVector, std::vector<VarSet>> by_type;
    for (int mask = 1; mask < 64; ++mask) {
        VarSet s;
        for (int i = 0; i < 6; ++i)
            if (mask & (1 << i)) s.insert(vars[static_cast<std::size_t>(i)]);
        by_type[type_of(s)].push_back(s);
    }
    TypeSymmetryResult res;
    for (const auto& [type, sets] : by_type) {
        const int first = gf2::rank(stack_set(sch, sets.front()));
        for (std::size_t i = 1; i < sets.size(); ++i) {
            if (gf2::rank(stack_set(sch, sets[i])) != first) {
                res.symmetric = false;
                res.counterexamples.emplace_back(sets.front(), sets[i]);
            }
        }
    }
    return res;
}

} // namespace ccwb
