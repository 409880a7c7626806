#include "ccwb/search.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ccwb {

std::string SubfileToken::str() const {
    return std::string(1, static_cast<char>('A' + file - 1)) + std::to_string(index);
}

int SearchSpec::total_bits() const {
    int n = 0;
    for (const auto& row : row_masks) n += static_cast<int>(row.size());
    return n;
}

gf2::BitMatrix SearchSpec::seed_of(std::uint64_t index) const {
    gf2::BitMatrix seed(config.width());
    int bit = 0;
    for (const auto& row : row_masks) {
        std::uint64_t r = 0;
        for (const auto& tok : row) {
            if (index & (std::uint64_t{1} << bit))
                r |= std::uint64_t{1} << config.bit_of(tok.file, tok.index);
            ++bit;
        }
        seed.append_row(r);
    }
    return seed;
}

namespace {

SubfileToken parse_token(const std::string& s, const ProblemConfig& cfg) {
    if (s.size() < 2 || s[0] < 'A' || s[0] > 'C')
        throw std::invalid_argument("bad subfile token '" + s + "'");
    const int idx = std::stoi(s.substr(1));
    if (idx < 1 || idx > cfg.subfiles)
        throw std::invalid_argument("subfile index out of range in '" + s + "'");
    return SubfileToken{s[0] - 'A' + 1, idx};
}

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

} // namespace

SearchSpec parse_search_spec(const std::string& text) {
    SearchSpec spec;
    spec.config.g_fixed.clear();
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = strip(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = strip(line.substr(1, line.size() - 2));
            if (section != "config" && section != "masks" && section != "target" &&
                section != "limits")
                throw std::invalid_argument("search spec line " + std::to_string(lineno) +
                                            ": unknown section [" + section + "]");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("search spec line " + std::to_string(lineno) +
                                        ": expected key=value");
        const std::string key = strip(line.substr(0, eq));
        const std::string val = strip(line.substr(eq + 1));
        if (section == "config") {
            if (key == "files") spec.config.n_files = std::stoi(val);
            else if (key == "users") spec.config.n_users = std::stoi(val);
            else if (key == "subfiles") spec.config.subfiles = std::stoi(val);
            else if (key == "memory") spec.config.memory = parse_frac(val);
            else if (key == "rate") spec.config.rate = parse_frac(val);
            else if (key == "gshift") spec.config.g_shift = std::stoi(val);
            else if (key == "gfixed") {
                spec.config.g_fixed.clear();
                std::istringstream vs(val);
                std::string item;
                while (std::getline(vs, item, ',')) spec.config.g_fixed.push_back(std::stoi(strip(item)));
            } else
                throw std::invalid_argument("unknown config key '" + key + "'");
        } else if (section == "masks") {
            if (key != "row") throw std::invalid_argument("masks section expects row= lines");
            std::vector<SubfileToken> toks;
            std::istringstream vs(val);
            std::string item;
            while (std::getline(vs, item, ',')) toks.push_back(parse_token(strip(item), spec.config));
            std::sort(toks.begin(), toks.end());
            spec.row_masks.push_back(std::move(toks));
        } else if (section == "target") {
            spec.target[varset_from_name(key)] = std::stoi(val);
        } else if (section == "limits") {
            if (key == "budget") spec.budget = std::stoull(val);
            else if (key == "max_results") spec.max_results = std::stoull(val);
            else throw std::invalid_argument("unknown limits key '" + key + "'");
        } else {
            throw std::invalid_argument("search spec line " + std::to_string(lineno) +
                                        ": content outside a section");
        }
    }
    spec.config.validate();
    if (spec.row_masks.empty()) throw std::invalid_argument("search spec has no masks");
    if (spec.total_bits() >= 63 || spec.candidate_count() > spec.budget)
        throw std::invalid_argument("candidate count exceeds budget");
    return spec;
}

SearchSpec load_search_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open search spec: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_search_spec(buf.str());
}

namespace {

struct TargetEntry {
    VarSet set;
    int value = 0;
    int stacked_rows = 0;  // evaluation cost proxy
};

// Evaluates one candidate; returns the profile when every target entry
// matches, nullopt at the first mismatch.
std::optional<EntropyProfile> evaluate(const SearchSpec& spec,
                                       const std::vector<TargetEntry>& entries,
                                       const gf2::BitMatrix& seed) {
    Scheme sch;
    sch.config = spec.config;
    auto caches = expand_cache_seed(seed, spec.config);
    sch.caches = caches;
    EntropyProfile profile;
    for (const auto& e : entries) {
        const auto p = entropy_profile(sch, {e.set});
        const int got = p.begin()->second;
        profile[e.set] = got;
        if (got != e.value) return std::nullopt;
    }
    if (!check_type_symmetry(sch).symmetric) return std::nullopt;
    return profile;
}

} // namespace

std::vector<SearchResult> enumerate_cache_seeds(const SearchSpec& spec, std::uint64_t from,
                                                int jobs) {
    if (spec.candidate_count() > spec.budget)
        throw std::invalid_argument("candidate count exceeds budget");
    std::vector<TargetEntry> entries;
    for (const auto& [set, value] : spec.target) {
        int rows = 0;
        for (const auto& v : set)
            rows += (v[0] == 'Z') ? spec.config.cache_rows() : spec.config.subfiles;
        entries.push_back(TargetEntry{set, value, rows});
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const TargetEntry& a, const TargetEntry& b) {
                         return a.stacked_rows < b.stacked_rows;
                     });

    const std::uint64_t end = spec.candidate_count();
    jobs = std::max(1, jobs);
    std::vector<std::vector<SearchResult>> partial(static_cast<std::size_t>(jobs));
    auto worker = [&](int j) {
        for (std::uint64_t idx = from + static_cast<std::uint64_t>(j); idx < end;
             idx += static_cast<std::uint64_t>(jobs)) {
            const gf2::BitMatrix seed = spec.seed_of(idx);
            if (auto profile = evaluate(spec, entries, seed))
                partial[static_cast<std::size_t>(j)].push_back(
                    SearchResult{idx, seed, std::move(*profile), true});
        }
    };
    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> threads;
        for (int j = 0; j < jobs; ++j) threads.emplace_back(worker, j);
        for (auto& th : threads) th.join();
    }
    std::vector<SearchResult> matched;
    for (auto& p : partial)
        for (auto& r : p) matched.push_back(std::move(r));
    std::sort(matched.begin(), matched.end(),
              [](const SearchResult& a, const SearchResult& b) { return a.seed_index < b.seed_index; });
    if (matched.size() > spec.max_results) matched.resize(spec.max_results);
    return matched;
}

std::vector<std::uint64_t> default_delivery_pool(const Scheme& sch, const Demand& rep,
                                                 int max_terms, bool include_all_files) {
    const ProblemConfig& cfg = sch.config;
    std::vector<int> bits;
    for (int file = 1; file <= 3; ++file) {
        const bool demanded = std::find(rep.d.begin(), rep.d.end(), file) != rep.d.end();
        if (!demanded && !include_all_files) continue;
        for (int i = 1; i <= cfg.subfiles; ++i) bits.push_back(cfg.bit_of(file, i));
    }
    std::vector<std::uint64_t> pool;
    // combinations of 1..max_terms bits, emitted by increasing term count
    // so short rows come first
    for (int terms = 1; terms <= max_terms; ++terms) {
        std::vector<std::uint64_t> level;
        std::vector<int> idx(static_cast<std::size_t>(terms));
        std::function<void(std::size_t, int)> gen = [&](std::size_t start, int depth) {
            if (depth == terms) {
                std::uint64_t row = 0;
                for (int k = 0; k < terms; ++k)
                    row |= std::uint64_t{1} << bits[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
                level.push_back(row);
                return;
            }
            for (std::size_t i = start; i < bits.size(); ++i) {
                idx[static_cast<std::size_t>(depth)] = static_cast<int>(i);
                gen(i + 1, depth + 1);
            }
        };
        gen(0, 0);
        pool.insert(pool.end(), level.begin(), level.end());
    }
    for (const auto& z : sch.caches)
        for (auto r : z.rows())
            if (std::find(pool.begin(), pool.end(), r) == pool.end()) pool.push_back(r);
    return pool;
}

namespace {

// Rows of W_{d_k} not yet spanned by [Z_k; X], counted per user.
int decode_deficiency(const Scheme& sch, const Demand& d, const gf2::BitMatrix& x, int user) {
    const gf2::BitMatrix avail = gf2::stack({sch.caches[static_cast<std::size_t>(user - 1)], x});
    const gf2::BitMatrix wanted = file_generator(d.d[static_cast<std::size_t>(user - 1)], sch.config);
    const int base = gf2::rank(avail);
    return gf2::rank(gf2::stack({avail, wanted})) - base;
}

bool decodes(const Scheme& sch, const Demand& d, const gf2::BitMatrix& x) {
    for (int k = 1; k <= 3; ++k)
        if (decode_deficiency(sch, d, x, k) != 0) return false;
    return true;
}

} // namespace

std::optional<gf2::BitMatrix> search_delivery(const Scheme& sch, const Demand& rep,
                                              const std::vector<std::uint64_t>& pool,
                                              std::uint64_t budget) {
    const ProblemConfig& cfg = sch.config;
    const int xrows = cfg.delivery_rows();

    // A constant demand is served by the demanded file itself.
    if (rep.d[0] == rep.d[1] && rep.d[1] == rep.d[2]) {
        const gf2::BitMatrix full = file_generator(rep.d[0], cfg);
        if (full.row_count() <= xrows && decodes(sch, rep, full)) return full;
    }
    if (pool.empty()) return std::nullopt;

    const std::optional<TransformWord> word = demand_fixing_word(rep);
    const bool structured = word.has_value() && xrows % 3 == 0;
    const int depth_max = structured ? xrows / 3 : xrows;

    std::uint64_t nodes = 0;
    std::vector<std::uint64_t> picked;
    std::optional<gf2::BitMatrix> found;

    std::function<bool(std::size_t)> dfs = [&](std::size_t start) -> bool {
        if (++nodes > budget) return true;  // stop, found stays empty
        gf2::BitMatrix seed(cfg.width(), picked);
        gf2::BitMatrix x = seed;
        if (structured && !picked.empty()) {
            const gf2::BitMatrix second = apply_word(seed, cfg, *word);
            x = gf2::stack({seed, second, apply_word(second, cfg, *word)});
        }
        if (static_cast<int>(picked.size()) == depth_max) {
            if (decodes(sch, rep, x)) {
                found = seed;
                return true;
            }
            return false;
        }
        // prune: each remaining seed row contributes at most 3 (structured)
        // or 1 row toward any user's missing rank
        const int per_row = structured ? 3 : 1;
        const int remaining = (depth_max - static_cast<int>(picked.size())) * per_row;
        for (int k = 1; k <= 3; ++k)
            if (decode_deficiency(sch, rep, x, k) > remaining) return false;
        for (std::size_t i = start; i < pool.size(); ++i) {
            picked.push_back(pool[i]);
            if (dfs(i + 1)) return true;
            picked.pop_back();
        }
        return false;
    };
    dfs(0);
    return found;
}

} // namespace ccwb
