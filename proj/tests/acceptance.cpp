// Acceptance gate: one pass/fail line per criterion, nonzero exit on
// any failure. Heavy LP recoveries run here rather than in unit tests.
#include "ccwb/certificate.hpp"
#include "ccwb/converse.hpp"
#include "ccwb/entropy_lp.hpp"
#include "ccwb/gf2.hpp"
#include "ccwb/scheme.hpp"
#include "ccwb/search.hpp"
#include "ccwb/verify.hpp"

#include <cstdio>
#include <functional>
#include <random>
#include <string>

using namespace ccwb;
using conv::Rat;

namespace {

const std::string kData = CCWB_DATA_DIR;
int failures = 0;

void report(int criterion, const std::string& what, bool pass) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
    if (!pass) ++failures;
}

bool all_checks_pass(const VerifyReport& rep, std::size_t expected) {
    if (rep.checks.size() != expected || !rep.accepted()) return false;
    for (const auto& c : rep.checks)
        if (!c.pass) return false;
    return true;
}

// 1: the (3/5, 3/2) corner-point scheme decodes all 81 (demand, user)
// pairs at the claimed memory and rate.
void criterion1(const Scheme& main_scheme) {
    const Scheme full = expand_all_deliveries(main_scheme);
    const VerifyReport rep = check_decodability(full, true);
    bool ok = all_checks_pass(rep, 81);
    for (int r : rep.cache_ranks) ok = ok && r == 6;
    for (const auto& [d, r] : rep.delivery_ranks) ok = ok && r <= 15;
    ok = ok && rep.achieved_memory == Frac::of(3, 5) && rep.achieved_rate == Frac::of(3, 2);
    report(1, "corner-point scheme decodes with (M,R)=(3/5,3/2)", ok);
}

// 2: the published joint-entropy table is reproduced exactly.
void criterion2(const Scheme& main_scheme) {
    const EntropyProfile profile = entropy_profile(main_scheme, standard_profile_sets());
    const std::vector<std::pair<std::string, int>> expected = {
        {"Z1", 6},           {"Z1Z2", 12},       {"Z1Z2Z3", 18},
        {"Z1W1", 16},        {"Z1W1W2", 24},     {"Z1Z2W1", 22},
        {"Z1Z2W1W2", 27},    {"Z1Z2Z3W1", 28},   {"W1W2W3", 30},
        {"Z1Z2Z3W1W2W3", 30},
    };
    bool ok = true;
    for (const auto& [name, value] : expected) {
        auto it = profile.find(varset_from_name(name));
        ok = ok && it != profile.end() && it->second == value;
    }
    report(2, "entropy table of the corner-point caches matches", ok);
}

// 3: the second bundled scheme achieves (1/2, 5/3) and its caches are
// one g-orbit.
void criterion3(const Scheme& small_scheme) {
    const Scheme full = expand_all_deliveries(small_scheme);
    const VerifyReport rep = check_decodability(full, true);
    bool ok = all_checks_pass(rep, 81);
    for (int r : rep.cache_ranks) ok = ok && r == 3;
    for (const auto& [d, r] : rep.delivery_ranks) ok = ok && r <= 10;
    ok = ok && rep.achieved_memory == Frac::of(1, 2) && rep.achieved_rate == Frac::of(5, 3);
    ok = ok && small_scheme.caches[1] == op_g(small_scheme.caches[0], small_scheme.config);
    ok = ok && small_scheme.caches[2] == op_g(small_scheme.caches[1], small_scheme.config);
    report(3, "second scheme decodes with (M,R)=(1/2,5/3)", ok);
}

// 4: the bundled search specs find matches, and the enlarged one
// rediscovers the published cache seed.
void criterion4() {
    const SearchSpec simple = load_search_spec(kData + "/search/simple.spec");
    const auto simple_matches = enumerate_cache_seeds(simple, 0, 4);
    bool ok = !simple_matches.empty();

    const SearchSpec enlarged = load_search_spec(kData + "/search/enlarged.spec");
    const std::uint64_t pub0 = row_from_string("A1+A3+A4+B2+B10", enlarged.config);
    const std::uint64_t pub1 = row_from_string("A2+B1", enlarged.config);
    bool found = false;
    for (const auto& res : enumerate_cache_seeds(enlarged, 0, 4)) {
        const std::uint64_t r0 = res.seed.row(0), r1 = res.seed.row(1);
        if ((r0 == pub0 && r1 == pub1) || (r0 == pub1 && r1 == pub0)) found = true;
    }
    report(4, "seed search matches, including the published seed", ok && found);
}

// 5: both bundled hand certificates verify with zero slack.
void criterion5() {
    const conv::Universe u10 = conv::Universe::load(kData + "/universes/bound_10_6.uni");
    const auto r10 =
        conv::check_certificate(conv::load_certificate(kData + "/certs/bound_10_6.cert", u10), u10);
    const conv::Universe u12 = conv::Universe::load(kData + "/universes/bound_5_4.uni");
    const auto r12 =
        conv::check_certificate(conv::load_certificate(kData + "/certs/bound_5_4.cert", u12), u12);
    report(5, "bundled certificates check (c=15 and c=9)",
           r10.ok && r10.certified_c == Rat(15) && r12.ok && r12.certified_c == Rat(9));
}

// 6: the LP pipeline recovers the published bounds with verified
// certificates.
void criterion6() {
    auto prove = [](const std::string& uni, int a, int b, const Rat& c) {
        const conv::Universe u = conv::Universe::load(uni);
        const conv::SolveResult r = conv::solve_and_certify(conv::build_lp(u, a, b));
        return r.certified && r.bound.c == c &&
               conv::check_certificate(r.certificate, u).ok;
    };
    bool ok = prove(kData + "/universes/bound_10_6.uni", 10, 6, 15);
    ok = prove(kData + "/universes/bound_5_4.uni", 5, 4, 9) && ok;
    ok = prove(kData + "/universes/cutset_3_1.uni", 3, 1, 3) && ok;
    ok = prove(kData + "/universes/cutset_1_1.uni", 1, 1, 2) && ok;
    ok = prove(kData + "/universes/cutset_1_3.uni", 1, 3, 3) && ok;
    report(6, "LP recovers 10M+6R>=15, 5M+4R>=9 and the cut-set bounds", ok);
}

// 7: without the common-information variables the same universe cannot
// certify 15, showing they are load-bearing.
void criterion7() {
    const conv::Universe u = conv::Universe::load(kData + "/universes/bound_10_6_nok.uni");
    const conv::SolveResult r = conv::solve_and_certify(conv::build_lp(u, 10, 6));
    report(7, "dropping K1,K2 certifies strictly less than 15",
           r.certified && r.bound.c < Rat(15) && conv::check_certificate(r.certificate, u).ok);
}

// 8a: transform invariance of decodability over random symmetric caches,
// random deliveries and all nine operator words.
bool lemma_invariance() {
    const ProblemConfig cfg = ProblemConfig{};  // main (3/5, 3/2) layout
    std::mt19937_64 rng(2026);
    const std::uint64_t width_mask = (std::uint64_t{1} << cfg.width()) - 1;
    auto decode = [&](const std::array<gf2::BitMatrix, 3>& caches, const Demand& d,
                      const gf2::BitMatrix& x, int user) {
        const gf2::BitMatrix avail =
            gf2::stack({caches[static_cast<std::size_t>(user - 1)], x});
        const gf2::BitMatrix want = file_generator(d.d[static_cast<std::size_t>(user - 1)], cfg);
        return gf2::rank(gf2::stack({avail, want})) == gf2::rank(avail);
    };
    for (int trial = 0; trial < 120; ++trial) {
        gf2::BitMatrix seed(cfg.width());
        seed.append_row(rng() & width_mask);
        seed.append_row(rng() & width_mask);
        const auto caches = expand_cache_seed(seed, cfg);
        Demand d;
        for (auto& dk : d.d) dk = 1 + static_cast<int>(rng() % 3);
        gf2::BitMatrix x(cfg.width());
        const int xrows = 3 + static_cast<int>(rng() % 10);
        for (int i = 0; i < xrows; ++i) x.append_row(rng() & width_mask);
        for (int f = 0; f < 3; ++f) {
            for (int g = 0; g < 3; ++g) {
                const TransformWord w{f, g};
                const Demand e = apply_word(d, w);
                const gf2::BitMatrix xw = apply_word(x, cfg, w);
                for (int user = 1; user <= 3; ++user) {
                    const int user_w = (user - 1 + g) % 3 + 1;
                    if (decode(caches, d, x, user) != decode(caches, e, xw, user_w))
                        return false;
                }
            }
        }
    }
    return true;
}

// 8c: rank axioms under fuzzing.
bool rank_axioms() {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10000; ++trial) {
        const int width = 1 + static_cast<int>(rng() % 30);
        const std::uint64_t mask =
            width == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
        auto rand_matrix = [&](int max_rows) {
            gf2::BitMatrix m(width);
            const int rows = static_cast<int>(rng() % static_cast<std::uint64_t>(max_rows + 1));
            for (int i = 0; i < rows; ++i) m.append_row(rng() & mask);
            return m;
        };
        const gf2::BitMatrix a = rand_matrix(6), b = rand_matrix(6), c = rand_matrix(6);
        const int ra = gf2::rank(a);
        const int rab = gf2::rank(gf2::stack({a, b}));
        const int rac = gf2::rank(gf2::stack({a, c}));
        const int rabc = gf2::rank(gf2::stack({a, b, c}));
        if (rab < ra || rab > ra + gf2::rank(b)) return false;          // monotone, subadditive
        if (rab + rac < rabc + ra) return false;                        // submodular
    }
    return true;
}

void criterion8(const Scheme& main_scheme, const Scheme& small_scheme) {
    const bool lemma = lemma_invariance();
    const bool sym = check_type_symmetry(main_scheme).symmetric &&
                     check_type_symmetry(small_scheme).symmetric;
    const bool axioms = rank_axioms();
    const bool tight = Rat(10) * Rat(3, 5) + Rat(6) * Rat(3, 2) == Rat(15) &&
                       Rat(5) * Rat(3, 5) + Rat(4) * Rat(3, 2) == Rat(9);
    report(8, "invariance, type symmetry, rank axioms and tightness",
           lemma && sym && axioms && tight);
}

} // namespace

int main() {
    try {
        const Scheme main_scheme = load_scheme(kData + "/schemes/p06_15.scheme");
        const Scheme small_scheme = load_scheme(kData + "/schemes/p05_53.scheme");
        criterion1(main_scheme);
        criterion2(main_scheme);
        criterion3(small_scheme);
        criterion4();
        criterion5();
        criterion6();
        criterion7();
        criterion8(main_scheme, small_scheme);
    } catch (const std::exception& ex) {
        std::printf("FAIL unhandled exception: %s\n", ex.what());
        return 1;
    }
    return failures == 0 ? 0 : 1;
}
