// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.

#include <algorithm>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"

using namespace lexseq;
using testing_support::choose;
using testing_support::uniform;

namespace {

struct Criterion {
    bool ok = true;
    std::vector<std::string> why;
    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            why.push_back(what);
        }
    }
};

GeneratorLabel label(const std::string& text) { return parse_label(text, 4).second; }
Combination comb(const std::string& text) { return parse_combination(text, 4); }

std::vector<GeneratorLabel> sorted(std::vector<GeneratorLabel> v) {
    std::sort(v.begin(), v.end());
    return v;
}

bool ledger_has(const std::vector<Relation>& ledger, const Combination& lhs, const Combination& rhs) {
    for (const auto& r : ledger) {
        const Combination d = r.lhs - r.rhs, t = lhs - rhs;
        if (d == t || d == Rational(-1) * t) return true;
    }
    return false;
}

void levels(Criterion& c, const PipelineResult& res) {
    struct Row {
        Rational s;
        std::size_t h1, h2;
    };
    for (const Row& row : {Row{0, 5, 10}, Row{Rational(3, 2), 4, 7}, Row{Rational(7, 2), 4, 5}, Row{Rational(11, 2), 4, 7},
                           Row{7, 5, 10}}) {
        const CircleBundle& p = res.levels.at(row.s);
        const std::string at = "level " + format_rational(row.s);
        c.expect(bundle_homology(p, 1).rank() == row.h1, at + " H1");
        c.expect(bundle_homology(p, 2).rank() == row.h2, at + " H2");
    }
    const LabeledSpace h15 = bundle_homology(res.levels.at(Rational(3, 2)), 2);
    c.expect(h15.vanishes(comb("L1F^1.5")) && h15.vanishes(comb("L3F^1.5")), "L1F, L3F vanish at 1.5");
    c.expect(!h15.vanishes(comb("L2F^1.5")) && !h15.vanishes(comb("L4F^1.5")), "L2F, L4F survive at 1.5");
    const LabeledSpace h35 = bundle_homology(res.levels.at(Rational(7, 2)), 2);
    c.expect(h35.has(label("(L13-L24)^3.5")), "(L13-L24)^3.5 generates at 3.5");
}

void cobordisms(Criterion& c, const PipelineResult& res) {
    const Cobordism& first = res.cobordisms.at(0);
    const Cobordism& second = res.cobordisms.at(1);
    c.expect(first[1].rank() == 4 && second[1].rank() == 4, "H1 of both cobordisms is 4");
    c.expect(first[2].rank() == 8, "H2 of cob[0,1.5] is 8");
    c.expect(second[2].rank() == 6, "H2 of cob[1.5,3.5] is 6");
    c.expect(ledger_has(first.homology.ledger, comb("L13^0"), comb("Z13^1")), "ledger has L13^0 = Z13^1");
    c.expect(ledger_has(second.homology.ledger, comb("L13^1.5 - Z24^2"), comb("(L13-L24)^3.5")),
             "ledger has L13^1.5 - Z24^2 = (L13-L24)^3.5");
}

void unions(Criterion& c, const PipelineResult& res) {
    const LabeledSpace& h1 = res.lower[1];
    const LabeledSpace& h2 = res.lower[2];
    c.expect(h1.rank() == 4 && projection_is_isomorphism(h1, 4), "H1 of union[0,3.5] maps isomorphically to H1(T^4)");
    c.expect(h2.rank() == 7, "H2 of union[0,3.5] is 7");
    for (const std::string ij : {"12", "14", "23", "34"})
        c.expect(h2.equal(comb("L" + ij + "^0"), comb("L" + ij + "^1.5")) &&
                     h2.equal(comb("L" + ij + "^1.5"), comb("L" + ij + "^3.5")),
                 "L" + ij + " agrees across levels");
    for (int i = 1; i <= 4; ++i)
        for (const std::string s : {"0", "1.5", "3.5"})
            c.expect(h2.vanishes(comb("L" + std::to_string(i) + "F^" + s)), "L" + std::to_string(i) + "F^" + s + " = 0");
    c.expect(h2.equal(comb("L13^0"), comb("L13^1.5")) && h2.equal(comb("L13^1.5"), comb("Z13^1")), "L13^0 = L13^1.5 = Z13^1");
    c.expect(h2.equal(comb("(L13-L24)^3.5"), comb("L13^1.5 - Z24^2")), "(L13-L24)^3.5 = L13^1.5 - Z24^2");

    c.expect(res.upper_by_symmetry.has_value(), "symmetric image of the lower union exists");
    if (res.upper_by_symmetry)
        for (int d = 0; d <= 2; ++d)
            c.expect(same_presentation((*res.upper_by_symmetry)[d], res.upper[d]),
                     "reflected and recomputed union[3.5,7] agree in degree " + std::to_string(d));
    c.expect(res.upper[1].rank() == 4 && projection_is_isomorphism(res.upper[1], 4), "H1 of union[3.5,7]");
    c.expect(res.upper[2].rank() == 7, "H2 of union[3.5,7] is 7");
    c.expect(res.upper[2].equal(comb("L42^7"), comb("Z42^6")), "L42^7 = Z42^6");
}

void manifold(Criterion& c, const PipelineResult& res) {
    const Report& rep = res.report;
    c.expect(sorted(res.w[1].generators()) == sorted({label("L1^0"), label("L2^0"), label("gamma")}), "H1(W) = <L1^0, L2^0, gamma>");
    const std::vector<GeneratorLabel> h2 = sorted(res.w[2].generators());
    const std::vector<GeneratorLabel> base{label("L12^0"), label("L13^0"), label("L14^0"), label("L24^0"),
                                           label("T1+3"),  label("T2+4"),  label("G61")};
    bool listed = h2.size() == 8;
    for (const auto& g : base) listed = listed && std::binary_search(h2.begin(), h2.end(), g);
    const bool slot = std::binary_search(h2.begin(), h2.end(), label("Z24^2")) ||
                      std::binary_search(h2.begin(), h2.end(), label("Z13^5"));
    c.expect(listed && slot, "H2(W) generator list");
    bool slot_relation = false;
    for (const auto& s : rep.slots)
        if (s.relation) slot_relation = slot_relation || (s.relation->lhs == comb("Z13^5 + Z24^2") &&
                                                          s.relation->rhs == comb("L13^1.5 + L24^5.5"));
    c.expect(slot_relation, "slot relation Z13^5 + Z24^2 = L13^1.5 + L24^5.5");
    const EulerDuality e = euler_and_duality(static_cast<long>(res.w[0].rank()), static_cast<long>(res.w[1].rank()),
                                             static_cast<long>(res.w[2].rank()), std::vector<long>(4, 0));
    c.expect(e.betti == std::array<long, 7>{1, 3, 8, 12, 8, 3, 1}, "Betti numbers 1 3 8 12 8 3 1");
    c.expect(e.chi == 0, "chi(W) = 0");
    c.expect(rep.euler.betti == e.betti, "report carries the same Betti numbers");
    c.expect(rep.kaehler.obstructed, "Kaehler obstruction reported");
}

void chern(Criterion& c, const PipelineResult& res) {
    const Report& rep = res.report;
    c.expect(rep.c1.size() == 8, "one c1 row per H2(W) generator");
    std::set<C1Rule> rules;
    for (const auto& row : rep.c1) {
        c.expect(row.value == 0, "<c1, " + display(row.generator) + "> = 0");
        rules.insert(row.rule);
    }
    c.expect(rules.count(C1Rule::FixedTorusSum) && rules.count(C1Rule::ClutchingWinding), "FixedTorusSum and ClutchingWinding used");

    Scenario twisted = res.scenario;
    twisted.twists = {0, 1, 0};
    const ClutchingSpec spec = clutching_spec(twisted.gluing, twisted.hi - twisted.lo, twisted.twists);
    c.expect(pair_c1_gradient_torus(label("T1+3"), spec) == 1, "injected twist gives 1 (symbolic)");
    c.expect(pair_c1_gradient_torus(label("T1+3"), spec, WindingMethod::sampled) == 1, "injected twist gives 1 (sampled)");
    bool nonzero = false;
    for (const auto& row : run(twisted).report.c1) nonzero = nonzero || row.value != 0;
    c.expect(nonzero, "twisted scenario has a nonzero c1 row");
}

void properties(Criterion& c) {
    std::size_t failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = static_cast<int>(uniform(2, 6));
        const int p = static_cast<int>(uniform(0, n)), q = static_cast<int>(uniform(0, n));
        const Form a = testing_support::random_form(n, p), b = testing_support::random_form(n, q);
        if (wedge(a, b) != ((p * q) % 2 ? -wedge(b, a) : wedge(b, a))) ++failures;
        const int odd = static_cast<int>(uniform(0, (n - 1) / 2)) * 2 + 1;
        const Form x = testing_support::random_form(n, odd);
        if (!wedge(x, x).is_zero()) ++failures;
    }
    c.expect(failures == 0, std::to_string(failures) + " exterior-algebra failures");

    failures = 0;
    const auto pairs = basis_tuples(4, 2);
    for (unsigned pattern = 0; pattern < 64; ++pattern) {
        Form e(4, 2);
        for (std::size_t k = 0; k < 6; ++k) e += sigma(4, pairs[k], (pattern >> k) & 1u ? -1 : 1);
        const CircleBundle b(4, e);
        const std::size_t expect = 6 - rank(wedge_map_matrix(e, 0)) + 4 - rank(wedge_map_matrix(e, 1));
        if (bundle_homology(b, 2).rank() != expect) ++failures;
    }
    c.expect(failures == 0, std::to_string(failures) + " Gysin rank-identity failures");

    failures = 0;
    for (int n = 2; n <= 6; ++n)
        for (int d = 0; d <= 2; ++d)
            if (static_cast<long>(bundle_homology(CircleBundle(n, Form(n, 2)), d).rank()) != choose(n, d) + choose(n, d - 1))
                ++failures;
    c.expect(failures == 0, std::to_string(failures) + " Kunneth failures");

    failures = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const auto r = static_cast<std::size_t>(uniform(0, 7)), k = static_cast<std::size_t>(uniform(0, 7));
        const RationalMatrix m = testing_support::random_matrix(r, k, -2, 2);
        if (rank(m) + kernel_basis(m).dim() != k) ++failures;
    }
    c.expect(failures == 0, std::to_string(failures) + " rank-nullity failures");

    failures = 0;
    for (const Scenario& sc : {mcduff(), trivial_scenario()}) {
        const PipelineResult res = run(sc);
        std::vector<MVAudit> all;
        for (const auto& cob : res.cobordisms) all.insert(all.end(), cob.homology.audits.begin(), cob.homology.audits.end());
        for (const StageHomology* s : {&res.lower, &res.upper, &res.w}) all.insert(all.end(), s->audits.begin(), s->audits.end());
        for (const auto& a : all)
            if (!a.exact) ++failures;
        if (all.empty()) ++failures;
    }
    c.expect(failures == 0, std::to_string(failures) + " inexact Mayer-Vietoris problems");
}

void trivial(Criterion& c) {
    const PipelineResult res = run(trivial_scenario());
    for (int k = 0; k <= 6; ++k)
        c.expect(res.report.euler.betti[static_cast<std::size_t>(k)] == choose(6, k),
                 "b" + std::to_string(k) + " = C(6," + std::to_string(k) + ")");
}

}  // namespace

int main() {
    const std::vector<std::string> names{
        "level-set homology table",
        "elementary cobordisms",
        "unions and their mirror",
        "final manifold W",
        "first Chern class table",
        "property suites",
        "trivial-scenario oracle",
    };
    std::vector<Criterion> results(names.size());
    try {
        const PipelineResult res = run(mcduff());
        levels(results[0], res);
        cobordisms(results[1], res);
        unions(results[2], res);
        manifold(results[3], res);
        chern(results[4], res);
    } catch (const std::exception& e) {
        for (std::size_t k = 0; k < 5; ++k) results[k].expect(false, std::string("exception: ") + e.what());
    }
    try {
        properties(results[5]);
    } catch (const std::exception& e) {
        results[5].expect(false, std::string("exception: ") + e.what());
    }
    try {
        trivial(results[6]);
    } catch (const std::exception& e) {
        results[6].expect(false, std::string("exception: ") + e.what());
    }

    int failed = 0;
    for (std::size_t k = 0; k < names.size(); ++k) {
        std::cout << (results[k].ok ? "PASS" : "FAIL") << " criterion " << k + 1 << ": " << names[k];
        for (const auto& w : results[k].why) std::cout << " [" << w << "]";
        std::cout << "\n";
        failed += results[k].ok ? 0 : 1;
    }
    return failed;
}
