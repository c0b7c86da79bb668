#pragma once

// Staged computation for one scenario: level sets, elementary cobordisms, the
// two unions on either side of the split value, and the closed manifold W
// obtained by gluing the two ends.

#include <array>
#include <map>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "lexseq/chern.hpp"
#include "lexseq/cobordism.hpp"
#include "lexseq/errors.hpp"
#include "lexseq/gysin.hpp"
#include "lexseq/labels.hpp"
#include "lexseq/mayer_vietoris.hpp"
#include "lexseq/scenario.hpp"

namespace lexseq {

// ---------------------------------------------------------------------------
// Betti assembly

struct EulerDuality {
    std::array<long, 7> betti{};
    long chi = 0;
    bool all_tori = true;   // every fixed component has χ = 0
    bool consistent = true; // b3 came out non-negative
};

/// χ(W) is the sum of χ over the fixed components; the middle Betti number
/// then follows from χ = 2(b0 - b1 + b2) - b3 and duality fills in the rest.
inline EulerDuality euler_and_duality(long b0, long b1, long b2, const std::vector<long>& fixed_chi) {
    EulerDuality out;
    for (long c : fixed_chi) {
        out.chi += c;
        if (c != 0) out.all_tori = false;
    }
    const long b3 = 2 * (b0 - b1 + b2) - out.chi;
    out.consistent = b3 >= 0;
    out.betti = {b0, b1, b2, b3, b2, b1, b0};
    return out;
}

struct KaehlerNote {
    bool obstructed = false;
    std::string text;
};

inline KaehlerNote kaehler_obstruction(long b1) {
    if (b1 % 2 != 0) return {true, "b1 = " + std::to_string(b1) + " is odd: no Kähler structure"};
    return {false, "b1 = " + std::to_string(b1) + " is even: no conclusion"};
}

// ---------------------------------------------------------------------------
// Reflection of the moment interval

namespace detail {

inline std::pair<int, Cycle> move_cycle(const Cycle& c, const std::function<int(int)>& f) {
    Cycle out(c.n(), c.degree());
    for (const auto& [idx, k] : c.terms()) {
        Indices img;
        for (int i : idx) img.push_back(f(i));
        out += Cycle::basis(c.n(), img, k);
    }
    if (out.is_zero()) return {1, out};
    const Rational lead = out.terms().begin()->second;
    if (lead == -1) return {-1, -1 * out};
    return {1, out};
}

/// The label carried by a cycle at a level, with the sign that turns the
/// cycle's leading coefficient into +1.
inline std::pair<int, GeneratorLabel> cycle_label(const Cycle& c, int sign, const Rational& level) {
    return {sign, lift_label(c, level)};
}

inline std::pair<int, Indices> move_indices(const Indices& idx, const std::function<int(int)>& f) {
    Indices out;
    for (int i : idx) out.push_back(f(i));
    const int sign = sort_with_sign(out);
    if (sign == 0) throw inconsistent_model("index map is not injective");
    return {sign, out};
}

inline std::string mirror_stage_name(const std::string& stage, const Rational& total) {
    static const std::regex re(R"(^([a-z]+)\[([^,\]]+),([^\]]+)\](?:/attach([12]))?$)");
    std::smatch m;
    if (!std::regex_match(stage, m, re)) return stage;
    const Rational a = parse_rational(m[2].str()), b = parse_rational(m[3].str());
    std::string out = m[1].str() + "[" + format_rational(total - b) + "," + format_rational(total - a) + "]";
    if (m[4].matched) out += m[4].str() == "1" ? "/attach2" : "/attach1";
    return out;
}

}  // namespace detail

/// i ↦ n+1-i on base coordinates and s ↦ total - s on moment values. Sphere
/// sides swap; the fiber orientation is kept.
inline Relabel index_symmetry(int n, const Rational& total) {
    const auto f = [n](int i) { return n + 1 - i; };
    return [f, total](const GeneratorLabel& l) -> std::pair<int, GeneratorLabel> {
        if (auto* p = std::get_if<LevelTorus>(&l)) {
            auto [s, idx] = detail::move_indices(p->indices, f);
            return {s, LevelTorus{idx, total - p->level}};
        }
        if (auto* p = std::get_if<FiberClass>(&l)) {
            auto [s, idx] = detail::move_indices(p->indices, f);
            return {s, FiberClass{idx, total - p->level}};
        }
        if (auto* p = std::get_if<CombinationLift>(&l)) {
            auto [s, c] = detail::move_cycle(p->cycle, f);
            return detail::cycle_label(c, s, total - p->level);
        }
        if (auto* p = std::get_if<FixedTorus>(&l)) {
            auto [s, idx] = detail::move_indices(p->indices, f);
            return {s, FixedTorus{idx, total - p->lambda}};
        }
        if (auto* p = std::get_if<SphereSection>(&l)) {
            auto [s, idx] = detail::move_indices(p->indices, f);
            return {s, SphereSection{idx, total - p->lambda, flip(p->side)}};
        }
        if (auto* p = std::get_if<SphereFiber>(&l)) {
            auto [s, idx] = detail::move_indices(p->indices, f);
            return {s, SphereFiber{idx, total - p->lambda, flip(p->side)}};
        }
        if (auto* p = std::get_if<GradientTorus>(&l)) {
            auto [s, idx] = detail::move_indices(p->indices, f);
            return {1, GradientTorus{idx, p->fiber}};
        }
        if (auto* p = std::get_if<InvariantSphere>(&l)) return {1, InvariantSphere{total - p->from, total - p->to}};
        if (auto* p = std::get_if<Point>(&l)) {
            const Side side = p->site == Site::sphere ? flip(p->side) : p->side;
            return {1, Point{p->site, total - p->value, side}};
        }
        return {1, l};
    };
}

inline Relation relabel(const Relation& r, const Relabel& f, const Rational& total) {
    Relation out{detail::mirror_stage_name(r.stage, total), r.degree, relabel(r.lhs, f), relabel(r.rhs, f), {}, r.retired};
    for (const auto& m : r.modulus) out.modulus.push_back(relabel(m, f));
    return out;
}

/// Results for [lo, split] carried to [split, hi] (for a split at the midpoint).
inline StageHomology apply_index_symmetry(const StageHomology& s, int n, const Rational& total) {
    const Relabel f = index_symmetry(n, total);
    StageHomology out;
    out.name = detail::mirror_stage_name(s.name, total);
    for (int d = 0; d <= 2; ++d) out.h[static_cast<std::size_t>(d)] = relabel(s[d], f);
    for (const auto& r : s.ledger) out.ledger.push_back(relabel(r, f, total));
    for (const auto& l : s.lifts) {
        auto [sign, label] = f(l.label);
        out.lifts.push_back({label, l.degree, relabel(l.boundary, f)});
        (void)sign;
    }
    out.audits = s.audits;
    for (auto& a : out.audits) a.stage = detail::mirror_stage_name(a.stage, total);
    return out;
}

/// Whether `r` holds in `space` (modulo its modulus). Entries mentioning labels
/// the space does not carry count as failures.
inline bool relation_holds(const Relation& r, const LabeledSpace& space) {
    for (const Combination* c : {&r.lhs, &r.rhs})
        for (const auto& [l, k] : c->terms())
            if (!space.has(l)) return false;
    std::vector<Vector> rel = space.relations().basis();
    for (const auto& m : r.modulus) {
        for (const auto& [l, k] : m.terms())
            if (!space.has(l)) return false;
        rel.push_back(space.coordinates(m));
    }
    return Subspace::span(space.size(), rel).contains(space.coordinates(r.lhs - r.rhs));
}

// ---------------------------------------------------------------------------
// Gluing the two ends

/// Carries a label at level `from` to level `to` through the coordinate
/// permutation of the gluing (output coordinate k takes input coordinate p[k]).
inline Relabel gluing_relabel(const std::vector<int>& p, const Rational& from, const Rational& to) {
    std::vector<int> inv(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) inv.at(static_cast<std::size_t>(p[k] - 1)) = static_cast<int>(k + 1);
    const auto f = [inv](int i) { return inv.at(static_cast<std::size_t>(i - 1)); };
    return [f, from, to](const GeneratorLabel& l) -> std::pair<int, GeneratorLabel> {
        if (label_level(l) != from) return {1, l};
        if (auto* q = std::get_if<LevelTorus>(&l)) {
            auto [s, idx] = detail::move_indices(q->indices, f);
            return {s, LevelTorus{idx, to}};
        }
        if (auto* q = std::get_if<FiberClass>(&l)) {
            auto [s, idx] = detail::move_indices(q->indices, f);
            return {s, FiberClass{idx, to}};
        }
        if (auto* q = std::get_if<CombinationLift>(&l)) {
            auto [s, c] = detail::move_cycle(q->cycle, f);
            return detail::cycle_label(c, s, to);
        }
        if (auto* q = std::get_if<Point>(&l)) return {1, Point{q->site, to, q->side}};
        return {1, l};
    };
}

// ---------------------------------------------------------------------------
// Report

struct StageTable {
    std::string stage;
    std::array<std::size_t, 3> ranks{};
    std::array<std::vector<GeneratorLabel>, 3> generators;
};

/// A generator slot that admits interchangeable choices.
struct GeneratorSlot {
    GeneratorLabel chosen;
    std::vector<GeneratorLabel> alternatives;
    std::optional<Relation> relation;
};

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
    bool audit = true;  // false for scenario facts that are reported but not required
};

struct Report {
    std::string scenario;
    EulerDuality euler;
    KaehlerNote kaehler;
    std::vector<StageTable> tables;
    std::vector<Relation> ledger;
    std::vector<Relation> resolved;  // W entries rewritten through the unions' own relations
    std::vector<GeneratorSlot> slots;
    std::vector<C1Row> c1;
    std::vector<Check> checks;
    std::vector<std::string> notes;

    bool all_checks_pass() const {
        for (const auto& c : checks)
            if (c.audit && !c.pass) return false;
        return true;
    }
};

struct PipelineResult {
    Scenario scenario;
    std::map<Rational, CircleBundle> levels;
    std::vector<Cobordism> cobordisms;
    StageHomology lower, upper;
    std::optional<StageHomology> upper_by_symmetry;
    StageHomology w;
    Report report;
};

inline std::string interval_name(const std::string& kind, const Rational& a, const Rational& b) {
    return kind + "[" + format_rational(a) + "," + format_rational(b) + "]";
}

inline std::string level_name(const Rational& s) { return "level[" + format_rational(s) + "]"; }

namespace detail {

template <class F>
auto at_stage(const std::string& stage, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const stage_error&) {
        throw;
    } catch (const error& e) {
        throw stage_error(stage, e.what());
    }
}

inline LabelMap identity_on(const LabeledSpace& s, int) { return identity_map(s); }

/// Folds consecutive cobordisms into one piece by Mayer–Vietoris over the
/// shared levels.
inline StageHomology union_of(const std::string& name, const std::vector<const Cobordism*>& cobs,
                              const std::map<Rational, CircleBundle>& levels, const LiftTable& lifts) {
    if (cobs.empty()) throw inconsistent_scenario(name + " contains no cobordism");
    StageHomology acc = cobs.front()->homology;
    for (std::size_t k = 1; k < cobs.size(); ++k) {
        const Cobordism& next = *cobs[k];
        const std::string stage = k + 1 == cobs.size() ? name : interval_name("union", cobs.front()->a, next.b);
        const StageHomology prev = acc;
        MVStageInput in;
        in.name = stage;
        in.inter = level_degrees(levels.at(next.a));
        in.a = degrees_of(prev);
        in.a_prime = degrees_of(next.homology);
        in.i = identity_on;
        in.j = identity_on;
        StageHomology glued = at_stage(stage, [&] { return mv_stage(in, lifts); });
        acc.name = stage;
        acc.h = glued.h;
        acc.ledger = prev.ledger;
        acc.ledger.insert(acc.ledger.end(), next.homology.ledger.begin(), next.homology.ledger.end());
        acc.ledger.insert(acc.ledger.end(), glued.ledger.begin(), glued.ledger.end());
        acc.lifts = prev.lifts;
        acc.lifts.insert(acc.lifts.end(), next.homology.lifts.begin(), next.homology.lifts.end());
        acc.lifts.insert(acc.lifts.end(), glued.lifts.begin(), glued.lifts.end());
        acc.audits = prev.audits;
        acc.audits.insert(acc.audits.end(), next.homology.audits.begin(), next.homology.audits.end());
        acc.audits.insert(acc.audits.end(), glued.audits.begin(), glued.audits.end());
    }
    acc.name = name;
    return acc;
}

/// Rewrites a label at a boundary level of a union through the reconciliation
/// entries of the cobordism touching that level, so that it is written in the
/// labels of the neighbouring level (L12^0 -> L12^1.5 and so on).
inline Combination resolve_label(const GeneratorLabel& y, const Cobordism& cob, int d, const LabeledSpace& side) {
    if (side.vanishes(Combination(y))) return {};
    for (const Relation& r : cob.homology.ledger) {
        if (r.stage != cob.name() || r.degree != d) continue;
        for (int flip_sides = 0; flip_sides < 2; ++flip_sides) {
            const Combination& here = flip_sides ? r.rhs : r.lhs;
            const Combination& there = flip_sides ? r.lhs : r.rhs;
            auto it = here.terms().find(y);
            if (it == here.terms().end() || there.terms().count(y)) continue;
            const Rational c = it->second;
            Combination rest = here - Combination(y, c);
            return (1 / c) * (there - rest);
        }
    }
    return Combination(y);
}

inline Combination resolve(const Combination& c, const std::vector<std::pair<Rational, const Cobordism*>>& ends, int d,
                           const LabeledSpace& side) {
    Combination out;
    for (const auto& [l, k] : c.terms()) {
        const Cobordism* cob = nullptr;
        for (const auto& [lvl, cb] : ends)
            if (label_level(l) == lvl) cob = cb;
        out += k * (cob ? resolve_label(l, *cob, d, side) : (side.vanishes(Combination(l)) ? Combination() : Combination(l)));
    }
    return out;
}

inline StageTable table_of(const std::string& stage, const std::function<LabeledSpace(int)>& h) {
    StageTable t{stage, {}, {}};
    for (int d = 0; d <= 2; ++d) {
        const LabeledSpace s = h(d);
        t.ranks[static_cast<std::size_t>(d)] = s.rank();
        t.generators[static_cast<std::size_t>(d)] = s.generators();
    }
    return t;
}

inline bool is_fixed(const GeneratorLabel& l) { return std::holds_alternative<FixedTorus>(l); }

}  // namespace detail

/// H_1(π̂): H_1(piece) -> H_1(T^n) is well defined and bijective.
inline bool projection_is_isomorphism(const LabeledSpace& h1, int n) {
    const RationalMatrix m = projection_matrix(h1, n);
    for (const Vector& r : h1.relations().basis())
        if (!is_zero(m * r)) return false;
    return rank(m) == h1.rank() && h1.rank() == binomial(n, 1);
}

/// Generator slots whose fixed-torus label can be traded for another one.
inline std::vector<GeneratorSlot> generator_slots(const LabeledSpace& h) {
    std::vector<GeneratorSlot> out;
    const auto gens = h.generator_indices();
    const RationalMatrix q = h.quotient_matrix();
    for (std::size_t slot = 0; slot < gens.size(); ++slot) {
        const GeneratorLabel& g = h.labels()[gens[slot]];
        if (!detail::is_fixed(g)) continue;
        GeneratorSlot s{g, {}, std::nullopt};
        for (std::size_t k = 0; k < h.size(); ++k) {
            const GeneratorLabel& x = h.labels()[k];
            if (k == gens[slot] || !detail::is_fixed(x)) continue;
            std::vector<Vector> cols;
            for (std::size_t o = 0; o < gens.size(); ++o) cols.push_back(q.column(o == slot ? k : gens[o]));
            if (Subspace::span(q.rows(), cols).dim() == gens.size()) s.alternatives.push_back(x);
        }
        if (!s.alternatives.empty()) out.push_back(std::move(s));
    }
    return out;
}

inline PipelineResult run(const Scenario& sc) {
    validate(sc);
    PipelineResult res;
    res.scenario = sc;
    Report& rep = res.report;
    rep.scenario = sc.name;
    const int n = sc.base_dim;

    for (const auto& [s, e] : sc.samples)
        res.levels.emplace(s, detail::at_stage(level_name(s), [&] { return CircleBundle(n, e, s); }));

    // Cobordisms between consecutive samples.
    std::vector<Rational> samples;
    for (const auto& [s, e] : sc.samples) samples.push_back(s);
    for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
        const Rational a = samples[k], b = samples[k + 1];
        const std::string name = cobordism_name(a, b);
        const CircleBundle& below = res.levels.at(a);
        const CircleBundle& above = res.levels.at(b);
        res.cobordisms.push_back(detail::at_stage(name, [&] {
            if (auto c = sc.critical_in(a, b)) return elementary_cobordism(a, b, c->lambda, c->image, below, above, sc.lifts);
            return product_cobordism(a, b, below, above);
        }));
    }

    std::vector<const Cobordism*> low, high;
    for (const auto& c : res.cobordisms) (c.b <= sc.split ? low : high).push_back(&c);
    const std::string lower_name = interval_name("union", sc.lo, sc.split);
    const std::string upper_name = interval_name("union", sc.split, sc.hi);
    res.lower = detail::union_of(lower_name, low, res.levels, sc.lifts);
    res.upper = detail::union_of(upper_name, high, res.levels, sc.lifts);

    const Rational total = sc.lo + sc.hi;
    if (sc.symmetric && sc.split == sc.mirror(sc.split))
        res.upper_by_symmetry = detail::at_stage("symmetry", [&] { return apply_index_symmetry(res.lower, n, total); });

    // The closed manifold: both unions glued along the split level and along
    // the two ends through the gluing map.
    {
        const CircleBundle& end = res.levels.at(sc.lo);
        const CircleBundle& mid = res.levels.at(sc.split);
        const Relabel tau = gluing_relabel(sc.gluing, sc.lo, sc.hi);
        MVStageInput in;
        in.name = "W";
        in.inter = [&end, &mid](int d) {
            if (d < 0) return LabeledSpace(d, {});
            return disjoint_union(bundle_homology(end, d), bundle_homology(mid, d));
        };
        in.a = degrees_of(res.lower);
        in.a_prime = degrees_of(res.upper);
        in.i = detail::identity_on;
        in.j = [tau](const LabeledSpace& s, int) {
            LabelMap m;
            for (const auto& l : s.labels()) {
                auto [sign, img] = tau(l);
                m.emplace(l, Combination(img, sign));
            }
            return m;
        };
        res.w = detail::at_stage("W", [&] { return mv_stage(in, sc.lifts); });
        std::vector<Relation> ledger = res.lower.ledger;
        ledger.insert(ledger.end(), res.upper.ledger.begin(), res.upper.ledger.end());
        ledger.insert(ledger.end(), res.w.ledger.begin(), res.w.ledger.end());
        rep.ledger = ledger;
    }

    // Every declared lift must belong to a stage that was actually solved.
    {
        std::vector<std::string> known{"W", lower_name, upper_name};
        for (const auto& c : res.cobordisms) {
            known.push_back(c.name() + "/attach1");
            known.push_back(c.name() + "/attach2");
        }
        for (const auto& s : res.lower.audits) known.push_back(s.stage);
        for (const auto& s : res.upper.audits) known.push_back(s.stage);
        for (const auto& [stage, lifts] : sc.lifts)
            if (std::find(known.begin(), known.end(), stage) == known.end())
                throw stage_error(stage, "lifts declared for a stage the scenario never solves");
    }

    // W's relations rewritten through the unions' relations.
    {
        const std::vector<std::pair<Rational, const Cobordism*>> lower_ends{{sc.lo, low.front()}, {sc.split, low.back()}};
        const std::vector<std::pair<Rational, const Cobordism*>> upper_ends{{sc.split, high.front()}, {sc.hi, high.back()}};
        for (const Relation& r : res.w.ledger) {
            if (r.degree < 1) continue;
            Relation out = r;
            out.stage = "W (resolved)";
            out.lhs = detail::resolve(r.lhs, lower_ends, r.degree, res.lower[r.degree]);
            out.rhs = detail::resolve(r.rhs, upper_ends, r.degree, res.upper[r.degree]);
            rep.resolved.push_back(out);
        }
    }

    // Interchangeable generator slots, each with the relation that links them.
    rep.slots = generator_slots(res.w[2]);
    for (auto& slot : rep.slots) {
        for (const Relation& r : rep.resolved) {
            const Combination diff = r.lhs - r.rhs;
            if (r.degree != 2 || !diff.terms().count(slot.chosen)) continue;
            bool all = true;
            for (const auto& alt : slot.alternatives) all = all && diff.terms().count(alt) > 0;
            if (!all) continue;
            Combination fixed, rest;
            for (const auto& [l, k] : diff.terms()) (detail::is_fixed(l) ? fixed : rest) += Combination(l, k);
            const Rational sign = fixed.terms().begin()->second < 0 ? -1 : 1;
            slot.relation = Relation{"W", 2, sign * fixed, -sign * rest, {}, false};
            break;
        }
    }

    // Tables.
    for (const auto& [s, p] : res.levels) {
        const CircleBundle bundle = p;
        rep.tables.push_back(detail::table_of(level_name(s), [bundle](int d) { return bundle_homology(bundle, d); }));
    }
    for (const auto& c : res.cobordisms) rep.tables.push_back(detail::table_of(c.name(), degrees_of(c.homology)));
    rep.tables.push_back(detail::table_of(res.lower.name, degrees_of(res.lower)));
    rep.tables.push_back(detail::table_of(res.upper.name, degrees_of(res.upper)));
    rep.tables.push_back(detail::table_of("W", degrees_of(res.w)));

    // Betti numbers. Every critical set here is a torus.
    const std::vector<long> fixed_chi(sc.criticals.size(), 0);
    rep.euler = euler_and_duality(static_cast<long>(res.w[0].rank()), static_cast<long>(res.w[1].rank()),
                                  static_cast<long>(res.w[2].rank()), fixed_chi);
    rep.kaehler = kaehler_obstruction(rep.euler.betti[1]);

    // First Chern class on the H_2 generators.
    C1Context ctx;
    for (const auto& c : res.cobordisms)
        if (c.datum) ctx.fixed.push_back(*c.datum);
    ctx.clutching = detail::at_stage("c1", [&] { return clutching_spec(sc.gluing, sc.hi - sc.lo, sc.twists); });
    rep.c1 = detail::at_stage("c1", [&] { return c1_table(res.w[2].generators(), ctx); });

    // Audits.
    auto add = [&rep](std::string name, bool pass, std::string detail = {}, bool audit = true) {
        rep.checks.push_back({std::move(name), pass, std::move(detail), audit});
    };
    {
        std::map<std::string, bool> exact;
        auto note = [&exact](const std::vector<MVAudit>& audits) {
            for (const auto& a : audits) {
                auto [it, fresh] = exact.emplace(a.stage, true);
                it->second = it->second && a.exact;
            }
        };
        for (const auto& c : res.cobordisms) note(c.homology.audits);
        note(res.lower.audits);
        note(res.upper.audits);
        note(res.w.audits);
        for (const auto& [stage, ok] : exact) add("mv-exactness:" + stage, ok);
    }
    for (const auto& c : res.cobordisms) add("projection:" + c.name(), projection_audit(c.homology.ledger, n));
    add("projection-iso:" + lower_name + ":H1", projection_is_isomorphism(res.lower[1], n), "informational", false);
    add("projection-iso:" + upper_name + ":H1", projection_is_isomorphism(res.upper[1], n), "informational", false);
    if (res.upper_by_symmetry) {
        bool same = true;
        for (int d = 0; d <= 2; ++d) same = same && same_presentation((*res.upper_by_symmetry)[d], res.upper[d]);
        add("symmetry:" + upper_name, same, "direct recomputation vs reflected " + lower_name);
        std::size_t failed = 0;
        for (const Relation& r : res.upper_by_symmetry->ledger)
            if (r.degree >= 0 && r.degree <= 2 && !relation_holds(r, res.upper[r.degree])) ++failed;
        add("symmetry-ledger:" + upper_name, failed == 0, std::to_string(failed) + " reflected relations fail");
    }
    {
        bool ok = true;
        std::string why;
        try {
            std::vector<GeneratorLabel> surviving;
            for (int d = 0; d <= 2; ++d)
                for (const auto& g : res.w[d].generators()) surviving.push_back(g);
            std::vector<Relation> top;
            for (const Relation& r : res.w.ledger) top.push_back(r);
            relation_closure(top, surviving);
        } catch (const contradiction_error& e) {
            ok = false;
            why = e.what();
        }
        add("closure:W", ok, why);
    }
    {
        // Every W generator is a label of a union or a lift declared for W.
        bool ok = true;
        for (int d = 0; d <= 2; ++d)
            for (const auto& g : res.w[d].generators()) {
                bool found = res.lower[d].has(g) || res.upper[d].has(g);
                for (const auto& l : res.w.lifts) found = found || l.label == g;
                ok = ok && found;
            }
        add("labels-resolve:W", ok);
    }
    {
        long alt = 0;
        for (std::size_t k = 0; k < 7; ++k) alt += (k % 2 ? -1 : 1) * rep.euler.betti[k];
        add("euler", alt == rep.euler.chi && rep.euler.consistent && rep.euler.all_tori,
            "chi = " + std::to_string(rep.euler.chi));
    }
    {
        bool zero = true;
        for (const auto& row : rep.c1) zero = zero && row.value == 0;
        add("c1-vanishes", zero);
    }

    rep.notes = {
        "Groups are real homology H_*; over R they are identified with the cohomology H^* by duality.",
        "Labels L_ij are sorted with the sign of the sorting permutation absorbed: L42 = -L24.",
        "Lifted base cycles at levels with nonzero Euler class are named by the echelon basis of their span.",
        "c1 rules LevelSplitting and InvariantSphereWeights are standard arguments reconstructed here.",
        "Normal Chern numbers: c1(nu-) = -<e_below, L>, c1(nu+) = <e_above, L>.",
    };
    return res;
}

// ---------------------------------------------------------------------------
// Rendering

/// Entries of the form x = x carry no information once printed.
inline bool is_trivial(const Relation& r) { return r.lhs == r.rhs; }

inline void render_text(std::ostream& os, const Report& r, bool ledger, bool checks = true) {
    os << "scenario " << r.scenario << "\n\n";
    for (const auto& t : r.tables) {
        os << t.stage << "\n";
        for (int d = 0; d <= 2; ++d) {
            os << "  H" << d << " rank " << t.ranks[static_cast<std::size_t>(d)] << ":";
            for (const auto& g : t.generators[static_cast<std::size_t>(d)]) os << " " << display(g);
            os << "\n";
        }
    }
    os << "\nBetti numbers:";
    for (long b : r.euler.betti) os << " " << b;
    os << "\nEuler characteristic " << r.euler.chi << (r.euler.all_tori ? "" : " (non-torus fixed component)") << "\n";
    os << r.kaehler.text << "\n";
    for (const auto& s : r.slots) {
        os << "\nH2(W) slot " << display(s.chosen);
        for (const auto& a : s.alternatives) os << " | " << display(a);
        os << "\n";
        if (s.relation) os << "  " << render(*s.relation) << "\n";
    }
    os << "\nc1 pairings (generator | rule | value)\n";
    for (const auto& row : r.c1)
        os << "  " << display(row.generator) << " | " << rule_name(row.rule) << " | " << row.value
           << (row.reconstructed ? "  (reconstructed rule)" : "") << "\n";
    if (ledger) {
        os << "\nrelations\n";
        for (const auto* list : {&r.ledger, &r.resolved})
            for (const auto& rel : *list)
                if (!is_trivial(rel)) os << "  [" << rel.stage << " H" << rel.degree << "] " << render(rel) << "\n";
    }
    if (checks) os << "\nchecks\n";
    for (const auto& c : checks ? r.checks : std::vector<Check>{})
        os << "  " << (c.pass ? "pass " : c.audit ? "FAIL " : "no   ") << c.name << (c.detail.empty() ? "" : "  " + c.detail) << "\n";
    os << "\nnotes\n";
    for (const auto& n : r.notes) os << "  " << n << "\n";
}

inline std::string machine_relation(const Relation& rel) {
    std::string s = "REL " + rel.stage + " " + render_machine(rel.lhs) + " " + render_machine(rel.rhs);
    if (!rel.modulus.empty()) {
        s += " mod";
        for (const auto& m : rel.modulus) s += " " + render_machine(m);
    }
    return s;
}

inline void render_machine(std::ostream& os, const Report& r, bool ledger, bool checks = true) {
    for (std::size_t k = 0; k < r.euler.betti.size(); ++k) os << "BETTI " << k << " " << r.euler.betti[k] << "\n";
    os << "EULER " << r.euler.chi << "\n";
    os << "KAHLER " << (r.kaehler.obstructed ? "obstructed" : "unknown") << "\n";
    for (const auto& t : r.tables)
        for (int d = 0; d <= 2; ++d)
            for (const auto& g : t.generators[static_cast<std::size_t>(d)])
                os << "GEN " << t.stage << ":H" << d << " " << display(g) << "\n";
    for (const auto& s : r.slots) {
        os << "SLOT W:H2 " << display(s.chosen);
        for (const auto& a : s.alternatives) os << " " << display(a);
        os << "\n";
        if (s.relation) os << machine_relation(*s.relation) << "\n";
    }
    if (ledger) {
        for (const auto& rel : r.ledger)
            if (!is_trivial(rel)) os << machine_relation(rel) << "\n";
        for (const auto& rel : r.resolved) {
            if (is_trivial(rel)) continue;
            Relation copy = rel;
            copy.stage = "W/resolved";
            os << machine_relation(copy) << "\n";
        }
    }
    for (const auto& row : r.c1) os << "C1 " << display(row.generator) << " " << rule_name(row.rule) << " " << row.value << "\n";
    for (const auto& c : checks ? r.checks : std::vector<Check>{})
        os << (c.audit ? "CHECK " : "FACT ") << c.name << " " << (c.pass ? "pass" : "fail") << "\n";
}

}  // namespace lexseq
