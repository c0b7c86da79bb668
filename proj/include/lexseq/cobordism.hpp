#pragma once

// Elementary cobordisms crossing one critical torus Z^λ with π̂(Z^λ) = L_ij.
//
// Up to homotopy the cobordism is the level below with the disc bundle over Z
// attached along S(ν-), or Z with the level above attached along S(ν+). Both
// decompositions are solved as Mayer–Vietoris problems and then reconciled
// into one presentation carrying every label of both.

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lexseq/errors.hpp"
#include "lexseq/exact_linalg.hpp"
#include "lexseq/gysin.hpp"
#include "lexseq/labels.hpp"
#include "lexseq/mayer_vietoris.hpp"
#include "lexseq/torus_forms.hpp"

namespace lexseq {

struct FixedTorusDatum {
    Rational lambda;
    Indices image;  // sorted pair (i, j)
    long c1_minus = 0;
    long c1_plus = 0;
};

inline long to_long(const Rational& q) {
    if (!is_integer(q)) throw inconsistent_scenario("non-integral Chern number " + format_rational(q));
    return boost::multiprecision::numerator(q).convert_to<long>();
}

struct NormalChern {
    long minus = 0;
    long plus = 0;
};

/// Chern numbers of ν∓ over Z^λ. The negative normal bundle is the level set
/// below, pulled back to L_ij and seen from the critical torus, which reverses
/// its orientation; the positive one is the level set above as is.
inline NormalChern normal_chern(const Form& below, const Form& above, const Indices& image) {
    if (below.n() != above.n()) throw dimension_error("Euler classes on different tori");
    const Cycle l = Cycle::basis(below.n(), image);
    const Form eb = below.is_zero() ? Form(below.n(), 2) : below;
    const Form ea = above.is_zero() ? Form(above.n(), 2) : above;
    NormalChern c{to_long(-pair(eb, l)), to_long(pair(ea, l))};
    if (c.minus != -c.plus)
        throw inconsistent_scenario("normal bundles over Z with image L" + index_string(image) +
                                    " fail c1(ν-) = -c1(ν+): got (" + std::to_string(c.minus) + ", " +
                                    std::to_string(c.plus) + ")");
    return c;
}

/// Homology of S(ν±) over Z^λ: a circle bundle over the 2-torus with Chern
/// number c1, its base coordinates named after the image indices.
inline LabeledSpace sphere_bundle_homology(long c1, int d, Side side, const Rational& lambda = 0,
                                           const Indices& image = {1, 2}) {
    if (image.size() != 2) throw dimension_error("critical tori are two-dimensional");
    const CircleBundle s(2, Form::basis(2, {1, 2}, Rational(c1)), 0);
    const LabeledSpace base = bundle_homology(s, d);
    auto name = [&](const Indices& k) {
        Indices out;
        for (int i : k) out.push_back(image[static_cast<std::size_t>(i - 1)]);
        return out;
    };
    return relabel(base, [&](const GeneratorLabel& l) -> std::pair<int, GeneratorLabel> {
        if (auto* t = std::get_if<LevelTorus>(&l)) return {1, SphereSection{name(t->indices), lambda, side}};
        if (auto* f = std::get_if<FiberClass>(&l)) return {1, SphereFiber{name(f->indices), lambda, side}};
        if (std::holds_alternative<Point>(l)) return {1, Point{Site::sphere, lambda, side}};
        throw wrong_rule("unexpected label in sphere-bundle homology: " + display(l));
    });
}

inline LabeledSpace fixed_torus_homology(const FixedTorusDatum& z, int d) {
    if (d < 0 || d > 2) return LabeledSpace(d, {});
    if (d == 0) return LabeledSpace(0, {Point{Site::fixed, z.lambda, Side::minus}});
    std::vector<GeneratorLabel> labels;
    for (const Indices& k : basis_tuples(2, d)) {
        Indices idx;
        for (int i : k) idx.push_back(z.image[static_cast<std::size_t>(i - 1)]);
        labels.push_back(FixedTorus{idx, z.lambda});
    }
    return LabeledSpace(d, std::move(labels));
}

/// Writes base cycle `target` through the lift labels of a level presentation.
inline Combination lift_of(const Cycle& target, const LabeledSpace& level) {
    std::vector<std::size_t> cols;
    std::vector<Vector> vecs;
    for (std::size_t k = 0; k < level.size(); ++k) {
        const auto& l = level.labels()[k];
        if (auto* t = std::get_if<LevelTorus>(&l)) {
            cols.push_back(k);
            vecs.push_back(Cycle::basis(target.n(), t->indices).coordinates());
        } else if (auto* c = std::get_if<CombinationLift>(&l)) {
            cols.push_back(k);
            vecs.push_back(c->cycle.coordinates());
        }
    }
    const std::size_t rows = binomial(target.n(), target.degree());
    auto x = solve(RationalMatrix::from_columns(vecs, rows), target.coordinates());
    if (!x) throw inconsistent_model("base cycle " + to_string(target) + " does not lift to the level set");
    Combination out;
    for (std::size_t k = 0; k < cols.size(); ++k) out.add(level.labels()[cols[k]], (*x)[k]);
    return out;
}

/// S(ν±) -> level set: sections onto level lifts, fibers onto fiber classes.
inline LabelMap sphere_to_level(const LabeledSpace& sphere, const LabeledSpace& level, const Rational& s, int n) {
    LabelMap m;
    for (const auto& l : sphere.labels()) {
        if (auto* z = std::get_if<SphereSection>(&l)) {
            m.emplace(l, lift_of(Cycle::basis(n, z->indices), level));
        } else if (auto* f = std::get_if<SphereFiber>(&l)) {
            m.emplace(l, Combination(FiberClass{f->indices, s}));
        } else if (std::holds_alternative<Point>(l)) {
            m.emplace(l, Combination(Point{Site::level, s, Side::minus}));
        }
    }
    return m;
}

/// S(ν±) -> Z: sections onto subtori of Z, fibers bound discs.
inline LabelMap sphere_to_fixed(const LabeledSpace& sphere, const Rational& lambda) {
    LabelMap m;
    for (const auto& l : sphere.labels()) {
        if (auto* z = std::get_if<SphereSection>(&l))
            m.emplace(l, Combination(FixedTorus{z->indices, lambda}));
        else if (std::holds_alternative<Point>(l))
            m.emplace(l, Combination(Point{Site::fixed, lambda, Side::minus}));
    }
    return m;
}

/// Classes of the presentation that project to zero in H_d(T^n), as
/// representatives independent modulo its relations.
inline std::vector<Combination> projection_kernel(const LabeledSpace& p, int n) {
    const Subspace ker = kernel_basis(projection_matrix(p, n));
    std::vector<Combination> out;
    Subspace acc = p.relations();
    for (const Vector& v : ker.basis()) {
        if (acc.contains(v)) continue;
        acc = acc + Subspace::span(p.size(), {v});
        out.push_back(p.combination(v));
    }
    return out;
}

struct Reconciliation {
    LabeledSpace combined;
    LabelMap phi;  // second presentation -> first
    std::vector<Relation> ledger;
    std::vector<Combination> modulus;
};

/// Merges two presentations of one group: each label of `second` missing from
/// `first` is matched to the same kind of label at level `a` when one exists,
/// otherwise to a solution of the base-projection equation.
inline Reconciliation reconcile(const std::string& stage, const LabeledSpace& first, const LabeledSpace& second,
                                const Rational& a, int n) {
    if (first.degree() != second.degree()) throw degree_error(stage + ": presentations of different degree");
    const int d = first.degree();
    Reconciliation rec;
    rec.modulus = projection_kernel(first, n);
    const RationalMatrix proj1 = projection_matrix(first, n);

    for (const auto& y : second.labels()) {
        if (first.has(y)) {
            rec.phi.emplace(y, Combination(y));
            continue;
        }
        std::optional<GeneratorLabel> twin;
        if (auto* t = std::get_if<LevelTorus>(&y)) twin = LevelTorus{t->indices, a};
        if (auto* f = std::get_if<FiberClass>(&y)) twin = FiberClass{f->indices, a};
        if (auto* p = std::get_if<Point>(&y); p && p->site == Site::level) twin = Point{Site::level, a, Side::minus};
        if (twin && first.has(*twin)) {
            rec.phi.emplace(y, Combination(*twin));
            continue;
        }
        auto target = base_projection(y, n, d);
        if (!target) throw inconsistent_model(stage + ": no way to match " + display(y));
        auto x = solve(proj1, target->is_zero() ? zero_vector(proj1.rows()) : target->coordinates());
        if (!x) throw inconsistent_model(stage + ": " + display(y) + " projects outside the first presentation");
        rec.phi.emplace(y, first.combination(*x));
    }

    auto through = [&](const Combination& c) {
        Combination out;
        for (const auto& [l, k] : c.terms()) out += k * rec.phi.at(l);
        return out;
    };

    // φ must carry relations to relations and be an isomorphism on classes.
    for (const Vector& r : second.relations().basis()) {
        const Combination image = through(second.combination(r));
        if (!first.vanishes(image))
            throw inconsistent_model(stage + ": relation " + render(second.combination(r)) +
                                     " = 0 of the second presentation fails in the first");
    }
    if (first.rank() != second.rank())
        throw inconsistent_model(stage + ": presentations have ranks " + std::to_string(first.rank()) + " and " +
                                 std::to_string(second.rank()));
    std::vector<Vector> images = first.relations().basis();
    for (const auto& y : second.labels()) images.push_back(first.coordinates(rec.phi.at(y)));
    if (Subspace::span(first.size(), images).dim() - first.relations().dim() != first.rank())
        throw inconsistent_model(stage + ": matching of presentations is not onto");

    // One presentation holding both label sets.
    std::vector<GeneratorLabel> labels = first.labels();
    for (const auto& y : second.labels())
        if (!first.has(y)) labels.push_back(y);
    LabeledSpace scratch(d, labels);
    std::vector<Vector> rel;
    for (const Vector& v : first.relations().basis()) rel.push_back(scratch.coordinates(first.combination(v)));
    for (const Vector& v : second.relations().basis()) rel.push_back(scratch.coordinates(second.combination(v)));
    for (const auto& y : second.labels()) {
        const Combination& img = rec.phi.at(y);
        if (img == Combination(y)) continue;
        rel.push_back(scratch.coordinates(img - Combination(y)));
        Relation entry{stage, d, img, Combination(y), rec.modulus, false};
        rec.ledger.push_back(std::move(entry));
    }
    rec.combined = LabeledSpace(d, labels, Subspace::span(labels.size(), rel));
    if (rec.combined.rank() != first.rank())
        throw inconsistent_model(stage + ": combined presentation has rank " + std::to_string(rec.combined.rank()) +
                                 ", expected " + std::to_string(first.rank()));
    for (auto& r : rec.ledger) r.retired = rec.combined.vanishes(r.lhs) && rec.combined.vanishes(r.rhs);
    return rec;
}

/// A cobordism between two regular levels, with one presentation per degree
/// that carries the labels of both boundary levels (inclusions are label-identity).
struct Cobordism {
    Rational a, b;
    std::optional<FixedTorusDatum> datum;  // empty for a product cobordism
    CircleBundle below, above;
    StageHomology homology;
    std::optional<StageHomology> attach1, attach2;
    std::array<std::vector<Combination>, 3> modulus;

    std::string name() const { return "cob[" + format_rational(a) + "," + format_rational(b) + "]"; }
    const LabeledSpace& operator[](int d) const { return homology[d]; }
};

inline std::string cobordism_name(const Rational& a, const Rational& b) {
    return "cob[" + format_rational(a) + "," + format_rational(b) + "]";
}

namespace detail {

inline std::function<LabeledSpace(int)> level_degrees(const CircleBundle& p) {
    return [p](int d) { return d < 0 ? LabeledSpace(d, {}) : bundle_homology(p, d); };
}

inline std::function<LabeledSpace(int)> fixed_degrees(const FixedTorusDatum& z) {
    return [z](int d) { return fixed_torus_homology(z, d); };
}

inline std::function<LabeledSpace(int)> sphere_degrees(const FixedTorusDatum& z, Side side) {
    const long c = side == Side::minus ? z.c1_minus : z.c1_plus;
    return [z, side, c](int d) {
        return d < 0 ? LabeledSpace(d, {}) : sphere_bundle_homology(c, d, side, z.lambda, z.image);
    };
}

inline void absorb(StageHomology& out, const Reconciliation& rec, int d) {
    out.ledger.insert(out.ledger.end(), rec.ledger.begin(), rec.ledger.end());
    out.h[static_cast<std::size_t>(d)] = rec.combined;
}

}  // namespace detail

/// The elementary cobordism [a,b] around the critical torus with the given
/// value and image. Declared lifts are looked up under "<name>/attach1" and
/// "<name>/attach2".
inline Cobordism elementary_cobordism(const Rational& a, const Rational& b, const Rational& lambda,
                                      const Indices& image, const CircleBundle& below, const CircleBundle& above,
                                      const LiftTable& lifts) {
    if (!(a < lambda && lambda < b)) throw inconsistent_scenario("critical value outside the cobordism interval");
    const int n = below.n;
    Cobordism cob;
    cob.a = a;
    cob.b = b;
    cob.below = below;
    cob.above = above;
    const NormalChern c = normal_chern(below.euler, above.euler, image);
    const FixedTorusDatum z{lambda, image, c.minus, c.plus};
    cob.datum = z;
    const std::string name = cob.name();

    MVStageInput first;
    first.name = name + "/attach1";
    first.inter = detail::sphere_degrees(z, Side::minus);
    first.a = detail::level_degrees(below);
    first.a_prime = detail::fixed_degrees(z);
    first.i = [&](const LabeledSpace& s, int d) {
        return d < 0 ? LabelMap{} : sphere_to_level(s, bundle_homology(below, d), a, n);
    };
    first.j = [&](const LabeledSpace& s, int) { return sphere_to_fixed(s, lambda); };

    MVStageInput second;
    second.name = name + "/attach2";
    second.inter = detail::sphere_degrees(z, Side::plus);
    second.a = detail::fixed_degrees(z);
    second.a_prime = detail::level_degrees(above);
    second.i = [&](const LabeledSpace& s, int) { return sphere_to_fixed(s, lambda); };
    second.j = [&](const LabeledSpace& s, int d) {
        return d < 0 ? LabelMap{} : sphere_to_level(s, bundle_homology(above, d), b, n);
    };

    cob.attach1 = mv_stage(first, lifts);
    cob.attach2 = mv_stage(second, lifts);
    cob.homology.name = name;
    cob.homology.ledger = cob.attach1->ledger;
    cob.homology.ledger.insert(cob.homology.ledger.end(), cob.attach2->ledger.begin(), cob.attach2->ledger.end());
    cob.homology.lifts = cob.attach1->lifts;
    cob.homology.lifts.insert(cob.homology.lifts.end(), cob.attach2->lifts.begin(), cob.attach2->lifts.end());
    cob.homology.audits = cob.attach1->audits;
    cob.homology.audits.insert(cob.homology.audits.end(), cob.attach2->audits.begin(), cob.attach2->audits.end());
    for (int d = 0; d <= 2; ++d) {
        const Reconciliation rec = reconcile(name, (*cob.attach1)[d], (*cob.attach2)[d], a, n);
        cob.modulus[static_cast<std::size_t>(d)] = rec.modulus;
        detail::absorb(cob.homology, rec, d);
    }
    return cob;
}

/// [a,b] without critical values: both levels are the same bundle.
inline Cobordism product_cobordism(const Rational& a, const Rational& b, const CircleBundle& below,
                                   const CircleBundle& above) {
    if (below.euler != above.euler)
        throw inconsistent_scenario("Euler class changes across " + cobordism_name(a, b) +
                                    " without a critical level");
    Cobordism cob;
    cob.a = a;
    cob.b = b;
    cob.below = below;
    cob.above = above;
    cob.homology.name = cob.name();
    for (int d = 0; d <= 2; ++d) {
        const Reconciliation rec = reconcile(cob.name(), bundle_homology(below, d), bundle_homology(above, d), a, below.n);
        cob.modulus[static_cast<std::size_t>(d)] = rec.modulus;
        detail::absorb(cob.homology, rec, d);
    }
    return cob;
}

/// Every ledger entry relates classes with the same image in H_*(T^n).
inline bool projection_audit(const std::vector<Relation>& ledger, int n) {
    for (const Relation& r : ledger) {
        Cycle lhs(n, r.degree), rhs(n, r.degree);
        bool ok = true;
        auto add = [&](Cycle& acc, const Combination& c) {
            for (const auto& [l, k] : c.terms()) {
                auto p = base_projection(l, n, r.degree);
                if (!p) {
                    ok = false;
                    return;
                }
                if (!p->is_zero()) acc += k * *p;
            }
        };
        add(lhs, r.lhs);
        add(rhs, r.rhs);
        if (ok && lhs != rhs) return false;
    }
    return true;
}

}  // namespace lexseq
