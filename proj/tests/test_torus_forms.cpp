#include "catch_amalgamated.hpp"
#include "support.hpp"

using namespace lexseq;
using testing_support::inversion_sign;

TEST_CASE("wedge of basis forms") {
    CHECK(wedge(sigma(4, {1}), sigma(4, {2})) == sigma(4, {1, 2}));
    CHECK(wedge(sigma(4, {2}), sigma(4, {1})) == -sigma(4, {1, 2}));
    CHECK(sigma(4, {4, 2}) == -sigma(4, {2, 4}));
    CHECK(wedge(sigma(4, {1}), sigma(4, {1})).is_zero());
}

TEST_CASE("square of s31 + s42 against an inversion-count expansion") {
    const Form e = parse_form("s31 + s42", 4);
    const Form sq = wedge(e, e);
    // Expand by bilinearity: only the cross terms s31^s42 and s42^s31 survive,
    // each equal to sign(3,1,4,2) s1234.
    const int s = inversion_sign({3, 1, 4, 2});
    CHECK(sq == sigma(4, {1, 2, 3, 4}, 2 * s));
    CHECK_FALSE(sq.is_zero());
}

TEST_CASE("pairings") {
    CHECK(pair(sigma(4, {1, 3}), torus(4, {1, 3})) == 1);
    CHECK(pair(parse_form("s31 + s42", 4), parse_cycle("L13 - L24", 4)) == 0);
    CHECK(pair(sigma(4, {4, 2}), torus(4, {2, 4})) == -1);
    CHECK_THROWS_AS(pair(sigma(4, {1}), torus(4, {1, 2})), degree_error);
}

TEST_CASE("annihilators") {
    const Subspace a = annihilator(4, 2, {parse_form("s42", 4)});
    CHECK(a.dim() == 5);
    for (const char* t : {"L12", "L13", "L14", "L23", "L34"}) CHECK(a.contains(parse_cycle(t, 4).coordinates()));
    CHECK_FALSE(a.contains(parse_cycle("L24", 4).coordinates()));

    const Subspace b = annihilator(4, 1, {sigma(4, {2}), sigma(4, {4})});
    CHECK(b == Subspace::span(4, {parse_cycle("L1", 4).coordinates(), parse_cycle("L3", 4).coordinates()}));

    CHECK(annihilator(4, 2, {}).dim() == 6);
}

TEST_CASE("wedge map matrices") {
    CHECK(wedge_map_matrix(Form(4, 2), 1).is_zero());
    const RationalMatrix m = wedge_map_matrix(parse_form("-s42", 4), 1);
    CHECK(rank(m) == 2);
    CHECK(kernel_basis(m) == Subspace::span(4, {sigma(4, {2}).coordinates(), sigma(4, {4}).coordinates()}));
    const RationalMatrix m2 = wedge_map_matrix(parse_form("-s31 - s42", 4), 1);
    CHECK(rank(m2) == 4);
    CHECK(kernel_basis(m2).dim() == 0);
}

TEST_CASE("dimensions of exterior powers") {
    for (int n = 1; n <= 6; ++n)
        for (int k = 0; k <= n; ++k) CHECK(static_cast<long>(binomial(n, k)) == testing_support::choose(n, k));
}

TEST_CASE("annihilator dimension is the complement of the pairing rank") {
    for (int trial = 0; trial < 50; ++trial) {
        const int k = static_cast<int>(testing_support::uniform(0, 4));
        std::vector<Form> forms;
        std::vector<Vector> rows;
        for (long f = testing_support::uniform(0, 3); f > 0; --f) {
            forms.push_back(testing_support::random_form(4, k, -1, 1));
            rows.push_back(forms.back().coordinates());
        }
        const std::size_t r = rank(RationalMatrix::from_rows(rows, binomial(4, k)));
        CHECK(annihilator(4, k, forms).dim() == binomial(4, k) - r);
    }
}

TEST_CASE("form text round trip") {
    const Form f = parse_form("-s31 - s42", 4);
    CHECK(f == sigma(4, {1, 3}) + sigma(4, {2, 4}));
    CHECK(parse_form(to_string(f), 4) == f);
    CHECK(parse_form("1/2 s12 + 0.25 s34", 4) == sigma(4, {1, 2}, Rational(1, 2)) + sigma(4, {3, 4}, Rational(1, 4)));
    CHECK(to_string(parse_cycle("L13 - L24", 4)) == "L13 - L24");
    CHECK_THROWS_AS(parse_form("s12 + s3", 4), parse_error);
    CHECK_THROWS_AS(parse_form("s15", 4), dimension_error);
    CHECK_THROWS_AS(parse_form("1e3 s12", 4), parse_error);
}

TEST_CASE("Poincare dual of a basis torus") {
    const Form d = poincare_dual(torus(4, {1, 3}));
    CHECK(d.degree() == 2);
    CHECK((d == sigma(4, {2, 4}) || d == -sigma(4, {2, 4})));
}
