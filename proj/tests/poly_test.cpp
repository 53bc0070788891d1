#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kohn/gcd.hpp"
#include "kohn/parse.hpp"
#include "kohn/polynomial.hpp"
#include "kohn/print.hpp"
#include "test_util.hpp"

using namespace kohn;
using kohn::test::P;
using kohn::test::ring_zw;
using kohn::test::ring_zwu;

TEST_CASE("gaussian rational field") {
    GaussianRational a(make_rat(1, 2), make_rat(3, 4));
    GaussianRational b(make_rat(-2), make_rat(1));
    CHECK(a + b == GaussianRational(make_rat(-3, 2), make_rat(7, 4)));
    CHECK(a * a.inverse() == GaussianRational(1));
    CHECK((a / b) * b == a);
    CHECK_THROWS_AS(GaussianRational(0).inverse(), std::invalid_argument);
    CHECK(gaussian_str(a) == "(1/2+3/4i)");
    CHECK(gaussian_str(GaussianRational(make_rat(0), make_rat(-2))) == "(0-2i)");
    CHECK(gaussian_str(GaussianRational(make_rat(-5, 3))) == "-5/3");
}

TEST_CASE("parse: basic forms") {
    auto r = ring_zw();
    Polynomial p = P(r, "z^2");
    CHECK(p.term_count() == 1);
    CHECK(p.coeff({2, 0}) == GaussianRational(1));

    Polynomial f2 = P(r, "w^3 + w*z^5");
    CHECK(f2.term_count() == 2);
    CHECK(f2.coeff({0, 3}) == GaussianRational(1));
    CHECK(f2.coeff({5, 1}) == GaussianRational(1));

    Polynomial c = P(r, "(1/2+3/4i)*z*w");
    CHECK(c.term_count() == 1);
    CHECK(c.coeff({1, 1}) == GaussianRational(make_rat(1, 2), make_rat(3, 4)));
}

TEST_CASE("parse: errors carry positions") {
    auto r = ring_zw();
    CHECK_THROWS_AS(P(r, "z^2 +"), ParseError);
    CHECK_THROWS_AS(P(r, "x + 1"), ParseError);  // unknown variable
    CHECK_THROWS_AS(P(r, "1/0"), ParseError);    // malformed rational
    CHECK_THROWS_AS(P(r, "z z"), ParseError);
    CHECK_THROWS_AS(P(r, ""), ParseError);
    try {
        P(r, "z + q^2");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.pos == 4);
    }
}

TEST_CASE("parse/print round trip on canonical forms") {
    auto r2 = ring_zw();
    auto r3 = ring_zwu();
    kohn::test::Rng rng(42);
    for (int i = 0; i < 200; ++i) {
        const RingPtr& r = (i % 2 == 0) ? r2 : r3;
        Polynomial p = kohn::test::random_poly(r, rng);
        std::string s = to_string(p);
        Polynomial q = parse_poly(s, r);
        CAPTURE(s);
        CHECK(p == q);
        CHECK(to_string(q) == s);
    }
    CHECK(to_string(Polynomial::zero(r2)) == "0");
}

TEST_CASE("arith: worked products and ring laws") {
    auto r = ring_zw();
    CHECK(P(r, "(z+w)*(z-w)") == P(r, "z^2 - w^2"));
    Polynomial p = P(r, "w^3 + w*z^5");
    CHECK((p + p.scaled(GaussianRational(-1))).is_zero());
    CHECK(P(r, "1") * p == p);

    auto other = make_ring({"a", "b"});
    CHECK_THROWS_AS(p + Polynomial::variable(other, 0), std::invalid_argument);

    kohn::test::Rng rng(7);
    auto r3 = kohn::test::ring_zwu();
    for (int i = 0; i < 60; ++i) {
        const RingPtr& ring = (i % 3 == 2) ? r3 : r;
        Polynomial a = kohn::test::random_poly(ring, rng);
        Polynomial b = kohn::test::random_poly(ring, rng);
        Polynomial c = kohn::test::random_poly(ring, rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * b == b * a);
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a * b) * c == a * (b * c));
    }
}

TEST_CASE("derivatives: power rule and Leibniz") {
    auto r = ring_zw();
    CHECK(P(r, "w^3 + w*z^5").derivative(1) == P(r, "3*w^2 + z^5"));
    CHECK(P(r, "z^2").derivative(0) == P(r, "2*z"));
    CHECK(P(r, "w").derivative(0).is_zero());

    kohn::test::Rng rng(11);
    for (int i = 0; i < 40; ++i) {
        Polynomial p = kohn::test::random_poly(r, rng);
        Polynomial q = kohn::test::random_poly(r, rng);
        for (size_t v = 0; v < 2; ++v)
            CHECK((p * q).derivative(v) == p.derivative(v) * q + q.derivative(v) * p);
    }
}

TEST_CASE("jacobian determinants") {
    auto r = ring_zw();
    std::vector<size_t> vars{0, 1};

    std::vector<Polynomial> fs{P(r, "z^2"), P(r, "w^3 + w*z^5")};
    CHECK(jacobian_det(fs, vars) == P(r, "2*z*(3*w^2 + z^5)"));

    std::vector<Polynomial> coords{P(r, "z"), P(r, "w")};
    CHECK(jacobian_det(coords, vars) == P(r, "1"));

    std::vector<Polynomial> powers{P(r, "z^2"), P(r, "w^3")};
    CHECK(jacobian_det(powers, vars) == P(r, "6*z*w^2"));

    // alternating
    std::vector<Polynomial> swapped{fs[1], fs[0]};
    CHECK(jacobian_det(swapped, vars) == -jacobian_det(fs, vars));
    std::vector<Polynomial> repeated{fs[0], fs[0]};
    CHECK(jacobian_det(repeated, vars).is_zero());

    CHECK_THROWS_AS(jacobian_det(std::vector<Polynomial>{fs[0]}, vars), std::invalid_argument);
}

TEST_CASE("vanishing order") {
    auto r = ring_zw();
    CHECK(P(r, "6*z*w^2 + 2*z^6").vanishing_order() == 3u);
    CHECK(P(r, "1").vanishing_order() == 0u);
    CHECK_FALSE(Polynomial::zero(r).vanishing_order().has_value());

    kohn::test::Rng rng(13);
    for (int i = 0; i < 40; ++i) {
        Polynomial p = kohn::test::random_nonzero_poly(r, rng);
        Polynomial q = kohn::test::random_nonzero_poly(r, rng);
        CHECK(*(p * q).vanishing_order() == *p.vanishing_order() + *q.vanishing_order());
    }
}

TEST_CASE("gcd: worked examples") {
    auto r = ring_zw();
    CHECK(poly_gcd(P(r, "z^2*w"), P(r, "z*w^2")) == P(r, "z*w"));
    CHECK(poly_gcd(P(r, "3*z^2 - 3*w^2"), Polynomial::zero(r)) == P(r, "z^2 - w^2"));
    CHECK(poly_gcd(P(r, "z^2 - w^2"), P(r, "z - w")) == P(r, "z - w"));
    CHECK_THROWS_AS(poly_gcd(Polynomial::zero(r), Polynomial::zero(r)), std::invalid_argument);
}

TEST_CASE("gcd divides both inputs exactly") {
    auto r = ring_zw();
    kohn::test::Rng rng(17);
    for (int i = 0; i < 30; ++i) {
        Polynomial a = kohn::test::random_nonzero_poly(r, rng, 3, 3);
        Polynomial b = kohn::test::random_nonzero_poly(r, rng, 3, 3);
        Polynomial c = kohn::test::random_nonzero_poly(r, rng, 2, 2);
        Polynomial g = poly_gcd(a * c, b * c);
        CHECK(divides_exactly(g, a * c));
        CHECK(divides_exactly(g, b * c));
        CHECK(divides_exactly(c.monic(), g));  // common factor survives
    }
}

TEST_CASE("squarefree part") {
    auto r = ring_zw();
    auto [sf1, m1] = squarefree_part(P(r, "48*z^3"));
    CHECK(sf1 == P(r, "z"));
    CHECK(m1 == 3u);

    auto [sf2, m2] = squarefree_part(P(r, "z^2*w^4"));
    CHECK(sf2 == P(r, "z*w"));
    CHECK(m2 == 4u);

    Polynomial g = P(r, "z*(3*w^2 + z^5)");
    auto [sf3, m3] = squarefree_part(g);
    CHECK(sf3 == g.monic());
    CHECK(m3 == 1u);

    kohn::test::Rng rng(23);
    for (int i = 0; i < 15; ++i) {
        Polynomial p = kohn::test::random_nonzero_poly(r, rng, 3, 2, false);
        if (p.is_constant()) continue;
        auto base = squarefree_part(p);
        for (unsigned k = 2; k <= 3; ++k) {
            auto powed = squarefree_part(p.pow(k));
            CHECK(powed.part == base.part);
        }
        // square-free check: joint gcd with the partials is constant
        Polynomial g = base.part;
        for (size_t v = 0; v < 2; ++v) {
            Polynomial d = base.part.derivative(v);
            if (!d.is_zero()) g = poly_gcd(g, d);
        }
        CHECK(g.is_constant());
    }
}

TEST_CASE("linear coordinate change") {
    auto r = ring_zw();
    GMat id{{GaussianRational(1), GaussianRational(0)}, {GaussianRational(0), GaussianRational(1)}};
    GMat swap{{GaussianRational(0), GaussianRational(1)}, {GaussianRational(1), GaussianRational(0)}};
    GMat shear{{GaussianRational(1), GaussianRational(1)}, {GaussianRational(0), GaussianRational(1)}};

    CHECK(linear_coordinate_change(P(r, "z"), id) == P(r, "z"));
    CHECK(linear_coordinate_change(P(r, "z"), swap) == P(r, "w"));
    CHECK(linear_coordinate_change(P(r, "z*w"), shear) == P(r, "z*w + w^2"));

    GMat singular{{GaussianRational(1), GaussianRational(1)}, {GaussianRational(2), GaussianRational(2)}};
    CHECK_THROWS_AS(linear_coordinate_change(P(r, "z"), singular), std::invalid_argument);

    kohn::test::Rng rng(29);
    for (int i = 0; i < 20; ++i) {
        GMat a(2, GVec(2));
        do {
            for (auto& row : a)
                for (auto& x : row) x = GaussianRational(kohn::test::random_rat(rng));
        } while (gmat_det(a).is_zero());
        auto inv = gmat_inverse(a);
        REQUIRE(inv.has_value());
        Polynomial p = kohn::test::random_poly(r, rng, 3, 3);
        Polynomial back = linear_coordinate_change(linear_coordinate_change(p, a), *inv);
        CHECK(back == p);
        CHECK(linear_coordinate_change(p, a).total_degree() == p.total_degree());
    }
}
