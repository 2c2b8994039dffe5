#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "berkdil/projline.hpp"

#include "rng.hpp"

using namespace berkdil;

namespace {

ProjPoint fin(unsigned long ell, long n) { return ProjPoint::finite(Scalar(ell, ExactQ(n))); }

ProjPoint finq(unsigned long ell, const char* s) {
    return ProjPoint::finite(Scalar(ell, *ExactQ::parse(s)));
}

Mobius ints(unsigned long ell, long a, long b, long c, long d) {
    return {Scalar(ell, ExactQ(a)), Scalar(ell, ExactQ(b)), Scalar(ell, ExactQ(c)),
            Scalar(ell, ExactQ(d))};
}

} // namespace

TEST_CASE("application and infinity conventions") {
    Mobius m = ints(3, 0, 81, 1, 0); // z -> 81/z
    CHECK(proj_point_equal(m.apply(fin(3, 3)), fin(3, 27), 3));
    CHECK(proj_point_equal(m.apply(fin(3, 12)), finq(3, "27/4"), 3));
    CHECK(m.apply(fin(3, 0)).is_infinity());
    CHECK(proj_point_equal(m.apply(ProjPoint::infinity()), fin(3, 0), 3));

    Mobius aff = Mobius::affine(3, ExactQ(2), ExactQ(5));
    CHECK(aff.apply(ProjPoint::infinity()).is_infinity());
    CHECK(proj_point_equal(aff.apply(fin(3, 1)), fin(3, 7), 3));
}

TEST_CASE("involutions fixing a pair of points") {
    Scalar m1(3, ExactQ(-1));
    // the transformation exchanged with the counterexample set downstream
    Mobius s = order_p_fixing(fin(3, -9), fin(3, 9), 2, m1);
    CHECK(proj_equal(s, ints(3, 0, 81, 1, 0)));
    CHECK(proj_point_equal(s.apply(fin(3, -9)), fin(3, -9), 3));
    CHECK(proj_point_equal(s.apply(fin(3, 9)), fin(3, 9), 3));
    CHECK(proj_equal(s.compose(s), Mobius::identity(3)));

    // fixed point at infinity: reflection z -> 2a - z
    Mobius t = order_p_fixing(fin(3, 1), ProjPoint::infinity(), 2, m1);
    CHECK(proj_equal(t, ints(3, -1, 2, 0, 1)));
    CHECK(t.apply(ProjPoint::infinity()).is_infinity());
    CHECK(proj_point_equal(t.apply(fin(3, 0)), fin(3, 2), 3));

    CHECK_THROWS_AS(order_p_fixing(fin(3, 4), fin(3, 4), 2, m1), DegenerateFixedPoints);
    CHECK_THROWS_AS(
        order_p_fixing(ProjPoint::infinity(), ProjPoint::infinity(), 2, m1),
        DegenerateFixedPoints);
}

TEST_CASE("odd order via an approximate root of unity") {
    Scalar zeta = hensel_root_of_unity(3, 7, 24);
    Mobius s = order_p_fixing(fin(7, 1), fin(7, 50), 3, zeta);
    Mobius cube = s.pow(3);
    CHECK(proj_consistent(cube, Mobius::identity(7)));
    CHECK(!proj_consistent(s, Mobius::identity(7)));
    // fixed points stay put
    auto img = s.apply(fin(7, 50));
    REQUIRE(!img.is_infinity());
    CHECK((img.value() - Scalar(7, ExactQ(50))).zeroness() != Zeroness::nonzero);

    // powers of the multiplier give projectively equal generators of <s>
    Mobius s2 = order_p_fixing(fin(7, 1), fin(7, 50), 3, zeta * zeta);
    CHECK(proj_consistent(s2, s.pow(2)));
}

TEST_CASE("composition is matrix product; inverse is adjugate") {
    testing::Rng rng(77001);
    for (int t = 0; t < 200; ++t) {
        unsigned long ell = (t % 2 == 0) ? 3 : 5;
        Mobius m = ints(ell, rng.uniform(-9, 9), rng.uniform(-9, 9), rng.uniform(-9, 9),
                        rng.uniform(-9, 9));
        if (m.det().zeroness() == Zeroness::zero) continue;
        Mobius n = ints(ell, rng.uniform(-9, 9), rng.uniform(-9, 9), rng.uniform(-9, 9),
                        rng.uniform(-9, 9));
        if (n.det().zeroness() == Zeroness::zero) continue;
        ProjPoint z = rng.flip() ? fin(ell, rng.uniform(-20, 20)) : ProjPoint::infinity();
        CHECK(proj_point_equal(m.compose(n).apply(z), m.apply(n.apply(z)), ell));
        CHECK(proj_equal(m.compose(m.inverse()), Mobius::identity(ell)));
    }
}
