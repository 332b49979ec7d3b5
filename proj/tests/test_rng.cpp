#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hdcam/rng.hpp"

using namespace hdcam;

TEST_CASE("philox4x32-10 known-answer vectors") {
    // Reference vectors from the Random123 distribution (kat_vectors).
    const auto zero = Philox4x32::round10({0, 0, 0, 0}, 0, 0);
    CHECK(zero == Philox4x32::block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});

    const auto ones = Philox4x32::round10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                          0xffffffffu, 0xffffffffu);
    CHECK(ones == Philox4x32::block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});

    const auto pi = Philox4x32::round10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                        0xa4093822u, 0x299f31d0u);
    CHECK(pi == Philox4x32::block{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are reproducible and distinct") {
    CounterRng a(123, 1, 45, 6);
    CounterRng b(123, 1, 45, 6);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    CounterRng c(123, 1, 45, 7);   // different tag
    CounterRng d(123, 1, 46, 6);   // different index
    CounterRng e(123, 2, 45, 6);   // different domain
    CounterRng f(124, 1, 45, 6);   // different seed
    CounterRng base(123, 1, 45, 6);
    const std::uint64_t first = base.next_u64();
    CHECK(c.next_u64() != first);
    CHECK(d.next_u64() != first);
    CHECK(e.next_u64() != first);
    CHECK(f.next_u64() != first);
}

TEST_CASE("uniform and normal draws have sane moments") {
    CounterRng rng(2024, 9, 0, 0);
    const int n = 200000;
    double sum_u = 0, sum_z = 0, sum_z2 = 0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.next_u01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum_u += u;
        const double z = rng.next_normal();
        sum_z += z;
        sum_z2 += z * z;
    }
    CHECK(sum_u / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(sum_z / n == doctest::Approx(0.0).epsilon(0.02));
    CHECK(sum_z2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("lognormal draws are positive with unit median") {
    CounterRng rng(7, 9, 1, 0);
    const int n = 100000;
    int below = 0;
    for (int i = 0; i < n; ++i) {
        const double g = rng.next_lognormal(0.1);
        CHECK(g > 0.0);
        if (g < 1.0) ++below;
    }
    CHECK(static_cast<double>(below) / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("base draws cover all four symbols") {
    CounterRng rng(11, 9, 2, 0);
    int counts[4] = {0, 0, 0, 0};
    for (int i = 0; i < 40000; ++i) ++counts[rng.next_base()];
    for (int c : counts) CHECK(c == doctest::Approx(10000).epsilon(0.05));
}
